#pragma once

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

#include "qmplab/errors.hpp"

namespace qmplab {

using Complex = std::complex<double>;

// Dense complex matrix with row-major storage. The row-major layout is
// normative for file interchange; entry (i,j) lives at data[i*cols + j].
class ComplexMatrix {
public:
  ComplexMatrix() = default;

  // Zero-filled rows x cols matrix.
  ComplexMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols) {}

  ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<Complex> entries)
      : rows_(rows), cols_(cols), data_(std::move(entries)) {
    if (data_.size() != rows_ * cols_)
      throw DimensionError("ComplexMatrix: entry count does not equal rows*cols");
  }

  static ComplexMatrix identity(std::size_t d);
  static ComplexMatrix diagonal(std::span<const double> values);
  static ComplexMatrix diagonal(std::span<const Complex> values);
  // Row-of-rows constructor, used mostly by tests and small fixtures.
  static ComplexMatrix from_rows(std::initializer_list<std::initializer_list<Complex>> rows);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool is_square() const { return rows_ == cols_; }

  Complex& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const Complex& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::span<const Complex> data() const { return data_; }
  std::span<Complex> data() { return data_; }

  ComplexMatrix& operator+=(const ComplexMatrix& other);
  ComplexMatrix& operator-=(const ComplexMatrix& other);
  ComplexMatrix& operator*=(Complex scale);

private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Complex> data_;
};

ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b);
ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b);
ComplexMatrix operator*(ComplexMatrix a, Complex scale);
ComplexMatrix operator*(Complex scale, ComplexMatrix a);
ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);

// Conjugate transpose.
ComplexMatrix dagger(const ComplexMatrix& m);

// Sum of diagonal entries; the matrix must be square.
Complex trace(const ComplexMatrix& m);

// Hilbert-Schmidt scalar product Tr(a^dagger b) of two square matrices of
// equal dimension. Conjugate-symmetric, linear in the second argument.
Complex hs_inner(const ComplexMatrix& a, const ComplexMatrix& b);

// Hilbert-Schmidt norm sqrt(Re Tr(a^dagger a)).
double hs_norm(const ComplexMatrix& a);

// Kronecker product. Entry ((i*rows_b + k), (j*cols_b + l)) = a(i,j)*b(k,l).
ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

enum class Subsystem { First, Second };

// Partial trace of a (d1*d2)-dimensional square matrix over one tensor
// factor, returning the matrix of the kept factor. Satisfies the defining
// identity Tr(m (A (x) id)) = Tr(result A) for every observable A on the
// kept factor (and the mirrored identity when keeping the second factor).
ComplexMatrix partial_trace(const ComplexMatrix& m, std::size_t d1, std::size_t d2,
                            Subsystem keep);

// Matrix-vector product.
std::vector<Complex> act(const ComplexMatrix& m, std::span<const Complex> v);

// True when no entry is NaN or infinite.
bool all_finite(const ComplexMatrix& m);

} // namespace qmplab
