#include "qmplab/complex_matrix.hpp"

#include <cmath>

namespace qmplab {

ComplexMatrix ComplexMatrix::identity(std::size_t d) {
  ComplexMatrix m(d, d);
  for (std::size_t i = 0; i < d; ++i) m(i, i) = 1.0;
  return m;
}

ComplexMatrix ComplexMatrix::diagonal(std::span<const double> values) {
  ComplexMatrix m(values.size(), values.size());
  for (std::size_t i = 0; i < values.size(); ++i) m(i, i) = values[i];
  return m;
}

ComplexMatrix ComplexMatrix::diagonal(std::span<const Complex> values) {
  ComplexMatrix m(values.size(), values.size());
  for (std::size_t i = 0; i < values.size(); ++i) m(i, i) = values[i];
  return m;
}

ComplexMatrix ComplexMatrix::from_rows(
    std::initializer_list<std::initializer_list<Complex>> rows) {
  const std::size_t r = rows.size();
  const std::size_t c = r == 0 ? 0 : rows.begin()->size();
  ComplexMatrix m(r, c);
  std::size_t i = 0;
  for (const auto& row : rows) {
    if (row.size() != c)
      throw DimensionError("ComplexMatrix::from_rows: ragged rows");
    std::size_t j = 0;
    for (const auto& v : row) m(i, j++) = v;
    ++i;
  }
  return m;
}

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& other) {
  if (rows_ != other.rows_ || cols_ != other.cols_)
    throw DimensionError("ComplexMatrix::operator+=: shape mismatch");
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += other.data_[k];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator-=(const ComplexMatrix& other) {
  if (rows_ != other.rows_ || cols_ != other.cols_)
    throw DimensionError("ComplexMatrix::operator-=: shape mismatch");
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= other.data_[k];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator*=(Complex scale) {
  for (auto& v : data_) v *= scale;
  return *this;
}

ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }
ComplexMatrix operator*(ComplexMatrix a, Complex scale) { return a *= scale; }
ComplexMatrix operator*(Complex scale, ComplexMatrix a) { return a *= scale; }

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.cols() != b.rows())
    throw DimensionError("ComplexMatrix::operator*: inner dimensions differ");
  ComplexMatrix out(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const Complex aik = a(i, k);
      if (aik == Complex{}) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) out(i, j) += aik * b(k, j);
    }
  }
  return out;
}

ComplexMatrix dagger(const ComplexMatrix& m) {
  ComplexMatrix out(m.cols(), m.rows());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) out(j, i) = std::conj(m(i, j));
  return out;
}

Complex trace(const ComplexMatrix& m) {
  if (!m.is_square()) throw DimensionError("trace: matrix is not square");
  Complex sum{};
  for (std::size_t i = 0; i < m.rows(); ++i) sum += m(i, i);
  return sum;
}

Complex hs_inner(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (!a.is_square() || !b.is_square())
    throw DimensionError("hs_inner: operands must be square");
  if (a.rows() != b.rows())
    throw DimensionError("hs_inner: operand dimensions differ");
  // Tr(a^dagger b) reduces to the entrywise sum of conj(a_ij) * b_ij.
  Complex sum{};
  const auto da = a.data();
  const auto db = b.data();
  for (std::size_t k = 0; k < da.size(); ++k) sum += std::conj(da[k]) * db[k];
  return sum;
}

double hs_norm(const ComplexMatrix& a) {
  if (!a.is_square()) throw DimensionError("hs_norm: matrix is not square");
  double sum = 0.0;
  for (const Complex& v : a.data()) sum += std::norm(v);
  return std::sqrt(sum);
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) {
      const Complex aij = a(i, j);
      if (aij == Complex{}) continue;
      for (std::size_t k = 0; k < b.rows(); ++k)
        for (std::size_t l = 0; l < b.cols(); ++l)
          out(i * b.rows() + k, j * b.cols() + l) = aij * b(k, l);
    }
  return out;
}

ComplexMatrix partial_trace(const ComplexMatrix& m, std::size_t d1, std::size_t d2,
                            Subsystem keep) {
  if (!m.is_square()) throw DimensionError("partial_trace: matrix is not square");
  if (m.rows() != d1 * d2)
    throw DimensionError("partial_trace: matrix dimension is not d1*d2");
  if (keep == Subsystem::First) {
    ComplexMatrix out(d1, d1);
    for (std::size_t i = 0; i < d1; ++i)
      for (std::size_t j = 0; j < d1; ++j) {
        Complex sum{};
        for (std::size_t k = 0; k < d2; ++k) sum += m(i * d2 + k, j * d2 + k);
        out(i, j) = sum;
      }
    return out;
  }
  ComplexMatrix out(d2, d2);
  for (std::size_t k = 0; k < d2; ++k)
    for (std::size_t l = 0; l < d2; ++l) {
      Complex sum{};
      for (std::size_t i = 0; i < d1; ++i) sum += m(i * d2 + k, i * d2 + l);
      out(k, l) = sum;
    }
  return out;
}

std::vector<Complex> act(const ComplexMatrix& m, std::span<const Complex> v) {
  if (m.cols() != v.size())
    throw DimensionError("act: vector length does not match matrix columns");
  std::vector<Complex> out(m.rows());
  for (std::size_t i = 0; i < m.rows(); ++i) {
    Complex sum{};
    for (std::size_t j = 0; j < m.cols(); ++j) sum += m(i, j) * v[j];
    out[i] = sum;
  }
  return out;
}

bool all_finite(const ComplexMatrix& m) {
  for (const Complex& v : m.data())
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
  return true;
}

} // namespace qmplab
