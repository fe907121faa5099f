#pragma once

#include <string>
#include <utility>

#include "doctest.h"

#include "qmplab/complex_matrix.hpp"

namespace qmplab::test {

// Exception assertion with a substring check on the message; doctest's
// CHECK_THROWS_AS alone would lose the message text.
template <typename Exception, typename Fn>
void expect_throw_containing(Fn&& fn, const std::string& needle) {
  try {
    std::forward<Fn>(fn)();
    FAIL_CHECK("expected an exception containing \"" << needle << "\", nothing was thrown");
  } catch (const Exception& e) {
    const std::string what = e.what();
    if (what.find(needle) == std::string::npos) {
      FAIL_CHECK("exception message \"" << what << "\" does not contain \"" << needle << "\"");
    }
  } catch (const std::exception& e) {
    FAIL_CHECK("wrong exception type, message: " << e.what());
  }
}

inline double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
  REQUIRE(a.rows() == b.rows());
  REQUIRE(a.cols() == b.cols());
  double out = 0.0;
  for (std::size_t i = 0; i < a.data().size(); ++i) {
    out = std::max(out, std::abs(a.data()[i] - b.data()[i]));
  }
  return out;
}

inline bool bitwise_equal(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    return false;
  }
  for (std::size_t i = 0; i < a.data().size(); ++i) {
    if (a.data()[i] != b.data()[i]) {
      return false;
    }
  }
  return true;
}

} // namespace qmplab::test
