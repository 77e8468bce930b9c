#include "betadelta/types.hpp"

#include <cmath>
#include <utility>

namespace betadelta {

DenseMatrix::DenseMatrix(std::size_t r, std::size_t c, Vec entries)
    : rows(r), cols(c), data(std::move(entries)) {
  if (data.size() != rows * cols) {
    throw std::invalid_argument("DenseMatrix: entries.size() != rows * cols");
  }
}

bool all_finite(const Vec& v) {
  for (double x : v) {
    if (!std::isfinite(x)) return false;
  }
  return true;
}

bool all_finite(const DenseMatrix& m) { return all_finite(m.data); }

std::vector<std::size_t> detect_support(const Vec& x) {
  double amax = 0.0;
  for (double xi : x) amax = std::max(amax, std::abs(xi));
  std::vector<std::size_t> support;
  if (amax == 0.0) return support;
  const double threshold = kSupportThresholdRel * amax;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (std::abs(x[i]) > threshold) support.push_back(i);
  }
  return support;
}

SignVector sign_pattern(const Vec& x, const std::vector<std::size_t>& support) {
  SignVector c;
  c.values.reserve(support.size());
  for (std::size_t i : support) {
    if (i >= x.size()) throw std::invalid_argument("sign_pattern: index out of range");
    c.values.push_back(x[i] < 0.0 ? -1.0 : 1.0);
  }
  return c;
}

}  // namespace betadelta
