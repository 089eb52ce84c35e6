#include "pbp/stats.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "pbp/errors.hpp"

namespace pbp {

double ks_distance(std::span<const double> a, std::span<const double> b) {
  require(!a.empty() && !b.empty(), "KS distance needs two non-empty samples");
  std::vector<double> x(a.begin(), a.end());
  std::vector<double> y(b.begin(), b.end());
  std::sort(x.begin(), x.end());
  std::sort(y.begin(), y.end());
  const double nx = static_cast<double>(x.size());
  const double ny = static_cast<double>(y.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < x.size() && j < y.size()) {
    const double v = std::min(x[i], y[j]);
    while (i < x.size() && x[i] == v) ++i;
    while (j < y.size() && y[j] == v) ++j;
    d = std::max(d, std::abs(i / nx - j / ny));
  }
  return d;
}

Moments moments(std::span<const double> xs) {
  require(xs.size() >= 2, "moments need at least two values");
  const double n = static_cast<double>(xs.size());
  double sum = 0.0;
  for (double v : xs) sum += v;
  const double mean = sum / n;
  double ss = 0.0;
  for (double v : xs) ss += (v - mean) * (v - mean);
  const double sd = std::sqrt(ss / (n - 1.0));
  return Moments{mean, sd, sd / std::sqrt(n)};
}

}  // namespace pbp
