#pragma once

#include <span>

namespace pbp {

/// Two-sample Kolmogorov-Smirnov distance sup_x |F_a(x) - F_b(x)|.
double ks_distance(std::span<const double> a, std::span<const double> b);

struct Moments {
  double mean = 0.0;
  double sd = 0.0;
  double se = 0.0;
};

/// Mean, sample standard deviation and standard error, summed in input order.
Moments moments(std::span<const double> xs);

}  // namespace pbp
