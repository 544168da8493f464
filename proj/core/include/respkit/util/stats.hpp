#pragma once

#include <span>

namespace respkit::stats {

double mean(std::span<const double> xs);
/// Sample standard deviation (n - 1 denominator). Zero for fewer than two values.
double sample_stddev(std::span<const double> xs);
double median(std::span<const double> xs);
/// Linear-interpolation percentile, q in [0, 100].
double percentile(std::span<const double> xs, double q);

}  // namespace respkit::stats
