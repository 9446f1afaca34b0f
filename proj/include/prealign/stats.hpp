#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace prealign {

/// Equal-width histogram of probability masses on [lo, hi]. Values equal to
/// hi land in the last bin; values outside the range are dropped.
struct Histogram {
  double lo = 0.0;
  double hi = 1.0;
  std::vector<double> mass;

  Histogram() = default;
  Histogram(double lo_, double hi_, std::size_t bins) : lo(lo_), hi(hi_), mass(bins, 0.0) {}

  std::size_t bins() const { return mass.size(); }
  double width() const { return (hi - lo) / static_cast<double>(mass.size()); }
  double left_edge(std::size_t i) const { return lo + width() * static_cast<double>(i); }
  double center(std::size_t i) const { return lo + width() * (static_cast<double>(i) + 0.5); }
  double density(std::size_t i) const { return mass[i] / width(); }
  double total() const;

  /// Bin index for x, or bins() if x is outside [lo, hi].
  std::size_t bin_of(double x) const;
  void add(double x, double weight);

  /// Normalized histogram of equally weighted samples.
  static Histogram of_samples(std::span<const double> samples, double lo, double hi, std::size_t bins);
  /// Masses F(right) - F(left) of a CDF, e.g. an analytic reference law.
  static Histogram of_cdf(const std::function<double(double)>& cdf, double lo, double hi, std::size_t bins);
};

struct Summary {
  double mean = 0.0;
  double stddev = 0.0;
  double min = 0.0;
  double max = 0.0;
  double q05 = 0.0;
  double q25 = 0.0;
  double median = 0.0;
  double q75 = 0.0;
  double q95 = 0.0;
  std::size_t count = 0;
};

double mean(std::span<const double> xs);
/// Population standard deviation.
double stddev(std::span<const double> xs);
Summary summarize(std::span<const double> xs);
double pearson_correlation(std::span<const double> xs, std::span<const double> ys);

/// Kolmogorov-Smirnov distance between the empirical CDF of samples and cdf.
double ks_distance(std::span<const double> samples, const std::function<double(double)>& cdf);
/// Half the L1 distance between two histograms with identical binning.
double total_variation(const Histogram& a, const Histogram& b);

}  // namespace prealign
