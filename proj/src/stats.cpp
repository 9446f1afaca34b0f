#include "prealign/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "prealign/errors.hpp"

namespace prealign {

double Histogram::total() const { return std::accumulate(mass.begin(), mass.end(), 0.0); }

std::size_t Histogram::bin_of(double x) const {
  if (!(x >= lo && x <= hi)) return mass.size();
  auto i = static_cast<std::size_t>((x - lo) / width());
  return std::min(i, mass.size() - 1);
}

void Histogram::add(double x, double weight) {
  const auto i = bin_of(x);
  if (i < mass.size()) mass[i] += weight;
}

Histogram Histogram::of_samples(std::span<const double> samples, double lo, double hi, std::size_t bins) {
  if (bins < 1) throw DomainError("histogram needs at least one bin");
  Histogram h(lo, hi, bins);
  if (samples.empty()) return h;
  std::vector<std::size_t> counts(bins, 0);
  for (double x : samples) {
    const auto i = h.bin_of(x);
    if (i < bins) ++counts[i];
  }
  const double n = static_cast<double>(samples.size());
  for (std::size_t i = 0; i < bins; ++i) h.mass[i] = static_cast<double>(counts[i]) / n;
  return h;
}

Histogram Histogram::of_cdf(const std::function<double(double)>& cdf, double lo, double hi, std::size_t bins) {
  Histogram h(lo, hi, bins);
  double left = cdf(lo);
  for (std::size_t i = 0; i < bins; ++i) {
    const double right = cdf(i + 1 == bins ? hi : h.left_edge(i + 1));
    h.mass[i] = right - left;
    left = right;
  }
  return h;
}

double mean(std::span<const double> xs) {
  if (xs.empty()) return 0.0;
  return std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
}

double stddev(std::span<const double> xs) {
  if (xs.size() < 2) return 0.0;
  const double m = mean(xs);
  double acc = 0.0;
  for (double x : xs) acc += (x - m) * (x - m);
  return std::sqrt(acc / static_cast<double>(xs.size()));
}

Summary summarize(std::span<const double> xs) {
  Summary s;
  s.count = xs.size();
  if (xs.empty()) return s;
  s.mean = mean(xs);
  s.stddev = stddev(xs);
  std::vector<double> sorted(xs.begin(), xs.end());
  std::sort(sorted.begin(), sorted.end());
  // Linear interpolation between order statistics.
  auto quantile = [&sorted](double q) {
    const double pos = q * static_cast<double>(sorted.size() - 1);
    const auto i = static_cast<std::size_t>(pos);
    const double frac = pos - static_cast<double>(i);
    if (i + 1 >= sorted.size()) return sorted.back();
    return sorted[i] + frac * (sorted[i + 1] - sorted[i]);
  };
  s.min = sorted.front();
  s.max = sorted.back();
  s.q05 = quantile(0.05);
  s.q25 = quantile(0.25);
  s.median = quantile(0.5);
  s.q75 = quantile(0.75);
  s.q95 = quantile(0.95);
  return s;
}

double pearson_correlation(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size() || xs.size() < 2) throw DomainError("correlation needs two equal-length series");
  const double mx = mean(xs), my = mean(ys);
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double dx = xs[i] - mx, dy = ys[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0) return 0.0;
  return sxy / std::sqrt(sxx * syy);
}

double ks_distance(std::span<const double> samples, const std::function<double(double)>& cdf) {
  if (samples.empty()) return 1.0;
  std::vector<double> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end());
  const double n = static_cast<double>(sorted.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const double f = cdf(sorted[i]);
    d = std::max({d, static_cast<double>(i + 1) / n - f, f - static_cast<double>(i) / n});
  }
  return d;
}

double total_variation(const Histogram& a, const Histogram& b) {
  if (a.bins() != b.bins() || a.lo != b.lo || a.hi != b.hi) throw DomainError("histograms have different binning");
  double acc = 0.0;
  for (std::size_t i = 0; i < a.bins(); ++i) acc += std::abs(a.mass[i] - b.mass[i]);
  return 0.5 * acc;
}

}  // namespace prealign
