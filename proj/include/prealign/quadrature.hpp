#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace prealign {

/// Gauss-Legendre nodes and weights on [-1, 1].
struct GaussLegendreRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Rule of order n, computed once and shared between threads.
const GaussLegendreRule& gauss_legendre_rule(std::size_t order);

struct QuadratureResult {
  double value = 0.0;
  std::size_t order = 0;
  double estimated_error = 0.0;
};

/// Integrates f over [a, b] with Gauss-Legendre rules of order start, 2 start,
/// ... until two successive values agree to rel_tol (or abs_tol). Throws
/// NumericalFailure once max_order is passed without agreement.
QuadratureResult integrate_gauss_legendre(const std::function<double(double)>& f, double a, double b,
                                          double rel_tol = 1e-10, double abs_tol = 1e-300,
                                          std::size_t start_order = 64, std::size_t max_order = 8192);

}  // namespace prealign
