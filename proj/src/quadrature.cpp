#include "prealign/quadrature.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <sstream>

#include <gsl/gsl_integration.h>

#include "prealign/errors.hpp"

namespace prealign {

const GaussLegendreRule& gauss_legendre_rule(std::size_t order) {
  static std::mutex mutex;
  static std::map<std::size_t, std::unique_ptr<GaussLegendreRule>> cache;
  std::lock_guard lock(mutex);
  auto& slot = cache[order];
  if (!slot) {
    gsl_integration_glfixed_table* table = gsl_integration_glfixed_table_alloc(order);
    if (table == nullptr) throw NumericalFailure("cannot allocate Gauss-Legendre table");
    auto rule = std::make_unique<GaussLegendreRule>();
    rule->nodes.resize(order);
    rule->weights.resize(order);
    for (std::size_t i = 0; i < order; ++i) {
      gsl_integration_glfixed_point(-1.0, 1.0, i, &rule->nodes[i], &rule->weights[i], table);
    }
    gsl_integration_glfixed_table_free(table);
    slot = std::move(rule);
  }
  return *slot;
}

namespace {

double apply_rule(const GaussLegendreRule& rule, const std::function<double(double)>& f, double a, double b) {
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (b + a);
  double acc = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) acc += rule.weights[i] * f(mid + half * rule.nodes[i]);
  return acc * half;
}

}  // namespace

QuadratureResult integrate_gauss_legendre(const std::function<double(double)>& f, double a, double b,
                                          double rel_tol, double abs_tol, std::size_t start_order,
                                          std::size_t max_order) {
  std::size_t order = start_order;
  double previous = apply_rule(gauss_legendre_rule(order), f, a, b);
  while (order < max_order) {
    order *= 2;
    const double current = apply_rule(gauss_legendre_rule(order), f, a, b);
    const double diff = std::abs(current - previous);
    if (!std::isfinite(current)) break;
    if (diff <= rel_tol * std::abs(current) || diff <= abs_tol) return {current, order, diff};
    previous = current;
  }
  std::ostringstream msg;
  msg << "Gauss-Legendre quadrature on [" << a << ", " << b << "] did not converge by order " << order
      << " (last value " << previous << ")";
  throw NumericalFailure(msg.str());
}

}  // namespace prealign
