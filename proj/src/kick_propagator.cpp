// Impulsive kick exp(i P op)|psi> by integrating dc/dxi = i P M c from xi = 0 to 1.
//
// The operator only couples levels with Delta J = 0, +-2 (and Delta m = 0, +-2
// for the x axis), so the basis splits into independent blocks by the parity
// of J (and of m, or the value of m for the z axis). Each block with non-zero
// amplitude is integrated separately as a real system of twice the size.

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include <boost/numeric/odeint.hpp>

#include "prealign/errors.hpp"
#include "prealign/quantum.hpp"

namespace prealign::quantum {

namespace {

namespace odeint = boost::numeric::odeint;

struct Level {
  int j;
  int m;
};

/// Real symmetric sparse matrix in CSR form over a list of levels.
struct Block {
  std::vector<Level> levels;
  std::vector<std::size_t> row_start;
  std::vector<std::size_t> column;
  std::vector<double> value;
};

Block build_block(std::vector<Level> levels, Cos2Operator op) {
  Block b;
  b.levels = std::move(levels);
  // Position lookup keyed by the full-basis index.
  std::vector<std::ptrdiff_t> position;
  for (std::size_t k = 0; k < b.levels.size(); ++k) {
    const auto idx = QuantumState::index(b.levels[k].j, b.levels[k].m);
    if (idx >= position.size()) position.resize(idx + 1, -1);
    position[idx] = static_cast<std::ptrdiff_t>(k);
  }
  const int dm_max = op == Cos2Operator::cos2_theta ? 0 : 2;
  b.row_start.push_back(0);
  for (const auto& row : b.levels) {
    for (int dj = -2; dj <= 2; dj += 2) {
      for (int dm = -dm_max; dm <= dm_max; dm += 2) {
        const int j = row.j + dj;
        const int m = row.m + dm;
        if (j < 0 || std::abs(m) > j) continue;
        const auto idx = QuantumState::index(j, m);
        if (idx >= position.size() || position[idx] < 0) continue;
        const double v = cos2_matrix_element(row.j, row.m, j, m, op);
        if (v == 0.0) continue;
        b.column.push_back(static_cast<std::size_t>(position[idx]));
        b.value.push_back(v);
      }
    }
    b.row_start.push_back(b.column.size());
  }
  return b;
}

/// Packs c = a + i b as [a, b]; d/dxi [a, b] = P [-M b, M a].
class KickRhs {
 public:
  KickRhs(const Block& block, double strength) : block_(block), strength_(strength) {}

  void operator()(const std::vector<double>& x, std::vector<double>& dxdt, double /*xi*/) const {
    const std::size_t n = block_.levels.size();
    for (std::size_t r = 0; r < n; ++r) {
      double ma = 0.0, mb = 0.0;
      for (std::size_t k = block_.row_start[r]; k < block_.row_start[r + 1]; ++k) {
        ma += block_.value[k] * x[block_.column[k]];
        mb += block_.value[k] * x[n + block_.column[k]];
      }
      dxdt[r] = -strength_ * mb;
      dxdt[n + r] = strength_ * ma;
    }
  }

 private:
  const Block& block_;
  double strength_;
};

void propagate_block(const Block& block, double strength, QuantumState& state, const KickOptions& options) {
  const std::size_t n = block.levels.size();
  std::vector<double> x(2 * n);
  bool any = false;
  for (std::size_t k = 0; k < n; ++k) {
    const auto c = state.at(block.levels[k].j, block.levels[k].m);
    x[k] = c.real();
    x[n + k] = c.imag();
    any = any || c != 0.0;
  }
  if (!any) return;

  using Stepper = odeint::runge_kutta_fehlberg78<std::vector<double>>;
  auto stepper = odeint::make_controlled<Stepper>(options.abs_tol, options.rel_tol);
  const double dxi0 = 0.05 / std::max(1.0, std::abs(strength));
  odeint::integrate_adaptive(stepper, KickRhs(block, strength), x, 0.0, 1.0, dxi0);

  for (std::size_t k = 0; k < n; ++k) state.at(block.levels[k].j, block.levels[k].m) = {x[k], x[n + k]};
}

}  // namespace

QuantumState kick_propagate(const QuantumState& state, double kick_strength, KickAxis axis,
                            const KickOptions& options) {
  if (std::abs(state.norm() - 1.0) > 1e-6) throw DomainError("kick_propagate needs a normalized state");
  if (kick_strength == 0.0) return state;

  QuantumState out = state;
  const int j_max = state.j_max();
  if (axis == KickAxis::z_parallel) {
    for (int m = -j_max; m <= j_max; ++m) {
      for (int parity = 0; parity < 2; ++parity) {
        std::vector<Level> levels;
        for (int j = std::abs(m); j <= j_max; ++j) {
          if (j % 2 == parity) levels.push_back({j, m});
        }
        if (levels.empty()) continue;
        bool populated = false;
        for (const auto& l : levels) populated = populated || state.at(l.j, l.m) != 0.0;
        if (!populated) continue;
        propagate_block(build_block(std::move(levels), Cos2Operator::cos2_theta), kick_strength, out, options);
      }
    }
  } else {
    for (int j_parity = 0; j_parity < 2; ++j_parity) {
      for (int m_parity = 0; m_parity < 2; ++m_parity) {
        std::vector<Level> levels;
        bool populated = false;
        for (int j = j_parity; j <= j_max; j += 2) {
          for (int m = -j; m <= j; ++m) {
            if (std::abs(m) % 2 != m_parity) continue;
            levels.push_back({j, m});
            populated = populated || state.at(j, m) != 0.0;
          }
        }
        if (!populated) continue;
        propagate_block(build_block(std::move(levels), Cos2Operator::cos2_phi_sin2_theta), kick_strength, out,
                        options);
      }
    }
  }

  const double leaked = out.top_shell_population(2);
  if (leaked > options.leak_tol) {
    throw TruncationLeak("kick leaked population " + std::to_string(leaked) + " into the top shells at J_max=" +
                             std::to_string(j_max),
                         leaked);
  }
  return out;
}

}  // namespace prealign::quantum
