// Independent reference computations used only by the tests. None of these
// call into the library's physics; they re-derive the quantities by brute
// force (direct quadrature, dense matrix exponentials, ODE integration).
#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <vector>

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>
#include <boost/math/quadrature/gauss.hpp>
#include <boost/numeric/odeint.hpp>
#include <gsl/gsl_sf_coupling.h>

namespace oracle {

using std::numbers::pi;

/// Y_l^m(theta, 0) including the Condon-Shortley phase, any sign of m.
inline double ylm_theta(int l, int m, double theta) {
  if (m >= 0) return std::sph_legendre(l, m, theta);
  return ((-m) % 2 ? -1.0 : 1.0) * std::sph_legendre(l, -m, theta);
}

/// <l1 m1| Y_L^M |l2 m2> from Wigner 3j symbols.
inline double gaunt(int l1, int m1, int big_l, int big_m, int l2, int m2) {
  const double pref = std::sqrt((2.0 * l1 + 1) * (2.0 * big_l + 1) * (2.0 * l2 + 1) / (4.0 * pi));
  const double a = gsl_sf_coupling_3j(2 * l1, 2 * big_l, 2 * l2, 0, 0, 0);
  const double b = gsl_sf_coupling_3j(2 * l1, 2 * big_l, 2 * l2, -2 * m1, 2 * big_m, 2 * m2);
  return (m1 % 2 ? -1.0 : 1.0) * pref * a * b;
}

/// cos^2 theta = 1/3 + (2/3) sqrt(4 pi / 5) Y_2^0.
inline double cos2_theta_gaunt(int jp, int mp, int j, int m) {
  double v = (jp == j && mp == m) ? 1.0 / 3.0 : 0.0;
  return v + 2.0 / 3.0 * std::sqrt(4.0 * pi / 5.0) * gaunt(jp, mp, 2, 0, j, m);
}

/// sin^2 theta cos^2 phi = 1/3 - (1/3) sqrt(4 pi / 5) Y_2^0 + (1/4) sqrt(32 pi / 15)(Y_2^2 + Y_2^-2).
inline double cos2_phi_sin2_theta_gaunt(int jp, int mp, int j, int m) {
  double v = (jp == j && mp == m) ? 1.0 / 3.0 : 0.0;
  v -= 1.0 / 3.0 * std::sqrt(4.0 * pi / 5.0) * gaunt(jp, mp, 2, 0, j, m);
  const double c = 0.25 * std::sqrt(32.0 * pi / 15.0);
  v += c * (gaunt(jp, mp, 2, 2, j, m) + gaunt(jp, mp, 2, -2, j, m));
  return v;
}

/// Same elements by direct Gauss-Legendre quadrature over cos(theta); the
/// phi integral of exp(i(m - m')phi) times 1 or cos^2 phi is done by hand.
inline double cos2_quadrature(int jp, int mp, int j, int m, bool x_axis) {
  double phi_factor = 0.0;
  if (!x_axis) {
    phi_factor = mp == m ? 2.0 * pi : 0.0;
  } else {
    if (mp == m) phi_factor = pi;
    if (mp == m + 2 || mp == m - 2) phi_factor = 0.5 * pi;
  }
  if (phi_factor == 0.0) return 0.0;
  auto f = [&](double x) {
    const double theta = std::acos(x);
    const double weight = x_axis ? 1.0 - x * x : x * x;
    return ylm_theta(jp, mp, theta) * weight * ylm_theta(j, m, theta);
  };
  return phi_factor * boost::math::quadrature::gauss<double, 60>::integrate(f, -1.0, 1.0);
}

struct Level {
  int j;
  int m;
};

/// exp(i P M) applied to a basis vector by a dense matrix exponential on
/// the listed levels; the matrix elements come from the 3j formula.
inline std::vector<std::complex<double>> dense_kick(const std::vector<Level>& levels, std::size_t start, double p,
                                                    bool x_axis) {
  const auto n = static_cast<Eigen::Index>(levels.size());
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(n, n);
  for (Eigen::Index a = 0; a < n; ++a) {
    for (Eigen::Index b = 0; b < n; ++b) {
      const auto& la = levels[static_cast<std::size_t>(a)];
      const auto& lb = levels[static_cast<std::size_t>(b)];
      if (std::abs(la.j - lb.j) > 2 || std::abs(la.m - lb.m) > 2) continue;
      const double v = x_axis ? cos2_phi_sin2_theta_gaunt(la.j, la.m, lb.j, lb.m) : cos2_theta_gaunt(la.j, la.m, lb.j, lb.m);
      m(a, b) = std::complex<double>(0.0, p * v);
    }
  }
  const Eigen::MatrixXcd u = m.exp();
  std::vector<std::complex<double>> out(levels.size());
  for (Eigen::Index a = 0; a < n; ++a) out[static_cast<std::size_t>(a)] = u(a, static_cast<Eigen::Index>(start));
  return out;
}

// ---------------------------------------------------------------------------
// Classical rotor in reduced units (I = 1, momenta in sqrt(kTI), time in
// sqrt(I/kT)).

using State4 = std::array<double, 4>;  // theta, phi, p_theta, p_phi
using State6 = std::array<double, 6>;  // n (unit axis), L (angular momentum)

/// Hamilton's equations for H = (p_theta^2 + p_phi^2/sin^2 theta)/2
/// - f(t) * V(theta, phi), with V = cos^2 theta (z) or sin^2 theta cos^2 phi (x).
struct SphericalRotor {
  std::function<double(double)> strength;  // f(t); empty means free rotation
  bool x_axis = false;

  void operator()(const State4& s, State4& d, double t) const {
    const double th = s[0], ph = s[1], pt = s[2], pp = s[3];
    const double st = std::sin(th), ct = std::cos(th);
    d[0] = pt;
    d[1] = pp / (st * st);
    d[2] = pp * pp * ct / (st * st * st);
    d[3] = 0.0;
    if (strength) {
      const double f = strength(t);
      if (!x_axis) {
        d[2] += -f * 2.0 * st * ct;
      } else {
        const double cp = std::cos(ph), sp = std::sin(ph);
        d[2] += f * 2.0 * st * ct * cp * cp;
        d[3] += -f * st * st * 2.0 * sp * cp;
      }
    }
  }
};

inline double spherical_energy(const State4& s) {
  const double st = std::sin(s[0]);
  return 0.5 * (s[2] * s[2] + s[3] * s[3] / (st * st));
}

/// Axis n and angular momentum L of a rotor given in spherical variables.
inline State6 to_cartesian(const State4& s) {
  const double th = s[0], ph = s[1];
  const double st = std::sin(th), ct = std::cos(th), sp = std::sin(ph), cp = std::cos(ph);
  const std::array<double, 3> n{st * cp, st * sp, ct};
  const std::array<double, 3> e_theta{ct * cp, ct * sp, -st};
  const std::array<double, 3> e_phi{-sp, cp, 0.0};
  const double theta_dot = s[2];
  const double phi_dot_sin = s[3] / st;  // sin(theta) * phi_dot
  State6 out{};
  for (int i = 0; i < 3; ++i) {
    out[i] = n[i];
    out[3 + i] = theta_dot * e_phi[i] - phi_dot_sin * e_theta[i];
  }
  return out;
}

/// Linear rotor in a z-polarized field with potential -(a(t)/2) n_z^2:
/// dn/dt = L x n, dL/dt = a(t) n_z (n x z). Free of coordinate singularities.
struct CartesianRotor {
  std::function<double(double)> a;

  void operator()(const State6& s, State6& d, double t) const {
    const double nx = s[0], ny = s[1], nz = s[2], lx = s[3], ly = s[4], lz = s[5];
    d[0] = ly * nz - lz * ny;
    d[1] = lz * nx - lx * nz;
    d[2] = lx * ny - ly * nx;
    const double k = a(t) * nz;
    d[3] = k * ny;
    d[4] = -k * nx;
    d[5] = 0.0;
  }
};

inline double cartesian_energy(const State6& s, double a) {
  const double l2 = s[3] * s[3] + s[4] * s[4] + s[5] * s[5];
  return 0.5 * l2 - 0.5 * a * s[2] * s[2];
}

struct RampResult {
  double mean_u = 0.0;   // time average of n_z^2 at the full field
  double energy = 0.0;   // 0.5 L^2 - 0.5 a n_z^2 at the full field
  bool ok = false;
};

/// Ramps a(t) = a_max sin^2(pi t / 2 T) over T = ramp_periods field-free
/// rotor periods, then holds a_max and averages n_z^2 between the first and
/// last maxima of n_z^2 over hold_periods.
inline RampResult slow_ramp(const State6& start, double a_max, double ramp_periods, double hold_periods) {
  namespace odeint = boost::numeric::odeint;
  const double l = std::sqrt(start[3] * start[3] + start[4] * start[4] + start[5] * start[5]);
  const double period = 2.0 * pi / l;
  const double t_ramp = ramp_periods * period;
  CartesianRotor sys{[&](double t) {
    if (t >= t_ramp) return a_max;
    const double s = std::sin(0.5 * pi * t / t_ramp);
    return a_max * s * s;
  }};
  auto stepper = odeint::make_dense_output(1e-12, 1e-12, odeint::runge_kutta_dopri5<State6>());
  State6 x = start;
  odeint::integrate_adaptive(stepper, sys, x, 0.0, t_ramp, period / 50.0);

  // Hold: sample finely, accumulate n_z^2 with the trapezoid rule between maxima.
  const double dt = period / 400.0;
  const double t_end = t_ramp + hold_periods * period;
  std::vector<double> u;
  std::vector<double> times;
  auto observer = [&](const State6& s, double t) {
    u.push_back(s[2] * s[2]);
    times.push_back(t);
  };
  odeint::integrate_const(stepper, sys, x, t_ramp, t_end, dt, observer);

  std::vector<std::size_t> peaks;
  for (std::size_t i = 1; i + 1 < u.size(); ++i) {
    if (u[i] > u[i - 1] && u[i] >= u[i + 1]) peaks.push_back(i);
  }
  RampResult r;
  r.energy = cartesian_energy(x, a_max);
  if (peaks.size() < 3) return r;
  // Refine maxima by a parabola through neighbours is unnecessary at this
  // sampling; integrate between the first and last sampled maxima.
  double acc = 0.0;
  for (std::size_t i = peaks.front(); i < peaks.back(); ++i) acc += 0.5 * (u[i] + u[i + 1]) * (times[i + 1] - times[i]);
  r.mean_u = acc / (times[peaks.back()] - times[peaks.front()]);
  r.ok = true;
  return r;
}

}  // namespace oracle
