#pragma once

// Brute-force cross-checks that share no code path with the closed-form
// branches, the QR eigen-solve, or the vectorized Lyapunov solve.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <random>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "magnonic/error.hpp"
#include "magnonic/fluctuations.hpp"
#include "magnonic/model.hpp"
#include "magnonic/stability.hpp"

namespace magnonic {

/// One classical fourth-order Runge-Kutta step of y' = f(y).
template <typename State, typename Rhs>
State rk4_step(const Rhs& f, const State& y, typename Eigen::NumTraits<typename State::Scalar>::Real dt) {
  const State k1 = f(y);
  const State k2 = f(State(y + (dt / 2) * k1));
  const State k3 = f(State(y + (dt / 2) * k2));
  const State k4 = f(State(y + dt * k3));
  return y + (dt / 6) * (k1 + 2 * k2 + 2 * k3 + k4);
}

template <typename Scalar = double>
struct RelaxOptions {
  Scalar t_end = Scalar(200);
  Scalar dt = Scalar(1e-3);
  Scalar window = Scalar(1);       // trailing window for the settling test
  Scalar settle_tol = Scalar(1e-9);
  Scalar t_min = Scalar(0);        // no convergence verdict before this time
  Scalar divergence_bound = Scalar(1e6);
};

template <typename Scalar = double>
struct RelaxResult {
  std::complex<Scalar> a;
  std::complex<Scalar> m;
  bool converged = false;
  Scalar t = 0;
};

/// Integrates the mean-field equations from (A0, M0) until the state settles or t_end.
template <typename Scalar>
RelaxResult<Scalar> relax_mean_field(const SystemParams<Scalar>& p, std::complex<Scalar> a0,
                                     std::complex<Scalar> m0, const RelaxOptions<Scalar>& opt = {}) {
  if (!(opt.dt > 0) || !(opt.t_end > opt.dt)) {
    throw Error(ErrorKind::InvalidParams, "relax_mean_field needs dt > 0 and t_end > dt");
  }
  const auto f = [&p](const Amplitudes<Scalar>& y) { return mean_field_rhs(p, y); };
  const auto steps = static_cast<std::int64_t>(std::ceil(opt.t_end / opt.dt));
  const auto window_steps = std::max<std::int64_t>(1, std::llround(opt.window / opt.dt));

  Amplitudes<Scalar> y(a0, m0);
  Amplitudes<Scalar> snapshot = y;
  RelaxResult<Scalar> out;
  for (std::int64_t n = 1; n <= steps; ++n) {
    y = rk4_step(f, y, opt.dt);
    if (!(y.norm() < opt.divergence_bound)) throw Error(ErrorKind::Diverged, "mean-field trajectory ran away");
    if (n % window_steps == 0) {
      const Scalar t = Scalar(n) * opt.dt;
      if (t >= opt.t_min && (y - snapshot).norm() < opt.settle_tol) {
        out.converged = true;
        out.t = t;
        break;
      }
      snapshot = y;
    }
  }
  if (!out.converged) out.t = Scalar(steps) * opt.dt;
  out.a = y(0);
  out.m = y(1);
  return out;
}

/// Deterministic unit-norm perturbation direction in (A, M) space.
template <typename Scalar>
Amplitudes<Scalar> seeded_direction(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<Scalar> u(Scalar(-1), Scalar(1));
  Amplitudes<Scalar> d;
  do {
    const Scalar ar = u(rng), ai = u(rng), mr = u(rng), mi = u(rng);
    d = Amplitudes<Scalar>(std::complex<Scalar>(ar, ai), std::complex<Scalar>(mr, mi));
  } while (d.norm() < Scalar(1e-3));
  return d / d.norm();
}

template <typename Scalar = double>
struct GrowthProbe {
  bool grows = false;
  Scalar amplification = 0;  // final distance / initial distance
  Scalar t = 0;
};

/// Perturbs a fixed point and decides by direct integration whether the
/// perturbation grows (unstable) or decays (stable).
///
/// Growth by `decisive` ends the run early. Decay never does: a seed lying
/// almost entirely in the stable subspace shrinks first and only later
/// exposes a weak unstable component. At t_max the largest distance over the
/// last quarter is compared with that over the preceding quarter, ignoring
/// anything below the roundoff floor eps / decisive^2.
template <typename Scalar>
GrowthProbe<Scalar> probe_growth(const SystemParams<Scalar>& p, const Amplitudes<Scalar>& fixed,
                                 std::uint64_t seed, Scalar eps = Scalar(1e-7), Scalar t_max = Scalar(2000),
                                 Scalar dt = Scalar(2e-3), Scalar decisive = Scalar(1e3)) {
  const auto f = [&p](const Amplitudes<Scalar>& y) { return mean_field_rhs(p, y); };
  Amplitudes<Scalar> y = fixed + eps * seeded_direction<Scalar>(seed);
  const auto steps = static_cast<std::int64_t>(std::ceil(t_max / dt));
  Scalar third_quarter = 0, last_quarter = 0;
  GrowthProbe<Scalar> out;
  for (std::int64_t n = 1; n <= steps; ++n) {
    y = rk4_step(f, y, dt);
    const Scalar d = (y - fixed).norm();
    if (!(d < decisive * eps)) {
      out = {true, d / eps, Scalar(n) * dt};
      return out;
    }
    if (4 * n > 3 * steps)
      last_quarter = std::max(last_quarter, d);
    else if (2 * n > steps)
      third_quarter = std::max(third_quarter, d);
  }
  const Scalar floor = eps / (decisive * decisive);
  out.grows = last_quarter > floor && last_quarter > third_quarter;
  out.amplification = (y - fixed).norm() / eps;
  out.t = Scalar(steps) * dt;
  return out;
}

/// Integrates dV/dt = L V + V L^T + D from V0 to t_end.
template <typename Scalar>
CovarianceMatrix<Scalar> relax_covariance(const DriftMatrix<Scalar>& drift, const DiffusionMatrix<Scalar>& diff,
                                          Scalar t_end = Scalar(50), Scalar dt = Scalar(1e-3),
                                          const CovarianceMatrix<Scalar>& v0 = CovarianceMatrix<Scalar>::Zero(),
                                          Scalar divergence_bound = Scalar(1e12)) {
  if (!(dt > 0) || !(t_end > dt)) throw Error(ErrorKind::InvalidParams, "relax_covariance needs dt > 0, t_end > dt");
  const DriftMatrix<Scalar> drift_t = drift.transpose();
  const CovarianceMatrix<Scalar> D = diff.toDenseMatrix();
  const auto f = [&](const CovarianceMatrix<Scalar>& V) -> CovarianceMatrix<Scalar> {
    return drift * V + V * drift_t + D;
  };
  const auto steps = static_cast<std::int64_t>(std::ceil(t_end / dt));
  CovarianceMatrix<Scalar> V = v0;
  for (std::int64_t n = 0; n < steps; ++n) {
    V = rk4_step(f, V, dt);
    if (!(V.cwiseAbs().maxCoeff() < divergence_bound)) {
      throw Error(ErrorKind::Diverged, "covariance grows without bound (unstable drift)");
    }
  }
  return V;
}

/// The RK4 trajectory of relax_covariance from V(0) = 0, evaluated at the
/// first t = dt * 2^k >= t_end by repeated squaring of the one-step affine map
/// vec V -> T vec V + c. Reaches the long horizons needed close to marginal
/// stability in k 16x16 products instead of 2^k steps.
template <typename Scalar>
CovarianceMatrix<Scalar> relax_covariance_squaring(const DriftMatrix<Scalar>& drift,
                                                   const DiffusionMatrix<Scalar>& diff, Scalar t_end,
                                                   Scalar dt = Scalar(1e-2), Scalar divergence_bound = Scalar(1e12)) {
  if (!(dt > 0) || !(t_end > dt)) {
    throw Error(ErrorKind::InvalidParams, "relax_covariance_squaring needs dt > 0, t_end > dt");
  }
  using Mat16 = Eigen::Matrix<Scalar, 16, 16>;
  using Vec16 = Eigen::Matrix<Scalar, 16, 1>;

  // Generator column by column, from the action of V -> L V + V L^T on unit matrices.
  Mat16 gen;
  for (int c = 0; c < 16; ++c) {
    CovarianceMatrix<Scalar> E = CovarianceMatrix<Scalar>::Zero();
    E(c % 4, c / 4) = 1;
    const CovarianceMatrix<Scalar> image = drift * E + E * drift.transpose();
    gen.col(c) = Eigen::Map<const Vec16>(image.data());
  }

  // One RK4 step of y' = G y + b is y -> R(hG) y + h phi(hG) b with
  // R = 1 + z + z^2/2 + z^3/6 + z^4/24 and phi = 1 + z/2 + z^2/6 + z^3/24.
  const Mat16 z = dt * gen;
  const Mat16 z2 = z * z, z3 = z2 * z, z4 = z3 * z;
  Mat16 T = Mat16::Identity() + z + z2 / 2 + z3 / 6 + z4 / 24;
  const Mat16 phi = Mat16::Identity() + z / 2 + z2 / 6 + z3 / 24;
  const CovarianceMatrix<Scalar> D = diff.toDenseMatrix();
  Vec16 v = dt * phi * Eigen::Map<const Vec16>(D.data());

  for (Scalar t = dt; t < t_end; t *= 2) {
    v = T * v + v;
    T = T * T;
    if (!(v.cwiseAbs().maxCoeff() < divergence_bound)) {
      throw Error(ErrorKind::Diverged, "covariance grows without bound (unstable drift)");
    }
  }
  return Eigen::Map<const CovarianceMatrix<Scalar>>(v.data());
}

template <typename Scalar = double>
struct HysteresisPoint {
  Scalar omega = 0;
  Scalar rho = 0;
  bool converged = false;
  bool diverged = false;
};

/// The zero state escapes at a rate of roughly (omega - omega_c), so a horizon
/// of 1e4 resolves a threshold to about 1e-3 in drive.
template <typename Scalar = double>
struct HysteresisOptions {
  RelaxOptions<Scalar> relax{Scalar(10000), Scalar(2e-3), Scalar(1), Scalar(1e-9), Scalar(50), Scalar(1e6)};
  Scalar kick = Scalar(1e-4);  // added to the carried state before each point
  std::uint64_t seed = 12345;
};

/// Follows the attractor along a monotone drive list, carrying each settled
/// state forward as the next initial condition.
template <typename Scalar>
std::vector<HysteresisPoint<Scalar>> hysteresis_sweep(const SystemParams<Scalar>& base, std::span<const Scalar> omegas,
                                                      const HysteresisOptions<Scalar>& opt = {}) {
  for (std::size_t i = 1; i < omegas.size(); ++i) {
    const bool up = omegas[1] > omegas[0];
    if (up ? !(omegas[i] > omegas[i - 1]) : !(omegas[i] < omegas[i - 1])) {
      throw Error(ErrorKind::InvalidParams, "hysteresis drive list must be strictly monotone");
    }
  }
  std::vector<HysteresisPoint<Scalar>> out;
  out.reserve(omegas.size());
  Amplitudes<Scalar> state = Amplitudes<Scalar>::Zero();
  std::uint64_t seed = opt.seed;
  for (Scalar omega : omegas) {
    const auto p = base.with_drive(omega);
    HysteresisPoint<Scalar> pt;
    pt.omega = omega;
    const Amplitudes<Scalar> start = state + opt.kick * seeded_direction<Scalar>(seed++);
    try {
      const auto r = relax_mean_field(p, start(0), start(1), opt.relax);
      state = Amplitudes<Scalar>(r.a, r.m);
      pt.converged = r.converged;
      pt.rho = scaled_occupation(p, std::norm(r.m));
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::Diverged) throw;
      pt.diverged = true;
      pt.rho = std::numeric_limits<Scalar>::quiet_NaN();
      state = Amplitudes<Scalar>::Zero();
    }
    out.push_back(pt);
  }
  return out;
}

/// Coefficients c of det(sI - A) = s^4 + c[3] s^3 + c[2] s^2 + c[1] s + c[0],
/// by the Faddeev-LeVerrier recursion.
template <typename Scalar>
std::array<Scalar, 4> characteristic_polynomial(const Eigen::Matrix<Scalar, 4, 4>& A) {
  using Mat = Eigen::Matrix<Scalar, 4, 4>;
  std::array<Scalar, 4> c{};
  Mat Mk = Mat::Zero();
  Scalar prev = 1;  // c_{n-k+1}, starting at the leading coefficient
  for (int k = 1; k <= 4; ++k) {
    Mk = A * Mk + prev * Mat::Identity();
    prev = -(A * Mk).trace() / Scalar(k);
    c[4 - k] = prev;
  }
  return c;
}

/// Hurwitz-determinant test for a monic quartic; true iff every root has negative real part.
template <typename Scalar>
bool routh_hurwitz_stable(const std::array<Scalar, 4>& c) {
  const Scalar a1 = c[3], a2 = c[2], a3 = c[1], a4 = c[0];
  const Scalar h1 = a1;
  const Scalar h2 = a1 * a2 - a3;
  const Scalar h3 = a3 * h2 - a1 * a1 * a4;
  return h1 > 0 && h2 > 0 && h3 > 0 && a4 > 0;
}

}  // namespace magnonic
