#pragma once

#include <cmath>
#include <complex>

#include <Eigen/Core>

#include "magnonic/error.hpp"

namespace magnonic {

enum class KerrSign { Positive, Negative };

constexpr KerrSign flipped(KerrSign s) {
  return s == KerrSign::Positive ? KerrSign::Negative : KerrSign::Positive;
}

constexpr const char* to_string(KerrSign s) { return s == KerrSign::Positive ? "+" : "-"; }

/// Numerical thresholds shared by all modules, in units of the cavity decay rate.
template <typename Scalar = double>
struct Tolerances {
  Scalar eps_den = Scalar(1e-9);    // parametric-resonance singularity guard
  Scalar tol_phase = Scalar(1e-6);  // | |e^{-2i theta}| - 1 | allowed in phase reconstruction
  Scalar tol_fp = Scalar(1e-8);     // fixed-point residual of reconstructed amplitudes
  Scalar tol_stab = Scalar(1e-9);   // max Re(lambda) band treated as marginal
  Scalar eps_contrast = Scalar(1e-9);
  Scalar near_marginal = Scalar(1e-6);  // Lyapunov solutions flagged inside this band
};

/// One operating point of the driven Kerr cavity-magnon system.
///
/// All rates and detunings share one unit; the CLI normalizes them so that
/// kappa_a == 1. The signed Kerr coefficient is `kerr()`.
template <typename Scalar = double>
struct SystemParams {
  Scalar delta_a = Scalar(3);
  Scalar delta_m = Scalar(3.9);
  Scalar kappa_a = Scalar(1);
  Scalar gamma_m = Scalar(1);
  Scalar g_m = Scalar(2.4);
  KerrSign kerr_sign = KerrSign::Positive;
  Scalar kerr_magnitude = Scalar(1);
  Scalar omega_drive = Scalar(0);
  Scalar nbar_a = Scalar(0);
  Scalar nbar_m = Scalar(0);

  Scalar kerr() const { return kerr_sign == KerrSign::Positive ? kerr_magnitude : -kerr_magnitude; }

  Scalar detuning_ratio() const { return delta_m / delta_a; }

  SystemParams with_sign(KerrSign s) const {
    SystemParams p = *this;
    p.kerr_sign = s;
    return p;
  }

  SystemParams with_drive(Scalar omega) const {
    SystemParams p = *this;
    p.omega_drive = omega;
    return p;
  }

  SystemParams with_ratio(Scalar ratio) const {
    SystemParams p = *this;
    p.delta_m = ratio * delta_a;
    return p;
  }
};

/// Throws InvalidParams unless every documented invariant of SystemParams holds.
template <typename Scalar>
void validate(const SystemParams<Scalar>& p) {
  auto require = [](bool ok, const char* msg) {
    if (!ok) throw Error(ErrorKind::InvalidParams, msg);
  };
  require(std::isfinite(p.delta_a) && std::isfinite(p.delta_m) && std::isfinite(p.kappa_a) &&
              std::isfinite(p.gamma_m) && std::isfinite(p.g_m) && std::isfinite(p.kerr_magnitude) &&
              std::isfinite(p.omega_drive) && std::isfinite(p.nbar_a) && std::isfinite(p.nbar_m),
          "all parameters must be finite");
  require(p.kappa_a > 0, "kappa_a must be > 0");
  require(p.gamma_m > 0, "gamma_m must be > 0");
  require(p.g_m >= 0, "g_m must be >= 0");
  require(p.kerr_magnitude > 0, "kerr_magnitude must be > 0");
  require(p.delta_a > 0, "delta_a must be > 0");
  require(p.delta_m > 0, "delta_m must be > 0");
  require(p.omega_drive >= 0, "omega_drive must be >= 0");
  require(p.nbar_a >= 0 && p.nbar_m >= 0, "thermal occupancies must be >= 0");
}

template <typename Scalar = double>
struct DerivedQuantities {
  Scalar eta;
  Scalar delta_m_prime;
  Scalar gamma_m_prime;
};

/// Auxiliary quantities of the closed-form branches:
///   eta = g^2 / (delta_a^2 + kappa_a^2 - omega^2),
///   delta_m' = delta_m - eta delta_a,  gamma_m' = gamma_m + eta kappa_a.
template <typename Scalar>
DerivedQuantities<Scalar> derived(const SystemParams<Scalar>& p, const Tolerances<Scalar>& tol = {}) {
  const Scalar den = p.delta_a * p.delta_a + p.kappa_a * p.kappa_a - p.omega_drive * p.omega_drive;
  if (!(std::abs(den) > tol.eps_den)) {
    throw Error(ErrorKind::DegenerateDenominator,
                "drive at parametric resonance (delta_a^2 + kappa_a^2 == omega^2)");
  }
  const Scalar eta = p.g_m * p.g_m / den;
  return {eta, p.delta_m - eta * p.delta_a, p.gamma_m + eta * p.kappa_a};
}

/// (A, M): cavity and magnon coherent amplitudes, in that order.
template <typename Scalar>
using Amplitudes = Eigen::Matrix<std::complex<Scalar>, 2, 1>;

/// Mean-field equations of motion. Returns (dA/dt, dM/dt).
template <typename Scalar>
Amplitudes<Scalar> mean_field_rhs(const SystemParams<Scalar>& p, std::complex<Scalar> A,
                                  std::complex<Scalar> M) {
  using C = std::complex<Scalar>;
  const C i(0, 1);
  const C a_dot = -i * C(p.delta_a, -p.kappa_a) * A - i * p.g_m * M - i * p.omega_drive * std::conj(A);
  const C m_dot = -i * C(p.delta_m, -p.gamma_m) * M - i * p.kerr() * std::norm(M) * M - i * p.g_m * A;
  return Amplitudes<Scalar>(a_dot, m_dot);
}

template <typename Scalar>
Amplitudes<Scalar> mean_field_rhs(const SystemParams<Scalar>& p, const Amplitudes<Scalar>& state) {
  return mean_field_rhs(p, state(0), state(1));
}

/// Bose-Einstein occupancy for x = hbar omega / (k_B T).
template <typename Scalar>
Scalar bose_occupancy(Scalar x) {
  if (!(x > 0)) throw Error(ErrorKind::InvalidParams, "bose_occupancy requires x > 0");
  return Scalar(1) / std::expm1(x);
}

}  // namespace magnonic
