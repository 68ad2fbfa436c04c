#pragma once

#include <cmath>
#include <random>

#include "magnonic/model.hpp"

namespace magnonic::testing {

/// Operating point used throughout the phase diagrams: delta_a = 3, g = 2.4,
/// gamma_m = 1, all in units of kappa_a.
inline SystemParams<> reference(double omega, double ratio, KerrSign sign = KerrSign::Positive) {
  SystemParams<> p;
  p.delta_a = 3.0;
  p.kappa_a = 1.0;
  p.gamma_m = 1.0;
  p.g_m = 2.4;
  p.kerr_magnitude = 1.0;
  p.kerr_sign = sign;
  p.omega_drive = omega;
  p.delta_m = ratio * p.delta_a;
  return p;
}

/// Random physical parameters for property checks.
inline SystemParams<> random_params(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> pos(0.1, 5.0), rate(0.1, 3.0), coupling(0.0, 4.0), drive(0.0, 4.0),
      kerr(0.01, 10.0);
  SystemParams<> p;
  p.delta_a = pos(rng);
  p.delta_m = pos(rng);
  p.kappa_a = rate(rng);
  p.gamma_m = rate(rng);
  p.g_m = coupling(rng);
  p.omega_drive = drive(rng);
  p.kerr_magnitude = kerr(rng);
  p.kerr_sign = (rng() & 1) ? KerrSign::Positive : KerrSign::Negative;
  return p;
}

/// Random (A, M) with every real and imaginary part drawn from `u`.
inline Amplitudes<double> random_state(std::mt19937_64& rng, std::uniform_real_distribution<double>& u) {
  const double ar = u(rng), ai = u(rng), mr = u(rng), mi = u(rng);
  return Amplitudes<double>(std::complex<double>(ar, ai), std::complex<double>(mr, mi));
}

}  // namespace magnonic::testing
