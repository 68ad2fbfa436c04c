#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <numbers>

#include "magnonic/error.hpp"
#include "magnonic/model.hpp"

namespace magnonic {

enum class BranchLabel { Zero, Plus, Minus };

constexpr const char* to_string(BranchLabel b) {
  switch (b) {
    case BranchLabel::Zero: return "zero";
    case BranchLabel::Plus: return "plus";
    case BranchLabel::Minus: return "minus";
  }
  return "?";
}

/// The nonzero branch sanctioned for a given Kerr sign (Plus for K>0, Minus for K<0).
constexpr BranchLabel physical_branch(KerrSign s) {
  return s == KerrSign::Positive ? BranchLabel::Plus : BranchLabel::Minus;
}

/// One candidate steady state.
///
/// Inadmissible branches keep the raw closed-form occupation (real part
/// -delta_m'/K when the discriminant is negative) so callers can see how far
/// a point is from threshold; their amplitudes are zero.
template <typename Scalar = double>
struct BranchSolution {
  BranchLabel label = BranchLabel::Zero;
  Scalar magnon_occ = 0;
  Scalar photon_occ = 0;
  std::complex<Scalar> m_amplitude{};
  std::complex<Scalar> a_amplitude{};
  Scalar discriminant = 0;
  bool admissible = true;
};

/// Photon number |A|^2 = [(delta_m + K|M|^2)^2 + gamma_m^2] |M|^2 / g^2.
template <typename Scalar>
Scalar photon_occupation(const SystemParams<Scalar>& p, const BranchSolution<Scalar>& b) {
  if (!b.admissible) throw Error(ErrorKind::InadmissibleBranch, "photon occupation of an inadmissible branch");
  if (b.label == BranchLabel::Zero) return Scalar(0);
  if (p.g_m == 0) throw Error(ErrorKind::ZeroCoupling, "photon occupation undefined for g_m == 0");
  const Scalar shifted = p.delta_m + p.kerr() * b.magnon_occ;
  return (shifted * shifted + p.gamma_m * p.gamma_m) * b.magnon_occ / (p.g_m * p.g_m);
}

/// Reconstructs the complex amplitudes (M, A) of an admissible branch.
///
/// The phase of M is fixed by e^{-2i theta} = [g^2 - (delta_a - i kappa_a)(D - i gamma_m)]
/// / [omega (D + i gamma_m)] with D = delta_m + K|M|^2, and canonicalized to [0, pi).
/// The parity partner (-M, -A) is an equally valid fixed point.
template <typename Scalar>
Amplitudes<Scalar> mean_field_amplitudes(const SystemParams<Scalar>& p, const BranchSolution<Scalar>& b,
                                         const Tolerances<Scalar>& tol = {}) {
  using C = std::complex<Scalar>;
  if (!b.admissible) throw Error(ErrorKind::InadmissibleBranch, "amplitudes of an inadmissible branch");
  if (b.label == BranchLabel::Zero || b.magnon_occ == 0) return Amplitudes<Scalar>(C(0), C(0));
  if (p.g_m == 0) throw Error(ErrorKind::ZeroCoupling, "amplitude relation requires g_m > 0");
  if (p.omega_drive == 0) throw Error(ErrorKind::PhaseInconsistent, "no phase locking without drive");

  const Scalar shifted = p.delta_m + p.kerr() * b.magnon_occ;
  const C numerator = C(p.g_m * p.g_m) - C(p.delta_a, -p.kappa_a) * C(shifted, -p.gamma_m);
  const C phase_factor = numerator / (p.omega_drive * C(shifted, p.gamma_m));
  if (std::abs(std::abs(phase_factor) - Scalar(1)) > tol.tol_phase) {
    throw Error(ErrorKind::PhaseInconsistent, "|M|^2 does not close the phase equation");
  }
  Scalar theta = -std::arg(phase_factor) / 2;
  if (theta < 0) theta += std::numbers::pi_v<Scalar>;
  if (theta >= std::numbers::pi_v<Scalar>) theta -= std::numbers::pi_v<Scalar>;

  const C M = std::polar(std::sqrt(b.magnon_occ), theta);
  const C A = -C(shifted, -p.gamma_m) * M / p.g_m;
  return Amplitudes<Scalar>(A, M);
}

/// The three closed-form steady states: Zero, then Plus and Minus from
/// |M|^2 = (-delta_m' +/- sqrt(eta^2 omega^2 - gamma_m'^2)) / K.
template <typename Scalar>
std::array<BranchSolution<Scalar>, 3> magnon_branches(const SystemParams<Scalar>& p,
                                                      const Tolerances<Scalar>& tol = {}) {
  const auto d = derived(p, tol);
  const Scalar K = p.kerr();
  const Scalar disc = d.eta * d.eta * p.omega_drive * p.omega_drive - d.gamma_m_prime * d.gamma_m_prime;

  std::array<BranchSolution<Scalar>, 3> out;
  out[0].label = BranchLabel::Zero;
  out[0].discriminant = disc;

  const BranchLabel labels[2] = {BranchLabel::Plus, BranchLabel::Minus};
  for (int k = 0; k < 2; ++k) {
    auto& b = out[k + 1];
    b.label = labels[k];
    b.discriminant = disc;
    if (disc < 0) {
      b.magnon_occ = -d.delta_m_prime / K;
      b.admissible = false;
      continue;
    }
    const Scalar root = std::sqrt(disc);
    b.magnon_occ = (-d.delta_m_prime + (k == 0 ? root : -root)) / K;
    b.admissible = b.magnon_occ > 0;
    if (!b.admissible || p.g_m == 0) continue;
    const auto amps = mean_field_amplitudes(p, b, tol);
    b.a_amplitude = amps(0);
    b.m_amplitude = amps(1);
    b.photon_occ = photon_occupation(p, b);
  }
  return out;
}

template <typename Scalar>
const BranchSolution<Scalar>& branch(const std::array<BranchSolution<Scalar>, 3>& all, BranchLabel label) {
  return all[static_cast<std::size_t>(label)];
}

/// Detuning ratio delta_m/delta_a at which the two drive thresholds coincide.
template <typename Scalar>
Scalar critical_xi(const SystemParams<Scalar>& p) {
  if (!(p.g_m > 0)) throw Error(ErrorKind::ZeroCoupling, "critical ratio requires g_m > 0");
  const Scalar k = p.kappa_a, g = p.gamma_m, g2 = p.g_m * p.g_m;
  const Scalar radicand = 4 * (p.delta_a * p.delta_a + k * k) * g * g + (4 * k * g + g2) * g2;
  return 2 * g * g / (std::sqrt(radicand) - (2 * k * g + g2));
}

/// Lowest drive at which the nonzero branches become real (discriminant zero).
template <typename Scalar>
Scalar omega_1(const SystemParams<Scalar>& p) {
  if (!(p.gamma_m > 0)) throw Error(ErrorKind::InvalidParams, "omega_1 requires gamma_m > 0");
  const Scalar k = p.kappa_a, g = p.gamma_m, g2 = p.g_m * p.g_m;
  return std::sqrt(p.delta_a * p.delta_a + k * k + (4 * k * g + g2) * g2 / (4 * g * g)) - g2 / (2 * g);
}

/// Drive at which a nonzero branch passes through |M|^2 = 0 (zero branch loses stability).
template <typename Scalar>
Scalar omega_2(const SystemParams<Scalar>& p) {
  const Scalar dm = p.delta_m, g = p.gamma_m, k = p.kappa_a, g2 = p.g_m * p.g_m;
  const Scalar scale = dm * dm + g * g;
  if (!(scale > 0)) throw Error(ErrorKind::InvalidParams, "omega_2 requires delta_m^2 + gamma_m^2 > 0");
  const Scalar radicand = p.delta_a * p.delta_a + k * k - (2 * p.delta_a * dm - 2 * k * g - g2) * g2 / scale;
  if (radicand < 0) throw Error(ErrorKind::NoRealThreshold, "omega_2 radicand is negative");
  return std::sqrt(radicand);
}

/// Branch-existence verdicts from the threshold table. `plus_considered` /
/// `minus_considered` mark which nonzero branch the table covers for this sign;
/// the other one is reported as not admissible.
struct Admissibility {
  bool zero = true;
  bool plus = false;
  bool minus = false;
  bool plus_considered = false;
  bool minus_considered = false;
};

/// The drive threshold above which the sign-appropriate branch exists.
template <typename Scalar>
Scalar existence_threshold(const SystemParams<Scalar>& p) {
  const bool below_xi = p.detuning_ratio() < critical_xi(p);
  const bool use_omega_1 = (p.kerr_sign == KerrSign::Positive) == below_xi;
  return use_omega_1 ? omega_1(p) : omega_2(p);
}

template <typename Scalar>
Admissibility admissibility(const SystemParams<Scalar>& p) {
  Admissibility a;
  const bool exists = p.omega_drive > existence_threshold(p);
  if (p.kerr_sign == KerrSign::Positive) {
    a.plus_considered = true;
    a.plus = exists;
  } else {
    a.minus_considered = true;
    a.minus = exists;
  }
  return a;
}

/// Scaled order parameter |K||M|^2/gamma_m, independent of |K|.
template <typename Scalar>
Scalar scaled_occupation(const SystemParams<Scalar>& p, Scalar magnon_occ) {
  return p.kerr_magnitude * magnon_occ / p.gamma_m;
}

}  // namespace magnonic
