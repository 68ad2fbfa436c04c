#pragma once

#include <algorithm>
#include <array>
#include <complex>
#include <limits>
#include <optional>

#include <Eigen/Core>
#include <Eigen/Eigenvalues>

#include "magnonic/error.hpp"
#include "magnonic/model.hpp"
#include "magnonic/steadystate.hpp"

namespace magnonic {

/// Linearized quadrature dynamics, basis (x_a, y_a, x_m, y_m).
template <typename Scalar>
using DriftMatrix = Eigen::Matrix<Scalar, 4, 4>;

template <typename Scalar>
using Spectrum = Eigen::Matrix<std::complex<Scalar>, 4, 1>;

/// Drift matrix about the mean-field amplitude M, with D~ = delta_m + 2K|M|^2 and F = K M^2.
template <typename Scalar>
DriftMatrix<Scalar> build_drift_matrix(const SystemParams<Scalar>& p, std::complex<Scalar> m_amplitude) {
  const Scalar K = p.kerr();
  const Scalar dressed = p.delta_m + 2 * K * std::norm(m_amplitude);
  const std::complex<Scalar> F = K * m_amplitude * m_amplitude;
  const Scalar ka = p.kappa_a, gm = p.gamma_m, g = p.g_m, da = p.delta_a, om = p.omega_drive;
  const Scalar z(0);

  DriftMatrix<Scalar> L;
  // clang-format off
  L <<  -ka,       da - om,  z,                     g,
        -da - om, -ka,      -g,                     z,
         z,        g,       -gm + F.imag(),         dressed - F.real(),
        -g,        z,       -dressed - F.real(),   -gm - F.imag();
  // clang-format on
  return L;
}

/// All four eigenvalues via Hessenberg reduction and shifted QR.
template <typename Derived>
Spectrum<typename Derived::Scalar> eigenvalues(const Eigen::MatrixBase<Derived>& matrix) {
  using Scalar = typename Derived::Scalar;
  Eigen::EigenSolver<DriftMatrix<Scalar>> solver(matrix.derived(), /*computeEigenvectors=*/false);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorKind::ConvergenceFailure, "QR iteration did not converge");
  }
  return solver.eigenvalues();
}

template <typename Scalar>
Scalar max_real_part(const Spectrum<Scalar>& spectrum) {
  return spectrum.real().maxCoeff();
}

enum class Verdict { Stable, Marginal, Unstable };

constexpr const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Stable: return "stable";
    case Verdict::Marginal: return "marginal";
    case Verdict::Unstable: return "unstable";
  }
  return "?";
}

template <typename Scalar>
Verdict verdict_from_growth(Scalar max_re, Scalar tol_stab) {
  if (max_re < -tol_stab) return Verdict::Stable;
  if (max_re > tol_stab) return Verdict::Unstable;
  return Verdict::Marginal;
}

template <typename Derived>
Verdict stability_verdict(const Eigen::MatrixBase<Derived>& matrix,
                          typename Derived::Scalar tol_stab = typename Derived::Scalar(1e-9)) {
  return verdict_from_growth(max_real_part(eigenvalues(matrix)), tol_stab);
}

/// True iff max Re(lambda) < -tol_stab; marginal points are not stable.
template <typename Derived>
bool is_stable(const Eigen::MatrixBase<Derived>& matrix,
               typename Derived::Scalar tol_stab = typename Derived::Scalar(1e-9)) {
  return stability_verdict(matrix, tol_stab) == Verdict::Stable;
}

enum class PhaseLabel { Normal, Superradiant, Bistable, Unstable };

constexpr const char* to_string(PhaseLabel p) {
  switch (p) {
    case PhaseLabel::Normal: return "normal";
    case PhaseLabel::Superradiant: return "superradiant";
    case PhaseLabel::Bistable: return "bistable";
    case PhaseLabel::Unstable: return "unstable";
  }
  return "?";
}

template <typename Scalar = double>
struct BranchStability {
  BranchSolution<Scalar> solution;
  std::optional<Verdict> verdict;  // empty for inadmissible branches
  Scalar max_re = std::numeric_limits<Scalar>::quiet_NaN();
  Spectrum<Scalar> spectrum = Spectrum<Scalar>::Constant(std::numeric_limits<Scalar>::quiet_NaN());

  bool stable() const { return verdict == Verdict::Stable; }
};

template <typename Scalar>
BranchStability<Scalar> analyze_branch(const SystemParams<Scalar>& p, const BranchSolution<Scalar>& b,
                                       const Tolerances<Scalar>& tol = {}) {
  BranchStability<Scalar> out;
  out.solution = b;
  if (!b.admissible) return out;
  out.spectrum = eigenvalues(build_drift_matrix(p, b.m_amplitude));
  out.max_re = max_real_part(out.spectrum);
  out.verdict = verdict_from_growth(out.max_re, tol.tol_stab);
  return out;
}

/// Classification of one parameter point together with the evidence behind it.
template <typename Scalar = double>
struct PhaseReport {
  PhaseLabel label = PhaseLabel::Normal;
  BranchStability<Scalar> zero;
  BranchStability<Scalar> nonzero;  // the sign-appropriate branch
  bool marginal = false;            // some evaluated branch sits inside the marginal band
};

inline PhaseLabel label_from(bool zero_stable, bool nonzero_stable) {
  if (zero_stable && nonzero_stable) return PhaseLabel::Bistable;
  if (zero_stable) return PhaseLabel::Normal;
  if (nonzero_stable) return PhaseLabel::Superradiant;
  return PhaseLabel::Unstable;
}

/// Evaluates the Zero branch and the branch sanctioned for the Kerr sign.
template <typename Scalar>
PhaseReport<Scalar> analyze_phase(const SystemParams<Scalar>& p, const Tolerances<Scalar>& tol = {}) {
  const auto all = magnon_branches(p, tol);
  PhaseReport<Scalar> r;
  r.zero = analyze_branch(p, branch(all, BranchLabel::Zero), tol);
  r.nonzero = analyze_branch(p, branch(all, physical_branch(p.kerr_sign)), tol);
  r.marginal = r.zero.verdict == Verdict::Marginal || r.nonzero.verdict == Verdict::Marginal;
  r.label = label_from(r.zero.stable(), r.nonzero.stable());
  return r;
}

template <typename Scalar>
PhaseLabel classify_phase(const SystemParams<Scalar>& p, const Tolerances<Scalar>& tol = {}) {
  return analyze_phase(p, tol).label;
}

/// Diagnostic mode: stability of all three branches, including the one the
/// classifier never considers for this Kerr sign.
template <typename Scalar>
std::array<BranchStability<Scalar>, 3> analyze_all_branches(const SystemParams<Scalar>& p,
                                                            const Tolerances<Scalar>& tol = {}) {
  const auto all = magnon_branches(p, tol);
  return {analyze_branch(p, all[0], tol), analyze_branch(p, all[1], tol), analyze_branch(p, all[2], tol)};
}

}  // namespace magnonic
