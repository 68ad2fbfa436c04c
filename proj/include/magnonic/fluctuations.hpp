#pragma once

#include <cmath>
#include <limits>
#include <optional>

#include <Eigen/Core>
#include <Eigen/LU>

#include "magnonic/error.hpp"
#include "magnonic/model.hpp"
#include "magnonic/stability.hpp"

namespace magnonic {

template <typename Scalar>
using DiffusionMatrix = Eigen::DiagonalMatrix<Scalar, 4>;

template <typename Scalar>
using CovarianceMatrix = Eigen::Matrix<Scalar, 4, 4>;

/// Input-noise diffusion diag[(2 nbar_a + 1) kappa_a (x2), (2 nbar_m + 1) gamma_m (x2)].
template <typename Scalar>
DiffusionMatrix<Scalar> diffusion_matrix(const SystemParams<Scalar>& p) {
  const Scalar da = (2 * p.nbar_a + 1) * p.kappa_a;
  const Scalar dm = (2 * p.nbar_m + 1) * p.gamma_m;
  return DiffusionMatrix<Scalar>(da, da, dm, dm);
}

/// max |L V + V L^T + D|
template <typename Scalar>
Scalar lyapunov_residual(const DriftMatrix<Scalar>& drift, const DiffusionMatrix<Scalar>& diff,
                         const CovarianceMatrix<Scalar>& V) {
  CovarianceMatrix<Scalar> r = drift * V + V * drift.transpose();
  r.diagonal() += diff.diagonal();
  return r.cwiseAbs().maxCoeff();
}

/// Steady-state covariance from L V + V L^T = -D.
///
/// Solved as the 16x16 system (I (x) L + L (x) I) vec(V) = -vec(D) with
/// partially pivoted LU and two rounds of iterative refinement, then
/// symmetrized. Requires a strictly stable drift.
template <typename Scalar>
CovarianceMatrix<Scalar> solve_lyapunov(const DriftMatrix<Scalar>& drift, const DiffusionMatrix<Scalar>& diff,
                                        Scalar tol_stab = Scalar(1e-9)) {
  const Verdict v = stability_verdict(drift, tol_stab);
  if (v == Verdict::Unstable) throw Error(ErrorKind::UnstableDrift, "Lyapunov equation needs a stable drift");
  if (v == Verdict::Marginal) throw Error(ErrorKind::SingularSystem, "drift is marginally stable");

  using Mat16 = Eigen::Matrix<Scalar, 16, 16>;
  using Vec16 = Eigen::Matrix<Scalar, 16, 1>;
  const auto I4 = DriftMatrix<Scalar>::Identity();

  // Column-major vec: vec(L V) = (I (x) L) vec V, vec(V L^T) = (L (x) I) vec V.
  Mat16 op;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) op.template block<4, 4>(4 * i, 4 * j) = I4(i, j) * drift + drift(i, j) * I4;

  Vec16 rhs = Vec16::Zero();
  for (int k = 0; k < 4; ++k) rhs(5 * k) = -diff.diagonal()(k);

  Eigen::PartialPivLU<Mat16> lu(op);
  if (!(lu.rcond() > Scalar(16) * Eigen::NumTraits<Scalar>::epsilon())) {
    throw Error(ErrorKind::SingularSystem, "Lyapunov operator is numerically singular");
  }
  Vec16 x = lu.solve(rhs);
  for (int refine = 0; refine < 2; ++refine) x += lu.solve(rhs - op * x);

  CovarianceMatrix<Scalar> V = Eigen::Map<const CovarianceMatrix<Scalar>>(x.data());
  return (V + V.transpose()) / Scalar(2);
}

/// True when the slowest mode is inside the near-marginal band, where V grows like 1/|Re lambda|.
template <typename Scalar>
bool near_marginal(const DriftMatrix<Scalar>& drift, Scalar band = Scalar(1e-6)) {
  return max_real_part(eigenvalues(drift)) > -band;
}

/// <dm^dag dm> = [(V33 + V44) - 1] / 2
template <typename Scalar>
Scalar magnon_fluctuations(const CovarianceMatrix<Scalar>& V) {
  return (V(2, 2) + V(3, 3) - Scalar(1)) / Scalar(2);
}

template <typename Scalar>
Scalar cavity_fluctuations(const CovarianceMatrix<Scalar>& V) {
  return (V(0, 0) + V(1, 1) - Scalar(1)) / Scalar(2);
}

template <typename Scalar = double>
struct BranchFluctuations {
  std::optional<Scalar> occupation;  // empty unless the branch is stable
  Scalar residual = std::numeric_limits<Scalar>::quiet_NaN();
  bool near_marginal = false;
};

/// Magnon fluctuations on top of the stable mean-field solutions of one point.
///
/// `reported` follows the order-parameter convention: the zero branch in the
/// normal phase, the nonzero branch in the superradiant and bistable phases,
/// NaN when nothing is stable.
template <typename Scalar = double>
struct PhaseFluctuations {
  PhaseLabel phase = PhaseLabel::Normal;
  Scalar reported = std::numeric_limits<Scalar>::quiet_NaN();
  BranchFluctuations<Scalar> zero;
  BranchFluctuations<Scalar> nonzero;
};

template <typename Scalar>
BranchFluctuations<Scalar> branch_fluctuations(const SystemParams<Scalar>& p, const BranchStability<Scalar>& b,
                                               const Tolerances<Scalar>& tol = {}) {
  BranchFluctuations<Scalar> out;
  if (!b.stable()) return out;
  const auto drift = build_drift_matrix(p, b.solution.m_amplitude);
  const auto diff = diffusion_matrix(p);
  const auto V = solve_lyapunov(drift, diff, tol.tol_stab);
  out.occupation = magnon_fluctuations(V);
  out.residual = lyapunov_residual(drift, diff, V);
  out.near_marginal = b.max_re > -tol.near_marginal;
  return out;
}

template <typename Scalar>
PhaseFluctuations<Scalar> fluctuations_for_phase(const SystemParams<Scalar>& p, const Tolerances<Scalar>& tol = {}) {
  const auto report = analyze_phase(p, tol);
  PhaseFluctuations<Scalar> out;
  out.phase = report.label;
  out.zero = branch_fluctuations(p, report.zero, tol);
  out.nonzero = branch_fluctuations(p, report.nonzero, tol);
  switch (report.label) {
    case PhaseLabel::Normal: out.reported = *out.zero.occupation; break;
    case PhaseLabel::Superradiant:
    case PhaseLabel::Bistable: out.reported = *out.nonzero.occupation; break;
    case PhaseLabel::Unstable: break;
  }
  return out;
}

/// lg(n + 1), the plotted fluctuation scale.
template <typename Scalar>
Scalar log_fluctuations(Scalar n) {
  return std::log10(n + Scalar(1));
}

}  // namespace magnonic
