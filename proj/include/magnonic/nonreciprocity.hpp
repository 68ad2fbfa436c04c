#pragma once

#include <cmath>
#include <limits>

#include "magnonic/error.hpp"
#include "magnonic/model.hpp"
#include "magnonic/stability.hpp"
#include "magnonic/steadystate.hpp"

namespace magnonic {

/// Reported order parameter at one point.
///
/// In the bistable window the nonzero branch is reported (`value`); the zero
/// branch, equally stable there, is the hysteresis alternative.
template <typename Scalar = double>
struct OrderParameter {
  Scalar value = 0;  // |K||M|^2/gamma_m, NaN when unstable
  PhaseLabel phase = PhaseLabel::Normal;
  bool unstable = false;
  bool marginal = false;
};

template <typename Scalar>
OrderParameter<Scalar> order_parameter(const PhaseReport<Scalar>& report, const SystemParams<Scalar>& p) {
  OrderParameter<Scalar> out;
  out.phase = report.label;
  out.marginal = report.marginal;
  switch (report.label) {
    case PhaseLabel::Normal: out.value = 0; break;
    case PhaseLabel::Superradiant:
    case PhaseLabel::Bistable: out.value = scaled_occupation(p, report.nonzero.solution.magnon_occ); break;
    case PhaseLabel::Unstable:
      out.value = std::numeric_limits<Scalar>::quiet_NaN();
      out.unstable = true;
      break;
  }
  return out;
}

template <typename Scalar>
OrderParameter<Scalar> order_parameter(const SystemParams<Scalar>& p, const Tolerances<Scalar>& tol = {}) {
  return order_parameter(analyze_phase(p, tol), p);
}

/// I = |rho+ - rho-| / (rho+ + rho-), or 0 when the two agree within eps (relative).
template <typename Scalar>
Scalar contrast_value(Scalar rho_pos, Scalar rho_neg, Scalar eps = Scalar(1e-9)) {
  const Scalar sum = rho_pos + rho_neg;
  const Scalar diff = std::abs(rho_pos - rho_neg);
  if (sum == 0 || diff <= eps * sum) return Scalar(0);
  return diff / sum;
}

template <typename Scalar = double>
struct ContrastPoint {
  Scalar omega = 0;
  Scalar detuning_ratio = 0;
  Scalar rho_pos = 0;
  Scalar rho_neg = 0;
  Scalar contrast = std::numeric_limits<Scalar>::quiet_NaN();
  PhaseLabel phase_pos = PhaseLabel::Normal;
  PhaseLabel phase_neg = PhaseLabel::Normal;
  bool excluded = false;  // either sign unstable
  bool marginal = false;
};

/// Non-throwing form: unstable points come back with `excluded` set and a NaN contrast.
template <typename Scalar>
ContrastPoint<Scalar> evaluate_contrast(const SystemParams<Scalar>& p, const Tolerances<Scalar>& tol = {}) {
  const auto pos = order_parameter(p.with_sign(KerrSign::Positive), tol);
  const auto neg = order_parameter(p.with_sign(KerrSign::Negative), tol);
  ContrastPoint<Scalar> c;
  c.omega = p.omega_drive / p.kappa_a;
  c.detuning_ratio = p.detuning_ratio();
  c.rho_pos = pos.value;
  c.rho_neg = neg.value;
  c.phase_pos = pos.phase;
  c.phase_neg = neg.phase;
  c.marginal = pos.marginal || neg.marginal;
  c.excluded = pos.unstable || neg.unstable;
  if (!c.excluded) c.contrast = contrast_value(pos.value, neg.value, tol.eps_contrast);
  return c;
}

/// Bidirectional contrast between K>0 and K<0 at otherwise identical parameters.
template <typename Scalar>
ContrastPoint<Scalar> contrast_ratio(const SystemParams<Scalar>& p, const Tolerances<Scalar>& tol = {}) {
  auto c = evaluate_contrast(p, tol);
  if (c.excluded) throw Error(ErrorKind::UnstableRegion, "a Kerr sign has no stable steady state");
  return c;
}

}  // namespace magnonic
