#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "magnonic/fluctuations.hpp"
#include "magnonic/model.hpp"
#include "magnonic/nonreciprocity.hpp"
#include "magnonic/stability.hpp"

namespace magnonic {

/// Uniform axis of `count` points from `min` to `max` inclusive. A count of 1
/// pins the axis at `min` (a fixed value for 1-D cuts).
struct Axis {
  double min = 0;
  double max = 0;
  int count = 1;

  double at(int i) const;
  double step() const;
  bool fixed() const { return count == 1; }
};

struct SweepSpec {
  Axis omega{1.8, 2.4, 2000};  // drive, units of kappa_a
  Axis ratio{1.3, 1.3, 1};     // delta_m / delta_a
  SystemParams<> base;         // delta_a, kappa_a, gamma_m, g_m, |K|, nbar
  Tolerances<> tol;
  int jobs = 1;
};

/// Throws InvalidParams for malformed axes or base parameters.
void validate(const SweepSpec& spec);

/// Parameters at grid index (ratio row, omega column).
SystemParams<> point_params(const SweepSpec& spec, int ratio_index, int omega_index);

/// Runs body(i) for i in [0, n) on `jobs` workers. Each index is visited once;
/// callers write into preallocated slots, so results never depend on scheduling.
void parallel_for(std::size_t n, int jobs, const std::function<void(std::size_t)>& body);

/// MAGNONIC_JOBS if set and positive, otherwise the hardware concurrency.
int default_jobs();

/// Row-major (ratio, omega) grid.
template <typename T>
struct Grid {
  Axis omega;
  Axis ratio;
  std::vector<T> cells;

  T& at(int ratio_index, int omega_index) { return cells[std::size_t(ratio_index) * omega.count + omega_index]; }
  const T& at(int ratio_index, int omega_index) const {
    return cells[std::size_t(ratio_index) * omega.count + omega_index];
  }
};

/// Per-point failure recorded in place of a result (e.g. the parametric singularity).
struct PointError {
  ErrorKind kind;
  std::string message;
};

struct PhaseCell {
  double omega = 0;
  double ratio = 0;
  std::optional<PhaseLabel> label;
  bool marginal = false;
  std::optional<PointError> error;
};

Grid<PhaseCell> phase_diagram(const SweepSpec& spec, KerrSign sign);

struct CutRow {
  double omega = 0;
  double ratio = 0;
  OrderParameter<> pos;
  OrderParameter<> neg;
  std::optional<PointError> error;
};

/// Order parameter of both Kerr signs along the omega axis at the first ratio.
std::vector<CutRow> order_parameter_cut(const SweepSpec& spec);

struct FluctuationRow {
  double omega = 0;
  double ratio = 0;
  PhaseFluctuations<> pos;
  PhaseFluctuations<> neg;
  std::optional<PointError> error;
};

std::vector<FluctuationRow> fluctuation_cut(const SweepSpec& spec);

struct ContrastCell {
  ContrastPoint<> point;
  std::optional<PointError> error;
};

Grid<ContrastCell> contrast_map(const SweepSpec& spec);

/// One (point, sign, branch) comparison of the closed-form pipeline against
/// the brute-force oracles.
struct ValidationRow {
  double omega = 0;
  double ratio = 0;
  KerrSign sign = KerrSign::Positive;
  BranchLabel branch = BranchLabel::Zero;
  bool considered = true;  // sanctioned by the threshold table for this sign
  Verdict eigen_verdict = Verdict::Stable;
  bool hurwitz_stable = false;
  bool rk4_grows = false;
  double rho_formula = 0;
  double rho_oracle = std::numeric_limits<double>::quiet_NaN();
  double rho_error = std::numeric_limits<double>::quiet_NaN();
  double covariance_error = std::numeric_limits<double>::quiet_NaN();
  double lyapunov_residual = std::numeric_limits<double>::quiet_NaN();
  bool oracle_converged = false;
  std::optional<PointError> error;

  /// Eigenvalue verdict matches both the Hurwitz test and the RK4 growth probe.
  bool verdicts_agree() const;
};

struct ValidationOptions {
  double relax_dt = 1e-3;
  double relax_t_end = 4000;
  double perturbation = 1e-3;
  double covariance_dt = 5e-3;
  double covariance_t_min = 50;
  double covariance_t_cap = 2000;  // beyond this, the RK4 map is composed by squaring
  std::uint64_t seed = 20240601;
};

/// Every admissible branch of both signs at every grid point.
std::vector<ValidationRow> validation_grid(const SweepSpec& spec, const ValidationOptions& opt = {});

}  // namespace magnonic
