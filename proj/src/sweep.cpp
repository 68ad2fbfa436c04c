#include "magnonic/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <string>
#include <thread>

#include "magnonic/oracle.hpp"

namespace magnonic {

double Axis::at(int i) const {
  if (count == 1) return min;
  if (i == count - 1) return max;
  return min + (max - min) * double(i) / double(count - 1);
}

double Axis::step() const { return count > 1 ? (max - min) / double(count - 1) : 0.0; }

void validate(const SweepSpec& spec) {
  validate(spec.base.with_ratio(spec.ratio.min));
  auto check_axis = [](const Axis& a, const char* name) {
    if (a.count < 1) throw Error(ErrorKind::InvalidParams, std::string(name) + " count must be >= 1");
    if (!std::isfinite(a.min) || !std::isfinite(a.max)) {
      throw Error(ErrorKind::InvalidParams, std::string(name) + " extents must be finite");
    }
    if (a.count >= 2 && !(a.min < a.max)) {
      throw Error(ErrorKind::InvalidParams, std::string(name) + " axis needs min < max");
    }
  };
  check_axis(spec.omega, "omega");
  check_axis(spec.ratio, "ratio");
  if (spec.omega.min < 0) throw Error(ErrorKind::InvalidParams, "omega axis must be >= 0");
  if (spec.ratio.min <= 0) throw Error(ErrorKind::InvalidParams, "ratio axis must be > 0");
  if (spec.jobs < 1) throw Error(ErrorKind::InvalidParams, "jobs must be >= 1");
}

SystemParams<> point_params(const SweepSpec& spec, int ratio_index, int omega_index) {
  return spec.base.with_ratio(spec.ratio.at(ratio_index)).with_drive(spec.omega.at(omega_index) * spec.base.kappa_a);
}

void parallel_for(std::size_t n, int jobs, const std::function<void(std::size_t)>& body) {
  const auto workers = static_cast<std::size_t>(std::max(1, jobs));
  if (workers == 1 || n < 2) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < n; i = next++) body(i);
  };
  std::vector<std::jthread> pool;
  pool.reserve(std::min(workers, n) - 1);
  for (std::size_t w = 1; w < std::min(workers, n); ++w) pool.emplace_back(worker);
  worker();
}

int default_jobs() {
  if (const char* env = std::getenv("MAGNONIC_JOBS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return int(v);
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : int(hw);
}

namespace {

PointError to_point_error(const Error& e) { return {e.kind(), e.what()}; }

template <typename T, typename Fn>
Grid<T> evaluate_grid(const SweepSpec& spec, Fn&& fn) {
  validate(spec);
  Grid<T> grid{spec.omega, spec.ratio, std::vector<T>(std::size_t(spec.omega.count) * spec.ratio.count)};
  parallel_for(grid.cells.size(), spec.jobs, [&](std::size_t k) {
    const int ir = int(k / spec.omega.count);
    const int io = int(k % spec.omega.count);
    grid.cells[k] = fn(point_params(spec, ir, io), ir, io);
  });
  return grid;
}

template <typename Row, typename Fn>
std::vector<Row> evaluate_cut(const SweepSpec& spec, Fn&& fn) {
  validate(spec);
  std::vector<Row> rows(std::size_t(spec.omega.count));
  parallel_for(rows.size(), spec.jobs, [&](std::size_t k) {
    rows[k] = fn(point_params(spec, 0, int(k)), int(k));
  });
  return rows;
}

}  // namespace

Grid<PhaseCell> phase_diagram(const SweepSpec& spec, KerrSign sign) {
  return evaluate_grid<PhaseCell>(spec, [&](const SystemParams<>& base, int ir, int io) {
    PhaseCell c;
    c.omega = spec.omega.at(io);
    c.ratio = spec.ratio.at(ir);
    try {
      const auto report = analyze_phase(base.with_sign(sign), spec.tol);
      c.label = report.label;
      c.marginal = report.marginal;
    } catch (const Error& e) {
      c.error = to_point_error(e);
    }
    return c;
  });
}

std::vector<CutRow> order_parameter_cut(const SweepSpec& spec) {
  return evaluate_cut<CutRow>(spec, [&](const SystemParams<>& p, int io) {
    CutRow r;
    r.omega = spec.omega.at(io);
    r.ratio = spec.ratio.at(0);
    try {
      r.pos = order_parameter(p.with_sign(KerrSign::Positive), spec.tol);
      r.neg = order_parameter(p.with_sign(KerrSign::Negative), spec.tol);
    } catch (const Error& e) {
      r.error = to_point_error(e);
    }
    return r;
  });
}

std::vector<FluctuationRow> fluctuation_cut(const SweepSpec& spec) {
  return evaluate_cut<FluctuationRow>(spec, [&](const SystemParams<>& p, int io) {
    FluctuationRow r;
    r.omega = spec.omega.at(io);
    r.ratio = spec.ratio.at(0);
    try {
      r.pos = fluctuations_for_phase(p.with_sign(KerrSign::Positive), spec.tol);
      r.neg = fluctuations_for_phase(p.with_sign(KerrSign::Negative), spec.tol);
    } catch (const Error& e) {
      r.error = to_point_error(e);
    }
    return r;
  });
}

Grid<ContrastCell> contrast_map(const SweepSpec& spec) {
  return evaluate_grid<ContrastCell>(spec, [&](const SystemParams<>& p, int ir, int io) {
    ContrastCell c;
    c.point.omega = spec.omega.at(io);
    c.point.detuning_ratio = spec.ratio.at(ir);
    try {
      c.point = evaluate_contrast(p, spec.tol);
      c.point.omega = spec.omega.at(io);
      c.point.detuning_ratio = spec.ratio.at(ir);
    } catch (const Error& e) {
      c.error = to_point_error(e);
    }
    return c;
  });
}

bool ValidationRow::verdicts_agree() const {
  switch (eigen_verdict) {
    case Verdict::Stable: return hurwitz_stable && !rk4_grows;
    case Verdict::Unstable: return !hurwitz_stable && rk4_grows;
    case Verdict::Marginal: return false;
  }
  return false;
}

namespace {

void validate_branch(const SystemParams<>& p, const BranchStability<>& b, const ValidationOptions& opt,
                     std::uint64_t seed, const Tolerances<>& tol, ValidationRow& row) {
  const auto& sol = b.solution;
  const Amplitudes<double> fixed(sol.a_amplitude, sol.m_amplitude);
  const auto drift = build_drift_matrix(p, sol.m_amplitude);

  row.eigen_verdict = *b.verdict;
  row.hurwitz_stable = routh_hurwitz_stable(characteristic_polynomial(drift));
  row.rk4_grows = probe_growth(p, fixed, seed).grows;
  row.rho_formula = scaled_occupation(p, sol.magnon_occ);
  if (!b.stable()) return;

  const Amplitudes<double> start = fixed + opt.perturbation * seeded_direction<double>(seed ^ 0x9e3779b97f4a7c15ULL);
  RelaxOptions<> relax;
  relax.dt = opt.relax_dt;
  relax.t_end = opt.relax_t_end;
  const auto settled = relax_mean_field(p, start(0), start(1), relax);
  row.oracle_converged = settled.converged;
  row.rho_oracle = scaled_occupation(p, std::norm(settled.m));
  row.rho_error = std::abs(row.rho_oracle - row.rho_formula);

  const auto diff = diffusion_matrix(p);
  const auto V = solve_lyapunov(drift, diff, tol.tol_stab);
  row.lyapunov_residual = lyapunov_residual(drift, diff, V);
  // Run long enough for the slowest covariance mode, exp(2 Re(lambda) t), to fall below 1e-7 of |V|.
  const double scale = std::max(1.0, V.cwiseAbs().maxCoeff());
  const double t_needed = (std::log(1e7 * scale) + 3.0) / (2.0 * std::abs(b.max_re));
  const double t_end = std::max(t_needed, opt.covariance_t_min);
  const auto V_ode = t_end <= opt.covariance_t_cap ? relax_covariance(drift, diff, t_end, opt.covariance_dt)
                                                   : relax_covariance_squaring(drift, diff, t_end, opt.covariance_dt);
  row.covariance_error = (V - V_ode).cwiseAbs().maxCoeff();
}

}  // namespace

std::vector<ValidationRow> validation_grid(const SweepSpec& spec, const ValidationOptions& opt) {
  validate(spec);
  const std::size_t points = std::size_t(spec.omega.count) * spec.ratio.count;
  std::vector<std::vector<ValidationRow>> per_point(points);
  parallel_for(points, spec.jobs, [&](std::size_t k) {
    const int ir = int(k / spec.omega.count);
    const int io = int(k % spec.omega.count);
    const auto base = point_params(spec, ir, io);
    for (KerrSign sign : {KerrSign::Positive, KerrSign::Negative}) {
      const auto p = base.with_sign(sign);
      ValidationRow proto;
      proto.omega = spec.omega.at(io);
      proto.ratio = spec.ratio.at(ir);
      proto.sign = sign;
      try {
        const auto all = analyze_all_branches(p, spec.tol);
        for (const auto& b : all) {
          if (!b.solution.admissible) continue;
          ValidationRow row = proto;
          row.branch = b.solution.label;
          row.considered = b.solution.label == BranchLabel::Zero || b.solution.label == physical_branch(sign);
          const std::uint64_t seed = opt.seed + 8 * k + 4 * (sign == KerrSign::Negative) + std::size_t(row.branch);
          try {
            validate_branch(p, b, opt, seed, spec.tol, row);
          } catch (const Error& e) {
            row.error = to_point_error(e);
          }
          per_point[k].push_back(row);
        }
      } catch (const Error& e) {
        proto.error = to_point_error(e);
        per_point[k].push_back(proto);
      }
    }
  });
  std::vector<ValidationRow> rows;
  for (auto& v : per_point) rows.insert(rows.end(), v.begin(), v.end());
  return rows;
}

}  // namespace magnonic
