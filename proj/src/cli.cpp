#include "magnonic/cli.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "magnonic/fluctuations.hpp"
#include "magnonic/nonreciprocity.hpp"
#include "magnonic/oracle.hpp"
#include "magnonic/stability.hpp"
#include "magnonic/steadystate.hpp"
#include "magnonic/sweep.hpp"
#include "magnonic/table.hpp"

namespace magnonic::cli {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Every value a run depends on, in the user's units (before normalization by kappa_a).
struct Settings {
  double delta_a = 3;
  double ratio = 1.3;
  double kappa_a = 1;
  double gamma_m = 1;
  double g_m = 2.4;
  std::string kerr_sign = "both";
  double kerr_abs = 1;
  double omega = 2.2;
  double nbar_a = 0;
  double nbar_m = 0;

  std::optional<double> omega_min, omega_max, ratio_min, ratio_max;
  std::optional<int> omega_count, ratio_count;

  Tolerances<> tol;

  double relax_dt = 1e-3;
  double relax_t_end = 4000;
  std::uint64_t seed = 20240601;
  std::string direction = "both";

  std::string out = "-";
  std::string format = "csv";
  int jobs = 0;  // 0: MAGNONIC_JOBS, then hardware concurrency
};

struct GridDefaults {
  Axis omega;
  Axis ratio;
  bool ratio_swept;
};

GridDefaults defaults_for(const std::string& command) {
  if (command == "phase-diagram" || command == "contrast") return {{1.5, 3.0, 400}, {0.5, 1.5, 400}, true};
  if (command == "oracle") return {{1.8, 2.4, 20}, {0.6, 1.4, 20}, true};
  if (command == "hysteresis") return {{1.8, 2.4, 121}, {}, false};
  return {{1.8, 2.4, 2000}, {}, false};
}

std::vector<KerrSign> signs_of(const std::string& s) {
  if (s == "+" || s == "pos" || s == "positive") return {KerrSign::Positive};
  if (s == "-" || s == "neg" || s == "negative") return {KerrSign::Negative};
  return {KerrSign::Positive, KerrSign::Negative};
}

SystemParams<> base_params(const Settings& s) {
  if (!(s.kappa_a > 0) || !std::isfinite(s.kappa_a)) throw Error(ErrorKind::InvalidParams, "kappa_a must be > 0");
  SystemParams<> p;
  const double k = s.kappa_a;
  p.delta_a = s.delta_a / k;
  p.delta_m = s.ratio * s.delta_a / k;
  p.kappa_a = 1;
  p.gamma_m = s.gamma_m / k;
  p.g_m = s.g_m / k;
  p.kerr_sign = signs_of(s.kerr_sign).front();
  p.kerr_magnitude = s.kerr_abs / k;
  p.omega_drive = s.omega / k;
  p.nbar_a = s.nbar_a;
  p.nbar_m = s.nbar_m;
  validate(p);
  return p;
}

SweepSpec sweep_spec(const Settings& s, const std::string& command, int jobs) {
  const GridDefaults d = defaults_for(command);
  SweepSpec spec;
  spec.base = base_params(s);
  spec.tol = s.tol;
  spec.jobs = jobs;
  spec.omega = {s.omega_min.value_or(d.omega.min * s.kappa_a) / s.kappa_a,
                s.omega_max.value_or(d.omega.max * s.kappa_a) / s.kappa_a, s.omega_count.value_or(d.omega.count)};
  if (d.ratio_swept) {
    spec.ratio = {s.ratio_min.value_or(d.ratio.min), s.ratio_max.value_or(d.ratio.max),
                  s.ratio_count.value_or(d.ratio.count)};
  } else {
    spec.ratio = {s.ratio, s.ratio, 1};
  }
  validate(spec);
  return spec;
}

long long flag(bool b) { return b ? 1 : 0; }

std::string error_name(const std::optional<PointError>& e) { return e ? std::string(to_string(e->kind)) : std::string(); }

template <typename T>
double value_or_nan(const std::optional<T>& v) {
  return v ? double(*v) : kNaN;
}

double nan_max(double a, double b) {
  if (std::isnan(a)) return b;
  if (std::isnan(b)) return a;
  return std::max(a, b);
}

Table branches_table(const Settings& s) {
  Table t;
  t.columns = {"kerr",  "omega", "ratio", "branch", "considered", "admissible", "discriminant", "magnon_occ",
               "rho",   "photon_occ", "a_re", "a_im", "m_re", "m_im", "verdict", "max_re_lambda"};
  for (KerrSign sign : signs_of(s.kerr_sign)) {
    const auto p = base_params(s).with_sign(sign);
    const auto all = analyze_all_branches(p, s.tol);
    for (const auto& b : all) {
      const auto& sol = b.solution;
      const bool considered = sol.label == BranchLabel::Zero || sol.label == physical_branch(sign);
      const bool ok = sol.admissible;
      t.add({to_string(sign), p.omega_drive, p.detuning_ratio(), to_string(sol.label), flag(considered),
             flag(ok), sol.discriminant, sol.magnon_occ, scaled_occupation(p, sol.magnon_occ),
             ok ? sol.photon_occ : kNaN, ok ? sol.a_amplitude.real() : kNaN, ok ? sol.a_amplitude.imag() : kNaN,
             ok ? sol.m_amplitude.real() : kNaN, ok ? sol.m_amplitude.imag() : kNaN,
             b.verdict ? to_string(*b.verdict) : "n/a", b.max_re});
    }
  }
  return t;
}

Table thresholds_table(const Settings& s) {
  const auto p = base_params(s);
  Table t;
  t.columns = {"ratio", "xi", "omega_1", "omega_2", "threshold_pos", "threshold_neg"};
  t.add({p.detuning_ratio(), critical_xi(p), omega_1(p), omega_2(p),
         existence_threshold(p.with_sign(KerrSign::Positive)), existence_threshold(p.with_sign(KerrSign::Negative))});
  return t;
}

Table phase_table(const Settings& s, const SweepSpec& spec) {
  Table t;
  t.columns = {"kerr", "omega", "ratio", "phase", "marginal", "error"};
  for (KerrSign sign : signs_of(s.kerr_sign)) {
    const auto grid = phase_diagram(spec, sign);
    for (const auto& c : grid.cells) {
      t.add({to_string(sign), c.omega, c.ratio, c.label ? to_string(*c.label) : "error", flag(c.marginal),
             error_name(c.error)});
    }
  }
  return t;
}

Table cut_table(const SweepSpec& spec) {
  Table t;
  t.columns = {"omega", "ratio", "rho_pos", "rho_neg", "phase_pos", "phase_neg", "marginal_pos", "marginal_neg",
               "error"};
  for (const auto& r : order_parameter_cut(spec)) {
    if (r.error) {
      t.add({r.omega, r.ratio, kNaN, kNaN, "error", "error", 0LL, 0LL, error_name(r.error)});
      continue;
    }
    t.add({r.omega, r.ratio, r.pos.value, r.neg.value, to_string(r.pos.phase), to_string(r.neg.phase),
           flag(r.pos.marginal), flag(r.neg.marginal), std::string()});
  }
  return t;
}

Table fluctuation_table(const SweepSpec& spec) {
  Table t;
  t.columns = {"omega",        "ratio",           "phase_pos",      "phase_neg",         "n_pos",
               "n_neg",        "lg_pos",          "lg_neg",         "n_zero_pos",        "n_nonzero_pos",
               "n_zero_neg",   "n_nonzero_neg",   "residual_pos",   "residual_neg",      "near_marginal_pos",
               "near_marginal_neg", "error"};
  for (const auto& r : fluctuation_cut(spec)) {
    if (r.error) {
      t.add({r.omega, r.ratio, "error", "error", kNaN, kNaN, kNaN, kNaN, kNaN, kNaN, kNaN, kNaN, kNaN, kNaN, 0LL,
             0LL, error_name(r.error)});
      continue;
    }
    const auto& a = r.pos;
    const auto& b = r.neg;
    t.add({r.omega, r.ratio, to_string(a.phase), to_string(b.phase), a.reported, b.reported,
           log_fluctuations(a.reported), log_fluctuations(b.reported), value_or_nan(a.zero.occupation),
           value_or_nan(a.nonzero.occupation), value_or_nan(b.zero.occupation), value_or_nan(b.nonzero.occupation),
           nan_max(a.zero.residual, a.nonzero.residual), nan_max(b.zero.residual, b.nonzero.residual),
           flag(a.zero.near_marginal || a.nonzero.near_marginal), flag(b.zero.near_marginal || b.nonzero.near_marginal),
           std::string()});
  }
  return t;
}

Table contrast_table(const SweepSpec& spec) {
  Table t;
  t.columns = {"omega",     "ratio",     "rho_pos",  "rho_neg",  "contrast",
               "phase_pos", "phase_neg", "excluded", "marginal", "error"};
  const auto grid = contrast_map(spec);
  for (int ir = 0; ir < grid.ratio.count; ++ir) {
    for (int io = 0; io < grid.omega.count; ++io) {
      const auto& c = grid.at(ir, io);
      if (c.error) {
        t.add({grid.omega.at(io), grid.ratio.at(ir), kNaN, kNaN, kNaN, "error", "error", 1LL, 0LL,
               error_name(c.error)});
        continue;
      }
      const auto& pt = c.point;
      t.add({pt.omega, pt.detuning_ratio, pt.rho_pos, pt.rho_neg, pt.contrast, to_string(pt.phase_pos),
             to_string(pt.phase_neg), flag(pt.excluded), flag(pt.marginal), std::string()});
    }
  }
  return t;
}

Table oracle_table(const Settings& s, const SweepSpec& spec, std::ostream& err) {
  ValidationOptions opt;
  opt.relax_dt = s.relax_dt;
  opt.relax_t_end = s.relax_t_end;
  opt.seed = s.seed;
  const auto rows = validation_grid(spec, opt);

  Table t;
  t.columns = {"kerr",           "omega",           "ratio",          "branch",           "considered",
               "eigen_verdict",  "hurwitz_stable",  "rk4_grows",      "verdicts_agree",   "rho_formula",
               "rho_oracle",     "rho_error",       "covariance_error", "lyapunov_residual", "oracle_converged",
               "error"};
  double worst_rho = 0, worst_cov = 0;
  long long disagreements = 0;
  for (const auto& r : rows) {
    t.add({to_string(r.sign), r.omega, r.ratio, to_string(r.branch), flag(r.considered), to_string(r.eigen_verdict),
           flag(r.hurwitz_stable), flag(r.rk4_grows), flag(r.verdicts_agree()), r.rho_formula, r.rho_oracle,
           r.rho_error, r.covariance_error, r.lyapunov_residual, flag(r.oracle_converged), error_name(r.error)});
    worst_rho = nan_max(worst_rho, r.rho_error);
    worst_cov = nan_max(worst_cov, r.covariance_error);
    if (!r.error && !r.verdicts_agree()) ++disagreements;
  }
  err << fmt::format("oracle: {} rows, max rho error {}, max covariance error {}, verdict disagreements {}\n",
                     rows.size(), format_number(worst_rho), format_number(worst_cov), disagreements);
  return t;
}

Table hysteresis_table(const Settings& s, const SweepSpec& spec) {
  std::vector<double> up(std::size_t(spec.omega.count));
  for (int i = 0; i < spec.omega.count; ++i) up[std::size_t(i)] = spec.omega.at(i);
  std::vector<double> down(up.rbegin(), up.rend());

  struct Task {
    KerrSign sign;
    const char* direction;
    const std::vector<double>* omegas;
  };
  std::vector<Task> tasks;
  for (KerrSign sign : signs_of(s.kerr_sign)) {
    if (s.direction != "down") tasks.push_back({sign, "up", &up});
    if (s.direction != "up") tasks.push_back({sign, "down", &down});
  }

  HysteresisOptions<> opt;
  opt.seed = s.seed;
  std::vector<std::vector<HysteresisPoint<>>> results(tasks.size());
  parallel_for(tasks.size(), spec.jobs, [&](std::size_t k) {
    const auto& task = tasks[k];
    results[k] = hysteresis_sweep(spec.base.with_sign(task.sign).with_ratio(spec.ratio.min),
                                  std::span<const double>(*task.omegas), opt);
  });

  Table t;
  t.columns = {"kerr", "direction", "omega", "ratio", "rho", "converged", "diverged"};
  for (std::size_t k = 0; k < tasks.size(); ++k) {
    for (const auto& pt : results[k]) {
      t.add({to_string(tasks[k].sign), std::string(tasks[k].direction), pt.omega, spec.ratio.min, pt.rho,
             flag(pt.converged), flag(pt.diverged)});
    }
  }
  return t;
}

// Shortest representation that parses back to the same double.
std::string dump_number(double v) { return fmt::format("{}", v); }

std::string dump_config(const Settings& s) {
  std::string o = "# magnonic configuration\n";
  auto line = [&o](const char* key, const std::string& value) { o += fmt::format("{} = {}\n", key, value); };
  line("delta_a", dump_number(s.delta_a));
  line("delta_m_over_delta_a", dump_number(s.ratio));
  line("kappa_a", dump_number(s.kappa_a));
  line("gamma_m", dump_number(s.gamma_m));
  line("g_m", dump_number(s.g_m));
  line("kerr_sign", '"' + s.kerr_sign + '"');
  line("kerr_abs", dump_number(s.kerr_abs));
  line("omega", dump_number(s.omega));
  line("nbar_a", dump_number(s.nbar_a));
  line("nbar_m", dump_number(s.nbar_m));
  if (s.omega_min) line("omega_min", dump_number(*s.omega_min));
  if (s.omega_max) line("omega_max", dump_number(*s.omega_max));
  if (s.omega_count) line("omega_count", std::to_string(*s.omega_count));
  if (s.ratio_min) line("ratio_min", dump_number(*s.ratio_min));
  if (s.ratio_max) line("ratio_max", dump_number(*s.ratio_max));
  if (s.ratio_count) line("ratio_count", std::to_string(*s.ratio_count));
  line("eps_den", dump_number(s.tol.eps_den));
  line("tol_phase", dump_number(s.tol.tol_phase));
  line("tol_fp", dump_number(s.tol.tol_fp));
  line("tol_stab", dump_number(s.tol.tol_stab));
  line("eps_contrast", dump_number(s.tol.eps_contrast));
  line("near_marginal", dump_number(s.tol.near_marginal));
  line("relax_dt", dump_number(s.relax_dt));
  line("relax_t_end", dump_number(s.relax_t_end));
  line("seed", std::to_string(s.seed));
  line("direction", '"' + s.direction + '"');
  line("out", '"' + s.out + '"');
  line("format", '"' + s.format + '"');
  line("jobs", std::to_string(s.jobs));
  return o;
}

void add_options(CLI::App& app, Settings& s) {
  app.add_option("--delta_a", s.delta_a, "cavity detuning");
  app.add_option("--delta_m_over_delta_a,--ratio", s.ratio, "magnon/cavity detuning ratio");
  app.add_option("--kappa_a", s.kappa_a, "cavity decay rate (unit of every rate)");
  app.add_option("--gamma_m", s.gamma_m, "magnon decay rate");
  app.add_option("--g_m", s.g_m, "magnon-photon coupling");
  app.add_option("--kerr_sign,--kerr", s.kerr_sign, "Kerr sign: +, -, or both")
      ->check(CLI::IsMember({"+", "-", "both", "pos", "neg", "positive", "negative"}));
  app.add_option("--kerr_abs", s.kerr_abs, "Kerr magnitude |K|");
  app.add_option("--omega", s.omega, "parametric drive strength");
  app.add_option("--nbar_a", s.nbar_a, "cavity thermal occupancy");
  app.add_option("--nbar_m", s.nbar_m, "magnon thermal occupancy");

  app.add_option("--omega_min", s.omega_min, "drive axis start");
  app.add_option("--omega_max", s.omega_max, "drive axis end");
  app.add_option("--omega_count", s.omega_count, "drive axis points");
  app.add_option("--ratio_min", s.ratio_min, "ratio axis start");
  app.add_option("--ratio_max", s.ratio_max, "ratio axis end");
  app.add_option("--ratio_count", s.ratio_count, "ratio axis points");

  app.add_option("--eps_den", s.tol.eps_den, "parametric singularity guard");
  app.add_option("--tol_phase", s.tol.tol_phase, "phase-closure tolerance");
  app.add_option("--tol_fp", s.tol.tol_fp, "fixed-point residual tolerance");
  app.add_option("--tol_stab", s.tol.tol_stab, "marginal-stability band");
  app.add_option("--eps_contrast", s.tol.eps_contrast, "contrast equality tolerance");
  app.add_option("--near_marginal", s.tol.near_marginal, "near-marginal flag band");

  app.add_option("--relax_dt", s.relax_dt, "oracle RK4 step");
  app.add_option("--relax_t_end", s.relax_t_end, "oracle relaxation horizon");
  app.add_option("--seed", s.seed, "oracle perturbation seed");
  app.add_option("--direction", s.direction, "hysteresis direction: up, down, both")
      ->check(CLI::IsMember({"up", "down", "both"}));

  app.add_option("--out", s.out, "output file, - for stdout");
  app.add_option("--format", s.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--jobs", s.jobs, "worker threads (0: MAGNONIC_JOBS or hardware)")->check(CLI::NonNegativeNumber);
}

int dispatch(const std::string& command, const Settings& s, std::ostream& out, std::ostream& err) {
  const int jobs = s.jobs > 0 ? s.jobs : default_jobs();
  Table table;
  if (command == "branches") {
    table = branches_table(s);
  } else if (command == "thresholds") {
    table = thresholds_table(s);
  } else {
    const SweepSpec spec = sweep_spec(s, command, jobs);
    if (command == "phase-diagram") table = phase_table(s, spec);
    else if (command == "cut") table = cut_table(spec);
    else if (command == "fluctuations") table = fluctuation_table(spec);
    else if (command == "contrast") table = contrast_table(spec);
    else if (command == "oracle") table = oracle_table(s, spec, err);
    else table = hysteresis_table(s, spec);
  }

  const Format format = s.format == "json" ? Format::Json : Format::Csv;
  if (s.out == "-") {
    write_table(table, format, out);
    return kExitOk;
  }
  std::ofstream file(s.out);
  if (!file) {
    err << "error: cannot open output file " << s.out << '\n';
    return kExitInvalidConfig;
  }
  write_table(table, format, file);
  if (!file) {
    err << "error: failed writing " << s.out << '\n';
    return kExitInvalidConfig;
  }
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Steady states, stability, fluctuations and nonreciprocity of a driven Kerr cavity-magnon system",
               "magnonic"};
  Settings s;
  add_options(app, s);
  app.set_config("--config", "", "flat key = value configuration file");
  bool dump = false;
  app.add_flag("--dump-config", dump, "print the effective configuration and exit");

  const std::vector<std::pair<const char*, const char*>> commands = {
      {"branches", "the three mean-field branches at one point"},
      {"thresholds", "critical ratio xi and drive thresholds omega_1, omega_2"},
      {"phase-diagram", "phase label over the (omega, ratio) grid"},
      {"cut", "order parameter of both Kerr signs along omega"},
      {"contrast", "bidirectional contrast ratio over the (omega, ratio) grid"},
      {"fluctuations", "magnon number fluctuations of both Kerr signs along omega"},
      {"oracle", "brute-force validation grid"},
      {"hysteresis", "attractor-following up and down drive sweeps"}};
  for (const auto& [name, help] : commands) app.add_subcommand(name, help)->fallthrough();
  app.require_subcommand(0, 1);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitInvalidConfig;
  }

  if (dump) {
    out << dump_config(s);
    return kExitOk;
  }
  const auto chosen = app.get_subcommands();
  if (chosen.empty()) {
    err << "error: a subcommand is required (branches, thresholds, phase-diagram, cut, contrast, fluctuations, "
           "oracle, hysteresis)\n";
    return kExitInvalidConfig;
  }

  try {
    return dispatch(chosen.front()->get_name(), s, out, err);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return e.kind() == ErrorKind::InvalidParams ? kExitInvalidConfig : kExitNumerical;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitNumerical;
  }
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run(args, out, err);
}

}  // namespace magnonic::cli
