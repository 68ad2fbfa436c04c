// Acceptance checks. `magnonic_acceptance N` runs criterion N; with no
// argument every criterion runs. One PASS/FAIL line per criterion, preceded
// by the measurements it was judged on.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <limits>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "magnonic/cli.hpp"
#include "magnonic/fluctuations.hpp"
#include "magnonic/nonreciprocity.hpp"
#include "magnonic/oracle.hpp"
#include "magnonic/stability.hpp"
#include "magnonic/steadystate.hpp"
#include "magnonic/sweep.hpp"

using namespace magnonic;

namespace {

// Reference thresholds carry three decimals.
constexpr double kRounding = 5e-4;

SystemParams<> reference_params(double ratio = 1.3) {
  SystemParams<> p;
  p.delta_a = 3;
  p.kappa_a = 1;
  p.gamma_m = 1;
  p.g_m = 2.4;
  p.kerr_magnitude = 1;
  return p.with_ratio(ratio);
}

SweepSpec reference_spec(Axis omega, Axis ratio, int jobs) {
  SweepSpec s;
  s.omega = omega;
  s.ratio = ratio;
  s.base = reference_params();
  s.jobs = jobs;
  return s;
}

class Report {
 public:
  void note(const std::string& line) { std::cout << "    " << line << '\n'; }
  void check(bool ok, const std::string& what) {
    note(fmt::format("{} {}", ok ? "ok  " : "FAIL", what));
    pass_ = pass_ && ok;
  }
  bool pass() const { return pass_; }

 private:
  bool pass_ = true;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// 1. Threshold reproduction.
void threshold_reproduction(Report& r) {
  const auto t0 = std::chrono::steady_clock::now();
  const double xi = critical_xi(reference_params());
  const double w1 = omega_1(reference_params());
  const double w2_13 = omega_2(reference_params(1.3));
  const double w2_08 = omega_2(reference_params(0.8));
  const double elapsed = seconds_since(t0);
  r.check(std::abs(xi - 0.976) <= 1e-3, fmt::format("xi = {:.7f} (expected 0.976 +/- 0.001)", xi));
  r.check(std::abs(w1 - 2.025) <= 1e-3, fmt::format("omega_1 = {:.7f} (expected 2.025 +/- 0.001)", w1));
  r.check(std::abs(w2_13 - 2.108) <= 1e-3, fmt::format("omega_2(1.3) = {:.7f} (expected 2.108 +/- 0.001)", w2_13));
  r.check(std::abs(w2_08 - 2.084) <= 1e-3, fmt::format("omega_2(0.8) = {:.7f} (expected 2.084 +/- 0.001)", w2_08));
  r.check(elapsed < 0.1, fmt::format("runtime {:.2e} s", elapsed));
}

// Boundary of the normal phase for one Kerr sign: the branch that opens first.
double normal_boundary(KerrSign sign, double ratio) {
  const auto p = reference_params(ratio);
  const double xi = critical_xi(p);
  const bool vertical = (sign == KerrSign::Positive) ? ratio < xi : ratio > xi;
  return vertical ? omega_1(p) : omega_2(p);
}

// 2. Phase-diagram structure on the 400x400 grid.
void phase_diagram_structure(Report& r) {
  const auto spec = reference_spec({1.5, 3.0, 400}, {0.5, 1.5, 400}, 1);
  const double d_omega = spec.omega.step(), d_ratio = spec.ratio.step();
  const double xi = critical_xi(spec.base);

  const auto t0 = std::chrono::steady_clock::now();
  const auto pos = phase_diagram(spec, KerrSign::Positive);
  const auto neg = phase_diagram(spec, KerrSign::Negative);
  const double elapsed = seconds_since(t0);

  for (auto [grid, name] : {std::pair{&pos, "K>0"}, std::pair{&neg, "K<0"}}) {
    const bool any_error = std::any_of(grid->cells.begin(), grid->cells.end(), [](const PhaseCell& c) {
      return !c.label.has_value();
    });
    r.check(!any_error, fmt::format("{}: every cell classified", name));
    if (any_error) return;
  }

  auto labels = [](const Grid<PhaseCell>& g) {
    std::set<PhaseLabel> s;
    for (const auto& c : g.cells) s.insert(*c.label);
    return s;
  };
  const std::set<PhaseLabel> nsb{PhaseLabel::Normal, PhaseLabel::Superradiant, PhaseLabel::Bistable};
  auto nsbu = nsb;
  nsbu.insert(PhaseLabel::Unstable);
  r.check(labels(pos) == nsb, "K>0 labels are exactly {normal, superradiant, bistable}");
  r.check(labels(neg) == nsbu, "K<0 labels are {normal, superradiant, bistable, unstable}");

  // Unstable corner: each row an omega-suffix, rows with U a ratio-suffix,
  // top-right cell unstable, lower-left quadrant free.
  const int no = spec.omega.count, nr = spec.ratio.count;
  bool suffix_rows = true, suffix_ratio = true, quadrant_free = true;
  int first_u_row = -1;
  for (int ir = 0; ir < nr; ++ir) {
    bool seen = false, row_has = false;
    for (int io = 0; io < no; ++io) {
      const bool u = neg.at(ir, io).label == PhaseLabel::Unstable;
      if (seen && !u) suffix_rows = false;
      seen = seen || u;
      row_has = row_has || u;
      if (u && io < no / 2 && ir < nr / 2) quadrant_free = false;
    }
    if (row_has && first_u_row < 0) first_u_row = ir;
    if (!row_has && first_u_row >= 0) suffix_ratio = false;
  }
  r.check(neg.at(nr - 1, no - 1).label == PhaseLabel::Unstable, "K<0 top-right cell is unstable");
  r.check(suffix_rows, "K<0 unstable cells form an omega-suffix in every row");
  r.check(suffix_ratio, fmt::format("K<0 unstable rows form a ratio-suffix (from ratio {:.4f})",
                                    first_u_row >= 0 ? spec.ratio.at(first_u_row) : NAN));
  r.check(quadrant_free, "no unstable cell in the low-omega, low-ratio quadrant");

  // Normal boundary against the analytic curves.
  for (auto [grid, sign] : {std::pair{&pos, KerrSign::Positive}, std::pair{&neg, KerrSign::Negative}}) {
    double worst = 0;
    int rows = 0;
    bool prefix = true;
    for (int ir = 0; ir < nr; ++ir) {
      const double expected = normal_boundary(sign, spec.ratio.at(ir));
      int first = no;
      for (int io = 0; io < no; ++io)
        if (grid->at(ir, io).label != PhaseLabel::Normal) {
          first = io;
          break;
        }
      for (int io = first; io < no; ++io)
        if (grid->at(ir, io).label == PhaseLabel::Normal) prefix = false;
      if (expected <= spec.omega.min || expected >= spec.omega.max) continue;
      const double found = spec.omega.at(first);
      worst = std::max(worst, std::abs(found - expected));
      ++rows;
    }
    r.check(prefix && worst <= d_omega,
            fmt::format("K{}0 normal boundary follows omega_1 / omega_2(ratio): worst offset {:.2e} over {} rows "
                        "(cell {:.2e})",
                        sign == KerrSign::Positive ? '>' : '<', worst, rows, d_omega));
  }

  // Crossover: bistable wedges sit on opposite sides of xi.
  double pos_max = -1, neg_min = 2;
  for (int ir = 0; ir < nr; ++ir)
    for (int io = 0; io < no; ++io) {
      if (pos.at(ir, io).label == PhaseLabel::Bistable) pos_max = std::max(pos_max, spec.ratio.at(ir));
      if (neg.at(ir, io).label == PhaseLabel::Bistable) neg_min = std::min(neg_min, spec.ratio.at(ir));
    }
  const double crossover = (pos_max + neg_min) / 2;
  r.check(pos_max < xi + d_ratio && neg_min > xi - d_ratio,
          fmt::format("K>0 bistable only below xi (max ratio {:.4f}), K<0 only above (min ratio {:.4f})", pos_max,
                      neg_min));
  r.check(std::abs(crossover - 0.976) <= d_ratio + kRounding,
          fmt::format("crossover ratio {:.5f} vs xi = 0.976 (cell {:.2e})", crossover, d_ratio));
  r.check(elapsed < 60, fmt::format("two 400x400 diagrams in {:.2f} s single-threaded", elapsed));
}

struct Onset {
  int index = -1;
  double omega = NAN;
  double first_value = NAN;
  double largest_step = 0;  // largest |rho_i - rho_{i-1}| over finite neighbours
};

Onset find_onset(const std::vector<CutRow>& rows, bool positive) {
  Onset o;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const double a = positive ? rows[i - 1].pos.value : rows[i - 1].neg.value;
    const double b = positive ? rows[i].pos.value : rows[i].neg.value;
    if (std::isfinite(a) && std::isfinite(b)) o.largest_step = std::max(o.largest_step, std::abs(b - a));
    if (o.index < 0 && a == 0.0 && b > 0.0) {
      o.index = int(i);
      o.omega = rows[i].omega;
      o.first_value = b;
    }
  }
  return o;
}

// 3. Transition order along the ratio 1.3 and 0.8 cuts.
void transition_order(Report& r) {
  const auto t0 = std::chrono::steady_clock::now();
  struct Case {
    double ratio;
    bool positive;
    bool jump;
    double reference;
  };
  for (const Case c : {Case{1.3, false, true, 2.025}, Case{1.3, true, false, 2.108}, Case{0.8, true, true, 2.025},
                       Case{0.8, false, false, 2.084}}) {
    const auto spec = reference_spec({1.8, 2.4, 2000}, {c.ratio, c.ratio, 1}, default_jobs());
    const auto rows = order_parameter_cut(spec);
    const double step = spec.omega.step();
    const auto base = reference_params(c.ratio);
    const double analytic = c.jump ? omega_1(base) : omega_2(base);
    const auto o = find_onset(rows, c.positive);
    const std::string who = fmt::format("ratio {} K{}0", c.ratio, c.positive ? '>' : '<');
    if (o.index < 0) {
      r.check(false, who + ": no onset found");
      continue;
    }
    const bool located = rows[o.index - 1].omega < analytic && analytic <= o.omega &&
                         std::abs(o.omega - c.reference) <= step + kRounding;
    r.check(located, fmt::format("{}: onset at {:.5f} (analytic {:.5f}, reference {}, step {:.1e})", who, o.omega,
                                 analytic, c.reference, step));
    if (c.jump) {
      r.check(o.first_value > 0.2, fmt::format("{}: discontinuous, jump {:.4f}", who, o.first_value));
    } else {
      r.check(o.first_value < 0.02 && o.largest_step < 0.02,
              fmt::format("{}: continuous, first value {:.2e}, largest step {:.2e}", who, o.first_value,
                          o.largest_step));
    }
  }
  const double elapsed = seconds_since(t0);
  r.check(elapsed < 30, fmt::format("runtime {:.2f} s", elapsed));
}

// 4. Contrast bands on the (omega, ratio) map.
void contrast_bands(Report& r) {
  const auto spec = reference_spec({1.5, 3.0, 400}, {0.5, 1.5, 400}, default_jobs());
  const auto t0 = std::chrono::steady_clock::now();
  const auto map = contrast_map(spec);
  const double elapsed = seconds_since(t0);
  const double xi = critical_xi(spec.base);

  long below = 0, below_bad = 0, band = 0, band_bad = 0, above = 0, above_bad = 0, excluded = 0, errors = 0;
  long band_low = 0, band_high = 0;
  for (int ir = 0; ir < spec.ratio.count; ++ir) {
    const double ratio = spec.ratio.at(ir);
    const double w1 = omega_1(reference_params(ratio)), w2 = omega_2(reference_params(ratio));
    for (int io = 0; io < spec.omega.count; ++io) {
      const auto& cell = map.at(ir, io);
      if (cell.error) {
        ++errors;
        continue;
      }
      const auto& pt = cell.point;
      if (pt.excluded) {
        ++excluded;
        if (!std::isnan(pt.contrast)) ++above_bad;
        continue;
      }
      const double w = pt.omega;
      if (w < w1) {
        ++below;
        below_bad += pt.contrast != 0.0;
      } else if (w > w1 && w < w2) {
        ++band;
        band_bad += pt.contrast != 1.0;
        (ratio < xi ? band_low : band_high)++;
      } else if (w > w2) {
        ++above;
        const bool both_sr =
            pt.phase_pos == PhaseLabel::Superradiant && pt.phase_neg == PhaseLabel::Superradiant;
        above_bad += !(both_sr && pt.contrast > 0.0 && pt.contrast < 1.0);
      }
    }
  }
  r.check(errors == 0, fmt::format("{} cells evaluated without error", map.cells.size() - errors));
  r.check(below > 0 && below_bad == 0, fmt::format("omega < omega_1: I == 0 on {} of {} cells", below - below_bad,
                                                   below));
  r.check(band > 0 && band_bad == 0,
          fmt::format("omega_1 < omega < omega_2: I == 1 on {} of {} cells", band - band_bad, band));
  r.check(band_low > 0 && band_high > 0,
          fmt::format("two bands: {} cells below xi, {} above", band_low, band_high));
  r.check(above > 0 && above_bad == 0,
          fmt::format("omega > omega_2, both superradiant: 0 < I < 1 on {} of {} cells", above - above_bad, above));
  r.note(fmt::format("{} unstable cells excluded", excluded));
  r.check(elapsed < 120, fmt::format("400x400 map in {:.2f} s", elapsed));
}

// 5. Fluctuation divergence.
void fluctuation_divergence(Report& r) {
  double worst_residual = 0;
  auto scan_residuals = [&](const std::vector<FluctuationRow>& rows) {
    for (const auto& row : rows)
      for (const auto* f : {&row.pos, &row.neg})
        for (const auto* b : {&f->zero, &f->nonzero})
          if (b->occupation) worst_residual = std::max(worst_residual, b->residual);
  };

  for (const double ratio : {1.3, 0.8}) {
    const auto near = reference_spec({1.8, 2.4, 2000}, {ratio, ratio, 1}, default_jobs());
    const auto far = reference_spec({0.0, 3.1, 3101}, {ratio, ratio, 1}, default_jobs());
    const auto near_rows = fluctuation_cut(near);
    const auto far_rows = fluctuation_cut(far);
    scan_residuals(near_rows);
    scan_residuals(far_rows);

    for (const bool positive : {true, false}) {
      const auto base = reference_params(ratio);
      const bool first_order = (ratio > critical_xi(base)) != positive;
      const double critical = first_order ? omega_1(base) : omega_2(base);
      const double reference = first_order ? 2.025 : (ratio == 1.3 ? 2.108 : 2.084);
      const std::string who = fmt::format("ratio {} K{}0", ratio, positive ? '>' : '<');

      double peak = -1, peak_omega = NAN;
      for (const auto& row : near_rows) {
        const double lg = log_fluctuations((positive ? row.pos : row.neg).reported);
        if (std::isfinite(lg) && lg > peak) {
          peak = lg;
          peak_omega = row.omega;
        }
      }
      const double step = near.omega.step();
      r.check(std::abs(peak_omega - critical) <= step && std::abs(peak_omega - reference) <= step + kRounding,
              fmt::format("{}: peak lg = {:.3f} at {:.5f}, critical {:.5f} (reference {}), step {:.1e}", who, peak,
                          peak_omega, critical, reference, step));

      double far_max = 0, far_at = NAN;
      int far_points = 0;
      for (const auto& row : far_rows) {
        if (std::abs(row.omega - critical) < 0.5) continue;
        const double lg = log_fluctuations((positive ? row.pos : row.neg).reported);
        if (!std::isfinite(lg)) continue;
        ++far_points;
        if (lg > far_max) {
          far_max = lg;
          far_at = row.omega;
        }
      }
      r.check(far_max < 0.01,
              fmt::format("{}: max lg at distance >= 0.5 from {:.4f} is {:.4f} at omega {:.3f} ({} points)", who,
                          critical, far_max, far_at, far_points));
    }
  }
  r.check(worst_residual < 1e-10, fmt::format("largest Lyapunov residual {:.2e}", worst_residual));
}

// 6. Oracle equivalence on the 20x20 validation grid.
void oracle_equivalence(Report& r) {
  const auto spec = reference_spec({1.8, 2.4, 20}, {0.6, 1.4, 20}, default_jobs());
  const auto t0 = std::chrono::steady_clock::now();
  const auto rows = validation_grid(spec);
  const double elapsed = seconds_since(t0);

  long errors = 0, disagree = 0, stable = 0;
  double rho = 0, cov = 0;
  for (const auto& row : rows) {
    if (row.error) {
      ++errors;
      continue;
    }
    if (!row.verdicts_agree()) ++disagree;
    if (row.eigen_verdict == Verdict::Stable) {
      ++stable;
      rho = std::max(rho, row.rho_error);
      cov = std::max(cov, row.covariance_error);
    }
  }
  r.check(errors == 0, fmt::format("{} branch evaluations, {} errors", rows.size(), errors));
  r.check(disagree == 0, fmt::format("eigenvalue / Hurwitz / RK4 verdicts disagree on {} rows", disagree));
  r.check(rho < 1e-5, fmt::format("max |rho_oracle - rho_formula| = {:.2e} over {} stable branches", rho, stable));
  r.check(cov < 1e-6, fmt::format("max |V_lyapunov - V_ode| = {:.2e}", cov));
  r.check(elapsed < 300, fmt::format("runtime {:.1f} s", elapsed));
}

// 7. Structural invariants.
void structural_invariants(Report& r) {
  std::mt19937_64 rng(20240607);
  std::uniform_int_distribution<int> pick(0, 2);

  long trace_bad = 0, pair_bad = 0, rh_bad = 0, rh_points = 0, marginal = 0;
  while (rh_points < 10000) {
    SystemParams<> p;
    {
      std::uniform_real_distribution<double> pos(0.1, 5.0), rate(0.1, 3.0), coupling(0.0, 4.0), drive(0.0, 4.0),
          kerr(0.01, 10.0);
      p.delta_a = pos(rng);
      p.delta_m = pos(rng);
      p.kappa_a = rate(rng);
      p.gamma_m = rate(rng);
      p.g_m = coupling(rng);
      p.omega_drive = drive(rng);
      p.kerr_magnitude = kerr(rng);
      p.kerr_sign = (rng() & 1) ? KerrSign::Positive : KerrSign::Negative;
    }
    std::array<BranchSolution<>, 3> all;
    try {
      all = magnon_branches(p);
    } catch (const Error&) {
      continue;
    }
    const auto& b = all[std::size_t(pick(rng))];
    if (!b.admissible) continue;
    const auto L = build_drift_matrix(p, b.m_amplitude);
    const double scale = std::max({1.0, L.cwiseAbs().maxCoeff()});
    if (std::abs(L.trace() + 2 * (p.kappa_a + p.gamma_m)) > 1e-12 * scale) ++trace_bad;

    const auto ev = eigenvalues(L);
    for (int i = 0; i < 4; ++i) {
      double nearest = std::numeric_limits<double>::infinity();
      for (int j = 0; j < 4; ++j) nearest = std::min(nearest, std::abs(ev(j) - std::conj(ev(i))));
      if (nearest > 1e-9 * scale) ++pair_bad;
    }

    const auto verdict = verdict_from_growth(max_real_part(ev), 1e-9);
    ++rh_points;
    if (verdict == Verdict::Marginal) {
      ++marginal;
      continue;
    }
    if (routh_hurwitz_stable(characteristic_polynomial(L)) != (verdict == Verdict::Stable)) ++rh_bad;
  }
  r.check(trace_bad == 0, fmt::format("trace == -2(kappa_a + gamma_m) on {} of {} drift matrices",
                                      rh_points - trace_bad, rh_points));
  r.check(pair_bad == 0, fmt::format("spectra closed under conjugation ({} unmatched eigenvalues)", pair_bad));
  r.check(rh_bad == 0, fmt::format("Routh-Hurwitz agrees with eigenvalues on {} points ({} marginal skipped), "
                                   "{} mismatches",
                                   rh_points - marginal, marginal, rh_bad));

  // Parity: M and -M are both fixed points on superradiant solutions.
  long parity_points = 0, parity_bad = 0;
  double worst_parity = 0;
  std::uniform_real_distribution<double> omega(1.8, 3.0), ratio(0.5, 1.5);
  while (parity_points < 1000) {
    auto p = reference_params(ratio(rng)).with_drive(omega(rng));
    p.kerr_sign = (rng() & 1) ? KerrSign::Positive : KerrSign::Negative;
    PhaseReport<> rep;
    try {
      rep = analyze_phase(p);
    } catch (const Error&) {
      continue;
    }
    if (rep.label != PhaseLabel::Superradiant) continue;
    ++parity_points;
    const auto& s = rep.nonzero.solution;
    const double scale = std::max(1.0, std::abs(s.m_amplitude) + std::abs(s.a_amplitude));
    const double res_plus = mean_field_rhs(p, s.a_amplitude, s.m_amplitude).norm() / scale;
    const double res_minus = mean_field_rhs(p, -s.a_amplitude, -s.m_amplitude).norm() / scale;
    worst_parity = std::max({worst_parity, res_plus, res_minus});
    if (res_plus > 1e-8 || res_minus > 1e-8) ++parity_bad;
  }
  r.check(parity_bad == 0, fmt::format("theta and theta + pi are fixed points on {} superradiant points "
                                       "(worst relative residual {:.1e})",
                                       parity_points, worst_parity));

  // Contrast ratio under |K| rescaling.
  long contrast_points = 0;
  double worst_contrast = 0;
  std::uniform_real_distribution<double> decade(-3, 3);
  while (contrast_points < 1000) {
    const auto p = reference_params(ratio(rng)).with_drive(omega(rng));
    auto q = p;
    q.kerr_magnitude = std::pow(10.0, decade(rng));
    ContrastPoint<> a, b;
    try {
      a = evaluate_contrast(p);
      b = evaluate_contrast(q);
    } catch (const Error&) {
      continue;
    }
    if (a.excluded || b.excluded) continue;
    ++contrast_points;
    worst_contrast = std::max(worst_contrast, std::abs(a.contrast - b.contrast));
  }
  r.check(worst_contrast <= 1e-12, fmt::format("contrast unchanged under |K| rescaling: worst difference {:.1e} "
                                               "over {} points",
                                               worst_contrast, contrast_points));
}

// 8. Determinism across worker counts, via the command-line entry point.
void determinism(Report& r) {
  const std::vector<std::vector<std::string>> runs = {
      {"branches", "--omega", "2.2"},
      {"thresholds"},
      {"phase-diagram"},
      {"cut"},
      {"cut", "--ratio", "0.8"},
      {"contrast"},
      {"fluctuations"},
      {"oracle", "--omega_count", "6", "--ratio_count", "5"},
      {"hysteresis", "--omega_count", "31", "--omega_min", "1.95", "--omega_max", "2.25"},
  };
  for (const auto& args : runs) {
    std::string joined;
    for (const auto& a : args) joined += (joined.empty() ? "" : " ") + a;
    std::vector<std::string> outputs;
    bool ok = true;
    for (const char* jobs : {"1", "4"}) {
      auto full = args;
      full.insert(full.end(), {"--jobs", jobs});
      std::ostringstream out, err;
      const auto t0 = std::chrono::steady_clock::now();
      ok = ok && cli::run(full, out, err) == 0;
      outputs.push_back(out.str());
      r.note(fmt::format("{} --jobs {}: {} bytes in {:.1f} s", joined, jobs, out.str().size(), seconds_since(t0)));
    }
    r.check(ok && !outputs[0].empty() && outputs[0] == outputs[1], fmt::format("{}: identical bytes", joined));
  }
}

struct Criterion {
  int id;
  const char* title;
  std::function<void(Report&)> body;
};

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> all = {
      {1, "threshold reproduction", threshold_reproduction},
      {2, "phase-diagram structure", phase_diagram_structure},
      {3, "transition-order cuts", transition_order},
      {4, "contrast-ratio bands", contrast_bands},
      {5, "fluctuation divergence", fluctuation_divergence},
      {6, "oracle equivalence", oracle_equivalence},
      {7, "structural invariants", structural_invariants},
      {8, "determinism across worker counts", determinism},
  };
  std::vector<int> selected;
  for (int i = 1; i < argc; ++i) selected.push_back(std::atoi(argv[i]));
  if (selected.empty())
    for (const auto& c : all) selected.push_back(c.id);

  int failures = 0;
  for (int id : selected) {
    const auto it = std::find_if(all.begin(), all.end(), [id](const Criterion& c) { return c.id == id; });
    if (it == all.end()) {
      std::cerr << "unknown criterion " << id << '\n';
      return 2;
    }
    std::cout << "criterion " << id << ": " << it->title << '\n';
    Report report;
    it->body(report);
    std::cout << (report.pass() ? "PASS" : "FAIL") << " criterion " << id << ": " << it->title << '\n';
    std::cout.flush();
    failures += !report.pass();
  }
  return failures == 0 ? 0 : 1;
}
