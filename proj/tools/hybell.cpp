// Command-line front end for the hybrid atom-photon Bell-test laboratory.
//
// Subcommands cover the full pipeline: ideal-state CHSH optimization,
// critical-line and contour tracing, realistic (finite-visibility) runs, the
// cavity production table (visibility, bandwidth, input photons, distance),
// excitation scans, and the analytic-vs-Fock validation suite.
//
// Exit codes: 0 success, 1 usage error, 2 numerical failure, 3 validation
// failure.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "hybell/hybell.hpp"

namespace {

using namespace hybell;

struct GlobalOpts {
  std::uint64_t seed = 12345;
  std::string format = "csv";
  std::string out;     // empty -> stdout
  std::string config;  // row definitions; empty -> built-in rows
};

void emit(const Report& rep, const GlobalOpts& g) {
  if (g.out.empty()) {
    write_report(std::cout, rep, g.format);
  } else {
    std::ofstream f(g.out, std::ios::binary);
    if (!f) throw domain_error("cannot open output file '" + g.out + "'");
    write_report(f, rep, g.format);
  }
}

std::vector<RowSpec> rows_for(const GlobalOpts& g) {
  return g.config.empty() ? builtin_rows() : load_rows_file(g.config);
}

void meta_common(Report& rep, const std::string& cmd, const GlobalOpts& g) {
  rep.set_meta("command", cmd);
  rep.set_meta("seed", std::to_string(g.seed));
}

void meta_rowspec(Report& rep, const RowSpec& r) {
  const std::string p = "row." + r.name + ".";
  rep.set_meta(p + "g_MHz", r.g_MHz);
  rep.set_meta(p + "kappa_b_MHz", r.kappa_b_MHz);
  rep.set_meta(p + "kappa_c_MHz", r.kappa_c_MHz);
  rep.set_meta(p + "kappa_L_MHz", r.kappa_L_MHz);
  rep.set_meta(p + "Gamma_MHz", r.Gamma_MHz);
  rep.set_meta(p + "gOverDelta", r.gOverDelta);
  rep.set_meta(p + "rBS2", r.rBS2);
  rep.set_meta(p + "alpha_target", r.alpha_target);
}

void meta_budget(Report& rep, const TimingBudget& b) {
  rep.set_meta("budget.dt_at_m_s", b.dt_at_m);
  rep.set_meta("budget.dt_at_c_s", b.dt_at_c);
  rep.set_meta("budget.dt_ph_c_s", b.dt_ph_c);
  rep.set_meta("budget.gamma_Lm_MHz", b.gamma_Lm / (two_pi * 1e6));
}

void meta_problem(Report& rep, const OptimizationProblem& p) {
  rep.set_meta("coherence", p.coherence);
  rep.set_meta("n_starts", std::to_string(p.n_starts));
  if (p.fixed_alpha) rep.set_meta("fixed_alpha", *p.fixed_alpha);
  if (p.fixed_nu) rep.set_meta("fixed_nu", *p.fixed_nu);
  if (p.fixed_gamma) rep.set_meta("fixed_gamma", *p.fixed_gamma);
  if (p.fixed_b) rep.set_meta("fixed_b", *p.fixed_b);
}

Report opt_report(const std::string& cmd, const GlobalOpts& g,
                  const OptimizationProblem& p, const OptResult& r) {
  Report rep;
  meta_common(rep, cmd, g);
  meta_problem(rep, p);
  rep.columns = {"eta",  "T",     "coherence", "alpha",   "nu",
                 "gamma", "b",    "value",     "photons", "violated"};
  rep.rows = {{p.eta, p.T, p.coherence, r.alpha, r.nu, r.gamma, r.b, r.value,
               r.alpha * r.alpha, is_violation(r.value) ? 1.0 : 0.0}};
  return rep;
}

std::vector<double> linspace(double lo, double hi, int n) {
  std::vector<double> v(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i)
    v[static_cast<std::size_t>(i)] =
        n == 1 ? lo : lo + (hi - lo) * i / (n - 1);
  return v;
}

std::vector<double> parse_levels(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    out.push_back(parse_double(item));
  }
  if (out.empty()) throw domain_error("no levels given");
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"hybrid atom-photon Bell-test laboratory"};
  app.require_subcommand(1);

  GlobalOpts g;
  app.add_option("--seed", g.seed, "random seed for multistart optimization");
  app.add_option("--format", g.format, "output format")
      ->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--out", g.out, "output file (default: stdout)");
  app.add_option("--config", g.config, "row configuration file");

  int exit_code = 0;

  // ---------------------------------------------------------------- ideal-opt
  auto* ideal = app.add_subcommand(
      "ideal-opt", "optimize <B> for the pure hybrid state (coherence 1)");
  ideal->fallthrough();
  double io_eta = 1.0, io_T = 1.0, io_alpha = 0.0;
  auto* io_alpha_opt =
      ideal->add_option("--alpha", io_alpha, "pin the coherent amplitude");
  ideal->add_option("--eta", io_eta, "detection efficiency")
      ->check(CLI::Range(0.0, 1.0));
  ideal->add_option("--T", io_T, "transmittance")->check(CLI::Range(0.0, 1.0));
  ideal->callback([&] {
    OptimizationProblem p;
    p.eta = io_eta;
    p.T = io_T;
    p.coherence = 1.0;
    p.seed = g.seed;
    if (io_alpha_opt->count() > 0) p.fixed_alpha = io_alpha;
    const OptResult r = optimize_chsh(p);
    emit(opt_report("ideal-opt", g, p, r), g);
  });

  // ------------------------------------------------------------ realistic-opt
  auto* real = app.add_subcommand(
      "realistic-opt",
      "optimize <B> at finite production visibility with pinned amplitude");
  real->fallthrough();
  double ro_eta = 1.0, ro_T = 1.0, ro_V = 0.727, ro_alpha = 2.1;
  bool ro_free_alpha = false;
  real->add_option("--eta", ro_eta)->check(CLI::Range(0.0, 1.0));
  real->add_option("--T", ro_T)->check(CLI::Range(0.0, 1.0));
  real->add_option("--V", ro_V, "production visibility (branch coherence)")
      ->check(CLI::Range(0.0, 1.0));
  real->add_option("--alpha", ro_alpha, "pinned coherent amplitude");
  real->add_flag("--free-alpha", ro_free_alpha,
                 "search the amplitude instead of pinning it");
  real->callback([&] {
    OptimizationProblem p;
    p.eta = ro_eta;
    p.T = ro_T;
    p.coherence = ro_V;
    p.seed = g.seed;
    if (!ro_free_alpha) p.fixed_alpha = ro_alpha;
    const OptResult r = optimize_chsh(p);
    emit(opt_report("realistic-opt", g, p, r), g);
  });

  // ------------------------------------------------------------------ boundary
  auto* bnd = app.add_subcommand(
      "boundary",
      "critical transmittance vs efficiency for one <B> level, with the "
      "eta*T = 2/3 reference column");
  bnd->fallthrough();
  double b_V = 1.0, b_level = 2.0, b_alpha = 0.0;
  double b_eta_min = 0.3, b_eta_max = 1.0;
  int b_points = 13;
  auto* b_alpha_opt = bnd->add_option("--alpha", b_alpha, "pin the amplitude");
  bnd->add_option("--V", b_V, "production visibility")
      ->check(CLI::Range(0.0, 1.0));
  bnd->add_option("--level", b_level, "<B> level to trace");
  bnd->add_option("--eta-min", b_eta_min)->check(CLI::Range(1e-6, 1.0));
  bnd->add_option("--eta-max", b_eta_max)->check(CLI::Range(1e-6, 1.0));
  bnd->add_option("--points", b_points)->check(CLI::PositiveNumber);
  bnd->callback([&] {
    OptimizationProblem base;
    base.coherence = b_V;
    base.seed = g.seed;
    if (b_alpha_opt->count() > 0) base.fixed_alpha = b_alpha;
    const auto etas = linspace(b_eta_min, b_eta_max, b_points);
    const BoundaryCurve curve = b_level == 2.0
                                    ? critical_line(etas, base)
                                    : contour(b_level, etas, base);
    Report rep;
    meta_common(rep, "boundary", g);
    meta_problem(rep, base);
    rep.set_meta("level", b_level);
    rep.columns = {"eta",        "T_star",          "found",
                   "value_at_T", "eberhard_T",      "eberhard_reachable"};
    for (const auto& s : curve.samples) {
      const EberhardRef eb = eberhard_reference(s.eta);
      rep.rows.push_back({s.eta, s.T, s.found ? 1.0 : 0.0, s.at_T.value,
                          std::min(eb.T, 1.0), eb.reachable ? 1.0 : 0.0});
    }
    emit(rep, g);
  });

  // ------------------------------------------------------------------- contour
  auto* ctr = app.add_subcommand(
      "contour", "trace several <B> contour levels in the (eta, T) plane");
  ctr->fallthrough();
  double c_V = 0.727, c_alpha = 2.1;
  std::string c_levels = "2.05,2.1,2.15";
  double c_eta_min = 0.3, c_eta_max = 1.0;
  int c_points = 13;
  bool c_free_alpha = false;
  ctr->add_option("--V", c_V)->check(CLI::Range(0.0, 1.0));
  ctr->add_option("--alpha", c_alpha, "pinned amplitude");
  ctr->add_flag("--free-alpha", c_free_alpha);
  ctr->add_option("--levels", c_levels, "comma-separated <B> levels");
  ctr->add_option("--eta-min", c_eta_min)->check(CLI::Range(1e-6, 1.0));
  ctr->add_option("--eta-max", c_eta_max)->check(CLI::Range(1e-6, 1.0));
  ctr->add_option("--points", c_points)->check(CLI::PositiveNumber);
  ctr->callback([&] {
    OptimizationProblem base;
    base.coherence = c_V;
    base.seed = g.seed;
    if (!c_free_alpha) base.fixed_alpha = c_alpha;
    const auto etas = linspace(c_eta_min, c_eta_max, c_points);
    Report rep;
    meta_common(rep, "contour", g);
    meta_problem(rep, base);
    rep.columns = {"level", "eta", "T_star", "found", "value_at_T"};
    for (const double level : parse_levels(c_levels)) {
      const BoundaryCurve curve = contour(level, etas, base);
      for (const auto& s : curve.samples)
        rep.rows.push_back(
            {level, s.eta, s.T, s.found ? 1.0 : 0.0, s.at_T.value});
    }
    emit(rep, g);
  });

  // ---------------------------------------------------------------- visibility
  auto* vis = app.add_subcommand(
      "visibility",
      "full production table per cavity row: bandwidth, visibility, input "
      "photons, propagation distance");
  vis->fallthrough();
  std::string v_row;
  vis->add_option("--row", v_row, "restrict to one named row");
  vis->callback([&] {
    const auto all = rows_for(g);
    std::vector<RowSpec> rows =
        v_row.empty() ? all : std::vector<RowSpec>{find_row(all, v_row)};
    const TimingBudget budget;
    const auto recs = table2_pipeline(rows, budget);
    Report rep;
    meta_common(rep, "visibility", g);
    meta_budget(rep, budget);
    for (const auto& r : rows) meta_rowspec(rep, r);
    rep.label_column = "row";
    rep.columns = {"gamma01_MHz",     "gamma_eff_MHz", "alpha_in_sq",
                   "V_closed",        "V_overlap",     "capture_loss",
                   "trunc_factor",    "V",             "V_overlap_final",
                   "max_Pe",          "distance_raw_m", "distance_m"};
    for (const auto& rec : recs) {
      rep.labels.push_back(rec.name);
      rep.rows.push_back({rec.gamma01_MHz, rec.gamma_eff_MHz, rec.alpha_in_sq,
                          rec.V_closed, rec.V_overlap, rec.capture_loss,
                          rec.truncation_factor, rec.V, rec.V_overlap_final,
                          rec.max_Pe, rec.distance_raw_m, rec.distance_m});
    }
    emit(rep, g);
  });

  // ------------------------------------------------------------------- pe-scan
  auto* pes = app.add_subcommand(
      "pe-scan",
      "maximum atomic excitation vs g/kappa at fixed atom and kept-mode "
      "target");
  pes->fallthrough();
  double p_god = 0.01;
  std::string p_panel = "both";
  pes->add_option("--gOverDelta", p_god, "dispersive ratio g/Delta")
      ->check(CLI::PositiveNumber);
  pes->add_option("--panel", p_panel)
      ->check(CLI::IsMember({"left", "right", "both"}));
  pes->callback([&] {
    const std::vector<double> left = {0.1, 0.2, 0.3, 0.5, 0.7, 1.0};
    const std::vector<double> right = {1.0, 2.0, 3.0, 5.0, 7.0, 10.0};
    std::vector<double> ratios;
    if (p_panel == "left") ratios = left;
    else if (p_panel == "right") ratios = right;
    else {
      ratios = left;
      ratios.insert(ratios.end(), right.begin() + 1, right.end());
    }
    const auto pts = pe_scan(ratios, p_god);
    Report rep;
    meta_common(rep, "pe-scan", g);
    rep.set_meta("gOverDelta", p_god);
    rep.set_meta("panel", p_panel);
    rep.set_meta("g_MHz", 5.0);
    rep.set_meta("Gamma_MHz", 3.0);
    rep.set_meta("gamma_L_MHz", 1.35);
    rep.set_meta("alpha_target", 2.1);
    rep.columns = {"g_over_kappa", "max_pe", "alpha_in_sq"};
    for (const auto& pt : pts)
      rep.rows.push_back({pt.g_over_kappa, pt.max_pe, pt.alpha_in_sq});
    emit(rep, g);
  });

  // -------------------------------------------------------------- gamma-search
  auto* gam = app.add_subcommand(
      "gamma-search",
      "largest pulse bandwidth keeping max excitation at the 0.1 target");
  gam->fallthrough();
  std::string gs_row;
  double gs_target = 0.1;
  gam->add_option("--row", gs_row, "restrict to one named row");
  gam->add_option("--target", gs_target, "excitation probability target")
      ->check(CLI::Range(1e-6, 0.999));
  gam->callback([&] {
    const auto all = rows_for(g);
    std::vector<RowSpec> rows =
        gs_row.empty() ? all : std::vector<RowSpec>{find_row(all, gs_row)};
    const TimingBudget budget;
    Report rep;
    meta_common(rep, "gamma-search", g);
    meta_budget(rep, budget);
    rep.set_meta("p_target", gs_target);
    rep.label_column = "row";
    rep.columns = {"gamma01_MHz", "gamma_eff_MHz", "kappa_MHz"};
    const auto recs = parallel_map(rows.size(), [&](std::size_t i) {
      const RowSpec& spec = rows[i];
      const CavityParams cav = spec.cavity();
      const double g01 =
          gamma_for_excitation(cav, gs_target, spec.alpha_tilde_target_sq());
      const double g_eff =
          std::min({cav.kappa(), g01, budget.gamma_Lm * 1e-6});
      return std::array<double, 3>{angular_to_mhz(g01), angular_to_mhz(g_eff),
                                   spec.kappa_MHz()};
    });
    for (std::size_t i = 0; i < rows.size(); ++i) {
      meta_rowspec(rep, rows[i]);
      rep.labels.push_back(rows[i].name);
      rep.rows.push_back({recs[i][0], recs[i][1], recs[i][2]});
    }
    emit(rep, g);
  });

  // ------------------------------------------------------------------ distance
  auto* dst = app.add_subcommand(
      "distance", "minimum propagation distance for space-like separation");
  dst->fallthrough();
  double d_gammaL = 1.35, d_gammaLm = 1.35;
  double d_at_m = 1.0, d_at_c = 0.0, d_ph_c = 0.0;  // microseconds
  dst->add_option("--gammaL-MHz", d_gammaL, "pulse bandwidth nu/2pi in MHz")
      ->check(CLI::PositiveNumber);
  dst->add_option("--gamma-Lm-MHz", d_gammaLm,
                  "budgeted measurement bandwidth nu/2pi in MHz")
      ->check(CLI::PositiveNumber);
  dst->add_option("--dt-at-m-us", d_at_m, "atomic measurement time (us)");
  dst->add_option("--dt-at-c-us", d_at_c, "atomic choice time (us)");
  dst->add_option("--dt-ph-c-us", d_ph_c, "photonic choice time (us)");
  dst->callback([&] {
    TimingBudget budget;
    budget.dt_at_m = d_at_m * 1e-6;
    budget.dt_at_c = d_at_c * 1e-6;
    budget.dt_ph_c = d_ph_c * 1e-6;
    budget.gamma_Lm = two_pi * d_gammaLm * 1e6;
    const double gamma_L = two_pi * d_gammaL * 1e6;
    const double raw = min_distance(budget, gamma_L);
    Report rep;
    meta_common(rep, "distance", g);
    meta_budget(rep, budget);
    rep.columns = {"gamma_L_MHz", "dt_photon_us", "dt_atom_us",
                   "distance_raw_m", "distance_m"};
    const double g_eff = std::min(gamma_L, budget.gamma_Lm);
    rep.rows = {{d_gammaL,
                 (budget.dt_ph_c + photon_measurement_time(g_eff)) * 1e6,
                 (budget.dt_at_c + budget.dt_at_m) * 1e6, raw,
                 round_distance_10m(raw)}};
    emit(rep, g);
  });

  // ------------------------------------------------------------------ validate
  auto* val = app.add_subcommand(
      "validate", "analytic-vs-Fock oracle and loss-channel validation suite");
  val->fallthrough();
  int n_draws = 100, n_max = 64;
  val->add_option("--draws", n_draws)->check(CLI::PositiveNumber);
  val->add_option("--n-max", n_max)->check(CLI::PositiveNumber);
  val->callback([&] {
    const ValidationReport vr = validation_suite(g.seed, n_draws, n_max);
    Report rep;
    meta_common(rep, "validate", g);
    rep.set_meta("draws", std::to_string(n_draws));
    rep.set_meta("n_max", std::to_string(n_max));
    rep.label_column = "check";
    rep.columns = {"pass", "worst"};
    for (const auto& c : vr.checks) {
      rep.labels.push_back(c.name);
      rep.rows.push_back({c.pass ? 1.0 : 0.0, c.worst});
      rep.set_meta("detail." + c.name, c.detail);
    }
    emit(rep, g);
    if (!vr.all_pass()) {
      std::cerr << "validation failed:";
      for (const auto& c : vr.checks)
        if (!c.pass) std::cerr << " " << c.name;
      std::cerr << "\n";
      exit_code = 3;
    }
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  } catch (const domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const truncation_error& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return 2;
  } catch (const numerical_error& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return exit_code;
}
