#include "pf/runner.hpp"

#include "pf/gstft.hpp"
#include "pf/parallel.hpp"
#include "pf/report_io.hpp"
#include "pf/sampling.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

namespace pf {

namespace {

using njson = nlohmann::ordered_json;

void reject_unknown(const njson& j, std::initializer_list<const char*> allowed,
                    const std::string& where) {
  for (const auto& [key, _] : j.items()) {
    bool ok = false;
    for (const char* a : allowed)
      if (key == a) ok = true;
    if (!ok) throw ConfigError("unknown key '" + key + "' in " + where);
  }
}

const char* kPlotScript = R"(#!/usr/bin/env python3
# Renders the CSV emitted next to this script.
import csv, sys, math
path = sys.argv[1] if len(sys.argv) > 1 else "data.csv"
rows = list(csv.DictReader(open(path)))
if not rows:
    sys.exit("no data")
cols = rows[0].keys()
if "gdist" in cols and "modulus" in cols:
    import matplotlib.pyplot as plt
    d = [math.sqrt(float(r["gdist"])) for r in rows]
    m = [max(float(r["modulus"]), 1e-18) for r in rows]
    plt.semilogy(d, m, ".", ms=2)
    plt.xlabel("metric distance")
    plt.ylabel("matrix-element modulus")
    plt.savefig("decay.png", dpi=150)
    print("wrote decay.png")
else:
    print("columns:", ", ".join(cols))
)";

}  // namespace

ExperimentConfig parse_config(const njson& j) {
  reject_unknown(j,
                 {"schema_version", "metric", "weight", "symbol", "window", "grid",
                  "samples", "axioms", "ladder", "p", "q", "s", "seed"},
                 "config");
  ExperimentConfig c;
  if (!j.contains("schema_version") || !j["schema_version"].is_number_integer())
    throw ConfigError("missing or non-integer schema_version");
  c.schema_version = j["schema_version"].get<int>();
  if (c.schema_version != 1) throw ConfigError("unsupported schema_version");

  if (j.contains("metric")) c.metric_tag = j["metric"].get<std::string>();
  if (j.contains("weight")) c.weight_tag = j["weight"].get<std::string>();

  if (j.contains("symbol")) {
    const auto& s = j["symbol"];
    reject_unknown(s, {"preset", "expr"}, "symbol");
    if (s.contains("preset")) c.symbol_preset = s["preset"].get<std::string>();
    if (s.contains("expr")) c.symbol_expr = s["expr"].get<std::string>();
    if (c.symbol_preset.empty() == c.symbol_expr.empty())
      throw ConfigError("symbol: exactly one of 'preset' or 'expr' required");
  } else {
    c.symbol_preset = "const1";
  }

  if (j.contains("window")) {
    const auto& w = j["window"];
    reject_unknown(w, {"kind", "r", "cutoff", "chi", "theta_r"}, "window");
    if (!w.contains("kind")) throw ConfigError("window: missing field 'kind'");
    c.window_kind = w["kind"].get<std::string>();
    if (c.window_kind != "bump" && c.window_kind != "wigner" && c.window_kind != "translate")
      throw ConfigError("window: unknown kind '" + c.window_kind + "'");
    if (w.contains("r")) c.window_r = w["r"].get<double>();
    if (w.contains("cutoff")) c.window_cutoff = w["cutoff"].get<std::string>();
    if (w.contains("chi")) c.window_chi = w["chi"].get<std::string>();
    if (w.contains("theta_r")) {
      if (w["theta_r"].is_null())
        c.theta_r.reset();
      else
        c.theta_r = w["theta_r"].get<double>();
    }
  }

  if (j.contains("grid")) {
    const auto& g = j["grid"];
    reject_unknown(g, {"half_width", "points"}, "grid");
    if (g.contains("half_width")) c.grid_half_width = g["half_width"].get<double>();
    if (g.contains("points")) c.grid_points = g["points"].get<int>();
  }

  if (j.contains("samples")) {
    const auto& s = j["samples"];
    reject_unknown(s,
                   {"mid_points", "mid_extent", "directions", "radii", "d_min", "d_max",
                    "geometric"},
                   "samples");
    if (s.contains("mid_points")) c.samples.mid_points_per_axis = s["mid_points"].get<int>();
    if (s.contains("mid_extent")) c.samples.mid_extent = s["mid_extent"].get<double>();
    if (s.contains("directions")) c.samples.directions = s["directions"].get<int>();
    if (s.contains("radii")) c.samples.radii = s["radii"].get<int>();
    if (s.contains("d_min")) c.samples.d_min = s["d_min"].get<double>();
    if (s.contains("d_max")) c.samples.d_max = s["d_max"].get<double>();
    if (s.contains("geometric")) c.samples.geometric = s["geometric"].get<bool>();
  }

  if (j.contains("axioms")) {
    const auto& a = j["axioms"];
    reject_unknown(a, {"pairs", "extent"}, "axioms");
    if (a.contains("pairs")) c.axiom_pairs = a["pairs"].get<int>();
    if (a.contains("extent")) c.axiom_extent = a["extent"].get<double>();
  }

  if (j.contains("ladder")) c.ladder = j["ladder"].get<std::vector<double>>();
  if (j.contains("p")) c.p = j["p"].is_string() ? INFINITY : j["p"].get<double>();
  if (j.contains("q")) c.q = j["q"].is_string() ? INFINITY : j["q"].get<double>();
  if (j.contains("s")) c.s = j["s"].get<double>();
  if (j.contains("seed")) c.seed = j["seed"].get<std::uint64_t>();
  return c;
}

ExperimentConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  njson j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw ConfigError(std::string("config JSON parse error: ") + e.what());
  }
  return parse_config(j);
}

std::string ExperimentConfig::canonical() const {
  std::ostringstream out;
  out << "v" << schema_version << "|metric=" << metric_tag << "|weight=" << weight_tag
      << "|symbol=" << (symbol_preset.empty() ? "expr:" + symbol_expr : symbol_preset)
      << "|window=" << window_kind << ":" << window_r << ":" << window_cutoff << ":"
      << window_chi << ":" << (theta_r ? std::to_string(*theta_r) : "none")
      << "|grid=" << grid_half_width << "x" << grid_points << "|mid="
      << samples.mid_points_per_axis << ":" << samples.mid_extent
      << "|off=" << samples.directions << ":" << samples.radii << ":" << samples.d_min << ":"
      << samples.d_max << ":" << (samples.geometric ? "geo" : "uni") << "|p=" << p
      << "|q=" << q << "|s=" << s << "|seed=" << seed;
  return out.str();
}

HormanderMetric ExperimentConfig::metric() const { return metric_from_tag(metric_tag); }

AdmissibleWeight ExperimentConfig::weight() const { return weight_from_tag(weight_tag); }

SymbolPreset ExperimentConfig::symbol() const {
  return symbol_preset.empty() ? symbol_parse(symbol_expr) : pf::symbol_preset(symbol_preset);
}

DiagConfig ExperimentConfig::diag_config() const {
  DiagConfig cfg;
  if (window_chi != "gaussian")
    throw ConfigError("window: only the gaussian chi is available from config");
  cfg.chi = gaussian_window1d();
  if (theta_r)
    cfg.theta = ThetaFamily{make_cutoff(window_cutoff),
                            std::min(*theta_r, metric().constants.r0)};
  return cfg;
}

ConfinedFamily ExperimentConfig::family() const {
  const HormanderMetric g = metric();
  if (window_kind == "bump") return make_bump_family(g, window_r, make_cutoff(window_cutoff));
  if (window_kind == "translate")
    return make_translate_family(
        [](const PhasePoint& P) {
          return cplx(std::exp(-std::numbers::pi * P.flat().squaredNorm()));
        },
        g);
  std::optional<ThetaFamily> theta;
  if (theta_r) theta = ThetaFamily{make_cutoff(window_cutoff), std::min(*theta_r, g.constants.r0)};
  return make_wigner_family(g, "identity", theta, gaussian_window1d());
}

namespace {

struct ReportSink {
  const ExperimentConfig& config;
  const RunOptions& options;

  void write(const std::string& name, njson body, const std::string& csv = "",
             bool plot = false) const {
    body["config_hash"] = config_hash(config.canonical());
    body["library_version"] = "phasefield 1.0.0";
    write_file_atomic(options.out_dir + "/" + name + ".json", body.dump(2) + "\n");
    if (!csv.empty()) write_file_atomic(options.out_dir + "/" + name + ".csv", csv);
    if (plot) write_file_atomic(options.out_dir + "/plot_" + name + ".py", kPlotScript);
  }
};

int run_check_metric(const ExperimentConfig& c, const ReportSink& sink) {
  const HormanderMetric g = c.metric();
  const AxiomSampleSpec spec{c.axiom_pairs, c.axiom_extent, c.seed};
  njson body;
  njson axioms = njson::array();
  for (const auto& rep : check_axioms(g, spec)) axioms.push_back(to_json(rep));
  body["axioms"] = axioms;
  body["weight"] = to_json(check_weight(c.weight(), g, spec));
  njson lemma = njson::array();
  for (const auto& rep : lemma_inequality_suite(g, std::min(0.5, g.constants.r0), spec))
    lemma.push_back(to_json(rep));
  body["lemma_suite"] = lemma;
  sink.write("check_metric", std::move(body));
  return 0;
}

int run_windows(const ExperimentConfig& c, const ReportSink& sink) {
  const HormanderMetric g = c.metric();
  const ConfinedFamily fam = c.family();
  std::vector<PhasePoint> ys = {PhasePoint(0, 0), PhasePoint(1, 1), PhasePoint(-2, 1.5),
                                PhasePoint(0.5, -2.5)};
  std::vector<PhasePoint> xs = {PhasePoint(0, 0), PhasePoint(1.5, -0.5)};
  njson body;
  body["family"] = fam.tag;
  body["nondegeneracy_lower_bound"] = nondegeneracy_lower_bound(fam, ys);
  njson semi = njson::array();
  for (int k = 0; k <= 2; ++k) semi.push_back(confinement_seminorm(fam, k, xs, ys, c.seed));
  body["confinement_seminorms"] = semi;
  njson ints = njson::array();
  for (const auto& y : ys) {
    const cplx v = family_integral(fam, y);
    ints.push_back({{"y", {y.x[0], y.xi[0]}}, {"re", v.real()}, {"im", v.imag()}});
  }
  body["family_integrals"] = ints;
  sink.write("windows", std::move(body));
  return 0;
}

int run_gstft(const ExperimentConfig& c, const ReportSink& sink) {
  const PhaseGrid grid = PhaseGrid::square(c.grid_half_width, c.grid_points);
  const SampledPhaseFunction f = SampledPhaseFunction::from_function(
      grid, [](const PhasePoint& P) {
        return cplx(std::exp(-std::numbers::pi * P.flat().squaredNorm()));
      });
  const ConfinedFamily fam = c.family();
  XLattice lattice;
  lattice.extent = 5.0;
  lattice.points_per_axis = 33;

  // involution / Parseval
  const SampledPhaseFunction once = symplectic_fourier(f);
  const SampledPhaseFunction twice = symplectic_fourier(once);
  double max_err = 0.0;
  for (std::size_t i = 0; i < f.values.size(); ++i)
    max_err = std::max(max_err, std::abs(twice.values[i] - f.values[i]));
  const double parseval = std::abs(once.l2_norm() - f.l2_norm()) / f.l2_norm();

  const auto [lhs, rhs] = orthogonality_check(fam, fam, f, f, lattice);
  const auto rec = reconstruct(f, fam, fam, lattice);

  njson body;
  body["involution_max_abs_err"] = max_err;
  body["parseval_rel_err"] = parseval;
  body["orthogonality"] = {{"lhs_re", lhs.real()},
                           {"lhs_im", lhs.imag()},
                           {"rhs_re", rhs.real()},
                           {"rhs_im", rhs.imag()},
                           {"rel_err", std::abs(lhs - rhs) / std::abs(rhs)}};
  body["reconstruction_residual"] = rec.residual;
  const bool ok = max_err < 1e-10 && parseval < 1e-10 &&
                  std::abs(lhs - rhs) / std::abs(rhs) < 1e-3 && rec.residual < 1e-3;
  body["selftest_pass"] = ok;
  sink.write("gstft", std::move(body));
  return ok ? 0 : 3;
}

int run_norms(const ExperimentConfig& c, const ReportSink& sink) {
  const HormanderMetric g = c.metric();
  const ConfinedFamily fam = c.family();
  const SymbolPreset sym = c.symbol();
  const PhaseGrid grid = PhaseGrid::square(c.grid_half_width, c.grid_points);
  const SampledPhaseFunction fa = SampledPhaseFunction::from_function(grid, sym.evaluator);

  njson body;
  body["norm_kind"] = "symbol_norm_truncation";
  body["p"] = std::isinf(c.p) ? njson("inf") : njson(c.p);
  body["q"] = std::isinf(c.q) ? njson("inf") : njson(c.q);
  body["s"] = c.s;
  body["grid"] = {{"half_width", c.grid_half_width}, {"points", c.grid_points}};
  body["truncation"] = {{"extent", 5.0}, {"points_per_axis", 33}};
  body["value"] = symbol_norm_truncation(fa, c.weight(), g, c.s, c.p, fam);
  njson ladder = njson::array();
  for (double s : {0.0, 1.0, 2.0, 3.0, 4.0, 6.0})
    ladder.push_back(symbol_norm_truncation(fa, c.weight(), g, s, c.p, fam));
  body["s_ladder_values"] = ladder;
  sink.write("norms", std::move(body));
  return 0;
}

int run_weyl(const ExperimentConfig& c, const ReportSink& sink) {
  const SymbolPreset sym = c.symbol();
  const DiagConfig cfg = c.diag_config();
  const SampledFunction1D chi = sample_function1d(cfg.chi_axis, cfg.chi.evaluator());
  const WeylOperator op(sym.evaluator, cfg.chi_axis);
  auto wig = [](const PhasePoint& U) {
    return std::numbers::sqrt2 * std::exp(-2.0 * std::numbers::pi * U.flat().squaredNorm());
  };

  HaltonSeq seq(4, c.seed);
  const int count = 200;
  std::vector<MatrixElementSample> rows(2 * count);
  std::vector<double> rel(count, 0.0);
  parallel_for(count, [&](std::size_t i) {
    HaltonSeq local(4, c.seed + 17 * i);
    const auto u = local.next();
    const PhasePoint X((2 * u[0] - 1) * 2.5, (2 * u[1] - 1) * 2.5);
    const PhasePoint Xi = X + PhasePoint((2 * u[2] - 1) * 1.5, (2 * u[3] - 1) * 1.5);
    const cplx direct = matrix_element_direct(op, X, Xi, chi);
    const double wroute = matrix_element_wigner(sym.evaluator, X, Xi, wig);
    rows[2 * i] = {X, Xi, direct, std::abs(direct), "direct"};
    rows[2 * i + 1] = {X, Xi, cplx(0.0), wroute, "wigner"};
    const double scale = std::max(std::abs(direct), wroute);
    rel[i] = scale > 1e-8 ? std::abs(std::abs(direct) - wroute) / scale : 0.0;
  });
  double worst = 0.0;
  for (double v : rel) worst = std::max(worst, v);

  njson body;
  body["battery_size"] = count;
  body["max_route_rel_err"] = worst;
  sink.write("weyl", std::move(body), csv_matrix_elements(rows), true);
  return worst < 1e-4 ? 0 : 3;
}

int run_diag(const ExperimentConfig& c, const ReportSink& sink) {
  const HormanderMetric g = c.metric();
  const SymbolPreset sym = c.symbol();
  const DiagConfig cfg = c.diag_config();
  const DiagField field = diag_field(sym.evaluator, g, cfg, c.samples);
  const DecayReport rep = decay_fit(field, c.weight(), c.ladder);

  DiagSampleSpec small = c.samples;
  small.mid_points_per_axis = 3;
  small.directions = 6;
  small.radii = 4;
  small.d_max = std::min(c.samples.d_max, 4.0);
  const double xerr = keyidentity_crosscheck(sym.evaluator, g, cfg, small);

  njson body;
  body["decay"] = to_json(rep);
  body["keyidentity_max_rel_err"] = xerr;
  sink.write("diag", std::move(body), csv_diag_field(field), true);
  return xerr < 1e-3 ? 0 : 3;
}

int run_classify(const ExperimentConfig& c, const ReportSink& sink) {
  ClassifyConfig cc;
  cc.diag = c.diag_config();
  cc.samples = c.samples;
  cc.ladder = c.ladder;
  const ClassifyResult res = classify(c.symbol().evaluator, c.metric(), c.weight(), cc);
  njson body = to_json(res);
  body["symbol"] = c.symbol().name;
  sink.write("classify", std::move(body));
  return 0;
}

}  // namespace

int run(const std::string& subcommand, const ExperimentConfig& config,
        const RunOptions& options) {
  set_worker_count(options.workers);
  const ReportSink sink{config, options};
  try {
    if (subcommand == "check-metric") return run_check_metric(config, sink);
    if (subcommand == "windows") return run_windows(config, sink);
    if (subcommand == "gstft") return run_gstft(config, sink);
    if (subcommand == "norms") return run_norms(config, sink);
    if (subcommand == "weyl") return run_weyl(config, sink);
    if (subcommand == "diag") return run_diag(config, sink);
    if (subcommand == "classify") return run_classify(config, sink);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    njson diag;
    diag["error"] = e.what();
    write_file_atomic(options.out_dir + "/failure.json", diag.dump(2) + "\n");
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 3;
  }
  std::cerr << "unknown subcommand: " << subcommand << "\n";
  return 2;
}

}  // namespace pf
