#include "commands.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "schervish/bootstrap.hpp"
#include "schervish/calibration.hpp"
#include "schervish/dataset.hpp"
#include "schervish/decompose.hpp"
#include "schervish/quadrature.hpp"
#include "schervish/ranking.hpp"
#include "schervish/scores.hpp"
#include "schervish/set_metrics.hpp"

namespace schervish::cli {

namespace {

using json = nlohmann::ordered_json;

constexpr double kOracleRelTol = 1e-6;
constexpr double kOracleAbsTol = 1e-9;
constexpr double kShiftAverageTol = 1e-10;

// Flag values shared by several subcommands.
struct Options {
  std::vector<std::string> inputs;
  std::vector<std::string> metrics;
  std::string output;
  std::string interval;
  std::optional<double> pi0;
  std::optional<double> pi;
  double tau = 0.5;
  double c = 0.5;
  std::size_t replicates = 0;
  double level = 0.95;
  std::uint64_t seed = 0;
  unsigned threads = 1;
  std::size_t nodes = 2049;
  bool verify = false;
  std::string groups;
  std::size_t grid = 101;
  bool recalibrated = false;
  GeneratorSpec gen;
};

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

PrevalenceInterval parse_interval(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) throw UsageError("interval must be written a:b");
  PrevalenceInterval iv;
  try {
    std::size_t used = 0;
    const std::string a = text.substr(0, colon), b = text.substr(colon + 1);
    iv.a = std::stod(a, &used);
    if (used != a.size()) throw UsageError("");
    iv.b = std::stod(b, &used);
    if (used != b.size()) throw UsageError("");
  } catch (const std::exception&) {
    throw UsageError("interval must be written a:b with two numbers, got '" + text + "'");
  }
  try {
    iv.validate();
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  return iv;
}

PrevalenceInterval require_interval(const Options& o) {
  if (o.interval.empty()) throw UsageError("--interval a:b is required for this command or metric");
  return parse_interval(o.interval);
}

void require_open(double x, const char* flag) {
  if (!(x > 0.0 && x < 1.0)) throw UsageError(std::string(flag) + " must lie in (0,1)");
}

BootstrapSpec bootstrap_spec(const Options& o) {
  BootstrapSpec s;
  s.replicates = o.replicates;
  s.level = o.level;
  s.seed = o.seed;
  s.threads = o.threads;
  try {
    s.validate();
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  return s;
}

json interval_json(const PrevalenceInterval& iv) { return json::array({iv.a, iv.b}); }

json ci_json(const ConfidenceInterval& ci, double level) {
  return json{{"lo", ci.lo}, {"hi", ci.hi}, {"level", level}};
}

json bootstrap_json(const Options& o) {
  if (o.replicates == 0) return nullptr;
  return json{{"replicates", o.replicates}, {"level", o.level}, {"seed", o.seed}};
}

// Write to a sibling temporary file, then rename over the target.
void write_atomically(const std::string& path, const std::string& text) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw DataError("cannot write '" + tmp.string() + "'");
    f << text;
    f.flush();
    if (!f) throw DataError("cannot write '" + tmp.string() + "'");
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw DataError("cannot rename output into '" + path + "'");
  }
}

void emit(const Options& o, const std::string& text, std::ostream& out) {
  if (o.output.empty() || o.output == "-") {
    out << text;
  } else {
    write_atomically(o.output, text);
  }
}

Dataset load_inputs(const Options& o) {
  if (o.inputs.empty()) throw UsageError("no input file given");
  if (o.inputs.size() == 1) return load_csv_file(o.inputs.front(), o.pi0);
  std::vector<Dataset> parts;
  for (const std::string& path : o.inputs) parts.push_back(load_csv_file(path));
  const Dataset all = concatenate(parts);
  return o.pi0 ? Dataset(all.samples(), o.pi0) : all;
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

// ---- evaluate --------------------------------------------------------------

const char* set_metric_units(MetricKind k) {
  switch (k) {
    case MetricKind::NetBenefit:
    case MetricKind::PAMNB:
      return "true-positive equivalents per row";
    default:
      return "fraction correct";
  }
}

const char* score_units(ScoreKind k) {
  switch (k) {
    case ScoreKind::BoundedBrier: return "accuracy x prevalence width";
    case ScoreKind::BoundedLog:
    case ScoreKind::WaLog: return "accuracy x logit width (nats)";
    case ScoreKind::DcaLog: return "true-positive equivalents per row";
  }
  return "";
}

double score_oracle(const Dataset& d, ScoreKind kind, const PrevalenceInterval& iv, double c, std::size_t nodes) {
  switch (kind) {
    case ScoreKind::BoundedBrier:
      return (iv.b - iv.a) *
             quadrature_expectation(d, AdjustedMetric::PAMA, iv, c, nodes, PrevalenceMeasure::ProbabilityUniform);
    case ScoreKind::BoundedLog:
      return iv.logit_width() * quadrature_expectation(d, AdjustedMetric::PAMA, iv, c, nodes);
    case ScoreKind::DcaLog:
      return quadrature_expectation(d, AdjustedMetric::PAMNB, iv, c, nodes);
    case ScoreKind::WaLog:
      return iv.logit_width() * quadrature_expectation(d, AdjustedMetric::PAMWA, iv, c, nodes);
  }
  return 0.0;
}

// Each distinct score equals the weighted positive rate of its rows.
bool exactly_calibrated(const Dataset& d) {
  std::map<double, std::pair<double, double>> by_score;
  for (std::size_t i = 0; i < d.size(); ++i) {
    auto& [pos, all] = by_score[d.scores()[i]];
    all += d.weights()[i];
    if (d.labels()[i] == 1) pos += d.weights()[i];
  }
  for (const auto& [s, pa] : by_score) {
    if (std::abs(pa.first / pa.second - s) > 1e-12) return false;
  }
  return true;
}

int cmd_evaluate(const Options& o, std::ostream& out) {
  require_open(o.tau, "--tau");
  require_open(o.c, "--c");
  if (o.metrics.empty()) throw UsageError("at least one --metric is required");
  std::vector<std::string> names;
  for (const std::string& m : o.metrics) {
    for (const std::string& n : split_list(m)) names.push_back(n);
  }
  if (o.replicates > 0) bootstrap_spec(o);

  if (o.pi && !(*o.pi >= 0.0 && *o.pi <= 1.0)) throw UsageError("--pi must lie in [0,1]");
  const Dataset d = load_inputs(o);
  const Prevalence pi = o.pi ? Prevalence(*o.pi) : Prevalence(d.prevalence());

  std::optional<PrevalenceInterval> iv;
  if (!o.interval.empty()) iv = parse_interval(o.interval);

  bool verify_failed = false;
  json metrics = json::array();
  for (const std::string& name : names) {
    json m;
    m["name"] = name;
    if (name == "auc") {
      const RocResult roc = auc_roc(d);
      m["value"] = roc.auc;
      m["units"] = "probability";
      m["parameters"] = json{{"n_pos", roc.n_pos}, {"n_neg", roc.n_neg}, {"tie_mass", roc.tie_mass}};
      if (o.replicates > 0) {
        const auto ci = bootstrap_recompute(d, [](const Dataset& x) { return auc_roc(x).auc; }, bootstrap_spec(o));
        m["ci"] = ci_json(ci, o.level);
      }
      if (o.verify) {
        const double shift = auc_shift_average(d);
        const double residual = std::abs(roc.auc - shift);
        const bool calibrated = exactly_calibrated(d);
        const bool passed = !calibrated || residual <= kShiftAverageTol;
        m["verify"] = json{{"check", "shift-average"},
                           {"shift_average", shift},
                           {"residual", residual},
                           {"tolerance", kShiftAverageTol},
                           {"calibrated", calibrated},
                           {"passed", passed}};
        verify_failed = verify_failed || !passed;
      }
    } else if (name == "bounded-brier" || name == "bounded-log" || name == "dca-log" || name == "wa-log") {
      const ScoreKind kind = parse_score_kind(name);
      if (!iv) require_interval(o);
      const ScoreReport r = score_report(d, kind, *iv, o.c);
      m["value"] = r.value;
      m["units"] = score_units(kind);
      json params{{"interval", interval_json(*iv)}};
      if (kind == ScoreKind::DcaLog || kind == ScoreKind::WaLog) params["c"] = o.c;
      m["parameters"] = params;
      m["gamma"] = r.gamma;
      m["logit_width"] = r.logit_width;
      if (o.replicates > 0) {
        const auto ci = bootstrap_ci(r.per_sample, r.gamma * r.normalizer, bootstrap_spec(o));
        m["ci"] = ci_json(ci, o.level);
      }
      if (o.verify) {
        const double oracle = score_oracle(d, kind, *iv, o.c, o.nodes);
        const double residual = std::abs(r.value - oracle);
        const double tol = std::max(kOracleRelTol * std::abs(oracle), kOracleAbsTol);
        const bool passed = residual <= tol;
        m["verify"] = json{{"check", "quadrature"},
                           {"oracle", oracle},
                           {"nodes", o.nodes},
                           {"residual", residual},
                           {"tolerance", tol},
                           {"passed", passed}};
        verify_failed = verify_failed || !passed;
      }
    } else {
      MetricKind kind;
      try {
        kind = parse_metric_kind(name);
      } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
      }
      MetricRequest req{kind, o.tau, o.c, pi};
      m["value"] = evaluate(d, req);
      m["units"] = set_metric_units(kind);
      json params{{"tau", o.tau}};
      if (kind == MetricKind::NetBenefit || kind == MetricKind::WeightedAccuracy || kind == MetricKind::PAMNB ||
          kind == MetricKind::PAMWA) {
        params["c"] = o.c;
      }
      if (kind == MetricKind::PAMNB) params.erase("tau");
      if (kind == MetricKind::PAMA || kind == MetricKind::PAMNB || kind == MetricKind::PAMWA) {
        params["pi"] = pi.value();
      }
      m["parameters"] = params;
      if (o.replicates > 0) {
        const auto rows = contributions(d, req);
        m["ci"] = ci_json(bootstrap_ci(rows, 1.0, bootstrap_spec(o)), o.level);
      }
    }
    metrics.push_back(m);
  }

  json report;
  report["command"] = "evaluate";
  report["inputs"] = o.inputs;
  report["n"] = d.size();
  report["pi0"] = d.prevalence();
  report["parameters"] = json{{"tau", o.tau},
                              {"c", o.c},
                              {"pi", pi.value()},
                              {"interval", iv ? interval_json(*iv) : json(nullptr)},
                              {"nodes", o.nodes},
                              {"verify", o.verify},
                              {"bootstrap", bootstrap_json(o)}};
  report["metrics"] = metrics;
  emit(o, report.dump(2) + "\n", out);
  return verify_failed ? kVerifyFailed : kOk;
}

// ---- compare ---------------------------------------------------------------

std::pair<std::string, std::string> pick_groups(const Options& o, const Dataset& all) {
  if (!all.has_groups()) throw UsageError("compare needs a 'group' column");
  std::vector<std::string> chosen = o.groups.empty() ? all.group_names() : split_list(o.groups);
  if (chosen.size() != 2) {
    throw UsageError("compare needs exactly two groups (found " + std::to_string(chosen.size()) +
                     "); select them with --groups A,B");
  }
  if (chosen[0] == chosen[1]) throw UsageError("the two compared groups must differ");
  return {chosen[0], chosen[1]};
}

json report_delta(const std::string& name, double value, const std::optional<ConfidenceInterval>& ci,
                  double level) {
  json j{{"name", name}, {"value", value}};
  if (ci) j["ci"] = ci_json(*ci, level);
  return j;
}

int cmd_compare(const Options& o, std::ostream& out) {
  require_open(o.c, "--c");
  const PrevalenceInterval iv = require_interval(o);
  if (o.replicates > 0) bootstrap_spec(o);
  const Dataset all = load_inputs(o);
  const auto [name_a, name_b] = pick_groups(o, all);
  const Dataset a = all.subgroup(name_a);
  const Dataset b = all.subgroup(name_b);

  const DecompositionReport sc = decompose_sharpness_calibration(a, b, iv, o.c);
  std::optional<DecompositionReport> ml;
  std::string not_applicable;
  try {
    ml = decompose_mechanism_labelshift(a, b, o.c);
  } catch (const NotApplicable& e) {
    not_applicable = e.what();
  }

  std::optional<DecompositionIntervals> cis;
  if (o.replicates > 0) cis = decomposition_intervals(a, b, iv, o.c, bootstrap_spec(o));

  json per_group = json::object();
  for (const auto& [name, g] : {std::pair<std::string, const Dataset*>{name_a, &a}, {name_b, &b}}) {
    per_group[name] = json{{"n", g->size()},
                           {"pi0", g->prevalence()},
                           {"dca_log", dca_log(*g, iv, o.c).value},
                           {"pamnb_at_pi0", pamnb(*g, g->prevalence(), o.c)},
                           {"auc", auc_roc(*g).auc}};
  }

  json sc_json{{"interval", interval_json(sc.interval)},
               {"c", sc.c},
               {"total", report_delta("total", sc.delta_total, cis ? std::optional(cis->total) : std::nullopt, o.level)},
               {"sharpness", report_delta("sharpness", sc.first.value, cis ? std::optional(cis->sharpness) : std::nullopt, o.level)},
               {"calibration", report_delta("calibration", sc.second.value, cis ? std::optional(cis->calibration) : std::nullopt, o.level)},
               {"calibration_assembled", sc.second_assembled}};
  json ml_json;
  if (ml) {
    ml_json = json{{"applicable", true},
                   {"interval", interval_json(ml->interval)},
                   {"c", ml->c},
                   {"kappa", report_delta("kappa", ml->delta_total, cis ? cis->kappa : std::nullopt, o.level)},
                   {"mechanism", report_delta("mechanism", ml->first.value, cis ? cis->mechanism : std::nullopt, o.level)},
                   {"label_shift", report_delta("label_shift", ml->second.value, cis ? cis->label_shift : std::nullopt, o.level)},
                   {"label_shift_assembled", ml->second_assembled}};
  } else {
    ml_json = json{{"applicable", false}, {"reason", not_applicable}};
  }

  json report;
  report["command"] = "compare";
  report["inputs"] = o.inputs;
  report["groups"] = json::array({name_a, name_b});
  report["parameters"] = json{{"c", o.c}, {"interval", interval_json(iv)}, {"bootstrap", bootstrap_json(o)}};
  report["per_group"] = per_group;
  report["sharpness_calibration"] = sc_json;
  report["mechanism_labelshift"] = ml_json;
  emit(o, report.dump(2) + "\n", out);
  return kOk;
}

// ---- curve -----------------------------------------------------------------

int cmd_curve(const Options& o, std::ostream& out) {
  require_open(o.c, "--c");
  const PrevalenceInterval iv = require_interval(o);
  if (o.grid < 2) throw UsageError("--grid must be at least 2");
  const Dataset all = load_inputs(o);

  std::vector<std::pair<std::string, Dataset>> series;
  if (!o.groups.empty()) {
    if (!all.has_groups()) throw UsageError("--groups given but the input has no 'group' column");
    for (const std::string& g : split_list(o.groups)) series.emplace_back(g, all.subgroup(g));
  } else {
    series.emplace_back("", all);
  }
  std::vector<std::pair<std::string, Dataset>> columns;
  for (const auto& [name, d] : series) {
    const std::string suffix = name.empty() ? "" : "_" + name;
    columns.emplace_back("pamnb" + suffix, d);
    if (o.recalibrated) columns.emplace_back("pamnb_recalibrated" + suffix, recalibrate(d, pava_fit(d)));
  }

  const double ua = logit(iv.a);
  const double ub = logit(iv.b);
  std::ostringstream csv;
  csv << "logit_pi,pi";
  for (const auto& col : columns) csv << ',' << col.first;
  csv << '\n';
  for (std::size_t k = 0; k < o.grid; ++k) {
    double u = ua + (ub - ua) * static_cast<double>(k) / static_cast<double>(o.grid - 1);
    double p = sigmoid(u);
    if (k == 0) {
      u = ua;
      p = iv.a;
    } else if (k + 1 == o.grid) {
      u = ub;
      p = iv.b;
    }
    csv << format_double(u) << ',' << format_double(p);
    for (const auto& col : columns) csv << ',' << format_double(pamnb(col.second, Prevalence(p), o.c));
    csv << '\n';
  }
  emit(o, csv.str(), out);
  return kOk;
}

// ---- generate --------------------------------------------------------------

int cmd_generate(const Options& o, std::ostream& out) {
  try {
    o.gen.validate();
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  const Dataset d = generate(o.gen);
  std::ostringstream csv;
  write_csv(csv, d);
  json meta{{"generator", "gaussian-label-shift"},
            {"n", o.gen.n},
            {"pi0", o.gen.pi0},
            {"mu0", o.gen.mu0},
            {"mu1", o.gen.mu1},
            {"sigma", o.gen.sigma},
            {"calib_slope", o.gen.calib_slope},
            {"calib_intercept", o.gen.calib_intercept},
            {"seed", o.gen.seed},
            {"group", o.gen.group},
            {"empirical_pi0", d.prevalence()}};
  if (o.output.empty() || o.output == "-") {
    out << csv.str();
  } else {
    write_atomically(o.output, csv.str());
    write_atomically(o.output + ".json", meta.dump(2) + "\n");
  }
  return kOk;
}

// ---- plumbing --------------------------------------------------------------

void add_bootstrap_flags(CLI::App* app, Options& o) {
  app->add_option("--bootstrap", o.replicates, "Bootstrap replicates (0 disables; at least 100 otherwise)");
  app->add_option("--level", o.level, "Confidence level")->capture_default_str();
  app->add_option("--seed", o.seed, "Bootstrap seed")->capture_default_str();
  app->add_option("--threads", o.threads, "Worker threads for resampling (0 = all cores)")->capture_default_str();
}

void write_error(std::ostream& err, const std::string& type, const std::string& message,
                 std::optional<std::size_t> row = std::nullopt) {
  json e{{"type", type}, {"message", message}};
  if (row) e["row"] = *row;
  err << json{{"error", e}}.dump() << '\n';
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Decision-theoretic evaluation of probabilistic binary classifiers"};
  app.name("schervish");
  app.require_subcommand(1);

  auto* ev = app.add_subcommand("evaluate", "Set metrics, AUC and clipped scoring rules as a JSON report");
  ev->add_option("input", o.inputs, "Input CSV file(s)")->required();
  ev->add_option("--metric,-m", o.metrics,
                 "accuracy, balanced-accuracy, net-benefit, weighted-accuracy, pama, pamnb, pamwa, auc, "
                 "bounded-brier, bounded-log, dca-log, wa-log (repeat or comma-separate)")
      ->required();
  ev->add_option("--tau", o.tau, "Decision threshold")->capture_default_str();
  ev->add_option("--c", o.c, "Cost ratio")->capture_default_str();
  ev->add_option("--pi", o.pi, "Deployment prevalence for prior-adjusted metrics (default: pi0)");
  ev->add_option("--pi0", o.pi0, "Override the evaluation prevalence");
  ev->add_option("--interval", o.interval, "Prevalence interval a:b");
  ev->add_option("--nodes", o.nodes, "Quadrature nodes for --verify")->capture_default_str();
  ev->add_flag("--verify", o.verify, "Cross-check closed forms against the quadrature oracle");
  ev->add_option("--output,-o", o.output, "Report path (default stdout)");
  add_bootstrap_flags(ev, o);

  auto* cmp = app.add_subcommand("compare", "Decompose the gap between two groups");
  cmp->add_option("input", o.inputs, "Input CSV file(s), concatenated")->required();
  cmp->add_option("--groups", o.groups, "Two group tags A,B (default: the two groups present)");
  cmp->add_option("--c", o.c, "Cost ratio")->capture_default_str();
  cmp->add_option("--interval", o.interval, "Prevalence interval a:b for the sharpness/calibration split")
      ->required();
  cmp->add_option("--output,-o", o.output, "Report path (default stdout)");
  add_bootstrap_flags(cmp, o);

  auto* cur = app.add_subcommand("curve", "PAMNB on a logit-uniform prevalence grid as CSV");
  cur->add_option("input", o.inputs, "Input CSV file(s)")->required();
  cur->add_option("--interval", o.interval, "Prevalence interval a:b")->required();
  cur->add_option("--c", o.c, "Cost ratio")->capture_default_str();
  cur->add_option("--grid", o.grid, "Grid nodes")->capture_default_str();
  cur->add_option("--groups", o.groups, "Comma-separated group tags, one column each");
  cur->add_flag("--recalibrated", o.recalibrated, "Add columns for PAVA-recalibrated scores");
  cur->add_option("--pi0", o.pi0, "Override the evaluation prevalence");
  cur->add_option("--output,-o", o.output, "CSV path (default stdout)");

  auto* gen = app.add_subcommand("generate", "Synthetic Gaussian data under label shift");
  gen->add_option("--n", o.gen.n, "Rows")->capture_default_str();
  gen->add_option("--pi0", o.gen.pi0, "Prevalence")->capture_default_str();
  gen->add_option("--mu0", o.gen.mu0, "Mean of x for negatives")->capture_default_str();
  gen->add_option("--mu1", o.gen.mu1, "Mean of x for positives")->capture_default_str();
  gen->add_option("--sigma", o.gen.sigma, "Standard deviation of x")->capture_default_str();
  gen->add_option("--calib-slope", o.gen.calib_slope, "Logit slope applied to the true posterior")
      ->capture_default_str();
  gen->add_option("--calib-intercept", o.gen.calib_intercept, "Logit shift applied to the true posterior")
      ->capture_default_str();
  gen->add_option("--seed", o.gen.seed, "RNG seed")->capture_default_str();
  gen->add_option("--group", o.gen.group, "Group tag written on every row");
  gen->add_option("--output,-o", o.output, "CSV path; a JSON sidecar goes to <path>.json");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success&) {
    const CLI::App* shown = &app;
    for (const CLI::App* sub : {ev, cmp, cur, gen}) {
      if (sub->parsed()) shown = sub;
    }
    out << shown->help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    write_error(err, "usage", e.what());
    return kFailure;
  }

  try {
    if (ev->parsed()) return cmd_evaluate(o, out);
    if (cmp->parsed()) return cmd_compare(o, out);
    if (cur->parsed()) return cmd_curve(o, out);
    return cmd_generate(o, out);
  } catch (const DataError& e) {
    write_error(err, "data", e.what(), e.row() ? std::optional<std::size_t>(e.row()) : std::nullopt);
  } catch (const UsageError& e) {
    write_error(err, "usage", e.what());
  } catch (const NotApplicable& e) {
    write_error(err, "not-applicable", e.what());
  } catch (const std::invalid_argument& e) {
    write_error(err, "usage", e.what());
  } catch (const std::domain_error& e) {
    write_error(err, "domain", e.what());
  } catch (const std::exception& e) {
    write_error(err, "internal", e.what());
  }
  return kFailure;
}

}  // namespace schervish::cli
