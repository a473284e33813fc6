#include "cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "artifact.hpp"
#include "critpoly/errors.hpp"
#include "critpoly/function_spec.hpp"
#include "critpoly/pipeline.hpp"
#include "critpoly/verify.hpp"

namespace critpoly::cli {

namespace {

using nlohmann::json;

constexpr std::uint64_t kDefaultSeed = 20240601;

struct Options {
  std::string fn;
  std::string knots;
  std::string interval = "-1,1";
  std::uint64_t seed = kDefaultSeed;
  double t_cap = kDefaultTCap;
  double target_level = PipelineConfig{}.target_level;
  double tol = SolverConfig{}.tol;
  double damping = SolverConfig{}.damping;
  int max_iter = SolverConfig{}.max_iter;
  std::string format = "csv";
  std::string out;

  int degree = 0;
  std::vector<int> degrees;
  std::vector<double> thresholds{0.05, 0.1, 0.5};
  std::vector<std::string> tests{"1", "x", "x2"};
  std::string gnuplot;

  std::vector<int> n_list{33};
  std::string only;
  bool list = false;
  double epsilon = SuiteConfig{}.four_point_epsilon;
  int draws = SuiteConfig{}.draws;
};

void add_run_options(CLI::App* cmd, Options& o) {
  cmd->add_option("--seed", o.seed, "seed for every random draw");
  cmd->add_option("--format", o.format, "table format")->check(CLI::IsMember({"csv", "json"}));
  cmd->add_option("--out", o.out, "output path");
}

void add_solver_options(CLI::App* cmd, Options& o) {
  cmd->add_option("--fn", o.fn, "abs | sign | relu | sin:<k> | poly:<c0>,<c1>,...");
  cmd->add_option("--knots", o.knots, "CSV file of x,value rows for a piecewise-linear target");
  cmd->add_option("--interval", o.interval, "domain alpha,beta mapped onto [-1,1]");
  cmd->add_option("--t-cap", o.t_cap, "cap on |y_k|, in (0, 0.1]");
  cmd->add_option("--target-level", o.target_level, "bound on the rescaled group targets");
  cmd->add_option("--tol", o.tol, "solver residual tolerance");
  cmd->add_option("--damping", o.damping, "fixed-point damping, in (0, 1]");
  cmd->add_option("--max-iter", o.max_iter, "solver iteration limit");
}

std::pair<double, double> parse_interval(const std::string& text) {
  const auto comma = text.find(',');
  if (comma == std::string::npos) {
    throw InvalidInput("--interval expects alpha,beta, got '" + text + "'");
  }
  auto number = [&](std::string_view s) {
    while (!s.empty() && s.front() == ' ') {
      s.remove_prefix(1);
    }
    double v = 0.0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size() || !std::isfinite(v)) {
      throw InvalidInput("--interval expects alpha,beta, got '" + text + "'");
    }
    return v;
  };
  const std::string_view all(text);
  const double alpha = number(all.substr(0, comma));
  const double beta = number(all.substr(comma + 1));
  if (!(alpha < beta)) {
    throw InvalidInput("--interval needs alpha < beta");
  }
  return {alpha, beta};
}

FunctionSpec make_function(const Options& o) {
  const auto [alpha, beta] = parse_interval(o.interval);
  if (!o.fn.empty() && !o.knots.empty()) {
    throw InvalidInput("give either --fn or --knots, not both");
  }
  if (!o.knots.empty()) {
    std::ifstream in(o.knots);
    if (!in) {
      throw InvalidInput("cannot open knots file '" + o.knots + "'");
    }
    return FunctionSpec::piecewise_linear(read_knots_csv(in), alpha, beta);
  }
  if (o.fn.empty()) {
    throw InvalidInput("one of --fn or --knots is required");
  }
  return FunctionSpec::parse(o.fn).on_interval(alpha, beta);
}

PipelineConfig make_pipeline(const Options& o) {
  if (!(o.t_cap > 0.0 && o.t_cap <= 0.1)) {
    throw InvalidInput("--t-cap must lie in (0, 0.1]");
  }
  if (!(o.damping > 0.0 && o.damping <= 1.0)) {
    throw InvalidInput("--damping must lie in (0, 1]");
  }
  if (!(o.tol > 0.0)) {
    throw InvalidInput("--tol must be positive");
  }
  if (!(o.target_level > 0.0)) {
    throw InvalidInput("--target-level must be positive");
  }
  if (o.max_iter < 1) {
    throw InvalidInput("--max-iter must be at least 1");
  }
  PipelineConfig cfg;
  cfg.solver.t_cap = o.t_cap;
  cfg.solver.tol = o.tol;
  cfg.solver.damping = o.damping;
  cfg.solver.max_iter = o.max_iter;
  cfg.target_level = o.target_level;
  return cfg;
}

void require_degrees(const std::vector<int>& degrees) {
  if (degrees.empty()) {
    throw InvalidInput("--degrees needs at least one degree");
  }
  for (int n : degrees) {
    require_group_degree(n);
  }
}

json solver_config_json(const std::string& command, const Options& o) {
  json c;
  c["command"] = command;
  c["fn"] = o.fn;
  c["knots"] = o.knots;
  c["interval"] = o.interval;
  c["t_cap"] = o.t_cap;
  c["target_level"] = o.target_level;
  c["tol"] = o.tol;
  c["damping"] = o.damping;
  c["max_iter"] = o.max_iter;
  c["format"] = o.format;
  c["out"] = o.out;
  c["seed"] = o.seed;
  return c;
}

/// A table with a header row; cells are already formatted text.
struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

std::string csv_cell(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) {
    return s;
  }
  std::string q = "\"";
  for (char ch : s) {
    q += ch;
    if (ch == '"') {
      q += '"';
    }
  }
  return q + "\"";
}

/// CSV: a `# config` comment carrying the run configuration, the header, the
/// rows, then `# key value` trailer lines.
void write_csv(std::ostream& os, const json& config, const Table& t,
               const std::vector<std::pair<std::string, std::string>>& trailer) {
  os << "# config " << config.dump() << "\n";
  for (std::size_t i = 0; i < t.header.size(); ++i) {
    os << (i ? "," : "") << t.header[i];
  }
  os << "\n";
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      os << (i ? "," : "") << csv_cell(row[i]);
    }
    os << "\n";
  }
  for (const auto& [k, v] : trailer) {
    os << "# " << k << " " << v << "\n";
  }
}

/// Emits `doc` (JSON) or the CSV rendering to --out, or to `out` when no path is set.
void emit(const Options& o, std::ostream& out, const json& doc, const json& config, const Table& t,
          const std::vector<std::pair<std::string, std::string>>& trailer) {
  std::ostringstream text;
  if (o.format == "json") {
    text << doc.dump(2) << "\n";
  } else {
    write_csv(text, config, t, trailer);
  }
  if (o.out.empty()) {
    out << text.str();
    return;
  }
  const std::filesystem::path path(o.out);
  if (path.has_parent_path()) {
    std::filesystem::create_directories(path.parent_path());
  }
  std::ofstream file(path, std::ios::binary);
  if (!file) {
    throw InvalidInput("cannot write '" + o.out + "'");
  }
  file << text.str();
  out << "wrote " << o.out << "\n";
}

std::string num(double v) { return format_double(v); }

// ---------------------------------------------------------------- approximate

int cmd_approximate(const Options& o, std::ostream& out) {
  const FunctionSpec f = make_function(o);
  const PipelineConfig cfg = make_pipeline(o);
  require_group_degree(o.degree);
  const auto [alpha, beta] = parse_interval(o.interval);

  const ApproxResult res = approximate(f, o.degree, cfg);
  const CriticalPointReport cp = check_critical_points(res);

  json config = solver_config_json("approximate", o);
  config["degree"] = o.degree;

  double worst_residual = 0.0;
  for (double r : res.endpoint_residuals) {
    worst_residual = std::max(worst_residual, r);
  }

  if (!o.out.empty()) {
    const std::filesystem::path dir(o.out);
    std::filesystem::create_directories(dir);
    json doc = approximant_json(res, alpha, beta, config, o.seed);
    doc["critical_points_ok"] = cp.ok();
    std::ofstream js(dir / "approximant.json", std::ios::binary);
    js << doc.dump(2) << "\n";

    Table t{{"x", "f", "p"}, {}};
    const Approximant ap{res.approximant, alpha, beta};
    for (double x : sample_points(res.derivative_roots.z, 8)) {
      const double xd = f.to_domain(x);
      t.rows.push_back({num(xd), num(f(x)), num(ap(xd))});
    }
    std::ofstream csv(dir / "samples.csv", std::ios::binary);
    write_csv(csv, config, t, {});
  }

  out << "degree " << res.n << "\n";
  out << "approximant_degree " << res.approximant.degree() << "\n";
  out << "sup_error " << num(res.sup_error) << "\n";
  out << "max_endpoint_residual " << num(worst_residual) << "\n";
  out << "matched_endpoints " << res.endpoint_x.size() << "\n";
  out << "scale " << num(res.scale_factor) << "\n";
  out << "iterations " << res.solve.iterations << "\n";
  out << "converged " << (res.solve.converged ? "yes" : "no") << "\n";
  out << "frozen_edge_groups " << res.solve.frozen_edge_groups.size() << "\n";
  out << "critical_points " << (cp.ok() ? "ok" : "FAILED") << "\n";
  if (!o.out.empty()) {
    out << "wrote " << (std::filesystem::path(o.out) / "approximant.json").string() << " and "
        << (std::filesystem::path(o.out) / "samples.csv").string() << "\n";
  }
  return res.solve.converged && cp.ok() ? kExitOk : kExitNoConvergence;
}

// ---------------------------------------------------------------- rate

std::string gnuplot_script(const RateStudy& study) {
  std::ostringstream s;
  s << "# log-log sup error against degree, with the least-squares line\n";
  s << "$data << EOD\n";
  for (const RateRow& r : study.rows) {
    s << num(r.log_n) << " " << num(r.log_error) << " " << num(std::log(r.reference)) << "\n";
  }
  s << "EOD\n";
  s << "set xlabel 'log n'\nset ylabel 'log sup error'\nset key top right\n";
  if (study.fit.fitted) {
    s << "fit_line(t) = " << num(study.fit.slope) << " * t + " << num(study.fit.intercept) << "\n";
    s << "plot $data using 1:2 with points pt 7 title 'measured', \\\n"
      << "     fit_line(x) with lines title 'fit', \\\n"
      << "     $data using 1:3 with lines dt 2 title '0.280169/n'\n";
  } else {
    s << "plot $data using 1:2 with points pt 7 title 'measured', \\\n"
      << "     $data using 1:3 with lines dt 2 title '0.280169/n'\n";
  }
  return s.str();
}

int cmd_rate(const Options& o, std::ostream& out) {
  const FunctionSpec f = make_function(o);
  const PipelineConfig cfg = make_pipeline(o);
  require_degrees(o.degrees);
  const RateStudy study = rate_study(f, o.degrees, cfg);

  json config = solver_config_json("rate", o);
  config["degrees"] = o.degrees;
  config["gnuplot"] = o.gnuplot;

  Table t{{"n", "sup_error", "log_n", "log_error", "reference", "converged", "max_endpoint_residual", "frozen_groups"},
          {}};
  json rows = json::array();
  bool all_converged = true;
  for (const RateRow& r : study.rows) {
    all_converged = all_converged && r.converged;
    t.rows.push_back({std::to_string(r.n), num(r.sup_error), num(r.log_n), num(r.log_error), num(r.reference),
                      r.converged ? "1" : "0", num(r.max_endpoint_residual),
                      std::to_string(r.frozen_groups.size())});
    rows.push_back({{"n", r.n},
                    {"sup_error", r.sup_error},
                    {"log_n", r.log_n},
                    {"log_error", r.log_error},
                    {"reference", r.reference},
                    {"converged", r.converged},
                    {"max_endpoint_residual", r.max_endpoint_residual},
                    {"frozen_groups", r.frozen_groups}});
  }
  json fit{{"fitted", study.fit.fitted},
           {"slope", study.fit.slope},
           {"intercept", study.fit.intercept},
           {"note", study.fit.note}};
  json doc{{"config", config}, {"seed", o.seed}, {"rows", rows}, {"fit", fit}};
  std::vector<std::pair<std::string, std::string>> trailer;
  if (study.fit.fitted) {
    trailer.emplace_back("fit", "slope=" + num(study.fit.slope) + " intercept=" + num(study.fit.intercept));
  } else {
    trailer.emplace_back("fit", "none: " + study.fit.note);
  }
  emit(o, out, doc, config, t, trailer);

  if (!o.gnuplot.empty()) {
    std::ofstream gp(o.gnuplot, std::ios::binary);
    if (!gp) {
      throw InvalidInput("cannot write '" + o.gnuplot + "'");
    }
    gp << gnuplot_script(study);
  }
  return all_converged ? kExitOk : kExitNoConvergence;
}

// ---------------------------------------------------------------- verify

std::string join(const std::vector<double>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    s += (i ? ";" : "") + num(v[i]);
  }
  return s;
}

int cmd_verify(const Options& o, std::ostream& out) {
  if (o.list) {
    for (const CheckInfo& info : check_catalog()) {
      out << info.id << "\t" << (info.per_degree ? "per-n" : "once") << "\t" << info.property << "\n";
    }
    return kExitOk;
  }
  if (!o.only.empty() && !is_known_check(o.only)) {
    throw InvalidInput("unknown check id '" + o.only + "'; see verify --list");
  }
  SuiteConfig cfg;
  cfg.n_list = o.n_list;
  cfg.seed = o.seed;
  cfg.only = o.only;
  cfg.four_point_epsilon = o.epsilon;
  cfg.draws = o.draws;
  const auto results = run_check_suite(cfg);

  json config;
  config["command"] = "verify";
  config["n"] = o.n_list;
  config["only"] = o.only;
  config["epsilon"] = o.epsilon;
  config["draws"] = o.draws;
  config["format"] = o.format;
  config["out"] = o.out;
  config["seed"] = o.seed;

  Table t{{"id", "status", "observed", "bound", "context", "reason"}, {}};
  json rows = json::array();
  int failed = 0;
  int skipped = 0;
  for (const CheckResult& r : results) {
    const std::string status = r.skipped ? "skip" : (r.passed ? "pass" : "fail");
    failed += r.passed ? 0 : 1;
    skipped += r.skipped ? 1 : 0;
    t.rows.push_back({r.id, status, join(r.observed), join(r.bound), r.context, r.reason});
    rows.push_back({{"id", r.id},
                    {"property", r.name},
                    {"status", status},
                    {"observed", r.observed},
                    {"bound", r.bound},
                    {"context", r.context},
                    {"reason", r.reason}});
  }
  json doc{{"config", config},
           {"seed", o.seed},
           {"checks", rows},
           {"failed", failed},
           {"skipped", skipped},
           {"total", results.size()}};
  emit(o, out, doc, config, t,
       {{"summary", std::to_string(results.size() - failed - skipped) + " passed, " + std::to_string(failed) +
                        " failed, " + std::to_string(skipped) + " skipped"}});
  return failed == 0 ? kExitOk : kExitUsage;
}

// ---------------------------------------------------------------- weakstar

FunctionSpec test_function(const std::string& label) {
  if (label == "1") {
    return FunctionSpec::parse("poly:1");
  }
  if (label == "x") {
    return FunctionSpec::parse("poly:0,1");
  }
  if (label == "x2") {
    return FunctionSpec::parse("poly:0,0,1");
  }
  // anything else is a full function spec
  return FunctionSpec::parse(label);
}

int cmd_weakstar(const Options& o, std::ostream& out) {
  const FunctionSpec f = make_function(o);
  const PipelineConfig cfg = make_pipeline(o);
  require_degrees(o.degrees);
  if (o.tests.empty()) {
    throw InvalidInput("--test needs at least one test function");
  }
  std::vector<FunctionSpec> tests;
  std::map<std::string, std::string> labels;
  for (const std::string& label : o.tests) {
    tests.push_back(test_function(label));
    labels[tests.back().name()] = label;
  }
  const WeakstarStudy study = weakstar_demo(f, o.degrees, tests, cfg);

  json config = solver_config_json("weakstar", o);
  config["degrees"] = o.degrees;
  config["tests"] = o.tests;

  Table t{{"n", "test", "pairing", "exact", "error", "sup_ratio", "converged"}, {}};
  json rows = json::array();
  bool all_converged = true;
  for (const WeakstarRow& r : study.rows) {
    all_converged = all_converged && r.converged;
    const std::string label = labels.count(r.test) ? labels[r.test] : r.test;
    t.rows.push_back({std::to_string(r.n), label, num(r.pairing), num(r.exact), num(r.error), num(r.sup_ratio),
                      r.converged ? "1" : "0"});
    rows.push_back({{"n", r.n},
                    {"test", label},
                    {"pairing", r.pairing},
                    {"exact", r.exact},
                    {"error", r.error},
                    {"sup_ratio", r.sup_ratio},
                    {"converged", r.converged}});
  }
  json doc{{"config", config}, {"seed", o.seed}, {"rows", rows}, {"empirical_c", study.empirical_c}};
  emit(o, out, doc, config, t, {{"empirical_c", num(study.empirical_c)}});
  return all_converged ? kExitOk : kExitNoConvergence;
}

// ---------------------------------------------------------------- divergence

int cmd_divergence(const Options& o, std::ostream& out) {
  const FunctionSpec f = make_function(o);
  const PipelineConfig cfg = make_pipeline(o);
  require_degrees(o.degrees);
  if (o.thresholds.empty()) {
    throw InvalidInput("--thresholds needs at least one value");
  }
  for (double tau : o.thresholds) {
    if (!(tau > 0.0)) {
      throw InvalidInput("thresholds must be positive");
    }
  }
  const DivergenceStudy study = divergence_stats(f, o.degrees, o.thresholds, cfg);

  json config = solver_config_json("divergence", o);
  config["degrees"] = o.degrees;
  config["thresholds"] = o.thresholds;

  Table t{{"kind", "n", "tau", "measure", "normalized_measure", "reference", "lo", "hi", "positive", "negative"}, {}};
  json measures = json::array();
  for (const DivergenceRow& r : study.measures) {
    t.rows.push_back({"measure", std::to_string(r.n), num(r.tau), num(r.measure), num(r.normalized_measure),
                      num(r.reference), "", "", "", ""});
    measures.push_back({{"n", r.n},
                        {"tau", r.tau},
                        {"measure", r.measure},
                        {"normalized_measure", r.normalized_measure},
                        {"reference", r.reference}});
  }
  json densities = json::array();
  for (const DensityRow& r : study.densities) {
    t.rows.push_back({"density", std::to_string(r.n), "", "", "", "", num(r.lo), num(r.hi), num(r.positive),
                      num(r.negative)});
    densities.push_back(
        {{"n", r.n}, {"lo", r.lo}, {"hi", r.hi}, {"positive", r.positive}, {"negative", r.negative}});
  }
  json doc{{"config", config}, {"seed", o.seed}, {"measures", measures}, {"densities", densities}};
  emit(o, out, doc, config, t, {});
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Polynomial approximation with all critical points in [-1,1]", "critpoly"};
  app.require_subcommand(1);

  auto* approx = app.add_subcommand("approximate", "fit P with P' = S T_n(., y) to a Lipschitz target");
  add_solver_options(approx, o);
  add_run_options(approx, o);
  approx->add_option("--degree", o.degree, "degree n of P', n = 8m+1")->required();

  auto* rate = app.add_subcommand("rate", "sup error against degree with a log-log fit");
  add_solver_options(rate, o);
  add_run_options(rate, o);
  rate->add_option("--degrees", o.degrees, "comma-separated degrees")->delimiter(',')->required();
  rate->add_option("--gnuplot", o.gnuplot, "write a gnuplot script for the log-log plot");

  auto* verify = app.add_subcommand("verify", "run the property checks");
  add_run_options(verify, o);
  verify->add_option("--n", o.n_list, "comma-separated degrees")->delimiter(',');
  verify->add_option("--only", o.only, "run a single check id");
  verify->add_flag("--list", o.list, "list check ids and the properties they assert");
  verify->add_option("--epsilon", o.epsilon, "four-point spacing epsilon");
  verify->add_option("--draws", o.draws, "random draws per randomized check");

  auto* weak = app.add_subcommand("weakstar", "pairings of a bounded-derivative sequence against test functions");
  add_solver_options(weak, o);
  add_run_options(weak, o);
  weak->add_option("--degrees", o.degrees, "comma-separated degrees")->delimiter(',')->required();
  weak->add_option("--test", o.tests, "test functions: 1, x, x2 or any function spec")->delimiter(',');

  auto* div = app.add_subcommand("divergence", "small-set measures and level densities of P'");
  add_solver_options(div, o);
  add_run_options(div, o);
  div->add_option("--degrees", o.degrees, "comma-separated degrees")->delimiter(',')->required();
  div->add_option("--thresholds", o.thresholds, "comma-separated tau values")->delimiter(',');

  // CLI11 consumes arguments from the back of the vector
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
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }

  try {
    if (*approx) {
      return cmd_approximate(o, out);
    }
    if (*rate) {
      return cmd_rate(o, out);
    }
    if (*verify) {
      return cmd_verify(o, out);
    }
    if (*weak) {
      return cmd_weakstar(o, out);
    }
    return cmd_divergence(o, out);
  } catch (const InvalidInput& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const InvalidPerturbation& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const Error& e) {
    err << "numerical failure: " << e.what() << "\n";
    return kExitNoConvergence;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
}

}  // namespace critpoly::cli
