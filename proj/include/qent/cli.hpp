#pragma once

// Command-line front end. `run_cli` is the whole program minus process
// plumbing so tests can drive it with captured streams.
//
//   qent measure STATE [--q Q] [--with-er] [--seed S] [--format json|csv]
//   qent entropy STATE [--q Q] [--relative-to STATE] [--format json|csv]
//   qent werner --sweep F0:F1:STEP --q Q [--out PATH] [--format csv|json] [--plot-data]
//   qent match-q (STATE | --werner F) --target-er (VALUE | closed-form) [--tol T]
//   qent verify [--suite NAME|all] [--trials N] [--seed S] [--q-grid SPEC] [--tol KEY=VALUE]...
//
// Exit codes: 0 success, 1 property violation, 2 input error, 3 optimizer
// failure, 4 no root.

#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "qent/entanglement.hpp"
#include "qent/entropy.hpp"
#include "qent/errors.hpp"
#include "qent/state_io.hpp"
#include "qent/verify.hpp"
#include "qent/werner.hpp"

namespace qent {

enum ExitCode : int {
  kExitOk = 0,
  kExitViolation = 1,
  kExitInput = 2,
  kExitOptimizer = 3,
  kExitNoRoot = 4,
};

struct LabeledValue {
  std::string label;
  double value = 0.0;
};

/// Everything a command reports. Serialized as JSON with keys in this order.
struct RunReport {
  std::string command;
  nlohmann::ordered_json inputs = nlohmann::ordered_json::object();
  std::vector<LabeledValue> results;
  /// Structured extras (sweep rows, brackets, per-property statistics).
  nlohmann::ordered_json details = nlohmann::ordered_json::object();
  std::vector<PropertyFailure> failures;
  /// Number of failures before truncation to `failures`.
  std::size_t failure_count = 0;
  std::optional<std::string> timestamp;
};

namespace cli_detail {

inline nlohmann::ordered_json number(double x) {
  if (std::isfinite(x)) return x;
  return std::isnan(x) ? "nan" : (x > 0 ? "inf" : "-inf");
}

inline std::string utc_timestamp() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

inline std::string format12(double x) {
  if (!std::isfinite(x)) return std::isnan(x) ? "nan" : (x > 0 ? "inf" : "-inf");
  return format_double(x, 12);
}

}  // namespace cli_detail

inline std::string report_to_json(const RunReport& r) {
  using nlohmann::ordered_json;
  ordered_json j;
  j["command"] = r.command;
  j["inputs"] = r.inputs;
  ordered_json results = ordered_json::array();
  for (const auto& v : r.results) results.push_back({{"label", v.label}, {"value", cli_detail::number(v.value)}});
  j["results"] = results;
  if (!r.details.empty()) j["details"] = r.details;
  ordered_json failures = ordered_json::array();
  for (const auto& f : r.failures) {
    failures.push_back({{"suite", f.suite},
                        {"property", f.property},
                        {"trial", f.trial},
                        {"seed", f.seed},
                        {"observed", cli_detail::number(f.observed)},
                        {"slack", cli_detail::number(f.slack)},
                        {"detail", f.detail}});
  }
  j["failures"] = failures;
  j["failure_count"] = r.failure_count;
  if (r.timestamp) j["timestamp"] = *r.timestamp;
  return j.dump(2) + "\n";
}

/// label,value rows at 12 significant digits.
inline std::string report_to_csv(const RunReport& r) {
  std::string out = "label,value\n";
  for (const auto& v : r.results) out += v.label + "," + cli_detail::format12(v.value) + "\n";
  for (const auto& f : r.failures) {
    out += "# failure " + f.suite + "/" + f.property + " trial=" + std::to_string(f.trial) +
           " seed=" + std::to_string(f.seed) + " slack=" + cli_detail::format12(f.slack) + "\n";
  }
  return out;
}

/// Sweep rows as "F,e_tsallis,e_rel,e_mutual" followed by "# crossing F=..." lines.
inline std::string sweep_to_csv(const WernerSweep& sweep) {
  using cli_detail::format12;
  std::string out = "F,e_tsallis,e_rel,e_mutual\n";
  for (const auto& row : sweep.rows) {
    out += format12(row.F) + "," + format12(row.e_tsallis) + "," + format12(row.e_rel) + "," +
           format12(row.e_mutual) + "\n";
  }
  for (const auto& c : sweep.crossings) out += "# crossing F=" + format12(c.F) + "\n";
  return out;
}

/// One two-column "F value" block per curve, blocks separated by a blank line.
inline std::string sweep_to_plot_data(const WernerSweep& sweep) {
  using cli_detail::format12;
  struct Curve {
    const char* name;
    double WernerSweepRow::*field;
  };
  const Curve curves[] = {{"e_tsallis", &WernerSweepRow::e_tsallis},
                          {"e_rel", &WernerSweepRow::e_rel},
                          {"e_mutual", &WernerSweepRow::e_mutual}};
  std::string out;
  bool first = true;
  for (const auto& c : curves) {
    if (!first) out += "\n";
    first = false;
    out += std::string("# series ") + c.name + "\n";
    for (const auto& row : sweep.rows) out += format12(row.F) + " " + format12(row.*c.field) + "\n";
  }
  for (const auto& c : sweep.crossings) out += "# crossing F=" + format12(c.F) + "\n";
  return out;
}

/// "a:b:step" into three numbers.
inline std::vector<double> parse_range(const std::string& spec) {
  std::vector<double> parts;
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ':')) {
    char* end = nullptr;
    const double v = std::strtod(item.c_str(), &end);
    if (item.empty() || *end != '\0') throw ParseError("bad number '" + item + "' in '" + spec + "'");
    parts.push_back(v);
  }
  if (parts.size() != 3) throw ParseError("range must look like start:end:step, got '" + spec + "'");
  return parts;
}

/// Comma-separated values, or a start:end:step range with both ends included.
inline std::vector<double> parse_q_grid(const std::string& spec) {
  if (spec.find(':') != std::string::npos) {
    const auto r = parse_range(spec);
    if (!(r[2] > 0.0) || r[1] < r[0]) throw ParseError("q grid range must have step > 0 and end >= start");
    std::vector<double> out;
    const auto n = static_cast<long>(std::floor((r[1] - r[0]) / r[2] + 1e-9));
    for (long i = 0; i <= n; ++i) out.push_back(r[0] + static_cast<double>(i) * r[2]);
    return out;
  }
  std::vector<double> out;
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ',')) {
    char* end = nullptr;
    const double v = std::strtod(item.c_str(), &end);
    if (item.empty() || *end != '\0') throw ParseError("bad q value '" + item + "'");
    out.push_back(v);
  }
  if (out.empty()) throw ParseError("empty q grid");
  return out;
}

/// Default seed: $QENT_SEED when set, else 0.
inline std::uint64_t default_seed() {
  const char* env = std::getenv("QENT_SEED");
  if (env == nullptr || *env == '\0') return 0;
  char* end = nullptr;
  const unsigned long long v = std::strtoull(env, &end, 10);
  if (*end != '\0' || env[0] == '-') throw ParseError(std::string("QENT_SEED is not an unsigned integer: ") + env);
  return v;
}

namespace cli_detail {

struct Options {
  std::string format;
  bool no_timestamp = false;
  std::string state_file;
  std::optional<double> q;
  bool with_er = false;
  std::optional<std::uint64_t> seed;
  std::size_t restarts = 8;
  std::string relative_to;
  std::string sweep;
  std::string out_path;
  bool plot_data = false;
  std::optional<double> werner_F;
  std::string target_er;
  double tol = 1e-9;
  std::string suite = "all";
  std::size_t trials = 200;
  std::string q_grid;
  std::vector<std::string> tol_overrides;
  std::size_t max_failures = 50;
};

inline void stamp(RunReport& r, const Options& o) {
  if (!o.no_timestamp) r.timestamp = utc_timestamp();
}

inline void emit(const RunReport& r, const Options& o, std::ostream& out) {
  out << (o.format == "csv" ? report_to_csv(r) : report_to_json(r));
}

inline int cmd_measure(const Options& o, std::ostream& out) {
  const StateFile file = read_state_file(o.state_file);
  const BipartiteState sigma = file.as_bipartite();
  RunReport r;
  r.command = "measure";
  r.inputs["state_file"] = o.state_file;
  r.inputs["dims"] = file.dims;
  if (o.q) r.inputs["q"] = *o.q;
  r.inputs["with_er"] = o.with_er;
  if (o.with_er) r.inputs["seed"] = o.seed.value_or(0);

  r.results.push_back({"S", von_neumann_entropy(sigma.state())});
  r.results.push_back({"E^M", mutual_entropy_measure(sigma).value});
  if (o.q) r.results.push_back({"E_q^T", tsallis_measure(sigma, *o.q).value});
  if (o.with_er) {
    ReeOptions opts;
    opts.seed = o.seed.value_or(0);
    opts.restarts = o.restarts;
    const MeasureResult er = relative_entropy_of_entanglement(sigma, opts);
    r.results.push_back({"E^R", er.value});
    r.details["er_iterations"] = er.iterations;
    r.details["er_converged"] = er.converged;
  }
  stamp(r, o);
  emit(r, o, out);
  return kExitOk;
}

inline int cmd_entropy(const Options& o, std::ostream& out) {
  const StateFile file = read_state_file(o.state_file);
  RunReport r;
  r.command = "entropy";
  r.inputs["state_file"] = o.state_file;
  r.inputs["dims"] = file.dims;
  if (o.q) r.inputs["q"] = *o.q;
  r.results.push_back({"S", von_neumann_entropy(file.state)});
  if (o.q) r.results.push_back({"S_q", tsallis_entropy(file.state, *o.q)});
  if (!o.relative_to.empty()) {
    r.inputs["relative_to"] = o.relative_to;
    const StateFile ref = read_state_file(o.relative_to);
    r.results.push_back({"U", umegaki_relative_entropy(file.state, ref.state).value});
    if (o.q) r.results.push_back({"D_q", tsallis_relative_entropy(file.state, ref.state, *o.q).value});
  }
  stamp(r, o);
  emit(r, o, out);
  return kExitOk;
}

inline int cmd_werner(const Options& o, std::ostream& out) {
  const auto range = parse_range(o.sweep);
  const double q = o.q.value_or(0.35);
  const WernerSweep sweep = werner_sweep(range[0], range[1], range[2], q);

  std::string text;
  if (o.plot_data) {
    text = sweep_to_plot_data(sweep);
  } else if (o.format == "json") {
    RunReport r;
    r.command = "werner";
    r.inputs["sweep"] = o.sweep;
    r.inputs["q"] = q;
    for (const auto& c : sweep.crossings) r.results.push_back({"crossing", c.F});
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (const auto& row : sweep.rows) {
      rows.push_back({{"F", row.F}, {"e_tsallis", row.e_tsallis}, {"e_rel", row.e_rel}, {"e_mutual", row.e_mutual}});
    }
    r.details["rows"] = rows;
    nlohmann::ordered_json crossings = nlohmann::ordered_json::array();
    for (const auto& c : sweep.crossings) crossings.push_back({{"lo", c.lo}, {"hi", c.hi}, {"F", c.F}});
    r.details["crossings"] = crossings;
    stamp(r, o);
    text = report_to_json(r);
  } else {
    text = sweep_to_csv(sweep);
  }

  if (o.out_path.empty()) {
    out << text;
  } else {
    std::ofstream file(o.out_path);
    if (!file) throw ParseError("cannot write " + o.out_path);
    file << text;
  }
  return kExitOk;
}

inline int cmd_match_q(const Options& o, std::ostream& out) {
  if (o.werner_F.has_value() == !o.state_file.empty()) {
    throw ParseError("match-q needs exactly one of a state file or --werner F");
  }
  const BipartiteState sigma =
      o.werner_F ? werner_state(*o.werner_F) : read_state_file(o.state_file).as_bipartite();
  double target = 0.0;
  if (o.target_er == "closed-form") {
    if (!o.werner_F) throw ParseError("--target-er closed-form requires --werner F");
    target = werner_er_closed(*o.werner_F);
  } else {
    char* end = nullptr;
    target = std::strtod(o.target_er.c_str(), &end);
    if (o.target_er.empty() || *end != '\0') {
      throw ParseError("--target-er must be a number or closed-form, got '" + o.target_er + "'");
    }
  }

  RunReport r;
  r.command = "match-q";
  if (o.werner_F) {
    r.inputs["werner"] = *o.werner_F;
  } else {
    r.inputs["state_file"] = o.state_file;
  }
  r.inputs["target_er"] = o.target_er;
  r.inputs["tol"] = o.tol;

  const QStarReport q = match_q(sigma, target, o.tol);
  r.results.push_back({"target", target});
  r.results.push_back({"q_star", q.q_star});
  r.results.push_back({"residual", q.residual});
  r.results.push_back({"E^M", mutual_entropy_measure(sigma).value});
  nlohmann::ordered_json brackets = nlohmann::ordered_json::array();
  for (const auto& b : q.brackets) brackets.push_back({b.lo, b.hi});
  r.details["brackets"] = brackets;
  r.details["at_open_endpoint"] = q.at_open_endpoint;
  r.details["bisection_steps"] = q.bisection_steps;
  stamp(r, o);
  emit(r, o, out);
  return kExitOk;
}

inline int cmd_verify(const Options& o, std::ostream& out) {
  VerifyConfig cfg;
  cfg.trials = o.trials;
  cfg.seed = o.seed.value_or(0);
  if (!o.q_grid.empty()) cfg.q_grid = parse_q_grid(o.q_grid);
  for (const auto& kv : o.tol_overrides) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw ParseError("--tol expects KEY=VALUE, got '" + kv + "'");
    const std::string key = kv.substr(0, eq), val = kv.substr(eq + 1);
    char* end = nullptr;
    const double v = std::strtod(val.c_str(), &end);
    if (val.empty() || *end != '\0' || !(v >= 0.0)) throw ParseError("bad tolerance value in '" + kv + "'");
    if (key == "slack") {
      cfg.slack = v;
    } else if (key == "continuity") {
      cfg.continuity = v;
    } else if (key == "commuting") {
      cfg.commuting = v;
    } else {
      throw ParseError("unknown tolerance '" + key + "' (slack, continuity, commuting)");
    }
  }

  RunReport r;
  r.command = "verify";
  r.inputs["suite"] = o.suite;
  r.inputs["trials"] = cfg.trials;
  r.inputs["seed"] = cfg.seed;
  nlohmann::ordered_json grid = nlohmann::ordered_json::array();
  for (double q : cfg.q_grid) grid.push_back(q);
  r.inputs["q_grid"] = grid;
  r.inputs["tolerances"] = {{"slack", cfg.slack}, {"continuity", cfg.continuity}, {"commuting", cfg.commuting}};

  const auto reports = run_suites(o.suite, cfg);
  nlohmann::ordered_json suites = nlohmann::ordered_json::array();
  double seconds = 0.0;
  for (const auto& s : reports) {
    seconds += s.seconds;
    nlohmann::ordered_json props = nlohmann::ordered_json::array();
    for (const auto& p : s.properties) {
      props.push_back({{"property", p.name},
                       {"checks", p.checks},
                       {"passed", p.passed},
                       {"worst_slack", cli_detail::number(p.worst_slack)}});
      r.results.push_back({s.suite + "/" + p.name + "/worst_slack", p.worst_slack});
    }
    suites.push_back({{"suite", s.suite}, {"failures", s.failures.size()}, {"properties", props}});
    r.failure_count += s.failures.size();
    for (const auto& f : s.failures) {
      if (o.max_failures == 0 || r.failures.size() < o.max_failures) r.failures.push_back(f);
    }
  }
  r.details["suites"] = suites;
  if (!o.no_timestamp) r.details["elapsed_seconds"] = seconds;
  stamp(r, o);
  emit(r, o, out);
  return r.failure_count == 0 ? kExitOk : kExitViolation;
}

}  // namespace cli_detail

/// Runs the CLI. Reports go to `out`, diagnostics to `err`.
inline int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  cli_detail::Options o;
  CLI::App app{"Tsallis relative entropy and entanglement measures for density operators", "qent"};
  app.require_subcommand(1);

  CLI::App* measure = app.add_subcommand("measure", "S, E^M, E_q^T and optionally E^R of a bipartite state file");
  measure->add_option("state", o.state_file, "JSON state file with dims [dA, dB]")->required();
  measure->add_option("--q", o.q, "deformation parameter for E_q^T, in [0, 1]");
  measure->add_flag("--with-er", o.with_er, "also run the E^R optimizer");
  measure->add_option("--seed", o.seed, "optimizer seed (default $QENT_SEED or 0)");
  measure->add_option("--restarts", o.restarts, "optimizer restarts")->check(CLI::PositiveNumber);

  CLI::App* entropy = app.add_subcommand("entropy", "entropies of a state file, optionally relative to another");
  entropy->add_option("state", o.state_file, "JSON state file")->required();
  entropy->add_option("--q", o.q, "Tsallis parameter in [0, 2]");
  entropy->add_option("--relative-to", o.relative_to, "reference state file for U and D_q");

  CLI::App* werner = app.add_subcommand("werner", "Werner-state sweep of E_q^T, E^R and E^M");
  werner->add_option("--sweep", o.sweep, "F0:F1:step")->required();
  werner->add_option("--q", o.q, "deformation parameter in [0, 1) (default 0.35)");
  werner->add_option("--out", o.out_path, "write to this file instead of standard output");
  werner->add_flag("--plot-data", o.plot_data, "two-column F,value series per curve");

  CLI::App* matchq = app.add_subcommand("match-q", "smallest q with E_q^T = E^R");
  matchq->add_option("state", o.state_file, "JSON state file with dims [dA, dB]");
  matchq->add_option("--werner", o.werner_F, "use the Werner state W_F instead of a file");
  matchq->add_option("--target-er", o.target_er, "target value, or closed-form with --werner")->required();
  matchq->add_option("--tol", o.tol, "root tolerance on |E_q^T - target|")->check(CLI::PositiveNumber);

  CLI::App* verify = app.add_subcommand("verify", "randomized property suites");
  verify->add_option("--suite", o.suite, "suite name or all");
  verify->add_option("--trials", o.trials, "trials per suite");
  verify->add_option("--seed", o.seed, "base seed (default $QENT_SEED or 0)");
  verify->add_option("--q-grid", o.q_grid, "q values: a,b,c or start:end:step");
  verify->add_option("--tol", o.tol_overrides, "KEY=VALUE for slack, continuity or commuting");
  verify->add_option("--max-failures", o.max_failures, "failures listed in the report (0 lists all)");

  // every command takes --format and --no-timestamp; only werner defaults to csv
  CLI::App* subs[] = {measure, entropy, werner, matchq, verify};
  std::string formats[] = {"json", "json", "csv", "json", "json"};
  bool no_timestamp[] = {false, false, false, false, false};
  for (int i = 0; i < 5; ++i) {
    subs[i]->add_option("--format", formats[i], "output format")->check(CLI::IsMember({"json", "csv"}));
    subs[i]->add_flag("--no-timestamp", no_timestamp[i], "omit the timestamp so reports compare byte for byte");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    app.exit(e, out, err);
    return kExitOk;
  } catch (const CLI::CallForAllHelp& e) {
    app.exit(e, out, err);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitInput;
  }

  try {
    if (!o.seed) o.seed = default_seed();
    for (int i = 0; i < 5; ++i) {
      if (subs[i]->parsed()) {
        o.format = formats[i];
        o.no_timestamp = no_timestamp[i];
      }
    }
    if (measure->parsed()) return cli_detail::cmd_measure(o, out);
    if (entropy->parsed()) return cli_detail::cmd_entropy(o, out);
    if (werner->parsed()) return cli_detail::cmd_werner(o, out);
    if (matchq->parsed()) return cli_detail::cmd_match_q(o, out);
    return cli_detail::cmd_verify(o, out);
  } catch (const OptimizerFailure& e) {
    err << "qent: " << e.what() << "\n";
    return kExitOptimizer;
  } catch (const NoConvergence& e) {
    err << "qent: " << e.what() << "\n";
    return kExitOptimizer;
  } catch (const NoRoot& e) {
    err << "qent: " << e.what() << "\n";
    return kExitNoRoot;
  } catch (const Error& e) {
    err << "qent: " << e.what() << "\n";
    return kExitInput;
  }
}

}  // namespace qent
