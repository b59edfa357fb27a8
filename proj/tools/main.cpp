// cirlan: simulation, density evaluation, drift estimation and limit-theorem
// verification for the CIR model dX = (a - b X) dt + sqrt(2 sigma X) dB.
//
// Exit codes: 0 pass, 2 config error, 3 domain/regime error, 4 data error,
// 5 verification failure.

#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "cirlan/core.hpp"
#include "cirlan/estimate.hpp"
#include "cirlan/lanlab.hpp"
#include "cirlan/likelihood.hpp"
#include "cirlan/rng.hpp"
#include "cirlan/sim.hpp"
#include "kvconfig.hpp"

namespace {

using cli::ConfigError;
using cli::KeyValues;

struct DataError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string fmt(double value) {
  char buffer[64];
  std::snprintf(buffer, sizeof buffer, "%.17g", value);
  return buffer;
}

// Ordered report; serialized as key=value lines or a single-line JSON map.
class Report {
 public:
  void add(const std::string& key, double value) { entries_.emplace_back(key, fmt(value)); }
  void add(const std::string& key, std::int64_t value) {
    entries_.emplace_back(key, std::to_string(value));
  }
  void add(const std::string& key, bool value) {
    entries_.emplace_back(key, value ? "true" : "false");
  }
  void add(const std::string& key, const std::string& value) {
    entries_.emplace_back(key, value);
  }

  void write_kv(std::ostream& out) const {
    for (const auto& [key, value] : entries_) out << key << "=" << value << "\n";
  }

  void write_json(std::ostream& out) const {
    out << "{";
    bool first = true;
    for (const auto& [key, value] : entries_) {
      if (!first) out << ",";
      first = false;
      out << "\"" << key << "\":";
      if (value == "true" || value == "false" || looks_numeric(value)) {
        out << value;
      } else {
        out << "\"" << value << "\"";
      }
    }
    out << "}\n";
  }

 private:
  static bool looks_numeric(const std::string& value) {
    if (value.empty()) return false;
    char* end = nullptr;
    std::strtod(value.c_str(), &end);
    return end == value.c_str() + value.size();
  }

  std::vector<std::pair<std::string, std::string>> entries_;
};

// Writes through to a file or stdout for out = "-".
class Output {
 public:
  explicit Output(const std::string& target) {
    if (target != "-") {
      file_.open(target, std::ios::binary);
      if (!file_) throw ConfigError("cannot open output file: " + target);
    }
  }
  std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }

 private:
  std::ofstream file_;
};

std::uint64_t resolve_seed(const KeyValues& kv) {
  if (kv.has("seed")) return kv.get_uint("seed", 0);
  if (const char* env = std::getenv("CIRLAN_SEED")) {
    KeyValues tmp;
    tmp.set("seed", env);
    return tmp.get_uint("seed", 0);
  }
  return 12345;
}

cirlan::CirParams params_from(const KeyValues& kv, double default_x0 = -1.0) {
  const double x0 = default_x0 > 0.0 ? kv.get_double("x0", default_x0) : kv.get_double("x0");
  return cirlan::CirParams(kv.get_double("a"), kv.get_double("b"), kv.get_double("sigma"), x0);
}

// ---------------------------------------------------------------------------
// simulate

const std::set<std::string> kSimulateKeys = {"a", "b", "sigma", "x0", "n",
                                             "delta", "seed", "out"};

int cmd_simulate(const KeyValues& kv) {
  kv.reject_unknown(kSimulateKeys);
  const cirlan::CirParams params = params_from(kv);
  const cirlan::SamplingScheme scheme(kv.get_int("n"), kv.get_double("delta"));
  cirlan::RngStream rng(resolve_seed(kv), 0);
  const cirlan::Path path = cirlan::simulate_path(params, scheme, rng);
  Output out(kv.get_string("out", "-"));
  out.stream() << "t,x\n";
  for (Eigen::Index k = 0; k < path.values.size(); ++k) {
    out.stream() << fmt(path.t0 + static_cast<double>(k) * path.delta) << ","
                 << fmt(path.values[k]) << "\n";
  }
  return 0;
}

// ---------------------------------------------------------------------------
// density

const std::set<std::string> kDensityKeys = {"a",    "b",    "sigma",  "x0",  "x",
                                            "dt",   "ymin", "ymax",   "points",
                                            "force_b0", "out"};

int cmd_density(const KeyValues& kv) {
  kv.reject_unknown(kDensityKeys);
  cirlan::CirParams params = params_from(kv, 1.0);
  if (kv.get_bool("force_b0", false)) {
    params = cirlan::CirParams(params.a, 0.0, params.sigma, params.x0);
  }
  const double x = kv.get_double("x");
  const double dt = kv.get_double("dt");
  const auto tc = cirlan::transition_constants(params, dt);
  const double mean = tc.mean(x);
  const double sd = std::sqrt(tc.variance(x));
  const double ymin = kv.get_double("ymin", std::max(mean - 12.0 * sd, 1e-12));
  const double ymax = kv.get_double("ymax", mean + 12.0 * sd);
  const std::int64_t points = kv.get_int("points", 512);
  if (points < 2) throw ConfigError("points must be at least 2");
  if (!(ymin > 0.0) || !(ymax > ymin)) throw ConfigError("need 0 < ymin < ymax");
  Output out(kv.get_string("out", "-"));
  out.stream() << "y,log_p,p\n";
  for (std::int64_t i = 0; i < points; ++i) {
    const double y = ymin + (ymax - ymin) * static_cast<double>(i) /
                                static_cast<double>(points - 1);
    const double log_p = cirlan::log_transition_density(params, dt, x, y);
    out.stream() << fmt(y) << "," << fmt(log_p) << "," << fmt(std::exp(log_p)) << "\n";
  }
  return 0;
}

// ---------------------------------------------------------------------------
// estimate

const std::set<std::string> kEstimateKeys = {"input", "sigma",  "exact", "init_a",
                                             "init_b", "xtol",  "max_iter", "out",
                                             "json"};

cirlan::Path read_series(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open input series: " + path);
  std::string line;
  if (!std::getline(in, line) || cli::trim(line) != "t,x") {
    throw DataError("series header must be exactly \"t,x\"");
  }
  std::vector<double> times;
  std::vector<double> values;
  int row = 0;
  while (std::getline(in, line)) {
    ++row;
    const std::string text = cli::trim(line);
    if (text.empty()) continue;
    const std::size_t comma = text.find(',');
    if (comma == std::string::npos) {
      throw DataError("row " + std::to_string(row) + ": expected t,x");
    }
    try {
      times.push_back(std::stod(text.substr(0, comma)));
      values.push_back(std::stod(text.substr(comma + 1)));
    } catch (const std::exception&) {
      throw DataError("row " + std::to_string(row) + ": malformed number");
    }
    if (!(values.back() > 0.0)) {
      throw DataError("row " + std::to_string(row) + ": nonpositive value");
    }
    if (times.size() >= 2 && !(times[times.size() - 1] > times[times.size() - 2])) {
      throw DataError("row " + std::to_string(row) + ": times not strictly increasing");
    }
  }
  if (times.size() < 3) throw DataError("series needs at least three rows");
  const double delta = (times.back() - times.front()) / static_cast<double>(times.size() - 1);
  for (std::size_t k = 1; k < times.size(); ++k) {
    const double step = times[k] - times[k - 1];
    if (std::fabs(step - delta) > 1e-9 * delta) {
      throw DataError("row " + std::to_string(static_cast<int>(k)) +
                      ": spacing deviates from the uniform grid");
    }
  }
  Eigen::VectorXd v(static_cast<Eigen::Index>(values.size()));
  for (std::size_t k = 0; k < values.size(); ++k) v[static_cast<Eigen::Index>(k)] = values[k];
  return cirlan::Path(times.front(), delta, std::move(v));
}

int cmd_estimate(const KeyValues& kv) {
  kv.reject_unknown(kEstimateKeys);
  const cirlan::Path path = read_series(kv.require_string("input"));
  const double sigma = kv.get_double("sigma");
  const cirlan::EstimateResult disc = cirlan::mle_discretized(path, sigma);

  Report report;
  report.add("a_hat", disc.a_hat);
  report.add("b_hat", disc.b_hat);
  report.add("converged", disc.converged);
  report.add("boundary_warning", disc.boundary_warning);
  report.add("loglik", disc.loglik_at_optimum);

  if (kv.get_bool("exact", false)) {
    cirlan::OptimOptions opts;
    opts.xtol = kv.get_double("xtol", 1e-7);
    opts.max_iter = static_cast<int>(kv.get_int("max_iter", 500));
    const double init_a = kv.get_double("init_a", std::max(disc.a_hat, sigma));
    const double init_b = kv.get_double("init_b", disc.b_hat);
    const cirlan::EstimateResult exact =
        cirlan::mle_exact(path, sigma, Eigen::Vector2d(init_a, init_b), opts);
    report.add("exact_a_hat", exact.a_hat);
    report.add("exact_b_hat", exact.b_hat);
    report.add("exact_converged", exact.converged);
    report.add("exact_iterations", static_cast<std::int64_t>(exact.iterations));
    report.add("exact_loglik", exact.loglik_at_optimum);
    report.add("agreement_da", std::fabs(exact.a_hat - disc.a_hat));
    report.add("agreement_db", std::fabs(exact.b_hat - disc.b_hat));
  }

  Output out(kv.get_string("out", "-"));
  if (kv.get_bool("json", false)) {
    report.write_json(out.stream());
  } else {
    report.write_kv(out.stream());
  }
  return 0;
}

// ---------------------------------------------------------------------------
// lan

const std::set<std::string> kLanKeys = {"a",      "b",        "sigma",      "x0",
                                        "n",      "delta",    "u",          "v",
                                        "m",      "m_limit",  "substeps",   "seed",
                                        "threads", "dump",    "inject_phi1",
                                        "inject_phi2", "out", "json"};

void dump_samples(const std::string& path, const Eigen::VectorXd& empirical,
                  const Eigen::VectorXd& limit) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot open dump file: " + path);
  out << "kind,value\n";
  for (Eigen::Index i = 0; i < empirical.size(); ++i) {
    out << "empirical," << fmt(empirical[i]) << "\n";
  }
  for (Eigen::Index i = 0; i < limit.size(); ++i) {
    out << "limit," << fmt(limit[i]) << "\n";
  }
}

int cmd_lan(const KeyValues& kv) {
  kv.reject_unknown(kLanKeys);
  const cirlan::CirParams params = params_from(kv);
  const cirlan::SamplingScheme scheme(kv.get_int("n"), kv.get_double("delta"));
  const cirlan::LocalAlternative z{kv.get_double("u", 0.0), kv.get_double("v", 0.0)};
  const int m = static_cast<int>(kv.get_int("m", 2000));
  const int m_limit = static_cast<int>(kv.get_int("m_limit", m));
  const int substeps = static_cast<int>(kv.get_int("substeps", 256));
  const cirlan::RngStream base(resolve_seed(kv), 0);

  cirlan::CheckOptions opts;
  opts.threads = static_cast<unsigned>(kv.get_int("threads", 0));
  if (kv.has("inject_phi1") != kv.has("inject_phi2")) {
    throw ConfigError("inject_phi1 and inject_phi2 must be given together");
  }
  if (kv.has("inject_phi1")) {
    opts.injected_rates =
        cirlan::RatePair{kv.get_double("inject_phi1"), kv.get_double("inject_phi2")};
  }
  Eigen::VectorXd dumped_empirical, dumped_limit;
  if (kv.has("dump")) {
    opts.dump_empirical = &dumped_empirical;
    opts.dump_limit = &dumped_limit;
  }

  cirlan::VerificationReport vr;
  switch (cirlan::classify_regime(params)) {
    case cirlan::Regime::Subcritical:
      vr = cirlan::lan_check_subcritical(params, scheme, z, m, base, opts);
      break;
    case cirlan::Regime::Critical:
      vr = cirlan::laq_check_critical(params, scheme, z, m, m_limit, substeps, base, opts);
      break;
    case cirlan::Regime::Supercritical:
      vr = cirlan::lamn_check_supercritical(params, scheme, z, m, m_limit, substeps, base,
                                            opts);
      break;
  }

  Report report;
  report.add("check", vr.check);
  report.add("regime", std::string(cirlan::to_string(cirlan::classify_regime(params))));
  report.add("m", static_cast<std::int64_t>(vr.m));
  report.add("m_limit", static_cast<std::int64_t>(vr.m_limit));
  report.add("emp_mean", vr.emp_mean);
  report.add("emp_mean_se", vr.emp_mean_se);
  report.add("emp_var", vr.emp_var);
  report.add("theo_mean", vr.theo_mean);
  report.add("theo_var", vr.theo_var);
  report.add("theo_simulated", vr.theo_simulated);
  report.add("ks_stat", vr.ks_stat);
  report.add("ks_threshold", vr.ks_threshold);
  report.add("unit_mean", vr.unit_mean);
  report.add("unit_mean_se", vr.unit_mean_se);
  report.add("mean_ok", vr.mean_ok);
  report.add("var_ok", vr.var_ok);
  report.add("ks_ok", vr.ks_ok);
  report.add("unit_mean_ok", vr.unit_mean_ok);
  report.add("pass", vr.pass);
  for (const auto& warning : cirlan::validate_scheme(params, scheme, 0.5)) {
    vr.notes.push_back(warning);
  }
  for (std::size_t i = 0; i < vr.notes.size(); ++i) {
    report.add("note_" + std::to_string(i), vr.notes[i]);
  }

  if (kv.has("dump")) dump_samples(kv.require_string("dump"), dumped_empirical, dumped_limit);

  Output out(kv.get_string("out", "-"));
  if (kv.get_bool("json", false)) {
    report.write_json(out.stream());
  } else {
    report.write_kv(out.stream());
  }
  return vr.pass ? 0 : 5;
}

// ---------------------------------------------------------------------------
// ergodic

const std::set<std::string> kErgodicKeys = {"a",    "b",     "sigma",   "x0",
                                            "horizon", "delta", "seed", "stream",
                                            "tol_avg", "tol_var", "out",  "json"};

int cmd_ergodic(const KeyValues& kv) {
  kv.reject_unknown(kErgodicKeys);
  const cirlan::CirParams params = params_from(kv);
  const double horizon = kv.get_double("horizon");
  const double delta = kv.get_double("delta");
  if (!(horizon > 0.0)) throw ConfigError("horizon must be positive");
  if (!(delta > 0.0)) throw ConfigError("delta must be positive");
  const cirlan::RngStream base(resolve_seed(kv), kv.get_uint("stream", 0));
  const cirlan::ErgodicReport er = cirlan::ergodic_check(
      params, horizon, delta, base, kv.get_double("tol_avg", 0.02),
      kv.get_double("tol_var", 0.05));

  Report report;
  report.add("horizon", er.horizon);
  report.add("avg_x", er.avg_x);
  report.add("target_avg_x", er.target_avg_x);
  report.add("avg_inv_x", er.avg_inv_x);
  report.add("target_avg_inv_x", er.target_avg_inv_x);
  report.add("tail_mean", er.tail_mean);
  report.add("tail_var", er.tail_var);
  report.add("target_var", er.target_var);
  report.add("tol_avg", er.tol_avg);
  report.add("tol_var", er.tol_var);
  report.add("avg_x_ok", er.avg_x_ok);
  report.add("avg_inv_x_ok", er.avg_inv_x_ok);
  report.add("var_ok", er.var_ok);
  report.add("pass", er.pass);

  Output out(kv.get_string("out", "-"));
  if (kv.get_bool("json", false)) {
    report.write_json(out.stream());
  } else {
    report.write_kv(out.stream());
  }
  return er.pass ? 0 : 5;
}

// ---------------------------------------------------------------------------

void print_usage() {
  std::cout <<
      "usage: cirlan <command> [--config FILE] [--key value ...]\n"
      "\n"
      "commands:\n"
      "  simulate   draw an exact CIR path and write it as CSV\n"
      "  density    tabulate the one-step transition density\n"
      "  estimate   drift estimation from an observed series\n"
      "  lan        limit-theorem verification for the log-likelihood ratio\n"
      "  ergodic    long-run averages against the stationary law\n"
      "\n"
      "Keys can come from a config file (key = value lines, [command]\n"
      "sections) or from --key value flags; flags win. The CIRLAN_SEED\n"
      "environment variable provides a fallback seed.\n"
      "Run cirlan <command> --help for the command's keys.\n";
}

void print_command_help(const std::string& command) {
  const auto list = [](const std::set<std::string>& keys) {
    for (const auto& key : keys) std::cout << "  --" << key << " <value>\n";
  };
  std::cout << "keys for " << command << ":\n";
  if (command == "simulate") list(kSimulateKeys);
  if (command == "density") list(kDensityKeys);
  if (command == "estimate") list(kEstimateKeys);
  if (command == "lan") list(kLanKeys);
  if (command == "ergodic") list(kErgodicKeys);
}

}  // namespace

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  if (args.empty() || args[0] == "--help" || args[0] == "-h") {
    print_usage();
    return args.empty() ? 2 : 0;
  }
  const std::string command = args[0];
  args.erase(args.begin());
  const std::set<std::string> commands = {"simulate", "density", "estimate", "lan",
                                          "ergodic"};
  if (!commands.count(command)) {
    std::cerr << "unknown command: " << command << "\n";
    print_usage();
    return 2;
  }
  if (!args.empty() && (args[0] == "--help" || args[0] == "-h")) {
    print_command_help(command);
    return 0;
  }

  try {
    // --config FILE is consumed first; bare boolean flags get "true".
    std::string config_path;
    std::vector<std::string> flag_args;
    const std::set<std::string> bare_bool = {"json", "exact", "force_b0"};
    for (std::size_t i = 0; i < args.size(); ++i) {
      if (args[i] == "--config") {
        if (i + 1 >= args.size()) throw ConfigError("--config needs a file path");
        config_path = args[++i];
        continue;
      }
      if (args[i].rfind("--", 0) == 0 && bare_bool.count(args[i].substr(2)) &&
          (i + 1 >= args.size() || args[i + 1].rfind("--", 0) == 0)) {
        flag_args.push_back(args[i]);
        flag_args.push_back("true");
        continue;
      }
      flag_args.push_back(args[i]);
    }

    KeyValues kv;
    if (!config_path.empty()) kv = cli::parse_config_file(config_path, command);
    cli::apply_flags(kv, flag_args);

    if (command == "simulate") return cmd_simulate(kv);
    if (command == "density") return cmd_density(kv);
    if (command == "estimate") return cmd_estimate(kv);
    if (command == "lan") return cmd_lan(kv);
    if (command == "ergodic") return cmd_ergodic(kv);
    return 2;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const DataError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return 4;
  } catch (const cirlan::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}
