// Acceptance suite: one pass/fail line per criterion, nonzero exit if any
// criterion fails. Heavy Monte Carlo settings match the documented reference
// configurations; every tolerance is pinned here in code.
//
// Usage: cirlan_acceptance [--cli PATH] [--configs DIR]
//   --cli/--configs enable the negative-control criterion, which drives the
//   command-line binary with the shipped reference configurations.

#include <Eigen/Dense>

#include <cmath>
#include <cstdio>
#include <cstdarg>
#include <cstdlib>
#include <functional>
#include <optional>
#include <string>
#include <sys/wait.h>
#include <vector>

#include "cirlan/estimate.hpp"
#include "cirlan/lanlab.hpp"
#include "cirlan/likelihood.hpp"
#include "cirlan/quadrature.hpp"
#include "cirlan/sim.hpp"
#include "cirlan/specfun.hpp"
#include "oracles.hpp"

using namespace cirlan;

namespace {

const CirParams kSub(1.1, 0.5, 0.1, 1.0);
const CirParams kCrit(1.1, 0.0, 0.1, 1.0);
const CirParams kSuper(1.1, -0.5, 0.1, 1.0);

constexpr std::uint64_t kSeed = 20270405;

int g_failures = 0;

void report(int criterion, const char* name, bool pass, const std::string& detail) {
  std::printf("[%s] criterion %2d: %s - %s\n", pass ? "PASS" : "FAIL", criterion, name,
              detail.c_str());
  std::fflush(stdout);
  if (!pass) ++g_failures;
}

__attribute__((format(printf, 1, 2))) std::string fmt(const char* format, ...) {
  char buffer[512];
  va_list args;
  va_start(args, format);
  std::vsnprintf(buffer, sizeof buffer, format, args);
  va_end(args);
  return buffer;
}

// --------------------------------------------------------------------------
// 1. Density normalization and Chapman-Kolmogorov.

void criterion_1() {
  double worst_mass = 0.0;
  for (const CirParams* p : {&kSub, &kCrit, &kSuper}) {
    for (double dt : {0.01, 0.1, 1.0}) {
      for (double x : {0.1, 1.0, 5.0}) {
        const auto window = oracle::transition_window(*p, x, dt);
        const double mass = integrate_adaptive(
            [&](double y) { return std::exp(log_transition_density(*p, dt, x, y)); },
            window.lo, window.hi, 1e-11);
        worst_mass = std::max(worst_mass, std::fabs(mass - 1.0));
      }
    }
  }
  double worst_ck = 0.0;
  const double s = 0.05, t = 0.05, x = 1.0;
  for (const CirParams* p : {&kSub, &kCrit, &kSuper}) {
    for (double y : {0.8, 1.0, 1.3}) {
      const auto window = oracle::transition_window(*p, x, s + t);
      const double composed = integrate_adaptive(
          [&](double z) {
            return std::exp(log_transition_density(*p, s, x, z) +
                            log_transition_density(*p, t, z, y));
          },
          window.lo, window.hi, 1e-12);
      const double direct = std::exp(log_transition_density(*p, s + t, x, y));
      worst_ck = std::max(worst_ck, std::fabs(composed - direct) / direct);
    }
  }
  report(1, "density normalization and Chapman-Kolmogorov", worst_mass <= 1e-8 && worst_ck <= 1e-6,
         fmt("max |mass-1| = %.2e (tol 1e-8), max CK rel dev = %.2e (tol 1e-6)", worst_mass,
             worst_ck));
}

// --------------------------------------------------------------------------
// 2. Sampler-density agreement: chi-square GOF plus conditional moments.

void criterion_2() {
  // Chi-square GOF, 50 equal-probability bins, 1e5 draws, subcritical dt = 1.
  const int bins = 50;
  const int n_gof = 100000;
  const double dt = 1.0, x = 1.0;
  std::vector<double> edges(bins + 1);
  edges[0] = 0.0;
  edges[bins] = 1e12;
  for (int i = 1; i < bins; ++i) {
    const double target = static_cast<double>(i) / bins;
    double lo = 1e-9, hi = 30.0;
    for (int iter = 0; iter < 200; ++iter) {
      const double mid = 0.5 * (lo + hi);
      (transition_cdf(kSub, dt, x, mid) < target ? lo : hi) = mid;
    }
    edges[i] = 0.5 * (lo + hi);
  }
  std::vector<double> expected(bins);
  for (int i = 0; i < bins; ++i) {
    const double lo = std::max(edges[i], 1e-12);
    const double hi = i == bins - 1 ? oracle::transition_window(kSub, x, dt).hi : edges[i + 1];
    expected[i] = integrate_adaptive(
        [&](double y) { return std::exp(log_transition_density(kSub, dt, x, y)); }, lo, hi,
        1e-10);
  }
  std::vector<int> counts(bins, 0);
  RngStream rng(kSeed, 1);
  for (int i = 0; i < n_gof; ++i) {
    const double y = exact_transition_sample(kSub, x, dt, rng);
    int lo = 0, hi = bins;
    while (lo + 1 < hi) {
      const int mid = (lo + hi) / 2;
      (y >= edges[mid] ? lo : hi) = mid;
    }
    ++counts[lo];
  }
  double stat = 0.0;
  for (int i = 0; i < bins; ++i) {
    const double e = n_gof * expected[i];
    stat += (counts[i] - e) * (counts[i] - e) / e;
  }
  const double p_value = oracle::chi2_survival(bins - 1, stat);

  // Conditional mean and variance against the analytic values, per regime.
  bool moments_ok = true;
  std::string moment_detail;
  std::uint64_t stream = 100;
  for (const CirParams* p : {&kSub, &kCrit, &kSuper}) {
    const int n = 1000000;
    RngStream mrng(kSeed, stream++);
    double s1 = 0.0, s2 = 0.0, s3 = 0.0, s4 = 0.0;
    for (int i = 0; i < n; ++i) {
      const double y = exact_transition_sample(*p, x, dt, mrng);
      s1 += y;
      const double y2 = y * y;
      s2 += y2;
      s3 += y2 * y;
      s4 += y2 * y2;
    }
    const double mean = s1 / n;
    const double var = s2 / n - mean * mean;
    const double mean_se = std::sqrt(var / n);
    const double m4 =
        s4 / n - 4.0 * mean * s3 / n + 6.0 * mean * mean * s2 / n - 3.0 * std::pow(mean, 4);
    const double var_se = std::sqrt(std::max(m4 - var * var, 0.0) / n);
    const double mean_gap = std::fabs(mean - oracle::transition_mean(*p, x, dt));
    const double var_gap = std::fabs(var - oracle::transition_variance(*p, x, dt));
    moments_ok = moments_ok && mean_gap <= 4.0 * mean_se && var_gap <= 4.0 * var_se;
  }
  report(2, "sampler-density agreement (chi-square GOF + moments)",
         p_value > 0.001 && moments_ok,
         fmt("GOF p = %.4f (need > 0.001), moments within 4 MC SE per regime: %s", p_value,
             moments_ok ? "yes" : "no"));
}

// --------------------------------------------------------------------------
// Shared reference runs for criteria 3, 4, 5, 7.

struct ReferenceRuns {
  VerificationReport sub;
  VerificationReport crit;
  VerificationReport super;
};

ReferenceRuns run_references() {
  ReferenceRuns runs;
  CheckOptions opts;
  runs.sub = lan_check_subcritical(kSub, SamplingScheme(5000, 0.02), {1.0, 1.0}, 2000,
                                   RngStream(kSeed, 1000), opts);
  runs.crit = laq_check_critical(kCrit, SamplingScheme(10000, 0.01), {0.0, 1.0}, 2000, 2000,
                                 256, RngStream(kSeed, 2000), opts);
  runs.super = lamn_check_supercritical(kSuper, SamplingScheme(10000, 0.002), {0.0, 1.0}, 2000,
                                        2000, 256, RngStream(kSeed, 3000), opts);
  return runs;
}

void criterion_3(const ReferenceRuns& runs) {
  // Supercritical leg at v = 0.2: exp(log-LR) has finite variance there, so
  // the 4-SE gate is meaningful (at v = 1 the statistic is max-dominated).
  const Eigen::VectorXd super_samples = sample_loglr_empirical(
      kSuper, SamplingScheme(10000, 0.002), {0.0, 0.2}, 2000, RngStream(kSeed, 9000));
  const UnitMeanStat super_unit = unit_mean_statistic(super_samples);
  const bool super_ok = std::fabs(super_unit.mean - 1.0) <= 4.0 * super_unit.se;
  const bool pass = runs.sub.unit_mean_ok && runs.crit.unit_mean_ok && super_ok;
  report(3, "exact martingale identity E[exp(log-LR)] = 1 (all regimes)", pass,
         fmt("sub %.3f+-%.3f, crit %.3f+-%.3f, super(v=0.2) %.3f+-%.3f (each within 4 SE of 1)",
             runs.sub.unit_mean, runs.sub.unit_mean_se, runs.crit.unit_mean,
             runs.crit.unit_mean_se, super_unit.mean, super_unit.se));
}

void criterion_4(const ReferenceRuns& runs) {
  const VerificationReport& r = runs.sub;
  report(4, "subcritical LAN: moments and KS against N(-1.75, 3.5)",
         r.mean_ok && r.var_ok && r.ks_ok,
         fmt("mean %.4f (target %.4f, 3SE = %.4f), var %.4f (15%% band around %.4f), "
             "KS %.4f (crit %.4f)",
             r.emp_mean, r.theo_mean, 3.0 * r.emp_mean_se, r.emp_var, r.theo_var, r.ks_stat,
             r.ks_threshold));
  if (!(r.mean_ok && r.var_ok && r.ks_ok)) {
    // Context for the gate: the same check at a longer horizon, where the
    // slow O(1/sqrt(n delta)) variance correction has decayed.
    const VerificationReport far = lan_check_subcritical(
        kSub, SamplingScheme(80000, 0.02), {1.0, 1.0}, 600, RngStream(kSeed, 6000));
    std::printf("       info: same check at n*delta = 1600 (m = 600): mean %.4f, "
                "var %.4f, KS %.4f (crit %.4f) => %s\n",
                far.emp_mean, far.emp_var, far.ks_stat, far.ks_threshold,
                far.pass ? "PASS" : "FAIL");
  }
}

void criterion_5(const ReferenceRuns& runs) {
  const VerificationReport& r = runs.crit;
  report(5, "critical LAQ, v-direction: two-sample KS + unit mean", r.ks_ok && r.unit_mean_ok,
         fmt("KS %.4f (crit %.4f), unit mean %.3f +- %.3f", r.ks_stat, r.ks_threshold,
             r.unit_mean, r.unit_mean_se));
}

void criterion_7(const ReferenceRuns& runs) {
  const VerificationReport& r = runs.super;
  report(7, "supercritical limit, v-direction: two-sample KS vs simulated limit", r.ks_ok,
         fmt("KS %.4f (crit %.4f); unit mean %.3f +- %.3f reported, not gated", r.ks_stat,
             r.ks_threshold, r.unit_mean, r.unit_mean_se));
}

// --------------------------------------------------------------------------
// 6. Critical u-direction trend: KS to the Gaussian limit is non-increasing
// in the horizon (the sqrt(log) rate is too slow for a level gate).

void criterion_6() {
  const double info = critical_info_deterministic(kCrit);  // 5.0
  const double mu = -0.5 * info;
  const double sd = std::sqrt(info);
  std::vector<double> distances;
  // Common random numbers across the three horizons: each path of the longer
  // scheme extends the shorter one, so the KS differences are not washed out
  // by independent sampling noise.
  for (std::int64_t n : {5000, 10000, 20000}) {
    const Eigen::VectorXd samples = sample_loglr_empirical(
        kCrit, SamplingScheme(n, 0.01), {1.0, 0.0}, 2000, RngStream(kSeed, 44000));
    distances.push_back(ks_statistic_one_sample(
        samples, [mu, sd](double x) { return normal_cdf((x - mu) / sd); }));
  }
  const bool pass = distances[1] <= distances[0] && distances[2] <= distances[1];
  report(6, "critical LAN, u-direction: KS trend over n*delta in {50,100,200}", pass,
         fmt("KS = %.4f -> %.4f -> %.4f (non-increasing required)", distances[0], distances[1],
             distances[2]));
}

// --------------------------------------------------------------------------
// 8. Ergodic limits.

void criterion_8() {
  const ErgodicReport r = ergodic_check(kSub, 2000.0, 0.05, RngStream(318, 5));
  report(8, "ergodic limits: time averages and stationary variance", r.pass,
         fmt("avg X %.4f (2%% of %.2f), avg 1/X %.4f (2%% of %.2f), tail var %.4f (5%% of %.2f)",
             r.avg_x, r.target_avg_x, r.avg_inv_x, r.target_avg_inv_x, r.tail_var,
             r.target_var));
}

// --------------------------------------------------------------------------
// 9. Estimator efficiency against the Cramer-Rao bound.

void criterion_9() {
  RngStream rng(kSeed, 5000);
  const EfficiencyReport r = efficiency_experiment(kSub, SamplingScheme(20000, 0.01), 1000,
                                                   EstimatorKind::Discretized, rng);
  report(9, "estimator efficiency: scaled covariance within 20% of inverse information",
         r.max_rel_dev <= 0.20,
         fmt("cov = [[%.3f, %.3f], [%.3f, %.3f]] vs CRLB [[%.1f, %.1f], [%.1f, %.1f]], "
             "max rel dev %.3f",
             r.sample_cov_scaled(0, 0), r.sample_cov_scaled(0, 1), r.sample_cov_scaled(1, 0),
             r.sample_cov_scaled(1, 1), r.crlb(0, 0), r.crlb(0, 1), r.crlb(1, 0), r.crlb(1, 1),
             r.max_rel_dev));
}

// --------------------------------------------------------------------------
// 10. Score main-term refinement: the quadrature gap to the FD score shrinks
// monotonically with the step.

void criterion_10() {
  const double x = 1.0;
  std::vector<double> gaps;
  for (double dt : {0.04, 0.02, 0.01, 0.005}) {
    const auto window = oracle::transition_window(kSub, x, dt);
    gaps.push_back(integrate_adaptive(
        [&](double y) {
          const ScorePair fd = score_fd(kSub, dt, x, y);
          const ScorePair main = score_main_term(kSub, dt, x, y);
          return (std::fabs(fd.s_a - main.s_a) + std::fabs(fd.s_b - main.s_b)) *
                 std::exp(log_transition_density(kSub, dt, x, y));
        },
        window.lo, window.hi, 1e-8));
  }
  const bool pass = gaps[1] < gaps[0] && gaps[2] < gaps[1] && gaps[3] < gaps[2];
  report(10, "score main-term refinement: quadrature gap monotone in the step", pass,
         fmt("gap = %.3e -> %.3e -> %.3e -> %.3e", gaps[0], gaps[1], gaps[2], gaps[3]));
}

// --------------------------------------------------------------------------
// 11. Negative controls through the CLI: wrong-rate injections must fail.

int run_cli(const std::string& cli, const std::string& args) {
  const std::string cmd = cli + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

void criterion_11(const std::string& cli, const std::string& configs) {
  if (cli.empty() || configs.empty()) {
    report(11, "negative controls (CLI wrong-rate injection)", false,
           "skipped: --cli and --configs not given");
    return;
  }
  const int ref_sub = run_cli(cli, "lan --config " + configs + "/lan_subcritical_reference.cfg");
  const int neg_sub = run_cli(cli, "lan --config " + configs + "/lan_subcritical_negative.cfg");
  const int ref_super =
      run_cli(cli, "lan --config " + configs + "/lan_supercritical_reference.cfg");
  const int neg_super =
      run_cli(cli, "lan --config " + configs + "/lan_supercritical_negative.cfg");
  const bool pass = ref_sub == 0 && neg_sub == 5 && ref_super == 0 && neg_super == 5;
  report(11, "negative controls (CLI wrong-rate injection)", pass,
         fmt("reference exits (sub, super) = (%d, %d) need (0, 0); "
             "negative exits = (%d, %d) need (5, 5)",
             ref_sub, ref_super, neg_sub, neg_super));
}

}  // namespace

int main(int argc, char** argv) {
  std::string cli;
  std::string configs;
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--cli" && i + 1 < argc) cli = argv[++i];
    if (arg == "--configs" && i + 1 < argc) configs = argv[++i];
  }

  criterion_1();
  criterion_2();
  const ReferenceRuns runs = run_references();
  criterion_3(runs);
  criterion_4(runs);
  criterion_5(runs);
  criterion_6();
  criterion_7(runs);
  criterion_8();
  criterion_9();
  criterion_10();
  criterion_11(cli, configs);

  std::printf("%d of 11 criteria passed\n", 11 - g_failures);
  return g_failures == 0 ? 0 : 1;
}
