#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <unistd.h>
#include <vector>

namespace {

std::string cli_bin() {
  const char* env = std::getenv("CIRLAN_CLI_BIN");
  REQUIRE_MESSAGE(env != nullptr, "CIRLAN_CLI_BIN must point at the cirlan binary");
  return env;
}

std::string work_dir() {
  static const std::string dir = [] {
    std::string d = "/tmp/cirlan_cli_test_" + std::to_string(::getpid());
    std::system(("mkdir -p " + d).c_str());
    return d;
  }();
  return dir;
}

struct RunResult {
  int exit_code;
  std::string out;
  std::string err;
};

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

RunResult run(const std::string& args, const std::string& extra_env = "") {
  const std::string out_path = work_dir() + "/stdout.txt";
  const std::string err_path = work_dir() + "/stderr.txt";
  const std::string cmd = extra_env + " " + cli_bin() + " " + args + " > " + out_path +
                          " 2> " + err_path;
  const int status = std::system(cmd.c_str());
  RunResult r;
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = slurp(out_path);
  r.err = slurp(err_path);
  return r;
}

int count_lines(const std::string& text) {
  int n = 0;
  for (char c : text) n += c == '\n';
  return n;
}

std::string report_value(const std::string& report, const std::string& key) {
  std::istringstream in(report);
  std::string line;
  while (std::getline(in, line)) {
    if (line.rfind(key + "=", 0) == 0) return line.substr(key.size() + 1);
  }
  return "";
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("help output") {
  CHECK(run("--help").exit_code == 0);
  CHECK(run("").exit_code == 2);
  CHECK(run("bogus").exit_code == 2);
  for (const std::string cmd : {"simulate", "density", "estimate", "lan", "ergodic"}) {
    const RunResult r = run(cmd + " --help");
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("--") != std::string::npos);
  }
  // Every lan key shows up in its help.
  const RunResult lan_help = run("lan --help");
  for (const std::string key : {"inject_phi1", "m_limit", "substeps", "dump"}) {
    CHECK(lan_help.out.find("--" + key) != std::string::npos);
  }
}

TEST_CASE("simulate determinism and format") {
  const std::string base =
      "simulate --a 1.1 --b 0.5 --sigma 0.1 --x0 1 --n 10 --delta 0.1 --seed 42";
  const RunResult r1 = run(base);
  const RunResult r2 = run(base);
  CHECK(r1.exit_code == 0);
  CHECK(r1.out == r2.out);
  CHECK(r1.out.rfind("t,x\n", 0) == 0);
  CHECK(count_lines(r1.out) == 11 + 1);  // header + n + 1 rows

  std::istringstream in(r1.out);
  std::string line;
  std::getline(in, line);  // header
  while (std::getline(in, line)) {
    const double x = std::stod(line.substr(line.find(',') + 1));
    CHECK(x > 0.0);
  }
}

TEST_CASE("seed fallback from the environment") {
  const std::string args =
      "simulate --a 1.1 --b 0.5 --sigma 0.1 --x0 1 --n 5 --delta 0.1";
  const RunResult with_env = run(args, "CIRLAN_SEED=99");
  const RunResult with_flag = run(args + " --seed 99");
  const RunResult other_flag = run(args + " --seed 100", "CIRLAN_SEED=99");
  CHECK(with_env.out == with_flag.out);
  CHECK(other_flag.out != with_env.out);  // flag wins over the environment
}

TEST_CASE("density grid mass and flag-order independence") {
  const std::string args =
      "density --a 1.1 --b 0.5 --sigma 0.1 --x 1 --dt 0.1 --points 4001";
  const RunResult r = run(args);
  REQUIRE(r.exit_code == 0);
  std::istringstream in(r.out);
  std::string line;
  std::getline(in, line);
  CHECK(line == "y,log_p,p");
  std::vector<double> ys, ps;
  while (std::getline(in, line)) {
    const std::size_t c1 = line.find(',');
    const std::size_t c2 = line.rfind(',');
    ys.push_back(std::stod(line.substr(0, c1)));
    ps.push_back(std::stod(line.substr(c2 + 1)));
  }
  REQUIRE(ys.size() == 4001);
  double mass = 0.0;
  for (std::size_t i = 1; i < ys.size(); ++i) {
    mass += 0.5 * (ps[i] + ps[i - 1]) * (ys[i] - ys[i - 1]);
  }
  CHECK(mass > 0.9999);
  CHECK(mass < 1.0001);

  const RunResult swapped = run(
      "density --dt 0.1 --x 1 --sigma 0.1 --b 0.5 --a 1.1 --points 4001");
  CHECK(swapped.out == r.out);
}

TEST_CASE("density near-critical branch continuity") {
  const std::string common = "density --a 1.1 --sigma 0.1 --x 1 --dt 0.1 --points 101 "
                             "--ymin 0.5 --ymax 1.8";
  const RunResult zero = run(common + " --b 0");
  const RunResult tiny = run(common + " --b 1e-12");
  const RunResult forced = run(common + " --b 1e-12 --force_b0");
  REQUIRE(zero.exit_code == 0);
  REQUIRE(tiny.exit_code == 0);
  std::istringstream a(zero.out), b(tiny.out);
  std::string la, lb;
  std::getline(a, la);
  std::getline(b, lb);
  while (std::getline(a, la) && std::getline(b, lb)) {
    const double pa = std::stod(la.substr(la.rfind(',') + 1));
    const double pb = std::stod(lb.substr(lb.rfind(',') + 1));
    CHECK(std::fabs(pa - pb) <= 1e-6 * std::max(1.0, pa));
  }
  CHECK(forced.out == zero.out);  // forcing b = 0 reproduces the critical table
}

TEST_CASE("estimate round trip") {
  const std::string series = work_dir() + "/series.csv";
  REQUIRE(run("simulate --a 1.1 --b 0.5 --sigma 0.1 --x0 1 --n 20000 --delta 0.01 "
              "--seed 2029 --out " + series).exit_code == 0);
  const RunResult r = run("estimate --input " + series + " --sigma 0.1");
  REQUIRE(r.exit_code == 0);
  const double a_hat = std::stod(report_value(r.out, "a_hat"));
  const double b_hat = std::stod(report_value(r.out, "b_hat"));
  CHECK(std::fabs(a_hat - 1.1) < 0.6);
  CHECK(std::fabs(b_hat - 0.5) < 0.3);
  CHECK(report_value(r.out, "converged") == "true");

  const RunResult exact = run("estimate --input " + series + " --sigma 0.1 --exact");
  REQUIRE(exact.exit_code == 0);
  CHECK(std::stod(report_value(exact.out, "agreement_da")) < 0.05);
  CHECK(std::stod(report_value(exact.out, "agreement_db")) < 0.05);

  const RunResult json = run("estimate --input " + series + " --sigma 0.1 --json");
  CHECK(json.out.rfind("{\"a_hat\":", 0) == 0);
  CHECK(count_lines(json.out) == 1);
}

TEST_CASE("estimate rejects malformed series") {
  const std::string dir = work_dir();
  {
    std::ofstream f(dir + "/nonpos.csv");
    f << "t,x\n0,1\n0.1,-0.5\n0.2,1\n0.3,1.1\n";
  }
  const RunResult nonpos = run("estimate --input " + dir + "/nonpos.csv --sigma 0.1");
  CHECK(nonpos.exit_code == 4);
  CHECK(nonpos.err.find("row 2") != std::string::npos);
  {
    std::ofstream f(dir + "/jitter.csv");
    f << "t,x\n0,1\n0.1,1.2\n0.25,1.1\n0.3,1.05\n";
  }
  CHECK(run("estimate --input " + dir + "/jitter.csv --sigma 0.1").exit_code == 4);
  {
    std::ofstream f(dir + "/header.csv");
    f << "time,value\n0,1\n0.1,1.2\n0.2,1.1\n";
  }
  CHECK(run("estimate --input " + dir + "/header.csv --sigma 0.1").exit_code == 4);
  CHECK(run("estimate --input " + dir + "/missing.csv --sigma 0.1").exit_code == 4);
}

TEST_CASE("lan exit codes") {
  // Unknown key -> config error.
  CHECK(run("lan --a 1.1 --b 0.5 --sigma 0.1 --x0 1 --n 100 --delta 0.02 --bogus 1")
            .exit_code == 2);
  // Domain error.
  CHECK(run("lan --a 1.1 --b 0.5 --sigma 0.1 --x0 0 --n 100 --delta 0.02").exit_code == 3);
  // Degenerate alternative passes trivially.
  const RunResult degenerate = run(
      "lan --a 1.1 --b 0.5 --sigma 0.1 --x0 1 --n 100 --delta 0.02 --u 0 --v 0 "
      "--m 50 --seed 3");
  CHECK(degenerate.exit_code == 0);
  CHECK(report_value(degenerate.out, "pass") == "true");
  // A far-from-asymptotic scheme fails the gate -> exit 5.
  const RunResult fail = run(
      "lan --a 1.1 --b 0.5 --sigma 0.1 --x0 1 --n 60 --delta 0.02 --u 1 --v 1 "
      "--m 80 --seed 3");
  CHECK(fail.exit_code == 5);
  CHECK(report_value(fail.out, "pass") == "false");
  // Partial injection is a config error.
  CHECK(run("lan --a 1.1 --b 0.5 --sigma 0.1 --x0 1 --n 100 --delta 0.02 "
            "--inject_phi1 0.01").exit_code == 2);
}

TEST_CASE("lan dump file") {
  const std::string dump = work_dir() + "/dump.csv";
  const RunResult r = run(
      "lan --a 1.1 --b 0 --sigma 0.1 --x0 1 --n 150 --delta 0.02 --u 0 --v 1 "
      "--m 40 --m_limit 30 --substeps 16 --seed 5 --dump " + dump);
  CHECK((r.exit_code == 0 || r.exit_code == 5));  // gate may fail at toy scale
  const std::string text = slurp(dump);
  CHECK(text.rfind("kind,value\n", 0) == 0);
  int empirical = 0, limit = 0;
  std::istringstream in(text);
  std::string line;
  std::getline(in, line);
  while (std::getline(in, line)) {
    empirical += line.rfind("empirical,", 0) == 0;
    limit += line.rfind("limit,", 0) == 0;
  }
  CHECK(empirical == 40);
  CHECK(limit == 30);
}

TEST_CASE("ergodic exit codes") {
  CHECK(run("ergodic --a 1.1 --b -0.5 --sigma 0.1 --x0 1 --horizon 100 --delta 0.05")
            .exit_code == 3);
  CHECK(run("ergodic --a 1.1 --b 0.5 --sigma 0.1 --x0 1 --horizon 0 --delta 0.05")
            .exit_code == 2);
  const RunResult fast = run(
      "ergodic --a 1.1 --b 5 --sigma 0.1 --x0 1 --horizon 200 --delta 0.01 --seed 319");
  CHECK(fast.exit_code == 0);
  CHECK(report_value(fast.out, "pass") == "true");
}

TEST_CASE("config file with sections and flag override") {
  const std::string cfg = work_dir() + "/run.cfg";
  {
    std::ofstream f(cfg);
    f << "# shared\n"
      << "a = 1.1\n"
      << "b = 0.5\n"
      << "sigma = 0.1\n"
      << "x0 = 1\n"
      << "seed = 11\n"
      << "[simulate]\n"
      << "n = 6\n"
      << "delta = 0.1\n"
      << "[lan]\n"
      << "n = 100\n"
      << "delta = 0.02\n"
      << "m = 20\n";
  }
  const RunResult r = run("simulate --config " + cfg);
  CHECK(r.exit_code == 0);
  CHECK(count_lines(r.out) == 8);  // header + 7 values
  // Flags win over the config file.
  const RunResult overridden = run("simulate --config " + cfg + " --n 3");
  CHECK(count_lines(overridden.out) == 5);
  // Keys from a foreign section are invisible (m belongs to [lan]).
  CHECK(run("simulate --config " + cfg + " --m 5").exit_code == 2);
}

}  // TEST_SUITE
