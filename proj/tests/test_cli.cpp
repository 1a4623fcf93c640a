#include <sys/wait.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "json.hpp"

namespace {

struct RunResult {
  int code = -1;
  std::string out;
};

// Runs the command-line tool with the given arguments and captures stdout.
RunResult run_cli(const std::string& args) {
  const std::string cmd =
      std::string(STEPSCATTER_BIN) + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  RunResult r;
  char buf[4096];
  std::size_t n = 0;
  while ((n = std::fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, n);
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::vector<std::string> split_lines(const std::string& text) {
  std::vector<std::string> lines;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) lines.push_back(line);
  return lines;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, ',')) fields.push_back(field);
  // A trailing comma produces an empty final field that getline drops.
  if (!line.empty() && line.back() == ',') fields.push_back("");
  return fields;
}

double as_double(const std::string& s) { return std::strtod(s.c_str(), nullptr); }

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_SUITE("cli_potential") {
  TEST_CASE("default profile table") {
    const RunResult r = run_cli("potential");
    CHECK(r.code == 0);
    const auto lines = split_lines(r.out);
    REQUIRE(lines.size() == 102);
    CHECK(lines[0] == "x,z,rho,V");
    CHECK(split_csv(lines[1])[0] == "-10");
    CHECK(split_csv(lines[101])[0] == "10");
    // V is monotone non-decreasing for sigma < 0.
    double prev = -1e300;
    for (std::size_t i = 1; i < lines.size(); ++i) {
      const auto f = split_csv(lines[i]);
      REQUIRE(f.size() == 4);
      const double v = as_double(f[3]);
      CHECK(v >= prev);
      prev = v;
    }
  }

  TEST_CASE("half-height checkpoint row") {
    // x = sigma ln 4 maps to z = 2, V = V1/2.
    const RunResult r = run_cli(
        "potential --x-min -1.3862943611198906 "
        "--x-max -1.3862943611198906 --x-count 1");
    CHECK(r.code == 0);
    const auto lines = split_lines(r.out);
    REQUIRE(lines.size() == 2);
    const auto f = split_csv(lines[1]);
    REQUIRE(f.size() == 4);
    CHECK(std::abs(as_double(f[1]) - 2.0) < 1e-12);
    CHECK(std::abs(as_double(f[3]) - 0.5) < 1e-12);
  }

  TEST_CASE("byte-identical reruns") {
    const RunResult a = run_cli("potential --sigma -0.7");
    const RunResult b = run_cli("potential --sigma -0.7");
    CHECK(a.code == 0);
    CHECK(a.out == b.out);
    const RunResult c = run_cli("potential --format json --x-count 9");
    const RunResult d = run_cli("potential --format json --x-count 9");
    CHECK(c.out == d.out);
  }

  TEST_CASE("golden profiles") {
    const struct {
      const char* args;
      const char* file;
    } cases[] = {
        {"potential --sigma -0.5", "/potential_sigma_half.csv"},
        {"potential --sigma -1", "/potential_sigma_one.csv"},
        {"potential --sigma -2", "/potential_sigma_two.csv"},
    };
    for (const auto& c : cases) {
      const RunResult r = run_cli(c.args);
      CHECK(r.code == 0);
      CHECK(r.out == read_file(std::string(GOLDEN_DIR) + c.file));
    }
  }

  TEST_CASE("transform alias emits the same table") {
    const RunResult a = run_cli("transform --x-count 7");
    const RunResult b = run_cli("potential --x-count 7");
    CHECK(a.code == 0);
    CHECK(a.out == b.out);
  }

  TEST_CASE("json format") {
    const RunResult r = run_cli("potential --format json --x-count 5");
    CHECK(r.code == 0);
    const nlohmann::json doc = nlohmann::json::parse(r.out);
    REQUIRE(doc.is_array());
    REQUIRE(doc.size() == 5);
    for (const auto& row : doc) {
      CHECK(row.contains("x"));
      CHECK(row.contains("z"));
      CHECK(row.contains("rho"));
      CHECK(row.contains("V"));
    }
    CHECK(doc[0]["x"].get<double>() == -10.0);
    CHECK(doc[4]["x"].get<double>() == 10.0);
  }

  TEST_CASE("output redirection to a file") {
    const std::string path = "/tmp/heunstep_cli_test_out.csv";
    const RunResult r =
        run_cli("potential --x-count 3 --output " + path);
    CHECK(r.code == 0);
    CHECK(r.out.empty());
    const auto lines = split_lines(read_file(path));
    CHECK(lines.size() == 4);
    std::remove(path.c_str());
  }
}

TEST_SUITE("cli_wavefunction") {
  TEST_CASE("default table with residual column") {
    const RunResult r = run_cli("wavefunction");
    CHECK(r.code == 0);
    const auto lines = split_lines(r.out);
    REQUIRE(lines.size() == 202);
    CHECK(lines[0] == "x,re_psi,im_psi,abs2_psi,residual");

    double max_residual = 0.0;
    double far_min = 1e300;
    double far_max = 0.0;
    for (std::size_t i = 1; i < lines.size(); ++i) {
      const auto f = split_csv(lines[i]);
      REQUIRE(f.size() == 5);
      const double x = as_double(f[0]);
      const double re = as_double(f[1]);
      const double im = as_double(f[2]);
      const double abs2 = as_double(f[3]);
      // The modulus column is literally re^2 + im^2.
      CHECK(std::abs(abs2 - (re * re + im * im)) <= 1e-14 * abs2);
      max_residual = std::max(max_residual, as_double(f[4]));
      if (x >= 9.5) {
        far_min = std::min(far_min, abs2);
        far_max = std::max(far_max, abs2);
      }
    }
    CHECK(max_residual <= 1e-6);
    // A single transmitted plane wave: |psi| settles on the far right.
    CHECK(far_max / far_min - 1.0 <= 2e-5);
  }

  TEST_CASE("below-barrier energies are admissible") {
    const RunResult r = run_cli("wavefunction --energy 0.5 --x-count 41");
    CHECK(r.code == 0);
    const auto lines = split_lines(r.out);
    REQUIRE(lines.size() == 42);
    for (std::size_t i = 1; i < lines.size(); ++i) {
      // The finite-difference residual divides the evaluation noise of psi
      // by h^2; under the barrier the evanescent tail makes that relative
      // noise larger than in the default-energy run, so the bound is looser.
      CHECK(as_double(split_csv(lines[i])[4]) <= 1e-4);
    }
  }
}

TEST_SUITE("cli_transmission") {
  TEST_CASE("rows carry regime flags with empty cells when not above") {
    const RunResult r =
        run_cli("transmission --sigma -0.5 --energy 2 --energy 0.5 "
                "--energy -1");
    CHECK(r.code == 0);
    const auto lines = split_lines(r.out);
    REQUIRE(lines.size() == 4);
    CHECK(lines[0] == "sigma,E,T,R,regime");

    const auto above = split_csv(lines[1]);
    REQUIRE(above.size() == 5);
    CHECK(above[4] == "above_barrier");
    const double t = as_double(above[2]);
    const double rr = as_double(above[3]);
    CHECK(t > 0.0);
    CHECK(t < 1.0);
    CHECK(std::abs(t + rr - 1.0) < 1e-12);

    CHECK(lines[2] == "-0.5,0.5,,,below_barrier");
    CHECK(lines[3] == "-0.5,-1,,,closed");
  }

  TEST_CASE("threshold energy is flagged, not computed") {
    const RunResult r = run_cli("transmission --sigma -0.25 --energy 1");
    CHECK(r.code == 0);
    const auto lines = split_lines(r.out);
    REQUIRE(lines.size() == 2);
    CHECK(split_csv(lines[1])[4] == "below_barrier");
  }

  TEST_CASE("energy sweep is monotone in the reflection column") {
    const RunResult r = run_cli(
        "transmission --sigma -0.25 --energy-min 1.1 --energy-max 6 "
        "--energy-count 50");
    CHECK(r.code == 0);
    const auto lines = split_lines(r.out);
    REQUIRE(lines.size() == 51);
    double prev_r = 1.0;
    for (std::size_t i = 1; i < lines.size(); ++i) {
      const auto f = split_csv(lines[i]);
      REQUIRE(f.size() == 5);
      CHECK(f[4] == "above_barrier");
      const double rr = as_double(f[3]);
      CHECK(rr > 0.0);
      CHECK(rr < 1.0);
      CHECK(rr < prev_r);
      prev_r = rr;
    }
  }

  TEST_CASE("oracle columns certify the closed form") {
    const RunResult r = run_cli(
        "transmission --sigma -0.25 --energy-min 1.1 --energy-max 3 "
        "--energy-count 5 --oracle");
    CHECK(r.code == 0);
    const auto lines = split_lines(r.out);
    REQUIRE(lines.size() == 6);
    CHECK(lines[0] == "sigma,E,T,R,regime,T_oracle,delta_T");
    for (std::size_t i = 1; i < lines.size(); ++i) {
      const auto f = split_csv(lines[i]);
      REQUIRE(f.size() == 7);
      CHECK(as_double(f[6]) <= 1e-4);
    }
  }

  TEST_CASE("json rows use null for unavailable columns") {
    const RunResult r = run_cli(
        "transmission --sigma -0.5 --energy 0.5 --format json");
    CHECK(r.code == 0);
    const nlohmann::json doc = nlohmann::json::parse(r.out);
    REQUIRE(doc.is_array());
    REQUIRE(doc.size() == 1);
    CHECK(doc[0]["T"].is_null());
    CHECK(doc[0]["regime"] == "below_barrier");
  }

  TEST_CASE("oracle mismatch is a distinct exit status") {
    const RunResult r = run_cli(
        "transmission --sigma -0.5 --energy 2 --oracle "
        "--tolerance oracle=1e-15");
    CHECK(r.code == 3);
    // The table is still emitted so the discrepancy can be inspected.
    CHECK(split_lines(r.out).size() == 2);
  }
}

TEST_SUITE("cli_verify") {
  TEST_CASE("default run passes every check") {
    const RunResult r = run_cli("verify");
    CHECK(r.code == 0);
    const nlohmann::json doc = nlohmann::json::parse(r.out);
    CHECK(doc["all_pass"] == true);
    REQUIRE(doc["checks"].is_array());
    REQUIRE(doc["checks"].size() == 6);
    for (const auto& check : doc["checks"]) {
      CHECK(check["pass"] == true);
      CHECK(check["residual"].get<double>() <
            check["tolerance"].get<double>());
    }
  }

  TEST_CASE("fault injection trips the termination check") {
    const RunResult r = run_cli("verify --inject-q-perturbation");
    CHECK(r.code == 3);
    const nlohmann::json doc = nlohmann::json::parse(r.out);
    CHECK(doc["all_pass"] == false);
    bool found = false;
    for (const auto& check : doc["checks"]) {
      if (check["name"] == "termination_identity") {
        found = true;
        CHECK(check["pass"] == false);
        CHECK(check["residual"].get<double>() >
              check["tolerance"].get<double>());
      }
    }
    CHECK(found);
  }

  TEST_CASE("out-of-regime energy is a numeric error") {
    const RunResult r = run_cli("verify --energy 0.5");
    CHECK(r.code == 2);
  }
}

TEST_SUITE("cli_errors") {
  TEST_CASE("usage errors exit with status 1") {
    CHECK(run_cli("--bogus-flag").code == 1);
    CHECK(run_cli("potential --sigma -1 --sigma -2").code == 1);
    CHECK(run_cli("transmission --sigma -0.5").code == 1);
    CHECK(run_cli("transmission --sigma -0.5 --energy 2 "
                  "--tolerance bogus=1")
              .code == 1);
    CHECK(run_cli("transmission --sigma -0.5 --energy-min 1.5").code == 1);
    CHECK(run_cli("potential --x-count 0").code == 1);
    CHECK(run_cli("wavefunction --c1 abc").code == 1);
  }

  TEST_CASE("numeric errors exit with status 2") {
    CHECK(run_cli("potential --sigma 0").code == 2);
  }

  TEST_CASE("help text exits cleanly") {
    CHECK(run_cli("--help").code == 0);
    CHECK(run_cli("potential --help").code == 0);
  }
}
