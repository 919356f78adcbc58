#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include "doctest.h"

namespace fs = std::filesystem;

namespace {

const std::string kCli = SCENAV_CLI_PATH;
const std::string kData = SCENAV_DATA_DIR;
const std::string kTmp = "cli_test_out";

struct RunResult {
  int exit_code = -1;
  std::string output;
};

RunResult run(const std::string& args) {
  fs::create_directories(kTmp);
  const std::string out_file = kTmp + "/last_output.txt";
  const std::string cmd = kCli + " " + args + " > " + out_file + " 2>&1";
  const int status = std::system(cmd.c_str());
  RunResult r;
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  std::ifstream in(out_file);
  r.output.assign(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
  return r;
}

std::string write_config(const std::string& name, const std::string& extra) {
  fs::create_directories(kTmp);
  const std::string path = kTmp + "/" + name;
  std::ofstream out(path);
  out << R"({
    "scenario": ")" << kData << R"(/scenarios/env1.json",
    "sac": {"hidden": [16, 16], "batch_size": 16, "warmup_episodes": 2},
    "episode": {"max_steps": 60},
    "total_steps": 300,
    "eval_interval": 10000,
    "seed": 5)" << extra << "\n}\n";
  return path;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("usage errors exit 1") {
    CHECK(run("").exit_code == 1);
    CHECK(run("frobnicate").exit_code == 1);
    CHECK(run("train --no-such-flag").exit_code == 1);
    CHECK(run("geom-bench --scenario x.json --rays 0").exit_code == 1);
    CHECK(run("--help").exit_code == 0);
  }

  TEST_CASE("gradcheck passes and is seeded") {
    const RunResult r = run("gradcheck --seed 2");
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("worst relative error") != std::string::npos);
    const RunResult r2 = run("gradcheck --seed 2");
    CHECK(r2.output == r.output);
  }

  TEST_CASE("geom-bench runs its equivariance audit") {
    const RunResult r =
        run("geom-bench --scenario " + kData + "/scenarios/env1.json --rays 20000");
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("scale equivariance: ok") != std::string::npos);
    CHECK(r.output.find("Mray/s") != std::string::npos);
    // missing scenario file is a validation failure
    CHECK(run("geom-bench --scenario nope.json --rays 10").exit_code == 2);
  }

  TEST_CASE("train is reproducible and honors overrides") {
    const std::string cfg = write_config("train.json", "");
    const RunResult a = run("train --config " + cfg + " --out " + kTmp + "/run_a");
    REQUIRE(a.exit_code == 0);
    CHECK(fs::exists(kTmp + "/run_a/metrics.csv"));
    CHECK(fs::exists(kTmp + "/run_a/ckpt_final.bin"));

    const RunResult b = run("train --config " + cfg + " --out " + kTmp + "/run_b");
    REQUIRE(b.exit_code == 0);
    CHECK(read_file(kTmp + "/run_a/metrics.csv") == read_file(kTmp + "/run_b/metrics.csv"));

    // --augment-p 0 pins the rho column at 1
    const RunResult c =
        run("train --config " + cfg + " --augment-p 0 --out " + kTmp + "/run_c");
    REQUIRE(c.exit_code == 0);
    std::ifstream in(kTmp + "/run_c/metrics.csv");
    std::string line;
    std::getline(in, line);  // header
    int rows = 0;
    while (std::getline(in, line)) {
      ++rows;
      const size_t p1 = line.find(',');
      const size_t p2 = line.find(',', p1 + 1);
      const size_t p3 = line.find(',', p2 + 1);
      CHECK(line.substr(p2 + 1, p3 - p2 - 1) == "1");
    }
    CHECK(rows > 0);

    // a different seed changes the log
    const RunResult d =
        run("train --config " + cfg + " --seed 99 --out " + kTmp + "/run_d");
    REQUIRE(d.exit_code == 0);
    CHECK(read_file(kTmp + "/run_a/metrics.csv") != read_file(kTmp + "/run_d/metrics.csv"));
  }

  TEST_CASE("train resumes from a checkpoint") {
    const std::string cfg = write_config("resume.json", "");
    REQUIRE(run("train --config " + cfg + " --out " + kTmp + "/pre").exit_code == 0);
    const RunResult r = run("train --config " + cfg + " --resume " + kTmp +
                            "/pre/ckpt_final.bin --steps 500 --out " + kTmp + "/post");
    REQUIRE(r.exit_code == 0);
    CHECK(r.output.find("trained 500 steps") != std::string::npos);
    // resumed log rows start beyond the first run's budget
    std::ifstream in(kTmp + "/post/metrics.csv");
    std::string header, first_row;
    std::getline(in, header);
    REQUIRE(std::getline(in, first_row));
    CHECK(std::stol(first_row.substr(0, first_row.find(','))) > 300);
  }

  TEST_CASE("eval reports per-task scores and a mean") {
    const std::string cfg = write_config("eval_train.json", "");
    REQUIRE(run("train --config " + cfg + " --out " + kTmp + "/eval_run").exit_code == 0);
    const RunResult r = run("eval --checkpoint " + kTmp + "/eval_run/ckpt_final.bin --tasks " +
                            kData + "/tasks/native.json --out " + kTmp + "/eval_report");
    REQUIRE(r.exit_code == 0);
    CHECK(r.output.find("task 0:") != std::string::npos);
    CHECK(r.output.find("task 7:") != std::string::npos);
    CHECK(r.output.find("mean score:") != std::string::npos);
    CHECK(fs::exists(kTmp + "/eval_report/report.json"));
    CHECK(fs::exists(kTmp + "/eval_report/task_7.csv"));
    // twice the same inputs, same report
    const RunResult r2 = run("eval --checkpoint " + kTmp + "/eval_run/ckpt_final.bin --tasks " +
                             kData + "/tasks/native.json --out " + kTmp + "/eval_report2");
    CHECK(r2.output == r.output);
  }

  TEST_CASE("broken inputs map to validation exits") {
    std::ofstream(kTmp + "/junk.bin") << "not a checkpoint";
    const RunResult r = run("eval --checkpoint " + kTmp + "/junk.bin --tasks " + kData +
                            "/tasks/native.json --out " + kTmp + "/junk_out");
    CHECK(r.exit_code == 2);
    CHECK(r.output.find("magic") != std::string::npos);

    const RunResult m = run("train --scenario does_not_exist.json");
    CHECK(m.exit_code == 2);
  }
}
