#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "json.hpp"
#include "scenav/errors.hpp"
#include "scenav/evalkit.hpp"

using namespace scenav;
namespace fs = std::filesystem;

namespace {

std::string write_file(const std::string& path, const std::string& text) {
  fs::create_directories(fs::path(path).parent_path());
  std::ofstream out(path);
  out << text;
  return path;
}

const std::string kTmp = "evalkit_test_out";

}  // namespace

TEST_SUITE("evalkit") {
  TEST_CASE("dense reward branches") {
    RewardConfig cfg;
    cfg.kind = RewardConfig::Kind::dense;
    CHECK(dense_reward(2.0, 1.9, Terminal::goal, cfg) == 1.0);
    CHECK(dense_reward(2.0, 1.9, Terminal::collision, cfg) == -1.0);
    CHECK(dense_reward(2.0, 1.9, Terminal::none, cfg) == doctest::Approx(0.01));
    CHECK(dense_reward(1.9, 2.0, Terminal::none, cfg) == doctest::Approx(-0.01));
    // timeout is non-terminal for reward purposes
    CHECK(dense_reward(2.0, 1.9, Terminal::timeout, cfg) == doctest::Approx(0.01));
  }

  TEST_CASE("sparse reward is terminal-only") {
    RewardConfig cfg;
    CHECK(sparse_reward(Terminal::none, cfg) == 0.0);
    CHECK(sparse_reward(Terminal::timeout, cfg) == 0.0);
    CHECK(sparse_reward(Terminal::goal, cfg) == 1.0);
    CHECK(sparse_reward(Terminal::collision, cfg) == -1.0);
  }

  TEST_CASE("dense reward telescopes exactly") {
    RewardConfig cfg;
    cfg.kind = RewardConfig::Kind::dense;
    Rng rng(3);
    for (int rep = 0; rep < 100; ++rep) {
      std::vector<double> d(101);
      for (auto& v : d) v = rng.uniform(0.0, 12.0);
      double sum = 0.0;
      for (int i = 0; i < 100; ++i) sum += dense_reward(d[i], d[i + 1], Terminal::none, cfg);
      CHECK(std::abs(sum - cfg.c1 * (d.front() - d.back())) < 1e-12);
    }
  }

  TEST_CASE("score formula") {
    CHECK(score(true, 200, 400) == 0.0);
    CHECK(score(false, 17, 400) == -1.0);
    CHECK(score(true, 400, 400) == -1.0);  // continuity with failure
    CHECK(score(true, 1, 400) == doctest::Approx(0.995));
    // strictly decreasing in steps on successes
    for (int t = 1; t < 400; ++t) CHECK(score(true, t, 400) > score(true, t + 1, 400));
  }

  TEST_CASE("load_tasks validates starts and goals") {
    EpisodeConfig cfg;
    const std::string scen = write_file(kTmp + "/room.json",
        R"({"name":"room","bounds":[-3,-3,3,3],"segments":[],"spawn_window":[-3,-3,3,3]})");
    SUBCASE("valid suite") {
      const std::string tasks = write_file(kTmp + "/ok.json",
          R"({"tasks":[{"scenario":"room.json","start":[0,0,0],"goal":[2,0],"t_max":50}]})");
      const auto loaded = load_tasks(tasks, cfg);
      REQUIRE(loaded.size() == 1);
      CHECK(loaded[0].t_max == 50);
      CHECK(loaded[0].goal.x == 2.0);
    }
    SUBCASE("start against a wall is rejected") {
      const std::string tasks = write_file(kTmp + "/bad.json",
          R"({"tasks":[{"scenario":"room.json","start":[2.9,0,0],"goal":[0,0]}]})");
      CHECK_THROWS_WITH_AS(load_tasks(tasks, cfg), doctest::Contains("start"), ValidationError);
    }
    SUBCASE("missing field is a parse error") {
      const std::string tasks =
          write_file(kTmp + "/missing.json", R"({"tasks":[{"scenario":"room.json"}]})");
      CHECK_THROWS_AS(load_tasks(tasks, cfg), ParseError);
    }
  }

  TEST_CASE("bundled task suites load") {
    EpisodeConfig cfg;
    CHECK(load_tasks(std::string(SCENAV_DATA_DIR) + "/tasks/suite8.json", cfg).size() == 8);
    CHECK(load_tasks(std::string(SCENAV_DATA_DIR) + "/tasks/native.json", cfg).size() == 8);
    CHECK(load_tasks(std::string(SCENAV_DATA_DIR) + "/tasks/ood.json", cfg).size() == 8);
  }

  TEST_CASE("run_eval on a straight-line task") {
    EpisodeConfig cfg;
    NormLimits limits;
    write_file(kTmp + "/room.json",
        R"({"name":"room","bounds":[-3,-3,3,3],"segments":[],"spawn_window":[-3,-3,3,3]})");
    const std::string tasks = write_file(kTmp + "/straight.json",
        R"({"tasks":[{"scenario":"room.json","start":[-2,0,0],"goal":[0,0],"t_max":100}]})");
    // full-throttle straight driver: huge mu_v, zero mu_omega
    Rng init(4);
    Mlp policy = Mlp::make({kStateDim, 4}, init);
    std::fill(policy.layers[0].w.begin(), policy.layers[0].w.end(), 0.0);
    policy.layers[0].b = {40.0, 0.0, 0.0, 0.0};

    const auto loaded = load_tasks(tasks, cfg);
    const EvalReport rep = run_eval(policy, loaded, cfg, limits, kTmp + "/straight_out");
    REQUIRE(rep.tasks.size() == 1);
    CHECK(rep.tasks[0].outcome == Terminal::goal);
    CHECK(rep.tasks[0].task_score ==
          1.0 - 2.0 * static_cast<double>(rep.tasks[0].steps) / 100.0);
    CHECK(rep.success_rate == 1.0);
    // ~1.7 m to cover at 0.1 m per step
    CHECK(rep.tasks[0].steps >= 17);
    CHECK(rep.tasks[0].steps <= 20);

    // written artifacts
    CHECK(fs::exists(kTmp + "/straight_out/task_0.csv"));
    std::ifstream rf(kTmp + "/straight_out/report.json");
    REQUIRE(rf.good());
    nlohmann::json jr;
    rf >> jr;
    CHECK(jr["tasks"].size() == 1);
    CHECK(jr["mean_score"].get<double>() == doctest::Approx(rep.mean_score));
  }

  TEST_CASE("unreachable goal times out with score -1") {
    EpisodeConfig cfg;
    NormLimits limits;
    // goal sealed inside a box
    write_file(kTmp + "/sealed.json", R"({"name":"sealed","bounds":[-3,-3,3,3],
      "segments":[[1.5,1.5,2.5,1.5],[2.5,1.5,2.5,2.5],[2.5,2.5,1.5,2.5],[1.5,2.5,1.5,1.5]],
      "spawn_window":[-3,-3,3,3]})");
    const std::string tasks = write_file(kTmp + "/sealed_tasks.json",
        R"({"tasks":[{"scenario":"sealed.json","start":[-2,-2,0],"goal":[2,2],"t_max":60}]})");
    Rng init(5);
    const Mlp policy = Mlp::make({kStateDim, 16, 4}, init);
    const EvalReport rep = run_eval(policy, load_tasks(tasks, cfg), cfg, limits);
    REQUIRE(rep.tasks.size() == 1);
    CHECK(rep.tasks[0].outcome != Terminal::goal);
    CHECK(rep.tasks[0].task_score == -1.0);
  }

  TEST_CASE("run_eval is deterministic and read-only") {
    EpisodeConfig cfg;
    NormLimits limits;
    const std::string tasks = std::string(SCENAV_DATA_DIR) + "/tasks/native.json";
    Rng init(6);
    Mlp policy = Mlp::make({kStateDim, 32, 32, 4}, init);
    const Mlp before = policy;
    const auto loaded = load_tasks(tasks, cfg);
    const EvalReport a = run_eval(policy, loaded, cfg, limits);
    const EvalReport b = run_eval(policy, loaded, cfg, limits);
    REQUIRE(a.tasks.size() == b.tasks.size());
    for (size_t i = 0; i < a.tasks.size(); ++i) {
      CHECK(a.tasks[i].task_score == b.tasks[i].task_score);
      CHECK(a.tasks[i].steps == b.tasks[i].steps);
    }
    for (size_t l = 0; l < policy.layers.size(); ++l) {
      CHECK(policy.layers[l].w == before.layers[l].w);
    }
  }
}
