#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "polya/cli_runner.hpp"

using namespace polya;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& tag) {
    path = fs::temp_directory_path() / ("polya_cli_" + tag);
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

fs::path write_config(const fs::path& dir, const std::string& name, const json& j) {
  const fs::path p = dir / name;
  std::ofstream(p) << j.dump(2) << "\n";
  return p;
}

std::string slurp(const fs::path& p) {
  std::ostringstream ss;
  ss << std::ifstream(p).rdbuf();
  return ss.str();
}

int run(const std::vector<std::string>& args) { return run_cli(args); }

}  // namespace

TEST_CASE("simulate writes one row per path plus a manifest") {
  TempDir tmp("simulate");
  const auto cfg = write_config(tmp.path, "c.json",
                                {{"b", 1},
                                 {"w", 1},
                                 {"n", 50},
                                 {"pi", {{"kind", "geometric"}, {"p", 0.5}}},
                                 {"paths", 20}});
  const auto out = tmp.path / "out";
  CHECK(run({"simulate", "--config", cfg.string(), "--seed", "7", "--out", out.string()}) == 0);
  std::ifstream csv(out / "simulate.csv");
  std::string header;
  std::getline(csv, header);
  CHECK(header == "seed_stream,n,X_n,N_n,scaled_value");
  int rows = 0;
  for (std::string line; std::getline(csv, line);)
    if (!line.empty()) ++rows;
  CHECK(rows == 20);
  const json manifest = json::parse(slurp(out / "manifest.json"));
  CHECK(manifest.at("subcommand") == "simulate");
  CHECK(manifest.at("seed") == 7);
  CHECK(manifest.at("version") == std::string(kVersion));
  CHECK(manifest.at("threads").get<int>() >= 1);
  CHECK(manifest.contains("config_hash"));
}

TEST_CASE("oracle reproduces the two-draw distribution exactly") {
  TempDir tmp("oracle");
  const auto cfg = write_config(tmp.path, "c.json",
                                {{"b", 1},
                                 {"w", 1},
                                 {"n", 2},
                                 {"pi", {{"kind", "deterministic"}, {"k", 1}}}});
  const auto out = tmp.path / "out";
  CHECK(run({"oracle", "--config", cfg.string(), "--out", out.string()}) == 0);
  const json pmf = json::parse(slurp(out / "oracle.json"));
  CHECK(pmf.at("1").get<double>() == 0.375);
  CHECK(pmf.at("2").get<double>() == 0.375);
  CHECK(pmf.at("3").get<double>() == 0.25);
  CHECK(pmf.size() == 3);
}

TEST_CASE("reruns with a fixed seed produce byte-identical artifacts") {
  TempDir tmp("rerun");
  const auto cfg = write_config(tmp.path, "c.json",
                                {{"b", 2},
                                 {"w", 1},
                                 {"n", 100},
                                 {"pi", {{"kind", "finite"}, {"atoms", {{0, 0.5}, {2, 0.5}}}}},
                                 {"paths", 50}});
  const auto out1 = tmp.path / "a", out2 = tmp.path / "b", out3 = tmp.path / "c";
  CHECK(run({"simulate", "--config", cfg.string(), "--seed", "3", "--out", out1.string(),
             "--threads", "1"}) == 0);
  CHECK(run({"simulate", "--config", cfg.string(), "--seed", "3", "--out", out2.string(),
             "--threads", "1"}) == 0);
  CHECK(run({"simulate", "--config", cfg.string(), "--seed", "3", "--out", out3.string(),
             "--threads", "3"}) == 0);
  CHECK(slurp(out1 / "simulate.csv") == slurp(out2 / "simulate.csv"));
  // Thread count changes the manifest but not the numbers.
  CHECK(slurp(out1 / "simulate.csv") == slurp(out3 / "simulate.csv"));
}

TEST_CASE("moment table lists factorial and raw kinds per order") {
  TempDir tmp("moments");
  const auto cfg = write_config(tmp.path, "c.json",
                                {{"b", 1},
                                 {"w", 1},
                                 {"n", 100},
                                 {"pi", {{"kind", "deterministic"}, {"k", 1}}},
                                 {"paths", 10},
                                 {"k_max", 2}});
  const auto out = tmp.path / "out";
  CHECK(run({"moments", "--config", cfg.string(), "--out", out.string()}) == 0);
  std::ifstream csv(out / "moments.csv");
  std::string header;
  std::getline(csv, header);
  CHECK(header == "k,n,M,m_k_factorial,se_factorial,m_k_raw,se_raw");
  int rows = 0;
  for (std::string line; std::getline(csv, line);)
    if (!line.empty()) ++rows;
  CHECK(rows == 2);
}

TEST_CASE("limit-law report enforces its residual assertion") {
  TempDir tmp("ul");
  const auto pass_cfg = write_config(tmp.path, "pass.json",
                                     {{"spec", {{"suite", "exp"}}},
                                      {"k_max", 4},
                                      {"max_residual", 1e-6}});
  CHECK(run({"ul", "--config", pass_cfg.string(), "--out", (tmp.path / "o1").string()}) == 0);
  const json rep = json::parse(slurp(tmp.path / "o1" / "ul.json"));
  CHECK(rep.at("v") == 1.0);
  CHECK(std::abs(rep.at("normalization_residual").get<double>()) < 1e-8);
  const auto fail_cfg = write_config(tmp.path, "fail.json",
                                     {{"spec", {{"suite", "exp"}}}, {"max_residual", 1e-30}});
  CHECK(run({"ul", "--config", fail_cfg.string(), "--out", (tmp.path / "o2").string()}) == 1);
}

TEST_CASE("bad inputs exit with the config code") {
  TempDir tmp("bad");
  CHECK(run({"simulate", "--config", (tmp.path / "missing.json").string(),
             "--out", (tmp.path / "o").string()}) == 2);
  const fs::path broken = tmp.path / "broken.json";
  std::ofstream(broken) << "{ not json";
  CHECK(run({"simulate", "--config", broken.string(), "--out", (tmp.path / "o").string()}) == 2);
  const auto incomplete = write_config(tmp.path, "inc.json", {{"paths", 5}});
  CHECK(run({"simulate", "--config", incomplete.string(),
             "--out", (tmp.path / "o").string()}) == 2);
  CHECK(run({"nonsense", "--config", incomplete.string()}) == 2);
  CHECK(run({"simulate"}) == 2);
  CHECK(run({"--help"}) == 0);
}
