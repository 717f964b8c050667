#include "doctest.h"

#include "circtrade/artifacts.hpp"
#include "tempdir.hpp"

#include "json.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

using fixtures::TempDir;
namespace fs = std::filesystem;

namespace {

// Runs the CLI with the given arguments and returns its exit status.
int cli(const std::string& args, const fs::path& log) {
  const std::string cmd = std::string("\"") + CIRCTRADE_CLI + "\" " + args + " > \"" + log.string() + "\" 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

std::string q(const fs::path& p) { return "\"" + p.string() + "\""; }

const std::string kSmall = "--dealers 150 --background-txs 600 --rings 2 --fake-txs 30 --seed 3";
const std::string kFast = "--walk-length 20 --walks-per-node 4 --epochs 2 --deterministic --seed 11";

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("stage-by-stage run reproduces the pipeline") {
  TempDir dir("cli-stages");
  const auto log = dir / "log.txt";
  REQUIRE(cli("synth --out-dir " + q(dir / "data") + " " + kSmall, log) == 0);
  const auto tx = dir / "data" / "transactions.csv";
  CHECK(fs::exists(dir / "data" / "ground_truth.json"));

  REQUIRE(cli("pipeline --input " + q(tx) + " --out-dir " + q(dir / "full") + " " + kFast, log) == 0);

  const auto s = dir / "staged";
  REQUIRE(cli("ingest --input " + q(tx) + " --out-dir " + q(s), log) == 0);
  CHECK(slurp(s / "transactions.csv") == slurp(tx));
  REQUIRE(cli("graph --input " + q(s / "transactions.csv") + " --out-dir " + q(s), log) == 0);
  REQUIRE(cli("walk --input " + q(s / "graph.txt") + " --out-dir " + q(s) + " " + kFast, log) == 0);
  REQUIRE(cli("embed --input " + q(s / "walks.txt") + " --out-dir " + q(s) + " " + kFast, log) == 0);
  REQUIRE(cli("cluster --input " + q(s / "embeddings.csv") + " --out-dir " + q(s), log) == 0);
  REQUIRE(cli("detect --input " + q(tx) + " --clusters " + q(s / "clusters.csv") + " --out-dir " + q(s), log) == 0);

  for (const char* f : {"dealers.csv", "embeddings.csv", "clusters.csv", "projection.csv", "cycles.jsonl"})
    CHECK_MESSAGE(slurp(s / f) == slurp(dir / "full" / f), f);

  REQUIRE(cli("eval --pred-dir " + q(dir / "full") + " --truth " + q(dir / "data" / "ground_truth.json"), log) == 0);
  const auto j = nlohmann::json::parse(slurp(dir / "full" / "eval.json"));
  CHECK(j.contains("ari_ring_members"));
  CHECK(j["ring_recall"].get<double>() >= 0.0);
}

TEST_CASE("run.conf reproduces the artifacts") {
  TempDir dir("cli-rerun");
  const auto log = dir / "log.txt";
  REQUIRE(cli("synth --out-dir " + q(dir.path()) + " " + kSmall, log) == 0);
  REQUIRE(cli("pipeline --input " + q(dir / "transactions.csv") + " --out-dir " + q(dir / "a") + " " + kFast, log) == 0);
  REQUIRE(cli("pipeline --config " + q(dir / "a" / "run.conf") + " --out-dir " + q(dir / "b"), log) == 0);
  const auto a = nlohmann::json::parse(slurp(dir / "a" / "manifest.json"));
  const auto b = nlohmann::json::parse(slurp(dir / "b" / "manifest.json"));
  CHECK(a["artifacts"] == b["artifacts"]);
  CHECK(a["seed"] == 11);
}

TEST_CASE("config file values yield to flags") {
  TempDir dir("cli-config");
  const auto log = dir / "log.txt";
  std::ofstream(dir / "bad.conf") << "eps = 3.5\nmin-pts = 2\n";
  const auto table = std::string(CIRCTRADE_TEST_DATA) + "/four_dealers.csv";
  CHECK(cli("pipeline --config " + q(dir / "bad.conf") + " --input " + q(table) + " --out-dir " + q(dir / "x"), log) == 2);
  CHECK_FALSE(fs::exists(dir / "x"));
  CHECK(cli("pipeline --config " + q(dir / "bad.conf") + " --eps 0.2 --input " + q(table) + " --out-dir " +
                q(dir / "y") + " --deterministic",
            log) == 0);
  const auto m = nlohmann::json::parse(slurp(dir / "y" / "manifest.json"));
  CHECK(m["parameters"]["eps"] == "0.20000000000000001");
  CHECK(m["parameters"]["min-pts"] == "2");
}

TEST_CASE("failures map to stage exit codes") {
  TempDir dir("cli-errors");
  const auto log = dir / "log.txt";
  CHECK(cli("pipeline --input " + q(dir / "missing.csv") + " --out-dir " + q(dir / "o"), log) == 10);
  CHECK(cli("pipeline --input x --out-dir " + q(dir / "o") + " --scale cubic", log) != 0);
  CHECK(cli("walk --input " + q(dir / "missing.txt") + " --out-dir " + q(dir / "o"), log) == 11);
  CHECK(cli("pipeline --input x --out-dir " + q(dir / "o") + " --p 0", log) == 2);
  CHECK(cli("", log) != 0);
  CHECK_FALSE(fs::exists(dir / "o"));
}

}
