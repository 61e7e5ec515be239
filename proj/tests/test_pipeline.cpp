#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "qmas/pipeline.hpp"

using namespace qmas;
namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("qmas_pipeline_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

fs::path write_input(const fs::path& dir, const std::string& name, const std::string& body) {
  const fs::path p = dir / name;
  std::ofstream out(p, std::ios::binary);
  out << body;
  return p;
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

const std::string kThreshold2 = R"({"n": 3, "qualified": [[1,2],[1,3],[2,3]], "L": 1})";

PipelineConfig base_config(const fs::path& input, const fs::path& out) {
  PipelineConfig config;
  config.input_path = input.string();
  config.out_dir = out.string();
  return config;
}

} // namespace

TEST_CASE("full pipeline run on the majority structure") {
  const fs::path dir = fresh_dir("full");
  const fs::path input = write_input(dir, "in.json", kThreshold2);
  PipelineConfig config = base_config(input, dir / "out");
  config.oracle = true;
  std::ostringstream log;
  const PipelineResult result = run_pipeline(config, log);
  CHECK(result.exit_code == 0);

  const Json solver = Json::parse(read_file(dir / "out" / "solver_report.json"));
  CHECK(solver["t"] == 2);
  CHECK(solver["objective"] == 3);
  CHECK(solver["m"] == 3);
  CHECK(solver["x"]["1"] == 1);
  CHECK(solver["x"]["2"] == 1);
  CHECK(solver["x"]["3"] == 1);

  const Json bundle = Json::parse(read_file(dir / "out" / "scheme_bundle.json"));
  CHECK(bundle["q"] == 3);
  CHECK(bundle["m_prime"] == 3);
  CHECK(bundle["rng"] == "mt19937_64");
  CHECK(bundle["G1"].size() == 2);
  CHECK(bundle["G2"].size() == 1);
  CHECK(bundle["leaders"].size() == 1);
  CHECK(bundle["V_prime"] == Json::parse("[[1],[2],[3]]"));

  const Json verification = Json::parse(read_file(dir / "out" / "verification_report.json"));
  CHECK(verification["pass"] == true);
  CHECK(verification["subsets"].size() == 8);
  CHECK(verification["average_share_qudits"]["num"] == 3);
  CHECK(verification["average_share_qudits"]["den"] == 3);

  const Json sim = Json::parse(read_file(dir / "out" / "simulation_report.json"));
  CHECK(sim["agrees_with_rank_criteria"] == true);
  CHECK(sim["subsets"].size() == 8);
}

TEST_CASE("non-self-dual structures are rejected with a witness") {
  const fs::path dir = fresh_dir("reject");
  const fs::path input =
      write_input(dir, "in.json", R"({"n": 2, "qualified": [[1,2]], "L": 1})");
  std::ostringstream log;
  const PipelineResult result = run_pipeline(base_config(input, dir / "out"), log);
  CHECK(result.exit_code == 3);
  CHECK(result.error_code == "NotSelfDual");
  const Json err = Json::parse(read_file(dir / "out" / "error.json"));
  CHECK(err["error"] == "NotSelfDual");
  CHECK(err["witness"] == Json::parse("[1]"));
  CHECK_FALSE(fs::exists(dir / "out" / "scheme_bundle.json"));
}

TEST_CASE("malformed input exits with a parse error") {
  const fs::path dir = fresh_dir("malformed");
  const fs::path input = write_input(dir, "in.json", "{not json");
  std::ostringstream log;
  CHECK(run_pipeline(base_config(input, dir / "out"), log).exit_code == 2);
  CHECK(run_pipeline(base_config(dir / "missing.json", dir / "out"), log).exit_code == 2);
  const fs::path bad_schema = write_input(dir, "bad.json", R"({"n": 3, "L": 1})");
  CHECK(run_pipeline(base_config(bad_schema, dir / "out"), log).exit_code == 2);
}

TEST_CASE("stages can stop early") {
  const fs::path dir = fresh_dir("stages");
  const fs::path input = write_input(dir, "in.json", kThreshold2);
  PipelineConfig config = base_config(input, dir / "out");
  config.stage = Stage::Validate;
  std::ostringstream log;
  CHECK(run_pipeline(config, log).exit_code == 0);
  CHECK_FALSE(fs::exists(dir / "out" / "solver_report.json"));

  config.stage = Stage::Optimize;
  CHECK(run_pipeline(config, log).exit_code == 0);
  CHECK(fs::exists(dir / "out" / "solver_report.json"));
  CHECK_FALSE(fs::exists(dir / "out" / "scheme_bundle.json"));
}

TEST_CASE("the simulation stage is skipped above the amplitude cap") {
  const fs::path dir = fresh_dir("skip");
  const fs::path input = write_input(dir, "in.json", kThreshold2);
  PipelineConfig config = base_config(input, dir / "out");
  config.sim_cap = 8;  // below 3^3
  std::ostringstream log;
  const PipelineResult result = run_pipeline(config, log);
  CHECK(result.exit_code == 0);
  const Json sim = Json::parse(read_file(dir / "out" / "simulation_report.json"));
  CHECK(sim["skipped"] == true);
  CHECK(log.str().find("skipped") != std::string::npos);
}

TEST_CASE("field size can be overridden") {
  const fs::path dir = fresh_dir("override");
  const fs::path input = write_input(dir, "in.json", kThreshold2);
  PipelineConfig config = base_config(input, dir / "out");
  config.q_override = 5;
  std::ostringstream log;
  CHECK(run_pipeline(config, log).exit_code == 0);
  const Json bundle = Json::parse(read_file(dir / "out" / "scheme_bundle.json"));
  CHECK(bundle["q"] == 5);
  const Json verification = Json::parse(read_file(dir / "out" / "verification_report.json"));
  CHECK(verification["pass"] == true);

  config.q_override = 4;  // not prime
  CHECK(run_pipeline(config, log).exit_code == 2);
}

TEST_CASE("identical runs produce byte-identical artifacts") {
  const fs::path dir = fresh_dir("determinism");
  const fs::path input = write_input(dir, "in.json", kThreshold2);
  std::ostringstream log;
  PipelineConfig a = base_config(input, dir / "out_a");
  a.seed = 42;
  PipelineConfig b = base_config(input, dir / "out_b");
  b.seed = 42;
  REQUIRE(run_pipeline(a, log).exit_code == 0);
  REQUIRE(run_pipeline(b, log).exit_code == 0);
  for (const char* name : {"solver_report.json", "scheme_bundle.json",
                           "verification_report.json", "simulation_report.json"}) {
    CHECK(read_file(dir / "out_a" / name) == read_file(dir / "out_b" / name));
  }
}

TEST_CASE("share round trip through a stored bundle") {
  const fs::path dir = fresh_dir("roundtrip");
  const fs::path input = write_input(dir, "in.json", kThreshold2);
  std::ostringstream log;
  REQUIRE(run_pipeline(base_config(input, dir / "out"), log).exit_code == 0);
  const std::string bundle = (dir / "out" / "scheme_bundle.json").string();

  std::ostringstream listing;
  CHECK(demo_share_roundtrip(bundle, {2}, {1, 3}, 9, listing) == Row{2});
  CHECK(listing.str().find("participant 1") != std::string::npos);
  CHECK(listing.str().find("reconstructed [2]") != std::string::npos);

  std::ostringstream full;
  CHECK(demo_share_roundtrip(bundle, {1}, {1, 2, 3}, 1, full) == Row{1});

  std::ostringstream failing;
  CHECK_THROWS_AS(demo_share_roundtrip(bundle, {2}, {2}, 9, failing), NotQualified);
  CHECK_THROWS_AS(demo_share_roundtrip((dir / "nope.json").string(), {2}, {1, 2}, 0, failing),
                  ParseError);
}

TEST_CASE("ramp bundle round trip over GF(7)") {
  const fs::path dir = fresh_dir("ramp_rt");
  const fs::path input = write_input(
      dir, "in.json", R"({"n": 3, "qualified": [[1,2],[1,3],[2,3]], "L": 2})");
  PipelineConfig config = base_config(input, dir / "out");
  config.stage = Stage::Build;
  std::ostringstream log;
  REQUIRE(run_pipeline(config, log).exit_code == 0);
  const std::string bundle = (dir / "out" / "scheme_bundle.json").string();
  std::ostringstream out;
  CHECK(demo_share_roundtrip(bundle, {1, 4}, {1, 2, 3}, 5, out) == Row{1, 4});
}
