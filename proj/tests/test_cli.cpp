#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "cli.hpp"
#include "spe/model.hpp"

#ifndef SPE_MODEL_DIR
#define SPE_MODEL_DIR "models"
#endif

using nlohmann::json;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  args.insert(args.begin(), "spe");
  std::ostringstream out, err;
  const int code = spe::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string model(const std::string& name) { return std::string(SPE_MODEL_DIR) + "/" + name; }

std::filesystem::path temp_file(const std::string& name, const std::string& contents = "") {
  const auto path = std::filesystem::temp_directory_path() / ("spe_test_" + name);
  if (!contents.empty()) std::ofstream(path) << contents;
  return path;
}

json payload(const std::string& text) {
  json doc = json::parse(text);
  doc.erase("timing");
  return doc;
}

}  // namespace

TEST_CASE("sha256") {
  CHECK(spe::cli::sha256_hex("") == "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  CHECK(spe::cli::sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST_CASE("validate") {
  const Result bad = run({"validate", "--model", model("bad.json")});
  CHECK(bad.code == 1);
  const json doc = json::parse(bad.out);
  CHECK(doc["results"]["valid"] == false);
  CHECK(doc["results"]["violations"].size() >= 1);
  CHECK(doc["model_digest"].get<std::string>().starts_with("sha256:"));

  const Result good = run({"validate", "--model", model("star3.json")});
  CHECK(good.code == 0);
  CHECK(json::parse(good.out)["results"]["alphabet"].size() == 2);
}

TEST_CASE("malformed model files exit 1 with a field diagnostic") {
  const auto path = temp_file("unknown_key.json", R"({"n_sites": 2, "sublattice": ["A","B"], "couplings": []})");
  const Result r = run({"validate", "--model", path.string()});
  CHECK(r.code == 1);
  CHECK(r.err.find("couplings") != std::string::npos);

  const auto broken = temp_file("broken.json", "{\n  \"n_sites\": 2,\n  \"sublattice\": [\"A\", \n");
  const Result b = run({"validate", "--model", broken.string()});
  CHECK(b.code == 1);
  CHECK(b.err.find("line") != std::string::npos);

  CHECK(run({"validate", "--model", "/nonexistent.json"}).code == 1);
}

TEST_CASE("usage errors exit 2") {
  CHECK(run({}).code == 2);
  CHECK(run({"frobnicate"}).code == 2);
  CHECK(run({"energy", "--model", model("star3.json"), "--steps", "10"}).code == 2);
  CHECK(run({"energy", "--model", model("star3.json"), "--B", "x", "--steps", "10", "--seed", "1"}).code == 2);
  CHECK(run({"validate", "--model", model("star3.json"), "--format", "xml"}).code == 2);
  CHECK(run({"validate"}).code == 2);
  CHECK(run({"analyze", "spectra", "--model", model("star3.json"), "--B", "1"}).code == 2);
  CHECK(run({"--help"}).code == 0);
}

TEST_CASE("energy report") {
  const std::vector<std::string> args = {"energy", "--model", model("star3.json"), "--B", "auto:0.2",
                                         "--steps", "20000", "--seed", "7"};
  const Result r = run(args);
  REQUIRE(r.code == 0);
  const json doc = json::parse(r.out);
  CHECK(doc["command"].size() == args.size());
  CHECK(doc["seed"] == 7);
  CHECK(doc["tool_version"].is_string());
  const json& res = doc["results"];
  for (const char* key : {"estimate", "stderr", "B", "steps", "acceptance_rate", "terms"}) CHECK(res.contains(key));
  CHECK(res["terms"].size() == 2);
  CHECK(res["B"] == spe::required_b(spe::load_model(model("star3.json")), 0.2));
  CHECK(std::abs(res["estimate"].get<double>() + 1.5) < 0.3);

  // Identical argv gives an identical payload apart from timing.
  CHECK(payload(run(args).out) == payload(r.out));
}

TEST_CASE("multi-chain energy") {
  const Result r = run({"energy", "--model", model("star3.json"), "--B", "4", "--steps", "5000", "--seed", "3",
                        "--chains", "3", "--neel"});
  REQUIRE(r.code == 0);
  const json res = json::parse(r.out)["results"];
  CHECK(res["chains"] == 3);
  CHECK(res["records"] == 3 * 4500);
  CHECK(res.contains("neel"));
}

TEST_CASE("sample stream formats") {
  const std::vector<std::string> base = {"sample", "--model", model("star4_fm.json"), "--B", "3", "--steps",
                                         "100", "--burn-in", "50", "--thin", "10", "--seed", "5"};
  auto csv_args = base;
  csv_args.insert(csv_args.end(), {"--format", "csv"});
  const Result csv = run(csv_args);
  REQUIRE(csv.code == 0);
  std::istringstream lines(csv.out);
  std::string header;
  std::getline(lines, header);
  CHECK(header == "step,loop_count,acceptance,afm 0-1,afm 0-2,afm 0-3,fm 1-2");
  int rows = 0;
  for (std::string line; std::getline(lines, line);) ++rows;
  CHECK(rows == 5);

  auto jsonl_args = base;
  jsonl_args.insert(jsonl_args.end(), {"--format", "jsonl"});
  const Result jsonl = run(jsonl_args);
  REQUIRE(jsonl.code == 0);
  std::istringstream jl(jsonl.out);
  std::string first;
  std::getline(jl, first);
  CHECK(json::parse(first)["results"]["summary"]["records"] == 5);
  std::string record;
  std::getline(jl, record);
  const json rec = json::parse(record);
  CHECK(rec["step"] == 60);
  CHECK(rec["measurements"].contains("fm 1-2"));

  const Result js = run(base);
  REQUIRE(js.code == 0);
  CHECK(json::parse(js.out)["results"]["records"].size() == 5);
}

TEST_CASE("--out writes the report to a file") {
  const auto path = temp_file("out.json");
  std::filesystem::remove(path);
  const Result r = run({"potts", "--N", "3", "--B", "1", "--out", path.string()});
  CHECK(r.code == 0);
  CHECK(r.out.empty());
  std::ifstream in(path);
  json doc;
  in >> doc;
  CHECK(doc["results"]["z_loop"] == 48.0);
}

TEST_CASE("oracle subcommands") {
  const Result g = run({"oracle", "ground-energy", "--model", model("star3.json")});
  REQUIRE(g.code == 0);
  CHECK(json::parse(g.out)["results"]["energy"].get<double>() == doctest::Approx(-1.5).epsilon(1e-10));
  const Result lm = run({"oracle", "ground-energy", "--model", model("star5.json"), "--sector-lm"});
  REQUIRE(lm.code == 0);
  CHECK(json::parse(lm.out)["results"]["sector_dimension"] == 5);
  CHECK(run({"oracle", "ground-energy", "--model", model("pair_fields.json"), "--sector-lm"}).code == 1);
  const Result leak = run({"oracle", "leakage", "--model", model("star3.json"), "--B", "20", "--epsilon", "0.1"});
  REQUIRE(leak.code == 0);
  CHECK(json::parse(leak.out)["results"]["leakage"].get<double>() < 1.0);
}

TEST_CASE("analyze subcommands") {
  const Result potts = run({"analyze", "potts", "--N", "3", "--B", "1"});
  REQUIRE(potts.code == 0);
  CHECK(json::parse(potts.out)["results"]["relative_error"].get<double>() < 1e-10);

  const Result ce = run({"counterexample", "--N", "6"});
  REQUIRE(ce.code == 0);
  CHECK(json::parse(ce.out)["results"]["ratio"] == 16.0);
  CHECK(json::parse(run({"analyze", "counterexample", "--N", "6", "--graph", "star"}).out)["results"]["ratio"]
            .get<double>() <= 4.0);

  const Result gap = run({"analyze", "gap", "--model", model("star3.json"), "--B", "1", "--lazy"});
  REQUIRE(gap.code == 0);
  CHECK(json::parse(gap.out)["results"]["exactness"]["rational_balance"] == true);

  const Result cong = run({"analyze", "congestion", "--model", model("pair_fields.json"), "--B", "1"});
  REQUIRE(cong.code == 0);
  CHECK(json::parse(cong.out)["results"]["t_rel_le_phi"] == true);

  const Result enc = run({"analyze", "encoding", "--model", model("star3.json"), "--B", "1", "--format", "csv"});
  REQUIRE(enc.code == 0);
  CHECK(enc.out.starts_with("B,alpha,max_ratio,bound,within_bound"));

  const Result topo = run({"analyze", "topology", "--model", model("path4.json"), "--B", "4", "--configs", "200"});
  REQUIRE(topo.code == 0);
  CHECK(json::parse(topo.out)["results"]["fact1_violations"] == 0);

  CHECK(run({"analyze", "gap", "--B", "1"}).code == 2);
  CHECK(run({"analyze", "potts", "--B", "1"}).code == 2);
}
