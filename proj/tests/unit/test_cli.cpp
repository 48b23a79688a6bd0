#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "experiment.hpp"
#include "gibbsgeom/rng.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

fs::path scratch(const std::string& name) {
  fs::path p = fs::temp_directory_path() / ("gibbsgeom_cli_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::stringstream s;
  s << f.rdbuf();
  return s.str();
}

void put(const fs::path& p, const json& j) { std::ofstream(p) << j.dump(2); }

int gibbs_geom(const std::string& args) {
  std::string cmd = std::string(GIBBS_GEOM_EXE) + " " + args + " >/dev/null 2>&1";
  int rc = std::system(cmd.c_str());
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

std::size_t count(const std::string& s, const std::string& needle) {
  std::size_t n = 0;
  for (std::size_t at = s.find(needle); at != std::string::npos; at = s.find(needle, at + 1)) ++n;
  return n;
}

json weight_point(double x, double y, double w) {
  return {{"x", {x, y}}, {"mark", {{"kind", "weight"}, {"value", w}}}};
}

}  // namespace

TEST_CASE("csv quoting and hashing") {
  using namespace gibbsgeom::cli;
  CHECK(csv_field("plain") == "plain");
  CHECK(csv_field("a,b") == "\"a,b\"");
  CHECK(csv_field("say \"hi\"") == "\"say \"\"hi\"\"\"");
  CHECK(csv_field("two\nlines") == "\"two\nlines\"");
  CHECK(csv_number(0.1) == "0.10000000000000001");
  CHECK(csv_number(3) == "3");
  CHECK(fnv1a64("") == 0xcbf29ce484222325ULL);
  CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cULL);
  CHECK(hex64(255) == "00000000000000ff");
}

TEST_CASE("counterexample table through the CLI") {
  fs::path d = scratch("counter");
  put(d / "c.json", {{"kind", "facet-counterexample"}, {"name", "ce"}, {"kFrom", 1}, {"kTo", 40}, {"seed", 3}});
  REQUIRE(gibbs_geom("run --config " + (d / "c.json").string() + " --out-dir " + d.string()) == 0);
  std::istringstream csv(slurp(d / "ce.csv"));
  std::string line;
  std::getline(csv, line);
  CHECK(line == "k,log_lower_bound,cross_pair_count,energy\r");
  std::vector<double> lb;
  while (std::getline(csv, line)) {
    std::istringstream row(line);
    std::string k, v;
    std::getline(row, k, ',');
    std::getline(row, v, ',');
    lb.push_back(std::stod(v));
  }
  REQUIRE(lb.size() == 40);
  json s = json::parse(slurp(d / "ce.json"));
  long k0 = s["increasingFrom"];
  CHECK(k0 < 40);
  for (std::size_t i = static_cast<std::size_t>(k0); i < lb.size(); ++i) CHECK(lb[i] > lb[i - 1]);
  CHECK(lb.back() > 1e3);
  for (const auto& g : s["gammaN"]) CHECK(g["energy"] == g["expected"]);
}

TEST_CASE("laguerre build, manifests and rendering") {
  fs::path d = scratch("lag");
  json pts = json::array();
  gibbsgeom::StreamRng r(6, 1);
  for (int i = 0; i < 50; ++i) pts.push_back(weight_point(r.uniform(-1, 1), r.uniform(-1, 1), r.uniform(0.05, 0.2)));
  put(d / "l.json", {{"kind", "laguerre-build"}, {"name", "lag"}, {"configuration", pts}});
  REQUIRE(gibbs_geom("run --config " + (d / "l.json").string() + " --out-dir " + d.string()) == 0);
  json sum = json::parse(slurp(d / "lag_summary.json"));
  CHECK(sum["normal"] == true);
  CHECK(sum["gp1"] == true);
  CHECK(sum["generators"] == 50);
  std::string svg1 = slurp(d / "lag.svg"), man1 = slurp(d / "manifest.json");
  CHECK(count(svg1, "<path id=\"cell") == 50 - sum["emptyCells"].size());
  REQUIRE(gibbs_geom("run --config " + (d / "l.json").string() + " --out-dir " + d.string()) == 0);
  CHECK(slurp(d / "lag.svg") == svg1);
  CHECK(slurp(d / "manifest.json") == man1);
  json m = json::parse(man1);
  CHECK(m["tool"] == "gibbs-geom");
  for (const auto& o : m["outputs"])
    CHECK(o["fnv1a64"] == gibbsgeom::cli::hex64(gibbsgeom::cli::fnv1a64(slurp(d / o["path"].get<std::string>()))));

  REQUIRE(gibbs_geom("render --in " + (d / "lag.json").string() + " --out " + (d / "again.svg").string()) == 0);
  CHECK(slurp(d / "again.svg") == svg1);

  json one = json::array({weight_point(0.25, 0.5, 1)});
  put(d / "cfg_one.json", {{"kind", "laguerre-build"}, {"name", "one"}, {"configuration", one}});
  REQUIRE(gibbs_geom("run --config " + (d / "cfg_one.json").string() + " --out-dir " + d.string()) == 0);
  CHECK(count(slurp(d / "one.svg"), "<path id=\"cell") == 1);

  json tri = json::array({weight_point(0, 0, 1), weight_point(4, 0, 1), weight_point(-2, 3.4, 1), weight_point(-2, -3.6, 1)});
  put(d / "cfg_tri.json", {{"kind", "laguerre-build"}, {"name", "tri"}, {"configuration", tri}});
  REQUIRE(gibbs_geom("run --config " + (d / "cfg_tri.json").string() + " --out-dir " + d.string()) == 0);
  REQUIRE(gibbs_geom("render --in " + (d / "tri.json").string() + " --out " + (d / "rm.svg").string() + " --remove 2") == 0);
  std::string rm = slurp(d / "rm.svg");
  CHECK(count(rm, "<path id=\"cell") == 3);
  CHECK(count(rm, "stroke-dasharray") >= 1);
  // generators are stored sorted by location; index 0 is the unbounded cell at (-2,-3.6)
  CHECK(gibbs_geom("render --in " + (d / "tri.json").string() + " --out " + (d / "x.svg").string() + " --remove 0") == 1);
  CHECK(gibbs_geom("render --in " + (d / "tri.json").string() + " --out " + (d / "x.svg").string() + " --remove 9") == 2);
}

TEST_CASE("facet energy, validation and exit codes") {
  fs::path d = scratch("facet");
  put(d / "f.json", {{"kind", "facet-energy"}, {"name", "fe"}, {"configuration", json::array()}});
  REQUIRE(gibbs_geom("run --config " + (d / "f.json").string() + " --out-dir " + d.string()) == 0);
  CHECK(json::parse(slurp(d / "fe.json"))["energy"] == 0);

  put(d / "bad.json", {{"kind", "facet-energy"}, {"configuration", json::array()}, {"colour", "red"}});
  CHECK(gibbs_geom("validate --config " + (d / "bad.json").string()) == 2);
  CHECK(gibbs_geom("run --config " + (d / "bad.json").string() + " --out-dir " + d.string()) == 2);
  put(d / "kind.json", {{"kind", "nope"}});
  CHECK(gibbs_geom("validate --config " + (d / "kind.json").string()) == 2);
  put(d / "win.json", {{"kind", "poisson"}, {"window", {{"kind", "box"}, {"lower", {0, 0}}, {"upper", {1, 1}}, {"n", 3}}}, {"z", 1},
                       {"marks", {{"kind", "weight"}, {"law", {{"kind", "uniform"}, {"lo", 0.1}, {"hi", 1}}}}}});
  CHECK(gibbs_geom("validate --config " + (d / "win.json").string()) == 2);
  CHECK(gibbs_geom("frobnicate") == 2);
  CHECK(gibbs_geom("validate --config " + (d / "missing.json").string()) == 2);
  CHECK_THROWS_AS(gibbsgeom::cli::validate_experiment({{"kind", "poisson"}}), gibbsgeom::cli::SchemaError);

  json pois = {{"kind", "poisson"}, {"name", "p"}, {"window", {{"kind", "lambda_n"}, {"n", 1}}}, {"z", 5},
               {"marks", {{"kind", "weight"}, {"law", {{"kind", "uniform"}, {"lo", 0.1}, {"hi", 1}}}}}};
  gibbsgeom::cli::validate_experiment(pois);
  auto a = gibbsgeom::cli::run_experiment(pois, {}), b = gibbsgeom::cli::run_experiment(pois, {});
  CHECK(a.artifacts[1].content == b.artifacts[1].content);
  gibbsgeom::cli::RunOptions o;
  o.seed_override = 99;
  CHECK(gibbsgeom::cli::effective_config(pois, o)["seed"] == 99);
  auto c = gibbsgeom::cli::run_experiment(pois, o);
  CHECK(c.artifacts[1].content != a.artifacts[1].content);
}

TEST_CASE("gibbs chain outputs") {
  fs::path d = scratch("chain");
  json cfg = {{"kind", "gibbs-chain"}, {"name", "ch"}, {"seed", 5},
              {"window", {{"kind", "lambda_n"}, {"n", 1}}}, {"z", 2}, {"model", {{"kind", "zero"}}},
              {"marks", {{"kind", "weight"}, {"law", {{"kind", "uniform"}, {"lo", 0.1}, {"hi", 1}}}}},
              {"chain", {{"steps", 500}, {"burnin", 100}, {"thinning", 10}}}};
  put(d / "g.json", cfg);
  REQUIRE(gibbs_geom("run --config " + (d / "g.json").string() + " --out-dir " + d.string()) == 0);
  std::string trace = slurp(d / "ch_trace.csv");
  CHECK(trace.rfind("step,moveType,accepted,nPoints,energy\r\n", 0) == 0);
  CHECK(count(trace, "\r\n") == 501);
  json cp = json::parse(slurp(d / "ch_checkpoint.json"));
  CHECK(cp["rng"]["seed"] == 5);
  CHECK(cp.contains("configuration"));
  CHECK(json::parse(slurp(d / "ch.json"))["samples"] == 40);
}
