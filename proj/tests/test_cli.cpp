#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "fibpow/commands.hpp"
#include "fibpow/serialize.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace fibpow;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out;
  std::string log;
};

Run cli(std::vector<std::string> args) {
  args.insert(args.begin(), "fibpow");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, log;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, log);
  return {code, out.str(), log.str()};
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("fibpow_cli_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

// Copy of the golden directory with one line of published.txt replaced.
fs::path tampered_golden(const std::string& key, const std::string& value) {
  const fs::path dir = scratch("golden_" + key);
  for (const auto& e : fs::directory_iterator(FIBPOW_GOLDEN_DIR)) fs::copy(e.path(), dir / e.path().filename());
  std::ifstream in(dir / "published.txt");
  std::ostringstream text;
  std::string line;
  while (std::getline(in, line)) {
    if (line.rfind(key + ":", 0) == 0) line = key + ": " + value;
    text << line << "\n";
  }
  in.close();
  std::ofstream(dir / "published.txt") << text.str();
  return dir;
}

PipelineReport sampled_report(int eq) {
  RunConfig config;
  config.spot_check = 20;
  config.seed = 1;
  return run_pipeline(eq, pipeline_options(eq, config, Golden::load()));
}

}  // namespace

TEST_CASE("artifacts round-trip through JSON") {
  const SolutionSet s = enumerate_eq2();
  CHECK(parse<SolutionSet>(emit(s)) == s);
  const SolutionSet e1 = enumerate_eq1(30, 20);
  CHECK(parse<SolutionSet>(emit(e1)) == e1);

  const ChainReport c = verify_bound_chain(1);
  const ChainReport back = parse<ChainReport>(emit(c));
  CHECK(back == c);
  CHECK(emit(back) == emit(c));

  const CFExpansion cf = cf_expand(gamma_ball, 40);
  CHECK(parse<CFExpansion>(emit(cf)) == cf);

  const StepResult r = run_step(step_spec(1, "S1"), SweepOptions{});
  REQUIRE(r.single);
  CHECK(parse<Reduced>(emit(*r.single)) == *r.single);
  CHECK(parse<StepResult>(emit(r)) == r);

  const PipelineReport p = sampled_report(2);
  CHECK(parse<PipelineReport>(emit(p)) == p);
}

TEST_CASE("solution listings") {
  const SolutionSet s = enumerate_eq1();
  const std::string csv = solutions_csv(s);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 79);
  CHECK(csv.find("18,6,11,9,5,2592") != std::string::npos);
  CHECK(solutions_text(s).find("2592") != std::string::npos);
}

TEST_CASE("golden data") {
  const Golden g = Golden::load();
  CHECK(g.integer("box.bound") == 360);
  CHECK(g.integers("eq1.reduce.n12") == std::vector<Integer>{334, 324, 315, 334});
  CHECK(g.decimal("eq2.chain.final") == parse_decimal("4.2e62"));
  CHECK_FALSE(g.has("eq3.count_total"));
  CHECK_THROWS_AS(g.integer("eq3.count_total"), GoldenError);
  const CaseTable t = g.reduce_table(1);
  CHECK(t[2][3] == 334);
  CHECK(g.exceptional(2).at("S7").size() == 9);
  CHECK(g.exceptional(1).at("S4").front() == Tuple{0, -1, 2});
  CHECK_THROWS_AS(Golden::load("/nonexistent/golden"), GoldenError);
}

TEST_CASE("tuple notation") {
  CHECK(parse_tuple("(0,1,10)") == Tuple{0, 1, 10});
  CHECK(parse_tuple("(6)") == Tuple{6, -1, -1});
  CHECK(parse_tuple("(2,0)") == Tuple{2, 0, -1});
  CHECK(format_tuple({7, 8, -1}) == "(7,8)");
  CHECK_THROWS_AS(parse_tuple("0,1"), GoldenError);
  CHECK_THROWS_AS(parse_tuple("(a)"), GoldenError);
  CHECK_THROWS_AS(parse_tuple("(1,2,3,4)"), GoldenError);
}

TEST_CASE("published checks flag a changed report") {
  const Golden g = Golden::load();
  PipelineReport p = sampled_report(1);
  CHECK(pipeline_mismatches(p, g).empty());
  PipelineReport worse = p;
  worse.final_bound = 400;
  CHECK_FALSE(pipeline_mismatches(worse, g).empty());
  PipelineReport open = p;
  open.closed = false;
  CHECK_FALSE(pipeline_mismatches(open, g).empty());
}

TEST_CASE("commands and exit codes") {
  Run r = cli({"cf", "--terms", "13", "--format", "text"});
  CHECK(r.code == kExitOk);
  CHECK(r.out.find("[0,1,2,3,1,2,3,2,4,2,1,2,11]") != std::string::npos);

  r = cli({"enumerate", "--equation", "2", "--format", "csv"});
  CHECK(r.code == kExitOk);
  CHECK(std::count(r.out.begin(), r.out.end(), '\n') == 117);

  r = cli({"bounds", "--equation", "1"});
  CHECK(r.code == kExitOk);
  CHECK(parse<ChainReport>(r.out).passed());

  r = cli({"reduce", "--equation", "1", "--step", "S4", "--params", "0,-1,2"});
  CHECK(r.code == kExitOk);
  CHECK(r.out.find("218") != std::string::npos);

  CHECK(cli({"enumerate", "--equation", "3"}).code != kExitOk);
  CHECK(cli({"frobnicate"}).code != kExitOk);
  CHECK(cli({"cf", "--precision", "64"}).code != kExitOk);
  CHECK(cli({"reduce", "--step", "S9"}).code != kExitOk);
}

TEST_CASE("output files") {
  const fs::path dir = scratch("out");
  const std::string path = (dir / "eq1.json").string();
  Run r = cli({"enumerate", "--equation", "1", "--out", path});
  CHECK(r.code == kExitOk);
  std::ifstream in(path);
  std::stringstream text;
  text << in.rdbuf();
  CHECK(parse<SolutionSet>(text.str()).count_total == 78);
  CHECK(cli({"enumerate", "--out", (dir / "missing" / "x.json").string()}).code == kExitMismatch);
  fs::remove_all(dir);
}

TEST_CASE("verification against tampered golden data fails") {
  const fs::path dir = tampered_golden("eq1.count_total", "77");
  CHECK(cli({"enumerate", "--equation", "1", "--golden-dir", dir.string()}).code == kExitMismatch);
  CHECK(cli({"verify-all", "--spot-check", "20", "--golden-dir", dir.string()}).code == kExitMismatch);
  fs::remove_all(dir);
  const fs::path chain = tampered_golden("eq2.chain.t12", "6.93e39 4.26e26 2.61e13");
  CHECK(cli({"bounds", "--equation", "2", "--golden-dir", chain.string()}).code == kExitMismatch);
  fs::remove_all(chain);
}
