#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "json.hpp"
#include "levycop/cli.hpp"
#include "levycop/spec_format.hpp"

using namespace levycop;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "levycop");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string write_spec(const std::string& name, const std::string& text) {
  const auto dir = std::filesystem::temp_directory_path() / "levycop_cli_test";
  std::filesystem::create_directories(dir);
  const auto path = dir / name;
  std::ofstream(path) << text;
  return path.string();
}

std::vector<std::string> data_lines(const std::string& text) {
  std::vector<std::string> lines;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line[0] != '#') lines.push_back(line);
  }
  return lines;
}

const std::string kClayton = "object: copula\nfamily: clayton\nd: 2\n";
const std::string kReciprocal =
    "object: levy-copula\nfamily: archimedean-levy\nd: 2\ngenerator.side: levy\ngenerator.family: clayton\n";
const std::string kMeasure = "object: levy-measure\nform: radial-simplex\nd: 1\nradial.family: power-tail\n";

}  // namespace

TEST_CASE("eval") {
  const std::string clayton = write_spec("clayton.spec", kClayton);
  const Run r = run({"eval", "--spec", clayton, "--grid", "0.2:0.8:3"});
  CHECK(r.code == 0);
  const auto lines = data_lines(r.out);
  REQUIRE(lines.size() == 4);
  CHECK(lines[0] == "x1,x2,value");
  CHECK(lines[2].rfind("0.5,0.5,0.3333333333333333", 0) == 0);

  const Run product = run({"eval", "--spec", clayton, "--grid", "0.2:0.8:3,0.1:0.9:2"});
  CHECK(data_lines(product.out).size() == 7);
  CHECK(run({"eval", "--spec", clayton, "--grid", "0.2:0.8:3", "--grid", "0.1:0.9:2"}).out == product.out);

  const Run levy = run({"eval", "--spec", write_spec("rec.spec", kReciprocal), "--grid", "1:1:1", "--format", "json"});
  CHECK(levy.code == 0);
  const auto doc = nlohmann::json::parse(levy.out);
  CHECK(doc["values"][0].get<double>() == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(doc["grid"][0] == nlohmann::json::array({1.0, 1.0}));
  CHECK(doc["violations"].empty());
}

TEST_CASE("usage and parse errors exit 2") {
  const std::string bad = write_spec("bad.spec", "object: copula\nfamily: nonsense\nd: 2\n");
  CHECK(run({"eval", "--spec", bad, "--grid", "0:1:3"}).code == 2);
  CHECK(run({"eval", "--spec", "/nonexistent/file.spec", "--grid", "0:1:3"}).code == 2);
  const std::string clayton = write_spec("clayton.spec", kClayton);
  CHECK(run({"eval", "--spec", clayton, "--grid", "0:1"}).code == 2);
  CHECK(run({"eval", "--spec", clayton, "--grid", "0:1:3,0:1:3,0:1:3"}).code == 2);
  CHECK(run({"eval", "--spec", clayton, "--grid", "0:2:3"}).code == 2);
  CHECK(run({"eval", "--spec", clayton, "--grid", "0:1:3", "--format", "xml"}).code == 2);
  CHECK(run({"frobnicate"}).code == 2);
  CHECK(run({}).code == 2);
  CHECK(run({"verify", "--suite", "nonsense"}).code == 2);
  CHECK(run({"sample", "--spec", clayton, "--n", "0"}).code == 2);
  CHECK(run({"simulate", "--spec", write_spec("m.spec", kMeasure), "--n", "0"}).code == 2);
  CHECK(run({"--help"}).code == 0);
}

TEST_CASE("convert") {
  const Run r = run({"convert", "--spec", write_spec("clayton.spec", kClayton)});
  REQUIRE(r.code == 0);
  CHECK(r.out.find("# roundtrip-residual: ") != std::string::npos);
  const SpecObject levy = parse_spec(r.out);
  REQUIRE(std::holds_alternative<LevyCopulaSpec>(levy));
  const std::vector<double> ones{1.0, 1.0};
  CHECK(levy_eval(std::get<LevyCopulaSpec>(levy), ones) == doctest::Approx(0.6201145069582775).epsilon(1e-12));

  const Run back = run({"convert", "--spec", write_spec("levy.spec", r.out), "--format", "json"});
  REQUIRE(back.code == 0);
  const auto doc = nlohmann::json::parse(back.out);
  CHECK(doc["roundtrip_residual"].get<double>() <= 1e-12);
  CHECK(parse_spec_entries(doc["converted"].get<std::string>()) == parse_spec_entries(to_spec_text(parse_spec(kClayton))));

  const Run deg = run({"convert", "--spec", write_spec("ind.spec", "object: levy-copula\nfamily: independence\nd: 2\n")});
  CHECK(deg.code == 0);
  CHECK(deg.out.find("degenerate") != std::string::npos);

  const Run rec = run({"convert", "--spec", write_spec("rec.spec", kReciprocal)});
  CHECK(rec.code == 0);
  CHECK(std::holds_alternative<CopulaSpec>(parse_spec(rec.out)));

  CHECK(run({"convert", "--spec", write_spec("clayton.spec", kClayton), "--to", "proper"}).code == 2);
  CHECK(run({"convert", "--spec", write_spec("m.spec", kMeasure)}).code == 2);
}

TEST_CASE("sample and simulate are deterministic") {
  const std::string clayton = write_spec("clayton.spec", kClayton);
  const Run a = run({"sample", "--spec", clayton, "--n", "100", "--seed", "7"});
  const Run b = run({"sample", "--spec", clayton, "--n", "100", "--seed", "7"});
  CHECK(a.code == 0);
  CHECK(a.out == b.out);
  CHECK(a.out.rfind("# seed=7 n=100 family=clayton\nu1,u2\n", 0) == 0);
  CHECK(data_lines(a.out).size() == 101);
  CHECK(run({"sample", "--spec", clayton, "--n", "100", "--seed", "8"}).out != a.out);

  const std::string measure = write_spec("m.spec", kMeasure);
  const Run s = run({"simulate", "--spec", measure, "--n", "10000", "--seed", "3", "--eps", "0.1", "--format", "json"});
  REQUIRE(s.code == 0);
  const auto doc = nlohmann::json::parse(s.out);
  CHECK(doc["expected_count"].get<double>() == doctest::Approx(10.0));
  CHECK(std::abs(doc["mean_count"].get<double>() - 10.0) <= 3.0 * std::sqrt(10.0 / 10000));
  const Run c1 = run({"simulate", "--spec", measure, "--n", "50", "--seed", "3", "--eps", "0.1"});
  const Run c2 = run({"simulate", "--spec", measure, "--n", "50", "--seed", "3", "--eps", "0.1"});
  CHECK(c1.out == c2.out);
  CHECK(c1.out.find("mean-count=") != std::string::npos);
  // No truncation anywhere.
  CHECK(run({"simulate", "--spec", measure, "--n", "10"}).code == 2);
}

TEST_CASE("verify") {
  const Run ok = run({"verify", "--suite", "roundtrip"});
  CHECK(ok.code == 0);
  const auto doc = nlohmann::json::parse(ok.out);
  CHECK(doc["pass"] == true);
  for (const auto& check : doc["checks"]) {
    CHECK(check.contains("identity"));
    CHECK(check.contains("grid"));
    CHECK(check.contains("target"));
    CHECK(check.contains("estimate"));
    CHECK(check.contains("se"));
    CHECK(check.contains("pass"));
  }
  // An impossible tolerance makes a deterministic suite fail with exit 1.
  const Run strict = run({"verify", "--suite", "williamson", "--tol", "0"});
  CHECK(strict.code == 1);
  CHECK(strict.err.find("failed: ") != std::string::npos);
  CHECK(run({"verify", "--suite", "iid-records", "--n", "2000", "--seed", "5"}).code == 0);
}

TEST_CASE("output file") {
  const auto path = std::filesystem::temp_directory_path() / "levycop_cli_test" / "out.csv";
  std::filesystem::remove(path);
  const Run r = run({"eval", "--spec", write_spec("clayton.spec", kClayton), "--grid", "0.5:0.5:1", "--out",
                     path.string()});
  CHECK(r.code == 0);
  CHECK(r.out.empty());
  std::ifstream in(path);
  std::stringstream content;
  content << in.rdbuf();
  CHECK(data_lines(content.str()).size() == 2);
}
