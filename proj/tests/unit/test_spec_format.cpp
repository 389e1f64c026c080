#include <cmath>
#include <string>
#include <vector>

#include "doctest.h"
#include "levycop/errors.hpp"
#include "levycop/spec_format.hpp"

using namespace levycop;

TEST_CASE("entries") {
  const SpecEntries e = parse_spec_entries("# comment\nobject: copula  # trailing\n\nfamily:clayton\n d : 2\n");
  CHECK(e.size() == 3);
  CHECK(e.at("family") == "clayton");
  CHECK(e.at("d") == "2");
  CHECK_THROWS_AS(parse_spec_entries("object copula\n"), ParseError);
  CHECK_THROWS_AS(parse_spec_entries("d: 2\nd: 3\n"), ParseError);
  CHECK_THROWS_AS(parse_spec_entries("Bad Key: 1\n"), ParseError);
  CHECK_THROWS_AS(parse_spec_entries("family:\n"), ParseError);
}

TEST_CASE("copula specs") {
  const SpecObject c = parse_spec("object: copula\nfamily: clayton\nd: 2\n");
  REQUIRE(std::holds_alternative<CopulaSpec>(c));
  const std::vector<double> half{0.5, 0.5};
  CHECK(copula_eval(std::get<CopulaSpec>(c), half) == doctest::Approx(1.0 / 3.0));
  CHECK(spec_object_name(c) == "copula");
  CHECK(spec_dimension(c) == 2);

  const SpecObject a = parse_spec(
      "object: copula\nfamily: archimedean\nd: 3\ngenerator.side: proper\ngenerator.family: dirac-radial\n"
      "generator.r0: 2\n");
  const CopulaSpec& ac = std::get<CopulaSpec>(a);
  CHECK(ac.generator()->descriptor().params.at("r0") == 2.0);
  CHECK(ac.dimension() == 3);

  CHECK_THROWS_AS(parse_spec("object: copula\nfamily: gaussian\nd: 2\n"), ParseError);
  CHECK_THROWS_AS(parse_spec("object: copula\nfamily: clayton\n"), ParseError);
  CHECK_THROWS_AS(parse_spec("object: copula\nfamily: clayton\nd: two\n"), ParseError);
  CHECK_THROWS_AS(parse_spec("object: copula\nfamily: clayton\nd: 2\ntheta: 3\n"), ParseError);
  CHECK_THROWS_AS(parse_spec("family: clayton\nd: 2\n"), ParseError);
}

TEST_CASE("levy copula specs") {
  const SpecObject f = parse_spec(
      "object: levy-copula\nfamily: archimedean-levy\nd: 2\ngenerator.side: levy\ngenerator.family: clayton\n");
  const std::vector<double> ones{1.0, 1.0};
  CHECK(levy_eval(std::get<LevyCopulaSpec>(f), ones) == doctest::Approx(0.5));

  const SpecObject g = parse_spec(
      "object: levy-copula\nfamily: from-proper\nd: 2\ncopula.family: clayton\n");
  CHECK(levy_eval(std::get<LevyCopulaSpec>(g), ones) == doctest::Approx(0.620114).epsilon(1e-6));

  const SpecObject conv = parse_spec(
      "object: levy-copula\nfamily: archimedean-levy\nd: 2\ngenerator.side: levy\n"
      "generator.family: converted\ngenerator.transform: psi-to-phi\ngenerator.base.side: proper\n"
      "generator.base.family: clayton\n");
  const double c = copula_eval(CopulaSpec::clayton(2), std::vector<double>{1 - std::exp(-1.0), 1 - std::exp(-1.0)});
  CHECK(levy_eval(std::get<LevyCopulaSpec>(conv), ones) == doctest::Approx(-std::log1p(-c)).epsilon(1e-12));
}

TEST_CASE("generators and tables") {
  const SpecObject t = parse_spec(
      "object: generator\nside: proper\nfamily: custom-table\nd: 2\ntable: 0:1, 1:0.25, 2:0\n");
  const ProperGenerator& psi = std::get<ProperGenerator>(t);
  CHECK(psi(0.5) == doctest::Approx(0.625));
  CHECK_THROWS_AS(parse_spec("object: generator\nside: proper\nfamily: custom-table\ntable: 0:1, 1\n"), ParseError);
  CHECK_THROWS_AS(parse_spec("object: generator\nside: sideways\nfamily: clayton\n"), ParseError);
  CHECK(std::holds_alternative<LevyGenerator>(parse_spec("object: generator\nside: levy\nfamily: clayton\n")));
}

TEST_CASE("levy measures") {
  const SpecObject m = parse_spec("object: levy-measure\nform: radial-simplex\nd: 2\nradial.family: power-tail\n");
  const TailIntegralSpec& t = std::get<TailIntegralSpec>(m);
  CHECK(tail_integral(t, std::vector<double>{2.0, 2.0}, TailVariant::u_plus_upper) == doctest::Approx(1.0).epsilon(1e-9));
  const SpecObject a = parse_spec(
      "object: levy-measure\nform: axis\nd: 2\nsigns: +, -\ntruncation: 0.1\nradial.family: power-tail\n");
  const TailIntegralSpec& ax = std::get<TailIntegralSpec>(a);
  CHECK(ax.form() == LevyMeasureForm::axis);
  CHECK(ax.signs() == std::vector<int>{1, -1});
  CHECK(ax.total_mass() == doctest::Approx(20.0));
  CHECK_THROWS_AS(to_spec_text(m), ArgumentError);
}

TEST_CASE("text round trips") {
  const std::vector<std::string> texts{
      "object: copula\nfamily: clayton\nd: 3\n",
      "object: copula\nfamily: frechet-lower\nd: 2\n",
      "object: copula\nfamily: archimedean\nd: 2\ngenerator.side: proper\ngenerator.family: dirac-radial\n"
      "generator.d: 2\ngenerator.r0: 1.5\n",
      "object: levy-copula\nfamily: archimedean-levy\nd: 2\ngenerator.side: levy\ngenerator.family: converted\n"
      "generator.d: 2\ngenerator.transform: psi-to-phi\ngenerator.base.side: proper\n"
      "generator.base.family: clayton\ngenerator.base.d: 2\n",
      "object: levy-copula\nfamily: from-proper\nd: 2\ncopula.family: comonotone\ncopula.d: 2\n",
      "object: copula\nfamily: from-levy\nd: 2\nlevy.family: archimedean-levy\nlevy.d: 2\n"
      "levy.generator.side: levy\nlevy.generator.family: clayton\nlevy.generator.d: 2\n",
      "object: generator\nside: proper\nfamily: custom-table\nd: 2\ntable: 0:1, 1:0.25, 2:0\n",
  };
  for (const auto& text : texts) {
    CAPTURE(text);
    const std::string once = to_spec_text(parse_spec(text));
    CHECK(to_spec_text(parse_spec(once)) == once);
    CHECK(parse_spec_entries(once) == parse_spec_entries(text));
  }
  CHECK_THROWS_AS(to_spec_text(williamson_generator(RadialMeasure::erlang(2), 2)), ArgumentError);
}

TEST_CASE("degenerate images are rejected") {
  CHECK_THROWS_AS(parse_spec("object: copula\nfamily: from-levy\nd: 2\nlevy.family: independence\n"), ParseError);
}
