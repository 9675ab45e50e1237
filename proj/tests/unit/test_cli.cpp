#include "doctest.h"
#include "cli.hpp"

#include <cstdlib>
#include <sstream>

using namespace hyperheight;
using namespace hyperheight::cli;

namespace {

struct Result {
  int code;
  std::string out, err;
};

Result call(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

const std::string kGenus3 = "25,-13,11,-15,0,0,0,1";
const std::string kData = HYPERHEIGHT_DATA_DIR;

std::string node_yaml(const std::string& matrix, const std::string& extra = "") {
  return "schema: 1\nprime: 11\ncomponents:\n  - {id: c0, multiplicity: 1}\n  - {id: c1, multiplicity: 1}\n"
         "matrix: " +
         matrix + "\ninfinity_component: c0\n" + extra;
}

}  // namespace

TEST_CASE("curve and divisor parsing") {
  auto C = parse_curve(kGenus3);
  CHECK(C.genus == 3);
  CHECK(parse_curve("[11, -10, 2, 1]").genus == 1);
  CHECK_THROWS_AS(parse_curve(""), ValidationError);
  CHECK_THROWS_AS(parse_curve("1,2,x"), ValidationError);
  CHECK_THROWS_AS(parse_curve("1,0.5,1"), ValidationError);
  CHECK_THROWS_AS(parse_curve("1,0,0,2"), ValidationError);  // not monic

  CHECK(parse_divisor("1,3", C) == point_divisor(1, 3, C));
  CHECK(parse_divisor("(1,3)", C) == point_divisor(1, 3, C));
  auto sum = cantor_add(point_divisor(1, 3, C), point_divisor(0, -5, C), C);
  CHECK(parse_divisor("(1,3) + (0,-5)", C) == sum);
  CHECK(parse_divisor("[" + std::string("-1,1") + "];[3]", C) == point_divisor(1, 3, C));
  CHECK_THROWS_AS(parse_divisor("1,4", C), ValidationError);
  CHECK_THROWS_AS(parse_divisor("(1,3)(0,-5)", C), ValidationError);
  CHECK_THROWS_AS(parse_divisor("(1,3", C), ValidationError);
  CHECK_THROWS_AS(parse_divisor("[1,1];[1];[2]", C), ValidationError);
  CHECK_THROWS_AS(parse_divisor("1/0,3", C), ValidationError);
}

TEST_CASE("complex parsing") {
  PrecisionScope s(30);
  auto is = [](const Complex& z, double re, double im) {
    return abs(z - Complex(Real(re), Real(im))) < Real("1e-25");
  };
  CHECK(is(parse_complex("i"), 0, 1));
  CHECK(is(parse_complex("-i"), 0, -1));
  CHECK(is(parse_complex("2"), 2, 0));
  CHECK(is(parse_complex("3i"), 0, 3));
  CHECK(is(parse_complex("0.5-1.25i"), 0.5, -1.25));
  CHECK(is(parse_complex("1.25e-1+i"), 0.125, 1));
  CHECK(is(parse_complex(" 1 + 2i "), 1, 2));
  CHECK_THROWS_AS(parse_complex("abc"), ValidationError);
  CHECK_THROWS_AS(parse_complex(""), ValidationError);
}

TEST_CASE("reduction files: shipped documents") {
  auto C = parse_curve(kGenus3);
  auto g3 = load_reduction_file(kData + "/reduction/genus3.yaml", &C);
  REQUIRE(g3.size() == 2);
  CHECK(g3.count(Integer(255659)));
  CHECK(g3.at(Integer(84629003)).components.size() == 1);
  CHECK(g3.at(Integer(84629003)).matrix == std::vector<std::vector<long>>{{0}});

  auto node = load_reduction_file(kData + "/reduction/node_example.yaml");
  REQUIRE(node.size() == 1);
  const auto& d = node.at(Integer(11));
  CHECK(d.components.size() == 2);
  CHECK(d.assignments.at("E1") == "c0");
  // The fixture value: fibral 1/2 with no horizontal part.
  auto G = make_curve(Poly{0, 1} * Poly{-1, 1} * Poly{-2, 1} * Poly{-3, 1} * Poly{-4, 1} + Poly{1, 2, 1});
  FormalDivisor D{{{DivisorTerm::Kind::Point, Poly{0, 1}, Poly{1}, 1}}, -1};
  FormalDivisor E{{{DivisorTerm::Kind::Point, Poly{-1, 1}, Poly{2}, 1}, {DivisorTerm::Kind::Point, Poly{-2, 1}, Poly{3}, -1}},
                  0};
  auto r = local_nonarch_pairing(D, E, G, Integer(11), &d);
  CHECK(r.horizontal == 0);
  CHECK(r.fibral == Rational(1, 2));
  // Cross-referenced against a curve where 11 is good.
  CHECK_THROWS_WITH_AS(load_reduction_file(kData + "/reduction/node_example.yaml", &C),
                       doctest::Contains("prime mismatch"), ValidationError);
}

TEST_CASE("reduction files: schema violations") {
  CHECK(parse_reduction_yaml(node_yaml("[[-2, 2], [2, -2]]")).size() == 1);
  CHECK_THROWS_WITH_AS(parse_reduction_yaml(node_yaml("[[-2, 2], [1, -2]]")),
                       doctest::Contains("intersection matrix not symmetric"), ValidationError);
  CHECK_THROWS_WITH_AS(parse_reduction_yaml(node_yaml("[[-2, 2], [2, -2]]", "colour: red\n")),
                       doctest::Contains("unknown field 'colour'"), ValidationError);
  CHECK_THROWS_WITH_AS(parse_reduction_yaml("schema: 2\nprime: 3\ncomponents: [{id: a}]\nmatrix: [[0]]\n"),
                       doctest::Contains("unsupported schema"), ValidationError);
  CHECK_THROWS_WITH_AS(parse_reduction_yaml("prime: 3\ncomponents: [{id: a}]\nmatrix: [[0]]\n"),
                       doctest::Contains("missing field 'schema'"), ValidationError);
  CHECK_THROWS_WITH_AS(parse_reduction_yaml("schema: 1\nprime: 3\ncomponents: [{id: a, mult: 1}]\nmatrix: [[0]]\n"),
                       doctest::Contains("unknown field 'mult'"), ValidationError);
  CHECK_THROWS_WITH_AS(parse_reduction_yaml("schema: 1\nprime: 3\ncomponents: [{id: a}]\nmatrix: [[x]]\n"),
                       doctest::Contains("integer"), ValidationError);
  CHECK_THROWS_WITH_AS(parse_reduction_yaml("schema: 1\nprime: 4\ncomponents: [{id: a}]\nmatrix: [[0]]\n"),
                       doctest::Contains("not prime"), ValidationError);
  CHECK_THROWS_WITH_AS(parse_reduction_yaml(node_yaml("[[-2, 2], [2, -2]]", "assignments: {D0: c7}\n")),
                       doctest::Contains("unknown component"), ValidationError);
  CHECK_THROWS_WITH_AS(parse_reduction_yaml(node_yaml("[[-1, 1], [1, -1]]") + "---\n" + node_yaml("[[-2, 2], [2, -2]]")),
                       doctest::Contains("second document"), ValidationError);
  CHECK_THROWS_WITH_AS(parse_reduction_yaml("schema: 1\nprime: 3\ncomponents: [a\n"), doctest::Contains("reduction"),
                       ValidationError);
  CHECK_THROWS_AS(load_reduction_file("/nonexistent/file.yaml"), ValidationError);
  CHECK(parse_reduction_yaml("").empty());
}

TEST_CASE("height command") {
  auto r = call({"height", "--curve", kGenus3, "--point", "1,3", "--prec", "40"});
  CHECK(r.code == 0);
  CHECK(r.out.find("height           1.77668619736845091658630292877") != std::string::npos);
  // digits - 5 significant places.
  CHECK(r.out.find("1.77668619736845091658630292877495860") == std::string::npos);
  auto with_data = call({"height", "--curve", kGenus3, "--point", "1,3", "--reduction",
                         kData + "/reduction/genus3.yaml", "--prec", "20"});
  CHECK(with_data.code == 0);
  CHECK(with_data.out.find("1.77668619736845") != std::string::npos);
}

TEST_CASE("height JSON is deterministic and round-trips") {
  std::vector<std::string> args = {"height", "--curve", kGenus3, "--point", "1,3", "--point2", "0,-5",
                                   "--prec", "20", "--json", "--seed", "4"};
  auto a = call(args);
  auto b = call(args);
  REQUIRE(a.code == 0);
  CHECK(a.out == b.out);
  auto j = nlohmann::json::parse(a.out);
  CHECK(j.dump(2) + "\n" == a.out);
  CHECK(j["heights"].size() == 2);
  CHECK(j["heights"][0]["lambda"].is_string());
  CHECK(j["heights"][0]["local_terms"][0]["prime"] == "2");
  CHECK(j["heights"][0]["local_terms"][0]["horizontal"].is_string());
  CHECK(std::stod(j["parallelogram_residual"].get<std::string>()) < 1e-15);
  CHECK(std::stod(j["heights"][1]["total_height"].get<std::string>()) == doctest::Approx(1.94307).epsilon(1e-5));
}

TEST_CASE("pair, regulator, places, periods, theta") {
  auto p = call({"pair", "--curve", kGenus3, "--point", "1,3", "--point2", "0,-5", "--prec", "20", "--json"});
  REQUIRE(p.code == 0);
  double pairing = std::stod(nlohmann::json::parse(p.out)["pairing"].get<std::string>());
  CHECK(pairing == doctest::Approx((4.35844 - 1.77668 - 1.94307) / 2).epsilon(1e-4));

  auto rg = call({"regulator", "--curve", kGenus3, "--point", "1,3", "--point", "0,-5", "--prec", "20"});
  CHECK(rg.code == 0);
  CHECK(rg.out.find("regulator") != std::string::npos);

  auto pl = call({"places", "--curve", kGenus3, "--point", "1,3", "--point2", "0,-5"});
  REQUIRE(pl.code == 0);
  auto places = nlohmann::json::parse(pl.out);
  std::vector<std::string> primes;
  for (const auto& r : places) primes.push_back(r["prime"]);
  CHECK(std::find(primes.begin(), primes.end(), "2") != primes.end());
  CHECK(std::find(primes.begin(), primes.end(), "3") != primes.end());

  auto pe = call({"periods", "--curve", "0,-1,0,1", "--prec", "20", "--json"});
  REQUIRE(pe.code == 0);
  auto pj = nlohmann::json::parse(pe.out);
  CHECK(pj["genus"] == 1);
  CHECK(std::stod(pj["period_matrix"][0][0][1].get<std::string>()) == doctest::Approx(1.0));

  auto th = call({"theta", "--dim", "1", "--tau", "i", "--z", "0"});
  CHECK(th.code == 0);
  CHECK(th.out.find("1.0864348112") != std::string::npos);
  auto th2 = call({"theta", "--dim", "2", "--tau", "i,0.5;0.5,2i", "--prec", "20"});
  CHECK(th2.code == 0);
}

TEST_CASE("exit codes and messages") {
  auto bad_point = call({"height", "--curve", kGenus3, "--point", "1,4"});
  CHECK(bad_point.code == 2);
  CHECK(bad_point.err.find("not on the curve") != std::string::npos);
  CHECK(bad_point.err.find('\n') == bad_point.err.size() - 1);
  CHECK(call({"height", "--curve", kGenus3, "--point", "1,3", "--frobnicate"}).code == 2);
  CHECK(call({"height", "--curve", "1,x", "--point", "1,3"}).code == 2);
  CHECK(call({}).code == 2);
  CHECK(call({"theta", "--dim", "1", "--tau", "-i"}).code == 3);
  CHECK(call({"periods", "--curve", "-2,400000,-20000000000,0,0,1", "--prec", "30"}).code == 3);
  CHECK(call({"height", "--curve", kGenus3, "--point", "1,3", "--prec", "10"}).code == 2);
  CHECK(call({"height", "--curve", kGenus3, "--point", "1,3", "--reduction", "/nonexistent.yaml"}).code == 2);
  CHECK(call({"pair", "--curve", kGenus3, "--point", "1,3"}).code == 2);
  CHECK(call({"--help"}).code == 0);
}

TEST_CASE("precision from the environment") {
  setenv("HYPERHEIGHT_PREC", "18", 1);
  auto r = call({"theta", "--dim", "1", "--tau", "i"});
  CHECK(r.code == 0);
  CHECK(r.out.find("1.086434811213 ") != std::string::npos);
  CHECK(r.out.find("1.0864348112133") == std::string::npos);
  setenv("HYPERHEIGHT_PREC", "many", 1);
  CHECK(call({"theta", "--dim", "1", "--tau", "i"}).code == 2);
  unsetenv("HYPERHEIGHT_PREC");
}

TEST_CASE("selfcheck passes") {
  auto r = call({"selfcheck", "--prec", "25"});
  CHECK(r.code == 0);
  CHECK(r.out.find("FAIL") == std::string::npos);
}
