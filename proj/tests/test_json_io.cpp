#include <catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>

#include "generators.hpp"
#include "specseq/json_io.hpp"

using namespace specseq;
using json::Json;

namespace {

const LocalizationRing Z = LocalizationRing::integers();
const std::string fixture_dir = SPECSEQ_FIXTURE_DIR;

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error raised");
  return ErrorCode::InvalidInput;
}

// Dumps, re-parses and dumps again; the two texts must agree byte for byte.
std::string stable_dump(const Json& j) {
  const std::string text = j.dump(2);
  REQUIRE(Json::parse(text).dump(2) == text);
  return text;
}

}  // namespace

TEST_CASE("integers", "[json]") {
  CHECK(json::encode(Integer(-7)) == Json(-7));
  const Integer big = Integer(1) << 80;
  CHECK(json::encode(big) == Json(big.str()));
  CHECK(json::decode_integer(Json(big.str())) == big);
  CHECK(json::decode_integer(Json(12)) == 12);
  CHECK_THROWS_AS(json::decode_integer(Json("12x")), json::SchemaError);
  CHECK_THROWS_AS(json::decode_integer(Json(1.5)), json::SchemaError);
  CHECK_THROWS_AS(json::decode_integer(Json::array()), json::SchemaError);
}

TEST_CASE("matrices", "[json]") {
  const IntMatrix m = int_matrix({{1, -2}, {0, 5}});
  CHECK(json::encode(m).dump() == "[[1,-2],[0,5]]");
  CHECK(json::decode_matrix(json::encode(m), 2, 2) == m);
  CHECK(code_of([&] { json::decode_matrix(json::encode(m), 2, 3); }) == ErrorCode::ShapeMismatch);
  CHECK(code_of([] { json::decode_matrix(Json::parse("[[1],[2,3]]"), 2, 1); }) == ErrorCode::ShapeMismatch);
  CHECK(json::decode_matrix(Json::array(), 0, 3).cols() == 3);
  CHECK(json::decode_matrix(Json::array(), 2, 0).rows() == 2);
  CHECK_THROWS_AS(json::decode_matrix(Json("x"), 1, 1), json::SchemaError);
}

TEST_CASE("rings and modules", "[json]") {
  CHECK(json::encode(Z) == Json("Z"));
  CHECK(json::encode(LocalizationRing::rationals()) == Json("Q"));
  const auto r = LocalizationRing::inverting({2, 3});
  CHECK(json::encode(r).dump() == R"({"invert":[2,3]})");
  CHECK(json::decode_ring(json::encode(r)) == r);
  CHECK_THROWS_AS(json::decode_ring(Json("R")), json::SchemaError);
  CHECK(code_of([] { json::decode_ring(Json::parse(R"({"invert":[4]})")); }) == ErrorCode::InvalidInput);

  const FGModule m = FGModule::from_orders(Z, 2, {12});
  CHECK(json::encode(m).dump() == R"({"rank":2,"torsion":[4,3]})");
  CHECK(json::decode_module(Json::parse(R"({"rank":2,"torsion":[12]})"), Z) == m);
  CHECK(json::decode_module(Json::parse(R"({"rank":1,"torsion":[2]})"), LocalizationRing::inverting({2})) ==
        FGModule::free(LocalizationRing::inverting({2}), 1));
  CHECK_THROWS_AS(json::decode_module(Json::parse(R"({"torsion":[]})"), Z), json::SchemaError);
  CHECK(code_of([] { json::decode_module(Json::parse(R"({"rank":-1,"torsion":[]})"), Z); }) == ErrorCode::InvalidInput);
}

TEST_CASE("complex fixtures decode to the built-in complexes", "[json]") {
  for (const auto& name : fixtures::names()) {
    const auto x = json::decode_complex(json::read_file(fixture_dir + "/" + name + ".json"));
    CHECK(x == fixtures::by_name(name));
    CHECK(json::decode_complex(json::encode(x)) == x);
  }
  CHECK(code_of([] { json::decode_complex(Json::parse(R"({"vertices":2,"simplices":[[0,2]]})")); }) ==
        ErrorCode::InvalidInput);
  CHECK_THROWS_AS(json::decode_complex(Json::parse(R"({"simplices":[]})")), json::SchemaError);
}

TEST_CASE("systems, maps and towers round-trip", "[json]") {
  for (const auto& name : builtin_names()) {
    if (name.rfind("unitary", 0) == 0) continue;
    const auto s = builtin(name);
    CHECK(json::decode_system(json::encode(s)) == s);
  }
  const auto u3 = builtin("unitary-3");
  CHECK(json::decode_system(json::encode(u3)) == u3);
  const auto file = json::decode_system(json::read_file(fixture_dir + "/z-in-degrees-2-and-3.json"));
  CHECK(file.at(2) == FGModule::free(Z, 1));
  CHECK(file.at(1).is_zero());
  CHECK(code_of([] { json::decode_system(Json::parse(R"({"label":"x","ring":"Z","groups":{"0":{"rank":1,"torsion":[]}}})")); }) ==
        ErrorCode::InvalidInput);

  const auto ku = builtin("ku-stable");
  const auto map = CoefficientMap::canonical(builtin("unitary-2"), ku, 6);
  const auto back = json::decode_coefficient_map(json::encode(map));
  CHECK(back.maps() == map.maps());
  CHECK(back.source() == map.source());
  CHECK(json::encode(back).dump() == json::encode(map).dump());

  for (const char* name : {"solenoid-tower", "constant-tower", "collapse-tower"}) {
    const Tower t = json::decode_tower(json::read_file(fixture_dir + "/" + name + ".json"));
    CHECK_NOTHROW(t.validate());
    CHECK(json::encode(json::decode_tower(json::encode(t))).dump() == json::encode(t).dump());
  }
}

TEST_CASE("page dumps round-trip byte for byte", "[json][property]") {
  gen::Rng rng(51);
  for (int trial = 0; trial < 40; ++trial) {
    const auto ring = trial % 3 == 0 ? LocalizationRing::inverting({3}) : Z;
    const SpectralPage page = gen::with_random_differentials(rng, gen::page(rng, 3, 5, 0.6, ring));
    const std::string text = stable_dump(json::encode(page));
    const SpectralPage back = json::decode_page(Json::parse(text));
    REQUIRE(back == page);
    REQUIRE(json::encode(back).dump(2) == text);
  }
  const SpectralPage final = run_to_convergence(e2_page(fixtures::sphere(), builtin("ku-stable")), 2);
  CHECK(json::decode_page(json::encode(final)) == final);
  CHECK(json::encode(final)["final"] == true);
}

TEST_CASE("page keys are in bidegree order", "[json]") {
  const SpectralPage page = e2_page(fixtures::torus(), builtin("gl1-complex"));
  const Json dumped = json::encode(page);
  std::vector<std::string> keys;
  for (const auto& [k, v] : dumped["entries"].items()) keys.push_back(k);
  CHECK(keys == std::vector<std::string>{"0,1", "-1,1", "-2,1"});
}

TEST_CASE("reports and errors", "[json]") {
  const AbutmentReport report = abutment(run_to_convergence(e2_page(fixtures::sphere(), builtin("ku-stable")), 2));
  const Json j = json::encode(report);
  stable_dump(j);
  CHECK(j["ring"] == "Z");
  CHECK(j["extension_status"] == "ASSOCIATED_GRADED_ONLY");
  CHECK(j["degrees"]["1"].size() == 2);

  const CollapseTable table = collapse_rational(fixtures::sphere(), builtin("gl1-complex"), HSpaceHypothesis::Acknowledged, 3);
  CHECK(json::encode(table).dump() == R"({"max_degree":3,"dimensions":{"1":1,"2":0,"3":0}})");

  const Error e(ErrorCode::BidegreeViolation, "bad target", {"0,2", "-1,3"});
  CHECK(json::encode(e).dump() ==
        R"({"error":{"code":"BIDEGREE_VIOLATION","message":"bad target","details":["0,2","-1,3"]}})");

  ProblemSpec spec{fixtures::sphere(), builtin("unitary-1"), Z, std::nullopt, std::nullopt, std::nullopt};
  const BottStableReport bott = bott_stable_verdict(spec.with_stabilized(builtin("ku-stable"), 14), no_differentials(),
                                                     no_differentials(), {2, false});
  const Json bj = json::encode(bott);
  stable_dump(bj);
  CHECK(bj["verdict"]["status"] == "NOT_ISO_AT_E2");

  const TowerReport tower = tower_pages(Tower::constant(fixtures::circle(), 2), builtin("gl1-complex"), Z, {2, false});
  stable_dump(json::encode(tower));
}

TEST_CASE("differential sidecars", "[json]") {
  const GradedCoefficientSystem s = json::decode_system(json::read_file(fixture_dir + "/z-in-degrees-2-and-3.json"));
  const SpectralPage e2 = e2_page(fixtures::sphere(), s, {3, false});

  const json::DifferentialSidecar doubling(json::read_file(fixture_dir + "/doubling-differential.json"));
  const SpectralPage with = doubling(e2);
  CHECK(with.differential({0, 2}).matrix() == int_matrix({{2}}));
  CHECK(doubling(turn_page(e2)) == turn_page(e2));
  const SpectralPage inf = run_to_convergence(e2, 2, doubling.supplier());
  CHECK(inf.entry({2, 3}) == FGModule::cyclic(Z, 2));
  CHECK(inf.entry({0, 2}).is_zero());

  const json::DifferentialSidecar wrong(json::read_file(fixture_dir + "/wrong-target-differential.json"));
  CHECK(code_of([&] { wrong(e2); }) == ErrorCode::BidegreeViolation);

  const json::DifferentialSidecar explicit_ok(Json::parse(R"({"2":{"0,2":{"to":"-2,3","matrix":[[3]]}}})"));
  CHECK(explicit_ok(e2).differential({0, 2}).matrix() == int_matrix({{3}}));
  CHECK(code_of([&] { json::DifferentialSidecar(Json::parse(R"({"2":{"0,2":[[1,1]]}})"))(e2); }) ==
        ErrorCode::ShapeMismatch);
  CHECK_THROWS_AS(json::DifferentialSidecar(Json::parse(R"({"two":{}})")), json::SchemaError);
  CHECK(code_of([] { json::DifferentialSidecar(Json::parse(R"({"2":{"2,2":[[1]]}})")); }) == ErrorCode::InvalidInput);
}

TEST_CASE("file reading failures", "[json]") {
  CHECK_THROWS_AS(json::read_file(fixture_dir + "/missing.json"), std::runtime_error);
  const std::string bad = std::filesystem::temp_directory_path() / "specseq-bad.json";
  {
    std::ofstream out(bad);
    out << "{\"vertices\": 3,";
  }
  CHECK_THROWS_AS(json::read_file(bad), nlohmann::json::exception);
  std::filesystem::remove(bad);
}
