#include <catch_amalgamated.hpp>

#include "corner.hpp"

using namespace corner;
using nlohmann::json;

namespace {

json point_generator(json vertices, int dim) {
  return {{"polytope", {{"ambient_dim", dim}, {"vertices", vertices}}}, {"map", {{"target", {{"kind", "point"}}}}}};
}

}  // namespace

TEST_CASE("malformed text and missing fields are schema errors") {
  CHECK_THROWS_AS(io::parse_text("{\"schema\": "), SchemaError);
  CHECK_THROWS_AS(io::field(json::object(), "terms"), SchemaError);
  CHECK_THROWS_AS(io::rational(json("1/0")), SchemaError);
  CHECK_THROWS_AS(io::rational(json(0.5)), SchemaError);
  CHECK(io::rational(json("-6/4")) == Q(-3, 2));
  CHECK(io::rational(json(7)) == Q(7));
  CHECK_THROWS_AS(io::ring(json("R")), SchemaError);
  CHECK_THROWS_AS(io::target(json{{"kind", "sphere"}}), SchemaError);
}

TEST_CASE("documents must declare the schema") {
  auto path = std::filesystem::temp_directory_path() / "corner-io-noschema.json";
  {
    std::ofstream out(path);
    out << R"({"kind": "chain", "terms": []})";
  }
  CHECK_THROWS_AS(io::load(path.string()), SchemaError);
  {
    std::ofstream out(path);
    out << R"({"schema": "corner-calculus/1", "kind": "chain", "terms": []})";
  }
  json doc = io::load(path.string());
  CHECK(io::kind(doc) == "chain");
  CHECK(io::chain(doc).is_zero());
  std::filesystem::remove(path);
  CHECK_THROWS_AS(io::load(path.string()), SchemaError);
}

TEST_CASE("polytopes reject interior points and wrong dimensions") {
  CHECK_THROWS_AS(io::polytope(json{{"ambient_dim", 1}, {"vertices", {{"0"}, {"1"}, {"1/2"}}}}), PreconditionError);
  CHECK_THROWS_AS(io::polytope(json{{"ambient_dim", 2}, {"vertices", {{"0"}}}}), SchemaError);
  CHECK_THROWS_AS(io::polytope(json{{"ambient_dim", 1}, {"vertices", json::array()}}), SchemaError);
  auto pd = io::polytope(json{{"ambient_dim", 1}, {"vertices", {{"0"}, {"1"}}}, {"frame", {{"-1"}}}});
  CHECK(pd.sign == -1);
}

TEST_CASE("chains survive a round trip through JSON") {
  Rng rng(61);
  for (int it = 0; it < 20; ++it) {
    Target y = it % 2 ? Target::euclid(1) : Target::torus(1);
    GeneratorOptions o;
    o.poly.max_dim = 2;
    o.poly.max_verts = 5;
    o.max_r = y.t;
    Chain c = random_chain(rng, y, 4, o);
    json doc = io::to_json(c);
    doc["schema"] = io::kSchema;
    Chain back = io::chain(io::parse_text(doc.dump()));
    CHECK(back == c);
  }
}

TEST_CASE("supplied tags must be injective on faces") {
  json g = point_generator({{"0"}, {"1"}}, 1);
  g["tag"] = {{"labels", {{1}, {2}, {3}}}};
  CHECK_NOTHROW(io::generator(g));
  g["tag"] = {{"labels", {{1}, {1}, {3}}}};
  CHECK_THROWS_AS(io::generator(g), TagError);
  g["tag"] = {{"labels", {{1}, {2}}}};
  CHECK_THROWS_AS(io::generator(g), SchemaError);
}

TEST_CASE("quotient terms canonicalize with weight 1/|G|") {
  json doc = {{"schema", io::kSchema},
              {"kind", "chain"},
              {"terms",
               {{{"coeff", "2"},
                 {"components", {point_generator({{"-1"}, {"1"}}, 1)}},
                 {"quotient", {{"group", {{"kind", "cyclic"}, {"order", 2}}},
                               {"elements", {{{"matrix", {{"1"}}}, {"offset", {"0"}}},
                                             {{"matrix", {{"-1"}}}, {"offset", {"0"}}}}}}}}}}};
  Chain c = io::chain(doc);
  REQUIRE(c.size() == 1);
  CHECK(c.terms().begin()->second.coeff == 1);
  doc["ring"] = "Z";
  CHECK_THROWS_AS(io::chain(doc), PreconditionError);
  // a supplied tag that is not orbit-invariant is rejected
  doc["ring"] = "Q";
  doc["terms"][0]["components"][0]["tag"] = {{"labels", {{1}, {2}, {3}}}};
  CHECK_THROWS_AS(io::chain(doc), PreconditionError);
}

TEST_CASE("groups from documents") {
  CHECK(io::group(json{{"kind", "symmetric"}, {"degree", 3}}).order() == 6);
  CHECK(io::group(json{{"kind", "product"},
                       {"factors", {{{"kind", "cyclic"}, {"order", 2}}, {{"kind", "cyclic"}, {"order", 3}}}}})
            .is_cyclic());
  CHECK_THROWS_AS(io::group(json{{"kind", "symmetric"}, {"degree", 9}}), SchemaError);
  CHECK_THROWS_AS(io::group(json{{"kind", "table"}, {"table", {{0, 1}}}}), SchemaError);
  // well-formed but not a group
  CHECK_THROWS_AS(io::group(json{{"kind", "table"}, {"table", {{0, 1}, {1, 1}}}}), PreconditionError);
}

TEST_CASE("suite reports render identically for any worker count") {
  SuiteOptions a, b;
  a.count = b.count = 10;
  a.jobs = 1;
  b.jobs = 4;
  CHECK(to_json(run_suite("swap", a), a).dump() == to_json(run_suite("swap", b), a).dump());
  CHECK_THROWS_AS(run_suite("no-such-suite", a), SchemaError);
}
