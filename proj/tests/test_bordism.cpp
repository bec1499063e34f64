#include <catch_amalgamated.hpp>

#include "corner/suites.hpp"

using namespace corner;

namespace {

BordismClass interval_witness() {
  BordismClass w;
  w.y = Target::point();
  w.comps.push_back({Polytope::box({0}, {1}), 0, 1, constant_map(w.y, 1, 0, Vec{}), 1});
  return w;
}

BordismClass square_witness() {
  BordismClass w;
  w.y = Target::point();
  w.comps.push_back({Polytope::box({0, 0}, {1, 1}), 0, 1, constant_map(w.y, 2, 0, Vec{}), 1});
  return w;
}

// Facet of P whose vertices all have coordinate i equal to v.
int facet_at(const Polytope& P, std::size_t i, const Q& v) {
  for (int F : P.facets()) {
    Polytope face = P.face(F);
    bool all = true;
    for (auto& x : face.vertices()) all = all && x[i] == v;
    if (all) return F;
  }
  return -1;
}

}  // namespace

TEST_CASE("closed certificates of standard classes") {
  Target pt = Target::point();
  CHECK(check_closed(signed_points({1, -1})).ok);
  CHECK(check_closed(polytope_boundary(Polytope::hull(2, {{0, 0}, {1, 0}, {0, 1}}), pt, constant_map(pt, 2, 0, Vec{}))).ok);
  CHECK(check_closed(flat_torus(1, 1)).ok);
  CHECK(check_closed(flat_torus(2, 1)).ok);
  ClosedReport open = check_closed(interval_witness());
  CHECK_FALSE(open.ok);
  CHECK(open.reason.find("unpaired boundary facet") != std::string::npos);
}

TEST_CASE("gluings must reverse orientation and respect the map") {
  // without the translation by -1 the gluing does not carry x = 1 onto x = 0
  BordismClass b = flat_torus(1, 1);
  b.pairings[0].t = zero_vec(1);
  CHECK_FALSE(check_closed(b).ok);
  // gluing a facet to itself
  BordismClass c = flat_torus(1, 1);
  c.pairings[0].facet_b = c.pairings[0].facet_a;
  CHECK_FALSE(check_closed(c).ok);
  // an orientation-preserving gluing: flip the component sign on a copy
  BordismClass d = polytope_boundary(Polytope::box({0, 0}, {1, 1}), Target::point(), constant_map(Target::point(), 2, 0, Vec{}));
  d.comps[0].sign = -d.comps[0].sign;
  CHECK_FALSE(check_closed(d).ok);
}

TEST_CASE("every closed example is a cycle with a cylinder witness") {
  for (auto& [name, b] : bordism_cases()) {
    INFO(name);
    REQUIRE(check_closed(b).ok);
    KhReport kh = bordism_to_chain(b);
    CHECK(kh.cycle);
    CHECK(kh.witness_ok);
    CHECK_FALSE(kh.chain.is_zero());
  }
}

TEST_CASE("the chain does not depend on the tag base up to the cylinder") {
  BordismClass circle = flat_torus(1, 2);
  for (int64_t base : {0, 7, 100, 12345}) {
    KhReport kh = bordism_to_chain(circle, base, base + 5000);
    CHECK(kh.cycle);
    CHECK(kh.witness_ok);
    CHECK(kh.chain.size() == kh.other.size());
  }
  CHECK_THROWS_AS(bordism_to_chain(interval_witness()), PreconditionError);
}

TEST_CASE("presentations of signed points") {
  BordismClass plus = signed_points({1}), minus = signed_points({-1});
  Presentation p = present_group({plus, minus}, {interval_witness()});
  CHECK(p.free_rank == 1);
  CHECK(p.torsion.empty());
  REQUIRE(p.relations.size() == 1);
  // the interval ends are a positive and a negative point, each matched
  // without reversal: relation (1, 1) in the basis {pt+, pt-}
  CHECK(p.relations[0] == std::vector<Z>{1, 1});
  CHECK(present_group({plus, minus}, {}).free_rank == 2);
  Presentation q = present_group({plus}, {interval_witness()});
  CHECK(q.free_rank == 1);
  CHECK(q.torsion.empty());
  Presentation r = present_group({plus, minus}, {interval_witness()}, Ring::Q);
  CHECK(r.free_rank == 1);
}

TEST_CASE("witnesses with corners are rejected") {
  CHECK_THROWS_AS(present_group({signed_points({1})}, {square_witness()}), CornerError);
  try {
    present_group({signed_points({1})}, {square_witness()});
  } catch (const CornerError& e) {
    CHECK(std::string(e.what()).find("corner") != std::string::npos);
  }
}

TEST_CASE("a square with one pair of sides glued is a cylinder witness without corners") {
  // [0,1]^2 with x = 1 glued to x = 0: boundary is two circles over the point
  BordismClass w = square_witness();
  const Polytope& P = w.comps[0].P;
  int hi = facet_at(P, 0, 1), lo = facet_at(P, 0, 0);
  REQUIRE(hi >= 0);
  REQUIRE(lo >= 0);
  w.pairings.push_back({0, hi, 0, lo, identity_mat(2), {-1, 0}});
  CHECK_NOTHROW(free_boundary(w));
  CHECK(free_boundary(w).size() == 2);
}

TEST_CASE("products of closed classes stay closed") {
  BordismClass circle = flat_torus(1, 1);
  BordismClass p = bordism_product(circle, flat_torus(1, 1, Q(1, 3)));
  CHECK(check_closed(p).ok);
  BordismClass pts = bordism_product(signed_points({1, -1}), signed_points({1, 1}));
  CHECK(pts.comps.size() == 4);
  CHECK(check_closed(pts).ok);
  CHECK_THROWS_AS(bordism_product(circle, signed_points({1})), PreconditionError);
}

TEST_CASE("strata projection on the Z3 hexagon") {
  FiniteGroup z3 = FiniteGroup::cyclic(3);
  Mat rot = {{0, -1}, {1, -1}};
  BordismClass b;
  b.y = Target::point();
  b.comps.push_back({Polytope::hull(2, {{1, 0}, {1, 1}, {0, 1}, {-1, 0}, {-1, -1}, {0, -1}}), 0, 1,
                     constant_map(b.y, 2, 0, Vec{}), 1});
  b.quotient = QuotientData{{z3, {{identity_mat(2), zero_vec(2)}, {rot, zero_vec(2)}, {mat_mul(rot, rot, 2, 2), zero_vec(2)}}}};
  BordismClass s = strata_projection(b, z3, {{2, -1, -1}, {}});
  REQUIRE(s.comps.size() == 2);
  CHECK(s.comps[0].weight == Q(1, 3));
  CHECK(s.comps[1].weight == Q(1, 3));
  CHECK(s.comps[0].sign == -s.comps[1].sign);
  CHECK(s.vdim() == 0);
  // the trivial subgroup returns the class unchanged
  BordismClass same = strata_projection(b, FiniteGroup::cyclic(1), {{0}, {}});
  CHECK(same.comps.size() == 1);
}

TEST_CASE("strata projection refuses groups of even order") {
  FiniteGroup z2 = FiniteGroup::cyclic(2);
  BordismClass b;
  b.y = Target::point();
  b.comps.push_back({Polytope::box({-1, -1}, {1, 1}), 0, 1, constant_map(b.y, 2, 0, Vec{}), 1});
  b.quotient = QuotientData{{z2, {{identity_mat(2), zero_vec(2)}, {Mat{{-1, 0}, {0, -1}}, zero_vec(2)}}}};
  CHECK_THROWS_AS(strata_projection(b, z2, {{2, -2}, {}}), PreconditionError);
  BordismClass no_quotient = b;
  no_quotient.quotient.reset();
  CHECK_THROWS_AS(strata_projection(no_quotient, FiniteGroup::cyclic(3), {{2, -1, -1}, {}}), PreconditionError);
}
