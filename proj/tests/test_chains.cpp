#include <catch_amalgamated.hpp>

#include "corner/chains.hpp"
#include "corner/random.hpp"

using namespace corner;

namespace {

Generator make(Polytope P, Target y = Target::point(), int sign = 1, int64_t base = 0) {
  Generator g;
  g.P = std::move(P);
  g.sign = sign;
  g.f = constant_map(y, std::size_t(g.P.ambient_dim()), 0, zero_vec(std::size_t(y.dim())));
  g.tag = enumerate_tag(g.P, base);
  return g;
}

Q binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  Q r = 1;
  for (int i = 1; i <= k; ++i) r = r * Q(n - k + i) / Q(i);
  return r;
}

// Coefficient of the boundary edge through vertices a and b.
Q edge_coeff(const Chain& c, const Vec& a, const Vec& b) {
  for (auto& [k, t] : c.terms()) {
    const auto& vs = t.g.P.vertices();
    if (vs.size() == 2 && ((vs[0] == a && vs[1] == b) || (vs[0] == b && vs[1] == a))) return t.coeff;
  }
  return 0;
}

}  // namespace

TEST_CASE("boundary of the unit square, signs by hand") {
  Chain c;
  c.add(make(Polytope::box({0, 0}, {1, 1})), 1);
  Chain b = boundary(c);
  CHECK(b.size() == 4);
  // outward normal first: bottom and right agree with their edge direction,
  // top and left are reversed
  CHECK(edge_coeff(b, {0, 0}, {1, 0}) == 1);
  CHECK(edge_coeff(b, {1, 0}, {1, 1}) == 1);
  CHECK(edge_coeff(b, {0, 1}, {1, 1}) == -1);
  CHECK(edge_coeff(b, {0, 0}, {0, 1}) == -1);
  CHECK(boundary(b).is_zero());
}

TEST_CASE("reversing orientation negates the coefficient") {
  Chain a, b;
  a.add(make(Polytope::box({0}, {1}), Target::point(), -1), 3);
  b.add(make(Polytope::box({0}, {1})), -3);
  CHECK(a == b);
  CHECK((a - b).is_zero());
  CHECK((a + b).size() == 1);
}

TEST_CASE("the boundary of the boundary vanishes on random chains") {
  Rng rng(41);
  for (int it = 0; it < 40; ++it) {
    Target y = it % 3 == 0 ? Target::point() : it % 3 == 1 ? Target::euclid(1) : Target::torus(1);
    GeneratorOptions o;
    o.poly.max_dim = 3;
    o.poly.max_verts = 8;
    o.max_r = y.t;
    Chain c = random_chain(rng, y, 6, o);
    DDReport rep = verify_dd_zero(c);
    CHECK(rep.ok());
  }
}

TEST_CASE("a corrupted corner sign is caught with a witness") {
  Chain c;
  c.add(make(Polytope::box({0, 0}, {1, 1})), 1);
  DDReport rep = verify_dd_zero(c, [](CornerPair& cp) { cp.via_second.sign = -cp.via_second.sign; });
  CHECK_FALSE(rep.pairs_ok);
  REQUIRE(rep.witness.has_value());
  CHECK(rep.witness->reason == "corner orientations agree");
}

TEST_CASE("face complexes of simplices are acyclic with binomial ranks") {
  for (int k = 0; k <= 3; ++k) {
    HomologyResult h = homology(face_complex(make(simplex(k))), Ring::Z);
    for (int d = 0; d <= k; ++d) {
      CHECK(Q(int(h.rank_of_chains[d])) == binomial(k + 1, d + 1));
      CHECK(h.betti[d] == (d == 0 ? 1 : 0));
      CHECK(h.torsion[d].empty());
    }
  }
}

TEST_CASE("the hollow triangle has one loop") {
  Generator tri = make(simplex(2));
  std::vector<Generator> gens;
  for (auto& g : face_complex(tri))
    if (g.P.dim() < 2) gens.push_back(g);
  HomologyResult h = homology(gens, Ring::Q);
  CHECK(h.betti[0] == 1);
  CHECK(h.betti[1] == 1);
}

TEST_CASE("integral chains reject fractional coefficients") {
  Chain z(Ring::Z);
  CHECK_NOTHROW(z.add(make(Polytope::point(Vec{})), 2));
  CHECK_THROWS_AS(z.add(make(Polytope::point(Vec{})), Q(1, 2)), PreconditionError);
  Chain w(Ring::Z);
  w.add(make(Polytope::point(Vec{})), Q(1, 2) * 0);
  CHECK(w.is_zero());
}

TEST_CASE("a Z2 quotient marker weighs 1/2 and commutes with the boundary") {
  Generator g = make(Polytope::box({-1}, {1}));
  GroupAction flip{FiniteGroup::cyclic(2), {{identity_mat(1), zero_vec(1)}, {Mat{{-1}}, zero_vec(1)}}};
  RawGenerator rg{{g}, flip};
  assign_orbit_tags(rg);
  RawChain rc;
  rc.terms.push_back({rg, 1});
  Chain c = canonicalize(rc);
  REQUIRE(c.size() == 1);
  CHECK(c.terms().begin()->second.coeff == Q(1, 2));
  CHECK(boundary(c) == canonicalize(boundary_raw(rc)));
  // the endpoints are distinct cells, each with weight 1/2 and opposite signs
  Chain b = boundary(c);
  REQUIRE(b.size() == 2);
  std::multiset<Q> coeffs;
  for (auto& [k, t] : b.terms()) coeffs.insert(t.coeff);
  CHECK(coeffs == std::multiset<Q>{Q(-1, 2), Q(1, 2)});
  rc.ring = Ring::Z;
  CHECK_THROWS_AS(canonicalize(rc), PreconditionError);
}

TEST_CASE("automorphism counts") {
  // all face labels distinct: only the identity preserves the tag
  CHECK(aut_finite(make(Polytope::box({0, 0}, {1, 1}))).order == 1);
  // a circle wrapping twice around T^1 has the translation by 1/2
  Generator c;
  c.P = Polytope::point(Vec{});
  c.r = 1;
  c.f = AffineMap{Target::torus(1), {{}}, ZMat{{Z(2)}}, {0}};
  c.tag = enumerate_tag(c.P);
  AutResult a = aut_finite(c);
  CHECK(a.verdict == AutResult::Verdict::Finite);
  CHECK(a.order == 2);
  c.f.A = ZMat{{Z(0)}};
  CHECK(aut_finite(c).verdict == AutResult::Verdict::Infinite);
}

TEST_CASE("affine singular simplices map to chains compatibly with the boundary") {
  Rng rng(42);
  for (int it = 0; it < 20; ++it) {
    int k = rng.uniform(0, 3);
    Target y = Target::euclid(3);
    SingularChain s;
    AffineSimplex sim{y, {}};
    for (int j = 0; j <= k; ++j) sim.verts.push_back({rng.rational(-2, 2, 3), rng.rational(-2, 2, 3), rng.rational(-2, 2, 3)});
    s.push_back({sim, rng.rational(1, 3, 2)});
    CHECK(check_singular_chain_map(s).ok());
  }
}

TEST_CASE("the cylinder bounds a change of tag") {
  Rng rng(43);
  for (int it = 0; it < 15; ++it) {
    PolytopeOptions po;
    po.max_dim = 2;
    po.max_verts = 6;
    Generator g = make(random_polytope(rng, po), Target::point(), rng.coin() ? 1 : -1);
    Tag other = enumerate_tag(g.P, 500);
    CHECK(check_cylinder(g, other).ok());
  }
}
