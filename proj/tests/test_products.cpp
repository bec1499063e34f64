#include <catch_amalgamated.hpp>

#include "corner/products.hpp"
#include "corner/random.hpp"

using namespace corner;

namespace {

GeneratorOptions submersions(Target y, int64_t base) {
  GeneratorOptions g;
  g.poly.max_dim = 1;
  g.poly.max_verts = 4;
  g.max_r = y.t;
  g.map.submersion = true;
  g.label_base = base;
  return g;
}

Generator point_at(Target y, Vec c, int64_t base = 0) {
  Generator g;
  g.P = Polytope::point(Vec{});
  g.f = constant_map(y, 0, 0, std::move(c));
  g.tag = enumerate_tag(g.P, base);
  return g;
}

Q frac(const Q& q) { return q - Q(floor_z(q)); }

// Preimages of p under theta -> n theta on R/Z, by enumerating lifts.
std::set<Q> preimages(int n, const Q& p) {
  std::set<Q> out;
  for (int k = 0; k < std::abs(n); ++k) out.insert(frac((p + k) / Q(n)));
  return out;
}

}  // namespace

TEST_CASE("cup products add grades and satisfy the algebra identities") {
  Rng rng(51);
  int tested = 0;
  for (int it = 0; it < 40 && tested < 15; ++it) {
    Target y = rng.coin() ? Target::torus(1) : Target::torus(2);
    Cochain a = random_chain(rng, y, 2, submersions(y, 0));
    Cochain b = random_chain(rng, y, 2, submersions(y, 500));
    Cochain c = random_chain(rng, y, 1, submersions(y, 900));
    Cochain ab;
    try {
      ab = cup(a, b);
    } catch (const NotTransverse&) {
      continue;
    }
    if (ab.is_zero()) continue;
    ++tested;
    std::set<int> expected;
    for (auto& [ka, ta] : a.terms())
      for (auto& [kb, tb] : b.terms()) expected.insert(cochain_grade(ta.g) + cochain_grade(tb.g));
    for (auto& [k, t] : ab.terms()) CHECK(expected.count(cochain_grade(t.g)));
    try {
      DGAReport rep = check_dga(a, b, c);
      for (auto& ch : rep.checks) CHECK(ch.ok());
    } catch (const NotTransverse&) {
    }
  }
  CHECK(tested >= 10);
}

TEST_CASE("cap products make chains a module") {
  Rng rng(52);
  int tested = 0;
  for (int it = 0; it < 60 && tested < 10; ++it) {
    Target y = Target::torus(1);
    GeneratorOptions ga;
    ga.poly.max_dim = 2;
    ga.poly.max_verts = 5;
    ga.max_r = 1;
    Chain a = random_chain(rng, y, 2, ga);
    Cochain b = random_chain(rng, y, 2, submersions(y, 700));
    Cochain c = random_chain(rng, y, 1, submersions(y, 900));
    try {
      if (cap(a, b).is_zero()) continue;
      CHECK(check_cap_module(a, b, c).ok());
      CHECK(check_cap_leibniz(a, b).ok());
      CHECK(check_cap_identity(a, y).ok());
      ++tested;
    } catch (const NotTransverse&) {
    }
  }
  CHECK(tested >= 5);
}

TEST_CASE("the identity cochain is a unit") {
  Target y = Target::torus(2);
  Cochain one = identity_cochain(y);
  CHECK(coboundary(one).is_zero());
  CHECK(cup(one, one) == one);
  CHECK_THROWS_AS(identity_cochain(Target::euclid(1)), PreconditionError);
}

TEST_CASE("pulling back a point along theta -> n theta lands on its preimages") {
  for (int n : {1, 2, 3}) {
    for (Q p : {Q(1, 3), Q(0), Q(3, 4)}) {
      TargetMap h{Target::torus(1), Target::torus(1), {{Q(n)}}, {0}};
      Chain c;
      c.add(point_at(Target::torus(1), {p}), 1);
      Chain pb = pullback(h, c);
      std::set<Q> got;
      Q total = 0;
      for (auto& [k, t] : pb.terms()) {
        got.insert(frac(t.g.f.c[0]));
        total += t.coeff;
      }
      CHECK(got == preimages(n, p));
      CHECK(total == n);
    }
  }
}

TEST_CASE("doubling pulls 1/3 back to 1/6 and 2/3") {
  TargetMap h{Target::torus(1), Target::torus(1), {{2}}, {0}};
  Chain c;
  c.add(point_at(Target::torus(1), {Q(1, 3)}), 1);
  Chain pb = pullback(h, c);
  std::set<Q> got;
  for (auto& [k, t] : pb.terms()) got.insert(frac(t.g.f.c[0]));
  CHECK(got == std::set<Q>{Q(1, 6), Q(2, 3)});
}

TEST_CASE("products with mismatched targets are rejected") {
  Cochain a = identity_cochain(Target::torus(1));
  Cochain b = identity_cochain(Target::torus(2));
  CHECK_THROWS_AS(cup(a, b), PreconditionError);
  Chain pt;
  pt.add(point_at(Target::torus(1), {Q(1, 2)}), 1);
  CHECK_THROWS_AS(cup(pt, a), PreconditionError);  // not a submersion
}
