#include <catch_amalgamated.hpp>

#include "corner/random.hpp"

using namespace corner;

namespace {

AffineMap linear(Target y, Mat B, Vec c, std::size_t r = 0) {
  return AffineMap{y, std::move(B), ZMat(std::size_t(y.dim()), ZVec(r, Z(0))), std::move(c)};
}

CellMap cell(Polytope P, AffineMap f, int sign = 1, std::size_t r = 0) { return {std::move(P), r, sign, std::move(f)}; }

}  // namespace

TEST_CASE("maps validate their shapes") {
  AffineMap f = linear(Target::euclid(1), {{1, 2}}, {0});
  CHECK_NOTHROW(validate_map(f, 2, 0));
  CHECK_THROWS_AS(validate_map(f, 3, 0), SchemaError);
  AffineMap g{Target::euclid(1), {{1}}, ZMat{{Z(1)}}, {0}};
  CHECK_THROWS_AS(validate_map(g, 1, 1), PreconditionError);
}

TEST_CASE("submersion means a surjective differential on every face") {
  Polytope I = Polytope::box({0}, {1});
  // x -> x over Euclid(1) fails at the vertices
  CHECK_FALSE(is_submersion(I, linear(Target::euclid(1), {{1}}, {0})));
  // a circle factor mapping onto T^1 is a submersion everywhere
  AffineMap f{Target::torus(1), {{Q(1, 2)}}, ZMat{{Z(1)}}, {0}};
  CHECK(is_submersion(I, f));
  CHECK(is_submersion(I, constant_map(Target::point(), 1, 0, {})));
}

TEST_CASE("coorientation puts the target first") {
  // the square over R by x: kernel is the y direction with sign +1
  Polytope sq = Polytope::box({0, 0}, {1, 1});
  AffineMap px = linear(Target::euclid(1), {{1, 0}}, {0});
  Coorientation c = coorientation(sq, 0, px, 1);
  REQUIRE(c.frame.size() == 1);
  CHECK(c.frame[0][0] == 0);
  CHECK(c.sign == (c.frame[0][1] > 0 ? 1 : -1));
  // over y instead, (e_y, e_x) is reversed
  AffineMap py = linear(Target::euclid(1), {{0, 1}}, {0});
  Coorientation d = coorientation(sq, 0, py, 1);
  CHECK(d.sign == (d.frame[0][0] > 0 ? -1 : 1));
  CHECK_THROWS_AS(coorientation(sq, 0, linear(Target::euclid(1), {{0, 0}}, {0}), 1), PreconditionError);
}

TEST_CASE("normalization detects collapsed circles and reduces torus offsets") {
  Polytope pt = Polytope::point(Vec{});
  AffineMap f{Target::torus(1), {{}}, ZMat{{Z(0)}}, {Q(7, 3)}};
  CHECK(normalize_map(pt, 1, f).kernel_circle);
  AffineMap g{Target::torus(1), {{}}, ZMat{{Z(1)}}, {Q(7, 3)}};
  auto n = normalize_map(pt, 1, g);
  CHECK_FALSE(n.kernel_circle);
  // a circle mapping onto T^1 absorbs the offset entirely
  CHECK(n.f.c[0] == 0);
  AffineMap h{Target::torus(1), {{}}, ZMat{{}}, {Q(7, 3)}};
  CHECK(normalize_map(pt, 0, h).f.c[0] == Q(1, 3));
}

TEST_CASE("fibre product over a point is the oriented product") {
  Polytope I = Polytope::box({0}, {1});
  auto comps = fibre_product(cell(I, constant_map(Target::point(), 1, 0, {})), cell(I, constant_map(Target::point(), 1, 0, {})));
  REQUIRE(comps.size() == 1);
  CHECK(comps[0].P == Polytope::box({0, 0}, {1, 1}));
  CHECK(comps[0].sign == 1);
  auto flipped = fibre_product(cell(I, constant_map(Target::point(), 1, 0, {}), -1), cell(I, constant_map(Target::point(), 1, 0, {})));
  CHECK(flipped[0].sign == -1);
}

TEST_CASE("fibre product over Euclid(1) cuts the diagonal") {
  // [0,2] -> R by inclusion against the point 3/2: one point, (3/2, 0)
  Polytope A = Polytope::box({0}, {2});
  AffineMap id = linear(Target::euclid(1), {{1}}, {0});
  AffineMap c1 = linear(Target::euclid(1), {{0}}, {Q(3, 2)});
  auto comps = fibre_product(cell(A, id), cell(Polytope::point({0}), c1));
  REQUIRE(comps.size() == 1);
  CHECK(comps[0].P.dim() == 0);
  CHECK(comps[0].P.vertices()[0] == Vec{Q(3, 2), 0});
  // non-transverse: the point hits a vertex of A
  AffineMap c2 = linear(Target::euclid(1), {{0}}, {Q(2)});
  CHECK_THROWS_AS(fibre_product(cell(A, id), cell(Polytope::point({0}), c2)), NotTransverse);
  // two intervals along the identity meet in the diagonal over their overlap
  auto diag = fibre_product(cell(A, id), cell(Polytope::box({1}, {3}), id));
  REQUIRE(diag.size() == 1);
  CHECK(diag[0].P == Polytope::hull(2, {{1, 1}, {2, 2}}));
}

TEST_CASE("fibre products over the circle unwrap into lattice translates") {
  // x -> 3x on [0,1] meets the point 1/2 of T^1 three times
  Polytope I = Polytope::box({0}, {1});
  AffineMap triple = linear(Target::torus(1), {{3}}, {0});
  AffineMap half = linear(Target::torus(1), {{0}}, {Q(1, 2)});
  auto comps = fibre_product(cell(I, triple), cell(Polytope::point({0}), half));
  REQUIRE(comps.size() == 3);
  std::set<Q> xs;
  for (auto& c : comps) xs.insert(c.P.vertices()[0][0]);
  CHECK(xs == std::set<Q>{Q(1, 6), Q(1, 2), Q(5, 6)});
}

TEST_CASE("the set-level fibre product agrees with the oriented one on random pairs") {
  Rng rng(21);
  int compared = 0;
  for (int it = 0; it < 80; ++it) {
    Target y = it % 2 ? Target::euclid(1) : Target::torus(1);
    GeneratorOptions o;
    o.poly.max_dim = 2;
    o.poly.max_verts = 5;
    Generator a = random_generator(rng, y, o), b = random_generator(rng, y, o);
    try {
      auto comps = fibre_product(a.cell(), b.cell());
      auto sets = fibre_product_sets(a.cell(), b.cell());
      std::multiset<std::string> k1, k2;
      for (auto& c : comps) k1.insert(c.P.key());
      for (auto& s : sets) k2.insert(s.key());
      CHECK(k1 == k2);
      ++compared;
    } catch (const NotTransverse&) {
    }
  }
  CHECK(compared > 20);
}

TEST_CASE("composition of target maps is associative") {
  TargetMap a{Target::euclid(2), Target::euclid(1), {{1, 2}}, {1}};
  TargetMap b{Target::euclid(1), Target::torus(1), {{Q(1, 3)}}, {Q(1, 2)}};
  TargetMap c{Target::euclid(3), Target::euclid(2), {{1, 0, 1}, {0, 1, 0}}, {0, 2}};
  TargetMap l = compose(compose(b, a), c), r = compose(b, compose(a, c));
  CHECK(l.H == r.H);
  CHECK(l.c == r.c);
}

TEST_CASE("product targets put Euclidean coordinates first") {
  ProductTarget p = product_target(Target::torus(1), Target::euclid(2));
  CHECK(p.y == Target{2, 1});
}
