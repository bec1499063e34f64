#include <catch_amalgamated.hpp>

#include "corner/orbifold.hpp"
#include "corner/random.hpp"

using namespace corner;

namespace {

void check_group_axioms(const FiniteGroup& G) {
  const int n = G.order();
  const int e = G.identity();
  for (int a = 0; a < n; ++a) {
    CHECK(G.mul(e, a) == a);
    CHECK(G.mul(a, e) == a);
    CHECK(G.mul(a, G.inverse(a)) == e);
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c) CHECK(G.mul(G.mul(a, b), c) == G.mul(a, G.mul(b, c)));
  }
  // every row of the table is a permutation
  for (int a = 0; a < n; ++a) {
    std::set<int> row(G.table()[std::size_t(a)].begin(), G.table()[std::size_t(a)].end());
    CHECK(int(row.size()) == n);
  }
}

AffineAction lin(Mat L) { return {L, zero_vec(L.size())}; }

Mat skew(Rng& rng, std::size_t n) {
  Mat A = zero_mat(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      A[i][j] = rng.rational(-3, 3, 2);
      A[j][i] = -A[i][j];
    }
  return A;
}

// The hexagon with the order-3 rotation (x, y) -> (-y, x - y).
struct Hexagon {
  Polytope X = Polytope::hull(2, {{1, 0}, {1, 1}, {0, 1}, {-1, 0}, {-1, -1}, {0, -1}});
  Mat rot = {{0, -1}, {1, -1}};
  GroupAction action{FiniteGroup::cyclic(3), {lin(identity_mat(2)), lin(rot), lin(mat_mul(rot, rot, 2, 2))}};
};

}  // namespace

TEST_CASE("group constructions satisfy the axioms") {
  check_group_axioms(FiniteGroup::cyclic(5));
  check_group_axioms(FiniteGroup::symmetric(3));
  check_group_axioms(FiniteGroup::product(FiniteGroup::cyclic(2), FiniteGroup::cyclic(3)));
  CHECK(FiniteGroup::symmetric(3).order() == 6);
  CHECK(FiniteGroup::symmetric(4).order() == 24);
  CHECK_FALSE(FiniteGroup::symmetric(3).is_cyclic());
  CHECK(FiniteGroup::product(FiniteGroup::cyclic(2), FiniteGroup::cyclic(3)).is_cyclic());
  CHECK_FALSE(FiniteGroup::product(FiniteGroup::cyclic(2), FiniteGroup::cyclic(2)).is_cyclic());
}

TEST_CASE("element orders in S3 are 1, 2, 2, 2, 3, 3") {
  FiniteGroup G = FiniteGroup::symmetric(3);
  std::multiset<int> orders;
  for (int a = 0; a < G.order(); ++a) orders.insert(G.element_order(a));
  CHECK(orders == std::multiset<int>{1, 2, 2, 2, 3, 3});
}

TEST_CASE("Pfaffian by hand and squared against the determinant") {
  CHECK(pfaffian({{0, 5}, {-5, 0}}) == 5);
  Q a = 2, b = 3, c = 5, d = 7, e = 11, f = 13;
  Mat A = {{0, a, b, c}, {-a, 0, d, e}, {-b, -d, 0, f}, {-c, -e, -f, 0}};
  CHECK(pfaffian(A) == a * f - b * e + c * d);
  CHECK(pfaffian(Mat{}) == 1);
  Rng rng(31);
  for (int it = 0; it < 30; ++it) {
    std::size_t n = 2 * std::size_t(rng.uniform(1, 3));
    Mat S = skew(rng, n);
    Q p = pfaffian(S);
    CHECK(p * p == det(S));
  }
}

TEST_CASE("characters and trivial multiplicities") {
  Hexagon h;
  FiniteGroup z3 = FiniteGroup::cyclic(3);
  RealRep T;
  for (auto& m : h.action.act) T.mats.push_back(m.L);
  Character chi = character(T);
  CHECK(chi == Character{2, -1, -1});
  CHECK(trivial_multiplicity(z3, chi) == 0);
  // the permutation representation of S3 has one trivial summand
  FiniteGroup s3 = FiniteGroup::symmetric(3);
  CHECK(trivial_multiplicity(s3, Character{3, 1, 1, 0, 0, 1}) == 1);
  RepSplit sp = split_rep(z3, T);
  CHECK(sp.fixed.empty());
  CHECK(sp.moving.size() == 2);
}

TEST_CASE("the Z3 hexagon has two oriented point strata of weight 1/3") {
  Hexagon h;
  FiniteGroup z3 = FiniteGroup::cyclic(3);
  VirtualRep rho{{2, -1, -1}, {}};
  StratumResult res = orbifold_stratum(h.X, h.action, z3, rho, true);
  CHECK(res.n == 2);
  CHECK(res.rho_dim == 2);
  REQUIRE(res.pieces.size() == 2);
  for (auto& p : res.pieces) {
    CHECK(p.dim == 0);
    CHECK(p.weight == Q(1, 3));
    CHECK(p.fix.vertices()[0] == Vec{0, 0});
  }
  // the two embeddings differ by inversion, which reverses the normal rotation
  CHECK(res.pieces[0].sign == -res.pieces[1].sign);
  CHECK(iota_fibre(h.X, h.action, z3, rho, {0, 0}) == 2);
  CHECK(iota_fibre(h.X, h.action, z3, rho, {Q(1, 2), 0}) == 0);
}

TEST_CASE("strata preconditions") {
  Hexagon h;
  FiniteGroup z3 = FiniteGroup::cyclic(3);
  CHECK_THROWS_AS(orbifold_stratum(h.X, h.action, z3, {{1, 1, 1}, {}}), PreconditionError);
  CHECK_THROWS_AS(orbifold_stratum(h.X, h.action, z3, {{2, -1}, {}}), SchemaError);
  Polytope sq = Polytope::box({-1, -1}, {1, 1});
  GroupAction flip{FiniteGroup::cyclic(2), {lin(identity_mat(2)), lin(Mat{{-1, 0}, {0, -1}})}};
  VirtualRep sign2{{2, -2}, {}};
  CHECK_NOTHROW(orbifold_stratum(sq, flip, FiniteGroup::cyclic(2), sign2));
  CHECK_THROWS_AS(orbifold_stratum(sq, flip, FiniteGroup::cyclic(2), sign2, true), PreconditionError);
  // an action that does not preserve the polytope
  GroupAction shear{FiniteGroup::cyclic(2), {lin(identity_mat(2)), lin(Mat{{1, 1}, {0, -1}})}};
  CHECK_THROWS(orbifold_stratum(sq, shear, FiniteGroup::cyclic(2), sign2));
}

TEST_CASE("reflection strata are codimension one") {
  Polytope sq = Polytope::box({-1, -1}, {1, 1});
  GroupAction refl{FiniteGroup::cyclic(2), {lin(identity_mat(2)), lin(Mat{{-1, 0}, {0, 1}})}};
  StratumResult res = orbifold_stratum(sq, refl, FiniteGroup::cyclic(2), {{1, -1}, {}});
  REQUIRE(res.pieces.size() == 1);
  CHECK(res.pieces[0].dim == 1);
  CHECK(res.pieces[0].weight == Q(1, 2));
  CHECK(res.pieces[0].fix == Polytope::hull(2, {{0, -1}, {0, 1}}));
}
