#include <catch_amalgamated.hpp>

#include "corner/random.hpp"

using namespace corner;

namespace {

std::vector<int> fvector(const Polytope& P) {
  std::vector<int> f(std::size_t(P.dim()) + 1, 0);
  for (auto& F : P.faces()) ++f[std::size_t(F.dim)];
  return f;
}

// Outward normal from the barycenter and the facet's affine span; sign of
// (normal, facet frame) in the parent's canonical coordinates.
int outward_normal_sign(const Polytope& P, int f) {
  Polytope F = P.face(f);
  const std::size_t d = std::size_t(P.dim());
  Mat rows;
  for (auto& w : F.frame()) rows.push_back(P.coords(w));
  Mat N = nullspace(rows, d);
  REQUIRE(N.size() == 1);
  Vec nu = N[0];
  Vec towards = P.coords(vsub(F.vertices()[0], P.barycenter()));
  if (dot(nu, towards) < 0) nu = vscale(nu, Q(-1));
  Mat m = {nu};
  for (auto& r : rows) m.push_back(r);
  return det_sign(m);
}

}  // namespace

TEST_CASE("face counts of standard polytopes") {
  Polytope cube = Polytope::box({0, 0, 0}, {1, 1, 1});
  CHECK(fvector(cube) == std::vector<int>{8, 12, 6, 1});
  std::vector<Vec> oct;
  for (int i = 0; i < 3; ++i)
    for (int s : {-1, 1}) {
      Vec v = zero_vec(3);
      v[std::size_t(i)] = s;
      oct.push_back(v);
    }
  Polytope octa = Polytope::hull(3, oct);
  CHECK(fvector(octa) == std::vector<int>{6, 12, 8, 1});
  CHECK_FALSE(is_simple(octa));
  CHECK(is_simple(cube));
  Polytope tet = Polytope::hull(3, {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0, 0, 1}});
  CHECK(fvector(tet) == std::vector<int>{4, 6, 4, 1});
  Polytope pt = Polytope::point({Q(1, 2), 3});
  CHECK(pt.dim() == 0);
  CHECK(pt.facets().empty());
}

TEST_CASE("hull discards interior points and keeps vertices sorted") {
  Polytope P = Polytope::hull(2, {{0, 0}, {2, 0}, {0, 2}, {2, 2}, {1, 1}, {1, 0}});
  CHECK(P.nverts() == 4);
  CHECK(std::is_sorted(P.vertices().begin(), P.vertices().end(), lex_less));
}

TEST_CASE("lower-dimensional polytopes in higher ambient space") {
  Polytope seg = Polytope::hull(3, {{0, 0, 0}, {1, 2, 3}});
  CHECK(seg.dim() == 1);
  CHECK(seg.ambient_dim() == 3);
  CHECK(seg.facets().size() == 2);
  CHECK(seg.in_aff({Q(1, 2), 1, Q(3, 2)}));
  CHECK_FALSE(seg.in_aff({1, 0, 0}));
}

TEST_CASE("Euler relation and ridge property on random polytopes") {
  Rng rng(11);
  for (int it = 0; it < 60; ++it) {
    PolytopeOptions o;
    o.max_dim = 4;
    o.max_verts = 10;
    Polytope P = random_polytope(rng, o);
    auto f = fvector(P);
    int chi = 0;
    for (int k = 0; k < P.dim(); ++k) chi += (k % 2 ? -1 : 1) * f[std::size_t(k)];
    CHECK(chi == 1 - (P.dim() % 2 ? -1 : 1));
    if (P.dim() >= 2)
      for (int e : P.faces_of_dim(P.dim() - 2)) CHECK(P.facets_containing(e).size() == 2);
  }
}

TEST_CASE("boundary orientation agrees with the outward-normal-first oracle") {
  Rng rng(12);
  for (int it = 0; it < 40; ++it) {
    PolytopeOptions o;
    o.max_dim = 3;
    o.min_dim = 1;
    Polytope P = random_polytope(rng, o);
    for (int f : P.facets()) CHECK(P.facet_sign(f) == outward_normal_sign(P, f));
  }
}

TEST_CASE("square boundary signs by hand") {
  Polytope sq = Polytope::box({0, 0}, {1, 1});
  // edge x = 0 has frame (0,1) and outward normal (-1,0): det = -1
  for (int f : sq.facets()) {
    Polytope F = sq.face(f);
    bool left = F.vertices()[0][0] == 0 && F.vertices()[1][0] == 0;
    bool bottom = F.vertices()[0][1] == 0 && F.vertices()[1][1] == 0;
    if (left) CHECK(sq.facet_sign(f) == -1);
    if (bottom) CHECK(sq.facet_sign(f) == 1);
  }
}

TEST_CASE("the corner involution reverses orientation") {
  Rng rng(13);
  for (int it = 0; it < 40; ++it) {
    PolytopeOptions o;
    o.max_dim = 4;
    o.min_dim = 2;
    Polytope P = random_polytope(rng, o);
    OrientedPolytope X{P, rng.coin() ? 1 : -1};
    auto corners = second_boundary(X);
    CHECK(corners.size() == 2 * P.faces_of_dim(P.dim() - 2).size());
    for (auto& c : corners) {
      CornerComponent s = sigma(X, c);
      CHECK(s.oriented.sign == -c.oriented.sign);
      CHECK(sigma(X, s).oriented.sign == c.oriented.sign);
    }
  }
  CHECK_THROWS_AS(second_boundary({Polytope::box({0}, {1}), 1}), PreconditionError);
}

TEST_CASE("frames set orientation; bad frames are rejected") {
  Polytope sq = Polytope::box({0, 0}, {1, 1});
  CHECK(frame_sign(sq, {{1, 0}, {0, 1}}) == 1);
  CHECK(frame_sign(sq, {{0, 1}, {1, 0}}) == -1);
  CHECK_THROWS_AS(frame_sign(sq, {{1, 1}, {2, 2}}), PreconditionError);
  Polytope seg = Polytope::hull(2, {{0, 0}, {1, 1}});
  CHECK_THROWS_AS(frame_sign(seg, {{1, 0}}), PreconditionError);
  CHECK(frame_sign(seg, {{-2, -2}}) == -frame_sign(seg, {{1, 1}}));
}

TEST_CASE("affine isomorphisms of the square form the dihedral group of order 8") {
  Polytope sq = Polytope::box({0, 0}, {1, 1});
  auto isos = affine_isomorphisms(sq, sq);
  CHECK(isos.size() == 8);
  int reversing = 0;
  for (auto& i : isos) reversing += i.orientation < 0;
  CHECK(reversing == 4);
  Polytope tri = Polytope::hull(2, {{0, 0}, {1, 0}, {0, 1}});
  CHECK(affine_isomorphisms(sq, tri).empty());
  CHECK(affine_isomorphisms(tri, tri).size() == 6);
}

TEST_CASE("isomorphism search refuses polytopes beyond the vertex cap") {
  std::vector<Vec> pts;
  for (int i = 0; i < 12; ++i) pts.push_back({Q(i), Q(i * i)});
  Polytope P = Polytope::hull(2, pts);
  REQUIRE(P.nverts() == 12);
  CHECK_THROWS_AS(affine_isomorphisms(P, P), SearchCapExceeded);
}

TEST_CASE("reembedding preserves the face lattice and reports orientation") {
  Polytope sq = Polytope::box({0, 0}, {1, 1});
  auto r = reembed(sq, {{0, 1}, {1, 0}}, {5, 5});
  CHECK(r.orientation == -1);
  CHECK(fvector(r.image) == fvector(sq));
  auto s = reembed(sq, {{1, 0}, {0, 1}, {1, 1}}, {0, 0, 0});
  CHECK(s.image.ambient_dim() == 3);
  CHECK(s.image.dim() == 2);
  CHECK_THROWS_AS(reembed(sq, {{1, 1}, {1, 1}}, {0, 0}), PreconditionError);
}
