#pragma once

// Seeded random instances. Draws use explicit modular reduction on a 64-bit
// Mersenne twister so the same seed yields the same instances everywhere.

#include <random>

#include "corner/chains.hpp"

namespace corner {

class Rng {
 public:
  explicit Rng(uint64_t seed) : eng_(seed) {}
  int64_t uniform(int64_t lo, int64_t hi) {  // inclusive
    uint64_t span = uint64_t(hi - lo) + 1;
    return lo + int64_t(eng_() % span);
  }
  bool coin() { return uniform(0, 1) == 1; }
  Q rational(int64_t lo, int64_t hi, int64_t den) { return Q(uniform(lo * den, hi * den)) / Q(den); }
  uint64_t next() { return eng_(); }

 private:
  std::mt19937_64 eng_;
};

struct PolytopeOptions {
  int max_dim = 3;      // ambient and intrinsic
  int max_verts = 10;
  int min_dim = 0;
};

inline Polytope random_full_polytope(Rng& rng, int d, int max_verts) {
  if (d == 0) return Polytope::point(Vec{});
  for (;;) {
    int kind = int(rng.uniform(0, 3));
    std::vector<Vec> pts;
    if (kind == 0 && (1 << d) <= max_verts) {
      Vec lo(static_cast<std::size_t>(d)), hi(static_cast<std::size_t>(d));
      for (int i = 0; i < d; ++i) {
        lo[std::size_t(i)] = rng.uniform(-2, 1);
        hi[std::size_t(i)] = lo[std::size_t(i)] + rng.uniform(1, 2);
      }
      return Polytope::box(lo, hi);
    }
    if (kind == 1 && 2 * d <= max_verts && d >= 2) {
      // cross-polytope, not simple for d >= 3
      for (int i = 0; i < d; ++i)
        for (int s : {-1, 1}) {
          Vec v = zero_vec(std::size_t(d));
          v[std::size_t(i)] = s * rng.uniform(1, 2);
          pts.push_back(v);
        }
    } else {
      int k = kind == 2 ? d + 1 : int(rng.uniform(d + 1, std::min(max_verts, d + 4)));
      for (int j = 0; j < k; ++j) {
        Vec v(static_cast<std::size_t>(d));
        for (auto& x : v) x = rng.uniform(-2, 2);
        pts.push_back(v);
      }
    }
    Mat diffs;
    for (auto& p : pts) diffs.push_back(vsub(p, pts[0]));
    if (rank(diffs, std::size_t(d)) < d) continue;
    Polytope P = Polytope::hull(d, pts);
    if (int(P.nverts()) <= max_verts) return P;
  }
}

// An intrinsic d-polytope placed in R^n by an injective integer affine map.
inline Polytope random_polytope(Rng& rng, const PolytopeOptions& o) {
  int d = int(rng.uniform(o.min_dim, o.max_dim));
  int n = int(rng.uniform(d, o.max_dim));
  Polytope P = random_full_polytope(rng, d, o.max_verts);
  if (n == d && rng.coin()) return P;
  for (;;) {
    Mat M = zero_mat(std::size_t(n), std::size_t(d));
    for (auto& row : M)
      for (auto& x : row) x = rng.uniform(-1, 1);
    if (d > 0 && rank(M, std::size_t(d)) < d) continue;
    Vec t(static_cast<std::size_t>(n));
    for (auto& x : t) x = rng.uniform(-1, 1);
    std::vector<Vec> pts;
    for (auto& v : P.vertices()) pts.push_back(vadd(mat_vec(M, v), t));
    return Polytope::from_vertices(n, pts);
  }
}

struct MapOptions {
  bool submersion = false;  // circle part surjective onto the circle rows
  int den = 3;              // denominators of slopes and offsets
};

inline AffineMap random_map(Rng& rng, Target y, std::size_t n, std::size_t r, const MapOptions& o = {}) {
  const std::size_t m = std::size_t(y.dim()), e = std::size_t(y.e);
  for (;;) {
    AffineMap f;
    f.y = y;
    f.B = zero_mat(m, n);
    f.A = ZMat(m, ZVec(r, Z(0)));
    f.c = zero_vec(m);
    for (std::size_t i = 0; i < m; ++i) {
      for (auto& b : f.B[i]) b = rng.coin() ? rng.rational(-2, 2, o.den) : Q(0);
      f.c[i] = rng.rational(-1, 1, o.den);
      if (i >= e)
        for (auto& a : f.A[i]) a = rng.uniform(-2, 2);
    }
    if (o.submersion) {
      if (e > 0) throw PreconditionError("random submersions are drawn only for compact targets");
      ZMat At(m, ZVec(r));
      for (std::size_t i = 0; i < m; ++i) At[i] = f.A[i];
      if (rank(to_q(At), r) < int(m)) continue;
    }
    return f;
  }
}

struct GeneratorOptions {
  PolytopeOptions poly;
  MapOptions map;
  int max_r = 0;
  int64_t label_base = 0;
};

inline Generator random_generator(Rng& rng, Target y, const GeneratorOptions& o) {
  Generator g;
  g.P = random_polytope(rng, o.poly);
  int rmin = o.map.submersion ? y.t : 0;
  g.r = std::size_t(rng.uniform(rmin, std::max(rmin, o.max_r)));
  g.sign = rng.coin() ? 1 : -1;
  g.f = random_map(rng, y, std::size_t(g.P.ambient_dim()), g.r, o.map);
  g.tag = enumerate_tag(g.P, o.label_base);
  return g;
}

inline Chain random_chain(Rng& rng, Target y, int max_terms, const GeneratorOptions& o) {
  Chain c;
  int k = int(rng.uniform(1, max_terms));
  GeneratorOptions go = o;
  for (int i = 0; i < k; ++i) {
    Generator g = random_generator(rng, y, go);
    go.label_base += int64_t(g.P.faces().size());
    Q coeff = rng.rational(1, 3, 2) + (rng.coin() ? Q(0) : Q(1, 7));
    c.add(g, rng.coin() ? coeff : Q(-coeff));
  }
  return c;
}

}  // namespace corner
