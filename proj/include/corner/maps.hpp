#pragma once

// Affine maps from cells P x T^r into targets R^e x T^t, and oriented fibre
// products of such maps.
//
// A cell is a polytope times a flat torus; its frame is the polytope's
// canonical frame followed by the standard torus basis. A map sends
// (x, theta) to B x + A theta + c, with A integral and zero on Euclidean rows.

#include "corner/geometry.hpp"

namespace corner {

struct Target {
  int e = 0;  // Euclidean coordinates, listed first
  int t = 0;  // circle coordinates
  int dim() const { return e + t; }
  bool compact() const { return e == 0; }
  bool operator==(const Target& o) const { return e == o.e && t == o.t; }
  bool operator!=(const Target& o) const { return !(*this == o); }
  std::string name() const {
    if (e == 0 && t == 0) return "point";
    if (t == 0) return "euclid(" + std::to_string(e) + ")";
    if (e == 0) return "torus(" + std::to_string(t) + ")";
    return "euclid(" + std::to_string(e) + ")xtorus(" + std::to_string(t) + ")";
  }
  static Target point() { return {0, 0}; }
  static Target euclid(int m) { return {m, 0}; }
  static Target torus(int m) { return {0, m}; }
};

struct AffineMap {
  Target y;
  Mat B;   // dim Y x n
  ZMat A;  // dim Y x r, zero on Euclidean rows
  Vec c;   // dim Y

  std::size_t m() const { return std::size_t(y.dim()); }
  Vec eval(const Vec& x) const {  // at theta = 0
    Vec out = c;
    for (std::size_t i = 0; i < m(); ++i) out[i] += dot(B[i], x);
    return out;
  }
};

inline AffineMap constant_map(Target y, std::size_t n, std::size_t r, Vec c) {
  AffineMap f;
  f.y = y;
  f.B = zero_mat(std::size_t(y.dim()), n);
  f.A = ZMat(std::size_t(y.dim()), ZVec(r, Z(0)));
  f.c = std::move(c);
  return f;
}

inline void validate_map(const AffineMap& f, std::size_t n, std::size_t r) {
  std::size_t m = f.m();
  if (f.B.size() != m || f.A.size() != m || f.c.size() != m) throw SchemaError("map has wrong number of rows");
  for (auto& row : f.B)
    if (row.size() != n) throw SchemaError("map matrix has wrong number of columns");
  for (std::size_t i = 0; i < m; ++i) {
    if (f.A[i].size() != r) throw SchemaError("circle coefficients have wrong size");
    if (int(i) < f.y.e)
      for (auto& a : f.A[i])
        if (a != 0) throw PreconditionError("a circle factor cannot map nontrivially to a Euclidean target");
  }
}

// A cell map is always strongly smooth: it is affine on a polytope.
inline bool is_strongly_smooth(const AffineMap&) { return true; }

// Differential in canonical coordinates of face `face`: columns are the
// images of the face frame followed by the circle directions.
inline Mat differential(const Polytope& P, int face, const AffineMap& f) {
  Polytope F = P.face(face);
  std::size_t m = f.m(), r = f.A.empty() ? 0 : f.A[0].size();
  Mat D = zero_mat(m, std::size_t(F.dim()) + r);
  for (std::size_t i = 0; i < m; ++i) {
    for (int j = 0; j < F.dim(); ++j) D[i][std::size_t(j)] = dot(f.B[i], F.frame()[std::size_t(j)]);
    for (std::size_t k = 0; k < r; ++k) D[i][std::size_t(F.dim()) + k] = Q(f.A[i][k]);
  }
  return D;
}

// Surjectivity of the differential on every face, vertices included.
inline bool is_submersion(const Polytope& P, const AffineMap& f) {
  int m = f.y.dim();
  if (m == 0) return true;
  for (int i = 0; i <= P.top(); ++i) {
    Mat D = differential(P, i, f);
    if (rank(D, D.empty() ? 0 : D[0].size()) < m) return false;
  }
  return true;
}

// Orientation of Ker df inside TX so that TX = TY + Ker df (target first).
// Returns a kernel frame (canonical coordinates of the cell) whose sign is
// +1 relative to the orientation `sign` of the cell, for a submersion.
struct Coorientation {
  Mat frame;  // rows: kernel vectors in canonical cell coordinates
  int sign = 1;
};

inline Coorientation coorientation(const Polytope& P, std::size_t r, const AffineMap& f, int sign) {
  Mat D = differential(P, P.top(), f);
  std::size_t cols = std::size_t(P.dim()) + r;
  if (rank(D, cols) < f.y.dim()) throw PreconditionError("coorientation needs a submersion");
  Mat K = nullspace(D, cols);
  // lifts of the target basis followed by the kernel frame
  Mat full;
  for (int i = 0; i < f.y.dim(); ++i) {
    Vec e = zero_vec(f.m());
    e[std::size_t(i)] = 1;
    full.push_back(*solve(D, e, cols));
  }
  for (auto& k : K) full.push_back(k);
  int s = det_sign(full) * sign;
  return {K, s};
}

// ---------------------------------------------------------------------------
// Maps between targets: y -> H y + c.

struct TargetMap {
  Target from, to;
  Mat H;  // to.dim x from.dim
  Vec c;
};

inline void validate_target_map(const TargetMap& h) {
  if (int(h.H.size()) != h.to.dim() || int(h.c.size()) != h.to.dim()) throw SchemaError("target map has wrong rows");
  for (std::size_t i = 0; i < h.H.size(); ++i) {
    if (int(h.H[i].size()) != h.from.dim()) throw SchemaError("target map has wrong columns");
    for (int j = h.from.e; j < h.from.dim(); ++j) {
      const Q& v = h.H[i][std::size_t(j)];
      if (int(i) < h.to.e && v != 0) throw PreconditionError("a circle cannot map nontrivially to a Euclidean factor");
      if (int(i) >= h.to.e && !is_integer(v)) throw PreconditionError("circle-to-circle coefficients must be integers");
    }
  }
}

inline TargetMap identity_target_map(Target y) {
  return {y, y, identity_mat(std::size_t(y.dim())), zero_vec(std::size_t(y.dim()))};
}

inline TargetMap compose(const TargetMap& g, const TargetMap& h) {  // g after h
  if (g.from != h.to) throw PreconditionError("target maps do not compose");
  TargetMap out{h.from, g.to, mat_mul(g.H, h.H, std::size_t(h.to.dim()), std::size_t(h.from.dim())), g.c};
  for (std::size_t i = 0; i < out.c.size(); ++i) out.c[i] += dot(g.H[i], h.c);
  return out;
}

inline AffineMap compose(const TargetMap& h, const AffineMap& f) {  // h after f
  if (h.from != f.y) throw PreconditionError("map target does not match the target map's source");
  std::size_t n = f.B.empty() ? 0 : f.B[0].size();
  std::size_t r = f.A.empty() ? 0 : f.A[0].size();
  AffineMap out;
  out.y = h.to;
  out.B = zero_mat(std::size_t(h.to.dim()), n);
  out.A = ZMat(std::size_t(h.to.dim()), ZVec(r, Z(0)));
  out.c = h.c;
  for (int i = 0; i < h.to.dim(); ++i)
    for (int k = 0; k < h.from.dim(); ++k) {
      const Q& w = h.H[std::size_t(i)][std::size_t(k)];
      if (w == 0) continue;
      for (std::size_t j = 0; j < n; ++j) out.B[std::size_t(i)][j] += w * f.B[std::size_t(k)][j];
      for (std::size_t j = 0; j < r; ++j) {
        Q a = w * Q(f.A[std::size_t(k)][j]);
        out.A[std::size_t(i)][j] += to_z(a);
      }
      out.c[std::size_t(i)] += w * f.c[std::size_t(k)];
    }
  return out;
}

// Product target with layout (e1, e2, t1, t2). The product orientation
// (Y1 first) differs from the standard one by `sign`.
struct ProductTarget {
  Target y;
  TargetMap pr1, pr2;
  int sign = 1;
};

inline ProductTarget product_target(Target a, Target b) {
  ProductTarget p;
  p.y = {a.e + b.e, a.t + b.t};
  std::size_t m = std::size_t(p.y.dim());
  p.pr1 = {p.y, a, zero_mat(std::size_t(a.dim()), m), zero_vec(std::size_t(a.dim()))};
  p.pr2 = {p.y, b, zero_mat(std::size_t(b.dim()), m), zero_vec(std::size_t(b.dim()))};
  for (int i = 0; i < a.e; ++i) p.pr1.H[std::size_t(i)][std::size_t(i)] = 1;
  for (int i = 0; i < b.e; ++i) p.pr2.H[std::size_t(i)][std::size_t(a.e + i)] = 1;
  for (int i = 0; i < a.t; ++i) p.pr1.H[std::size_t(a.e + i)][std::size_t(p.y.e + i)] = 1;
  for (int i = 0; i < b.t; ++i) p.pr2.H[std::size_t(b.e + i)][std::size_t(p.y.e + a.t + i)] = 1;
  p.sign = (a.t * b.e) % 2 ? -1 : 1;
  return p;
}

// Pair of maps into the two factors, as one map into the product target.
inline AffineMap pair_maps(const ProductTarget& p, const AffineMap& f, const AffineMap& g) {
  AffineMap out;
  out.y = p.y;
  std::size_t m = std::size_t(p.y.dim());
  out.B.resize(m);
  out.A.resize(m);
  out.c.resize(m);
  auto put = [&](std::size_t dst, const AffineMap& src, std::size_t row) {
    out.B[dst] = src.B[row];
    out.A[dst] = src.A[row];
    out.c[dst] = src.c[row];
  };
  for (int i = 0; i < f.y.e; ++i) put(std::size_t(i), f, std::size_t(i));
  for (int i = 0; i < g.y.e; ++i) put(std::size_t(f.y.e + i), g, std::size_t(i));
  for (int i = 0; i < f.y.t; ++i) put(std::size_t(p.y.e + i), f, std::size_t(f.y.e + i));
  for (int i = 0; i < g.y.t; ++i) put(std::size_t(p.y.e + f.y.t + i), g, std::size_t(g.y.e + i));
  return out;
}

// ---------------------------------------------------------------------------
// Canonical form of a map on a cell, up to the cell automorphisms
// theta -> M theta + K x + k (M in GL(r, Z), K, k real).

struct NormalizedMap {
  AffineMap f;
  int sign_change = 1;   // det M
  bool kernel_circle = false;  // some circle direction is collapsed by f
};

inline NormalizedMap normalize_map(const Polytope& P, std::size_t r, AffineMap f) {
  NormalizedMap out;
  const std::size_t m = f.m(), n = std::size_t(P.ambient_dim());
  const int d = P.dim();
  // restrict B to the affine hull: only pivot columns survive
  const Vec& v0 = P.vertices()[0];
  Mat B2 = zero_mat(m, n);
  for (std::size_t i = 0; i < m; ++i) {
    for (int j = 0; j < d; ++j) B2[i][std::size_t(P.pivots()[std::size_t(j)])] = dot(f.B[i], P.frame()[std::size_t(j)]);
    f.c[i] += dot(f.B[i], v0) - dot(B2[i], v0);
  }
  f.B = std::move(B2);

  const std::size_t e = std::size_t(f.y.e), t = std::size_t(f.y.t);
  ZMat At(t, ZVec(r, Z(0)));
  for (std::size_t i = 0; i < t; ++i) At[i] = f.A[e + i];
  ColumnHermite ch = column_hermite(At, t, r);
  if (ch.pivot_rows.size() < r) {
    out.kernel_circle = true;
    out.f = std::move(f);
    return out;
  }
  out.sign_change = r == 0 ? 1 : sgn(zdet(ch.m));
  for (std::size_t i = 0; i < t; ++i) f.A[e + i] = ch.h[i];
  if (r > 0) {
    // H_p: pivot rows of H, lower triangular and invertible over Q
    Mat Hp(r, Vec(r));
    for (std::size_t a = 0; a < r; ++a)
      for (std::size_t b = 0; b < r; ++b) Hp[a][b] = Q(ch.h[std::size_t(ch.pivot_rows[a])][b]);
    Mat Hpinv = *inverse(Hp);
    // shear: B_t += H K with K = -H_p^{-1} B_t,p ; same for c with real k
    Mat Bp(r), cp(r);
    for (std::size_t a = 0; a < r; ++a) {
      Bp[a] = f.B[e + std::size_t(ch.pivot_rows[a])];
      cp[a] = {f.c[e + std::size_t(ch.pivot_rows[a])]};
    }
    Mat K = mat_mul(Hpinv, Bp, r, n);
    Mat kk = mat_mul(Hpinv, cp, r, 1);
    for (std::size_t i = 0; i < t; ++i)
      for (std::size_t a = 0; a < r; ++a) {
        Q h = Q(ch.h[i][a]);
        if (h == 0) continue;
        for (std::size_t j = 0; j < n; ++j) f.B[e + i][j] -= h * K[a][j];
        f.c[e + i] -= h * kk[a][0];
      }
  }
  // reduce the remaining circle offsets modulo Z^{t-r} + H_np H_p^{-1} Z^r
  std::vector<std::size_t> np;
  std::vector<bool> is_p(t, false);
  for (int p : ch.pivot_rows) is_p[std::size_t(p)] = true;
  for (std::size_t i = 0; i < t; ++i)
    if (!is_p[i]) np.push_back(i);
  if (!np.empty()) {
    std::size_t k = np.size();
    Mat gens = zero_mat(k, k + r);
    for (std::size_t a = 0; a < k; ++a) gens[a][a] = 1;
    if (r > 0) {
      Mat Hp(r, Vec(r));
      for (std::size_t a = 0; a < r; ++a)
        for (std::size_t b = 0; b < r; ++b) Hp[a][b] = Q(ch.h[std::size_t(ch.pivot_rows[a])][b]);
      Mat Hpinv = *inverse(Hp);
      for (std::size_t a = 0; a < k; ++a)
        for (std::size_t b = 0; b < r; ++b) {
          Q s = 0;
          for (std::size_t l = 0; l < r; ++l) s += Q(ch.h[np[a]][l]) * Hpinv[l][b];
          gens[a][k + b] = s;
        }
    }
    Vec v(k);
    for (std::size_t a = 0; a < k; ++a) v[a] = f.c[e + np[a]];
    Vec red = reduce_mod_lattice(v, gens, k);
    for (std::size_t a = 0; a < k; ++a) f.c[e + np[a]] = red[a];
  }
  out.f = std::move(f);
  return out;
}

inline std::string map_key(const AffineMap& f) {
  std::string s = f.y.name() + "{";
  for (std::size_t i = 0; i < f.m(); ++i) {
    s += to_string(f.B[i]) + "|";
    for (auto& a : f.A[i]) s += a.str() + ",";
    s += "|" + to_string(f.c[i]) + ";";
  }
  return s + "}";
}

// ---------------------------------------------------------------------------
// Fibre products

// One side of a fibre product: an oriented cell and a map to the common target.
struct CellMap {
  Polytope P;
  std::size_t r = 0;
  int sign = 1;
  AffineMap f;
};

// A connected component of X1 x_Y X2. Its polytope lives in (x1, x2)
// coordinates; circle coordinates psi embed through
// theta_k = Tx_k x + Tp_k psi + t0_k for k = 1, 2.
struct FibreComponent {
  Polytope P;
  std::size_t r = 0;
  int sign = 1;
  Mat Tx[2];
  ZMat Tp[2];
  Vec t0[2];
  std::vector<std::pair<int, int>> origin;  // face of P -> (face of X1, face of X2)
  std::vector<int> branch;                  // lattice translate and residues, for ordering
};

struct NotTransverse : PreconditionError {
  using PreconditionError::PreconditionError;
};

// Any map on side k composed with the projection from the component.
inline AffineMap pull_to_component(const FibreComponent& C, int k, const AffineMap& g, std::size_t n1, std::size_t n2) {
  std::size_t n = n1 + n2, m = g.m();
  std::size_t off = k == 0 ? 0 : n1, nk = k == 0 ? n1 : n2;
  AffineMap out;
  out.y = g.y;
  out.B = zero_mat(m, n);
  out.A = ZMat(m, ZVec(C.r, Z(0)));
  out.c = g.c;
  std::size_t rk = C.Tx[k].size();
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < nk; ++j) out.B[i][off + j] = g.B[i][j];
    for (std::size_t a = 0; a < rk; ++a) {
      Q ga = Q(g.A[i][a]);
      if (ga == 0) continue;
      for (std::size_t j = 0; j < n; ++j) out.B[i][j] += ga * C.Tx[k][a][j];
      for (std::size_t j = 0; j < C.r; ++j) out.A[i][j] += g.A[i][a] * C.Tp[k][a][j];
      out.c[i] += ga * C.t0[k][a];
    }
  }
  return out;
}

namespace detail {

struct Witness {
  Vec x;
  int g1, g2;
};

// Points where aff(G1 x G2) meets {M x = b} in a single point, G1 x G2 ranging
// over face pairs with dim G1 + dim G2 <= max_dim. With `relint` the point must
// lie in the relative interior, otherwise in the closed face pair.
inline std::vector<Witness> witnesses(const Polytope& P1, const Polytope& P2, const Mat& M, const Vec& b,
                                      int max_dim, bool relint) {
  std::vector<Witness> out;
  const std::size_t n1 = std::size_t(P1.ambient_dim()), n2 = std::size_t(P2.ambient_dim());
  const std::size_t rows = M.size();
  for (int g1 = 0; g1 <= P1.top(); ++g1) {
    int d1 = P1.faces()[std::size_t(g1)].dim;
    if (d1 > max_dim) continue;
    Polytope G1 = P1.face(g1);
    for (int g2 = 0; g2 <= P2.top(); ++g2) {
      int d2 = P2.faces()[std::size_t(g2)].dim;
      if (d1 + d2 > max_dim) continue;
      Polytope G2 = P2.face(g2);
      const Vec& v1 = G1.vertices()[0];
      const Vec& v2 = G2.vertices()[0];
      std::size_t u = std::size_t(d1 + d2);
      Mat S = zero_mat(rows, u);
      Vec rhs(rows);
      for (std::size_t i = 0; i < rows; ++i) {
        Q base = 0;
        for (std::size_t j = 0; j < n1; ++j) base += M[i][j] * v1[j];
        for (std::size_t j = 0; j < n2; ++j) base += M[i][n1 + j] * v2[j];
        rhs[i] = b[i] - base;
        for (int a = 0; a < d1; ++a) {
          Q s = 0;
          for (std::size_t j = 0; j < n1; ++j) s += M[i][j] * G1.frame()[std::size_t(a)][j];
          S[i][std::size_t(a)] = s;
        }
        for (int a = 0; a < d2; ++a) {
          Q s = 0;
          for (std::size_t j = 0; j < n2; ++j) s += M[i][n1 + j] * G2.frame()[std::size_t(a)][j];
          S[i][std::size_t(d1 + a)] = s;
        }
      }
      if (u > 0 && rank(S, u) < int(u)) continue;
      auto sol = solve(S, rhs, u);
      if (!sol) continue;
      Vec x1 = v1, x2 = v2;
      for (int a = 0; a < d1; ++a) x1 = vadd(x1, vscale(G1.frame()[std::size_t(a)], (*sol)[std::size_t(a)]));
      for (int a = 0; a < d2; ++a) x2 = vadd(x2, vscale(G2.frame()[std::size_t(a)], (*sol)[std::size_t(d1 + a)]));
      bool ok = relint ? (P1.in_relint(g1, x1) && P2.in_relint(g2, x2)) : (P1.contains(x1) && P2.contains(x2));
      if (!ok) continue;
      Vec x = x1;
      x.insert(x.end(), x2.begin(), x2.end());
      out.push_back({std::move(x), g1, g2});
    }
  }
  return out;
}

// Integer range of a separable functional w1.x1 + w2.x2 + w0 over P1 x P2.
inline std::pair<Z, Z> integer_range(const Polytope& P1, const Polytope& P2, const Vec& w, const Q& w0) {
  std::size_t n1 = std::size_t(P1.ambient_dim());
  auto ext = [&](const Polytope& P, std::size_t off) {
    Q lo, hi;
    bool first = true;
    for (auto& v : P.vertices()) {
      Q s = 0;
      for (std::size_t j = 0; j < v.size(); ++j) s += w[off + j] * v[j];
      if (first || s < lo) lo = s;
      if (first || s > hi) hi = s;
      first = false;
    }
    return std::make_pair(lo, hi);
  };
  auto [l1, h1] = ext(P1, 0);
  auto [l2, h2] = ext(P2, n1);
  return {ceil_z(l1 + l2 + w0), floor_z(h1 + h2 + w0)};
}

struct FibreSystem {
  std::size_t n1 = 0, n2 = 0, r1 = 0, r2 = 0;
  Target y;
  Smith sm;
  Mat Me;        // Euclidean rows on (x1, x2)
  Vec be;
  Mat UW;        // U [-B1_t | B2_t]
  Vec Uw0;       // U (c2 - c1)_t
  std::vector<std::pair<Z, Z>> ranges;  // lattice rows s..t-1
};

inline FibreSystem setup(const CellMap& X1, const CellMap& X2) {
  if (X1.f.y != X2.f.y) throw PreconditionError("fibre product needs a common target");
  FibreSystem S;
  S.y = X1.f.y;
  S.n1 = std::size_t(X1.P.ambient_dim());
  S.n2 = std::size_t(X2.P.ambient_dim());
  S.r1 = X1.r;
  S.r2 = X2.r;
  const std::size_t e = std::size_t(S.y.e), t = std::size_t(S.y.t), n = S.n1 + S.n2;
  for (std::size_t i = 0; i < e; ++i) {
    Vec row(n);
    for (std::size_t j = 0; j < S.n1; ++j) row[j] = X1.f.B[i][j];
    for (std::size_t j = 0; j < S.n2; ++j) row[S.n1 + j] = -X2.f.B[i][j];
    S.Me.push_back(std::move(row));
    S.be.push_back(X2.f.c[i] - X1.f.c[i]);
  }
  ZMat N(t, ZVec(S.r1 + S.r2, Z(0)));
  Mat W(t, Vec(n));
  Vec w0(t);
  for (std::size_t i = 0; i < t; ++i) {
    for (std::size_t a = 0; a < S.r1; ++a) N[i][a] = X1.f.A[e + i][a];
    for (std::size_t a = 0; a < S.r2; ++a) N[i][S.r1 + a] = -X2.f.A[e + i][a];
    for (std::size_t j = 0; j < S.n1; ++j) W[i][j] = -X1.f.B[e + i][j];
    for (std::size_t j = 0; j < S.n2; ++j) W[i][S.n1 + j] = X2.f.B[e + i][j];
    w0[i] = X2.f.c[e + i] - X1.f.c[e + i];
  }
  S.sm = smith(N, t, S.r1 + S.r2);
  Mat U = to_q(S.sm.u);
  S.UW = mat_mul(U, W, t, n);
  S.Uw0 = mat_vec(U, w0);
  for (std::size_t i = std::size_t(S.sm.s); i < t; ++i) S.ranges.push_back(integer_range(X1.P, X2.P, S.UW[i], S.Uw0[i]));
  return S;
}

// Iterate over the integer boxes given by ranges.
inline void for_each_point(const std::vector<std::pair<Z, Z>>& ranges, const std::function<void(const std::vector<Z>&)>& fn) {
  for (auto& r : ranges)
    if (r.first > r.second) return;
  std::vector<Z> cur;
  for (auto& r : ranges) cur.push_back(r.first);
  for (;;) {
    fn(cur);
    std::size_t i = 0;
    while (i < cur.size()) {
      if (cur[i] < ranges[i].second) {
        cur[i] += 1;
        break;
      }
      cur[i] = ranges[i].first;
      ++i;
    }
    if (i == cur.size()) return;
  }
}

}  // namespace detail

// Oriented fibre product X1 x_Y X2 under strong transversality: every point
// of the fibre product has surjective combined differential on the face pair
// containing it. `ysign` is the orientation of Y relative to its standard
// coordinates. Components are ordered by (lattice translate, residues).
inline std::vector<FibreComponent> fibre_product(const CellMap& X1, const CellMap& X2, int ysign = 1) {
  using namespace detail;
  FibreSystem S = setup(X1, X2);
  const std::size_t e = std::size_t(S.y.e), t = std::size_t(S.y.t), m = e + t;
  const std::size_t n1 = S.n1, n2 = S.n2, n = n1 + n2;
  const std::size_t s = std::size_t(S.sm.s);
  const std::size_t rows = e + t - s;
  const Mat V = to_q(S.sm.v);
  const std::size_t rr = S.r1 + S.r2, rz = rr - s;
  std::vector<FibreComponent> out;

  // circle embedding pieces shared by all components
  auto theta_part = [&](std::size_t k, std::size_t a) {  // row of V for side k
    return k == 0 ? a : S.r1 + a;
  };

  for_each_point(S.ranges, [&](const std::vector<Z>& lambda) {
    Mat M = S.Me;
    Vec b = S.be;
    for (std::size_t i = s; i < t; ++i) {
      M.push_back(S.UW[i]);
      b.push_back(Q(lambda[i - s]) - S.Uw0[i]);
    }
    auto W = witnesses(X1.P, X2.P, M, b, int(rows), true);
    if (W.empty()) return;
    for (auto& w : W)
      if (X1.P.faces()[std::size_t(w.g1)].dim + X2.P.faces()[std::size_t(w.g2)].dim != int(rows))
        throw NotTransverse("fibre product is not transverse at " + to_string(w.x));
    std::sort(W.begin(), W.end(), [](const Witness& a, const Witness& b2) { return lex_less(a.x, b2.x); });
    const std::size_t nv = W.size();
    std::vector<Vec> verts;
    for (auto& w : W) verts.push_back(w.x);

    // faces: distinct witness sets of face pairs, keyed to the minimal pair
    std::unordered_map<Bits, std::pair<int, int>, BitsHash> best;
    for (int f1 = 0; f1 <= X1.P.top(); ++f1) {
      const Bits& F1 = X1.P.faces()[std::size_t(f1)].verts;
      for (int f2 = 0; f2 <= X2.P.top(); ++f2) {
        const Bits& F2 = X2.P.faces()[std::size_t(f2)].verts;
        Bits bits(nv);
        for (std::size_t k = 0; k < nv; ++k)
          if (X1.P.faces()[std::size_t(W[k].g1)].verts.subset_of(F1) &&
              X2.P.faces()[std::size_t(W[k].g2)].verts.subset_of(F2))
            bits.set(k);
        if (bits.empty()) continue;
        int dsum = X1.P.faces()[std::size_t(f1)].dim + X2.P.faces()[std::size_t(f2)].dim;
        auto it = best.find(bits);
        if (it == best.end()) {
          best.emplace(bits, std::make_pair(f1, f2));
        } else {
          int old = X1.P.faces()[std::size_t(it->second.first)].dim + X2.P.faces()[std::size_t(it->second.second)].dim;
          if (dsum < old) it->second = {f1, f2};
        }
      }
    }
    std::vector<FaceRec> faces;
    for (auto& [bits, pr] : best)
      faces.push_back({bits, X1.P.faces()[std::size_t(pr.first)].dim + X2.P.faces()[std::size_t(pr.second)].dim - int(rows)});
    std::vector<Halfspace> hs;
    for (auto& h : X1.P.halfspaces()) {
      Vec a = h.a;
      a.resize(n, Q(0));
      hs.push_back({a, h.b});
    }
    for (auto& h : X2.P.halfspaces()) {
      Vec a = zero_vec(n1);
      a.insert(a.end(), h.a.begin(), h.a.end());
      hs.push_back({a, h.b});
    }
    std::vector<Halfspace> kept;
    for (auto& h : hs) {
      bool all = true;
      for (auto& v : verts)
        if (dot(h.a, v) != h.b) {
          all = false;
          break;
        }
      if (!all) kept.push_back(h);
    }
    Polytope Zp = Polytope::from_lattice(int(n), verts, faces, kept);
    std::vector<std::pair<int, int>> origin(Zp.faces().size());
    for (auto& [bits, pr] : best) origin[std::size_t(Zp.face_index(bits))] = pr;

    // circle residues j_i in [0, d_i)
    std::vector<std::pair<Z, Z>> jr;
    for (std::size_t i = 0; i < s; ++i) jr.push_back({Z(0), S.sm.d[i][i] - 1});
    if (s == 0) jr.clear();
    auto build = [&](const std::vector<Z>& j) {
      FibreComponent C;
      C.P = Zp;
      C.r = rz;
      C.origin = origin;
      for (auto& l : lambda) C.branch.push_back(int(l));
      for (auto& jj : j) C.branch.push_back(int(jj));
      // psi_i = (UW_i x + Uw0_i + j_i) / d_i for i < s
      Mat Px(s, Vec(n));
      Vec p0(s);
      for (std::size_t i = 0; i < s; ++i) {
        Q di = Q(S.sm.d[i][i]);
        for (std::size_t c = 0; c < n; ++c) Px[i][c] = S.UW[i][c] / di;
        p0[i] = (S.Uw0[i] + Q(j[i])) / di;
      }
      for (std::size_t k = 0; k < 2; ++k) {
        std::size_t rk = k == 0 ? S.r1 : S.r2;
        C.Tx[k] = zero_mat(rk, n);
        C.Tp[k] = ZMat(rk, ZVec(rz, Z(0)));
        C.t0[k] = zero_vec(rk);
        for (std::size_t a = 0; a < rk; ++a) {
          std::size_t row = theta_part(k, a);
          for (std::size_t i = 0; i < s; ++i) {
            const Q& v = V[row][i];
            if (v == 0) continue;
            for (std::size_t c = 0; c < n; ++c) C.Tx[k][a][c] += v * Px[i][c];
            C.t0[k][a] += v * p0[i];
          }
          for (std::size_t i = 0; i < rz; ++i) C.Tp[k][a][i] = S.sm.v[row][s + i];
        }
      }
      // orientation from the exact sequence 0 -> TZ -> TX1 + TX2 -> TY -> 0
      const std::size_t D1 = std::size_t(X1.P.dim()) + S.r1, D2 = std::size_t(X2.P.dim()) + S.r2;
      Mat cols;  // each entry a vector in canonical coordinates of TX1 + TX2
      auto push_vec = [&](const Vec& u, const Vec& th1, const Vec& th2) {
        Vec u1(u.begin(), u.begin() + long(n1)), u2(u.begin() + long(n1), u.end());
        Vec col = X1.P.coords(u1);
        col.insert(col.end(), th1.begin(), th1.end());
        Vec c2 = X2.P.coords(u2);
        col.insert(col.end(), c2.begin(), c2.end());
        col.insert(col.end(), th2.begin(), th2.end());
        cols.push_back(std::move(col));
      };
      for (auto& R : Zp.frame()) push_vec(R, mat_vec(C.Tx[0], R), mat_vec(C.Tx[1], R));
      for (std::size_t i = 0; i < rz; ++i) {
        Vec th1(S.r1), th2(S.r2);
        for (std::size_t a = 0; a < S.r1; ++a) th1[a] = Q(C.Tp[0][a][i]);
        for (std::size_t a = 0; a < S.r2; ++a) th2[a] = Q(C.Tp[1][a][i]);
        push_vec(zero_vec(n), th1, th2);
      }
      Mat D1m = differential(X1.P, X1.P.top(), X1.f), D2m = differential(X2.P, X2.P.top(), X2.f);
      Mat Phi(m, Vec(D1 + D2));
      for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t a = 0; a < D1; ++a) Phi[i][a] = D1m[i][a];
        for (std::size_t a = 0; a < D2; ++a) Phi[i][D1 + a] = -D2m[i][a];
      }
      for (std::size_t i = 0; i < m; ++i) {
        Vec ei = zero_vec(m);
        ei[i] = 1;
        auto c = solve(Phi, ei, D1 + D2);
        if (!c) throw NotTransverse("fibre product differential is not surjective");
        cols.push_back(*c);
      }
      int sd = det_sign(cols);
      if (sd == 0) throw NotTransverse("degenerate fibre product frame");
      int parity = int((m * D2) % 2);
      C.sign = ysign * X1.sign * X2.sign * sd * (parity ? -1 : 1);
      out.push_back(std::move(C));
    };
    if (jr.empty()) {
      build({});
    } else {
      for_each_point(jr, build);
    }
  });
  return out;
}

// Set-theoretic fibre product: the polytopes {f1(p) = f2(p') + lambda} with
// no transversality assumption and no orientation. Only for cells without
// circle factors.
inline std::vector<Polytope> fibre_product_sets(const CellMap& X1, const CellMap& X2) {
  using namespace detail;
  if (X1.r != 0 || X2.r != 0) throw PreconditionError("set-theoretic fibre product needs cells without circles");
  FibreSystem S = setup(X1, X2);
  const std::size_t t = std::size_t(S.y.t);
  std::vector<Polytope> out;
  for_each_point(S.ranges, [&](const std::vector<Z>& lambda) {
    Mat M = S.Me;
    Vec b = S.be;
    for (std::size_t i = 0; i < t; ++i) {
      M.push_back(S.UW[i]);
      b.push_back(Q(lambda[i]) - S.Uw0[i]);
    }
    auto W = witnesses(X1.P, X2.P, M, b, X1.P.dim() + X2.P.dim(), false);
    if (W.empty()) return;
    std::vector<Vec> pts;
    for (auto& w : W) pts.push_back(w.x);
    out.push_back(Polytope::hull(int(S.n1 + S.n2), pts));
  });
  std::sort(out.begin(), out.end(), [](const Polytope& a, const Polytope& b) {
    return std::lexicographical_compare(a.vertices().begin(), a.vertices().end(), b.vertices().begin(),
                                        b.vertices().end(), lex_less);
  });
  return out;
}

}  // namespace corner
