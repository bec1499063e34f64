#pragma once

// Finite groups acting affinely on polytopes: representations, orbifold
// strata X^{Gamma', rho}, and the fibres of the forgetful map to X.

#include <set>

#include "corner/generator.hpp"

namespace corner {

class FiniteGroup {
 public:
  FiniteGroup() = default;
  FiniteGroup(std::vector<std::string> names, std::vector<std::vector<int>> table)
      : names_(std::move(names)), mul_(std::move(table)) {
    validate();
  }

  static FiniteGroup cyclic(int n) {
    std::vector<std::string> names;
    std::vector<std::vector<int>> t(std::size_t(n), std::vector<int>(static_cast<std::size_t>(n)));
    for (int a = 0; a < n; ++a) {
      names.push_back(a == 0 ? "e" : a == 1 ? "g" : "g^" + std::to_string(a));
      for (int b = 0; b < n; ++b) t[std::size_t(a)][std::size_t(b)] = (a + b) % n;
    }
    return FiniteGroup(names, t);
  }

  static FiniteGroup product(const FiniteGroup& a, const FiniteGroup& b) {
    int na = a.order(), nb = b.order();
    std::vector<std::string> names;
    std::vector<std::vector<int>> t(static_cast<std::size_t>(na * nb), std::vector<int>(static_cast<std::size_t>(na * nb)));
    for (int i = 0; i < na * nb; ++i) {
      names.push_back("(" + a.name(i / nb) + "," + b.name(i % nb) + ")");
      for (int j = 0; j < na * nb; ++j) t[std::size_t(i)][std::size_t(j)] = a.mul(i / nb, j / nb) * nb + b.mul(i % nb, j % nb);
    }
    return FiniteGroup(names, t);
  }

  // Permutations of {0..n-1} in lexicographic order; composition (pq)(i) = p(q(i)).
  static FiniteGroup symmetric(int n) {
    std::vector<std::vector<int>> perms;
    std::vector<int> p(static_cast<std::size_t>(n));
    std::iota(p.begin(), p.end(), 0);
    do perms.push_back(p);
    while (std::next_permutation(p.begin(), p.end()));
    std::vector<std::string> names;
    for (auto& q : perms) {
      std::string s = "[";
      for (int v : q) s += std::to_string(v);
      names.push_back(s + "]");
    }
    std::vector<std::vector<int>> t(perms.size(), std::vector<int>(perms.size()));
    for (std::size_t a = 0; a < perms.size(); ++a)
      for (std::size_t b = 0; b < perms.size(); ++b) {
        std::vector<int> c(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) c[std::size_t(i)] = perms[a][std::size_t(perms[b][std::size_t(i)])];
        t[a][b] = int(std::find(perms.begin(), perms.end(), c) - perms.begin());
      }
    return FiniteGroup(names, t);
  }

  int order() const { return int(mul_.size()); }
  int identity() const { return e_; }
  int mul(int a, int b) const { return mul_[std::size_t(a)][std::size_t(b)]; }
  const std::string& name(int a) const { return names_[std::size_t(a)]; }
  const std::vector<std::string>& names() const { return names_; }
  const std::vector<std::vector<int>>& table() const { return mul_; }
  int inverse(int a) const {
    for (int b = 0; b < order(); ++b)
      if (mul(a, b) == e_) return b;
    return -1;
  }
  int element_order(int a) const {
    int k = 1;
    for (int x = a; x != e_; x = mul(x, a)) ++k;
    return k;
  }
  int conj(int g, int a) const { return mul(mul(g, a), inverse(g)); }

  // Greedy generating set: each element not in the span of the earlier ones.
  std::vector<int> generators() const {
    std::vector<int> gens;
    std::set<int> span = {e_};
    for (int a = 0; a < order(); ++a) {
      if (span.count(a)) continue;
      gens.push_back(a);
      span = closure(gens);
    }
    return gens;
  }

  std::set<int> closure(const std::vector<int>& gens) const {
    std::set<int> s = {e_};
    std::vector<int> todo = {e_};
    while (!todo.empty()) {
      int x = todo.back();
      todo.pop_back();
      for (int g : gens) {
        int y = mul(x, g);
        if (s.insert(y).second) todo.push_back(y);
      }
    }
    return s;
  }

  bool is_cyclic() const {
    for (int a = 0; a < order(); ++a)
      if (element_order(a) == order()) return true;
    return false;
  }

 private:
  void validate() {
    const std::size_t n = mul_.size();
    if (n == 0 || names_.size() != n) throw SchemaError("group table must be square with one name per element");
    for (auto& row : mul_) {
      if (row.size() != n) throw SchemaError("group table must be square");
      for (int v : row)
        if (v < 0 || std::size_t(v) >= n) throw SchemaError("group table entry out of range");
    }
    e_ = -1;
    for (std::size_t a = 0; a < n && e_ < 0; ++a) {
      bool ok = true;
      for (std::size_t b = 0; b < n; ++b)
        if (mul_[a][b] != int(b) || mul_[b][a] != int(b)) ok = false;
      if (ok) e_ = int(a);
    }
    if (e_ < 0) throw PreconditionError("group table has no identity");
    for (std::size_t a = 0; a < n; ++a) {
      if (inverse(int(a)) < 0) throw PreconditionError("group element without inverse");
      for (std::size_t b = 0; b < n; ++b)
        for (std::size_t c = 0; c < n; ++c)
          if (mul(mul(int(a), int(b)), int(c)) != mul(int(a), mul(int(b), int(c))))
            throw PreconditionError("group table is not associative");
    }
  }

  std::vector<std::string> names_;
  std::vector<std::vector<int>> mul_;
  int e_ = 0;
};

// x -> L x + t
struct AffineAction {
  Mat L;
  Vec t;
  Vec apply(const Vec& x) const { return vadd(mat_vec(L, x), t); }
  Vec apply_linear(const Vec& v) const { return mat_vec(L, v); }
};

struct GroupAction {
  FiniteGroup G;
  std::vector<AffineAction> act;  // one per element
};

// Checks the homomorphism property and that every element permutes the
// components (as vertex sets). Returns perm[g][i] = image component of i.
inline std::vector<std::vector<int>> validate_action(const GroupAction& a, const std::vector<Polytope>& comps) {
  const int n = a.G.order();
  if (int(a.act.size()) != n) throw SchemaError("action needs one affine map per group element");
  if (comps.empty()) throw SchemaError("action needs at least one component");
  const std::size_t amb = std::size_t(comps[0].ambient_dim());
  for (auto& c : comps)
    if (std::size_t(c.ambient_dim()) != amb) throw PreconditionError("components must share the ambient space");
  for (auto& m : a.act) {
    if (m.L.size() != amb || m.t.size() != amb) throw SchemaError("action map has wrong size");
    for (auto& row : m.L)
      if (row.size() != amb) throw SchemaError("action map has wrong size");
  }
  auto eq = [&](const AffineAction& x, const AffineAction& y) { return x.L == y.L && x.t == y.t; };
  for (int g = 0; g < n; ++g)
    for (int h = 0; h < n; ++h) {
      const AffineAction& A = a.act[std::size_t(g)];
      const AffineAction& B = a.act[std::size_t(h)];
      AffineAction C{mat_mul(A.L, B.L, amb, amb), A.apply(B.t)};
      if (!eq(C, a.act[std::size_t(a.G.mul(g, h))])) throw PreconditionError("action is not a homomorphism");
    }
  std::vector<std::vector<int>> perm(std::size_t(n), std::vector<int>(comps.size(), -1));
  for (int g = 0; g < n; ++g)
    for (std::size_t i = 0; i < comps.size(); ++i) {
      std::vector<Vec> img;
      for (auto& v : comps[i].vertices()) img.push_back(a.act[std::size_t(g)].apply(v));
      std::sort(img.begin(), img.end(), lex_less);
      for (std::size_t j = 0; j < comps.size(); ++j)
        if (comps[j].vertices() == img) perm[std::size_t(g)][i] = int(j);
      if (perm[std::size_t(g)][i] < 0) throw PreconditionError("action does not permute the components");
    }
  return perm;
}

// Face of component j hit by face f of component i under element g.
inline int image_face(const AffineAction& m, const Polytope& from, int f, const Polytope& to) {
  Bits b(to.nverts());
  for (int v : from.faces()[std::size_t(f)].verts.indices()) {
    Vec w = m.apply(from.vertices()[std::size_t(v)]);
    for (std::size_t k = 0; k < to.nverts(); ++k)
      if (to.vertices()[k] == w) b.set(k);
  }
  return to.face_index(b);
}

// ---------------------------------------------------------------------------
// Representations

using Character = std::vector<Q>;  // value per group element

struct RealRep {
  std::vector<Mat> mats;  // one per group element
  std::size_t dim() const { return mats.empty() ? 0 : mats[0].size(); }
};

inline Q trace(const Mat& m) {
  Q s = 0;
  for (std::size_t i = 0; i < m.size(); ++i) s += m[i][i];
  return s;
}

inline Character character(const RealRep& r) {
  Character c;
  for (auto& m : r.mats) c.push_back(trace(m));
  return c;
}

inline Q trivial_multiplicity(const FiniteGroup& G, const Character& c) {
  Q s = 0;
  for (auto& v : c) s += v;
  return s / Q(G.order());
}

// A virtual representation given by characters of its two parts.
struct VirtualRep {
  Character plus, minus;
  int dim(const FiniteGroup& G) const {
    Q d = plus[std::size_t(G.identity())] - (minus.empty() ? Q(0) : minus[std::size_t(G.identity())]);
    return int(to_z(d));
  }
};

// W = W^t + W^nt with W^nt the kernel of the averaging projector.
struct RepSplit {
  Mat fixed;   // rows: basis of the invariant part
  Mat moving;  // rows: basis of the invariant complement
};

inline RepSplit split_rep(const FiniteGroup& G, const RealRep& r) {
  const std::size_t d = r.dim();
  Mat P = zero_mat(d, d);
  for (auto& m : r.mats)
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j < d; ++j) P[i][j] += m[i][j] / Q(G.order());
  RepSplit s;
  // image of P (as row vectors: columns of P)
  Mat cols = transpose(P, d);
  Echelon e = rref(cols, d);
  s.fixed = e.rows;
  s.moving = nullspace(P, d);
  return s;
}

// Nontrivial part of a character: subtract the trivial multiplicity.
inline Character nontrivial_part(const FiniteGroup& G, const Character& c) {
  Q k = trivial_multiplicity(G, c);
  Character out = c;
  for (auto& v : out) v -= k;
  return out;
}

// ---------------------------------------------------------------------------
// Homomorphisms

// All injective homomorphisms H -> G, as image vectors indexed by H's elements.
inline std::vector<std::vector<int>> injective_homs(const FiniteGroup& H, const FiniteGroup& G) {
  std::vector<std::vector<int>> out;
  std::vector<int> gens = H.generators();
  std::vector<int> img(gens.size());
  std::function<void(std::size_t)> rec = [&](std::size_t k) {
    if (k == gens.size()) {
      // extend along words in the generators, checking consistency
      std::vector<int> lam(std::size_t(H.order()), -1);
      lam[std::size_t(H.identity())] = G.identity();
      std::vector<int> todo = {H.identity()};
      while (!todo.empty()) {
        int x = todo.back();
        todo.pop_back();
        for (std::size_t i = 0; i < gens.size(); ++i) {
          int y = H.mul(x, gens[i]);
          int v = G.mul(lam[std::size_t(x)], img[i]);
          if (lam[std::size_t(y)] < 0) {
            lam[std::size_t(y)] = v;
            todo.push_back(y);
          } else if (lam[std::size_t(y)] != v) {
            return;
          }
        }
      }
      for (int a = 0; a < H.order(); ++a)
        for (int b = 0; b < H.order(); ++b)
          if (lam[std::size_t(H.mul(a, b))] != G.mul(lam[std::size_t(a)], lam[std::size_t(b)])) return;
      std::set<int> s(lam.begin(), lam.end());
      if (int(s.size()) != H.order()) return;
      out.push_back(std::move(lam));
      return;
    }
    for (int g = 0; g < G.order(); ++g) {
      if (G.element_order(g) != H.element_order(gens[k])) continue;
      img[k] = g;
      rec(k + 1);
    }
  };
  rec(0);
  std::sort(out.begin(), out.end());
  return out;
}

inline std::vector<int> conjugate_hom(const FiniteGroup& G, int g, const std::vector<int>& lam) {
  std::vector<int> out;
  for (int v : lam) out.push_back(G.conj(g, v));
  return out;
}

inline std::vector<int> centralizer(const FiniteGroup& G, const std::vector<int>& elems) {
  std::vector<int> out;
  for (int g = 0; g < G.order(); ++g) {
    bool ok = true;
    for (int a : elems)
      if (G.mul(g, a) != G.mul(a, g)) ok = false;
    if (ok) out.push_back(g);
  }
  return out;
}

// Partition homomorphisms into classes under conjugation by `by`; returns
// the lexicographically least representative of each class.
inline std::vector<std::vector<int>> hom_classes(const FiniteGroup& G, const std::vector<std::vector<int>>& homs,
                                                 const std::vector<int>& by) {
  std::set<std::vector<int>> seen;
  std::vector<std::vector<int>> reps;
  for (auto& lam : homs) {
    if (seen.count(lam)) continue;
    std::vector<int> best = lam;
    for (int g : by) {
      auto c = conjugate_hom(G, g, lam);
      seen.insert(c);
      best = std::min(best, c);
    }
    reps.push_back(best);
  }
  std::sort(reps.begin(), reps.end());
  reps.erase(std::unique(reps.begin(), reps.end()), reps.end());
  return reps;
}

// ---------------------------------------------------------------------------
// Slices and tangent representations

// P intersected with {M x = b}, or nothing when empty.
inline std::optional<Polytope> slice(const Polytope& P, const Mat& M, const Vec& b) {
  const std::size_t n = std::size_t(P.ambient_dim());
  Polytope pt = Polytope::point(Vec{});
  Mat M2 = M;
  for (auto& row : M2) row.resize(n, Q(0));
  auto W = detail::witnesses(P, pt, M2, b, P.dim(), false);
  if (W.empty()) return std::nullopt;
  std::vector<Vec> pts;
  for (auto& w : W) pts.push_back(Vec(w.x.begin(), w.x.begin() + long(n)));
  return Polytope::hull(int(n), pts);
}

// Fixed locus of a set of elements inside P.
inline std::optional<Polytope> fixed_locus(const Polytope& P, const GroupAction& a, const std::vector<int>& elems) {
  const std::size_t n = std::size_t(P.ambient_dim());
  Mat M;
  Vec b;
  for (int g : elems) {
    const AffineAction& m = a.act[std::size_t(g)];
    for (std::size_t i = 0; i < n; ++i) {
      Vec row = m.L[i];
      row[i] -= 1;
      M.push_back(row);
      b.push_back(-m.t[i]);
    }
  }
  return slice(P, M, b);
}

// Linear parts of the given elements on the direction space of P, in P's
// canonical coordinates.
inline RealRep tangent_rep(const Polytope& P, const GroupAction& a, const std::vector<int>& elems) {
  RealRep r;
  const std::size_t d = std::size_t(P.dim());
  for (int g : elems) {
    Mat T = zero_mat(d, d);
    for (std::size_t j = 0; j < d; ++j) {
      Vec w = P.coords(a.act[std::size_t(g)].apply_linear(P.frame()[j]));
      for (std::size_t i = 0; i < d; ++i) T[i][j] = w[i];
    }
    r.mats.push_back(std::move(T));
  }
  return r;
}

inline std::vector<int> stabilizer(const GroupAction& a, const Vec& p) {
  std::vector<int> out;
  for (int g = 0; g < a.G.order(); ++g)
    if (a.act[std::size_t(g)].apply(p) == p) out.push_back(g);
  return out;
}

// Pfaffian of an even antisymmetric matrix, by expansion along the first row.
inline Q pfaffian(const Mat& A) {
  const std::size_t n = A.size();
  if (n == 0) return 1;
  if (n % 2) return 0;
  Q s = 0;
  for (std::size_t j = 1; j < n; ++j) {
    if (A[0][j] == 0) continue;
    std::vector<std::size_t> keep;
    for (std::size_t k = 1; k < n; ++k)
      if (k != j) keep.push_back(k);
    Mat sub(keep.size(), Vec(keep.size()));
    for (std::size_t a = 0; a < keep.size(); ++a)
      for (std::size_t b = 0; b < keep.size(); ++b) sub[a][b] = A[keep[a]][keep[b]];
    Q term = A[0][j] * pfaffian(sub);
    s += (j % 2 == 1) ? term : Q(-term);
  }
  return s;
}

// ---------------------------------------------------------------------------
// Strata

struct StratumPiece {
  Polytope fix;
  std::vector<int> lambda;  // image of each element of Gamma'
  Q weight;                 // 1 / |centralizer of the image|
  int dim = 0;
  int sign = 0;  // orientation relative to the canonical frame; 0 when unoriented
};

struct StratumResult {
  int n = 0;        // dim X
  int rho_dim = 0;  // dim rho
  std::vector<StratumPiece> pieces;
};

// Orientation of the normal space from the Pfaffian of
// Omega_ij = <S n_i, n_j>, S = T(g) - T(g)^{-1}, g the first generator of
// Gamma' and <,> the averaged inner product. Needs Gamma' cyclic of odd order.
inline int stratum_sign(const FiniteGroup& H, const Polytope& X, int xsign, const RealRep& T, const RepSplit& sp,
                        const Polytope& fix) {
  if (H.order() % 2 == 0) throw PreconditionError("strata are oriented only for groups of odd order");
  if (!H.is_cyclic()) throw PreconditionError("stratum orientation is implemented for cyclic groups of odd order only");
  int g = -1;
  for (int a = 0; a < H.order() && g < 0; ++a)
    if (H.element_order(a) == H.order()) g = a;
  const std::size_t d = std::size_t(X.dim());
  const Mat& Tg = T.mats[std::size_t(g)];
  const Mat& Tgi = T.mats[std::size_t(H.inverse(g))];
  Mat S = zero_mat(d, d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) S[i][j] = Tg[i][j] - Tgi[i][j];
  Mat Gram = zero_mat(d, d);
  for (auto& m : T.mats)
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j < d; ++j)
        for (std::size_t k = 0; k < d; ++k) Gram[i][j] += m[k][i] * m[k][j];
  const Mat& N = sp.moving;
  std::size_t k = N.size();
  Mat Om(k, Vec(k));
  for (std::size_t a = 0; a < k; ++a) {
    Vec Sn = mat_vec(S, N[a]);
    Vec GSn = mat_vec(Gram, Sn);
    for (std::size_t b = 0; b < k; ++b) Om[a][b] = dot(GSn, N[b]);
  }
  Q pf = pfaffian(Om);
  if (pf == 0) throw PreconditionError("degenerate normal form for the stratum orientation");
  Mat full;
  for (auto& R : fix.frame()) full.push_back(X.coords(R));
  for (auto& v : N) full.push_back(v);
  int s = d == 0 ? 1 : det_sign(full);
  return xsign * s * sgn(pf);
}

// The stratum X^{H, rho} of [X / G]: one piece Fix(lambda(H)) per
// G-conjugacy class of injective lambda whose normal type matches rho.
inline StratumResult orbifold_stratum(const Polytope& X, const GroupAction& a, const FiniteGroup& H,
                                      const VirtualRep& rho, bool orient = false, int xsign = 1) {
  validate_action(a, {X});
  if (rho.plus.size() != std::size_t(H.order())) throw SchemaError("rho needs one character value per element");
  for (auto& v : rho.minus)
    if (v != 0) throw PreconditionError("rho must be an honest representation: its negative part is nonzero");
  if (trivial_multiplicity(H, rho.plus) != 0) throw PreconditionError("rho must have no trivial summand");
  if (orient && H.order() % 2 == 0) throw PreconditionError("strata are oriented only for groups of odd order");
  StratumResult res;
  res.n = X.dim();
  res.rho_dim = rho.dim(H);
  std::vector<int> all(std::size_t(a.G.order()));
  std::iota(all.begin(), all.end(), 0);
  auto homs = injective_homs(H, a.G);
  for (auto& lam : hom_classes(a.G, homs, all)) {
    auto fix = fixed_locus(X, a, lam);
    if (!fix) continue;
    RealRep T = tangent_rep(X, a, lam);
    if (nontrivial_part(H, character(T)) != rho.plus) continue;
    StratumPiece p;
    p.fix = *fix;
    p.lambda = lam;
    p.weight = Q(1) / Q(int(centralizer(a.G, lam).size()));
    p.dim = fix->dim();
    if (orient) p.sign = stratum_sign(H, X, xsign, T, split_rep(H, T), *fix);
    res.pieces.push_back(std::move(p));
  }
  return res;
}

// Size of the fibre of the forgetful map over p: Stab(p)-classes of
// injective lambda into Stab(p) with normal type rho.
inline int iota_fibre(const Polytope& X, const GroupAction& a, const FiniteGroup& H, const VirtualRep& rho,
                      const Vec& p) {
  std::vector<int> stab = stabilizer(a, p);
  std::set<int> in(stab.begin(), stab.end());
  std::vector<std::vector<int>> homs;
  for (auto& lam : injective_homs(H, a.G)) {
    bool ok = true;
    for (int v : lam)
      if (!in.count(v)) ok = false;
    if (!ok) continue;
    if (nontrivial_part(H, character(tangent_rep(X, a, lam))) != rho.plus) continue;
    homs.push_back(lam);
  }
  return int(hom_classes(a.G, homs, stab).size());
}

}  // namespace corner
