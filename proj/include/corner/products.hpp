#pragma once

// Fibre-product operations on chains: cup and cap products, the identity
// cochain, pullback, the duality map from cochains to chains, and checks of
// the fibre-product identities these rest on.
//
// A cochain generator is stored with the orientation TX = TY + Ker df
// (target first) built from its coorientation and the standard orientation
// of Y. With that storage d acts as the boundary map, the cup product is the
// oriented fibre product, and duality only multiplies by Y's orientation.

#include "corner/chains.hpp"

namespace corner {

using Cochain = Chain;

inline int cochain_grade(const Generator& g) { return g.codegree(); }

inline void validate_cochain(const Chain& c) {
  for (auto& [k, t] : c.terms())
    if (!is_submersion(t.g.P, t.g.f)) throw PreconditionError("cochain generator is not a submersion onto its target");
}

using OutMap = std::function<AffineMap(const FibreComponent&)>;

// Generators of X1 x_Y X2 with tags paired face by face.
inline std::vector<Generator> fibre_generators(const Generator& a, const Generator& b, int ysign, const OutMap& out) {
  std::vector<Generator> res;
  for (auto& C : fibre_product(a.cell(), b.cell(), ysign)) {
    Generator g;
    g.P = C.P;
    g.r = C.r;
    g.sign = C.sign;
    g.f = out(C);
    g.tag.origin = TagOrigin::Product;
    for (auto& [f1, f2] : C.origin)
      g.tag.labels.push_back(label_union(a.tag.labels[std::size_t(f1)], b.tag.labels[std::size_t(f2)]));
    res.push_back(std::move(g));
  }
  return res;
}

// Map of the first factor, pulled back to a component.
inline OutMap first_map(const Generator& a, const Generator& b) {
  std::size_t n1 = std::size_t(a.P.ambient_dim()), n2 = std::size_t(b.P.ambient_dim());
  AffineMap f = a.f;
  return [=](const FibreComponent& C) { return pull_to_component(C, 0, f, n1, n2); };
}

inline Chain fibre_chain(const Chain& x, const Chain& y, int ysign = 1) {
  Chain out(x.ring());
  for (auto& [k1, t1] : x.terms())
    for (auto& [k2, t2] : y.terms())
      for (auto& g : fibre_generators(t1.g, t2.g, ysign, first_map(t1.g, t2.g))) out.add(g, t1.coeff * t2.coeff);
  return out;
}

inline void require_common_target(const Chain& a, const Chain& b) {
  std::optional<Target> y;
  for (const Chain* c : {&a, &b})
    for (auto& [k, t] : c->terms()) {
      if (y && *y != t.g.f.y) throw PreconditionError("mismatched targets");
      y = t.g.f.y;
    }
}

inline Cochain cup(const Cochain& a, const Cochain& b) {
  require_common_target(a, b);
  validate_cochain(a);
  validate_cochain(b);
  return fibre_chain(a, b);
}

inline Chain cap(const Chain& a, const Cochain& b) {
  require_common_target(a, b);
  validate_cochain(b);
  return fibre_chain(a, b);
}

inline Cochain coboundary(const Cochain& c) { return boundary(c); }

// [Y, id_Y, C_Y] for compact Y: a point times T^m with A = I.
inline Generator identity_generator(Target y) {
  if (!y.compact()) throw PreconditionError("the identity cochain needs a compact target");
  Generator g;
  g.P = Polytope::point(Vec{});
  g.r = std::size_t(y.t);
  g.f.y = y;
  g.f.B = zero_mat(std::size_t(y.t), 0);
  g.f.A = ZMat(std::size_t(y.t), ZVec(std::size_t(y.t), Z(0)));
  for (int i = 0; i < y.t; ++i) g.f.A[std::size_t(i)][std::size_t(i)] = 1;
  g.f.c = zero_vec(std::size_t(y.t));
  g.tag = Tag{{Label{}}, TagOrigin::Identity};
  return g;
}

inline Cochain identity_cochain(Target y) {
  Chain c;
  c.add(identity_generator(y), 1);
  return c;
}

// Cochain to chain: the stored orientation already composes coorientation
// with Y's standard orientation; `ysign` reverses Y.
inline Chain duality(const Cochain& c, int ysign = 1) {
  validate_cochain(c);
  Chain out(c.ring());
  for (auto& [k, t] : c.terms()) {
    Generator g = t.g;
    g.tag.origin = t.g.tag.origin;  // co-gauge labels reused as gauge labels
    out.add(g, t.coeff * ysign);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Pullback along h : Y -> Z

// The cell standing in for Y: a point (compact part only) or a box around
// the preimage of the given points, times T^t, mapped by h.
inline Generator target_cell(const TargetMap& h, const std::vector<Vec>& zpoints) {
  validate_target_map(h);
  const Target& Y = h.from;
  const std::size_t e = std::size_t(Y.e), t = std::size_t(Y.t), mz = std::size_t(h.to.dim());
  Generator g;
  g.r = t;
  g.f.y = h.to;
  g.f.c = h.c;
  g.f.A = ZMat(mz, ZVec(t, Z(0)));
  for (std::size_t i = 0; i < mz; ++i)
    for (std::size_t a = 0; a < t; ++a) g.f.A[i][a] = to_z(h.H[i][e + a]);
  if (e == 0) {
    g.P = Polytope::point(Vec{});
    g.f.B = zero_mat(mz, 0);
  } else {
    // Euclidean part of Y must embed into Euclidean rows of Z
    std::size_t ez = std::size_t(h.to.e);
    Mat He(ez, Vec(e));
    for (std::size_t i = 0; i < ez; ++i)
      for (std::size_t j = 0; j < e; ++j) He[i][j] = h.H[i][j];
    if (rank(He, e) < int(e)) throw PreconditionError("pullback needs a proper map: the Euclidean part of h is not injective");
    Vec lo(e), hi(e);
    bool first = true;
    for (auto& z : zpoints) {
      Vec rhs(ez);
      for (std::size_t i = 0; i < ez; ++i) rhs[i] = z[i] - h.c[i];
      // least-squares-free: solve on a maximal independent row subset
      Echelon E = rref(transpose(He, e), ez);
      Mat S;
      Vec sr;
      for (int p : E.pivots) {
        S.push_back(He[std::size_t(p)]);
        sr.push_back(rhs[std::size_t(p)]);
      }
      Vec y = *solve(S, sr, e);
      for (std::size_t j = 0; j < e; ++j) {
        if (first || y[j] < lo[j]) lo[j] = y[j];
        if (first || y[j] > hi[j]) hi[j] = y[j];
      }
      first = false;
    }
    if (first) lo = hi = zero_vec(e);
    for (std::size_t j = 0; j < e; ++j) {
      lo[j] -= 1;
      hi[j] += 1;
    }
    g.P = Polytope::box(lo, hi);
    g.f.B = zero_mat(mz, e);
    for (std::size_t i = 0; i < mz; ++i)
      for (std::size_t j = 0; j < e; ++j) g.f.B[i][j] = h.H[i][j];
  }
  g.tag = Tag{std::vector<Label>(g.P.faces().size(), Label{}), TagOrigin::Identity};
  return g;
}

inline Cochain pullback(const TargetMap& h, const Cochain& c) {
  validate_target_map(h);
  std::vector<Vec> zpts;
  for (auto& [k, t] : c.terms()) {
    if (t.g.f.y != h.to) throw PreconditionError("pullback target does not match the cochain's target");
    for (auto& v : t.g.P.vertices()) zpts.push_back(t.g.f.eval(v));
  }
  Generator cell = target_cell(h, zpts);
  const std::size_t ey = std::size_t(h.from.e);
  Chain out(c.ring());
  for (auto& [k, t] : c.terms()) {
    // the identity of Y on the cell, as the output map
    AffineMap idY;
    idY.y = h.from;
    std::size_t my = std::size_t(h.from.dim());
    idY.B = zero_mat(my, ey);
    idY.A = ZMat(my, ZVec(std::size_t(h.from.t), Z(0)));
    idY.c = zero_vec(my);
    for (std::size_t j = 0; j < ey; ++j) idY.B[j][j] = 1;
    for (int a = 0; a < h.from.t; ++a) idY.A[ey + std::size_t(a)][std::size_t(a)] = 1;
    std::size_t n1 = ey, n2 = std::size_t(t.g.P.ambient_dim());
    for (auto& g : fibre_generators(cell, t.g, 1, [&](const FibreComponent& C) {
           return pull_to_component(C, 0, idY, n1, n2);
         })) {
      if (ey == 0) {
        out.add(g, t.coeff);
        continue;
      }
      // the Euclidean coordinates of Y are functions of x on the component: drop them
      Mat M = zero_mat(n2, n1 + n2);
      for (std::size_t j = 0; j < n2; ++j) M[j][n1 + j] = 1;
      out.add(reembed_generator(g, M, zero_vec(n2)), t.coeff);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Swapping the two coordinate blocks of a fibre product

inline Mat block_swap(std::size_t n1, std::size_t n2) {
  Mat M = zero_mat(n1 + n2, n1 + n2);
  for (std::size_t j = 0; j < n1; ++j) M[n2 + j][j] = 1;
  for (std::size_t j = 0; j < n2; ++j) M[j][n1 + j] = 1;
  return M;
}

// ---------------------------------------------------------------------------
// Identity reports

struct IdentityCheck {
  std::string name;
  Chain lhs, rhs;
  bool ok() const { return lhs == rhs; }
};

inline int parity_sign(long v) { return (v % 2 + 2) % 2 ? -1 : 1; }

// gamma cup delta = (-1)^{kl} delta cup gamma, compared after swapping blocks.
inline IdentityCheck check_supercommutative(const Cochain& a, const Cochain& b) {
  IdentityCheck r{"supercommutativity", Chain(a.ring()), cup(b, a)};
  for (auto& [k1, t1] : a.terms())
    for (auto& [k2, t2] : b.terms()) {
      std::size_t n1 = std::size_t(t1.g.P.ambient_dim()), n2 = std::size_t(t2.g.P.ambient_dim());
      int s = parity_sign(long(cochain_grade(t1.g)) * cochain_grade(t2.g));
      for (auto& g : fibre_generators(t1.g, t2.g, 1, first_map(t1.g, t2.g)))
        r.lhs.add(reembed_generator(g, block_swap(n1, n2), zero_vec(n1 + n2)), t1.coeff * t2.coeff * s);
    }
  return r;
}

// d(gamma cup delta) = d gamma cup delta + (-1)^k gamma cup d delta, per
// homogeneous pieces of gamma.
inline IdentityCheck check_cup_leibniz(const Cochain& a, const Cochain& b) {
  IdentityCheck r{"leibniz", coboundary(cup(a, b)), fibre_chain(coboundary(a), b)};
  for (auto& [k1, t1] : a.terms()) {
    Chain single(a.ring());
    single.add(t1.g, t1.coeff);
    r.rhs.add(fibre_chain(single, coboundary(b)), parity_sign(cochain_grade(t1.g)));
  }
  return r;
}

inline IdentityCheck check_cup_associative(const Cochain& a, const Cochain& b, const Cochain& c) {
  return {"associativity", cup(cup(a, b), c), cup(a, cup(b, c))};
}

inline std::vector<IdentityCheck> check_cup_identity(const Cochain& a, Target y) {
  Cochain one = identity_cochain(y);
  return {{"left identity", cup(one, a), a}, {"right identity", cup(a, one), a}};
}

struct DGAReport {
  std::vector<IdentityCheck> checks;
  bool ok() const {
    for (auto& c : checks)
      if (!c.ok()) return false;
    return true;
  }
};

inline DGAReport check_dga(const Cochain& a, const Cochain& b, const Cochain& c) {
  DGAReport rep;
  rep.checks.push_back(check_supercommutative(a, b));
  rep.checks.push_back(check_cup_leibniz(a, b));
  rep.checks.push_back(check_cup_associative(a, b, c));
  std::optional<Target> y;
  for (auto& [k, t] : a.terms()) y = t.g.f.y;
  if (y && y->compact())
    for (auto& ch : check_cup_identity(a, *y)) rep.checks.push_back(std::move(ch));
  return rep;
}

// (gamma cap delta) cap eps = gamma cap (delta cup eps)
inline IdentityCheck check_cap_module(const Chain& a, const Cochain& b, const Cochain& c) {
  return {"cap module", cap(cap(a, b), c), cap(a, cup(b, c))};
}

// boundary(gamma cap delta) = (boundary gamma) cap delta + (-1)^{dim Y - k} gamma cap d delta
inline IdentityCheck check_cap_leibniz(const Chain& a, const Cochain& b) {
  IdentityCheck r{"cap leibniz", boundary(cap(a, b)), cap(boundary(a), b)};
  for (auto& [k1, t1] : a.terms()) {
    Chain single(a.ring());
    single.add(t1.g, t1.coeff);
    r.rhs.add(fibre_chain(single, coboundary(b)), parity_sign(t1.g.f.y.dim() - t1.g.vdim()));
  }
  return r;
}

inline IdentityCheck check_cap_identity(const Chain& a, Target y) {
  return {"cap identity", cap(a, identity_cochain(y)), a};
}

// h_*(alpha cap h^* beta) = h_*(alpha) cap beta
inline IdentityCheck check_projection_formula(const Chain& alpha, const Cochain& beta, const TargetMap& h) {
  return {"projection formula", pushforward(h, cap(alpha, pullback(h, beta))), cap(pushforward(h, alpha), beta)};
}

// ---------------------------------------------------------------------------
// Fibre-product identities for single generators

// boundary(X1 x X2) = (bX1) x X2 + (-1)^{vdim X1 + dim Y} X1 x (bX2)
inline IdentityCheck check_boundary_of_product(const Generator& a, const Generator& b) {
  Chain x, y;
  x.add(a, 1);
  y.add(b, 1);
  IdentityCheck r{"boundary of fibre product", boundary(fibre_chain(x, y)), fibre_chain(boundary(x), y)};
  r.rhs.add(fibre_chain(x, boundary(y)), parity_sign(a.vdim() + a.f.y.dim()));
  return r;
}

// X1 x X2 = (-1)^{(vdim X1 - dim Y)(vdim X2 - dim Y)} X2 x X1
inline IdentityCheck check_swap(const Generator& a, const Generator& b) {
  const long m = a.f.y.dim();
  std::size_t n1 = std::size_t(a.P.ambient_dim()), n2 = std::size_t(b.P.ambient_dim());
  IdentityCheck r{"swap", Chain(), Chain()};
  for (auto& g : fibre_generators(a, b, 1, first_map(a, b)))
    r.lhs.add(reembed_generator(g, block_swap(n1, n2), zero_vec(n1 + n2)), 1);
  for (auto& g : fibre_generators(b, a, 1, first_map(b, a)))
    r.rhs.add(g, parity_sign((a.vdim() - m) * (b.vdim() - m)));
  return r;
}

// (X1 x_{Y1} X2) x_{Y2} X3 = X1 x_{Y1} (X2 x_{Y2} X3) for f2 : X2 -> Y1 x Y2.
// Both sides carry f2 pulled back as their output map.
inline IdentityCheck check_associativity(const Generator& x1, const Generator& x2, const Generator& x3,
                                         const ProductTarget& pt) {
  const std::size_t n1 = std::size_t(x1.P.ambient_dim()), n2 = std::size_t(x2.P.ambient_dim()),
                    n3 = std::size_t(x3.P.ambient_dim());
  Generator x2a = x2, x2b = x2;
  x2a.f = compose(pt.pr1, x2.f);
  x2b.f = compose(pt.pr2, x2.f);
  IdentityCheck r{"associativity", Chain(), Chain()};
  // left: A = X1 x_{Y1} X2 carrying f2, then A x_{Y2} X3
  for (auto& A : fibre_generators(x1, x2a, 1, [&](const FibreComponent& C) {
         return pull_to_component(C, 1, x2.f, n1, n2);
       })) {
    Generator Ab = A;
    Ab.f = compose(pt.pr2, A.f);
    for (auto& g : fibre_generators(Ab, x3, 1, [&](const FibreComponent& C) {
           return pull_to_component(C, 0, A.f, n1 + n2, n3);
         }))
      r.lhs.add(g, 1);
  }
  // right: B = X2 x_{Y2} X3 carrying f2, then X1 x_{Y1} B
  for (auto& B : fibre_generators(x2b, x3, 1, [&](const FibreComponent& C) {
         return pull_to_component(C, 0, x2.f, n2, n3);
       })) {
    Generator Ba = B;
    Ba.f = compose(pt.pr1, B.f);
    for (auto& g : fibre_generators(x1, Ba, 1, [&](const FibreComponent& C) {
           return pull_to_component(C, 1, B.f, n1, n2 + n3);
         }))
      r.rhs.add(g, 1);
  }
  return r;
}

// X1 x_{Y1 x Y2} (X2 x X3) = (-1)^{dim Y2 (dim Y1 + vdim X2)} (X1 x_{Y1} X2) x_{Y2} X3
// for f1 : X1 -> Y1 x Y2, f2 : X2 -> Y1, f3 : X3 -> Y2. Output map: f1.
inline IdentityCheck check_interchange(const Generator& x1, const Generator& x2, const Generator& x3,
                                       const ProductTarget& pt) {
  const std::size_t n1 = std::size_t(x1.P.ambient_dim()), n2 = std::size_t(x2.P.ambient_dim()),
                    n3 = std::size_t(x3.P.ambient_dim());
  const int dy1 = pt.pr1.to.dim(), dy2 = pt.pr2.to.dim();
  IdentityCheck r{"interchange", Chain(), Chain()};
  Generator p2 = x2, p3 = x3;
  p2.f = constant_map(Target::point(), n2, x2.r, {});
  p3.f = constant_map(Target::point(), n3, x3.r, {});
  for (auto& P : fibre_generators(p2, p3, 1, [&](const FibreComponent& C) {
         return pair_maps(pt, pull_to_component(C, 0, x2.f, n2, n3), pull_to_component(C, 1, x3.f, n2, n3));
       }))
    for (auto& g : fibre_generators(x1, P, pt.sign, first_map(x1, P))) r.lhs.add(g, 1);
  Generator x1a = x1;
  x1a.f = compose(pt.pr1, x1.f);
  for (auto& A : fibre_generators(x1a, x2, 1, [&](const FibreComponent& C) {
         return pull_to_component(C, 0, x1.f, n1, n2);
       })) {
    Generator Ab = A;
    Ab.f = compose(pt.pr2, A.f);
    for (auto& g : fibre_generators(Ab, x3, 1, [&](const FibreComponent& C) {
           return pull_to_component(C, 0, A.f, n1 + n2, n3);
         }))
      r.rhs.add(g, parity_sign(long(dy2) * (dy1 + x2.vdim())));
  }
  return r;
}

}  // namespace corner
