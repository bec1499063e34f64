#pragma once

// Chain groups: finite rational combinations of canonical generators, the
// relations that normalize them, the boundary operator, pushforward, the
// bridge from affine singular chains, and homology of finite subcomplexes.

#include <map>
#include <set>

#include "corner/orbifold.hpp"

namespace corner {

enum class Ring { Q, Z };

inline const char* ring_name(Ring r) { return r == Ring::Q ? "Q" : "Z"; }

struct Term {
  Generator g;  // canonical, sign +1
  Q coeff;
};

class Chain {
 public:
  explicit Chain(Ring ring = Ring::Q) : ring_(ring) {}

  Ring ring() const { return ring_; }
  const std::map<std::string, Term>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }

  void add(const Generator& g, const Q& c) {
    if (c == 0) return;
    CanonicalGenerator cg = canonical(g);
    if (cg.zero) return;
    add_canonical(cg.key, std::move(cg.g), c * cg.sign);
  }

  void add(const Chain& o, const Q& s = 1) {
    if (s == 0) return;
    for (auto& [k, t] : o.terms_) add_canonical(k, t.g, t.coeff * s);
  }

  Chain scaled(const Q& s) const {
    Chain out(ring_);
    out.add(*this, s);
    return out;
  }

  Q coeff(const std::string& key) const {
    auto it = terms_.find(key);
    return it == terms_.end() ? Q(0) : it->second.coeff;
  }

  bool operator==(const Chain& o) const {
    if (terms_.size() != o.terms_.size()) return false;
    for (auto& [k, t] : terms_) {
      auto it = o.terms_.find(k);
      if (it == o.terms_.end() || it->second.coeff != t.coeff) return false;
    }
    return true;
  }
  bool operator!=(const Chain& o) const { return !(*this == o); }

  std::set<int> grades() const {
    std::set<int> s;
    for (auto& [k, t] : terms_) s.insert(t.g.vdim());
    return s;
  }

 private:
  void add_canonical(const std::string& key, Generator g, const Q& c) {
    if (c == 0) return;
    auto it = terms_.find(key);
    if (it == terms_.end()) {
      check_ring(c);
      terms_.emplace(key, Term{std::move(g), c});
      return;
    }
    it->second.coeff += c;
    if (it->second.coeff == 0) {
      terms_.erase(it);
    } else {
      check_ring(it->second.coeff);
    }
  }
  void check_ring(const Q& c) const {
    if (ring_ == Ring::Z && !is_integer(c)) throw PreconditionError("non-integer coefficient in an integral chain");
  }

  Ring ring_;
  std::map<std::string, Term> terms_;
};

inline Chain operator-(const Chain& a, const Chain& b) {
  Chain out = a;
  out.add(b, -1);
  return out;
}

inline Chain operator+(const Chain& a, const Chain& b) {
  Chain out = a;
  out.add(b);
  return out;
}

// ---------------------------------------------------------------------------
// Raw chains: multi-component generators and quotient markers

struct RawGenerator {
  std::vector<Generator> components;
  std::optional<GroupAction> quotient;  // the generator is (union of components) / G
};

struct RawChain {
  Ring ring = Ring::Q;
  std::vector<std::pair<RawGenerator, Q>> terms;
};

// The marker's data must descend: the action permutes components, fixes the
// map, and carries tag labels to equal labels.
inline void validate_quotient(const RawGenerator& rg) {
  const GroupAction& a = *rg.quotient;
  std::vector<Polytope> polys;
  for (auto& c : rg.components) {
    if (c.r != 0) throw PreconditionError("quotient markers need components without circle factors");
    polys.push_back(c.P);
  }
  auto perm = validate_action(a, polys);
  for (int g = 0; g < a.G.order(); ++g) {
    const AffineAction& m = a.act[std::size_t(g)];
    for (std::size_t i = 0; i < polys.size(); ++i) {
      const Generator& src = rg.components[i];
      const Generator& dst = rg.components[std::size_t(perm[std::size_t(g)][i])];
      if (src.f.y != dst.f.y) throw PreconditionError("quotient action changes the target");
      for (auto& v : src.P.vertices()) {
        Vec a1 = src.f.eval(v), a2 = dst.f.eval(m.apply(v));
        for (std::size_t k = 0; k < a1.size(); ++k) {
          Q diff = a1[k] - a2[k];
          bool ok = int(k) < src.f.y.e ? diff == 0 : is_integer(diff);
          if (!ok) throw PreconditionError("the map is not invariant under the quotient action");
        }
      }
      for (int f = 0; f <= src.P.top(); ++f) {
        int h = image_face(m, src.P, f, dst.P);
        if (src.tag.labels[std::size_t(f)] != dst.tag.labels[std::size_t(h)])
          throw PreconditionError("the tag is not invariant under the quotient action");
      }
    }
  }
}

// Labels constant on orbits of (component, face) under the action.
inline void assign_orbit_tags(RawGenerator& rg, int64_t base = 0) {
  const GroupAction& a = *rg.quotient;
  std::vector<Polytope> polys;
  for (auto& c : rg.components) polys.push_back(c.P);
  auto perm = validate_action(a, polys);
  std::map<std::pair<std::size_t, int>, int64_t> label;
  int64_t next = base;
  for (std::size_t i = 0; i < polys.size(); ++i)
    for (int f = 0; f <= polys[i].top(); ++f) {
      if (label.count({i, f})) continue;
      for (int g = 0; g < a.G.order(); ++g) {
        std::size_t j = std::size_t(perm[std::size_t(g)][i]);
        label[{j, image_face(a.act[std::size_t(g)], polys[i], f, polys[j])}] = next;
      }
      ++next;
    }
  for (std::size_t i = 0; i < polys.size(); ++i) {
    rg.components[i].tag.origin = TagOrigin::Quotient;
    rg.components[i].tag.labels.clear();
    for (int f = 0; f <= polys[i].top(); ++f) rg.components[i].tag.labels.push_back({label[{i, f}]});
  }
}

// Relations (i)-(iii): orientation signs fold into coefficients, components
// split, quotient markers become 1/|G| times their cover.
inline Chain canonicalize(const RawChain& rc) {
  Chain out(rc.ring);
  for (auto& [rg, c] : rc.terms) {
    for (auto& g : rg.components) validate_generator(g);
    Q scale = c;
    if (rg.quotient) {
      if (rc.ring != Ring::Q) throw PreconditionError("quotient markers need rational coefficients");
      validate_quotient(rg);
      scale /= Q(rg.quotient->G.order());
    }
    for (auto& g : rg.components) out.add(g, scale);
  }
  return out;
}

// Boundary before canonicalization; the quotient action descends to the
// boundary components.
inline RawChain boundary_raw(const RawChain& rc) {
  RawChain out;
  out.ring = rc.ring;
  for (auto& [rg, c] : rc.terms) {
    RawGenerator b;
    b.quotient = rg.quotient;
    for (auto& g : rg.components)
      for (auto& h : boundary_generators(g)) b.components.push_back(std::move(h));
    if (!b.components.empty()) out.terms.push_back({std::move(b), c});
  }
  return out;
}

inline Chain boundary(const Chain& c) {
  Chain out(c.ring());
  for (auto& [k, t] : c.terms())
    for (auto& h : boundary_generators(t.g)) out.add(h, t.coeff);
  return out;
}

// ---------------------------------------------------------------------------
// The two-corners mechanism behind boundary of boundary = 0

struct CornerWitness {
  std::string generator;
  int face = -1, b1 = -1, b2 = -1;
  std::string reason;
};

struct DDReport {
  bool chain_zero = false;       // boundary(boundary(c)) canonicalizes to 0
  bool pairs_ok = true;          // every corner pair cancels before summation
  std::size_t generators = 0;
  std::size_t pairs = 0;
  std::optional<CornerWitness> witness;
  bool ok() const { return chain_zero && pairs_ok; }
};

using CornerHook = std::function<void(CornerPair&)>;

inline DDReport verify_dd_zero(const Chain& c, const CornerHook& corrupt = {}) {
  DDReport rep;
  Chain dd(c.ring());
  for (auto& [key, t] : c.terms()) {
    ++rep.generators;
    for (auto& cp : corner_pairs(t.g)) {
      ++rep.pairs;
      if (corrupt) corrupt(cp);
      CanonicalGenerator a = canonical(cp.via_first), b = canonical(cp.via_second);
      bool ok = a.key == b.key && a.sign + b.sign == 0;
      if (!ok && rep.pairs_ok) {
        rep.pairs_ok = false;
        rep.witness = CornerWitness{key, cp.face, cp.b1, cp.b2,
                                    a.key != b.key ? "corner restrictions differ" : "corner orientations agree"};
      }
      dd.add(cp.via_first, t.coeff);
      dd.add(cp.via_second, t.coeff);
    }
  }
  // the corner pairs enumerate exactly the terms of the boundary of the boundary
  Chain direct = boundary(boundary(c));
  rep.chain_zero = direct.is_zero() && dd.is_zero();
  return rep;
}

// ---------------------------------------------------------------------------
// Automorphisms of a generator

struct AutResult {
  enum class Verdict { Finite, Infinite, Undecided } verdict = Verdict::Finite;
  Z order = 1;
  std::vector<std::vector<int>> polytope_maps;  // vertex maps of compatible polytope automorphisms
  Z circle_translations = 1;
  bool reverses_orientation = false;
};

// f composed with an affine self-map of P given by a vertex permutation.
inline AffineMap precompose(const Polytope& P, const AffineMap& f, const AffineIso& phi) {
  const int d = P.dim();
  const std::size_t m = f.m(), n = std::size_t(P.ambient_dim());
  AffineMap g = f;
  g.B = zero_mat(m, n);
  const Vec& v0 = P.vertices()[0];
  Vec w0 = P.vertices()[std::size_t(phi.vmap[0])];
  for (std::size_t i = 0; i < m; ++i) {
    for (int k = 0; k < d; ++k) {
      Q s = 0;  // f(phi(R_k)) - f(phi(0)) = B * sum_j L_jk R_j
      for (int j = 0; j < d; ++j) s += phi.L[std::size_t(j)][std::size_t(k)] * dot(f.B[i], P.frame()[std::size_t(j)]);
      g.B[i][std::size_t(P.pivots()[std::size_t(k)])] = s;
    }
    g.c[i] = f.c[i] + dot(f.B[i], w0) - dot(g.B[i], v0);
  }
  return g;
}

inline AutResult aut_finite(const Generator& g, std::size_t cap = 10) {
  AutResult res;
  NormalizedMap base = normalize_map(g.P, g.r, g.f);
  if (base.kernel_circle) {
    res.verdict = AutResult::Verdict::Infinite;
    res.reverses_orientation = true;
    return res;
  }
  const std::string key = map_key(base.f);
  std::vector<AffineIso> isos;
  try {
    isos = affine_isomorphisms(g.P, g.P, {}, false, cap);
  } catch (const SearchCapExceeded&) {
    res.verdict = AutResult::Verdict::Undecided;
    return res;
  }
  Z count = 0;
  for (auto& phi : isos) {
    auto fp = face_permutation(g.P, g.P, phi.vmap);
    bool tags_ok = true;
    for (std::size_t i = 0; i < fp.size(); ++i)
      if (g.tag.labels[i] != g.tag.labels[std::size_t(fp[i])]) tags_ok = false;
    if (!tags_ok) continue;
    NormalizedMap moved = normalize_map(g.P, g.r, precompose(g.P, g.f, phi));
    if (map_key(moved.f) != key) continue;
    res.polytope_maps.push_back(phi.vmap);
    if (phi.orientation * moved.sign_change * base.sign_change < 0) res.reverses_orientation = true;
    count += 1;
  }
  // circle translations k with A k integral: product of the invariant factors
  if (g.r > 0) {
    std::size_t t = std::size_t(g.f.y.t), e = std::size_t(g.f.y.e);
    ZMat At(t, ZVec(g.r, Z(0)));
    for (std::size_t i = 0; i < t; ++i) At[i] = g.f.A[e + i];
    Smith sm = smith(At, t, g.r);
    for (auto& d : sm.factors()) res.circle_translations *= d;
  }
  res.order = count * res.circle_translations;
  return res;
}

// ---------------------------------------------------------------------------
// Pushforward along a map of targets; tags travel unchanged.

inline Chain pushforward(const TargetMap& h, const Chain& c) {
  validate_target_map(h);
  Chain out(c.ring());
  for (auto& [k, t] : c.terms()) {
    if (t.g.f.y != h.from) throw PreconditionError("pushforward source does not match the chain's target");
    Generator g = t.g;
    g.f = compose(h, g.f);
    out.add(g, t.coeff);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Simplices and affine singular chains

// Standard simplex in R^{k+1}, spanned by e_0..e_k.
inline Polytope simplex(int k) {
  std::vector<Vec> pts;
  for (int i = 0; i <= k; ++i) {
    Vec e = zero_vec(std::size_t(k) + 1);
    e[std::size_t(i)] = 1;
    pts.push_back(e);
  }
  return Polytope::from_vertices(k + 1, pts);
}

// F_j^k : R^k -> R^{k+1}, inserting a zero in slot j.
inline std::pair<Mat, Vec> face_map(int k, int j) {
  Mat M = zero_mat(std::size_t(k) + 1, std::size_t(k));
  for (int i = 0, c = 0; i <= k; ++i) {
    if (i == j) continue;
    M[std::size_t(i)][std::size_t(c++)] = 1;
  }
  return {M, zero_vec(std::size_t(k) + 1)};
}

// Orientation of Delta_k by its vertex order: frame (e_1 - e_0, ..., e_k - e_0).
inline int simplex_sign(int k) {
  Polytope D = simplex(k);
  Mat frame;
  for (int i = 1; i <= k; ++i) {
    Vec v = zero_vec(std::size_t(k) + 1);
    v[std::size_t(i)] = 1;
    v[0] = -1;
    frame.push_back(v);
  }
  return frame_sign(D, frame);
}

// epsilon_{k,j}: boundary orientation of facet j of Delta_k (outward normal
// first) against (-1)^j times the image of Delta_{k-1} under F_j.
inline int orientation_dictionary(int k, int j) {
  Polytope D = simplex(k);
  Bits b(std::size_t(k) + 1);
  for (int i = 0; i <= k; ++i)
    if (i != j) b.set(std::size_t(k - i));  // e_i sits at sorted position k - i
  int f = D.face_index(b);
  int bsign = simplex_sign(k) * D.facet_sign(f);
  auto [M, t] = face_map(k, j);
  Generator probe;
  probe.P = simplex(k - 1);
  probe.sign = simplex_sign(k - 1);
  probe.f = constant_map(Target::point(), std::size_t(k), 0, {});
  probe.tag = enumerate_tag(probe.P);
  Generator img = reembed_generator(probe, M, t);
  if (img.P != D.face(f)) throw std::logic_error("face map does not hit the expected facet");
  int sgn_j = (j % 2) ? -1 : 1;
  return bsign * img.sign * sgn_j;
}

// Product of epsilon_{i,0} for i <= k: the sign making the bridge a chain map.
inline int simplex_normalization(int k) {
  int s = 1;
  for (int i = 1; i <= k; ++i) s *= orientation_dictionary(i, 0);
  return s;
}

// Deterministic tag for Delta_k: each face labelled by its dimension, so that
// restriction along every face map gives the tag of the smaller simplex.
inline Tag simplex_tag(const Polytope& D) {
  Tag t;
  t.origin = TagOrigin::Simplex;
  for (auto& F : D.faces()) t.labels.push_back({int64_t(F.dim)});
  return t;
}

struct AffineSimplex {
  Target y;
  std::vector<Vec> verts;  // images of e_0..e_k in target coordinates (lifts for circles)
  int k() const { return int(verts.size()) - 1; }
};

using SingularChain = std::vector<std::pair<AffineSimplex, Q>>;

inline Generator singular_generator(const AffineSimplex& s) {
  const int k = s.k();
  if (k < 0) throw SchemaError("singular simplex needs at least one vertex");
  const std::size_t m = std::size_t(s.y.dim());
  for (auto& v : s.verts)
    if (v.size() != m) throw SchemaError("singular simplex vertex has the wrong dimension");
  Generator g;
  g.P = simplex(k);
  g.sign = simplex_sign(k) * simplex_normalization(k);
  g.f.y = s.y;
  g.f.B = zero_mat(m, std::size_t(k) + 1);
  for (std::size_t i = 0; i < m; ++i)
    for (int j = 0; j <= k; ++j) g.f.B[i][std::size_t(j)] = s.verts[std::size_t(j)][i];
  g.f.A = ZMat(m);
  g.f.c = zero_vec(m);
  g.tag = simplex_tag(g.P);
  return g;
}

inline Chain singular_to_kuranishi(const SingularChain& s) {
  Chain out;
  for (auto& [sim, c] : s) out.add(singular_generator(sim), c);
  return out;
}

inline SingularChain singular_boundary(const SingularChain& s) {
  SingularChain out;
  for (auto& [sim, c] : s) {
    if (sim.k() == 0) continue;
    for (int j = 0; j <= sim.k(); ++j) {
      AffineSimplex f{sim.y, {}};
      for (int i = 0; i <= sim.k(); ++i)
        if (i != j) f.verts.push_back(sim.verts[std::size_t(i)]);
      out.push_back({f, (j % 2) ? Q(-c) : c});
    }
  }
  return out;
}

// Facets of simplices in R^{k+1} carried to Delta_{k-1} in R^k by dropping
// the coordinate that vanishes on them.
inline Chain transport_simplex_facets(const Chain& c) {
  Chain out(c.ring());
  for (auto& [key, t] : c.terms()) {
    const Polytope& P = t.g.P;
    const std::size_t n = std::size_t(P.ambient_dim());
    int drop = -1;
    for (std::size_t j = 0; j < n && drop < 0; ++j) {
      bool zero = true;
      for (auto& v : P.vertices())
        if (v[j] != 0) zero = false;
      if (zero) drop = int(j);
    }
    if (drop < 0 || P.nverts() != n - 1) throw PreconditionError("term is not a facet of a standard simplex");
    out.add(reembed_generator(t.g, drop_coordinate(n, std::size_t(drop)), zero_vec(n - 1)), t.coeff);
  }
  return out;
}

struct ChainMapReport {
  Chain lhs, rhs;  // boundary after the bridge, bridge after the boundary
  bool ok() const { return lhs == rhs; }
};

inline ChainMapReport check_singular_chain_map(const SingularChain& s) {
  ChainMapReport r;
  r.lhs = transport_simplex_facets(boundary(singular_to_kuranishi(s)));
  r.rhs = singular_to_kuranishi(singular_boundary(s));
  return r;
}

// ---------------------------------------------------------------------------
// Homology of a finite boundary-closed set of generators

struct HomologyResult {
  std::map<int, int> betti;             // by virtual dimension
  std::map<int, std::vector<Z>> torsion;  // over Z: invariant factors > 1 of incoming boundaries
  std::map<int, std::size_t> rank_of_chains;
};

inline HomologyResult homology(const std::vector<Generator>& gens, Ring ring = Ring::Q) {
  std::map<int, std::vector<std::string>> basis;
  std::map<std::string, Generator> by_key;
  for (auto& g : gens) {
    CanonicalGenerator cg = canonical(g);
    if (cg.zero || by_key.count(cg.key)) continue;
    by_key.emplace(cg.key, cg.g);
    basis[cg.g.vdim()].push_back(cg.key);
  }
  std::map<int, std::map<std::string, std::size_t>> index;
  for (auto& [k, keys] : basis) {
    std::sort(keys.begin(), keys.end());
    for (std::size_t i = 0; i < keys.size(); ++i) index[k][keys[i]] = i;
  }
  // boundary matrix from grade k to k-1: rows = grade k-1 basis
  std::map<int, int> rank_q;
  std::map<int, std::vector<Z>> factors;
  for (auto& [k, keys] : basis) {
    std::size_t rows = basis.count(k - 1) ? basis[k - 1].size() : 0;
    Mat M = zero_mat(rows, keys.size());
    for (std::size_t j = 0; j < keys.size(); ++j) {
      Chain b = boundary([&] {
        Chain c;
        c.add(by_key.at(keys[j]), 1);
        return c;
      }());
      for (auto& [bk, t] : b.terms()) {
        auto it = rows ? index[k - 1].find(bk) : index[k - 1].end();
        if (!rows || it == index[k - 1].end()) throw PreconditionError("generator set is not closed under the boundary");
        M[it->second][j] = t.coeff;
      }
    }
    rank_q[k] = rows ? rank(M, keys.size()) : 0;
    if (ring == Ring::Z && rows) {
      ZMat Mz(rows, ZVec(keys.size()));
      for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < keys.size(); ++j) Mz[i][j] = to_z(M[i][j]);
      for (auto& d : smith(Mz, rows, keys.size()).factors())
        if (d > 1) factors[k - 1].push_back(d);
    }
  }
  HomologyResult res;
  for (auto& [k, keys] : basis) {
    int out_rank = rank_q.count(k) ? rank_q[k] : 0;
    int in_rank = rank_q.count(k + 1) ? rank_q[k + 1] : 0;
    res.betti[k] = int(keys.size()) - out_rank - in_rank;
    res.rank_of_chains[k] = keys.size();
  }
  res.torsion = factors;
  return res;
}

// Every face of a generator, each with the restricted tag: a boundary-closed set.
inline std::vector<Generator> face_complex(const Generator& g) {
  std::vector<Generator> out;
  for (int i = 0; i <= g.P.top(); ++i) out.push_back(restrict_generator(g, i, 1));
  return out;
}

// ---------------------------------------------------------------------------
// Cylinders [0,1] x X, the time coordinate first.

inline Generator embed_at_time(const Generator& g, const Q& time) {
  const std::size_t n = std::size_t(g.P.ambient_dim());
  Mat M = zero_mat(n + 1, n);
  for (std::size_t i = 0; i < n; ++i) M[i + 1][i] = 1;
  Vec t = zero_vec(n + 1);
  t[0] = time;
  return reembed_generator(g, M, t);
}

inline Generator cylinder(const Generator& g, const Tag& other) {
  if (other.labels.size() != g.P.faces().size()) throw SchemaError("alternative tag must label every face");
  const std::size_t n = std::size_t(g.P.ambient_dim());
  std::vector<Vec> pts;
  for (int time = 0; time <= 1; ++time)
    for (auto& v : g.P.vertices()) {
      Vec w = {Q(time)};
      w.insert(w.end(), v.begin(), v.end());
      pts.push_back(w);
    }
  Generator c;
  c.P = Polytope::from_vertices(int(n) + 1, pts);
  c.r = g.r;
  Mat frame;
  Vec dt = zero_vec(n + 1);
  dt[0] = 1;
  frame.push_back(dt);
  for (auto& R : g.P.frame()) {
    Vec w = {Q(0)};
    w.insert(w.end(), R.begin(), R.end());
    frame.push_back(w);
  }
  c.sign = g.sign * frame_sign(c.P, frame);
  c.f = g.f;
  for (auto& row : c.f.B) row.insert(row.begin(), Q(0));
  c.tag.origin = TagOrigin::Cylinder;
  for (auto& F : c.P.faces()) {
    bool at0 = false, at1 = false;
    Bits xb(g.P.nverts());
    for (int v : F.verts.indices()) {
      const Vec& w = c.P.vertices()[std::size_t(v)];
      (w[0] == 0 ? at0 : at1) = true;
      Vec x(w.begin() + 1, w.end());
      for (std::size_t k = 0; k < g.P.nverts(); ++k)
        if (g.P.vertices()[k] == x) xb.set(k);
    }
    std::size_t fx = std::size_t(g.P.face_index(xb));
    if (at0 && !at1) {
      c.tag.labels.push_back(g.tag.labels[fx]);
    } else if (at1 && !at0) {
      c.tag.labels.push_back(other.labels[fx]);
    } else {
      Label l = label_union(g.tag.labels[fx], other.labels[fx]);
      l.insert(l.begin(), -1);  // side faces stay distinct from either end
      c.tag.labels.push_back(l);
    }
  }
  return c;
}

struct CylinderReport {
  Chain boundary_of_witness;
  Chain expected;  // [X,G'] at time 1 - [X,G] at time 0 - cylinder over the boundary
  bool ok() const { return boundary_of_witness == expected; }
};

inline CylinderReport check_cylinder(const Generator& g, const Tag& other) {
  CylinderReport r;
  Chain w;
  w.add(cylinder(g, other), 1);
  r.boundary_of_witness = boundary(w);
  Generator g1 = g;
  g1.tag = other;
  r.expected.add(embed_at_time(g1, 1), 1);
  r.expected.add(embed_at_time(g, 0), -1);
  if (g.P.dim() > 0)
    for (int f : g.P.facets()) {
      Generator b = restrict_generator(g, f, g.sign * g.P.facet_sign(f));
      r.expected.add(cylinder(b, restrict_tag(other, g.P, f)), -1);
    }
  return r;
}

}  // namespace corner
