#pragma once

// Convex polytopes with exact rational vertices: the atomic model of a
// manifold with g-corners. A polytope knows its face lattice, a canonical
// frame on its affine hull, and a redundant-but-valid inequality system.

#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>
#include <sstream>
#include <unordered_map>

#include "corner/bits.hpp"
#include "corner/linalg.hpp"

namespace corner {

struct Halfspace {
  Vec a;  // a . x <= b
  Q b;
};

inline bool lex_less(const Vec& a, const Vec& b) {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

struct FaceRec {
  Bits verts;
  int dim = 0;
};

class Polytope {
 public:
  Polytope() = default;

  // Convex hull of `pts`. With prune = false every point must be extreme and
  // distinct, otherwise PreconditionError.
  static Polytope from_points(int n, std::vector<Vec> pts, bool prune);
  static Polytope hull(int n, std::vector<Vec> pts) { return from_points(n, std::move(pts), true); }
  static Polytope from_vertices(int n, std::vector<Vec> pts) { return from_points(n, std::move(pts), false); }
  static Polytope point(const Vec& p) { return from_points(int(p.size()), {p}, false); }
  static Polytope box(const Vec& lo, const Vec& hi);

  // Vertices known to be extreme; `hs` must be valid on them and contain
  // every facet as a tight set.
  static Polytope from_halfspaces(int n, std::vector<Vec> verts, std::vector<Halfspace> hs);

  // Fully trusted lattice; `faces` must be closed and contain the top face.
  static Polytope from_lattice(int n, std::vector<Vec> verts, std::vector<FaceRec> faces,
                               std::vector<Halfspace> hs);

  bool valid() const { return bool(d_); }
  int ambient_dim() const { return d_->n; }
  int dim() const { return d_->d; }
  std::size_t nverts() const { return d_->V.size(); }
  const std::vector<Vec>& vertices() const { return d_->V; }
  const Mat& frame() const { return d_->frame; }
  const std::vector<int>& pivots() const { return d_->pivots; }
  const std::vector<Halfspace>& halfspaces() const { return d_->H; }
  const std::vector<FaceRec>& faces() const { return d_->faces; }
  int top() const { return int(d_->faces.size()) - 1; }
  int face_index(const Bits& b) const {
    auto it = d_->index.find(b);
    return it == d_->index.end() ? -1 : it->second;
  }
  std::vector<int> faces_of_dim(int k) const {
    std::vector<int> out;
    for (std::size_t i = 0; i < d_->faces.size(); ++i)
      if (d_->faces[i].dim == k) out.push_back(int(i));
    return out;
  }
  std::vector<int> facets() const { return d_->d == 0 ? std::vector<int>{} : faces_of_dim(d_->d - 1); }
  // Facets containing face i.
  std::vector<int> facets_containing(int i) const {
    std::vector<int> out;
    for (int f : facets())
      if (d_->faces[i].verts.subset_of(d_->faces[f].verts)) out.push_back(f);
    return out;
  }
  int vertex_face(int v) const {
    Bits b(nverts());
    b.set(std::size_t(v));
    return face_index(b);
  }

  // Face i as a polytope in the same ambient space, cached.
  Polytope face(int i) const;
  // Index in this lattice of face j of face(i).
  int lift_index(int i, int j) const;

  // Canonical coordinates of a direction in the affine hull.
  Vec coords(const Vec& w) const {
    Vec out(d_->pivots.size());
    for (std::size_t j = 0; j < out.size(); ++j) out[j] = w[std::size_t(d_->pivots[j])];
    return out;
  }

  bool in_aff(const Vec& p) const;
  bool contains(const Vec& p) const;
  bool in_relint(int face, const Vec& p) const;
  Vec barycenter() const;
  Vec face_barycenter(int i) const;

  // Orientation sign of facet f relative to its canonical frame, induced by
  // the outward-normal-first convention from the positively oriented parent.
  int facet_sign(int f) const;

  bool operator==(const Polytope& o) const { return d_->n == o.d_->n && d_->V == o.d_->V; }
  bool operator!=(const Polytope& o) const { return !(*this == o); }
  std::string key() const;

 private:
  struct Data {
    int n = 0, d = 0;
    std::vector<Vec> V;
    Mat frame;
    std::vector<int> pivots;
    std::vector<Halfspace> H;
    std::vector<FaceRec> faces;
    std::unordered_map<Bits, int, BitsHash> index;
    mutable std::mutex mu;
    mutable std::vector<std::shared_ptr<const Data>> face_cache;
    mutable std::vector<std::vector<int>> lift_cache;
  };
  std::shared_ptr<const Data> d_;

  static void set_frame(Data& D);
  static void finish(Data& D);
  static std::vector<Bits> close_lattice(const std::vector<Bits>& facets, std::size_t nv);
  static int dim_of(const Data& D, const Bits& b);
  void ensure_face(int i) const;
};

// ---------------------------------------------------------------------------

inline void Polytope::set_frame(Data& D) {
  Mat diffs;
  for (std::size_t i = 1; i < D.V.size(); ++i) diffs.push_back(vsub(D.V[i], D.V[0]));
  Echelon e = rref(diffs, std::size_t(D.n));
  D.frame = std::move(e.rows);
  D.pivots = std::move(e.pivots);
  D.d = int(D.pivots.size());
}

inline int Polytope::dim_of(const Data& D, const Bits& b) {
  auto idx = b.indices();
  if (idx.size() <= 1) return 0;
  Mat diffs;
  for (std::size_t k = 1; k < idx.size(); ++k) {
    Vec w = vsub(D.V[std::size_t(idx[k])], D.V[std::size_t(idx[0])]);
    Vec c(D.pivots.size());
    for (std::size_t j = 0; j < c.size(); ++j) c[j] = w[std::size_t(D.pivots[j])];
    diffs.push_back(std::move(c));
  }
  return rank(diffs, D.pivots.size());
}

inline std::vector<Bits> Polytope::close_lattice(const std::vector<Bits>& facets, std::size_t nv) {
  std::unordered_map<Bits, int, BitsHash> seen;
  std::vector<Bits> out;
  std::vector<Bits> frontier;
  for (auto& f : facets)
    if (!f.empty() && seen.emplace(f, 0).second) {
      out.push_back(f);
      frontier.push_back(f);
    }
  while (!frontier.empty()) {
    std::vector<Bits> next;
    for (auto& a : frontier)
      for (auto& f : facets) {
        Bits c = a & f;
        if (c.empty()) continue;
        if (seen.emplace(c, 0).second) {
          out.push_back(c);
          next.push_back(std::move(c));
        }
      }
    frontier = std::move(next);
  }
  Bits all = Bits::full(nv);
  if (seen.emplace(all, 0).second) out.push_back(all);
  return out;
}

inline void Polytope::finish(Data& D) {
  std::sort(D.faces.begin(), D.faces.end(), [](const FaceRec& a, const FaceRec& b) {
    if (a.dim != b.dim) return a.dim < b.dim;
    return a.verts < b.verts;
  });
  D.index.clear();
  for (std::size_t i = 0; i < D.faces.size(); ++i) D.index.emplace(D.faces[i].verts, int(i));
  D.face_cache.assign(D.faces.size(), nullptr);
  D.lift_cache.assign(D.faces.size(), {});
}

inline Polytope Polytope::from_points(int n, std::vector<Vec> pts, bool prune) {
  if (pts.empty()) throw PreconditionError("polytope needs at least one vertex");
  for (auto& p : pts)
    if (int(p.size()) != n) throw SchemaError("vertex has wrong ambient dimension");
  std::sort(pts.begin(), pts.end(), lex_less);
  std::size_t before = pts.size();
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  if (!prune && pts.size() != before) throw PreconditionError("duplicate vertex");

  auto D = std::make_shared<Data>();
  D->n = n;
  D->V = pts;
  set_frame(*D);
  const int d = D->d;
  const std::size_t N = pts.size();

  // hull coordinates relative to the first point
  std::vector<Vec> y(N);
  for (std::size_t i = 0; i < N; ++i) {
    Vec w = vsub(pts[i], pts[0]);
    y[i].resize(std::size_t(d));
    for (int j = 0; j < d; ++j) y[i][std::size_t(j)] = w[std::size_t(D->pivots[std::size_t(j)])];
  }

  // supporting hyperplanes through d affinely independent points
  std::vector<std::pair<Vec, Q>> planes;  // in hull coordinates
  std::vector<Bits> tight;
  std::unordered_map<Bits, int, BitsHash> seen_tight;
  if (d >= 1) {
    std::vector<int> comb(static_cast<std::size_t>(d));
    std::function<void(int, int)> rec = [&](int start, int k) {
      if (k == d) {
        Mat diffs;
        for (int t = 1; t < d; ++t) diffs.push_back(vsub(y[std::size_t(comb[std::size_t(t)])], y[std::size_t(comb[0])]));
        Mat ns = nullspace(diffs, std::size_t(d));
        if (ns.size() != 1) return;
        Vec a = ns[0];
        Q b = dot(a, y[std::size_t(comb[0])]);
        bool le = true, ge = true;
        for (std::size_t i = 0; i < N; ++i) {
          Q v = dot(a, y[i]);
          if (v > b) le = false;
          if (v < b) ge = false;
        }
        if (!le && !ge) return;
        if (!le) {
          a = vscale(a, Q(-1));
          b = -b;
        }
        Bits t(N);
        for (std::size_t i = 0; i < N; ++i)
          if (dot(a, y[i]) == b) t.set(i);
        if (t.count() == N) return;
        if (seen_tight.emplace(t, 0).second) {
          tight.push_back(t);
          planes.emplace_back(a, b);
        }
        return;
      }
      for (int i = start; i < int(N); ++i) {
        comb[std::size_t(k)] = i;
        rec(i + 1, k + 1);
      }
    };
    rec(0, 0);
  }

  // a point is a vertex iff the facets through it cut out only itself
  std::vector<int> keep;
  for (std::size_t i = 0; i < N; ++i) {
    Bits acc = Bits::full(N);
    for (auto& t : tight)
      if (t.test(i)) acc = acc & t;
    if (acc.count() == 1) keep.push_back(int(i));
  }
  if (N == 1) keep = {0};
  if (keep.size() != N) {
    if (!prune) {
      std::size_t bad = 0;
      while (std::find(keep.begin(), keep.end(), int(bad)) != keep.end()) ++bad;
      throw PreconditionError("point " + to_string(pts[bad]) + " is not an extreme point");
    }
    std::vector<Vec> vv;
    for (int k : keep) vv.push_back(pts[std::size_t(k)]);
    return from_points(n, std::move(vv), false);
  }

  for (std::size_t k = 0; k < planes.size(); ++k) {
    Halfspace h;
    h.a = zero_vec(std::size_t(n));
    for (int j = 0; j < d; ++j) h.a[std::size_t(D->pivots[std::size_t(j)])] = planes[k].first[std::size_t(j)];
    h.b = planes[k].second + dot(h.a, pts[0]);
    D->H.push_back(std::move(h));
  }
  // keep only facets among tight sets (maximal proper ones)
  std::vector<Bits> facets;
  for (std::size_t k = 0; k < tight.size(); ++k) {
    bool maximal = true;
    for (std::size_t l = 0; l < tight.size() && maximal; ++l)
      if (l != k && tight[k].subset_of(tight[l]) && tight[k] != tight[l]) maximal = false;
    if (maximal) facets.push_back(tight[k]);
  }
  for (auto& b : close_lattice(facets, N)) D->faces.push_back({b, dim_of(*D, b)});
  finish(*D);
  Polytope P;
  P.d_ = std::move(D);
  return P;
}

inline Polytope Polytope::box(const Vec& lo, const Vec& hi) {
  std::size_t n = lo.size();
  std::vector<Vec> pts;
  for (std::size_t mask = 0; mask < (std::size_t(1) << n); ++mask) {
    Vec p(n);
    for (std::size_t i = 0; i < n; ++i) p[i] = (mask >> i) & 1 ? hi[i] : lo[i];
    pts.push_back(p);
  }
  std::vector<Halfspace> hs;
  for (std::size_t i = 0; i < n; ++i) {
    Vec a = zero_vec(n);
    a[i] = 1;
    hs.push_back({a, hi[i]});
    a[i] = -1;
    hs.push_back({a, -lo[i]});
  }
  return from_halfspaces(int(n), std::move(pts), std::move(hs));
}

inline Polytope Polytope::from_halfspaces(int n, std::vector<Vec> verts, std::vector<Halfspace> hs) {
  std::sort(verts.begin(), verts.end(), lex_less);
  verts.erase(std::unique(verts.begin(), verts.end()), verts.end());
  auto D = std::make_shared<Data>();
  D->n = n;
  D->V = std::move(verts);
  set_frame(*D);
  const std::size_t N = D->V.size();
  std::vector<Bits> tight;
  std::vector<Halfspace> kept;
  for (auto& h : hs) {
    Bits t(N);
    for (std::size_t i = 0; i < N; ++i) {
      Q v = dot(h.a, D->V[i]);
      if (v > h.b) throw PreconditionError("halfspace violated by a vertex");
      if (v == h.b) t.set(i);
    }
    if (t.count() == N) continue;  // an equation on the hull carries no facet
    tight.push_back(t);
    kept.push_back(h);
  }
  std::vector<Bits> facets;
  for (auto& t : tight) {
    if (t.empty() || dim_of(*D, t) != D->d - 1) continue;
    if (std::find(facets.begin(), facets.end(), t) == facets.end()) facets.push_back(t);
  }
  D->H = std::move(kept);
  for (auto& b : close_lattice(facets, N)) D->faces.push_back({b, dim_of(*D, b)});
  finish(*D);
  Polytope P;
  P.d_ = std::move(D);
  return P;
}

inline Polytope Polytope::from_lattice(int n, std::vector<Vec> verts, std::vector<FaceRec> faces,
                                       std::vector<Halfspace> hs) {
  auto D = std::make_shared<Data>();
  D->n = n;
  D->V = std::move(verts);
  set_frame(*D);
  D->faces = std::move(faces);
  D->H = std::move(hs);
  finish(*D);
  Polytope P;
  P.d_ = std::move(D);
  return P;
}

inline void Polytope::ensure_face(int i) const {
  std::lock_guard<std::mutex> lock(d_->mu);
  if (d_->face_cache[std::size_t(i)]) return;
  const FaceRec& F = d_->faces[std::size_t(i)];
  auto idx = F.verts.indices();
  std::vector<int> remap(d_->V.size(), -1);
  auto D = std::make_shared<Data>();
  D->n = d_->n;
  for (std::size_t k = 0; k < idx.size(); ++k) {
    remap[std::size_t(idx[k])] = int(k);
    D->V.push_back(d_->V[std::size_t(idx[k])]);
  }
  set_frame(*D);
  std::vector<int> parent_of;
  for (std::size_t j = 0; j < d_->faces.size(); ++j) {
    const FaceRec& G = d_->faces[j];
    if (!G.verts.subset_of(F.verts)) continue;
    Bits b(idx.size());
    for (int v : G.verts.indices()) b.set(std::size_t(remap[std::size_t(v)]));
    D->faces.push_back({b, G.dim});
  }
  for (auto& h : d_->H) {
    bool all_tight = true;
    for (auto& v : D->V)
      if (dot(h.a, v) != h.b) {
        all_tight = false;
        break;
      }
    if (!all_tight) D->H.push_back(h);
  }
  finish(*D);
  std::vector<int> lift(D->faces.size());
  for (std::size_t j = 0; j < D->faces.size(); ++j) {
    Bits b(d_->V.size());
    for (int v : D->faces[j].verts.indices()) b.set(std::size_t(idx[std::size_t(v)]));
    lift[j] = d_->index.at(b);
  }
  d_->lift_cache[std::size_t(i)] = std::move(lift);
  d_->face_cache[std::size_t(i)] = std::move(D);
}

inline Polytope Polytope::face(int i) const {
  if (i == top()) return *this;
  ensure_face(i);
  Polytope P;
  std::lock_guard<std::mutex> lock(d_->mu);
  P.d_ = d_->face_cache[std::size_t(i)];
  return P;
}

inline int Polytope::lift_index(int i, int j) const {
  if (i == top()) return j;
  ensure_face(i);
  std::lock_guard<std::mutex> lock(d_->mu);
  return d_->lift_cache[std::size_t(i)][std::size_t(j)];
}

inline bool Polytope::in_aff(const Vec& p) const {
  Vec w = vsub(p, d_->V[0]);
  Vec c = coords(w);
  Vec back = zero_vec(std::size_t(d_->n));
  for (std::size_t j = 0; j < c.size(); ++j)
    for (std::size_t k = 0; k < back.size(); ++k) back[k] += c[j] * d_->frame[j][k];
  return back == w;
}

inline bool Polytope::contains(const Vec& p) const {
  if (!in_aff(p)) return false;
  for (auto& h : d_->H)
    if (dot(h.a, p) > h.b) return false;
  return true;
}

inline bool Polytope::in_relint(int face, const Vec& p) const {
  const FaceRec& F = d_->faces[std::size_t(face)];
  Polytope Fp = this->face(face);
  if (!Fp.in_aff(p)) return false;
  auto idx = F.verts.indices();
  for (auto& h : d_->H) {
    bool tight_on_face = true;
    for (int v : idx)
      if (dot(h.a, d_->V[std::size_t(v)]) != h.b) {
        tight_on_face = false;
        break;
      }
    Q val = dot(h.a, p);
    if (tight_on_face ? val != h.b : val >= h.b) return false;
  }
  return true;
}

inline Vec Polytope::barycenter() const { return face_barycenter(top()); }

inline Vec Polytope::face_barycenter(int i) const {
  auto idx = d_->faces[std::size_t(i)].verts.indices();
  Vec s = zero_vec(std::size_t(d_->n));
  for (int v : idx) s = vadd(s, d_->V[std::size_t(v)]);
  return vscale(s, Q(1) / Q(long(idx.size())));
}

inline int Polytope::facet_sign(int f) const {
  const FaceRec& F = d_->faces[std::size_t(f)];
  int in = -1, out = -1;
  for (std::size_t v = 0; v < d_->V.size(); ++v) {
    if (F.verts.test(v) && in < 0) in = int(v);
    if (!F.verts.test(v) && out < 0) out = int(v);
  }
  Vec w = vsub(d_->V[std::size_t(in)], d_->V[std::size_t(out)]);  // points outward across F
  Polytope Fp = face(f);
  Mat m;
  m.push_back(coords(w));
  for (auto& row : Fp.frame()) m.push_back(coords(row));
  return det_sign(m);
}

inline std::string Polytope::key() const {
  std::string s = "P" + std::to_string(d_->n) + "[";
  for (auto& v : d_->V) s += to_string(v);
  return s + "]";
}

// ---------------------------------------------------------------------------
// Oriented polytopes, boundary and corners

struct OrientedPolytope {
  Polytope poly;
  int sign = 1;  // relative to the canonical frame
};

// Sign of `frame` (rows, ambient coordinates) relative to the canonical frame.
inline int frame_sign(const Polytope& P, const Mat& frame) {
  if (int(frame.size()) != P.dim()) throw SchemaError("frame has wrong number of vectors");
  Mat m;
  for (auto& row : frame) {
    if (int(row.size()) != P.ambient_dim()) throw SchemaError("frame vector has wrong dimension");
    Vec w = row;
    // the vector must lie in the direction space
    Vec base = P.vertices()[0];
    if (!P.in_aff(vadd(base, w))) throw PreconditionError("frame vector leaves the affine hull");
    m.push_back(P.coords(w));
  }
  int s = det_sign(m);
  if (s == 0 && P.dim() > 0) throw PreconditionError("frame vectors are linearly dependent");
  return P.dim() == 0 ? 1 : s;
}

inline OrientedPolytope orient(const Polytope& P, const Mat& frame, int sign) {
  return {P, sign * frame_sign(P, frame)};
}

// Orientation comparison on the same polytope: +1 iff the orientations agree.
inline int orientation_equal(const OrientedPolytope& a, const OrientedPolytope& b) {
  if (a.poly != b.poly) throw PreconditionError("orientation_equal needs the same polytope");
  return a.sign * b.sign;
}

struct BoundaryComponent {
  int facet = -1;  // face index in the parent lattice
  OrientedPolytope oriented;
};

inline std::vector<BoundaryComponent> boundary(const OrientedPolytope& X) {
  std::vector<BoundaryComponent> out;
  if (X.poly.dim() == 0) return out;
  for (int f : X.poly.facets()) out.push_back({f, {X.poly.face(f), X.sign * X.poly.facet_sign(f)}});
  return out;
}

struct CornerComponent {
  int face = -1;           // codimension-2 face in the parent lattice
  int first = -1, second = -1;  // the flag (B1, B2) of facets, B1 taken first
  OrientedPolytope oriented;
};

// Orientation of codim-2 face e reached through facet b1.
inline int corner_sign(const OrientedPolytope& X, int e, int b1) {
  const Polytope& P = X.poly;
  Polytope B = P.face(b1);
  int sb = X.sign * P.facet_sign(b1);
  // locate e inside B's lattice
  int local = -1;
  for (std::size_t j = 0; j < B.faces().size(); ++j)
    if (P.lift_index(b1, int(j)) == e) {
      local = int(j);
      break;
    }
  if (local < 0) throw PreconditionError("corner face is not contained in the flag facet");
  return sb * B.facet_sign(local);
}

inline std::vector<CornerComponent> second_boundary(const OrientedPolytope& X) {
  if (X.poly.dim() < 2) throw PreconditionError("second boundary needs dimension at least 2");
  std::vector<CornerComponent> out;
  const Polytope& P = X.poly;
  for (int e : P.faces_of_dim(P.dim() - 2)) {
    auto fs = P.facets_containing(e);
    if (fs.size() != 2) throw PreconditionError("codimension-2 face not in exactly two facets");
    for (int k = 0; k < 2; ++k) {
      int b1 = fs[std::size_t(k)], b2 = fs[std::size_t(1 - k)];
      out.push_back({e, b1, b2, {P.face(e), corner_sign(X, e, b1)}});
    }
  }
  return out;
}

inline CornerComponent sigma(const OrientedPolytope& X, const CornerComponent& c) {
  return {c.face, c.second, c.first, {c.oriented.poly, corner_sign(X, c.face, c.second)}};
}

enum class CornerType { Corner, GCorner };

inline CornerType corner_type(const Polytope& P, int face) {
  if (face < 0 || face > P.top()) throw PreconditionError("not a face of the polytope");
  int codim = P.dim() - P.faces()[std::size_t(face)].dim;
  return int(P.facets_containing(face).size()) == codim ? CornerType::Corner : CornerType::GCorner;
}

inline bool is_simple(const Polytope& P) {
  for (int v = 0; v < int(P.nverts()); ++v)
    if (corner_type(P, P.vertex_face(v)) != CornerType::Corner) return false;
  return true;
}

// ---------------------------------------------------------------------------
// Affine isomorphisms between polytopes

struct AffineIso {
  std::vector<int> vmap;  // vertex i of the source goes to vertex vmap[i] of the target
  Mat L;                  // linear part in canonical coordinates (dim x dim)
  int orientation = 1;    // sign det L
};

struct SearchCapExceeded : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// All affine isomorphisms P -> Q accepted by `accept`; stops after the first
// one when `first_only`. Throws SearchCapExceeded beyond `cap` vertices.
inline std::vector<AffineIso> affine_isomorphisms(const Polytope& P, const Polytope& Qp,
                                                  const std::function<bool(const AffineIso&)>& accept = {},
                                                  bool first_only = false, std::size_t cap = 10) {
  std::vector<AffineIso> out;
  if (P.dim() != Qp.dim() || P.nverts() != Qp.nverts()) return out;
  if (P.nverts() > cap) throw SearchCapExceeded("affine isomorphism search exceeds the vertex cap");
  const int d = P.dim();
  const std::size_t N = P.nverts();
  auto tP = [&](std::size_t i) { return P.coords(vsub(P.vertices()[i], P.vertices()[0])); };
  std::vector<Vec> cp(N), cq(N);
  for (std::size_t i = 0; i < N; ++i) cp[i] = tP(i);

  // affine basis of P: vertex 0 plus greedily independent vertices
  std::vector<int> basis = {0};
  Mat acc;
  for (std::size_t i = 1; i < N && int(acc.size()) < d; ++i) {
    Mat t = acc;
    t.push_back(cp[i]);
    if (rank(t, std::size_t(d)) == int(t.size())) {
      acc = t;
      basis.push_back(int(i));
    }
  }
  Mat Pcols = transpose(acc, std::size_t(d));  // column k = coords of basis vertex k+1
  std::optional<Mat> Pinv = d > 0 ? inverse(Pcols) : std::optional<Mat>(Mat{});

  std::vector<int> chosen(std::size_t(d) + 1, -1);
  std::vector<bool> used(N, false);
  bool stop = false;
  std::function<void(int)> rec = [&](int k) {
    if (stop) return;
    if (k == d + 1) {
      const Vec& q0 = Qp.vertices()[std::size_t(chosen[0])];
      Mat Qc(static_cast<std::size_t>(d), Vec(static_cast<std::size_t>(d)));
      for (int j = 0; j < d; ++j) {
        Vec w = Qp.coords(vsub(Qp.vertices()[std::size_t(chosen[std::size_t(j + 1)])], q0));
        for (int i = 0; i < d; ++i) Qc[std::size_t(i)][std::size_t(j)] = w[std::size_t(i)];
      }
      if (d > 0 && det(Qc) == 0) return;
      Mat L = d > 0 ? mat_mul(Qc, *Pinv, std::size_t(d), std::size_t(d)) : Mat{};
      AffineIso iso;
      iso.vmap.assign(N, -1);
      std::vector<bool> hit(N, false);
      for (std::size_t i = 0; i < N; ++i) {
        Vec img = d > 0 ? mat_vec(L, cp[i]) : Vec{};
        int found = -1;
        for (std::size_t j = 0; j < N; ++j) {
          if (hit[j]) continue;
          if (Qp.coords(vsub(Qp.vertices()[j], q0)) == img) {
            found = int(j);
            break;
          }
        }
        if (found < 0) return;
        hit[std::size_t(found)] = true;
        iso.vmap[i] = found;
      }
      iso.L = L;
      iso.orientation = d > 0 ? det_sign(L) : 1;
      if (!accept || accept(iso)) {
        out.push_back(std::move(iso));
        if (first_only) stop = true;
      }
      return;
    }
    for (std::size_t j = 0; j < N; ++j) {
      if (used[j]) continue;
      used[j] = true;
      chosen[std::size_t(k)] = int(j);
      rec(k + 1);
      used[j] = false;
      if (stop) return;
    }
  };
  rec(0);
  return out;
}

// Face-lattice permutation induced by a vertex map: source face i -> target face.
inline std::vector<int> face_permutation(const Polytope& P, const Polytope& Qp, const std::vector<int>& vmap) {
  std::vector<int> out(P.faces().size());
  for (std::size_t i = 0; i < P.faces().size(); ++i) {
    Bits b(Qp.nverts());
    for (int v : P.faces()[i].verts.indices()) b.set(std::size_t(vmap[std::size_t(v)]));
    out[i] = Qp.face_index(b);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Transport along an injective affine map x -> M x + t (M is n' x n).

struct Reembedding {
  Polytope image;
  std::vector<int> vmap;      // source vertex -> image vertex
  std::vector<int> face_map;  // source face -> image face
  Mat L;                      // linear part in canonical coordinates
  int orientation = 1;        // sign det L
};

inline Reembedding reembed(const Polytope& P, const Mat& M, const Vec& t) {
  const std::size_t n2 = t.size();
  const std::size_t n = std::size_t(P.ambient_dim());
  std::vector<Vec> img;
  for (auto& v : P.vertices()) img.push_back(vadd(mat_vec(M, v), t));
  std::vector<int> order(img.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) { return lex_less(img[std::size_t(a)], img[std::size_t(b)]); });
  Reembedding r;
  r.vmap.assign(img.size(), -1);
  std::vector<Vec> sorted;
  for (std::size_t k = 0; k < order.size(); ++k) {
    r.vmap[std::size_t(order[k])] = int(k);
    sorted.push_back(img[std::size_t(order[k])]);
  }
  for (std::size_t k = 1; k < sorted.size(); ++k)
    if (sorted[k] == sorted[k - 1]) throw PreconditionError("reembedding is not injective on the polytope");
  std::vector<FaceRec> faces;
  for (auto& F : P.faces()) {
    Bits b(sorted.size());
    for (int v : F.verts.indices()) b.set(std::size_t(r.vmap[std::size_t(v)]));
    faces.push_back({b, F.dim});
  }
  // frame of the image to express transported halfspaces
  Polytope probe = Polytope::from_lattice(int(n2), sorted, faces, {});
  const int d = P.dim();
  Mat L(static_cast<std::size_t>(d), Vec(static_cast<std::size_t>(d)));
  for (int j = 0; j < d; ++j) {
    Vec w = mat_vec(M, P.frame()[std::size_t(j)]);
    Vec c = probe.coords(w);
    for (int i = 0; i < d; ++i) L[std::size_t(i)][std::size_t(j)] = c[std::size_t(i)];
  }
  std::optional<Mat> Linv = d > 0 ? inverse(L) : std::optional<Mat>(Mat{});
  if (!Linv) throw PreconditionError("reembedding collapses the affine hull");
  std::vector<Halfspace> hs;
  for (auto& h : P.halfspaces()) {
    Vec alpha(static_cast<std::size_t>(d));
    for (int j = 0; j < d; ++j) alpha[std::size_t(j)] = dot(h.a, P.frame()[std::size_t(j)]);
    Vec beta(std::size_t(d), Q(0));  // beta = alpha L^{-1}
    for (int k = 0; k < d; ++k)
      for (int j = 0; j < d; ++j) beta[std::size_t(k)] += alpha[std::size_t(j)] * (*Linv)[std::size_t(j)][std::size_t(k)];
    Halfspace g;
    g.a = zero_vec(n2);
    for (int k = 0; k < d; ++k) g.a[std::size_t(probe.pivots()[std::size_t(k)])] = beta[std::size_t(k)];
    const Vec& x0 = P.vertices()[0];
    g.b = h.b - dot(h.a, x0) + dot(g.a, vadd(mat_vec(M, x0), t));
    hs.push_back(std::move(g));
  }
  (void)n;
  r.image = Polytope::from_lattice(int(n2), std::move(sorted), std::move(faces), std::move(hs));
  r.face_map.resize(P.faces().size());
  for (std::size_t i = 0; i < P.faces().size(); ++i) {
    Bits b(P.nverts());
    for (int v : P.faces()[i].verts.indices()) b.set(std::size_t(r.vmap[std::size_t(v)]));
    r.face_map[i] = r.image.face_index(b);
  }
  r.L = L;
  r.orientation = d > 0 ? det_sign(L) : 1;
  return r;
}

}  // namespace corner
