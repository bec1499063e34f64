#pragma once

// Chain generators [X, f, G]: one oriented cell, an affine map to a target,
// and a gauge tag. Generators are compared through a canonical form that
// fixes the cell's circle coordinates and folds the orientation into a sign.

#include <cstdint>

#include "corner/maps.hpp"

namespace corner {

// A label is a sorted multiset of integers; pairing two tags takes unions.
using Label = std::vector<int64_t>;

inline Label label_union(const Label& a, const Label& b) {
  Label out;
  std::merge(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

inline std::string label_key(const Label& l) {
  std::string s = "{";
  for (std::size_t i = 0; i < l.size(); ++i) s += (i ? "," : "") + std::to_string(l[i]);
  return s + "}";
}

// Where a tag came from. Only supplied tags are held to the finite-map
// (injectivity) condition; structured tags are built by operations whose
// contracts require repeated labels.
enum class TagOrigin { Supplied, Simplex, Product, Quotient, Cylinder, Bordism, Identity };

inline const char* origin_name(TagOrigin o) {
  switch (o) {
    case TagOrigin::Supplied: return "supplied";
    case TagOrigin::Simplex: return "simplex";
    case TagOrigin::Product: return "product";
    case TagOrigin::Quotient: return "quotient";
    case TagOrigin::Cylinder: return "cylinder";
    case TagOrigin::Bordism: return "bordism";
    case TagOrigin::Identity: return "identity";
  }
  return "?";
}

struct Tag {
  std::vector<Label> labels;  // aligned with the face lattice order
  TagOrigin origin = TagOrigin::Supplied;
};

struct Generator {
  Polytope P;
  std::size_t r = 0;  // circle factors
  int sign = 1;       // orientation relative to (canonical frame, circle basis)
  AffineMap f;
  Tag tag;

  int vdim() const { return P.dim() + int(r); }
  int codegree() const { return f.y.dim() - vdim(); }
  CellMap cell() const { return {P, r, sign, f}; }
};

struct TagError : PreconditionError {
  using PreconditionError::PreconditionError;
};

inline void validate_tag(const Generator& g) {
  if (g.tag.labels.size() != g.P.faces().size())
    throw SchemaError("tag must label every face: expected " + std::to_string(g.P.faces().size()) + " labels");
  if (g.tag.origin != TagOrigin::Supplied) return;
  std::vector<Label> seen = g.tag.labels;
  std::sort(seen.begin(), seen.end());
  for (std::size_t i = 1; i < seen.size(); ++i)
    if (seen[i] == seen[i - 1])
      throw TagError("tag is not injective: label " + label_key(seen[i]) + " repeats (finite-map condition)");
}

inline void validate_generator(const Generator& g) {
  validate_map(g.f, std::size_t(g.P.ambient_dim()), g.r);
  validate_tag(g);
  if (g.sign != 1 && g.sign != -1) throw SchemaError("sign must be 1 or -1");
}

// Deterministic tag: face i gets label {base + i}.
inline Tag enumerate_tag(const Polytope& P, int64_t base = 0, TagOrigin origin = TagOrigin::Supplied) {
  Tag t;
  t.origin = origin;
  for (std::size_t i = 0; i < P.faces().size(); ++i) t.labels.push_back({base + int64_t(i)});
  return t;
}

inline Tag restrict_tag(const Tag& tag, const Polytope& P, int face) {
  Tag out;
  out.origin = tag.origin;
  Polytope F = P.face(face);
  for (std::size_t j = 0; j < F.faces().size(); ++j) out.labels.push_back(tag.labels[std::size_t(P.lift_index(face, int(j)))]);
  return out;
}

// Restriction of a generator to a face, with the given orientation sign.
inline Generator restrict_generator(const Generator& g, int face, int sign) {
  Generator h;
  h.P = g.P.face(face);
  h.r = g.r;
  h.sign = sign;
  h.f = g.f;
  h.tag = restrict_tag(g.tag, g.P, face);
  return h;
}

// ---------------------------------------------------------------------------

struct CanonicalGenerator {
  Generator g;    // sign folded to +1
  int sign = 1;   // coefficient multiplier
  bool zero = false;  // relation (i) kills it: an orientation-reversing automorphism exists
  std::string key;
};

inline std::string generator_key(const Generator& g) {
  std::string s = g.P.key() + "|r" + std::to_string(g.r) + "|" + map_key(g.f) + "|";
  for (auto& l : g.tag.labels) s += label_key(l);
  return s;
}

inline CanonicalGenerator canonical(Generator g) {
  CanonicalGenerator out;
  NormalizedMap nm = normalize_map(g.P, g.r, g.f);
  g.f = std::move(nm.f);
  if (nm.kernel_circle) {
    // a circle in the kernel of f admits a reflection, reversing orientation
    out.zero = true;
    out.g = std::move(g);
    out.g.sign = 1;
    out.key = generator_key(out.g);
    return out;
  }
  out.sign = g.sign * nm.sign_change;
  g.sign = 1;
  out.key = generator_key(g);
  out.g = std::move(g);
  return out;
}

// ---------------------------------------------------------------------------
// Boundary of a single generator, and its corners

struct SignedGenerator {
  Generator g;
  int sign = 1;  // multiplicity sign, separate from orientation
};

inline std::vector<Generator> boundary_generators(const Generator& g) {
  std::vector<Generator> out;
  if (g.P.dim() == 0) return out;
  for (int f : g.P.facets()) out.push_back(restrict_generator(g, f, g.sign * g.P.facet_sign(f)));
  return out;
}

struct CornerPair {
  int face = -1, b1 = -1, b2 = -1;
  Generator via_first, via_second;
};

inline std::vector<CornerPair> corner_pairs(const Generator& g) {
  std::vector<CornerPair> out;
  if (g.P.dim() < 2) return out;
  OrientedPolytope X{g.P, g.sign};
  for (int e : g.P.faces_of_dim(g.P.dim() - 2)) {
    auto fs = g.P.facets_containing(e);
    if (fs.size() != 2) throw PreconditionError("codimension-2 face not in exactly two facets");
    CornerPair c;
    c.face = e;
    c.b1 = fs[0];
    c.b2 = fs[1];
    c.via_first = restrict_generator(g, e, corner_sign(X, e, fs[0]));
    c.via_second = restrict_generator(g, e, corner_sign(X, e, fs[1]));
    out.push_back(std::move(c));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Transport along an injective affine map of the ambient space.

inline Generator reembed_generator(const Generator& g, const Mat& M, const Vec& t) {
  Reembedding re = reembed(g.P, M, t);
  Generator h;
  h.P = re.image;
  h.r = g.r;
  h.sign = g.sign * re.orientation;
  h.tag.origin = g.tag.origin;
  h.tag.labels.assign(h.P.faces().size(), {});
  for (std::size_t i = 0; i < re.face_map.size(); ++i) h.tag.labels[std::size_t(re.face_map[i])] = g.tag.labels[i];
  const int d = g.P.dim();
  const std::size_t m = g.f.m(), n2 = t.size();
  std::optional<Mat> Linv = d > 0 ? inverse(re.L) : std::optional<Mat>(Mat{});
  h.f.y = g.f.y;
  h.f.A = g.f.A;
  h.f.B = zero_mat(m, n2);
  h.f.c = g.f.c;
  const Vec& x0 = g.P.vertices()[0];
  Vec y0 = vadd(mat_vec(M, x0), t);
  for (std::size_t i = 0; i < m; ++i) {
    Vec beta(static_cast<std::size_t>(d));
    for (int j = 0; j < d; ++j) beta[std::size_t(j)] = dot(g.f.B[i], g.P.frame()[std::size_t(j)]);
    for (int k = 0; k < d; ++k) {
      Q s = 0;
      for (int j = 0; j < d; ++j) s += beta[std::size_t(j)] * (*Linv)[std::size_t(j)][std::size_t(k)];
      h.f.B[i][std::size_t(h.P.pivots()[std::size_t(k)])] = s;
    }
    h.f.c[i] += dot(g.f.B[i], x0) - dot(h.f.B[i], y0);
  }
  return h;
}

// Matrix dropping coordinate j of R^n.
inline Mat drop_coordinate(std::size_t n, std::size_t j) {
  Mat M = zero_mat(n - 1, n);
  for (std::size_t i = 0, k = 0; i < n; ++i) {
    if (i == j) continue;
    M[k++][i] = 1;
  }
  return M;
}

}  // namespace corner
