#pragma once

// JSON documents, schema "corner-calculus/1". Every shape violation surfaces
// as SchemaError; mathematical checks stay with the modules.

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "corner/bordism.hpp"

namespace corner::io {

using json = nlohmann::json;

inline constexpr const char* kSchema = "corner-calculus/1";

inline const json& field(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw SchemaError(std::string("missing field \"") + key + "\"");
  return j.at(key);
}

inline Q rational(const json& j) {
  if (j.is_string()) return parse_rational(j.get<std::string>());
  if (j.is_number_integer()) return Q(j.get<int64_t>());
  throw SchemaError("rational literals are strings \"p/q\" or integers");
}

inline int64_t integer(const json& j) {
  if (!j.is_number_integer()) throw SchemaError("expected an integer");
  return j.get<int64_t>();
}

inline Vec vec(const json& j) {
  if (!j.is_array()) throw SchemaError("expected an array of rationals");
  Vec v;
  for (auto& x : j) v.push_back(rational(x));
  return v;
}

inline Mat mat(const json& j, std::size_t cols) {
  if (!j.is_array()) throw SchemaError("expected a matrix");
  Mat m;
  for (auto& row : j) {
    m.push_back(vec(row));
    if (m.back().size() != cols) throw SchemaError("matrix row has wrong length");
  }
  return m;
}

inline json to_json(const Q& q) { return to_string(q); }

inline json to_json(const Vec& v) {
  json a = json::array();
  for (auto& x : v) a.push_back(to_json(x));
  return a;
}

inline json to_json(const Mat& m) {
  json a = json::array();
  for (auto& r : m) a.push_back(to_json(r));
  return a;
}

// ---------------------------------------------------------------------------
// Targets, polytopes, maps

inline Target target(const json& j) {
  std::string kind = field(j, "kind").is_string() ? j.at("kind").get<std::string>() : "";
  if (kind == "point") return Target::point();
  if (kind == "euclid" || kind == "torus") {
    int64_t m = integer(field(j, "dim"));
    if (m < 0) throw SchemaError("target dimension must be nonnegative");
    return kind == "euclid" ? Target::euclid(int(m)) : Target::torus(int(m));
  }
  if (kind == "mixed") {
    int64_t e = integer(field(j, "euclid")), t = integer(field(j, "torus"));
    if (e < 0 || t < 0) throw SchemaError("target dimension must be nonnegative");
    return Target{int(e), int(t)};
  }
  throw SchemaError("target kind must be point, euclid, torus or mixed");
}

inline json to_json(const Target& y) {
  if (y.e == 0 && y.t == 0) return {{"kind", "point"}};
  if (y.t == 0) return {{"kind", "euclid"}, {"dim", y.e}};
  if (y.e == 0) return {{"kind", "torus"}, {"dim", y.t}};
  return {{"kind", "mixed"}, {"euclid", y.e}, {"torus", y.t}};
}

struct PolytopeDoc {
  Polytope P;
  int sign = 1;
};

inline PolytopeDoc polytope(const json& j) {
  int64_t n = integer(field(j, "ambient_dim"));
  if (n < 0) throw SchemaError("ambient_dim must be nonnegative");
  std::vector<Vec> pts;
  const json& vs = field(j, "vertices");
  if (!vs.is_array() || vs.empty()) throw SchemaError("vertices must be a nonempty array");
  for (auto& v : vs) {
    pts.push_back(vec(v));
    if (int64_t(pts.back().size()) != n) throw SchemaError("vertex has wrong dimension");
  }
  PolytopeDoc out{Polytope::hull(int(n), pts), 1};
  if (out.P.nverts() != pts.size()) throw PreconditionError("listed points are not all vertices of their hull");
  if (j.contains("frame")) out.sign = frame_sign(out.P, mat(j.at("frame"), std::size_t(n)));
  if (j.contains("sign")) {
    int64_t s = integer(j.at("sign"));
    if (s != 1 && s != -1) throw SchemaError("sign must be 1 or -1");
    out.sign *= int(s);
  }
  return out;
}

inline json to_json(const Polytope& P, int sign = 1) {
  json vs = json::array();
  for (auto& v : P.vertices()) vs.push_back(to_json(v));
  return {{"ambient_dim", P.ambient_dim()}, {"vertices", vs}, {"frame", to_json(P.frame())}, {"sign", sign}};
}

// {"target", "matrix" (dim Y x n), "offset", optional "circle_matrix" (dim Y x r)}
inline AffineMap affine_map(const json& j, std::size_t n, std::size_t r) {
  AffineMap f;
  f.y = target(field(j, "target"));
  const std::size_t m = f.m();
  f.B = j.contains("matrix") ? mat(j.at("matrix"), n) : zero_mat(m, n);
  f.c = j.contains("offset") ? vec(j.at("offset")) : zero_vec(m);
  f.A = ZMat(m, ZVec(r, Z(0)));
  if (j.contains("circle_matrix")) {
    Mat a = mat(j.at("circle_matrix"), r);
    if (a.size() != m) throw SchemaError("circle_matrix needs one row per target coordinate");
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t k = 0; k < r; ++k) {
        if (!is_integer(a[i][k])) throw SchemaError("circle_matrix entries must be integers");
        f.A[i][k] = to_z(a[i][k]);
      }
  }
  if (f.B.size() != m || f.c.size() != m) throw SchemaError("map needs one row per target coordinate");
  validate_map(f, n, r);
  return f;
}

inline json to_json(const AffineMap& f) {
  json a = json::array();
  bool any = false;
  for (auto& row : f.A) {
    json jr = json::array();
    for (auto& x : row) {
      jr.push_back(x.str());
      any = any || x != 0;
    }
    a.push_back(jr);
  }
  json out = {{"target", to_json(f.y)}, {"matrix", to_json(f.B)}, {"offset", to_json(f.c)}};
  if (any) out["circle_matrix"] = a;
  return out;
}

// {"from", "to", "matrix" (dim to x dim from), "offset"}
inline TargetMap target_map(const json& j) {
  TargetMap h;
  h.from = target(field(j, "from"));
  h.to = target(field(j, "to"));
  h.H = j.contains("matrix") ? mat(j.at("matrix"), std::size_t(h.from.dim())) : zero_mat(std::size_t(h.to.dim()), std::size_t(h.from.dim()));
  h.c = j.contains("offset") ? vec(j.at("offset")) : zero_vec(std::size_t(h.to.dim()));
  validate_target_map(h);
  return h;
}

// ---------------------------------------------------------------------------
// Generators and chains

inline Label label(const json& j) {
  if (!j.is_array()) throw SchemaError("a label is an array of integers");
  Label l;
  for (auto& x : j) l.push_back(integer(x));
  std::sort(l.begin(), l.end());
  return l;
}

// Tags default to distinct labels base, base+1, ... in face-lattice order.
inline Generator generator(const json& j) {
  PolytopeDoc pd = polytope(field(j, "polytope"));
  int64_t r = j.contains("circles") ? integer(j.at("circles")) : 0;
  if (r < 0) throw SchemaError("circles must be nonnegative");
  Generator g;
  g.P = pd.P;
  g.r = std::size_t(r);
  g.sign = pd.sign;
  g.f = affine_map(field(j, "map"), std::size_t(g.P.ambient_dim()), g.r);
  if (j.contains("tag")) {
    const json& t = j.at("tag");
    if (t.contains("labels")) {
      for (auto& l : t.at("labels")) g.tag.labels.push_back(label(l));
      if (g.tag.labels.size() != g.P.faces().size()) throw SchemaError("tag needs one label per face");
    } else {
      g.tag = enumerate_tag(g.P, t.contains("base") ? integer(t.at("base")) : 0);
    }
  } else {
    g.tag = enumerate_tag(g.P);
  }
  validate_generator(g);
  return g;
}

inline json to_json(const Tag& t) {
  json ls = json::array();
  for (auto& l : t.labels) ls.push_back(l);
  return {{"origin", origin_name(t.origin)}, {"labels", ls}};
}

inline json to_json(const Generator& g) {
  json out = {{"polytope", to_json(g.P, g.sign)}, {"map", to_json(g.f)}, {"tag", to_json(g.tag)}};
  if (g.r) out["circles"] = g.r;
  out["vdim"] = g.vdim();
  return out;
}

inline Ring ring(const json& j) {
  if (!j.is_string()) throw SchemaError("ring must be \"Q\" or \"Z\"");
  std::string s = j.get<std::string>();
  if (s == "Q") return Ring::Q;
  if (s == "Z") return Ring::Z;
  throw SchemaError("ring must be \"Q\" or \"Z\"");
}

// {"ring", "terms": [{"coeff", "generator"}]}; terms may carry
// "quotient": {"group", "elements"} and then list "components" instead.
struct ChainDoc {
  Ring ring = Ring::Q;
  RawChain raw;
  bool has_quotient = false;
};

inline FiniteGroup group(const json& j);
inline GroupAction action(const json& j);

inline ChainDoc chain_doc(const json& j) {
  ChainDoc d;
  d.ring = j.contains("ring") ? ring(j.at("ring")) : Ring::Q;
  d.raw.ring = d.ring;
  const json& ts = field(j, "terms");
  if (!ts.is_array()) throw SchemaError("terms must be an array");
  for (auto& t : ts) {
    RawGenerator rg;
    if (t.contains("components")) {
      for (auto& c : t.at("components")) rg.components.push_back(generator(c));
    } else {
      rg.components.push_back(generator(field(t, "generator")));
    }
    if (t.contains("quotient")) {
      rg.quotient = action(t.at("quotient"));
      d.has_quotient = true;
      // without supplied tags, label faces by orbit so the tag descends
      bool supplied = false;
      for (auto& c : t.contains("components") ? t.at("components") : json::array({t.at("generator")}))
        supplied = supplied || c.contains("tag");
      if (!supplied) assign_orbit_tags(rg);
    }
    Q c = t.contains("coeff") ? rational(t.at("coeff")) : Q(1);
    d.raw.terms.push_back({std::move(rg), c});
  }
  return d;
}

inline Chain chain(const json& j) { return canonicalize(chain_doc(j).raw); }

inline json to_json(const Chain& c) {
  json ts = json::array();
  for (auto& [k, t] : c.terms()) ts.push_back({{"coeff", to_json(t.coeff)}, {"generator", to_json(t.g)}});
  return {{"ring", ring_name(c.ring())}, {"terms", ts}};
}

// ---------------------------------------------------------------------------
// Groups, actions, representations

inline FiniteGroup group(const json& j) {
  std::string kind = field(j, "kind").is_string() ? j.at("kind").get<std::string>() : "";
  if (kind == "cyclic") {
    int64_t n = integer(field(j, "order"));
    if (n < 1) throw SchemaError("cyclic order must be positive");
    return FiniteGroup::cyclic(int(n));
  }
  if (kind == "symmetric") {
    int64_t n = integer(field(j, "degree"));
    if (n < 1 || n > 5) throw SchemaError("symmetric degree must lie in 1..5");
    return FiniteGroup::symmetric(int(n));
  }
  if (kind == "product") {
    const json& fs = field(j, "factors");
    if (!fs.is_array() || fs.empty()) throw SchemaError("product needs factors");
    FiniteGroup g = group(fs[0]);
    for (std::size_t i = 1; i < fs.size(); ++i) g = FiniteGroup::product(g, group(fs[i]));
    return g;
  }
  if (kind == "table") {
    std::vector<std::string> names;
    std::vector<std::vector<int>> table;
    for (auto& row : field(j, "table")) {
      std::vector<int> r;
      for (auto& x : row) r.push_back(int(integer(x)));
      table.push_back(r);
      names.push_back("g" + std::to_string(names.size()));
    }
    return FiniteGroup(names, table);
  }
  throw SchemaError("group kind must be cyclic, symmetric, product or table");
}

// {"group", "elements": [{"matrix", "offset"}], "dim"} with one element per group element.
inline GroupAction action(const json& j) {
  GroupAction a{group(field(j, "group")), {}};
  const json& es = field(j, "elements");
  if (!es.is_array() || es.size() != std::size_t(a.G.order())) throw SchemaError("action needs one element per group element");
  for (auto& e : es) {
    const json& m = field(e, "matrix");
    std::size_t n = m.size();
    AffineAction act{mat(m, n), e.contains("offset") ? vec(e.at("offset")) : zero_vec(n)};
    if (act.t.size() != n) throw SchemaError("action offset has wrong dimension");
    a.act.push_back(std::move(act));
  }
  return a;
}

inline VirtualRep rep(const json& j, const FiniteGroup& H) {
  VirtualRep r;
  r.plus = vec(field(j, "character"));
  r.minus = j.contains("minus") ? vec(j.at("minus")) : zero_vec(r.plus.size());
  if (r.plus.size() != std::size_t(H.order()) || r.minus.size() != r.plus.size())
    throw SchemaError("characters need one value per group element");
  return r;
}

// ---------------------------------------------------------------------------
// Singular chains: {"target", "simplices": [{"coeff", "vertices"}]}

inline SingularChain singular_chain(const json& j) {
  Target y = target(field(j, "target"));
  SingularChain s;
  for (auto& t : field(j, "simplices")) {
    AffineSimplex a{y, {}};
    for (auto& v : field(t, "vertices")) {
      a.verts.push_back(vec(v));
      if (a.verts.back().size() != std::size_t(y.dim())) throw SchemaError("simplex vertex has wrong dimension");
    }
    if (a.verts.empty()) throw SchemaError("a simplex needs vertices");
    s.push_back({a, t.contains("coeff") ? rational(t.at("coeff")) : Q(1)});
  }
  return s;
}

// ---------------------------------------------------------------------------
// Bordism classes
//
// {"target", "components": [{"polytope", "circles", "map", "weight"}],
//  "pairings": [{"from": [i, [vertices]], "to": [j, [vertices]], "matrix", "offset"}],
//  "quotient": action}

inline int facet_by_vertices(const Polytope& P, const json& vs) {
  std::vector<Vec> pts;
  for (auto& v : vs) pts.push_back(vec(v));
  std::sort(pts.begin(), pts.end(), lex_less);
  for (int f : P.facets())
    if (P.face(f).vertices() == pts) return f;
  throw SchemaError("pairing names a vertex set that is not a facet");
}

inline BordismClass bordism(const json& j) {
  BordismClass b;
  b.y = target(field(j, "target"));
  for (auto& c : field(j, "components")) {
    PolytopeDoc pd = polytope(field(c, "polytope"));
    int64_t r = c.contains("circles") ? integer(c.at("circles")) : 0;
    if (r < 0) throw SchemaError("circles must be nonnegative");
    AffineMap f = c.contains("map") ? affine_map(c.at("map"), std::size_t(pd.P.ambient_dim()), std::size_t(r))
                                    : constant_map(b.y, std::size_t(pd.P.ambient_dim()), std::size_t(r),
                                                   zero_vec(std::size_t(b.y.dim())));
    if (f.y != b.y) throw SchemaError("component map has the wrong target");
    b.comps.push_back({pd.P, std::size_t(r), pd.sign, f, c.contains("weight") ? rational(c.at("weight")) : Q(1)});
  }
  if (j.contains("pairings"))
    for (auto& p : j.at("pairings")) {
      auto side = [&](const char* key) {
        const json& s = field(p, key);
        if (!s.is_array() || s.size() != 2) throw SchemaError("pairing sides are [component, vertices]");
        int64_t i = integer(s[0]);
        if (i < 0 || std::size_t(i) >= b.comps.size()) throw SchemaError("pairing refers to a missing component");
        return std::make_pair(int(i), facet_by_vertices(b.comps[std::size_t(i)].P, s[1]));
      };
      auto [a, fa] = side("from");
      auto [c, fc] = side("to");
      std::size_t na = std::size_t(b.comps[std::size_t(a)].P.ambient_dim());
      std::size_t nc = std::size_t(b.comps[std::size_t(c)].P.ambient_dim());
      Mat M = p.contains("matrix") ? mat(p.at("matrix"), na) : identity_mat(na);
      Vec t = p.contains("offset") ? vec(p.at("offset")) : zero_vec(nc);
      if (M.size() != nc || t.size() != nc) throw SchemaError("pairing map has the wrong shape");
      b.pairings.push_back({a, fa, c, fc, M, t});
    }
  if (j.contains("quotient")) b.quotient = QuotientData{action(j.at("quotient"))};
  return b;
}

inline json to_json(const BordismClass& b) {
  json cs = json::array();
  for (auto& c : b.comps) {
    json jc = {{"polytope", to_json(c.P, c.sign)}, {"map", to_json(c.f)}, {"weight", to_json(c.weight)}};
    if (c.r) jc["circles"] = c.r;
    cs.push_back(jc);
  }
  json ps = json::array();
  for (auto& p : b.pairings) {
    auto verts = [&](int comp, int f) {
      json vs = json::array();
      Polytope F = b.comps[std::size_t(comp)].P.face(f);
      for (auto& v : F.vertices()) vs.push_back(to_json(v));
      return vs;
    };
    ps.push_back({{"from", {p.a, verts(p.a, p.facet_a)}},
                  {"to", {p.b, verts(p.b, p.facet_b)}},
                  {"matrix", to_json(p.M)},
                  {"offset", to_json(p.t)}});
  }
  return {{"target", to_json(b.y)}, {"components", cs}, {"pairings", ps}};
}

// ---------------------------------------------------------------------------
// Documents

inline json parse_text(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw SchemaError(std::string("invalid JSON: ") + e.what());
  }
}

// Reads a document and checks its schema version.
inline json load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SchemaError("cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  json j = parse_text(ss.str());
  if (!j.is_object() || !j.contains("schema") || j.at("schema") != kSchema)
    throw SchemaError(std::string("document must declare \"schema\": \"") + kSchema + "\"");
  return j;
}

inline std::string kind(const json& doc) {
  const json& k = field(doc, "kind");
  if (!k.is_string()) throw SchemaError("kind must be a string");
  return k.get<std::string>();
}

// Converts nlohmann type errors raised while reading into SchemaError.
template <class F>
auto guarded(F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const json::exception& e) {
    throw SchemaError(std::string("malformed document: ") + e.what());
  }
}

inline json envelope(const std::string& kind) { return {{"schema", kSchema}, {"kind", kind}}; }

}  // namespace corner::io
