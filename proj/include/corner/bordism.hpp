#pragma once

// Bordism classes at desk scale: closed spaces certified by boundary
// pairings, group presentations from bordism witnesses, the maps into
// chains, products, and strata projections.

#include "corner/products.hpp"

namespace corner {

struct BordismComponent {
  Polytope P;
  std::size_t r = 0;
  int sign = 1;
  AffineMap f;
  Q weight = 1;
};

// Facet `facet_a` of component `a` is glued to facet `facet_b` of component
// `b` along x -> M x + t (ambient of a to ambient of b).
struct BoundaryPairing {
  int a = 0, facet_a = 0, b = 0, facet_b = 0;
  Mat M;
  Vec t;
};

struct QuotientData {
  GroupAction action;  // acts on the ambient space of every component
};

struct BordismClass {
  Target y;
  std::vector<BordismComponent> comps;
  std::vector<BoundaryPairing> pairings;
  std::optional<QuotientData> quotient;
  int vdim() const { return comps.empty() ? 0 : comps[0].P.dim() + int(comps[0].r); }
};

inline Generator component_generator(const BordismComponent& c, Tag tag) {
  return Generator{c.P, c.r, c.sign, c.f, std::move(tag)};
}

// Vertex map of a pairing; throws when the facet is not carried onto its partner.
inline std::vector<int> pairing_vertex_map(const BordismClass& b, const BoundaryPairing& p) {
  const Polytope& Pa = b.comps[std::size_t(p.a)].P;
  const Polytope& Pb = b.comps[std::size_t(p.b)].P;
  Polytope Fa = Pa.face(p.facet_a), Fb = Pb.face(p.facet_b);
  std::vector<int> vm;
  for (auto& v : Fa.vertices()) {
    Vec w = vadd(mat_vec(p.M, v), p.t);
    int hit = -1;
    for (std::size_t k = 0; k < Fb.nverts(); ++k)
      if (Fb.vertices()[k] == w) hit = int(k);
    if (hit < 0) throw PreconditionError("pairing does not carry facet onto its partner");
    vm.push_back(hit);
  }
  if (Fa.nverts() != Fb.nverts()) throw PreconditionError("paired facets have different vertex counts");
  return vm;
}

struct ClosedReport {
  bool ok = false;
  std::string reason;
  std::size_t boundary_facets = 0, pairs = 0;
};

inline ClosedReport check_closed(const BordismClass& b) {
  ClosedReport rep;
  std::map<std::pair<int, int>, int> used;
  for (std::size_t i = 0; i < b.comps.size(); ++i) {
    const auto& c = b.comps[i];
    validate_map(c.f, std::size_t(c.P.ambient_dim()), c.r);
    if (c.f.y != b.y) throw PreconditionError("components must map to the common target");
    rep.boundary_facets += c.P.facets().size();
  }
  for (auto& p : b.pairings) {
    if (p.a < 0 || p.b < 0 || std::size_t(p.a) >= b.comps.size() || std::size_t(p.b) >= b.comps.size())
      throw SchemaError("pairing refers to a missing component");
    const auto& ca = b.comps[std::size_t(p.a)];
    const auto& cb = b.comps[std::size_t(p.b)];
    auto is_facet = [](const Polytope& P, int f) { return f >= 0 && f <= P.top() && P.faces()[std::size_t(f)].dim == P.dim() - 1; };
    if (!is_facet(ca.P, p.facet_a) || !is_facet(cb.P, p.facet_b)) throw SchemaError("pairing refers to a non-facet");
    if (p.a == p.b && p.facet_a == p.facet_b) {
      rep.reason = "pairing fixes a facet";
      return rep;
    }
    for (auto key : {std::make_pair(p.a, p.facet_a), std::make_pair(p.b, p.facet_b)})
      if (used[key]++) {
        rep.reason = "facet paired twice";
        return rep;
      }
    if (ca.r != cb.r || ca.f.A != cb.f.A) {
      rep.reason = "paired components differ in their circle factors";
      return rep;
    }
    try {
      pairing_vertex_map(b, p);
    } catch (const PreconditionError& e) {
      rep.reason = e.what();
      return rep;
    }
    // orientation reversing: the transported boundary orientation of facet a
    // must be opposite to the boundary orientation of facet b
    Generator ga = restrict_generator(component_generator(ca, enumerate_tag(ca.P)), p.facet_a,
                                      ca.sign * ca.P.facet_sign(p.facet_a));
    Generator gb = restrict_generator(component_generator(cb, enumerate_tag(cb.P)), p.facet_b,
                                      cb.sign * cb.P.facet_sign(p.facet_b));
    Generator moved = reembed_generator(ga, p.M, p.t);
    if (moved.sign != -gb.sign) {
      rep.reason = "pairing preserves orientation";
      return rep;
    }
    for (auto& v : ga.P.vertices()) {
      Vec y1 = ca.f.eval(v), y2 = cb.f.eval(vadd(mat_vec(p.M, v), p.t));
      for (std::size_t k = 0; k < y1.size(); ++k) {
        Q d = y1[k] - y2[k];
        if (int(k) < b.y.e ? d != 0 : !is_integer(d)) {
          rep.reason = "pairing is not compatible with the maps";
          return rep;
        }
      }
    }
    ++rep.pairs;
  }
  if (2 * rep.pairs != rep.boundary_facets) {
    rep.reason = "unpaired boundary facet";
    return rep;
  }
  rep.ok = true;
  return rep;
}

// ---------------------------------------------------------------------------
// Coherent tags: faces glued by the pairings share one label.

inline std::vector<Tag> coherent_tags(const BordismClass& b, int64_t base = 0) {
  std::vector<std::size_t> offset;
  std::size_t total = 0;
  for (auto& c : b.comps) {
    offset.push_back(total);
    total += c.P.faces().size();
  }
  std::vector<std::size_t> parent(total);
  std::iota(parent.begin(), parent.end(), 0);
  std::function<std::size_t(std::size_t)> find = [&](std::size_t x) {
    return parent[x] == x ? x : parent[x] = find(parent[x]);
  };
  for (auto& p : b.pairings) {
    const Polytope& Pa = b.comps[std::size_t(p.a)].P;
    const Polytope& Pb = b.comps[std::size_t(p.b)].P;
    Polytope Fa = Pa.face(p.facet_a), Fb = Pb.face(p.facet_b);
    auto vm = pairing_vertex_map(b, p);
    auto fp = face_permutation(Fa, Fb, vm);
    for (std::size_t j = 0; j < fp.size(); ++j) {
      std::size_t x = offset[std::size_t(p.a)] + std::size_t(Pa.lift_index(p.facet_a, int(j)));
      std::size_t y = offset[std::size_t(p.b)] + std::size_t(Pb.lift_index(p.facet_b, fp[j]));
      std::size_t rx = find(x), ry = find(y);
      if (rx != ry) parent[std::max(rx, ry)] = std::min(rx, ry);
    }
  }
  std::map<std::size_t, int64_t> label;
  std::vector<Tag> out;
  for (std::size_t i = 0; i < b.comps.size(); ++i) {
    Tag t;
    t.origin = TagOrigin::Bordism;
    for (std::size_t f = 0; f < b.comps[i].P.faces().size(); ++f) {
      std::size_t root = find(offset[i] + f);
      auto it = label.find(root);
      if (it == label.end()) it = label.emplace(root, base + int64_t(label.size())).first;
      t.labels.push_back({it->second});
    }
    out.push_back(std::move(t));
  }
  return out;
}

inline Chain bordism_chain(const BordismClass& b, const std::vector<Tag>& tags) {
  Chain c;
  for (std::size_t i = 0; i < b.comps.size(); ++i) c.add(component_generator(b.comps[i], tags[i]), b.comps[i].weight);
  return c;
}

// Carry every term supported on a paired facet (or on [0,1] times it when
// `cylinder`) across its pairing, so glued terms can cancel.
inline Chain apply_pairings(const Chain& c, const BordismClass& b, bool cylinder) {
  Chain out(c.ring());
  for (auto& [k, t] : c.terms()) {
    bool moved = false;
    for (auto& p : b.pairings) {
      Polytope Fa = b.comps[std::size_t(p.a)].P.face(p.facet_a);
      Mat M = p.M;
      Vec tv = p.t;
      if (cylinder) {
        std::vector<Vec> pts;
        for (int time = 0; time <= 1; ++time)
          for (auto& v : Fa.vertices()) {
            Vec w = {Q(time)};
            w.insert(w.end(), v.begin(), v.end());
            pts.push_back(w);
          }
        Fa = Polytope::from_vertices(Fa.ambient_dim() + 1, pts);
        const std::size_t na = M.empty() ? 0 : M[0].size(), nb = M.size();
        Mat M2 = zero_mat(nb + 1, na + 1);
        M2[0][0] = 1;
        for (std::size_t i = 0; i < nb; ++i)
          for (std::size_t j = 0; j < na; ++j) M2[i + 1][j + 1] = M[i][j];
        Vec t2 = {Q(0)};
        t2.insert(t2.end(), tv.begin(), tv.end());
        M = M2;
        tv = t2;
      }
      if (t.g.P != Fa) continue;
      out.add(reembed_generator(t.g, M, tv), t.coeff);
      moved = true;
      break;
    }
    if (!moved) out.add(t.g, t.coeff);
  }
  return out;
}

struct KhReport {
  Chain chain;             // with the first tag choice
  Chain other;             // with the second tag choice
  bool cycle = false;      // boundary cancels across the pairings
  bool witness_ok = false; // boundary of the cylinder = other - chain, modulo glued side terms
  Chain witness;
};

// Bordism class to chain, with the cylinder witness relating two tag choices.
inline KhReport bordism_to_chain(const BordismClass& b, int64_t base_a = 0, int64_t base_b = 1000) {
  auto cl = check_closed(b);
  if (!cl.ok) throw PreconditionError("bordism class is not closed: " + cl.reason);
  KhReport rep;
  auto ta = coherent_tags(b, base_a), tb = coherent_tags(b, base_b);
  rep.chain = bordism_chain(b, ta);
  rep.other = bordism_chain(b, tb);
  rep.cycle = apply_pairings(boundary(rep.chain), b, false).is_zero();
  for (std::size_t i = 0; i < b.comps.size(); ++i)
    rep.witness.add(cylinder(component_generator(b.comps[i], ta[i]), tb[i]), b.comps[i].weight);
  Chain diff = boundary(rep.witness);
  for (auto& [k, t] : rep.other.terms()) diff.add(embed_at_time(t.g, 1), -t.coeff);
  for (auto& [k, t] : rep.chain.terms()) diff.add(embed_at_time(t.g, 0), t.coeff);
  rep.witness_ok = apply_pairings(diff, b, true).is_zero();
  return rep;
}

inline BordismClass classical_to_bordism(const BordismClass& b) { return b; }

// ---------------------------------------------------------------------------
// Presentations

struct Presentation {
  Ring ring = Ring::Z;
  std::size_t generators = 0;
  std::vector<std::vector<Z>> relations;  // one row per relation
  int free_rank = 0;
  std::vector<Z> torsion;  // invariant factors > 1
};

struct CornerError : PreconditionError {
  using PreconditionError::PreconditionError;
};

// Boundary facets of W not glued by its pairings, rejecting genuine corners.
inline std::vector<std::pair<int, int>> free_boundary(const BordismClass& W) {
  std::set<std::pair<int, int>> glued;
  for (auto& p : W.pairings) {
    glued.insert({p.a, p.facet_a});
    glued.insert({p.b, p.facet_b});
  }
  std::vector<std::pair<int, int>> out;
  for (std::size_t i = 0; i < W.comps.size(); ++i) {
    const Polytope& P = W.comps[i].P;
    if (P.dim() >= 2)
      for (int e : P.faces_of_dim(P.dim() - 2)) {
        auto fs = P.facets_containing(e);
        if (!glued.count({int(i), fs[0]}) && !glued.count({int(i), fs[1]}))
          throw CornerError("bordism witness has a corner: two unglued boundary facets meet");
      }
    for (int f : P.facets())
      if (!glued.count({int(i), f})) out.push_back({int(i), f});
  }
  return out;
}

// Coefficient of a boundary piece in terms of the generators' components:
// orientation-preserving matches first, then reversing ones.
inline std::optional<std::tuple<std::size_t, std::size_t, int>> match_component(
    const std::vector<BordismClass>& gens, const Polytope& P, std::size_t r, int sign, const AffineMap& f) {
  for (int want : {1, -1})
    for (std::size_t g = 0; g < gens.size(); ++g)
      for (std::size_t c = 0; c < gens[g].comps.size(); ++c) {
        const auto& gc = gens[g].comps[c];
        if (gc.r != r || gc.f.y != f.y || gc.f.A != f.A) continue;
        std::vector<AffineIso> isos;
        try {
          isos = affine_isomorphisms(P, gc.P, [&](const AffineIso& iso) {
            int orient = sign * gc.sign * iso.orientation;
            if (orient != want) return false;
            for (std::size_t v = 0; v < P.nverts(); ++v) {
              Vec y1 = f.eval(P.vertices()[v]), y2 = gc.f.eval(gc.P.vertices()[std::size_t(iso.vmap[v])]);
              for (std::size_t k = 0; k < y1.size(); ++k) {
                Q d = y1[k] - y2[k];
                if (int(k) < f.y.e ? d != 0 : !is_integer(d)) return false;
              }
            }
            return true;
          }, true);
        } catch (const SearchCapExceeded&) {
          throw PreconditionError("boundary matching exceeds the affine search cap; supply identifications");
        }
        if (!isos.empty()) return std::make_tuple(g, c, want);
      }
  return std::nullopt;
}

inline Presentation present_group(const std::vector<BordismClass>& gens, const std::vector<BordismClass>& witnesses,
                                  Ring ring = Ring::Z) {
  Presentation pres;
  pres.ring = ring;
  pres.generators = gens.size();
  for (auto& W : witnesses) {
    auto fb = free_boundary(W);
    std::vector<std::map<std::size_t, int>> hits(gens.size());
    for (auto& [ci, f] : fb) {
      const auto& c = W.comps[std::size_t(ci)];
      Polytope F = c.P.face(f);
      auto m = match_component(gens, F, c.r, c.sign * c.P.facet_sign(f), c.f);
      if (!m) throw PreconditionError("boundary of a witness matches no generator");
      auto [g, comp, s] = *m;
      hits[g][comp] += s;
    }
    std::vector<Z> row(gens.size(), Z(0));
    for (std::size_t g = 0; g < gens.size(); ++g) {
      if (hits[g].empty()) continue;
      int v = hits[g].begin()->second;
      if (hits[g].size() != gens[g].comps.size()) throw PreconditionError("witness boundary covers a generator only partly");
      for (auto& [comp, s] : hits[g])
        if (s != v) throw PreconditionError("witness boundary covers a generator's components unevenly");
      row[g] = v;
    }
    pres.relations.push_back(row);
  }
  // disjoint unions: a multi-component generator equals the sum of single-component matches
  for (std::size_t g = 0; g < gens.size(); ++g) {
    if (gens[g].comps.size() < 2) continue;
    std::vector<Z> row(gens.size(), Z(0));
    bool all = true;
    for (auto& c : gens[g].comps) {
      std::vector<BordismClass> singles;
      std::vector<std::size_t> idx;
      for (std::size_t h = 0; h < gens.size(); ++h)
        if (gens[h].comps.size() == 1) {
          singles.push_back(gens[h]);
          idx.push_back(h);
        }
      auto m = match_component(singles, c.P, c.r, c.sign, c.f);
      if (!m) {
        all = false;
        break;
      }
      row[idx[std::get<0>(*m)]] -= std::get<2>(*m);
    }
    if (!all) continue;
    row[g] += 1;
    pres.relations.push_back(row);
  }
  const std::size_t n = gens.size(), k = pres.relations.size();
  if (ring == Ring::Q) {
    Mat R(k, Vec(n));
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = 0; j < n; ++j) R[i][j] = Q(pres.relations[i][j]);
    pres.free_rank = int(n) - (k ? rank(R, n) : 0);
    return pres;
  }
  int rk = 0;
  if (k) {
    for (auto& d : smith(pres.relations, k, n).factors()) {
      ++rk;
      if (d > 1) pres.torsion.push_back(d);
    }
  }
  pres.free_rank = int(n) - rk;
  return pres;
}

// ---------------------------------------------------------------------------
// Products of closed classes

// Fibre products of all component pairs, with pairings induced from the
// operands: a glued facet of one factor times the other factor is glued.
inline BordismClass bordism_product(const BordismClass& a, const BordismClass& b) {
  if (a.y != b.y) throw PreconditionError("mismatched targets");
  for (const BordismClass* x : {&a, &b}) {
    auto cl = check_closed(*x);
    if (!cl.ok) throw PreconditionError("operand is not closed: " + cl.reason);
  }
  BordismClass out;
  out.y = a.y;
  struct Src {
    std::size_t i, j;
    std::vector<std::pair<int, int>> origin;
    std::vector<int> branch;
  };
  std::vector<Src> src;
  for (std::size_t i = 0; i < a.comps.size(); ++i)
    for (std::size_t j = 0; j < b.comps.size(); ++j) {
      const auto& ca = a.comps[i];
      const auto& cb = b.comps[j];
      CellMap x1{ca.P, ca.r, ca.sign, ca.f}, x2{cb.P, cb.r, cb.sign, cb.f};
      std::size_t n1 = std::size_t(ca.P.ambient_dim()), n2 = std::size_t(cb.P.ambient_dim());
      for (auto& C : fibre_product(x1, x2)) {
        BordismComponent bc{C.P, C.r, C.sign, pull_to_component(C, 0, ca.f, n1, n2), ca.weight * cb.weight};
        out.comps.push_back(std::move(bc));
        src.push_back({i, j, C.origin, C.branch});
      }
    }
  // glue facets: (facet of X1 paired by phi, X2) -> (partner facet, X2) via phi x id
  auto glue = [&](bool first) {
    const BordismClass& side = first ? a : b;
    for (auto& p : side.pairings) {
      for (std::size_t u = 0; u < out.comps.size(); ++u) {
        const Polytope& P = out.comps[u].P;
        if ((first ? src[u].i : src[u].j) != std::size_t(p.a)) continue;
        for (int f : P.facets()) {
          auto [o1, o2] = src[u].origin[std::size_t(f)];
          int mine = first ? o1 : o2;
          int other = first ? o2 : o1;
          const Polytope& otherP = first ? b.comps[src[u].j].P : a.comps[src[u].i].P;
          if (mine != p.facet_a || other != otherP.top()) continue;
          std::size_t na = std::size_t(a.comps[first ? std::size_t(p.a) : src[u].i].P.ambient_dim());
          std::size_t nb = std::size_t(b.comps[first ? src[u].j : std::size_t(p.a)].P.ambient_dim());
          std::size_t na2 = first ? std::size_t(a.comps[std::size_t(p.b)].P.ambient_dim()) : na;
          std::size_t nb2 = first ? nb : std::size_t(b.comps[std::size_t(p.b)].P.ambient_dim());
          Mat M = zero_mat(na2 + nb2, na + nb);
          Vec t = zero_vec(na2 + nb2);
          if (first) {
            for (std::size_t r = 0; r < na2; ++r) {
              for (std::size_t c = 0; c < na; ++c) M[r][c] = p.M[r][c];
              t[r] = p.t[r];
            }
            for (std::size_t c = 0; c < nb; ++c) M[na2 + c][na + c] = 1;
          } else {
            for (std::size_t c = 0; c < na; ++c) M[c][c] = 1;
            for (std::size_t r = 0; r < nb2; ++r) {
              for (std::size_t c = 0; c < nb; ++c) M[na2 + r][na + c] = p.M[r][c];
              t[na2 + r] = p.t[r];
            }
          }
          Polytope F = P.face(f);
          std::vector<Vec> img;
          for (auto& v : F.vertices()) img.push_back(vadd(mat_vec(M, v), t));
          std::sort(img.begin(), img.end(), lex_less);
          for (std::size_t w = 0; w < out.comps.size(); ++w) {
            if ((first ? src[w].i : src[w].j) != std::size_t(p.b)) continue;
            if ((first ? src[w].j : src[w].i) != (first ? src[u].j : src[u].i)) continue;
            for (int g : out.comps[w].P.facets()) {
              if (out.comps[w].P.face(g).vertices() != img) continue;
              out.pairings.push_back({int(u), f, int(w), g, M, t});
              auto inv = inverse(M);
              if (inv) {
                Vec ti = vscale(mat_vec(*inv, t), Q(-1));
                out.pairings.push_back({int(w), g, int(u), f, *inv, ti});
              }
            }
          }
        }
      }
    }
  };
  glue(true);
  glue(false);
  // keep one direction of each gluing
  std::vector<BoundaryPairing> uniq;
  std::set<std::pair<std::pair<int, int>, std::pair<int, int>>> seen;
  for (auto& p : out.pairings) {
    auto k1 = std::make_pair(std::make_pair(p.a, p.facet_a), std::make_pair(p.b, p.facet_b));
    auto k2 = std::make_pair(k1.second, k1.first);
    if (seen.count(k1) || seen.count(k2)) continue;
    seen.insert(k1);
    uniq.push_back(p);
  }
  out.pairings = uniq;
  return out;
}

// ---------------------------------------------------------------------------
// Strata projection for odd |Gamma'|

inline BordismClass strata_projection(const BordismClass& b, const FiniteGroup& H, const VirtualRep& rho) {
  if (H.order() % 2 == 0)
    throw PreconditionError("strata projection needs |Gamma'| odd: for even order the strata carry no orientation");
  if (!b.quotient) throw PreconditionError("strata projection needs a global quotient model");
  BordismClass out;
  out.y = b.y;
  for (auto& c : b.comps) {
    if (c.r != 0) throw PreconditionError("strata projection needs components without circle factors");
    if (H.order() == 1) {
      out.comps.push_back(c);
      continue;
    }
    auto res = orbifold_stratum(c.P, b.quotient->action, H, rho, true, c.sign);
    for (auto& piece : res.pieces) out.comps.push_back({piece.fix, 0, piece.sign, c.f, c.weight * piece.weight});
  }
  if (H.order() == 1) out.pairings = b.pairings;
  return out;
}

}  // namespace corner
