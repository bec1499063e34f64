#pragma once

// Named check suites. Instance i of a suite draws from its own seed, derived
// from (seed, suite, i), so results do not depend on the worker count.

#include <atomic>
#include <thread>

#include "corner/io.hpp"
#include "corner/random.hpp"

namespace corner {

struct SuiteOptions {
  uint64_t seed = 0;
  int count = 100;
  int max_dim = 4;
  int max_verts = 10;
  Ring ring = Ring::Q;
  int jobs = 1;
};

struct CheckResult {
  std::string identity;
  bool pass = false;
  std::string witness;  // set on failure
};

struct InstanceResult {
  bool skipped = false;
  std::string note;
  std::vector<CheckResult> checks;
  std::size_t resamples = 0;
};

struct SuiteReport {
  std::string name, anchor;
  std::size_t instances = 0, skipped = 0, resamples = 0;
  std::vector<std::string> identities;               // first-seen order
  std::map<std::string, std::pair<int, int>> tally;  // identity -> (passed, failed)
  std::vector<std::pair<std::size_t, CheckResult>> failures;
  std::vector<std::string> notes;
  bool ok() const { return failures.empty() && instances > skipped; }
};

inline uint64_t splitmix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline uint64_t instance_seed(uint64_t seed, const std::string& suite, std::size_t i) {
  uint64_t h = 1469598103934665603ULL;  // FNV-1a
  for (char c : suite) h = (h ^ uint64_t(uint8_t(c))) * 1099511628211ULL;
  return splitmix64(splitmix64(seed ^ h) + i);
}

// Runs fn(0..n-1) on up to `jobs` threads; results keep input order.
template <class R>
std::vector<R> run_indexed(std::size_t n, int jobs, const std::function<R(std::size_t)>& fn) {
  std::vector<R> out(n);
  std::vector<std::exception_ptr> errs(n);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i; (i = next++) < n;) {
      try {
        out[i] = fn(i);
      } catch (...) {
        errs[i] = std::current_exception();
      }
    }
  };
  std::size_t k = std::max<std::size_t>(1, std::min<std::size_t>(std::size_t(std::max(jobs, 1)), n));
  std::vector<std::thread> pool;
  for (std::size_t t = 1; t < k; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  for (auto& e : errs)
    if (e) std::rethrow_exception(e);
  return out;
}

inline SuiteReport reduce(const std::string& name, const std::string& anchor, const std::vector<InstanceResult>& results) {
  SuiteReport rep;
  rep.name = name;
  rep.anchor = anchor;
  for (std::size_t i = 0; i < results.size(); ++i) {
    const auto& r = results[i];
    ++rep.instances;
    rep.resamples += r.resamples;
    if (r.skipped) {
      ++rep.skipped;
      continue;
    }
    if (!r.note.empty()) rep.notes.push_back(r.note);
    for (auto& c : r.checks) {
      if (!rep.tally.count(c.identity)) rep.identities.push_back(c.identity);
      auto& t = rep.tally[c.identity];
      (c.pass ? t.first : t.second)++;
      if (!c.pass) rep.failures.push_back({i, c});
    }
  }
  return rep;
}

// One draw of an instance; nullopt asks for a resample.
using Attempt = std::function<std::optional<InstanceResult>(Rng&)>;

inline constexpr int kMaxAttempts = 400;

inline SuiteReport run_random_suite(const std::string& name, const std::string& anchor, const SuiteOptions& o,
                                    const Attempt& attempt) {
  auto results = run_indexed<InstanceResult>(std::size_t(std::max(o.count, 0)), o.jobs, [&](std::size_t i) {
    Rng rng(instance_seed(o.seed, name, i));
    for (std::size_t a = 0; a < std::size_t(kMaxAttempts); ++a) {
      std::optional<InstanceResult> r;
      try {
        r = attempt(rng);
      } catch (const NotTransverse&) {
        r.reset();
      }
      if (r) {
        r->resamples = a;
        return *r;
      }
    }
    InstanceResult s;
    s.skipped = true;
    s.resamples = std::size_t(kMaxAttempts);
    return s;
  });
  return reduce(name, anchor, results);
}

inline SuiteReport run_fixed_suite(const std::string& name, const std::string& anchor, std::size_t n, int jobs,
                                   const std::function<InstanceResult(std::size_t)>& fn) {
  return reduce(name, anchor, run_indexed<InstanceResult>(n, jobs, fn));
}

inline std::string chain_difference(const Chain& lhs, const Chain& rhs) {
  Chain d = lhs - rhs;
  std::string s = "lhs has " + std::to_string(lhs.size()) + " terms, rhs " + std::to_string(rhs.size());
  if (!d.is_zero()) {
    const auto& t = d.terms().begin()->second;
    s += "; first difference " + to_string(t.coeff) + " * " + t.g.P.key() + " over " + t.g.f.y.name();
  }
  return s;
}

inline CheckResult from_identity(const IdentityCheck& c) {
  CheckResult r{c.name, c.ok(), ""};
  if (!r.pass) r.witness = chain_difference(c.lhs, c.rhs);
  return r;
}

inline CheckResult check(const std::string& identity, bool pass, const std::string& witness = "") {
  return {identity, pass, pass ? "" : witness};
}

inline Target small_target(Rng& rng) {
  switch (rng.uniform(0, 2)) {
    case 0: return Target::point();
    case 1: return Target::euclid(1);
    default: return Target::torus(1);
  }
}

inline GeneratorOptions small_generators(const SuiteOptions& o, Target y, int64_t base) {
  GeneratorOptions g;
  g.poly.max_dim = std::min(o.max_dim, 2);
  g.poly.max_verts = std::min(o.max_verts, 6);
  g.max_r = y.t ? 1 : 0;
  g.label_base = base;
  return g;
}

inline GeneratorOptions submersion_generators(const SuiteOptions& o, Target y, int64_t base) {
  GeneratorOptions g;
  g.poly.max_dim = std::min(o.max_dim, 1);
  g.poly.max_verts = std::min(o.max_verts, 4);
  g.max_r = y.t;
  g.map.submersion = true;
  g.label_base = base;
  return g;
}

// ---------------------------------------------------------------------------
// Chain-level suites

inline SuiteReport suite_dd_zero(const SuiteOptions& o) {
  return run_random_suite("dd-zero", "boundary of boundary vanishes by the free corner involution", o,
                          [&](Rng& rng) -> std::optional<InstanceResult> {
                            Target y = small_target(rng);
                            GeneratorOptions go;
                            go.poly.max_dim = o.max_dim;
                            go.poly.max_verts = o.max_verts;
                            go.max_r = y.t;
                            Chain c = random_chain(rng, y, 20, go);
                            if (c.is_zero()) return std::nullopt;
                            DDReport rep = verify_dd_zero(c);
                            std::string w;
                            if (rep.witness) w = rep.witness->reason + " at face " + std::to_string(rep.witness->face);
                            InstanceResult r;
                            r.checks.push_back(check("boundary of boundary canonicalizes to zero", rep.chain_zero));
                            r.checks.push_back(check("each corner pair cancels", rep.pairs_ok, w));
                            return r;
                          });
}

inline SuiteReport suite_homology_simplex(const SuiteOptions& o) {
  return run_fixed_suite("homology-simplex", "face complex of a simplex has the homology of a point", 4, o.jobs,
                         [&](std::size_t k) {
                           AffineSimplex s{Target::point(), std::vector<Vec>(k + 1, Vec{})};
                           HomologyResult h = homology(face_complex(singular_generator(s)), o.ring);
                           bool ok = true;
                           std::string betti;
                           for (int d = 0; d <= int(k); ++d) {
                             int b = h.betti.count(d) ? h.betti.at(d) : 0;
                             betti += (d ? "," : "") + std::to_string(b);
                             ok = ok && b == (d == 0 ? 1 : 0);
                             if (h.torsion.count(d) && !h.torsion.at(d).empty()) ok = false;
                           }
                           InstanceResult r;
                           r.note = "simplex of dimension " + std::to_string(k) + ": Betti (" + betti + ")";
                           r.checks.push_back(check("Betti numbers are (1,0,...,0)", ok, "Betti (" + betti + ")"));
                           return r;
                         });
}

inline SuiteReport suite_singular_bridge(const SuiteOptions& o) {
  return run_random_suite("singular-bridge", "singular simplices to chains commutes with boundary", o,
                          [&](Rng& rng) -> std::optional<InstanceResult> {
                            Target ys[5] = {Target::euclid(1), Target::euclid(2), Target::euclid(3), Target::torus(1),
                                            Target::torus(2)};
                            Target y = ys[rng.uniform(0, 4)];
                            SingularChain s;
                            int terms = int(rng.uniform(1, 3));
                            for (int i = 0; i < terms; ++i) {
                              int k = int(rng.uniform(0, std::min(3, o.max_dim)));
                              AffineSimplex a{y, {}};
                              for (int v = 0; v <= k; ++v) {
                                Vec p(static_cast<std::size_t>(y.dim()));
                                for (auto& x : p) x = rng.rational(-2, 2, 2);
                                a.verts.push_back(p);
                              }
                              s.push_back({a, rng.rational(1, 3, 1) * (rng.coin() ? 1 : -1)});
                            }
                            ChainMapReport rep = check_singular_chain_map(s);
                            InstanceResult r;
                            r.checks.push_back(check("boundary after bridge equals bridge after boundary", rep.ok(),
                                                     chain_difference(rep.lhs, rep.rhs)));
                            return r;
                          });
}

struct QuotientCase {
  std::string name;
  Polytope P;
  Target y;
  GroupAction action;
};

inline std::vector<QuotientCase> quotient_cases() {
  FiniteGroup z2 = FiniteGroup::cyclic(2), z3 = FiniteGroup::cyclic(3);
  auto lin = [](Mat L) { return AffineAction{L, zero_vec(L.size())}; };
  Mat rot = {{Q(0), Q(-1)}, {Q(1), Q(-1)}};  // order 3 in the lattice basis of the hexagon
  std::vector<Vec> hex = {{1, 0}, {1, 1}, {0, 1}, {-1, 0}, {-1, -1}, {0, -1}};
  return {
      {"Z2 flip of [-1,1] over a point", Polytope::box({-1}, {1}), Target::point(),
       {z2, {lin(identity_mat(1)), lin({{Q(-1)}})}}},
      {"Z2 flip of [-1,1] over Euclid(1)", Polytope::box({-1}, {1}), Target::euclid(1),
       {z2, {lin(identity_mat(1)), lin({{Q(-1)}})}}},
      {"Z2 antipodal map of a square", Polytope::box({-1, -1}, {1, 1}), Target::point(),
       {z2, {lin(identity_mat(2)), lin({{Q(-1), Q(0)}, {Q(0), Q(-1)}})}}},
      {"Z2 coordinate swap of a square", Polytope::box({-1, -1}, {1, 1}), Target::point(),
       {z2, {lin(identity_mat(2)), lin({{Q(0), Q(1)}, {Q(1), Q(0)}})}}},
      {"Z3 rotation of a hexagon", Polytope::hull(2, hex), Target::point(),
       {z3, {lin(identity_mat(2)), lin(rot), lin(mat_mul(rot, rot, 2, 2))}}},
  };
}

inline SuiteReport suite_quotient(const SuiteOptions& o) {
  auto cases = quotient_cases();
  return run_fixed_suite(
      "quotient", "quotient relation divides by the group order", cases.size(), o.jobs, [&](std::size_t i) {
        const auto& qc = cases[i];
        Generator g;
        g.P = qc.P;
        g.f = constant_map(qc.y, std::size_t(qc.P.ambient_dim()), 0, zero_vec(std::size_t(qc.y.dim())));
        RawGenerator rg{{g}, qc.action};
        assign_orbit_tags(rg);
        RawChain rc;
        rc.terms.push_back({rg, 1});
        Chain c = canonicalize(rc);
        Q expected = Q(1) / Q(qc.action.G.order());
        bool coeff_ok = c.size() == 1 && c.terms().begin()->second.coeff == expected;
        InstanceResult r;
        r.note = qc.name + ": coefficient " + (c.size() == 1 ? to_string(c.terms().begin()->second.coeff) : "?");
        r.checks.push_back(check("coefficient is 1/|G|", coeff_ok, r.note));
        Chain lhs = boundary(c), rhs = canonicalize(boundary_raw(rc));
        r.checks.push_back(check("boundary commutes with canonicalization", lhs == rhs, chain_difference(lhs, rhs)));
        return r;
      });
}

// ---------------------------------------------------------------------------
// Fibre product suites

inline SuiteReport suite_boundary_product(const SuiteOptions& o) {
  return run_random_suite("boundary-product", "boundary of a fibre product, sign (-1)^(vdim X1 + dim Y)", o,
                          [&](Rng& rng) -> std::optional<InstanceResult> {
                            Target y = small_target(rng);
                            Generator a = random_generator(rng, y, small_generators(o, y, 0));
                            Generator b = random_generator(rng, y, small_generators(o, y, 1000));
                            IdentityCheck c = check_boundary_of_product(a, b);
                            if (c.lhs.is_zero() && c.rhs.is_zero()) return std::nullopt;
                            InstanceResult r;
                            r.checks.push_back(from_identity(c));
                            return r;
                          });
}

inline SuiteReport suite_swap(const SuiteOptions& o) {
  return run_random_suite("swap", "swapping fibre product factors, sign (-1)^((vdim X1 - dim Y)(vdim X2 - dim Y))", o,
                          [&](Rng& rng) -> std::optional<InstanceResult> {
                            Target y = small_target(rng);
                            Generator a = random_generator(rng, y, small_generators(o, y, 0));
                            Generator b = random_generator(rng, y, small_generators(o, y, 1000));
                            IdentityCheck c = check_swap(a, b);
                            if (c.lhs.is_zero() && c.rhs.is_zero()) return std::nullopt;
                            InstanceResult r;
                            r.checks.push_back(from_identity(c));
                            return r;
                          });
}

inline SuiteReport suite_associativity(const SuiteOptions& o) {
  return run_random_suite("associativity", "fibre products over a product target associate", o,
                          [&](Rng& rng) -> std::optional<InstanceResult> {
                            Target y1 = small_target(rng), y2 = small_target(rng);
                            ProductTarget pt = product_target(y1, y2);
                            Generator x1 = random_generator(rng, y1, small_generators(o, y1, 0));
                            Generator x2 = random_generator(rng, pt.y, small_generators(o, pt.y, 300));
                            Generator x3 = random_generator(rng, y2, small_generators(o, y2, 600));
                            IdentityCheck c = check_associativity(x1, x2, x3, pt);
                            if (c.lhs.is_zero() && c.rhs.is_zero()) return std::nullopt;
                            InstanceResult r;
                            r.checks.push_back(from_identity(c));
                            return r;
                          });
}

inline SuiteReport suite_interchange(const SuiteOptions& o) {
  return run_random_suite("interchange", "interchange of fibre products, sign (-1)^(dim Y2 (dim Y1 + vdim X2))", o,
                          [&](Rng& rng) -> std::optional<InstanceResult> {
                            Target y1 = small_target(rng), y2 = small_target(rng);
                            ProductTarget pt = product_target(y1, y2);
                            Generator x1 = random_generator(rng, pt.y, small_generators(o, pt.y, 0));
                            Generator x2 = random_generator(rng, y1, small_generators(o, y1, 300));
                            Generator x3 = random_generator(rng, y2, small_generators(o, y2, 600));
                            IdentityCheck c = check_interchange(x1, x2, x3, pt);
                            if (c.lhs.is_zero() && c.rhs.is_zero()) return std::nullopt;
                            InstanceResult r;
                            r.checks.push_back(from_identity(c));
                            return r;
                          });
}

// ---------------------------------------------------------------------------
// Cochain suites

inline SuiteReport suite_dga(const SuiteOptions& o) {
  return run_random_suite("dga", "cochains form a supercommutative differential graded algebra", o,
                          [&](Rng& rng) -> std::optional<InstanceResult> {
                            Target y = rng.coin() ? Target::torus(1) : Target::torus(2);
                            Cochain a = random_chain(rng, y, 2, submersion_generators(o, y, 0));
                            Cochain b = random_chain(rng, y, 2, submersion_generators(o, y, 500));
                            Cochain c = random_chain(rng, y, 1, submersion_generators(o, y, 900));
                            if (cup(a, b).is_zero()) return std::nullopt;
                            DGAReport rep = check_dga(a, b, c);
                            InstanceResult r;
                            r.note = "over " + y.name();
                            for (auto& ch : rep.checks) r.checks.push_back(from_identity(ch));
                            return r;
                          });
}

inline SuiteReport suite_cap(const SuiteOptions& o) {
  return run_random_suite("cap", "chains form a module over cochains under cap product", o,
                          [&](Rng& rng) -> std::optional<InstanceResult> {
                            Target y = rng.coin() ? Target::torus(1) : Target::torus(2);
                            GeneratorOptions ga = small_generators(o, y, 0);
                            ga.max_r = 1;
                            Chain a = random_chain(rng, y, 2, ga);
                            Cochain b = random_chain(rng, y, 2, submersion_generators(o, y, 700));
                            Cochain c = random_chain(rng, y, 1, submersion_generators(o, y, 900));
                            if (cap(a, b).is_zero()) return std::nullopt;
                            TargetMap h{y, Target::torus(1), Mat{zero_vec(std::size_t(y.t))}, {rng.rational(0, 0, 5) + Q(1, 5)}};
                            for (auto& x : h.H[0]) x = rng.uniform(-2, 2);
                            Cochain beta = random_chain(rng, Target::torus(1), 2, submersion_generators(o, Target::torus(1), 1100));
                            InstanceResult r;
                            r.checks.push_back(from_identity(check_cap_module(a, b, c)));
                            r.checks.push_back(from_identity(check_cap_leibniz(a, b)));
                            r.checks.push_back(from_identity(check_cap_identity(a, y)));
                            r.checks.push_back(from_identity(check_projection_formula(a, beta, h)));
                            return r;
                          });
}

// ---------------------------------------------------------------------------
// Strata

struct StrataCase {
  std::string name;
  Polytope X;
  GroupAction action;
  FiniteGroup H;
  VirtualRep rho;
};

inline Mat perm_matrix(const std::vector<int>& p) {
  Mat M = zero_mat(p.size(), p.size());
  for (std::size_t i = 0; i < p.size(); ++i) M[std::size_t(p[i])][i] = 1;
  return M;
}

inline Mat diag(std::initializer_list<int> d) {
  Mat M = zero_mat(d.size(), d.size());
  std::size_t i = 0;
  for (int x : d) M[i][i] = x, ++i;
  return M;
}

inline std::vector<StrataCase> strata_cases() {
  auto lin = [](Mat L) { return AffineAction{L, zero_vec(L.size())}; };
  FiniteGroup z2 = FiniteGroup::cyclic(2), z3 = FiniteGroup::cyclic(3), s3 = FiniteGroup::symmetric(3);
  FiniteGroup k4 = FiniteGroup::product(z2, z2);
  Polytope I = Polytope::box({-1}, {1});
  Polytope sq = Polytope::box({-1, -1}, {1, 1});
  Polytope cube = Polytope::box({-1, -1, -1}, {1, 1, 1});
  std::vector<Vec> hexv = {{1, 0}, {1, 1}, {0, 1}, {-1, 0}, {-1, -1}, {0, -1}};
  Polytope hex = Polytope::hull(2, hexv);
  std::vector<Vec> prismv;
  for (auto& v : hexv)
    for (int z : {-1, 1}) prismv.push_back({v[0], v[1], Q(z)});
  Polytope prism = Polytope::hull(3, prismv);
  Mat rot = {{Q(0), Q(-1)}, {Q(1), Q(-1)}};
  Mat rot2 = mat_mul(rot, rot, 2, 2);
  Mat rot3 = {{Q(0), Q(-1), Q(0)}, {Q(1), Q(-1), Q(0)}, {Q(0), Q(0), Q(1)}};
  Mat rot3sq = mat_mul(rot3, rot3, 3, 3);
  // permutohedron of S3: permutations of (1,0,-1) spanning the plane x+y+z=0
  std::vector<Vec> perm_hex;
  std::vector<int> p = {0, 1, 2};
  do perm_hex.push_back({Q(1 - p[0]), Q(1 - p[1]), Q(1 - p[2])});
  while (std::next_permutation(p.begin(), p.end()));
  Polytope permutohedron = Polytope::hull(3, perm_hex);
  std::vector<AffineAction> s3act;
  p = {0, 1, 2};
  do s3act.push_back(lin(perm_matrix(p)));
  while (std::next_permutation(p.begin(), p.end()));
  GroupAction s3_on_plane{s3, s3act};
  Mat cyc = perm_matrix({1, 2, 0});
  // symmetric(3) element order: [012] [021] [102] [120] [201] [210]
  VirtualRep s3_standard{{2, 0, 0, -1, -1, 0}, {}};
  FiniteGroup z3_in_s3 = z3;
  GroupAction k4_sq{k4, {lin(diag({1, 1})), lin(diag({1, -1})), lin(diag({-1, 1})), lin(diag({-1, -1}))}};
  GroupAction k4_cube{k4, {lin(diag({1, 1, 1})), lin(diag({1, -1, 1})), lin(diag({-1, 1, 1})), lin(diag({-1, -1, 1}))}};
  VirtualRep sign1{{1, -1}, {}}, sign2{{2, -2}, {}}, sign3{{3, -3}, {}}, rot_rep{{2, -1, -1}, {}};
  return {
      {"Z2 by -1 on an interval", I, {z2, {lin(diag({1})), lin(diag({-1}))}}, z2, sign1},
      {"Z2 reflection of a square", sq, {z2, {lin(diag({1, 1})), lin(diag({-1, 1}))}}, z2, sign1},
      {"Z2 by -1 on a square", sq, {z2, {lin(diag({1, 1})), lin(diag({-1, -1}))}}, z2, sign2},
      {"Z2 by -1 on a cube", cube, {z2, {lin(diag({1, 1, 1})), lin(diag({-1, -1, -1}))}}, z2, sign3},
      {"Z2 reflection of a cube", cube, {z2, {lin(diag({1, 1, 1})), lin(diag({1, 1, -1}))}}, z2, sign1},
      {"Z3 rotation of a hexagon", hex, {z3, {lin(identity_mat(2)), lin(rot), lin(rot2)}}, z3, rot_rep},
      {"Z3 rotation of a hexagonal prism", prism, {z3, {lin(identity_mat(3)), lin(rot3), lin(rot3sq)}}, z3, rot_rep},
      {"Z3 cyclic permutation of cube axes", cube,
       {z3, {lin(identity_mat(3)), lin(cyc), lin(mat_mul(cyc, cyc, 3, 3))}}, z3, rot_rep},
      {"S3 on the permutohedron, Z3 stratum", permutohedron, s3_on_plane, z3_in_s3, rot_rep},
      {"S3 on the permutohedron, Z2 stratum", permutohedron, s3_on_plane, z2, sign1},
      {"S3 on the permutohedron, S3 stratum", permutohedron, s3_on_plane, s3, s3_standard},
      {"(Z2)^2 on a square, Z2 stratum", sq, k4_sq, z2, sign1},
      {"(Z2)^2 on a square, Z2 stratum with rho = 2 sign", sq, k4_sq, z2, sign2},
      {"(Z2)^2 on a cube, Z2 stratum", cube, k4_cube, z2, sign1},
  };
}

inline Vec centroid(const Polytope& P) {
  Vec c = zero_vec(std::size_t(P.ambient_dim()));
  for (auto& v : P.vertices()) c = vadd(c, v);
  return vscale(c, Q(1) / Q(int(P.nverts())));
}

inline SuiteReport suite_strata(const SuiteOptions& o) {
  auto cases = strata_cases();
  return run_fixed_suite(
      "strata", "orbifold strata have dimension n - dim rho; the forgetful map has finite fibres", cases.size(), o.jobs,
      [&](std::size_t i) {
        const auto& sc = cases[i];
        StratumResult res = orbifold_stratum(sc.X, sc.action, sc.H, sc.rho);
        InstanceResult r;
        bool dims = !res.pieces.empty();
        std::string fibres;
        bool finite = true;
        for (auto& piece : res.pieces) {
          dims = dims && piece.dim == res.n - res.rho_dim;
          int k = iota_fibre(sc.X, sc.action, sc.H, sc.rho, centroid(piece.fix));
          finite = finite && k >= 1;
          fibres += (fibres.empty() ? "" : ",") + std::to_string(k);
        }
        r.note = sc.name + ": n=" + std::to_string(res.n) + " dim rho=" + std::to_string(res.rho_dim) + " pieces=" +
                 std::to_string(res.pieces.size()) + " fibres=(" + fibres + ")";
        r.checks.push_back(check("stratum dimension equals n - dim rho", dims, r.note));
        r.checks.push_back(check("forgetful map fibres are finite and nonempty", finite, r.note));
        return r;
      });
}

// ---------------------------------------------------------------------------
// Bordism

// The boundary of a polytope Pi as a closed class: its facets, glued along ridges.
inline BordismClass polytope_boundary(const Polytope& Pi, Target y, const AffineMap& f) {
  BordismClass b;
  b.y = y;
  std::map<int, int> comp_of;
  for (int F : Pi.facets()) {
    comp_of[F] = int(b.comps.size());
    b.comps.push_back({Pi.face(F), 0, Pi.facet_sign(F), f, 1});
  }
  const std::size_t n = std::size_t(Pi.ambient_dim());
  for (int E : Pi.faces_of_dim(Pi.dim() - 2)) {
    auto fs = Pi.facets_containing(E);
    auto ridge = Pi.face(E).vertices();
    auto facet_of = [&](int F) {
      const Polytope& P = b.comps[std::size_t(comp_of[F])].P;
      for (int g : P.facets())
        if (P.face(g).vertices() == ridge) return g;
      throw PreconditionError("ridge not found in its facet");
    };
    b.pairings.push_back({comp_of[fs[0]], facet_of(fs[0]), comp_of[fs[1]], facet_of(fs[1]), identity_mat(n), zero_vec(n)});
  }
  return b;
}

// [0, d]^k over T^k with opposite faces glued by integer translations;
// the map is x + shift.
inline BordismClass flat_torus(int k, int d, const Q& shift = 0) {
  BordismClass b;
  b.y = Target::torus(k);
  Polytope P = Polytope::box(Vec(std::size_t(k), Q(0)), Vec(std::size_t(k), Q(d)));
  AffineMap f{b.y, identity_mat(std::size_t(k)), ZMat(std::size_t(k), ZVec()), Vec(std::size_t(k), shift)};
  b.comps.push_back({P, 0, 1, f, 1});
  for (int i = 0; i < k; ++i) {
    int lo = -1, hi = -1;
    for (int F : P.facets()) {
      Polytope face = P.face(F);
      const auto& vs = face.vertices();
      bool all0 = true, alld = true;
      for (auto& v : vs) {
        all0 = all0 && v[std::size_t(i)] == 0;
        alld = alld && v[std::size_t(i)] == d;
      }
      if (all0) lo = F;
      if (alld) hi = F;
    }
    Vec t = zero_vec(std::size_t(k));
    t[std::size_t(i)] = -d;
    b.pairings.push_back({0, hi, 0, lo, identity_mat(std::size_t(k)), t});
  }
  return b;
}

inline BordismClass signed_points(std::initializer_list<int> signs) {
  BordismClass b;
  b.y = Target::point();
  for (int s : signs) b.comps.push_back({Polytope::point(Vec{}), 0, s, constant_map(b.y, 0, 0, Vec{}), 1});
  return b;
}

inline std::vector<std::pair<std::string, BordismClass>> bordism_cases() {
  Target pt = Target::point();
  std::vector<Vec> tri = {{0, 0}, {1, 0}, {0, 1}};
  Polytope triangle = Polytope::hull(2, tri);
  Polytope square = Polytope::box({0, 0}, {1, 1});
  Polytope tetra = Polytope::hull(3, {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0, 0, 1}});
  Polytope cube = Polytope::box({0, 0, 0}, {1, 1, 1});
  AffineMap to_line{Target::euclid(1), {{Q(1), Q(2, 3)}}, ZMat(1, ZVec()), {Q(1, 2)}};
  AffineMap to_plane{Target::euclid(2), {{Q(1), Q(0), Q(1)}, {Q(0), Q(1), Q(-1, 2)}}, ZMat(2, ZVec()), {Q(0), Q(0)}};
  BordismClass tri_b = polytope_boundary(triangle, pt, constant_map(pt, 2, 0, Vec{}));
  BordismClass circle = flat_torus(1, 1);
  return {
      {"two points of opposite sign", signed_points({1, -1})},
      {"boundary of a triangle", tri_b},
      {"boundary of a square over Euclid(1)", polytope_boundary(square, Target::euclid(1), to_line)},
      {"boundary of a tetrahedron", polytope_boundary(tetra, pt, constant_map(pt, 3, 0, Vec{}))},
      {"boundary of a cube over Euclid(2)", polytope_boundary(cube, Target::euclid(2), to_plane)},
      {"circle of degree 1 over T^1", circle},
      {"circle of degree 2 over T^1", flat_torus(1, 2)},
      {"flat torus over T^2", flat_torus(2, 1)},
      {"triangle boundary times two points", bordism_product(tri_b, signed_points({1, -1}))},
      {"circle times shifted circle over T^1", bordism_product(circle, flat_torus(1, 1, Q(1, 3)))},
  };
}

inline SuiteReport suite_bordism(const SuiteOptions& o) {
  auto cases = bordism_cases();
  return run_fixed_suite(
      "bordism", "bordism presentations and tag independence of the map to chains", cases.size() + 1, o.jobs,
      [&](std::size_t i) {
        InstanceResult r;
        if (i == 0) {
          BordismClass plus = signed_points({1}), minus = signed_points({-1});
          BordismClass interval;
          interval.y = Target::point();
          interval.comps.push_back({Polytope::box({0}, {1}), 0, 1, constant_map(interval.y, 1, 0, Vec{}), 1});
          Presentation p = present_group({plus, minus}, {interval});
          r.note = "{[pt+],[pt-]} modulo the interval: free rank " + std::to_string(p.free_rank) + ", " +
                   std::to_string(p.torsion.size()) + " torsion factors";
          r.checks.push_back(check("two signed points modulo the interval give Z", p.free_rank == 1 && p.torsion.empty(), r.note));
          Presentation q = present_group({plus, minus}, {});
          r.checks.push_back(check("no relations give a free group", q.free_rank == 2, "rank " + std::to_string(q.free_rank)));
          Presentation s = present_group({plus}, {interval});
          r.checks.push_back(check("one point with both interval ends stays free", s.free_rank == 1 && s.torsion.empty(),
                                   "rank " + std::to_string(s.free_rank)));
          return r;
        }
        const auto& [name, b] = cases[i - 1];
        ClosedReport cl = check_closed(b);
        r.note = name + ": " + std::to_string(b.comps.size()) + " components, " + std::to_string(b.pairings.size()) + " gluings";
        r.checks.push_back(check("closed certificate", cl.ok, cl.reason));
        if (!cl.ok) return r;
        KhReport kh = bordism_to_chain(b);
        r.checks.push_back(check("chain boundary cancels across gluings", kh.cycle, r.note));
        r.checks.push_back(check("cylinder witness bounds the change of tags", kh.witness_ok, r.note));
        return r;
      });
}

// ---------------------------------------------------------------------------
// Negative controls: each must be rejected with its documented error.

inline SuiteReport suite_negative_controls(const SuiteOptions& o) {
  return run_fixed_suite("negative-controls", "malformed inputs are rejected with their documented errors", 4, o.jobs,
                         [&](std::size_t i) {
                           InstanceResult r;
                           auto expect_throw = [&](const std::string& what, const std::string& needle, auto&& fn) {
                             std::string got = "accepted";
                             bool ok = false;
                             try {
                               fn();
                             } catch (const PreconditionError& e) {
                               got = e.what();
                               ok = got.find(needle) != std::string::npos;
                             }
                             r.note = what + ": " + got;
                             r.checks.push_back(check(what, ok, got));
                           };
                           Target pt = Target::point();
                           if (i == 0) {
                             Generator g{Polytope::box({0, 0}, {1, 1}), 0, 1, constant_map(pt, 2, 0, Vec{}), {}};
                             g.tag = enumerate_tag(g.P);
                             Chain c;
                             c.add(g, 1);
                             DDReport rep = verify_dd_zero(c, [n = 0](CornerPair& p) mutable {
                               if (n++ == 0) p.via_first.sign *= -1;
                             });
                             std::string got = rep.witness ? rep.witness->reason : "accepted";
                             r.note = "corrupted corner sign: " + got;
                             r.checks.push_back(check("corrupted corner sign is detected", !rep.ok() && got == "corner orientations agree", got));
                           } else if (i == 1) {
                             expect_throw("non-injective tag is rejected", "injective", [&] {
                               Generator g{Polytope::box({0}, {1}), 0, 1, constant_map(pt, 1, 0, Vec{}), {}};
                               g.tag.labels = {{0}, {0}, {1}};
                               validate_generator(g);
                             });
                           } else if (i == 2) {
                             expect_throw("strata projection with |Gamma'| even is rejected", "odd", [&] {
                               BordismClass b = signed_points({1});
                               b.comps[0].P = Polytope::box({-1}, {1});
                               b.comps[0].f = constant_map(pt, 1, 0, Vec{});
                               FiniteGroup z2 = FiniteGroup::cyclic(2);
                               b.quotient = QuotientData{GroupAction{z2, {{diag({1}), {Q(0)}}, {diag({-1}), {Q(0)}}}}};
                               strata_projection(b, z2, VirtualRep{{1, -1}, {}});
                             });
                           } else {
                             expect_throw("bordism witness with corners is rejected", "corner", [&] {
                               BordismClass w;
                               w.y = pt;
                               w.comps.push_back({Polytope::box({0, 0}, {1, 1}), 0, 1, constant_map(pt, 2, 0, Vec{}), 1});
                               present_group({signed_points({1})}, {w});
                             });
                           }
                           return r;
                         });
}

// ---------------------------------------------------------------------------

using SuiteFn = SuiteReport (*)(const SuiteOptions&);

inline const std::vector<std::pair<std::string, SuiteFn>>& suite_table() {
  static const std::vector<std::pair<std::string, SuiteFn>> t = {
      {"dd-zero", suite_dd_zero},
      {"boundary-product", suite_boundary_product},
      {"swap", suite_swap},
      {"associativity", suite_associativity},
      {"interchange", suite_interchange},
      {"dga", suite_dga},
      {"cap", suite_cap},
      {"singular-bridge", suite_singular_bridge},
      {"homology-simplex", suite_homology_simplex},
      {"quotient", suite_quotient},
      {"strata", suite_strata},
      {"bordism", suite_bordism},
      {"negative-controls", suite_negative_controls},
  };
  return t;
}

inline SuiteReport run_suite(const std::string& name, const SuiteOptions& o) {
  for (auto& [n, fn] : suite_table())
    if (n == name) return fn(o);
  throw SchemaError("unknown suite \"" + name + "\"");
}

}  // namespace corner
