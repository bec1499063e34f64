// Acceptance run: one PASS/FAIL line per criterion, each with its pinned
// instance count and wall-clock limit. Exit status 0 iff every line passes.

#include <chrono>
#include <cstdio>
#include <functional>

#include "corner.hpp"

using namespace corner;

namespace {

struct Outcome {
  bool ok = false;
  std::string detail;
};

struct Criterion {
  int number;
  std::string name;
  double limit_s;  // 0: no time limit
  std::function<Outcome()> run;
};

std::string tally(const SuiteReport& r) {
  int passed = 0, failed = 0;
  for (auto& [id, pf] : r.tally) {
    passed += pf.first;
    failed += pf.second;
  }
  std::string s = r.name + ": " + std::to_string(r.instances - r.skipped) + " instances, " + std::to_string(passed) +
                  " checks passed, " + std::to_string(failed) + " failed";
  if (r.resamples) s += ", " + std::to_string(r.resamples) + " resampled";
  if (!r.failures.empty()) s += "; first failure: " + r.failures[0].second.identity + " (" + r.failures[0].second.witness + ")";
  return s;
}

SuiteOptions with_count(int count) {
  SuiteOptions o;
  o.count = count;
  return o;
}

// Runs suites and requires each to pass with at least `min_instances` counted.
Outcome suites(std::initializer_list<std::string> names, int count, std::size_t min_instances = 0) {
  Outcome out{true, ""};
  SuiteOptions o = with_count(count);
  for (auto& n : names) {
    SuiteReport r = run_suite(n, o);
    bool enough = r.instances - r.skipped >= (min_instances ? min_instances : std::size_t(count));
    out.ok = out.ok && r.ok() && enough;
    out.detail += (out.detail.empty() ? "" : "; ") + tally(r);
    if (!enough) out.detail += " (too few instances)";
  }
  return out;
}

Outcome quotient_half() {
  Generator g;
  g.P = Polytope::box({-1}, {1});
  g.f = constant_map(Target::point(), 1, 0, Vec{});
  GroupAction flip{FiniteGroup::cyclic(2), {{identity_mat(1), zero_vec(1)}, {Mat{{-1}}, zero_vec(1)}}};
  RawGenerator rg{{g}, flip};
  assign_orbit_tags(rg);
  RawChain rc;
  rc.terms.push_back({rg, 1});
  Chain c = canonicalize(rc);
  Q coeff = c.size() == 1 ? c.terms().begin()->second.coeff : Q(0);
  bool commutes = boundary(c) == canonicalize(boundary_raw(rc));
  Outcome out{coeff == Q(1, 2) && commutes, "Z2 on [-1,1]: coefficient " + to_string(coeff) +
                                                 (commutes ? ", boundary commutes" : ", boundary differs")};
  Outcome rest = suites({"quotient"}, 1, 5);
  out.ok = out.ok && rest.ok;
  out.detail += "; " + rest.detail;
  return out;
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "boundary of boundary vanishes, corners cancel in pairs", 30,
       [] { return suites({"dd-zero"}, 100); }},
      {2, "boundary of a fibre product", 60, [] { return suites({"boundary-product"}, 100); }},
      {3, "swap, associativity and interchange of fibre products", 60,
       [] { return suites({"swap", "associativity", "interchange"}, 50); }},
      {4, "cochains form a supercommutative DGA", 120, [] { return suites({"dga"}, 50); }},
      {5, "cap product module axioms and projection formula", 0, [] { return suites({"cap"}, 50); }},
      {6, "affine singular chains map compatibly with the boundary", 0,
       [] { return suites({"singular-bridge"}, 50); }},
      {7, "simplex face complexes have the homology of a point", 10,
       [] { return suites({"homology-simplex"}, 1, 4); }},
      {8, "quotient relation weighs by 1/|G|", 0, quotient_half},
      {9, "orbifold strata dimensions and finite forgetful fibres", 0,
       [] { return suites({"strata"}, 1, 10); }},
      {10, "bordism presentation and tag independence", 0, [] { return suites({"bordism"}, 1, 11); }},
      {11, "negative controls are rejected", 0, [] { return suites({"negative-controls"}, 1, 4); }},
  };
  bool all = true;
  for (auto& c : criteria) {
    auto t0 = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = c.run();
    } catch (const std::exception& e) {
      out = {false, std::string("unexpected error: ") + e.what()};
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    bool in_time = c.limit_s == 0 || secs < c.limit_s;
    bool ok = out.ok && in_time;
    all = all && ok;
    char timing[64];
    if (c.limit_s > 0)
      std::snprintf(timing, sizeof timing, "%.2f s (limit %.0f s)", secs, c.limit_s);
    else
      std::snprintf(timing, sizeof timing, "%.2f s", secs);
    std::printf("%s %2d %s [%s] %s\n", ok ? "PASS" : "FAIL", c.number, c.name.c_str(), timing, out.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%s\n", all ? "ALL PASS" : "SOME CRITERIA FAILED");
  return all ? 0 : 1;
}
