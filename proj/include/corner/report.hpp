#pragma once

// Suite reports as JSON or Markdown. No timings or host data, so equal
// (inputs, seed) give byte-identical output.

#include "corner/suites.hpp"

namespace corner {

enum class Format { Json, Markdown };

inline io::json to_json(const SuiteReport& r, const SuiteOptions& o) {
  io::json ids = io::json::array();
  for (auto& id : r.identities) {
    auto [p, f] = r.tally.at(id);
    ids.push_back({{"identity", id}, {"passed", p}, {"failed", f}});
  }
  io::json fails = io::json::array();
  for (auto& [i, c] : r.failures) fails.push_back({{"instance", i}, {"identity", c.identity}, {"witness", c.witness}});
  io::json out = io::envelope("suite-report");
  out["suite"] = r.name;
  out["anchor"] = r.anchor;
  out["seed"] = o.seed;
  out["count"] = o.count;
  out["max_dim"] = o.max_dim;
  out["instances"] = r.instances;
  out["skipped"] = r.skipped;
  out["resamples"] = r.resamples;
  out["identities"] = ids;
  out["failures"] = fails;
  out["notes"] = r.notes;
  out["result"] = r.ok() ? "PASS" : "FAIL";
  return out;
}

inline std::string md_cell(std::string s) {
  std::string out;
  for (char c : s) {
    if (c == '|') out += '\\';
    out += c;
  }
  return out;
}

inline std::string to_markdown(const SuiteReport& r, const SuiteOptions& o) {
  std::ostringstream s;
  s << "## " << r.name << ": " << (r.ok() ? "PASS" : "FAIL") << "\n\n";
  s << "Anchor: " << r.anchor << "\n\n";
  s << "Seed " << o.seed << ", " << r.instances << " instances, " << r.skipped << " skipped, " << r.resamples
    << " resamples.\n\n";
  s << "| identity | passed | failed |\n|---|---|---|\n";
  for (auto& id : r.identities) {
    auto [p, f] = r.tally.at(id);
    s << "| " << md_cell(id) << " | " << p << " | " << f << " |\n";
  }
  if (!r.notes.empty()) {
    s << "\n";
    for (auto& n : r.notes) s << "- " << n << "\n";
  }
  if (!r.failures.empty()) {
    s << "\nFailures:\n\n";
    for (auto& [i, c] : r.failures) s << "- instance " << i << ", " << c.identity << ": " << c.witness << "\n";
  }
  return s.str();
}

inline std::string render(const SuiteReport& r, const SuiteOptions& o, Format f) {
  return f == Format::Json ? to_json(r, o).dump(2) + "\n" : to_markdown(r, o);
}

}  // namespace corner
