#pragma once

// Shared plumbing for kc and kb: common flags, output, and the mapping from
// error classes to exit codes (2 schema, 3 precondition, 1 failed check).

#include <iostream>

#include <CLI11.hpp>

#include "corner.hpp"

namespace cli {

using corner::io::json;

struct Common {
  uint64_t seed = 0;
  int count = 100;
  int max_dim = 4;
  std::string ring = "Q";
  std::string format = "json";
  int jobs = 1;

  corner::SuiteOptions suite() const {
    corner::SuiteOptions o;
    o.seed = seed;
    o.count = count;
    o.max_dim = max_dim;
    o.ring = ring == "Z" ? corner::Ring::Z : corner::Ring::Q;
    o.jobs = jobs;
    return o;
  }
  corner::Format fmt() const { return format == "md" ? corner::Format::Markdown : corner::Format::Json; }
};

inline void add_common(CLI::App& app, Common& c) {
  app.add_option("--seed", c.seed, "random seed")->capture_default_str();
  app.add_option("--count", c.count, "instances per suite")->check(CLI::PositiveNumber)->capture_default_str();
  app.add_option("--max-dim", c.max_dim, "ambient dimension cap")->check(CLI::Range(0, 4))->capture_default_str();
  app.add_option("--ring", c.ring, "coefficient ring")->check(CLI::IsMember({"Q", "Z"}))->capture_default_str();
  app.add_option("--format", c.format, "output format")->check(CLI::IsMember({"json", "md"}))->capture_default_str();
  app.add_option("--jobs", c.jobs, "worker threads")->check(CLI::PositiveNumber)->capture_default_str();
}

// Emits a result document; Markdown renders each top-level field as a line.
inline void emit(const json& doc, const Common& c) {
  if (c.format == "json") {
    std::cout << doc.dump(2) << "\n";
    return;
  }
  std::cout << "## " << doc.value("kind", "result") << "\n\n";
  for (auto& [k, v] : doc.items()) {
    if (k == "schema" || k == "kind") continue;
    std::cout << "- " << k << ": " << (v.is_string() ? v.get<std::string>() : v.dump()) << "\n";
  }
}

inline json load_kind(const std::string& path, const std::string& kind) {
  json doc = corner::io::load(path);
  std::string k = corner::io::kind(doc);
  if (k != kind) throw corner::SchemaError("expected a document of kind \"" + kind + "\", got \"" + k + "\"");
  return doc;
}

inline corner::Chain load_chain(const std::string& path, const Common& c) {
  json doc = load_kind(path, "chain");
  if (!doc.contains("ring")) doc["ring"] = c.ring;
  return corner::io::chain(doc);
}

// Runs the parsed command, translating exceptions into exit codes.
inline int guarded_main(CLI::App& app, int argc, char** argv, const std::function<int()>& body) {
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  try {
    return corner::io::guarded(body);
  } catch (const corner::SchemaError& e) {
    std::cerr << "schema error: " << e.what() << "\n";
    return 2;
  } catch (const corner::PreconditionError& e) {
    std::cerr << "precondition failed: " << e.what() << "\n";
    return 3;
  } catch (const corner::SearchCapExceeded& e) {
    std::cerr << "precondition failed: " << e.what() << "\n";
    return 3;
  }
}

}  // namespace cli
