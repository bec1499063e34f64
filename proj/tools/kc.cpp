// kc: chains and cochains. Boundaries, canonical forms, homology, products,
// pullbacks, duality and the named check suites.

#include "cli.hpp"

using namespace corner;
using cli::json;

namespace {

json chain_result(const std::string& kind, const Chain& c) {
  json out = io::envelope(kind);
  out["chain"] = io::to_json(c);
  return out;
}

std::string betti_summary(const HomologyResult& h, int top) {
  std::string s = "Betti (";
  for (int d = 0; d <= top; ++d) s += (d ? "," : "") + std::to_string(h.betti.count(d) ? h.betti.at(d) : 0);
  return s + ")";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"kc: exact chains and cochains on polytopes with corners"};
  app.require_subcommand(1);
  cli::Common common;
  std::string file, file2, file3, suite = "all";
  int ysign = 1;
  int code = 0;
  std::function<int()> body;

  auto sub = [&](const char* name, const char* help) {
    CLI::App* s = app.add_subcommand(name, help);
    cli::add_common(*s, common);
    return s;
  };

  auto* boundary_cmd = sub("boundary", "boundary of a chain");
  boundary_cmd->add_option("chain", file, "chain document")->required()->check(CLI::ExistingFile);
  boundary_cmd->callback([&] {
    body = [&] {
      cli::emit(chain_result("boundary", boundary(cli::load_chain(file, common))), common);
      return 0;
    };
  });

  auto* canon_cmd = sub("canonicalize", "canonical form of a chain, applying the quotient relation");
  canon_cmd->add_option("chain", file, "chain document")->required()->check(CLI::ExistingFile);
  canon_cmd->callback([&] {
    body = [&] {
      cli::emit(chain_result("canonical-chain", cli::load_chain(file, common)), common);
      return 0;
    };
  });

  auto* dd_cmd = sub("dd", "check that the boundary of the boundary of a chain vanishes");
  dd_cmd->add_option("chain", file, "chain document")->required()->check(CLI::ExistingFile);
  dd_cmd->callback([&] {
    body = [&] {
      DDReport rep = verify_dd_zero(cli::load_chain(file, common));
      json out = io::envelope("dd-report");
      out["generators"] = rep.generators;
      out["corner_pairs"] = rep.pairs;
      out["chain_zero"] = rep.chain_zero;
      out["pairs_cancel"] = rep.pairs_ok;
      if (rep.witness) out["witness"] = {{"face", rep.witness->face}, {"reason", rep.witness->reason}};
      out["result"] = rep.ok() ? "PASS" : "FAIL";
      cli::emit(out, common);
      return rep.ok() ? 0 : 1;
    };
  });

  auto* hom_cmd = sub("homology", "homology of a boundary-closed set of generators");
  hom_cmd->add_option("complex", file, "chain or faces-of document")->required()->check(CLI::ExistingFile);
  hom_cmd->callback([&] {
    body = [&] {
      json doc = io::load(file);
      std::string kind = io::kind(doc);
      std::vector<Generator> gens;
      if (kind == "faces-of") {
        gens = face_complex(io::generator(io::field(doc, "generator")));
      } else if (kind == "chain") {
        Chain c = io::chain(doc);
        for (auto& [k, t] : c.terms()) gens.push_back(t.g);
      } else {
        throw SchemaError("homology reads a \"faces-of\" or \"chain\" document");
      }
      Ring ring = common.ring == "Z" ? Ring::Z : Ring::Q;
      HomologyResult h = homology(gens, ring);
      int top = 0;
      for (auto& g : gens) top = std::max(top, g.vdim());
      json out = io::envelope("homology");
      out["ring"] = ring_name(ring);
      json betti = json::array(), torsion = json::object(), ranks = json::array();
      for (int d = 0; d <= top; ++d) {
        betti.push_back(h.betti.count(d) ? h.betti.at(d) : 0);
        ranks.push_back(h.rank_of_chains.count(d) ? h.rank_of_chains.at(d) : 0);
        if (h.torsion.count(d) && !h.torsion.at(d).empty()) {
          json fs = json::array();
          for (auto& z : h.torsion.at(d)) fs.push_back(z.str());
          torsion[std::to_string(d)] = fs;
        }
      }
      out["betti"] = betti;
      out["chain_ranks"] = ranks;
      out["torsion"] = torsion;
      out["summary"] = betti_summary(h, top);
      cli::emit(out, common);
      return 0;
    };
  });

  auto* check_cmd = sub("check", "run a named check suite, or all of them");
  std::vector<std::string> names = {"all"};
  for (auto& [n, fn] : suite_table()) names.push_back(n);
  check_cmd->add_option("suite", suite, "suite name")->required()->check(CLI::IsMember(names));
  check_cmd->callback([&] {
    body = [&] {
      SuiteOptions o = common.suite();
      bool ok = true;
      json all = json::array();
      for (auto& [n, fn] : suite_table()) {
        if (suite != "all" && suite != n) continue;
        SuiteReport r = fn(o);
        ok = ok && r.ok();
        if (common.fmt() == Format::Json)
          all.push_back(to_json(r, o));
        else
          std::cout << to_markdown(r, o) << "\n";
      }
      if (common.fmt() == Format::Json) std::cout << (all.size() == 1 ? all[0] : all).dump(2) << "\n";
      return ok ? 0 : 1;
    };
  });

  auto* sing_cmd = sub("from-singular", "map an affine singular chain to a chain");
  sing_cmd->add_option("singular", file, "singular chain document")->required()->check(CLI::ExistingFile);
  sing_cmd->callback([&] {
    body = [&] {
      SingularChain s = io::singular_chain(cli::load_kind(file, "singular-chain"));
      ChainMapReport rep = check_singular_chain_map(s);
      json out = chain_result("from-singular", singular_to_kuranishi(s));
      out["commutes_with_boundary"] = rep.ok();
      cli::emit(out, common);
      return rep.ok() ? 0 : 1;
    };
  });

  auto* cup_cmd = sub("cup", "cup product of two cochains");
  cup_cmd->add_option("a", file, "cochain")->required()->check(CLI::ExistingFile);
  cup_cmd->add_option("b", file2, "cochain")->required()->check(CLI::ExistingFile);
  cup_cmd->callback([&] {
    body = [&] {
      cli::emit(chain_result("cup", cup(cli::load_chain(file, common), cli::load_chain(file2, common))), common);
      return 0;
    };
  });

  auto* cap_cmd = sub("cap", "cap product of a chain with a cochain");
  cap_cmd->add_option("chain", file, "chain")->required()->check(CLI::ExistingFile);
  cap_cmd->add_option("cochain", file2, "cochain")->required()->check(CLI::ExistingFile);
  cap_cmd->callback([&] {
    body = [&] {
      cli::emit(chain_result("cap", cap(cli::load_chain(file, common), cli::load_chain(file2, common))), common);
      return 0;
    };
  });

  auto* pull_cmd = sub("pullback", "pull a cochain back along a map of targets");
  pull_cmd->add_option("map", file, "target-map document")->required()->check(CLI::ExistingFile);
  pull_cmd->add_option("cochain", file2, "cochain")->required()->check(CLI::ExistingFile);
  pull_cmd->callback([&] {
    body = [&] {
      TargetMap h = io::target_map(cli::load_kind(file, "target-map"));
      cli::emit(chain_result("pullback", pullback(h, cli::load_chain(file2, common))), common);
      return 0;
    };
  });

  auto* dga_cmd = sub("dga-check", "check the graded algebra identities on three cochains");
  dga_cmd->add_option("a", file, "cochain")->required()->check(CLI::ExistingFile);
  dga_cmd->add_option("b", file2, "cochain")->required()->check(CLI::ExistingFile);
  dga_cmd->add_option("c", file3, "cochain")->required()->check(CLI::ExistingFile);
  dga_cmd->callback([&] {
    body = [&] {
      DGAReport rep = check_dga(cli::load_chain(file, common), cli::load_chain(file2, common),
                                cli::load_chain(file3, common));
      json out = io::envelope("dga-report");
      json checks = json::array();
      for (auto& c : rep.checks) {
        json jc = {{"identity", c.name}, {"result", c.ok() ? "PASS" : "FAIL"}};
        if (!c.ok()) jc["witness"] = chain_difference(c.lhs, c.rhs);
        checks.push_back(jc);
      }
      out["checks"] = checks;
      out["result"] = rep.ok() ? "PASS" : "FAIL";
      cli::emit(out, common);
      return rep.ok() ? 0 : 1;
    };
  });

  auto* dual_cmd = sub("duality", "forget coorientation data: cochain to chain");
  dual_cmd->add_option("cochain", file, "cochain")->required()->check(CLI::ExistingFile);
  dual_cmd->add_option("--target-sign", ysign, "orientation of the target")->check(CLI::IsMember({-1, 1}));
  dual_cmd->callback([&] {
    body = [&] {
      cli::emit(chain_result("duality", duality(cli::load_chain(file, common), ysign)), common);
      return 0;
    };
  });

  code = cli::guarded_main(app, argc, argv, [&] { return body ? body() : 0; });
  return code;
}
