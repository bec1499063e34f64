// kb: bordism classes. Closedness certificates, presentations, the map to
// chains, products and strata projections.

#include "cli.hpp"

using namespace corner;
using cli::json;

int main(int argc, char** argv) {
  CLI::App app{"kb: desk-scale bordism of polytopes with maps"};
  app.require_subcommand(1);
  cli::Common common;
  std::string file, file2;
  std::function<int()> body;

  auto sub = [&](const char* name, const char* help) {
    CLI::App* s = app.add_subcommand(name, help);
    cli::add_common(*s, common);
    return s;
  };

  auto* present_cmd = sub("present", "presentation of the group spanned by generators modulo bordism witnesses");
  present_cmd->add_option("presentation", file, "presentation document")->required()->check(CLI::ExistingFile);
  present_cmd->callback([&] {
    body = [&] {
      json doc = cli::load_kind(file, "presentation");
      std::vector<BordismClass> gens, wit;
      for (auto& g : io::field(doc, "generators")) gens.push_back(io::bordism(g));
      if (doc.contains("witnesses"))
        for (auto& w : doc.at("witnesses")) wit.push_back(io::bordism(w));
      Ring ring = doc.contains("ring") ? io::ring(doc.at("ring")) : (common.ring == "Z" ? Ring::Z : Ring::Q);
      Presentation p = present_group(gens, wit, ring);
      json out = io::envelope("presentation-result");
      out["ring"] = ring_name(ring);
      json rows = json::array();
      for (auto& row : p.relations) {
        json r = json::array();
        for (auto& z : row) r.push_back(z.str());
        rows.push_back(r);
      }
      out["relations"] = rows;
      out["free_rank"] = p.free_rank;
      json tors = json::array();
      for (auto& z : p.torsion) tors.push_back(z.str());
      out["torsion"] = tors;
      std::string summary;
      for (auto& z : p.torsion) summary += (summary.empty() ? "" : " + ") + std::string("Z/") + z.str();
      if (p.free_rank) {
        std::string fr = ring == Ring::Z ? "Z" : "Q";
        if (p.free_rank > 1) fr += "^" + std::to_string(p.free_rank);
        summary = fr + (summary.empty() ? "" : " + " + summary);
      }
      out["summary"] = summary.empty() ? "0" : summary;
      cli::emit(out, common);
      return 0;
    };
  });

  auto* closed_cmd = sub("check-closed", "check the closedness certificate of a bordism class");
  closed_cmd->add_option("class", file, "bordism document")->required()->check(CLI::ExistingFile);
  closed_cmd->callback([&] {
    body = [&] {
      ClosedReport rep = check_closed(io::bordism(cli::load_kind(file, "bordism")));
      json out = io::envelope("closed-report");
      out["boundary_facets"] = rep.boundary_facets;
      out["gluings"] = rep.pairs;
      if (!rep.ok) out["reason"] = rep.reason;
      out["result"] = rep.ok ? "PASS" : "FAIL";
      cli::emit(out, common);
      return rep.ok ? 0 : 1;
    };
  });

  auto* kh_cmd = sub("to-kh", "chain of a closed class, with the cylinder witness for a second tag choice");
  kh_cmd->add_option("class", file, "bordism document")->required()->check(CLI::ExistingFile);
  kh_cmd->callback([&] {
    body = [&] {
      KhReport rep = bordism_to_chain(io::bordism(cli::load_kind(file, "bordism")));
      json out = io::envelope("to-kh");
      out["chain"] = io::to_json(rep.chain);
      out["cycle"] = rep.cycle;
      out["witness_terms"] = rep.witness.size();
      out["witness_bounds_tag_change"] = rep.witness_ok;
      bool ok = rep.cycle && rep.witness_ok;
      out["result"] = ok ? "PASS" : "FAIL";
      cli::emit(out, common);
      return ok ? 0 : 1;
    };
  });

  auto* cup_cmd = sub("cup", "product of two closed classes over a common target");
  cup_cmd->add_option("a", file, "bordism document")->required()->check(CLI::ExistingFile);
  cup_cmd->add_option("b", file2, "bordism document")->required()->check(CLI::ExistingFile);
  cup_cmd->callback([&] {
    body = [&] {
      BordismClass p = bordism_product(io::bordism(cli::load_kind(file, "bordism")),
                                       io::bordism(cli::load_kind(file2, "bordism")));
      ClosedReport rep = check_closed(p);
      json out = io::envelope("bordism");
      json cls = io::to_json(p);
      for (auto& [k, v] : cls.items()) out[k] = v;
      out["closed"] = rep.ok;
      cli::emit(out, common);
      return rep.ok ? 0 : 1;
    };
  });

  auto* strata_cmd = sub("strata", "strata projection of a global quotient for a group of odd order");
  strata_cmd->add_option("request", file, "strata document")->required()->check(CLI::ExistingFile);
  strata_cmd->callback([&] {
    body = [&] {
      json doc = cli::load_kind(file, "strata");
      BordismClass b = io::bordism(io::field(doc, "class"));
      FiniteGroup H = io::group(io::field(doc, "subgroup"));
      VirtualRep rho = io::rep(io::field(doc, "rho"), H);
      BordismClass s = strata_projection(b, H, rho);
      json out = io::envelope("bordism");
      json cls = io::to_json(s);
      for (auto& [k, v] : cls.items()) out[k] = v;
      out["grade_shift"] = -rho.dim(H);
      cli::emit(out, common);
      return 0;
    };
  });

  return cli::guarded_main(app, argc, argv, [&] { return body ? body() : 0; });
}
