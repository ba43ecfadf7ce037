#include "foundry/acceptance.hpp"
#include "foundry/json_io.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

namespace {

using namespace foundry;

Json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  Json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw ParseError(std::string("invalid json in ") + path + ": " + e.what());
  }
  return j;
}

// names take precedence over file paths everywhere a pasture is expected
Pasture resolve_pasture(const std::string& arg) {
  if (is_catalog_pasture(arg)) return named_pasture(arg);
  return pasture_from_json(load_json_file(arg));
}

Matroid resolve_matroid(const std::string& arg) {
  if (is_catalog_matroid(arg)) return named_matroid(arg);
  std::ifstream probe(arg);
  if (!probe) throw ParseError("cannot open " + arg);
  char first = 0;
  probe >> first;
  if (first != '{') {
    std::stringstream buf;
    buf << first;
    buf << probe.rdbuf();
    return Matroid::from_text(buf.str());
  }
  return matroid_from_json(load_json_file(arg));
}

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(out_path);
  if (!out) throw ParseError("cannot write " + out_path);
  out << text;
}

std::vector<std::string> split_commas(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(item);
  return out;
}

Json morphism_images_json(const PastureMorphism& f) {
  Json arr = Json::array();
  const auto& names = f.source.generator_names();
  for (size_t i = 0; i < names.size(); ++i) {
    PastureElement img = apply(f, f.source.generator(static_cast<int>(i)));
    arr.push_back(Json{{"generator", names[i]}, {"image", element_to_json(f.target, img)}});
  }
  return arr;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"pasture and matroid-foundation toolkit"};
  app.require_subcommand(1);

  std::string out_path;

  auto* compute = app.add_subcommand("compute", "compute the foundation of a matroid");
  std::string compute_matroid, compute_method = "grs";
  bool compute_cross = false, compute_identify = false;
  compute->add_option("--matroid", compute_matroid, "matroid name or json file")->required();
  compute->add_option("--method", compute_method,
                      "grs|diagram|diagram2|diagram3|lattice|lattice3|lattice_le3|lattice_le4");
  compute->add_flag("--cross-check", compute_cross, "compare all applicable routes");
  compute->add_flag("--identify", compute_identify, "identify against the pasture catalog");
  compute->add_option("--out", out_path, "write output to a file");

  auto* hom = app.add_subcommand("hom", "enumerate pasture morphisms");
  std::string hom_from, hom_to;
  bool hom_list = false;
  hom->add_option("--from", hom_from, "source pasture name or file")->required();
  hom->add_option("--to", hom_to, "target pasture name (finite unit group)")->required();
  hom->add_flag("--list", hom_list, "list morphisms instead of counting");
  hom->add_option("--out", out_path, "write output to a file");

  auto* aut = app.add_subcommand("aut", "enumerate pasture automorphisms");
  std::string aut_pasture;
  aut->add_option("--pasture", aut_pasture, "pasture name or file")->required();
  aut->add_option("--out", out_path, "write output to a file");

  auto* rep = app.add_subcommand("representable", "representability over finite targets");
  std::string rep_matroid, rep_over;
  rep->add_option("--matroid", rep_matroid, "matroid name or json file")->required();
  rep->add_option("--over", rep_over, "comma-separated target pastures")->required();
  rep->add_option("--out", out_path, "write output to a file");

  auto* tensor_cmd = app.add_subcommand("tensor", "tensor product of two pastures");
  std::string tensor_a, tensor_b;
  tensor_cmd->add_option("a", tensor_a, "first pasture")->required();
  tensor_cmd->add_option("b", tensor_b, "second pasture")->required();
  tensor_cmd->add_option("--out", out_path, "write output to a file");

  auto* quot = app.add_subcommand("quotient", "quotient of a pasture by null terms");
  std::string quot_pasture, quot_relations;
  quot->add_option("pasture", quot_pasture, "pasture name or file")->required();
  quot->add_option("--relations", quot_relations, "json file with a terms array")->required();
  quot->add_option("--out", out_path, "write output to a file");

  auto* colim = app.add_subcommand("colimit", "colimit of a diagram of pastures");
  std::string colim_diagram;
  colim->add_option("--diagram", colim_diagram, "diagram/v1 json file")->required();
  colim->add_option("--out", out_path, "write output to a file");

  auto* cat = app.add_subcommand("catalog", "list named pastures and matroids");
  std::string cat_what = "";
  cat->add_option("--list", cat_what, "pastures|matroids (default both)")
      ->expected(0, 1)
      ->default_str("");
  cat->add_option("--out", out_path, "write output to a file");

  auto* verify = app.add_subcommand("verify-suite", "run the verification suite");
  bool verify_fast = false;
  verify->add_flag("--fast", verify_fast, "restrict to matroids on at most 7 elements");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    Json err{{"error", {{"code", 1}, {"kind", "usage"}, {"message", e.what()}}}};
    std::cerr << dump_json(err);
    return 1;
  }

  try {
    if (*compute) {
      Matroid m = resolve_matroid(compute_matroid);
      FoundationOptions opts;
      opts.method = compute_method;
      if (compute_cross) opts.cross_check = true;  // otherwise the n <= 7 default applies
      opts.identify = compute_identify;
      FoundationReport r = foundation(m, opts);
      Json j = report_to_json(r);
      j["matroid"] = matroid_to_json(m);
      emit(dump_json(j), out_path);
    } else if (*hom) {
      Pasture from = resolve_pasture(hom_from);
      Pasture to = resolve_pasture(hom_to);
      Budget budget;
      std::vector<PastureMorphism> homs = hom_enumerate(from, to, budget);
      if (hom_list) {
        Json j;
        j["count"] = homs.size();
        Json arr = Json::array();
        for (const auto& f : homs) arr.push_back(morphism_images_json(f));
        j["morphisms"] = arr;
        emit(dump_json(j), out_path);
      } else {
        emit(std::to_string(homs.size()) + "\n", out_path);
      }
    } else if (*aut) {
      Pasture p = resolve_pasture(aut_pasture);
      Budget budget;
      std::vector<PastureMorphism> auts = automorphisms(p, budget);
      Json j;
      j["count"] = auts.size();
      Json arr = Json::array();
      for (const auto& f : auts) arr.push_back(morphism_images_json(f));
      j["automorphisms"] = arr;
      emit(dump_json(j), out_path);
    } else if (*rep) {
      Matroid m = resolve_matroid(rep_matroid);
      std::vector<std::string> targets = split_commas(rep_over);
      Budget budget;
      FoundationReport fr = grs_presentation(m);
      Json bits = Json::array();
      for (const std::string& t : targets)
        bits.push_back(hom_exists(fr.pasture, resolve_pasture(t), budget) ? 1 : 0);
      Json j;
      j["format"] = "representability-row/v1";
      j["targets"] = targets;
      j["representable"] = bits;
      emit(dump_json(j), out_path);
    } else if (*tensor_cmd) {
      Pasture t = tensor(resolve_pasture(tensor_a), resolve_pasture(tensor_b));
      emit(dump_json(pasture_to_json(t)), out_path);
    } else if (*quot) {
      Pasture p = resolve_pasture(quot_pasture);
      Json j = load_json_file(quot_relations);
      std::vector<PresTerm> terms;
      for (auto& t : j.at("terms")) {
        if (!t.is_array() || t.size() != 3) throw ParseError("term must have three entries");
        PresTerm term;
        for (size_t i = 0; i < 3; ++i) {
          const Json& e = t[i];
          if (e.is_string()) {
            if (e.get<std::string>() != "0") throw ParseError("term entry must be object or 0");
            term[i] = PresElem::zero_elem();
          } else {
            PresElem pe;
            pe.sign = e.value("sign", 1);
            if (e.contains("exps"))
              for (auto& [name, exp] : e.at("exps").items()) pe.exps[name] = Int(exp.get<long>());
            term[i] = pe;
          }
        }
        terms.push_back(term);
      }
      emit(dump_json(pasture_to_json(p.quotient(terms))), out_path);
    } else if (*colim) {
      Diagram d = diagram_from_json(load_json_file(colim_diagram));
      ColimitResult c = colimit(d);
      emit(dump_json(pasture_to_json(c.pasture)), out_path);
    } else if (*cat) {
      Json j;
      if (cat_what.empty() || cat_what == "pastures") j["pastures"] = pasture_catalog_names();
      if (cat_what.empty() || cat_what == "matroids") j["matroids"] = matroid_catalog_names();
      emit(dump_json(j), out_path);
    } else if (*verify) {
      int failures = run_acceptance(verify_fast, std::cout);
      return failures == 0 ? 0 : 4;
    }
  } catch (const ParseError& e) {
    std::cerr << dump_json(Json{{"error", {{"code", 1}, {"kind", "parse"}, {"message", e.what()}}}});
    return 1;
  } catch (const PreconditionError& e) {
    std::cerr << dump_json(
        Json{{"error", {{"code", 2}, {"kind", "precondition"}, {"message", e.what()}}}});
    return 2;
  } catch (const BudgetExceeded& e) {
    std::cerr << dump_json(
        Json{{"error", {{"code", 3}, {"kind", "budget"}, {"message", e.what()}}}});
    return 3;
  } catch (const VerificationError& e) {
    std::cerr << dump_json(
        Json{{"error", {{"code", 4}, {"kind", "verification"}, {"message", e.what()}}}});
    return 4;
  }
  return 0;
}
