#include "foundry/json_io.hpp"

#include <algorithm>

namespace foundry {

namespace {

Json pres_elem_to_json(const PresElem& e) {
  if (e.zero) return Json("0");
  Json j;
  j["sign"] = e.sign;
  Json exps = Json::object();
  for (auto& [name, exp] : e.exps) exps[name] = to_long(exp);
  j["exps"] = exps;
  return j;
}

PresElem pres_elem_from_json(const Json& j) {
  if (j.is_string()) {
    if (j.get<std::string>() != "0") throw ParseError("element must be an object or \"0\"");
    return PresElem::zero_elem();
  }
  if (!j.is_object()) throw ParseError("element must be an object or \"0\"");
  PresElem e;
  e.sign = j.value("sign", 1);
  if (e.sign != 1 && e.sign != -1) throw ParseError("element sign must be +-1");
  if (j.contains("exps")) {
    for (auto& [name, exp] : j.at("exps").items()) {
      if (!exp.is_number_integer()) throw ParseError("exponent must be an integer");
      e.exps[name] = Int(exp.get<long>());
    }
  }
  return e;
}

}  // namespace

Json pasture_to_json(const Pasture& p) {
  Json j;
  j["format"] = "pasture/v1";
  j["generators"] = p.generator_names();
  Json mults = Json::array();
  for (const PresElem& m : p.pres_mult_relations()) {
    Json rel = Json::object();
    rel["sign"] = m.sign;
    for (auto& [name, exp] : m.exps) rel[name] = to_long(exp);
    mults.push_back(rel);
  }
  j["mult_relations"] = mults;
  Json adds = Json::array();
  for (const PresTerm& t : p.pres_add_relations())
    adds.push_back(Json::array({pres_elem_to_json(t[0]), pres_elem_to_json(t[1]),
                                pres_elem_to_json(t[2])}));
  j["add_relations"] = adds;
  return j;
}

Pasture pasture_from_json(const Json& j) {
  if (j.value("format", "") != "pasture/v1") throw ParseError("expected format pasture/v1");
  std::vector<std::string> gens;
  for (auto& g : j.at("generators")) {
    std::string name = g.get<std::string>();
    if (name == "sign") throw ParseError("generator may not be named 'sign'");
    gens.push_back(name);
  }
  std::vector<PresElem> mults;
  if (j.contains("mult_relations")) {
    for (auto& rel : j.at("mult_relations")) {
      PresElem e;
      e.sign = 1;
      for (auto& [key, val] : rel.items()) {
        if (key == "sign") {
          e.sign = val.get<int>();
          if (e.sign != 1 && e.sign != -1) throw ParseError("relation sign must be +-1");
        } else {
          if (!val.is_number_integer()) throw ParseError("exponent must be an integer");
          e.exps[key] = Int(val.get<long>());
        }
      }
      mults.push_back(std::move(e));
    }
  }
  std::vector<PresTerm> adds;
  if (j.contains("add_relations")) {
    for (auto& t : j.at("add_relations")) {
      if (!t.is_array() || t.size() != 3) throw ParseError("null term must have three entries");
      adds.push_back(PresTerm{pres_elem_from_json(t[0]), pres_elem_from_json(t[1]),
                              pres_elem_from_json(t[2])});
    }
  }
  return Pasture::from_presentation(std::move(gens), std::move(adds), std::move(mults));
}

Json matroid_to_json(const Matroid& m) {
  Json j;
  j["format"] = "matroid/v1";
  j["n"] = m.n();
  j["rank"] = m.rank();
  Json bases = Json::array();
  for (SetMask b : m.bases()) bases.push_back(mask_to_vec(b));
  j["bases"] = bases;
  return j;
}

Matroid matroid_from_json(const Json& j) {
  if (j.value("format", "") != "matroid/v1") throw ParseError("expected format matroid/v1");
  int n = j.at("n").get<int>();
  int r = j.at("rank").get<int>();
  int provided = j.contains("bases") + j.contains("circuits") + j.contains("nonbases");
  if (provided != 1)
    throw ParseError("matroid/v1 needs exactly one of bases, circuits, nonbases");
  auto sets_of = [&](const char* key) {
    std::vector<std::vector<int>> sets;
    for (auto& s : j.at(key)) sets.push_back(s.get<std::vector<int>>());
    return sets;
  };
  if (j.contains("bases")) return Matroid::from_bases_vec(n, r, sets_of("bases"));
  if (j.contains("circuits")) return Matroid::from_circuits(n, r, sets_of("circuits"));
  return Matroid::from_nonbases(n, r, sets_of("nonbases"));
}

Diagram diagram_from_json(const Json& j) {
  if (j.value("format", "") != "diagram/v1") throw ParseError("expected format diagram/v1");
  Diagram d;
  for (auto& n : j.at("nodes")) {
    if (n.is_string())
      d.nodes.push_back(named_pasture(n.get<std::string>()));
    else
      d.nodes.push_back(pasture_from_json(n));
  }
  if (j.contains("edges")) {
    for (auto& e : j.at("edges")) {
      int from = e.at("from").get<int>();
      int to = e.at("to").get<int>();
      if (from < 0 || from >= static_cast<int>(d.nodes.size()) || to < 0 ||
          to >= static_cast<int>(d.nodes.size()))
        throw ParseError("diagram edge endpoint out of range");
      const Pasture& src = d.nodes[static_cast<size_t>(from)];
      const Pasture& dst = d.nodes[static_cast<size_t>(to)];
      std::vector<PresElem> images;
      for (const std::string& g : src.generator_names()) {
        if (!e.at("images").contains(g))
          throw ParseError("diagram edge missing image of generator " + g);
        images.push_back(pres_elem_from_json(e.at("images").at(g)));
      }
      PastureMorphism f = morphism_from_pres_images(src, dst, images);
      d.edges.push_back({from, to, std::move(f.images)});
    }
  }
  return d;
}

Json element_to_json(const Pasture& p, const PastureElement& e) {
  if (e.zero) return Json("0");
  Json coords = Json::array();
  for (Eigen::Index i = 0; i < e.coords.size(); ++i)
    coords.push_back(e.coords(i).get_str());
  Json j;
  j["coords"] = coords;
  return j;
}

namespace {

std::string hex_string(const std::string& bytes) {
  static const char* digits = "0123456789abcdef";
  std::string out;
  out.reserve(bytes.size() * 2);
  for (unsigned char c : bytes) {
    out.push_back(digits[c >> 4]);
    out.push_back(digits[c & 15]);
  }
  return out;
}

}  // namespace

Json report_to_json(const FoundationReport& rep) {
  Json j;
  j["format"] = "foundation-report/v1";
  j["method"] = rep.method;
  Pasture::NumericalType t = rep.pasture.numerical_type();
  Json nt;
  nt["free_rank"] = t.free_rank;
  Json inv = Json::array();
  for (const Int& d : t.invariant_factors) inv.push_back(d.get_str());
  nt["invariant_factors"] = inv;
  nt["minus_one_trivial"] = t.minus_one_trivial;
  nt["hexagon_count"] = t.hexagon_count;
  j["numerical_type"] = nt;
  Json hex = Json::array();
  for (const Hexagon& h : rep.pasture.hexagons()) hex.push_back(hex_string(h.key));
  j["hexagons"] = hex;
  Json dict = Json::array();
  for (auto& [psi, elem] : rep.dictionary) {
    Json entry;
    Json quad = Json::array();
    for (SetMask f : psi) quad.push_back(mask_to_vec(f));
    entry["psi"] = quad;
    entry["element"] = element_to_json(rep.pasture, elem);
    dict.push_back(entry);
  }
  j["dictionary"] = dict;
  if (!rep.cross_checks.empty()) {
    Json cc = Json::array();
    for (auto& [route, ok] : rep.cross_checks) cc.push_back(Json{{"route", route}, {"agrees", ok}});
    j["cross_checks"] = cc;
  }
  if (rep.identification.name || rep.identification.budget_exhausted) {
    Json id;
    if (rep.identification.name)
      id["name"] = *rep.identification.name;
    else
      id["name"] = nullptr;
    id["budget_exhausted"] = rep.identification.budget_exhausted;
    j["identification"] = id;
  }
  return j;
}

Json table_to_json(const RepresentabilityTable& t) {
  Json j;
  j["format"] = "representability-table/v1";
  j["rows"] = t.rows;
  j["columns"] = t.columns;
  Json cells = Json::array();
  for (const auto& row : t.cells) {
    Json r = Json::array();
    for (bool b : row) r.push_back(b ? 1 : 0);
    cells.push_back(r);
  }
  j["cells"] = cells;
  return j;
}

std::string dump_json(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace foundry
