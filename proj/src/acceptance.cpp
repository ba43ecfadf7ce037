#include "foundry/acceptance.hpp"

#include "foundry/json_io.hpp"

#include <chrono>
#include <cstdlib>
#include <ostream>
#include <random>
#include <sstream>

namespace foundry {

namespace {

using Clock = std::chrono::steady_clock;

struct Checker {
  bool fast;
  CriterionResult current;

  void expect(bool ok, const std::string& what) {
    if (!ok) current.failures.push_back(what);
  }
};

std::string identify_name(const Pasture& p) {
  Budget budget;
  IdentifyResult r = identify(p, budget);
  if (r.name) return *r.name;
  return r.budget_exhausted ? "(budget exhausted)" : "(no match)";
}

void golden_foundations(Checker& ck) {
  std::vector<std::pair<std::string, std::string>> golden = {
      {"U(2,4)", "U"},   {"U(2,5)", "V"},  {"U(3,5)", "V"},  {"U(2,6)", "U_3"},
      {"F7", "F2"},      {"F7dual", "F2"}, {"Q6", "V"},      {"whirl(2)", "U"},
      {"whirl(3)", "U"}, {"F7minus", "D"}, {"P7", "U"},      {"wheel(3)", "regular"},
  };
  if (!ck.fast) {
    golden.push_back({"U(2,7)", "U_4"});
    golden.push_back({"AG23_minus_e", "H"});
    golden.push_back({"whirl(4)", "U"});
    golden.push_back({"T8", "F3"});
    golden.push_back({"wheel(4)", "regular"});
  }
  for (auto& [mname, pname] : golden) {
    FoundationReport rep = grs_presentation(named_matroid(mname));
    std::string got = identify_name(rep.pasture);
    ck.expect(got == pname, "F(" + mname + ") identified as " + got + ", expected " + pname);
  }
  // F(P6) = F(U(2,6))
  std::string p6 = identify_name(grs_presentation(named_matroid("P6")).pasture);
  std::string u26 = identify_name(grs_presentation(named_matroid("U(2,6)")).pasture);
  ck.expect(p6 == u26 && p6 == "U_3",
            "F(P6) = " + p6 + " vs F(U(2,6)) = " + u26 + ", expected both U_3");
}

void numerical_fixture(Checker& ck) {
  for (int n = 4; n <= 7; ++n) {
    Matroid m = named_matroid("U(2," + std::to_string(n) + ")");
    FoundationReport rep = grs_presentation(m);
    int expect = n * (n - 1) / 2 - n;
    ck.expect(rep.pasture.numerical_type().free_rank == expect,
              "free rank of F(U(2," + std::to_string(n) + ")) != C(n,2)-n");
  }
  if (!ck.fast) {
    FoundationReport rep = grs_presentation(named_matroid("U(3,6)"));
    Pasture::NumericalType t = rep.pasture.numerical_type();
    ck.expect(t.free_rank == 14, "F(U(3,6)) free rank != 14");
    ck.expect(t.invariant_factors == std::vector<Int>{2} && !t.minus_one_trivial,
              "F(U(3,6)) torsion != {+-1}");
    ck.expect(t.hexagon_count == 30, "F(U(3,6)) hexagon count != 30");
  }
}

void route_agreement(Checker& ck) {
  Budget budget;
  auto agree = [&](const std::string& mname, const std::string& method) {
    Matroid m = named_matroid(mname);
    FoundationReport grs = grs_presentation(m);
    FoundationOptions opts;
    opts.method = method;
    opts.cross_check = false;
    FoundationReport other = foundation(m, opts);
    ck.expect(find_isomorphism(grs.pasture, other.pasture, budget).has_value(),
              mname + ": grs vs " + method + " disagree");
  };
  std::vector<std::string> catalog = {"U(2,4)", "U(2,5)", "U(3,5)", "U(2,6)",  "U(2,7)",
                                      "F7",     "F7dual", "F7minus", "C5",     "C5dual",
                                      "D6",     "wheel(3)", "whirl(2)", "whirl(3)", "Q6",
                                      "P6",     "P7",     "PG22"};
  if (!ck.fast) {
    catalog.push_back("U(3,6)");
    catalog.push_back("wheel(4)");
    catalog.push_back("whirl(4)");
    catalog.push_back("T8");
    catalog.push_back("AG23_minus_e");
  }
  for (const std::string& name : catalog) agree(name, "diagram");
  std::vector<std::string> two = {"whirl(2)", "whirl(3)", "Q6", "U(2,5)"};
  if (!ck.fast) two.push_back("whirl(4)");
  for (const std::string& name : two) agree(name, "diagram2");
  std::vector<std::string> three = {"whirl(3)", "Q6", "P6", "P7", "F7minus"};
  if (!ck.fast) three.push_back("T8");
  for (const std::string& name : three) agree(name, "diagram3");
  std::vector<std::string> lat = {"whirl(3)", "P7"};
  if (!ck.fast) lat.push_back("AG23_minus_e");
  for (const std::string& name : lat) agree(name, "lattice");
  if (!ck.fast) agree("T8", "lattice_le3");
}

void direct_sum_law(Checker& ck) {
  Budget budget;
  std::vector<std::string> parts = {"U(2,4)", "F7", "C5"};
  for (const std::string& a : parts)
    for (const std::string& b : parts) {
      if (ck.fast && named_matroid(a).n() + named_matroid(b).n() > 10) continue;
      Matroid sum = direct_sum(named_matroid(a), named_matroid(b));
      Pasture lhs = grs_presentation(sum).pasture;
      Pasture rhs =
          tensor(grs_presentation(named_matroid(a)).pasture,
                 grs_presentation(named_matroid(b)).pasture);
      Budget b1, b2;
      IdentifyResult li = identify(lhs, b1), ri = identify(rhs, b2);
      ck.expect(li.name == ri.name, a + "+" + b + ": identification differs");
      ck.expect(find_isomorphism(lhs, rhs, budget).has_value(),
                "F(" + a + "+" + b + ") not isomorphic to the tensor product");
    }
}

void oracle_equality(Checker& ck) {
  std::vector<std::pair<std::string, Matroid>> ms = {
      {"U(2,4)", named_matroid("U(2,4)")},
      {"U(2,5)", named_matroid("U(2,5)")},
      {"C5", named_matroid("C5")},
      {"F7", named_matroid("F7")},
      {"U12+U24", direct_sum(named_matroid("U(1,2)"), named_matroid("U(2,4)"))},
  };
  for (auto& [mname, m] : ms) {
    FoundationReport rep = grs_presentation(m);
    for (const std::string tname : {"F2", "F3", "F4"}) {
      Budget b1, b2;
      Pasture target = named_pasture(tname);
      long classes = rescaling_classes(m, target, tname, b1).count;
      long homs = static_cast<long>(hom_enumerate(rep.pasture, target, b2).size());
      ck.expect(classes == homs, mname + " over " + tname + ": " + std::to_string(classes) +
                                     " rescaling classes vs " + std::to_string(homs) + " homs");
    }
  }
}

void automorphism_counts(Checker& ck) {
  Budget b1, b2;
  ck.expect(automorphisms(named_pasture("U"), b1).size() == 6, "|Aut(U)| != 6");
  ck.expect(automorphisms(named_pasture("V"), b2).size() == 120, "|Aut(V)| != 120");
  if (!ck.fast) {
    Budget b3;
    ck.expect(automorphisms(named_pasture("U_3"), b3).size() == 720, "|Aut(U_3)| != 720");
  }
}

void appendix_table(Checker& ck) {
  const std::vector<std::string> rows = {"regular", "U", "V", "F2", "F3",
                                         "K",       "S", "H", "D",  "G"};
  const std::vector<std::string> cols = {"F2", "F3", "F4", "F5", "F7", "F8", "F9", "S"};
  const int expected[10][8] = {
      {1, 1, 1, 1, 1, 1, 1, 1},  // regular
      {0, 1, 1, 1, 1, 1, 1, 1},  // U
      {0, 0, 1, 1, 1, 1, 1, 1},  // V
      {1, 0, 1, 0, 0, 1, 0, 0},  // F2
      {0, 1, 0, 0, 0, 0, 1, 0},  // F3
      {0, 0, 0, 0, 0, 0, 0, 0},  // K
      {0, 0, 0, 0, 0, 0, 0, 1},  // S
      {0, 1, 1, 0, 1, 0, 1, 0},  // H
      {0, 1, 0, 1, 1, 0, 1, 1},  // D
      {0, 0, 1, 1, 0, 0, 1, 1},  // G
  };
  Budget budget;
  RepresentabilityTable table = representability_table(rows, cols, budget);
  for (size_t i = 0; i < rows.size(); ++i)
    for (size_t j = 0; j < cols.size(); ++j)
      ck.expect(table.cells[i][j] == (expected[i][j] == 1),
                "table cell (" + rows[i] + ", " + cols[j] + ") differs from the appendix");
}

void property_suites(Checker& ck) {
  // hexagon closure and eps^2 = 1 on every constructed pasture
  for (const std::string& name : pasture_catalog_names()) {
    try {
      named_pasture(name).validate();
    } catch (const std::exception& e) {
      ck.expect(false, name + ": " + e.what());
    }
  }

  // identify(named(X)) = X; the k-regular aliases resolve to their primary
  // catalog names
  for (const std::string& name : pasture_catalog_names()) {
    Budget budget;
    IdentifyResult id = identify(named_pasture(name), budget);
    std::string expect = name;
    if (name == "U_0") expect = "regular";
    if (name == "U_1") expect = "U";
    if (name == "U_2") expect = "V";
    ck.expect(id.name == expect, "identify(" + name + ") returned " +
                                     id.name.value_or("(none)") + ", expected " + expect);
  }
  for (const std::string name : {"Q6", "C5", "P7"}) {
    try {
      grs_presentation(named_matroid(name)).pasture.validate();
    } catch (const std::exception& e) {
      ck.expect(false, std::string("F(") + name + "): " + e.what());
    }
  }

  // tensor / quotient universal-property counting laws
  Budget budget;
  for (const std::string a : {"U", "H"})
    for (const std::string b : {"D", "F3"})
      for (const std::string t : {"F2", "F3", "F4", "F5", "S"}) {
        size_t lhs = hom_enumerate(tensor(named_pasture(a), named_pasture(b)),
                                   named_pasture(t), budget)
                         .size();
        size_t rhs = hom_enumerate(named_pasture(a), named_pasture(t), budget).size() *
                     hom_enumerate(named_pasture(b), named_pasture(t), budget).size();
        ck.expect(lhs == rhs, "coproduct counting law fails for " + a + "," + b + " -> " + t);
      }
  {
    Pasture u = named_pasture("U");
    std::vector<PresTerm> rel = {
        PresTerm{PresElem::gen("x"), PresElem::gen("y", -1), PresElem::zero_elem()}};
    Pasture q = u.quotient(rel);
    PastureElement x = u.unit_from_pres(PresElem::gen("x"));
    PastureElement y = u.unit_from_pres(PresElem::gen("y"));
    for (const std::string t : {"F3", "F4", "F5", "F7"}) {
      Pasture pt = named_pasture(t);
      size_t lhs = hom_enumerate(q, pt, budget).size();
      size_t rhs = 0;
      for (const auto& f : hom_enumerate(u, pt, budget))
        if (pt.element_equal(apply(f, x), apply(f, y))) ++rhs;
      ck.expect(lhs == rhs, "quotient counting law fails for U//<x-y> -> " + t);
    }
  }

  // dual and simplification invariance of foundations
  for (const std::string name : {"Q6", "C5", "U(2,5)", "D6"}) {
    Matroid m = named_matroid(name);
    Pasture base = grs_presentation(m).pasture;
    Budget b1, b2;
    ck.expect(find_isomorphism(base, grs_presentation(m.dual()).pasture, b1).has_value(),
              name + ": foundation of the dual differs");
    ck.expect(find_isomorphism(base, grs_presentation(m.simplify()).pasture, b2).has_value(),
              name + ": foundation of the simplification differs");
  }

  // WLUM structure: foundations of these matroids are tensor products of
  // building blocks with one factor per diagram component
  {
    std::vector<std::pair<std::string, std::string>> wlum = {
        {"F7minus", "D"}, {"P7", "U"}, {"whirl(3)", "U"}};
    if (!ck.fast) {
      wlum.push_back({"T8", "F3"});
      wlum.push_back({"AG23_minus_e", "H"});
    }
    for (auto& [mname, factor] : wlum) {
      Matroid m = named_matroid(mname);
      ck.expect(!has_minor(m, named_matroid("U(2,5)")) && !has_minor(m, named_matroid("U(3,5)")),
                mname + " unexpectedly has a large uniform minor");
      MatroidDiagram d = fundamental_diagram(m, DiagramClass::general);
      // connected components of the diagram
      std::vector<int> comp(d.nodes.size());
      for (size_t i = 0; i < comp.size(); ++i) comp[i] = static_cast<int>(i);
      std::function<int(int)> find = [&](int v) {
        while (comp[static_cast<size_t>(v)] != v) v = comp[static_cast<size_t>(v)];
        return v;
      };
      for (auto& [x, y] : d.edges) comp[static_cast<size_t>(find(x))] = find(y);
      std::set<int> roots;
      for (size_t i = 0; i < comp.size(); ++i) roots.insert(find(static_cast<int>(i)));
      Pasture f = grs_presentation(m).pasture;
      Pasture expect = named_pasture(factor);
      ck.expect(roots.size() == 1, mname + ": fundamental diagram not connected");
      ck.expect(f.numerical_type() == expect.numerical_type(),
                mname + ": numerical type is not the expected building block");
    }
  }

  // specific dictionary identities (3-whirl, D6)
  {
    Matroid w3 = named_matroid("whirl(3)");
    FoundationReport rep = grs_presentation(w3);
    auto key = [&](std::initializer_list<std::initializer_list<int>> flats) {
      PsiKey k{};
      size_t i = 0;
      for (auto& f : flats) k[i++] = vec_to_mask(std::vector<int>(f));
      return fold_psi(k);
    };
    PastureElement e1 = rep.dictionary.at(key({{0, 3, 4}, {0, 1}, {0, 5}, {0, 2}}));
    PastureElement e2 = rep.dictionary.at(key({{1, 4, 5}, {1, 2}, {1, 3}, {0, 1}}));
    PastureElement e3 = rep.dictionary.at(key({{2, 3, 5}, {0, 2}, {2, 4}, {1, 2}}));
    ck.expect(rep.pasture.element_equal(e1, e2) && rep.pasture.element_equal(e2, e3),
              "W3 cross-ratio identity fails");

    Matroid d6 = named_matroid("D6");
    FoundationReport rd6 = grs_presentation(d6);
    ck.expect(rd6.pasture.element_equal(rd6.eval(vec_to_mask({4}), 0, 1, 2, 3, d6),
                                        rd6.eval(vec_to_mask({5}), 0, 1, 2, 3, d6)),
              "D6 series-pair identity fails");
  }

  // Smith normal form on random matrices: U A V = D, unimodular, divisibility
  {
    std::mt19937 rng(2024);
    std::uniform_int_distribution<int> dim(1, 6), val(-9, 9);
    bool ok = true;
    for (int trial = 0; trial < 1000 && ok; ++trial) {
      IntMatrix a(dim(rng), dim(rng));
      for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j) a(i, j) = val(rng);
      SmithResult s = smith_normal_form(a);
      if (s.u * a * s.v != s.d) ok = false;
      Eigen::Index mm = std::min(s.d.rows(), s.d.cols());
      for (Eigen::Index i = 0; i + 1 < mm && ok; ++i) {
        if (s.d(i, i) < 0) ok = false;
        if (s.d(i + 1, i + 1) != 0 && s.d(i, i) == 0) ok = false;
        if (s.d(i, i) != 0 && s.d(i + 1, i + 1) % s.d(i, i) != 0) ok = false;
      }
      for (Eigen::Index i = 0; i < s.d.rows(); ++i)
        for (Eigen::Index j = 0; j < s.d.cols(); ++j)
          if (i != j && s.d(i, j) != 0) ok = false;
    }
    ck.expect(ok, "Smith normal form property check failed");
  }

  // determinism across thread counts
  {
    auto run = [&](const char* threads) {
      setenv("FOUNDRY_THREADS", threads, 1);
      FoundationOptions opts;
      opts.method = "diagram";
      opts.identify = true;
      FoundationReport rep = foundation(named_matroid("Q6"), opts);
      unsetenv("FOUNDRY_THREADS");
      return dump_json(report_to_json(rep));
    };
    ck.expect(run("1") == run("8"), "diagram route output differs across thread counts");
  }
}

}  // namespace

int run_acceptance(bool fast, std::ostream& out) {
  struct Criterion {
    std::string name;
    void (*fn)(Checker&);
  };
  const std::vector<Criterion> criteria = {
      {"1 golden foundations via GRS", golden_foundations},
      {"2 numerical fixtures for uniform foundations", numerical_fixture},
      {"3 route agreement across presentations", route_agreement},
      {"4 direct-sum law", direct_sum_law},
      {"5 rescaling-class oracle equality", oracle_equality},
      {"6 automorphism counts", automorphism_counts},
      {"7 appendix morphism table", appendix_table},
      {"8 property suites", property_suites},
  };
  int failures = 0;
  for (const Criterion& c : criteria) {
    Checker ck{fast, CriterionResult{c.name, true, 0, {}}};
    auto t0 = Clock::now();
    try {
      c.fn(ck);
    } catch (const std::exception& e) {
      ck.current.failures.push_back(std::string("exception: ") + e.what());
    }
    double secs = std::chrono::duration<double>(Clock::now() - t0).count();
    bool pass = ck.current.failures.empty();
    failures += pass ? 0 : 1;
    std::ostringstream line;
    line.setf(std::ios::fixed);
    line.precision(1);
    line << (pass ? "[PASS] " : "[FAIL] ") << c.name << " (" << secs << "s)";
    out << line.str() << "\n";
    for (const std::string& f : ck.current.failures) out << "       - " << f << "\n";
  }
  return failures;
}

}  // namespace foundry
