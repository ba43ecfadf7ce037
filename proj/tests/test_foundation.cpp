#include <doctest.h>

#include "foundry/foundation.hpp"

using namespace foundry;

namespace {

int nondeg_count(const std::vector<CrossRatioSymbol>& classes) {
  int c = 0;
  for (const auto& s : classes) c += s.nondegenerate ? 1 : 0;
  return c;
}

std::string identify_name(const Pasture& p) {
  Budget budget;
  auto res = identify(p, budget);
  return res.name.value_or("?");
}

PsiKey quad(std::initializer_list<std::initializer_list<int>> flats) {
  PsiKey k{};
  size_t i = 0;
  for (auto& f : flats) k[i++] = vec_to_mask(std::vector<int>(f));
  return k;
}

}  // namespace

TEST_CASE("omega enumeration") {
  auto u24 = enumerate_omega(named_matroid("U(2,4)"));
  CHECK(u24.size() == 6);
  CHECK(nondeg_count(u24) == 6);

  CHECK(enumerate_omega(named_matroid("U(1,2)")).empty());

  auto f7 = enumerate_omega(named_matroid("F7"));
  CHECK(nondeg_count(f7) == 0);

  // U(2,5): 120 tuples fold into 30 classes
  auto u25 = enumerate_omega(named_matroid("U(2,5)"));
  CHECK(u25.size() == 30);
  CHECK(nondeg_count(u25) == 30);
}

TEST_CASE("foundations of matroids of rank below two") {
  Budget budget;
  FoundationReport rep = grs_presentation(named_matroid("U(1,2)"));
  CHECK(rep.classes.empty());
  CHECK(identify(rep.pasture, budget).name == std::string("regular"));
  FoundationOptions opts;
  opts.identify = true;  // the default cross-check policy applies (n <= 7)
  FoundationReport full = foundation(named_matroid("U(1,2)"), opts);
  for (auto& [route, ok] : full.cross_checks) CHECK(ok);
}

TEST_CASE("grs foundations of the first examples") {
  CHECK(identify_name(grs_presentation(named_matroid("U(2,4)")).pasture) == "U");
  CHECK(identify_name(grs_presentation(named_matroid("U(2,5)")).pasture) == "V");
  CHECK(identify_name(grs_presentation(named_matroid("U(3,5)")).pasture) == "V");
  CHECK(identify_name(grs_presentation(named_matroid("F7")).pasture) == "F2");
  CHECK(identify_name(grs_presentation(named_matroid("F7dual")).pasture) == "F2");
  CHECK(identify_name(grs_presentation(named_matroid("C5")).pasture) == "U");
  CHECK(identify_name(grs_presentation(named_matroid("whirl(2)")).pasture) == "U");
  CHECK(identify_name(grs_presentation(named_matroid("wheel(3)")).pasture) == "regular");
}

TEST_CASE("fundamental diagram of U12 + U24 has three nodes and two edges") {
  Matroid m = direct_sum(named_matroid("U(1,2)"), named_matroid("U(2,4)"));
  MatroidDiagram d = fundamental_diagram(m, DiagramClass::general);
  CHECK(d.nodes.size() == 3);
  CHECK(d.edges.size() == 2);
  FoundationReport rep = foundation_via_diagram(m, DiagramClass::general);
  CHECK(identify_name(rep.pasture) == "U");
}

TEST_CASE("fundamental diagram of Q6") {
  Matroid q6 = named_matroid("Q6");
  MatroidDiagram d = fundamental_diagram(q6, DiagramClass::general);
  int u25_nodes = 0, u35_nodes = 0;
  for (const auto& em : d.nodes) {
    if (em.minor.n() == 5 && em.minor.rank() == 2 && em.minor.bases().size() == 10) {
      ++u25_nodes;
      CHECK(em.contract == vec_to_mask({5}));  // M/6 in 1-indexed labels
    }
    if (em.minor.n() == 5 && em.minor.rank() == 3 && em.minor.bases().size() == 10) {
      ++u35_nodes;
      CHECK(em.del == vec_to_mask({0}));  // M minus 1
    }
  }
  CHECK(u25_nodes == 1);
  CHECK(u35_nodes == 1);
}

TEST_CASE("three-connected diagram of the 3-whirl has seven nodes") {
  Matroid w3 = named_matroid("whirl(3)");
  MatroidDiagram d = fundamental_diagram(w3, DiagramClass::three_connected);
  CHECK(d.nodes.size() == 7);
  int self_nodes = 0, u24_nodes = 0;
  for (const auto& em : d.nodes) {
    if (em.minor.n() == 6) ++self_nodes;
    if (em.minor.n() == 4) ++u24_nodes;
  }
  CHECK(self_nodes == 1);
  CHECK(u24_nodes == 6);
}

TEST_CASE("route agreement on Q6") {
  Budget budget;
  FoundationReport grs = grs_presentation(named_matroid("Q6"));
  CHECK(identify_name(grs.pasture) == "V");
  FoundationReport dia = foundation_via_diagram(named_matroid("Q6"), DiagramClass::general);
  CHECK(find_isomorphism(grs.pasture, dia.pasture, budget).has_value());
}

TEST_CASE("whirl foundations via the 2-connected route") {
  FoundationReport rep = foundation_via_diagram(named_matroid("whirl(3)"),
                                                DiagramClass::two_connected);
  CHECK(identify_name(rep.pasture) == "U");
}

TEST_CASE("lattice diagram of AG(2,3) minus e") {
  Matroid ag = named_matroid("AG23_minus_e");
  LatticeDiagram d = lattice_diagram(ag, LatticeVariant::full);
  int u24n = 0, c5n = 0;
  for (const auto& s : d.nodes) {
    if (s.type_tag == "U24") ++u24n;
    if (s.type_tag == "C5") ++c5n;
  }
  CHECK(u24n == 8);
  CHECK(c5n == 32);
  CHECK(d.nodes.size() == 40);
}

TEST_CASE("three-connected lattice diagram of P7") {
  Matroid p7 = named_matroid("P7");
  LatticeDiagram d = lattice_diagram(p7, LatticeVariant::three_connected);
  int u24n = 0, w3n = 0;
  for (const auto& s : d.nodes) {
    if (s.type_tag == "U24") ++u24n;
    if (s.type_tag == "W3") ++w3n;
  }
  CHECK(u24n == 6);
  CHECK(w3n == 6);
  CHECK(d.nodes.size() == 12);
  // the diagram is connected, so the foundation has a single tensor factor
  std::vector<int> comp(d.nodes.size());
  for (size_t i = 0; i < comp.size(); ++i) comp[i] = static_cast<int>(i);
  std::function<int(int)> find = [&](int v) {
    while (comp[static_cast<size_t>(v)] != v) v = comp[static_cast<size_t>(v)];
    return v;
  };
  for (auto& [a, b] : d.edges) comp[static_cast<size_t>(find(a))] = find(b);
  std::set<int> roots;
  for (size_t i = 0; i < comp.size(); ++i) roots.insert(find(static_cast<int>(i)));
  CHECK(roots.size() == 1);
}

TEST_CASE("W3 cross ratio identities from C5 sublattices") {
  // the usual 1-indexed W3 labels map to the wheel-graph construction by
  // 1,2,3,4,5,6 -> 3,0,4,1,5,2
  Matroid w3 = named_matroid("whirl(3)");
  FoundationReport rep = grs_presentation(w3);
  PsiKey k1 = quad({{0, 3, 4}, {0, 1}, {0, 5}, {0, 2}});
  PsiKey k2 = quad({{1, 4, 5}, {1, 2}, {1, 3}, {0, 1}});
  PsiKey k3 = quad({{2, 3, 5}, {0, 2}, {2, 4}, {1, 2}});
  auto e1 = rep.dictionary.at(fold_psi(k1));
  auto e2 = rep.dictionary.at(fold_psi(k2));
  auto e3 = rep.dictionary.at(fold_psi(k3));
  CHECK(rep.pasture.element_equal(e1, e2));
  CHECK(rep.pasture.element_equal(e2, e3));

  // invariance of the equality under a matroid automorphism (rim and spoke
  // rotation) and a simultaneous entry permutation
  auto rot = [](SetMask f) {
    SetMask out = 0;
    for (int e : mask_to_vec(f)) {
      int img = (e < 3) ? (e + 1) % 3 : 3 + (e - 3 + 1) % 3;
      out |= SetMask(1) << img;
    }
    return out;
  };
  auto rot_quad = [&](const PsiKey& k) {
    return PsiKey{rot(k[1]), rot(k[0]), rot(k[3]), rot(k[2])};
  };
  auto r1 = rep.dictionary.at(fold_psi(rot_quad(k1)));
  auto r2 = rep.dictionary.at(fold_psi(rot_quad(k2)));
  CHECK(rep.pasture.element_equal(r1, r2));
}

TEST_CASE("D6 series-pair cross ratios coincide") {
  Matroid d6 = named_matroid("D6");
  FoundationReport rep = grs_presentation(d6);
  PastureElement lhs = rep.eval(vec_to_mask({4}), 0, 1, 2, 3, d6);
  PastureElement rhs = rep.eval(vec_to_mask({5}), 0, 1, 2, 3, d6);
  CHECK(rep.pasture.element_equal(lhs, rhs));
  PastureElement lhs2 = rep.eval(vec_to_mask({4}), 2, 0, 3, 1, d6);
  PastureElement rhs2 = rep.eval(vec_to_mask({5}), 2, 0, 3, 1, d6);
  CHECK(rep.pasture.element_equal(lhs2, rhs2));
}

TEST_CASE("the shifted V relation x_{i+1} = x_{i-1}^-1 y_i holds in F(U(2,5))") {
  // with x_i = [(i+1)(i+2);(i+4)(i+3)] and y_i = [(i+1)(i+4);(i+2)(i+3)]
  // (indices mod 5), y_i = x_{i-1} x_{i+1}
  Matroid u25 = named_matroid("U(2,5)");
  FoundationReport rep = grs_presentation(u25);
  for (int i = 0; i < 5; ++i) {
    auto md = [](int v) { return ((v % 5) + 5) % 5; };
    PastureElement xi1 = rep.eval(0, md(i + 2), md(i + 3), md(i), md(i + 4), u25);
    PastureElement xim1 = rep.eval(0, md(i), md(i + 1), md(i + 3), md(i + 2), u25);
    PastureElement yi = rep.eval(0, md(i + 1), md(i + 4), md(i + 2), md(i + 3), u25);
    PastureElement rhs = rep.pasture.mul(rep.pasture.inv(xim1), yi);
    CHECK(rep.pasture.element_equal(xi1, rhs));
    // and x_i + y_i = 1
    PastureElement xi = rep.eval(0, md(i + 1), md(i + 2), md(i + 4), md(i + 3), u25);
    CHECK(rep.pasture.is_fundamental_pair(xi, yi));
  }
}

TEST_CASE("the two rank-2 embeddings of Q6 agree on generators") {
  // the U(2,5)-minor M/6 and the U(3,5)-minor M\\1 induce the same
  // generators in the foundation (1-indexed tuples shifted down)
  Matroid q6 = named_matroid("Q6");
  FoundationReport rep = grs_presentation(q6);
  PastureElement a2 = rep.eval(vec_to_mask({5}), 2, 3, 0, 4, q6);   // [34;15]_6
  PastureElement b2 = rep.eval(vec_to_mask({2}), 1, 4, 5, 3, q6);   // [25;64]_3
  CHECK(rep.pasture.element_equal(a2, b2));
  PastureElement a3 = rep.eval(vec_to_mask({5}), 3, 4, 1, 0, q6);   // [45;21]_6
  PastureElement b3 = rep.eval(vec_to_mask({1}), 4, 3, 2, 5, q6);   // [54;36]_2
  CHECK(rep.pasture.element_equal(a3, b3));
}

TEST_CASE("the hexagonal relation x = 1/y holds in F(AG(2,3) minus e)") {
  Matroid ag = named_matroid("AG23_minus_e");
  FoundationReport rep = grs_presentation(ag);
  auto key = [&](std::vector<std::vector<int>> flats) {
    PsiKey k{};
    for (size_t i = 0; i < 4; ++i) k[i] = vec_to_mask(flats[i]);
    return fold_psi(k);
  };
  PastureElement x = rep.dictionary.at(key({{0, 1, 2}, {0, 3, 5}, {0, 4}, {0, 6, 7}}));
  PastureElement yi = rep.dictionary.at(key({{0, 1, 2}, {0, 4}, {0, 6, 7}, {0, 3, 5}}));
  CHECK(rep.pasture.element_equal(x, yi));
}

TEST_CASE("dictionary identities in the non-Fano foundation") {
  // the unique embedding of the dyadic generator: x = [367,46;26,156] =
  // [367,26;46,156], with x + x = 1 and [367,156;46,26] = -1 (1-indexed
  // labels shifted down)
  Matroid m = named_matroid("F7minus");
  FoundationReport rep = grs_presentation(m);
  auto key = [&](std::vector<std::vector<int>> flats) {
    PsiKey k{};
    for (size_t i = 0; i < 4; ++i) k[i] = vec_to_mask(flats[i]);
    return fold_psi(k);
  };
  PastureElement x1 = rep.dictionary.at(key({{2, 5, 6}, {3, 5}, {1, 5}, {0, 4, 5}}));
  PastureElement x2 = rep.dictionary.at(key({{2, 5, 6}, {1, 5}, {3, 5}, {0, 4, 5}}));
  PastureElement m1 = rep.dictionary.at(key({{2, 5, 6}, {0, 4, 5}, {3, 5}, {1, 5}}));
  CHECK(rep.pasture.element_equal(x1, x2));
  CHECK(rep.pasture.is_fundamental_pair(x1, x1));  // x + x - 1 is null
  CHECK(rep.pasture.element_equal(m1, rep.pasture.neg(rep.pasture.one())));
}

TEST_CASE("the T8 cross ratio [1458,178;168,1238] is -1") {
  Matroid m = named_matroid("T8");
  FoundationReport rep = grs_presentation(m);
  PsiKey k{};
  k[0] = vec_to_mask({0, 3, 4, 7});
  k[1] = vec_to_mask({0, 6, 7});
  k[2] = vec_to_mask({0, 5, 7});
  k[3] = vec_to_mask({0, 1, 2, 7});
  PastureElement e = rep.dictionary.at(fold_psi(k));
  CHECK(rep.pasture.element_equal(e, rep.pasture.epsilon()));
}

TEST_CASE("foundation cross-check on a small matroid") {
  FoundationOptions opts;
  opts.cross_check = true;
  FoundationReport rep = foundation(named_matroid("C5"), opts);
  CHECK(rep.cross_checks.size() >= 3);
  for (auto& [route, ok] : rep.cross_checks) CHECK(ok);
}

TEST_CASE("foundation of the dual is isomorphic") {
  Budget budget;
  for (const std::string name : {"Q6", "C5", "U(2,5)"}) {
    Matroid m = named_matroid(name);
    FoundationReport a = grs_presentation(m);
    FoundationReport b = grs_presentation(m.dual());
    CHECK(find_isomorphism(a.pasture, b.pasture, budget).has_value());
  }
}
