#include <doctest.h>

#include "foundry/represent.hpp"

#include <random>

using namespace foundry;

namespace {

GPFunction constant_one(const Matroid& m, const Pasture& p) {
  GPFunction f{m, p, {}};
  f.values.assign(m.bases().size(), p.one());
  return f;
}

}  // namespace

TEST_CASE("verify_gp on U(2,4) over F3") {
  Matroid u24 = named_matroid("U(2,4)");
  Pasture f3 = named_pasture("F3");

  GPFunction all_one = constant_one(u24, f3);
  CHECK_FALSE(verify_gp(all_one));  // 1 - 1 + 1 is not null in F3

  GPFunction good = all_one;
  // value 2 = -1 on the basis {1,3} in 1-indexed labels, i.e. {0,2} here
  auto it = std::lower_bound(u24.bases().begin(), u24.bases().end(), vec_to_mask({0, 2}));
  good.values[static_cast<size_t>(it - u24.bases().begin())] = f3.neg(f3.one());
  CHECK(verify_gp(good));
}

TEST_CASE("every matroid has the Krasner representation") {
  Pasture k = named_pasture("K");
  for (const std::string name : {"U(2,4)", "F7", "Q6", "T8"})
    CHECK(verify_gp(constant_one(named_matroid(name), k)));
}

TEST_CASE("verify_gp is invariant under rescaling") {
  Matroid u24 = named_matroid("U(2,4)");
  Pasture f4 = named_pasture("F4");
  Budget budget;
  std::vector<GPFunction> all = enumerate_gp(u24, f4, budget);
  REQUIRE(!all.empty());
  std::mt19937 rng(3);
  std::vector<IntVector> units = f4.unit_group().all_elements();
  for (int trial = 0; trial < 5; ++trial) {
    GPFunction f = all[rng() % all.size()];
    IntVector d = units[rng() % units.size()];
    std::vector<IntVector> t;
    for (int e = 0; e < u24.n(); ++e) t.push_back(units[rng() % units.size()]);
    GPFunction g = f;
    for (size_t i = 0; i < u24.bases().size(); ++i) {
      IntVector v = f.values[i].coords + d;
      for (int e : mask_to_vec(u24.bases()[i])) v += t[static_cast<size_t>(e)];
      g.values[i] = PastureElement{false, f4.unit_group().reduce(std::move(v))};
    }
    CHECK(verify_gp(g));
  }
}

TEST_CASE("rescaling class counts against hom counts") {
  Budget budget;
  Matroid u24 = named_matroid("U(2,4)");
  CHECK(rescaling_classes(u24, named_pasture("F3"), "F3", budget).count == 1);
  CHECK(rescaling_classes(u24, named_pasture("F4"), "F4", budget).count == 2);
  CHECK(rescaling_classes(u24, named_pasture("F2"), "F2", budget).count == 0);
  CHECK(rescaling_classes(named_matroid("F7"), named_pasture("F2"), "F2", budget).count == 1);
}

TEST_CASE("rescaling classes match hom counts beyond the pinned set") {
  for (auto [mn, tn] : std::vector<std::pair<std::string, std::string>>{
           {"Q6", "F4"}, {"Q6", "F3"}, {"whirl(3)", "F3"}, {"whirl(3)", "F5"}}) {
    Budget b1, b2;
    Matroid m = named_matroid(mn);
    Pasture p = named_pasture(tn);
    long classes = rescaling_classes(m, p, tn, b1).count;
    long homs = static_cast<long>(hom_enumerate(grs_presentation(m).pasture, p, b2).size());
    CHECK(classes == homs);
  }
}

TEST_CASE("orbit counting matches the naive orbit partition on the smallest cases") {
  Budget budget;
  Matroid u24 = named_matroid("U(2,4)");
  for (const std::string tname : {"F3", "F4"}) {
    Pasture p = named_pasture(tname);
    std::vector<GPFunction> all = enumerate_gp(u24, p, budget);
    // partition by explicitly applying the whole rescaling group
    std::vector<IntVector> units = p.unit_group().all_elements();
    auto serialize = [&](const std::vector<PastureElement>& vals) {
      std::string s;
      for (const auto& v : vals) s += serialize_exponents(v.coords);
      return s;
    };
    std::map<std::string, size_t> index;
    for (size_t i = 0; i < all.size(); ++i) index[serialize(all[i].values)] = i;
    std::vector<int> orbit(all.size(), -1);
    int orbits = 0;
    for (size_t i = 0; i < all.size(); ++i) {
      if (orbit[i] >= 0) continue;
      int id = orbits++;
      // breadth-first through the group action
      std::vector<size_t> queue = {i};
      orbit[i] = id;
      while (!queue.empty()) {
        size_t cur = queue.back();
        queue.pop_back();
        const int n = u24.n();
        std::vector<size_t> stack(static_cast<size_t>(n) + 1, 0);
        while (true) {
          std::vector<PastureElement> moved(all[cur].values.size());
          for (size_t bi = 0; bi < u24.bases().size(); ++bi) {
            IntVector v = all[cur].values[bi].coords + units[stack[0]];
            for (int e : mask_to_vec(u24.bases()[bi])) v += units[stack[static_cast<size_t>(e) + 1]];
            moved[bi] = PastureElement{false, p.unit_group().reduce(std::move(v))};
          }
          size_t j = index.at(serialize(moved));
          if (orbit[j] < 0) {
            orbit[j] = id;
            queue.push_back(j);
          }
          size_t pos = 0;
          while (pos <= static_cast<size_t>(n)) {
            if (++stack[pos] < units.size()) break;
            stack[pos] = 0;
            ++pos;
          }
          if (pos > static_cast<size_t>(n)) break;
        }
      }
    }
    CHECK(static_cast<long>(orbits) ==
          rescaling_classes(u24, p, tname, budget).count);
  }
}

TEST_CASE("representability") {
  Budget budget;
  CHECK(is_representable(named_matroid("F7minus"), named_pasture("F3"), budget));
  CHECK_FALSE(is_representable(named_matroid("F7minus"), named_pasture("F4"), budget));
  CHECK(is_representable(named_matroid("AG23_minus_e"), named_pasture("F4"), budget));
  CHECK_FALSE(is_representable(named_matroid("AG23_minus_e"), named_pasture("F5"), budget));
  CHECK_FALSE(is_representable(named_matroid("U(2,4)"), named_pasture("F2"), budget));
  // K is terminal
  for (const std::string name : {"U(2,4)", "F7", "T8"})
    CHECK(is_representable(named_matroid(name), named_pasture("K"), budget));
}

TEST_CASE("representability rows from the appendix table") {
  Budget budget;
  std::vector<bool> g = representability_row(named_pasture("G"), {"F4", "F5", "F7"}, budget);
  CHECK(g == std::vector<bool>{true, true, false});
  std::vector<bool> s = representability_row(
      named_pasture("S"), {"F2", "F3", "F4", "F5", "F7", "F8", "F9"}, budget);
  CHECK(s == std::vector<bool>(7, false));
  std::vector<bool> reg = representability_row(
      named_pasture("regular"), {"F2", "F3", "F4", "F5", "F7", "F8", "F9"}, budget);
  CHECK(reg == std::vector<bool>(7, true));
}

TEST_CASE("table emitter") {
  Budget budget;
  RepresentabilityTable t = representability_table({"U", "F2"}, {"F2", "F3"}, budget);
  CHECK(t.to_tsv() == "pasture\tF2\tF3\nU\t0\t1\nF2\t1\t0\n");
}
