#include "foundry/matroid.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <mutex>
#include <set>

namespace foundry {

namespace {

// 1-indexed figures are transcribed by subtracting 1 from every element.
std::vector<std::vector<int>> shift_down(std::vector<std::vector<int>> sets) {
  for (auto& s : sets)
    for (int& x : s) --x;
  return sets;
}

Matroid uniform(int r, int n) {
  std::vector<SetMask> bases;
  for (SetMask s = 0; s < (SetMask(1) << n); ++s)
    if (popcount(s) == r) bases.push_back(s);
  return Matroid::from_bases(n, r, std::move(bases));
}

// cycle matroid of the r-spoked wheel: elements 0..r-1 are the rim edges
// a_1..a_r (a_i joins rim vertices i, i+1), elements r..2r-1 the spokes
// b_1..b_r (b_i joins the hub to rim vertex i)
Matroid wheel(int r) {
  if (r < 2 || r > 8) throw ParseError("wheel(r) supported for 2 <= r <= 8");
  const int n = 2 * r;
  struct Edge {
    int u, v;
  };
  std::vector<Edge> edges;
  for (int i = 0; i < r; ++i) edges.push_back({i + 1, (i + 1) % r + 1});  // rim
  for (int i = 0; i < r; ++i) edges.push_back({0, i + 1});               // spokes
  std::vector<SetMask> bases;
  std::vector<int> parent(static_cast<size_t>(r) + 1);
  for (SetMask s = 0; s < (SetMask(1) << n); ++s) {
    if (popcount(s) != r) continue;
    for (int v = 0; v <= r; ++v) parent[static_cast<size_t>(v)] = v;
    std::function<int(int)> find = [&](int v) {
      while (parent[static_cast<size_t>(v)] != v) v = parent[static_cast<size_t>(v)] =
                                                      parent[static_cast<size_t>(parent[static_cast<size_t>(v)])];
      return v;
    };
    bool acyclic = true;
    for (int e = 0; e < n && acyclic; ++e) {
      if (!((s >> e) & 1)) continue;
      int a = find(edges[static_cast<size_t>(e)].u), b = find(edges[static_cast<size_t>(e)].v);
      if (a == b)
        acyclic = false;
      else
        parent[static_cast<size_t>(a)] = b;
    }
    if (acyclic) bases.push_back(s);  // r edges, acyclic on r+1 vertices = spanning tree
  }
  return Matroid::from_bases(n, r, std::move(bases));
}

Matroid whirl(int r) {
  Matroid w = wheel(r);
  std::vector<SetMask> bases = w.bases();
  bases.push_back((SetMask(1) << r) - 1);  // the rim is the unique circuit-hyperplane
  return Matroid::from_bases(w.n(), w.rank(), std::move(bases));
}

Matroid build_named(const std::string& name) {
  if (name.rfind("U(", 0) == 0 && name.back() == ')') {
    auto comma = name.find(',');
    if (comma == std::string::npos) throw ParseError("expected U(r,n)");
    int r = std::stoi(name.substr(2, comma - 2));
    int n = std::stoi(name.substr(comma + 1, name.size() - comma - 2));
    if (n < 0 || n > 14 || r < 0 || r > n) throw ParseError("U(r,n) out of supported range");
    return uniform(r, n);
  }
  if (name.rfind("wheel(", 0) == 0) return wheel(std::stoi(name.substr(6)));
  if (name.rfind("whirl(", 0) == 0) return whirl(std::stoi(name.substr(6)));
  if (name == "F7" || name == "PG22")
    return Matroid::from_nonbases(
        7, 3, shift_down({{1, 2, 4}, {2, 3, 5}, {3, 4, 6}, {4, 5, 7}, {5, 6, 1}, {6, 7, 2}, {7, 1, 3}}));
  if (name == "F7dual") return named_matroid("F7").dual();
  if (name == "F7minus")
    return Matroid::from_nonbases(
        7, 3, shift_down({{1, 2, 3}, {1, 4, 7}, {1, 5, 6}, {2, 5, 7}, {3, 4, 5}, {3, 6, 7}}));
  if (name == "C5") return Matroid::from_nonbases(5, 3, shift_down({{1, 2, 3}}));
  if (name == "C5dual") return named_matroid("C5").dual();
  if (name == "D6") {
    // series extension of U(2,5): elements 1..4 plus the series pair 5,6
    std::vector<std::vector<int>> circuits;
    for (int a = 1; a <= 4; ++a)
      for (int b = a + 1; b <= 4; ++b)
        for (int c = b + 1; c <= 4; ++c) circuits.push_back({a, b, c});
    for (int a = 1; a <= 4; ++a)
      for (int b = a + 1; b <= 4; ++b) circuits.push_back({a, b, 5, 6});
    return Matroid::from_circuits(6, 3, shift_down(circuits));
  }
  if (name == "Q6") return Matroid::from_circuits(6, 3, shift_down({{1, 4, 5}, {1, 2, 3}}));
  if (name == "P6") return Matroid::from_circuits(6, 3, shift_down({{1, 2, 3}}));
  if (name == "P7")
    return Matroid::from_nonbases(
        7, 3, shift_down({{1, 3, 5}, {1, 4, 7}, {3, 6, 7}, {2, 5, 7}, {2, 4, 6}}));
  if (name == "T8")
    return Matroid::from_circuits(8, 4,
                                  shift_down({{1, 2, 3, 8},
                                              {1, 2, 4, 7},
                                              {1, 3, 4, 6},
                                              {2, 3, 4, 5},
                                              {1, 2, 5, 6},
                                              {1, 3, 5, 7},
                                              {1, 4, 5, 8},
                                              {2, 3, 6, 7},
                                              {2, 4, 6, 8},
                                              {3, 4, 7, 8},
                                              {5, 6, 7, 8}}));
  if (name == "AG23_minus_e")
    return Matroid::from_nonbases(8, 3,
                                  shift_down({{1, 2, 3},
                                              {1, 4, 6},
                                              {1, 7, 8},
                                              {2, 4, 7},
                                              {2, 5, 8},
                                              {3, 4, 5},
                                              {3, 6, 8},
                                              {5, 6, 7}}));
  throw ParseError("unknown matroid name: " + name);
}

}  // namespace

std::vector<std::string> matroid_catalog_names() {
  return {"U(2,4)", "U(2,5)",  "U(3,5)",  "U(2,6)", "U(3,6)",  "U(2,7)",  "F7",
          "F7dual", "F7minus", "C5",      "C5dual", "D6",      "wheel(3)", "wheel(4)",
          "whirl(2)", "whirl(3)", "whirl(4)", "Q6",  "P6",      "P7",      "T8",
          "AG23_minus_e", "PG22"};
}

bool is_catalog_matroid(const std::string& name) {
  if (name.rfind("U(", 0) == 0 || name.rfind("wheel(", 0) == 0 || name.rfind("whirl(", 0) == 0)
    return true;
  auto names = matroid_catalog_names();
  return std::find(names.begin(), names.end(), name) != names.end();
}

Matroid named_matroid(const std::string& name) {
  static std::mutex mu;
  static std::map<std::string, Matroid> cache;
  {
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(name);
    if (it != cache.end()) return it->second;
  }
  Matroid m = build_named(name);  // may recurse for *dual entries
  std::lock_guard<std::mutex> lock(mu);
  cache.emplace(name, m);
  return m;
}

namespace {

// flat lattices of the template matroids, as families of atom sets
struct LatticeTemplate {
  int rank = 0;
  int num_atoms = 0;
  std::set<std::vector<SetMask>> canonical_families;  // not used; see below
};

// family representation: every lattice element as the set of template atoms
// below it, the whole lattice as a sorted vector of atom masks
std::vector<SetMask> atomset_family(const Matroid& m) {
  const FlatLattice& l = m.flat_lattice();
  std::vector<SetMask> atoms = l.by_rank.size() > 1 ? l.by_rank[1] : std::vector<SetMask>{};
  std::vector<SetMask> fam;
  for (const auto& level : l.by_rank)
    for (SetMask f : level) {
      SetMask as = 0;
      for (size_t i = 0; i < atoms.size(); ++i)
        if ((atoms[i] & ~f) == 0) as |= SetMask(1) << i;
      fam.push_back(as);
    }
  std::sort(fam.begin(), fam.end());
  return fam;
}

const Matroid& template_matroid(const std::string& tag) {
  static std::mutex mu;
  static std::map<std::string, Matroid> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(tag);
  if (it != cache.end()) return it->second;
  std::string name;
  if (tag == "U24") name = "U(2,4)";
  else if (tag == "U25") name = "U(2,5)";
  else if (tag == "U35") name = "U(3,5)";
  else if (tag == "C5") name = "C5";
  else if (tag == "F7") name = "F7";
  else if (tag == "F7dual") name = "F7dual";
  else if (tag == "W3") name = "whirl(3)";
  else if (tag == "Q6") name = "Q6";
  else if (tag == "P6") name = "P6";
  else throw ParseError("unknown sublattice type tag: " + tag);
  return cache.emplace(tag, named_matroid(name).simplify()).first->second;
}

// is the family of atom sets isomorphic to the template's family under some
// atom permutation?
bool family_isomorphic(const std::vector<SetMask>& fam, const std::vector<SetMask>& tmpl,
                       int num_atoms) {
  if (fam.size() != tmpl.size()) return false;
  std::set<SetMask> fam_set(fam.begin(), fam.end());
  std::set<SetMask> tmpl_set(tmpl.begin(), tmpl.end());
  // atom degree profiles (number of family members containing the atom, per popcount)
  auto profile = [&](const std::set<SetMask>& fs, int atom) {
    std::vector<int> p(33, 0);
    for (SetMask f : fs)
      if ((f >> atom) & 1) p[static_cast<size_t>(popcount(f))]++;
    return p;
  };
  std::vector<std::vector<int>> pf, pt;
  for (int a = 0; a < num_atoms; ++a) {
    pf.push_back(profile(fam_set, a));
    pt.push_back(profile(tmpl_set, a));
  }
  std::vector<int> perm(static_cast<size_t>(num_atoms), -1);
  std::vector<bool> used(static_cast<size_t>(num_atoms), false);
  std::function<bool(int)> rec = [&](int a) -> bool {
    if (a == num_atoms) {
      for (SetMask f : fam_set) {
        SetMask g = 0;
        for (int i = 0; i < num_atoms; ++i)
          if ((f >> i) & 1) g |= SetMask(1) << perm[static_cast<size_t>(i)];
        if (!tmpl_set.count(g)) return false;
      }
      return true;
    }
    for (int t = 0; t < num_atoms; ++t) {
      if (used[static_cast<size_t>(t)]) continue;
      if (pf[static_cast<size_t>(a)] != pt[static_cast<size_t>(t)]) continue;
      perm[static_cast<size_t>(a)] = t;
      used[static_cast<size_t>(t)] = true;
      if (rec(a + 1)) return true;
      used[static_cast<size_t>(t)] = false;
    }
    return false;
  };
  return rec(0);
}

// all joins of subsets of `atoms` inside the flat lattice, bottom included
std::vector<SetMask> join_closure(const Matroid& m, SetMask bottom,
                                  const std::vector<SetMask>& atoms) {
  std::set<SetMask> out = {bottom};
  std::set<SetMask> frontier(atoms.begin(), atoms.end());
  for (SetMask a : frontier) out.insert(a);
  bool grew = true;
  while (grew) {
    grew = false;
    std::vector<SetMask> cur(out.begin(), out.end());
    for (SetMask f : cur)
      for (SetMask a : atoms) {
        SetMask j = m.closure(f | a);
        if (out.insert(j).second) grew = true;
      }
  }
  return std::vector<SetMask>(out.begin(), out.end());
}

std::vector<SetMask> atomset_family_of_sublattice(const Matroid& m, SetMask bottom,
                                                  const std::vector<SetMask>& atoms) {
  std::vector<SetMask> flats = join_closure(m, bottom, atoms);
  std::vector<SetMask> fam;
  for (SetMask f : flats) {
    SetMask as = 0;
    for (size_t i = 0; i < atoms.size(); ++i)
      if ((atoms[i] & ~f) == 0) as |= SetMask(1) << i;
    fam.push_back(as);
  }
  std::sort(fam.begin(), fam.end());
  return fam;
}

}  // namespace

const std::vector<std::string>& upper_sublattice_types() {
  static const std::vector<std::string> types = {"U24", "U25", "U35", "C5",
                                                 "F7",  "F7dual", "W3", "Q6", "P6"};
  return types;
}

std::vector<UpperSublattice> upper_sublattices(const Matroid& m, const std::string& type_tag) {
  const Matroid& tmpl = template_matroid(type_tag);
  const int trank = tmpl.rank();
  const int tatoms = static_cast<int>(tmpl.flat_lattice().by_rank.at(1).size());
  std::vector<SetMask> tmpl_family = atomset_family(tmpl);

  std::vector<UpperSublattice> out;
  const FlatLattice& l = m.flat_lattice();
  if (m.rank() < trank) return out;
  for (SetMask bottom : l.by_rank[static_cast<size_t>(m.rank() - trank)]) {
    std::vector<SetMask> atoms = l.atoms_above(bottom);
    if (static_cast<int>(atoms.size()) < tatoms) continue;
    std::vector<int> pick(static_cast<size_t>(tatoms));
    std::function<void(size_t, size_t)> rec = [&](size_t pos, size_t start) {
      if (pos == pick.size()) {
        std::vector<SetMask> chosen;
        for (int i : pick) chosen.push_back(atoms[static_cast<size_t>(i)]);
        std::vector<SetMask> fam = atomset_family_of_sublattice(m, bottom, chosen);
        if (!family_isomorphic(fam, tmpl_family, tatoms)) return;
        UpperSublattice s;
        s.bottom = bottom;
        s.atoms = chosen;
        s.type_tag = type_tag;
        s.flats = join_closure(m, bottom, chosen);
        out.push_back(std::move(s));
        return;
      }
      for (size_t i = start; i < atoms.size(); ++i) {
        pick[pos] = static_cast<int>(i);
        rec(pos + 1, i + 1);
      }
    };
    rec(0, 0);
  }
  return out;
}

UpperSublattice full_upper_sublattice(const Matroid& m, SetMask bottom) {
  const FlatLattice& l = m.flat_lattice();
  auto it = l.rank_of.find(bottom);
  if (it == l.rank_of.end()) throw PreconditionError("not a flat");
  UpperSublattice s;
  s.bottom = bottom;
  s.atoms = l.atoms_above(bottom);
  s.type_tag = "full";
  for (const auto& level : l.by_rank)
    for (SetMask f : level)
      if ((bottom & ~f) == 0) s.flats.push_back(f);
  std::sort(s.flats.begin(), s.flats.end());
  return s;
}

UpperSublattice psi_image(const Matroid& m, const EmbeddedMinor& em) {
  UpperSublattice s;
  s.bottom = m.closure(em.contract);
  s.type_tag = "psi";
  std::set<SetMask> atoms;
  for (int e : em.labels) {
    SetMask a = m.closure(em.contract | (SetMask(1) << e));
    if (a != s.bottom) atoms.insert(a);  // loops of the minor generate no atom
  }
  s.atoms.assign(atoms.begin(), atoms.end());
  s.flats = join_closure(m, s.bottom, s.atoms);
  return s;
}

bool sublattice_matches_matroid(const Matroid& m, const UpperSublattice& s, const Matroid& other) {
  Matroid simple = other.simplify();
  const auto& levels = simple.flat_lattice().by_rank;
  const int tatoms = levels.size() > 1 ? static_cast<int>(levels[1].size()) : 0;
  if (static_cast<int>(s.atoms.size()) != tatoms) return false;
  return family_isomorphic(atomset_family_of_sublattice(m, s.bottom, s.atoms),
                           atomset_family(simple), tatoms);
}

EmbeddedMinor realize_upper_sublattice(const Matroid& m, const UpperSublattice& s) {
  // lexicographically least independent set spanning the bottom flat
  SetMask contract = 0;
  for (int e : mask_to_vec(s.bottom)) {
    SetMask cand = contract | (SetMask(1) << e);
    if (m.independent(cand)) contract = cand;
    if (m.rank_of(contract) == m.rank_of(s.bottom)) break;
  }
  SetMask keep = contract;
  for (int e = 0; e < m.n(); ++e) {
    SetMask bit = SetMask(1) << e;
    if ((contract & bit) || (s.bottom & bit)) continue;
    SetMask atom = m.closure(s.bottom | bit);
    if (std::find(s.atoms.begin(), s.atoms.end(), atom) != s.atoms.end()) keep |= bit;
  }
  SetMask del = m.ground() & ~keep;
  return make_minor(m, del, contract);
}

}  // namespace foundry
