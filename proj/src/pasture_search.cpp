#include "foundry/pasture.hpp"

#include <algorithm>
#include <map>
#include <unordered_map>

namespace foundry {

namespace {

// Solve a * x = b over the integers; columns of a generate the lattice.
std::optional<IntVector> solve_lattice(const IntMatrix& a, const IntVector& b) {
  SmithResult s = smith_normal_form(a);
  IntVector ub = s.u * b;
  IntVector y = IntVector::Zero(a.cols());
  const Eigen::Index dm = std::min(s.d.rows(), s.d.cols());
  for (Eigen::Index i = 0; i < ub.size(); ++i) {
    const Int& d = (i < dm) ? s.d(i, i) : Int(0);
    if (d == 0) {
      if (ub(i) != 0) return std::nullopt;
    } else {
      if (ub(i) % d != 0) return std::nullopt;
      if (i < y.size()) y(i) = ub(i) / d;
    }
  }
  return IntVector(s.v * y);
}

struct Structure {
  const Pasture* p = nullptr;
  std::vector<IntVector> elems;  // fundamental elements, sorted by serialization
  std::unordered_map<std::string, int> elem_index;
  struct Hex {
    std::vector<std::pair<int, int>> pairs;
  };
  std::vector<Hex> hexes;
  std::vector<std::vector<std::pair<int, int>>> occ;  // elem -> (hex, pair slot)
  std::vector<std::string> elem_profile;
  std::vector<std::string> hex_profile;

  // expresses each canonical generator over (elems..., eps); empty when the
  // pasture is not generated by fundamental elements and eps
  std::vector<IntVector> solutions;
  bool generated = false;

  // a generating subset of fundamental elements, and for every fundamental
  // element an expression over (gen_set, eps) modulo torsion
  std::vector<int> gen_set;
  struct Expr {
    std::vector<std::pair<int, Int>> terms;  // (position in gen_set, coeff)
    Int eps_coeff = 0;
  };
  std::vector<Expr> exprs;
};

Structure build_structure(const Pasture& p) {
  Structure st;
  st.p = &p;
  for (const PastureElement& e : p.fundamental_elements()) {
    st.elem_index[serialize_exponents(e.coords)] = static_cast<int>(st.elems.size());
    st.elems.push_back(e.coords);
  }
  st.occ.resize(st.elems.size());
  for (const Hexagon& h : p.hexagons()) {
    Structure::Hex hx;
    for (const auto& [x, y] : h.pairs) {
      int xi = st.elem_index.at(serialize_exponents(x));
      int yi = st.elem_index.at(serialize_exponents(y));
      st.occ[static_cast<size_t>(xi)].emplace_back(static_cast<int>(st.hexes.size()),
                                                   static_cast<int>(hx.pairs.size()));
      hx.pairs.emplace_back(xi, yi);
    }
    st.hexes.push_back(std::move(hx));
  }

  const FpAbelianGroup& g = p.unit_group();
  std::vector<std::string> orders(st.elems.size());
  for (size_t i = 0; i < st.elems.size(); ++i) orders[i] = g.element_order(st.elems[i]).get_str();

  std::vector<int> occ_count(st.elems.size(), 0);
  for (size_t i = 0; i < st.elems.size(); ++i)
    occ_count[i] = static_cast<int>(st.occ[i].size());

  st.elem_profile.resize(st.elems.size());
  for (size_t i = 0; i < st.elems.size(); ++i)
    st.elem_profile[i] = orders[i] + "#" + std::to_string(occ_count[i]);

  st.hex_profile.resize(st.hexes.size());
  for (size_t hi = 0; hi < st.hexes.size(); ++hi) {
    std::vector<std::string> parts;
    for (auto& [x, y] : st.hexes[hi].pairs)
      parts.push_back(st.elem_profile[static_cast<size_t>(x)] + "," +
                      st.elem_profile[static_cast<size_t>(y)]);
    std::sort(parts.begin(), parts.end());
    std::string prof = std::to_string(st.hexes[hi].pairs.size()) + ";";
    for (auto& s : parts) prof += s + ";";
    st.hex_profile[hi] = prof;
  }

  // solver: canonical generators over fundamental elements + eps (+ torsion)
  const int cd = g.canon_dim();
  const int cols = static_cast<int>(st.elems.size()) + 1 + g.torsion_rank();
  IntMatrix a = IntMatrix::Zero(cd, cols);
  for (size_t j = 0; j < st.elems.size(); ++j) a.col(static_cast<Eigen::Index>(j)) = st.elems[j];
  a.col(static_cast<Eigen::Index>(st.elems.size())) = p.epsilon().coords;
  for (int t = 0; t < g.torsion_rank(); ++t)
    a(t, static_cast<Eigen::Index>(st.elems.size()) + 1 + t) =
        g.invariant_factors()[static_cast<size_t>(t)];

  st.generated = true;
  for (int i = 0; i < cd; ++i) {
    IntVector b = IntVector::Zero(cd);
    b(i) = 1;
    auto sol = solve_lattice(a, b);
    if (!sol) {
      st.generated = false;
      break;
    }
    st.solutions.push_back(std::move(*sol));
  }
  if (!st.generated) return st;

  // greedy generating subset: add an element only when it is not already
  // expressible over the chosen ones (plus eps and torsion)
  auto lattice_of = [&](const std::vector<int>& chosen) {
    IntMatrix l = IntMatrix::Zero(cd, static_cast<Eigen::Index>(chosen.size()) + 1 +
                                          g.torsion_rank());
    for (size_t j = 0; j < chosen.size(); ++j)
      l.col(static_cast<Eigen::Index>(j)) = st.elems[static_cast<size_t>(chosen[j])];
    l.col(static_cast<Eigen::Index>(chosen.size())) = p.epsilon().coords;
    for (int t = 0; t < g.torsion_rank(); ++t)
      l(t, static_cast<Eigen::Index>(chosen.size()) + 1 + t) =
          g.invariant_factors()[static_cast<size_t>(t)];
    return l;
  };
  for (size_t j = 0; j < st.elems.size(); ++j) {
    if (solve_lattice(lattice_of(st.gen_set), st.elems[j])) continue;
    st.gen_set.push_back(static_cast<int>(j));
  }
  IntMatrix gen_lat = lattice_of(st.gen_set);
  st.exprs.resize(st.elems.size());
  for (size_t j = 0; j < st.elems.size(); ++j) {
    auto sol = solve_lattice(gen_lat, st.elems[j]);
    if (!sol) throw VerificationError("generating set failed to express an element");
    Structure::Expr e;
    for (size_t t = 0; t < st.gen_set.size(); ++t)
      if ((*sol)(static_cast<Eigen::Index>(t)) != 0)
        e.terms.emplace_back(static_cast<int>(t), (*sol)(static_cast<Eigen::Index>(t)));
    e.eps_coeff = (*sol)(static_cast<Eigen::Index>(st.gen_set.size()));
    st.exprs[j] = std::move(e);
  }
  return st;
}

// The ordered six pairs spanned by a fundamental pair (x, y).
std::vector<std::pair<IntVector, IntVector>> six_pairs(const Pasture& p, const IntVector& x,
                                                       const IntVector& y) {
  const FpAbelianGroup& g = p.unit_group();
  IntVector eps = p.epsilon().coords;
  IntVector ix = g.canon_neg(x), iy = g.canon_neg(y);
  IntVector a = g.reduce(eps + y - x);  // -y/x
  IntVector b = g.reduce(eps + x - y);  // -x/y
  return {{x, y}, {y, x}, {ix, a}, {a, ix}, {iy, b}, {b, iy}};
}

struct SearchState {
  std::vector<int> elem_img;  // P elem -> Q elem or -1
  std::vector<int> elem_pre;  // Q elem -> P elem or -1
  std::vector<int> hex_img;   // P hex -> Q hex or -1
  std::vector<bool> hex_used;
};

class IsoSearch {
 public:
  IsoSearch(const Pasture& p, const Pasture& q, const Structure& sp, const Structure& sq,
            Budget& budget, bool find_all)
      : p_(p), q_(q), sp_(sp), sq_(sq), budget_(budget), find_all_(find_all) {
    state_.elem_img.assign(sp_.elems.size(), -1);
    state_.elem_pre.assign(sq_.elems.size(), -1);
    state_.hex_img.assign(sp_.hexes.size(), -1);
    state_.hex_used.assign(sq_.hexes.size(), false);
  }

  std::vector<PastureMorphism> run() {
    if (sp_.elems.size() != sq_.elems.size() || sp_.hexes.size() != sq_.hexes.size())
      return {};
    auto sorted = [](std::vector<std::string> v) {
      std::sort(v.begin(), v.end());
      return v;
    };
    if (sorted(sp_.elem_profile) != sorted(sq_.elem_profile)) return {};
    if (sorted(sp_.hex_profile) != sorted(sq_.hex_profile)) return {};
    rec();
    return std::move(found_);
  }

 private:
  bool done() const { return !find_all_ && !found_.empty(); }

  // assign img with trail; returns false on conflict
  bool assign_elem(int pe, int qe, std::vector<std::pair<int, int>>& trail) {
    if (state_.elem_img[static_cast<size_t>(pe)] == qe) return true;
    if (state_.elem_img[static_cast<size_t>(pe)] != -1) return false;
    if (state_.elem_pre[static_cast<size_t>(qe)] != -1) return false;
    if (sp_.elem_profile[static_cast<size_t>(pe)] != sq_.elem_profile[static_cast<size_t>(qe)])
      return false;
    state_.elem_img[static_cast<size_t>(pe)] = qe;
    state_.elem_pre[static_cast<size_t>(qe)] = pe;
    trail.emplace_back(pe, qe);
    return true;
  }

  void undo(const std::vector<std::pair<int, int>>& trail, int hex, int qhex) {
    for (auto& [pe, qe] : trail) {
      state_.elem_img[static_cast<size_t>(pe)] = -1;
      state_.elem_pre[static_cast<size_t>(qe)] = -1;
    }
    if (hex >= 0) {
      state_.hex_img[static_cast<size_t>(hex)] = -1;
      state_.hex_used[static_cast<size_t>(qhex)] = false;
    }
  }

  // map hexagon ph via aligning P pair (px,py) -> Q pair (qx,qy)
  bool map_hexagon(int ph, int qh, const std::pair<int, int>& ppair,
                   const std::pair<int, int>& qpair, std::vector<std::pair<int, int>>& trail) {
    auto pp = six_pairs(p_, sp_.elems[static_cast<size_t>(ppair.first)],
                        sp_.elems[static_cast<size_t>(ppair.second)]);
    auto qq = six_pairs(q_, sq_.elems[static_cast<size_t>(qpair.first)],
                        sq_.elems[static_cast<size_t>(qpair.second)]);
    for (size_t k = 0; k < pp.size(); ++k) {
      auto pit = sp_.elem_index.find(serialize_exponents(pp[k].first));
      auto qit = sq_.elem_index.find(serialize_exponents(qq[k].first));
      if (pit == sp_.elem_index.end() || qit == sq_.elem_index.end()) return false;
      if (!assign_elem(pit->second, qit->second, trail)) return false;
    }
    state_.hex_img[static_cast<size_t>(ph)] = qh;
    state_.hex_used[static_cast<size_t>(qh)] = true;
    return propagate(trail);
  }

  // force the image of every element whose expression over the generating
  // subset is fully assigned; fail on any inconsistency
  bool propagate(std::vector<std::pair<int, int>>& trail) {
    const FpAbelianGroup& h = q_.unit_group();
    bool changed = true;
    while (changed) {
      changed = false;
      for (size_t j = 0; j < sp_.elems.size(); ++j) {
        const Structure::Expr& e = sp_.exprs[j];
        bool ready = true;
        for (auto& [pos, coeff] : e.terms) {
          int sj = sp_.gen_set[static_cast<size_t>(pos)];
          if (state_.elem_img[static_cast<size_t>(sj)] == -1) {
            ready = false;
            break;
          }
        }
        if (!ready) continue;
        IntVector w = h.canon_zero();
        for (auto& [pos, coeff] : e.terms) {
          int sj = sp_.gen_set[static_cast<size_t>(pos)];
          int qi = state_.elem_img[static_cast<size_t>(sj)];
          w += sq_.elems[static_cast<size_t>(qi)] * coeff;
        }
        if (e.eps_coeff != 0) w += q_.epsilon().coords * e.eps_coeff;
        w = h.reduce(std::move(w));
        if (state_.elem_img[j] != -1) {
          const IntVector& have = sq_.elems[static_cast<size_t>(state_.elem_img[j])];
          if (!h.canon_is_zero(h.canon_sub(w, have))) return false;
          continue;
        }
        auto qit = sq_.elem_index.find(serialize_exponents(w));
        if (qit == sq_.elem_index.end()) return false;
        if (!assign_elem(static_cast<int>(j), qit->second, trail)) return false;
        changed = true;
      }
    }
    return true;
  }

  void rec() {
    if (done()) return;
    budget_.tick("pasture_iso_search");
    // next hexagon: prefer one with a mapped element
    int next = -1;
    int anchor_elem = -1;
    for (size_t h = 0; h < sp_.hexes.size() && next < 0; ++h) {
      if (state_.hex_img[h] != -1) continue;
      for (auto& [x, y] : sp_.hexes[h].pairs) {
        if (state_.elem_img[static_cast<size_t>(x)] != -1) {
          next = static_cast<int>(h);
          anchor_elem = x;
          break;
        }
      }
    }
    if (next < 0) {
      for (size_t h = 0; h < sp_.hexes.size(); ++h)
        if (state_.hex_img[h] == -1) {
          next = static_cast<int>(h);
          break;
        }
    }
    if (next < 0) {
      finalize();
      return;
    }

    const auto& hx = sp_.hexes[static_cast<size_t>(next)];
    if (anchor_elem >= 0) {
      // pair of this hexagon anchored at the mapped element
      std::pair<int, int> ppair{-1, -1};
      for (auto& pr : hx.pairs)
        if (pr.first == anchor_elem) {
          ppair = pr;
          break;
        }
      const int qe = state_.elem_img[static_cast<size_t>(anchor_elem)];
      for (auto& [qh, slot] : sq_.occ[static_cast<size_t>(qe)]) {
        if (state_.hex_used[static_cast<size_t>(qh)]) continue;
        if (sq_.hex_profile[static_cast<size_t>(qh)] !=
            sp_.hex_profile[static_cast<size_t>(next)])
          continue;
        std::vector<std::pair<int, int>> trail;
        if (map_hexagon(next, qh, ppair, sq_.hexes[static_cast<size_t>(qh)].pairs[static_cast<size_t>(slot)],
                        trail)) {
          rec();
        }
        undo(trail, next, qh);
        if (done()) return;
      }
    } else {
      for (size_t qh = 0; qh < sq_.hexes.size(); ++qh) {
        if (state_.hex_used[qh]) continue;
        if (sq_.hex_profile[qh] != sp_.hex_profile[static_cast<size_t>(next)]) continue;
        for (auto& qpair : sq_.hexes[qh].pairs) {
          std::vector<std::pair<int, int>> trail;
          if (map_hexagon(next, static_cast<int>(qh), hx.pairs.front(), qpair, trail)) {
            rec();
          }
          undo(trail, next, static_cast<int>(qh));
          if (done()) return;
        }
      }
    }
  }

  void finalize() {
    const FpAbelianGroup& g = p_.unit_group();
    const FpAbelianGroup& h = q_.unit_group();
    PastureMorphism f;
    f.source = p_;
    f.target = q_;
    const int m = static_cast<int>(sp_.elems.size());
    for (int i = 0; i < g.canon_dim(); ++i) {
      const IntVector& sol = sp_.solutions[static_cast<size_t>(i)];
      IntVector img = h.canon_zero();
      for (int j = 0; j < m; ++j) {
        if (sol(j) == 0) continue;
        img += sq_.elems[static_cast<size_t>(state_.elem_img[static_cast<size_t>(j)])] * sol(j);
      }
      if (sol(m) != 0) img += q_.epsilon().coords * sol(m);
      f.images.push_back(h.reduce(std::move(img)));
    }
    if (!is_morphism(f)) return;
    // felem images consistent with the group map
    for (int j = 0; j < m; ++j) {
      PastureElement fx = apply(f, PastureElement{false, sp_.elems[static_cast<size_t>(j)]});
      if (!q_.element_equal(
              fx, PastureElement{false,
                                 sq_.elems[static_cast<size_t>(state_.elem_img[static_cast<size_t>(j)])]}))
        return;
    }
    // bijective: surjective endomorphism of a noetherian group is injective,
    // so it suffices that the images generate the target
    std::vector<SparseRow> rows;
    for (const IntVector& img : f.images) {
      SparseRow r;
      for (Eigen::Index i = 0; i < img.size(); ++i)
        if (img(i) != 0) r.emplace_back(static_cast<int>(i), img(i));
      rows.push_back(std::move(r));
    }
    for (int t = 0; t < h.torsion_rank(); ++t)
      rows.push_back({{t, h.invariant_factors()[static_cast<size_t>(t)]}});
    FpAbelianGroup quot(h.canon_dim(), std::move(rows));
    if (quot.canon_dim() != 0) return;
    // hexagon sets must correspond bijectively; counts match and distinct
    // orbits stay distinct under a unit-group isomorphism
    for (const auto& other : found_)
      if (morphism_equal(f, other)) return;
    found_.push_back(std::move(f));
  }

  const Pasture& p_;
  const Pasture& q_;
  const Structure& sp_;
  const Structure& sq_;
  Budget& budget_;
  bool find_all_;
  SearchState state_;
  std::vector<PastureMorphism> found_;
};

std::vector<PastureMorphism> iso_search(const Pasture& p, const Pasture& q, Budget& budget,
                                        bool find_all) {
  if (!(p.numerical_type() == q.numerical_type())) return {};
  Structure sp = build_structure(p);
  Structure sq = build_structure(q);
  if (!sp.generated)
    throw PreconditionError("pasture is not generated by its fundamental elements and -1");
  if (!sq.generated)
    throw PreconditionError("pasture is not generated by its fundamental elements and -1");
  IsoSearch srch(p, q, sp, sq, budget, find_all);
  return srch.run();
}

}  // namespace

std::vector<PastureMorphism> automorphisms(const Pasture& p, Budget& budget) {
  std::vector<PastureMorphism> out = iso_search(p, p, budget, /*find_all=*/true);
  std::sort(out.begin(), out.end(), [](const PastureMorphism& a, const PastureMorphism& b) {
    std::string sa, sb;
    for (const auto& v : a.images) sa += serialize_exponents(v);
    for (const auto& v : b.images) sb += serialize_exponents(v);
    return sa < sb;
  });
  return out;
}

std::optional<PastureMorphism> find_isomorphism(const Pasture& p, const Pasture& q,
                                                Budget& budget) {
  std::vector<PastureMorphism> out = iso_search(p, q, budget, /*find_all=*/false);
  if (out.empty()) return std::nullopt;
  return std::move(out.front());
}

IdentifyResult identify(const Pasture& p, Budget& budget) {
  IdentifyResult res;
  for (const std::string& name : pasture_catalog_names()) {
    Pasture q = named_pasture(name);
    if (!(p.numerical_type() == q.numerical_type())) continue;
    try {
      auto witness = find_isomorphism(p, q, budget);
      if (witness) {
        res.name = name;
        res.witness = std::move(witness);
        return res;
      }
    } catch (const BudgetExceeded&) {
      res.budget_exhausted = true;
    }
  }
  return res;
}

}  // namespace foundry
