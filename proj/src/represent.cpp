#include "foundry/represent.hpp"

#include <algorithm>
#include <functional>
#include <set>

namespace foundry {

PastureElement GPFunction::value_of(SetMask sorted_set) const {
  const auto& bs = matroid.bases();
  auto it = std::lower_bound(bs.begin(), bs.end(), sorted_set);
  if (it == bs.end() || *it != sorted_set) return PastureElement::zero_elem();
  return values[static_cast<size_t>(it - bs.begin())];
}

namespace {

struct PluckerRelation {
  SetMask s12, s34, s13, s24, s14, s23;  // the three products' supports
};

std::vector<PluckerRelation> plucker_relations(const Matroid& m) {
  std::vector<PluckerRelation> rels;
  const int r = m.rank();
  if (r < 2) return rels;
  std::vector<int> idx(static_cast<size_t>(r - 2));
  std::function<void(SetMask)> with_j = [&](SetMask J) {
    std::vector<int> rest;
    for (int e = 0; e < m.n(); ++e)
      if (!((J >> e) & 1)) rest.push_back(e);
    const size_t k = rest.size();
    for (size_t i1 = 0; i1 < k; ++i1)
      for (size_t i2 = i1 + 1; i2 < k; ++i2)
        for (size_t i3 = i2 + 1; i3 < k; ++i3)
          for (size_t i4 = i3 + 1; i4 < k; ++i4) {
            auto b = [&](size_t x, size_t y) {
              return J | (SetMask(1) << rest[x]) | (SetMask(1) << rest[y]);
            };
            PluckerRelation rel{b(i1, i2), b(i3, i4), b(i1, i3), b(i2, i4), b(i1, i4), b(i2, i3)};
            // skip relations in which every product vanishes
            bool any = (m.is_basis(rel.s12) && m.is_basis(rel.s34)) ||
                       (m.is_basis(rel.s13) && m.is_basis(rel.s24)) ||
                       (m.is_basis(rel.s14) && m.is_basis(rel.s23));
            if (any) rels.push_back(rel);
          }
  };
  std::function<void(int, int, SetMask)> rec = [&](int pos, int start, SetMask cur) {
    if (pos == r - 2) {
      with_j(cur);
      return;
    }
    for (int e = start; e < m.n(); ++e) rec(pos + 1, e + 1, cur | (SetMask(1) << e));
  };
  rec(0, 0, 0);
  return rels;
}

bool relation_holds(const Pasture& p, const GPFunction& f, const PluckerRelation& rel) {
  auto prod = [&](SetMask x, SetMask y) -> PastureElement {
    PastureElement a = f.value_of(x);
    if (a.zero) return a;
    PastureElement b = f.value_of(y);
    if (b.zero) return b;
    return p.mul(a, b);
  };
  PastureElement t1 = prod(rel.s12, rel.s34);
  PastureElement t2 = prod(rel.s13, rel.s24);
  PastureElement t3 = prod(rel.s14, rel.s23);
  return p.null_term(t1, p.neg(t2), t3);
}

}  // namespace

bool verify_gp(const GPFunction& f) {
  if (f.values.size() != f.matroid.bases().size())
    throw PreconditionError("GP function must assign one value per basis");
  for (const PastureElement& v : f.values)
    if (v.zero) throw PreconditionError("GP function vanishes on a basis");
  for (const PluckerRelation& rel : plucker_relations(f.matroid))
    if (!relation_holds(f.target, f, rel)) return false;
  return true;
}

std::vector<GPFunction> enumerate_gp(const Matroid& m, const Pasture& p, Budget& budget) {
  if (!p.unit_group().finite()) throw PreconditionError("GP enumeration needs a finite target");
  const auto& bases = m.bases();
  std::vector<IntVector> units = p.unit_group().all_elements();

  // relations indexed by the last basis they touch, for early pruning
  std::vector<PluckerRelation> rels = plucker_relations(m);
  auto basis_index = [&](SetMask s) -> int {
    auto it = std::lower_bound(bases.begin(), bases.end(), s);
    if (it == bases.end() || *it != s) return -1;
    return static_cast<int>(it - bases.begin());
  };
  std::vector<std::vector<PluckerRelation>> by_last(bases.size());
  for (const auto& rel : rels) {
    int last = -1;
    for (SetMask s : {rel.s12, rel.s34, rel.s13, rel.s24, rel.s14, rel.s23}) {
      int b = basis_index(s);
      last = std::max(last, b);
    }
    if (last >= 0) by_last[static_cast<size_t>(last)].push_back(rel);
  }

  std::vector<GPFunction> out;
  GPFunction cur{m, p, std::vector<PastureElement>(bases.size(), PastureElement::zero_elem())};
  std::function<void(size_t)> rec = [&](size_t pos) {
    if (pos == bases.size()) {
      out.push_back(cur);
      return;
    }
    for (const IntVector& u : units) {
      budget.tick("enumerate_gp");
      cur.values[pos] = PastureElement{false, u};
      bool ok = true;
      for (const auto& rel : by_last[pos])
        if (!relation_holds(p, cur, rel)) {
          ok = false;
          break;
        }
      if (ok) rec(pos + 1);
    }
    cur.values[pos] = PastureElement::zero_elem();
  };
  rec(0);
  return out;
}

namespace {

// Canonical representative of a rescaling orbit.  The action shifts the value
// of basis B by d + sum of t_e over e in B, independently in each coordinate
// of the target's unit group; so per coordinate the orbit is a coset of the
// column space of the basis-incidence matrix over Z/d_i.  Reducing against
// the Smith form of that matrix (precomputed once per matroid) yields a
// canonical coset representative.
struct OrbitNormalizer {
  IntMatrix u;             // row transform of the incidence matrix
  std::vector<Int> diag;   // Smith diagonal, padded with zeros

  explicit OrbitNormalizer(const Matroid& m) {
    const auto& bases = m.bases();
    IntMatrix a = IntMatrix::Zero(static_cast<Eigen::Index>(bases.size()), m.n() + 1);
    for (size_t bi = 0; bi < bases.size(); ++bi) {
      a(static_cast<Eigen::Index>(bi), 0) = 1;
      for (int e : mask_to_vec(bases[bi])) a(static_cast<Eigen::Index>(bi), e + 1) = 1;
    }
    SmithResult s = smith_normal_form(a);
    u = std::move(s.u);
    diag.assign(static_cast<size_t>(a.rows()), 0);
    const Eigen::Index dm = std::min(s.d.rows(), s.d.cols());
    for (Eigen::Index i = 0; i < dm; ++i) diag[static_cast<size_t>(i)] = s.d(i, i);
  }

  std::string key(const Pasture& p, const std::vector<PastureElement>& values) const {
    const FpAbelianGroup& g = p.unit_group();
    const size_t b = values.size();
    std::string out;
    for (int coord = 0; coord < g.canon_dim(); ++coord) {
      const Int& mod = g.invariant_factors()[static_cast<size_t>(coord)];
      IntVector v(static_cast<Eigen::Index>(b));
      for (size_t i = 0; i < b; ++i) v(static_cast<Eigen::Index>(i)) = values[i].coords(coord);
      IntVector w = u * v;
      for (size_t j = 0; j < b; ++j) {
        Int gcd_jd;
        mpz_gcd(gcd_jd.get_mpz_t(), diag[j].get_mpz_t(), mod.get_mpz_t());
        Int& x = w(static_cast<Eigen::Index>(j));
        mpz_fdiv_r(x.get_mpz_t(), x.get_mpz_t(), gcd_jd.get_mpz_t());
      }
      out += serialize_exponents(w);
    }
    return out;
  }
};

}  // namespace

RescalingClassCount rescaling_classes(const Matroid& m, const Pasture& p,
                                      const std::string& target_name, Budget& budget) {
  if (!p.unit_group().finite())
    throw PreconditionError("rescaling classes need a finite target");
  std::vector<GPFunction> all = enumerate_gp(m, p, budget);
  OrbitNormalizer norm(m);
  std::set<std::string> orbits;
  for (const GPFunction& f : all) {
    budget.tick("rescaling_classes");
    orbits.insert(norm.key(p, f.values));
  }
  return RescalingClassCount{m, target_name, static_cast<long>(orbits.size())};
}

bool is_representable(const Matroid& m, const Pasture& p, Budget& budget) {
  FoundationReport rep = grs_presentation(m);
  return hom_exists(rep.pasture, p, budget);
}

std::vector<bool> representability_row(const Pasture& p, const std::vector<std::string>& targets,
                                       Budget& budget) {
  std::vector<bool> out;
  out.reserve(targets.size());
  for (const std::string& t : targets) out.push_back(hom_exists(p, named_pasture(t), budget));
  return out;
}

RepresentabilityTable representability_table(const std::vector<std::string>& row_pastures,
                                             const std::vector<std::string>& targets,
                                             Budget& budget) {
  RepresentabilityTable table;
  table.rows = row_pastures;
  table.columns = targets;
  for (const std::string& r : row_pastures)
    table.cells.push_back(representability_row(named_pasture(r), targets, budget));
  return table;
}

std::string RepresentabilityTable::to_tsv() const {
  std::string out = "pasture";
  for (const auto& c : columns) out += "\t" + c;
  out += "\n";
  for (size_t i = 0; i < rows.size(); ++i) {
    out += rows[i];
    for (bool b : cells[i]) out += b ? "\t1" : "\t0";
    out += "\n";
  }
  return out;
}

}  // namespace foundry
