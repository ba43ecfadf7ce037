#include "foundry/abgroup.hpp"

#include <algorithm>
#include <cstdlib>
#include <map>
#include <set>
#include <unordered_map>
#include <unordered_set>

namespace foundry {

std::uint64_t Budget::default_cap() {
  if (const char* env = std::getenv("FOUNDRY_BUDGET")) {
    char* end = nullptr;
    unsigned long long v = std::strtoull(env, &end, 10);
    if (end && *end == '\0' && v > 0) return v;
  }
  return 100'000'000ull;
}

SparseRow sparse_normalize(SparseRow row) {
  std::sort(row.begin(), row.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  SparseRow out;
  for (auto& [idx, val] : row) {
    if (!out.empty() && out.back().first == idx)
      out.back().second += val;
    else
      out.emplace_back(idx, val);
  }
  out.erase(std::remove_if(out.begin(), out.end(),
                           [](const auto& e) { return e.second == 0; }),
            out.end());
  return out;
}

std::string serialize_exponents(const IntVector& v) {
  std::string out;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const Int& x = v(i);
    int s = sgn(x);
    out.push_back(static_cast<char>(s + 1));  // 0=neg, 1=zero, 2=pos
    if (s != 0) {
      Int a = abs(x);
      std::string mag = a.get_str(16);
      if (mag.size() > 254) throw std::overflow_error("exponent too large to serialize");
      out.push_back(static_cast<char>(mag.size()));
      out += mag;
    }
  }
  return out;
}

namespace {

// In-place Smith reduction.  Maintains u (row ops), uinv (inverse row ops,
// as column ops on uinv), and v (column ops) on demand.
struct SmithEngine {
  IntMatrix a;
  bool want_u, want_uinv, want_v;
  IntMatrix u, uinv, v;

  SmithEngine(IntMatrix m, bool wu, bool wui, bool wv)
      : a(std::move(m)), want_u(wu), want_uinv(wui), want_v(wv) {
    if (want_u) u = IntMatrix::Identity(a.rows(), a.rows());
    if (want_uinv) uinv = IntMatrix::Identity(a.rows(), a.rows());
    if (want_v) v = IntMatrix::Identity(a.cols(), a.cols());
  }

  void swap_rows(Eigen::Index i, Eigen::Index j) {
    if (i == j) return;
    a.row(i).swap(a.row(j));
    if (want_u) u.row(i).swap(u.row(j));
    if (want_uinv) uinv.col(i).swap(uinv.col(j));
  }
  void swap_cols(Eigen::Index i, Eigen::Index j) {
    if (i == j) return;
    a.col(i).swap(a.col(j));
    if (want_v) v.col(i).swap(v.col(j));
  }
  // row j += c * row i
  void add_row(Eigen::Index j, Eigen::Index i, const Int& c) {
    for (Eigen::Index k = 0; k < a.cols(); ++k) a(j, k) += c * a(i, k);
    if (want_u)
      for (Eigen::Index k = 0; k < u.cols(); ++k) u(j, k) += c * u(i, k);
    if (want_uinv)
      for (Eigen::Index k = 0; k < uinv.rows(); ++k) uinv(k, i) -= c * uinv(k, j);
  }
  // col j += c * col i
  void add_col(Eigen::Index j, Eigen::Index i, const Int& c) {
    for (Eigen::Index k = 0; k < a.rows(); ++k) a(k, j) += c * a(k, i);
    if (want_v)
      for (Eigen::Index k = 0; k < v.rows(); ++k) v(k, j) += c * v(k, i);
  }
  void negate_row(Eigen::Index i) {
    for (Eigen::Index k = 0; k < a.cols(); ++k) a(i, k) = -a(i, k);
    if (want_u)
      for (Eigen::Index k = 0; k < u.cols(); ++k) u(i, k) = -u(i, k);
    if (want_uinv)
      for (Eigen::Index k = 0; k < uinv.rows(); ++k) uinv(k, i) = -uinv(k, i);
  }

  void run() {
    const Eigen::Index m = a.rows(), n = a.cols();
    Eigen::Index k = 0;
    while (k < m && k < n) {
      // pivot: smallest nonzero absolute value, ties by lowest index
      Eigen::Index pi = -1, pj = -1;
      Int best;
      for (Eigen::Index i = k; i < m; ++i)
        for (Eigen::Index j = k; j < n; ++j) {
          if (a(i, j) == 0) continue;
          Int v2 = abs(a(i, j));
          if (pi < 0 || v2 < best) {
            best = v2;
            pi = i;
            pj = j;
          }
        }
      if (pi < 0) break;
      swap_rows(k, pi);
      swap_cols(k, pj);
      bool clean = true;
      for (Eigen::Index i = k + 1; i < m; ++i) {
        if (a(i, k) == 0) continue;
        Int q;
        mpz_fdiv_q(q.get_mpz_t(), a(i, k).get_mpz_t(), a(k, k).get_mpz_t());
        add_row(i, k, -q);
        if (a(i, k) != 0) clean = false;
      }
      for (Eigen::Index j = k + 1; j < n; ++j) {
        if (a(k, j) == 0) continue;
        Int q;
        mpz_fdiv_q(q.get_mpz_t(), a(k, j).get_mpz_t(), a(k, k).get_mpz_t());
        add_col(j, k, -q);
        if (a(k, j) != 0) clean = false;
      }
      if (!clean) continue;  // smaller remainders appeared; re-pick pivot
      // divisibility: fold any entry the pivot does not divide into col k
      bool redo = false;
      for (Eigen::Index i = k + 1; i < m && !redo; ++i)
        for (Eigen::Index j = k + 1; j < n && !redo; ++j)
          if (a(i, j) % a(k, k) != 0) {
            add_col(k, j, 1);
            redo = true;
          }
      if (redo) continue;
      if (a(k, k) < 0) negate_row(k);
      ++k;
    }
  }
};

}  // namespace

SmithResult smith_normal_form(const IntMatrix& a) {
  SmithEngine eng(a, /*wu=*/true, /*wui=*/false, /*wv=*/true);
  eng.run();
  return SmithResult{std::move(eng.u), std::move(eng.a), std::move(eng.v)};
}

FpAbelianGroup::FpAbelianGroup(int num_generators, std::vector<SparseRow> relations)
    : num_generators_(num_generators) {
  relations_.reserve(relations.size());
  for (auto& r : relations) {
    SparseRow n = sparse_normalize(std::move(r));
    for (auto& [idx, val] : n) {
      (void)val;
      if (idx < 0 || idx >= num_generators_)
        throw PreconditionError("relation index out of range");
    }
    if (!n.empty()) relations_.push_back(std::move(n));
  }
  canonicalize();
}

IntMatrix FpAbelianGroup::relations_matrix() const {
  IntMatrix m = IntMatrix::Zero(static_cast<Eigen::Index>(relations_.size()), num_generators_);
  for (size_t i = 0; i < relations_.size(); ++i)
    for (auto& [idx, val] : relations_[i]) m(static_cast<Eigen::Index>(i), idx) = val;
  return m;
}

void FpAbelianGroup::canonicalize() {
  const int g = num_generators_;
  // Phase A: sparse elimination on +-1 pivots.  Each step substitutes one
  // generator by a combination of the others (a unimodular change of basis),
  // which keeps the dense core small even for presentations with thousands
  // of generators.
  struct Sub {
    int var;
    SparseRow expr;  // var = expr over surviving variables (at record time)
  };
  std::vector<SparseRow> rows;
  {
    std::set<SparseRow> seen;
    for (const auto& r : relations_)
      if (seen.insert(r).second) rows.push_back(r);
  }
  std::vector<bool> row_dead(rows.size(), false);
  std::vector<std::set<int>> col_rows(g);
  for (size_t i = 0; i < rows.size(); ++i)
    for (auto& [idx, val] : rows[i]) col_rows[idx].insert(static_cast<int>(i));

  std::vector<Sub> subs;
  std::vector<bool> var_dead(g, false);

  auto pick = [&]() -> std::pair<int, int> {  // (row, var) or (-1,-1)
    long best_score = -1;
    int br = -1, bv = -1;
    for (size_t i = 0; i < rows.size(); ++i) {
      if (row_dead[i]) continue;
      for (auto& [idx, val] : rows[i]) {
        if (val != 1 && val != -1) continue;
        long score = static_cast<long>(rows[i].size() - 1) *
                     static_cast<long>(col_rows[idx].size() - 1);
        if (best_score < 0 || score < best_score) {
          best_score = score;
          br = static_cast<int>(i);
          bv = idx;
          if (best_score == 0) return {br, bv};
        }
      }
    }
    return {br, bv};
  };

  while (true) {
    auto [ri, var] = pick();
    if (ri < 0) break;
    // var = -sign * (rest of row)
    Int sign = 0;
    SparseRow expr;
    for (auto& [idx, val] : rows[ri])
      if (idx == var)
        sign = val;
      else
        expr.emplace_back(idx, val);
    for (auto& [idx, val] : expr) val = (sign > 0) ? Int(-val) : val;
    subs.push_back({var, expr});
    var_dead[var] = true;
    row_dead[ri] = true;
    for (auto& [idx, val] : rows[ri]) col_rows[idx].erase(ri);

    std::vector<int> touched(col_rows[var].begin(), col_rows[var].end());
    for (int rj : touched) {
      if (row_dead[rj]) continue;
      Int coeff = 0;
      for (auto& [idx, val] : rows[rj])
        if (idx == var) coeff = val;
      if (coeff == 0) continue;
      for (auto& [idx, val] : rows[rj]) col_rows[idx].erase(rj);
      SparseRow nr = rows[rj];
      for (auto& [idx, val] : expr) nr.emplace_back(idx, coeff * val);
      nr.erase(std::remove_if(nr.begin(), nr.end(),
                              [&](const auto& e) { return e.first == var; }),
               nr.end());
      nr = sparse_normalize(std::move(nr));
      rows[rj] = std::move(nr);
      if (rows[rj].empty()) {
        row_dead[rj] = true;
      } else {
        for (auto& [idx, val] : rows[rj]) col_rows[idx].insert(rj);
      }
    }
    col_rows[var].clear();
  }

  // Phase B: dense Smith form on the surviving core.
  std::vector<int> live;
  for (int j = 0; j < g; ++j)
    if (!var_dead[j]) live.push_back(j);
  std::unordered_map<int, int> live_pos;
  for (size_t j = 0; j < live.size(); ++j) live_pos[live[j]] = static_cast<int>(j);
  const int h = static_cast<int>(live.size());

  std::vector<SparseRow> core;
  {
    std::set<SparseRow> seen;
    for (size_t i = 0; i < rows.size(); ++i)
      if (!row_dead[i] && seen.insert(rows[i]).second) core.push_back(rows[i]);
  }
  // relation lattice as columns of an h x m matrix
  IntMatrix lat = IntMatrix::Zero(h, static_cast<Eigen::Index>(core.size()));
  for (size_t c = 0; c < core.size(); ++c)
    for (auto& [idx, val] : core[c]) lat(live_pos.at(idx), static_cast<Eigen::Index>(c)) = val;

  SmithEngine eng(std::move(lat), /*wu=*/true, /*wui=*/true, /*wv=*/false);
  eng.run();

  int s = 0;  // number of nonzero diagonal entries
  const Eigen::Index dm = std::min<Eigen::Index>(eng.a.rows(), eng.a.cols());
  for (Eigen::Index i = 0; i < dm; ++i)
    if (eng.a(i, i) != 0) ++s;

  // keep torsion coords (d >= 2) then free coords
  std::vector<int> keep;
  invariant_factors_.clear();
  for (int i = 0; i < s; ++i) {
    if (eng.a(i, i) >= 2) {
      invariant_factors_.push_back(eng.a(i, i));
      keep.push_back(i);
    }
  }
  for (int i = s; i < h; ++i) keep.push_back(i);
  free_rank_ = h - s;
  const int cd = static_cast<int>(keep.size());

  // projection on live vars, then compose with phase-A substitutions
  IntMatrix proj_live = IntMatrix::Zero(cd, h);
  for (int i = 0; i < cd; ++i) proj_live.row(i) = eng.u.row(keep[i]);

  // expr for every original generator over live variables (back substitution)
  std::vector<SparseRow> expr(g);
  for (int j = 0; j < g; ++j)
    if (!var_dead[j]) expr[j] = {{j, Int(1)}};
  for (auto it = subs.rbegin(); it != subs.rend(); ++it) {
    SparseRow acc;
    for (auto& [idx, val] : it->expr)
      for (auto& [idx2, val2] : expr[idx]) acc.emplace_back(idx2, val * val2);
    expr[it->var] = sparse_normalize(std::move(acc));
  }

  projection_ = IntMatrix::Zero(cd, g);
  for (int j = 0; j < g; ++j)
    for (auto& [lv, coef] : expr[j])
      for (int i = 0; i < cd; ++i) projection_(i, j) += proj_live(i, live_pos.at(lv)) * coef;

  section_ = IntMatrix::Zero(g, cd);
  for (int i = 0; i < cd; ++i)
    for (int l = 0; l < h; ++l) section_(live[l], i) = eng.uinv(l, keep[i]);
}

IntVector FpAbelianGroup::to_canonical(const IntVector& exponents) const {
  if (exponents.size() != num_generators_)
    throw PreconditionError("element dimension mismatch");
  return reduce(projection_ * exponents);
}

IntVector FpAbelianGroup::to_canonical_sparse(const SparseRow& row) const {
  IntVector c = IntVector::Zero(canon_dim());
  for (auto& [idx, val] : row) {
    if (idx < 0 || idx >= num_generators_) throw PreconditionError("element index out of range");
    for (int i = 0; i < canon_dim(); ++i) c(i) += projection_(i, idx) * val;
  }
  return reduce(std::move(c));
}

IntVector FpAbelianGroup::reduce(IntVector canon) const {
  if (canon.size() != canon_dim()) throw PreconditionError("canonical dimension mismatch");
  for (size_t i = 0; i < invariant_factors_.size(); ++i) {
    Int& x = canon(static_cast<Eigen::Index>(i));
    mpz_fdiv_r(x.get_mpz_t(), x.get_mpz_t(), invariant_factors_[i].get_mpz_t());
  }
  return canon;
}

bool FpAbelianGroup::canon_is_zero(const IntVector& a) const {
  for (Eigen::Index i = 0; i < a.size(); ++i)
    if (a(i) != 0) return false;
  return true;
}

bool FpAbelianGroup::element_equal(const GroupElement& a, const GroupElement& b) const {
  return canon_is_zero(canon_sub(to_canonical(a.exponents), to_canonical(b.exponents)));
}

Int FpAbelianGroup::order() const {
  if (!finite()) throw PreconditionError("group is infinite");
  Int n = 1;
  for (const Int& d : invariant_factors_) n *= d;
  return n;
}

std::vector<IntVector> FpAbelianGroup::all_elements() const {
  if (!finite()) throw PreconditionError("group is infinite");
  std::vector<IntVector> out;
  IntVector cur = canon_zero();
  const int k = torsion_rank();
  while (true) {
    out.push_back(cur);
    int i = k - 1;
    while (i >= 0) {
      cur(i) += 1;
      if (cur(i) < invariant_factors_[static_cast<size_t>(i)]) break;
      cur(i) = 0;
      --i;
    }
    if (i < 0) break;
  }
  return out;
}

Int FpAbelianGroup::element_order(const IntVector& canon) const {
  for (int i = torsion_rank(); i < canon_dim(); ++i)
    if (canon(i) != 0) return 0;
  Int ord = 1;
  for (int i = 0; i < torsion_rank(); ++i) {
    if (canon(i) == 0) continue;
    const Int& d = invariant_factors_[static_cast<size_t>(i)];
    Int gcd;
    mpz_gcd(gcd.get_mpz_t(), canon(i).get_mpz_t(), d.get_mpz_t());
    Int o = d / gcd;
    Int l;
    mpz_lcm(l.get_mpz_t(), ord.get_mpz_t(), o.get_mpz_t());
    ord = l;
  }
  return ord;
}

FpAbelianGroup FpAbelianGroup::quotient_group(const std::vector<SparseRow>& extra_relations) const {
  std::vector<SparseRow> all = relations_;
  for (const auto& r : extra_relations) all.push_back(r);
  return FpAbelianGroup(num_generators_, std::move(all));
}

std::vector<GroupHom> group_hom_enumerate(const FpAbelianGroup& g, const FpAbelianGroup& h,
                                          const HomConstraint& constraints, Budget& budget,
                                          bool first_only, const std::vector<int>* gen_order) {
  if (!h.finite()) throw PreconditionError("hom target must be finite");
  const int n = g.canon_dim();
  std::vector<IntVector> targets = h.all_elements();
  std::vector<int> order;
  if (gen_order) {
    order = *gen_order;
  } else {
    for (int i = 0; i < n; ++i) order.push_back(i);
  }

  std::vector<GroupHom> out;
  std::vector<std::optional<IntVector>> images(n);

  std::function<void(int)> rec = [&](int pos) {
    if (first_only && !out.empty()) return;
    if (pos == n) {
      GroupHom hom;
      hom.images.reserve(n);
      for (int i = 0; i < n; ++i) hom.images.push_back(*images[i]);
      out.push_back(std::move(hom));
      return;
    }
    const int gen = order[pos];
    const bool torsion = gen < g.torsion_rank();
    for (const IntVector& t : targets) {
      budget.tick("group_hom_enumerate");
      if (torsion) {
        // image order must divide the generator's invariant factor
        IntVector scaled = t * g.invariant_factors()[static_cast<size_t>(gen)];
        if (!h.canon_is_zero(h.reduce(std::move(scaled)))) continue;
      }
      images[gen] = t;
      if (!constraints || constraints(images, gen)) rec(pos + 1);
      images[gen].reset();
      if (first_only && !out.empty()) return;
    }
  };
  rec(0);
  return out;
}

}  // namespace foundry
