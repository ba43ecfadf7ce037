#include <doctest.h>

#include "foundry/abgroup.hpp"

#include <random>

using namespace foundry;

namespace {

IntMatrix mat(std::initializer_list<std::initializer_list<long>> rows) {
  IntMatrix m(static_cast<Eigen::Index>(rows.size()),
              static_cast<Eigen::Index>(rows.begin()->size()));
  Eigen::Index i = 0;
  for (auto& r : rows) {
    Eigen::Index j = 0;
    for (long x : r) m(i, j++) = x;
    ++i;
  }
  return m;
}

bool is_diagonal_with_chain(const IntMatrix& d) {
  for (Eigen::Index i = 0; i < d.rows(); ++i)
    for (Eigen::Index j = 0; j < d.cols(); ++j)
      if (i != j && d(i, j) != 0) return false;
  Eigen::Index m = std::min(d.rows(), d.cols());
  for (Eigen::Index i = 0; i + 1 < m; ++i) {
    if (d(i, i) < 0) return false;
    if (d(i + 1, i + 1) != 0 && d(i, i) == 0) return false;
    if (d(i, i) != 0 && d(i + 1, i + 1) % d(i, i) != 0) return false;
  }
  return true;
}

Int det(const IntMatrix& a) {
  // fraction-free Gaussian elimination (Bareiss)
  IntMatrix m = a;
  Eigen::Index n = m.rows();
  Int prev = 1;
  int sign = 1;
  for (Eigen::Index k = 0; k < n - 1; ++k) {
    if (m(k, k) == 0) {
      Eigen::Index p = -1;
      for (Eigen::Index i = k + 1; i < n; ++i)
        if (m(i, k) != 0) {
          p = i;
          break;
        }
      if (p < 0) return 0;
      m.row(k).swap(m.row(p));
      sign = -sign;
    }
    for (Eigen::Index i = k + 1; i < n; ++i)
      for (Eigen::Index j = k + 1; j < n; ++j)
        m(i, j) = (m(i, j) * m(k, k) - m(i, k) * m(k, j)) / prev;
    prev = m(k, k);
  }
  return sign > 0 ? m(n - 1, n - 1) : Int(-m(n - 1, n - 1));
}

void check_snf(const IntMatrix& a) {
  SmithResult r = smith_normal_form(a);
  CHECK(r.u * a * r.v == r.d);
  CHECK(is_diagonal_with_chain(r.d));
  CHECK(abs(det(r.u)) == 1);
  CHECK(abs(det(r.v)) == 1);
}

}  // namespace

TEST_CASE("smith normal form on pinned examples") {
  {
    IntMatrix a = mat({{2, 0}, {0, 3}});
    SmithResult r = smith_normal_form(a);
    CHECK(r.d == mat({{1, 0}, {0, 6}}));
    CHECK(r.u * a * r.v == r.d);
  }
  {
    IntMatrix a = mat({{0}});
    SmithResult r = smith_normal_form(a);
    CHECK(r.d == mat({{0}}));
    CHECK(r.u == mat({{1}}));
    CHECK(r.v == mat({{1}}));
  }
  {
    IntMatrix a = mat({{1, 0}, {0, 1}});
    SmithResult r = smith_normal_form(a);
    CHECK(r.d == mat({{1, 0}, {0, 1}}));
  }
}

TEST_CASE("smith normal form on random matrices") {
  std::mt19937 rng(12345);
  std::uniform_int_distribution<int> dim(1, 6), val(-9, 9);
  for (int trial = 0; trial < 1000; ++trial) {
    IntMatrix a(dim(rng), dim(rng));
    for (Eigen::Index i = 0; i < a.rows(); ++i)
      for (Eigen::Index j = 0; j < a.cols(); ++j) a(i, j) = val(rng);
    check_snf(a);
  }
}

TEST_CASE("canonicalize basic groups") {
  // <x, y | x^2> = Z/2 x Z
  FpAbelianGroup g(2, {{{0, 2}}});
  CHECK(g.invariant_factors() == std::vector<Int>{2});
  CHECK(g.free_rank() == 1);

  FpAbelianGroup free3(3, {});
  CHECK(free3.invariant_factors().empty());
  CHECK(free3.free_rank() == 3);
}

TEST_CASE("canonicalize invariant under generator permutation") {
  std::mt19937 rng(99);
  std::uniform_int_distribution<int> val(-3, 3);
  for (int trial = 0; trial < 50; ++trial) {
    int g = 4;
    std::vector<SparseRow> rel;
    for (int r = 0; r < 3; ++r) {
      SparseRow row;
      for (int j = 0; j < g; ++j) {
        int v = val(rng);
        if (v != 0) row.emplace_back(j, v);
      }
      rel.push_back(row);
    }
    FpAbelianGroup a(g, rel);
    std::vector<int> perm = {2, 0, 3, 1};
    std::vector<SparseRow> rel2;
    for (auto& row : rel) {
      SparseRow r2;
      for (auto& [idx, v] : row) r2.emplace_back(perm[static_cast<size_t>(idx)], v);
      rel2.push_back(r2);
    }
    FpAbelianGroup b(g, rel2);
    CHECK(a.invariant_factors() == b.invariant_factors());
    CHECK(a.free_rank() == b.free_rank());
  }
}

TEST_CASE("element equality in canonical coordinates") {
  FpAbelianGroup g(2, {{{0, 2}}});  // Z/2 x Z
  auto el = [](std::initializer_list<long> v) {
    GroupElement e;
    e.exponents = IntVector(static_cast<Eigen::Index>(v.size()));
    Eigen::Index i = 0;
    for (long x : v) e.exponents(i++) = x;
    return e;
  };
  CHECK(g.element_equal(el({1, 0}), el({3, 0})));
  CHECK_FALSE(g.element_equal(el({0, 1}), el({0, 2})));
  CHECK_THROWS_AS(g.element_equal(el({1, 0, 0}), el({1, 0})), PreconditionError);
}

TEST_CASE("element equality is an equivalence relation on samples") {
  FpAbelianGroup g(3, {{{0, 4}}, {{1, 2}, {2, -2}}});
  std::mt19937 rng(7);
  std::uniform_int_distribution<int> val(-5, 5);
  std::vector<GroupElement> sample;
  for (int i = 0; i < 12; ++i) {
    GroupElement e;
    e.exponents = IntVector(3);
    for (int j = 0; j < 3; ++j) e.exponents(j) = val(rng);
    sample.push_back(e);
  }
  for (auto& a : sample) CHECK(g.element_equal(a, a));
  for (auto& a : sample)
    for (auto& b : sample) {
      bool ab = g.element_equal(a, b);
      CHECK(ab == g.element_equal(b, a));
      if (!ab) continue;
      for (auto& c : sample)
        if (g.element_equal(b, c)) CHECK(g.element_equal(a, c));
    }
}

TEST_CASE("hom enumeration counts") {
  Budget budget;
  FpAbelianGroup z(1, {});
  FpAbelianGroup z2(1, {{{0, 2}}});
  FpAbelianGroup z3(1, {{{0, 3}}});
  CHECK(group_hom_enumerate(z, z3, nullptr, budget).size() == 3);
  CHECK(group_hom_enumerate(z2, z3, nullptr, budget).size() == 1);

  // Z/2 x Z^2 -> Z/3 (the unit group of F4): 3^2 choices for the free part
  FpAbelianGroup g(3, {{{0, 2}}});
  CHECK(group_hom_enumerate(g, z3, nullptr, budget).size() == 9);
}

TEST_CASE("hom count matches gcd closed form on samples") {
  Budget budget;
  std::mt19937 rng(21);
  std::uniform_int_distribution<int> dpick(2, 6);
  for (int trial = 0; trial < 20; ++trial) {
    int d1 = dpick(rng), d2 = dpick(rng);
    // G = Z/d1 x Z, H = Z/d2
    FpAbelianGroup g(2, {{{0, d1}}});
    FpAbelianGroup h(1, {{{0, d2}}});
    Int expect = gcd(Int(d1), Int(d2)) * d2;
    CHECK(Int(group_hom_enumerate(g, h, nullptr, budget).size()) == expect);
  }
}

TEST_CASE("quotient groups") {
  FpAbelianGroup z2free(2, {});
  FpAbelianGroup q = z2free.quotient_group({{{0, 1}, {1, -1}}});
  CHECK(q.free_rank() == 1);
  CHECK(q.invariant_factors().empty());

  // U units = Z/2 x Z^2; mod x = y gives Z/2 x Z
  FpAbelianGroup u(3, {{{0, 2}}});
  FpAbelianGroup uq = u.quotient_group({{{1, 1}, {2, -1}}});
  CHECK(uq.invariant_factors() == std::vector<Int>{2});
  CHECK(uq.free_rank() == 1);

  FpAbelianGroup same = u.quotient_group({});
  CHECK(same.invariant_factors() == u.invariant_factors());
  CHECK(same.free_rank() == u.free_rank());
}

TEST_CASE("budget is enforced") {
  Budget tiny(10);
  FpAbelianGroup g(3, {});
  FpAbelianGroup h(1, {{{0, 5}}});
  CHECK_THROWS_AS(group_hom_enumerate(g, h, nullptr, tiny), BudgetExceeded);
}
