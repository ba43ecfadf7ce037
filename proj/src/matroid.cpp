#include "foundry/matroid.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

namespace foundry {

std::vector<int> mask_to_vec(SetMask m) {
  std::vector<int> v;
  for (int i = 0; m; ++i, m >>= 1)
    if (m & 1) v.push_back(i);
  return v;
}

SetMask vec_to_mask(const std::vector<int>& v) {
  SetMask m = 0;
  for (int x : v) {
    if (x < 0 || x >= 32) throw ParseError("element out of range");
    m |= SetMask(1) << x;
  }
  return m;
}

std::vector<SetMask> FlatLattice::atoms_above(SetMask flat) const {
  std::vector<SetMask> out;
  for (auto& [lo, hi] : covers)
    if (lo == flat) out.push_back(hi);
  std::sort(out.begin(), out.end());
  return out;
}

Matroid Matroid::from_bases(int n, int r, std::vector<SetMask> bases) {
  if (n < 0 || n > 20) throw PreconditionError("ground set size out of range");
  if (r < 0 || r > n) throw PreconditionError("rank out of range");
  Matroid m;
  m.n_ = n;
  m.r_ = r;
  std::sort(bases.begin(), bases.end());
  bases.erase(std::unique(bases.begin(), bases.end()), bases.end());
  if (bases.empty()) throw PreconditionError("matroid needs at least one basis");
  for (SetMask b : bases) {
    if (popcount(b) != r) throw PreconditionError("basis of wrong size");
    if (b & ~m.ground()) throw PreconditionError("basis outside ground set");
  }
  m.bases_ = std::move(bases);
  m.validate_exchange();
  return m;
}

Matroid Matroid::from_bases_vec(int n, int r, const std::vector<std::vector<int>>& bases) {
  std::vector<SetMask> bs;
  bs.reserve(bases.size());
  for (auto& b : bases) bs.push_back(vec_to_mask(b));
  return from_bases(n, r, std::move(bs));
}

Matroid Matroid::from_nonbases(int n, int r, const std::vector<std::vector<int>>& nonbases) {
  std::set<SetMask> nb;
  for (auto& b : nonbases) {
    SetMask m = vec_to_mask(b);
    if (popcount(m) != r) throw PreconditionError("nonbasis of wrong size");
    nb.insert(m);
  }
  std::vector<SetMask> bases;
  SetMask g = (SetMask(1) << n) - 1;
  for (SetMask s = 0; s <= g; ++s)
    if (popcount(s) == r && !nb.count(s)) bases.push_back(s);
  return from_bases(n, r, std::move(bases));
}

Matroid Matroid::from_circuits(int n, int r, const std::vector<std::vector<int>>& circuits) {
  std::vector<SetMask> cs;
  for (auto& c : circuits) {
    SetMask m = vec_to_mask(c);
    if (popcount(m) > r + 1) throw PreconditionError("circuit larger than rank+1");
    cs.push_back(m);
  }
  for (SetMask c1 : cs)
    for (SetMask c2 : cs)
      if (c1 != c2 && (c1 & c2) == c1)
        throw PreconditionError("circuit axiom violation: nested circuits " +
                                std::to_string(c1) + " in " + std::to_string(c2));
  auto dependent = [&](SetMask s) {
    for (SetMask c : cs)
      if ((c & s) == c) return true;
    return false;
  };
  std::vector<SetMask> bases;
  SetMask g = (SetMask(1) << n) - 1;
  for (SetMask s = 0; s <= g; ++s)
    if (popcount(s) == r && !dependent(s)) bases.push_back(s);
  Matroid m = from_bases(n, r, std::move(bases));
  // every listed circuit must be a minimal dependent set of the result
  for (SetMask c : cs) {
    if (m.independent(c))
      throw PreconditionError("circuit axiom violation: listed circuit is independent");
    SetMask cc = c;
    for (int e = 0; e < n; ++e)
      if ((cc >> e) & 1) {
        if (!m.independent(cc & ~(SetMask(1) << e)))
          throw PreconditionError("circuit axiom violation: non-minimal circuit");
      }
  }
  return m;
}

bool Matroid::is_basis(SetMask s) const {
  return std::binary_search(bases_.begin(), bases_.end(), s);
}

void Matroid::validate_exchange() const {
  for (SetMask b1 : bases_)
    for (SetMask b2 : bases_) {
      if (b1 == b2) continue;
      SetMask only1 = b1 & ~b2;
      for (int x = 0; x < n_; ++x) {
        if (!((only1 >> x) & 1)) continue;
        SetMask rest = b1 & ~(SetMask(1) << x);
        bool ok = false;
        SetMask only2 = b2 & ~b1;
        for (int y = 0; y < n_ && !ok; ++y)
          if ((only2 >> y) & 1) ok = is_basis(rest | (SetMask(1) << y));
        if (!ok)
          throw PreconditionError("basis exchange fails for bases " + std::to_string(b1) + ", " +
                                  std::to_string(b2));
      }
    }
}

int Matroid::rank_of(SetMask x) const {
  int best = 0;
  for (SetMask b : bases_) best = std::max(best, popcount(b & x));
  return best;
}

SetMask Matroid::closure(SetMask x) const {
  int rk = rank_of(x);
  SetMask cl = x;
  for (int e = 0; e < n_; ++e) {
    SetMask bit = SetMask(1) << e;
    if (cl & bit) continue;
    if (rank_of(x | bit) == rk) cl |= bit;
  }
  return cl;
}

std::vector<SetMask> Matroid::hyperplanes() const {
  const FlatLattice& l = flat_lattice();
  if (r_ == 0) return {};
  return l.by_rank[static_cast<size_t>(r_ - 1)];
}

const FlatLattice& Matroid::flat_lattice() const {
  std::lock_guard<std::mutex> lock(*lattice_mu_);
  if (lattice_) return *lattice_;
  auto l = std::make_shared<FlatLattice>();
  l->by_rank.resize(static_cast<size_t>(r_) + 1);
  SetMask bottom = closure(0);
  l->by_rank[0] = {bottom};
  l->rank_of[bottom] = 0;
  for (int rk = 0; rk < r_; ++rk) {
    std::set<SetMask> next;
    for (SetMask f : l->by_rank[static_cast<size_t>(rk)]) {
      std::set<SetMask> ups;
      for (int e = 0; e < n_; ++e) {
        SetMask bit = SetMask(1) << e;
        if (f & bit) continue;
        ups.insert(closure(f | bit));
      }
      for (SetMask g : ups) {
        next.insert(g);
        l->covers.emplace_back(f, g);
      }
    }
    l->by_rank[static_cast<size_t>(rk) + 1].assign(next.begin(), next.end());
    for (SetMask g : next) l->rank_of[g] = rk + 1;
  }
  std::sort(l->covers.begin(), l->covers.end());
  l->covers.erase(std::unique(l->covers.begin(), l->covers.end()), l->covers.end());
  lattice_ = std::move(l);
  return *lattice_;
}

Matroid Matroid::dual() const {
  std::vector<SetMask> cb;
  cb.reserve(bases_.size());
  for (SetMask b : bases_) cb.push_back(ground() & ~b);
  return from_bases(n_, n_ - r_, std::move(cb));
}

Matroid Matroid::simplify() const {
  SetMask keep = 0;
  SetMask loops = closure(0);
  std::set<SetMask> seen;
  for (int e = 0; e < n_; ++e) {
    SetMask bit = SetMask(1) << e;
    if (loops & bit) continue;
    SetMask cl = closure(bit);
    if (seen.insert(cl).second) keep |= bit;
  }
  SetMask del = ground() & ~keep;
  return make_minor(*this, del, 0).minor;
}

std::string Matroid::text_form() const {
  if (n_ > 10) throw PreconditionError("text form supports n <= 10");
  std::vector<std::string> words;
  for (SetMask b : bases_) {
    std::string w;
    for (int e : mask_to_vec(b)) w += static_cast<char>('0' + e);
    words.push_back(std::move(w));
  }
  std::sort(words.begin(), words.end());
  std::string out = std::to_string(r_) + " " + std::to_string(n_) + " /";
  for (const auto& w : words) out += " " + w;
  return out;
}

Matroid Matroid::from_text(const std::string& text) {
  std::istringstream in(text);
  int r = 0, n = 0;
  std::string sep;
  if (!(in >> r >> n >> sep) || sep != "/") throw ParseError("expected 'r n / b1 b2 ...'");
  if (n > 10) throw ParseError("text form supports n <= 10");
  std::vector<SetMask> bases;
  std::string word;
  while (in >> word) {
    SetMask b = 0;
    for (char c : word) {
      if (c < '0' || c > '9') throw ParseError("basis words must be digit strings");
      b |= SetMask(1) << (c - '0');
    }
    bases.push_back(b);
  }
  return from_bases(n, r, std::move(bases));
}

SetMask EmbeddedMinor::to_parent(SetMask local) const {
  SetMask out = 0;
  for (int i : mask_to_vec(local)) out |= SetMask(1) << labels[static_cast<size_t>(i)];
  return out;
}

int EmbeddedMinor::to_local(int parent_elem) const {
  for (size_t i = 0; i < labels.size(); ++i)
    if (labels[i] == parent_elem) return static_cast<int>(i);
  return -1;
}

EmbeddedMinor make_minor(const Matroid& m, SetMask del, SetMask contract) {
  if (del & contract) throw PreconditionError("minor: delete and contract sets intersect");
  if (!m.independent(contract)) throw PreconditionError("minor: contract set not independent");
  if (!m.coindependent(del)) throw PreconditionError("minor: delete set not coindependent");
  EmbeddedMinor em;
  em.contract = contract;
  em.del = del;
  SetMask keep = m.ground() & ~(del | contract);
  for (int e : mask_to_vec(keep)) em.labels.push_back(e);
  std::vector<SetMask> bases;
  for (SetMask b : m.bases()) {
    if ((b & contract) != contract || (b & del)) continue;
    SetMask rest = b & ~contract;
    SetMask local = 0;
    for (size_t i = 0; i < em.labels.size(); ++i)
      if ((rest >> em.labels[i]) & 1) local |= SetMask(1) << i;
    bases.push_back(local);
  }
  em.minor = Matroid::from_bases(static_cast<int>(em.labels.size()),
                                 m.rank() - popcount(contract), std::move(bases));
  return em;
}

Matroid direct_sum(const Matroid& a, const Matroid& b) {
  std::vector<SetMask> bases;
  bases.reserve(a.bases().size() * b.bases().size());
  for (SetMask x : a.bases())
    for (SetMask y : b.bases()) bases.push_back(x | (y << a.n()));
  return Matroid::from_bases(a.n() + b.n(), a.rank() + b.rank(), std::move(bases));
}

namespace {

std::vector<long> element_profile(const Matroid& m) {
  // basis degree per element, refined once by neighbor degrees
  std::vector<long> deg(static_cast<size_t>(m.n()), 0);
  for (SetMask b : m.bases())
    for (int e : mask_to_vec(b)) deg[static_cast<size_t>(e)]++;
  std::vector<long> ref(static_cast<size_t>(m.n()), 0);
  for (SetMask b : m.bases()) {
    long s = 0;
    for (int e : mask_to_vec(b)) s += deg[static_cast<size_t>(e)];
    for (int e : mask_to_vec(b)) ref[static_cast<size_t>(e)] += s;
  }
  for (int e = 0; e < m.n(); ++e)
    ref[static_cast<size_t>(e)] = ref[static_cast<size_t>(e)] * 10007 + deg[static_cast<size_t>(e)];
  return ref;
}

}  // namespace

std::optional<std::vector<int>> is_isomorphic(const Matroid& a, const Matroid& b) {
  if (a.n() != b.n() || a.rank() != b.rank() || a.bases().size() != b.bases().size())
    return std::nullopt;
  std::vector<long> pa = element_profile(a), pb = element_profile(b);
  {
    std::vector<long> sa = pa, sb = pb;
    std::sort(sa.begin(), sa.end());
    std::sort(sb.begin(), sb.end());
    if (sa != sb) return std::nullopt;
  }
  const int n = a.n();
  std::vector<int> img(static_cast<size_t>(n), -1);
  std::vector<bool> used(static_cast<size_t>(n), false);

  // check all r-subsets of the assigned prefix that involve the new element
  auto consistent = [&](int count) {
    const int r = a.rank();
    std::vector<int> assigned;
    for (int e = 0; e < n; ++e)
      if (img[static_cast<size_t>(e)] >= 0) assigned.push_back(e);
    if (static_cast<int>(assigned.size()) < r) return true;
    int newest = count;
    std::vector<int> idx(static_cast<size_t>(r));
    std::function<bool(size_t, size_t, bool)> rec_subsets = [&](size_t pos, size_t start,
                                                                bool has_new) -> bool {
      if (pos == idx.size()) {
        if (!has_new) return true;
        SetMask sa = 0, sb = 0;
        for (size_t i = 0; i < idx.size(); ++i) {
          int e = assigned[idx[i]];
          sa |= SetMask(1) << e;
          sb |= SetMask(1) << img[static_cast<size_t>(e)];
        }
        return a.is_basis(sa) == b.is_basis(sb);
      }
      for (size_t s = start; s < assigned.size(); ++s) {
        idx[pos] = s;
        if (!rec_subsets(pos + 1, s + 1, has_new || assigned[s] == newest)) return false;
      }
      return true;
    };
    return rec_subsets(0, 0, false);
  };

  std::function<bool(int)> rec = [&](int e) -> bool {
    if (e == n) return true;
    for (int t = 0; t < n; ++t) {
      if (used[static_cast<size_t>(t)]) continue;
      if (pa[static_cast<size_t>(e)] != pb[static_cast<size_t>(t)]) continue;
      img[static_cast<size_t>(e)] = t;
      used[static_cast<size_t>(t)] = true;
      if (consistent(e) && rec(e + 1)) return true;
      img[static_cast<size_t>(e)] = -1;
      used[static_cast<size_t>(t)] = false;
    }
    return false;
  };
  if (!rec(0)) return std::nullopt;
  return img;
}

bool has_minor(const Matroid& m, const Matroid& n) {
  if (n.rank() > m.rank() || n.n() > m.n() || m.n() - m.rank() < n.n() - n.rank()) return false;
  const int csize = m.rank() - n.rank();
  const int dsize = m.n() - csize - n.n();
  std::vector<int> elems(static_cast<size_t>(m.n()));
  for (int i = 0; i < m.n(); ++i) elems[static_cast<size_t>(i)] = i;

  std::vector<SetMask> contracts;
  std::function<void(int, int, SetMask)> gen_con = [&](int start, int left, SetMask cur) {
    if (left == 0) {
      contracts.push_back(cur);
      return;
    }
    for (int e = start; e <= m.n() - left; ++e) {
      SetMask nxt = cur | (SetMask(1) << e);
      if (m.independent(nxt)) gen_con(e + 1, left - 1, nxt);
    }
  };
  gen_con(0, csize, 0);

  for (SetMask con : contracts) {
    SetMask rest = m.ground() & ~con;
    std::vector<int> rv = mask_to_vec(rest);
    std::vector<int> pick(static_cast<size_t>(dsize));
    std::function<bool(size_t, size_t)> gen_del = [&](size_t pos, size_t start) -> bool {
      if (pos == pick.size()) {
        SetMask del = 0;
        for (size_t i = 0; i < pick.size(); ++i) del |= SetMask(1) << pick[i];
        if (!m.coindependent(del)) return false;
        EmbeddedMinor em = make_minor(m, del, con);
        if (em.minor.rank() != n.rank()) return false;
        if (em.minor.bases().size() != n.bases().size()) return false;
        return is_isomorphic(em.minor, n).has_value();
      }
      for (size_t s = start; s < rv.size(); ++s) {
        pick[pos] = rv[s];
        if (gen_del(pos + 1, s + 1)) return true;
      }
      return false;
    };
    if (gen_del(0, 0)) return true;
  }
  return false;
}

Connectivity connectivity(const Matroid& m) {
  Connectivity c;
  const int n = m.n();
  // rank table over all subsets
  std::vector<int> rk(static_cast<size_t>(1) << n, 0);
  for (SetMask s = 1; s < (SetMask(1) << n); ++s) rk[s] = m.rank_of(s);
  auto lambda = [&](SetMask x) {
    return rk[x] + rk[m.ground() & ~x] - m.rank();
  };
  bool sep1 = false, sep2 = false;
  for (SetMask x = 1; x < (SetMask(1) << (n - 1)); ++x) {
    SetMask y = m.ground() & ~x;
    if (x == 0 || y == 0) continue;
    int l = lambda(x);
    if (l < 1) sep1 = true;
    if (popcount(x) >= 2 && popcount(y) >= 2 && l < 2) sep2 = true;
  }
  c.is_2_connected = !sep1 && n >= 1;
  c.is_3_connected = c.is_2_connected && !sep2 && n >= 4;
  return c;
}

}  // namespace foundry
