#include "foundry/foundation.hpp"

#include <algorithm>
#include <cstdlib>
#include <functional>
#include <map>
#include <set>
#include <thread>

namespace foundry {

int worker_threads() {
  if (const char* env = std::getenv("FOUNDRY_THREADS")) {
    int v = std::atoi(env);
    if (v >= 1 && v <= 64) return v;
  }
  return 1;
}

PsiKey fold_psi(const PsiKey& q) {
  PsiKey best = q;
  const std::array<std::array<int, 4>, 4> perms = {
      {{0, 1, 2, 3}, {1, 0, 3, 2}, {2, 3, 0, 1}, {3, 2, 1, 0}}};
  for (const auto& p : perms) {
    PsiKey cand = {q[static_cast<size_t>(p[0])], q[static_cast<size_t>(p[1])],
                   q[static_cast<size_t>(p[2])], q[static_cast<size_t>(p[3])]};
    if (cand < best) best = cand;
  }
  return best;
}

namespace {

// subsets of {0..n-1} of given size in lexicographic order of element vectors
void for_each_subset(int n, int size, const std::function<void(SetMask)>& fn) {
  std::vector<int> idx(static_cast<size_t>(size));
  std::function<void(int, int)> rec = [&](int pos, int start) {
    if (pos == size) {
      SetMask m = 0;
      for (int i : idx) m |= SetMask(1) << i;
      fn(m);
      return;
    }
    for (int e = start; e <= n - (size - pos); ++e) {
      idx[static_cast<size_t>(pos)] = e;
      rec(pos + 1, e + 1);
    }
  };
  rec(0, 0);
}

bool tuple_in_omega(const Matroid& m, SetMask I, int a, int b, int c, int d) {
  auto bit = [](int e) { return SetMask(1) << e; };
  return m.is_basis(I | bit(a) | bit(c)) && m.is_basis(I | bit(a) | bit(d)) &&
         m.is_basis(I | bit(b) | bit(c)) && m.is_basis(I | bit(b) | bit(d));
}

PsiKey psi_of(const Matroid& m, SetMask I, int a, int b, int c, int d) {
  auto bit = [](int e) { return SetMask(1) << e; };
  return {m.closure(I | bit(a)), m.closure(I | bit(b)), m.closure(I | bit(c)),
          m.closure(I | bit(d))};
}

// Per-index-set cache of single-element closures and pair-basis flags; the
// relation loops hit the same index sets millions of times on large sums.
class OmegaIndex {
 public:
  explicit OmegaIndex(const Matroid& m) : m_(m) {}

  struct Data {
    std::vector<SetMask> closure1;
    std::vector<bool> basis2;
  };

  const Data& at(SetMask I) {
    auto it = cache_.find(I);
    if (it != cache_.end()) return it->second;
    Data d;
    d.closure1.assign(static_cast<size_t>(m_.n()), 0);
    d.basis2.assign(static_cast<size_t>(m_.n()) * static_cast<size_t>(m_.n()), false);
    for (int e = 0; e < m_.n(); ++e) {
      if ((I >> e) & 1) continue;
      d.closure1[static_cast<size_t>(e)] = m_.closure(I | (SetMask(1) << e));
      for (int f = e + 1; f < m_.n(); ++f) {
        if ((I >> f) & 1) continue;
        bool b = m_.is_basis(I | (SetMask(1) << e) | (SetMask(1) << f));
        d.basis2[static_cast<size_t>(e) * static_cast<size_t>(m_.n()) + static_cast<size_t>(f)] = b;
        d.basis2[static_cast<size_t>(f) * static_cast<size_t>(m_.n()) + static_cast<size_t>(e)] = b;
      }
    }
    return cache_.emplace(I, std::move(d)).first->second;
  }

  bool in_omega(const Data& d, int a, int b, int c, int e) const {
    const size_t n = static_cast<size_t>(m_.n());
    return d.basis2[static_cast<size_t>(a) * n + static_cast<size_t>(c)] &&
           d.basis2[static_cast<size_t>(a) * n + static_cast<size_t>(e)] &&
           d.basis2[static_cast<size_t>(b) * n + static_cast<size_t>(c)] &&
           d.basis2[static_cast<size_t>(b) * n + static_cast<size_t>(e)] &&
           d.closure1[static_cast<size_t>(a)] != 0;
  }

  PsiKey psi(const Data& d, int a, int b, int c, int e) const {
    return {d.closure1[static_cast<size_t>(a)], d.closure1[static_cast<size_t>(b)],
            d.closure1[static_cast<size_t>(c)], d.closure1[static_cast<size_t>(e)]};
  }

 private:
  const Matroid& m_;
  std::map<SetMask, Data> cache_;
};

}  // namespace

std::vector<CrossRatioSymbol> enumerate_omega(const Matroid& m) {
  std::vector<CrossRatioSymbol> classes;
  if (m.rank() < 2) return classes;
  std::map<PsiKey, int> seen;
  auto bit = [](int e) { return SetMask(1) << e; };
  OmegaIndex idx(m);
  const size_t n = static_cast<size_t>(m.n());
  for_each_subset(m.n(), m.rank() - 2, [&](SetMask I) {
    const OmegaIndex::Data& data = idx.at(I);
    for (int a = 0; a < m.n(); ++a) {
      if (I & bit(a)) continue;
      for (int b = 0; b < m.n(); ++b) {
        if (b == a || (I & bit(b))) continue;
        for (int c = 0; c < m.n(); ++c) {
          if (c == a || c == b || (I & bit(c))) continue;
          for (int d = 0; d < m.n(); ++d) {
            if (d == a || d == b || d == c || (I & bit(d))) continue;
            if (!idx.in_omega(data, a, b, c, d)) continue;
            PsiKey key = fold_psi(idx.psi(data, a, b, c, d));
            if (seen.count(key)) continue;
            CrossRatioSymbol s;
            s.index_set = I;
            s.a = a;
            s.b = b;
            s.c = c;
            s.d = d;
            s.nondegenerate = data.basis2[static_cast<size_t>(a) * n + static_cast<size_t>(b)] &&
                              data.basis2[static_cast<size_t>(c) * n + static_cast<size_t>(d)];
            s.psi = idx.psi(data, a, b, c, d);
            seen[key] = static_cast<int>(classes.size());
            classes.push_back(s);
          }
        }
      }
    }
  });
  return classes;
}

PastureElement FoundationReport::eval(SetMask index_set, int a, int b, int c, int d,
                                      const Matroid& m) const {
  if (!tuple_in_omega(m, index_set, a, b, c, d))
    throw PreconditionError("tuple not in Omega");
  PsiKey key = fold_psi(psi_of(m, index_set, a, b, c, d));
  auto it = dictionary.find(key);
  if (it != dictionary.end()) return it->second;
  return pasture.one();  // degenerate classes carry cross ratio 1
}

FoundationReport grs_presentation(const Matroid& m) {
  FoundationReport rep;
  rep.method = "grs";
  rep.classes = enumerate_omega(m);

  std::map<PsiKey, int> class_of;  // folded psi -> class index
  std::vector<int> gen_of(rep.classes.size(), -1);
  std::vector<std::string> names;
  for (size_t i = 0; i < rep.classes.size(); ++i) {
    class_of[fold_psi(rep.classes[i].psi)] = static_cast<int>(i);
    if (rep.classes[i].nondegenerate) {
      gen_of[i] = static_cast<int>(names.size()) + 1;  // generator 0 is eps
      names.push_back("cr" + std::to_string(names.size()));
    }
  }

  // generator index of a tuple; 0 means cross ratio 1 (degenerate); -1 if the
  // tuple is not in Omega
  OmegaIndex idx(m);
  auto lookup = [&](SetMask I, int a, int b, int c, int d) -> int {
    const OmegaIndex::Data& data = idx.at(I);
    if (!idx.in_omega(data, a, b, c, d)) return -1;
    auto it = class_of.find(fold_psi(idx.psi(data, a, b, c, d)));
    if (it == class_of.end()) throw VerificationError("Omega tuple missing its class");
    return rep.classes[static_cast<size_t>(it->second)].nondegenerate
               ? gen_of[static_cast<size_t>(it->second)]
               : 0;
  };

  std::set<SparseRow> rows;
  auto add_row = [&](SparseRow r) {
    r = sparse_normalize(std::move(r));
    if (!r.empty()) rows.insert(std::move(r));
  };

  // (R-)
  if (has_minor(m, named_matroid("F7")) || has_minor(m, named_matroid("F7dual")))
    add_row({{0, Int(1)}});

  const int r = m.rank();
  auto bit = [](int e) { return SetMask(1) << e; };

  for (size_t i = 0; i < rep.classes.size(); ++i) {
    const CrossRatioSymbol& s = rep.classes[i];
    if (!s.nondegenerate) continue;
    // (R1): [ab;dc] = [ab;cd]^-1
    int ginv = lookup(s.index_set, s.a, s.b, s.d, s.c);
    if (ginv < 0) throw VerificationError("R1 partner missing");
    add_row({{gen_of[i], Int(1)}, {ginv, Int(1)}});
    // (R2): [ab;cd] [ac;db] [ad;bc] = -1
    int g2 = lookup(s.index_set, s.a, s.c, s.d, s.b);
    int g3 = lookup(s.index_set, s.a, s.d, s.b, s.c);
    if (g2 < 0 || g3 < 0) throw VerificationError("R2 partner missing");
    add_row({{gen_of[i], Int(1)}, {g2, Int(1)}, {g3, Int(1)}, {0, Int(-1)}});
  }

  // (R3): [e1e2;f1f2] [e1e2;f2f3] [e1e2;f3f1] = 1 over a common index set
  if (r >= 2) for_each_subset(m.n(), r - 2, [&](SetMask I) {
    for (int e1 = 0; e1 < m.n(); ++e1) {
      if (I & bit(e1)) continue;
      for (int e2 = 0; e2 < m.n(); ++e2) {
        if (e2 == e1 || (I & bit(e2))) continue;
        for (int f1 = 0; f1 < m.n(); ++f1) {
          if (f1 == e1 || f1 == e2 || (I & bit(f1))) continue;
          for (int f2 = f1 + 1; f2 < m.n(); ++f2) {
            if (f2 == e1 || f2 == e2 || (I & bit(f2))) continue;
            for (int f3 = f2 + 1; f3 < m.n(); ++f3) {
              if (f3 == e1 || f3 == e2 || (I & bit(f3))) continue;
              for (int flip = 0; flip < 2; ++flip) {
                int u = f1, v = flip ? f3 : f2, w = flip ? f2 : f3;
                int g1 = lookup(I, e1, e2, u, v);
                int g2 = lookup(I, e1, e2, v, w);
                int g3 = lookup(I, e1, e2, w, u);
                if (g1 < 0 || g2 < 0 || g3 < 0) continue;
                SparseRow row;  // degenerate factors carry cross ratio 1
                for (int g : {g1, g2, g3})
                  if (g > 0) row.emplace_back(g, Int(1));
                add_row(std::move(row));
              }
            }
          }
        }
      }
    }
  });

  // (R4): [e1e2;f1f2]_{Jf3} [e1e2;f2f3]_{Jf1} [e1e2;f3f1]_{Jf2} = 1
  if (r >= 3) {
    for_each_subset(m.n(), r - 3, [&](SetMask J) {
      for (int e1 = 0; e1 < m.n(); ++e1) {
        if (J & bit(e1)) continue;
        for (int e2 = 0; e2 < m.n(); ++e2) {
          if (e2 == e1 || (J & bit(e2))) continue;
          for (int f1 = 0; f1 < m.n(); ++f1) {
            if (f1 == e1 || f1 == e2 || (J & bit(f1))) continue;
            for (int f2 = f1 + 1; f2 < m.n(); ++f2) {
              if (f2 == e1 || f2 == e2 || (J & bit(f2))) continue;
              for (int f3 = f2 + 1; f3 < m.n(); ++f3) {
                if (f3 == e1 || f3 == e2 || (J & bit(f3))) continue;
                for (int flip = 0; flip < 2; ++flip) {
                  int u = f1, v = flip ? f3 : f2, w = flip ? f2 : f3;
                  int g1 = lookup(J | bit(w), e1, e2, u, v);
                  int g2 = lookup(J | bit(u), e1, e2, v, w);
                  int g3 = lookup(J | bit(v), e1, e2, w, u);
                  if (g1 < 0 || g2 < 0 || g3 < 0) continue;
                  SparseRow row;
                  for (int g : {g1, g2, g3})
                    if (g > 0) row.emplace_back(g, Int(1));
                  add_row(std::move(row));
                }
              }
            }
          }
        }
      }
    });
  }

  // (R5): [e1e2;e3e4]_{Je5} = [e1e2;e3e4]_{Je6} when <Je5> = <Je6>, both
  // classes nondegenerate
  if (r >= 3) {
    for_each_subset(m.n(), r - 3, [&](SetMask J) {
      for (int e5 = 0; e5 < m.n(); ++e5) {
        if (J & bit(e5)) continue;
        if (!m.independent(J | bit(e5))) continue;
        for (int e6 = e5 + 1; e6 < m.n(); ++e6) {
          if (J & bit(e6)) continue;
          if (!m.independent(J | bit(e6))) continue;
          if (m.closure(J | bit(e5)) != m.closure(J | bit(e6))) continue;
          for (int e1 = 0; e1 < m.n(); ++e1) {
            if (e1 == e5 || e1 == e6 || (J & bit(e1))) continue;
            for (int e2 = 0; e2 < m.n(); ++e2) {
              if (e2 == e1 || e2 == e5 || e2 == e6 || (J & bit(e2))) continue;
              for (int e3 = 0; e3 < m.n(); ++e3) {
                if (e3 == e1 || e3 == e2 || e3 == e5 || e3 == e6 || (J & bit(e3))) continue;
                for (int e4 = 0; e4 < m.n(); ++e4) {
                  if (e4 == e1 || e4 == e2 || e4 == e3 || e4 == e5 || e4 == e6 || (J & bit(e4)))
                    continue;
                  int g1 = lookup(J | bit(e5), e1, e2, e3, e4);
                  int g2 = lookup(J | bit(e6), e1, e2, e3, e4);
                  if (g1 <= 0 || g2 <= 0) continue;  // both nondegenerate
                  add_row({{g1, Int(1)}, {g2, Int(-1)}});
                }
              }
            }
          }
        }
      }
    });
  }

  // (R+): x + y - 1 for x = [ab;cd]_I, y = [ac;bd]_I
  std::vector<std::array<SparseRow, 3>> terms;
  for (size_t i = 0; i < rep.classes.size(); ++i) {
    const CrossRatioSymbol& s = rep.classes[i];
    if (!s.nondegenerate) continue;
    int gy = lookup(s.index_set, s.a, s.c, s.b, s.d);
    if (gy <= 0) throw VerificationError("R+ partner missing or degenerate");
    terms.push_back({SparseRow{{gen_of[i], Int(1)}}, SparseRow{{gy, Int(1)}},
                     SparseRow{{0, Int(1)}}});
  }

  std::vector<SparseRow> row_vec(rows.begin(), rows.end());
  rep.pasture = Pasture::from_raw(std::move(names), std::move(row_vec), std::move(terms), {}, {},
                                  std::nullopt);
  for (size_t i = 0; i < rep.classes.size(); ++i) {
    if (!rep.classes[i].nondegenerate) continue;
    rep.dictionary[fold_psi(rep.classes[i].psi)] =
        rep.pasture.generator(gen_of[i] - 1);
  }
  return rep;
}

namespace {

struct DiagramTypeSpec {
  std::string name;
  Matroid matroid;
};

std::vector<DiagramTypeSpec> diagram_types(DiagramClass cls) {
  std::vector<std::string> names;
  switch (cls) {
    case DiagramClass::general:
      names = {"U(2,4)", "U(2,5)", "U(3,5)", "C5", "C5dual", "U24+U12", "F7", "F7dual"};
      break;
    case DiagramClass::two_connected:
      names = {"U(2,4)", "U(2,5)", "U(3,5)", "C5", "C5dual", "F7", "F7dual"};
      break;
    case DiagramClass::three_connected:
      names = {"U(2,4)", "U(2,5)", "U(3,5)", "whirl(3)", "Q6", "P6", "F7", "F7dual"};
      break;
  }
  std::vector<DiagramTypeSpec> out;
  for (const auto& n : names) {
    if (n == "U24+U12")
      out.push_back({n, direct_sum(named_matroid("U(2,4)"), named_matroid("U(1,2)"))});
    else
      out.push_back({n, named_matroid(n)});
  }
  return out;
}

}  // namespace

MatroidDiagram fundamental_diagram(const Matroid& m, DiagramClass cls) {
  if (cls == DiagramClass::two_connected && !connectivity(m).is_2_connected)
    throw PreconditionError("matroid is not 2-connected");
  if (cls == DiagramClass::three_connected && !connectivity(m).is_3_connected)
    throw PreconditionError("matroid is not 3-connected");

  MatroidDiagram d;
  std::set<std::pair<SetMask, SetMask>> seen;  // (del, contract)
  for (const DiagramTypeSpec& t : diagram_types(cls)) {
    const int csize = m.rank() - t.matroid.rank();
    const int dsize = m.n() - csize - t.matroid.n();
    if (csize < 0 || dsize < 0) continue;
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
      std::vector<int> rest = mask_to_vec(m.ground() & ~con);
      std::vector<int> pick(static_cast<size_t>(dsize));
      std::function<void(size_t, size_t)> gen_del = [&](size_t pos, size_t start) {
        if (pos == pick.size()) {
          SetMask del = 0;
          for (int e : pick) del |= SetMask(1) << e;
          if (!m.coindependent(del)) return;
          if (seen.count({del, con})) return;
          EmbeddedMinor em = make_minor(m, del, con);
          if (em.minor.bases().size() != t.matroid.bases().size()) return;
          if (em.minor.rank() != t.matroid.rank()) return;
          if (!is_isomorphic(em.minor, t.matroid)) return;
          seen.insert({del, con});
          d.nodes.push_back(std::move(em));
          return;
        }
        for (size_t s = start; s < rest.size(); ++s) {
          pick[pos] = rest[s];
          gen_del(pos + 1, s + 1);
        }
      };
      gen_del(0, 0);
    }
  }
  for (size_t i = 0; i < d.nodes.size(); ++i)
    for (size_t j = 0; j < d.nodes.size(); ++j) {
      if (i == j) continue;
      // node i embeds into node j when j removes a subset of what i removes
      if ((d.nodes[j].contract & ~d.nodes[i].contract) == 0 &&
          (d.nodes[j].del & ~d.nodes[i].del) == 0)
        d.edges.emplace_back(static_cast<int>(i), static_cast<int>(j));
    }
  return d;
}

LatticeDiagram lattice_diagram(const Matroid& m, LatticeVariant variant) {
  LatticeDiagram d;
  if (variant == LatticeVariant::full || variant == LatticeVariant::three_connected) {
    std::vector<std::string> tags =
        variant == LatticeVariant::full
            ? std::vector<std::string>{"U24", "U25", "U35", "C5", "F7", "F7dual"}
            : std::vector<std::string>{"U24", "U25", "U35", "W3", "Q6", "P6", "F7", "F7dual"};
    for (const auto& tag : tags)
      for (auto& s : upper_sublattices(m, tag)) d.nodes.push_back(std::move(s));
  } else {
    const int max_rank = variant == LatticeVariant::rank_le_3 ? 3 : 4;
    if (variant == LatticeVariant::rank_le_3 &&
        !(has_minor(m, named_matroid("F7")) || !has_minor(m, named_matroid("F7dual"))))
      throw PreconditionError(
          "rank<=3 lattice route requires an F7 minor or the absence of F7* minors");
    std::vector<UpperSublattice> anchors;
    for (const std::string tag : {"U24", "F7", "F7dual"})
      for (auto& s : upper_sublattices(m, tag)) anchors.push_back(std::move(s));
    const FlatLattice& l = m.flat_lattice();
    for (int corank = 2; corank <= max_rank && corank <= m.rank(); ++corank) {
      for (SetMask bottom : l.by_rank[static_cast<size_t>(m.rank() - corank)]) {
        bool anchored = false;
        for (const auto& a : anchors)
          if ((bottom & ~a.bottom) == 0) {  // anchor bottom above this flat
            anchored = true;
            break;
          }
        if (!anchored) continue;
        d.nodes.push_back(full_upper_sublattice(m, bottom));
      }
    }
  }
  for (const auto& s : d.nodes) d.realizations.push_back(realize_upper_sublattice(m, s));
  for (size_t i = 0; i < d.nodes.size(); ++i)
    for (size_t j = 0; j < d.nodes.size(); ++j) {
      if (i == j) continue;
      if (std::includes(d.nodes[j].flats.begin(), d.nodes[j].flats.end(),
                        d.nodes[i].flats.begin(), d.nodes[i].flats.end()))
        d.edges.emplace_back(static_cast<int>(i), static_cast<int>(j));
    }
  return d;
}

namespace {

// Shared machinery for assembling a colimit of per-node foundations.
struct NodeData {
  EmbeddedMinor em;
  FoundationReport report;
  std::map<PsiKey, int> class_of;  // folded local psi -> class index
};

FoundationReport cached_grs(const Matroid& minor) {
  struct Key {
    int n, r;
    std::vector<SetMask> bases;
    bool operator<(const Key& o) const {
      return std::tie(n, r, bases) < std::tie(o.n, o.r, o.bases);
    }
  };
  static std::mutex mu;
  static std::map<Key, FoundationReport> cache;
  Key key{minor.n(), minor.rank(), minor.bases()};
  {
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
  }
  FoundationReport rep = grs_presentation(minor);
  std::lock_guard<std::mutex> lock(mu);
  cache.emplace(std::move(key), rep);
  return rep;
}

std::vector<NodeData> node_foundations(const std::vector<EmbeddedMinor>& minors) {
  std::vector<NodeData> nodes(minors.size());
  const int threads = std::min<int>(worker_threads(), std::max<size_t>(minors.size(), 1));
  auto work = [&](size_t begin, size_t step) {
    for (size_t i = begin; i < minors.size(); i += step) {
      nodes[i].em = minors[i];
      nodes[i].report = cached_grs(minors[i].minor);
      for (size_t c = 0; c < nodes[i].report.classes.size(); ++c)
        nodes[i].class_of[fold_psi(nodes[i].report.classes[c].psi)] = static_cast<int>(c);
    }
  };
  if (threads <= 1) {
    work(0, 1);
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(work, static_cast<size_t>(t), threads);
    for (auto& th : pool) th.join();
  }
  return nodes;
}

// image (target canonical coords) of a source class generator under a minor
// embedding: translate the representative tuple, look it up in the target
PastureElement class_image_in_node(const NodeData& src, size_t class_idx, const NodeData& dst) {
  const CrossRatioSymbol& s = src.report.classes[class_idx];
  SetMask extra = src.em.contract & ~dst.em.contract;
  SetMask index_parent = src.em.to_parent(s.index_set) | extra;
  SetMask index_local = 0;
  for (int e : mask_to_vec(index_parent)) {
    int le = dst.em.to_local(e);
    if (le < 0) throw VerificationError("embedding does not retain index element");
    index_local |= SetMask(1) << le;
  }
  auto local_of = [&](int src_local) {
    int le = dst.em.to_local(src.em.labels[static_cast<size_t>(src_local)]);
    if (le < 0) throw VerificationError("embedding does not retain entry element");
    return le;
  };
  const Matroid& tm = dst.em.minor;
  int a = local_of(s.a), b = local_of(s.b), c = local_of(s.c), d = local_of(s.d);
  if (!tuple_in_omega(tm, index_local, a, b, c, d))
    throw VerificationError("translated tuple left Omega");
  auto it = dst.class_of.find(fold_psi(psi_of(tm, index_local, a, b, c, d)));
  if (it == dst.class_of.end()) throw VerificationError("translated class missing");
  const CrossRatioSymbol& t = dst.report.classes[static_cast<size_t>(it->second)];
  if (!t.nondegenerate) return dst.report.pasture.one();
  return dst.report.dictionary.at(fold_psi(t.psi));
}

// the hyperplane quadruple of a node class, written in parent flats
PsiKey parent_psi(const Matroid& m, const NodeData& nd, const CrossRatioSymbol& s) {
  SetMask ip = nd.em.to_parent(s.index_set) | nd.em.contract;
  return psi_of(m, ip, nd.em.labels[static_cast<size_t>(s.a)],
                nd.em.labels[static_cast<size_t>(s.b)], nd.em.labels[static_cast<size_t>(s.c)],
                nd.em.labels[static_cast<size_t>(s.d)]);
}

// look a parent-level hyperplane quadruple up in a node; nullopt if some
// hyperplane does not restrict to a class of the node whose parent quadruple
// round-trips to the input (restriction alone can alias distinct flats)
std::optional<PastureElement> flat_image_in_node(const Matroid& m, const PsiKey& parent_quad,
                                                 const NodeData& nd) {
  PsiKey local{};
  for (size_t k = 0; k < 4; ++k) {
    SetMask lm = 0;
    for (size_t i = 0; i < nd.em.labels.size(); ++i)
      if ((parent_quad[k] >> nd.em.labels[i]) & 1) lm |= SetMask(1) << i;
    local[k] = lm;
  }
  auto it = nd.class_of.find(fold_psi(local));
  if (it == nd.class_of.end()) return std::nullopt;
  const CrossRatioSymbol& t = nd.report.classes[static_cast<size_t>(it->second)];
  if (fold_psi(parent_psi(m, nd, t)) != fold_psi(parent_quad)) return std::nullopt;
  if (!t.nondegenerate) return nd.report.pasture.one();
  return nd.report.dictionary.at(fold_psi(t.psi));
}

enum class TranslateMode { by_index, by_flats };

PastureMorphism embedding_morphism(const NodeData& src, const NodeData& dst, TranslateMode mode,
                                   const Matroid& parent) {
  // images of the source's original generators (eps + one per nondegenerate
  // class), then transported to canonical generators via the section
  const Pasture& sp = src.report.pasture;
  const Pasture& tp = dst.report.pasture;
  std::vector<IntVector> orig_images;  // per original generator of sp
  orig_images.push_back(tp.epsilon().coords);
  for (size_t c = 0; c < src.report.classes.size(); ++c) {
    if (!src.report.classes[c].nondegenerate) continue;
    if (mode == TranslateMode::by_index) {
      orig_images.push_back(class_image_in_node(src, c, dst).coords);
    } else {
      auto img = flat_image_in_node(parent, parent_psi(parent, src, src.report.classes[c]), dst);
      if (!img) throw VerificationError("sublattice inclusion does not transport a class");
      orig_images.push_back(img->coords);
    }
  }
  PastureMorphism f;
  f.source = sp;
  f.target = tp;
  const FpAbelianGroup& g = sp.unit_group();
  const FpAbelianGroup& h = tp.unit_group();
  for (int i = 0; i < g.canon_dim(); ++i) {
    IntVector img = h.canon_zero();
    for (int j = 0; j < g.num_generators(); ++j) {
      const Int& coef = g.section()(j, i);
      if (coef == 0) continue;
      img += orig_images[static_cast<size_t>(j)] * coef;
    }
    f.images.push_back(h.reduce(std::move(img)));
  }
  if (!is_morphism(f)) throw VerificationError("induced foundation map is not a morphism");
  return f;
}

FoundationReport colimit_of_nodes(const Matroid& m, std::vector<NodeData> nodes,
                                  const std::vector<std::pair<int, int>>& edges,
                                  const std::string& method, TranslateMode mode) {
  Diagram d;
  for (const NodeData& n : nodes) d.nodes.push_back(n.report.pasture);
  for (auto& [from, to] : edges) {
    PastureMorphism f = embedding_morphism(nodes[static_cast<size_t>(from)],
                                           nodes[static_cast<size_t>(to)], mode, m);
    d.edges.push_back({from, to, std::move(f.images)});
  }
  ColimitResult col = colimit(d);

  FoundationReport rep;
  rep.method = method;
  rep.pasture = std::move(col.pasture);
  rep.classes = enumerate_omega(m);
  for (const CrossRatioSymbol& s : rep.classes) {
    if (!s.nondegenerate) continue;
    bool found = false;
    for (size_t i = 0; i < nodes.size() && !found; ++i) {
      auto img = flat_image_in_node(m, s.psi, nodes[i]);
      if (!img) continue;
      rep.dictionary[fold_psi(s.psi)] = apply(col.cones[i], *img);
      found = true;
    }
    if (!found)
      throw VerificationError("no diagram node realizes a nondegenerate cross-ratio class");
  }
  return rep;
}

}  // namespace

FoundationReport foundation_via_diagram(const Matroid& m, DiagramClass cls) {
  MatroidDiagram d = fundamental_diagram(m, cls);
  std::vector<NodeData> nodes = node_foundations(d.nodes);
  std::string method = cls == DiagramClass::general        ? "diagram"
                       : cls == DiagramClass::two_connected ? "diagram2"
                                                            : "diagram3";
  return colimit_of_nodes(m, std::move(nodes), d.edges, method, TranslateMode::by_index);
}

FoundationReport foundation_via_lattice(const Matroid& m, LatticeVariant variant) {
  LatticeDiagram d = lattice_diagram(m, variant);
  std::vector<NodeData> nodes = node_foundations(d.realizations);
  std::string method = variant == LatticeVariant::full           ? "lattice"
                       : variant == LatticeVariant::rank_le_4    ? "lattice_le4"
                       : variant == LatticeVariant::rank_le_3    ? "lattice_le3"
                                                                 : "lattice3";
  return colimit_of_nodes(m, std::move(nodes), d.edges, method, TranslateMode::by_flats);
}

std::vector<std::string> applicable_methods(const Matroid& m) {
  std::vector<std::string> out = {"grs", "diagram", "lattice", "lattice_le4"};
  Connectivity c = connectivity(m);
  if (c.is_2_connected) out.push_back("diagram2");
  if (c.is_3_connected) out.push_back("diagram3");
  if (c.is_3_connected) out.push_back("lattice3");
  if (has_minor(m, named_matroid("F7")) || !has_minor(m, named_matroid("F7dual")))
    out.push_back("lattice_le3");
  return out;
}

namespace {

FoundationReport run_method(const Matroid& m, const std::string& method) {
  if (method == "grs") return grs_presentation(m);
  if (method == "diagram") return foundation_via_diagram(m, DiagramClass::general);
  if (method == "diagram2") return foundation_via_diagram(m, DiagramClass::two_connected);
  if (method == "diagram3") return foundation_via_diagram(m, DiagramClass::three_connected);
  if (method == "lattice") return foundation_via_lattice(m, LatticeVariant::full);
  if (method == "lattice3") return foundation_via_lattice(m, LatticeVariant::three_connected);
  if (method == "lattice_le3") return foundation_via_lattice(m, LatticeVariant::rank_le_3);
  if (method == "lattice_le4") return foundation_via_lattice(m, LatticeVariant::rank_le_4);
  throw ParseError("unknown foundation method: " + method);
}

}  // namespace

FoundationReport foundation(const Matroid& m, const FoundationOptions& opts) {
  FoundationReport rep = run_method(m, opts.method);
  if (opts.cross_check.value_or(m.n() <= 7)) {
    Budget budget;
    for (const std::string& method : applicable_methods(m)) {
      if (method == opts.method) continue;
      FoundationReport other = run_method(m, method);
      bool ok = find_isomorphism(rep.pasture, other.pasture, budget).has_value();
      rep.cross_checks.emplace_back(method, ok);
      if (!ok)
        throw VerificationError("cross-check mismatch between " + opts.method + " and " + method);
    }
  }
  if (opts.identify) {
    Budget budget;
    rep.identification = identify(rep.pasture, budget);
  }
  return rep;
}

}  // namespace foundry
