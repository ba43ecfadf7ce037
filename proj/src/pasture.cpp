#include "foundry/pasture.hpp"

#include <algorithm>
#include <unordered_map>

namespace foundry {

PresElem PresElem::times(const PresElem& o) const {
  if (zero || o.zero) return zero_elem();
  PresElem r{false, sign * o.sign, exps};
  for (auto& [k, v] : o.exps) {
    auto it = r.exps.find(k);
    if (it == r.exps.end())
      r.exps[k] = v;
    else {
      it->second += v;
      if (it->second == 0) r.exps.erase(it);
    }
  }
  return r;
}

PresElem PresElem::inverse() const {
  if (zero) throw PreconditionError("zero has no inverse");
  PresElem r{false, sign, {}};
  for (auto& [k, v] : exps) r.exps[k] = -v;
  return r;
}

namespace {

SparseRow pres_to_sparse(const PresElem& e,
                         const std::unordered_map<std::string, int>& index) {
  SparseRow row;
  if (e.sign < 0) row.emplace_back(0, Int(1));
  for (auto& [name, exp] : e.exps) {
    auto it = index.find(name);
    if (it == index.end()) throw ParseError("unknown generator in relation: " + name);
    row.emplace_back(it->second, exp);
  }
  return sparse_normalize(std::move(row));
}

SparseRow sparse_sub(const SparseRow& a, const SparseRow& b) {
  SparseRow r = a;
  for (auto& [idx, val] : b) r.emplace_back(idx, -val);
  return sparse_normalize(std::move(r));
}

}  // namespace

Pasture Pasture::from_presentation(std::vector<std::string> generators,
                                   std::vector<PresTerm> add_relations,
                                   std::vector<PresElem> mult_relations,
                                   std::optional<std::string> name_hint) {
  std::unordered_map<std::string, int> index;
  for (size_t i = 0; i < generators.size(); ++i) {
    if (!index.emplace(generators[i], static_cast<int>(i) + 1).second)
      throw ParseError("duplicate generator name: " + generators[i]);
  }

  std::vector<SparseRow> mult_rows;
  for (const auto& m : mult_relations) {
    if (m.zero) throw ParseError("multiplicative relation cannot be zero");
    mult_rows.push_back(pres_to_sparse(m, index));
  }

  std::vector<std::array<SparseRow, 3>> unit_terms;
  for (const auto& term : add_relations) {
    int zeros = 0;
    for (const auto& e : term) zeros += e.zero ? 1 : 0;
    if (zeros == 3) continue;
    if (zeros == 2) throw ParseError("null term with two zeros forces a unit to vanish");
    if (zeros == 1) {
      // a + b + 0 folds into the unit-group relation a = -b
      const PresElem* u[2];
      int k = 0;
      for (const auto& e : term)
        if (!e.zero) u[k++] = &e;
      SparseRow row = sparse_sub(pres_to_sparse(*u[0], index), pres_to_sparse(*u[1], index));
      row.emplace_back(0, Int(-1));
      mult_rows.push_back(sparse_normalize(std::move(row)));
      continue;
    }
    unit_terms.push_back({pres_to_sparse(term[0], index), pres_to_sparse(term[1], index),
                          pres_to_sparse(term[2], index)});
  }

  return from_raw(std::move(generators), std::move(mult_rows), std::move(unit_terms),
                  std::move(mult_relations), std::move(add_relations), std::move(name_hint));
}

Pasture Pasture::from_raw(std::vector<std::string> gen_names, std::vector<SparseRow> mult_rows,
                          std::vector<std::array<SparseRow, 3>> unit_terms,
                          std::vector<PresElem> pres_mult, std::vector<PresTerm> pres_add,
                          std::optional<std::string> name_hint) {
  Pasture p;
  p.gen_names_ = std::move(gen_names);
  if (pres_mult.empty() && pres_add.empty()) {
    // synthesize a faithful presentation record from the raw rows
    auto to_pres = [&](const SparseRow& row) {
      PresElem e;
      for (auto& [idx, val] : row) {
        if (idx == 0) {
          if (val % 2 != 0) e.sign = -e.sign;
        } else {
          e.exps[p.gen_names_[static_cast<size_t>(idx - 1)]] = val;
        }
      }
      return e;
    };
    for (const SparseRow& row : mult_rows) pres_mult.push_back(to_pres(row));
    for (const auto& term : unit_terms)
      pres_add.push_back(PresTerm{to_pres(term[0]), to_pres(term[1]), to_pres(term[2])});
  }
  p.pres_mult_ = std::move(pres_mult);
  p.pres_add_ = std::move(pres_add);
  p.name_hint_ = std::move(name_hint);

  mult_rows.push_back({{0, Int(2)}});  // eps^2 = 1
  p.group_ = FpAbelianGroup(static_cast<int>(p.gen_names_.size()) + 1, std::move(mult_rows));
  p.eps_ = p.group_.to_canonical_sparse({{0, Int(1)}});

  for (const auto& term : unit_terms) {
    Hexagon h = p.hexagon_from_unit_term(p.group_.to_canonical_sparse(term[0]),
                                          p.group_.to_canonical_sparse(term[1]),
                                          p.group_.to_canonical_sparse(term[2]));
    if (p.hexagon_keys_.insert(h.key).second) p.hexagons_.push_back(std::move(h));
  }
  std::sort(p.hexagons_.begin(), p.hexagons_.end(),
            [](const Hexagon& a, const Hexagon& b) { return a.key < b.key; });
  return p;
}

PastureElement Pasture::mul(const PastureElement& a, const PastureElement& b) const {
  if (a.zero || b.zero) return PastureElement::zero_elem();
  return PastureElement{false, group_.canon_add(a.coords, b.coords)};
}

PastureElement Pasture::inv(const PastureElement& a) const {
  if (a.zero) throw PreconditionError("zero has no inverse");
  return PastureElement{false, group_.canon_neg(a.coords)};
}

PastureElement Pasture::neg(const PastureElement& a) const {
  if (a.zero) return a;
  return PastureElement{false, group_.canon_add(a.coords, eps_)};
}

bool Pasture::element_equal(const PastureElement& a, const PastureElement& b) const {
  if (a.zero || b.zero) return a.zero == b.zero;
  return group_.canon_is_zero(group_.canon_sub(a.coords, b.coords));
}

std::string Pasture::serialize_element(const PastureElement& a) const {
  if (a.zero) return std::string("0");
  return std::string("u") + serialize_exponents(a.coords);
}

PastureElement Pasture::generator(int i) const {
  if (i < 0 || i >= static_cast<int>(gen_names_.size()))
    throw PreconditionError("generator index out of range");
  return PastureElement{false, group_.to_canonical_sparse({{i + 1, Int(1)}})};
}

PastureElement Pasture::unit_from_pres(const PresElem& e) const {
  if (e.zero) throw PreconditionError("expected a unit");
  std::unordered_map<std::string, int> index;
  for (size_t i = 0; i < gen_names_.size(); ++i) index[gen_names_[i]] = static_cast<int>(i) + 1;
  return PastureElement{false, group_.to_canonical_sparse(pres_to_sparse(e, index))};
}

PastureElement Pasture::element_from_pres(const PresElem& e) const {
  if (e.zero) return PastureElement::zero_elem();
  return unit_from_pres(e);
}

bool Pasture::null_term(const PastureElement& a, const PastureElement& b,
                        const PastureElement& c) const {
  int zeros = (a.zero ? 1 : 0) + (b.zero ? 1 : 0) + (c.zero ? 1 : 0);
  if (zeros == 3) return true;
  if (zeros == 2) return false;
  if (zeros == 1) {
    const PastureElement* u[2];
    int k = 0;
    for (const PastureElement* e : {&a, &b, &c})
      if (!e->zero) u[k++] = e;
    return element_equal(*u[0], neg(*u[1]));
  }
  return has_hexagon_key(hexagon_from_unit_term(a.coords, b.coords, c.coords).key);
}

bool Pasture::is_fundamental_pair(const PastureElement& x, const PastureElement& y) const {
  if (x.zero || y.zero) return false;
  return null_term(x, y, neg(one()));
}

Hexagon Pasture::hexagon_from_unit_term(const IntVector& a, const IntVector& b,
                                        const IntVector& c) const {
  // pairs (x, y) with x + y - 1 in the orbit of a + b + c under scaling:
  // divide by -a, -b, -c in turn
  auto pair_of = [&](const IntVector& p, const IntVector& q, const IntVector& r) {
    IntVector x = group_.reduce(p - r + eps_);
    IntVector y = group_.reduce(q - r + eps_);
    return std::make_pair(std::move(x), std::move(y));
  };
  std::vector<std::pair<IntVector, IntVector>> pairs;
  pairs.push_back(pair_of(a, b, c));
  pairs.push_back(pair_of(b, a, c));
  pairs.push_back(pair_of(a, c, b));
  pairs.push_back(pair_of(c, a, b));
  pairs.push_back(pair_of(b, c, a));
  pairs.push_back(pair_of(c, b, a));

  std::vector<std::pair<std::string, size_t>> keyed;
  for (size_t i = 0; i < pairs.size(); ++i)
    keyed.emplace_back(serialize_exponents(pairs[i].first) + serialize_exponents(pairs[i].second),
                       i);
  std::sort(keyed.begin(), keyed.end());
  keyed.erase(std::unique(keyed.begin(), keyed.end(),
                          [](const auto& x, const auto& y) { return x.first == y.first; }),
              keyed.end());

  Hexagon h;
  for (auto& [key, idx] : keyed) {
    h.pairs.push_back(pairs[idx]);
    h.key += key;
    h.key.push_back('|');
  }
  return h;
}

std::vector<PastureElement> Pasture::fundamental_elements() const {
  std::vector<std::pair<std::string, IntVector>> keyed;
  for (const Hexagon& h : hexagons_)
    for (const auto& [x, y] : h.pairs) keyed.emplace_back(serialize_exponents(x), x);
  std::sort(keyed.begin(), keyed.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  keyed.erase(std::unique(keyed.begin(), keyed.end(),
                          [](const auto& a, const auto& b) { return a.first == b.first; }),
              keyed.end());
  std::vector<PastureElement> out;
  out.reserve(keyed.size());
  for (auto& [key, v] : keyed) out.push_back(PastureElement{false, v});
  return out;
}

Pasture Pasture::quotient(const std::vector<PresTerm>& terms) const {
  std::vector<PresTerm> add = pres_add_;
  for (const auto& t : terms) add.push_back(t);
  std::optional<std::string> hint;
  return from_presentation(gen_names_, std::move(add), pres_mult_, hint);
}

Pasture::NumericalType Pasture::numerical_type() const {
  NumericalType t;
  t.free_rank = group_.free_rank();
  t.invariant_factors = group_.invariant_factors();
  t.minus_one_trivial = minus_one_trivial();
  t.hexagon_count = static_cast<int>(hexagons_.size());
  return t;
}

void Pasture::validate() const {
  IntVector eps2 = group_.reduce(eps_ + eps_);
  if (!group_.canon_is_zero(eps2)) throw VerificationError("eps^2 != 1");
  if (minus_one_trivial() != group_.canon_is_zero(eps_))
    throw VerificationError("minus_one_trivial inconsistent");
  for (const Hexagon& h : hexagons_) {
    for (const auto& [x, y] : h.pairs) {
      // x + y - 1 must normalize back into the same hexagon
      Hexagon h2 = hexagon_from_unit_term(x, y, eps_);
      if (h2.key != h.key) throw VerificationError("hexagon not closed under its transformations");
    }
  }
}

PastureElement apply(const PastureMorphism& f, const PastureElement& x) {
  if (x.zero) return x;
  if (x.coords.size() != static_cast<Eigen::Index>(f.images.size()))
    throw PreconditionError("morphism dimension mismatch");
  IntVector out = f.target.unit_group().canon_zero();
  for (size_t i = 0; i < f.images.size(); ++i) {
    const Int& c = x.coords(static_cast<Eigen::Index>(i));
    if (c == 0) continue;
    out += f.images[i] * c;
  }
  return PastureElement{false, f.target.unit_group().reduce(std::move(out))};
}

bool is_morphism(const PastureMorphism& f) {
  const FpAbelianGroup& g = f.source.unit_group();
  const FpAbelianGroup& h = f.target.unit_group();
  if (static_cast<int>(f.images.size()) != g.canon_dim()) return false;
  for (const IntVector& img : f.images)
    if (img.size() != h.canon_dim()) return false;
  // group hom well-defined on the torsion relations
  for (int i = 0; i < g.torsion_rank(); ++i) {
    IntVector scaled = f.images[static_cast<size_t>(i)] * g.invariant_factors()[static_cast<size_t>(i)];
    if (!h.canon_is_zero(h.reduce(std::move(scaled)))) return false;
  }
  // eps -> eps
  if (!f.target.element_equal(apply(f, f.source.epsilon()), f.target.epsilon())) return false;
  // every source hexagon maps into a target hexagon
  for (const Hexagon& hx : f.source.hexagons()) {
    const auto& [x, y] = hx.pairs.front();
    PastureElement fx = apply(f, PastureElement{false, x});
    PastureElement fy = apply(f, PastureElement{false, y});
    if (!f.target.is_fundamental_pair(fx, fy)) return false;
  }
  return true;
}

PastureMorphism morphism_from_pres_images(const Pasture& src, const Pasture& dst,
                                          const std::vector<PresElem>& gen_images) {
  if (gen_images.size() != src.generator_names().size())
    throw PreconditionError("one image per named generator required");
  std::vector<IntVector> orig;  // images of eps + named generators
  orig.push_back(dst.epsilon().coords);
  for (const PresElem& e : gen_images) orig.push_back(dst.unit_from_pres(e).coords);
  PastureMorphism f;
  f.source = src;
  f.target = dst;
  const FpAbelianGroup& g = src.unit_group();
  const FpAbelianGroup& h = dst.unit_group();
  for (int i = 0; i < g.canon_dim(); ++i) {
    IntVector img = h.canon_zero();
    for (int j = 0; j < g.num_generators(); ++j) {
      const Int& coef = g.section()(j, i);
      if (coef == 0) continue;
      img += orig[static_cast<size_t>(j)] * coef;
    }
    f.images.push_back(h.reduce(std::move(img)));
  }
  return f;
}

PastureMorphism compose(const PastureMorphism& g, const PastureMorphism& f) {
  PastureMorphism r;
  r.source = f.source;
  r.target = g.target;
  r.images.reserve(f.images.size());
  for (const IntVector& img : f.images)
    r.images.push_back(apply(g, PastureElement{false, img}).coords);
  return r;
}

PastureMorphism identity_morphism(const Pasture& p) {
  PastureMorphism f;
  f.source = p;
  f.target = p;
  const int n = p.unit_group().canon_dim();
  for (int i = 0; i < n; ++i) {
    IntVector e = IntVector::Zero(n);
    e(i) = 1;
    f.images.push_back(p.unit_group().reduce(std::move(e)));
  }
  return f;
}

bool morphism_equal(const PastureMorphism& f, const PastureMorphism& g) {
  if (f.images.size() != g.images.size()) return false;
  for (size_t i = 0; i < f.images.size(); ++i)
    if (!f.target.unit_group().canon_is_zero(
            f.target.unit_group().canon_sub(f.images[i], g.images[i])))
      return false;
  return true;
}

ColimitResult colimit(const Diagram& d) {
  for (const auto& e : d.edges) {
    if (e.from < 0 || e.from >= static_cast<int>(d.nodes.size()) || e.to < 0 ||
        e.to >= static_cast<int>(d.nodes.size()))
      throw PreconditionError("colimit: edge endpoint out of range");
    PastureMorphism f{d.nodes[static_cast<size_t>(e.from)], d.nodes[static_cast<size_t>(e.to)],
                      e.images};
    if (!is_morphism(f)) throw PreconditionError("colimit: invalid edge morphism");
  }

  // joint presentation: one generator per node canonical generator, shared eps
  std::vector<std::string> names;
  std::vector<int> offset(d.nodes.size() + 1, 0);
  for (size_t i = 0; i < d.nodes.size(); ++i) {
    offset[i] = static_cast<int>(names.size()) + 1;  // +1 for eps at joint index 0
    const int cd = d.nodes[i].unit_group().canon_dim();
    for (int j = 0; j < cd; ++j)
      names.push_back("n" + std::to_string(i) + ".g" + std::to_string(j));
  }
  offset[d.nodes.size()] = static_cast<int>(names.size()) + 1;

  auto embed = [&](size_t node, const IntVector& canon) {
    SparseRow row;
    for (Eigen::Index j = 0; j < canon.size(); ++j)
      if (canon(j) != 0) row.emplace_back(offset[node] + static_cast<int>(j), canon(j));
    return row;
  };

  std::vector<SparseRow> rows;
  std::vector<std::array<SparseRow, 3>> terms;
  for (size_t i = 0; i < d.nodes.size(); ++i) {
    const FpAbelianGroup& g = d.nodes[i].unit_group();
    for (int t = 0; t < g.torsion_rank(); ++t)
      rows.push_back({{offset[i] + t, g.invariant_factors()[static_cast<size_t>(t)]}});
    // node eps = joint eps
    SparseRow eps_row = embed(i, d.nodes[i].epsilon().coords);
    eps_row.emplace_back(0, Int(-1));
    rows.push_back(sparse_normalize(std::move(eps_row)));
    for (const Hexagon& h : d.nodes[i].hexagons()) {
      const auto& [x, y] = h.pairs.front();
      terms.push_back({embed(i, x), embed(i, y), SparseRow{{0, Int(1)}}});
    }
  }
  for (const auto& e : d.edges) {
    const auto from = static_cast<size_t>(e.from);
    const auto to = static_cast<size_t>(e.to);
    const int cd = d.nodes[from].unit_group().canon_dim();
    for (int j = 0; j < cd; ++j) {
      SparseRow row = {{offset[from] + j, Int(1)}};
      for (auto& [idx, val] : embed(to, e.images[static_cast<size_t>(j)]))
        row.emplace_back(idx, -val);
      rows.push_back(sparse_normalize(std::move(row)));
    }
  }

  ColimitResult res;
  res.pasture = Pasture::from_raw(std::move(names), std::move(rows), std::move(terms), {}, {},
                                  std::nullopt);
  for (size_t i = 0; i < d.nodes.size(); ++i) {
    PastureMorphism cone;
    cone.source = d.nodes[i];
    cone.target = res.pasture;
    const int cd = d.nodes[i].unit_group().canon_dim();
    for (int j = 0; j < cd; ++j)
      cone.images.push_back(
          res.pasture.unit_group().to_canonical_sparse({{offset[i] + j, Int(1)}}));
    res.cones.push_back(std::move(cone));
  }
  return res;
}

TensorResult tensor_with_inclusions(const Pasture& p1, const Pasture& p2) {
  Diagram d;
  d.nodes = {p1, p2};
  ColimitResult c = colimit(d);
  return TensorResult{std::move(c.pasture), std::move(c.cones[0]), std::move(c.cones[1])};
}

Pasture tensor(const Pasture& p1, const Pasture& p2) {
  return tensor_with_inclusions(p1, p2).pasture;
}

PastureMorphism quotient_map(const Pasture& p, const Pasture& q) {
  if (q.generator_names() != p.generator_names())
    throw PreconditionError("quotient_map: generator mismatch");
  PastureMorphism f;
  f.source = p;
  f.target = q;
  const FpAbelianGroup& g = p.unit_group();
  for (int i = 0; i < g.canon_dim(); ++i) {
    // section lifts the canonical generator to original exponents, which mean
    // the same thing in the quotient
    f.images.push_back(q.unit_group().to_canonical(g.section().col(i)));
  }
  return f;
}

namespace {

struct HomProblem {
  const Pasture* p;
  const Pasture* q;
  // constraints: evaluate once all support generators are assigned
  struct Cond {
    std::vector<int> support;       // canonical generators involved
    bool is_eps;                    // eps condition vs hexagon condition
    IntVector x, y;                 // hexagon pair (unused for eps)
  };
  std::vector<Cond> conds;
  std::vector<int> order;
};

HomProblem build_hom_problem(const Pasture& p, const Pasture& q) {
  HomProblem hp{&p, &q, {}, {}};
  const FpAbelianGroup& g = p.unit_group();
  auto support_of = [&](std::initializer_list<const IntVector*> vs) {
    std::set<int> s;
    for (const IntVector* v : vs)
      for (Eigen::Index i = 0; i < v->size(); ++i)
        if ((*v)(i) != 0) s.insert(static_cast<int>(i));
    return std::vector<int>(s.begin(), s.end());
  };
  {
    HomProblem::Cond c;
    c.is_eps = true;
    IntVector e = p.epsilon().coords;
    c.support = support_of({&e});
    hp.conds.push_back(std::move(c));
  }
  for (const Hexagon& h : p.hexagons()) {
    HomProblem::Cond c;
    c.is_eps = false;
    c.x = h.pairs.front().first;
    c.y = h.pairs.front().second;
    c.support = support_of({&c.x, &c.y});
    hp.conds.push_back(std::move(c));
  }
  // order generators so that constraints close early
  const int n = g.canon_dim();
  std::vector<bool> placed(n, false);
  std::vector<int> order;
  while (static_cast<int>(order.size()) < n) {
    int best_gen = -1;
    long best_score = -1;
    for (const auto& c : hp.conds) {
      int missing = 0, cand = -1;
      for (int s : c.support)
        if (!placed[s]) {
          ++missing;
          if (cand < 0) cand = s;
        }
      if (missing == 0) continue;
      long score = missing;
      if (best_score < 0 || score < best_score ||
          (score == best_score && cand < best_gen)) {
        best_score = score;
        best_gen = cand;
      }
    }
    if (best_gen < 0) {
      for (int i = 0; i < n; ++i)
        if (!placed[i]) {
          best_gen = i;
          break;
        }
    }
    placed[best_gen] = true;
    order.push_back(best_gen);
  }
  hp.order = std::move(order);
  return hp;
}

}  // namespace

std::vector<PastureMorphism> hom_enumerate(const Pasture& p, const Pasture& q, Budget& budget,
                                           bool first_only) {
  if (!q.unit_group().finite())
    throw PreconditionError("hom_enumerate: target unit group must be finite");
  HomProblem hp = build_hom_problem(p, q);
  const FpAbelianGroup& h = q.unit_group();

  // conditions with no generator support are constant; check them up front
  for (const auto& c : hp.conds) {
    if (!c.support.empty()) continue;
    if (c.is_eps) {
      if (!h.canon_is_zero(q.epsilon().coords)) return {};
    } else {
      if (!q.is_fundamental_pair(q.one(), q.one())) return {};
    }
  }

  auto eval = [&](const std::vector<std::optional<IntVector>>& images, int just) -> bool {
    for (const auto& c : hp.conds) {
      if (std::find(c.support.begin(), c.support.end(), just) == c.support.end()) continue;
      bool ready = true;
      for (int s : c.support)
        if (!images[static_cast<size_t>(s)]) {
          ready = false;
          break;
        }
      if (!ready) continue;
      auto map_vec = [&](const IntVector& v) {
        IntVector out = h.canon_zero();
        for (Eigen::Index i = 0; i < v.size(); ++i)
          if (v(i) != 0) out += *images[static_cast<size_t>(i)] * v(i);
        return h.reduce(std::move(out));
      };
      if (c.is_eps) {
        if (!h.canon_is_zero(h.canon_sub(map_vec(p.epsilon().coords), q.epsilon().coords)))
          return false;
      } else {
        PastureElement fx{false, map_vec(c.x)}, fy{false, map_vec(c.y)};
        if (!q.is_fundamental_pair(fx, fy)) return false;
      }
    }
    return true;
  };

  std::vector<GroupHom> homs = group_hom_enumerate(p.unit_group(), h, eval, budget, first_only,
                                                   &hp.order);
  std::vector<PastureMorphism> out;
  out.reserve(homs.size());
  for (auto& gh : homs) {
    PastureMorphism f{p, q, std::move(gh.images)};
    out.push_back(std::move(f));
  }
  // paranoia in degenerate cases (no generators): check eps and hexagons
  if (p.unit_group().canon_dim() == 0) {
    out.erase(std::remove_if(out.begin(), out.end(),
                             [](const PastureMorphism& f) { return !is_morphism(f); }),
              out.end());
  }
  std::sort(out.begin(), out.end(), [&](const PastureMorphism& a, const PastureMorphism& b) {
    std::string sa, sb;
    for (const auto& v : a.images) sa += serialize_exponents(v);
    for (const auto& v : b.images) sb += serialize_exponents(v);
    return sa < sb;
  });
  return out;
}

bool hom_exists(const Pasture& p, const Pasture& q, Budget& budget) {
  return !hom_enumerate(p, q, budget, /*first_only=*/true).empty();
}

}  // namespace foundry
