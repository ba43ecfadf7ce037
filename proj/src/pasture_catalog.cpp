#include "foundry/pasture.hpp"

#include <algorithm>
#include <map>
#include <mutex>

namespace foundry {

namespace {

PresElem pe(const std::string& name, long exp = 1, int sign = 1) {
  return PresElem::gen(name, sign, Int(exp));
}
PresElem one(int sign = 1) { return PresElem::one(sign); }

PresTerm term(PresElem a, PresElem b, PresElem c) { return PresTerm{a, b, c}; }

// GF(q) for q in {2,3,4,5,7,8,9} via exp/log tables over a primitive element.
struct SmallField {
  int q = 0;
  std::vector<int> log;                 // element code -> discrete log (units)
  std::vector<int> expo;                // power -> element code
  std::vector<std::vector<int>> add;    // addition table over codes
  int minus_one_log = 0;
};

SmallField make_field(int q) {
  SmallField f;
  f.q = q;
  auto build_prime = [&](int p) {
    f.add.assign(p, std::vector<int>(p));
    for (int a = 0; a < p; ++a)
      for (int b = 0; b < p; ++b) f.add[a][b] = (a + b) % p;
    int g = 0;
    for (int cand = 2; cand < p; ++cand) {
      int x = 1, ord = 0;
      do {
        x = x * cand % p;
        ++ord;
      } while (x != 1);
      if (ord == p - 1) {
        g = cand;
        break;
      }
    }
    if (p == 2) g = 1;
    f.expo.assign(p - 1, 0);
    f.log.assign(p, -1);
    int x = 1;
    for (int i = 0; i < p - 1; ++i) {
      f.expo[i] = x;
      f.log[x] = i;
      x = x * g % p;
    }
  };
  auto build_poly = [&](int p, int deg, int modpoly) {
    // codes are base-p digit vectors packed as integers
    int n = 1;
    for (int i = 0; i < deg; ++i) n *= p;
    auto addc = [&](int a, int b) {
      int r = 0, m = 1;
      for (int i = 0; i < deg; ++i) {
        r += ((a % p) + (b % p)) % p * m;
        a /= p;
        b /= p;
        m *= p;
      }
      return r;
    };
    auto mulx = [&](int a) {
      // multiply by t, reduce by modpoly (monic, coded in base p)
      std::vector<int> d(deg + 1, 0);
      for (int i = 0; i < deg; ++i) {
        d[i + 1] = a % p;
        a /= p;
      }
      int top = d[deg];
      if (top) {
        int mp = modpoly;
        for (int i = 0; i <= deg; ++i) {
          d[i] = ((d[i] - top * (mp % p)) % p + p) % p;
          mp /= p;
        }
      }
      int r = 0, m = 1;
      for (int i = 0; i < deg; ++i) {
        r += d[i] * m;
        m *= p;
      }
      return r;
    };
    auto mulc = [&](int a, int b) {
      int r = 0;
      int shifted = a;
      int bb = b;
      for (int i = 0; i < deg; ++i) {
        int digit = bb % p;
        bb /= p;
        int acc = shifted;
        for (int k = 0; k < digit; ++k) r = addc(r, acc);
        shifted = mulx(shifted);
      }
      return r;
    };
    f.add.assign(n, std::vector<int>(n));
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) f.add[a][b] = addc(a, b);
    // find a primitive element
    for (int cand = 1; cand < n; ++cand) {
      int x = cand, ord = 1;
      while (x != 1) {
        x = mulc(x, cand);
        ++ord;
        if (ord > n) break;
      }
      if (ord == n - 1) {
        f.expo.assign(n - 1, 0);
        f.log.assign(n, -1);
        x = 1;
        for (int i = 0; i < n - 1; ++i) {
          f.expo[i] = x;
          f.log[x] = i;
          x = mulc(x, cand);
        }
        break;
      }
    }
  };
  switch (q) {
    case 2: build_prime(2); break;
    case 3: build_prime(3); break;
    case 5: build_prime(5); break;
    case 7: build_prime(7); break;
    case 4: build_poly(2, 2, /*t^2+t+1*/ 1 + 1 * 2 + 1 * 4); break;
    case 8: build_poly(2, 3, /*t^3+t+1*/ 1 + 1 * 2 + 0 * 4 + 1 * 8); break;
    case 9: build_poly(3, 2, /*t^2+1*/ 1 + 0 * 3 + 1 * 9); break;
    default: throw ParseError("unsupported field size");
  }
  // -1 = additive inverse of 1
  int minus1 = -1;
  for (int a = 0; a < static_cast<int>(f.add.size()); ++a)
    if (f.add[1][a] == 0) minus1 = a;
  f.minus_one_log = f.log[minus1];
  return f;
}

Pasture finite_field_pasture(int q, const std::string& hint) {
  SmallField f = make_field(q);
  std::vector<SparseRow> mult;
  mult.push_back({{1, Int(q - 1)}});                      // g^(q-1) = 1
  mult.push_back({{0, Int(1)}, {1, Int(-f.minus_one_log)}});  // eps = g^log(-1)
  std::vector<std::array<SparseRow, 3>> terms;
  for (int a = 1; a < q; ++a)
    for (int b = a; b < q; ++b) {
      int ab = f.add[f.expo[f.log[a]]][f.expo[f.log[b]]];
      // c with a + b + c = 0
      int c = -1;
      for (int x = 1; x < q; ++x)
        if (f.add[ab][x] == 0) c = x;
      if (ab == 0 || c <= 0) continue;
      terms.push_back({SparseRow{{1, Int(f.log[a])}}, SparseRow{{1, Int(f.log[b])}},
                       SparseRow{{1, Int(f.log[c])}}});
    }
  return Pasture::from_raw({"g"}, std::move(mult), std::move(terms), {}, {}, hint);
}

Pasture make_k_regular(int k) {
  // generators a_i_j stand for alpha_j - alpha_i, -1 <= i < j <= k, j != 0,
  // with alpha_{-1} = 0 and alpha_0 = 1
  auto gname = [](int i, int j) {
    return "a" + std::to_string(i) + "_" + std::to_string(j);
  };
  auto diff = [&](int j, int i) {  // alpha_j - alpha_i as a PresElem, i < j
    if (i == -1 && j == 0) return one();
    return pe(gname(i, j));
  };
  auto sdiff = [&](int j, int i) {  // alpha_j - alpha_i for any j != i
    if (i < j) return diff(j, i);
    PresElem e = diff(i, j);
    e.sign = -e.sign;
    return e;
  };
  std::vector<std::string> gens;
  for (int i = -1; i <= k; ++i)
    for (int j = i + 1; j <= k; ++j)
      if (j != 0) gens.push_back(gname(i, j));
  std::vector<PresTerm> add;
  for (int i = -1; i <= k; ++i)
    for (int j = i + 1; j <= k; ++j)
      for (int l = j + 1; l <= k; ++l) {
        // (a_i - a_l)/(a_j - a_l) + (a_i - a_j)/(a_l - a_j) - 1
        PresElem t1 = sdiff(i, l).times(sdiff(j, l).inverse());
        PresElem t2 = sdiff(i, j).times(sdiff(l, j).inverse());
        add.push_back(term(t1, t2, one(-1)));
        for (int m = l + 1; m <= k; ++m) {
          PresElem u1 = sdiff(i, l).times(sdiff(j, m)).times(
              sdiff(i, m).times(sdiff(j, l)).inverse());
          PresElem u2 = sdiff(i, j).times(sdiff(l, m)).times(
              sdiff(i, m).times(sdiff(l, j)).inverse());
          add.push_back(term(u1, u2, one(-1)));
        }
      }
  return Pasture::from_presentation(gens, add, {}, "U_" + std::to_string(k));
}

Pasture build_named(const std::string& name) {
  if (name == "regular") return Pasture::from_presentation({}, {}, {}, "regular");
  if (name == "F2") return Pasture::from_presentation({}, {term(one(), one(), PresElem::zero_elem())}, {}, "F2");
  if (name == "F3") return Pasture::from_presentation({}, {term(one(), one(), one())}, {}, "F3");
  if (name == "K")
    return Pasture::from_presentation(
        {}, {term(one(), one(), PresElem::zero_elem()), term(one(), one(), one())}, {}, "K");
  if (name == "S") return Pasture::from_presentation({}, {term(one(), one(), one(-1))}, {}, "S");
  if (name == "W")
    return Pasture::from_presentation({}, {term(one(), one(), one()), term(one(), one(), one(-1))},
                                      {}, "W");
  if (name == "U")
    return Pasture::from_presentation({"x", "y"}, {term(pe("x"), pe("y"), one(-1))}, {}, "U");
  if (name == "D")
    return Pasture::from_presentation({"x"}, {term(pe("x"), one(-1), one(-1))}, {}, "D");
  if (name == "H")
    return Pasture::from_presentation(
        {"z"}, {term(pe("z", 3), one(), PresElem::zero_elem()),
                term(pe("z"), pe("z", -1), one(-1))},
        {}, "H");
  if (name == "G")
    return Pasture::from_presentation({"x"}, {term(pe("x", 2), pe("x"), one(-1))}, {}, "G");
  if (name == "V") {
    std::vector<std::string> gens = {"x1", "x2", "x3", "x4", "x5"};
    std::vector<PresTerm> add;
    for (int i = 1; i <= 5; ++i) {
      int prev = (i + 3) % 5 + 1, next = i % 5 + 1;
      add.push_back(term(pe(gens[static_cast<size_t>(i - 1)]),
                         pe(gens[static_cast<size_t>(prev - 1)])
                             .times(pe(gens[static_cast<size_t>(next - 1)])),
                         one(-1)));
    }
    return Pasture::from_presentation(gens, add, {}, "V");
  }
  if (name == "H2")
    return Pasture::from_presentation(
        {"i", "x"},
        {term(pe("i", 2), one(), PresElem::zero_elem()), term(pe("x"), pe("i", 1, -1), one(-1)),
         term(pe("x", 2), pe("i", 1, -1), pe("i", 1, -1))},
        {}, "H2");
  if (name == "H3")
    return Pasture::from_presentation(
        {"x", "y", "z"},
        {term(pe("x"), pe("y"), one(-1)), term(pe("x").times(pe("y")), pe("z"), one(-1)),
         term(pe("x"), pe("y", 2), pe("z", 1, -1)), term(pe("x", 2), pe("y"), pe("z", 1, -1))},
        {}, "H3");
  if (name == "H4") {
    auto m = [&](std::initializer_list<std::pair<const char*, long>> factors, int sign = 1) {
      PresElem e = one(sign);
      for (auto& [n2, x] : factors) e = e.times(pe(n2, x));
      return e;
    };
    std::vector<PresTerm> add = {
        term(pe("x"), pe("s"), one(-1)),
        term(pe("y"), pe("t"), one(-1)),
        term(m({{"x", 1}, {"y", 1}}), pe("z"), one(-1)),
        term(m({{"s", 1}, {"z", -1}}), m({{"x", 1}, {"t", 1}, {"z", -1}}), one(-1)),
        term(m({{"t", 1}, {"z", -1}}), m({{"y", 1}, {"s", 1}, {"z", -1}}), one(-1)),
        term(m({{"w", 1}, {"z", -1}}), m({{"s", 1}, {"t", 1}, {"z", -1}}), one(-1)),
        term(m({{"x", 1}, {"t", 1}, {"w", -1}}), m({{"y", 1}, {"s", 1}, {"w", -1}}), one(-1)),
        term(m({{"w", 1}, {"y", -1}, {"z", -1}}),
             m({{"x", 1}, {"t", 2}, {"y", -1}, {"z", -1}}, -1), one(-1)),
        term(m({{"w", 1}, {"x", -1}, {"z", -1}}),
             m({{"y", 1}, {"s", 2}, {"x", -1}, {"z", -1}}, -1), one(-1)),
    };
    return Pasture::from_presentation({"x", "y", "z", "s", "t", "w"}, add, {}, "H4");
  }
  if (name == "K2")
    return Pasture::from_presentation(
        {"x", "y", "z"},
        {term(pe("y"), pe("x", 1, -1), one(-1)), term(pe("z"), pe("y", 1, -1), one(-1)),
         term(pe("y", 2), pe("x").times(pe("z")), one(-1))},
        {}, "K2");
  if (name == "P4")
    return Pasture::from_presentation(
        {"x", "y", "z", "w"},
        {term(pe("x"), pe("y"), one(-1)), term(pe("z"), pe("x", 1, -1), one(-1)),
         term(pe("w"), pe("y", 1, -1), one(-1)), term(pe("x", 2), pe("y").times(pe("z")), one(-1)),
         term(pe("y", 2), pe("x").times(pe("w")), one(-1))},
        {}, "P4");
  if (name == "F4") return finite_field_pasture(4, "F4");
  if (name == "F5") return finite_field_pasture(5, "F5");
  if (name == "F7") return finite_field_pasture(7, "F7");
  if (name == "F8") return finite_field_pasture(8, "F8");
  if (name == "F9") return finite_field_pasture(9, "F9");
  if (name.rfind("U_k(", 0) == 0 && name.back() == ')') {
    int k = std::stoi(name.substr(4, name.size() - 5));
    if (k < 0 || k > 6) throw ParseError("U_k supported for 0 <= k <= 6");
    return make_k_regular(k);
  }
  if (name.rfind("U_", 0) == 0) {
    int k = std::stoi(name.substr(2));
    if (k < 0 || k > 6) throw ParseError("U_k supported for 0 <= k <= 6");
    return make_k_regular(k);
  }
  throw ParseError("unknown pasture name: " + name);
}

}  // namespace

std::vector<std::string> pasture_catalog_names() {
  return {"regular", "F2", "F3", "K",  "S",  "W",  "U",   "D",   "H",   "G",
          "F4",      "F5", "F7", "F8", "F9", "V",  "U_3", "U_4", "H2",  "H3",
          "H4",      "K2", "P4", "U_0", "U_1", "U_2"};
}

bool is_catalog_pasture(const std::string& name) {
  auto names = pasture_catalog_names();
  if (std::find(names.begin(), names.end(), name) != names.end()) return true;
  return name.rfind("U_k(", 0) == 0;
}

Pasture named_pasture(const std::string& name) {
  static std::mutex mu;
  static std::map<std::string, Pasture> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(name);
  if (it != cache.end()) return it->second;
  Pasture p = build_named(name);
  cache.emplace(name, p);
  return p;
}

}  // namespace foundry
