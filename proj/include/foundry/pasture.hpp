#pragma once

#include "foundry/abgroup.hpp"

#include <array>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace foundry {

// Presentation-level element: ZERO, or a signed monomial over named generators.
struct PresElem {
  bool zero = false;
  int sign = 1;  // +1 or -1; the -1 factor is the distinguished element eps
  std::map<std::string, Int> exps;

  static PresElem zero_elem() { return PresElem{true, 1, {}}; }
  static PresElem one(int sign = 1) { return PresElem{false, sign, {}}; }
  static PresElem gen(const std::string& name, int sign = 1, Int exp = 1) {
    PresElem e{false, sign, {}};
    e.exps[name] = std::move(exp);
    return e;
  }
  PresElem times(const PresElem& o) const;
  PresElem inverse() const;
};

// A null-set term a + b + c, the additive relations of a presentation.
using PresTerm = std::array<PresElem, 3>;

// Either ZERO or a unit written in canonical coordinates of the owning
// pasture's unit group.
struct PastureElement {
  bool zero = false;
  IntVector coords;

  static PastureElement zero_elem() { return PastureElement{true, {}}; }
};

// Orbit of a fundamental pair (x, y) under the six standard transformations;
// stored with deduplicated pairs and a canonical byte key.
struct Hexagon {
  std::vector<std::pair<IntVector, IntVector>> pairs;
  std::string key;
};

class Pasture {
 public:
  Pasture() = default;

  static Pasture from_presentation(std::vector<std::string> generators,
                                   std::vector<PresTerm> add_relations,
                                   std::vector<PresElem> mult_relations = {},
                                   std::optional<std::string> name_hint = std::nullopt);

  // Low-level constructor over generators 0 = eps, 1..g = named ones.
  // mult_rows are exponent relations (== 1); unit_terms are all-unit null
  // terms.  Binary folding must already have happened.
  static Pasture from_raw(std::vector<std::string> gen_names, std::vector<SparseRow> mult_rows,
                          std::vector<std::array<SparseRow, 3>> unit_terms,
                          std::vector<PresElem> pres_mult, std::vector<PresTerm> pres_add,
                          std::optional<std::string> name_hint);

  const FpAbelianGroup& unit_group() const { return group_; }
  const std::vector<std::string>& generator_names() const { return gen_names_; }
  const std::vector<Hexagon>& hexagons() const { return hexagons_; }
  const std::optional<std::string>& name_hint() const { return name_hint_; }
  void set_name_hint(std::string s) { name_hint_ = std::move(s); }

  PastureElement one() const { return PastureElement{false, group_.canon_zero()}; }
  PastureElement epsilon() const { return PastureElement{false, eps_}; }
  bool minus_one_trivial() const { return group_.canon_is_zero(eps_); }

  // element arithmetic (multiplicative; ZERO absorbs)
  PastureElement mul(const PastureElement& a, const PastureElement& b) const;
  PastureElement inv(const PastureElement& a) const;
  PastureElement neg(const PastureElement& a) const;
  bool element_equal(const PastureElement& a, const PastureElement& b) const;
  std::string serialize_element(const PastureElement& a) const;

  // the class of named generator i (0-based, eps excluded)
  PastureElement generator(int i) const;
  PastureElement unit_from_pres(const PresElem& e) const;
  PastureElement element_from_pres(const PresElem& e) const;

  // null set membership of a + b + c
  bool null_term(const PastureElement& a, const PastureElement& b, const PastureElement& c) const;
  // x + y - 1 in N_P
  bool is_fundamental_pair(const PastureElement& x, const PastureElement& y) const;
  bool has_hexagon_key(const std::string& key) const { return hexagon_keys_.count(key) > 0; }
  Hexagon hexagon_from_unit_term(const IntVector& a, const IntVector& b, const IntVector& c) const;

  // deterministic enumeration of first coordinates of hexagon pairs
  std::vector<PastureElement> fundamental_elements() const;

  Pasture quotient(const std::vector<PresTerm>& terms) const;

  struct NumericalType {
    int free_rank = 0;
    std::vector<Int> invariant_factors;
    bool minus_one_trivial = false;
    int hexagon_count = 0;
    bool operator==(const NumericalType&) const = default;
  };
  NumericalType numerical_type() const;

  // original presentation, kept verbatim for serialization round trips
  const std::vector<PresElem>& pres_mult_relations() const { return pres_mult_; }
  const std::vector<PresTerm>& pres_add_relations() const { return pres_add_; }

  // structural consistency: every hexagon closed under its six transformations
  void validate() const;

 private:
  std::vector<std::string> gen_names_;
  FpAbelianGroup group_;  // over 1 + #gen_names generators, generator 0 = eps
  IntVector eps_;
  std::vector<Hexagon> hexagons_;  // sorted by key
  std::set<std::string> hexagon_keys_;
  std::vector<PresElem> pres_mult_;
  std::vector<PresTerm> pres_add_;
  std::optional<std::string> name_hint_;
};

struct PastureMorphism {
  Pasture source;
  Pasture target;
  std::vector<IntVector> images;  // per source canonical generator
};

PastureElement apply(const PastureMorphism& f, const PastureElement& x);
bool is_morphism(const PastureMorphism& f);
// morphism from images of the source's named generators (eps maps to eps)
PastureMorphism morphism_from_pres_images(const Pasture& src, const Pasture& dst,
                                          const std::vector<PresElem>& gen_images);
PastureMorphism compose(const PastureMorphism& g, const PastureMorphism& f);  // g after f
PastureMorphism identity_morphism(const Pasture& p);
bool morphism_equal(const PastureMorphism& f, const PastureMorphism& g);

// Finite directed multigraph of pastures; input to colimit.
struct Diagram {
  std::vector<Pasture> nodes;
  struct Edge {
    int from = 0, to = 0;
    std::vector<IntVector> images;  // per source canonical generator
  };
  std::vector<Edge> edges;
};

struct ColimitResult {
  Pasture pasture;
  std::vector<PastureMorphism> cones;  // one per node
};
ColimitResult colimit(const Diagram& d);

struct TensorResult {
  Pasture pasture;
  PastureMorphism inc1, inc2;
};
TensorResult tensor_with_inclusions(const Pasture& p1, const Pasture& p2);
Pasture tensor(const Pasture& p1, const Pasture& p2);

// canonical surjection P -> P // S for q = p.quotient(terms)
PastureMorphism quotient_map(const Pasture& p, const Pasture& q);

std::vector<PastureMorphism> hom_enumerate(const Pasture& p, const Pasture& q, Budget& budget,
                                           bool first_only = false);
bool hom_exists(const Pasture& p, const Pasture& q, Budget& budget);

std::vector<PastureMorphism> automorphisms(const Pasture& p, Budget& budget);
std::optional<PastureMorphism> find_isomorphism(const Pasture& p, const Pasture& q, Budget& budget);

// named-pasture catalog
std::vector<std::string> pasture_catalog_names();
bool is_catalog_pasture(const std::string& name);
Pasture named_pasture(const std::string& name);

struct IdentifyResult {
  std::optional<std::string> name;
  bool budget_exhausted = false;
  std::optional<PastureMorphism> witness;
};
IdentifyResult identify(const Pasture& p, Budget& budget);

}  // namespace foundry
