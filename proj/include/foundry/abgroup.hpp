#pragma once

#include "foundry/numeric.hpp"

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace foundry {

struct SmithResult {
  IntMatrix u, d, v;  // u * a * v = d
};

// Smith normal form over the integers.  Pivot choice is the smallest nonzero
// absolute value, ties broken by lowest (row, col) index, so outputs are
// deterministic.  d is diagonal with d(0,0) | d(1,1) | ... and nonnegative.
SmithResult smith_normal_form(const IntMatrix& a);

// A relation vector over group generators, sparse and sorted by index.
using SparseRow = std::vector<std::pair<int, Int>>;

SparseRow sparse_normalize(SparseRow row);
std::string serialize_exponents(const IntVector& v);

// An element written as an exponent vector over a group's generator basis.
struct GroupElement {
  IntVector exponents;
};

// Finitely generated abelian group presented by generators and integer
// relations.  Canonicalization reduces the relation lattice to invariant
// factors d1 | d2 | ... plus a free rank; elements are compared in canonical
// coordinates, never by raw exponent vectors.
class FpAbelianGroup {
 public:
  FpAbelianGroup() : FpAbelianGroup(0, {}) {}
  FpAbelianGroup(int num_generators, std::vector<SparseRow> relations);

  int num_generators() const { return num_generators_; }
  const std::vector<SparseRow>& relations() const { return relations_; }
  IntMatrix relations_matrix() const;

  const std::vector<Int>& invariant_factors() const { return invariant_factors_; }
  int torsion_rank() const { return static_cast<int>(invariant_factors_.size()); }
  int free_rank() const { return free_rank_; }
  int canon_dim() const { return torsion_rank() + free_rank_; }

  // canonical coords = reduce(projection * exponents); section maps a canonical
  // basis vector back to a representative exponent vector.
  const IntMatrix& projection() const { return projection_; }
  const IntMatrix& section() const { return section_; }

  IntVector to_canonical(const IntVector& exponents) const;
  IntVector to_canonical_sparse(const SparseRow& row) const;
  IntVector reduce(IntVector canon) const;
  IntVector canon_zero() const { return IntVector::Zero(canon_dim()); }
  IntVector canon_neg(const IntVector& a) const { return reduce(-a); }
  IntVector canon_add(const IntVector& a, const IntVector& b) const { return reduce(a + b); }
  IntVector canon_sub(const IntVector& a, const IntVector& b) const { return reduce(a - b); }
  bool canon_is_zero(const IntVector& a) const;

  bool element_equal(const GroupElement& a, const GroupElement& b) const;

  bool finite() const { return free_rank_ == 0; }
  Int order() const;  // throws PreconditionError if infinite
  // All elements in lexicographic canonical-coordinate order (finite only).
  std::vector<IntVector> all_elements() const;
  // Order of a canonical element; 0 means infinite.
  Int element_order(const IntVector& canon) const;

  FpAbelianGroup quotient_group(const std::vector<SparseRow>& extra_relations) const;

 private:
  void canonicalize();

  int num_generators_;
  std::vector<SparseRow> relations_;
  std::vector<Int> invariant_factors_;
  int free_rank_ = 0;
  IntMatrix projection_;
  IntMatrix section_;
};

// A homomorphism G -> H given by images (canonical coordinates in H) of G's
// canonical generators.
struct GroupHom {
  std::vector<IntVector> images;
};

// Callback invoked after each tentative assignment; images[i] is set for
// assigned generators.  Returning false prunes the branch.
using HomConstraint =
    std::function<bool(const std::vector<std::optional<IntVector>>& images, int just_assigned)>;

// All group homomorphisms G -> H (H finite) compatible with the constraint,
// found by backtracking over canonical generators with divisibility pruning.
// Deterministic order.  With first_only, stops after one witness.
std::vector<GroupHom> group_hom_enumerate(const FpAbelianGroup& g, const FpAbelianGroup& h,
                                          const HomConstraint& constraints, Budget& budget,
                                          bool first_only = false,
                                          const std::vector<int>* gen_order = nullptr);

}  // namespace foundry
