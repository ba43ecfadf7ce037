#pragma once

#include "foundry/numeric.hpp"

#include <cstdint>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace foundry {

using SetMask = std::uint32_t;  // ground sets up to 20 elements

inline int popcount(SetMask m) { return __builtin_popcount(m); }
std::vector<int> mask_to_vec(SetMask m);
SetMask vec_to_mask(const std::vector<int>& v);

struct FlatLattice {
  std::vector<std::vector<SetMask>> by_rank;  // flats grouped by rank
  std::unordered_map<SetMask, int> rank_of;
  std::vector<std::pair<SetMask, SetMask>> covers;  // (lower, upper)

  std::vector<SetMask> atoms_above(SetMask flat) const;  // flats covering `flat`
  bool is_flat(SetMask f) const { return rank_of.count(f) > 0; }
};

// Matroid given by its bases, stored as bitsets in a sorted vector.  The basis
// exchange axiom is validated on construction.
class Matroid {
 public:
  Matroid() = default;
  static Matroid from_bases(int n, int r, std::vector<SetMask> bases);
  static Matroid from_bases_vec(int n, int r, const std::vector<std::vector<int>>& bases);
  static Matroid from_nonbases(int n, int r, const std::vector<std::vector<int>>& nonbases);
  // circuits of size <= r+1; every (r+1)-set containing no listed circuit is
  // implicitly dependent
  static Matroid from_circuits(int n, int r, const std::vector<std::vector<int>>& circuits);

  int n() const { return n_; }
  int rank() const { return r_; }
  SetMask ground() const { return (n_ >= 32) ? ~SetMask(0) : ((SetMask(1) << n_) - 1); }
  const std::vector<SetMask>& bases() const { return bases_; }
  bool is_basis(SetMask s) const;

  int rank_of(SetMask x) const;
  SetMask closure(SetMask x) const;
  bool independent(SetMask x) const { return rank_of(x) == popcount(x); }
  bool coindependent(SetMask x) const { return rank_of(ground() & ~x) == r_; }
  bool is_loop(int e) const { return rank_of(SetMask(1) << e) == 0; }

  std::vector<SetMask> hyperplanes() const;  // corank-1 flats
  const FlatLattice& flat_lattice() const;   // computed lazily, cached

  Matroid dual() const;
  Matroid simplify() const;
  std::string text_form() const;  // "r n / b1 b2 ..." with sorted digit strings
  static Matroid from_text(const std::string& text);

  bool operator==(const Matroid& o) const { return n_ == o.n_ && r_ == o.r_ && bases_ == o.bases_; }

 private:
  int n_ = 0, r_ = 0;
  std::vector<SetMask> bases_;
  mutable std::shared_ptr<const FlatLattice> lattice_;
  mutable std::shared_ptr<std::mutex> lattice_mu_ = std::make_shared<std::mutex>();

  void validate_exchange() const;
};

// Minor with a fixed choice of deleted and contracted subsets; original
// labels are retained via `labels`.
struct EmbeddedMinor {
  SetMask contract = 0;  // independent
  SetMask del = 0;       // coindependent, disjoint from contract
  Matroid minor;
  std::vector<int> labels;  // minor element -> parent element

  SetMask to_parent(SetMask local) const;
  int to_local(int parent_elem) const;  // -1 if removed
};

EmbeddedMinor make_minor(const Matroid& m, SetMask del, SetMask contract);
Matroid direct_sum(const Matroid& a, const Matroid& b);

std::optional<std::vector<int>> is_isomorphic(const Matroid& a, const Matroid& b);
bool has_minor(const Matroid& m, const Matroid& n);

struct Connectivity {
  bool is_2_connected = false;
  bool is_3_connected = false;
};
Connectivity connectivity(const Matroid& m);

// An upper sublattice of the lattice of flats: bottom flat of corank equal to
// the sublattice rank, atoms chosen among the flats covering the bottom.
struct UpperSublattice {
  SetMask bottom = 0;
  std::vector<SetMask> atoms;
  std::string type_tag;
  std::vector<SetMask> flats;  // all joins of atom subsets, sorted
};

const std::vector<std::string>& upper_sublattice_types();
std::vector<UpperSublattice> upper_sublattices(const Matroid& m, const std::string& type_tag);

// Full upper sublattice over a bottom flat: every flat above it.
UpperSublattice full_upper_sublattice(const Matroid& m, SetMask bottom);

// The embedded minor realizing an upper sublattice (lexicographically least
// independent spanning set of the bottom; elements outside the atoms deleted).
EmbeddedMinor realize_upper_sublattice(const Matroid& m, const UpperSublattice& s);

// Scum-theorem image of an embedded minor: bottom <contract>, atoms the
// closures <contract, e> for retained elements e.
UpperSublattice psi_image(const Matroid& m, const EmbeddedMinor& em);

// is the sublattice lattice-isomorphic to the lattice of flats of `other`?
bool sublattice_matches_matroid(const Matroid& m, const UpperSublattice& s, const Matroid& other);

std::vector<std::string> matroid_catalog_names();
bool is_catalog_matroid(const std::string& name);
Matroid named_matroid(const std::string& name);

}  // namespace foundry
