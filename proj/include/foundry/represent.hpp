#pragma once

#include "foundry/foundation.hpp"

#include <map>
#include <string>
#include <vector>

namespace foundry {

// A weak Grassmann-Pluecker function: one value per sorted basis, alternating
// extension implied.  Nonbases carry the value ZERO (GP0).
struct GPFunction {
  Matroid matroid;
  Pasture target;
  std::vector<PastureElement> values;  // aligned with matroid.bases()

  PastureElement value_of(SetMask sorted_set) const;  // ZERO on nonbases
};

// GP0-GP2 for every (r-2)-subset and quadruple.  The alternating signs cancel
// within each 3-term product, so the check runs on sorted-set values.
bool verify_gp(const GPFunction& f);

struct RescalingClassCount {
  Matroid matroid;
  std::string target_name;
  long count = 0;
};

// Enumerates all P-representations by backtracking and counts orbits of the
// (P^x)^(n+1) rescaling action via canonical representatives.
RescalingClassCount rescaling_classes(const Matroid& m, const Pasture& p,
                                      const std::string& target_name, Budget& budget);

// all valid GP functions (exposed for the small-case orbit-partition check)
std::vector<GPFunction> enumerate_gp(const Matroid& m, const Pasture& p, Budget& budget);

bool is_representable(const Matroid& m, const Pasture& p, Budget& budget);

// existence bits of Hom(row, target) per target name
std::vector<bool> representability_row(const Pasture& p, const std::vector<std::string>& targets,
                                       Budget& budget);

struct RepresentabilityTable {
  std::vector<std::string> rows;
  std::vector<std::string> columns;
  std::vector<std::vector<bool>> cells;

  std::string to_tsv() const;
};

RepresentabilityTable representability_table(const std::vector<std::string>& row_pastures,
                                             const std::vector<std::string>& targets,
                                             Budget& budget);

}  // namespace foundry
