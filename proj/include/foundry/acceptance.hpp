#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace foundry {

struct CriterionResult {
  std::string name;
  bool pass = false;
  double seconds = 0;
  std::vector<std::string> failures;
};

// Runs the verification suite; one pass/fail line per criterion is written to
// `out`.  With `fast`, matroids on more than 7 elements are skipped.
// Returns the number of failed criteria.
int run_acceptance(bool fast, std::ostream& out);

}  // namespace foundry
