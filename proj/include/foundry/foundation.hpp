#pragma once

#include "foundry/matroid.hpp"
#include "foundry/pasture.hpp"

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace foundry {

// A universal cross ratio class [ab;cd]_I.  Classes are keyed by the
// hyperplane quadruple Psi(I,a,b,c,d) = (<Ia>,<Ib>,<Ic>,<Id>) folded under the
// Klein symmetry (ab;cd) ~ (ba;dc) ~ (cd;ab) ~ (dc;ba), whose members all
// carry the same cross ratio.
struct CrossRatioSymbol {
  SetMask index_set = 0;  // the (r-2)-subset I
  int a = 0, b = 0, c = 0, d = 0;
  bool nondegenerate = false;
  std::array<SetMask, 4> psi{};
};

using PsiKey = std::array<SetMask, 4>;
PsiKey fold_psi(const PsiKey& q);

// All Omega classes: one canonical representative (lexicographically least
// tuple) per folded Psi image.  Empty when rank < 2.
std::vector<CrossRatioSymbol> enumerate_omega(const Matroid& m);

struct FoundationReport {
  Pasture pasture;
  std::vector<CrossRatioSymbol> classes;  // all classes, degenerate included
  // canonical coordinates of the generator attached to each nondegenerate
  // class, keyed by folded Psi quadruple
  std::map<PsiKey, PastureElement> dictionary;
  std::string method;
  std::vector<std::pair<std::string, bool>> cross_checks;
  IdentifyResult identification;

  // the image of a cross-ratio tuple (1 for degenerate classes)
  PastureElement eval(SetMask index_set, int a, int b, int c, int d, const Matroid& m) const;
};

FoundationReport grs_presentation(const Matroid& m);

enum class DiagramClass { general, two_connected, three_connected };

struct MatroidDiagram {
  std::vector<EmbeddedMinor> nodes;
  std::vector<std::pair<int, int>> edges;  // from smaller minor into larger
};

MatroidDiagram fundamental_diagram(const Matroid& m, DiagramClass cls);

enum class LatticeVariant { full, rank_le_4, rank_le_3, three_connected };

struct LatticeDiagram {
  std::vector<UpperSublattice> nodes;
  std::vector<EmbeddedMinor> realizations;
  std::vector<std::pair<int, int>> edges;  // sublattice inclusions
};

LatticeDiagram lattice_diagram(const Matroid& m, LatticeVariant variant);

FoundationReport foundation_via_diagram(const Matroid& m, DiagramClass cls);
FoundationReport foundation_via_lattice(const Matroid& m, LatticeVariant variant);

struct FoundationOptions {
  std::string method = "grs";  // grs | diagram | diagram2 | diagram3 | lattice |
                               // lattice3 | lattice_le3 | lattice_le4
  // unset means the default policy: cross-check matroids on up to 7 elements
  std::optional<bool> cross_check;
  bool identify = false;
};

// Dispatches to the requested route; with cross_check set, every applicable
// route is computed and pairwise identification results are recorded.  A
// cross-check mismatch is a hard failure.
FoundationReport foundation(const Matroid& m, const FoundationOptions& opts = {});

// routes applicable to m (used by cross-check and the verification suite)
std::vector<std::string> applicable_methods(const Matroid& m);

int worker_threads();  // FOUNDRY_THREADS, default 1

}  // namespace foundry
