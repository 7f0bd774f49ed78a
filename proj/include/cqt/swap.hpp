#pragma once

#include <vector>

#include "cqt/basis.hpp"

namespace cqt {

// Two entangled triples on positions 1..6, regrouped before a joint
// measurement of the first three regrouped positions. The default regrouping
// hands positions (1,5,6) to the measuring side and (2,3,4) to the remainder.
struct SwapScenario {
  GhzIndex left = 0;
  GhzIndex right = 0;
  std::array<int, 6> regroup{0, 4, 5, 1, 2, 3};  // zero-based positions
};

struct SwapEntry {
  int j = 0;  // measured-triple basis index
  int k = 0;  // remainder-triple basis index
  cx c;
};

struct SwapSummary {
  SwapScenario scenario;
  std::vector<SwapEntry> entries;  // nonzero coefficients, sorted by (j, k)
};

// The regrouped six-qubit product state (register follows the regrouping).
SparseState swap_regrouped_state(const SwapScenario& scenario);

// Builds |G_left> ⊗ |G_right>, regroups, and decomposes in the product basis.
SwapSummary swap_table(const SwapScenario& scenario);

struct SwapRoundtrip {
  GhzIndex remainder = 0;
  double probability = 0.0;
};

// Measures the first regrouped triple with a forced outcome; the remaining
// triple must land exactly on one basis state, whose index is returned.
SwapRoundtrip swap_roundtrip(const SwapScenario& scenario, GhzIndex forced);

}  // namespace cqt
