#include "cqt/swap.hpp"

#include <cmath>
#include <set>
#include <stdexcept>

namespace cqt {

namespace {

QubitId position_qubit(int i) { return QubitId("q" + std::to_string(i + 1)); }

void check_scenario(const SwapScenario& s) {
  if (s.left < 0 || s.left > 7 || s.right < 0 || s.right > 7) {
    throw std::invalid_argument("swap scenario: basis indices must be in 0..7");
  }
  std::set<int> seen(s.regroup.begin(), s.regroup.end());
  if (seen.size() != 6 || *seen.begin() != 0 || *seen.rbegin() != 5) {
    throw std::invalid_argument("swap scenario: regroup is not a permutation of six positions");
  }
}

}  // namespace

SparseState swap_regrouped_state(const SwapScenario& scenario) {
  check_scenario(scenario);
  const SparseState product =
      tensor(ghz_state(scenario.left, {position_qubit(0), position_qubit(1), position_qubit(2)}),
             ghz_state(scenario.right, {position_qubit(3), position_qubit(4), position_qubit(5)}));
  std::vector<QubitId> order;
  for (int i : scenario.regroup) order.push_back(position_qubit(i));
  return product.permute(order);
}

SwapSummary swap_table(const SwapScenario& scenario) {
  const SparseState regrouped = swap_regrouped_state(scenario);
  const auto& reg = regrouped.reg();
  const GhzGrid grid = ghz_decompose(regrouped, {reg[0], reg[1], reg[2]}, {reg[3], reg[4], reg[5]});

  SwapSummary summary;
  summary.scenario = scenario;
  for (int j = 0; j < 8; ++j) {
    for (int k = 0; k < 8; ++k) {
      const cx c = grid.c[static_cast<std::size_t>(j)][static_cast<std::size_t>(k)];
      if (std::abs(c) >= kPruneEps) summary.entries.push_back({j, k, c});
    }
  }
  return summary;
}

SwapRoundtrip swap_roundtrip(const SwapScenario& scenario, GhzIndex forced) {
  const SparseState regrouped = swap_regrouped_state(scenario);
  const auto& reg = regrouped.reg();

  std::mt19937_64 rng(0);  // unused: the outcome is forced
  const GhzMeasurement m = ghz_measure(regrouped, {reg[0], reg[1], reg[2]}, forced, rng);

  const auto& rest = m.collapsed.reg();
  for (int k = 0; k < 8; ++k) {
    const SparseState candidate = ghz_state(k, {rest[0], rest[1], rest[2]});
    if (std::abs(fidelity(m.collapsed, candidate) - 1.0) <= 1e-12) {
      return {k, m.probability};
    }
  }
  throw std::runtime_error("swap_roundtrip: remainder is not a basis state");
}

}  // namespace cqt
