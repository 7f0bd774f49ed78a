#pragma once

#include <string>
#include <vector>

#include "cqt/network.hpp"

namespace cqt {

struct EfficiencyRecord {
  std::string name;
  int q_s = 0;  // qubits teleported
  int q_u = 0;  // channel qubits
  int b_t = 0;  // classical bits
  double eta = 0.0;
};

// q_s / (q_u + b_t). Throws on negative counts or a zero denominator.
double efficiency(int q_s, int q_u, int b_t);

struct ComparisonRow {
  EfficiencyRecord record;
  std::string printed;  // published percentage, e.g. "31.5%"
};

// Resource counts of contemporary cyclic teleportation schemes with their
// published efficiencies; this protocol's row is last.
std::vector<ComparisonRow> comparison_table();

// True when eta agrees with a published percentage: equal after truncating or
// rounding to the printed precision, or within 0.05 percentage points.
bool matches_printed(double eta, const std::string& printed);

// name,q_s,q_u,b_t,eta_exact,eta_printed
std::string comparison_csv();

// Efficiency with b_t taken from an executed transcript. The transcript must
// be complete: six messages totalling the recorded bit count of 18.
EfficiencyRecord measured_efficiency(const Transcript& t, int q_s = 12, int q_u = 18);

}  // namespace cqt
