#pragma once

#include <array>
#include <optional>
#include <random>
#include <string>

#include "cqt/state.hpp"

namespace cqt {

// Index into the eight-state entangled tripartite basis; valid values 0..7.
using GhzIndex = int;

// Two-qubit payload a0|00> + a1|11>.
struct BellLike {
  cx a0{1.0, 0.0};
  cx a1{0.0, 0.0};

  double norm_sq() const;
  bool normalized(double tol = kStateTol) const;
};

// |G_k> on the three given qubits. The eight states are
//   G0,1 = (|000> ± |111>)/√2      G2,3 = (|100> ± |011>)/√2
//   G4,5 = (|010> ± |101>)/√2      G6,7 = (|110> ± |001>)/√2
SparseState ghz_state(GhzIndex k, const std::array<QubitId, 3>& triple);

// a0|00> + a1|11> on the given pair; the amplitudes must be normalized.
SparseState bell_like(const BellLike& p, const std::array<QubitId, 2>& pair);

// (|0> + sign·|1>)/√2 on a single-qubit register; sign is +1 or -1.
SparseState x_ket(int sign, const QubitId& q);

// Coefficients of a six-qubit state in the G_j ⊗ G_k product basis,
// c[j][k] = <G_j(left) ⊗ G_k(right) | state>.
struct GhzGrid {
  std::array<std::array<cx, 8>, 8> c{};

  double norm_sq() const;
  // 8 rows (row = left index j) of re,im pairs.
  std::string csv() const;
};

GhzGrid ghz_decompose(const SparseState& state, const std::array<QubitId, 3>& left,
                      const std::array<QubitId, 3>& right);

struct GhzMeasurement {
  GhzIndex k = 0;
  double probability = 0.0;
  SparseState collapsed;  // the measured triple has left the register
};

// Projects the triple onto one of the eight basis states. With `forced`
// absent the outcome is sampled from the induced distribution using rng;
// forcing an outcome whose probability is below kPruneEps throws.
GhzMeasurement ghz_measure(const SparseState& state, const std::array<QubitId, 3>& triple,
                           std::optional<GhzIndex> forced, std::mt19937_64& rng);

}  // namespace cqt
