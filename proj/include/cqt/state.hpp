#pragma once

#include <complex>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace cqt {

using cx = std::complex<double>;

// Amplitudes with modulus below this are dropped from sparse storage.
inline constexpr double kPruneEps = 1e-12;
// Comparison tolerance for normalization and state-equality checks.
inline constexpr double kStateTol = 1e-9;

// Named qubit. Identity is the label.
class QubitId {
 public:
  QubitId() = default;
  explicit QubitId(std::string label) : label_(std::move(label)) {}

  const std::string& label() const { return label_; }

  bool operator==(const QubitId&) const = default;
  auto operator<=>(const QubitId&) const = default;

 private:
  std::string label_;
};

enum class Basis { Z, X };

enum class Pauli { I, X, Y, Z };

char to_char(Pauli p);
Pauli pauli_from_char(char c);

// Tensor product of single-qubit Paulis with a global phase in {1, -1, i, -i}.
// Qubits absent from `ops` are acted on by the identity.
struct PauliString {
  std::map<QubitId, Pauli> ops;
  cx phase{1.0, 0.0};

  // Renders as e.g. "X.Z" following the given qubit order.
  std::string str(const std::vector<QubitId>& order) const;

  bool operator==(const PauliString& rhs) const {
    return ops == rhs.ops && phase == rhs.phase;
  }
};

// Computational-basis ket over a register. Stored as the integer whose binary
// rendering is the ket read left to right: register index 0 is the leftmost
// printed bit (the most significant bit of `bits`).
class BasisKet {
 public:
  BasisKet() = default;
  BasisKet(std::uint32_t bits, int width);
  explicit BasisKet(std::string_view pattern);  // e.g. "0110"

  std::uint32_t bits() const { return bits_; }
  int width() const { return width_; }

  int bit(int index) const;
  BasisKet with_bit(int index, int value) const;
  BasisKet flipped(int index) const;
  BasisKet erased(int index) const;  // drops the qubit at index
  BasisKet concat(const BasisKet& rhs) const;
  std::string str() const;

  auto operator<=>(const BasisKet&) const = default;

 private:
  std::uint32_t bits_ = 0;
  int width_ = 0;
};

class SparseState;
struct Projection;

// Sparse complex-amplitude state over an ordered register of named qubits.
// States are immutable values: every operation returns a new state. Public
// operations keep the squared norm at 1 within kStateTol and never store
// amplitudes below kPruneEps.
class SparseState {
 public:
  SparseState() = default;  // width-0 unit state

  static SparseState basis_state(std::vector<QubitId> reg, const BasisKet& ket);

  // Builds a state from explicit terms. Amplitudes on equal kets accumulate,
  // sub-threshold amplitudes are pruned, and the result must be normalized
  // within kStateTol.
  static SparseState from_terms(std::vector<QubitId> reg,
                                const std::vector<std::pair<BasisKet, cx>>& terms);

  const std::vector<QubitId>& reg() const { return reg_; }
  int width() const { return static_cast<int>(reg_.size()); }
  std::size_t term_count() const { return terms_.size(); }

  bool contains(const QubitId& q) const;
  int index_of(const QubitId& q) const;  // throws on unknown qubit

  cx amplitude(const BasisKet& ket) const;
  cx amplitude(std::string_view pattern) const;
  double norm_sq() const;

  // Terms in canonical ket order (ascending printed bitstring).
  std::vector<std::pair<BasisKet, cx>> sorted_terms() const;

  SparseState apply_h(const QubitId& q) const;
  SparseState apply_cnot(const QubitId& control, const QubitId& target) const;
  SparseState apply_pauli(const PauliString& p) const;

  // Same physical state on a reordered register.
  SparseState permute(const std::vector<QubitId>& new_order) const;

  // Projective measurement of q; the qubit leaves the register. X-basis
  // projection is Hadamard followed by a Z projection.
  Projection project(const QubitId& q, Basis basis, int outcome) const;

  // Probability of a Z-basis outcome on q, without collapsing.
  double z_outcome_probability(const QubitId& q, int outcome) const;

  // Splits into (subset factor, complement factor) if the state is a tensor
  // product across that cut within kStateTol per amplitude. Factor registers
  // follow the subset order and the residual register order; both factors are
  // normalized with their first nonzero amplitude made real-positive.
  std::optional<std::pair<SparseState, SparseState>> try_factor(
      const std::vector<QubitId>& subset) const;

  // Multiplies by the phase that makes the first nonzero amplitude (in
  // canonical ket order) real-positive.
  SparseState canonical_phase() const;

  // Golden/debug rendering: one line per term, "<ket> <re> <im>", sorted by
  // ket, 17 significant digits.
  std::string dump() const;

 private:
  friend SparseState tensor(const SparseState&, const SparseState&);
  friend cx inner_product(const SparseState&, const SparseState&);

  std::vector<QubitId> reg_;
  std::map<std::uint32_t, cx> terms_;  // key = BasisKet::bits()
};

// Result of a projective measurement. `state` is empty when the requested
// outcome has probability below kPruneEps (an impossible outcome).
struct Projection {
  double probability = 0.0;
  std::optional<SparseState> state;
};

// Registers must be disjoint; the result register is the concatenation.
SparseState tensor(const SparseState& s1, const SparseState& s2);

// <s1|s2>. Registers must hold the same qubits; s2 is reordered to match s1.
cx inner_product(const SparseState& s1, const SparseState& s2);

// |<s1|s2>|^2.
double fidelity(const SparseState& s1, const SparseState& s2);

}  // namespace cqt
