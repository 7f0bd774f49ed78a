#pragma once

#include <array>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "cqt/basis.hpp"

namespace cqt {

// The six payloads, in the order their blocks appear: block 1 carries
// (alpha, mu), block 2 (nu, gamma), block 3 (lambda, beta).
enum class PayloadId { Alpha, Mu, Nu, Gamma, Lambda, Beta };

inline constexpr std::array<PayloadId, 6> kPayloadOrder = {
    PayloadId::Alpha, PayloadId::Mu,     PayloadId::Nu,
    PayloadId::Gamma, PayloadId::Lambda, PayloadId::Beta};

const char* name(PayloadId id);

// The six Bell-like states the parties exchange. Alice sends alpha (to Bob)
// and beta (to Charlie); Bob sends mu (to Alice) and nu (to Charlie); Charlie
// sends gamma (to Bob) and lambda (to Alice).
struct ProtocolInputs {
  BellLike alpha, beta;
  BellLike mu, nu;
  BellLike gamma, lambda;

  const BellLike& payload(PayloadId id) const;
  // Throws std::invalid_argument naming the first non-normalized payload.
  void validate() const;
};

// One entangled triple of the channel: basis index plus the qubits it spans.
struct ChannelSpec {
  std::array<std::pair<GhzIndex, std::array<QubitId, 3>>, 6> triples;

  static ChannelSpec standard();
};

// The 30 protocol qubits in canonical order: payload qubits first, channel
// qubits second, primed after unprimed within each party's group.
const std::vector<QubitId>& canonical_register();

// payload -> receiver pair, in kPayloadOrder.
struct RecipientMap {
  std::array<std::pair<PayloadId, std::array<QubitId, 2>>, 6> pairs;

  static RecipientMap standard();
  const std::array<QubitId, 2>& receiver(PayloadId id) const;
};

// Static description of one of the three independent ten-qubit blocks.
struct BlockLayout {
  int number;                // 1..3
  PayloadId p1, p2;
  QubitId p1_q1, p1_q2;      // payload-1 sender qubits
  QubitId p2_q1, p2_q2;      // payload-2 sender qubits
  QubitId z1;                // first triple head; CNOT target of p1_q1
  QubitId r1a, r1b;          // payload-1 receiver pair (first triple tail)
  QubitId r2a, r2b;          // payload-2 receiver pair (second triple head)
  QubitId z2;                // second triple tail; CNOT target of p2_q1

  std::vector<QubitId> qubits() const;                        // all ten
  std::array<std::pair<QubitId, Basis>, 4> step2_order() const;
  std::array<QubitId, 2> step3_order() const;
};

const std::array<BlockLayout, 3>& block_layouts();

// Tensor of the six channel triples; 64 terms of amplitude 1/8.
SparseState build_channel(const ChannelSpec& spec = ChannelSpec::standard());

// Payloads ⊗ channel on the canonical 30-qubit register.
SparseState assemble_global(const ProtocolInputs& inputs, const SparseState& channel);

// The six sender-side CNOTs: (A1,a1), (B1,b1), (B'1,b'1), (C1,c1), (C'1,c'1),
// (A'1,a'1), first qubit controlling.
SparseState step1_cnots(const SparseState& state);

struct MeasurementRecord {
  QubitId qubit;
  Basis basis = Basis::Z;
  int outcome = 0;  // X basis: 0 records +, 1 records −
  int step = 2;
  double probability = 0.0;
};

// Step-2 measurement order: (a1, A1, b1, B1, b'1, B'1, c1, C1, c'1, C'1,
// a'1, A'1); lowercase qubits in Z, uppercase in X.
const std::array<std::pair<QubitId, Basis>, 12>& step2_order();
// Step-3 order: (A2, B2, B'2, C2, C'2, A'2), all X.
const std::array<QubitId, 6>& step3_order();

// Measures one qubit of `in`, writing the collapsed state to `out` (in-place
// aliasing is fine). The outcome is sampled from the state when none is
// forced; forcing an impossible outcome throws.
MeasurementRecord measure_qubit(const SparseState& in, SparseState& out, const QubitId& q,
                                Basis basis, std::optional<int> forced, int step,
                                std::mt19937_64& rng);

std::pair<SparseState, std::vector<MeasurementRecord>> step2_measure(
    const SparseState& state, const std::optional<std::array<int, 12>>& forced,
    std::mt19937_64& rng);

std::pair<SparseState, std::vector<MeasurementRecord>> step3_measure(
    const SparseState& state, const std::optional<std::array<int, 6>>& forced,
    std::mt19937_64& rng);

// Finds, per payload, the two-qubit Pauli correction bringing the extracted
// receiver factor to fidelity one with the payload. Candidates are scanned in
// lexicographic order (I < X < Y < Z, first qubit major); the first match
// wins. Throws std::runtime_error if a receiver pair is still entangled with
// the rest or no candidate reaches fidelity one.
std::array<PauliString, 6> derive_corrections(const SparseState& remainder,
                                              const ProtocolInputs& inputs,
                                              const RecipientMap& map = RecipientMap::standard());

struct BranchOutcome {
  std::vector<MeasurementRecord> records;  // 18 full-scope, 6 block-scope
  double probability = 0.0;
  std::vector<std::pair<PayloadId, PauliString>> corrections;
  std::vector<std::pair<PayloadId, double>> fidelities;

  std::string bits() const;  // outcome bits in record order
  double min_fidelity() const;
};

// Runs the four steps end to end with all 18 outcomes forced (step2_order
// bits first, step3_order bits after).
BranchOutcome run_branch(const ProtocolInputs& inputs, const std::array<int, 18>& forced);

// One fully forced evolution of a single block.
struct BlockBranch {
  int block = 1;
  std::array<int, 6> bits{};  // (z1, x1, z2, x2) then the two step-3 bits
  double probability = 0.0;
  std::vector<MeasurementRecord> records;
  std::array<std::pair<PayloadId, PauliString>, 2> corrections;
  std::array<std::pair<PayloadId, double>, 2> fidelities;
  std::array<SparseState, 2> receivers_raw;  // receiver factors before correction
};

// All 64 outcome assignments of one block, in ascending bit order.
std::vector<BlockBranch> enumerate_block(const ProtocolInputs& inputs, int block);

struct Scope {
  enum Kind { Block, Full };
  Kind kind = Block;
  int block = 1;

  static Scope full() { return {Full, 0}; }
  static Scope for_block(int b) { return {Block, b}; }
};

// Streams branch outcomes: 64 for a block scope, 2^18 for the full scope.
// Full-scope outcomes are synthesized as products of the three block runs,
// which the block independence of the protocol makes exact.
void enumerate_branches(const ProtocolInputs& inputs, const Scope& scope,
                        const std::function<void(const BranchOutcome&)>& sink);

// 64-row map from a block's outcome bits to its two Pauli corrections.
struct CorrectionTable {
  int block = 1;
  PayloadId payload1 = PayloadId::Alpha;
  PayloadId payload2 = PayloadId::Mu;

  struct Row {
    std::array<int, 6> bits{};
    PauliString first, second;
  };
  std::vector<Row> rows;  // ordered by bits

  const Row& row_for(const std::array<int, 6>& bits) const;
  std::string csv() const;  // bits,payload_1_correction,payload_2_correction
};

// Derives the canonical table for a block. Payloads whose corrections are not
// uniquely determined (zero amplitudes, or ties between correction classes
// such as |a0| = |a1|) are rejected with std::invalid_argument.
CorrectionTable correction_table(const ProtocolInputs& inputs, int block);

// Random normalized payload, amplitudes unrestricted.
BellLike random_payload(std::mt19937_64& rng);
// Random payload with magnitudes bounded away from zero and from each other,
// as correction_table requires.
BellLike random_generic_payload(std::mt19937_64& rng);

ProtocolInputs random_inputs(std::mt19937_64& rng);
ProtocolInputs random_generic_inputs(std::mt19937_64& rng);

}  // namespace cqt
