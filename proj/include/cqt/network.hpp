#pragma once

#include <cstdint>
#include <map>

#include "cqt/protocol.hpp"

namespace cqt {

enum class PartyId { Alice, Bob, Charlie };

const char* name(PartyId id);

// Qubit ownership by label initial: a/A -> Alice, b/B -> Bob, c/C -> Charlie.
PartyId owner(const QubitId& q);

struct ClassicalMessage {
  PartyId sender = PartyId::Alice;
  int step = 2;
  std::vector<std::pair<QubitId, int>> bits;

  bool operator==(const ClassicalMessage&) const = default;
};

struct Transcript {
  std::uint64_t seed = 0;
  std::vector<ClassicalMessage> messages;  // in broadcast order
  int total_bits = 0;                      // counted once per message
  BranchOutcome branch;
};

// The per-block correction tables the parties consult. Derived once from
// fixed generic amplitudes; rows are payload-independent.
const std::array<CorrectionTable, 3>& reference_tables();

// A protocol participant: measures its own qubits, remembers every bit it has
// seen (its own results plus received broadcasts), and resolves corrections
// for its receiver pairs from the reference tables.
class Party {
 public:
  explicit Party(PartyId id) : id_(id) {}

  PartyId id() const { return id_; }

  // Measurement duties in global order.
  std::vector<std::pair<QubitId, Basis>> step2_duties() const;
  std::vector<QubitId> step3_duties() const;

  // Receiver pairs held by this party, with the payloads they carry.
  std::vector<std::pair<PayloadId, std::array<QubitId, 2>>> receiver_pairs() const;

  void note_own_result(const QubitId& q, int outcome);
  void receive(const ClassicalMessage& msg);

  bool has_seen(const QubitId& q) const { return seen_.count(q) > 0; }

  // Table lookup for one of this party's payloads. Throws std::runtime_error
  // if any bit of the block key has not been seen yet.
  PauliString correction_for(PayloadId payload) const;

 private:
  PartyId id_;
  std::map<QubitId, int> seen_;
};

// One seeded end-to-end run: step-1 gates, sampled step-2 and step-3
// measurements, broadcast of all results, table-driven corrections, and
// receiver verification. Deterministic in (inputs, seed).
Transcript run_protocol(const ProtocolInputs& inputs, std::uint64_t seed);

struct RunSummary {
  std::size_t runs = 0;
  std::vector<double> per_seed_min_fidelity;
  double min_fidelity = 1.0;
  // Outcome-1 counts per measurement, 18 entries in documented bit order.
  std::array<std::size_t, 18> ones{};
  std::vector<QubitId> measured;  // the 18 measured qubits, in that order
  Transcript first;               // transcript of the first seed
};

RunSummary run_many(const ProtocolInputs& inputs, const std::vector<std::uint64_t>& seeds);

}  // namespace cqt
