#include "cqt/network.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace cqt {

namespace {

// Generic amplitudes behind the reference tables; any non-degenerate pair
// yields the same rows.
ProtocolInputs table_inputs() {
  ProtocolInputs in;
  const BellLike generic{cx{0.6, 0.0}, cx{0.8, 0.0}};
  in.alpha = in.beta = in.mu = in.nu = in.gamma = in.lambda = generic;
  return in;
}

const BlockLayout& block_of_payload(PayloadId id) {
  for (const auto& b : block_layouts()) {
    if (b.p1 == id || b.p2 == id) return b;
  }
  throw std::invalid_argument("unknown payload");
}

}  // namespace

const char* name(PartyId id) {
  switch (id) {
    case PartyId::Alice: return "Alice";
    case PartyId::Bob: return "Bob";
    case PartyId::Charlie: return "Charlie";
  }
  return "?";
}

PartyId owner(const QubitId& q) {
  switch (q.label().empty() ? '?' : q.label()[0]) {
    case 'a': case 'A': return PartyId::Alice;
    case 'b': case 'B': return PartyId::Bob;
    case 'c': case 'C': return PartyId::Charlie;
    default: throw std::invalid_argument("qubit has no owning party: " + q.label());
  }
}

const std::array<CorrectionTable, 3>& reference_tables() {
  static const std::array<CorrectionTable, 3> tables = [] {
    const ProtocolInputs in = table_inputs();
    return std::array<CorrectionTable, 3>{correction_table(in, 1), correction_table(in, 2),
                                          correction_table(in, 3)};
  }();
  return tables;
}

std::vector<std::pair<QubitId, Basis>> Party::step2_duties() const {
  std::vector<std::pair<QubitId, Basis>> duties;
  for (const auto& [q, basis] : step2_order()) {
    if (owner(q) == id_) duties.emplace_back(q, basis);
  }
  return duties;
}

std::vector<QubitId> Party::step3_duties() const {
  std::vector<QubitId> duties;
  for (const auto& q : step3_order()) {
    if (owner(q) == id_) duties.push_back(q);
  }
  return duties;
}

std::vector<std::pair<PayloadId, std::array<QubitId, 2>>> Party::receiver_pairs() const {
  std::vector<std::pair<PayloadId, std::array<QubitId, 2>>> pairs;
  for (const auto& [id, pair] : RecipientMap::standard().pairs) {
    if (owner(pair[0]) == id_) pairs.emplace_back(id, pair);
  }
  return pairs;
}

void Party::note_own_result(const QubitId& q, int outcome) {
  if (owner(q) != id_) {
    throw std::invalid_argument(std::string(name(id_)) + " cannot measure " + q.label());
  }
  seen_[q] = outcome;
}

void Party::receive(const ClassicalMessage& msg) {
  if (msg.sender == id_) return;  // broadcasts are not self-delivered
  for (const auto& [q, bit] : msg.bits) seen_[q] = bit;
}

PauliString Party::correction_for(PayloadId payload) const {
  const BlockLayout& b = block_of_payload(payload);
  std::array<int, 6> key{};
  std::size_t i = 0;
  auto read = [&](const QubitId& q) {
    auto it = seen_.find(q);
    if (it == seen_.end()) {
      throw std::runtime_error(std::string(name(id_)) + " cannot correct payload " +
                               name(payload) + " yet: missing result for " + q.label());
    }
    key[i++] = it->second;
  };
  for (const auto& [q, basis] : b.step2_order()) read(q);
  for (const auto& q : b.step3_order()) read(q);

  const CorrectionTable& table = reference_tables()[static_cast<std::size_t>(b.number - 1)];
  const CorrectionTable::Row& row = table.row_for(key);
  return payload == table.payload1 ? row.first : row.second;
}

namespace {

struct PreparedRun {
  SparseState after_step1;
};

PreparedRun prepare(const ProtocolInputs& inputs) {
  return {step1_cnots(assemble_global(inputs, build_channel()))};
}

Transcript run_prepared(const PreparedRun& prep, const ProtocolInputs& inputs,
                        std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::array<Party, 3> parties = {Party(PartyId::Alice), Party(PartyId::Bob),
                                  Party(PartyId::Charlie)};
  auto party = [&](PartyId id) -> Party& {
    return parties[static_cast<std::size_t>(id)];
  };

  Transcript t;
  t.seed = seed;

  // Step 2: simultaneous measurements. Sampling runs the Z projections first
  // (they shrink the superposition fastest) and then the X projections; the
  // records keep the documented order.
  const std::array<std::size_t, 12> z_first = {0, 2, 4, 6, 8, 10, 1, 3, 5, 7, 9, 11};
  std::vector<MeasurementRecord> rec2(12);
  SparseState after2;
  const SparseState* src = &prep.after_step1;
  for (std::size_t pos : z_first) {
    const auto& [q, basis] = step2_order()[pos];
    rec2[pos] = measure_qubit(*src, after2, q, basis, std::nullopt, 2, rng);
    src = &after2;
  }
  for (const auto& r : rec2) party(owner(r.qubit)).note_own_result(r.qubit, r.outcome);

  // Each party broadcasts one step-2 message with its four results.
  for (PartyId id : {PartyId::Alice, PartyId::Bob, PartyId::Charlie}) {
    ClassicalMessage msg{id, 2, {}};
    for (const auto& r : rec2) {
      if (owner(r.qubit) == id) msg.bits.emplace_back(r.qubit, r.outcome);
    }
    for (auto& p : parties) p.receive(msg);
    t.total_bits += static_cast<int>(msg.bits.size());
    t.messages.push_back(std::move(msg));
  }

  // Step 3: second X round, then one two-bit message per party.
  std::vector<MeasurementRecord> rec3;
  SparseState after3 = after2;
  for (const auto& q : step3_order()) {
    rec3.push_back(measure_qubit(after3, after3, q, Basis::X, std::nullopt, 3, rng));
  }
  for (const auto& r : rec3) party(owner(r.qubit)).note_own_result(r.qubit, r.outcome);
  for (PartyId id : {PartyId::Alice, PartyId::Bob, PartyId::Charlie}) {
    ClassicalMessage msg{id, 3, {}};
    for (const auto& r : rec3) {
      if (owner(r.qubit) == id) msg.bits.emplace_back(r.qubit, r.outcome);
    }
    for (auto& p : parties) p.receive(msg);
    t.total_bits += static_cast<int>(msg.bits.size());
    t.messages.push_back(std::move(msg));
  }

  // Step 4: every delivery is complete, so each party can resolve and apply
  // the corrections for its receiver pairs.
  SparseState corrected = after3;
  std::vector<std::pair<PayloadId, PauliString>> corrections(6);
  for (auto& p : parties) {
    for (const auto& [payload, pair] : p.receiver_pairs()) {
      const PauliString c = p.correction_for(payload);
      corrected = corrected.apply_pauli(c);
      for (std::size_t i = 0; i < kPayloadOrder.size(); ++i) {
        if (kPayloadOrder[i] == payload) corrections[i] = {payload, c};
      }
    }
  }

  BranchOutcome branch;
  branch.records = std::move(rec2);
  branch.records.insert(branch.records.end(), rec3.begin(), rec3.end());
  branch.probability = 1.0;
  for (const auto& r : branch.records) branch.probability *= r.probability;
  branch.corrections = std::move(corrections);
  const RecipientMap map = RecipientMap::standard();
  for (const auto& [id, pair] : map.pairs) {
    auto split = corrected.try_factor({pair[0], pair[1]});
    if (!split) {
      throw std::runtime_error(std::string("receiver pair for payload ") + name(id) +
                               " is still entangled after correction");
    }
    branch.fidelities.emplace_back(
        id, fidelity(split->first, bell_like(inputs.payload(id), pair)));
  }
  t.branch = std::move(branch);
  return t;
}

}  // namespace

Transcript run_protocol(const ProtocolInputs& inputs, std::uint64_t seed) {
  inputs.validate();
  return run_prepared(prepare(inputs), inputs, seed);
}

RunSummary run_many(const ProtocolInputs& inputs, const std::vector<std::uint64_t>& seeds) {
  if (seeds.empty()) throw std::invalid_argument("run_many: no seeds");
  inputs.validate();
  const PreparedRun prep = prepare(inputs);

  RunSummary summary;
  summary.runs = seeds.size();
  for (const auto& r : step2_order()) summary.measured.push_back(r.first);
  for (const auto& q : step3_order()) summary.measured.push_back(q);

  bool first = true;
  for (std::uint64_t seed : seeds) {
    Transcript t = run_prepared(prep, inputs, seed);
    if (t.total_bits != 18 || t.messages.size() != 6) {
      throw std::runtime_error("incomplete transcript");
    }
    const double min_f = t.branch.min_fidelity();
    summary.per_seed_min_fidelity.push_back(min_f);
    summary.min_fidelity = std::min(summary.min_fidelity, min_f);
    for (std::size_t i = 0; i < t.branch.records.size(); ++i) {
      summary.ones[i] += static_cast<std::size_t>(t.branch.records[i].outcome);
    }
    if (first) {
      summary.first = std::move(t);
      first = false;
    }
  }
  return summary;
}

}  // namespace cqt
