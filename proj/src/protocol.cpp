#include "cqt/protocol.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace cqt {

namespace {

QubitId qid(const char* label) { return QubitId(label); }

std::vector<QubitId> make_canonical_register() {
  const char* labels[] = {"A1", "A2", "A'1", "A'2", "B1",  "B2",  "B'1", "B'2",
                          "C1", "C2", "C'1", "C'2", "a1",  "a2",  "a3",  "a'1",
                          "a'2", "a'3", "b1", "b2", "b3",  "b'1", "b'2", "b'3",
                          "c1", "c2", "c3", "c'1", "c'2", "c'3"};
  std::vector<QubitId> reg;
  for (const char* l : labels) reg.push_back(qid(l));
  return reg;
}

std::array<BlockLayout, 3> make_block_layouts() {
  BlockLayout b1{1, PayloadId::Alpha, PayloadId::Mu,
                 qid("A1"), qid("A2"), qid("B1"), qid("B2"),
                 qid("a1"), qid("b2"), qid("b3"),
                 qid("a2"), qid("a3"), qid("b1")};
  BlockLayout b2{2, PayloadId::Nu, PayloadId::Gamma,
                 qid("B'1"), qid("B'2"), qid("C1"), qid("C2"),
                 qid("b'1"), qid("c2"), qid("c3"),
                 qid("b'2"), qid("b'3"), qid("c1")};
  BlockLayout b3{3, PayloadId::Lambda, PayloadId::Beta,
                 qid("C'1"), qid("C'2"), qid("A'1"), qid("A'2"),
                 qid("c'1"), qid("a'2"), qid("a'3"),
                 qid("c'2"), qid("c'3"), qid("a'1")};
  return {b1, b2, b3};
}

// Lexicographic candidate list: I < X < Y < Z, first qubit major.
constexpr std::array<Pauli, 4> kPauliOrder = {Pauli::I, Pauli::X, Pauli::Y, Pauli::Z};

PauliString two_qubit_pauli(const std::array<QubitId, 2>& pair, Pauli first, Pauli second) {
  PauliString p;
  p.ops[pair[0]] = first;
  p.ops[pair[1]] = second;
  return p;
}

// All Paulis reaching fidelity one between the receiver factor and the
// payload, in lexicographic order.
std::vector<PauliString> matching_corrections(const SparseState& receiver,
                                              const BellLike& payload,
                                              const std::array<QubitId, 2>& pair) {
  const SparseState target = bell_like(payload, pair);
  std::vector<PauliString> matches;
  for (Pauli first : kPauliOrder) {
    for (Pauli second : kPauliOrder) {
      const PauliString candidate = two_qubit_pauli(pair, first, second);
      if (fidelity(receiver.apply_pauli(candidate), target) >= 1.0 - kStateTol) {
        matches.push_back(candidate);
      }
    }
  }
  return matches;
}

SparseState extract_receiver(const SparseState& remainder, const std::array<QubitId, 2>& pair,
                             PayloadId id) {
  auto split = remainder.try_factor({pair[0], pair[1]});
  if (!split) {
    throw std::runtime_error(std::string("receiver pair for payload ") + name(id) +
                             " is still entangled with the rest of the system");
  }
  return split->first;
}

PauliString first_match_or_throw(const SparseState& receiver, const BellLike& payload,
                                 const std::array<QubitId, 2>& pair, PayloadId id) {
  const auto matches = matching_corrections(receiver, payload, pair);
  if (matches.empty()) {
    throw std::runtime_error(std::string("no Pauli correction recovers payload ") + name(id));
  }
  return matches.front();
}

}  // namespace

const char* name(PayloadId id) {
  switch (id) {
    case PayloadId::Alpha: return "alpha";
    case PayloadId::Mu: return "mu";
    case PayloadId::Nu: return "nu";
    case PayloadId::Gamma: return "gamma";
    case PayloadId::Lambda: return "lambda";
    case PayloadId::Beta: return "beta";
  }
  return "?";
}

const BellLike& ProtocolInputs::payload(PayloadId id) const {
  switch (id) {
    case PayloadId::Alpha: return alpha;
    case PayloadId::Mu: return mu;
    case PayloadId::Nu: return nu;
    case PayloadId::Gamma: return gamma;
    case PayloadId::Lambda: return lambda;
    case PayloadId::Beta: return beta;
  }
  throw std::invalid_argument("unknown payload");
}

void ProtocolInputs::validate() const {
  for (PayloadId id : kPayloadOrder) {
    if (!payload(id).normalized()) {
      throw std::invalid_argument(std::string("payload ") + name(id) + " is not normalized");
    }
  }
}

ChannelSpec ChannelSpec::standard() {
  ChannelSpec spec;
  const auto& blocks = block_layouts();
  int i = 0;
  for (const auto& b : blocks) {
    spec.triples[static_cast<std::size_t>(i++)] = {0, {b.z1, b.r1a, b.r1b}};
    spec.triples[static_cast<std::size_t>(i++)] = {0, {b.r2a, b.r2b, b.z2}};
  }
  return spec;
}

const std::vector<QubitId>& canonical_register() {
  static const std::vector<QubitId> reg = make_canonical_register();
  return reg;
}

RecipientMap RecipientMap::standard() {
  RecipientMap map;
  const auto& blocks = block_layouts();
  int i = 0;
  for (const auto& b : blocks) {
    map.pairs[static_cast<std::size_t>(i++)] = {b.p1, {b.r1a, b.r1b}};
    map.pairs[static_cast<std::size_t>(i++)] = {b.p2, {b.r2a, b.r2b}};
  }
  return map;
}

const std::array<QubitId, 2>& RecipientMap::receiver(PayloadId id) const {
  for (const auto& [pid, pair] : pairs) {
    if (pid == id) return pair;
  }
  throw std::invalid_argument("unknown payload");
}

std::vector<QubitId> BlockLayout::qubits() const {
  return {p1_q1, p1_q2, p2_q1, p2_q2, z1, r1a, r1b, r2a, r2b, z2};
}

std::array<std::pair<QubitId, Basis>, 4> BlockLayout::step2_order() const {
  return {std::make_pair(z1, Basis::Z), std::make_pair(p1_q1, Basis::X),
          std::make_pair(z2, Basis::Z), std::make_pair(p2_q1, Basis::X)};
}

std::array<QubitId, 2> BlockLayout::step3_order() const { return {p1_q2, p2_q2}; }

const std::array<BlockLayout, 3>& block_layouts() {
  static const std::array<BlockLayout, 3> layouts = make_block_layouts();
  return layouts;
}

SparseState build_channel(const ChannelSpec& spec) {
  SparseState channel;
  bool first = true;
  for (const auto& [k, triple] : spec.triples) {
    const SparseState g = ghz_state(k, triple);
    channel = first ? g : tensor(channel, g);
    first = false;
  }
  // Canonical suborder of the channel qubits for reproducible dumps.
  std::vector<QubitId> order;
  for (const auto& q : canonical_register()) {
    if (channel.contains(q)) order.push_back(q);
  }
  return channel.permute(order);
}

SparseState assemble_global(const ProtocolInputs& inputs, const SparseState& channel) {
  inputs.validate();
  // Payload qubit pairs, in the assembly order alpha, mu, nu, gamma, lambda, beta.
  const std::array<std::pair<PayloadId, std::array<QubitId, 2>>, 6> senders = {{
      {PayloadId::Alpha, {qid("A1"), qid("A2")}},
      {PayloadId::Mu, {qid("B1"), qid("B2")}},
      {PayloadId::Nu, {qid("B'1"), qid("B'2")}},
      {PayloadId::Gamma, {qid("C1"), qid("C2")}},
      {PayloadId::Lambda, {qid("C'1"), qid("C'2")}},
      {PayloadId::Beta, {qid("A'1"), qid("A'2")}},
  }};
  SparseState global;
  bool first = true;
  for (const auto& [id, pair] : senders) {
    const SparseState p = bell_like(inputs.payload(id), pair);
    global = first ? p : tensor(global, p);
    first = false;
  }
  global = tensor(global, channel);
  return global.permute(canonical_register());
}

SparseState step1_cnots(const SparseState& state) {
  SparseState out = state;
  for (const auto& b : block_layouts()) {
    out = out.apply_cnot(b.p1_q1, b.z1);
    out = out.apply_cnot(b.p2_q1, b.z2);
  }
  return out;
}

const std::array<std::pair<QubitId, Basis>, 12>& step2_order() {
  static const std::array<std::pair<QubitId, Basis>, 12> order = [] {
    std::array<std::pair<QubitId, Basis>, 12> o;
    std::size_t i = 0;
    for (const auto& b : block_layouts()) {
      for (const auto& qb : b.step2_order()) o[i++] = qb;
    }
    return o;
  }();
  return order;
}

const std::array<QubitId, 6>& step3_order() {
  static const std::array<QubitId, 6> order = [] {
    std::array<QubitId, 6> o;
    std::size_t i = 0;
    for (const auto& b : block_layouts()) {
      for (const auto& q : b.step3_order()) o[i++] = q;
    }
    return o;
  }();
  return order;
}

MeasurementRecord measure_qubit(const SparseState& in, SparseState& out, const QubitId& q,
                                Basis basis, std::optional<int> forced, int step,
                                std::mt19937_64& rng) {
  // X-basis measurement rotates once and reuses the rotated state for both
  // the sampling probability and the collapse.
  const SparseState* base = &in;
  SparseState rotated;
  if (basis == Basis::X) {
    rotated = in.apply_h(q);
    base = &rotated;
  }
  int outcome;
  if (forced) {
    outcome = *forced;
  } else {
    std::uniform_real_distribution<double> dist(0.0, 1.0);
    outcome = dist(rng) < base->z_outcome_probability(q, 0) ? 0 : 1;
  }
  Projection proj = base->project(q, Basis::Z, outcome);
  if (!proj.state) {
    throw std::runtime_error("forced outcome for " + q.label() + " has zero probability");
  }
  out = std::move(*proj.state);
  return {q, basis, outcome, step, proj.probability};
}

namespace {

MeasurementRecord measure_one(SparseState& state, const QubitId& q, Basis basis,
                              std::optional<int> forced, int step, std::mt19937_64& rng) {
  return measure_qubit(state, state, q, basis, forced, step, rng);
}

}  // namespace

std::pair<SparseState, std::vector<MeasurementRecord>> step2_measure(
    const SparseState& state, const std::optional<std::array<int, 12>>& forced,
    std::mt19937_64& rng) {
  SparseState s = state;
  std::vector<MeasurementRecord> records;
  const auto& order = step2_order();
  for (std::size_t i = 0; i < order.size(); ++i) {
    const auto& [q, basis] = order[i];
    std::optional<int> f = forced ? std::optional<int>((*forced)[i]) : std::nullopt;
    records.push_back(measure_one(s, q, basis, f, 2, rng));
  }
  return {std::move(s), std::move(records)};
}

std::pair<SparseState, std::vector<MeasurementRecord>> step3_measure(
    const SparseState& state, const std::optional<std::array<int, 6>>& forced,
    std::mt19937_64& rng) {
  SparseState s = state;
  std::vector<MeasurementRecord> records;
  const auto& order = step3_order();
  for (std::size_t i = 0; i < order.size(); ++i) {
    std::optional<int> f = forced ? std::optional<int>((*forced)[i]) : std::nullopt;
    records.push_back(measure_one(s, order[i], Basis::X, f, 3, rng));
  }
  return {std::move(s), std::move(records)};
}

std::array<PauliString, 6> derive_corrections(const SparseState& remainder,
                                              const ProtocolInputs& inputs,
                                              const RecipientMap& map) {
  std::array<PauliString, 6> out;
  std::size_t i = 0;
  for (const auto& [id, pair] : map.pairs) {
    const SparseState receiver = extract_receiver(remainder, pair, id);
    out[i++] = first_match_or_throw(receiver, inputs.payload(id), pair, id);
  }
  return out;
}

std::string BranchOutcome::bits() const {
  std::string out;
  out.reserve(records.size());
  for (const auto& r : records) out.push_back(r.outcome ? '1' : '0');
  return out;
}

double BranchOutcome::min_fidelity() const {
  double m = 1.0;
  for (const auto& [id, f] : fidelities) m = std::min(m, f);
  return m;
}

BranchOutcome run_branch(const ProtocolInputs& inputs, const std::array<int, 18>& forced) {
  std::mt19937_64 rng(0);  // outcomes are fully forced
  std::array<int, 12> f2;
  std::array<int, 6> f3;
  std::copy_n(forced.begin(), 12, f2.begin());
  std::copy_n(forced.begin() + 12, 6, f3.begin());

  const SparseState global = assemble_global(inputs, build_channel());
  const SparseState after1 = step1_cnots(global);
  auto [after2, rec2] = step2_measure(after1, f2, rng);
  auto [after3, rec3] = step3_measure(after2, f3, rng);

  const RecipientMap map = RecipientMap::standard();
  const auto corrections = derive_corrections(after3, inputs, map);

  SparseState corrected = after3;
  for (const auto& c : corrections) corrected = corrected.apply_pauli(c);

  BranchOutcome out;
  out.records = std::move(rec2);
  out.records.insert(out.records.end(), rec3.begin(), rec3.end());
  out.probability = 1.0;
  for (const auto& r : out.records) out.probability *= r.probability;
  for (std::size_t i = 0; i < map.pairs.size(); ++i) {
    const auto& [id, pair] = map.pairs[i];
    const SparseState receiver = extract_receiver(corrected, pair, id);
    out.corrections.emplace_back(id, corrections[i]);
    out.fidelities.emplace_back(id, fidelity(receiver, bell_like(inputs.payload(id), pair)));
  }
  return out;
}

namespace {

const BlockLayout& layout_for(int block) {
  if (block < 1 || block > 3) throw std::invalid_argument("block must be 1, 2 or 3");
  return block_layouts()[static_cast<std::size_t>(block - 1)];
}

// The block's share of the global product state, already through step 1.
SparseState block_initial(const ProtocolInputs& inputs, const BlockLayout& b) {
  SparseState s = tensor(bell_like(inputs.payload(b.p1), {b.p1_q1, b.p1_q2}),
                         bell_like(inputs.payload(b.p2), {b.p2_q1, b.p2_q2}));
  s = tensor(s, ghz_state(0, {b.z1, b.r1a, b.r1b}));
  s = tensor(s, ghz_state(0, {b.r2a, b.r2b, b.z2}));
  s = s.apply_cnot(b.p1_q1, b.z1);
  s = s.apply_cnot(b.p2_q1, b.z2);
  return s;
}

}  // namespace

std::vector<BlockBranch> enumerate_block(const ProtocolInputs& inputs, int block) {
  inputs.validate();
  const BlockLayout& b = layout_for(block);
  const SparseState initial = block_initial(inputs, b);

  const std::array<std::pair<QubitId, Basis>, 4> s2 = b.step2_order();
  const std::array<QubitId, 2> s3 = b.step3_order();
  const std::array<QubitId, 2> pair1 = {b.r1a, b.r1b};
  const std::array<QubitId, 2> pair2 = {b.r2a, b.r2b};

  std::vector<BlockBranch> out;
  out.reserve(64);
  for (int assignment = 0; assignment < 64; ++assignment) {
    BlockBranch br;
    br.block = block;
    for (int i = 0; i < 6; ++i) br.bits[static_cast<std::size_t>(i)] = (assignment >> (5 - i)) & 1;

    SparseState s = initial;
    br.probability = 1.0;
    std::mt19937_64 rng(0);  // outcomes forced
    for (int i = 0; i < 4; ++i) {
      const auto& [q, basis] = s2[static_cast<std::size_t>(i)];
      br.records.push_back(
          measure_one(s, q, basis, br.bits[static_cast<std::size_t>(i)], 2, rng));
    }
    for (int i = 0; i < 2; ++i) {
      br.records.push_back(measure_one(s, s3[static_cast<std::size_t>(i)], Basis::X,
                                       br.bits[static_cast<std::size_t>(4 + i)], 3, rng));
    }
    for (const auto& r : br.records) br.probability *= r.probability;

    const SparseState rec1 = extract_receiver(s, pair1, b.p1);
    const SparseState rec2 = extract_receiver(s, pair2, b.p2);
    br.receivers_raw = {rec1, rec2};

    const PauliString c1 = first_match_or_throw(rec1, inputs.payload(b.p1), pair1, b.p1);
    const PauliString c2 = first_match_or_throw(rec2, inputs.payload(b.p2), pair2, b.p2);
    br.corrections = {std::make_pair(b.p1, c1), std::make_pair(b.p2, c2)};
    br.fidelities = {
        std::make_pair(b.p1, fidelity(rec1.apply_pauli(c1),
                                      bell_like(inputs.payload(b.p1), pair1))),
        std::make_pair(b.p2, fidelity(rec2.apply_pauli(c2),
                                      bell_like(inputs.payload(b.p2), pair2)))};
    out.push_back(std::move(br));
  }
  return out;
}

void enumerate_branches(const ProtocolInputs& inputs, const Scope& scope,
                        const std::function<void(const BranchOutcome&)>& sink) {
  if (scope.kind == Scope::Block) {
    for (const BlockBranch& br : enumerate_block(inputs, scope.block)) {
      BranchOutcome out;
      out.records = br.records;
      out.probability = br.probability;
      out.corrections.assign(br.corrections.begin(), br.corrections.end());
      out.fidelities.assign(br.fidelities.begin(), br.fidelities.end());
      sink(out);
    }
    return;
  }

  const std::array<std::vector<BlockBranch>, 3> blocks = {
      enumerate_block(inputs, 1), enumerate_block(inputs, 2), enumerate_block(inputs, 3)};

  // Full scope: the three blocks never entangle, so every combination of
  // block outcomes is a branch with the product probability.
  BranchOutcome out;
  for (const BlockBranch& b1 : blocks[0]) {
    for (const BlockBranch& b2 : blocks[1]) {
      for (const BlockBranch& b3 : blocks[2]) {
        out.records.clear();
        out.corrections.clear();
        out.fidelities.clear();
        // Step-2 records of all blocks first, then step-3 records.
        for (const auto* b : {&b1, &b2, &b3}) {
          out.records.insert(out.records.end(), b->records.begin(), b->records.begin() + 4);
        }
        for (const auto* b : {&b1, &b2, &b3}) {
          out.records.insert(out.records.end(), b->records.begin() + 4, b->records.end());
        }
        out.probability = b1.probability * b2.probability * b3.probability;
        for (const auto* b : {&b1, &b2, &b3}) {
          out.corrections.insert(out.corrections.end(), b->corrections.begin(),
                                 b->corrections.end());
          out.fidelities.insert(out.fidelities.end(), b->fidelities.begin(),
                                b->fidelities.end());
        }
        sink(out);
      }
    }
  }
}

const CorrectionTable::Row& CorrectionTable::row_for(const std::array<int, 6>& bits) const {
  std::size_t key = 0;
  for (int b : bits) key = (key << 1) | static_cast<std::size_t>(b);
  if (key >= rows.size()) throw std::out_of_range("correction table row");
  return rows[key];
}

std::string CorrectionTable::csv() const {
  std::string out = "bits,payload_1_correction,payload_2_correction\n";
  const auto& b = layout_for(block);
  const std::vector<QubitId> order1 = {b.r1a, b.r1b};
  const std::vector<QubitId> order2 = {b.r2a, b.r2b};
  for (const auto& row : rows) {
    for (int bit : row.bits) out.push_back(bit ? '1' : '0');
    out += "," + row.first.str(order1) + "," + row.second.str(order2) + "\n";
  }
  return out;
}

CorrectionTable correction_table(const ProtocolInputs& inputs, int block) {
  const BlockLayout& b = layout_for(block);
  for (PayloadId id : {b.p1, b.p2}) {
    const BellLike& p = inputs.payload(id);
    if (std::abs(p.a0) < kPruneEps || std::abs(p.a1) < kPruneEps) {
      throw std::invalid_argument(std::string("payload ") + name(id) +
                                  " has a zero amplitude; corrections are not uniquely determined");
    }
  }

  const std::array<QubitId, 2> pair1 = {b.r1a, b.r1b};
  const std::array<QubitId, 2> pair2 = {b.r2a, b.r2b};

  CorrectionTable table;
  table.block = block;
  table.payload1 = b.p1;
  table.payload2 = b.p2;

  for (const BlockBranch& br : enumerate_block(inputs, block)) {
    // Every Pauli that matches must act identically on the whole payload
    // subspace, not just on this receiver state; tied-but-distinct actions
    // mean the lexicographic pick would change with the deriving payload.
    // A probe with distinct nonzero magnitudes and a generic relative phase
    // separates the inequivalent actions.
    const BellLike probe_amplitudes{cx{0.6, 0.0}, cx{0.0, 0.8}};
    const auto check_unique = [&](const SparseState& receiver, PayloadId id,
                                  const std::array<QubitId, 2>& pair) {
      const auto matches = matching_corrections(receiver, inputs.payload(id), pair);
      if (matches.empty()) {
        throw std::runtime_error(std::string("no Pauli correction recovers payload ") + name(id));
      }
      const SparseState probe = bell_like(probe_amplitudes, pair);
      const SparseState reference = probe.apply_pauli(matches.front());
      for (std::size_t i = 1; i < matches.size(); ++i) {
        if (fidelity(reference, probe.apply_pauli(matches[i])) < 1.0 - kStateTol) {
          throw std::invalid_argument(
              std::string("payload ") + name(id) +
              " is degenerate (distinct corrections tie); the table requires generic amplitudes");
        }
      }
      return matches.front();
    };

    CorrectionTable::Row row;
    row.bits = br.bits;
    row.first = check_unique(br.receivers_raw[0], b.p1, pair1);
    row.second = check_unique(br.receivers_raw[1], b.p2, pair2);
    table.rows.push_back(std::move(row));
  }
  return table;
}

BellLike random_payload(std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  while (true) {
    const cx a0{g(rng), g(rng)};
    const cx a1{g(rng), g(rng)};
    const double n = std::sqrt(std::norm(a0) + std::norm(a1));
    if (n > 1e-6) return {a0 / n, a1 / n};
  }
}

BellLike random_generic_payload(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  // Mixing angle kept away from 0, π/4 and π/2, so both magnitudes are
  // bounded away from zero and from each other.
  const double margin = 0.15;
  double t = margin + u(rng) * (std::acos(-1.0) / 4.0 - 2.0 * margin);
  if (u(rng) < 0.5) t = std::acos(-1.0) / 2.0 - t;
  const double phi = u(rng) * 2.0 * std::acos(-1.0);
  return {cx{std::cos(t), 0.0}, std::sin(t) * cx{std::cos(phi), std::sin(phi)}};
}

ProtocolInputs random_inputs(std::mt19937_64& rng) {
  ProtocolInputs in;
  in.alpha = random_payload(rng);
  in.mu = random_payload(rng);
  in.nu = random_payload(rng);
  in.gamma = random_payload(rng);
  in.lambda = random_payload(rng);
  in.beta = random_payload(rng);
  return in;
}

ProtocolInputs random_generic_inputs(std::mt19937_64& rng) {
  ProtocolInputs in;
  in.alpha = random_generic_payload(rng);
  in.mu = random_generic_payload(rng);
  in.nu = random_generic_payload(rng);
  in.gamma = random_generic_payload(rng);
  in.lambda = random_generic_payload(rng);
  in.beta = random_generic_payload(rng);
  return in;
}

}  // namespace cqt
