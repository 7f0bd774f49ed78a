#include "cqt/network.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <set>

using namespace cqt;

namespace {

QubitId q(const char* label) { return QubitId(label); }

ProtocolInputs demo_inputs() {
  ProtocolInputs in;
  in.alpha = {cx{0.6, 0.0}, cx{0.8, 0.0}};
  in.beta = {cx{0.8, 0.0}, cx{0.6, 0.0}};
  in.mu = {cx{1.0 / std::sqrt(2.0), 0.0}, cx{1.0 / std::sqrt(2.0), 0.0}};
  in.nu = {cx{0.28, 0.0}, cx{0.96, 0.0}};
  in.gamma = {cx{0.96, 0.0}, cx{0.28, 0.0}};
  in.lambda = {cx{0.6, 0.0}, cx{-0.8, 0.0}};
  return in;
}

}  // namespace

TEST(Owner, LabelInitialMapping) {
  EXPECT_EQ(owner(q("a1")), PartyId::Alice);
  EXPECT_EQ(owner(q("A'2")), PartyId::Alice);
  EXPECT_EQ(owner(q("b'3")), PartyId::Bob);
  EXPECT_EQ(owner(q("C1")), PartyId::Charlie);
  EXPECT_THROW(owner(q("x9")), std::invalid_argument);
}

TEST(Party, MeasurementDuties) {
  const Party alice(PartyId::Alice);
  std::vector<std::pair<QubitId, Basis>> expected2 = {
      {q("a1"), Basis::Z}, {q("A1"), Basis::X}, {q("a'1"), Basis::Z}, {q("A'1"), Basis::X}};
  EXPECT_EQ(alice.step2_duties(), expected2);
  EXPECT_EQ(alice.step3_duties(), (std::vector<QubitId>{q("A2"), q("A'2")}));

  const Party bob(PartyId::Bob);
  EXPECT_EQ(bob.step2_duties().size(), 4u);
  EXPECT_EQ(bob.step3_duties().size(), 2u);
}

TEST(Party, ReceiverPairs) {
  const Party alice(PartyId::Alice);
  const auto pairs = alice.receiver_pairs();
  ASSERT_EQ(pairs.size(), 2u);
  EXPECT_EQ(pairs[0].first, PayloadId::Mu);
  EXPECT_EQ(pairs[0].second, (std::array<QubitId, 2>{q("a2"), q("a3")}));
  EXPECT_EQ(pairs[1].first, PayloadId::Lambda);

  const Party charlie(PartyId::Charlie);
  std::set<PayloadId> ids;
  for (const auto& [id, pair] : charlie.receiver_pairs()) ids.insert(id);
  EXPECT_EQ(ids, (std::set<PayloadId>{PayloadId::Nu, PayloadId::Beta}));
}

// A party cannot resolve a correction before the bits it depends on arrive.
TEST(Party, CorrectionRequiresDeliveredBits) {
  Party bob(PartyId::Bob);
  // Bob's own step-2/3 results alone are not enough for alpha's correction.
  bob.note_own_result(q("b1"), 0);
  bob.note_own_result(q("B1"), 0);
  bob.note_own_result(q("B2"), 0);
  EXPECT_THROW(bob.correction_for(PayloadId::Alpha), std::runtime_error);

  ClassicalMessage alice2{PartyId::Alice, 2, {{q("a1"), 1}, {q("A1"), 0}, {q("a'1"), 0}, {q("A'1"), 0}}};
  bob.receive(alice2);
  EXPECT_THROW(bob.correction_for(PayloadId::Alpha), std::runtime_error);  // A2 still missing

  ClassicalMessage alice3{PartyId::Alice, 3, {{q("A2"), 0}, {q("A'2"), 0}}};
  bob.receive(alice3);
  const PauliString c = bob.correction_for(PayloadId::Alpha);
  EXPECT_EQ(c.str({q("b2"), q("b3")}), "X.X");  // a1 = 1 flips the pair
}

TEST(Party, RejectsForeignMeasurements) {
  Party alice(PartyId::Alice);
  EXPECT_THROW(alice.note_own_result(q("b1"), 0), std::invalid_argument);
}

TEST(ReferenceTables, CoverAllBlocksAndPayloads) {
  const auto& tables = reference_tables();
  EXPECT_EQ(tables[0].payload1, PayloadId::Alpha);
  EXPECT_EQ(tables[0].payload2, PayloadId::Mu);
  EXPECT_EQ(tables[1].payload1, PayloadId::Nu);
  EXPECT_EQ(tables[2].payload2, PayloadId::Beta);
  for (const auto& t : tables) EXPECT_EQ(t.rows.size(), 64u);
}

TEST(RunProtocol, EighteenBitsInSixMessages) {
  const Transcript t = run_protocol(demo_inputs(), 42);
  EXPECT_EQ(t.total_bits, 18);
  ASSERT_EQ(t.messages.size(), 6u);
  for (std::size_t i = 0; i < 3; ++i) {
    EXPECT_EQ(t.messages[i].step, 2);
    EXPECT_EQ(t.messages[i].bits.size(), 4u);
  }
  for (std::size_t i = 3; i < 6; ++i) {
    EXPECT_EQ(t.messages[i].step, 3);
    EXPECT_EQ(t.messages[i].bits.size(), 2u);
  }
  EXPECT_GT(t.branch.min_fidelity(), 1.0 - 1e-9);
  EXPECT_NEAR(t.branch.probability, std::ldexp(1.0, -18), 1e-12);
}

TEST(RunProtocol, MessagePayloadsBelongToTheirSenders) {
  const Transcript t = run_protocol(demo_inputs(), 7);
  for (const auto& msg : t.messages) {
    for (const auto& [qu, bit] : msg.bits) {
      EXPECT_EQ(owner(qu), msg.sender) << qu.label();
      EXPECT_TRUE(bit == 0 || bit == 1);
    }
  }
  // Step-2 messages carry the step-2 qubits of their sender, step-3 likewise.
  for (const auto& msg : t.messages) {
    for (const auto& [qu, bit] : msg.bits) {
      bool in_step2 = false;
      for (const auto& [sq, basis] : step2_order()) in_step2 |= (sq == qu);
      EXPECT_EQ(in_step2, msg.step == 2) << qu.label();
    }
  }
}

TEST(RunProtocol, DeterministicPerSeed) {
  const ProtocolInputs in = demo_inputs();
  const Transcript a = run_protocol(in, 1234);
  const Transcript b = run_protocol(in, 1234);
  EXPECT_EQ(a.messages.size(), b.messages.size());
  for (std::size_t i = 0; i < a.messages.size(); ++i) {
    EXPECT_TRUE(a.messages[i] == b.messages[i]);
  }
  EXPECT_EQ(a.branch.bits(), b.branch.bits());

  // Different seeds almost surely differ somewhere in 18 bits.
  bool any_different = false;
  for (std::uint64_t seed = 1; seed <= 5 && !any_different; ++seed) {
    any_different = run_protocol(in, seed).branch.bits() != a.branch.bits();
  }
  EXPECT_TRUE(any_different);
}

TEST(RunProtocol, FaithfulForRandomPayloadsAndSeeds) {
  std::mt19937_64 rng(40);
  for (int trial = 0; trial < 5; ++trial) {
    const ProtocolInputs in = random_inputs(rng);
    const Transcript t = run_protocol(in, 1000 + static_cast<std::uint64_t>(trial));
    EXPECT_GT(t.branch.min_fidelity(), 1.0 - 1e-9);
    EXPECT_EQ(t.total_bits, 18);
  }
}

TEST(RunMany, SingleSeedSummaryMatchesItsTranscript) {
  const ProtocolInputs in = demo_inputs();
  const RunSummary summary = run_many(in, {99});
  EXPECT_EQ(summary.runs, 1u);
  ASSERT_EQ(summary.per_seed_min_fidelity.size(), 1u);

  const Transcript t = run_protocol(in, 99);
  EXPECT_EQ(summary.first.branch.bits(), t.branch.bits());
  EXPECT_NEAR(summary.per_seed_min_fidelity[0], t.branch.min_fidelity(), 0.0);
  for (std::size_t i = 0; i < 18; ++i) {
    EXPECT_EQ(summary.ones[i], static_cast<std::size_t>(t.branch.records[i].outcome));
  }
}

TEST(RunMany, MinFidelityStaysAtOne) {
  std::vector<std::uint64_t> seeds;
  for (std::uint64_t s = 1; s <= 200; ++s) seeds.push_back(s);
  const RunSummary summary = run_many(demo_inputs(), seeds);
  EXPECT_EQ(summary.runs, 200u);
  EXPECT_GE(summary.min_fidelity, 1.0 - 1e-9);
  EXPECT_EQ(summary.measured.size(), 18u);
  EXPECT_THROW(run_many(demo_inputs(), {}), std::invalid_argument);
}

// Withholding any one of the six messages breaks at least one branch: the
// receiving party, left with stale zero bits, applies a wrong correction.
TEST(Messages, EveryMessageIsNecessary) {
  std::mt19937_64 rng(41);
  const ProtocolInputs in = random_generic_inputs(rng);

  // Message m = (party, step). For each, find a table row whose bits differ
  // from the row with that party's step bits zeroed, and check the resulting
  // correction fails on the true receiver state.
  const struct {
    PartyId sender;
    int step;
  } messages[] = {{PartyId::Alice, 2}, {PartyId::Bob, 2},     {PartyId::Charlie, 2},
                  {PartyId::Alice, 3}, {PartyId::Bob, 3},     {PartyId::Charlie, 3}};

  for (const auto& msg : messages) {
    bool broke_somewhere = false;
    for (const auto& layout : block_layouts()) {
      // Positions of this message's bits within the block key.
      std::vector<int> affected;
      int pos = 0;
      for (const auto& [qu, basis] : layout.step2_order()) {
        if (owner(qu) == msg.sender && msg.step == 2) affected.push_back(pos);
        ++pos;
      }
      for (const auto& qu : layout.step3_order()) {
        if (owner(qu) == msg.sender && msg.step == 3) affected.push_back(pos);
        ++pos;
      }
      if (affected.empty()) continue;

      const int block = layout.number;
      const CorrectionTable& table = reference_tables()[static_cast<std::size_t>(block - 1)];
      const auto branches = enumerate_block(in, block);
      for (const BlockBranch& br : branches) {
        std::array<int, 6> masked = br.bits;
        for (int a : affected) masked[static_cast<std::size_t>(a)] = 0;
        if (masked == br.bits) continue;  // this branch happens to match the stale bits
        const auto& wrong_row = table.row_for(masked);

        const std::array<QubitId, 2> pair1 = {layout.r1a, layout.r1b};
        const std::array<QubitId, 2> pair2 = {layout.r2a, layout.r2b};
        const double f1 = fidelity(br.receivers_raw[0].apply_pauli(wrong_row.first),
                                   bell_like(in.payload(layout.p1), pair1));
        const double f2 = fidelity(br.receivers_raw[1].apply_pauli(wrong_row.second),
                                   bell_like(in.payload(layout.p2), pair2));
        if (std::min(f1, f2) < 1.0 - 1e-9) {
          broke_somewhere = true;
          break;
        }
      }
      if (broke_somewhere) break;
    }
    EXPECT_TRUE(broke_somewhere) << "dropping " << name(msg.sender) << " step " << msg.step
                                 << " should break some branch";
  }
}
