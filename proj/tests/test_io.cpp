#include "cqt/io.hpp"

#include <gtest/gtest.h>

#include <cmath>

#include "json.hpp"

using namespace cqt;
using nlohmann::json;

TEST(DefaultInputs, DocumentedDemoValues) {
  const ProtocolInputs in = default_inputs();
  in.validate();
  EXPECT_DOUBLE_EQ(in.alpha.a0.real(), 0.6);
  EXPECT_DOUBLE_EQ(in.alpha.a1.real(), 0.8);
  EXPECT_DOUBLE_EQ(in.beta.a0.real(), 0.8);
  EXPECT_DOUBLE_EQ(in.mu.a0.real(), 1.0 / std::sqrt(2.0));
  EXPECT_DOUBLE_EQ(in.nu.a1.real(), 0.96);
  EXPECT_DOUBLE_EQ(in.gamma.a0.real(), 0.96);
  EXPECT_DOUBLE_EQ(in.lambda.a1.real(), -0.8);
}

TEST(InputsJson, RoundTrip) {
  const ProtocolInputs in = default_inputs();
  const std::string text = inputs_to_json(in, 77);
  const InputsFile parsed = parse_inputs_json(text);
  EXPECT_EQ(parsed.seed, 77u);
  for (PayloadId id : kPayloadOrder) {
    EXPECT_EQ(parsed.inputs.payload(id).a0, in.payload(id).a0) << name(id);
    EXPECT_EQ(parsed.inputs.payload(id).a1, in.payload(id).a1) << name(id);
  }
}

TEST(InputsJson, AcceptsComplexAmplitudesAndDefaultSeed) {
  const std::string text = R"({
    "alice": [[[0.6, 0.0], [0.0, 0.8]], [[1.0, 0.0], [0.0, 0.0]]],
    "bob":   [[[1.0, 0.0], [0.0, 0.0]], [[1.0, 0.0], [0.0, 0.0]]],
    "charlie": [[[1.0, 0.0], [0.0, 0.0]], [[1.0, 0.0], [0.0, 0.0]]]
  })";
  const InputsFile parsed = parse_inputs_json(text);
  EXPECT_EQ(parsed.seed, 1u);  // default
  EXPECT_EQ(parsed.inputs.alpha.a1, (cx{0.0, 0.8}));
}

TEST(InputsJson, ErrorsNameTheOffendingPayload) {
  const std::string bad_norm = R"({
    "alice": [[[0.6, 0.0], [0.81, 0.0]], [[1.0, 0.0], [0.0, 0.0]]],
    "bob":   [[[1.0, 0.0], [0.0, 0.0]], [[1.0, 0.0], [0.0, 0.0]]],
    "charlie": [[[1.0, 0.0], [0.0, 0.0]], [[1.0, 0.0], [0.0, 0.0]]]
  })";
  try {
    parse_inputs_json(bad_norm);
    FAIL() << "expected invalid_argument";
  } catch (const std::invalid_argument& e) {
    EXPECT_NE(std::string(e.what()).find("alpha"), std::string::npos);
    EXPECT_NE(std::string(e.what()).find("not normalized"), std::string::npos);
  }

  EXPECT_THROW(parse_inputs_json("not json at all"), std::invalid_argument);
  EXPECT_THROW(parse_inputs_json("{}"), std::invalid_argument);
  EXPECT_THROW(parse_inputs_json(R"({"alice": [], "bob": [], "charlie": []})"),
               std::invalid_argument);

  const std::string bad_seed = R"({
    "alice": [[[1.0, 0.0], [0.0, 0.0]], [[1.0, 0.0], [0.0, 0.0]]],
    "bob":   [[[1.0, 0.0], [0.0, 0.0]], [[1.0, 0.0], [0.0, 0.0]]],
    "charlie": [[[1.0, 0.0], [0.0, 0.0]], [[1.0, 0.0], [0.0, 0.0]]],
    "seed": "yes"
  })";
  EXPECT_THROW(parse_inputs_json(bad_seed), std::invalid_argument);
}

TEST(TranscriptJson, Shape) {
  const Transcript t = run_protocol(default_inputs(), 11);
  const json j = json::parse(transcript_to_json(t));
  EXPECT_EQ(j["seed"], 11);
  EXPECT_EQ(j["total_bits"], 18);
  ASSERT_EQ(j["messages"].size(), 6u);
  EXPECT_EQ(j["messages"][0]["sender"], "Alice");
  EXPECT_EQ(j["messages"][0]["step"], 2);
  EXPECT_EQ(j["messages"][0]["bits"].size(), 4u);
  EXPECT_EQ(j["messages"][0]["bits"][0][0], "a1");
  ASSERT_EQ(j["fidelities"].size(), 6u);
  for (const auto& f : j["fidelities"]) {
    EXPECT_GT(f.get<double>(), 1.0 - 1e-9);
  }
}

TEST(BranchJson, Shape) {
  const std::array<int, 18> forced{};
  const BranchOutcome out = run_branch(default_inputs(), forced);
  const json j = json::parse(branch_to_json(out));
  EXPECT_EQ(j["bits"].get<std::string>().size(), 18u);
  EXPECT_GT(j["probability"].get<double>(), 0.0);
  ASSERT_TRUE(j["corrections"].is_object());
  for (PayloadId id : kPayloadOrder) {
    ASSERT_TRUE(j["corrections"].contains(name(id))) << name(id);
    EXPECT_EQ(j["corrections"][name(id)], "I.I");
  }
  ASSERT_EQ(j["fidelities"].size(), 6u);
}

TEST(SwapSummaryJson, Shape) {
  const json j = json::parse(swap_summary_to_json(swap_table(SwapScenario{})));
  EXPECT_EQ(j["left"], 0);
  EXPECT_EQ(j["right"], 0);
  ASSERT_EQ(j["entries"].size(), 4u);
  EXPECT_EQ(j["entries"][0]["j"], 0);
  EXPECT_EQ(j["entries"][0]["k"], 0);
  EXPECT_NEAR(j["entries"][0]["re"].get<double>(), 0.5, 1e-12);
  EXPECT_NEAR(j["entries"][0]["im"].get<double>(), 0.0, 1e-12);
}

TEST(Serialization, DeterministicAcrossCalls) {
  const Transcript t = run_protocol(default_inputs(), 3);
  EXPECT_EQ(transcript_to_json(t), transcript_to_json(t));
  EXPECT_EQ(inputs_to_json(default_inputs(), 9), inputs_to_json(default_inputs(), 9));
}
