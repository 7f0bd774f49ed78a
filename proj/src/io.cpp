#include "cqt/io.hpp"

#include <cmath>
#include <stdexcept>

#include "json.hpp"

namespace cqt {

namespace {

using ordered_json = nlohmann::ordered_json;

cx parse_amplitude(const nlohmann::json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    throw std::invalid_argument(where + ": amplitude must be a [re, im] pair");
  }
  return cx{j[0].get<double>(), j[1].get<double>()};
}

BellLike parse_payload(const nlohmann::json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 2) {
    throw std::invalid_argument(where + ": payload must be a pair of amplitudes");
  }
  BellLike p{parse_amplitude(j[0], where), parse_amplitude(j[1], where)};
  if (!p.normalized()) {
    throw std::invalid_argument(where + ": payload is not normalized");
  }
  return p;
}

nlohmann::json payload_json(const BellLike& p) {
  return nlohmann::json::array(
      {{p.a0.real(), p.a0.imag()}, {p.a1.real(), p.a1.imag()}});
}

const char* payload_key(PayloadId id) { return name(id); }

}  // namespace

ProtocolInputs default_inputs() {
  const double r = 1.0 / std::sqrt(2.0);
  ProtocolInputs in;
  in.alpha = {cx{0.6, 0.0}, cx{0.8, 0.0}};
  in.beta = {cx{0.8, 0.0}, cx{0.6, 0.0}};
  in.mu = {cx{r, 0.0}, cx{r, 0.0}};
  in.nu = {cx{0.28, 0.0}, cx{0.96, 0.0}};
  in.gamma = {cx{0.96, 0.0}, cx{0.28, 0.0}};
  in.lambda = {cx{0.6, 0.0}, cx{-0.8, 0.0}};
  return in;
}

InputsFile parse_inputs_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw std::invalid_argument(std::string("inputs file is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw std::invalid_argument("inputs file must be a JSON object");

  InputsFile file;
  const struct {
    const char* party;
    BellLike ProtocolInputs::*first;
    BellLike ProtocolInputs::*second;
    const char* first_name;
    const char* second_name;
  } parties[] = {
      {"alice", &ProtocolInputs::alpha, &ProtocolInputs::beta, "alpha", "beta"},
      {"bob", &ProtocolInputs::mu, &ProtocolInputs::nu, "mu", "nu"},
      {"charlie", &ProtocolInputs::gamma, &ProtocolInputs::lambda, "gamma", "lambda"},
  };
  for (const auto& p : parties) {
    if (!j.contains(p.party) || !j[p.party].is_array() || j[p.party].size() != 2) {
      throw std::invalid_argument(std::string(p.party) + ": expected two payloads");
    }
    file.inputs.*(p.first) =
        parse_payload(j[p.party][0], std::string(p.party) + " payload " + p.first_name);
    file.inputs.*(p.second) =
        parse_payload(j[p.party][1], std::string(p.party) + " payload " + p.second_name);
  }
  if (j.contains("seed")) {
    if (!j["seed"].is_number_unsigned() && !j["seed"].is_number_integer()) {
      throw std::invalid_argument("seed must be an integer");
    }
    file.seed = j["seed"].get<std::uint64_t>();
  }
  return file;
}

std::string inputs_to_json(const ProtocolInputs& inputs, std::uint64_t seed) {
  ordered_json j;
  j["alice"] = {payload_json(inputs.alpha), payload_json(inputs.beta)};
  j["bob"] = {payload_json(inputs.mu), payload_json(inputs.nu)};
  j["charlie"] = {payload_json(inputs.gamma), payload_json(inputs.lambda)};
  j["seed"] = seed;
  return j.dump(2) + "\n";
}

std::string transcript_to_json(const Transcript& t) {
  ordered_json j;
  j["seed"] = t.seed;
  j["messages"] = ordered_json::array();
  for (const auto& msg : t.messages) {
    ordered_json m;
    m["sender"] = name(msg.sender);
    m["step"] = msg.step;
    m["bits"] = ordered_json::array();
    for (const auto& [q, bit] : msg.bits) {
      m["bits"].push_back(ordered_json::array({q.label(), bit}));
    }
    j["messages"].push_back(std::move(m));
  }
  j["total_bits"] = t.total_bits;
  j["fidelities"] = ordered_json::array();
  for (const auto& [id, f] : t.branch.fidelities) j["fidelities"].push_back(f);
  return j.dump(2) + "\n";
}

std::string branch_to_json(const BranchOutcome& b) {
  ordered_json j;
  j["bits"] = b.bits();
  j["probability"] = b.probability;
  j["corrections"] = ordered_json::object();
  const RecipientMap map = RecipientMap::standard();
  for (const auto& [id, p] : b.corrections) {
    const auto& pair = map.receiver(id);
    j["corrections"][payload_key(id)] = p.str({pair[0], pair[1]});
  }
  j["fidelities"] = ordered_json::array();
  for (const auto& [id, f] : b.fidelities) j["fidelities"].push_back(f);
  return j.dump(2) + "\n";
}

std::string swap_summary_to_json(const SwapSummary& s) {
  ordered_json j;
  j["left"] = s.scenario.left;
  j["right"] = s.scenario.right;
  j["entries"] = ordered_json::array();
  for (const auto& e : s.entries) {
    ordered_json entry;
    entry["j"] = e.j;
    entry["k"] = e.k;
    entry["re"] = e.c.real();
    entry["im"] = e.c.imag();
    j["entries"].push_back(std::move(entry));
  }
  return j.dump(2) + "\n";
}

}  // namespace cqt
