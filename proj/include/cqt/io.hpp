#pragma once

#include <cstdint>
#include <string>

#include "cqt/metrics.hpp"
#include "cqt/swap.hpp"

namespace cqt {

// Demo payloads used when no inputs file is given: exact-norm, mostly
// asymmetric pairs.
ProtocolInputs default_inputs();

struct InputsFile {
  ProtocolInputs inputs;
  std::uint64_t seed = 1;
};

// Schema: {"alice": [[[re,im],[re,im]], [[re,im],[re,im]]], "bob": ...,
//          "charlie": ..., "seed": n}
// Each party holds two payloads, each payload two complex amplitudes.
// Throws std::invalid_argument with the offending payload named.
InputsFile parse_inputs_json(const std::string& text);
std::string inputs_to_json(const ProtocolInputs& inputs, std::uint64_t seed);

// {"seed": ..., "messages": [{"sender": ..., "step": ..., "bits": [["a1",0],...]}],
//  "total_bits": ..., "fidelities": [...]}
std::string transcript_to_json(const Transcript& t);

// {"bits": "18 chars", "probability": p, "corrections": {"alpha": "X.X", ...},
//  "fidelities": [6 reals]}
std::string branch_to_json(const BranchOutcome& b);

// {"left": j, "right": k, "entries": [{"j":..., "k":..., "re":..., "im":...}]}
std::string swap_summary_to_json(const SwapSummary& s);

}  // namespace cqt
