#include "cqt/state.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>
#include <stdexcept>

namespace cqt {

namespace {

const double kRSqrt2 = 1.0 / std::sqrt(2.0);

void prune(std::map<std::uint32_t, cx>& terms) {
  for (auto it = terms.begin(); it != terms.end();) {
    if (std::abs(it->second) < kPruneEps) {
      it = terms.erase(it);
    } else {
      ++it;
    }
  }
}

}  // namespace

char to_char(Pauli p) {
  switch (p) {
    case Pauli::I: return 'I';
    case Pauli::X: return 'X';
    case Pauli::Y: return 'Y';
    case Pauli::Z: return 'Z';
  }
  return '?';
}

Pauli pauli_from_char(char c) {
  switch (c) {
    case 'I': return Pauli::I;
    case 'X': return Pauli::X;
    case 'Y': return Pauli::Y;
    case 'Z': return Pauli::Z;
    default: throw std::invalid_argument(std::string("not a Pauli: ") + c);
  }
}

std::string PauliString::str(const std::vector<QubitId>& order) const {
  std::string out;
  for (std::size_t i = 0; i < order.size(); ++i) {
    if (i > 0) out.push_back('.');
    auto it = ops.find(order[i]);
    out.push_back(to_char(it == ops.end() ? Pauli::I : it->second));
  }
  return out;
}

BasisKet::BasisKet(std::uint32_t bits, int width) : bits_(bits), width_(width) {
  if (width < 0 || width > 30) {
    throw std::invalid_argument("ket width out of range");
  }
  if (width < 32 && (bits >> width) != 0) {
    throw std::invalid_argument("ket bits exceed width");
  }
}

BasisKet::BasisKet(std::string_view pattern) : bits_(0), width_(static_cast<int>(pattern.size())) {
  if (width_ > 30) throw std::invalid_argument("ket width out of range");
  for (char c : pattern) {
    if (c != '0' && c != '1') throw std::invalid_argument("ket pattern must be 0s and 1s");
    bits_ = (bits_ << 1) | static_cast<std::uint32_t>(c - '0');
  }
}

int BasisKet::bit(int index) const {
  if (index < 0 || index >= width_) throw std::out_of_range("ket index");
  return static_cast<int>((bits_ >> (width_ - 1 - index)) & 1u);
}

BasisKet BasisKet::with_bit(int index, int value) const {
  if (index < 0 || index >= width_) throw std::out_of_range("ket index");
  const std::uint32_t mask = 1u << (width_ - 1 - index);
  return BasisKet(value ? (bits_ | mask) : (bits_ & ~mask), width_);
}

BasisKet BasisKet::flipped(int index) const {
  if (index < 0 || index >= width_) throw std::out_of_range("ket index");
  return BasisKet(bits_ ^ (1u << (width_ - 1 - index)), width_);
}

BasisKet BasisKet::erased(int index) const {
  if (index < 0 || index >= width_) throw std::out_of_range("ket index");
  const int pos = width_ - 1 - index;  // bit position of the dropped qubit
  const std::uint32_t low = bits_ & ((1u << pos) - 1u);
  const std::uint32_t high = (bits_ >> (pos + 1)) << pos;
  return BasisKet(high | low, width_ - 1);
}

BasisKet BasisKet::concat(const BasisKet& rhs) const {
  return BasisKet((bits_ << rhs.width_) | rhs.bits_, width_ + rhs.width_);
}

std::string BasisKet::str() const {
  std::string out(static_cast<std::size_t>(width_), '0');
  for (int i = 0; i < width_; ++i) out[static_cast<std::size_t>(i)] = bit(i) ? '1' : '0';
  return out;
}

SparseState SparseState::basis_state(std::vector<QubitId> reg, const BasisKet& ket) {
  if (static_cast<int>(reg.size()) != ket.width()) {
    throw std::invalid_argument("ket width does not match register size");
  }
  std::set<QubitId> seen(reg.begin(), reg.end());
  if (seen.size() != reg.size()) throw std::invalid_argument("duplicate qubit in register");
  SparseState s;
  s.reg_ = std::move(reg);
  s.terms_.emplace(ket.bits(), cx{1.0, 0.0});
  return s;
}

SparseState SparseState::from_terms(std::vector<QubitId> reg,
                                    const std::vector<std::pair<BasisKet, cx>>& terms) {
  std::set<QubitId> seen(reg.begin(), reg.end());
  if (seen.size() != reg.size()) throw std::invalid_argument("duplicate qubit in register");
  SparseState s;
  s.reg_ = std::move(reg);
  for (const auto& [ket, amp] : terms) {
    if (ket.width() != s.width()) {
      throw std::invalid_argument("ket width does not match register size");
    }
    s.terms_[ket.bits()] += amp;
  }
  prune(s.terms_);
  if (std::abs(s.norm_sq() - 1.0) > kStateTol) {
    throw std::invalid_argument("from_terms: state is not normalized");
  }
  return s;
}

bool SparseState::contains(const QubitId& q) const {
  return std::find(reg_.begin(), reg_.end(), q) != reg_.end();
}

int SparseState::index_of(const QubitId& q) const {
  auto it = std::find(reg_.begin(), reg_.end(), q);
  if (it == reg_.end()) {
    throw std::invalid_argument("unknown qubit: " + q.label());
  }
  return static_cast<int>(it - reg_.begin());
}

cx SparseState::amplitude(const BasisKet& ket) const {
  if (ket.width() != width()) throw std::invalid_argument("ket width does not match register size");
  auto it = terms_.find(ket.bits());
  return it == terms_.end() ? cx{0.0, 0.0} : it->second;
}

cx SparseState::amplitude(std::string_view pattern) const {
  return amplitude(BasisKet(pattern));
}

double SparseState::norm_sq() const {
  double n = 0.0;
  for (const auto& [k, a] : terms_) n += std::norm(a);
  return n;
}

std::vector<std::pair<BasisKet, cx>> SparseState::sorted_terms() const {
  std::vector<std::pair<BasisKet, cx>> out;
  out.reserve(terms_.size());
  for (const auto& [k, a] : terms_) out.emplace_back(BasisKet(k, width()), a);
  return out;
}

SparseState SparseState::apply_h(const QubitId& q) const {
  const int pos = width() - 1 - index_of(q);
  SparseState out;
  out.reg_ = reg_;
  const std::uint32_t mask = 1u << pos;
  for (const auto& [k, a] : terms_) {
    const cx half = a * kRSqrt2;
    out.terms_[k & ~mask] += half;
    out.terms_[k | mask] += (k & mask) ? -half : half;
  }
  prune(out.terms_);
  return out;
}

SparseState SparseState::apply_cnot(const QubitId& control, const QubitId& target) const {
  if (control == target) throw std::invalid_argument("cnot control equals target");
  const int cpos = width() - 1 - index_of(control);
  const int tpos = width() - 1 - index_of(target);
  SparseState out;
  out.reg_ = reg_;
  for (const auto& [k, a] : terms_) {
    const std::uint32_t k2 = (k >> cpos) & 1u ? k ^ (1u << tpos) : k;
    out.terms_.emplace(k2, a);
  }
  return out;
}

SparseState SparseState::apply_pauli(const PauliString& p) const {
  SparseState out;
  out.reg_ = reg_;
  // Precompute (bit position, op) pairs; unknown qubits throw here.
  std::vector<std::pair<int, Pauli>> acts;
  acts.reserve(p.ops.size());
  for (const auto& [q, op] : p.ops) {
    acts.emplace_back(width() - 1 - index_of(q), op);
  }
  const cx imag{0.0, 1.0};
  for (const auto& [k, a] : terms_) {
    std::uint32_t k2 = k;
    cx a2 = a * p.phase;
    for (const auto& [pos, op] : acts) {
      const std::uint32_t mask = 1u << pos;
      switch (op) {
        case Pauli::I:
          break;
        case Pauli::X:
          k2 ^= mask;
          break;
        case Pauli::Z:
          if (k2 & mask) a2 = -a2;
          break;
        case Pauli::Y:
          // Y = iXZ: sign from the original bit, then flip.
          if (k2 & mask) a2 = -a2;
          a2 *= imag;
          k2 ^= mask;
          break;
      }
    }
    out.terms_[k2] += a2;
  }
  prune(out.terms_);
  return out;
}

SparseState SparseState::permute(const std::vector<QubitId>& new_order) const {
  if (new_order.size() != reg_.size()) throw std::invalid_argument("permute: register size mismatch");
  std::vector<int> src(new_order.size());
  std::set<int> used;
  for (std::size_t i = 0; i < new_order.size(); ++i) {
    src[i] = index_of(new_order[i]);
    used.insert(src[i]);
  }
  if (used.size() != new_order.size()) throw std::invalid_argument("permute: not a permutation");
  SparseState out;
  out.reg_ = new_order;
  const int w = width();
  for (const auto& [k, a] : terms_) {
    std::uint32_t k2 = 0;
    for (std::size_t i = 0; i < src.size(); ++i) {
      const int bit = static_cast<int>((k >> (w - 1 - src[i])) & 1u);
      k2 |= static_cast<std::uint32_t>(bit) << (w - 1 - static_cast<int>(i));
    }
    out.terms_.emplace(k2, a);
  }
  return out;
}

double SparseState::z_outcome_probability(const QubitId& q, int outcome) const {
  if (outcome != 0 && outcome != 1) throw std::invalid_argument("outcome must be 0 or 1");
  const int pos = width() - 1 - index_of(q);
  double p = 0.0;
  for (const auto& [k, a] : terms_) {
    if (static_cast<int>((k >> pos) & 1u) == outcome) p += std::norm(a);
  }
  return p;
}

Projection SparseState::project(const QubitId& q, Basis basis, int outcome) const {
  if (outcome != 0 && outcome != 1) throw std::invalid_argument("outcome must be 0 or 1");
  if (basis == Basis::X) {
    return apply_h(q).project(q, Basis::Z, outcome);
  }
  const int idx = index_of(q);
  const int pos = width() - 1 - idx;
  const std::uint32_t mask = 1u << pos;
  double p = 0.0;
  for (const auto& [k, a] : terms_) {
    if (static_cast<int>((k >> pos) & 1u) == outcome) p += std::norm(a);
  }
  Projection result;
  result.probability = p;
  if (p < kPruneEps) return result;  // impossible outcome: no state
  const double scale = 1.0 / std::sqrt(p);
  SparseState out;
  out.reg_ = reg_;
  out.reg_.erase(out.reg_.begin() + idx);
  const std::uint32_t low_mask = mask - 1u;
  for (const auto& [k, a] : terms_) {
    if (static_cast<int>((k >> pos) & 1u) != outcome) continue;
    const std::uint32_t k2 = ((k >> (pos + 1)) << pos) | (k & low_mask);
    out.terms_.emplace(k2, a * scale);
  }
  result.state = std::move(out);
  return result;
}

std::optional<std::pair<SparseState, SparseState>> SparseState::try_factor(
    const std::vector<QubitId>& subset) const {
  std::vector<int> sub_idx(subset.size());
  std::set<int> taken;
  for (std::size_t i = 0; i < subset.size(); ++i) {
    sub_idx[i] = index_of(subset[i]);
    taken.insert(sub_idx[i]);
  }
  if (taken.size() != subset.size()) throw std::invalid_argument("try_factor: duplicate qubit in subset");

  std::vector<QubitId> rest;
  std::vector<int> rest_idx;
  for (int i = 0; i < width(); ++i) {
    if (!taken.count(i)) {
      rest.push_back(reg_[static_cast<std::size_t>(i)]);
      rest_idx.push_back(i);
    }
  }

  const int w = width();
  auto extract = [w](std::uint32_t k, const std::vector<int>& idx) {
    std::uint32_t out = 0;
    for (int i : idx) out = (out << 1) | ((k >> (w - 1 - i)) & 1u);
    return out;
  };

  // Reference term: the largest amplitude, lowest ket on ties.
  std::uint32_t ref_key = 0;
  double ref_mag = -1.0;
  for (const auto& [k, a] : terms_) {
    if (std::abs(a) > ref_mag + kPruneEps) {
      ref_mag = std::abs(a);
      ref_key = k;
    }
  }
  if (ref_mag <= 0.0) return std::nullopt;
  const std::uint32_t ref_s = extract(ref_key, sub_idx);
  const std::uint32_t ref_r = extract(ref_key, rest_idx);
  const cx ref_amp = terms_.at(ref_key);

  std::map<std::uint32_t, cx> fac_s, fac_r;
  std::map<std::pair<std::uint32_t, std::uint32_t>, cx> split;
  for (const auto& [k, a] : terms_) {
    const std::uint32_t s = extract(k, sub_idx);
    const std::uint32_t r = extract(k, rest_idx);
    split[{s, r}] = a;
    if (r == ref_r) fac_s[s] = a;
    if (s == ref_s) fac_r[r] = a;
  }

  // Every term must lie on the product grid, and every grid point must match.
  for (const auto& [sr, a] : split) {
    if (!fac_s.count(sr.first) || !fac_r.count(sr.second)) return std::nullopt;
  }
  for (const auto& [s, as] : fac_s) {
    for (const auto& [r, ar] : fac_r) {
      const cx predicted = as * ar / ref_amp;
      auto it = split.find({s, r});
      const cx actual = it == split.end() ? cx{0.0, 0.0} : it->second;
      if (std::abs(predicted - actual) > kStateTol) return std::nullopt;
    }
  }

  auto build = [](std::vector<QubitId> reg, const std::map<std::uint32_t, cx>& raw) {
    SparseState s;
    s.reg_ = std::move(reg);
    s.terms_ = raw;
    prune(s.terms_);
    const double n = std::sqrt(s.norm_sq());
    for (auto& [k, a] : s.terms_) a /= n;
    return s.canonical_phase();
  };
  return std::make_pair(build(subset, fac_s), build(rest, fac_r));
}

SparseState SparseState::canonical_phase() const {
  if (terms_.empty()) return *this;
  const cx first = terms_.begin()->second;
  const cx phase = first / std::abs(first);
  SparseState out;
  out.reg_ = reg_;
  for (const auto& [k, a] : terms_) out.terms_.emplace(k, a / phase);
  return out;
}

std::string SparseState::dump() const {
  std::string out;
  char line[96];
  for (const auto& [k, a] : terms_) {
    const std::string ket = BasisKet(k, width()).str();
    std::snprintf(line, sizeof line, "%s %.16e %.16e\n", ket.c_str(), a.real(), a.imag());
    out += line;
  }
  return out;
}

SparseState tensor(const SparseState& s1, const SparseState& s2) {
  for (const auto& q : s2.reg_) {
    if (s1.contains(q)) throw std::invalid_argument("tensor: registers overlap at " + q.label());
  }
  SparseState out;
  out.reg_ = s1.reg_;
  out.reg_.insert(out.reg_.end(), s2.reg_.begin(), s2.reg_.end());
  const int w2 = s2.width();
  for (const auto& [k1, a1] : s1.terms_) {
    for (const auto& [k2, a2] : s2.terms_) {
      out.terms_.emplace((k1 << w2) | k2, a1 * a2);
    }
  }
  prune(out.terms_);
  return out;
}

cx inner_product(const SparseState& s1, const SparseState& s2) {
  const SparseState* rhs = &s2;
  SparseState permuted;
  if (s1.reg_ != s2.reg_) {
    permuted = s2.permute(s1.reg_);  // throws if registers differ as sets
    rhs = &permuted;
  }
  cx acc{0.0, 0.0};
  for (const auto& [k, a] : s1.terms_) {
    auto it = rhs->terms_.find(k);
    if (it != rhs->terms_.end()) acc += std::conj(a) * it->second;
  }
  return acc;
}

double fidelity(const SparseState& s1, const SparseState& s2) {
  return std::norm(inner_product(s1, s2));
}

}  // namespace cqt
