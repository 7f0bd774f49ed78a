#pragma once

// Straightforward dense 2^n statevector simulator used as an independent
// oracle against the sparse engine. Shares nothing with the library beyond
// the qubit-naming and bit conventions (register index 0 = leftmost printed
// bit), and is deliberately written in the plainest possible style.

#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "cqt/state.hpp"

namespace cqt::testing {

class DenseState {
 public:
  DenseState(std::vector<QubitId> reg, std::size_t basis_index)
      : reg_(std::move(reg)), amps_(std::size_t{1} << reg_.size()) {
    amps_.at(basis_index) = cx{1.0, 0.0};
  }

  static DenseState from_sparse(const SparseState& s) {
    DenseState d(s.reg(), 0);
    d.amps_.assign(d.amps_.size(), cx{0.0, 0.0});
    for (const auto& [ket, amp] : s.sorted_terms()) {
      d.amps_[ket.bits()] = amp;
    }
    return d;
  }

  const std::vector<QubitId>& reg() const { return reg_; }
  const std::vector<cx>& amps() const { return amps_; }

  int index_of(const QubitId& q) const {
    for (std::size_t i = 0; i < reg_.size(); ++i) {
      if (reg_[i] == q) return static_cast<int>(i);
    }
    throw std::invalid_argument("dense oracle: unknown qubit " + q.label());
  }

  void h(const QubitId& q) {
    const std::size_t mask = bit_mask(q);
    const double r = 1.0 / std::sqrt(2.0);
    for (std::size_t i = 0; i < amps_.size(); ++i) {
      if (i & mask) continue;
      const cx a = amps_[i], b = amps_[i | mask];
      amps_[i] = r * (a + b);
      amps_[i | mask] = r * (a - b);
    }
  }

  void x(const QubitId& q) {
    const std::size_t mask = bit_mask(q);
    for (std::size_t i = 0; i < amps_.size(); ++i) {
      if (!(i & mask)) std::swap(amps_[i], amps_[i | mask]);
    }
  }

  void z(const QubitId& q) {
    const std::size_t mask = bit_mask(q);
    for (std::size_t i = 0; i < amps_.size(); ++i) {
      if (i & mask) amps_[i] = -amps_[i];
    }
  }

  void y(const QubitId& q) {
    const cx im{0.0, 1.0};
    const std::size_t mask = bit_mask(q);
    for (std::size_t i = 0; i < amps_.size(); ++i) {
      if (i & mask) continue;
      const cx a = amps_[i], b = amps_[i | mask];
      amps_[i] = -im * b;
      amps_[i | mask] = im * a;
    }
  }

  void cnot(const QubitId& control, const QubitId& target) {
    const std::size_t cm = bit_mask(control);
    const std::size_t tm = bit_mask(target);
    for (std::size_t i = 0; i < amps_.size(); ++i) {
      if ((i & cm) && !(i & tm)) std::swap(amps_[i], amps_[i | tm]);
    }
  }

  // Probability of the outcome without collapsing.
  double prob(const QubitId& q, cqt::Basis basis, int outcome) const {
    DenseState copy = *this;
    if (basis == cqt::Basis::X) copy.h(q);
    const std::size_t mask = copy.bit_mask(q);
    double p = 0.0;
    for (std::size_t i = 0; i < copy.amps_.size(); ++i) {
      if (static_cast<int>((i & mask) != 0) == outcome) p += std::norm(copy.amps_[i]);
    }
    return p;
  }

  // Collapses on the outcome and removes the qubit from the register.
  void project(const QubitId& q, cqt::Basis basis, int outcome) {
    if (basis == cqt::Basis::X) h(q);
    const int idx = index_of(q);
    const int pos = static_cast<int>(reg_.size()) - 1 - idx;
    const std::size_t mask = std::size_t{1} << pos;
    double p = 0.0;
    for (std::size_t i = 0; i < amps_.size(); ++i) {
      if (static_cast<int>((i & mask) != 0) == outcome) p += std::norm(amps_[i]);
    }
    if (p <= 0.0) throw std::runtime_error("dense oracle: impossible outcome");
    std::vector<cx> next(amps_.size() >> 1, cx{0.0, 0.0});
    const double scale = 1.0 / std::sqrt(p);
    for (std::size_t i = 0; i < amps_.size(); ++i) {
      if (static_cast<int>((i & mask) != 0) != outcome) continue;
      const std::size_t low = i & (mask - 1);
      const std::size_t high = (i >> (pos + 1)) << pos;
      next[high | low] = amps_[i] * scale;
    }
    amps_ = std::move(next);
    reg_.erase(reg_.begin() + idx);
  }

  // Largest per-amplitude deviation from a sparse state on the same register.
  double max_diff(const SparseState& s) const {
    if (s.reg() != reg_) throw std::invalid_argument("dense oracle: register mismatch");
    double worst = 0.0;
    for (std::size_t i = 0; i < amps_.size(); ++i) {
      const cx sparse = s.amplitude(BasisKet(static_cast<std::uint32_t>(i),
                                             static_cast<int>(reg_.size())));
      worst = std::max(worst, std::abs(sparse - amps_[i]));
    }
    return worst;
  }

 private:
  std::size_t bit_mask(const QubitId& q) const {
    return std::size_t{1} << (reg_.size() - 1 - static_cast<std::size_t>(index_of(q)));
  }

  std::vector<QubitId> reg_;
  std::vector<cx> amps_;
};

}  // namespace cqt::testing
