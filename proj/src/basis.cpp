#include "cqt/basis.hpp"

#include <cmath>
#include <cstdio>
#include <map>
#include <stdexcept>
#include <vector>

namespace cqt {

namespace {

const double kRSqrt2 = 1.0 / std::sqrt(2.0);

struct GhzForm {
  std::uint32_t ket_a;  // 3-bit printed pattern
  std::uint32_t ket_b;
  int sign;  // sign of ket_b
};

// Kets per basis index; even indices carry +, odd −.
constexpr std::array<GhzForm, 8> kGhzForms = {{
    {0b000, 0b111, +1},
    {0b000, 0b111, -1},
    {0b100, 0b011, +1},
    {0b100, 0b011, -1},
    {0b010, 0b101, +1},
    {0b010, 0b101, -1},
    {0b110, 0b001, +1},
    {0b110, 0b001, -1},
}};

void check_ghz_index(GhzIndex k) {
  if (k < 0 || k > 7) throw std::invalid_argument("basis index must be in 0..7");
}

}  // namespace

double BellLike::norm_sq() const { return std::norm(a0) + std::norm(a1); }

bool BellLike::normalized(double tol) const { return std::abs(norm_sq() - 1.0) <= tol; }

SparseState ghz_state(GhzIndex k, const std::array<QubitId, 3>& triple) {
  check_ghz_index(k);
  if (triple[0] == triple[1] || triple[0] == triple[2] || triple[1] == triple[2]) {
    throw std::invalid_argument("ghz_state: duplicate qubits");
  }
  const GhzForm& f = kGhzForms[static_cast<std::size_t>(k)];
  std::vector<QubitId> reg(triple.begin(), triple.end());
  return SparseState::from_terms(
      std::move(reg), {{BasisKet(f.ket_a, 3), cx{kRSqrt2, 0.0}},
                       {BasisKet(f.ket_b, 3), cx{f.sign * kRSqrt2, 0.0}}});
}

SparseState bell_like(const BellLike& p, const std::array<QubitId, 2>& pair) {
  if (!p.normalized()) throw std::invalid_argument("bell_like: amplitudes are not normalized");
  if (pair[0] == pair[1]) throw std::invalid_argument("bell_like: duplicate qubits");
  std::vector<QubitId> reg(pair.begin(), pair.end());
  return SparseState::from_terms(std::move(reg),
                                 {{BasisKet(0b00, 2), p.a0}, {BasisKet(0b11, 2), p.a1}});
}

SparseState x_ket(int sign, const QubitId& q) {
  if (sign != 1 && sign != -1) throw std::invalid_argument("x_ket: sign must be +1 or -1");
  return SparseState::from_terms({q}, {{BasisKet(0, 1), cx{kRSqrt2, 0.0}},
                                       {BasisKet(1, 1), cx{sign * kRSqrt2, 0.0}}});
}

double GhzGrid::norm_sq() const {
  double n = 0.0;
  for (const auto& row : c) {
    for (const cx& v : row) n += std::norm(v);
  }
  return n;
}

std::string GhzGrid::csv() const {
  std::string out;
  char cell[64];
  for (int j = 0; j < 8; ++j) {
    for (int k = 0; k < 8; ++k) {
      const cx v = c[static_cast<std::size_t>(j)][static_cast<std::size_t>(k)];
      std::snprintf(cell, sizeof cell, "%s%.17g,%.17g", k == 0 ? "" : ",", v.real(), v.imag());
      out += cell;
    }
    out += '\n';
  }
  return out;
}

GhzGrid ghz_decompose(const SparseState& state, const std::array<QubitId, 3>& left,
                      const std::array<QubitId, 3>& right) {
  if (state.width() != 6) throw std::invalid_argument("ghz_decompose: state must hold six qubits");
  std::vector<QubitId> order(left.begin(), left.end());
  order.insert(order.end(), right.begin(), right.end());
  const SparseState s = state.permute(order);  // throws unless left ∪ right = register

  GhzGrid grid;
  for (int j = 0; j < 8; ++j) {
    const GhzForm& fj = kGhzForms[static_cast<std::size_t>(j)];
    for (int k = 0; k < 8; ++k) {
      const GhzForm& fk = kGhzForms[static_cast<std::size_t>(k)];
      // <G_j ⊗ G_k | s>: four product kets, coefficients (±1/2).
      cx acc{0.0, 0.0};
      const std::array<std::pair<std::uint32_t, int>, 2> lhs = {
          std::make_pair(fj.ket_a, +1), std::make_pair(fj.ket_b, fj.sign)};
      const std::array<std::pair<std::uint32_t, int>, 2> rhs = {
          std::make_pair(fk.ket_a, +1), std::make_pair(fk.ket_b, fk.sign)};
      for (const auto& [kl, sl] : lhs) {
        for (const auto& [kr, sr] : rhs) {
          acc += 0.5 * static_cast<double>(sl * sr) * s.amplitude(BasisKet((kl << 3) | kr, 6));
        }
      }
      grid.c[static_cast<std::size_t>(j)][static_cast<std::size_t>(k)] = acc;
    }
  }
  return grid;
}

GhzMeasurement ghz_measure(const SparseState& state, const std::array<QubitId, 3>& triple,
                           std::optional<GhzIndex> forced, std::mt19937_64& rng) {
  if (forced) check_ghz_index(*forced);
  std::vector<int> tri_idx;
  for (const auto& q : triple) tri_idx.push_back(state.index_of(q));

  std::vector<QubitId> rest;
  for (const auto& q : state.reg()) {
    if (q != triple[0] && q != triple[1] && q != triple[2]) rest.push_back(q);
  }
  const int rest_width = static_cast<int>(rest.size());
  std::vector<int> rest_idx;
  for (const auto& q : rest) rest_idx.push_back(state.index_of(q));

  const int w = state.width();
  auto extract = [w](const BasisKet& ket, const std::vector<int>& idx) {
    std::uint32_t out = 0;
    for (int i : idx) out = (out << 1) | static_cast<std::uint32_t>(ket.bit(i));
    return out;
  };

  // Unnormalized remainder per outcome: rem_k[r] = Σ_t conj(G_k[t]) ψ(t, r).
  std::array<std::map<std::uint32_t, cx>, 8> remainders;
  for (const auto& [ket, amp] : state.sorted_terms()) {
    const std::uint32_t t = extract(ket, tri_idx);
    const std::uint32_t r = extract(ket, rest_idx);
    for (int k = 0; k < 8; ++k) {
      const GhzForm& f = kGhzForms[static_cast<std::size_t>(k)];
      if (t == f.ket_a) {
        remainders[static_cast<std::size_t>(k)][r] += kRSqrt2 * amp;
      } else if (t == f.ket_b) {
        remainders[static_cast<std::size_t>(k)][r] += f.sign * kRSqrt2 * amp;
      }
    }
  }

  std::array<double, 8> probs{};
  for (int k = 0; k < 8; ++k) {
    double p = 0.0;
    for (const auto& [r, a] : remainders[static_cast<std::size_t>(k)]) p += std::norm(a);
    probs[static_cast<std::size_t>(k)] = p;
  }

  GhzIndex outcome;
  if (forced) {
    outcome = *forced;
    if (probs[static_cast<std::size_t>(outcome)] < kPruneEps) {
      throw std::runtime_error("ghz_measure: forced outcome has zero probability");
    }
  } else {
    std::uniform_real_distribution<double> dist(0.0, 1.0);
    const double u = dist(rng);
    double acc = 0.0;
    outcome = 7;
    for (int k = 0; k < 8; ++k) {
      acc += probs[static_cast<std::size_t>(k)];
      if (u < acc) {
        outcome = k;
        break;
      }
    }
  }

  const double p = probs[static_cast<std::size_t>(outcome)];
  const double scale = 1.0 / std::sqrt(p);
  std::vector<std::pair<BasisKet, cx>> terms;
  for (const auto& [r, a] : remainders[static_cast<std::size_t>(outcome)]) {
    terms.emplace_back(BasisKet(r, rest_width), a * scale);
  }
  GhzMeasurement m;
  m.k = outcome;
  m.probability = p;
  m.collapsed = SparseState::from_terms(std::move(rest), terms);
  return m;
}

}  // namespace cqt
