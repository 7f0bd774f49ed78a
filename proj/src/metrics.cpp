#include "cqt/metrics.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace cqt {

double efficiency(int q_s, int q_u, int b_t) {
  if (q_s < 0 || q_u < 0 || b_t < 0) throw std::invalid_argument("efficiency: negative count");
  if (q_u + b_t == 0) throw std::invalid_argument("efficiency: zero denominator");
  return static_cast<double>(q_s) / static_cast<double>(q_u + b_t);
}

std::vector<ComparisonRow> comparison_table() {
  auto row = [](const char* name, int q_s, int q_u, int b_t, const char* printed) {
    return ComparisonRow{{name, q_s, q_u, b_t, efficiency(q_s, q_u, b_t)}, printed};
  };
  return {
      row("Y. Li et al.", 6, 10, 9, "31.5%"),
      row("Z. W. Sang", 3, 7, 7, "21.42%"),
      row("R. Rahmawati et al. (1-1-1)", 3, 9, 9, "16.7%"),
      row("R. Rahmawati et al. (2-2-2)", 6, 12, 9, "28.57%"),
      row("R. Rahmawati et al. (1-2-3)", 6, 11, 9, "30%"),
      row("Our", 12, 18, 18, "33.33%"),
  };
}

bool matches_printed(double eta, const std::string& printed) {
  std::string text = printed;
  if (!text.empty() && text.back() == '%') text.pop_back();
  const double target = std::stod(text);
  const auto dot = text.find('.');
  const int decimals = dot == std::string::npos ? 0 : static_cast<int>(text.size() - dot - 1);

  const double percent = eta * 100.0;
  const double scale = std::pow(10.0, decimals);
  const double eps = 1e-9;
  const double truncated = std::floor(percent * scale + eps) / scale;
  const double rounded = std::round(percent * scale) / scale;

  return std::abs(truncated - target) < 0.5 / scale * 1e-6 ||
         std::abs(rounded - target) < 0.5 / scale * 1e-6 ||
         std::abs(percent - target) <= 0.05;
}

std::string comparison_csv() {
  std::string out = "name,q_s,q_u,b_t,eta_exact,eta_printed\n";
  char line[160];
  for (const auto& row : comparison_table()) {
    std::snprintf(line, sizeof line, "%s,%d,%d,%d,%.17g,%s\n", row.record.name.c_str(),
                  row.record.q_s, row.record.q_u, row.record.b_t, row.record.eta,
                  row.printed.c_str());
    out += line;
  }
  return out;
}

EfficiencyRecord measured_efficiency(const Transcript& t, int q_s, int q_u) {
  int counted = 0;
  for (const auto& msg : t.messages) counted += static_cast<int>(msg.bits.size());
  if (t.messages.size() != 6 || counted != t.total_bits) {
    throw std::runtime_error("measured_efficiency: incomplete transcript");
  }
  if (t.total_bits != 18) {
    throw std::runtime_error("measured_efficiency: transcript bit count violates the protocol");
  }
  return {"measured", q_s, q_u, t.total_bits, efficiency(q_s, q_u, t.total_bits)};
}

}  // namespace cqt
