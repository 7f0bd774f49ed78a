#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "cqt/io.hpp"

namespace {

using namespace cqt;

struct Options {
  std::string inputs_path;
  std::uint64_t seed = 1;
  bool seed_given = false;
  double tolerance = 1e-9;
  std::string out;
  std::string format;
  std::string scope = "block";
  int block = 1;
  int left = 0;
  int right = 0;
  int q_s = -1;
  int q_u = -1;
  int b_t = -1;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open inputs file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

// Payloads and seed: file values when --inputs is given (--seed overrides the
// file's seed), demo defaults otherwise.
std::pair<ProtocolInputs, std::uint64_t> load_inputs(const Options& opt) {
  if (opt.inputs_path.empty()) {
    return {default_inputs(), opt.seed};
  }
  InputsFile file = parse_inputs_json(read_file(opt.inputs_path));
  return {file.inputs, opt.seed_given ? opt.seed : file.seed};
}

void write_output(const Options& opt, const std::string& text) {
  if (opt.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(opt.out, std::ios::binary);
  if (!out) throw std::invalid_argument("cannot open output file: " + opt.out);
  out << text;
}

void check_tolerance(double tol) {
  if (!(tol > 0.0) || tol > 1e-3) {
    throw std::invalid_argument("tolerance must lie in (0, 1e-3]");
  }
}

int cmd_run(const Options& opt) {
  check_tolerance(opt.tolerance);
  const auto [inputs, seed] = load_inputs(opt);
  const Transcript t = run_protocol(inputs, seed);
  write_output(opt, transcript_to_json(t));
  const bool ok = t.branch.min_fidelity() >= 1.0 - opt.tolerance && t.total_bits == 18;
  if (!ok) {
    std::cerr << "verification failed: min fidelity " << t.branch.min_fidelity()
              << ", bits " << t.total_bits << "\n";
    return 1;
  }
  return 0;
}

int cmd_verify(const Options& opt) {
  check_tolerance(opt.tolerance);
  const auto [inputs, seed] = load_inputs(opt);
  (void)seed;

  std::size_t branches = 0;
  double min_fidelity = 1.0;
  double max_probability_deviation = 0.0;
  std::vector<std::string> failures;

  const bool full = opt.scope == "full";
  const double expected = full ? std::ldexp(1.0, -18) : std::ldexp(1.0, -6);

  auto audit = [&](const BranchOutcome& b, const std::string& tag) {
    ++branches;
    const double f = b.min_fidelity();
    min_fidelity = std::min(min_fidelity, f);
    const double dev = std::abs(b.probability - expected);
    max_probability_deviation = std::max(max_probability_deviation, dev);
    if ((f < 1.0 - opt.tolerance || dev >= 1e-12) && failures.size() < 32) {
      failures.push_back(tag + b.bits());
    }
  };

  if (full) {
    enumerate_branches(inputs, Scope::full(), [&](const BranchOutcome& b) { audit(b, ""); });
  } else {
    for (int block = 1; block <= 3; ++block) {
      double sum = 0.0;
      enumerate_branches(inputs, Scope::for_block(block), [&](const BranchOutcome& b) {
        audit(b, "block" + std::to_string(block) + ":");
        sum += b.probability;
      });
      if (std::abs(sum - 1.0) > 1e-9) {
        failures.push_back("block" + std::to_string(block) + ": probabilities sum to " +
                           std::to_string(sum));
      }
    }
  }

  std::ostringstream report;
  report.precision(17);
  report << "{\n  \"scope\": \"" << (full ? "full" : "block") << "\",\n"
         << "  \"branches\": " << branches << ",\n"
         << "  \"min_fidelity\": " << min_fidelity << ",\n"
         << "  \"max_probability_deviation\": " << max_probability_deviation << ",\n"
         << "  \"failures\": [";
  for (std::size_t i = 0; i < failures.size(); ++i) {
    report << (i ? ", " : "") << '"' << failures[i] << '"';
  }
  report << "],\n  \"pass\": " << (failures.empty() ? "true" : "false") << "\n}\n";
  write_output(opt, report.str());
  return failures.empty() ? 0 : 1;
}

int cmd_swap_demo(const Options& opt) {
  SwapScenario scenario;
  scenario.left = opt.left;
  scenario.right = opt.right;
  write_output(opt, swap_summary_to_json(swap_table(scenario)));
  return 0;
}

int cmd_correction_table(const Options& opt) {
  ProtocolInputs inputs;
  if (opt.inputs_path.empty()) {
    // The demo defaults include a symmetric payload the table rejects;
    // derive from seeded generic amplitudes instead.
    std::mt19937_64 rng(opt.seed);
    inputs = random_generic_inputs(rng);
  } else {
    inputs = parse_inputs_json(read_file(opt.inputs_path)).inputs;
  }
  write_output(opt, correction_table(inputs, opt.block).csv());
  return 0;
}

int cmd_efficiency(const Options& opt) {
  EfficiencyRecord rec;
  if (opt.q_s >= 0 || opt.q_u >= 0 || opt.b_t >= 0) {
    if (opt.q_s < 0 || opt.q_u < 0 || opt.b_t < 0) {
      throw std::invalid_argument("--qs, --qu and --bt must be given together");
    }
    rec = {"custom", opt.q_s, opt.q_u, opt.b_t, efficiency(opt.q_s, opt.q_u, opt.b_t)};
  } else {
    const auto [inputs, seed] = load_inputs(opt);
    rec = measured_efficiency(run_protocol(inputs, seed));
  }
  char line[160];
  if (opt.format == "json") {
    std::snprintf(line, sizeof line,
                  "{\"name\": \"%s\", \"q_s\": %d, \"q_u\": %d, \"b_t\": %d, \"eta\": %.17g}\n",
                  rec.name.c_str(), rec.q_s, rec.q_u, rec.b_t, rec.eta);
  } else {
    std::snprintf(line, sizeof line, "name,q_s,q_u,b_t,eta\n%s,%d,%d,%d,%.17g\n",
                  rec.name.c_str(), rec.q_s, rec.q_u, rec.b_t, rec.eta);
  }
  write_output(opt, line);
  return 0;
}

int cmd_compare(const Options& opt) {
  write_output(opt, comparison_csv());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"cyclic bidirectional teleportation simulator"};
  app.require_subcommand(1);

  Options opt;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--inputs", opt.inputs_path, "payload JSON file");
    cmd->add_option("--seed", opt.seed, "measurement sampling seed")
        ->each([&](const std::string&) { opt.seed_given = true; });
    cmd->add_option("--tolerance", opt.tolerance, "fidelity tolerance");
    cmd->add_option("--out", opt.out, "output file (default stdout)");
    cmd->add_option("--format", opt.format, "output format (json|csv)");
  };

  CLI::App* run = app.add_subcommand("run", "one seeded protocol run");
  add_common(run);

  CLI::App* verify = app.add_subcommand("verify", "exhaustive branch verification");
  add_common(verify);
  verify->add_option("--scope", opt.scope, "block or full")
      ->check(CLI::IsMember({"block", "full"}));

  CLI::App* swap_demo = app.add_subcommand("swap-demo", "entanglement swapping table");
  add_common(swap_demo);
  swap_demo->add_option("--left", opt.left, "left basis index")->check(CLI::Range(0, 7));
  swap_demo->add_option("--right", opt.right, "right basis index")->check(CLI::Range(0, 7));

  CLI::App* table = app.add_subcommand("correction-table", "64-row block correction table");
  add_common(table);
  table->add_option("--block", opt.block, "block number")->check(CLI::Range(1, 3));

  CLI::App* eff = app.add_subcommand("efficiency", "intrinsic efficiency of a run");
  add_common(eff);
  eff->add_option("--qs", opt.q_s, "qubits teleported");
  eff->add_option("--qu", opt.q_u, "channel qubits");
  eff->add_option("--bt", opt.b_t, "classical bits");

  CLI::App* compare = app.add_subcommand("compare", "scheme comparison table");
  add_common(compare);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (run->parsed()) return cmd_run(opt);
    if (verify->parsed()) return cmd_verify(opt);
    if (swap_demo->parsed()) return cmd_swap_demo(opt);
    if (table->parsed()) return cmd_correction_table(opt);
    if (eff->parsed()) return cmd_efficiency(opt);
    if (compare->parsed()) return cmd_compare(opt);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
