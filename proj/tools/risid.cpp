// risid: command-line front end for the identification simulator.
//
// Exit status: 0 success, 1 usage error, 2 invalid input (scenario, spec,
// files, scheme/waveform mismatch), 3 internal invariant violation.

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "risid/errors.hpp"
#include "risid/harness.hpp"
#include "risid/kernels.hpp"
#include "risid/scenario.hpp"
#include "risid/sequences.hpp"

namespace {

enum Exit { kOk = 0, kUsage = 1, kInvalid = 2, kInvariant = 3 };

void write_atomically(const std::string& path, const std::string& contents) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw risid::ValidationError("cannot write output file '" + path + "'");
    out << contents;
    out.flush();
    if (!out) {
      std::remove(tmp.c_str());
      throw risid::ValidationError("failed writing output file '" + path + "'");
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::remove(tmp.c_str());
    throw risid::ValidationError("cannot move output into place at '" + path + "': " + ec.message());
  }
}

std::string format_rate(const risid::MisidEstimate& e) {
  char buf[160];
  std::snprintf(buf, sizeof buf, "rate %.6g  95%% CI [%.6g, %.6g]  errors %llu (ambiguous %llu) / %llu trials",
                e.rate, e.ci95_low, e.ci95_high, static_cast<unsigned long long>(e.errors),
                static_cast<unsigned long long>(e.ambiguous), static_cast<unsigned long long>(e.trials));
  return buf;
}

std::string histogram_line(const std::map<long, std::uint64_t>& h) {
  std::string s;
  for (const auto& [value, count] : h) {
    if (!s.empty()) s += "  ";
    s += std::to_string(value) + ":" + std::to_string(count);
  }
  return s;
}

struct Options {
  std::string scenario;
  std::string spec;
  std::string scheme;
  std::string out;
  std::uint64_t seed = 0;
  std::uint64_t trials = 100000;
  std::size_t budget = 0;
  int jobs = 1;
  std::string isa;
  std::vector<int> degrees{5, 6, 7};
};

int cmd_run(const Options& o) {
  risid::Scenario scenario = risid::load_scenario_file(o.scenario);
  const risid::Experiment experiment(std::move(scenario), risid::parse_scheme(o.scheme));
  const risid::MisidEstimate e = risid::run_point(experiment, o.trials, o.seed, 0, o.jobs);
  std::cout << o.scheme << ": " << format_rate(e) << "  airtime " << experiment.airtime() << " samples\n";
  if (!o.out.empty()) {
    std::string csv = "scheme,trials,errors,ambiguous,rate,ci_low,ci_high,seed\n";
    csv += std::string(risid::scheme_name(experiment.scheme())) + ',' + std::to_string(e.trials) + ',' +
           std::to_string(e.errors) + ',' + std::to_string(e.ambiguous) + ',' + risid::csv_number(e.rate) + ',' +
           risid::csv_number(e.ci95_low) + ',' + risid::csv_number(e.ci95_high) + ',' + std::to_string(o.seed) +
           '\n';
    write_atomically(o.out, csv);
  }
  return kOk;
}

int cmd_sweep(const Options& o, bool trials_given) {
  const risid::Scenario scenario = risid::load_scenario_file(o.scenario);
  risid::SweepSpec spec = risid::load_sweep_spec_file(o.spec);
  spec.seed = o.seed;
  if (trials_given) spec.trials = o.trials;
  const auto rows = risid::run_sweep(spec, scenario, o.jobs);
  const std::string csv = risid::sweep_csv(spec, rows);
  if (o.out.empty())
    std::cout << csv;
  else
    write_atomically(o.out, csv);
  return kOk;
}

int cmd_compare(const Options& o) {
  const risid::Scenario scenario = risid::load_scenario_file(o.scenario);
  const auto rows = risid::compare_schemes(scenario, o.budget, o.trials, o.seed, o.jobs);
  std::cout << risid::compare_table(rows);
  if (!o.out.empty()) write_atomically(o.out, risid::compare_csv(rows, o.seed));
  return kOk;
}

int cmd_verify(const Options& o) {
  bool all_ok = true;
  for (int m : o.degrees) {
    const risid::GoldFamily family = risid::gold_family(m);
    const risid::CorrelationHistogram h = risid::correlation_histogram(family);
    const bool ok = risid::histogram_is_three_valued(h, m);
    all_ok = all_ok && ok;
    std::cout << "m=" << m << "  codes " << family.size() << "  length " << family.code_length() << "  t "
              << risid::gold_t(m) << '\n';
    std::cout << "  autocorrelation   " << histogram_line(h.autocorrelation) << '\n';
    std::cout << "  crosscorrelation  " << histogram_line(h.crosscorrelation) << '\n';
    std::cout << "  " << (ok ? "PASS" : "FAIL") << '\n';
  }
  return all_ok ? kOk : kInvariant;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Monte-Carlo simulator for RIS identification schemes", "risid"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Print help for every subcommand and exit");
  Options o;

  app.add_option("--isa", o.isa, "Kernel instruction set: scalar or avx2 (default: best available)")
      ->check(CLI::IsMember({"scalar", "avx2"}));

  auto* run = app.add_subcommand("run", "Estimate the misidentification rate of one scheme at one point");
  run->add_option("--scenario", o.scenario, "Scenario file")->required();
  run->add_option("--scheme", o.scheme, "Scheme: ampmod, spectral or watermark")
      ->required()
      ->check(CLI::IsMember({"ampmod", "spectral", "watermark"}));
  run->add_option("--seed", o.seed, "Master seed (64-bit unsigned)")->required();
  run->add_option("--trials", o.trials, "Monte-Carlo trials")->capture_default_str()->check(CLI::PositiveNumber);
  run->add_option("--jobs", o.jobs, "Worker threads")->capture_default_str()->check(CLI::PositiveNumber);
  run->add_option("--out", o.out, "Optional CSV output path");

  auto* sweep = app.add_subcommand("sweep", "Evaluate a parameter sweep and write one CSV row per point");
  sweep->add_option("--scenario", o.scenario, "Scenario file")->required();
  sweep->add_option("--spec", o.spec, "Sweep specification file")->required();
  sweep->add_option("--seed", o.seed, "Master seed (64-bit unsigned)")->required();
  auto* sweep_trials =
      sweep->add_option("--trials", o.trials, "Override the trials per point from the spec")->check(
          CLI::PositiveNumber);
  sweep->add_option("--jobs", o.jobs, "Worker threads")->capture_default_str()->check(CLI::PositiveNumber);
  sweep->add_option("--out", o.out, "CSV output path (default: stdout)");

  auto* compare = app.add_subcommand("compare", "Compare the three schemes at matched identification airtime");
  compare->add_option("--scenario", o.scenario, "Multi-carrier scenario file")->required();
  compare->add_option("--budget", o.budget, "Identification airtime budget in samples")->required()->check(
      CLI::PositiveNumber);
  compare->add_option("--seed", o.seed, "Master seed (64-bit unsigned)")->required();
  compare->add_option("--trials", o.trials, "Monte-Carlo trials per scheme")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  compare->add_option("--jobs", o.jobs, "Worker threads")->capture_default_str()->check(CLI::PositiveNumber);
  compare->add_option("--out", o.out, "Optional CSV output path");

  auto* verify = app.add_subcommand("verify-sequences", "Exhaustively check Gold-family correlation values");
  verify->add_option("--m", o.degrees, "LFSR degree; repeat for several (default: 5 6 7)")
      ->capture_default_str()
      ->expected(1, 16);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (!o.isa.empty()) {
      const risid::kernels::Isa isa =
          o.isa == "avx2" ? risid::kernels::Isa::Avx2 : risid::kernels::Isa::Scalar;
      if (!risid::kernels::isa_supported(isa))
        throw risid::ValidationError("--isa " + o.isa + ": not supported by this CPU");
      risid::kernels::set_isa(isa);
    }
    if (*run) return cmd_run(o);
    if (*sweep) return cmd_sweep(o, sweep_trials->count() > 0);
    if (*compare) return cmd_compare(o);
    if (*verify) return cmd_verify(o);
  } catch (const risid::ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInvalid;
  } catch (const risid::ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInvalid;
  } catch (const risid::InvariantError& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return kInvariant;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return kInvariant;
  }
  return kUsage;
}
