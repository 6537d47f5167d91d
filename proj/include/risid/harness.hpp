#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "risid/identification.hpp"
#include "risid/scenario.hpp"
#include "risid/stats.hpp"

namespace risid {

class Stream;

// A scenario bound to one identification scheme, with the scheme registry
// (codebook, group table or code bank) built and validated once.
class Experiment {
 public:
  // Throws ConfigurationError when the scheme cannot run on the scenario's
  // waveform, ValidationError for registry problems.
  Experiment(Scenario scenario, SchemeKind scheme);
  ~Experiment();
  Experiment(Experiment&&) noexcept;
  Experiment& operator=(Experiment&&) noexcept;

  IdentificationResult trial(Stream& stream) const;
  std::size_t airtime() const;
  const Scenario& scenario() const { return scenario_; }
  SchemeKind scheme() const { return scheme_; }

 private:
  struct Impl;
  Scenario scenario_;
  SchemeKind scheme_;
  std::unique_ptr<Impl> impl_;
};

struct PointTally {
  std::uint64_t correct = 0;
  std::uint64_t wrong = 0;  // wrong RIS or no verdict
  std::uint64_t ambiguous = 0;
};

// Trials [0, trials) on streams (seed, point, trial), split over `jobs`
// workers. The result depends only on (experiment, trials, seed, point).
PointTally run_trials(const Experiment& experiment, std::uint64_t trials, std::uint64_t seed,
                      std::uint32_t point, int jobs);
MisidEstimate run_point(const Experiment& experiment, std::uint64_t trials, std::uint64_t seed,
                        std::uint32_t point, int jobs);

struct SweepAxis {
  std::string name;
  std::vector<double> values;
};

struct SweepSpec {
  SchemeKind scheme = SchemeKind::Watermark;
  std::vector<SweepAxis> axes;
  std::uint64_t trials = 100000;
  std::uint64_t seed = 0;

  std::size_t num_points() const;
  void validate() const;
};

// `scheme = "..."`, `trials = ...` and an [axes] table of value lists.
SweepSpec load_sweep_spec(std::string_view text);
SweepSpec load_sweep_spec_file(const std::string& path);

// Names accepted as sweep axes.
std::vector<std::string_view> sweep_parameter_names();
bool parameter_is_integer(std::string_view name);
// Returns a copy of `scenario` with one parameter set; throws ValidationError
// for unknown names or non-integral values of integer parameters.
Scenario apply_parameter(Scenario scenario, SchemeKind scheme, std::string_view name, double value);

struct SweepRow {
  std::vector<double> values;  // one per axis
  MisidEstimate estimate;
};

// Cartesian product of the axes, first axis outermost; row i uses stream point
// index i.
std::vector<SweepRow> run_sweep(const SweepSpec& spec, const Scenario& scenario, int jobs);

// Header: scheme,<axis names>,trials,errors,ambiguous,rate,ci_low,ci_high,seed
std::string sweep_csv(const SweepSpec& spec, const std::vector<SweepRow>& rows);

struct CompareRow {
  SchemeKind scheme = SchemeKind::AmpMod;
  MisidEstimate estimate;
  std::size_t airtime = 0;
  std::uint64_t detector_ops = 0;
};

// Fits every scheme's identification frame into `overhead_budget` samples
// (ampmod slot length, spectral symbol count, watermark payload symbols) and
// runs each at the scenario's SNR. Requires a multi-carrier scenario.
Scenario matched_airtime_scenario(const Scenario& scenario, SchemeKind scheme, std::size_t overhead_budget);
std::vector<CompareRow> compare_schemes(const Scenario& scenario, std::size_t overhead_budget,
                                        std::uint64_t trials, std::uint64_t seed, int jobs);
std::string compare_csv(const std::vector<CompareRow>& rows, std::uint64_t seed);
std::string compare_table(const std::vector<CompareRow>& rows);

// CSV number formatting: 17 significant digits.
std::string csv_number(double v);

}  // namespace risid
