#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "chartkit/bench.hpp"
#include "chartkit/chart.hpp"
#include "chartkit/metrics.hpp"
#include "chartkit/pipeline.hpp"

namespace chartkit {

const char* toolkit_version();

/// Full description of one run. `seed` drives both the scene and the channel
/// (see resolve_seeds); the per-module rng_seed fields are derived from it.
struct ExperimentConfig {
  std::uint64_t seed = 1;
  SceneConfig scene;
  ChannelParams channel;
  EstimatorConfig estimator;
  std::size_t k_max = 102;
  std::size_t repeats = 3;
  bool bench = false;
  bool dump_spectra = false;
  unsigned threads = 1;
  std::string output_dir = "out";

  /// Throws ConfigError on any inconsistent field.
  void validate() const;
};

/// scene.rng_seed = seed, channel.rng_seed = mix_seed(seed).
void resolve_seeds(ExperimentConfig& cfg);

/// Parses a config object. Every key is optional; unknown keys are rejected.
/// A run manifest is accepted as well (its "config" member is used).
ExperimentConfig config_from_json(const std::string& text);
ExperimentConfig load_config(const std::filesystem::path& path);
std::string config_to_json(const ExperimentConfig& cfg);

struct ExperimentResult {
  Chart chart;
  QualityReport report;
  std::optional<TimingRecord> timing;
};

/// Runs one estimator pair on a fresh dataset and writes chart.csv,
/// metrics.json and manifest.json (plus runtime.json with bench and
/// spectra/ with dump_spectra) into output_dir. Progress goes to `log`.
ExperimentResult run_experiment(const ExperimentConfig& cfg, std::ostream* log = nullptr);

/// Same pipeline without touching the filesystem.
ExperimentResult evaluate(const ExperimentConfig& cfg, const Dataset& data);

struct SuiteConfig {
  ExperimentConfig base;
  std::vector<ThetaAlgo> thetas{ThetaAlgo::Bartlett, ThetaAlgo::Mvdr, ThetaAlgo::MinNorm};
  std::vector<RhoAlgo> rhos{RhoAlgo::Lr, RhoAlgo::Isq, RhoAlgo::Music};
  std::vector<ChannelModel> models{ChannelModel::Los, ChannelModel::Qlos, ChannelModel::Qnlos};
  /// Subcarrier count for ISQ/LR cells; unset means base.channel.n_sub.
  std::optional<std::size_t> magnitude_n_sub = 1;
};

struct SuiteCell {
  ThetaAlgo theta = ThetaAlgo::Music;
  RhoAlgo rho = RhoAlgo::Music;
  ChannelModel model = ChannelModel::Los;
  std::size_t n_sub = 0;
  std::optional<double> tw;  // at k_max
  std::optional<double> ct;
  std::string error;
};

struct SuiteResult {
  std::size_t k = 0;
  std::vector<SuiteCell> cells;
  std::vector<TimingRecord> timings;

  bool complete() const;
  const SuiteCell& cell(ThetaAlgo t, RhoAlgo r, ChannelModel m) const;
};

/// Cross product of thetas x rhos x models. A failing cell is recorded with
/// its error and the suite moves on.
SuiteResult run_suite(const SuiteConfig& cfg, std::ostream* log = nullptr);

SuiteConfig suite_from_json(const std::string& text);

void write_suite_json(const SuiteResult& result, std::ostream& out);

/// Rows: measure x channel model. Columns: estimator pairs.
void write_suite_table(const SuiteResult& result, std::ostream& out);

}  // namespace chartkit
