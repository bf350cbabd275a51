#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

#include "chartkit/pipeline.hpp"

namespace chartkit {

struct TimingRecord {
  ThetaAlgo theta = ThetaAlgo::Music;
  RhoAlgo rho = RhoAlgo::Music;
  ChannelModel model = ChannelModel::Los;
  std::size_t n_ue = 0;
  double seconds_mean = 0.0;
  double seconds_std = 0.0;  // sample standard deviation; 0 for one repeat
  std::size_t repeats = 0;
};

/// Wall time of estimation alone (LR fit, covariance, spectra, peak search)
/// over the whole dataset on the calling thread. One untimed warm-up pass
/// precedes `repeats` timed passes.
TimingRecord time_pipeline(const EstimatorConfig& cfg, const Dataset& data, std::size_t repeats);

/// Every theta x rho pair on every dataset, ordered by dataset, then theta,
/// then rho. Range estimators that the dataset cannot support are skipped.
std::vector<TimingRecord> benchmark_matrix(std::span<const ThetaAlgo> thetas,
                                           std::span<const RhoAlgo> rhos,
                                           std::span<const Dataset* const> datasets,
                                           const EstimatorConfig& base, std::size_t repeats);

void write_timing_json(std::span<const TimingRecord> records, std::ostream& out);

/// One block per theta estimator: a column per range estimator, a row per
/// channel model.
void write_timing_table(std::span<const TimingRecord> records, std::ostream& out);

}  // namespace chartkit
