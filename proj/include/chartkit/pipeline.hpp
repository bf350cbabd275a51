#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "chartkit/channel.hpp"
#include "chartkit/chart.hpp"
#include "chartkit/range.hpp"
#include "chartkit/scene.hpp"
#include "chartkit/spectrum.hpp"
#include "chartkit/subspace.hpp"

namespace chartkit {

enum class ThetaAlgo { Music, Bartlett, Mvdr, MinNorm };
enum class RhoAlgo { Isq, Lr, Music, Bartlett };

std::string to_string(ThetaAlgo a);
std::string to_string(RhoAlgo a);
ThetaAlgo parse_theta_algo(const std::string& s);
RhoAlgo parse_rho_algo(const std::string& s);

/// MUSIC and Bartlett range estimates are in meters; ISQ and LR are not
/// height-corrected when charted.
inline bool is_metric(RhoAlgo a) { return a == RhoAlgo::Music || a == RhoAlgo::Bartlett; }

struct EstimatorConfig {
  ThetaAlgo theta = ThetaAlgo::Music;
  RhoAlgo rho = RhoAlgo::Music;
  AngleGrid angle_grid;
  RangeGrid range_grid;
  SubspacePolicy policy = FixedK{1};
  double loading_factor = 1e-9;  // MVDR loading, relative to trace(R)/N
  std::size_t lr_training = 256;  // leading UEs with known range
};

struct Dataset {
  Scene scene;
  ChannelParams channel;
  std::vector<CsiMatrix> csi;
};

/// Scene plus one CSI matrix per UE. Per-UE substreams make the result
/// independent of `threads`.
Dataset generate_dataset(const SceneConfig& scene_cfg, const ChannelParams& channel,
                         unsigned threads = 1);

/// Raised by estimate_all when one UE fails; what() names the UE and the
/// estimator that failed.
class UeEstimationError : public Error {
 public:
  UeEstimationError(std::size_t ue, const std::string& detail)
      : Error("UE " + std::to_string(ue) + ": " + detail), ue_(ue) {}
  std::size_t ue() const { return ue_; }

 private:
  std::size_t ue_;
};

struct UeSpectra {
  Spectrum theta;
  std::optional<Spectrum> rho;  // only for MUSIC/Bartlett range
};

/// One (theta, rho) estimator pair with its search tables built once.
class Estimator {
 public:
  /// Throws ApertureError for subcarrier-domain range with n_sub < 2 and
  /// ConfigError for invalid grids.
  Estimator(EstimatorConfig cfg, const ChannelParams& channel);

  const EstimatorConfig& config() const { return cfg_; }

  /// Fits the LR model on the first lr_training UEs. No-op for other range
  /// estimators.
  void fit(const Dataset& data);
  const std::optional<LrModel>& lr_model() const { return lr_; }

  double estimate_theta(const CsiMatrix& csi, Spectrum* keep = nullptr) const;
  double estimate_rho(const CsiMatrix& csi, Spectrum* keep = nullptr) const;
  UeEstimate estimate(const CsiMatrix& csi, UeSpectra* keep = nullptr) const;

 private:
  EstimatorConfig cfg_;
  SearchTable steering_;
  std::optional<SearchTable> subcarrier_;
  std::optional<LrModel> lr_;
};

/// Estimates for every UE in scene order. With LR, the training UEs report
/// their known range.
std::vector<UeEstimate> estimate_all(const Estimator& est, const Dataset& data,
                                     unsigned threads = 1);

/// Same, also keeping each UE's spectra.
std::vector<UeEstimate> estimate_all(const Estimator& est, const Dataset& data, unsigned threads,
                                     std::vector<UeSpectra>& spectra);

}  // namespace chartkit
