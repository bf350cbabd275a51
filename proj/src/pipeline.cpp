#include "chartkit/pipeline.hpp"

#include <algorithm>
#include <cctype>

#include "chartkit/parallel.hpp"

namespace chartkit {

namespace {

std::string lower(const std::string& s) {
  std::string out;
  for (char c : s) out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  return out;
}

}  // namespace

std::string to_string(ThetaAlgo a) {
  switch (a) {
    case ThetaAlgo::Music:
      return "music";
    case ThetaAlgo::Bartlett:
      return "bartlett";
    case ThetaAlgo::Mvdr:
      return "mvdr";
    case ThetaAlgo::MinNorm:
      return "minnorm";
  }
  return "?";
}

std::string to_string(RhoAlgo a) {
  switch (a) {
    case RhoAlgo::Isq:
      return "isq";
    case RhoAlgo::Lr:
      return "lr";
    case RhoAlgo::Music:
      return "music";
    case RhoAlgo::Bartlett:
      return "bartlett";
  }
  return "?";
}

ThetaAlgo parse_theta_algo(const std::string& s) {
  const std::string u = lower(s);
  if (u == "music") return ThetaAlgo::Music;
  if (u == "bartlett") return ThetaAlgo::Bartlett;
  if (u == "mvdr" || u == "capon") return ThetaAlgo::Mvdr;
  if (u == "minnorm" || u == "min-norm") return ThetaAlgo::MinNorm;
  throw ConfigError("unknown theta estimator '" + s + "' (expected music, bartlett, mvdr or minnorm)");
}

RhoAlgo parse_rho_algo(const std::string& s) {
  const std::string u = lower(s);
  if (u == "isq") return RhoAlgo::Isq;
  if (u == "lr") return RhoAlgo::Lr;
  if (u == "music") return RhoAlgo::Music;
  if (u == "bartlett") return RhoAlgo::Bartlett;
  throw ConfigError("unknown rho estimator '" + s + "' (expected isq, lr, music or bartlett)");
}

Dataset generate_dataset(const SceneConfig& scene_cfg, const ChannelParams& channel,
                         unsigned threads) {
  channel.validate();
  Dataset data{generate_scene(scene_cfg), channel, {}};
  data.csi.resize(data.scene.size());
  parallel_for(data.scene.size(), threads,
               [&](std::size_t i) { data.csi[i] = generate_csi(data.scene, i, channel); });
  return data;
}

Estimator::Estimator(EstimatorConfig cfg, const ChannelParams& channel)
    : cfg_(std::move(cfg)), steering_(steering_table(cfg_.angle_grid, channel.n_rx)) {
  channel.validate();
  if (!(cfg_.loading_factor >= 0.0)) throw ConfigError("estimator: loading factor must be >= 0");
  if (is_metric(cfg_.rho)) {
    if (channel.n_sub < 2) {
      throw ApertureError(to_string(cfg_.rho) + " range estimation needs n_sub >= 2 (got " +
                          std::to_string(channel.n_sub) + ")");
    }
    check_unambiguous(cfg_.range_grid, channel.subcarrier_spacing());
    subcarrier_ = subcarrier_table(cfg_.range_grid, channel.n_sub, channel.subcarrier_spacing());
  }
}

void Estimator::fit(const Dataset& data) {
  if (cfg_.rho != RhoAlgo::Lr) return;
  if (cfg_.lr_training > data.csi.size()) {
    throw ConfigError("lr: training size " + std::to_string(cfg_.lr_training) +
                      " exceeds the number of UEs " + std::to_string(data.csi.size()));
  }
  std::vector<RegressionPoint> pts;
  pts.reserve(cfg_.lr_training);
  for (std::size_t i = 0; i < cfg_.lr_training; ++i) {
    pts.push_back({lr_feature(data.csi[i].amplitudes()), true_polar(data.scene, i).rho});
  }
  lr_ = lr_fit(pts);
}

double Estimator::estimate_theta(const CsiMatrix& csi, Spectrum* keep) const {
  const CovarianceMatrix r = csi_covariance(csi.entries, SnapshotAxis::Antennas);
  Spectrum s;
  switch (cfg_.theta) {
    case ThetaAlgo::Music:
      s = music_spectrum(split_subspaces(hermitian_eig(r), cfg_.policy).noise_basis, steering_);
      break;
    case ThetaAlgo::Bartlett:
      s = bartlett_spectrum(r.entries, steering_);
      break;
    case ThetaAlgo::Mvdr:
      s = mvdr_spectrum(r.entries, steering_, default_loading(r, cfg_.loading_factor));
      break;
    case ThetaAlgo::MinNorm:
      s = minnorm_spectrum(split_subspaces(hermitian_eig(r), cfg_.policy).noise_basis, steering_);
      break;
  }
  const double theta = s.peak();
  if (keep != nullptr) *keep = std::move(s);
  return theta;
}

double Estimator::estimate_rho(const CsiMatrix& csi, Spectrum* keep) const {
  switch (cfg_.rho) {
    case RhoAlgo::Isq:
      return isq_rho(csi.amplitudes());
    case RhoAlgo::Lr:
      if (!lr_) throw FitError("lr: model used before fit()");
      return lr_rho(*lr_, csi.amplitudes());
    case RhoAlgo::Music:
    case RhoAlgo::Bartlett:
      break;
  }
  const CovarianceMatrix r = csi_covariance(csi.entries, SnapshotAxis::Subcarriers);
  Spectrum s = cfg_.rho == RhoAlgo::Music
                   ? music_spectrum(split_subspaces(hermitian_eig(r), cfg_.policy).noise_basis,
                                    *subcarrier_)
                   : bartlett_spectrum(r.entries, *subcarrier_);
  const double rho = s.peak();
  if (keep != nullptr) *keep = std::move(s);
  return rho;
}

UeEstimate Estimator::estimate(const CsiMatrix& csi, UeSpectra* keep) const {
  UeEstimate e;
  e.ue_id = csi.ue_id;
  if (keep == nullptr) {
    e.theta_deg = estimate_theta(csi);
    e.rho = estimate_rho(csi);
    return e;
  }
  e.theta_deg = estimate_theta(csi, &keep->theta);
  keep->rho.reset();
  if (is_metric(cfg_.rho)) {
    Spectrum s;
    e.rho = estimate_rho(csi, &s);
    keep->rho = std::move(s);
  } else {
    e.rho = estimate_rho(csi);
  }
  return e;
}

namespace {

std::vector<UeEstimate> run_all(const Estimator& est, const Dataset& data, unsigned threads,
                                std::vector<UeSpectra>* spectra) {
  const std::size_t n = data.csi.size();
  const bool known_rho = est.config().rho == RhoAlgo::Lr;
  const std::size_t n_known = known_rho ? std::min(est.config().lr_training, n) : 0;
  std::vector<UeEstimate> out(n);
  if (spectra != nullptr) spectra->assign(n, UeSpectra{});
  parallel_for(n, threads, [&](std::size_t i) {
    try {
      out[i] = est.estimate(data.csi[i], spectra != nullptr ? &(*spectra)[i] : nullptr);
    } catch (const Error& e) {
      throw UeEstimationError(i, e.what());
    }
    if (i < n_known) out[i].rho = true_polar(data.scene, i).rho;
  });
  return out;
}

}  // namespace

std::vector<UeEstimate> estimate_all(const Estimator& est, const Dataset& data, unsigned threads) {
  return run_all(est, data, threads, nullptr);
}

std::vector<UeEstimate> estimate_all(const Estimator& est, const Dataset& data, unsigned threads,
                                     std::vector<UeSpectra>& spectra) {
  return run_all(est, data, threads, &spectra);
}

}  // namespace chartkit
