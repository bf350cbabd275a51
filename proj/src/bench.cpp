#include "chartkit/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ostream>

#include "json.hpp"

namespace chartkit {

namespace {

double run_once(const EstimatorConfig& cfg, const Dataset& data) {
  Estimator est(cfg, data.channel);
  const auto t0 = std::chrono::steady_clock::now();
  est.fit(data);
  const auto estimates = estimate_all(est, data, 1);
  const auto t1 = std::chrono::steady_clock::now();
  if (estimates.size() != data.csi.size()) throw Error("bench: incomplete estimate set");
  return std::chrono::duration<double>(t1 - t0).count();
}

}  // namespace

TimingRecord time_pipeline(const EstimatorConfig& cfg, const Dataset& data, std::size_t repeats) {
  if (repeats < 1) throw ConfigError("bench: repeats must be >= 1");
  if (data.csi.empty()) throw ConfigError("bench: empty dataset");

  (void)run_once(cfg, data);
  std::vector<double> samples;
  samples.reserve(repeats);
  for (std::size_t r = 0; r < repeats; ++r) samples.push_back(run_once(cfg, data));

  double mean = 0.0;
  for (double s : samples) mean += s;
  mean /= static_cast<double>(repeats);
  double var = 0.0;
  if (repeats > 1) {
    for (double s : samples) var += (s - mean) * (s - mean);
    var /= static_cast<double>(repeats - 1);
  }
  return {cfg.theta, cfg.rho, data.channel.model, data.csi.size(), mean, std::sqrt(var), repeats};
}

std::vector<TimingRecord> benchmark_matrix(std::span<const ThetaAlgo> thetas,
                                           std::span<const RhoAlgo> rhos,
                                           std::span<const Dataset* const> datasets,
                                           const EstimatorConfig& base, std::size_t repeats) {
  std::vector<TimingRecord> out;
  for (const Dataset* data : datasets) {
    for (ThetaAlgo t : thetas) {
      for (RhoAlgo r : rhos) {
        if (is_metric(r) && data->channel.n_sub < 2) continue;
        EstimatorConfig cfg = base;
        cfg.theta = t;
        cfg.rho = r;
        out.push_back(time_pipeline(cfg, *data, repeats));
      }
    }
  }
  return out;
}

void write_timing_json(std::span<const TimingRecord> records, std::ostream& out) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const auto& r : records) {
    nlohmann::ordered_json j;
    j["theta_algo"] = to_string(r.theta);
    j["rho_algo"] = to_string(r.rho);
    j["channel_model"] = to_string(r.model);
    j["n_ue"] = r.n_ue;
    j["seconds_mean"] = r.seconds_mean;
    j["seconds_std"] = r.seconds_std;
    j["repeats"] = r.repeats;
    arr.push_back(std::move(j));
  }
  out << arr.dump(2) << '\n';
}

void write_timing_table(std::span<const TimingRecord> records, std::ostream& out) {
  std::vector<ThetaAlgo> thetas;
  std::vector<RhoAlgo> rhos;
  std::vector<ChannelModel> models;
  auto add = [](auto& v, auto x) {
    if (std::find(v.begin(), v.end(), x) == v.end()) v.push_back(x);
  };
  for (const auto& r : records) {
    add(thetas, r.theta);
    add(rhos, r.rho);
    add(models, r.model);
  }

  char cell[64];
  for (ThetaAlgo t : thetas) {
    std::snprintf(cell, sizeof cell, "%-8s", "");
    out << cell;
    for (RhoAlgo r : rhos) {
      std::snprintf(cell, sizeof cell, " %18s", (to_string(t) + "/" + to_string(r)).c_str());
      out << cell;
    }
    out << '\n';
    for (ChannelModel m : models) {
      std::snprintf(cell, sizeof cell, "%-8s", to_string(m).c_str());
      out << cell;
      for (RhoAlgo r : rhos) {
        const TimingRecord* hit = nullptr;
        for (const auto& rec : records) {
          if (rec.theta == t && rec.rho == r && rec.model == m) hit = &rec;
        }
        if (hit != nullptr) {
          std::snprintf(cell, sizeof cell, " %18.4f", hit->seconds_mean);
        } else {
          std::snprintf(cell, sizeof cell, " %18s", "-");
        }
        out << cell;
      }
      out << '\n';
    }
    out << '\n';
  }
}

}  // namespace chartkit
