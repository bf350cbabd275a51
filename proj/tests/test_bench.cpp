#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "json.hpp"
#include "chartkit/bench.hpp"

using namespace chartkit;

namespace {

Dataset dataset(std::size_t n, ChannelModel m = ChannelModel::Los, std::size_t n_sub = 32) {
  SceneConfig sc;
  sc.n_ue = n;
  sc.n_vip = n / 8;
  sc.rng_seed = 81;
  ChannelParams ch;
  ch.model = m;
  ch.n_sub = n_sub;
  ch.rng_seed = 82;
  return generate_dataset(sc, ch, 4);
}

EstimatorConfig small_cfg(ThetaAlgo t, RhoAlgo r) {
  EstimatorConfig c;
  c.theta = t;
  c.rho = r;
  c.lr_training = 8;
  return c;
}

}  // namespace

TEST_CASE("one repeat reports zero spread") {
  const Dataset d = dataset(16);
  const TimingRecord r = time_pipeline(small_cfg(ThetaAlgo::Bartlett, RhoAlgo::Isq), d, 1);
  CHECK(r.seconds_mean > 0.0);
  CHECK(r.seconds_std == 0.0);
  CHECK(r.repeats == 1);
  CHECK(r.n_ue == 16);
  CHECK(r.theta == ThetaAlgo::Bartlett);
  CHECK(r.rho == RhoAlgo::Isq);
  CHECK(r.model == ChannelModel::Los);
}

TEST_CASE("three repeats report a spread") {
  const Dataset d = dataset(16);
  const TimingRecord r = time_pipeline(small_cfg(ThetaAlgo::Music, RhoAlgo::Lr), d, 3);
  CHECK(r.repeats == 3);
  CHECK(r.seconds_mean > 0.0);
  CHECK(r.seconds_std >= 0.0);
}

TEST_CASE("bench argument checks") {
  const Dataset d = dataset(8);
  CHECK_THROWS_AS(time_pipeline(small_cfg(ThetaAlgo::Music, RhoAlgo::Isq), d, 0), ConfigError);
  Dataset empty = d;
  empty.csi.clear();
  CHECK_THROWS_AS(time_pipeline(small_cfg(ThetaAlgo::Music, RhoAlgo::Isq), empty, 1), ConfigError);
}

TEST_CASE("an estimator failure aborts the benchmark with the UE id") {
  Dataset d = dataset(8);
  d.csi[6].entries.setZero();
  CHECK_THROWS_WITH_AS(time_pipeline(small_cfg(ThetaAlgo::Bartlett, RhoAlgo::Isq), d, 1),
                       doctest::Contains("UE 6"), UeEstimationError);
}

TEST_CASE("full cross product in a fixed order") {
  const Dataset los = dataset(12, ChannelModel::Los);
  const Dataset qlos = dataset(12, ChannelModel::Qlos);
  const Dataset qnlos = dataset(12, ChannelModel::Qnlos);
  const Dataset* sets[] = {&los, &qlos, &qnlos};
  const ThetaAlgo thetas[] = {ThetaAlgo::Bartlett, ThetaAlgo::Mvdr, ThetaAlgo::MinNorm};
  const RhoAlgo rhos[] = {RhoAlgo::Lr, RhoAlgo::Isq, RhoAlgo::Music};
  const auto base = small_cfg(ThetaAlgo::Music, RhoAlgo::Music);
  const auto recs = benchmark_matrix(thetas, rhos, sets, base, 1);
  REQUIRE(recs.size() == 27);
  std::size_t i = 0;
  for (ChannelModel m : {ChannelModel::Los, ChannelModel::Qlos, ChannelModel::Qnlos}) {
    for (ThetaAlgo t : thetas) {
      for (RhoAlgo r : rhos) {
        CHECK(recs[i].model == m);
        CHECK(recs[i].theta == t);
        CHECK(recs[i].rho == r);
        ++i;
      }
    }
  }
  const auto again = benchmark_matrix(thetas, rhos, sets, base, 1);
  for (std::size_t k = 0; k < recs.size(); ++k) {
    CHECK(again[k].theta == recs[k].theta);
    CHECK(again[k].rho == recs[k].rho);
    CHECK(again[k].model == recs[k].model);
  }

  std::ostringstream js;
  write_timing_json(recs, js);
  const auto j = nlohmann::json::parse(js.str());
  REQUIRE(j.size() == 27);
  CHECK(j[0]["theta_algo"] == "bartlett");
  CHECK(j[0]["rho_algo"] == "lr");
  CHECK(j[0]["channel_model"] == "LOS");
  CHECK(j[26]["channel_model"] == "QNLOS");
  CHECK(j[5]["repeats"] == 1);
  CHECK(j[5].contains("seconds_mean"));
  CHECK(j[5].contains("seconds_std"));

  std::ostringstream table;
  write_timing_table(recs, table);
  const std::string t = table.str();
  CHECK(t.find("bartlett/lr") != std::string::npos);
  CHECK(t.find("minnorm/music") != std::string::npos);
  CHECK(t.find("QNLOS") != std::string::npos);
}

TEST_CASE("range estimators without aperture are skipped") {
  const Dataset narrow = dataset(8, ChannelModel::Los, 1);
  const Dataset* sets[] = {&narrow};
  const ThetaAlgo thetas[] = {ThetaAlgo::Bartlett};
  const RhoAlgo rhos[] = {RhoAlgo::Lr, RhoAlgo::Isq, RhoAlgo::Music, RhoAlgo::Bartlett};
  const auto recs = benchmark_matrix(thetas, rhos, sets, small_cfg(ThetaAlgo::Music, RhoAlgo::Isq), 1);
  REQUIRE(recs.size() == 2);
  CHECK(recs[0].rho == RhoAlgo::Lr);
  CHECK(recs[1].rho == RhoAlgo::Isq);
}

TEST_CASE("doubling the dataset at least 1.5x the time") {
  const Dataset a = dataset(200);
  const Dataset b = dataset(400);
  const auto cfg = small_cfg(ThetaAlgo::Music, RhoAlgo::Isq);
  const TimingRecord ta = time_pipeline(cfg, a, 3);
  const TimingRecord tb = time_pipeline(cfg, b, 3);
  MESSAGE("200 UEs: " << ta.seconds_mean << " s, 400 UEs: " << tb.seconds_mean << " s");
  CHECK(tb.seconds_mean >= 1.5 * ta.seconds_mean);
}
