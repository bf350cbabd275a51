#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "doctest.h"
#include "chartkit/channel.hpp"

using namespace chartkit;

namespace {

constexpr double kPi = std::numbers::pi;

double wrap(double a) { return std::remainder(a, 2.0 * kPi); }

Scene single_ue_scene(Position3 ue) {
  SceneConfig cfg;
  cfg.n_ue = 1;
  cfg.n_vip = 0;
  return Scene({500.0, 0.0, 8.5}, {ue}, {}, cfg);
}

}  // namespace

TEST_CASE("steering vector at broadside is all ones") {
  const CVector a = steering_vector(90.0, 4);
  REQUIRE(a.size() == 4);
  for (int k = 0; k < 4; ++k) CHECK(std::abs(a(k) - Complex(1.0, 0.0)) < 1e-15);
}

TEST_CASE("steering vector at endfire alternates sign") {
  const CVector a = steering_vector(0.0, 2);
  CHECK(std::abs(a(0) - Complex(1.0, 0.0)) < 1e-15);
  CHECK(std::abs(a(1) - Complex(-1.0, 0.0)) < 1e-15);
}

TEST_CASE("steering vector at 60 degrees steps by pi/2") {
  const CVector a = steering_vector(60.0, 32);
  for (int k = 0; k < 32; ++k) CHECK(std::abs(a(k)) == doctest::Approx(1.0).epsilon(1e-14));
  for (int k = 0; k + 1 < 32; ++k) {
    CHECK(std::abs(wrap(std::arg(a(k + 1)) - std::arg(a(k)) - kPi / 2.0)) < 1e-9);
  }
}

TEST_CASE("steering vectors at theta and 180 - theta are conjugate") {
  for (double t : {0.0, 17.0, 45.5, 90.0, 133.0}) {
    const CVector a = steering_vector(t, 16);
    const CVector b = steering_vector(180.0 - t, 16);
    CHECK((a - b.conjugate()).norm() < 1e-12);
  }
}

TEST_CASE("steering vector rejects angles outside [0, 180]") {
  CHECK_THROWS_AS(steering_vector(-0.1, 4), DomainError);
  CHECK_THROWS_AS(steering_vector(180.1, 4), DomainError);
  CHECK_THROWS_AS(steering_vector(std::nan(""), 4), DomainError);
}

TEST_CASE("subcarrier vector special ranges") {
  const double df = 9765.625;
  const CVector b0 = subcarrier_vector(0.0, 8, df);
  for (int k = 0; k < 8; ++k) CHECK(std::abs(b0(k) - Complex(1.0, 0.0)) < 1e-15);
  const CVector bw = subcarrier_vector(kSpeedOfLight / df, 8, df);
  for (int k = 0; k < 8; ++k) CHECK(std::abs(bw(k) - Complex(1.0, 0.0)) < 1e-9);
  CHECK_THROWS_AS(subcarrier_vector(-1.0, 8, df), DomainError);
}

TEST_CASE("subcarrier vector matches direct exponentials") {
  const double df = 312.5e3 / 32.0;
  const CVector b = subcarrier_vector(500.0, 32, df);
  for (int k = 0; k < 32; ++k) {
    const Complex expected = std::exp(Complex(0.0, -2.0 * kPi * 500.0 * k * df / kSpeedOfLight));
    CHECK(std::abs(b(k) - expected) < 1e-12);
    CHECK(std::abs(b(k)) == doctest::Approx(1.0).epsilon(1e-14));
  }
}

TEST_CASE("single-entry LOS response") {
  ChannelParams p;
  p.n_rx = 1;
  p.n_sub = 1;
  const CMatrix h = los_response({90.0, 10.0}, p, 0.0, 1.0);
  const Complex expected = 0.01 * std::exp(Complex(0.0, -2.0 * kPi * 10.0 / p.wavelength()));
  CHECK(std::abs(h(0, 0) - expected) < 1e-15);
  CHECK(p.wavelength() == doctest::Approx(0.1499).epsilon(1e-3));
}

TEST_CASE("noiseless LOS CSI is rank one with the expected singular value") {
  ChannelParams p;
  const Scene s = single_ue_scene({730.0, 210.0, 0.0});
  const CMatrix h0 = noiseless_csi(s, 0, p);
  const Eigen::JacobiSVD<CMatrix> svd(h0);
  const auto sv = svd.singularValues();
  const double rho = true_polar(s, 0).rho;
  const double expected = std::sqrt(32.0) * std::sqrt(32.0) * std::pow(rho, -2.0);
  CHECK(sv(0) == doctest::Approx(expected).epsilon(1e-12));
  CHECK(sv(1) / sv(0) < 1e-10);
}

TEST_CASE("fading gains have unit mean square") {
  for (ChannelModel m : {ChannelModel::Qlos, ChannelModel::Qnlos}) {
    Rng rng(123);
    double s = 0.0;
    const int n = 100000;
    for (int i = 0; i < n; ++i) {
      const double g = draw_fading_gain(m, 10.0, rng);
      s += g * g;
    }
    CHECK(s / n == doctest::Approx(1.0).epsilon(0.02));
  }
  Rng rng(1);
  CHECK(draw_fading_gain(ChannelModel::Los, 10.0, rng) == 1.0);
}

TEST_CASE("add_awgn without noise returns the normalized input") {
  ChannelParams p;
  const Scene s = single_ue_scene({300.0, 100.0, 0.0});
  const CMatrix h0 = noiseless_csi(s, 0, p);
  Rng rng(1);
  const CsiMatrix out = add_awgn(h0, std::numeric_limits<double>::infinity(), rng);
  CHECK((out.entries * out.scale - h0).norm() < 1e-12 * h0.norm());
  CHECK(out.entries.squaredNorm() / static_cast<double>(out.entries.size()) ==
        doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("add_awgn at 0 dB adds unit-power noise") {
  ChannelParams p;
  const Scene s = single_ue_scene({300.0, 100.0, 0.0});
  const CMatrix h0 = noiseless_csi(s, 0, p);
  const CMatrix clean = h0 / std::sqrt(h0.squaredNorm() / static_cast<double>(h0.size()));
  double power = 0.0;
  std::size_t count = 0;
  for (int t = 0; t < 100; ++t) {
    Rng rng(1000 + t);
    const CsiMatrix out = add_awgn(h0, 0.0, rng);
    power += (out.entries - clean).squaredNorm();
    count += static_cast<std::size_t>(out.entries.size());
  }
  CHECK(count >= 100000);
  CHECK(power / static_cast<double>(count) == doctest::Approx(1.0).epsilon(0.02));
}

TEST_CASE("add_awgn rejects an all-zero channel") {
  Rng rng(1);
  CHECK_THROWS_AS(add_awgn(CMatrix::Zero(4, 4), 0.0, rng), DegenerateInputError);
}

TEST_CASE("generate_csi is reproducible from seed and UE") {
  ChannelParams p;
  const Scene s = generate_scene(SceneConfig{});
  const CsiMatrix a = generate_csi(s, 17, p);
  const CsiMatrix b = generate_csi(s, 17, p);
  CHECK(a.entries == b.entries);
  CHECK(a.scale == b.scale);
  CHECK(a.ue_id == 17);
  const CsiMatrix c = generate_csi(s, 18, p);
  CHECK(a.entries != c.entries);
  p.rng_seed = 2;
  CHECK(generate_csi(s, 17, p).entries != a.entries);
}

TEST_CASE("flat fading only changes the scale of the normalized CSI") {
  ChannelParams p;
  const Scene s = generate_scene(SceneConfig{});
  const CsiMatrix los = generate_csi(s, 5, p);
  p.model = ChannelModel::Qnlos;
  const CsiMatrix qnlos = generate_csi(s, 5, p);
  CHECK(los.entries == qnlos.entries);
  CHECK(los.scale != qnlos.scale);

  // The amplitudes still follow g * H0 + scaled noise.
  Rng rng = Rng::for_ue(p.rng_seed, 5);
  rng.uniform();
  const double g = draw_fading_gain(ChannelModel::Qnlos, p.rician_k, rng);
  CHECK(qnlos.scale == doctest::Approx(g * los.scale).epsilon(1e-14));
  const CMatrix h0 = noiseless_csi(s, 5, p);
  CHECK(qnlos.scale == doctest::Approx(std::sqrt(h0.squaredNorm() / double(h0.size()))).epsilon(1e-12));
}

TEST_CASE("CSI binary dump round trip") {
  ChannelParams p;
  p.n_sub = 4;
  p.n_rx = 3;
  const Scene s = generate_scene(SceneConfig{});
  const CsiMatrix c = generate_csi(s, 2, p);
  std::stringstream buf;
  write_csi_binary(c, buf);
  CHECK(buf.str().size() == 16 + 4 * 3 * 16);
  CHECK(buf.str().substr(0, 4) == "CSIK");
  const CMatrix back = read_csi_binary(buf);
  CHECK(back == c.amplitudes());

  std::stringstream bad("XXXX");
  CHECK_THROWS_AS(read_csi_binary(bad), DomainError);
}

TEST_CASE("channel parameter validation") {
  ChannelParams p;
  p.n_rx = 0;
  CHECK_THROWS_AS(p.validate(), ConfigError);
  p = ChannelParams{};
  p.bandwidth = 0.0;
  CHECK_THROWS_AS(p.validate(), ConfigError);
  p = ChannelParams{};
  p.carrier_freq = -1.0;
  CHECK_THROWS_AS(p.validate(), ConfigError);
  CHECK(ChannelParams{}.subcarrier_spacing() == 9765.625);
  CHECK(parse_channel_model("qNLoS") == ChannelModel::Qnlos);
  CHECK_THROWS_AS(parse_channel_model("urban"), ConfigError);
}
