#include "chartkit/channel.hpp"

#include <array>
#include <bit>
#include <cctype>
#include <cmath>
#include <cstring>
#include <istream>
#include <limits>
#include <numbers>
#include <ostream>

namespace chartkit {

namespace {

constexpr double kPi = std::numbers::pi;

void put_u32(std::ostream& out, std::uint32_t v) {
  const std::array<char, 4> b{static_cast<char>(v & 0xFF), static_cast<char>((v >> 8) & 0xFF),
                              static_cast<char>((v >> 16) & 0xFF),
                              static_cast<char>((v >> 24) & 0xFF)};
  out.write(b.data(), 4);
}

std::uint32_t get_u32(std::istream& in) {
  std::array<unsigned char, 4> b{};
  in.read(reinterpret_cast<char*>(b.data()), 4);
  return static_cast<std::uint32_t>(b[0]) | (static_cast<std::uint32_t>(b[1]) << 8) |
         (static_cast<std::uint32_t>(b[2]) << 16) | (static_cast<std::uint32_t>(b[3]) << 24);
}

void put_f64(std::ostream& out, double v) {
  const auto bits = std::bit_cast<std::uint64_t>(v);
  std::array<char, 8> b{};
  for (int i = 0; i < 8; ++i) {
    b[static_cast<std::size_t>(i)] = static_cast<char>((bits >> (8 * i)) & 0xFF);
  }
  out.write(b.data(), 8);
}

double get_f64(std::istream& in) {
  std::array<unsigned char, 8> b{};
  in.read(reinterpret_cast<char*>(b.data()), 8);
  std::uint64_t bits = 0;
  for (int i = 7; i >= 0; --i) {
    bits = (bits << 8) | b[static_cast<std::size_t>(i)];
  }
  return std::bit_cast<double>(bits);
}

}  // namespace

std::string to_string(ChannelModel m) {
  switch (m) {
    case ChannelModel::Los:
      return "LOS";
    case ChannelModel::Qlos:
      return "QLOS";
    case ChannelModel::Qnlos:
      return "QNLOS";
  }
  return "?";
}

ChannelModel parse_channel_model(const std::string& s) {
  std::string u;
  for (char c : s) {
    u.push_back(static_cast<char>(std::toupper(static_cast<unsigned char>(c))));
  }
  if (u == "LOS") return ChannelModel::Los;
  if (u == "QLOS") return ChannelModel::Qlos;
  if (u == "QNLOS") return ChannelModel::Qnlos;
  throw ConfigError("unknown channel model '" + s + "' (expected los, qlos or qnlos)");
}

void ChannelParams::validate() const {
  if (n_rx < 1) throw ConfigError("channel: n_rx must be >= 1");
  if (n_sub < 1) throw ConfigError("channel: n_sub must be >= 1");
  if (!(carrier_freq > 0.0) || !std::isfinite(carrier_freq)) {
    throw ConfigError("channel: carrier_freq must be positive");
  }
  if (!(bandwidth > 0.0) || !std::isfinite(bandwidth)) {
    throw ConfigError("channel: bandwidth must be positive");
  }
  if (!std::isfinite(path_loss_exp)) throw ConfigError("channel: path_loss_exp must be finite");
  if (!(rician_k >= 0.0) || !std::isfinite(rician_k)) {
    throw ConfigError("channel: rician_k must be finite and non-negative");
  }
  if (std::isnan(snr_db) || snr_db == -std::numeric_limits<double>::infinity()) {
    throw ConfigError("channel: snr_db must be a number or +inf");
  }
}

CVector steering_vector(double theta_deg, std::size_t n_rx) {
  if (!(theta_deg >= 0.0 && theta_deg <= 180.0)) {
    throw DomainError("steering_vector: theta outside [0, 180] degrees");
  }
  if (n_rx < 1) throw DomainError("steering_vector: n_rx must be >= 1");
  const double step = kPi * std::cos(theta_deg * kPi / 180.0);
  CVector a(static_cast<Eigen::Index>(n_rx));
  for (std::size_t k = 0; k < n_rx; ++k) {
    a(static_cast<Eigen::Index>(k)) = std::polar(1.0, step * static_cast<double>(k));
  }
  return a;
}

CVector subcarrier_vector(double rho, std::size_t n_sub, double delta_f) {
  if (!(rho >= 0.0) || !std::isfinite(rho)) {
    throw DomainError("subcarrier_vector: rho must be finite and non-negative");
  }
  if (n_sub < 1) throw DomainError("subcarrier_vector: n_sub must be >= 1");
  const double step = -2.0 * kPi * rho * delta_f / kSpeedOfLight;
  CVector b(static_cast<Eigen::Index>(n_sub));
  for (std::size_t k = 0; k < n_sub; ++k) {
    b(static_cast<Eigen::Index>(k)) = std::polar(1.0, step * static_cast<double>(k));
  }
  return b;
}

double draw_fading_gain(ChannelModel model, double rician_k, Rng& rng) {
  const Complex z = rng.complex_normal(1.0);
  switch (model) {
    case ChannelModel::Los:
      return 1.0;
    case ChannelModel::Qlos: {
      // Unit mean-square Rician amplitude: |sqrt(K/(K+1)) + sqrt(1/(K+1)) z|.
      const double los = std::sqrt(rician_k / (rician_k + 1.0));
      const double scatter = std::sqrt(1.0 / (rician_k + 1.0));
      return std::abs(Complex(los, 0.0) + scatter * z);
    }
    case ChannelModel::Qnlos:
      return std::abs(z);
  }
  return 1.0;
}

CMatrix los_response(const Polar& polar, const ChannelParams& params, double phase, double gain) {
  const double rho = polar.rho;
  const double amplitude = gain * std::pow(rho, -params.path_loss_exp);
  const Complex common =
      amplitude * std::polar(1.0, -(2.0 * kPi * rho / params.wavelength() + phase));
  const CVector a = steering_vector(polar.theta_deg, params.n_rx);
  const CVector b = subcarrier_vector(rho, params.n_sub, params.subcarrier_spacing());
  return common * (b * a.transpose());
}

namespace {

struct UeDraw {
  double phase = 0.0;
  double gain = 1.0;
};

// Draw order on a UE substream: phase, fading gain, then noise (row-major).
UeDraw draw_ue(const ChannelParams& params, Rng& rng) {
  UeDraw d;
  d.phase = rng.uniform(0.0, 2.0 * kPi);
  d.gain = draw_fading_gain(params.model, params.rician_k, rng);
  return d;
}

}  // namespace

CMatrix noiseless_csi(const Scene& scene, std::size_t ue, const ChannelParams& params) {
  params.validate();
  Rng rng = Rng::for_ue(params.rng_seed, ue);
  const UeDraw d = draw_ue(params, rng);
  return los_response(true_polar(scene, ue), params, d.phase, d.gain);
}

CsiMatrix add_awgn(const CMatrix& h0, double snr_db, Rng& rng, std::size_t ue_id) {
  if (h0.size() == 0 || !h0.allFinite()) {
    throw DegenerateInputError("add_awgn: input must be non-empty and finite");
  }
  const double mean_power = h0.squaredNorm() / static_cast<double>(h0.size());
  if (!(mean_power > 0.0)) {
    throw DegenerateInputError("add_awgn: all-zero channel cannot be normalized");
  }
  const double scale = std::sqrt(mean_power);
  CsiMatrix out{h0 / scale, ue_id, scale};
  if (std::isinf(snr_db) && snr_db > 0.0) {
    return out;
  }
  const double noise_power = std::pow(10.0, -snr_db / 10.0);
  for (Eigen::Index r = 0; r < out.entries.rows(); ++r) {
    for (Eigen::Index c = 0; c < out.entries.cols(); ++c) {
      out.entries(r, c) += rng.complex_normal(noise_power);
    }
  }
  return out;
}

CsiMatrix generate_csi(const Scene& scene, std::size_t ue, const ChannelParams& params) {
  params.validate();
  Rng rng = Rng::for_ue(params.rng_seed, ue);
  const UeDraw d = draw_ue(params, rng);
  // Normalizing g * H and H give the same matrix; leaving g out keeps the
  // normalized entries bit-identical across channel models.
  CsiMatrix csi = add_awgn(los_response(true_polar(scene, ue), params, d.phase, 1.0), params.snr_db, rng, ue);
  csi.scale *= d.gain;
  return csi;
}

void write_csi_binary(const CsiMatrix& csi, std::ostream& out) {
  out.write("CSIK", 4);
  put_u32(out, static_cast<std::uint32_t>(csi.n_sub()));
  put_u32(out, static_cast<std::uint32_t>(csi.n_rx()));
  put_u32(out, 0);
  const CMatrix h = csi.amplitudes();
  for (Eigen::Index r = 0; r < h.rows(); ++r) {
    for (Eigen::Index c = 0; c < h.cols(); ++c) {
      put_f64(out, h(r, c).real());
      put_f64(out, h(r, c).imag());
    }
  }
}

CMatrix read_csi_binary(std::istream& in) {
  std::array<char, 4> magic{};
  in.read(magic.data(), 4);
  if (!in || std::memcmp(magic.data(), "CSIK", 4) != 0) {
    throw DomainError("read_csi_binary: bad magic");
  }
  const std::uint32_t n_sub = get_u32(in);
  const std::uint32_t n_rx = get_u32(in);
  (void)get_u32(in);
  CMatrix h(n_sub, n_rx);
  for (std::uint32_t r = 0; r < n_sub; ++r) {
    for (std::uint32_t c = 0; c < n_rx; ++c) {
      const double re = get_f64(in);
      const double im = get_f64(in);
      h(r, c) = {re, im};
    }
  }
  if (!in) throw DomainError("read_csi_binary: truncated payload");
  return h;
}

}  // namespace chartkit
