#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>

#include "chartkit/common.hpp"
#include "chartkit/rng.hpp"
#include "chartkit/scene.hpp"

namespace chartkit {

enum class ChannelModel { Los, Qlos, Qnlos };

std::string to_string(ChannelModel m);
ChannelModel parse_channel_model(const std::string& s);

struct ChannelParams {
  double carrier_freq = 2.0e9;  // Hz
  std::size_t n_rx = 32;
  std::size_t n_sub = 32;
  double bandwidth = 312.5e3;  // Hz, shared by all subcarriers
  double path_loss_exp = 2.0;
  ChannelModel model = ChannelModel::Los;
  double snr_db = 0.0;  // +inf disables noise
  double rician_k = 10.0;
  std::uint64_t rng_seed = 1;

  double wavelength() const { return kSpeedOfLight / carrier_freq; }
  /// Subcarrier spacing: the bandwidth split evenly over n_sub subcarriers.
  double subcarrier_spacing() const { return bandwidth / static_cast<double>(n_sub); }

  void validate() const;
};

/// ULA steering vector with half-wavelength spacing: element k is
/// exp(j*pi*k*cos(theta)).
CVector steering_vector(double theta_deg, std::size_t n_rx);

/// Subcarrier phase vector: element k is exp(-j*2*pi*rho*k*delta_f / c).
CVector subcarrier_vector(double rho, std::size_t n_sub, double delta_f);

/// Per-UE CSI, n_sub rows (subcarriers) by n_rx columns (antennas).
///
/// `entries` holds the normalized, noisy matrix seen by the spectral
/// estimators. `scale` is the RMS amplitude of the noiseless matrix before
/// normalization; multiplying by it restores absolute amplitudes for the
/// magnitude-based range estimators.
struct CsiMatrix {
  CMatrix entries;
  std::size_t ue_id = 0;
  double scale = 1.0;

  std::size_t n_sub() const { return static_cast<std::size_t>(entries.rows()); }
  std::size_t n_rx() const { return static_cast<std::size_t>(entries.cols()); }
  CMatrix amplitudes() const { return entries * scale; }
};

/// Amplitude factor of one ray. Always consumes one complex Gaussian from
/// `rng` so that the noise draws that follow line up across channel models.
double draw_fading_gain(ChannelModel model, double rician_k, Rng& rng);

/// Noiseless single-ray response
///   gain * rho^-r * exp(-j(2*pi*rho/lambda + phase)) * B(rho) A(theta)^T.
CMatrix los_response(const Polar& polar, const ChannelParams& params, double phase, double gain);

/// Noiseless CSI for one UE, with the per-UE random phase and fading gain
/// drawn from the UE's substream. Not normalized (scale = 1).
CMatrix noiseless_csi(const Scene& scene, std::size_t ue, const ChannelParams& params);

/// Normalizes h0 to unit mean per-entry power and adds circular Gaussian
/// noise of per-entry power 10^(-snr_db/10). The normalization factor is kept
/// in CsiMatrix::scale.
CsiMatrix add_awgn(const CMatrix& h0, double snr_db, Rng& rng, std::size_t ue_id = 0);

/// Full per-UE CSI: noiseless_csi followed by add_awgn on the same substream.
/// The fading gain is applied to `scale` after normalization.
CsiMatrix generate_csi(const Scene& scene, std::size_t ue, const ChannelParams& params);

/// Binary dump: "CSIK", u32 n_sub, u32 n_rx, u32 reserved, then row-major
/// little-endian f64 (re, im) pairs of the absolute-amplitude matrix.
void write_csi_binary(const CsiMatrix& csi, std::ostream& out);
CMatrix read_csi_binary(std::istream& in);

}  // namespace chartkit
