#include "qenr/channel.hpp"

#include <cmath>

namespace qenr {

namespace {

// CODATA 2018 exact SI values.
constexpr double kPlanck = 6.62607015e-34;
constexpr double kBoltzmann = 1.380649e-23;

constexpr double kAmplifierRefFreqHz = 5e9;

Matrix4 mode_diag(double signal, double idler) {
  Matrix4 d = Matrix4::Zero();
  d(kIs, kIs) = d(kQs, kQs) = signal;
  d(kIi, kIi) = d(kQi, kQi) = idler;
  return d;
}

}  // namespace

void ChainParams::validate() const {
  if (!std::isfinite(gain) || gain < 1.0) {
    throw std::invalid_argument("ChainParams: gain must be >= 1");
  }
  if (!std::isfinite(noise_temp_K) || noise_temp_K < 0.0) {
    throw std::invalid_argument("ChainParams: noise_temp_K must be >= 0");
  }
  if (!std::isfinite(env_temp_K) || env_temp_K < 0.0) {
    throw std::invalid_argument("ChainParams: env_temp_K must be >= 0");
  }
  if (!(f_signal_Hz > 0.0) || !(f_idler_Hz > 0.0)) {
    throw std::invalid_argument("ChainParams: mode frequencies must be > 0");
  }
  if (!(eta_signal > 0.0) || eta_signal > 1.0 || !(eta_idler > 0.0) ||
      eta_idler > 1.0) {
    throw std::invalid_argument(
        "ChainParams: transmissivities must lie in (0, 1]");
  }
}

double ChainParams::n_sys_signal() const {
  return noise_photons(noise_temp_K, f_signal_Hz);
}

double ChainParams::n_sys_idler() const {
  return noise_photons(noise_temp_K, f_idler_Hz);
}

ChainParams ChainParams::identity() { return ChainParams{}; }

double noise_photons(double temp_K, double freq_Hz) {
  if (!std::isfinite(freq_Hz) || freq_Hz <= 0.0) {
    throw std::invalid_argument("noise_photons: frequency must be > 0");
  }
  if (!std::isfinite(temp_K) || temp_K < 0.0) {
    throw std::invalid_argument("noise_photons: temperature must be >= 0");
  }
  if (temp_K == 0.0) return 0.0;
  return 1.0 / std::expm1(kPlanck * freq_Hz / (kBoltzmann * temp_K));
}

double temperature_for_occupancy(double photons, double freq_Hz) {
  if (!std::isfinite(freq_Hz) || freq_Hz <= 0.0) {
    throw std::invalid_argument(
        "temperature_for_occupancy: frequency must be > 0");
  }
  if (!std::isfinite(photons) || photons < 0.0) {
    throw std::invalid_argument(
        "temperature_for_occupancy: occupancy must be >= 0");
  }
  if (photons == 0.0) return 0.0;
  return kPlanck * freq_Hz / (kBoltzmann * std::log1p(1.0 / photons));
}

namespace {

GaussianState lossy_channel(const GaussianState& state, double eta_s,
                            double eta_i, double n_env_s, double n_env_i) {
  if (!(eta_s > 0.0) || eta_s > 1.0 || !(eta_i > 0.0) || eta_i > 1.0) {
    throw std::invalid_argument("apply_loss: eta must lie in (0, 1]");
  }
  if (!std::isfinite(n_env_s) || n_env_s < 0.0 || !std::isfinite(n_env_i) ||
      n_env_i < 0.0) {
    throw std::invalid_argument("apply_loss: n_env must be >= 0");
  }
  const Matrix4 scale = mode_diag(std::sqrt(eta_s), std::sqrt(eta_i));
  Matrix4 cov = scale * state.cov * scale;
  cov += mode_diag((1.0 - eta_s) * (2.0 * n_env_s + 1.0),
                   (1.0 - eta_i) * (2.0 * n_env_i + 1.0));
  GaussianState out;
  out.mean = scale * state.mean;
  out.cov = cov;
  return out;
}

}  // namespace

GaussianState apply_loss(const GaussianState& state, double eta,
                         double n_env) {
  return lossy_channel(state, eta, eta, n_env, n_env);
}

GaussianState apply_loss(const GaussianState& state, double eta_s,
                         double eta_i, double n_env) {
  return lossy_channel(state, eta_s, eta_i, n_env, n_env);
}

namespace {

Matrix4 amplify(const Matrix4& cov, double gain, double n_add_s,
                double n_add_i) {
  return gain * (cov + mode_diag(2.0 * n_add_s, 2.0 * n_add_i));
}

void check_amplifier(double gain, double n_add_s, double n_add_i) {
  if (!std::isfinite(gain) || gain < 1.0) {
    throw std::invalid_argument("apply_amplifier: gain must be >= 1");
  }
  const double quantum_min = (1.0 - 1.0 / gain) / 2.0;
  if (n_add_s < quantum_min - kPhysicalityTol ||
      n_add_i < quantum_min - kPhysicalityTol) {
    throw std::invalid_argument(
        "apply_amplifier: added noise below the quantum limit (1 - 1/G)/2");
  }
}

}  // namespace

DetectedState apply_amplifier(const GaussianState& state, double gain,
                              double n_add) {
  if (!std::isfinite(n_add) || n_add < 0.0) {
    throw std::invalid_argument("apply_amplifier: n_add must be >= 0");
  }
  check_amplifier(gain, n_add, n_add);
  DetectedState out;
  out.cov_raw = amplify(state.cov, gain, n_add, n_add);
  out.chain.gain = gain;
  out.chain.noise_temp_K = temperature_for_occupancy(n_add, kAmplifierRefFreqHz);
  out.chain.f_signal_Hz = kAmplifierRefFreqHz;
  out.chain.f_idler_Hz = kAmplifierRefFreqHz;
  return out;
}

DetectedState measurement_chain(const GaussianState& state,
                                const ChainParams& chain) {
  chain.validate();
  const GaussianState lossy = lossy_channel(
      state, chain.eta_signal, chain.eta_idler,
      noise_photons(chain.env_temp_K, chain.f_signal_Hz),
      noise_photons(chain.env_temp_K, chain.f_idler_Hz));
  const double n_s = chain.n_sys_signal();
  const double n_i = chain.n_sys_idler();
  check_amplifier(chain.gain, n_s, n_i);
  DetectedState out;
  out.cov_raw = amplify(lossy.cov, chain.gain, n_s, n_i);
  out.chain = chain;
  return out;
}

Matrix4 calibrate_matrix(const Matrix4& cov_raw, const ChainParams& chain) {
  return cov_raw / chain.gain -
         mode_diag(2.0 * chain.n_sys_signal(), 2.0 * chain.n_sys_idler());
}

GaussianState calibrate(const DetectedState& detected) {
  const Matrix4 cal = calibrate_matrix(detected.cov_raw, detected.chain);
  if (!is_physical(cal)) {
    throw std::domain_error(
        "calibrate: calibrated covariance is unphysical; chain description "
        "is inconsistent with the data");
  }
  GaussianState out;
  out.cov = cal;
  return out;
}

Matrix4 detected_noise_floor(const ChainParams& chain) {
  return measurement_chain(GaussianState::vacuum(), chain).cov_raw;
}

}  // namespace qenr
