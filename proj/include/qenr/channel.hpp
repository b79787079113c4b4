#pragma once

#include "qenr/gaussian.hpp"

// The measurement chain between source and digitizer: beamsplitter loss
// against a thermal environment, phase-insensitive amplification with
// input-referred system noise, and the inverse calibration back to photon
// units. The default scene folds loss and amplifier noise into the single
// system-noise-temperature figure of merit (eta = 1).

namespace qenr {

struct ChainParams {
  double gain = 1.0;          // linear power gain, >= 1
  double noise_temp_K = 0.0;  // system noise temperature T_N
  double f_signal_Hz = 4.5e9;
  double f_idler_Hz = 6.5e9;
  double eta_signal = 1.0;  // pre-amplifier transmissivity, (0, 1]
  double eta_idler = 1.0;
  double env_temp_K = 0.0;  // temperature of the environment seen through loss

  void validate() const;

  // Input-referred amplifier noise per mode, Planck occupancy of T_N at the
  // mode frequency.
  double n_sys_signal() const;
  double n_sys_idler() const;

  static ChainParams identity();
};

// Planck thermal occupancy 1/(exp(hf/kT) - 1); zero at T = 0.
double noise_photons(double temp_K, double freq_Hz);

// Inverse of noise_photons at fixed frequency: the temperature whose Planck
// occupancy equals n.
double temperature_for_occupancy(double photons, double freq_Hz);

// Beamsplitter loss applied to both modes with equal transmissivity:
// per-mode blocks eta*V + (1-eta)(2n_env+1)*I, cross block scaled by eta.
GaussianState apply_loss(const GaussianState& state, double eta, double n_env);

// Per-mode transmissivities; cross block scales by sqrt(eta_s*eta_i).
GaussianState apply_loss(const GaussianState& state, double eta_s,
                         double eta_i, double n_env);

// A covariance in raw detector units together with the chain that produced
// it (the calibration record).
struct DetectedState {
  Matrix4 cov_raw = Matrix4::Identity();
  ChainParams chain;
};

// Phase-insensitive amplifier on both modes: V -> G*V + 2*G*n_add*I with
// n_add referred to the input. Rejects n_add below the quantum minimum
// (1 - 1/G)/2. The returned chain encodes n_add as a noise temperature at
// 5 GHz on both modes.
DetectedState apply_amplifier(const GaussianState& state, double gain,
                              double n_add);

// Loss per mode (environment at env_temp_K), then amplification with
// per-mode input-referred noise n_sys = noise_photons(T_N, f_mode):
// V_raw = G*(V_lossy + 2*diag(n_s, n_s, n_i, n_i)).
DetectedState measurement_chain(const GaussianState& state,
                                const ChainParams& chain);

// Inverts the amplifier stage exactly: V_cal = V_raw/G - 2*n_sys*I per
// mode. Loss is part of the scene and is not inverted. Throws
// std::domain_error if the result is unphysical beyond tolerance
// (inconsistent chain description).
GaussianState calibrate(const DetectedState& detected);

// Same affine inverse without the physicality gate, for sample-covariance
// matrices whose statistical noise may dip below the vacuum bound.
Matrix4 calibrate_matrix(const Matrix4& cov_raw, const ChainParams& chain);

// Detector-unit covariance of the no-source scene (vacuum in, same chain);
// its diagonal is the detected noise floor used to form P_d.
Matrix4 detected_noise_floor(const ChainParams& chain);

}  // namespace qenr
