#pragma once

#include "qenr/receiver.hpp"

#include <span>
#include <vector>

// Quantum-enhancement analysis: the closed-form enhancement model, the
// one-parameter gain fit, and the power sweeps comparing the two sources
// through a common measurement chain.

namespace qenr {

// E_Q(P_d) = sqrt(1 + 2*P0/P_d). With P_d = 2*G*n and P0 = G this is
// sqrt(1 + 1/n), the ideal ratio of TMS cross covariance to the classical
// bound at matched power.
double enhancement_model(double detected_power, double p0);

struct EnhancementPoint {
  double detected_power = 0.0;  // P_d, raw units
  double enhancement = 0.0;     // measured E_Q
  double sigma = 0.0;           // standard error; 0 selects uniform weights
};

struct FitResult {
  double p0 = 0.0;        // fitted scale factor (linear units)
  double p0_db() const;   // same in dB
  double residual = 0.0;  // weighted rms residual
  int iterations = 0;
};

// Least-squares fit of enhancement_model to the points over P0 > 0 by
// golden-section search on log10(P0). Weights are 1/sigma^2 when every
// point carries a sigma, uniform otherwise. Requires >= 3 points spanning
// at least a factor of 10 in P_d.
FitResult fit_gain(std::span<const EnhancementPoint> points);

struct SweepConfig {
  std::vector<double> photon_grid;  // per-mode n, ascending, >= 0
  ChainParams chain;
  double rho = 0.99;           // classical sideband correlation
  std::int64_t samples = 0;    // per point; 0 selects the analytic limit
  std::uint64_t seed = 1;
  int threads = 1;
};

// One grid point of a sweep. Raw-unit quantities live in detector units;
// nu_min columns come from the noise-subtracted (calibrated) covariance.
struct SweepPoint {
  double photons = 0.0;
  double squeezing = 0.0;  // r = asinh(sqrt n)

  double pd_expected = 0.0;  // analytic detected power above the noise floor
  double pd_measured = 0.0;
  double pd_std_error = 0.0;

  double cov_quantum = 0.0;  // detection statistic per source, raw units
  double cov_classical = 0.0;
  double cov_quantum_se = 0.0;
  double cov_classical_se = 0.0;

  double nu_min_quantum = 0.0;
  double nu_min_classical = 0.0;
  double nu_min_quantum_expected = 0.0;
  double nu_min_classical_expected = 0.0;

  double enhancement = 0.0;  // cov_quantum / cov_classical
  double enhancement_se = 0.0;
  double enhancement_model_value = 0.0;
  // False when the classical covariance is not resolved from zero
  // (ratio undefined at this sample count).
  bool enhancement_usable = false;
};

struct SweepResult {
  SweepConfig config;
  std::vector<SweepPoint> points;
};

// Full sweep: for each n, both sources through the chain, covariance
// estimation at the configured sample count (or the analytic limit),
// detection statistics, calibrated PPT eigenvalues, and the enhancement
// ratio. The two sources at one grid point share one draw stream (paired
// comparison), which cancels most of the common chain-noise fluctuation
// in their difference and ratio.
SweepResult run_sweep(const SweepConfig& config);

// Views of run_sweep for the two standard studies.
SweepResult sweep_entanglement(const SweepConfig& config);
SweepResult sweep_covariance(const SweepConfig& config);

// Measured enhancement of one sweep point; throws std::domain_error when
// the classical covariance vanished (ratio undefined).
double measured_enhancement(const SweepPoint& point);

// Enhancement points of a sweep that are usable for fitting.
std::vector<EnhancementPoint> fit_points(const SweepResult& sweep);

}  // namespace qenr
