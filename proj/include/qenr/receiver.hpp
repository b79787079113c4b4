#pragma once

#include "qenr/channel.hpp"
#include "qenr/sources.hpp"

#include <cstdint>
#include <vector>

// Digitization of the detected state into I/Q sample records, covariance
// estimation, the radar detection statistic, and ROC characterization.

namespace qenr {

using SampleMatrix = Eigen::Matrix<double, Eigen::Dynamic, 4>;

// A block of N sampled quadrature 4-vectors in raw detector units, columns
// ordered per QuadIndex.
struct IQRecord {
  SampleMatrix samples;
  std::uint64_t seed = 0;
  ChainParams chain;
};

struct CovarianceEstimate {
  Matrix4 matrix = Matrix4::Zero();  // unbiased sample covariance (N-1)
  std::int64_t count = 0;
  Matrix4 std_error = Matrix4::Zero();
};

// N independent draws from the zero-mean Gaussian with the detected
// covariance, via Cholesky transform of Box-Muller unit normals.
// Deterministic given the seed.
IQRecord sample_iq(const DetectedState& detected, std::int64_t count,
                   std::uint64_t seed);

// Unbiased sample covariance with per-entry standard errors
// stderr[j][k] = sqrt((m[j][j]*m[k][k] + m[j][k]^2)/N). Throws
// std::domain_error on a degenerate (zero-variance) column.
CovarianceEstimate estimate_covariance(const IQRecord& record);

// Streaming equivalent of sample_iq followed by estimate_covariance,
// without materializing the record; produces bit-identical results for
// the same (detected, count, seed).
CovarianceEstimate estimate_covariance(const DetectedState& detected,
                                       std::int64_t count,
                                       std::uint64_t seed);

// Phase-matched cross-covariance combination, the detection signal:
// (m[I_s,I_i] - m[Q_s,Q_i]) / 2.
double detection_statistic(const CovarianceEstimate& estimate);
double detection_statistic_std_error(const CovarianceEstimate& estimate);

// Apparent source power above the noise floor on the signal mode, averaged
// over the two quadratures, in raw detector units.
double detected_power(const CovarianceEstimate& estimate,
                      const ChainParams& chain);
double detected_power_std_error(const CovarianceEstimate& estimate);

inline bool detect(double statistic, double threshold) {
  return statistic > threshold;
}

struct ROCPoint {
  double pfa = 0.0;
  double pd = 0.0;
  double threshold = 0.0;
};

// The no-target scene: the transmitted signal is replaced by vacuum (the
// idler stays at the receiver), so the detected cross-covariance vanishes
// while the idler power is unchanged.
DetectedState null_hypothesis(const SourceSpec& source,
                              const ChainParams& chain);

// Monte Carlo ROC: `trials` statistics per hypothesis at `count` samples
// per decision, thresholds swept over the pooled statistic range. Points
// are ordered by increasing pfa. Per-trial seeds follow the documented
// splitting rule, so the curve is reproducible and trials are independent.
std::vector<ROCPoint> roc_curve(const SourceSpec& source,
                                const ChainParams& chain, std::int64_t count,
                                int trials, std::uint64_t seed);

// Detection probability at the largest threshold whose false-alarm rate
// does not exceed `pfa`.
double pd_at_pfa(const std::vector<ROCPoint>& curve, double pfa);

// Record export, one row per sample: index,I_s,Q_s,I_i,Q_i (QuadIndex
// column order).
void write_iq_csv(const IQRecord& record, const std::string& path);

}  // namespace qenr
