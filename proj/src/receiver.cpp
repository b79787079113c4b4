#include "qenr/receiver.hpp"

#include "qenr/rng.hpp"

#include <Eigen/Cholesky>

#include <algorithm>
#include <cmath>

namespace qenr {

namespace {

Eigen::Matrix4d cholesky_factor(const Matrix4& cov) {
  if (!is_symmetric(cov)) {
    throw std::invalid_argument("sample_iq: covariance is not symmetric");
  }
  Eigen::LLT<Matrix4> llt(cov);
  if (llt.info() != Eigen::Success) {
    throw std::invalid_argument(
        "sample_iq: covariance is not positive definite");
  }
  return llt.matrixL();
}

// Single-pass moment accumulator shared by the record and streaming paths
// so both produce bit-identical estimates.
struct MomentAccumulator {
  Vector4 sum = Vector4::Zero();
  Matrix4 sum_outer = Matrix4::Zero();
  std::int64_t count = 0;

  void add(const Vector4& x) {
    sum += x;
    sum_outer += x * x.transpose();
    ++count;
  }

  CovarianceEstimate finish() const {
    const double n = static_cast<double>(count);
    const Vector4 mean = sum / n;
    Matrix4 cov =
        (sum_outer - n * (mean * mean.transpose())) / (n - 1.0);
    cov = ((cov + cov.transpose()) / 2.0).eval();
    for (int j = 0; j < 4; ++j) {
      if (cov(j, j) <= 0.0) {
        throw std::domain_error(
            "estimate_covariance: degenerate record, zero variance column");
      }
    }
    CovarianceEstimate est;
    est.matrix = cov;
    est.count = count;
    for (int j = 0; j < 4; ++j) {
      for (int k = 0; k < 4; ++k) {
        est.std_error(j, k) =
            std::sqrt((cov(j, j) * cov(k, k) + cov(j, k) * cov(j, k)) / n);
      }
    }
    return est;
  }
};

void check_count(std::int64_t count) {
  if (count < 2) {
    throw std::invalid_argument(
        "sample count must be >= 2 (variance undefined otherwise)");
  }
}

}  // namespace

IQRecord sample_iq(const DetectedState& detected, std::int64_t count,
                   std::uint64_t seed) {
  check_count(count);
  const Matrix4 chol = cholesky_factor(detected.cov_raw);
  NormalSampler rng(seed);
  IQRecord record;
  record.seed = seed;
  record.chain = detected.chain;
  record.samples.resize(count, 4);
  Vector4 z;
  for (std::int64_t t = 0; t < count; ++t) {
    for (int j = 0; j < 4; ++j) z(j) = rng.normal();
    record.samples.row(t) = (chol * z).transpose();
  }
  return record;
}

CovarianceEstimate estimate_covariance(const IQRecord& record) {
  check_count(record.samples.rows());
  if (!record.samples.allFinite()) {
    throw std::invalid_argument("estimate_covariance: non-finite samples");
  }
  MomentAccumulator acc;
  for (std::int64_t t = 0; t < record.samples.rows(); ++t) {
    acc.add(record.samples.row(t).transpose());
  }
  return acc.finish();
}

CovarianceEstimate estimate_covariance(const DetectedState& detected,
                                       std::int64_t count,
                                       std::uint64_t seed) {
  check_count(count);
  const Matrix4 chol = cholesky_factor(detected.cov_raw);
  NormalSampler rng(seed);
  MomentAccumulator acc;
  Vector4 z;
  for (std::int64_t t = 0; t < count; ++t) {
    for (int j = 0; j < 4; ++j) z(j) = rng.normal();
    acc.add(chol * z);
  }
  return acc.finish();
}

double detection_statistic(const CovarianceEstimate& estimate) {
  return (estimate.matrix(kIs, kIi) - estimate.matrix(kQs, kQi)) / 2.0;
}

double detection_statistic_std_error(const CovarianceEstimate& estimate) {
  const double a = estimate.std_error(kIs, kIi);
  const double b = estimate.std_error(kQs, kQi);
  return std::sqrt(a * a + b * b) / 2.0;
}

double detected_power(const CovarianceEstimate& estimate,
                      const ChainParams& chain) {
  const Matrix4 floor = detected_noise_floor(chain);
  return (estimate.matrix(kIs, kIs) - floor(kIs, kIs) +
          estimate.matrix(kQs, kQs) - floor(kQs, kQs)) /
         2.0;
}

double detected_power_std_error(const CovarianceEstimate& estimate) {
  const double a = estimate.std_error(kIs, kIs);
  const double b = estimate.std_error(kQs, kQs);
  return std::sqrt(a * a + b * b) / 2.0;
}

DetectedState null_hypothesis(const SourceSpec& source,
                              const ChainParams& chain) {
  const GaussianState on = make_source(source);
  Matrix4 cov = Matrix4::Identity();
  cov(kIi, kIi) = on.cov(kIi, kIi);
  cov(kQi, kQi) = on.cov(kQi, kQi);
  GaussianState off;
  off.cov = cov;
  return measurement_chain(off, chain);
}

std::vector<ROCPoint> roc_curve(const SourceSpec& source,
                                const ChainParams& chain, std::int64_t count,
                                int trials, std::uint64_t seed) {
  if (trials < 100) {
    throw std::invalid_argument("roc_curve: need at least 100 trials");
  }
  const DetectedState on = measurement_chain(make_source(source), chain);
  const DetectedState off = null_hypothesis(source, chain);

  std::vector<double> stat_on(static_cast<size_t>(trials));
  std::vector<double> stat_off(static_cast<size_t>(trials));
  for (int t = 0; t < trials; ++t) {
    const std::uint64_t trial_seed =
        derive_stream(seed, static_cast<std::uint64_t>(t));
    stat_on[static_cast<size_t>(t)] = detection_statistic(
        estimate_covariance(on, count, derive_stream(trial_seed, 0)));
    stat_off[static_cast<size_t>(t)] = detection_statistic(
        estimate_covariance(off, count, derive_stream(trial_seed, 1)));
  }

  std::sort(stat_on.begin(), stat_on.end());
  std::sort(stat_off.begin(), stat_off.end());
  if (stat_on.front() == stat_on.back() &&
      stat_off.front() == stat_off.back()) {
    throw std::domain_error("roc_curve: degenerate statistics");
  }

  // Thresholds: pooled sorted statistic values. Sweeping from above the
  // maximum down to below the minimum traces pfa from 0 to 1.
  std::vector<double> thresholds;
  thresholds.reserve(stat_on.size() + stat_off.size() + 2);
  thresholds.insert(thresholds.end(), stat_on.begin(), stat_on.end());
  thresholds.insert(thresholds.end(), stat_off.begin(), stat_off.end());
  std::sort(thresholds.begin(), thresholds.end(), std::greater<>());
  thresholds.insert(thresholds.begin(), thresholds.front() + 1.0);
  thresholds.push_back(thresholds.back() - 1.0);

  const auto exceed_fraction = [](const std::vector<double>& sorted,
                                  double threshold) {
    const auto it =
        std::upper_bound(sorted.begin(), sorted.end(), threshold);
    return static_cast<double>(sorted.end() - it) /
           static_cast<double>(sorted.size());
  };

  std::vector<ROCPoint> curve;
  curve.reserve(thresholds.size());
  for (const double th : thresholds) {
    ROCPoint p;
    p.threshold = th;
    p.pfa = exceed_fraction(stat_off, th);
    p.pd = exceed_fraction(stat_on, th);
    if (!curve.empty() && curve.back().pfa == p.pfa &&
        curve.back().pd == p.pd) {
      continue;
    }
    curve.push_back(p);
  }
  return curve;
}

double pd_at_pfa(const std::vector<ROCPoint>& curve, double pfa) {
  if (curve.empty()) {
    throw std::invalid_argument("pd_at_pfa: empty curve");
  }
  double best_pd = 0.0;
  for (const ROCPoint& p : curve) {
    if (p.pfa <= pfa) best_pd = std::max(best_pd, p.pd);
  }
  return best_pd;
}

}  // namespace qenr
