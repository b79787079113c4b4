#include "qenr/analysis.hpp"

#include "qenr/rng.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>

namespace qenr {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// A classical covariance below this many standard errors is treated as
// unresolved from zero and the enhancement ratio as undefined.
constexpr double kRatioResolutionSigmas = 5.0;

}  // namespace

double enhancement_model(double detected_power, double p0) {
  if (!std::isfinite(detected_power) || detected_power <= 0.0) {
    throw std::invalid_argument("enhancement_model: P_d must be > 0");
  }
  if (!std::isfinite(p0) || p0 <= 0.0) {
    throw std::invalid_argument("enhancement_model: P0 must be > 0");
  }
  return std::sqrt(1.0 + 2.0 * p0 / detected_power);
}

double FitResult::p0_db() const { return 10.0 * std::log10(p0); }

FitResult fit_gain(std::span<const EnhancementPoint> points) {
  if (points.size() < 3) {
    throw std::invalid_argument("fit_gain: need at least 3 points");
  }
  double pd_min = std::numeric_limits<double>::infinity();
  double pd_max = 0.0;
  bool all_sigmas = true;
  for (const auto& p : points) {
    if (!std::isfinite(p.detected_power) || p.detected_power <= 0.0 ||
        !std::isfinite(p.enhancement)) {
      throw std::invalid_argument("fit_gain: non-finite or non-positive P_d");
    }
    pd_min = std::min(pd_min, p.detected_power);
    pd_max = std::max(pd_max, p.detected_power);
    if (!(p.sigma > 0.0)) all_sigmas = false;
  }
  if (pd_max < 10.0 * pd_min) {
    throw std::invalid_argument(
        "fit_gain: points must span at least a factor of 10 in P_d");
  }

  const auto weight = [&](const EnhancementPoint& p) {
    return all_sigmas ? 1.0 / (p.sigma * p.sigma) : 1.0;
  };
  const auto cost = [&](double log_p0) {
    const double p0 = std::pow(10.0, log_p0);
    double acc = 0.0;
    for (const auto& p : points) {
      const double d =
          p.enhancement - enhancement_model(p.detected_power, p0);
      acc += weight(p) * d * d;
    }
    return acc;
  };

  // Golden-section on log10(P0); the single-parameter residual is unimodal
  // over any bracket containing the minimizer.
  constexpr int kMaxIterations = 200;
  constexpr double kLogTol = 1e-10;
  const double golden = (std::sqrt(5.0) - 1.0) / 2.0;
  double lo = std::log10(pd_min) - 9.0;
  double hi = std::log10(pd_max) + 9.0;
  double c = hi - golden * (hi - lo);
  double d = lo + golden * (hi - lo);
  double fc = cost(c);
  double fd = cost(d);
  int iterations = 0;
  while (hi - lo > kLogTol && iterations < kMaxIterations) {
    if (fc < fd) {
      hi = d;
      d = c;
      fd = fc;
      c = hi - golden * (hi - lo);
      fc = cost(c);
    } else {
      lo = c;
      c = d;
      fc = fd;
      d = lo + golden * (hi - lo);
      fd = cost(d);
    }
    ++iterations;
  }
  if (hi - lo > kLogTol) {
    throw std::runtime_error("fit_gain: no convergence, ill-conditioned data");
  }

  FitResult result;
  result.p0 = std::pow(10.0, (lo + hi) / 2.0);
  result.iterations = iterations;
  double wsum = 0.0;
  for (const auto& p : points) wsum += weight(p);
  result.residual = std::sqrt(cost((lo + hi) / 2.0) / wsum);
  return result;
}

namespace {

void validate_grid(const std::vector<double>& grid) {
  if (grid.empty()) {
    throw std::invalid_argument("run_sweep: empty photon grid");
  }
  for (size_t i = 0; i < grid.size(); ++i) {
    if (!std::isfinite(grid[i]) || grid[i] < 0.0) {
      throw std::invalid_argument("run_sweep: photon numbers must be >= 0");
    }
    if (i > 0 && grid[i] <= grid[i - 1]) {
      throw std::invalid_argument("run_sweep: photon grid must be ascending");
    }
  }
}

double ppt_of_calibrated(const Matrix4& cov_raw, const ChainParams& chain) {
  const Matrix4 cal = calibrate_matrix(cov_raw, chain);
  return symplectic_eigenvalues_unchecked(partial_transpose(cal))[0];
}

double raw_statistic(const Matrix4& cov) {
  return (cov(kIs, kIi) - cov(kQs, kQi)) / 2.0;
}

SweepPoint compute_point(const SweepConfig& config, size_t index) {
  const double n = config.photon_grid[index];
  const ChainParams& chain = config.chain;

  SweepPoint pt;
  pt.photons = n;
  pt.squeezing = std::asinh(std::sqrt(n));

  const DetectedState detected_q =
      measurement_chain(quantum_source(n), chain);
  const DetectedState detected_c =
      measurement_chain(classical_source(n, config.rho), chain);

  pt.pd_expected = chain.gain * chain.eta_signal * 2.0 * n;
  pt.nu_min_quantum_expected = ppt_of_calibrated(detected_q.cov_raw, chain);
  pt.nu_min_classical_expected = ppt_of_calibrated(detected_c.cov_raw, chain);
  const double p0_ideal = chain.gain * chain.eta_signal;
  pt.enhancement_model_value =
      pt.pd_expected > 0.0 ? enhancement_model(pt.pd_expected, p0_ideal)
                           : kNaN;

  if (config.samples == 0) {
    // Analytic (infinite-sample) limit.
    const Matrix4 floor = detected_noise_floor(chain);
    pt.pd_measured = (detected_q.cov_raw(kIs, kIs) - floor(kIs, kIs) +
                      detected_q.cov_raw(kQs, kQs) - floor(kQs, kQs)) /
                     2.0;
    pt.cov_quantum = raw_statistic(detected_q.cov_raw);
    pt.cov_classical = raw_statistic(detected_c.cov_raw);
    pt.nu_min_quantum = pt.nu_min_quantum_expected;
    pt.nu_min_classical = pt.nu_min_classical_expected;
    pt.enhancement_usable = pt.cov_classical > 0.0;
    pt.enhancement = pt.enhancement_usable
                         ? pt.cov_quantum / pt.cov_classical
                         : kNaN;
    return pt;
  }

  // Both sources consume the same draw stream (paired comparison).
  const std::uint64_t point_seed = derive_stream(config.seed, index);
  const CovarianceEstimate est_q =
      estimate_covariance(detected_q, config.samples, point_seed);
  const CovarianceEstimate est_c =
      estimate_covariance(detected_c, config.samples, point_seed);

  pt.pd_measured = detected_power(est_q, chain);
  pt.pd_std_error = detected_power_std_error(est_q);
  pt.cov_quantum = detection_statistic(est_q);
  pt.cov_classical = detection_statistic(est_c);
  pt.cov_quantum_se = detection_statistic_std_error(est_q);
  pt.cov_classical_se = detection_statistic_std_error(est_c);
  pt.nu_min_quantum = ppt_of_calibrated(est_q.matrix, chain);
  pt.nu_min_classical = ppt_of_calibrated(est_c.matrix, chain);

  pt.enhancement_usable =
      pt.cov_classical > kRatioResolutionSigmas * pt.cov_classical_se;
  if (pt.cov_classical != 0.0) {
    pt.enhancement = pt.cov_quantum / pt.cov_classical;
    const double rq = pt.cov_quantum_se / pt.cov_quantum;
    const double rc = pt.cov_classical_se / pt.cov_classical;
    pt.enhancement_se =
        std::abs(pt.enhancement) * std::sqrt(rq * rq + rc * rc);
  } else {
    pt.enhancement = kNaN;
    pt.enhancement_se = kNaN;
  }
  return pt;
}

}  // namespace

SweepResult run_sweep(const SweepConfig& config) {
  validate_grid(config.photon_grid);
  config.chain.validate();
  if (config.rho < 0.0 || config.rho > 1.0) {
    throw std::invalid_argument("run_sweep: rho must lie in [0, 1]");
  }
  if (config.samples != 0 && config.samples < 2) {
    throw std::invalid_argument("run_sweep: samples must be 0 or >= 2");
  }

  SweepResult result;
  result.config = config;
  result.points.resize(config.photon_grid.size());

  const int threads =
      std::max(1, std::min<int>(config.threads,
                                static_cast<int>(config.photon_grid.size())));
  if (threads == 1) {
    for (size_t i = 0; i < config.photon_grid.size(); ++i) {
      result.points[i] = compute_point(config, i);
    }
  } else {
    std::vector<std::future<void>> futures;
    futures.reserve(static_cast<size_t>(threads));
    for (int w = 0; w < threads; ++w) {
      futures.push_back(std::async(std::launch::async, [&, w]() {
        for (size_t i = static_cast<size_t>(w);
             i < config.photon_grid.size();
             i += static_cast<size_t>(threads)) {
          result.points[i] = compute_point(config, i);
        }
      }));
    }
    for (auto& f : futures) f.get();
  }
  return result;
}

SweepResult sweep_entanglement(const SweepConfig& config) {
  return run_sweep(config);
}

SweepResult sweep_covariance(const SweepConfig& config) {
  return run_sweep(config);
}

double measured_enhancement(const SweepPoint& point) {
  if (!point.enhancement_usable || !std::isfinite(point.enhancement)) {
    throw std::domain_error(
        "measured_enhancement: classical covariance not resolved from zero, "
        "ratio undefined");
  }
  return point.enhancement;
}

std::vector<EnhancementPoint> fit_points(const SweepResult& sweep) {
  std::vector<EnhancementPoint> pts;
  pts.reserve(sweep.points.size());
  for (const auto& p : sweep.points) {
    if (!p.enhancement_usable || p.pd_expected <= 0.0) continue;
    EnhancementPoint ep;
    ep.detected_power = p.pd_expected;
    ep.enhancement = p.enhancement;
    ep.sigma = p.enhancement_se;
    pts.push_back(ep);
  }
  return pts;
}

}  // namespace qenr
