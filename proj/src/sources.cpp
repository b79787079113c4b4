#include "qenr/sources.hpp"

#include <cmath>

namespace qenr {

void SourceSpec::validate() const {
  if (!std::isfinite(photons) || photons < 0.0) {
    throw std::invalid_argument("SourceSpec: photons must be finite and >= 0");
  }
  if (!std::isfinite(rho) || rho < 0.0 || rho > 1.0) {
    throw std::invalid_argument("SourceSpec: rho must lie in [0, 1]");
  }
}

GaussianState quantum_source(double photons) {
  if (!std::isfinite(photons) || photons < 0.0) {
    throw std::invalid_argument(
        "quantum_source: photons must be finite and >= 0");
  }
  return tms_state(std::asinh(std::sqrt(photons)));
}

GaussianState classical_source(double photons, double rho) {
  if (!std::isfinite(photons) || photons < 0.0) {
    throw std::invalid_argument(
        "classical_source: photons must be finite and >= 0");
  }
  if (!std::isfinite(rho) || rho < 0.0) {
    throw std::invalid_argument("classical_source: rho must be >= 0");
  }
  if (rho > 1.0) {
    throw std::invalid_argument(
        "classical_source: rho > 1 would exceed the separability bound");
  }
  const double diag = 2.0 * photons + 1.0;
  const double cross = rho * 2.0 * photons;
  Matrix4 cov = diag * Matrix4::Identity();
  cov(kIs, kIi) = cov(kIi, kIs) = cross;
  cov(kQs, kQi) = cov(kQi, kQs) = -cross;
  GaussianState state;
  state.cov = cov;
  return state;
}

double classical_covariance_bound(double photons) {
  if (!std::isfinite(photons) || photons < 0.0) {
    throw std::invalid_argument(
        "classical_covariance_bound: photons must be finite and >= 0");
  }
  return 2.0 * photons;
}

double pump_to_photons(double pump_power, double kappa) {
  if (!std::isfinite(pump_power) || pump_power < 0.0) {
    throw std::invalid_argument(
        "pump_to_photons: pump_power must be finite and >= 0");
  }
  if (!std::isfinite(kappa) || kappa <= 0.0) {
    throw std::invalid_argument("pump_to_photons: kappa must be > 0");
  }
  const double s = std::sinh(kappa * std::sqrt(pump_power));
  return s * s;
}

GaussianState make_source(const SourceSpec& spec) {
  spec.validate();
  return spec.kind == SourceKind::kQuantum
             ? quantum_source(spec.photons)
             : classical_source(spec.photons, spec.rho);
}

}  // namespace qenr
