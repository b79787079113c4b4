#pragma once

#include "qenr/gaussian.hpp"

// The two competing transmitters, always compared at matched output power:
// the parametric-downconversion two-mode-squeezed source and the ideal
// classical correlated-noise source that saturates the separability bound.

namespace qenr {

enum class SourceKind { kQuantum, kClassical };

struct SourceSpec {
  SourceKind kind = SourceKind::kQuantum;
  // Per-mode output photon number.
  double photons = 0.0;
  // Sideband correlation coefficient of the classical source, in [0,1];
  // ignored for the quantum kind.
  double rho = 0.99;

  void validate() const;
};

// TMS state with per-mode photon number n, i.e. squeezing r = asinh(sqrt n).
// Diagonal 2n+1, cross covariance 2*sqrt(n(n+1)).
GaussianState quantum_source(double photons);

// Two thermal modes at occupancy n with classically correlated sidebands:
// diagonal 2n+1, cross block rho*2n*diag(1,-1). At rho = 1 the state sits
// exactly on the separability boundary (ppt_min_eigenvalue = 1).
GaussianState classical_source(double photons, double rho);

// Maximum cross-covariance magnitude any separable state can reach at
// per-mode photon number n under this normalization: 2n.
double classical_covariance_bound(double photons);

// Monotone pump-power knob: n = sinh^2(kappa * sqrt(pump_power)).
double pump_to_photons(double pump_power, double kappa);

GaussianState make_source(const SourceSpec& spec);

}  // namespace qenr
