#include "qenr/gaussian.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>

namespace qenr {

Matrix4 symplectic_form() {
  Matrix4 omega = Matrix4::Zero();
  omega(kIs, kQs) = 1.0;
  omega(kQs, kIs) = -1.0;
  omega(kIi, kQi) = 1.0;
  omega(kQi, kIi) = -1.0;
  return omega;
}

bool is_symmetric(const Matrix4& m, double rel_tol) {
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  return (m - m.transpose()).cwiseAbs().maxCoeff() <= rel_tol * scale;
}

namespace {

bool is_positive_definite(const Matrix4& cov) {
  Eigen::SelfAdjointEigenSolver<Matrix4> solver(cov,
                                                Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff() > 0.0;
}

// Moduli of the eigenvalues of i*Omega*V come in identical pairs
// (eigenvalues of the real matrix Omega*V are +/- i*nu); after an
// ascending sort, entries 0 and 2 are the two symplectic eigenvalues.
std::array<double, 2> symplectic_spectrum(const Matrix4& cov) {
  const Matrix4 m = symplectic_form() * cov;
  Eigen::EigenSolver<Matrix4> solver(m, /*computeEigenvectors=*/false);
  std::array<double, 4> mods;
  for (int k = 0; k < 4; ++k) {
    mods[static_cast<size_t>(k)] = std::abs(solver.eigenvalues()(k));
  }
  std::sort(mods.begin(), mods.end());
  return {mods[0], mods[2]};
}

}  // namespace

std::array<double, 2> symplectic_eigenvalues(const Matrix4& cov) {
  if (!is_symmetric(cov)) {
    throw std::invalid_argument(
        "symplectic_eigenvalues: covariance matrix is not symmetric");
  }
  if (!is_positive_definite(cov)) {
    throw std::invalid_argument(
        "symplectic_eigenvalues: covariance matrix is not positive definite");
  }
  return symplectic_spectrum(cov);
}

std::array<double, 2> symplectic_eigenvalues_unchecked(const Matrix4& cov) {
  if (!is_symmetric(cov, 1e-9)) {
    throw std::invalid_argument(
        "symplectic_eigenvalues_unchecked: matrix is not symmetric");
  }
  return symplectic_spectrum(cov);
}

Matrix4 partial_transpose(const Matrix4& cov) {
  if (!is_symmetric(cov)) {
    throw std::invalid_argument("partial_transpose: matrix is not symmetric");
  }
  Matrix4 pt = cov;
  for (int j = 0; j < 4; ++j) {
    if (j == kQi) continue;
    pt(j, kQi) = -pt(j, kQi);
    pt(kQi, j) = -pt(kQi, j);
  }
  return pt;
}

bool is_physical(const Matrix4& cov) {
  if (!is_symmetric(cov)) return false;
  if (!is_positive_definite(cov)) return false;
  return symplectic_spectrum(cov)[0] >= 1.0 - kPhysicalityTol;
}

GaussianState GaussianState::from_covariance(const Matrix4& cov) {
  if (!is_symmetric(cov)) {
    throw std::invalid_argument("GaussianState: covariance is not symmetric");
  }
  if (!is_positive_definite(cov)) {
    throw std::invalid_argument(
        "GaussianState: covariance is not positive definite");
  }
  if (symplectic_spectrum(cov)[0] < 1.0 - kPhysicalityTol) {
    throw std::invalid_argument(
        "GaussianState: covariance violates the Heisenberg bound");
  }
  GaussianState state;
  state.cov = cov;
  return state;
}

GaussianState GaussianState::vacuum() { return GaussianState{}; }

GaussianState tms_state(double r) {
  if (!std::isfinite(r) || r < 0.0) {
    throw std::invalid_argument("tms_state: r must be finite and >= 0");
  }
  const double diag = std::cosh(2.0 * r);
  const double cross = std::sinh(2.0 * r);
  Matrix4 cov = diag * Matrix4::Identity();
  cov(kIs, kIi) = cov(kIi, kIs) = cross;
  cov(kQs, kQi) = cov(kQi, kQs) = -cross;
  GaussianState state;
  state.cov = cov;
  return state;
}

double ppt_min_eigenvalue(const Matrix4& cov) {
  return symplectic_eigenvalues(partial_transpose(cov))[0];
}

double ppt_min_eigenvalue(const GaussianState& state) {
  return ppt_min_eigenvalue(state.cov);
}

double photon_number(const Matrix4& cov, Mode mode) {
  const int i = mode == Mode::kSignal ? kIs : kIi;
  const int q = mode == Mode::kSignal ? kQs : kQi;
  const double n = (cov(i, i) + cov(q, q)) / 4.0 - 0.5;
  if (n < -kPhysicalityTol) {
    throw std::domain_error(
        "photon_number: negative occupancy, matrix is unphysical or "
        "miscalibrated");
  }
  return n;
}

double photon_number(const GaussianState& state, Mode mode) {
  return photon_number(state.cov, mode);
}

}  // namespace qenr
