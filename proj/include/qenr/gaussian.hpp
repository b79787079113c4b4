#pragma once

#include <Eigen/Dense>

#include <array>
#include <stdexcept>

// Zero-mean two-mode Gaussian states as 4x4 covariance matrices, plus the
// symplectic machinery needed for physicality and entanglement (PPT) tests.
//
// Units: photon-normalized quadratures. The vacuum state has covariance
// identity (variance 1 per quadrature), so a thermal mode with occupancy n
// has diagonal entries 2n+1 and an ideal two-mode squeezer at parameter r
// has per-mode diagonal cosh(2r) and cross covariance sinh(2r).

namespace qenr {

using Matrix4 = Eigen::Matrix4d;
using Vector4 = Eigen::Vector4d;

// Quadrature ordering shared by every 4x4 matrix and IQ record in the
// library: (I_s, Q_s, I_i, Q_i).
enum QuadIndex : int { kIs = 0, kQs = 1, kIi = 2, kQi = 3 };

enum class Mode { kSignal, kIdler };

// Absolute tolerance for physicality checks: far below any statistical
// error handled here, far above double-precision noise.
inline constexpr double kPhysicalityTol = 1e-9;

// Symplectic form Omega, block-diagonal [[0,1],[-1,0]] per mode under the
// QuadIndex ordering. Satisfies Omega^2 = -I, Omega^T = -Omega.
Matrix4 symplectic_form();

// True iff m is symmetric to within an absolute tolerance scaled by the
// largest entry magnitude.
bool is_symmetric(const Matrix4& m, double rel_tol = 1e-12);

// The two symplectic eigenvalues of a symmetric positive definite 4x4
// covariance matrix, ascending: the moduli of the eigenvalues of i*Omega*V,
// deduplicated from their +/- pairs. Throws std::invalid_argument on
// non-symmetric or non-positive-definite input.
std::array<double, 2> symplectic_eigenvalues(const Matrix4& cov);

// Same computation without the positive-definiteness gate, for noisy
// sample-covariance matrices that may dip slightly indefinite.
std::array<double, 2> symplectic_eigenvalues_unchecked(const Matrix4& cov);

// Partial transpose in covariance form: P*V*P with P = diag(1,1,1,-1)
// (sign flip of Q_i). Involutive; preserves the determinant.
Matrix4 partial_transpose(const Matrix4& cov);

// True iff cov is symmetric positive definite with every symplectic
// eigenvalue >= 1 - kPhysicalityTol (vacuum-normalized Heisenberg bound).
bool is_physical(const Matrix4& cov);

// A physical zero-mean two-mode Gaussian state.
struct GaussianState {
  Vector4 mean = Vector4::Zero();
  Matrix4 cov = Matrix4::Identity();

  // Validating constructor; throws std::invalid_argument if cov is not
  // symmetric positive definite or violates the Heisenberg bound.
  static GaussianState from_covariance(const Matrix4& cov);
  static GaussianState vacuum();
};

// Two-mode squeezed covariance at squeezing parameter r >= 0: per-mode
// diagonal cosh(2r), cross block sinh(2r)*diag(1,-1) (I-I correlated,
// Q-Q anticorrelated). r = 0 is vacuum.
GaussianState tms_state(double r);

// Smaller symplectic eigenvalue of the partial transpose; < 1 certifies
// entanglement.
double ppt_min_eigenvalue(const GaussianState& state);
double ppt_min_eigenvalue(const Matrix4& cov);

// Mean photon number of one mode: (V_II + V_QQ)/4 - 1/2.
double photon_number(const GaussianState& state, Mode mode);
double photon_number(const Matrix4& cov, Mode mode);

}  // namespace qenr
