#pragma once

// Spectral coefficients f_hat_i = <f, phi_i>_M, reconstruction, the Matern
// per-mode variance law 1/(lambda + tau)^2, and tail sums with the Weyl-law
// over-bound. Mode indices are 1-based: index 1 is the constant mode
// (lambda_1 = 0).

#include <Eigen/Core>

#include "matnoise/solvers.hpp"

namespace matnoise {

// Lumped inner product sum_i M_ii f_i g_i.
double inner_product_m(const Eigen::VectorXd& f, const Eigen::VectorXd& g, const Eigen::VectorXd& mass);

// Projections onto the retained modes of the spectrum.
Eigen::VectorXd spectral_coeffs(const Eigen::VectorXd& f, const Spectrum& spectrum, const Eigen::VectorXd& mass);

// f = sum_i coeffs_i phi_i over the leading coeffs.size() modes.
Eigen::VectorXd reconstruct(const Eigen::VectorXd& coeffs, const Spectrum& spectrum);

// Var[f_hat] = 1/(lambda + tau)^2 for the screened solve.
double theoretical_variance(double lambda, double tau);

struct WeylTail {
  double computed = 0.0;        // sum_{i>=k} 1/(lambda_i + tau)^2 over the spectrum
  double analytic_bound = 0.0;  // sum_{i>=k} A^2 / i^2, valid once lambda_i + tau >= i/A
};

// Tail over 1-based modes k..n; k = n+1 gives an empty tail (both sums 0).
WeylTail weyl_tail(const Eigen::VectorXd& eigenvalues, Eigen::Index k, double tau, double area);

}  // namespace matnoise
