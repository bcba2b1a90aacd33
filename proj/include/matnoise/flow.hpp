#pragma once

// Generative demo: transport Matern noise to a target spectral Gaussian by
// integrating the per-mode marginal-velocity ODE with the midpoint rule.
//
// With independent zero-mean Gaussian endpoints x0 ~ N(0, a^2),
// x1 ~ N(0, b^2) and the linear path x_t = (1-t) x0 + t x1, the exact
// marginal velocity E[x1 - x0 | x_t = x] is affine per mode:
//
//   u(x, t) = x * (t b^2 - (1-t) a^2) / ((1-t)^2 a^2 + t^2 b^2)
//
// and the resulting ODE has the closed form x(t) = x(0) * sigma_t / sigma_0
// with sigma_t^2 = (1-t)^2 a^2 + t^2 b^2, so x(1) = x(0) * b / a. The demo
// replaces a learned denoiser with this exact velocity, which makes the whole
// noise -> ODE -> sample pipeline checkable against closed forms.
//
// Evaluation: MMD (mean distance from each generated sample to its nearest
// reference) and COV (fraction of reference samples that are nearest to some
// generated sample) under the mass-weighted distance
// d(f, g) = sqrt((f-g)^T M (f-g) / sum_i M_ii).

#include <Eigen/Core>
#include <vector>

#include "matnoise/solvers.hpp"

namespace matnoise {

struct SpectralGaussianTarget {
  Eigen::VectorXd source_std;  // a_i = 1/(lambda_i + tau), per mode
  Eigen::VectorXd target_std;  // b_i > 0, per mode
};

// Both laws in the Matern family: a = 1/(lambda+tau_source), b = 1/(lambda+tau_target).
SpectralGaussianTarget matern_transport_target(const Eigen::VectorXd& eigenvalues, double tau_source,
                                               double tau_target);

struct FlowConfig {
  int steps = 100;
  int channels = 1;
};

Eigen::VectorXd linear_path(const Eigen::VectorXd& f0, const Eigen::VectorXd& f1, double t);

// Rows are modes; the matrix overloads treat columns as independent samples.
Eigen::MatrixXd marginal_velocity(const Eigen::MatrixXd& x, double t, const SpectralGaussianTarget& target);
Eigen::VectorXd marginal_velocity(const Eigen::VectorXd& x, double t, const SpectralGaussianTarget& target);

// Midpoint rule x_{t+h} = x_t + h u(t + h/2, x_t + (h/2) u(t, x_t)) on a
// uniform grid, applied to every mode at once.
Eigen::MatrixXd integrate_coeffs(const Eigen::MatrixXd& x0, const SpectralGaussianTarget& target, int steps);
Eigen::VectorXd integrate_coeffs(const Eigen::VectorXd& x0, const SpectralGaussianTarget& target, int steps);

// Projects f0 onto the target's modes, integrates, reconstructs. Modes beyond
// the target are carried over unchanged.
Eigen::VectorXd integrate_flow(const Eigen::VectorXd& f0, const SpectralGaussianTarget& target,
                               const Spectrum& spectrum, const Eigen::VectorXd& mass, const FlowConfig& config);

double mmd(const std::vector<Eigen::VectorXd>& generated, const std::vector<Eigen::VectorXd>& reference,
           const Eigen::VectorXd& mass);

// Ties broken toward the lowest reference index.
double coverage(const std::vector<Eigen::VectorXd>& generated, const std::vector<Eigen::VectorXd>& reference,
                const Eigen::VectorXd& mass);

}  // namespace matnoise
