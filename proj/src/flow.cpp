#include "matnoise/flow.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "matnoise/spectral.hpp"

namespace matnoise {

SpectralGaussianTarget matern_transport_target(const Eigen::VectorXd& eigenvalues, double tau_source,
                                               double tau_target) {
  if (!(tau_source > 0.0) || !(tau_target > 0.0)) throw std::invalid_argument("screening terms must be positive");
  SpectralGaussianTarget target;
  target.source_std = (eigenvalues.array() + tau_source).inverse();
  target.target_std = (eigenvalues.array() + tau_target).inverse();
  return target;
}

Eigen::VectorXd linear_path(const Eigen::VectorXd& f0, const Eigen::VectorXd& f1, double t) {
  if (f0.size() != f1.size()) throw std::invalid_argument("linear_path: length mismatch");
  if (t < 0.0 || t > 1.0) throw std::invalid_argument("linear_path: t outside [0, 1]");
  return (1.0 - t) * f0 + t * f1;
}

Eigen::MatrixXd marginal_velocity(const Eigen::MatrixXd& x, double t, const SpectralGaussianTarget& target) {
  if (x.rows() != target.source_std.size() || x.rows() != target.target_std.size())
    throw std::invalid_argument("marginal_velocity: one row per mode required");
  const Eigen::ArrayXd a2 = target.source_std.array().square();
  const Eigen::ArrayXd b2 = target.target_std.array().square();
  const Eigen::ArrayXd factor = (t * b2 - (1.0 - t) * a2) / ((1.0 - t) * (1.0 - t) * a2 + t * t * b2);
  return x.array().colwise() * factor;
}

Eigen::VectorXd marginal_velocity(const Eigen::VectorXd& x, double t, const SpectralGaussianTarget& target) {
  return marginal_velocity(Eigen::MatrixXd(x), t, target);
}

Eigen::MatrixXd integrate_coeffs(const Eigen::MatrixXd& x0, const SpectralGaussianTarget& target, int steps) {
  if (steps < 1) throw std::invalid_argument("integrator needs at least one step");
  const double h = 1.0 / steps;
  Eigen::MatrixXd x = x0;
  for (int n = 0; n < steps; ++n) {
    const double t = n * h;
    const Eigen::MatrixXd mid = x + 0.5 * h * marginal_velocity(x, t, target);
    x += h * marginal_velocity(mid, t + 0.5 * h, target);
  }
  return x;
}

Eigen::VectorXd integrate_coeffs(const Eigen::VectorXd& x0, const SpectralGaussianTarget& target, int steps) {
  return integrate_coeffs(Eigen::MatrixXd(x0), target, steps);
}

Eigen::VectorXd integrate_flow(const Eigen::VectorXd& f0, const SpectralGaussianTarget& target,
                               const Spectrum& spectrum, const Eigen::VectorXd& mass, const FlowConfig& config) {
  const Eigen::Index k = target.source_std.size();
  if (k > spectrum.modes()) throw std::invalid_argument("integrate: target has more modes than the spectrum");
  if (f0.size() != spectrum.eigenvectors.rows()) throw std::invalid_argument("integrate: field size mismatch");

  Spectrum head;
  head.eigenvalues = spectrum.eigenvalues.head(k);
  head.eigenvectors = spectrum.eigenvectors.leftCols(k);
  const Eigen::VectorXd x0 = spectral_coeffs(f0, head, mass);
  const Eigen::VectorXd x1 = integrate_coeffs(x0, target, config.steps);
  return f0 + head.eigenvectors * (x1 - x0);
}

namespace {

double mass_distance(const Eigen::VectorXd& f, const Eigen::VectorXd& g, const Eigen::VectorXd& mass,
                     double total_mass) {
  return std::sqrt((f - g).array().square().matrix().dot(mass) / total_mass);
}

}  // namespace

double mmd(const std::vector<Eigen::VectorXd>& generated, const std::vector<Eigen::VectorXd>& reference,
           const Eigen::VectorXd& mass) {
  if (generated.empty() || reference.empty()) throw std::invalid_argument("mmd: empty sample set");
  const double total_mass = mass.sum();
  double sum = 0.0;
  for (const Eigen::VectorXd& g : generated) {
    double best = std::numeric_limits<double>::infinity();
    for (const Eigen::VectorXd& r : reference) best = std::min(best, mass_distance(g, r, mass, total_mass));
    sum += best;
  }
  return sum / double(generated.size());
}

double coverage(const std::vector<Eigen::VectorXd>& generated, const std::vector<Eigen::VectorXd>& reference,
                const Eigen::VectorXd& mass) {
  if (generated.empty() || reference.empty()) throw std::invalid_argument("coverage: empty sample set");
  const double total_mass = mass.sum();
  std::vector<bool> hit(reference.size(), false);
  for (const Eigen::VectorXd& g : generated) {
    double best = std::numeric_limits<double>::infinity();
    size_t best_index = 0;
    for (size_t r = 0; r < reference.size(); ++r) {
      const double d = mass_distance(g, reference[r], mass, total_mass);
      if (d < best) {  // strict: ties keep the lowest index
        best = d;
        best_index = r;
      }
    }
    hit[best_index] = true;
  }
  size_t covered = 0;
  for (bool h : hit) covered += h ? 1 : 0;
  return double(covered) / double(reference.size());
}

}  // namespace matnoise
