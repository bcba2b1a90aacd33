#include "matnoise/spectral.hpp"

#include <stdexcept>

namespace matnoise {

double inner_product_m(const Eigen::VectorXd& f, const Eigen::VectorXd& g, const Eigen::VectorXd& mass) {
  if (f.size() != g.size() || f.size() != mass.size()) throw std::invalid_argument("inner_product_m: length mismatch");
  return (f.array() * mass.array() * g.array()).sum();
}

Eigen::VectorXd spectral_coeffs(const Eigen::VectorXd& f, const Spectrum& spectrum, const Eigen::VectorXd& mass) {
  if (f.size() != spectrum.eigenvectors.rows() || mass.size() != f.size())
    throw std::invalid_argument("spectral_coeffs: dimension mismatch");
  return spectrum.eigenvectors.transpose() * (mass.asDiagonal() * f);
}

Eigen::VectorXd reconstruct(const Eigen::VectorXd& coeffs, const Spectrum& spectrum) {
  if (coeffs.size() > spectrum.modes()) throw std::invalid_argument("reconstruct: more coefficients than modes");
  return spectrum.eigenvectors.leftCols(coeffs.size()) * coeffs;
}

double theoretical_variance(double lambda, double tau) {
  const double denom = lambda + tau;
  return 1.0 / (denom * denom);
}

WeylTail weyl_tail(const Eigen::VectorXd& eigenvalues, Eigen::Index k, double tau, double area) {
  const Eigen::Index n = eigenvalues.size();
  if (n == 0) throw std::invalid_argument("weyl_tail: empty spectrum");
  if (k < 1 || k > n + 1) throw std::invalid_argument("weyl_tail: tail start out of range");
  WeylTail tail;
  for (Eigen::Index i = k; i <= n; ++i) {
    tail.computed += theoretical_variance(eigenvalues[i - 1], tau);
    tail.analytic_bound += area * area / (double(i) * double(i));
  }
  return tail;
}

}  // namespace matnoise
