#include "matnoise/solvers.hpp"

#include <Eigen/Eigenvalues>
#include <atomic>
#include <sstream>
#include <stdexcept>

#include "matnoise/exceptions.hpp"

namespace matnoise {

namespace {
std::atomic<std::uint64_t> g_factorizations{0};
}

SpdFactor::SpdFactor(const Eigen::SparseMatrix<double>& matrix) : n_(matrix.rows()) {
  if (matrix.rows() != matrix.cols()) throw std::invalid_argument("factorize needs a square matrix");
  auto llt = std::make_shared<Eigen::SimplicialLLT<Eigen::SparseMatrix<double>>>();
  llt->compute(matrix);
  ++g_factorizations;
  if (llt->info() != Eigen::Success)
    throw NumericalError("Cholesky factorization failed: operator is not positive definite (tau <= 0 or broken mesh?)");
  llt_ = std::move(llt);
}

std::uint64_t SpdFactor::factorization_count() { return g_factorizations.load(); }

Spectrum generalized_eigs(const Eigen::SparseMatrix<double>& laplacian, const Eigen::VectorXd& mass,
                          Eigen::Index k) {
  const Eigen::Index n = laplacian.rows();
  if (laplacian.cols() != n || mass.size() != n) throw std::invalid_argument("operator dimensions do not match");
  if (n > kDenseEigsLimit) {
    std::ostringstream msg;
    msg << "dense eigensolver is verification-scale only (" << n << " vertices > limit " << kDenseEigsLimit << ")";
    throw std::invalid_argument(msg.str());
  }
  if (k < 1 || k > n) throw std::invalid_argument("requested mode count out of range");
  for (Eigen::Index i = 0; i < n; ++i)
    if (!(mass[i] > 0.0)) throw std::invalid_argument("mass matrix has a non-positive entry");

  // Similarity transform to an ordinary symmetric problem.
  const Eigen::VectorXd inv_sqrt_mass = mass.cwiseSqrt().cwiseInverse();
  Eigen::MatrixXd sym = Eigen::MatrixXd(laplacian);
  sym = inv_sqrt_mass.asDiagonal() * sym * inv_sqrt_mass.asDiagonal();

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(sym);
  if (solver.info() != Eigen::Success) throw NumericalError("dense eigendecomposition failed");

  Eigen::VectorXd values = solver.eigenvalues();  // ascending
  const double lambda_max = std::max(values[n - 1], 0.0);

  if (values[0] < -1e-9 * std::max(lambda_max, 1.0))
    throw NumericalError("generalized spectrum is not positive semidefinite");
  // A second (near-)zero eigenvalue means a second connected component.
  if (n >= 2 && values[1] < 1e-8 * std::max(lambda_max, 1.0))
    throw std::invalid_argument("mesh has multiple connected components; the spectrum indexing assumes one");
  for (Eigen::Index i = 0; i < n; ++i) values[i] = std::max(values[i], 0.0);

  Spectrum spectrum;
  spectrum.eigenvalues = values.head(k);
  spectrum.eigenvectors = inv_sqrt_mass.asDiagonal() * solver.eigenvectors().leftCols(k);

  // Deterministic sign: largest-magnitude entry of each eigenvector positive.
  for (Eigen::Index j = 0; j < k; ++j) {
    Eigen::Index arg_max = 0;
    spectrum.eigenvectors.col(j).cwiseAbs().maxCoeff(&arg_max);
    if (spectrum.eigenvectors(arg_max, j) < 0.0) spectrum.eigenvectors.col(j) *= -1.0;
  }
  return spectrum;
}

}  // namespace matnoise
