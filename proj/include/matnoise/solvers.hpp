#pragma once

// Sparse SPD factorization for repeated screened-Poisson solves, and a dense
// generalized eigensolver for verification-scale meshes.
//
// The factorization is a sparse Cholesky with a fill-reducing (AMD)
// permutation; the cost is paid once and each subsequent solve is O(nnz of
// the factor). SpdFactor is immutable after construction and cheap to copy;
// concurrent solves against one factor are safe.

#include <Eigen/Core>
#include <Eigen/SparseCholesky>
#include <Eigen/SparseCore>
#include <cstdint>
#include <memory>
#include <stdexcept>

namespace matnoise {

class SpdFactor {
 public:
  explicit SpdFactor(const Eigen::SparseMatrix<double>& matrix);

  Eigen::Index size() const { return n_; }

  // Accepts any dense vector/matrix expression; columns are independent
  // right-hand sides.
  template <typename Derived>
  typename Derived::PlainObject solve(const Eigen::MatrixBase<Derived>& rhs) const {
    if (rhs.rows() != n_) throw std::invalid_argument("solve: right-hand side size does not match the system");
    return llt_->solve(rhs.derived().eval());
  }

  // Number of factorizations performed process-wide; lets tests observe that
  // repeated solves do not refactorize.
  static std::uint64_t factorization_count();

 private:
  std::shared_ptr<const Eigen::SimplicialLLT<Eigen::SparseMatrix<double>>> llt_;
  Eigen::Index n_ = 0;
};

inline SpdFactor factorize(const Eigen::SparseMatrix<double>& matrix) { return SpdFactor(matrix); }
inline Eigen::VectorXd solve(const SpdFactor& factor, const Eigen::VectorXd& rhs) { return factor.solve(rhs); }

// Generalized eigenpairs M^(-1) L phi = lambda phi with M-orthonormal
// eigenvectors, ascending eigenvalues, and each eigenvector's
// largest-magnitude entry made positive.
struct Spectrum {
  Eigen::VectorXd eigenvalues;   // k, ascending, >= 0
  Eigen::MatrixXd eigenvectors;  // n x k, Phi^T M Phi = I

  Eigen::Index modes() const { return eigenvalues.size(); }
};

// Mesh vertex count above which the dense path refuses to run.
inline constexpr Eigen::Index kDenseEigsLimit = 4000;

// Dense path: symmetric eigendecomposition of M^(-1/2) L M^(-1/2) followed by
// the back-transform phi = M^(-1/2) u. Throws for meshes above
// kDenseEigsLimit and for meshes with more than one connected component
// (detected as a repeated zero eigenvalue).
Spectrum generalized_eigs(const Eigen::SparseMatrix<double>& laplacian, const Eigen::VectorXd& mass,
                          Eigen::Index k);

}  // namespace matnoise
