#pragma once

// FEM operators of a triangle mesh:
//
// - lumped mass M:    M_ii = one third of the area of the faces around i
// - cotangent stiffness L:  L_ij = -(cot a_ij + cot b_ij) / 2 for an edge
//   (i, j), diagonal fixed so rows sum to zero. This sign makes L positive
//   semidefinite (it discretizes the Dirichlet energy), so the generalized
//   eigenvalues are >= 0 and L + tau*M is positive definite for tau > 0.
// - screened operator L + tau*M
// - Gamma = Frobenius norm of M^(-1/2) L M^(-1/2), computed entrywise from
//   the sparse matrix. The symmetrized operator is similar to M^(-1)L, so
//   Gamma^2 equals the sum of squared generalized eigenvalues exactly.
//
// Scaling the mesh by k leaves L unchanged (cotangents are angle-based),
// multiplies M by k^2, and therefore multiplies Gamma by k^-2.

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include "matnoise/mesh.hpp"

namespace matnoise {

Eigen::VectorXd lumped_mass(const TriMesh& mesh);

Eigen::SparseMatrix<double> cotan_laplacian(const TriMesh& mesh);

Eigen::SparseMatrix<double> screened_operator(const Eigen::SparseMatrix<double>& laplacian,
                                              const Eigen::VectorXd& mass, double tau);

double normalization_gamma(const Eigen::SparseMatrix<double>& laplacian, const Eigen::VectorXd& mass);

// The pieces every sampler needs, assembled once per mesh.
struct MeshOperators {
  Eigen::VectorXd mass;
  Eigen::SparseMatrix<double> laplacian;
  double gamma = 0.0;
  double area = 0.0;
};

MeshOperators assemble_operators(const TriMesh& mesh);

}  // namespace matnoise
