#include "matnoise/operators.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace matnoise {

namespace {

void require_nondegenerate(Eigen::Index face, double area, double floor) {
  if (area < floor) {
    std::ostringstream msg;
    msg << "face " << face << " is degenerate (area " << area << ")";
    throw std::invalid_argument(msg.str());
  }
}

}  // namespace

Eigen::VectorXd lumped_mass(const TriMesh& mesh) {
  require_valid_structure(mesh);
  const double floor = kDegenerateAreaFactor * bbox_diagonal(mesh) * bbox_diagonal(mesh);
  Eigen::VectorXd mass = Eigen::VectorXd::Zero(mesh.vertex_count());
  for (Eigen::Index f = 0; f < mesh.face_count(); ++f) {
    const double area = face_area(mesh, f);
    require_nondegenerate(f, area, floor);
    for (int k = 0; k < 3; ++k) mass[mesh.faces(f, k)] += area / 3.0;
  }
  return mass;
}

Eigen::SparseMatrix<double> cotan_laplacian(const TriMesh& mesh) {
  require_valid_structure(mesh);
  const double floor = kDegenerateAreaFactor * bbox_diagonal(mesh) * bbox_diagonal(mesh);
  const Eigen::Index n = mesh.vertex_count();

  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(12 * mesh.face_count());
  for (Eigen::Index f = 0; f < mesh.face_count(); ++f) {
    const double area = face_area(mesh, f);
    require_nondegenerate(f, area, floor);
    for (int k = 0; k < 3; ++k) {
      // Corner k sits opposite the edge (a, b); its cotangent weights that edge.
      const int c = mesh.faces(f, k), a = mesh.faces(f, (k + 1) % 3), b = mesh.faces(f, (k + 2) % 3);
      const Eigen::Vector3d u = mesh.vertices.row(a) - mesh.vertices.row(c);
      const Eigen::Vector3d v = mesh.vertices.row(b) - mesh.vertices.row(c);
      const double w = 0.5 * u.dot(v) / (2.0 * area);  // cot / 2, cross norm = 2*area
      triplets.emplace_back(a, b, -w);
      triplets.emplace_back(b, a, -w);
      triplets.emplace_back(a, a, w);
      triplets.emplace_back(b, b, w);
    }
  }
  Eigen::SparseMatrix<double> laplacian(n, n);
  laplacian.setFromTriplets(triplets.begin(), triplets.end());
  return laplacian;
}

Eigen::SparseMatrix<double> screened_operator(const Eigen::SparseMatrix<double>& laplacian,
                                              const Eigen::VectorXd& mass, double tau) {
  if (laplacian.rows() != mass.size()) throw std::invalid_argument("operator dimensions do not match");
  if (!(tau > 0.0)) throw std::invalid_argument("screening term tau must be positive");
  Eigen::SparseMatrix<double> diag(mass.size(), mass.size());
  diag.setIdentity();
  diag.diagonal() = tau * mass;
  return laplacian + diag;
}

double normalization_gamma(const Eigen::SparseMatrix<double>& laplacian, const Eigen::VectorXd& mass) {
  if (laplacian.rows() != mass.size()) throw std::invalid_argument("operator dimensions do not match");
  for (Eigen::Index i = 0; i < mass.size(); ++i)
    if (!(mass[i] > 0.0)) {
      std::ostringstream msg;
      msg << "mass entry " << i << " is not positive";
      throw std::invalid_argument(msg.str());
    }
  double sum = 0.0;
  for (int col = 0; col < laplacian.outerSize(); ++col)
    for (Eigen::SparseMatrix<double>::InnerIterator it(laplacian, col); it; ++it)
      sum += it.value() * it.value() / (mass[it.row()] * mass[it.col()]);
  return std::sqrt(sum);
}

MeshOperators assemble_operators(const TriMesh& mesh) {
  MeshOperators ops;
  ops.mass = lumped_mass(mesh);
  ops.laplacian = cotan_laplacian(mesh);
  ops.gamma = normalization_gamma(ops.laplacian, ops.mass);
  ops.area = total_area(mesh);
  return ops;
}

}  // namespace matnoise
