#include <doctest.h>

#include <Eigen/Dense>

#include "matnoise/mesh.hpp"
#include "matnoise/operators.hpp"
#include "matnoise/primitives.hpp"

using namespace matnoise;

namespace {

// Dense generalized eigenvalues, an independent route from both
// normalization_gamma (entrywise) and generalized_eigs (similarity + SAES).
Eigen::VectorXd dense_generalized_eigenvalues(const Eigen::SparseMatrix<double>& laplacian,
                                              const Eigen::VectorXd& mass) {
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> solver(
      Eigen::MatrixXd(laplacian), Eigen::MatrixXd(mass.asDiagonal()));
  return solver.eigenvalues();
}

TriMesh unit_equilateral() {
  TriMesh mesh;
  mesh.vertices.resize(3, 3);
  mesh.vertices << 0, 0, 0, 1, 0, 0, 0.5, std::sqrt(3.0) / 2.0, 0;
  mesh.faces.resize(1, 3);
  mesh.faces << 0, 1, 2;
  return mesh;
}

}  // namespace

TEST_CASE("lumped mass of the unit square") {
  const Eigen::VectorXd mass = lumped_mass(make_unit_square());
  // Both faces have area 1/2; vertices 0 and 2 touch both, 1 and 3 touch one.
  CHECK(mass[0] == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  CHECK(mass[1] == doctest::Approx(1.0 / 6.0).epsilon(1e-15));
  CHECK(mass[2] == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  CHECK(mass[3] == doctest::Approx(1.0 / 6.0).epsilon(1e-15));
}

TEST_CASE("mass entries partition the total area") {
  for (const TriMesh& mesh : {make_icosphere(2), make_grid(5, 7)}) {
    const Eigen::VectorXd mass = lumped_mass(mesh);
    CHECK(mass.minCoeff() > 0.0);
    CHECK(mass.sum() == doctest::Approx(total_area(mesh)).epsilon(1e-10));
  }
}

TEST_CASE("mass scales by k^2") {
  const TriMesh mesh = make_icosphere(1);
  const Eigen::VectorXd mass = lumped_mass(mesh);
  for (double k : {0.1, 2.0, 10.0}) {
    const Eigen::VectorXd scaled = lumped_mass(scale(mesh, k));
    CHECK(((scaled - k * k * mass).cwiseAbs().maxCoeff() / mass.maxCoeff()) < 1e-12 * k * k);
  }
}

TEST_CASE("degenerate faces are reported by index") {
  TriMesh mesh = make_unit_square();
  mesh.vertices.row(3) << 0.5, 0.5, 0.0;  // face 1 = (0, 2, 3) collapses onto the diagonal
  CHECK_THROWS_WITH_AS(lumped_mass(mesh), doctest::Contains("face 1"), std::invalid_argument);
  CHECK_THROWS_AS(cotan_laplacian(mesh), std::invalid_argument);
}

TEST_CASE("cotangent weights of the unit square") {
  const Eigen::MatrixXd laplacian = Eigen::MatrixXd(cotan_laplacian(make_unit_square()));
  // Both angles opposite the diagonal (0, 2) are right angles.
  CHECK(laplacian(0, 2) == doctest::Approx(0.0).epsilon(1e-15));
  // Boundary edges see one 45-degree opposite angle: weight cot(45)/2 = 1/2.
  CHECK(laplacian(0, 1) == doctest::Approx(-0.5).epsilon(1e-14));
  CHECK(laplacian(0, 3) == doctest::Approx(-0.5).epsilon(1e-14));
  CHECK(laplacian(1, 2) == doctest::Approx(-0.5).epsilon(1e-14));
  CHECK(laplacian(0, 0) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK((laplacian - laplacian.transpose()).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("cotangent weights of the equilateral triangle") {
  const Eigen::MatrixXd laplacian = Eigen::MatrixXd(cotan_laplacian(unit_equilateral()));
  const double expected = 0.5 / std::sqrt(3.0);  // cot(60)/2
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      if (i != j) CHECK(std::abs(laplacian(i, j)) == doctest::Approx(expected).epsilon(1e-14));
}

TEST_CASE("Laplacian is scale invariant") {
  const TriMesh mesh = make_icosphere(1);
  const Eigen::MatrixXd laplacian = Eigen::MatrixXd(cotan_laplacian(mesh));
  for (double k : {0.1, 2.0, 10.0}) {
    const Eigen::MatrixXd scaled = Eigen::MatrixXd(cotan_laplacian(scale(mesh, k)));
    CHECK((scaled - laplacian).cwiseAbs().maxCoeff() <= 1e-12 * laplacian.cwiseAbs().maxCoeff());
  }
}

TEST_CASE("Laplacian rows sum to zero and the matrix is PSD") {
  for (const TriMesh& mesh : {make_icosphere(2), make_grid(6, 4), unit_equilateral()}) {
    const Eigen::SparseMatrix<double> laplacian = cotan_laplacian(mesh);
    const double max_entry = Eigen::MatrixXd(laplacian).cwiseAbs().maxCoeff();
    const Eigen::VectorXd row_sums = laplacian * Eigen::VectorXd::Ones(laplacian.rows());
    CHECK(row_sums.cwiseAbs().maxCoeff() < 1e-10 * max_entry * double(laplacian.rows()));

    const Eigen::VectorXd eigs = dense_generalized_eigenvalues(laplacian, lumped_mass(mesh));
    CHECK(eigs.minCoeff() >= -1e-9 * eigs.maxCoeff());
  }
}

TEST_CASE("screened operator acts as tau*M on constants") {
  const TriMesh mesh = unit_equilateral();
  const Eigen::VectorXd mass = lumped_mass(mesh);
  const Eigen::SparseMatrix<double> laplacian = cotan_laplacian(mesh);
  const double tau = 100.0;
  const Eigen::SparseMatrix<double> screened = screened_operator(laplacian, mass, tau);

  const Eigen::VectorXd ones = Eigen::VectorXd::Ones(3);
  const Eigen::VectorXd applied = screened * ones;
  // All three vertex masses are area/3, so the constant vector is an
  // eigenvector with eigenvalue tau * area / 3.
  const double expected = tau * total_area(mesh) / 3.0;
  CHECK((applied - expected * ones).cwiseAbs().maxCoeff() < 1e-12 * expected);

  const Eigen::MatrixXd dense = Eigen::MatrixXd(screened);
  CHECK((dense - dense.transpose()).cwiseAbs().maxCoeff() == 0.0);

  CHECK_THROWS_AS(screened_operator(laplacian, mass, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(screened_operator(laplacian, mass, -5.0), std::invalid_argument);
}

TEST_CASE("gamma with identity mass is the Frobenius norm") {
  const Eigen::SparseMatrix<double> laplacian = cotan_laplacian(make_unit_square());
  const Eigen::VectorXd ones = Eigen::VectorXd::Ones(4);
  CHECK(normalization_gamma(laplacian, ones) ==
        doctest::Approx(Eigen::MatrixXd(laplacian).norm()).epsilon(1e-14));
}

TEST_CASE("gamma scales by k^-2") {
  const TriMesh mesh = make_icosphere(1);
  const MeshOperators ops = assemble_operators(mesh);
  for (double k : {0.1, 2.0, 10.0}) {
    const MeshOperators scaled = assemble_operators(scale(mesh, k));
    CHECK(scaled.gamma == doctest::Approx(ops.gamma / (k * k)).epsilon(1e-12));
  }
}

TEST_CASE("gamma squared equals the sum of squared eigenvalues") {
  for (const TriMesh& mesh : {make_unit_square(), make_grid(6, 5), make_icosphere(1)}) {
    const Eigen::VectorXd mass = lumped_mass(mesh);
    const Eigen::SparseMatrix<double> laplacian = cotan_laplacian(mesh);
    const double gamma = normalization_gamma(laplacian, mass);
    const Eigen::VectorXd eigs = dense_generalized_eigenvalues(laplacian, mass);
    CHECK(gamma * gamma == doctest::Approx(eigs.squaredNorm()).epsilon(1e-8));
  }
}

TEST_CASE("gamma rejects non-positive mass entries") {
  const Eigen::SparseMatrix<double> laplacian = cotan_laplacian(make_unit_square());
  Eigen::VectorXd mass = lumped_mass(make_unit_square());
  mass[2] = 0.0;
  CHECK_THROWS_AS(normalization_gamma(laplacian, mass), std::invalid_argument);
}
