#include "matnoise/primitives.hpp"

#include <cmath>
#include <stdexcept>

namespace matnoise {

TriMesh make_unit_square() {
  TriMesh mesh;
  mesh.vertices.resize(4, 3);
  mesh.vertices << 0, 0, 0, 1, 0, 0, 1, 1, 0, 0, 1, 0;
  mesh.faces.resize(2, 3);
  mesh.faces << 0, 1, 2, 0, 2, 3;
  return mesh;
}

TriMesh make_grid(int nx, int ny) {
  if (nx < 1 || ny < 1) throw std::invalid_argument("grid needs at least one cell per axis");
  TriMesh mesh;
  mesh.vertices.resize((nx + 1) * (ny + 1), 3);
  auto id = [nx](int i, int j) { return j * (nx + 1) + i; };
  for (int j = 0; j <= ny; ++j)
    for (int i = 0; i <= nx; ++i)
      mesh.vertices.row(id(i, j)) << double(i) / nx, double(j) / ny, 0.0;
  mesh.faces.resize(2 * nx * ny, 3);
  int f = 0;
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      mesh.faces.row(f++) << id(i, j), id(i + 1, j), id(i + 1, j + 1);
      mesh.faces.row(f++) << id(i, j), id(i + 1, j + 1), id(i, j + 1);
    }
  return mesh;
}

TriMesh make_icosahedron() {
  const double t = (1.0 + std::sqrt(5.0)) / 2.0;
  const double s = 1.0 / std::sqrt(1.0 + t * t);  // normalize to unit radius

  TriMesh mesh;
  mesh.vertices.resize(12, 3);
  mesh.vertices << -1, t, 0, 1, t, 0, -1, -t, 0, 1, -t, 0,
      0, -1, t, 0, 1, t, 0, -1, -t, 0, 1, -t,
      t, 0, -1, t, 0, 1, -t, 0, -1, -t, 0, 1;
  mesh.vertices *= s;
  mesh.faces.resize(20, 3);
  mesh.faces << 0, 11, 5, 0, 5, 1, 0, 1, 7, 0, 7, 10, 0, 10, 11,
      1, 5, 9, 5, 11, 4, 11, 10, 2, 10, 7, 6, 7, 1, 8,
      3, 9, 4, 3, 4, 2, 3, 2, 6, 3, 6, 8, 3, 8, 9,
      4, 9, 5, 2, 4, 11, 6, 2, 10, 8, 6, 7, 9, 8, 1;
  return mesh;
}

TriMesh make_icosphere(int level) {
  if (level < 0) throw std::invalid_argument("subdivision level must be non-negative");
  TriMesh mesh = make_icosahedron();
  for (int l = 0; l < level; ++l) {
    mesh = subdivide_midpoint(mesh);
    for (Eigen::Index v = 0; v < mesh.vertex_count(); ++v) mesh.vertices.row(v).normalize();
  }
  return mesh;
}

}  // namespace matnoise
