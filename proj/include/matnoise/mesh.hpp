#pragma once

// Triangle-mesh container and exact re-triangulation.
//
// Conventions used throughout:
// - Indices are 0-based in memory (OBJ's 1-based indices are converted at the
//   I/O boundary).
// - Faces are counter-clockwise; shared edges of a consistently oriented mesh
//   are traversed in opposite directions by their two faces.
// - Vertices are never welded or deduplicated; duplicated vertices would
//   silently change the FEM operators, so they are the caller's problem.
// - Meshes with boundary and with multiple connected components are accepted
//   here; downstream modules impose their own restrictions.
//
// subdivide_midpoint and bisect_edges refine the triangulation without moving
// the surface: every new vertex is an edge midpoint, so the piecewise-linear
// geometry is preserved exactly. That is what makes cross-triangulation
// comparisons of noise distributions meaningful.

#include <Eigen/Core>
#include <utility>
#include <vector>

namespace matnoise {

struct TriMesh {
  Eigen::MatrixX3d vertices;  // one row per vertex, xyz
  Eigen::MatrixX3i faces;     // one row per face, CCW vertex indices

  Eigen::Index vertex_count() const { return vertices.rows(); }
  Eigen::Index face_count() const { return faces.rows(); }
};

struct ValidationReport {
  bool is_manifold = false;  // every undirected edge in <= 2 faces, opposite traversals
  int boundary_edge_count = 0;
  int connected_components = 0;
  std::vector<int> degenerate_faces;  // area < 1e-12 * (bbox diagonal)^2
  double min_angle = 0.0;             // radians, over all face corners
};

// Relative face-area threshold below which a face counts as degenerate.
inline constexpr double kDegenerateAreaFactor = 1e-12;

// Throws std::invalid_argument if any face references an out-of-range vertex
// or repeats a vertex. Cheap; called by loaders and mesh transforms.
void require_valid_structure(const TriMesh& mesh);

ValidationReport validate(const TriMesh& mesh);

// Uniform scaling of vertex positions, k > 0. Connectivity unchanged.
TriMesh scale(const TriMesh& mesh, double k);

// 1->4 split of every face at edge midpoints. V' = V + E, F' = 4F.
TriMesh subdivide_midpoint(const TriMesh& mesh);

// Splits the given undirected edges (pairs of vertex indices of the input
// mesh) one at a time at their midpoints; each split divides the 1 or 2
// incident triangles in two. Throws std::invalid_argument for unknown edges.
TriMesh bisect_edges(const TriMesh& mesh, const std::vector<std::pair<int, int>>& edges);

// Geometry helpers shared by the FEM assembly.
double face_area(const TriMesh& mesh, Eigen::Index face);
double total_area(const TriMesh& mesh);
double bbox_diagonal(const TriMesh& mesh);

// Undirected edges (a < b), sorted lexicographically.
std::vector<std::pair<int, int>> undirected_edges(const TriMesh& mesh);

}  // namespace matnoise
