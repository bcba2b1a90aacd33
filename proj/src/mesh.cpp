#include "matnoise/mesh.hpp"

#include <Eigen/Geometry>
#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>

namespace matnoise {

namespace {

std::pair<int, int> edge_key(int a, int b) { return a < b ? std::make_pair(a, b) : std::make_pair(b, a); }

// Union-find over vertex indices.
struct DisjointSet {
  std::vector<int> parent;
  explicit DisjointSet(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(int a, int b) { parent[find(a)] = find(b); }
};

}  // namespace

void require_valid_structure(const TriMesh& mesh) {
  const Eigen::Index n = mesh.vertex_count();
  for (Eigen::Index f = 0; f < mesh.face_count(); ++f) {
    const int a = mesh.faces(f, 0), b = mesh.faces(f, 1), c = mesh.faces(f, 2);
    if (a < 0 || b < 0 || c < 0 || a >= n || b >= n || c >= n) {
      std::ostringstream msg;
      msg << "face " << f << " references a vertex outside [0, " << n << ")";
      throw std::invalid_argument(msg.str());
    }
    if (a == b || b == c || a == c) {
      std::ostringstream msg;
      msg << "face " << f << " repeats a vertex index";
      throw std::invalid_argument(msg.str());
    }
  }
}

double face_area(const TriMesh& mesh, Eigen::Index face) {
  const Eigen::Vector3d p0 = mesh.vertices.row(mesh.faces(face, 0));
  const Eigen::Vector3d p1 = mesh.vertices.row(mesh.faces(face, 1));
  const Eigen::Vector3d p2 = mesh.vertices.row(mesh.faces(face, 2));
  return 0.5 * (p1 - p0).cross(p2 - p0).norm();
}

double total_area(const TriMesh& mesh) {
  double area = 0.0;
  for (Eigen::Index f = 0; f < mesh.face_count(); ++f) area += face_area(mesh, f);
  return area;
}

double bbox_diagonal(const TriMesh& mesh) {
  if (mesh.vertex_count() == 0) return 0.0;
  const Eigen::Vector3d lo = mesh.vertices.colwise().minCoeff();
  const Eigen::Vector3d hi = mesh.vertices.colwise().maxCoeff();
  return (hi - lo).norm();
}

std::vector<std::pair<int, int>> undirected_edges(const TriMesh& mesh) {
  std::set<std::pair<int, int>> edges;
  for (Eigen::Index f = 0; f < mesh.face_count(); ++f)
    for (int k = 0; k < 3; ++k) edges.insert(edge_key(mesh.faces(f, k), mesh.faces(f, (k + 1) % 3)));
  return {edges.begin(), edges.end()};
}

ValidationReport validate(const TriMesh& mesh) {
  require_valid_structure(mesh);
  ValidationReport report;

  // Undirected incidence counts and directed traversal counts.
  std::map<std::pair<int, int>, int> undirected;
  std::map<std::pair<int, int>, int> directed;
  for (Eigen::Index f = 0; f < mesh.face_count(); ++f) {
    for (int k = 0; k < 3; ++k) {
      const int i = mesh.faces(f, k), j = mesh.faces(f, (k + 1) % 3);
      ++undirected[edge_key(i, j)];
      ++directed[{i, j}];
    }
  }

  bool edge_manifold = true;
  for (const auto& [e, count] : undirected) {
    if (count > 2) edge_manifold = false;
    if (count == 1) ++report.boundary_edge_count;
  }
  // Consistent orientation: no directed edge used twice.
  bool oriented = true;
  for (const auto& [e, count] : directed)
    if (count > 1) oriented = false;
  report.is_manifold = edge_manifold && oriented;

  DisjointSet ds(static_cast<int>(mesh.vertex_count()));
  for (const auto& [e, count] : undirected) ds.unite(e.first, e.second);
  std::set<int> roots;
  for (int v = 0; v < mesh.vertex_count(); ++v) roots.insert(ds.find(v));
  report.connected_components = static_cast<int>(roots.size());

  const double area_floor = kDegenerateAreaFactor * bbox_diagonal(mesh) * bbox_diagonal(mesh);
  double min_angle = mesh.face_count() > 0 ? M_PI : 0.0;
  for (Eigen::Index f = 0; f < mesh.face_count(); ++f) {
    if (face_area(mesh, f) < area_floor) report.degenerate_faces.push_back(static_cast<int>(f));
    for (int k = 0; k < 3; ++k) {
      const Eigen::Vector3d p = mesh.vertices.row(mesh.faces(f, k));
      const Eigen::Vector3d q = mesh.vertices.row(mesh.faces(f, (k + 1) % 3));
      const Eigen::Vector3d r = mesh.vertices.row(mesh.faces(f, (k + 2) % 3));
      const Eigen::Vector3d u = q - p, v = r - p;
      const double denom = u.norm() * v.norm();
      if (denom == 0.0) {
        min_angle = 0.0;
        continue;
      }
      min_angle = std::min(min_angle, std::acos(std::clamp(u.dot(v) / denom, -1.0, 1.0)));
    }
  }
  report.min_angle = min_angle;
  return report;
}

TriMesh scale(const TriMesh& mesh, double k) {
  if (!(k > 0.0)) throw std::invalid_argument("scale factor must be positive");
  return TriMesh{mesh.vertices * k, mesh.faces};
}

TriMesh subdivide_midpoint(const TriMesh& mesh) {
  require_valid_structure(mesh);

  std::map<std::pair<int, int>, int> midpoint;  // undirected edge -> new vertex
  std::vector<Eigen::Vector3d> new_vertices;
  for (Eigen::Index v = 0; v < mesh.vertex_count(); ++v) new_vertices.push_back(mesh.vertices.row(v));

  auto midpoint_of = [&](int a, int b) {
    const auto key = edge_key(a, b);
    auto it = midpoint.find(key);
    if (it != midpoint.end()) return it->second;
    const int idx = static_cast<int>(new_vertices.size());
    new_vertices.push_back(0.5 * (mesh.vertices.row(a) + mesh.vertices.row(b)));
    midpoint.emplace(key, idx);
    return idx;
  };

  Eigen::MatrixX3i faces(4 * mesh.face_count(), 3);
  for (Eigen::Index f = 0; f < mesh.face_count(); ++f) {
    const int a = mesh.faces(f, 0), b = mesh.faces(f, 1), c = mesh.faces(f, 2);
    const int mab = midpoint_of(a, b), mbc = midpoint_of(b, c), mca = midpoint_of(c, a);
    faces.row(4 * f + 0) << a, mab, mca;
    faces.row(4 * f + 1) << mab, b, mbc;
    faces.row(4 * f + 2) << mca, mbc, c;
    faces.row(4 * f + 3) << mab, mbc, mca;
  }

  TriMesh out;
  out.vertices.resize(new_vertices.size(), 3);
  for (size_t v = 0; v < new_vertices.size(); ++v) out.vertices.row(v) = new_vertices[v];
  out.faces = std::move(faces);
  return out;
}

TriMesh bisect_edges(const TriMesh& mesh, const std::vector<std::pair<int, int>>& edges) {
  require_valid_structure(mesh);

  // Normalize, deduplicate, and process in a fixed order.
  std::set<std::pair<int, int>> pending;
  for (const auto& [a, b] : edges) {
    if (a == b) throw std::invalid_argument("degenerate edge request");
    pending.insert(edge_key(a, b));
  }

  std::vector<Eigen::Vector3d> verts;
  for (Eigen::Index v = 0; v < mesh.vertex_count(); ++v) verts.push_back(mesh.vertices.row(v));
  std::vector<std::array<int, 3>> faces;
  for (Eigen::Index f = 0; f < mesh.face_count(); ++f)
    faces.push_back({mesh.faces(f, 0), mesh.faces(f, 1), mesh.faces(f, 2)});

  for (const auto& [u, v] : pending) {
    if (u < 0 || v < 0 || u >= static_cast<int>(mesh.vertex_count()) || v >= static_cast<int>(mesh.vertex_count())) {
      std::ostringstream msg;
      msg << "unknown edge (" << u << ", " << v << ")";
      throw std::invalid_argument(msg.str());
    }
    const int m = static_cast<int>(verts.size());
    bool found = false;
    std::vector<std::array<int, 3>> appended;
    for (auto& face : faces) {
      for (int k = 0; k < 3; ++k) {
        const int a = face[k], b = face[(k + 1) % 3], c = face[(k + 2) % 3];
        if (edge_key(a, b) == std::make_pair(std::min(u, v), std::max(u, v))) {
          // (a, b, c) -> (a, m, c) + (m, b, c); orientation preserved.
          face = {a, m, c};
          appended.push_back({m, b, c});
          found = true;
          break;
        }
      }
    }
    if (!found) {
      std::ostringstream msg;
      msg << "unknown edge (" << u << ", " << v << ")";
      throw std::invalid_argument(msg.str());
    }
    verts.push_back(0.5 * (verts[u] + verts[v]));
    faces.insert(faces.end(), appended.begin(), appended.end());
  }

  TriMesh out;
  out.vertices.resize(verts.size(), 3);
  for (size_t i = 0; i < verts.size(); ++i) out.vertices.row(i) = verts[i];
  out.faces.resize(faces.size(), 3);
  for (size_t i = 0; i < faces.size(); ++i) out.faces.row(i) << faces[i][0], faces[i][1], faces[i][2];
  return out;
}

}  // namespace matnoise
