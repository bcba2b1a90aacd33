#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <string>

#include "matnoise/mesh.hpp"

namespace test_helpers {

inline std::filesystem::path temp_dir() {
  const auto dir = std::filesystem::temp_directory_path() / "matnoise_tests";
  std::filesystem::create_directories(dir);
  return dir;
}

inline std::string write_temp_file(const std::string& name, const std::string& contents) {
  const auto path = temp_dir() / name;
  std::ofstream file(path);
  file << contents;
  return path.string();
}

// Closest-point distance from p to triangle (a, b, c), Ericson-style.
inline double point_triangle_distance(const Eigen::Vector3d& p, const Eigen::Vector3d& a,
                                      const Eigen::Vector3d& b, const Eigen::Vector3d& c) {
  const Eigen::Vector3d ab = b - a, ac = c - a, ap = p - a;
  const double d1 = ab.dot(ap), d2 = ac.dot(ap);
  if (d1 <= 0.0 && d2 <= 0.0) return (p - a).norm();

  const Eigen::Vector3d bp = p - b;
  const double d3 = ab.dot(bp), d4 = ac.dot(bp);
  if (d3 >= 0.0 && d4 <= d3) return (p - b).norm();

  const double vc = d1 * d4 - d3 * d2;
  if (vc <= 0.0 && d1 >= 0.0 && d3 <= 0.0) return (p - (a + (d1 / (d1 - d3)) * ab)).norm();

  const Eigen::Vector3d cp = p - c;
  const double d5 = ab.dot(cp), d6 = ac.dot(cp);
  if (d6 >= 0.0 && d5 <= d6) return (p - c).norm();

  const double vb = d5 * d2 - d1 * d6;
  if (vb <= 0.0 && d2 >= 0.0 && d6 <= 0.0) return (p - (a + (d2 / (d2 - d6)) * ac)).norm();

  const double va = d3 * d6 - d5 * d4;
  if (va <= 0.0 && (d4 - d3) >= 0.0 && (d5 - d6) >= 0.0) {
    const double w = (d4 - d3) / ((d4 - d3) + (d5 - d6));
    return (p - (b + w * (c - b))).norm();
  }

  const double denom = 1.0 / (va + vb + vc);
  const Eigen::Vector3d closest = a + ab * (vb * denom) + ac * (vc * denom);
  return (p - closest).norm();
}

inline double distance_to_surface(const Eigen::Vector3d& p, const matnoise::TriMesh& mesh) {
  double best = std::numeric_limits<double>::infinity();
  for (Eigen::Index f = 0; f < mesh.face_count(); ++f) {
    best = std::min(best, point_triangle_distance(p, mesh.vertices.row(mesh.faces(f, 0)),
                                                  mesh.vertices.row(mesh.faces(f, 1)),
                                                  mesh.vertices.row(mesh.faces(f, 2))));
  }
  return best;
}

}  // namespace test_helpers
