#pragma once

// ASCII OBJ input (the `v`/`f` subset), ASCII OBJ/PLY output.
//
// PLY files carry the geometry as double-precision x/y/z plus one
// `property double` per named vertex field, so saved noise samples round-trip
// losslessly through load_ply.

#include <Eigen/Core>
#include <map>
#include <string>

#include "matnoise/mesh.hpp"

namespace matnoise {

using FieldMap = std::map<std::string, Eigen::VectorXd>;

// Reads `v x y z` and triangular `f i j k` lines (1-based indices, optional
// `/...` suffixes ignored); every other line is skipped. Throws IoError with
// the offending line number for malformed lines, non-triangle faces, and
// out-of-range indices.
TriMesh load_obj(const std::string& path);

void save_obj(const TriMesh& mesh, const std::string& path);

// ASCII PLY with element vertex {x, y, z, <fields>...} and element face
// index lists. Field vectors must have one entry per vertex.
void save_ply(const TriMesh& mesh, const FieldMap& fields, const std::string& path);

// Reads the ASCII PLY subset written by save_ply (tolerates float32 vertex
// properties). Extra vertex properties are returned through `fields`.
TriMesh load_ply(const std::string& path, FieldMap* fields = nullptr);

}  // namespace matnoise
