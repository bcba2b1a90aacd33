#pragma once

// Procedural test meshes: a unit square split along its diagonal, a regular
// grid of the unit square, the regular icosahedron, and icospheres obtained
// by midpoint subdivision with reprojection onto the unit sphere.

#include "matnoise/mesh.hpp"

namespace matnoise {

// Vertices (0,0,0), (1,0,0), (1,1,0), (0,1,0); faces (0,1,2), (0,2,3).
TriMesh make_unit_square();

// (nx+1) x (ny+1) vertices on [0,1]^2, each cell split along one diagonal.
TriMesh make_grid(int nx, int ny);

// Regular icosahedron inscribed in the unit sphere; 12 vertices, 20 faces.
TriMesh make_icosahedron();

// `level` rounds of 1->4 subdivision of the icosahedron, vertices reprojected
// to the unit sphere after each round. level 3 gives 642 vertices.
TriMesh make_icosphere(int level);

}  // namespace matnoise
