#include "matnoise/mesh_io.hpp"

#include <cctype>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <vector>

#include "matnoise/exceptions.hpp"

namespace matnoise {

namespace {

[[noreturn]] void fail_line(const std::string& path, int line, const std::string& what) {
  std::ostringstream msg;
  msg << path << ":" << line << ": " << what;
  throw IoError(msg.str());
}

bool parse_double(const std::string& token, double& out) {
  try {
    size_t used = 0;
    out = std::stod(token, &used);
    return used == token.size();
  } catch (const std::exception&) {
    return false;
  }
}

// OBJ face token: index with optional /texture/normal suffixes.
bool parse_face_index(const std::string& token, long& out) {
  const std::string head = token.substr(0, token.find('/'));
  try {
    size_t used = 0;
    out = std::stol(head, &used);
    return used == head.size() && !head.empty();
  } catch (const std::exception&) {
    return false;
  }
}

std::vector<std::string> split_ws(const std::string& line) {
  std::vector<std::string> tokens;
  std::istringstream stream(line);
  std::string token;
  while (stream >> token) tokens.push_back(token);
  return tokens;
}

}  // namespace

TriMesh load_obj(const std::string& path) {
  std::ifstream file(path);
  if (!file) throw IoError("cannot open mesh file: " + path);

  std::vector<Eigen::Vector3d> verts;
  std::vector<std::array<int, 3>> faces;
  std::vector<int> face_lines;

  std::string line;
  int line_no = 0;
  while (std::getline(file, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto tokens = split_ws(line);
    if (tokens.empty()) continue;
    if (tokens[0] == "v") {
      if (tokens.size() != 4) fail_line(path, line_no, "vertex line must have exactly 3 coordinates");
      Eigen::Vector3d p;
      for (int k = 0; k < 3; ++k)
        if (!parse_double(tokens[k + 1], p[k])) fail_line(path, line_no, "malformed vertex coordinate '" + tokens[k + 1] + "'");
      verts.push_back(p);
    } else if (tokens[0] == "f") {
      if (tokens.size() > 4) fail_line(path, line_no, "only triangle faces are supported");
      if (tokens.size() < 4) fail_line(path, line_no, "face line needs 3 vertex indices");
      std::array<int, 3> face{};
      for (int k = 0; k < 3; ++k) {
        long idx = 0;
        if (!parse_face_index(tokens[k + 1], idx)) fail_line(path, line_no, "malformed face index '" + tokens[k + 1] + "'");
        if (idx < 1) fail_line(path, line_no, "face index out of range (OBJ indices are 1-based)");
        face[k] = static_cast<int>(idx - 1);
      }
      faces.push_back(face);
      face_lines.push_back(line_no);
    }
    // Everything else (vn, vt, comments, groups, ...) is ignored.
  }

  for (size_t f = 0; f < faces.size(); ++f)
    for (int k = 0; k < 3; ++k)
      if (faces[f][k] >= static_cast<int>(verts.size()))
        fail_line(path, face_lines[f], "face index out of range");

  TriMesh mesh;
  mesh.vertices.resize(verts.size(), 3);
  for (size_t v = 0; v < verts.size(); ++v) mesh.vertices.row(v) = verts[v];
  mesh.faces.resize(faces.size(), 3);
  for (size_t f = 0; f < faces.size(); ++f) mesh.faces.row(f) << faces[f][0], faces[f][1], faces[f][2];
  require_valid_structure(mesh);
  return mesh;
}

void save_obj(const TriMesh& mesh, const std::string& path) {
  std::ofstream file(path);
  if (!file) throw IoError("cannot write mesh file: " + path);
  file << std::setprecision(17);
  for (Eigen::Index v = 0; v < mesh.vertex_count(); ++v)
    file << "v " << mesh.vertices(v, 0) << " " << mesh.vertices(v, 1) << " " << mesh.vertices(v, 2) << "\n";
  for (Eigen::Index f = 0; f < mesh.face_count(); ++f)
    file << "f " << mesh.faces(f, 0) + 1 << " " << mesh.faces(f, 1) + 1 << " " << mesh.faces(f, 2) + 1 << "\n";
  if (!file) throw IoError("write failed: " + path);
}

void save_ply(const TriMesh& mesh, const FieldMap& fields, const std::string& path) {
  for (const auto& [name, values] : fields)
    if (values.size() != mesh.vertex_count()) {
      std::ostringstream msg;
      msg << "field '" << name << "' has " << values.size() << " values for " << mesh.vertex_count() << " vertices";
      throw std::invalid_argument(msg.str());
    }

  std::ofstream file(path);
  if (!file) throw IoError("cannot write mesh file: " + path);
  file << "ply\nformat ascii 1.0\n";
  file << "element vertex " << mesh.vertex_count() << "\n";
  file << "property double x\nproperty double y\nproperty double z\n";
  for (const auto& [name, values] : fields) file << "property double " << name << "\n";
  file << "element face " << mesh.face_count() << "\n";
  file << "property list uchar int vertex_indices\n";
  file << "end_header\n";

  file << std::setprecision(17);
  for (Eigen::Index v = 0; v < mesh.vertex_count(); ++v) {
    file << mesh.vertices(v, 0) << " " << mesh.vertices(v, 1) << " " << mesh.vertices(v, 2);
    for (const auto& [name, values] : fields) file << " " << values[v];
    file << "\n";
  }
  for (Eigen::Index f = 0; f < mesh.face_count(); ++f)
    file << "3 " << mesh.faces(f, 0) << " " << mesh.faces(f, 1) << " " << mesh.faces(f, 2) << "\n";
  if (!file) throw IoError("write failed: " + path);
}

TriMesh load_ply(const std::string& path, FieldMap* fields) {
  std::ifstream file(path);
  if (!file) throw IoError("cannot open mesh file: " + path);

  std::string line;
  int line_no = 0;
  auto next_line = [&](const char* context) {
    if (!std::getline(file, line)) fail_line(path, line_no, std::string("unexpected end of file in ") + context);
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
  };

  next_line("header");
  if (line != "ply") fail_line(path, line_no, "not a PLY file");

  long n_vertices = -1, n_faces = -1;
  std::vector<std::string> vertex_properties;
  std::string current_element;
  bool ascii = false;
  while (true) {
    next_line("header");
    const auto tokens = split_ws(line);
    if (tokens.empty()) continue;
    if (tokens[0] == "comment") continue;
    if (tokens[0] == "format") {
      ascii = tokens.size() >= 2 && tokens[1] == "ascii";
    } else if (tokens[0] == "element" && tokens.size() == 3) {
      current_element = tokens[1];
      if (tokens[1] == "vertex") n_vertices = std::stol(tokens[2]);
      if (tokens[1] == "face") n_faces = std::stol(tokens[2]);
    } else if (tokens[0] == "property" && current_element == "vertex") {
      if (tokens.size() != 3 || (tokens[1] != "double" && tokens[1] != "float" && tokens[1] != "float32" && tokens[1] != "float64"))
        fail_line(path, line_no, "unsupported vertex property");
      vertex_properties.push_back(tokens[2]);
    } else if (tokens[0] == "end_header") {
      break;
    }
  }
  if (!ascii) fail_line(path, line_no, "only ASCII PLY is supported");
  if (n_vertices < 0 || n_faces < 0) fail_line(path, line_no, "missing vertex or face element");
  if (vertex_properties.size() < 3 || vertex_properties[0] != "x" || vertex_properties[1] != "y" || vertex_properties[2] != "z")
    fail_line(path, line_no, "vertex element must start with x y z");

  TriMesh mesh;
  mesh.vertices.resize(n_vertices, 3);
  Eigen::MatrixXd extra(n_vertices, static_cast<Eigen::Index>(vertex_properties.size()) - 3);
  for (long v = 0; v < n_vertices; ++v) {
    next_line("vertex data");
    const auto tokens = split_ws(line);
    if (tokens.size() != vertex_properties.size()) fail_line(path, line_no, "wrong number of vertex values");
    for (size_t k = 0; k < tokens.size(); ++k) {
      double value = 0.0;
      if (!parse_double(tokens[k], value)) fail_line(path, line_no, "malformed number '" + tokens[k] + "'");
      if (k < 3)
        mesh.vertices(v, static_cast<Eigen::Index>(k)) = value;
      else
        extra(v, static_cast<Eigen::Index>(k) - 3) = value;
    }
  }
  mesh.faces.resize(n_faces, 3);
  for (long f = 0; f < n_faces; ++f) {
    next_line("face data");
    const auto tokens = split_ws(line);
    if (tokens.size() != 4 || tokens[0] != "3") fail_line(path, line_no, "only triangle faces are supported");
    for (int k = 0; k < 3; ++k) mesh.faces(f, k) = std::stoi(tokens[k + 1]);
  }
  require_valid_structure(mesh);

  if (fields) {
    fields->clear();
    for (size_t k = 3; k < vertex_properties.size(); ++k)
      (*fields)[vertex_properties[k]] = extra.col(static_cast<Eigen::Index>(k) - 3);
  }
  return mesh;
}

}  // namespace matnoise
