#include "tetimp/tetgen_io.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "tetimp/errors.hpp"

namespace tetimp {

namespace {

// Pulls the next line with content: comments (# to end of line) are
// stripped, blank lines skipped. Returns false at end of file.
bool next_tokens(std::istream& in, long& line_no, std::vector<std::string>& out) {
  std::string line;
  while (std::getline(in, line)) {
    ++line_no;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ss(line);
    out.clear();
    std::string tok;
    while (ss >> tok) out.push_back(tok);
    if (!out.empty()) return true;
  }
  return false;
}

long to_long(const std::string& tok, const std::string& file, long line) {
  size_t pos = 0;
  long val = 0;
  try {
    val = std::stol(tok, &pos);
  } catch (const std::exception&) {
    throw ParseError(file, line, "expected an integer, got '" + tok + "'");
  }
  if (pos != tok.size())
    throw ParseError(file, line, "expected an integer, got '" + tok + "'");
  return val;
}

double to_double(const std::string& tok, const std::string& file, long line) {
  size_t pos = 0;
  double val = 0;
  try {
    val = std::stod(tok, &pos);
  } catch (const std::exception&) {
    throw ParseError(file, line, "expected a number, got '" + tok + "'");
  }
  if (pos != tok.size())
    throw ParseError(file, line, "expected a number, got '" + tok + "'");
  return val;
}

std::string strip_extension(const std::string& base) {
  std::filesystem::path p(base);
  if (p.extension() == ".node" || p.extension() == ".ele" ||
      p.extension() == ".face")
    p.replace_extension();
  return p.string();
}

void read_node(const std::string& file, TetGenMesh& mesh) {
  std::ifstream in(file);
  if (!in) throw IoError("cannot open " + file);
  long line_no = 0;
  std::vector<std::string> tok;

  if (!next_tokens(in, line_no, tok))
    throw ParseError(file, line_no, "missing point header");
  if (tok.size() < 2)
    throw ParseError(file, line_no, "point header needs a count and dimension");
  long n = to_long(tok[0], file, line_no);
  long dim = to_long(tok[1], file, line_no);
  if (n < 0) throw ParseError(file, line_no, "negative point count");
  if (dim != 3) throw ParseError(file, line_no, "dimension must be 3");
  long n_attr = tok.size() > 2 ? to_long(tok[2], file, line_no) : 0;
  long n_mark = tok.size() > 3 ? to_long(tok[3], file, line_no) : 0;
  if (n_attr < 0 || n_mark < 0 || n_mark > 1)
    throw ParseError(file, line_no, "bad attribute or marker count");

  mesh.attr_count = static_cast<int>(n_attr);
  mesh.points.reserve(n);
  bool base_known = false;
  for (long i = 0; i < n; ++i) {
    if (!next_tokens(in, line_no, tok))
      throw CountMismatch(file, line_no,
                          "expected " + std::to_string(n) + " points, got " +
                              std::to_string(i));
    size_t need = 4 + n_attr + n_mark;
    if (tok.size() != need)
      throw ParseError(file, line_no,
                       "expected " + std::to_string(need) + " fields, got " +
                           std::to_string(tok.size()));
    long idx = to_long(tok[0], file, line_no);
    if (!base_known) {
      if (idx != 0 && idx != 1)
        throw IndexError(file, line_no, "first point index must be 0 or 1");
      mesh.first_index = static_cast<int>(idx);
      base_known = true;
    }
    if (idx != mesh.first_index + i)
      throw IndexError(file, line_no, "points must be numbered consecutively");
    mesh.points.emplace_back(to_double(tok[1], file, line_no),
                             to_double(tok[2], file, line_no),
                             to_double(tok[3], file, line_no));
    for (long a = 0; a < n_attr; ++a)
      mesh.point_attrs.push_back(to_double(tok[4 + a], file, line_no));
    if (n_mark)
      mesh.point_markers.push_back(
          static_cast<int>(to_long(tok[4 + n_attr], file, line_no)));
  }
}

void read_ele(const std::string& file, TetGenMesh& mesh) {
  std::ifstream in(file);
  if (!in) throw IoError("cannot open " + file);
  long line_no = 0;
  std::vector<std::string> tok;

  if (!next_tokens(in, line_no, tok))
    throw ParseError(file, line_no, "missing element header");
  long m = to_long(tok[0], file, line_no);
  long per = tok.size() > 1 ? to_long(tok[1], file, line_no) : 4;
  long n_attr = tok.size() > 2 ? to_long(tok[2], file, line_no) : 0;
  if (m < 0) throw ParseError(file, line_no, "negative element count");
  if (per != 4)
    throw ParseError(file, line_no, "only 4-node tetrahedra are supported");

  long n_pts = static_cast<long>(mesh.points.size());
  mesh.cells.reserve(m);
  for (long i = 0; i < m; ++i) {
    if (!next_tokens(in, line_no, tok))
      throw CountMismatch(file, line_no,
                          "expected " + std::to_string(m) + " elements, got " +
                              std::to_string(i));
    if (static_cast<long>(tok.size()) != 5 + n_attr)
      throw ParseError(file, line_no,
                       "expected " + std::to_string(5 + n_attr) +
                           " fields, got " + std::to_string(tok.size()));
    long idx = to_long(tok[0], file, line_no);
    if (idx != mesh.first_index + i)
      throw IndexError(file, line_no,
                       "elements must be numbered consecutively");
    std::array<int, 4> cell;
    for (int k = 0; k < 4; ++k) {
      long v = to_long(tok[1 + k], file, line_no) - mesh.first_index;
      if (v < 0 || v >= n_pts)
        throw IndexError(file, line_no,
                         "point index " + tok[1 + k] + " out of range");
      cell[k] = static_cast<int>(v);
    }
    mesh.cells.push_back(cell);
  }
}

void read_face(const std::string& file, TetGenMesh& mesh) {
  std::ifstream in(file);
  if (!in) throw IoError("cannot open " + file);
  long line_no = 0;
  std::vector<std::string> tok;

  if (!next_tokens(in, line_no, tok))
    throw ParseError(file, line_no, "missing face header");
  long f = to_long(tok[0], file, line_no);
  long n_mark = tok.size() > 1 ? to_long(tok[1], file, line_no) : 0;
  if (f < 0) throw ParseError(file, line_no, "negative face count");
  if (n_mark < 0 || n_mark > 1)
    throw ParseError(file, line_no, "bad marker count");

  long n_pts = static_cast<long>(mesh.points.size());
  mesh.faces.reserve(f);
  for (long i = 0; i < f; ++i) {
    if (!next_tokens(in, line_no, tok))
      throw CountMismatch(file, line_no,
                          "expected " + std::to_string(f) + " faces, got " +
                              std::to_string(i));
    if (static_cast<long>(tok.size()) != 4 + n_mark)
      throw ParseError(file, line_no,
                       "expected " + std::to_string(4 + n_mark) +
                           " fields, got " + std::to_string(tok.size()));
    long idx = to_long(tok[0], file, line_no);
    if (idx != mesh.first_index + i)
      throw IndexError(file, line_no, "faces must be numbered consecutively");
    std::array<int, 3> face;
    for (int k = 0; k < 3; ++k) {
      long v = to_long(tok[1 + k], file, line_no) - mesh.first_index;
      if (v < 0 || v >= n_pts)
        throw IndexError(file, line_no,
                         "point index " + tok[1 + k] + " out of range");
      face[k] = static_cast<int>(v);
    }
    mesh.faces.push_back(face);
    if (n_mark)
      mesh.face_markers.push_back(
          static_cast<int>(to_long(tok[4], file, line_no)));
  }
}

} // namespace

TetGenMesh read_tetgen(const std::string& base) {
  std::string stem = strip_extension(base);
  TetGenMesh mesh;
  read_node(stem + ".node", mesh);
  read_ele(stem + ".ele", mesh);
  if (std::filesystem::exists(stem + ".face")) read_face(stem + ".face", mesh);
  return mesh;
}

void write_tetgen(const std::string& base, const TetGenMesh& mesh) {
  std::string stem = strip_extension(base);
  int fi = mesh.first_index;
  char buf[64];

  {
    std::ofstream out(stem + ".node");
    if (!out) throw IoError("cannot write " + stem + ".node");
    int n_mark = mesh.point_markers.empty() ? 0 : 1;
    out << mesh.points.size() << " 3 " << mesh.attr_count << ' ' << n_mark
        << '\n';
    for (size_t i = 0; i < mesh.points.size(); ++i) {
      out << fi + i;
      for (int k = 0; k < 3; ++k) {
        std::snprintf(buf, sizeof buf, " %.17g", mesh.points[i][k]);
        out << buf;
      }
      for (int a = 0; a < mesh.attr_count; ++a) {
        std::snprintf(buf, sizeof buf, " %.17g",
                      mesh.point_attrs[i * mesh.attr_count + a]);
        out << buf;
      }
      if (n_mark) out << ' ' << mesh.point_markers[i];
      out << '\n';
    }
  }
  {
    std::ofstream out(stem + ".ele");
    if (!out) throw IoError("cannot write " + stem + ".ele");
    out << mesh.cells.size() << " 4 0\n";
    for (size_t i = 0; i < mesh.cells.size(); ++i) {
      const auto& c = mesh.cells[i];
      out << fi + i << ' ' << c[0] + fi << ' ' << c[1] + fi << ' '
          << c[2] + fi << ' ' << c[3] + fi << '\n';
    }
  }
  if (!mesh.faces.empty()) {
    std::ofstream out(stem + ".face");
    if (!out) throw IoError("cannot write " + stem + ".face");
    int n_mark = mesh.face_markers.empty() ? 0 : 1;
    out << mesh.faces.size() << ' ' << n_mark << '\n';
    for (size_t i = 0; i < mesh.faces.size(); ++i) {
      const auto& f = mesh.faces[i];
      out << fi + i << ' ' << f[0] + fi << ' ' << f[1] + fi << ' '
          << f[2] + fi;
      if (n_mark) out << ' ' << mesh.face_markers[i];
      out << '\n';
    }
  }
}

TetMesh to_tet_mesh(const TetGenMesh& in) {
  return TetMesh::build(in.points, in.cells);
}

TetGenMesh from_tet_mesh(const TetMesh& mesh, int first_index) {
  TetGenMesh out;
  out.first_index = first_index;
  out.points.reserve(mesh.vertex_count());
  for (int v = 0; v < mesh.vertex_count(); ++v) out.points.push_back(mesh.vertex(v));
  for (int t : mesh.live_tets()) out.cells.push_back(mesh.tet(t));
  for (auto [t, lf] : mesh.boundary_faces()) {
    const auto& c = mesh.tet(t);
    out.faces.push_back({c[kFaceCorners[lf][0]], c[kFaceCorners[lf][1]],
                         c[kFaceCorners[lf][2]]});
  }
  return out;
}

} // namespace tetimp
