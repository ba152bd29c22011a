#ifndef VEXLAB_MESH_IO_HPP
#define VEXLAB_MESH_IO_HPP

#include <fstream>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "vexlab/core.hpp"
#include "vexlab/mesh.hpp"

namespace vexlab {

// Text mesh format:
//   N nodes cells facets
//   id x [y]            (one line per node)
//   id n1 n2 [n3]       (one line per cell)
//   id n1 [n2] nx [ny]  (one line per boundary facet, outward unit normal)
// Lines starting with '#' are comments. Ids are 0-based and must be dense.

namespace detail {

inline bool next_data_line(std::istream& in, std::istringstream& line) {
  std::string s;
  while (std::getline(in, s)) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos || s[first] == '#') continue;
    line.clear();
    line.str(s);
    return true;
  }
  return false;
}

[[noreturn]] inline void mesh_parse_error(const std::string& what) {
  throw Error(ErrorCode::IoError, "mesh file: " + what);
}

}  // namespace detail

inline void write_mesh(std::ostream& out, const Mesh& mesh) {
  const int n = mesh.dim();
  out << std::setprecision(17);
  out << n << ' ' << mesh.num_nodes() << ' ' << mesh.num_cells() << ' ' << mesh.boundary_facets().size() << '\n';
  for (std::size_t i = 0; i < mesh.num_nodes(); ++i) {
    out << i << ' ' << mesh.node(i)[0];
    if (n == 2) out << ' ' << mesh.node(i)[1];
    out << '\n';
  }
  for (std::size_t c = 0; c < mesh.num_cells(); ++c) {
    out << c;
    for (std::size_t k = 0; k < mesh.nodes_per_cell(); ++k) out << ' ' << mesh.cell(c)[k];
    out << '\n';
  }
  for (std::size_t f = 0; f < mesh.boundary_facets().size(); ++f) {
    const auto& fa = mesh.boundary_facets()[f];
    out << f << ' ' << fa.nodes[0];
    if (n == 2) out << ' ' << fa.nodes[1];
    out << ' ' << fa.normal[0];
    if (n == 2) out << ' ' << fa.normal[1];
    out << '\n';
  }
}

inline Mesh read_mesh(std::istream& in) {
  std::istringstream line;
  if (!detail::next_data_line(in, line)) detail::mesh_parse_error("missing header");
  int dim = 0;
  std::size_t nn = 0, nc = 0, nf = 0;
  if (!(line >> dim >> nn >> nc >> nf)) detail::mesh_parse_error("bad header");
  if (dim != 1 && dim != 2) detail::mesh_parse_error("dimension must be 1 or 2");
  std::vector<Point> nodes(nn);
  for (std::size_t i = 0; i < nn; ++i) {
    std::size_t id = 0;
    Point p{0.0, 0.0};
    if (!detail::next_data_line(in, line) || !(line >> id >> p[0]) || (dim == 2 && !(line >> p[1])) || id != i)
      detail::mesh_parse_error("bad node line " + std::to_string(i));
    nodes[i] = p;
  }
  std::vector<Mesh::Cell> cells(nc);
  for (std::size_t c = 0; c < nc; ++c) {
    std::size_t id = 0;
    Mesh::Cell cell{0, 0, 0};
    if (!detail::next_data_line(in, line) || !(line >> id >> cell[0] >> cell[1]) || (dim == 2 && !(line >> cell[2])) ||
        id != c)
      detail::mesh_parse_error("bad cell line " + std::to_string(c));
    cells[c] = cell;
  }
  std::vector<BoundaryFacet> facets(nf);
  for (std::size_t f = 0; f < nf; ++f) {
    std::size_t id = 0;
    BoundaryFacet fa;
    fa.node_count = dim;
    bool ok = detail::next_data_line(in, line) && static_cast<bool>(line >> id >> fa.nodes[0]);
    if (ok && dim == 2) ok = static_cast<bool>(line >> fa.nodes[1]);
    if (ok) ok = static_cast<bool>(line >> fa.normal[0]);
    if (ok && dim == 2) ok = static_cast<bool>(line >> fa.normal[1]);
    if (!ok || id != f) detail::mesh_parse_error("bad facet line " + std::to_string(f));
    if (dim == 1) fa.nodes[1] = fa.nodes[0];
    facets[f] = fa;
  }
  return Mesh(dim, std::move(nodes), std::move(cells), std::move(facets));
}

inline Mesh read_mesh_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open mesh file " + path);
  return read_mesh(in);
}

/// Nodal table appended after a mesh: "values <count>" then "id value" lines.
inline std::vector<double> read_nodal_values(std::istream& in, std::size_t expected) {
  std::istringstream line;
  std::string tag;
  std::size_t count = 0;
  if (!detail::next_data_line(in, line) || !(line >> tag >> count) || tag != "values" || count != expected)
    throw Error(ErrorCode::IoError, "expected 'values " + std::to_string(expected) + "'");
  std::vector<double> v(count);
  for (std::size_t i = 0; i < count; ++i) {
    std::size_t id = 0;
    if (!detail::next_data_line(in, line) || !(line >> id >> v[i]) || id != i)
      throw Error(ErrorCode::IoError, "bad value line " + std::to_string(i));
  }
  return v;
}

inline void write_nodal_values(std::ostream& out, const std::vector<double>& values) {
  out << std::setprecision(17) << "values " << values.size() << '\n';
  for (std::size_t i = 0; i < values.size(); ++i) out << i << ' ' << values[i] << '\n';
}

}  // namespace vexlab

#endif  // VEXLAB_MESH_IO_HPP
