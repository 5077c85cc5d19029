/*
  This file is part of fsi-resolvent, a mixed finite element solver for a
  Stokes fluid coupled to a clamped plate.

  Licensed under the Apache License, Version 2.0 (the "License"); you may
  not use this file except in compliance with the License.  You may obtain
  a copy of the License at

  http://www.apache.org/licenses/LICENSE-2.0
*/

#include "fsi/vtk.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

#include "fsi/error.hpp"

namespace fsi {
namespace {

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out.precision(12);
  return out;
}

void finish(std::ofstream& out, const std::string& path) {
  out.flush();
  if (!out) throw IoError("write to '" + path + "' failed");
}

template <class Points>
void write_points(std::ofstream& out, const Points& pts, int dim) {
  out << "POINTS " << pts.size() << " double\n";
  for (const auto& p : pts) out << p[0] << ' ' << p[1] << ' ' << (dim == 3 ? p[2] : 0.0) << '\n';
}

template <class Cells>
void write_cells(std::ofstream& out, const Cells& cells, int type) {
  const std::size_t k = cells.empty() ? 0 : cells[0].size();
  out << "CELLS " << cells.size() << ' ' << cells.size() * (k + 1) << '\n';
  for (const auto& c : cells) {
    out << k;
    for (auto v : c) out << ' ' << v;
    out << '\n';
  }
  out << "CELL_TYPES " << cells.size() << '\n';
  for (std::size_t i = 0; i < cells.size(); ++i) out << type << '\n';
}

void header(std::ofstream& out, const std::string& title) {
  out << "# vtk DataFile Version 3.0\n" << title << "\nASCII\nDATASET UNSTRUCTURED_GRID\n";
}

}  // namespace

void write_vtk_mesh(const std::string& path, const Mesh2& mesh) {
  auto out = open_out(path);
  header(out, "square mesh level " + std::to_string(mesh.level()));
  write_points(out, mesh.vertices(), 2);
  write_cells(out, mesh.triangles(), 5);
  finish(out, path);
}

void write_vtk_mesh(const std::string& path, const Mesh3& mesh) {
  auto out = open_out(path);
  header(out, "cube mesh level " + std::to_string(mesh.level()));
  write_points(out, mesh.vertices(), 3);
  write_cells(out, mesh.tets(), 10);
  finish(out, path);
}

void write_vtk_fluid(const std::string& path, const FluidField& u, const PressureField& p) {
  const Mesh3& mesh = u.space().mesh();
  auto out = open_out(path);
  header(out, "fluid velocity and pressure");
  write_points(out, mesh.vertices(), 3);
  write_cells(out, mesh.tets(), 10);
  out << "POINT_DATA " << mesh.num_vertices() << "\nVECTORS velocity double\n";
  for (Index v = 0; v < mesh.num_vertices(); ++v) {
    const Eigen::Vector3d x = u.node_value(v);
    out << x.x() << ' ' << x.y() << ' ' << x.z() << '\n';
  }
  out << "SCALARS pressure double 1\nLOOKUP_TABLE default\n";
  for (double c : p.coeffs()) out << c << '\n';
  finish(out, path);
}

void write_vtk_plate(const std::string& path, const PlateField& w, const std::string& name) {
  const Mesh2& mesh = w.space().mesh();
  auto out = open_out(path);
  header(out, "plate field " + name);
  write_points(out, mesh.vertices(), 2);
  write_cells(out, mesh.triangles(), 5);
  out << "POINT_DATA " << mesh.num_vertices() << "\nSCALARS " << name << " double 1\nLOOKUP_TABLE default\n";
  for (Index v = 0; v < mesh.num_vertices(); ++v) out << w.coeffs()[6 * v] << '\n';
  finish(out, path);
}

VtkCheck validate_vtk(const std::string& path) {
  VtkCheck r;
  std::ifstream in(path);
  if (!in) {
    r.message = "cannot open file";
    return r;
  }
  std::string line;
  std::getline(in, line);
  if (line.rfind("# vtk DataFile Version", 0) != 0) {
    r.message = "missing vtk header";
    return r;
  }
  std::getline(in, line);  // title
  std::getline(in, line);
  if (line != "ASCII") {
    r.message = "only ASCII files are supported";
    return r;
  }
  std::string word;
  in >> word;
  std::string kind;
  in >> kind;
  if (word != "DATASET" || kind != "UNSTRUCTURED_GRID") {
    r.message = "dataset is not an unstructured grid";
    return r;
  }
  std::string type;
  in >> word >> r.points >> type;
  if (word != "POINTS" || r.points <= 0) {
    r.message = "bad POINTS section";
    return r;
  }
  for (long i = 0; i < 3 * r.points; ++i) {
    double x;
    if (!(in >> x)) {
      r.message = "truncated point coordinates";
      return r;
    }
  }
  long size = 0;
  in >> word >> r.cells >> size;
  if (word != "CELLS" || r.cells <= 0) {
    r.message = "bad CELLS section";
    return r;
  }
  std::vector<int> counts(r.cells);
  long consumed = 0;
  for (long c = 0; c < r.cells; ++c) {
    int k = 0;
    if (!(in >> k) || k <= 0) {
      r.message = "bad cell record";
      return r;
    }
    counts[c] = k;
    consumed += k + 1;
    for (int j = 0; j < k; ++j) {
      long v = -1;
      if (!(in >> v) || v < 0 || v >= r.points) {
        r.message = "cell index out of range";
        return r;
      }
    }
  }
  if (consumed != size) {
    r.message = "CELLS size field does not match connectivity";
    return r;
  }
  long ntypes = 0;
  in >> word >> ntypes;
  if (word != "CELL_TYPES" || ntypes != r.cells) {
    r.message = "CELL_TYPES count does not match CELLS";
    return r;
  }
  for (long c = 0; c < ntypes; ++c) {
    int t = 0;
    in >> t;
    const int expect = t == 5 ? 3 : t == 10 ? 4 : t == 1 ? 1 : t == 3 ? 2 : t == 9 ? 4 : t == 12 ? 8 : -1;
    if (expect < 0 || expect != counts[c]) {
      r.message = "cell type " + std::to_string(t) + " does not match its vertex count";
      return r;
    }
    r.cell_type = c == 0 ? t : (r.cell_type == t ? t : -1);
  }
  // Optional point data: every array must have one tuple per point.
  while (in >> word) {
    if (word == "POINT_DATA") {
      long n = 0;
      in >> n;
      if (n != r.points) {
        r.message = "POINT_DATA length does not match POINTS";
        return r;
      }
    } else if (word == "SCALARS" || word == "VECTORS") {
      std::string name, dtype;
      in >> name >> dtype;
      int comps = word == "VECTORS" ? 3 : 1;
      if (word == "SCALARS") {
        std::getline(in, line);
        std::istringstream rest(line);
        int nc = 1;
        if (rest >> nc) comps = nc;
        in >> word;
        if (word != "LOOKUP_TABLE") {
          r.message = "SCALARS without LOOKUP_TABLE";
          return r;
        }
        in >> word;
      }
      for (long i = 0; i < comps * r.points; ++i) {
        double x;
        if (!(in >> x)) {
          r.message = "truncated data array '" + name + "'";
          return r;
        }
      }
    } else {
      r.message = "unexpected section '" + word + "'";
      return r;
    }
  }
  r.ok = true;
  r.message = "ok";
  return r;
}

}  // namespace fsi
