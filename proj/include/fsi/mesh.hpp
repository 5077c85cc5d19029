/*
  This file is part of fsi-resolvent, a mixed finite element solver for a
  Stokes fluid coupled to a clamped plate.

  Licensed under the Apache License, Version 2.0 (the "License"); you may
  not use this file except in compliance with the License.  You may obtain
  a copy of the License at

  http://www.apache.org/licenses/LICENSE-2.0
*/

#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Core>

namespace fsi {

using Index = std::int32_t;

// Criss-cross triangulation of the unit square: every grid cell of width
// 1/level is split through its center into four triangles. Vertices live on
// a lattice of spacing 1/(2 level) and are numbered lexicographically by
// (x, y) lattice index.
class Mesh2 {
 public:
  struct Location {
    Index triangle;
    Eigen::Vector3d barycentric;
  };

  int level() const noexcept { return level_; }
  double characteristic_length() const noexcept { return 1.0 / level_; }

  std::span<const Eigen::Vector2d> vertices() const noexcept { return vertices_; }
  std::span<const std::array<Index, 3>> triangles() const noexcept { return triangles_; }
  std::span<const std::array<Index, 2>> edges() const noexcept { return edges_; }
  // Local edge k of a triangle is the one opposite local vertex k.
  std::span<const std::array<Index, 3>> triangle_edges() const noexcept { return triangle_edges_; }
  std::span<const std::array<int, 2>> lattice() const noexcept { return lattice_; }

  Index num_vertices() const noexcept { return static_cast<Index>(vertices_.size()); }
  Index num_triangles() const noexcept { return static_cast<Index>(triangles_.size()); }
  Index num_edges() const noexcept { return static_cast<Index>(edges_.size()); }

  bool boundary_vertex(Index v) const { return boundary_vertex_[v] != 0; }
  bool boundary_edge(Index e) const { return boundary_edge_[e] != 0; }

  double signed_area(Index t) const;

  // Triangle containing p (closed), or nothing when p lies outside the square.
  std::optional<Location> locate(const Eigen::Vector2d& p, double tol = 1e-12) const;

 private:
  friend Mesh2 build_square_mesh(int level);

  int level_ = 0;
  std::vector<Eigen::Vector2d> vertices_;
  std::vector<std::array<int, 2>> lattice_;
  std::vector<std::array<Index, 3>> triangles_;
  std::vector<std::array<Index, 2>> edges_;
  std::vector<std::array<Index, 3>> triangle_edges_;
  std::vector<char> boundary_vertex_;
  std::vector<char> boundary_edge_;
};

enum class FaceTag : std::uint8_t { Interior = 0, Omega = 1, S = 2 };

// Tetrahedral mesh of [0,1]^2 x [-1,0]: every cube cell is split into 24
// tetrahedra spanned by the cell center, a face center and one edge of that
// face. The top face z = 0 is the plate region Omega; the other five faces
// form S.
class Mesh3 {
 public:
  int level() const noexcept { return level_; }
  double characteristic_length() const noexcept { return 1.0 / level_; }

  std::span<const Eigen::Vector3d> vertices() const noexcept { return vertices_; }
  // Vertex positions on the lattice of spacing 1/(2 level); z index 0 is
  // the bottom face z = -1.
  std::span<const std::array<int, 3>> lattice() const noexcept { return lattice_; }
  std::span<const std::array<Index, 4>> tets() const noexcept { return tets_; }
  std::span<const std::array<Index, 2>> edges() const noexcept { return edges_; }
  // Local edge order: (0,1) (0,2) (0,3) (1,2) (1,3) (2,3).
  std::span<const std::array<Index, 6>> tet_edges() const noexcept { return tet_edges_; }
  std::span<const std::array<Index, 3>> faces() const noexcept { return faces_; }
  std::span<const FaceTag> face_tags() const noexcept { return face_tags_; }

  Index num_vertices() const noexcept { return static_cast<Index>(vertices_.size()); }
  Index num_tets() const noexcept { return static_cast<Index>(tets_.size()); }
  Index num_edges() const noexcept { return static_cast<Index>(edges_.size()); }
  Index num_faces() const noexcept { return static_cast<Index>(faces_.size()); }

  double volume(Index t) const;
  double face_area(Index f) const;

 private:
  friend Mesh3 build_cube_mesh(int level);

  int level_ = 0;
  std::vector<Eigen::Vector3d> vertices_;
  std::vector<std::array<int, 3>> lattice_;
  std::vector<std::array<Index, 4>> tets_;
  std::vector<std::array<Index, 2>> edges_;
  std::vector<std::array<Index, 6>> tet_edges_;
  std::vector<std::array<Index, 3>> faces_;
  std::vector<FaceTag> face_tags_;
};

Mesh2 build_square_mesh(int level);
Mesh3 build_cube_mesh(int level);

// Per-level meshes for a convergence study; levels must be strictly
// increasing.
std::vector<Mesh2> refine_square(std::span<const int> levels);
std::vector<Mesh3> refine_cube(std::span<const int> levels);

}  // namespace fsi
