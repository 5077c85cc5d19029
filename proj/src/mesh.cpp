/*
  This file is part of fsi-resolvent, a mixed finite element solver for a
  Stokes fluid coupled to a clamped plate.

  Licensed under the Apache License, Version 2.0 (the "License"); you may
  not use this file except in compliance with the License.  You may obtain
  a copy of the License at

  http://www.apache.org/licenses/LICENSE-2.0
*/

#include "fsi/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <tuple>

#include <Eigen/Dense>

#include "fsi/error.hpp"

namespace fsi {

namespace {

constexpr std::int64_t kMaxIndex = std::numeric_limits<Index>::max();

void check_level(int level, std::int64_t entities, const char* what) {
  if (level < 1)
    throw InvalidArgument(std::string(what) + ": level must be >= 1, got " + std::to_string(level));
  if (entities > kMaxIndex)
    throw InvalidArgument(std::string(what) + ": level " + std::to_string(level) +
                          " overflows the 32-bit index type");
}

// Sorted unique keys with the positions that referenced them.
template <std::size_t K>
struct Incidence {
  std::array<Index, K> key;
  Index owner;
  int local;
};

template <std::size_t K>
void sort_incidence(std::vector<Incidence<K>>& inc) {
  std::sort(inc.begin(), inc.end(), [](const auto& a, const auto& b) {
    return std::tie(a.key, a.owner, a.local) < std::tie(b.key, b.owner, b.local);
  });
}

}  // namespace

double Mesh2::signed_area(Index t) const {
  const auto& tri = triangles_[t];
  const Eigen::Vector2d a = vertices_[tri[1]] - vertices_[tri[0]];
  const Eigen::Vector2d b = vertices_[tri[2]] - vertices_[tri[0]];
  return 0.5 * (a.x() * b.y() - a.y() * b.x());
}

std::optional<Mesh2::Location> Mesh2::locate(const Eigen::Vector2d& p, double tol) const {
  if (p.x() < -tol || p.x() > 1.0 + tol || p.y() < -tol || p.y() > 1.0 + tol) return std::nullopt;
  const int n = level_;
  const int i = std::clamp(static_cast<int>(std::floor(p.x() * n)), 0, n - 1);
  const int j = std::clamp(static_cast<int>(std::floor(p.y() * n)), 0, n - 1);
  const Index cell = static_cast<Index>(i) * n + j;

  Location best{-1, {}};
  double best_min = -std::numeric_limits<double>::infinity();
  for (int k = 0; k < 4; ++k) {
    const Index t = 4 * cell + k;
    const auto& tri = triangles_[t];
    const Eigen::Vector2d& a = vertices_[tri[0]];
    const Eigen::Vector2d& b = vertices_[tri[1]];
    const Eigen::Vector2d& c = vertices_[tri[2]];
    const double det = (b.x() - a.x()) * (c.y() - a.y()) - (c.x() - a.x()) * (b.y() - a.y());
    const double l1 = ((p.x() - a.x()) * (c.y() - a.y()) - (c.x() - a.x()) * (p.y() - a.y())) / det;
    const double l2 = ((b.x() - a.x()) * (p.y() - a.y()) - (p.x() - a.x()) * (b.y() - a.y())) / det;
    const Eigen::Vector3d bary(1.0 - l1 - l2, l1, l2);
    const double m = bary.minCoeff();
    if (m > best_min) {
      best_min = m;
      best = {t, bary};
    }
  }
  if (best_min < -tol) return std::nullopt;
  return best;
}

Mesh2 build_square_mesh(int level) {
  const std::int64_t n64 = level;
  check_level(level, 4 * n64 * n64 + 4 * n64 + 1, "build_square_mesh");

  Mesh2 m;
  m.level_ = level;
  const int n = level;
  const int N = 2 * n;
  std::vector<Index> id((N + 1) * (N + 1), -1);
  auto lat = [N](int ix, int iy) { return ix * (N + 1) + iy; };

  for (int ix = 0; ix <= N; ++ix)
    for (int iy = 0; iy <= N; ++iy) {
      if ((ix % 2) != (iy % 2)) continue;
      id[lat(ix, iy)] = static_cast<Index>(m.vertices_.size());
      m.vertices_.emplace_back(static_cast<double>(ix) / N, static_cast<double>(iy) / N);
      m.lattice_.push_back({ix, iy});
    }

  m.triangles_.reserve(4 * static_cast<std::size_t>(n) * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const Index v00 = id[lat(2 * i, 2 * j)];
      const Index v10 = id[lat(2 * i + 2, 2 * j)];
      const Index v11 = id[lat(2 * i + 2, 2 * j + 2)];
      const Index v01 = id[lat(2 * i, 2 * j + 2)];
      const Index c = id[lat(2 * i + 1, 2 * j + 1)];
      m.triangles_.push_back({v00, v10, c});
      m.triangles_.push_back({v10, v11, c});
      m.triangles_.push_back({v11, v01, c});
      m.triangles_.push_back({v01, v00, c});
    }

  std::vector<Incidence<2>> inc;
  inc.reserve(3 * m.triangles_.size());
  for (Index t = 0; t < m.num_triangles(); ++t)
    for (int k = 0; k < 3; ++k) {
      Index a = m.triangles_[t][(k + 1) % 3];
      Index b = m.triangles_[t][(k + 2) % 3];
      if (a > b) std::swap(a, b);
      inc.push_back({{a, b}, t, k});
    }
  sort_incidence(inc);

  m.triangle_edges_.assign(m.triangles_.size(), {-1, -1, -1});
  std::vector<int> use_count;
  for (std::size_t s = 0; s < inc.size(); ++s) {
    if (s == 0 || inc[s].key != inc[s - 1].key) {
      m.edges_.push_back(inc[s].key);
      use_count.push_back(0);
    }
    const Index e = static_cast<Index>(m.edges_.size()) - 1;
    m.triangle_edges_[inc[s].owner][inc[s].local] = e;
    ++use_count[e];
  }

  m.boundary_edge_.assign(m.edges_.size(), 0);
  m.boundary_vertex_.assign(m.vertices_.size(), 0);
  for (Index e = 0; e < m.num_edges(); ++e) {
    if (use_count[e] == 1) {
      m.boundary_edge_[e] = 1;
      m.boundary_vertex_[m.edges_[e][0]] = 1;
      m.boundary_vertex_[m.edges_[e][1]] = 1;
    }
  }
  return m;
}

double Mesh3::volume(Index t) const {
  const auto& tet = tets_[t];
  Eigen::Matrix3d J;
  J.col(0) = vertices_[tet[1]] - vertices_[tet[0]];
  J.col(1) = vertices_[tet[2]] - vertices_[tet[0]];
  J.col(2) = vertices_[tet[3]] - vertices_[tet[0]];
  return J.determinant() / 6.0;
}

double Mesh3::face_area(Index f) const {
  const auto& face = faces_[f];
  const Eigen::Vector3d a = vertices_[face[1]] - vertices_[face[0]];
  const Eigen::Vector3d b = vertices_[face[2]] - vertices_[face[0]];
  return 0.5 * a.cross(b).norm();
}

Mesh3 build_cube_mesh(int level) {
  const std::int64_t n64 = level;
  check_level(level, 24 * n64 * n64 * n64, "build_cube_mesh");

  Mesh3 m;
  m.level_ = level;
  const int n = level;
  const int N = 2 * n;
  const std::size_t side = static_cast<std::size_t>(N) + 1;
  std::vector<Index> id(side * side * side, -1);
  auto lat = [side](int ix, int iy, int iz) {
    return (static_cast<std::size_t>(ix) * side + iy) * side + iz;
  };

  for (int ix = 0; ix <= N; ++ix)
    for (int iy = 0; iy <= N; ++iy)
      for (int iz = 0; iz <= N; ++iz) {
        // Grid points, face centers and cell centers; one odd index would be
        // a grid-edge midpoint, which is not a vertex.
        if ((ix % 2) + (iy % 2) + (iz % 2) == 1) continue;
        id[lat(ix, iy, iz)] = static_cast<Index>(m.vertices_.size());
        m.vertices_.emplace_back(static_cast<double>(ix) / N, static_cast<double>(iy) / N,
                                 -1.0 + static_cast<double>(iz) / N);
        m.lattice_.push_back({ix, iy, iz});
      }

  m.tets_.reserve(24 * static_cast<std::size_t>(n) * n * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        const std::array<int, 3> base{2 * i, 2 * j, 2 * k};
        const Index center = id[lat(base[0] + 1, base[1] + 1, base[2] + 1)];
        for (int axis = 0; axis < 3; ++axis) {
          const int b = (axis + 1) % 3;
          const int c = (axis + 2) % 3;
          for (int s = 0; s < 2; ++s) {
            std::array<int, 3> fc = {base[0] + 1, base[1] + 1, base[2] + 1};
            fc[axis] = base[axis] + 2 * s;
            const Index face_center = id[lat(fc[0], fc[1], fc[2])];
            static constexpr int ob[4] = {0, 2, 2, 0};
            static constexpr int oc[4] = {0, 0, 2, 2};
            std::array<Index, 4> corner{};
            for (int q = 0; q < 4; ++q) {
              std::array<int, 3> p = fc;
              p[b] = base[b] + ob[q];
              p[c] = base[c] + oc[q];
              corner[q] = id[lat(p[0], p[1], p[2])];
            }
            for (int q = 0; q < 4; ++q) {
              std::array<Index, 4> tet{center, face_center, corner[q], corner[(q + 1) % 4]};
              Eigen::Matrix3d J;
              J.col(0) = m.vertices_[tet[1]] - m.vertices_[tet[0]];
              J.col(1) = m.vertices_[tet[2]] - m.vertices_[tet[0]];
              J.col(2) = m.vertices_[tet[3]] - m.vertices_[tet[0]];
              if (J.determinant() < 0.0) std::swap(tet[2], tet[3]);
              m.tets_.push_back(tet);
            }
          }
        }
      }

  static constexpr int kEdge[6][2] = {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}};
  {
    std::vector<Incidence<2>> inc;
    inc.reserve(6 * m.tets_.size());
    for (Index t = 0; t < m.num_tets(); ++t)
      for (int e = 0; e < 6; ++e) {
        Index a = m.tets_[t][kEdge[e][0]];
        Index b = m.tets_[t][kEdge[e][1]];
        if (a > b) std::swap(a, b);
        inc.push_back({{a, b}, t, e});
      }
    sort_incidence(inc);
    m.tet_edges_.assign(m.tets_.size(), {});
    for (std::size_t s = 0; s < inc.size(); ++s) {
      if (s == 0 || inc[s].key != inc[s - 1].key) m.edges_.push_back(inc[s].key);
      m.tet_edges_[inc[s].owner][inc[s].local] = static_cast<Index>(m.edges_.size()) - 1;
    }
  }

  {
    std::vector<Incidence<3>> inc;
    inc.reserve(4 * m.tets_.size());
    for (Index t = 0; t < m.num_tets(); ++t)
      for (int f = 0; f < 4; ++f) {
        std::array<Index, 3> key{};
        int w = 0;
        for (int v = 0; v < 4; ++v)
          if (v != f) key[w++] = m.tets_[t][v];
        std::sort(key.begin(), key.end());
        inc.push_back({key, t, f});
      }
    sort_incidence(inc);
    std::vector<int> use_count;
    for (std::size_t s = 0; s < inc.size(); ++s) {
      if (s == 0 || inc[s].key != inc[s - 1].key) {
        m.faces_.push_back(inc[s].key);
        use_count.push_back(0);
      }
      ++use_count.back();
    }
    m.face_tags_.assign(m.faces_.size(), FaceTag::Interior);
    for (Index f = 0; f < m.num_faces(); ++f) {
      if (use_count[f] != 1) continue;
      const auto& face = m.faces_[f];
      const bool top = std::all_of(face.begin(), face.end(),
                                   [&](Index v) { return m.lattice_[v][2] == N; });
      m.face_tags_[f] = top ? FaceTag::Omega : FaceTag::S;
    }
  }
  return m;
}

namespace {
void check_increasing(std::span<const int> levels) {
  if (levels.empty()) throw InvalidArgument("refine: empty level sequence");
  for (std::size_t i = 1; i < levels.size(); ++i)
    if (levels[i] <= levels[i - 1]) throw InvalidArgument("refine: levels must be strictly increasing");
}
}  // namespace

std::vector<Mesh2> refine_square(std::span<const int> levels) {
  check_increasing(levels);
  std::vector<Mesh2> out;
  for (int l : levels) out.push_back(build_square_mesh(l));
  return out;
}

std::vector<Mesh3> refine_cube(std::span<const int> levels) {
  check_increasing(levels);
  std::vector<Mesh3> out;
  for (int l : levels) out.push_back(build_cube_mesh(l));
  return out;
}

}  // namespace fsi
