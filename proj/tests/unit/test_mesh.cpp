/*
  This file is part of fsi-resolvent, a mixed finite element solver for a
  Stokes fluid coupled to a clamped plate.

  Licensed under the Apache License, Version 2.0 (the "License"); you may
  not use this file except in compliance with the License.  You may obtain
  a copy of the License at

  http://www.apache.org/licenses/LICENSE-2.0
*/

#include <doctest.h>

#include <algorithm>
#include <map>
#include <vector>

#include "fsi/error.hpp"
#include "fsi/mesh.hpp"

using namespace fsi;

TEST_SUITE("mesh") {
  TEST_CASE("square mesh element counts follow 4 n^2") {
    for (int n : {1, 2, 3, 4, 8, 16}) CHECK(build_square_mesh(n).num_triangles() == 4 * n * n);
    const Mesh2 m = build_square_mesh(1);
    CHECK(m.num_vertices() == 5);
    CHECK(m.num_edges() == 8);
    CHECK(m.characteristic_length() == 1.0);
    CHECK(build_square_mesh(2).characteristic_length() == 0.5);
  }

  TEST_CASE("square mesh areas are positive and tile the square") {
    for (int n : {1, 3, 8}) {
      const Mesh2 m = build_square_mesh(n);
      double total = 0.0;
      for (Index t = 0; t < m.num_triangles(); ++t) {
        CHECK(m.signed_area(t) > 0.0);
        total += m.signed_area(t);
      }
      CHECK(std::abs(total - 1.0) <= 1e-12);
    }
  }

  TEST_CASE("interior edges have two triangles and boundary edges one") {
    const Mesh2 m = build_square_mesh(4);
    std::vector<int> uses(m.num_edges(), 0);
    for (const auto& te : m.triangle_edges())
      for (Index e : te) ++uses[e];
    for (Index e = 0; e < m.num_edges(); ++e) CHECK(uses[e] == (m.boundary_edge(e) ? 1 : 2));
    // Local edge k is opposite local vertex k.
    for (Index t = 0; t < m.num_triangles(); ++t)
      for (int k = 0; k < 3; ++k) {
        const auto& e = m.edges()[m.triangle_edges()[t][k]];
        const Index opposite = m.triangles()[t][k];
        CHECK(e[0] != opposite);
        CHECK(e[1] != opposite);
      }
  }

  TEST_CASE("point location returns a containing triangle") {
    const Mesh2 m = build_square_mesh(3);
    for (const Eigen::Vector2d& p : {Eigen::Vector2d(0.1, 0.7), Eigen::Vector2d(1.0, 1.0), Eigen::Vector2d(0.5, 0.0)}) {
      const auto loc = m.locate(p);
      REQUIRE(loc.has_value());
      CHECK(loc->barycentric.minCoeff() >= -1e-12);
      Eigen::Vector2d q = Eigen::Vector2d::Zero();
      for (int k = 0; k < 3; ++k) q += loc->barycentric[k] * m.vertices()[m.triangles()[loc->triangle][k]];
      CHECK((q - p).norm() <= 1e-12);
    }
    CHECK_FALSE(m.locate({1.5, 0.5}).has_value());
  }

  TEST_CASE("cube mesh element counts follow 24 n^3") {
    CHECK(build_cube_mesh(1).num_tets() == 24);
    CHECK(build_cube_mesh(2).num_tets() == 192);
    CHECK(build_cube_mesh(4).num_tets() == 1536);
  }

  TEST_CASE("cube mesh volumes, bounds and face tags") {
    for (int n : {1, 2, 3}) {
      const Mesh3 m = build_cube_mesh(n);
      double total = 0.0;
      for (Index t = 0; t < m.num_tets(); ++t) {
        CHECK(m.volume(t) > 0.0);
        total += m.volume(t);
      }
      CHECK(std::abs(total - 1.0) <= 1e-12);
      for (const auto& v : m.vertices()) {
        CHECK(v.x() >= 0.0);
        CHECK(v.x() <= 1.0);
        CHECK(v.y() >= 0.0);
        CHECK(v.y() <= 1.0);
        CHECK(v.z() >= -1.0);
        CHECK(v.z() <= 0.0);
      }
      double omega = 0.0, s = 0.0;
      for (Index f = 0; f < m.num_faces(); ++f) {
        const FaceTag tag = m.face_tags()[f];
        const auto& face = m.faces()[f];
        const bool top = std::all_of(face.begin(), face.end(), [&](Index v) { return m.vertices()[v].z() == 0.0; });
        if (tag == FaceTag::Omega) {
          CHECK(top);
          omega += m.face_area(f);
        } else if (tag == FaceTag::S) {
          CHECK_FALSE(top);
          s += m.face_area(f);
        }
      }
      CHECK(std::abs(omega - 1.0) <= 1e-12);
      CHECK(std::abs(s - 5.0) <= 1e-12);
    }
  }

  TEST_CASE("boundary faces belong to exactly one tetrahedron") {
    const Mesh3 m = build_cube_mesh(2);
    std::map<std::array<Index, 3>, int> count;
    for (const auto& t : m.tets())
      for (int skip = 0; skip < 4; ++skip) {
        std::array<Index, 3> f{};
        int k = 0;
        for (int j = 0; j < 4; ++j)
          if (j != skip) f[k++] = t[j];
        std::sort(f.begin(), f.end());
        ++count[f];
      }
    for (Index f = 0; f < m.num_faces(); ++f) {
      auto key = m.faces()[f];
      std::sort(key.begin(), key.end());
      const int uses = count.at(key);
      CHECK(uses == (m.face_tags()[f] == FaceTag::Interior ? 2 : 1));
    }
  }

  TEST_CASE("refinement sequences") {
    const std::vector<int> levels{1, 2, 4, 8, 16};
    const auto squares = refine_square(levels);
    const std::vector<Index> tri{4, 16, 64, 256, 1024};
    for (std::size_t i = 0; i < levels.size(); ++i) CHECK(squares[i].num_triangles() == tri[i]);
    const std::vector<int> cube_levels{1, 2, 4};
    const auto cubes = refine_cube(cube_levels);
    CHECK(cubes[2].num_tets() == 1536);

    const std::vector<int> one{1};
    const auto single = refine_square(one);
    REQUIRE(single.size() == 1);
    const Mesh2 direct = build_square_mesh(1);
    CHECK(std::equal(single[0].triangles().begin(), single[0].triangles().end(), direct.triangles().begin()));

    const std::vector<int> bad{2, 1};
    CHECK_THROWS_AS(refine_square(bad), InvalidArgument);
    CHECK_THROWS_AS(build_square_mesh(0), InvalidArgument);
    CHECK_THROWS_AS(build_cube_mesh(-3), InvalidArgument);
  }
}
