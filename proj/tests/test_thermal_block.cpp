// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <limits>

#include "doctest.h"

#include "oracles.hpp"
#include "rb/thermal_block.hpp"

using namespace rb;
using testing::ValueGen;

namespace {

Parameter make_mu(double a, double b, double c, double d) {
  return Parameter{{a, b, c, d}};
}

Parameter random_mu(ValueGen &gen) {
  return make_mu(gen.range(kParamMin, kParamMax), gen.range(kParamMin, kParamMax),
                 gen.range(kParamMin, kParamMax), gen.range(kParamMin, kParamMax));
}

} // namespace

TEST_CASE("build_mesh: entity counts") {
  const Mesh m1 = build_mesh(1);
  CHECK(m1.vertex_count() == 4);
  CHECK(m1.triangle_count() == 2);

  const Mesh m2 = build_mesh(2);
  CHECK(m2.vertex_count() == 9);
  CHECK(m2.triangle_count() == 8);

  const Mesh m500 = build_mesh(500);
  CHECK(m500.vertex_count() == 251001);
  CHECK(m500.triangle_count() == 500000);

  CHECK_THROWS_AS(build_mesh(0), std::invalid_argument);
}

TEST_CASE("build_mesh: every triangle has positive area 1/(2 n^2)") {
  const Mesh mesh = build_mesh(4);
  const double expected = 1.0 / (2.0 * 16.0);
  for (std::size_t t = 0; t < mesh.triangle_count(); ++t) {
    const auto v = mesh.triangle(t);
    const auto p0 = mesh.vertex(v[0]);
    const auto p1 = mesh.vertex(v[1]);
    const auto p2 = mesh.vertex(v[2]);
    const double area =
        0.5 * ((p1[0] - p0[0]) * (p2[1] - p0[1]) - (p2[0] - p0[0]) * (p1[1] - p0[1]));
    CHECK(area == doctest::Approx(expected).epsilon(1e-14));
    CHECK(area > 0.0);
  }
}

TEST_CASE("coercivity_lower_bound: componentwise minimum") {
  CHECK(coercivity_lower_bound(make_mu(0.1, 1.0, 0.4, 1.0)) == 0.1);
  CHECK(coercivity_lower_bound(make_mu(1.0, 1.0, 1.0, 1.0)) == 1.0);
  CHECK(coercivity_lower_bound(make_mu(0.1, 0.1, 0.1, 0.1)) == 0.1);
  CHECK_THROWS_AS(coercivity_lower_bound(make_mu(0.0, 1.0, 1.0, 1.0)), std::invalid_argument);
  CHECK_THROWS_AS(coercivity_lower_bound(make_mu(-0.2, 1.0, 1.0, 1.0)), std::invalid_argument);
}

TEST_CASE("assemble_thermal_block: structure of the affine decomposition") {
  const Mesh mesh = build_mesh(4);
  const HighDimModel model = assemble_thermal_block(mesh);
  CHECK(model.q_a() == 4);
  CHECK(model.q_f() == 1);
  CHECK(model.dim == 9);
  CHECK(model.constrained_dofs.size() == mesh.vertex_count() - model.dim);

  const Parameter mu = make_mu(0.1, 1.0, 0.4, 1.0);
  CHECK(model.theta_a_values(mu) == std::vector<double>{0.1, 1.0, 0.4, 1.0});
  CHECK(model.theta_f_values(mu) == std::vector<double>{1.0});
}

TEST_CASE("assemble_thermal_block: blocks have disjoint support away from interfaces") {
  const Mesh mesh = build_mesh(4);
  const HighDimModel model = assemble_thermal_block(mesh);
  // vertex (1,1): support entirely inside the lower-left quadrant
  const std::size_t vertex = mesh.vertex_id(1, 1);
  std::size_t dof = std::numeric_limits<std::size_t>::max();
  for (std::size_t d = 0; d < model.interior_vertices.size(); ++d)
    if (model.interior_vertices[d] == vertex)
      dof = d;
  REQUIRE(dof != std::numeric_limits<std::size_t>::max());
  for (std::size_t q = 1; q < 4; ++q)
    for (std::size_t j = 0; j < model.dim; ++j)
      CHECK(model.A_q[q].coeff(dof, j) == 0.0);
}

TEST_CASE("assemble_thermal_block: unit-coefficient operator is the criss-cross Laplacian") {
  // n = 2 has a single interior dof; its stiffness diagonal is 4
  const Mesh mesh = build_mesh(2);
  const HighDimModel model = assemble_thermal_block(mesh);
  REQUIRE(model.dim == 1);
  CHECK(model.M_V.coeff(0, 0) == doctest::Approx(4.0).epsilon(1e-14));
  double sum = 0.0;
  for (std::size_t q = 0; q < 4; ++q)
    sum += model.A_q[q].coeff(0, 0);
  CHECK(sum == doctest::Approx(4.0).epsilon(1e-14));
}

TEST_CASE("assemble_thermal_block: load entries sum to the domain area before elimination") {
  for (std::size_t n : {1, 3, 8}) {
    const Vector load = p1_load_full(build_mesh(n));
    double sum = 0.0;
    for (double e : load)
      sum += e;
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-13));
  }
}

TEST_CASE("assemble_thermal_block: blocks are exactly symmetric") {
  const Mesh mesh = build_mesh(6);
  const HighDimModel model = assemble_thermal_block(mesh);
  for (const auto &a : {model.A_q[0], model.A_q[1], model.A_q[2], model.A_q[3], model.M_V})
    for (std::size_t i = 0; i < model.dim; ++i)
      for (std::size_t k = a.row_offsets()[i]; k < a.row_offsets()[i + 1]; ++k) {
        const std::size_t j = a.column_indices()[k];
        CHECK(a.values()[k] == a.coeff(j, i)); // bitwise
      }
}

TEST_CASE("assemble_thermal_block: coercivity of the parametrized operator") {
  const Mesh mesh = build_mesh(6);
  const HighDimModel model = assemble_thermal_block(mesh);
  ValueGen gen(17);
  for (int k = 0; k < 10; ++k) {
    const Parameter mu = random_mu(gen);
    const double alpha = coercivity_lower_bound(mu);
    const SparseSpdMatrix a = model.operator_at(mu);
    for (int r = 0; r < 10; ++r) {
      const Vector v = gen.vector(model.dim);
      const double lhs = v_inner(a, v, v);
      const double rhs = alpha * v_inner(model.M_V, v, v);
      CHECK(lhs >= rhs * (1.0 - 1e-12));
    }
  }
}

TEST_CASE("assemble_thermal_block: affine sum matches direct assembly") {
  const Mesh mesh = build_mesh(4);
  const HighDimModel model = assemble_thermal_block(mesh);
  ValueGen gen(23);
  for (int k = 0; k < 3; ++k) {
    const Parameter mu = random_mu(gen);
    const SparseSpdMatrix affine = model.operator_at(mu);
    const DenseMatrix direct =
        testing::assemble_direct(mesh, mu, model.interior_vertices, model.dim);
    for (std::size_t i = 0; i < model.dim; ++i)
      for (std::size_t j = 0; j < model.dim; ++j) {
        const double scale = std::max(std::abs(direct(i, j)), 1.0);
        CHECK(std::abs(affine.coeff(i, j) - direct(i, j)) <= 1e-14 * scale);
      }
  }
}

TEST_CASE("assemble_thermal_block: unit-parameter solution matches a dense solve") {
  const Mesh mesh = build_mesh(16);
  const HighDimModel model = assemble_thermal_block(mesh);
  const Parameter ones = make_mu(1.0, 1.0, 1.0, 1.0);

  const Vector u = spd_solve(model.operator_at(ones), model.rhs_at(ones));
  const Vector ref =
      testing::dense_lu_solve(testing::to_dense(model.operator_at(ones)), model.rhs_at(ones));
  double max_u = 0.0;
  for (std::size_t i = 0; i < model.dim; ++i) {
    CHECK(std::abs(u[i] - ref[i]) <= 1e-12);
    max_u = std::max(max_u, u[i]);
  }
  // known peak value of the unit-square Poisson problem with unit source
  CHECK(max_u == doctest::Approx(0.0737).epsilon(0.02));
}
