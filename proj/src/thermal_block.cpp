// SPDX-License-Identifier: Apache-2.0

#include "rb/thermal_block.hpp"

#include <cmath>
#include <limits>

namespace rb {

std::array<std::size_t, 3> Mesh::triangle(std::size_t t) const {
  const std::size_t cell = t / 2;
  const std::size_t cx = cell % cells_per_axis;
  const std::size_t cy = cell / cells_per_axis;
  const std::size_t v00 = vertex_id(cx, cy);
  const std::size_t v10 = vertex_id(cx + 1, cy);
  const std::size_t v01 = vertex_id(cx, cy + 1);
  const std::size_t v11 = vertex_id(cx + 1, cy + 1);
  if (t % 2 == 0)
    return {v00, v10, v11}; // below the diagonal
  return {v00, v11, v01};   // above the diagonal
}

Mesh build_mesh(std::size_t cells_per_axis) {
  if (cells_per_axis == 0)
    throw std::invalid_argument("build_mesh: need at least one cell per axis");
  return Mesh{cells_per_axis};
}

bool parameter_admissible(const Parameter &mu) {
  if (mu.size() != kThermalBlockParamCount)
    return false;
  for (double c : mu.components)
    if (!(c >= kParamMin && c <= kParamMax))
      return false;
  return true;
}

double coercivity_lower_bound(const Parameter &mu) {
  if (mu.size() == 0)
    throw std::invalid_argument("coercivity_lower_bound: empty parameter");
  double lb = std::numeric_limits<double>::infinity();
  for (double c : mu.components) {
    if (!(c > 0.0))
      throw std::invalid_argument("coercivity_lower_bound: components must be positive");
    lb = std::min(lb, c);
  }
  return lb;
}

std::size_t quadrant_of(double x, double y) {
  const std::size_t i = x < 0.5 ? 0 : 1;
  const std::size_t j = y < 0.5 ? 0 : 1;
  return 2 * i + j;
}

// ---------------------------------------------------------------------------
// HighDimModel

std::vector<double> HighDimModel::theta_a_values(const Parameter &mu) const {
  std::vector<double> v(theta.a.size());
  for (std::size_t q = 0; q < v.size(); ++q)
    v[q] = theta.a[q](mu);
  return v;
}

std::vector<double> HighDimModel::theta_f_values(const Parameter &mu) const {
  std::vector<double> v(theta.f.size());
  for (std::size_t q = 0; q < v.size(); ++q)
    v[q] = theta.f[q](mu);
  return v;
}

SparseSpdMatrix HighDimModel::operator_at(const Parameter &mu) const {
  return SparseSpdMatrix::weighted_sum(A_q, theta_a_values(mu));
}

Vector HighDimModel::rhs_at(const Parameter &mu) const {
  Vector rhs(dim, 0.0);
  const std::vector<double> tf = theta_f_values(mu);
  for (std::size_t q = 0; q < f_q.size(); ++q)
    axpy(tf[q], f_q[q], rhs);
  return rhs;
}

// ---------------------------------------------------------------------------
// assembly

namespace {

// P1 stiffness of one triangle: K_ab = area * grad(phi_a) . grad(phi_b).
std::array<std::array<double, 3>, 3> local_stiffness(const std::array<double, 2> &p0,
                                                     const std::array<double, 2> &p1,
                                                     const std::array<double, 2> &p2) {
  const double x0 = p0[0], y0 = p0[1];
  const double x1 = p1[0], y1 = p1[1];
  const double x2 = p2[0], y2 = p2[1];
  const double det = (x1 - x0) * (y2 - y0) - (x2 - x0) * (y1 - y0);
  const double area = 0.5 * det;
  // gradients of the barycentric hat functions
  const double gx[3] = {(y1 - y2) / det, (y2 - y0) / det, (y0 - y1) / det};
  const double gy[3] = {(x2 - x1) / det, (x0 - x2) / det, (x1 - x0) / det};
  std::array<std::array<double, 3>, 3> k{};
  for (int a = 0; a < 3; ++a)
    for (int b = a; b < 3; ++b) {
      const double v = area * (gx[a] * gx[b] + gy[a] * gy[b]);
      k[a][b] = v;
      k[b][a] = v;
    }
  return k;
}

} // namespace

Vector p1_load_full(const Mesh &mesh) {
  Vector load(mesh.vertex_count(), 0.0);
  const double h = mesh.mesh_width();
  const double area = 0.5 * h * h;
  for (std::size_t t = 0; t < mesh.triangle_count(); ++t)
    for (std::size_t v : mesh.triangle(t))
      load[v] += area / 3.0;
  return load;
}

HighDimModel assemble_thermal_block(const Mesh &mesh) {
  constexpr std::size_t n_quadrants = 4;

  // interior dof numbering
  std::vector<std::size_t> dof_of(mesh.vertex_count(), std::numeric_limits<std::size_t>::max());
  HighDimModel model;
  for (std::size_t v = 0; v < mesh.vertex_count(); ++v) {
    if (mesh.boundary_vertex(v)) {
      model.constrained_dofs.push_back(v);
    } else {
      dof_of[v] = model.interior_vertices.size();
      model.interior_vertices.push_back(v);
    }
  }
  model.dim = model.interior_vertices.size();

  std::vector<CooBuilder> blocks(n_quadrants, CooBuilder(model.dim));
  CooBuilder all(model.dim);

  for (std::size_t t = 0; t < mesh.triangle_count(); ++t) {
    const auto verts = mesh.triangle(t);
    const auto p0 = mesh.vertex(verts[0]);
    const auto p1 = mesh.vertex(verts[1]);
    const auto p2 = mesh.vertex(verts[2]);
    const auto k = local_stiffness(p0, p1, p2);
    const double bx = (p0[0] + p1[0] + p2[0]) / 3.0;
    const double by = (p0[1] + p1[1] + p2[1]) / 3.0;
    const std::size_t quadrant = quadrant_of(bx, by);
    for (int a = 0; a < 3; ++a) {
      const std::size_t ia = dof_of[verts[a]];
      if (ia == std::numeric_limits<std::size_t>::max())
        continue;
      for (int b = 0; b < 3; ++b) {
        const std::size_t ib = dof_of[verts[b]];
        if (ib == std::numeric_limits<std::size_t>::max())
          continue;
        blocks[quadrant].add(ia, ib, k[a][b]);
        all.add(ia, ib, k[a][b]);
      }
    }
  }

  // one shared pattern for every block, so affine sums stay entrywise
  const SparseSpdMatrix pattern = all.build();
  model.A_q.reserve(n_quadrants);
  for (std::size_t q = 0; q < n_quadrants; ++q)
    model.A_q.push_back(blocks[q].build(pattern));
  model.M_V = SparseSpdMatrix::weighted_sum(model.A_q, std::vector<double>(n_quadrants, 1.0));

  const Vector load = p1_load_full(mesh);
  Vector f(model.dim, 0.0);
  for (std::size_t i = 0; i < model.dim; ++i)
    f[i] = load[model.interior_vertices[i]];
  model.f_q.push_back(std::move(f));

  for (std::size_t q = 0; q < n_quadrants; ++q)
    model.theta.a.push_back([q](const Parameter &mu) { return mu[q]; });
  model.theta.f.push_back([](const Parameter &) { return 1.0; });

  return model;
}

} // namespace rb
