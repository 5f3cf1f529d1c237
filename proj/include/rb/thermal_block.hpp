// SPDX-License-Identifier: Apache-2.0

#ifndef RB_THERMAL_BLOCK_HPP
#define RB_THERMAL_BLOCK_HPP

#include <array>
#include <cstddef>
#include <functional>

#include "rb/linops.hpp"

namespace rb {

// ---------------------------------------------------------------------------
// structured triangular mesh on the unit square

/// Uniform criss-cross triangulation of [0,1]^2: n x n square cells, each
/// split along the lower-left to upper-right diagonal.
struct Mesh {
  std::size_t cells_per_axis = 0;

  std::size_t vertex_count() const {
    return (cells_per_axis + 1) * (cells_per_axis + 1);
  }
  std::size_t triangle_count() const { return 2 * cells_per_axis * cells_per_axis; }
  double mesh_width() const { return 1.0 / static_cast<double>(cells_per_axis); }

  std::size_t vertex_id(std::size_t ix, std::size_t iy) const {
    return iy * (cells_per_axis + 1) + ix;
  }
  std::array<double, 2> vertex(std::size_t v) const {
    const std::size_t stride = cells_per_axis + 1;
    return {static_cast<double>(v % stride) * mesh_width(),
            static_cast<double>(v / stride) * mesh_width()};
  }
  bool boundary_vertex(std::size_t v) const {
    const std::size_t stride = cells_per_axis + 1;
    const std::size_t ix = v % stride;
    const std::size_t iy = v / stride;
    return ix == 0 || iy == 0 || ix == cells_per_axis || iy == cells_per_axis;
  }

  /// Vertices of triangle t, counterclockwise.
  std::array<std::size_t, 3> triangle(std::size_t t) const;
};

/// Throws std::invalid_argument for n = 0.
Mesh build_mesh(std::size_t cells_per_axis);

// ---------------------------------------------------------------------------
// parameters and affine coefficient functionals

struct Parameter {
  std::vector<double> components;

  std::size_t size() const { return components.size(); }
  double operator[](std::size_t q) const { return components[q]; }

  friend bool operator==(const Parameter &, const Parameter &) = default;
};

struct AffineCoefficients {
  std::vector<std::function<double(const Parameter &)>> a;
  std::vector<std::function<double(const Parameter &)>> f;
};

/// Admissible interval of a thermal-block conductivity component.
inline constexpr double kParamMin = 0.1;
inline constexpr double kParamMax = 1.0;
inline constexpr std::size_t kThermalBlockParamCount = 4;

bool parameter_admissible(const Parameter &mu);

/// Lower bound for the coercivity constant w.r.t. the V-inner product:
/// min_q mu_q (exact here because M_V is the unit-coefficient operator).
/// Throws std::invalid_argument when any component is <= 0.
double coercivity_lower_bound(const Parameter &mu);

// ---------------------------------------------------------------------------
// assembled affine high-dimensional model

/// Parameter-separable discrete problem on the interior degrees of freedom:
/// A(mu) = sum_q theta.a[q](mu) A_q, f(mu) = sum_q theta.f[q](mu) f_q.
/// All sparse blocks share one sparsity pattern; M_V is the V-inner-product
/// matrix. Immutable after assembly, safe for concurrent reads.
struct HighDimModel {
  std::vector<SparseSpdMatrix> A_q;
  std::vector<Vector> f_q;
  AffineCoefficients theta;
  SparseSpdMatrix M_V;
  std::vector<std::size_t> constrained_dofs;  // boundary vertex ids
  std::vector<std::size_t> interior_vertices; // mesh vertex id per dof
  std::size_t dim = 0;                        // interior dof count N

  std::size_t q_a() const { return A_q.size(); }
  std::size_t q_f() const { return f_q.size(); }

  std::vector<double> theta_a_values(const Parameter &mu) const;
  std::vector<double> theta_f_values(const Parameter &mu) const;

  SparseSpdMatrix operator_at(const Parameter &mu) const;
  Vector rhs_at(const Parameter &mu) const;
};

/// Assemble the four-quadrant diffusion problem -div(sigma grad u) = 1 with
/// homogeneous Dirichlet values: P1 elements, one stiffness block per
/// quadrant (element membership decided by barycenter), constant-1 load,
/// boundary dofs eliminated. M_V is the unit-coefficient stiffness matrix
/// (the H1-seminorm product).
HighDimModel assemble_thermal_block(const Mesh &mesh);

/// Load vector of the constant-1 source against all P1 hat functions,
/// before boundary elimination (entries sum to the domain area).
Vector p1_load_full(const Mesh &mesh);

/// Quadrant index of a point, (i,j) lexicographic: 2i + j with
/// i = [x >= 1/2], j = [y >= 1/2].
std::size_t quadrant_of(double x, double y);

} // namespace rb

#endif // RB_THERMAL_BLOCK_HPP
