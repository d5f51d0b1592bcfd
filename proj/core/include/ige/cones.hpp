#pragma once

#include <optional>

#include "ige/numkit.hpp"

namespace ige {

struct DimensionGuardError : IgeError {
  using IgeError::IgeError;
};

struct NotInSetError : IgeError {
  using IgeError::IgeError;
};

/// Polyhedral cone in inequality form {y : Ay >= 0}. Zero rows are rejected;
/// an empty row list means the whole space.
struct HCone {
  std::size_t dim = 0;
  DenseMatrix rows;  // one inward normal per row

  HCone() = default;
  HCone(std::size_t dim, DenseMatrix rows);
  static HCone full_space(std::size_t dim) { return HCone(dim, DenseMatrix(0, dim)); }
  static HCone orthant(std::size_t dim) { return HCone(dim, identity(dim)); }

  bool contains(const DenseVector& y, double feas_tol = 1e-9) const;
  /// min_j a_j.y / |a_j| (+inf when there are no rows).
  double membership_slack(const DenseVector& y) const;
};

/// Polyhedral cone in generator form cone(rays); rays are unit length and
/// nonzero, an empty list means {0}. Lineality shows up as paired +/- rays.
struct VCone {
  std::size_t dim = 0;
  std::vector<DenseVector> rays;

  VCone() = default;
  VCone(std::size_t dim, std::vector<DenseVector> rays);  // normalizes, drops duplicates

  bool contains(const DenseVector& y, const Tolerances& tol = {}) const;
  /// Euclidean distance of y to the cone (0 exactly on members).
  double distance(const DenseVector& y, const Tolerances& tol = {}) const;
};

/// Convex polyhedron {x : Gx >= g}. Zero rows are tolerated (a row 0 >= g
/// with g > 0 encodes infeasibility); emptiness is decided by LP.
struct Polyhedron {
  std::size_t dim = 0;
  DenseMatrix mat;  // G
  DenseVector rhs;  // g

  Polyhedron() = default;
  Polyhedron(std::size_t dim, DenseMatrix g_mat, DenseVector g_rhs);
  static Polyhedron full_space(std::size_t dim) {
    return Polyhedron(dim, DenseMatrix(0, dim), DenseVector(0));
  }

  bool contains(const DenseVector& x, double feas_tol = 1e-9) const;
  bool is_empty(const Tolerances& tol = {}) const;
  std::vector<Halfspace> halfspaces() const;
};

/// Double description: inequality form to generators (Motzkin incremental
/// insertion, adjacency by rank, NNLS pruning of non-extreme rays).
/// Dimension is capped at 10 to keep the enumeration on a desk scale.
VCone dd_convert(const HCone& c, const Tolerances& tol = {});
HCone dd_convert_back(const VCone& v, const Tolerances& tol = {});

/// Negative dual cone; finite Farkas duality makes both directions exact.
VCone dual_cone(const HCone& c);
HCone dual_cone(const VCone& v);

/// Contingent cone of a convex polyhedron at a member point: the active
/// constraints relaxed to homogeneous inequalities. For convex polyhedra this
/// coincides with the feasible-direction cones.
HCone tangent_cone(const Polyhedron& s, const DenseVector& xbar, const Tolerances& tol = {});

/// Normal cone = dual of the tangent cone.
VCone normal_cone(const Polyhedron& s, const DenseVector& xbar, const Tolerances& tol = {});

/// {x : Lx in C} as an HCone (rows A_C * L with zero rows dropped).
HCone preimage_cone(const DenseMatrix& lin, const HCone& c);

/// Generators of Q^- + L^T(C^-), the dual of Q cap L^{-1}(C). Polyhedral
/// sums of finitely generated cones are closed, so no closure is needed.
VCone dual_calculus_sum(const HCone& q, const DenseMatrix& lin, const HCone& c);

struct InteriorPoint {
  DenseVector point;
  double slack;
};

/// Point with uniformly positive row slack, or nullopt when the cone has
/// empty interior. For a row-free cone the origin is returned with +inf slack.
std::optional<InteriorPoint> interior_point(const HCone& c, const Tolerances& tol = {});

/// True iff the cone contains no line (C cap -C = {0}), decided by LPs.
bool is_pointed(const HCone& c, const Tolerances& tol = {});

/// A cone carried in both representations; conversion happens once here.
struct Cone {
  HCone h;
  VCone v;

  static Cone from_h(HCone c, const Tolerances& tol = {});
  static Cone from_v(VCone c, const Tolerances& tol = {});
};

}  // namespace ige
