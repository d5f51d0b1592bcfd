#pragma once

#include <utility>

#include "ige/cones.hpp"

namespace ige {

/// conv(vertices) + cone(rays): one closed convex generator-represented piece.
/// Nonempty by construction (at least one vertex); rays are unit length.
struct ConvexPiece {
  std::vector<DenseVector> vertices;
  std::vector<DenseVector> rays;

  ConvexPiece() = default;
  ConvexPiece(std::vector<DenseVector> vs, std::vector<DenseVector> rs);
  std::size_t dim() const { return vertices.empty() ? 0 : vertices.front().size(); }
};

/// Finite union of pieces; the value model for set-valued mappings.
struct SetExpr {
  std::vector<ConvexPiece> pieces;

  SetExpr() = default;
  explicit SetExpr(std::vector<ConvexPiece> ps);
  static SetExpr single(ConvexPiece p) { return SetExpr({std::move(p)}); }
  std::size_t dim() const { return pieces.front().dim(); }
};

struct DistanceResult {
  double distance = 0;
  DenseVector nearest;
  double kkt_residual = 0;
};

/// Euclidean distance of a point to the union: per-piece constrained least
/// squares (simplex weights on vertices, nonnegative weights on rays), min
/// over pieces. Zero exactly on members.
DistanceResult dist_point_to(const DenseVector& y, const SetExpr& s, const Tolerances& tol = {});
DistanceResult dist_point_to(const DenseVector& y, const ConvexPiece& p, const Tolerances& tol = {});

/// exc(S, C) = sup_{a in S} dist(a, C). +inf exactly when some ray of some
/// piece leaves C; otherwise the sup is attained at a vertex because
/// dist(., C) is convex and non-increasing along rays of C.
double excess_over_cone(const SetExpr& s, const Cone& c, const Tolerances& tol = {});

/// Appends the generator rays of C to every piece: the value S + C.
SetExpr add_cone(const SetExpr& s, const VCone& c);

/// Polytope surrogate for the unit ball: vertices on the unit sphere
/// (a regular ngon per 2-D coordinate plane), and the factor f <= 1 with
/// f*B subseteq conv(vertices) subseteq B. Dimension capped at 4.
struct BallPolytope {
  std::vector<DenseVector> unit_vertices;
  double inner_factor;
};
BallPolytope ball_polytope(std::size_t dim, int ngon);

/// Inner and outer polytopal stand-ins for S + r*B, with the recorded
/// fraction gap: inner subseteq S + rB subseteq outer and the Hausdorff gap
/// is at most r*gap on each side.
struct EnlargePair {
  SetExpr inner;
  SetExpr outer;
  double gap;
};
EnlargePair enlarge(const SetExpr& s, double r, int ngon = 64);

/// Both sides of the conic-extension identity exc(S+C, C) = exc(S, C).
std::pair<double, double> conic_extension_excess_check(const SetExpr& s, const Cone& c,
                                                       const Tolerances& tol = {});

}  // namespace ige
