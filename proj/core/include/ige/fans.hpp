#pragma once

#include <optional>

#include "ige/setvalues.hpp"

namespace ige {

struct PolytopicMapping;

/// Finitely generated fan H(x) = {Lx : L in conv{L_1,...,L_p}}. Values are
/// polytopes conv{L_i x}; H(0) = {0} always.
struct Fan {
  std::vector<DenseMatrix> generators;

  Fan() = default;
  explicit Fan(std::vector<DenseMatrix> gens);
  std::size_t domain_dim() const { return generators.front().cols(); }
  std::size_t range_dim() const { return generators.front().rows(); }
};

/// H(x) as a polytope piece (convex hull of the generator images).
ConvexPiece evaluate(const Fan& h, const DenseVector& x);

/// max_i |L_i| in operator norm; a global Lipschitz constant of H for the
/// Hausdorff distance.
double lipschitz_bound(const Fan& h);

/// H^+(C) = intersection of the generator preimages: stacked inequalities.
HCone upper_inverse(const Fan& h, const HCone& c);

/// Witness (u, eta) of H(u) + eta*B subseteq C with |u| = 1; the key
/// sufficient condition for the global metric C-increase of the fan, with
/// exact bound at least 1 + eta.
struct IncreaseCertificate {
  DenseVector u;
  double eta = 0;
};

/// Solves the certificate LP  max eta  s.t.  a_j.(L_i u) >= eta|a_j|,
/// |u|_inf <= 1, then rescales to the Euclidean unit sphere. Requires a
/// pointed C; returns nullopt when no positive margin exists (e.g. empty
/// interior).
std::optional<IncreaseCertificate> increase_certificate(const Fan& h, const Cone& c,
                                                        const Tolerances& tol = {});

struct FanSamplingPlan {
  int x_samples = 12;
  int directions = 32;
  int radii = 4;
  int ray_steps = 3;
  std::uint64_t seed = 42;
};

struct NecessityCheckReport {
  bool definitional_pass = false;
  double definitional_defect = 0;
  bool certificate_found = false;
  bool consistent = false;  // pass without certificate would contradict the converse
};

/// Compact-valued fans admit a certificate exactly when they are globally
/// metrically C-increasing; a definitional sampling pass at margin alpha > 1
/// with no certificate flags a numerical artifact.
NecessityCheckReport compact_values_necessity_check(const Fan& h, const Cone& c, double alpha,
                                                    const FanSamplingPlan& plan = {},
                                                    const Tolerances& tol = {});

/// Openness route: every generator surjective (positive smallest singular
/// value) and the upper inverse has interior. Implies certificate existence.
bool openness_increase_condition(const Fan& h, const Cone& c, const Tolerances& tol = {});

struct PrederivativeReport {
  struct Row {
    double radius;
    double outer;
    double inner;
    double strict;
  };
  std::vector<Row> rows;  // sorted by decreasing radius

  /// Residual ratio at the smallest sampled radius.
  double final_outer() const { return rows.back().outer; }
  double final_inner() const { return rows.back().inner; }
  double final_strict() const { return rows.back().strict; }
  bool outer_pass(double eps) const { return final_outer() <= eps; }
  bool inner_pass(double eps) const { return final_inner() <= eps; }
  bool strict_pass(double eps) const { return final_strict() <= eps; }
};

/// Sampled one-sided Hausdorff violations of the prederivative inclusions of
/// h against F near xbar, normalized by the step length. Identically zero for
/// the affine polytopic class with its induced fan (outer and strict; inner
/// too when p = 1); a falsifier, not a proof, elsewhere.
PrederivativeReport prederivative_residuals(const PolytopicMapping& f, const Fan& h,
                                            const DenseVector& xbar, std::vector<double> radii,
                                            const FanSamplingPlan& plan = {},
                                            const Tolerances& tol = {});

}  // namespace ige
