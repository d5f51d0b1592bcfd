#include "ige/fans.hpp"

#include <algorithm>
#include <cmath>

#include "ige/mappings.hpp"

namespace ige {

Fan::Fan(std::vector<DenseMatrix> gens) : generators(std::move(gens)) {
  if (generators.empty()) throw std::invalid_argument("Fan: needs at least one generator");
  const std::size_t m = generators.front().rows(), n = generators.front().cols();
  if (m == 0 || n == 0) throw std::invalid_argument("Fan: degenerate generator shape");
  for (const auto& g : generators)
    if (g.rows() != m || g.cols() != n) throw std::invalid_argument("Fan: generator shape mismatch");
}

ConvexPiece evaluate(const Fan& h, const DenseVector& x) {
  if (x.size() != h.domain_dim()) throw std::invalid_argument("evaluate: dims");
  std::vector<DenseVector> verts;
  for (const auto& g : h.generators) {
    DenseVector v = matvec(g, x);
    bool dup = false;
    for (const auto& kept : verts)
      if (norm2(sub(kept, v)) < 1e-13 * std::max(1.0, norm2(v))) { dup = true; break; }
    if (!dup) verts.push_back(std::move(v));
  }
  return ConvexPiece(std::move(verts), {});
}

double lipschitz_bound(const Fan& h) {
  double l = 0;
  for (const auto& g : h.generators) l = std::max(l, largest_singular_value(g));
  return l;
}

HCone upper_inverse(const Fan& h, const HCone& c) {
  const std::size_t n = h.domain_dim();
  if (c.dim != h.range_dim()) throw std::invalid_argument("upper_inverse: dims");
  std::vector<DenseVector> rows;
  for (const auto& g : h.generators) {
    HCone pre = preimage_cone(g, c);
    for (std::size_t i = 0; i < pre.rows.rows(); ++i) {
      DenseVector r = pre.rows.row(i);
      DenseVector rn = scale(r, 1.0 / norm2(r));
      bool dup = false;
      for (const auto& kept : rows) {
        DenseVector kn = scale(kept, 1.0 / norm2(kept));
        if (norm2(sub(kn, rn)) < 1e-12) { dup = true; break; }
      }
      if (!dup) rows.push_back(std::move(r));
    }
  }
  return HCone(n, DenseMatrix::from_rows(rows, n));
}

std::optional<IncreaseCertificate> increase_certificate(const Fan& h, const Cone& c,
                                                        const Tolerances& tol) {
  if (!is_pointed(c.h, tol))
    throw std::invalid_argument("increase_certificate: cone must be pointed");
  const std::size_t n = h.domain_dim();
  const std::size_t nrows = c.h.rows.rows();
  if (nrows == 0) return std::nullopt;

  // Variables (u, eta): maximize eta s.t. a_j.(L_i u) >= eta |a_j|, |u|inf <= 1.
  DenseMatrix a(nrows * h.generators.size(), n + 1);
  DenseVector b(nrows * h.generators.size());
  std::vector<LpSense> senses(a.rows(), LpSense::GE);
  std::size_t row = 0;
  for (const auto& g : h.generators) {
    for (std::size_t j = 0; j < nrows; ++j, ++row) {
      const DenseVector cj = c.h.rows.row(j);
      DenseVector lhs = matvec_transposed(g, cj);
      for (std::size_t k = 0; k < n; ++k) a(row, k) = lhs[k];
      a(row, n) = -norm2(cj);
    }
  }
  DenseVector obj(n + 1);
  obj[n] = 1.0;
  LpProblem lp = LpProblem::maximize_free(obj, std::move(a), std::move(senses), std::move(b));
  lp.lower.assign(n + 1, -1.0);
  lp.upper.assign(n + 1, 1.0);
  lp.lower[n] = -kInf;
  lp.upper[n] = kInf;
  const LpSolution sol = solve_lp(lp, tol);
  if (sol.status != LpStatus::Optimal || sol.point[n] <= tol.feas_tol) return std::nullopt;

  DenseVector u(n);
  for (std::size_t k = 0; k < n; ++k) u[k] = sol.point[k];
  const double unorm = norm2(u);
  if (unorm <= tol.feas_tol) return std::nullopt;
  // Homogeneity: dividing both u and eta by |u| keeps every inequality valid
  // and puts the witness on the unit sphere.
  return IncreaseCertificate{scale(u, 1.0 / unorm), sol.point[n] / unorm};
}

namespace {

std::vector<DenseVector> ball_directions(std::size_t m, Rng& rng, int budget) {
  std::vector<DenseVector> dirs;
  if (m <= 4) {
    BallPolytope ball = ball_polytope(m, std::max(4, budget));
    dirs = ball.unit_vertices;
    // Circumscribed copies make a pass conservative on the left-hand ball.
    const std::size_t unit_count = dirs.size();
    for (std::size_t i = 0; i < unit_count; ++i)
      dirs.push_back(scale(dirs[i], 1.0 / ball.inner_factor));
  } else {
    for (int i = 0; i < budget; ++i) dirs.push_back(rng.unit_vector(m));
  }
  return dirs;
}

std::vector<DenseVector> domain_directions(std::size_t n, Rng& rng, int budget,
                                           const std::vector<DenseVector>& extra) {
  std::vector<DenseVector> dirs;
  if (n == 1) {
    dirs = {DenseVector{1.0}, DenseVector{-1.0}};
  } else if (n == 2) {
    for (int t = 0; t < budget; ++t) {
      const double ang = 2.0 * 3.14159265358979323846 * t / budget;
      dirs.push_back(DenseVector{std::cos(ang), std::sin(ang)});
    }
  } else {
    for (int t = 0; t < budget; ++t) dirs.push_back(rng.unit_vector(n));
  }
  for (const auto& e : extra) {
    const double nn = norm2(e);
    if (nn > 1e-12) dirs.push_back(scale(e, 1.0 / nn));
  }
  return dirs;
}

}  // namespace

NecessityCheckReport compact_values_necessity_check(const Fan& h, const Cone& c, double alpha,
                                                    const FanSamplingPlan& plan,
                                                    const Tolerances& tol) {
  if (alpha <= 1.0)
    throw std::invalid_argument("compact_values_necessity_check: alpha must exceed 1");
  NecessityCheckReport rep;
  auto cert = increase_certificate(h, c, tol);
  rep.certificate_found = cert.has_value();

  const std::size_t n = h.domain_dim(), m = h.range_dim();
  Rng rng(plan.seed);
  std::vector<DenseVector> extra;
  if (cert) extra.push_back(cert->u);
  const auto dirs = domain_directions(n, rng, plan.directions, extra);
  const auto ball_dirs = ball_directions(m, rng, 16);

  double worst = 0;
  for (int xi = 0; xi < plan.x_samples && worst <= tol.sample_tol; ++xi) {
    DenseVector x = xi == 0 ? DenseVector(n) : rng.ball_point(n, 1.0);
    for (int ri = 0; ri < plan.radii && worst <= tol.sample_tol; ++ri) {
      const double r = std::pow(0.5, ri);
      // Global definitional condition: some z in B(x, r) must satisfy
      // B(H(z), alpha r) subseteq B(H(x) + C, r).
      SetExpr rhs = add_cone(SetExpr::single(evaluate(h, x)), c.v);
      double best_defect = kInf;
      for (const auto& d : dirs) {
        const DenseVector z = add(x, scale(d, r));
        const ConvexPiece hz = evaluate(h, z);
        double defect = 0;
        for (const auto& v : hz.vertices) {
          for (const auto& w : ball_dirs) {
            const DenseVector q = add(v, scale(w, alpha * r));
            defect = std::max(defect, dist_point_to(q, rhs, tol).distance - r);
            if (defect > best_defect) break;  // this z is already worse
          }
          if (defect > best_defect) break;
        }
        best_defect = std::min(best_defect, defect);
        if (best_defect <= tol.sample_tol) break;
      }
      worst = std::max(worst, best_defect);
    }
  }
  rep.definitional_defect = worst;
  rep.definitional_pass = worst <= tol.sample_tol;
  // The converse direction for compact-valued fans: a genuine definitional
  // pass without a certificate cannot happen.
  rep.consistent = !(rep.definitional_pass && !rep.certificate_found);
  return rep;
}

bool openness_increase_condition(const Fan& h, const Cone& c, const Tolerances& tol) {
  for (const auto& g : h.generators)
    if (smallest_singular_value(g) <= tol.feas_tol) return false;
  return interior_point(upper_inverse(h, c.h), tol).has_value();
}

namespace {

/// Minkowski sum of an expression with a polytope piece (no rays on the
/// right): vertex sums per piece.
SetExpr expr_plus_polytope(const SetExpr& a, const ConvexPiece& poly) {
  std::vector<ConvexPiece> pieces;
  for (const auto& p : a.pieces) {
    std::vector<DenseVector> verts;
    verts.reserve(p.vertices.size() * poly.vertices.size());
    for (const auto& v : p.vertices)
      for (const auto& w : poly.vertices) verts.push_back(add(v, w));
    pieces.emplace_back(std::move(verts), p.rays);
  }
  return SetExpr(std::move(pieces));
}

/// Representative points of an expression: vertices, steps along rays, and a
/// few random convex combinations.
std::vector<DenseVector> sample_expr_points(const SetExpr& s, Rng& rng, int ray_steps,
                                            double ray_scale, int combos) {
  std::vector<DenseVector> pts;
  for (const auto& piece : s.pieces) {
    for (const auto& v : piece.vertices) pts.push_back(v);
    for (const auto& r : piece.rays)
      for (int t = 1; t <= ray_steps; ++t)
        for (const auto& v : piece.vertices)
          pts.push_back(add(v, scale(r, ray_scale * std::pow(2.0, t - 1))));
    for (int ci = 0; ci < combos && piece.vertices.size() > 1; ++ci) {
      DenseVector p(s.dim());
      double total = 0;
      std::vector<double> w(piece.vertices.size());
      for (auto& wi : w) { wi = rng.uniform(); total += wi; }
      for (std::size_t j = 0; j < w.size(); ++j)
        p = add(p, scale(piece.vertices[j], w[j] / total));
      pts.push_back(p);
    }
  }
  return pts;
}

double sampled_excess(const SetExpr& a, const SetExpr& b, Rng& rng, int ray_steps,
                      double ray_scale, const Tolerances& tol) {
  double worst = 0;
  for (const auto& p : sample_expr_points(a, rng, ray_steps, ray_scale, 4))
    worst = std::max(worst, dist_point_to(p, b, tol).distance);
  return worst;
}

}  // namespace

PrederivativeReport prederivative_residuals(const PolytopicMapping& f, const Fan& h,
                                            const DenseVector& xbar, std::vector<double> radii,
                                            const FanSamplingPlan& plan, const Tolerances& tol) {
  if (xbar.size() != f.domain_dim) throw std::invalid_argument("prederivative_residuals: dims");
  if (h.domain_dim() != f.domain_dim || h.range_dim() != f.range_dim)
    throw std::invalid_argument("prederivative_residuals: fan shape mismatch");
  std::sort(radii.begin(), radii.end(), std::greater<double>());

  PrederivativeReport rep;
  const SetExpr f_bar = evaluate_mapping(f, xbar);
  Rng rng(plan.seed);
  const std::size_t n = f.domain_dim;

  for (double r : radii) {
    PrederivativeReport::Row row{r, 0.0, 0.0, 0.0};
    std::vector<DenseVector> offsets;
    for (int i = 0; i < plan.x_samples; ++i)
      offsets.push_back(scale(rng.unit_vector(n), r * (i % 2 == 0 ? 1.0 : 0.5)));

    for (const auto& dx : offsets) {
      const DenseVector x = add(xbar, dx);
      const double step = norm2(dx);
      const SetExpr f_x = evaluate_mapping(f, x);
      const ConvexPiece h_dx = evaluate(h, dx);
      // Outer: F(x) subseteq F(xbar) + H(x - xbar) + o(|dx|).
      const SetExpr outer_rhs = expr_plus_polytope(f_bar, h_dx);
      row.outer = std::max(row.outer,
                           sampled_excess(f_x, outer_rhs, rng, plan.ray_steps, r, tol) / step);
      // Inner: F(xbar) + H(x - xbar) subseteq F(x) + o(|dx|).
      row.inner = std::max(row.inner,
                           sampled_excess(outer_rhs, f_x, rng, plan.ray_steps, r, tol) / step);
    }
    // Strict: F(x2) subseteq F(x1) + H(x2 - x1) + o(|x2 - x1|) over pairs.
    for (int i = 0; i + 1 < plan.x_samples; ++i) {
      const DenseVector x1 = add(xbar, scale(rng.unit_vector(n), r * rng.uniform(0.2, 1.0)));
      const DenseVector x2 = add(xbar, scale(rng.unit_vector(n), r * rng.uniform(0.2, 1.0)));
      const double step = norm2(sub(x2, x1));
      if (step < 1e-12) continue;
      const SetExpr rhs = expr_plus_polytope(evaluate_mapping(f, x1), evaluate(h, sub(x2, x1)));
      row.strict = std::max(
          row.strict, sampled_excess(evaluate_mapping(f, x2), rhs, rng, plan.ray_steps, r, tol) / step);
    }
    rep.rows.push_back(row);
  }
  return rep;
}

}  // namespace ige
