#include "ige/setvalues.hpp"

#include <algorithm>
#include <cmath>

namespace ige {

ConvexPiece::ConvexPiece(std::vector<DenseVector> vs, std::vector<DenseVector> rs)
    : vertices(std::move(vs)) {
  if (vertices.empty()) throw std::invalid_argument("ConvexPiece: needs at least one vertex");
  const std::size_t d = vertices.front().size();
  for (const auto& v : vertices)
    if (v.size() != d) throw std::invalid_argument("ConvexPiece: vertex dimension mismatch");
  for (auto& r : rs) {
    if (r.size() != d) throw std::invalid_argument("ConvexPiece: ray dimension mismatch");
    const double n = norm2(r);
    if (n < 1e-14) throw std::invalid_argument("ConvexPiece: zero ray");
    rays.push_back(scale(r, 1.0 / n));
  }
}

SetExpr::SetExpr(std::vector<ConvexPiece> ps) : pieces(std::move(ps)) {
  if (pieces.empty()) throw std::invalid_argument("SetExpr: needs at least one piece");
  const std::size_t d = pieces.front().dim();
  for (const auto& p : pieces)
    if (p.dim() != d) throw std::invalid_argument("SetExpr: piece dimension mismatch");
}

namespace {

/// Least squares over the generator weights of one piece:
///   min |V lam + R mu - y|  s.t. lam >= 0, sum lam = 1, mu >= 0.
/// Active-set in the style of Lawson-Hanson, with the simplex equality kept
/// inside the KKT solve.
DistanceResult piece_distance(const DenseVector& y, const ConvexPiece& piece,
                              const Tolerances& tol) {
  const std::size_t d = y.size();
  const std::size_t nv = piece.vertices.size();
  const std::size_t nr = piece.rays.size();

  if (nv == 1 && nr == 0) {
    DenseVector diff = sub(y, piece.vertices[0]);
    return {norm2(diff), piece.vertices[0], 0.0};
  }
  if (nv == 1) {
    // Single vertex: plain NNLS against the rays of the shifted target.
    DenseMatrix g(d, nr);
    for (std::size_t j = 0; j < nr; ++j)
      for (std::size_t i = 0; i < d; ++i) g(i, j) = piece.rays[j][i];
    NnlsResult r = nnls(g, sub(y, piece.vertices[0]), tol);
    return {r.residual_norm, add(piece.vertices[0], r.point), r.kkt_residual};
  }

  const std::size_t k = nv + nr;
  auto column = [&](std::size_t j) -> const DenseVector& {
    return j < nv ? piece.vertices[j] : piece.rays[j - nv];
  };

  std::vector<double> z(k, 0.0);
  std::vector<char> passive(k, 0);
  // Start from the nearest vertex: feasible and usually close.
  std::size_t start = 0;
  double best = kInf;
  for (std::size_t j = 0; j < nv; ++j) {
    const double dist = norm2(sub(y, piece.vertices[j]));
    if (dist < best) { best = dist; start = j; }
  }
  z[start] = 1.0;
  passive[start] = 1;

  auto point_of = [&](const std::vector<double>& w) {
    DenseVector p(d);
    for (std::size_t j = 0; j < k; ++j)
      if (w[j] != 0) p = add(p, scale(column(j), w[j]));
    return p;
  };

  // Equality-constrained LS on the passive support. Returns false when the
  // KKT system is numerically singular.
  auto solve_support = [&](const std::vector<std::size_t>& idx, std::vector<double>& out) {
    const std::size_t np = idx.size();
    DenseMatrix kkt(np + 1, np + 1);
    DenseVector rhs(np + 1);
    for (std::size_t a = 0; a < np; ++a) {
      for (std::size_t b = a; b < np; ++b) {
        const double s = dot(column(idx[a]), column(idx[b]));
        kkt(a, b) = kkt(b, a) = s;
      }
      rhs[a] = dot(column(idx[a]), y);
      const double e = idx[a] < nv ? 1.0 : 0.0;
      kkt(a, np) = kkt(np, a) = e;
    }
    rhs[np] = 1.0;
    try {
      DenseVector sol = solve_linear(kkt, rhs);
      out.assign(np, 0.0);
      for (std::size_t a = 0; a < np; ++a) out[a] = sol[a];
      return true;
    } catch (const SingularMatrixError&) {
      return false;
    }
  };

  int guard = tol.nnls_max_iter;
  while (true) {
    if (--guard <= 0) throw IterationLimitError("dist_point_to: iteration cap exceeded");

    DenseVector grad = sub(point_of(z), y);  // gradient direction in range space
    // Multiplier of the simplex row from any positive vertex weight.
    double nu = 0;
    bool have_nu = false;
    for (std::size_t j = 0; j < nv; ++j)
      if (passive[j]) { nu = -dot(column(j), grad); have_nu = true; break; }
    if (!have_nu) nu = 0;

    // Most violating candidate.
    double worst = -tol.kkt_tol * std::max(1.0, dot(y, y));
    std::size_t enter = k;
    for (std::size_t j = 0; j < k; ++j) {
      if (passive[j]) continue;
      const double g = dot(column(j), grad);
      const double r = j < nv ? g + nu : g;
      if (r < worst) { worst = r; enter = j; }
    }
    if (enter == k) break;
    passive[enter] = 1;

    int inner_guard = tol.nnls_max_iter;
    while (true) {
      if (--inner_guard <= 0) throw IterationLimitError("dist_point_to: inner cap exceeded");
      std::vector<std::size_t> idx;
      for (std::size_t j = 0; j < k; ++j)
        if (passive[j]) idx.push_back(j);
      std::vector<double> sol;
      if (!solve_support(idx, sol)) {
        // Dependent column: back out the newest one.
        passive[enter] = 0;
        break;
      }
      bool ok = true;
      for (double w : sol)
        if (w <= 0) { ok = false; break; }
      if (ok) {
        std::fill(z.begin(), z.end(), 0.0);
        for (std::size_t a = 0; a < idx.size(); ++a) z[idx[a]] = sol[a];
        break;
      }
      double alpha = 1.0;
      for (std::size_t a = 0; a < idx.size(); ++a) {
        if (sol[a] > 0) continue;
        const double cur = z[idx[a]];
        alpha = std::min(alpha, cur / (cur - sol[a]));
      }
      for (std::size_t a = 0; a < idx.size(); ++a) {
        const std::size_t j = idx[a];
        z[j] += alpha * (sol[a] - z[j]);
        if (z[j] <= 1e-14) {
          z[j] = 0;
          if (j != enter) passive[j] = 0;
        }
      }
      // Keep at least one vertex passive so the simplex row stays solvable.
      bool any_vertex = false;
      for (std::size_t j = 0; j < nv; ++j) any_vertex = any_vertex || passive[j];
      if (!any_vertex) {
        passive[start] = 1;
        z[start] = 0.0;
      }
    }
  }

  DenseVector nearest = point_of(z);
  DenseVector grad = sub(nearest, y);
  double nu = 0;
  for (std::size_t j = 0; j < nv; ++j)
    if (z[j] > 0) { nu = -dot(column(j), grad); break; }
  double kkt = 0;
  for (std::size_t j = 0; j < k; ++j) {
    const double g = dot(column(j), grad);
    const double r = j < nv ? g + nu : g;
    kkt = std::max(kkt, -r);
    kkt = std::max(kkt, std::abs(z[j] * r));
  }
  return {norm2(grad), nearest, std::max(0.0, kkt)};
}

}  // namespace

DistanceResult dist_point_to(const DenseVector& y, const ConvexPiece& p, const Tolerances& tol) {
  return piece_distance(y, p, tol);
}

DistanceResult dist_point_to(const DenseVector& y, const SetExpr& s, const Tolerances& tol) {
  DistanceResult best;
  best.distance = kInf;
  for (const auto& piece : s.pieces) {
    DistanceResult r = piece_distance(y, piece, tol);
    if (r.distance < best.distance) best = r;
  }
  return best;
}

double excess_over_cone(const SetExpr& s, const Cone& c, const Tolerances& tol) {
  // A ray leaving C pushes the distance to +inf linearly.
  for (const auto& piece : s.pieces)
    for (const auto& r : piece.rays)
      if (!c.h.contains(r, tol.feas_tol)) return kInf;
  double worst = 0;
  for (const auto& piece : s.pieces)
    for (const auto& v : piece.vertices) worst = std::max(worst, c.v.distance(v, tol));
  return worst;
}

SetExpr add_cone(const SetExpr& s, const VCone& c) {
  std::vector<ConvexPiece> pieces;
  pieces.reserve(s.pieces.size());
  for (const auto& p : s.pieces) {
    std::vector<DenseVector> rays = p.rays;
    for (const auto& r : c.rays) rays.push_back(r);
    pieces.emplace_back(p.vertices, std::move(rays));
  }
  return SetExpr(std::move(pieces));
}

BallPolytope ball_polytope(std::size_t dim, int ngon) {
  if (dim == 0 || dim > 4)
    throw DimensionGuardError("ball_polytope: supported dimensions are 1..4");
  if (ngon < 4) throw std::invalid_argument("ball_polytope: ngon too small");
  BallPolytope out;
  if (dim == 1) {
    out.unit_vertices = {DenseVector{1.0}, DenseVector{-1.0}};
    out.inner_factor = 1.0;
    return out;
  }
  const double pi = 3.14159265358979323846;
  const double apothem = std::cos(pi / ngon);
  auto push_unique = [&](const DenseVector& v) {
    for (const auto& u : out.unit_vertices)
      if (norm2(sub(u, v)) < 1e-12) return;
    out.unit_vertices.push_back(v);
  };
  for (std::size_t i = 0; i < dim; ++i) {
    for (std::size_t j = i + 1; j < dim; ++j) {
      for (int t = 0; t < ngon; ++t) {
        const double a = 2.0 * pi * t / ngon;
        DenseVector v(dim);
        v[i] = std::cos(a);
        v[j] = std::sin(a);
        push_unique(v);
      }
    }
  }
  // Worst direction is the balanced one: the best coordinate plane only sees
  // a sqrt(2/d) fraction of it.
  out.inner_factor = (dim == 2 ? 1.0 : std::sqrt(2.0 / static_cast<double>(dim))) * apothem;
  return out;
}

EnlargePair enlarge(const SetExpr& s, double r, int ngon) {
  if (r < 0) throw std::invalid_argument("enlarge: radius must be >= 0");
  if (r == 0) return {s, s, 0.0};
  const std::size_t d = s.dim();
  const BallPolytope ball = ball_polytope(d, ngon);
  auto sum_with = [&](double vertex_scale) {
    std::vector<ConvexPiece> pieces;
    for (const auto& p : s.pieces) {
      std::vector<DenseVector> verts;
      verts.reserve(p.vertices.size() * ball.unit_vertices.size());
      for (const auto& v : p.vertices)
        for (const auto& w : ball.unit_vertices) verts.push_back(add(v, scale(w, vertex_scale)));
      pieces.emplace_back(std::move(verts), p.rays);
    }
    return SetExpr(std::move(pieces));
  };
  EnlargePair out;
  out.inner = sum_with(r);                        // vertices on the r-sphere
  out.outer = sum_with(r / ball.inner_factor);    // scaled copy covering the ball
  out.gap = 1.0 - ball.inner_factor;
  return out;
}

std::pair<double, double> conic_extension_excess_check(const SetExpr& s, const Cone& c,
                                                       const Tolerances& tol) {
  const double rhs = excess_over_cone(s, c, tol);
  const double lhs = excess_over_cone(add_cone(s, c.v), c, tol);
  return {lhs, rhs};
}

}  // namespace ige
