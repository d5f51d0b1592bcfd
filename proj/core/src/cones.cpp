#include "ige/cones.hpp"

#include <algorithm>
#include <cmath>

namespace ige {

namespace {

constexpr double kRayDedupeTol = 1e-9;

DenseVector normalized(const DenseVector& v) {
  const double n = norm2(v);
  return n > 0 ? scale(v, 1.0 / n) : v;
}

bool near_equal(const DenseVector& a, const DenseVector& b, double tol) {
  for (std::size_t i = 0; i < a.size(); ++i)
    if (std::abs(a[i] - b[i]) > tol) return false;
  return true;
}

/// Rank of a set of vectors by Gaussian elimination.
std::size_t rank_of(std::vector<DenseVector> vs, double tol = 1e-9) {
  std::size_t rank = 0;
  if (vs.empty()) return 0;
  const std::size_t n = vs[0].size();
  for (std::size_t col = 0; col < n && rank < vs.size(); ++col) {
    std::size_t piv = rank;
    double best = std::abs(vs[rank][col]);
    for (std::size_t i = rank + 1; i < vs.size(); ++i)
      if (std::abs(vs[i][col]) > best) { best = std::abs(vs[i][col]); piv = i; }
    if (best < tol) continue;
    std::swap(vs[rank], vs[piv]);
    for (std::size_t i = 0; i < vs.size(); ++i) {
      if (i == rank) continue;
      const double f = vs[i][col] / vs[rank][col];
      if (f == 0) continue;
      for (std::size_t j = 0; j < n; ++j) vs[i][j] -= f * vs[rank][j];
    }
    ++rank;
  }
  return rank;
}

}  // namespace

HCone::HCone(std::size_t d, DenseMatrix r) : dim(d), rows(std::move(r)) {
  if (rows.cols() != dim && rows.rows() > 0)
    throw std::invalid_argument("HCone: row width mismatch");
  for (std::size_t i = 0; i < rows.rows(); ++i)
    if (norm2(rows.row(i)) < 1e-14) throw std::invalid_argument("HCone: zero row");
}

bool HCone::contains(const DenseVector& y, double feas_tol) const {
  for (std::size_t i = 0; i < rows.rows(); ++i) {
    const DenseVector a = rows.row(i);
    if (dot(a, y) < -feas_tol * norm2(a) * std::max(1.0, norm2(y))) return false;
  }
  return true;
}

double HCone::membership_slack(const DenseVector& y) const {
  double s = kInf;
  for (std::size_t i = 0; i < rows.rows(); ++i) {
    const DenseVector a = rows.row(i);
    s = std::min(s, dot(a, y) / norm2(a));
  }
  return s;
}

VCone::VCone(std::size_t d, std::vector<DenseVector> rs) : dim(d) {
  for (auto& r : rs) {
    if (r.size() != dim) throw std::invalid_argument("VCone: ray dimension mismatch");
    const double n = norm2(r);
    if (n < 1e-14) throw std::invalid_argument("VCone: zero ray");
    r = scale(r, 1.0 / n);
    bool dup = false;
    for (const auto& kept : rays)
      if (near_equal(kept, r, kRayDedupeTol)) { dup = true; break; }
    if (!dup) rays.push_back(r);
  }
}

double VCone::distance(const DenseVector& y, const Tolerances& tol) const {
  if (rays.empty()) return norm2(y);
  DenseMatrix g(dim, rays.size());
  for (std::size_t j = 0; j < rays.size(); ++j)
    for (std::size_t i = 0; i < dim; ++i) g(i, j) = rays[j][i];
  return nnls(g, y, tol).residual_norm;
}

bool VCone::contains(const DenseVector& y, const Tolerances& tol) const {
  return distance(y, tol) <= tol.feas_tol * std::max(1.0, norm2(y));
}

Polyhedron::Polyhedron(std::size_t d, DenseMatrix g_mat, DenseVector g_rhs)
    : dim(d), mat(std::move(g_mat)), rhs(std::move(g_rhs)) {
  if (mat.rows() != rhs.size()) throw std::invalid_argument("Polyhedron: rhs size mismatch");
  if (mat.cols() != dim && mat.rows() > 0)
    throw std::invalid_argument("Polyhedron: row width mismatch");
}

bool Polyhedron::contains(const DenseVector& x, double feas_tol) const {
  for (std::size_t i = 0; i < mat.rows(); ++i) {
    const DenseVector g = mat.row(i);
    const double scale_i = std::max(1.0, norm2(g) * norm2(x));
    if (dot(g, x) < rhs[i] - feas_tol * scale_i) return false;
  }
  return true;
}

bool Polyhedron::is_empty(const Tolerances& tol) const {
  if (mat.rows() == 0) return false;
  std::vector<LpSense> s(mat.rows(), LpSense::GE);
  LpProblem p = LpProblem::maximize_free(DenseVector(dim), mat, std::move(s), rhs);
  return solve_lp(p, tol).status == LpStatus::Infeasible;
}

std::vector<Halfspace> Polyhedron::halfspaces() const {
  std::vector<Halfspace> hs;
  hs.reserve(mat.rows());
  for (std::size_t i = 0; i < mat.rows(); ++i) hs.push_back({mat.row(i), rhs[i]});
  return hs;
}

namespace {

/// Incremental double description state: lineality basis + extreme rays of
/// the pointed part, with the processed inequality rows for adjacency tests.
struct DdState {
  std::size_t dim;
  std::vector<DenseVector> basis;  // lineality
  std::vector<DenseVector> rays;
  std::vector<DenseVector> processed;  // normalized rows seen so far

  std::vector<std::size_t> active_rows(const DenseVector& r, double tol = 1e-8) const {
    std::vector<std::size_t> act;
    for (std::size_t s = 0; s < processed.size(); ++s)
      if (std::abs(dot(processed[s], r)) <= tol) act.push_back(s);
    return act;
  }
};

void prune_rays(DdState& st, const Tolerances& tol) {
  // Dedupe.
  std::vector<DenseVector> kept;
  for (const auto& r : st.rays) {
    bool dup = false;
    for (const auto& k : kept)
      if (near_equal(k, r, kRayDedupeTol)) { dup = true; break; }
    if (!dup) kept.push_back(r);
  }
  st.rays = std::move(kept);
  // Drop rays absorbed by the lineality space or expressible by the others.
  for (std::size_t i = 0; i < st.rays.size();) {
    std::vector<DenseVector> gens;
    for (std::size_t j = 0; j < st.rays.size(); ++j)
      if (j != i) gens.push_back(st.rays[j]);
    for (const auto& b : st.basis) {
      gens.push_back(b);
      gens.push_back(scale(b, -1.0));
    }
    bool redundant = false;
    if (gens.empty()) {
      redundant = false;
    } else {
      DenseMatrix g(st.dim, gens.size());
      for (std::size_t j = 0; j < gens.size(); ++j)
        for (std::size_t d = 0; d < st.dim; ++d) g(d, j) = gens[j][d];
      redundant = nnls(g, st.rays[i], tol).residual_norm <= 1e-9;
    }
    if (redundant)
      st.rays.erase(st.rays.begin() + static_cast<long>(i));
    else
      ++i;
  }
}

void dd_insert(DdState& st, const DenseVector& row_in, const Tolerances& tol) {
  const DenseVector h = normalized(row_in);
  // Case 1: the halfspace cuts the lineality space.
  std::size_t cut = st.basis.size();
  double best = 1e-10;
  for (std::size_t i = 0; i < st.basis.size(); ++i) {
    const double d = std::abs(dot(h, st.basis[i]));
    if (d > best) { best = d; cut = i; }
  }
  if (cut != st.basis.size()) {
    DenseVector b0 = st.basis[cut];
    if (dot(h, b0) < 0) b0 = scale(b0, -1.0);
    const double hb0 = dot(h, b0);
    std::vector<DenseVector> nb;
    for (std::size_t i = 0; i < st.basis.size(); ++i) {
      if (i == cut) continue;
      DenseVector b = sub(st.basis[i], scale(b0, dot(h, st.basis[i]) / hb0));
      if (norm2(b) > 1e-12) nb.push_back(normalized(b));
    }
    st.basis = std::move(nb);
    for (auto& r : st.rays) {
      r = sub(r, scale(b0, dot(h, r) / hb0));
      if (norm2(r) > 1e-12) r = normalized(r);
    }
    st.rays.erase(std::remove_if(st.rays.begin(), st.rays.end(),
                                 [](const DenseVector& r) { return norm2(r) <= 1e-12; }),
                  st.rays.end());
    st.rays.push_back(normalized(b0));
    st.processed.push_back(h);
    prune_rays(st, tol);
    return;
  }

  // Case 2: lineality is orthogonal to h; split rays and combine across.
  std::vector<DenseVector> plus, zero, minus;
  for (const auto& r : st.rays) {
    const double d = dot(h, r);
    if (d > 1e-10) plus.push_back(r);
    else if (d < -1e-10) minus.push_back(r);
    else zero.push_back(r);
  }
  if (minus.empty()) {
    st.processed.push_back(h);
    return;  // cut not binding
  }
  const std::size_t eff_dim = st.dim - st.basis.size();
  std::vector<DenseVector> combos;
  for (const auto& rp : plus) {
    for (const auto& rm : minus) {
      if (eff_dim > 2) {
        // Adjacency by rank of the common active inequalities.
        auto ap = st.active_rows(rp);
        auto am = st.active_rows(rm);
        std::vector<DenseVector> common;
        for (auto s : ap)
          if (std::find(am.begin(), am.end(), s) != am.end()) common.push_back(st.processed[s]);
        if (rank_of(common) + 2 < eff_dim) continue;
      }
      DenseVector w = sub(scale(rm, dot(h, rp)), scale(rp, dot(h, rm)));
      if (norm2(w) > 1e-12) combos.push_back(normalized(w));
    }
  }
  st.rays.clear();
  for (auto& r : plus) st.rays.push_back(r);
  for (auto& r : zero) st.rays.push_back(r);
  for (auto& r : combos) st.rays.push_back(r);
  st.processed.push_back(h);
  prune_rays(st, tol);
}

}  // namespace

VCone dd_convert(const HCone& c, const Tolerances& tol) {
  if (c.dim > 10) throw DimensionGuardError("dd_convert: dimension above enumeration cap 10");
  DdState st;
  st.dim = c.dim;
  for (std::size_t i = 0; i < c.dim; ++i) {
    DenseVector e(c.dim);
    e[i] = 1.0;
    st.basis.push_back(e);
  }
  for (std::size_t i = 0; i < c.rows.rows(); ++i) dd_insert(st, c.rows.row(i), tol);

  std::vector<DenseVector> rays = st.rays;
  for (const auto& b : st.basis) {
    rays.push_back(b);
    rays.push_back(scale(b, -1.0));
  }
  return VCone(c.dim, std::move(rays));
}

HCone dd_convert_back(const VCone& v, const Tolerances& tol) {
  // cone(R) = (cone(R)^-)^- for closed finitely generated cones: enumerate
  // the generators W of the dual and return {y : w.y <= 0 for all w in W}.
  const HCone dual_h = dual_cone(v);
  const VCone dual_gen = dd_convert(dual_h, tol);
  std::vector<DenseVector> rows;
  rows.reserve(dual_gen.rays.size());
  for (const auto& w : dual_gen.rays) rows.push_back(scale(w, -1.0));
  return HCone(v.dim, DenseMatrix::from_rows(rows, v.dim));
}

VCone dual_cone(const HCone& c) {
  std::vector<DenseVector> rays;
  rays.reserve(c.rows.rows());
  for (std::size_t i = 0; i < c.rows.rows(); ++i) rays.push_back(scale(c.rows.row(i), -1.0));
  return VCone(c.dim, std::move(rays));
}

HCone dual_cone(const VCone& v) {
  std::vector<DenseVector> rows;
  rows.reserve(v.rays.size());
  for (const auto& r : v.rays) rows.push_back(scale(r, -1.0));
  return HCone(v.dim, DenseMatrix::from_rows(rows, v.dim));
}

HCone tangent_cone(const Polyhedron& s, const DenseVector& xbar, const Tolerances& tol) {
  if (!s.contains(xbar, tol.feas_tol))
    throw NotInSetError("tangent_cone: reference point violates the polyhedron");
  std::vector<DenseVector> active;
  for (std::size_t i = 0; i < s.mat.rows(); ++i) {
    const DenseVector g = s.mat.row(i);
    const double gn = norm2(g);
    if (gn < 1e-14) continue;  // vacuous row
    const double scale_i = std::max(1.0, gn * norm2(xbar));
    if (std::abs(dot(g, xbar) - s.rhs[i]) <= tol.feas_tol * scale_i) active.push_back(g);
  }
  return HCone(s.dim, DenseMatrix::from_rows(active, s.dim));
}

VCone normal_cone(const Polyhedron& s, const DenseVector& xbar, const Tolerances& tol) {
  return dual_cone(tangent_cone(s, xbar, tol));
}

HCone preimage_cone(const DenseMatrix& lin, const HCone& c) {
  if (lin.rows() != c.dim) throw std::invalid_argument("preimage_cone: dims");
  std::vector<DenseVector> rows;
  for (std::size_t i = 0; i < c.rows.rows(); ++i) {
    DenseVector r = matvec_transposed(lin, c.rows.row(i));
    if (norm2(r) > 1e-13) rows.push_back(std::move(r));
  }
  return HCone(lin.cols(), DenseMatrix::from_rows(rows, lin.cols()));
}

VCone dual_calculus_sum(const HCone& q, const DenseMatrix& lin, const HCone& c) {
  if (q.dim != lin.cols() || c.dim != lin.rows())
    throw std::invalid_argument("dual_calculus_sum: dims");
  std::vector<DenseVector> rays;
  for (std::size_t i = 0; i < q.rows.rows(); ++i) rays.push_back(scale(q.rows.row(i), -1.0));
  for (std::size_t i = 0; i < c.rows.rows(); ++i) {
    DenseVector r = matvec_transposed(lin, scale(c.rows.row(i), -1.0));
    if (norm2(r) > 1e-13) rays.push_back(std::move(r));
  }
  return VCone(q.dim, std::move(rays));
}

std::optional<InteriorPoint> interior_point(const HCone& c, const Tolerances& tol) {
  if (c.rows.rows() == 0) return InteriorPoint{DenseVector(c.dim), kInf};
  const std::size_t n = c.dim;
  // Variables (y, s): maximize s subject to a_j.y >= s|a_j| and |y|_inf <= 1.
  DenseMatrix a(c.rows.rows(), n + 1);
  DenseVector b(c.rows.rows());
  std::vector<LpSense> senses(c.rows.rows(), LpSense::GE);
  for (std::size_t i = 0; i < c.rows.rows(); ++i) {
    const DenseVector r = c.rows.row(i);
    for (std::size_t j = 0; j < n; ++j) a(i, j) = r[j];
    a(i, n) = -norm2(r);
  }
  DenseVector obj(n + 1);
  obj[n] = 1.0;
  LpProblem p = LpProblem::maximize_free(obj, std::move(a), std::move(senses), std::move(b));
  p.lower.assign(n + 1, -1.0);
  p.upper.assign(n + 1, 1.0);
  p.lower[n] = -kInf;
  p.upper[n] = kInf;
  const LpSolution sol = solve_lp(p, tol);
  if (sol.status != LpStatus::Optimal) return std::nullopt;
  if (sol.point[n] <= tol.feas_tol) return std::nullopt;
  DenseVector y(n);
  for (std::size_t j = 0; j < n; ++j) y[j] = sol.point[j];
  return InteriorPoint{y, sol.point[n]};
}

bool is_pointed(const HCone& c, const Tolerances& tol) {
  const std::size_t n = c.dim;
  if (c.rows.rows() == 0) return n == 0;
  // The lineality space is {Ay = 0}: probe each +/- coordinate objective
  // over it within the unit box; any positive optimum exhibits a line.
  DenseMatrix a(c.rows.rows(), n);
  DenseVector b(c.rows.rows());
  std::vector<LpSense> senses(c.rows.rows(), LpSense::EQ);
  for (std::size_t i = 0; i < c.rows.rows(); ++i)
    for (std::size_t j = 0; j < n; ++j) a(i, j) = c.rows(i, j);
  for (std::size_t j = 0; j < n; ++j) {
    for (double sgn : {1.0, -1.0}) {
      DenseVector obj(n);
      obj[j] = sgn;
      LpProblem p = LpProblem::maximize_free(obj, a, senses, b);
      p.lower.assign(n, -1.0);
      p.upper.assign(n, 1.0);
      const LpSolution sol = solve_lp(p, tol);
      if (sol.status == LpStatus::Optimal && sol.objective > 1e-7) return false;
    }
  }
  return true;
}

Cone Cone::from_h(HCone c, const Tolerances& tol) {
  Cone out;
  out.v = dd_convert(c, tol);
  out.h = std::move(c);
  return out;
}

Cone Cone::from_v(VCone c, const Tolerances& tol) {
  Cone out;
  out.h = dd_convert_back(c, tol);
  out.v = std::move(c);
  return out;
}

}  // namespace ige
