#include "ige/mappings.hpp"

#include <cmath>

#include "ige/fans.hpp"

namespace ige {

namespace {

double eval_polynomial(const Polynomial& poly, const DenseVector& x) {
  double total = 0;
  for (const auto& term : poly) {
    double v = term.coef;
    for (std::size_t j = 0; j < term.exps.size(); ++j)
      for (unsigned e = 0; e < term.exps[j]; ++e) v *= x[j];
    total += v;
  }
  return total;
}

bool polynomial_affine(const Polynomial& poly) {
  for (const auto& term : poly) {
    unsigned degree = 0;
    for (unsigned e : term.exps) degree += e;
    if (degree > 1) return false;
  }
  return true;
}

/// (A, b) of an affine path; call only after is_affine().
std::pair<DenseMatrix, DenseVector> affine_parts(const VertexPath& path, std::size_t n) {
  const std::size_t m = path.components.size();
  DenseMatrix a(m, n);
  DenseVector b(m);
  for (std::size_t i = 0; i < m; ++i) {
    for (const auto& term : path.components[i]) {
      unsigned degree = 0;
      std::size_t var = 0;
      for (std::size_t j = 0; j < term.exps.size(); ++j) {
        degree += term.exps[j];
        if (term.exps[j] == 1) var = j;
      }
      if (degree == 0) b[i] += term.coef;
      else a(i, var) += term.coef;
    }
  }
  return {a, b};
}

}  // namespace

VertexPath VertexPath::affine(const DenseMatrix& a, const DenseVector& b) {
  if (a.rows() != b.size()) throw std::invalid_argument("VertexPath::affine: dims");
  VertexPath path;
  path.components.resize(a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    if (b[i] != 0) path.components[i].push_back({std::vector<unsigned>(a.cols(), 0), b[i]});
    for (std::size_t j = 0; j < a.cols(); ++j) {
      if (a(i, j) == 0) continue;
      std::vector<unsigned> exps(a.cols(), 0);
      exps[j] = 1;
      path.components[i].push_back({std::move(exps), a(i, j)});
    }
  }
  return path;
}

DenseVector VertexPath::evaluate(const DenseVector& x) const {
  DenseVector out(components.size());
  for (std::size_t i = 0; i < components.size(); ++i) out[i] = eval_polynomial(components[i], x);
  return out;
}

bool VertexPath::is_affine() const {
  for (const auto& comp : components)
    if (!polynomial_affine(comp)) return false;
  return true;
}

PolytopicMapping::PolytopicMapping(std::size_t n, std::size_t m, std::vector<MappingPiece> ps)
    : domain_dim(n), range_dim(m), pieces(std::move(ps)) {
  if (pieces.empty()) throw std::invalid_argument("PolytopicMapping: needs at least one piece");
  for (const auto& piece : pieces) {
    if (piece.vertex_paths.empty())
      throw std::invalid_argument("PolytopicMapping: piece without vertex paths");
    for (const auto& path : piece.vertex_paths) {
      if (path.components.size() != m)
        throw std::invalid_argument("PolytopicMapping: path range dimension mismatch");
      for (const auto& comp : path.components)
        for (const auto& term : comp)
          if (term.exps.size() != n)
            throw std::invalid_argument("PolytopicMapping: term exponent arity mismatch");
    }
    for (const auto& r : piece.rays) {
      if (r.size() != m) throw std::invalid_argument("PolytopicMapping: ray dimension mismatch");
      if (norm2(r) < 1e-14) throw std::invalid_argument("PolytopicMapping: zero ray");
    }
  }
}

bool PolytopicMapping::is_affine() const {
  for (const auto& piece : pieces)
    for (const auto& path : piece.vertex_paths)
      if (!path.is_affine()) return false;
  return true;
}

SetExpr evaluate_mapping(const PolytopicMapping& f, const DenseVector& x) {
  if (x.size() != f.domain_dim) throw std::invalid_argument("evaluate_mapping: dims");
  std::vector<ConvexPiece> pieces;
  pieces.reserve(f.pieces.size());
  for (const auto& piece : f.pieces) {
    std::vector<DenseVector> verts;
    verts.reserve(piece.vertex_paths.size());
    for (const auto& path : piece.vertex_paths) verts.push_back(path.evaluate(x));
    pieces.emplace_back(std::move(verts), piece.rays);
  }
  return SetExpr(std::move(pieces));
}

IGEProblem make_problem(PolytopicMapping f, Cone c, Polyhedron s, DenseVector xbar,
                        Tolerances tol) {
  tol.validate();
  if (c.h.dim != f.range_dim) throw std::invalid_argument("make_problem: cone dimension");
  if (s.dim != f.domain_dim) throw std::invalid_argument("make_problem: set dimension");
  if (xbar.size() != f.domain_dim) throw std::invalid_argument("make_problem: xbar dimension");
  if (!is_pointed(c.h, tol)) throw std::invalid_argument("make_problem: cone is not pointed");
  if (s.is_empty(tol)) throw std::invalid_argument("make_problem: empty set S");
  if (!s.contains(xbar, tol.feas_tol)) throw std::invalid_argument("make_problem: xbar not in S");
  return IGEProblem{std::move(f), std::move(c), std::move(s), std::move(xbar), tol};
}

bool membership_in_solutions(const IGEProblem& p, const DenseVector& x) {
  if (!p.set.contains(x, p.tol.feas_tol)) return false;
  return excess_function(p, x) <= p.tol.sample_tol;
}

double excess_function(const IGEProblem& p, const DenseVector& x) {
  return excess_over_cone(evaluate_mapping(p.mapping, x), p.cone, p.tol);
}

std::optional<SolutionPolyhedron> exact_solution_polyhedron(const IGEProblem& p) {
  const PolytopicMapping& f = p.mapping;
  if (f.pieces.size() != 1 || !f.is_affine()) return std::nullopt;
  const std::size_t n = f.domain_dim;
  const MappingPiece& piece = f.pieces.front();

  SolutionPolyhedron out;
  for (const auto& r : piece.rays)
    if (!p.cone.h.contains(r, p.tol.feas_tol)) out.empty_by_rays = true;

  std::vector<DenseVector> rows;
  std::vector<double> rhs;
  bool forced_empty = out.empty_by_rays;
  for (const auto& path : piece.vertex_paths) {
    auto [a, b] = affine_parts(path, n);
    for (std::size_t i = 0; i < p.cone.h.rows.rows(); ++i) {
      const DenseVector crow = p.cone.h.rows.row(i);
      DenseVector lhs = matvec_transposed(a, crow);  // (c^T A) x
      const double shift = -dot(crow, b);            // >= -c^T b
      if (norm2(lhs) < 1e-13) {
        if (shift > p.tol.feas_tol) forced_empty = true;  // 0 >= positive: impossible
        continue;
      }
      rows.push_back(std::move(lhs));
      rhs.push_back(shift);
    }
  }
  for (std::size_t i = 0; i < p.set.mat.rows(); ++i) {
    rows.push_back(p.set.mat.row(i));
    rhs.push_back(p.set.rhs[i]);
  }
  if (forced_empty) {
    rows.push_back(DenseVector(n));
    rhs.push_back(1.0);  // 0 >= 1 encodes the empty set
  }
  out.poly = Polyhedron(n, DenseMatrix::from_rows(rows, n), DenseVector(rhs));
  return out;
}

std::optional<Fan> induced_fan(const PolytopicMapping& f) {
  if (f.pieces.size() != 1 || !f.is_affine()) return std::nullopt;
  std::vector<DenseMatrix> gens;
  for (const auto& path : f.pieces.front().vertex_paths)
    gens.push_back(affine_parts(path, f.domain_dim).first);
  return Fan(std::move(gens));
}

}  // namespace ige
