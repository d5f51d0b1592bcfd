#pragma once

#include <optional>

#include "ige/setvalues.hpp"

namespace ige {

struct Fan;

/// One monomial: coef * prod_j x_j^exps[j].
struct PolyTerm {
  std::vector<unsigned> exps;
  double coef = 0;
};

/// Polynomial in the domain variables, as a sum of terms.
using Polynomial = std::vector<PolyTerm>;

/// Polynomial map R^n -> R^m, one polynomial per output component.
struct VertexPath {
  std::vector<Polynomial> components;

  static VertexPath affine(const DenseMatrix& a, const DenseVector& b);
  DenseVector evaluate(const DenseVector& x) const;
  bool is_affine() const;
};

struct MappingPiece {
  std::vector<VertexPath> vertex_paths;
  std::vector<DenseVector> rays;
};

/// F(x) = union over pieces of conv{f_j(x)} + cone(rays): the concrete
/// set-valued mapping class. Vertex paths are polynomial; the affine
/// single-piece subclass supports exact polyhedral extraction.
struct PolytopicMapping {
  std::size_t domain_dim = 0;
  std::size_t range_dim = 0;
  std::vector<MappingPiece> pieces;

  PolytopicMapping() = default;
  PolytopicMapping(std::size_t n, std::size_t m, std::vector<MappingPiece> ps);

  bool is_affine() const;
  bool single_piece_affine() const { return pieces.size() == 1 && is_affine(); }
};

/// Substitutes x into every vertex path; rays are carried over unchanged.
SetExpr evaluate_mapping(const PolytopicMapping& f, const DenseVector& x);

/// The problem data of a set-inclusive generalized equation:
/// find x in S with F(x) subseteq C, studied around the reference xbar.
struct IGEProblem {
  PolytopicMapping mapping;
  Cone cone;        // pointed, validated at construction
  Polyhedron set;   // nonempty, contains xbar
  DenseVector xbar;
  Tolerances tol;
};

/// Validates pointedness of C, nonemptiness of S, and xbar in S.
IGEProblem make_problem(PolytopicMapping f, Cone c, Polyhedron s, DenseVector xbar,
                        Tolerances tol = {});

/// x in Solv iff x in S and exc(F(x), C) vanishes within sample_tol.
bool membership_in_solutions(const IGEProblem& p, const DenseVector& x);

/// exc(F(x), C); +inf when a ray of F(x) leaves C.
double excess_function(const IGEProblem& p, const DenseVector& x);

struct SolutionPolyhedron {
  Polyhedron poly;
  bool empty_by_rays = false;  // some ray of F leaves C, so Solv is empty
};

/// Exact inequality description of Solv for affine single-piece mappings:
/// {x : A_C (A_j x + b_j) >= 0 for all j} intersected with S. Returns
/// nullopt when a vertex path is genuinely nonlinear.
std::optional<SolutionPolyhedron> exact_solution_polyhedron(const IGEProblem& p);

/// The fan conv{A_j} induced by an affine single-piece mapping; an exact
/// outer and strict prederivative of F everywhere (inner too when p = 1).
std::optional<Fan> induced_fan(const PolytopicMapping& f);

}  // namespace ige
