#include "doctest.h"
#include "ige/fans.hpp"
#include "ige/mappings.hpp"

#include <cmath>

using namespace ige;

namespace {

const Tolerances kTol;

Cone orthant_cone(std::size_t dim) { return Cone::from_h(HCone::orthant(dim)); }

Fan identity_fan(std::size_t n) { return Fan({identity(n)}); }

Fan doubly_stochastic_fan() {
  return Fan({identity(2), DenseMatrix(2, 2, {0, 1, 1, 0})});
}

/// Brute-force certificate oracle: sweep the unit circle for the direction
/// maximizing the worst row margin of all generator images.
double certificate_eta_oracle(const Fan& h, const HCone& c, int steps) {
  double best = -kInf;
  for (int t = 0; t < steps; ++t) {
    const double ang = 2.0 * 3.14159265358979323846 * t / steps;
    DenseVector u{std::cos(ang), std::sin(ang)};
    double margin = kInf;
    for (const auto& g : h.generators) {
      const DenseVector img = matvec(g, u);
      for (std::size_t j = 0; j < c.rows.rows(); ++j) {
        const DenseVector a = c.rows.row(j);
        margin = std::min(margin, dot(a, img) / norm2(a));
      }
    }
    best = std::max(best, margin);
  }
  return best;
}

}  // namespace

TEST_CASE("fan validation and evaluation") {
  CHECK_THROWS_AS(Fan(std::vector<DenseMatrix>{}), std::invalid_argument);
  CHECK_THROWS_AS(Fan({identity(2), identity(3)}), std::invalid_argument);

  ConvexPiece v = evaluate(identity_fan(2), {1, 2});
  REQUIRE(v.vertices.size() == 1);
  CHECK(v.vertices[0] == DenseVector{1, 2});

  // Two generator images of the swap fan.
  ConvexPiece seg = evaluate(doubly_stochastic_fan(), {1, 0});
  REQUIRE(seg.vertices.size() == 2);
  CHECK(dist_point_to({0.5, 0.5}, SetExpr::single(seg)).distance <= 1e-12);

  // Any fan sends the origin to the origin alone.
  ConvexPiece zero = evaluate(doubly_stochastic_fan(), {0, 0});
  REQUIRE(zero.vertices.size() == 1);
  CHECK(norm2(zero.vertices[0]) == 0.0);
}

TEST_CASE("evaluate is positively homogeneous") {
  Rng rng(17);
  Fan h({DenseMatrix(2, 2, {1, 2, 0, 1}), DenseMatrix(2, 2, {1, 0, -1, 1})});
  for (int i = 0; i < 100; ++i) {
    const double lam = rng.uniform(0.01, 5.0);
    DenseVector x{rng.uniform(-2, 2), rng.uniform(-2, 2)};
    ConvexPiece a = evaluate(h, scale(x, lam));
    ConvexPiece b = evaluate(h, x);
    REQUIRE(a.vertices.size() == b.vertices.size());
    for (std::size_t j = 0; j < a.vertices.size(); ++j)
      CHECK(norm2(sub(a.vertices[j], scale(b.vertices[j], lam))) <= 1e-12 * (1 + lam * norm2(x)));
  }
}

TEST_CASE("lipschitz bound") {
  CHECK(lipschitz_bound(identity_fan(2)) == doctest::Approx(1.0));
  Fan two({identity(2), DenseMatrix(2, 2, {2, 0, 0, 2})});
  CHECK(lipschitz_bound(two) == doctest::Approx(2.0));
  CHECK(lipschitz_bound(doubly_stochastic_fan()) == doctest::Approx(1.0));
}

TEST_CASE("lipschitz bound certifies the excess between values") {
  Rng rng(23);
  Fan h({DenseMatrix(2, 2, {1, 2, 0, 1}), DenseMatrix(2, 2, {1, 0, -1, 1})});
  const double l = lipschitz_bound(h);
  for (int i = 0; i < 50; ++i) {
    DenseVector x1{rng.uniform(-2, 2), rng.uniform(-2, 2)};
    DenseVector x2{rng.uniform(-2, 2), rng.uniform(-2, 2)};
    SetExpr v2 = SetExpr::single(evaluate(h, x2));
    double exc = 0;
    for (const auto& v : evaluate(h, x1).vertices)
      exc = std::max(exc, dist_point_to(v, v2).distance);
    CHECK(exc <= l * norm2(sub(x1, x2)) + 1e-9);
  }
}

TEST_CASE("upper inverse") {
  HCone a = upper_inverse(identity_fan(2), HCone::orthant(2));
  CHECK(a.contains({1, 1}));
  CHECK_FALSE(a.contains({-1, 1}));

  // Both stacked systems coincide with the orthant for the swap fan.
  HCone b = upper_inverse(doubly_stochastic_fan(), HCone::orthant(2));
  Rng rng(9);
  for (int i = 0; i < 200; ++i) {
    DenseVector p = rng.unit_vector(2);
    CHECK(b.contains(p, 1e-9) == HCone::orthant(2).contains(p, 1e-9));
  }

  // Opposing one-row generators pin the first coordinate to zero.
  Fan pinned({DenseMatrix(1, 2, {1, 0}), DenseMatrix(1, 2, {-1, 0})});
  HCone line = upper_inverse(pinned, HCone::orthant(1));
  CHECK(line.contains({0, 5}));
  CHECK(line.contains({0, -5}));
  CHECK_FALSE(line.contains({0.1, 0}));
}

TEST_CASE("upper inverse membership means every generator image lands in C") {
  Rng rng(41);
  Fan h({DenseMatrix(2, 2, {1, 2, 0, 1}), DenseMatrix(2, 2, {1, 0, -1, 1}),
         DenseMatrix(2, 2, {0.5, 0, 0, 2})});
  HCone c = HCone::orthant(2);
  HCone ui = upper_inverse(h, c);
  for (int i = 0; i < 1000; ++i) {
    DenseVector x = scale(rng.unit_vector(2), rng.uniform(0.1, 2.0));
    bool all_in = true;
    for (const auto& g : h.generators) all_in = all_in && c.contains(matvec(g, x), 1e-9);
    if (std::abs(ui.membership_slack(x)) < 1e-8) continue;
    CHECK(ui.contains(x, 1e-9) == all_in);
  }
}

TEST_CASE("increase certificate on the identity fan") {
  auto cert = increase_certificate(identity_fan(2), orthant_cone(2));
  REQUIRE(cert.has_value());
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  CHECK(cert->eta == doctest::Approx(inv_sqrt2).epsilon(1e-9));
  CHECK(cert->u[0] == doctest::Approx(inv_sqrt2).epsilon(1e-9));
  CHECK(cert->u[1] == doctest::Approx(inv_sqrt2).epsilon(1e-9));
  CHECK(norm2(cert->u) == doctest::Approx(1.0).epsilon(1e-12));
  // Grid-search oracle over the unit circle.
  const double oracle = certificate_eta_oracle(identity_fan(2), HCone::orthant(2), 100000);
  CHECK(cert->eta >= oracle - 1e-4);
}

TEST_CASE("increase certificate needs interior") {
  Fan h = identity_fan(2);
  // Degenerate pointed cone {y : y1 >= 0, -y1 >= 0, y2 >= 0} = {0} x R_+
  // has empty interior, so no certificate exists.
  HCone degenerate(2, DenseMatrix(3, 2, {1, 0, -1, 0, 0, 1}));
  REQUIRE(is_pointed(degenerate));
  auto cert = increase_certificate(h, Cone::from_h(degenerate));
  CHECK_FALSE(cert.has_value());
}

TEST_CASE("increase certificate on the doubly stochastic fan") {
  auto cert = increase_certificate(doubly_stochastic_fan(), orthant_cone(2));
  REQUIRE(cert.has_value());
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  CHECK(cert->eta == doctest::Approx(inv_sqrt2).epsilon(1e-9));
  CHECK(cert->u[0] == doctest::Approx(inv_sqrt2).epsilon(1e-9));
}

TEST_CASE("certificate soundness: certified tube stays in the cone") {
  Rng rng(77);
  for (int trial = 0; trial < 6; ++trial) {
    std::vector<DenseMatrix> gens;
    const std::size_t p = 1 + rng.next_u64() % 3;
    for (std::size_t i = 0; i < p; ++i) {
      DenseMatrix g(2, 2);
      for (std::size_t a = 0; a < 2; ++a)
        for (std::size_t b = 0; b < 2; ++b) g(a, b) = rng.uniform(-1, 1);
      g(0, 0) += 2.0;  // bias towards certifiable instances
      g(1, 1) += 2.0;
      gens.push_back(g);
    }
    Fan h(gens);
    const Cone c = orthant_cone(2);
    auto cert = increase_certificate(h, c);
    if (!cert) continue;
    // Sample H(u) + eta * (inscribed polygon of the ball): all points in C.
    BallPolytope ball = ball_polytope(2, 64);
    const ConvexPiece hu = evaluate(h, cert->u);
    for (int i = 0; i < 1000; ++i) {
      DenseVector base(2);
      double total = 0;
      std::vector<double> w(hu.vertices.size());
      for (auto& wi : w) { wi = rng.uniform(); total += wi; }
      for (std::size_t j = 0; j < w.size(); ++j)
        base = add(base, scale(hu.vertices[j], w[j] / total));
      const DenseVector& dir = ball.unit_vertices[rng.next_u64() % ball.unit_vertices.size()];
      CHECK(c.h.contains(add(base, scale(dir, cert->eta * rng.uniform())), 1e-9));
    }
  }
}

TEST_CASE("compact values necessity check is consistent") {
  NecessityCheckReport a =
      compact_values_necessity_check(identity_fan(2), orthant_cone(2), 1.5);
  CHECK(a.certificate_found);
  CHECK(a.definitional_pass);
  CHECK(a.consistent);

  // Fan of two one-row generators mapping R^2 -> R upward: certificate at
  // u = (1,1)/sqrt(2) with eta = 1/sqrt(2).
  Fan rows({DenseMatrix(1, 2, {1, 0}), DenseMatrix(1, 2, {0, 1})});
  NecessityCheckReport b = compact_values_necessity_check(rows, orthant_cone(1), 1.5);
  CHECK(b.certificate_found);
  CHECK(b.consistent);

  // No certificate and no definitional pass: still consistent.
  Fan pinned({DenseMatrix(1, 2, {1, 0}), DenseMatrix(1, 2, {-1, 0})});
  NecessityCheckReport d = compact_values_necessity_check(pinned, orthant_cone(1), 1.2);
  CHECK_FALSE(d.certificate_found);
  CHECK_FALSE(d.definitional_pass);
  CHECK(d.consistent);
}

TEST_CASE("openness increase condition") {
  CHECK(openness_increase_condition(identity_fan(2), orthant_cone(2)));
  // Rank-deficient generator: openness fails.
  Fan flat({DenseMatrix(2, 2, {1, 0, 0, 0})});
  CHECK_FALSE(openness_increase_condition(flat, orthant_cone(2)));
  // Upper inverse is a line: empty interior.
  Fan pinned({DenseMatrix(1, 2, {1, 0}), DenseMatrix(1, 2, {-1, 0})});
  CHECK_FALSE(openness_increase_condition(pinned, orthant_cone(1)));
  // When the condition holds a certificate must exist.
  Rng rng(5150);
  for (int trial = 0; trial < 8; ++trial) {
    std::vector<DenseMatrix> gens;
    for (std::size_t i = 0; i < 2; ++i) {
      DenseMatrix g(2, 2);
      for (std::size_t a = 0; a < 2; ++a)
        for (std::size_t b = 0; b < 2; ++b) g(a, b) = rng.uniform(-1, 1) + (a == b ? 1.5 : 0.0);
      gens.push_back(g);
    }
    Fan h(gens);
    if (openness_increase_condition(h, orthant_cone(2)))
      CHECK(increase_certificate(h, orthant_cone(2)).has_value());
  }
}

TEST_CASE("prederivative residuals vanish for the affine class") {
  // F(x) = conv{A1 x + b1, A2 x + b2} + cone(K) with its induced fan.
  DenseMatrix a1(2, 2, {1, 1, 0, 1});
  DenseMatrix a2(2, 2, {1, 0, -1, 2});
  MappingPiece piece;
  piece.vertex_paths = {VertexPath::affine(a1, {0.5, 0}), VertexPath::affine(a2, {0, -0.25})};
  piece.rays = {DenseVector{1, 0}};
  PolytopicMapping f(2, 2, {piece});
  Fan h({a1, a2});
  auto rep = prederivative_residuals(f, h, {0.3, -0.1}, {0.1, 0.01, 0.001});
  CHECK(rep.final_outer() <= 1e-9);
  CHECK(rep.final_strict() <= 1e-9);
  CHECK(rep.outer_pass(1e-6));
  CHECK(rep.strict_pass(1e-6));
}

TEST_CASE("single generator affine mapping is a full prederivative") {
  DenseMatrix a1(2, 2, {2, 1, 0, 1});
  MappingPiece piece;
  piece.vertex_paths = {VertexPath::affine(a1, {1, 2})};
  PolytopicMapping f(2, 2, {piece});
  Fan h({a1});
  auto rep = prederivative_residuals(f, h, {0, 0}, {0.1, 0.001});
  CHECK(rep.final_outer() <= 1e-9);
  CHECK(rep.final_inner() <= 1e-9);
  CHECK(rep.final_strict() <= 1e-9);
}

TEST_CASE("zero fan against the parabola mapping: outer ratio shrinks like the radius") {
  // F(x) = [-x^2, +inf): vertex path -x^2 with ray +1.
  MappingPiece piece;
  piece.vertex_paths.push_back(VertexPath{{Polynomial{PolyTerm{{2}, -1.0}}}});
  piece.rays = {DenseVector{1.0}};
  PolytopicMapping f(1, 1, {piece});
  Fan zero({DenseMatrix(1, 1, {0.0})});
  auto rep = prederivative_residuals(f, zero, {0.0}, {0.1, 0.01, 0.001});
  REQUIRE(rep.rows.size() == 3);
  for (const auto& row : rep.rows) {
    CHECK(row.outer <= row.radius + 1e-9);
    CHECK(row.outer >= 0.0);
  }
  CHECK(rep.rows[2].outer <= 0.001 + 1e-9);
  CHECK(rep.outer_pass(0.01));
}
