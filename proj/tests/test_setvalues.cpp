#include "doctest.h"
#include "ige/setvalues.hpp"

#include <cmath>

using namespace ige;

namespace {

const Tolerances kTol;

Cone orthant_cone(std::size_t dim) { return Cone::from_h(HCone::orthant(dim)); }

SetExpr orthant_expr(std::size_t dim) {
  std::vector<DenseVector> rays;
  for (std::size_t i = 0; i < dim; ++i) {
    DenseVector e(dim);
    e[i] = 1;
    rays.push_back(e);
  }
  return SetExpr::single(ConvexPiece({DenseVector(dim)}, rays));
}

/// The value F(x) of the corner mapping {y : min(y1,y2) = x}: two half-lines
/// leaving (x,x) upward and rightward.
SetExpr lshape_value(double x) {
  ConvexPiece up({DenseVector{x, x}}, {DenseVector{0, 1}});
  ConvexPiece right({DenseVector{x, x}}, {DenseVector{1, 0}});
  return SetExpr({up, right});
}

}  // namespace

TEST_CASE("convex piece validation") {
  CHECK_THROWS_AS(ConvexPiece({}, {}), std::invalid_argument);
  CHECK_THROWS_AS(ConvexPiece({DenseVector{1, 0}}, {DenseVector{0, 0}}), std::invalid_argument);
  CHECK_THROWS_AS(SetExpr(std::vector<ConvexPiece>{}), std::invalid_argument);
}

TEST_CASE("distance to the orthant") {
  auto r = dist_point_to({-3, 4}, orthant_expr(2));
  CHECK(r.distance == doctest::Approx(3.0).epsilon(1e-10));
  CHECK(norm2(sub(r.nearest, DenseVector{0, 4})) <= 1e-8);
}

TEST_CASE("distance to a segment") {
  // Oracle: the nearest point of the segment conv{(1,0),(0,1)} to the origin
  // is the midpoint of the chord, at distance 1/sqrt(2).
  SetExpr seg = SetExpr::single(ConvexPiece({DenseVector{1, 0}, DenseVector{0, 1}}, {}));
  auto r = dist_point_to({0, 0}, seg);
  CHECK(r.distance == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-10));
  CHECK(norm2(sub(r.nearest, DenseVector{0.5, 0.5})) <= 1e-9);
  CHECK(r.kkt_residual <= 1e-9);
}

TEST_CASE("distance to the corner-shaped union") {
  auto r = dist_point_to({2, 2}, lshape_value(1.0));
  CHECK(r.distance == doctest::Approx(1.0).epsilon(1e-10));
  const bool near_a = norm2(sub(r.nearest, DenseVector{1, 2})) <= 1e-8;
  const bool near_b = norm2(sub(r.nearest, DenseVector{2, 1})) <= 1e-8;
  CHECK((near_a || near_b));
}

TEST_CASE("distance is zero exactly on members") {
  Rng rng(314);
  for (int trial = 0; trial < 25; ++trial) {
    const std::size_t nv = 1 + rng.next_u64() % 3;
    const std::size_t nr = rng.next_u64() % 3;
    std::vector<DenseVector> vs, rs;
    for (std::size_t i = 0; i < nv; ++i)
      vs.push_back(DenseVector{rng.uniform(-2, 2), rng.uniform(-2, 2)});
    for (std::size_t i = 0; i < nr; ++i) rs.push_back(rng.unit_vector(2));
    ConvexPiece piece(vs, rs);
    SetExpr s = SetExpr::single(piece);
    for (int i = 0; i < 40; ++i) {
      // Member: random convex combination plus nonnegative ray weights.
      DenseVector p(2);
      double total = 0;
      std::vector<double> w(nv);
      for (std::size_t j = 0; j < nv; ++j) { w[j] = rng.uniform(); total += w[j]; }
      for (std::size_t j = 0; j < nv; ++j) p = add(p, scale(piece.vertices[j], w[j] / total));
      for (std::size_t j = 0; j < nr; ++j) p = add(p, scale(piece.rays[j], rng.uniform(0, 2)));
      CHECK(dist_point_to(p, s).distance <= 1e-8);
    }
  }
}

TEST_CASE("piece distance agrees with the dykstra route") {
  // Dual route: lift the piece to a cone in R^3, convert to inequalities,
  // slice at height one, project with Dykstra.
  Rng rng(2718);
  for (int trial = 0; trial < 10; ++trial) {
    const std::size_t nv = 2 + rng.next_u64() % 2;
    const std::size_t nr = rng.next_u64() % 2;
    std::vector<DenseVector> vs, rs;
    for (std::size_t i = 0; i < nv; ++i)
      vs.push_back(DenseVector{rng.uniform(-2, 2), rng.uniform(-2, 2)});
    for (std::size_t i = 0; i < nr; ++i) rs.push_back(rng.unit_vector(2));
    ConvexPiece piece(vs, rs);

    std::vector<DenseVector> lifted;
    for (const auto& v : vs) lifted.push_back(DenseVector{v[0], v[1], 1.0});
    for (const auto& r : piece.rays) lifted.push_back(DenseVector{r[0], r[1], 0.0});
    HCone hom = dd_convert_back(VCone(3, lifted), kTol);
    std::vector<Halfspace> hs;
    for (std::size_t i = 0; i < hom.rows.rows(); ++i) {
      const DenseVector row = hom.rows.row(i);
      DenseVector normal{row[0], row[1]};
      if (norm2(normal) < 1e-12) continue;  // the height row itself
      hs.push_back({normal, -row[2]});
    }
    for (int i = 0; i < 10; ++i) {
      DenseVector y{rng.uniform(-4, 4), rng.uniform(-4, 4)};
      const double direct = dist_point_to(y, piece, kTol).distance;
      const double via_dykstra = hs.empty() ? 0.0 : dykstra_project(hs, y, kTol).distance;
      CHECK(direct == doctest::Approx(via_dykstra).epsilon(1e-6));
    }
  }
}

TEST_CASE("excess over cone: vertex maximum") {
  SetExpr s = SetExpr::single(ConvexPiece({DenseVector{1, 1}, DenseVector{-2, 1}}, {}));
  CHECK(excess_over_cone(s, orthant_cone(2)) == doctest::Approx(2.0).epsilon(1e-10));
}

TEST_CASE("excess over cone: parabola mapping value") {
  // F(x) = [-x^2, inf) at x = 0.5: the excess over R_+ equals x^2.
  const double x = 0.5;
  SetExpr s = SetExpr::single(ConvexPiece({DenseVector{-x * x}}, {DenseVector{1.0}}));
  CHECK(excess_over_cone(s, orthant_cone(1)) == doctest::Approx(0.25).epsilon(1e-12));
}

TEST_CASE("excess over cone: cone over itself and infinite case") {
  CHECK(excess_over_cone(orthant_expr(2), orthant_cone(2)) == 0.0);
  SetExpr bad = SetExpr::single(ConvexPiece({DenseVector{0, 0}}, {DenseVector{-1, 0}}));
  CHECK(excess_over_cone(bad, orthant_cone(2)) == kInf);
}

TEST_CASE("excess vertex rule equals brute force on random pieces") {
  Rng rng(555);
  const Cone c = orthant_cone(2);
  for (int trial = 0; trial < 15; ++trial) {
    const std::size_t nv = 2 + rng.next_u64() % 3;
    std::vector<DenseVector> vs;
    for (std::size_t i = 0; i < nv; ++i)
      vs.push_back(DenseVector{rng.uniform(-2, 2), rng.uniform(-2, 2)});
    SetExpr s = SetExpr::single(ConvexPiece(vs, {}));
    const double fast = excess_over_cone(s, c);
    double brute = 0;
    // Dense sweep over pairwise segments covers the boundary of the hull.
    for (std::size_t a = 0; a < nv; ++a)
      for (std::size_t b = 0; b < nv; ++b)
        for (double t = 0; t <= 1.0; t += 1e-3) {
          DenseVector p = add(scale(vs[a], 1 - t), scale(vs[b], t));
          brute = std::max(brute, c.v.distance(p, kTol));
        }
    CHECK(fast >= brute - 1e-3);
    CHECK(fast <= brute + 1e-3);
  }
}

TEST_CASE("ball polytope geometry") {
  CHECK_THROWS_AS(ball_polytope(5, 16), DimensionGuardError);
  BallPolytope b1 = ball_polytope(1, 16);
  CHECK(b1.inner_factor == 1.0);
  BallPolytope b2 = ball_polytope(2, 16);
  CHECK(b2.unit_vertices.size() == 16);
  CHECK(b2.inner_factor == doctest::Approx(std::cos(3.14159265358979323846 / 16)));
  for (const auto& v : b2.unit_vertices) CHECK(norm2(v) == doctest::Approx(1.0).epsilon(1e-12));
  BallPolytope b3 = ball_polytope(3, 8);
  for (const auto& v : b3.unit_vertices) CHECK(norm2(v) == doctest::Approx(1.0).epsilon(1e-12));
  // Support of the inner polytope must be >= inner_factor in any direction.
  Rng rng(6);
  for (int i = 0; i < 100; ++i) {
    DenseVector u = rng.unit_vector(3);
    double support = 0;
    for (const auto& v : b3.unit_vertices) support = std::max(support, dot(u, v));
    CHECK(support >= b3.inner_factor - 1e-9);
    CHECK(support <= 1.0 + 1e-12);
  }
}

TEST_CASE("enlarge at radius zero is the identity") {
  SetExpr s = SetExpr::single(ConvexPiece({DenseVector{1, 2}}, {}));
  EnlargePair e = enlarge(s, 0.0);
  CHECK(e.gap == 0.0);
  CHECK(e.inner.pieces[0].vertices[0] == s.pieces[0].vertices[0]);
}

TEST_CASE("enlarge sandwiches the disk") {
  SetExpr origin = SetExpr::single(ConvexPiece({DenseVector{0, 0}}, {}));
  EnlargePair e = enlarge(origin, 1.0, 16);
  CHECK(e.gap == doctest::Approx(1.0 - std::cos(3.14159265358979323846 / 16)));
  Rng rng(8);
  for (int i = 0; i < 200; ++i) {
    DenseVector u = rng.unit_vector(2);
    // Inner polygon stays inside the disk; outer covers it.
    CHECK(dist_point_to(u, e.outer).distance <= 1e-9);
    CHECK(dist_point_to(scale(u, 1.0 + 1e-6), e.inner).distance > 0);
    CHECK(dist_point_to(scale(u, 1.0 - e.gap - 1e-9), e.inner).distance <= 1e-9);
  }
}

TEST_CASE("excess responds to enlargement like an exact ball within the gap") {
  const Cone c = orthant_cone(2);
  SetExpr s = SetExpr::single(ConvexPiece({DenseVector{1, 1}, DenseVector{-2, 1}}, {}));
  const double base = excess_over_cone(s, c);
  REQUIRE(base > 0);
  for (double r : {0.25, 1.0, 3.0}) {
    EnlargePair e = enlarge(s, r, 64);
    const double inner_exc = excess_over_cone(e.inner, c);
    CHECK(inner_exc <= base + r + 1e-9);
    CHECK(inner_exc >= base + r * (1.0 - e.gap) - 1e-9);
  }
}

TEST_CASE("excess of the inscribed ball polytope stays within the radius") {
  const Cone c = orthant_cone(2);
  for (double r : {0.5, 2.0}) {
    BallPolytope ball = ball_polytope(2, 64);
    std::vector<DenseVector> verts;
    for (const auto& v : ball.unit_vertices) verts.push_back(scale(v, r));
    SetExpr rb = SetExpr::single(ConvexPiece(verts, {}));
    const double exc = excess_over_cone(rb, c);
    CHECK(exc <= r + 1e-9);
    // The antidiagonal vertex realizes the bound for the orthant.
    CHECK(exc >= r * std::cos(3.14159265358979323846 / 64) - 1e-9);
  }
}

TEST_CASE("conic extension leaves the excess unchanged") {
  const Cone c = orthant_cone(2);
  SetExpr s = SetExpr::single(ConvexPiece({DenseVector{1, 1}, DenseVector{-2, 1}}, {}));
  auto [lhs, rhs] = conic_extension_excess_check(s, c);
  CHECK(lhs == doctest::Approx(2.0).epsilon(1e-9));
  CHECK(rhs == doctest::Approx(2.0).epsilon(1e-9));

  auto [l0, r0] = conic_extension_excess_check(orthant_expr(2), c);
  CHECK(l0 == 0.0);
  CHECK(r0 == 0.0);

  SetExpr pt = SetExpr::single(ConvexPiece({DenseVector{-1, -1}}, {}));
  auto [lp, rp] = conic_extension_excess_check(pt, c);
  CHECK(lp == doctest::Approx(std::sqrt(2.0)).epsilon(1e-9));
  CHECK(rp == doctest::Approx(std::sqrt(2.0)).epsilon(1e-9));
}

TEST_CASE("order cancellation sanity on generated instances") {
  // If A sits inside C then A + B lies in B + C for any B; the sampled
  // implication A + B subset B + C  =>  A subset C should never falsify on
  // such instances, and planting A outside C must break the premise.
  Rng rng(4711);
  const Cone c = orthant_cone(2);
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<DenseVector> avs;
    for (int i = 0; i < 3; ++i)
      avs.push_back(DenseVector{rng.uniform(0, 2), rng.uniform(0, 2)});  // inside C
    std::vector<DenseVector> bvs;
    for (int i = 0; i < 3; ++i)
      bvs.push_back(DenseVector{rng.uniform(-1, 1), rng.uniform(-1, 1)});
    ConvexPiece b(bvs, {});
    // Premise by sampling: every vertex-sum of A+B is within dist 0 of B+C.
    SetExpr bc = add_cone(SetExpr::single(b), c.v);
    bool premise = true;
    for (const auto& va : avs)
      for (const auto& vb : bvs)
        premise = premise && dist_point_to(add(va, vb), bc).distance <= 1e-8;
    CHECK(premise);
    for (const auto& va : avs) CHECK(c.h.contains(va, 1e-9));

    // Now plant a vertex outside C: the premise must fail at some sample.
    avs.push_back(DenseVector{-1.0, rng.uniform(0, 1)});
    bool premise2 = true;
    for (const auto& va : avs)
      for (const auto& vb : bvs)
        premise2 = premise2 && dist_point_to(add(va, vb), bc).distance <= 1e-8;
    CHECK_FALSE(premise2);
  }
}
