#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "support.hpp"

using namespace sapsm;
using testing::v2;

TEST_CASE("halfspace projection matches closed form and grid oracle") {
  const auto H = ConvexSet::halfspace(v2(1, 0), 0.0);
  const Vector x = v2(2, 3);
  const Vector p = project(H, x);
  // Frozen oracle value.
  CHECK(p[0] == doctest::Approx(0.0));
  CHECK(p[1] == doctest::Approx(3.0));
  const Vector a = v2(1, 0);
  const Vector formula = x - std::max(a.dot(x) - 0.0, 0.0) / a.squaredNorm() * a;
  CHECK((p - formula).norm() < 1e-15);
  const Vector g = testing::grid_nearest([](const Vector& y) { return y[0] <= 0.0; }, x, -4.0, 4.0, 1e-3);
  CHECK((p - g).norm() < 2e-3);
}

TEST_CASE("ball projection scales radially") {
  const auto B = ConvexSet::ball(v2(0, 0), 1.0);
  const Vector p = project(B, v2(3, 4));
  CHECK(p[0] == doctest::Approx(0.6).epsilon(1e-15));
  CHECK(p[1] == doctest::Approx(0.8).epsilon(1e-15));
  const Vector g = testing::grid_nearest([](const Vector& y) { return y.norm() <= 1.0; }, v2(3, 4), -1.5, 1.5, 1e-3);
  CHECK((p - g).norm() < 2e-3);
  CHECK(distance(B, v2(3, 4)) == doctest::Approx(4.0));
}

TEST_CASE("box projection leaves members alone and clips others") {
  const auto X = ConvexSet::box(v2(0, 0), v2(1, 1));
  CHECK((project(X, v2(0.5, 0.5)) - v2(0.5, 0.5)).norm() == 0.0);
  CHECK((project(X, v2(2, -1)) - v2(1, 0)).norm() == 0.0);
  CHECK_FALSE(contains(X, v2(2, 0), 0.5));
  CHECK(contains(X, v2(2, 0), 1.0));
}

TEST_CASE("hyperplane distance") {
  const auto P = ConvexSet::hyperplane(v2(0, 1), 2.0);
  CHECK(distance(P, v2(5, 0)) == doctest::Approx(2.0));
  CHECK((project(P, v2(5, 0)) - v2(5, 2)).norm() < 1e-15);
}

TEST_CASE("contains") {
  CHECK(contains(ConvexSet::ball(v2(0, 0), 1.0), v2(0, 0), 0.0));
  CHECK(contains(ConvexSet::halfspace(v2(1, 0), 0.0), v2(1e-9, 0), 1e-8));
  CHECK_FALSE(contains(ConvexSet::halfspace(v2(1, 0), 0.0), v2(1e-7, 0), 1e-8));
  CHECK_THROWS_AS(contains(ConvexSet::ball(v2(0, 0), 1.0), v2(0, 0), -1.0), std::invalid_argument);
}

TEST_CASE("enclosing radius") {
  CHECK(*enclosing_radius(ConvexSet::ball(v2(0, 0), 2.0)) == 2.0);
  CHECK(*enclosing_radius(ConvexSet::ball(v2(3, 4), 1.0)) == doctest::Approx(6.0));
  CHECK(*enclosing_radius(ConvexSet::box(v2(-1, -1), v2(1, 1))) == doctest::Approx(std::sqrt(2.0)));
  CHECK(*enclosing_radius(ConvexSet::box(v2(-3, 0), v2(1, 2))) == doctest::Approx(std::sqrt(13.0)));
  CHECK(*enclosing_radius(ConvexSet::simplex(3, 2.5)) == 2.5);
  CHECK_FALSE(enclosing_radius(ConvexSet::halfspace(v2(1, 0), 0.0)).has_value());
  CHECK_FALSE(enclosing_radius(ConvexSet::hyperplane(v2(1, 0), 0.0)).has_value());
}

TEST_CASE("simplex projection") {
  const auto S = ConvexSet::simplex(3, 1.0);
  const Vector p = project(S, testing::v3(0.5, 0.5, 0.5));
  CHECK((p - Vector::Constant(3, 1.0 / 3.0)).norm() < 1e-15);
  const Vector q = project(S, testing::v3(2.0, 0.0, -1.0));
  CHECK((q - testing::v3(1.0, 0.0, 0.0)).norm() < 1e-15);
  // Ties in the threshold.
  const Vector t = project(ConvexSet::simplex(4, 2.0), Vector::Constant(4, 7.0));
  CHECK((t - Vector::Constant(4, 0.5)).norm() < 1e-14);

  testing::Gen g(11);
  for (int trial = 0; trial < 500; ++trial) {
    const auto dim = static_cast<Eigen::Index>(1 + g.index(8));
    const double scale = g.uniform(0.1, 5.0);
    const Vector x = g.vec(dim, -3.0, 3.0);
    const Vector y = project(ConvexSet::simplex(dim, scale), x);
    CHECK((y - testing::simplex_by_bisection(x, scale)).norm() < 1e-9);
    CHECK(y.minCoeff() >= 0.0);
    CHECK(y.sum() == doctest::Approx(scale).epsilon(1e-12));
  }
}

TEST_CASE("construction rejects degenerate or non-finite parameters") {
  CHECK_THROWS_AS(ConvexSet::halfspace(v2(0, 0), 1.0), std::invalid_argument);
  CHECK_THROWS_AS(ConvexSet::hyperplane(v2(0, 0), 1.0), std::invalid_argument);
  CHECK_THROWS_AS(ConvexSet::box(v2(1, 0), v2(0, 1)), std::invalid_argument);
  CHECK_THROWS_AS(ConvexSet::ball(v2(0, 0), 0.0), std::invalid_argument);
  CHECK_THROWS_AS(ConvexSet::ball(v2(0, NAN), 1.0), std::invalid_argument);
  CHECK_THROWS_AS(ConvexSet::simplex(2, -1.0), std::invalid_argument);
  CHECK_THROWS_AS(ConvexSet::simplex(0, 1.0), std::invalid_argument);
}

TEST_CASE("projection rejects bad input") {
  const auto B = ConvexSet::ball(v2(0, 0), 1.0);
  CHECK_THROWS_AS(project(B, testing::v3(1, 2, 3)), std::invalid_argument);
  CHECK_THROWS_AS(project(B, v2(INFINITY, 0)), std::invalid_argument);
  CHECK_THROWS_AS(project(B, v2(NAN, 0)), std::invalid_argument);
}

TEST_CASE("problem validation") {
  const auto B = ConvexSet::ball(v2(0, 0), 2.0);
  const auto H = ConvexSet::halfspace(v2(1, 0), 0.0);
  CHECK_THROWS_AS(Problem({}), std::invalid_argument);
  CHECK_THROWS_AS(Problem({B, ConvexSet::ball(testing::v3(0, 0, 0), 1.0)}), std::invalid_argument);
  CHECK_THROWS_AS(Problem({B, H}, BoundedWitness{2, 2.0}), std::invalid_argument);
  CHECK_THROWS_AS(Problem({B, H}, BoundedWitness{1, 2.0}), std::invalid_argument);
  CHECK_THROWS_AS(Problem({B, H}, BoundedWitness{0, 1.0}), std::invalid_argument);
  const Problem p({H, B}, BoundedWitness{1, 2.0});
  CHECK(p.size() == 2);
  CHECK(p.dimension() == 2);
  CHECK(p.bounded_indices(2.0) == std::vector<std::size_t>{1});
  CHECK(p.bounded_indices(1.0).empty());
}

TEST_CASE("property: idempotence, nonexpansivity, variational inequality") {
  testing::Gen g(2024);
  for (int trial = 0; trial < 2000; ++trial) {
    const auto dim = static_cast<Eigen::Index>(1 + g.index(6));
    const ConvexSet s = testing::random_set(g, dim);
    const Vector x = g.vec(dim, -5.0, 5.0);
    const Vector y = g.vec(dim, -5.0, 5.0);
    const Vector px = project(s, x);
    const Vector py = project(s, y);

    CHECK((project(s, px) - px).norm() <= 1e-12 * std::max(1.0, px.norm()));
    CHECK((px - py).norm() <= (x - y).norm() + 1e-12);
    CHECK(contains(s, px, 1e-12 * std::max(1.0, px.norm())));
    CHECK(distance(s, x) >= 0.0);

    for (int k = 0; k < 5; ++k) {
      const Vector z = testing::member_of(g, s);
      CHECK((x - px).dot(z - px) <= 1e-10 * std::max(1.0, (x - px).norm() * (z - px).norm()));
    }
  }
}

TEST_CASE("property: distance agrees with a 2-D grid oracle") {
  testing::Gen g(7);
  const double h = 1e-2;
  for (int trial = 0; trial < 40; ++trial) {
    const ConvexSet s = testing::random_set(g, 2, /*allow_simplex=*/false);
    if (std::holds_alternative<Hyperplane>(s.variant())) continue;  // measure zero on a grid
    const Vector x = g.vec(2, -3.0, 3.0);
    const Vector n = testing::grid_nearest([&](const Vector& y) { return contains(s, y, 0.0); }, x, -6.0, 6.0, h);
    if (n.size() == 0) continue;
    CHECK(std::abs(distance(s, x) - (x - n).norm()) <= 2 * h);
  }
}
