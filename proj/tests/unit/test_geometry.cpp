#include <cmath>
#include <random>
#include <set>

#include "doctest.h"
#include "lognl/error.hpp"
#include "lognl/geometry.hpp"

using namespace lognl;

TEST_CASE("distance to the boundary") {
  CHECK(dist_to_boundary(Domain::ball({0.0, 0.0}, 1.0, 2), {0.0, 0.0}) == 1.0);
  CHECK(dist_to_boundary(Domain::interval(-1.0, 1.0), {0.25, 0.0}) == 0.75);
  CHECK(dist_to_boundary(Domain::box({-1.0, -1.0}, {1.0, 1.0}, 2), {0.9, 0.0}) ==
        doctest::Approx(0.1).epsilon(1e-14));

  const Domain ball = Domain::ball({0.3, -0.2}, 0.5, 2);
  CHECK(ball.dist_to_boundary({1.3, -0.2}) == doctest::Approx(0.5));
  const Domain box = Domain::box({0.0, 0.0}, {2.0, 1.0}, 2);
  CHECK(box.dist_to_boundary({3.0, 2.0}) == doctest::Approx(std::sqrt(2.0)));
  CHECK(box.dist_to_boundary({1.0, -0.5}) == doctest::Approx(0.5));
  CHECK(Domain::interval(-1.0, 1.0).dist_to_boundary({3.0, 0.0}) == 2.0);
  const Domain b1 = Domain::ball({0.5, 0.0}, 0.25, 1);
  CHECK(b1.dist_to_boundary({0.6, 0.0}) == doctest::Approx(0.15));
}

TEST_CASE("distance vanishes exactly on boundary probes") {
  const Domain shapes[] = {Domain::interval(-0.3, 0.7), Domain::ball({0.1, 0.2}, 0.4, 2),
                           Domain::ball({0.0, 0.0}, 0.25, 1),
                           Domain::box({-0.2, -0.1}, {0.2, 0.1}, 2)};
  for (const Domain& d : shapes) {
    CHECK(d.dist_to_boundary(d.boundary_probe()) <= 1e-14);
    const Point inside = d.boundary_probe() + 1e-3 * d.inward_normal();
    CHECK(d.contains(inside));
    CHECK(d.dist_to_boundary(inside) == doctest::Approx(1e-3).epsilon(1e-9));
    CHECK_FALSE(d.contains(d.boundary_probe()));
  }
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  const Domain ball = Domain::ball({0.0, 0.0}, 0.5, 2);
  for (int k = 0; k < 200; ++k) {
    const Point p{U(rng), U(rng)};
    if (ball.dist_to_boundary(p) > 1e-3) CHECK(ball.dist_to_boundary(p) > 1e-14);
  }
}

TEST_CASE("exterior ball radius is unbounded for convex shapes") {
  CHECK_FALSE(exterior_ball_radius(Domain::ball({0.0, 0.0}, 0.5, 2)).has_value());
  CHECK_FALSE(exterior_ball_radius(Domain::interval(0.0, 1.0)).has_value());
  CHECK_FALSE(exterior_ball_radius(Domain::box({0.0, 0.0}, {1.0, 1.0}, 2)).has_value());
}

TEST_CASE("domain construction errors") {
  CHECK_THROWS_AS(Domain::interval(1.0, 1.0), Error);
  CHECK_THROWS_AS(Domain::ball({0.0, 0.0}, -1.0, 2), Error);
  CHECK_THROWS_AS(Domain::ball({0.0, 0.0}, 1.0, 3), Error);
  CHECK_THROWS_AS(Domain::box({0.0, 0.0}, {1.0, 0.0}, 2), Error);
}

TEST_CASE("diameter and inradius") {
  CHECK(Domain::interval(-1.0, 1.0).diameter() == 2.0);
  CHECK(Domain::ball({0.0, 0.0}, 0.25, 2).diameter() == 0.5);
  CHECK(Domain::box({0.0, 0.0}, {3.0, 4.0}, 2).diameter() == doctest::Approx(5.0));
  CHECK(Domain::box({0.0, 0.0}, {3.0, 4.0}, 2).inradius() == doctest::Approx(1.5));
  CHECK(Domain::interval(-1.0, 1.0).inradius() == 1.0);
}

TEST_CASE("build_grid examples") {
  const auto g1 = build_grid(Domain::interval(-1.0, 1.0), 0.5);
  REQUIRE(g1->size() == 3);
  CHECK(g1->node(0)[0] == -0.5);
  CHECK(g1->node(1)[0] == 0.0);
  CHECK(g1->node(2)[0] == 0.5);

  const auto g2 = build_grid(Domain::ball({0.0, 0.0}, 1.0, 2), 0.5);
  REQUIRE(g2->size() == 9);
  std::set<std::pair<double, double>> seen;
  for (const Point& p : g2->nodes()) {
    CHECK(std::abs(p[0]) <= 0.5);
    CHECK(std::abs(p[1]) <= 0.5);
    seen.insert({p[0], p[1]});
  }
  CHECK(seen.size() == 9);
  // Lexicographic: first coordinate major.
  for (std::size_t i = 1; i < g2->size(); ++i) {
    const Point& a = g2->node(i - 1);
    const Point& b = g2->node(i);
    CHECK((a[0] < b[0] || (a[0] == b[0] && a[1] < b[1])));
  }

  CHECK_THROWS_AS(build_grid(Domain::interval(-1.0, 1.0), 0.6), Error);
  try {
    build_grid(Domain::interval(-1.0, 1.0), 0.75);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Resolution);
  }
  CHECK_THROWS_AS(build_grid(Domain::interval(-1.0, 1.0), 0.0), Error);
}

TEST_CASE("grid nodes are interior and uniformly spaced") {
  const Domain shapes[] = {Domain::interval(-0.25, 0.25), Domain::ball({0.0, 0.0}, 0.25, 2),
                           Domain::box({-0.2, -0.1}, {0.2, 0.1}, 2),
                           Domain::ball({0.1, 0.0}, 0.2, 1)};
  for (const Domain& d : shapes) {
    const double h = d.diameter() / 10.0;
    const auto g = build_grid(d, h);
    CHECK(g->size() >= 1);
    for (std::size_t i = 0; i < g->size(); ++i) {
      const Point& p = g->node(i);
      CHECK(d.contains(p));
      for (int a = 0; a < d.dim(); ++a) {
        const double q = p[a] / h;
        CHECK(std::abs(q - std::round(q)) < 1e-9);
      }
      const auto idx = g->lattice_index(i);
      CHECK(g->node_at(idx[0], idx[1]) == static_cast<int>(i));
    }
  }
}

TEST_CASE("grid construction is deterministic") {
  const Domain d = Domain::ball({0.01, -0.02}, 0.3, 2);
  const auto a = build_grid(d, 0.037);
  const auto b = build_grid(d, 0.037);
  REQUIRE(a->size() == b->size());
  for (std::size_t i = 0; i < a->size(); ++i) CHECK(a->node(i) == b->node(i));
}

TEST_CASE("interpolation examples") {
  const auto g = build_grid(Domain::interval(-1.0, 1.0), 0.5);
  REQUIRE(g->size() == 3);
  std::vector<double> v(g->size(), 0.0);
  int i0 = -1, i1 = -1;
  for (std::size_t i = 0; i < g->size(); ++i) {
    if (g->node(i)[0] == 0.0) i0 = static_cast<int>(i);
    if (g->node(i)[0] == 0.5) i1 = static_cast<int>(i);
  }
  REQUIRE(i0 >= 0);
  REQUIRE(i1 >= 0);
  v[i0] = 1.0;
  v[i1] = 3.0;
  const GridFunction u(g, v);
  CHECK(interpolate(u, {0.25, 0.0}) == doctest::Approx(2.0));
  CHECK(interpolate(u, {0.0, 0.0}) == 1.0);
  CHECK(interpolate(u, {0.5, 0.0}) == 3.0);
  CHECK(interpolate(u, {2.0, 0.0}) == 0.0);
  CHECK(interpolate(u, {-1.0, 0.0}) == 0.0);
  // Between the last node and the exterior lattice point at 1.
  CHECK(interpolate(u, {0.75, 0.0}) == doctest::Approx(1.5));
}

TEST_CASE("interpolation reproduces affine functions on interior cells") {
  const Domain d = Domain::ball({0.0, 0.0}, 0.5, 2);
  const double h = 0.05;
  const auto g = build_grid(d, h);
  auto f = [](const Point& p) { return 0.3 - 1.7 * p[0] + 2.2 * p[1]; };
  std::vector<double> v;
  for (const Point& p : g->nodes()) v.push_back(f(p));
  const GridFunction u(g, v);
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> U(-0.5, 0.5);
  int tested = 0;
  for (int k = 0; k < 2000; ++k) {
    const Point y{U(rng), U(rng)};
    if (d.dist_to_boundary(y) < 2.0 * h || !d.contains(y)) continue;
    ++tested;
    CHECK(u.interpolate(y) == doctest::Approx(f(y)).epsilon(1e-12).scale(1.0));
  }
  CHECK(tested > 100);
}

TEST_CASE("interpolation on nodes and far outside") {
  const Domain d = Domain::box({-0.2, -0.1}, {0.2, 0.1}, 2);
  const auto g = build_grid(d, 0.025);
  std::vector<double> v;
  for (const Point& p : g->nodes()) v.push_back(std::sin(7.0 * p[0]) + p[1]);
  const GridFunction u(g, v);
  for (std::size_t i = 0; i < g->size(); ++i)
    CHECK(u.interpolate(g->node(i)) == doctest::Approx(v[i]).epsilon(1e-14));
  CHECK(u.interpolate({0.0, 0.2}) == 0.0);
  CHECK(u.interpolate({0.5, 0.5}) == 0.0);
  CHECK(u.interpolate({-0.3, 0.0}) == 0.0);
}

TEST_CASE("stencil weights are a partition of unity inside") {
  const auto g = build_grid(Domain::ball({0.0, 0.0}, 0.5, 2), 0.05);
  std::array<StencilEntry, 4> st{};
  const int n = g->stencil({0.0123, -0.0311}, st);
  CHECK(n == 4);
  double s = 0.0;
  for (int k = 0; k < n; ++k) s += st[k].weight;
  CHECK(s == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(g->stencil({2.0, 2.0}, st) == 0);
}

TEST_CASE("grid function size must match") {
  const auto g = build_grid(Domain::interval(-1.0, 1.0), 0.5);
  CHECK_THROWS_AS(GridFunction(g, {1.0, 2.0}), Error);
}
