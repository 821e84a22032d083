#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "shadowgeom/bodies.hpp"
#include "shadowgeom/quermass.hpp"

#include <cmath>
#include <numbers>

using namespace shadowgeom;

namespace {

Zonotope random_zonotope(int n, int m, std::mt19937_64& engine) {
  std::normal_distribution<double> normal;
  Points g(n, m);
  for (int j = 0; j < m; ++j)
    for (int i = 0; i < n; ++i) g(i, j) = normal(engine);
  Vec c(n);
  for (int i = 0; i < n; ++i) c[i] = 0.3 * normal(engine);
  return Zonotope(c, g);
}

Zonotope cube_generators(int n) { return Zonotope(Vec::Zero(n), Points::Identity(n, n)); }

/// Hull of all 2^m signed vertex sums.
Polytope brute_force(const Zonotope& z) {
  const int m = z.num_generators();
  Points p(z.dim(), 1 << m);
  for (int mask = 0; mask < (1 << m); ++mask) {
    Vec v = z.center();
    for (int j = 0; j < m; ++j) v += ((mask >> j) & 1 ? 1.0 : -1.0) * z.generators().col(j);
    p.col(mask) = v;
  }
  return convex_hull(p);
}

}  // namespace

TEST_CASE("zonotope_support") {
  const Zonotope z = cube_generators(3);
  CHECK(zonotope_support(z, Vec::Unit(3, 0)) == doctest::Approx(1.0));
  CHECK(zonotope_support(z, Vec::Ones(3) / std::sqrt(3.0)) == doctest::Approx(std::sqrt(3.0)));
  auto engine = make_engine({1, 0});
  for (int t = 0; t < 5; ++t) {
    const Zonotope r = random_zonotope(3, 5, engine);
    const Polytope p = zonotope_to_polytope(r);
    for (int i = 0; i < 50; ++i) {
      const Direction x = random_direction(3, engine);
      CHECK(std::abs(support(p, x) - zonotope_support(r, x)) < 1e-9 * (1 + p.scale()));
    }
  }
}

TEST_CASE("zonotope_volume") {
  CHECK(zonotope_volume(cube_generators(3)) == doctest::Approx(8.0));
  Points g(2, 3);
  g << 1, 0, 1, 0, 1, 1;
  const Zonotope hex(Vec::Zero(2), g);
  CHECK(zonotope_volume(hex) == doctest::Approx(12.0));
  CHECK(brute_force(hex).volume() == doctest::Approx(12.0));

  auto engine = make_engine({2, 0});
  for (int n = 2; n <= 5; ++n) {
    for (int m = n; m <= 8; ++m) {
      const Zonotope z = random_zonotope(n, m, engine);
      const double v = zonotope_volume(z);
      CHECK(std::abs(v - zonotope_to_polytope(z).volume()) <= 1e-9 * v);
      if (m <= 7) CHECK(std::abs(v - brute_force(z).volume()) <= 1e-9 * v);
    }
  }
}

TEST_CASE("zonotope_volume_estimate") {
  auto engine = make_engine({2, 1});
  const Zonotope small = random_zonotope(3, 6, engine);
  const Estimate exact = zonotope_volume_estimate(small, 100, {1, 1});
  CHECK(exact.exact);
  CHECK(exact.mean == doctest::Approx(zonotope_volume(small)));

  const Zonotope big = projection_body(make_named_body("ball-approx(2000)", 3).polytope);
  CHECK(big.num_generators() > 500);
  const Estimate est = zonotope_volume_estimate(big, 20000, {1, 2});
  CHECK_FALSE(est.exact);
  // Pi of the unit ball is omega_2 times the ball
  const double ball = omega(3) * std::pow(std::numbers::pi, 3);
  CHECK(std::abs(est.mean - ball) < 0.03 * ball);
}

TEST_CASE("zonotope_surface_area") {
  CHECK(zonotope_surface_area(cube_generators(3)) == doctest::Approx(24.0));
  Points g(2, 3);
  g << 1, 0, 1, 0, 1, 1;
  const Zonotope hex(Vec::Zero(2), g);
  CHECK(zonotope_surface_area(hex) == doctest::Approx(8.0 + 4.0 * std::sqrt(2.0)));
  CHECK(zonotope_to_polytope(hex).surface_area() == doctest::Approx(8.0 + 4.0 * std::sqrt(2.0)));

  auto engine = make_engine({3, 0});
  for (int n = 2; n <= 5; ++n) {
    const Zonotope z = random_zonotope(n, n + 3, engine);
    const double s = zonotope_surface_area(z);
    CHECK(std::abs(s - zonotope_to_polytope(z).surface_area()) <= 1e-9 * s);
    const Zonotope twice(z.center(), Points(2.0 * z.generators()));
    CHECK(zonotope_surface_area(twice) == doctest::Approx(std::pow(2.0, n - 1) * s));
  }

  // several generators in one plane: the merged facet path
  Points flat(3, 5);
  flat << 1, 0, 1, 0, 0, 0, 1, 1, 0, 0.3, 0, 0, 0, 1, 1;
  const Zonotope f(Vec::Zero(3), flat);
  CHECK(zonotope_surface_area(f) == doctest::Approx(zonotope_to_polytope(f).surface_area()).epsilon(1e-9));
}

TEST_CASE("parallel generators merge") {
  Points g(3, 5);
  g << 1, -2, 0, 0, 0.5, 0, 0, 1, 0, 0, 0, 0, 0, 1, 0;
  const Points m = merge_parallel_generators(g);
  CHECK(m.cols() == 3);
  const Zonotope z(Vec::Zero(3), g);
  CHECK(zonotope_volume(z) == doctest::Approx(8.0 * 3.5));
  CHECK(zonotope_to_polytope(z).volume() == doctest::Approx(8.0 * 3.5));
}

TEST_CASE("degenerate and oversized zonotopes") {
  Points g(3, 2);
  g << 1, 0, 0, 1, 0, 0;
  try {
    Zonotope z(Vec::Zero(3), g);
    FAIL("expected degenerate-zonotope");
  } catch (const GeometryError& e) {
    CHECK(e.kind() == ErrorKind::kDegenerateZonotope);
  }
  auto engine = make_engine({4, 0});
  const Zonotope big = random_zonotope(3, 13, engine);
  try {
    zonotope_to_polytope(big);
    FAIL("expected too-many-generators");
  } catch (const GeometryError& e) {
    CHECK(e.kind() == ErrorKind::kTooManyGenerators);
  }
}

TEST_CASE("projection_body") {
  const Zonotope pq = projection_body(make_named_body("cube", 3).polytope);
  CHECK(pq.num_generators() == 3);
  CHECK(zonotope_support(pq, Vec::Unit(3, 0)) == doctest::Approx(4.0));
  CHECK(zonotope_volume(pq) == doctest::Approx(512.0));

  auto engine = make_engine({5, 0});
  for (int s = 0; s < 3; ++s) {
    const Polytope p = make_named_body("random-hull(12," + std::to_string(s) + ")", 3).polytope;
    const Zonotope z = projection_body(p);
    for (int i = 0; i < 100; ++i) {
      const Direction xi = random_direction(3, engine);
      const double shadow = project(p, SubspaceBasis::hyperplane(xi)).volume();
      CHECK(std::abs(zonotope_support(z, xi) - shadow) <= 1e-9 * shadow);
    }
  }

  const Zonotope pb = projection_body(make_named_body("ball-approx(500)", 3).polytope);
  for (const auto& xi : sample_sphere(3, 200, {6, 0}))
    CHECK(std::abs(zonotope_support(pb, xi) - std::numbers::pi) < 0.02 * std::numbers::pi);
}

TEST_CASE("zonotope_project") {
  const Zonotope z = cube_generators(3);
  const Zonotope sq = zonotope_project(z, SubspaceBasis::hyperplane(Vec::Unit(3, 2)));
  CHECK(sq.dim() == 2);
  CHECK(merge_parallel_generators(sq.generators()).cols() == 2);
  CHECK(zonotope_volume(sq) == doctest::Approx(4.0));

  auto engine = make_engine({7, 0});
  const Zonotope r = random_zonotope(4, 6, engine);
  const Polytope rp = zonotope_to_polytope(r);
  for (int k = 2; k <= 3; ++k) {
    for (const auto& f : sample_grassmannian(4, k, 5, {7, static_cast<std::uint64_t>(k)})) {
      const double v = zonotope_volume(zonotope_project(r, f));
      CHECK(std::abs(v - project(rp, f).volume()) <= 1e-9 * v);
    }
  }

  // nested projection equals a single projection
  const SubspaceBasis f1 = sample_grassmannian(4, 3, 1, {8, 0})[0];
  const SubspaceBasis inner = sample_grassmannian(3, 2, 1, {8, 1})[0];
  const SubspaceBasis f2{Mat(inner.frame * f1.frame)};
  const Zonotope twice = zonotope_project(zonotope_project(r, f1), inner);
  const Zonotope once = zonotope_project(r, f2);
  CHECK((twice.generators() - once.generators()).norm() < 1e-12);
  CHECK_THROWS_AS(zonotope_project(r, SubspaceBasis{Mat::Identity(4, 4)}), GeometryError);
}

TEST_CASE("zonotope_to_polytope") {
  const Polytope q = zonotope_to_polytope(cube_generators(3));
  CHECK(q.facets().size() == 6);
  CHECK(q.num_vertices() == 8);
  auto engine = make_engine({9, 0});
  for (int t = 0; t < 5; ++t) {
    const Zonotope z = random_zonotope(3, 4, engine);
    const Polytope p = zonotope_to_polytope(z);
    CHECK(p.facets().size() <= 12);
    for (int i = 0; i < 1000; ++i) {
      const Direction x = random_direction(3, engine);
      CHECK(std::abs(support(p, x) - zonotope_support(z, x)) < 1e-9 * (1 + p.scale()));
    }
  }
}

TEST_CASE("zonoid_min_projection and the minimal projection bound") {
  const Zonotope z = cube_generators(3);
  const SphereMinimum m = zonoid_min_projection(z, {1, 0});
  CHECK(m.value == doctest::Approx(4.0).epsilon(1e-9));
  CHECK(m.direction.cwiseAbs().maxCoeff() == doctest::Approx(1.0).epsilon(1e-6));
  double dense = INFINITY;
  for (const auto& xi : sample_sphere(3, 1000000, {1, 1})) dense = std::min(dense, zonotope_shadow_volume(z, xi));
  CHECK(m.value <= dense);
  CHECK(dense - m.value < 1e-2);

  const double bound = 3.0 * b_constant(3) / 2.0 * std::pow(zonotope_volume(z), 2.0 / 3.0);
  CHECK(bound == doctest::Approx(4.836).epsilon(1e-3));
  CHECK(m.value <= bound);

  auto engine = make_engine({10, 0});
  const Zonotope r = random_zonotope(3, 5, engine);
  const Zonotope r2(r.center(), Points(2.0 * r.generators()));
  const double a = zonoid_min_projection(r, {2, 0}).value;
  const double b = zonoid_min_projection(r2, {2, 0}).value;
  CHECK(b == doctest::Approx(4.0 * a).epsilon(1e-8));
}

TEST_CASE("zonoid volume identity for projection bodies") {
  for (int n : {3, 4}) {
    for (int s = 0; s < 4; ++s) {
      const Polytope p = make_named_body("random-hull(" + std::to_string(2 * n + 2) + "," + std::to_string(s) + ")", n)
                             .polytope;
      const auto sigma = surface_measure(p);
      const Zonotope z = projection_body(sigma);
      double rhs = 0.0;
      for (const auto& atom : sigma.atoms) rhs += atom.weight * zonotope_shadow_volume(z, atom.direction);
      rhs /= n;
      const double lhs = zonotope_volume(z);
      CHECK(std::abs(lhs - rhs) <= 1e-8 * lhs);
    }
  }
}

TEST_CASE("shadow volumes of zonotopes") {
  auto engine = make_engine({11, 0});
  const Zonotope z = random_zonotope(4, 6, engine);
  const Polytope p = zonotope_to_polytope(z);
  const auto sigma = surface_measure(p);
  for (int i = 0; i < 20; ++i) {
    const Direction xi = random_direction(4, engine);
    CHECK(zonotope_shadow_volume(z, xi) == doctest::Approx(cauchy_shadow_volume(sigma, xi)).epsilon(1e-10));
  }
  CHECK(binomial(12, 5) == 792.0);
  int count = 0;
  for_each_subset(6, 3, [&](const std::vector<int>&) { ++count; });
  CHECK(count == 20);
}
