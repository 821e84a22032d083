#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "shadowgeom/bodies.hpp"
#include "shadowgeom/quermass.hpp"

#include <cmath>
#include <numbers>

using namespace shadowgeom;

namespace {

Polytope cube(int n) { return make_named_body("cube", n).polytope; }
Polytope cross(int n) { return make_named_body("cross", n).polytope; }

Points corner_simplex(int n) {
  Points p = Points::Zero(n, n + 1);
  for (int i = 0; i < n; ++i) p(i, i + 1) = 1.0;
  return p;
}

bool same_vertex_sets(const Points& a, const Points& b, double tol) {
  if (a.cols() != b.cols()) return false;
  for (Eigen::Index i = 0; i < a.cols(); ++i) {
    bool found = false;
    for (Eigen::Index j = 0; j < b.cols() && !found; ++j) found = (a.col(i) - b.col(j)).norm() <= tol;
    if (!found) return false;
  }
  return true;
}

Mat random_matrix(int n, std::mt19937_64& engine) {
  std::normal_distribution<double> normal;
  Mat m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = normal(engine);
  return m;
}

std::vector<std::string> corpus_all() {
  std::vector<std::string> names = default_corpus(3, 2);
  names.push_back("unit-cube");
  return names;
}

}  // namespace

TEST_CASE("convex_hull examples") {
  Points square(2, 5);
  square << 1, 1, -1, -1, 0, 1, -1, 1, -1, 0;
  const Polytope sq = convex_hull(square);
  CHECK(sq.num_vertices() == 4);
  CHECK(sq.facets().size() == 4);
  CHECK(sq.volume() == doctest::Approx(4.0));

  const Polytope b1 = cross(3);
  CHECK(b1.num_vertices() == 6);
  REQUIRE(b1.facets().size() == 8);
  for (const auto& f : b1.facets())
    for (int i = 0; i < 3; ++i) CHECK(std::abs(std::abs(f.normal[i]) - 1.0 / std::sqrt(3.0)) < 1e-12);

  // hulls of sphere points grow towards the ball
  const double omega4 = std::numbers::pi * std::numbers::pi / 2.0;
  double previous = 0.0;
  for (int count : {100, 400, 1600}) {
    const auto dirs = sample_sphere(4, count, {1, 0});
    const Polytope p = convex_hull(dirs, 4);
    CHECK(p.volume() < omega4);
    CHECK(p.volume() > previous);
    previous = p.volume();
  }
  CHECK(previous > 0.9 * omega4);
}

TEST_CASE("convex_hull rejects degenerate input") {
  Points flat(3, 4);
  flat << 0, 1, 0, 1, 0, 0, 1, 1, 0, 0, 0, 0;
  try {
    convex_hull(flat);
    FAIL("expected degenerate-input");
  } catch (const DegenerateInputError& e) {
    CHECK(e.kind() == ErrorKind::kDegenerateInput);
    CHECK(e.affine_dim() == 2);
  }
  Points line(3, 3);
  line << 0, 1, 2, 0, 1, 2, 0, 1, 2;
  try {
    convex_hull(line);
    FAIL("expected degenerate-input");
  } catch (const DegenerateInputError& e) {
    CHECK(e.affine_dim() == 1);
  }
}

TEST_CASE("non-extreme points are dropped") {
  Points p(3, 8 + 7);
  p.leftCols(8) = cube(3).vertices();
  p.rightCols(7) << 0, 1, 0, 0.5, 0, 1, 0.2, 0, 0, 1, 0.5, 0, 1, 0.1, 0, 0, 0, -1, 1, 1, 0.3;
  const Polytope q = convex_hull(p);
  CHECK(q.num_vertices() == 8);
  CHECK(q.facets().size() == 6);
  for (const auto& f : q.facets()) CHECK(f.vertices.size() == 4);
}

TEST_CASE("volume") {
  CHECK(cube(3).volume() == doctest::Approx(8.0).epsilon(1e-14));
  CHECK(convex_hull(corner_simplex(3)).volume() == doctest::Approx(1.0 / 6.0).epsilon(1e-14));
  CHECK(cross(3).volume() == doctest::Approx(4.0 / 3.0).epsilon(1e-14));
  for (int n = 2; n <= 6; ++n) {
    CHECK(make_named_body("simplex", n).polytope.volume() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(cross(n).volume() == doctest::Approx(std::pow(2.0, n) / std::tgamma(n + 1.0)).epsilon(1e-12));
  }
}

TEST_CASE("surface_measure") {
  const auto sq = surface_measure(cube(3));
  CHECK(sq.atoms.size() == 6);
  for (const auto& a : sq.atoms) CHECK(a.weight == doctest::Approx(4.0));
  CHECK(sq.total() == doctest::Approx(24.0));

  const auto oc = surface_measure(cross(3));
  CHECK(oc.atoms.size() == 8);
  for (const auto& a : oc.atoms) CHECK(a.weight == doctest::Approx(std::sqrt(3.0) / 2.0).epsilon(1e-12));
  CHECK(oc.total() == doctest::Approx(4.0 * std::sqrt(3.0)));

  // simplex: cone identity S = n |K| / dist for the equidistant centroid
  const Polytope s = make_named_body("simplex", 3).polytope;
  const double dist = s.facets()[0].offset;
  for (const auto& f : s.facets()) CHECK(f.offset == doctest::Approx(dist).epsilon(1e-12));
  CHECK(std::abs(surface_measure(s).total() - 3.0 * s.volume() / dist) < 1e-9);
}

TEST_CASE("structural invariants on the corpus") {
  for (int n : {3, 4}) {
    auto names = default_corpus(n, 2);
    names.push_back("unit-cube");
    for (const auto& name : names) {
      CAPTURE(name);
      CAPTURE(n);
      const Polytope p = make_named_body(name, n).polytope;
      const double scale = p.scale();
      Vec closed = Vec::Zero(n);
      double cone = 0.0;
      for (const auto& f : p.facets()) {
        CHECK(std::abs(f.normal.norm() - 1.0) < 1e-12);
        for (int j = 0; j < p.num_vertices(); ++j) CHECK(f.normal.dot(p.vertex(j)) <= f.offset + 1e-9 * scale);
        int tight = 0;
        for (int j : f.vertices) tight += std::abs(f.normal.dot(p.vertex(j)) - f.offset) <= 1e-9 * scale;
        CHECK(tight >= n);
        closed += f.measure * f.normal;
        cone += f.measure * (f.offset - f.normal.dot(p.interior_point()));
      }
      CHECK(closed.norm() <= 1e-8 * p.surface_area());
      CHECK(std::abs(cone / n - p.volume()) <= 1e-9 * p.volume());
      CHECK(p.surface_area() <= n * p.volume() / inradius(p).radius * (1 + 1e-12));
    }
  }
}

TEST_CASE("support and gauge") {
  const Polytope q = cube(3);
  const Direction diag = Vec::Ones(3) / std::sqrt(3.0);
  CHECK(support(q, diag) == doctest::Approx(std::sqrt(3.0)));
  CHECK(support(cross(3), Vec::Unit(3, 0)) == doctest::Approx(1.0));
  CHECK(gauge(q, Vec::Unit(3, 0)) == doctest::Approx(1.0));
  CHECK(gauge(q, diag) == doctest::Approx(1.0 / std::sqrt(3.0)));

  const Polytope h = make_named_body("random-hull(10,3)", 3).polytope;
  auto engine = make_engine({3, 3});
  for (int i = 0; i < 20; ++i) {
    const Direction x = random_direction(3, engine);
    CHECK(support(h, x) + support(h, -x) >= 0.0);
    CHECK(support(h, x) + support(h, -x) == doctest::Approx(interval_shadow(h, x)));
  }

  const Polytope hp = polar(h);
  for (int i = 0; i < 20; ++i) {
    const Direction x = random_direction(3, engine);
    CHECK(gauge(h, x) == doctest::Approx(support(hp, x)).epsilon(1e-10));
  }

  Points shifted = q.vertices();
  shifted.colwise() += Vec::Constant(3, 2.0);
  const Polytope off = convex_hull(shifted);
  try {
    gauge(off, Vec::Unit(3, 0));
    FAIL("expected origin-not-interior");
  } catch (const GeometryError& e) {
    CHECK(e.kind() == ErrorKind::kOriginNotInterior);
  }
  CHECK_THROWS_AS(polar(off), GeometryError);
}

TEST_CASE("polar") {
  CHECK(same_vertex_sets(polar(cube(3)).vertices(), cross(3).vertices(), 1e-12));
  CHECK(same_vertex_sets(polar(cross(3)).vertices(), cube(3).vertices(), 1e-12));
  for (int seed = 0; seed < 5; ++seed) {
    const Polytope h = make_named_body("random-hull(12," + std::to_string(seed) + ")", 3).polytope;
    CHECK(same_vertex_sets(polar(polar(h)).vertices(), h.vertices(), 1e-8));
  }
}

TEST_CASE("project and interval_shadow") {
  const Polytope q = cube(3);
  const Polytope sq = project(q, SubspaceBasis::hyperplane(Vec::Unit(3, 2)));
  CHECK(sq.dim() == 2);
  CHECK(sq.volume() == doctest::Approx(4.0));
  const Direction diag = Vec::Ones(3) / std::sqrt(3.0);
  CHECK(project(q, SubspaceBasis::hyperplane(diag)).volume() == doctest::Approx(4.0 * std::sqrt(3.0)));

  const Polytope ball = make_named_body("ball-approx(2000)", 3).polytope;
  for (const auto& f : sample_grassmannian(3, 2, 5, {1, 1}))
    CHECK(std::abs(project(ball, f).volume() - std::numbers::pi) < 0.02 * std::numbers::pi);

  CHECK(interval_shadow(q, Vec::Unit(3, 0)) == doctest::Approx(2.0));
  CHECK(interval_shadow(q, diag) == doctest::Approx(2.0 * std::sqrt(3.0)));
  CHECK(interval_shadow(q, diag) >= 2.0 * inradius(q).radius);

  SubspaceBasis line{Mat(Eigen::RowVector3d(1, 0, 0))};
  CHECK_THROWS_AS(project(q, line), GeometryError);
  CHECK_THROWS_AS(project(q, SubspaceBasis::hyperplane(Vec::Unit(4, 0))), GeometryError);
}

TEST_CASE("Cauchy formula for shadows") {
  auto engine = make_engine({5, 5});
  for (const auto& name : corpus_all()) {
    CAPTURE(name);
    const Polytope p = make_named_body(name, 3).polytope;
    const auto sigma = surface_measure(p);
    for (int i = 0; i < 100; ++i) {
      const Direction xi = random_direction(3, engine);
      const double hull = project(p, SubspaceBasis::hyperplane(xi)).volume();
      CHECK(std::abs(hull - cauchy_shadow_volume(sigma, xi)) <= 1e-8 * hull);
    }
  }
}

TEST_CASE("projection monotonicity on nested bodies") {
  const Polytope inner = cross(4);
  const Polytope outer = cube(4);
  for (const auto& f : sample_grassmannian(4, 2, 20, {2, 2}))
    CHECK(project(inner, f).volume() <= project(outer, f).volume());
  for (const auto& f : sample_grassmannian(4, 3, 20, {2, 3}))
    CHECK(project(inner, f).volume() <= project(outer, f).volume());
}

TEST_CASE("transform") {
  const Polytope q = cube(3);
  CHECK(transform(q, 2.0 * Mat::Identity(3, 3)).volume() == doctest::Approx(64.0));
  auto engine = make_engine({8, 8});
  const Mat rot = SubspaceBasis::from_rows(random_matrix(3, engine)).frame;
  const Polytope r = transform(q, rot);
  CHECK(std::abs(r.volume() - 8.0) < 1e-9);
  CHECK(std::abs(r.surface_area() - 24.0) < 1e-9);

  Mat stretch = Mat::Identity(3, 3);
  stretch(0, 0) = 4.0;
  CHECK(surface_area_under_transform(q, Mat::Identity(3, 3)) == doctest::Approx(24.0));
  CHECK(surface_area_under_transform(q, 2.0 * Mat::Identity(3, 3)) == doctest::Approx(96.0));
  // [-4,4] x [-1,1]^2 has surface 2*4 + 4*16 = 72
  CHECK(surface_area_under_transform(q, stretch) == doctest::Approx(72.0).epsilon(1e-12));
  CHECK(std::abs(transform(q, stretch).surface_area() - 72.0) < 1e-9);

  for (int i = 0; i < 5; ++i) {
    const Mat t = random_matrix(3, engine);
    const Polytope h = make_named_body("random-hull(10," + std::to_string(i) + ")", 3).polytope;
    CHECK(std::abs(surface_area_under_transform(h, t) - transform(h, t).surface_area()) <=
          1e-9 * transform(h, t).surface_area());
  }

  try {
    transform(q, Mat::Zero(3, 3));
    FAIL("expected singular-matrix");
  } catch (const GeometryError& e) {
    CHECK(e.kind() == ErrorKind::kSingularMatrix);
  }
}

TEST_CASE("inradius and circumradius") {
  const Inball qi = inradius(cube(3));
  CHECK(qi.radius == doctest::Approx(1.0));
  CHECK(qi.center.norm() < 1e-12);
  CHECK(inradius(cross(3)).radius == doctest::Approx(1.0 / std::sqrt(3.0)));

  // corner simplex: grid search of the largest facet distance
  const Polytope s = convex_hull(corner_simplex(3));
  double best = 0.0;
  const int steps = 120;
  for (int a = 1; a < steps; ++a)
    for (int b = 1; a + b < steps; ++b)
      for (int c = 1; a + b + c < steps; ++c) {
        const Vec x = Eigen::Vector3d(a, b, c) / steps;
        double d = INFINITY;
        for (const auto& f : s.facets()) d = std::min(d, f.offset - f.normal.dot(x));
        best = std::max(best, d);
      }
  const double r = inradius(s).radius;
  CHECK(r >= best - 1e-12);
  CHECK(r <= best + 0.01);
  CHECK(r == doctest::Approx(1.0 / (3.0 + std::sqrt(3.0))).epsilon(1e-12));

  CHECK(circumradius(cube(3)) == doctest::Approx(std::sqrt(3.0)));
  CHECK(circumradius(cross(3)) == doctest::Approx(1.0));
  for (const auto& name : corpus_all()) {
    const Polytope p = make_named_body(name, 3).polytope;
    CHECK(circumradius(p) >= inradius(p).radius);
  }
}

TEST_CASE("centroid and covariance") {
  const PolytopeMoments c = centroid_and_covariance(make_named_body("unit-cube", 3).polytope);
  CHECK(c.centroid.norm() < 1e-14);
  CHECK((c.covariance - Mat::Identity(3, 3) / 12.0).norm() < 1e-14);
  CHECK(centroid_and_covariance(cube(3)).centroid.norm() < 1e-14);

  // covariance of T K against rejection sampling
  auto engine = make_engine({4, 4});
  const Polytope h = make_named_body("random-hull(9,1)", 3).polytope;
  Mat t = random_matrix(3, engine);
  const Polytope th = transform(h, t);
  const PolytopeMoments exact = centroid_and_covariance(th);
  const PolytopeMoments base = centroid_and_covariance(h);
  CHECK((exact.covariance - t * base.covariance * t.transpose()).norm() < 1e-10 * exact.covariance.norm());
  CHECK((exact.centroid - t * base.centroid).norm() < 1e-10 * (1 + exact.centroid.norm()));

  Vec lo = th.vertices().rowwise().minCoeff(), hi = th.vertices().rowwise().maxCoeff();
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<Vec> inside;
  while (inside.size() < 100000) {
    Vec x(3);
    for (int i = 0; i < 3; ++i) x[i] = lo[i] + (hi[i] - lo[i]) * u(engine);
    bool in = true;
    for (const auto& f : th.facets()) in = in && f.normal.dot(x) <= f.offset;
    if (in) inside.push_back(x);
  }
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j <= i; ++j) {
      std::vector<double> v;
      for (const auto& x : inside) v.push_back((x[i] - exact.centroid[i]) * (x[j] - exact.centroid[j]));
      const Estimate e = mc_estimate(v);
      CHECK(std::abs(e.mean - exact.covariance(i, j)) <= 4 * e.std_error);
    }
  }
}

TEST_CASE("body files") {
  const Body b = body_from_json(R"({"type":"vrep","dim":2,"data":[[1,1],[-1,1],[-1,-1],[1,-1],[0,0]]})");
  CHECK(b.polytope.num_vertices() == 4);
  CHECK(b.symmetric);

  const Body h = body_from_json(
      R"({"type":"hrep","dim":3,"name":"box","data":{"A":[[1,0,0],[-1,0,0],[0,1,0],[0,-1,0],[0,0,1],[0,0,-1]],"b":[3,-1,1,1,1,1]}})");
  CHECK(h.name == "box");
  CHECK(h.polytope.volume() == doctest::Approx(8.0));
  CHECK(h.polytope.num_vertices() == 8);

  const Body z = body_from_json(R"({"type":"zonotope","dim":2,"generators":[[1,0],[0,1],[1,1]],"center":[0,0]})");
  CHECK(z.is_zonoid());
  CHECK(z.polytope.volume() == doctest::Approx(12.0));

  const Body named = body_from_json(R"({"type":"named","dim":4,"data":"cross"})");
  CHECK(named.polytope.num_vertices() == 8);

  const Body round = body_from_json(body_to_json(make_named_body("random-hull(10,2)", 3)));
  CHECK(round.polytope.volume() == doctest::Approx(make_named_body("random-hull(10,2)", 3).polytope.volume()));

  CHECK_THROWS_AS(body_from_json("{not json"), GeometryError);
  CHECK_THROWS_AS(make_named_body("dodecahedron", 3), GeometryError);
  CHECK_THROWS_AS(body_from_json(R"({"type":"vrep","dim":3,"data":[[1,2]]})"), GeometryError);
}

TEST_CASE("named bodies are reproducible") {
  const Body a = make_named_body("random-hull(8,4)", 3);
  const Body b = make_named_body("random-hull(8,4)", 3);
  CHECK((a.polytope.vertices() - b.polytope.vertices()).norm() == 0.0);
  CHECK(centroid_and_covariance(a.polytope).centroid.norm() < 1e-12);
  const Body z = make_named_body("random-zonotope(6,1)", 3);
  CHECK(z.is_zonoid());
  CHECK(z.symmetric);
  CHECK(make_named_body("ball-approx(500)", 3).symmetric);
  CHECK_FALSE(make_named_body("simplex", 3).symmetric);
}

TEST_CASE("silhouette formula for hyperplane shadow surfaces") {
  for (int n : {2, 3, 4, 5}) {
    for (const char* name : {"cube", "cross", "simplex", "random-hull", "random-zonotope", "ball-approx(100)"}) {
      const Polytope p = make_named_body(name, n).polytope;
      const auto dirs = sample_sphere(n, 20, {9, static_cast<std::uint64_t>(n)});
      for (const auto& xi : dirs) {
        const double hull_value = shadow_measure(p, SubspaceBasis::hyperplane(xi)).surface;
        CHECK(shadow_surface(p, xi) == doctest::Approx(hull_value).epsilon(1e-10));
      }
    }
  }
  const Polytope q = make_named_body("cube", 3).polytope;
  // ties at facets parallel to xi
  CHECK(shadow_surface(q, Vec::Unit(3, 0)) == doctest::Approx(8.0).epsilon(1e-14));
  CHECK(mean_shadow_surface(q) == doctest::Approx(3.0 * std::numbers::pi).epsilon(1e-14));
  CHECK(mean_shadow_surface(make_named_body("cube", 4).polytope) == doctest::Approx(32.0).epsilon(1e-14));
}

TEST_CASE("exact mean shadow surface agrees with sampling") {
  for (int n : {3, 4}) {
    for (const char* name : {"simplex", "random-hull", "cross"}) {
      const Polytope p = make_named_body(name, n).polytope;
      const auto dirs = sample_sphere(n, 20000, {10, static_cast<std::uint64_t>(n)});
      std::vector<double> values;
      for (const auto& xi : dirs) values.push_back(shadow_surface(p, xi));
      const Estimate e = mc_estimate(values);
      CHECK(std::abs(e.mean - mean_shadow_surface(p)) <= 4.0 * e.std_error);
    }
  }
}
