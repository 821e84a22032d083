#include "shadowgeom/harness.hpp"

#include "harness_internal.hpp"

#include <json.hpp>

#include <cmath>

namespace shadowgeom {

namespace {

/// Largest-facet normals and coordinate axes as extra starting directions.
std::vector<Direction> shadow_candidates(const Polytope& p) {
  const int n = p.dim();
  std::vector<Direction> cand;
  for (int i = 0; i < n; ++i) cand.push_back(Direction(Vec::Unit(n, i)));
  std::vector<const PolytopeFacet*> facets;
  for (const auto& f : p.facets()) facets.push_back(&f);
  std::stable_sort(facets.begin(), facets.end(),
                   [](const PolytopeFacet* a, const PolytopeFacet* b) { return a->measure > b->measure; });
  for (std::size_t i = 0; i < std::min<std::size_t>(16, facets.size()); ++i) cand.push_back(facets[i]->normal);
  return cand;
}

constexpr int kSearchScreen = 256;

double min_shadow_surface(const Polytope& p, RngSeed seed) {
  return detail::screened_sphere_min([&p](const Direction& xi) { return shadow_surface(p, xi); }, p.dim(), seed,
                                     kSearchScreen, shadow_candidates(p))
      .value;
}

double ghp_ratio(const Polytope& p, RngSeed seed) {
  const int n = p.dim();
  const SurfaceAreaMeasure sigma = surface_measure(p);
  const double bound = 2.0 * (n - 1) / n * p.surface_area() / p.volume();
  const auto m = detail::screened_sphere_min(
      [&](const Direction& xi) { return -shadow_surface(p, xi) / cauchy_shadow_volume(sigma, xi); }, n, seed,
      kSearchScreen, shadow_candidates(p));
  return -m.value / bound;
}

double zon2_ratio(const Body& body, RngSeed seed) {
  const int n = body.dim();
  const Polytope& p = body.polytope;
  const SurfaceAreaMeasure sigma = surface_measure(p);
  double best = 0.0;
  for (int k = 2; k <= n - 1; ++k) {
    GrassmannObjective f;
    if (body.zonotope) {
      const Zonotope& z = *body.zonotope;
      f = [&z](const SubspaceBasis& s) { return zonotope_volume(zonotope_project(z, s)); };
    } else if (k == n - 1) {
      f = [&sigma](const SubspaceBasis& s) {
        const Mat normal = orthocomplement(s.frame);
        return cauchy_shadow_volume(sigma, Direction(normal.row(0).transpose()));
      };
    } else {
      f = [&p](const SubspaceBasis& s) { return shadow_measure(p, s).volume; };
    }
    const double m = detail::screened_grassmann_min(f, n, k, seed.derive(static_cast<std::uint64_t>(k)), 64);
    const double rhs = n * std::pow(b_constant(n), n - k) / k * std::pow(p.volume(), static_cast<double>(k) / n);
    best = std::max(best, m / rhs);
  }
  return best;
}

double lower_min_ratio(const Polytope& p, RngSeed seed) {
  const int n = p.dim();
  const MinSurfaceResult pos = minimal_surface_position(p, 1e-9, 500);
  const Polytope q = pos.position.apply(p);
  const double d = q.surface_area() / std::pow(q.volume(), (n - 1.0) / n);
  const double factor =
      (n - 1) * std::pow(omega(n), 1.0 / (n - 1)) / (4.0 * std::pow(n, (n - 2.0) / (n - 1)) * std::pow(d, 1.0 / (n - 1)));
  return std::pow(q.volume(), 1.0 / n) * min_shadow_surface(q, seed) / (factor * q.surface_area());
}

struct Candidate {
  bool zonotope = false;
  Points data;  // points or generators
  /// Positive-orthant seeds reflected through every coordinate sign pattern.
  bool unconditional = false;
};

Points reflect_all(const Points& seeds) {
  const int n = static_cast<int>(seeds.rows());
  const int m = static_cast<int>(seeds.cols());
  Points out(n, m << n);
  for (int s = 0; s < (1 << n); ++s)
    for (int j = 0; j < m; ++j)
      for (int i = 0; i < n; ++i) out(i, s * m + j) = ((s >> i) & 1 ? -1.0 : 1.0) * std::abs(seeds(i, j));
  return out;
}

Body realise(const Candidate& c) {
  if (c.zonotope) return make_body_from_zonotope("search", Zonotope(Vec::Zero(c.data.rows()), c.data));
  if (c.unconditional) return make_body_from_points("search", reflect_all(c.data));
  const Polytope raw = convex_hull(c.data);
  Points shifted = raw.vertices();
  shifted.colwise() -= centroid_and_covariance(raw).centroid;
  return make_body_from_points("search", shifted);
}

Candidate initial(const std::string& family, int n, std::mt19937_64& engine) {
  std::normal_distribution<double> normal;
  Candidate c;
  if (family == "random-hull") {
    c.data.resize(n, 3 * n);
    for (Eigen::Index j = 0; j < c.data.cols(); ++j)
      for (int i = 0; i < n; ++i) c.data(i, j) = normal(engine);
  } else if (family == "random-zonotope") {
    c.zonotope = true;
    c.data.resize(n, n + 3);
    for (Eigen::Index j = 0; j < c.data.cols(); ++j)
      for (int i = 0; i < n; ++i) c.data(i, j) = normal(engine);
  } else if (family == "perturbed-cube") {
    c.data.resize(n, 1 << n);
    std::uniform_real_distribution<double> u(-0.1, 0.1);
    for (int mask = 0; mask < (1 << n); ++mask)
      for (int i = 0; i < n; ++i) c.data(i, mask) = ((mask >> i) & 1 ? 1.0 : -1.0) + u(engine);
  } else if (family == "unconditional-hull") {
    c.unconditional = true;
    c.data.resize(n, 2);
    for (Eigen::Index j = 0; j < c.data.cols(); ++j)
      for (int i = 0; i < n; ++i) c.data(i, j) = std::abs(normal(engine)) + 0.1;
  } else {
    throw GeometryError(ErrorKind::kInvalidArgument, "unknown search family '" + family + "'");
  }
  return c;
}

}  // namespace

double search_ratio(const std::string& id, const Body& body, std::uint64_t seed) {
  const RngSeed s = RngSeed{seed, 0}.derive("search-ratio").derive(id);
  const Polytope& p = body.polytope;
  const int n = body.dim();
  if (id == "GHP") return ghp_ratio(p, s);
  if (id == "T-HYPER-1") {
    const double d = minimal_surface_position(p, 1e-9, 500).partial;
    const double factor = 2.0 * b_constant(n) * d / (n * std::pow(omega(n), 1.0 / n));
    return std::pow(p.volume(), 1.0 / n) * min_shadow_surface(p, s) / (factor * p.surface_area());
  }
  if (id == "T-HYPER-2")
    return std::pow(p.volume(), 1.0 / n) * min_shadow_surface(p, s) / (2.0 * b_constant(n) * p.surface_area());
  if (id == "T-ZON-2") return zon2_ratio(body, s);
  if (id == "T-LOWER-MIN") return lower_min_ratio(p, s);
  throw GeometryError(ErrorKind::kInvalidArgument, "search is not defined for check '" + id + "'");
}

SearchTrace extremizer_search(const std::string& id, const std::string& family, int n, int budget,
                              std::uint64_t seed) {
  if (id != "GHP" && id != "T-HYPER-1" && id != "T-HYPER-2" && id != "T-ZON-2" && id != "T-LOWER-MIN")
    throw GeometryError(ErrorKind::kInvalidArgument, "search is not defined for check '" + id + "'");
  if (n < 2 || n > kMaxDim) throw GeometryError(ErrorKind::kInvalidDimension, "search dimension must be in [2, 8]");
  if (budget < 1) throw GeometryError(ErrorKind::kInvalidArgument, "search budget must be >= 1");
  // The lower-bound target is searched for its smallest ratio.
  const double sign = id == "T-LOWER-MIN" ? -1.0 : 1.0;
  auto engine = make_engine(RngSeed{seed, 0}.derive("search").derive(id).derive(family));
  std::normal_distribution<double> normal;

  SearchTrace trace;
  trace.id = id;
  trace.family = family;
  trace.n = n;
  trace.budget = budget;

  Candidate current = initial(family, n, engine);
  Body body = realise(current);
  double score = sign * search_ratio(id, body, seed);
  trace.steps.push_back({1, sign * score, body_to_json(body)});
  double step = 0.1;
  for (int eval = 2; eval <= budget; ++eval) {
    Candidate next = current;
    const double scale = next.data.cwiseAbs().maxCoeff();
    for (Eigen::Index j = 0; j < next.data.cols(); ++j)
      for (int i = 0; i < n; ++i) next.data(i, j) += step * scale * normal(engine);
    double cand = -INFINITY;
    Body nb;
    try {
      nb = realise(next);
      cand = sign * search_ratio(id, nb, seed);
    } catch (const GeometryError&) {
      cand = -INFINITY;
    }
    if (cand > score) {
      current = std::move(next);
      score = cand;
      trace.steps.push_back({eval, sign * score, body_to_json(nb)});
      step = std::min(0.5, step * 1.5);
    } else {
      step = std::max(1e-4, step * std::pow(1.5, -0.25));
    }
  }
  trace.best_ratio = sign * score;
  return trace;
}

std::string search_json(const SearchTrace& trace) {
  nlohmann::ordered_json doc;
  doc["id"] = trace.id;
  doc["family"] = trace.family;
  doc["n"] = trace.n;
  doc["budget"] = trace.budget;
  doc["best_ratio"] = trace.best_ratio;
  nlohmann::ordered_json steps = nlohmann::ordered_json::array();
  for (const auto& s : trace.steps) {
    nlohmann::ordered_json j;
    j["evaluation"] = s.evaluation;
    j["ratio"] = s.ratio;
    j["body"] = nlohmann::ordered_json::parse(s.body_json);
    steps.push_back(j);
  }
  doc["trace"] = steps;
  return doc.dump(2) + "\n";
}

}  // namespace shadowgeom
