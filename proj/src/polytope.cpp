#include "shadowgeom/polytope.hpp"

#include <algorithm>
#include <map>
#include <numbers>
#include <cmath>
#include <numeric>

namespace shadowgeom {

double SurfaceAreaMeasure::total() const {
  double s = 0.0;
  for (const Atom& a : atoms) s += a.weight;
  return s;
}

bool Polytope::origin_interior() const {
  for (const PolytopeFacet& f : facets_)
    if (f.offset <= 1e-12 * scale_) return false;
  return true;
}

namespace {

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(int n) : parent(static_cast<std::size_t>(n)) {
    std::iota(parent.begin(), parent.end(), 0);
  }
  int find(int x) {
    while (parent[static_cast<std::size_t>(x)] != x) {
      parent[static_cast<std::size_t>(x)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
      x = parent[static_cast<std::size_t>(x)];
    }
    return x;
  }
  void unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[static_cast<std::size_t>(std::max(a, b))] = std::min(a, b);
  }
};

double factorial(int k) {
  double r = 1.0;
  for (int i = 2; i <= k; ++i) r *= i;
  return r;
}

void require_same_dim(const Polytope& p, Eigen::Index size, const char* what) {
  if (size != p.dim())
    throw GeometryError(ErrorKind::kInvalidDimension,
                        std::string(what) + ": expected dimension " + std::to_string(p.dim()) + ", got " +
                            std::to_string(size));
}

void require_origin_interior(const Polytope& p, const char* what) {
  if (!p.origin_interior())
    throw GeometryError(ErrorKind::kOriginNotInterior, std::string(what) + " requires the origin in the interior");
}

}  // namespace

Polytope convex_hull(const Points& points) {
  const int d = static_cast<int>(points.rows());
  if (points.cols() == 0) throw GeometryError(ErrorKind::kEmptyInput, "convex_hull of no points");
  if (d < 2 || d > kMaxDim)
    throw GeometryError(ErrorKind::kInvalidDimension, "convex_hull needs 2 <= d <= 8, got " + std::to_string(d));
  if (points.cols() > 100000)
    throw GeometryError(ErrorKind::kInvalidArgument, "convex_hull accepts at most 1e5 points");
  const SimplicialHull hull = simplicial_hull(points);
  const int nf = static_cast<int>(hull.facets.size());

  double radius = 0.0;
  for (Eigen::Index j = 0; j < points.cols(); ++j) radius = std::max(radius, points.col(j).norm());
  const double scale = std::max(radius, hull.scale);

  UnionFind groups(nf);
  for (int f = 0; f < nf; ++f) {
    const auto& a = hull.facets[static_cast<std::size_t>(f)];
    for (int j = 0; j < d; ++j) {
      const int g = a.neighbors[j];
      if (g <= f) continue;
      const auto& b = hull.facets[static_cast<std::size_t>(g)];
      if ((a.normal - b.normal).norm() <= kFacetMergeTol && std::abs(a.offset - b.offset) <= kFacetMergeTol * scale)
        groups.unite(f, g);
    }
  }

  std::vector<int> group_of(static_cast<std::size_t>(nf));
  std::vector<int> group_ids;
  std::vector<int> group_size;
  {
    std::vector<int> root_to_group(static_cast<std::size_t>(nf), -1);
    for (int f = 0; f < nf; ++f) {
      const int r = groups.find(f);
      if (root_to_group[static_cast<std::size_t>(r)] < 0) {
        root_to_group[static_cast<std::size_t>(r)] = static_cast<int>(group_size.size());
        group_size.push_back(0);
      }
      group_of[static_cast<std::size_t>(f)] = root_to_group[static_cast<std::size_t>(r)];
      ++group_size[static_cast<std::size_t>(group_of[static_cast<std::size_t>(f)])];
    }
  }
  const int ng = static_cast<int>(group_size.size());

  std::vector<Vec> normals(static_cast<std::size_t>(ng), Vec::Zero(d));
  std::vector<double> measures(static_cast<std::size_t>(ng), 0.0);
  std::vector<std::vector<int>> group_points(static_cast<std::size_t>(ng));
  for (int f = 0; f < nf; ++f) {
    const auto& sf = hull.facets[static_cast<std::size_t>(f)];
    const auto g = static_cast<std::size_t>(group_of[static_cast<std::size_t>(f)]);
    normals[g] += sf.area * sf.normal;
    measures[g] += sf.area;
    for (int i = 0; i < d; ++i) group_points[g].push_back(sf.vertices[i]);
  }
  for (auto& gp : group_points) {
    std::sort(gp.begin(), gp.end());
    gp.erase(std::unique(gp.begin(), gp.end()), gp.end());
  }

  // Which merged facets touch each hull point.
  std::vector<std::vector<int>> point_groups(static_cast<std::size_t>(points.cols()));
  for (int g = 0; g < ng; ++g)
    for (int idx : group_points[static_cast<std::size_t>(g)]) point_groups[static_cast<std::size_t>(idx)].push_back(g);

  std::vector<int> new_index(static_cast<std::size_t>(points.cols()), -1);
  std::vector<int> kept;
  for (Eigen::Index j = 0; j < points.cols(); ++j) {
    const auto& gs = point_groups[static_cast<std::size_t>(j)];
    if (gs.empty()) continue;
    bool extreme = true;
    bool merged = false;
    for (int g : gs) merged = merged || group_size[static_cast<std::size_t>(g)] > 1;
    if (merged) {
      Eigen::MatrixXd m(static_cast<Eigen::Index>(gs.size()), d);
      for (std::size_t r = 0; r < gs.size(); ++r)
        m.row(static_cast<Eigen::Index>(r)) = normals[static_cast<std::size_t>(gs[r])].normalized().transpose();
      Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
      extreme = svd.singularValues()[d - 1] > 1e-7;
    }
    if (extreme) {
      new_index[static_cast<std::size_t>(j)] = static_cast<int>(kept.size());
      kept.push_back(static_cast<int>(j));
    }
  }

  Polytope p;
  p.dim_ = d;
  p.vertices_.resize(d, static_cast<Eigen::Index>(kept.size()));
  for (std::size_t i = 0; i < kept.size(); ++i) p.vertices_.col(static_cast<Eigen::Index>(i)) = points.col(kept[i]);
  p.facets_.reserve(static_cast<std::size_t>(ng));
  for (int g = 0; g < ng; ++g) {
    PolytopeFacet f;
    f.normal = normals[static_cast<std::size_t>(g)].normalized();
    f.measure = measures[static_cast<std::size_t>(g)];
    f.offset = -INFINITY;
    for (int idx : group_points[static_cast<std::size_t>(g)]) {
      f.offset = std::max(f.offset, f.normal.dot(points.col(idx)));
      const int ni = new_index[static_cast<std::size_t>(idx)];
      if (ni >= 0) f.vertices.push_back(ni);
    }
    p.facets_.push_back(std::move(f));
  }
  {
    std::map<std::pair<int, int>, double> ridge_measure;
    Mat edges(d, std::max(d - 2, 1));
    for (int f = 0; f < nf; ++f) {
      const auto& a = hull.facets[static_cast<std::size_t>(f)];
      for (int j = 0; j < d; ++j) {
        const int g = a.neighbors[j];
        if (g <= f) continue;
        const int ga = group_of[static_cast<std::size_t>(f)];
        const int gb = group_of[static_cast<std::size_t>(g)];
        if (ga == gb) continue;
        double measure = 1.0;
        if (d > 2) {
          int base = -1;
          int col = 0;
          for (int i = 0; i < d; ++i) {
            if (i == j) continue;
            if (base < 0) {
              base = a.vertices[i];
              continue;
            }
            edges.col(col++) = points.col(a.vertices[i]) - points.col(base);
          }
          const Eigen::MatrixXd e = edges.leftCols(d - 2);
          measure = std::sqrt(std::max(0.0, (e.transpose() * e).determinant())) / std::tgamma(d - 1.0);
        }
        ridge_measure[{std::min(ga, gb), std::max(ga, gb)}] += measure;
      }
    }
    p.ridges_.reserve(ridge_measure.size());
    for (const auto& [key, m] : ridge_measure) p.ridges_.push_back({key.first, key.second, m});
  }
  p.volume_ = hull.volume();
  p.surface_ = hull.surface();
  p.scale_ = 0.0;
  for (Eigen::Index j = 0; j < p.vertices_.cols(); ++j) p.scale_ = std::max(p.scale_, p.vertices_.col(j).norm());
  p.interior_ = hull.interior;

  std::vector<int> tri_index(static_cast<std::size_t>(points.cols()), -1);
  std::vector<int> tri_src;
  p.tri_facets_.reserve(hull.facets.size());
  for (const auto& sf : hull.facets) {
    std::array<int, kMaxDim> t{};
    for (int i = 0; i < d; ++i) {
      int& ti = tri_index[static_cast<std::size_t>(sf.vertices[i])];
      if (ti < 0) {
        ti = static_cast<int>(tri_src.size());
        tri_src.push_back(sf.vertices[i]);
      }
      t[i] = ti;
    }
    p.tri_facets_.push_back(t);
  }
  p.tri_points_.resize(d, static_cast<Eigen::Index>(tri_src.size()));
  for (std::size_t i = 0; i < tri_src.size(); ++i)
    p.tri_points_.col(static_cast<Eigen::Index>(i)) = points.col(tri_src[i]);
  return p;
}

Polytope convex_hull(const std::vector<Vec>& points, int d) {
  Points m(d, static_cast<Eigen::Index>(points.size()));
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (points[i].size() != d)
      throw GeometryError(ErrorKind::kInvalidDimension,
                          "point " + std::to_string(i) + " has dimension " + std::to_string(points[i].size()));
    m.col(static_cast<Eigen::Index>(i)) = points[i];
  }
  return convex_hull(m);
}

double volume(const Polytope& p) { return p.volume(); }

SurfaceAreaMeasure surface_measure(const Polytope& p) {
  SurfaceAreaMeasure s;
  s.dim = p.dim();
  s.atoms.reserve(p.facets().size());
  for (const PolytopeFacet& f : p.facets()) s.atoms.push_back({f.normal, f.measure});
  return s;
}

double support(const Polytope& p, const Vec& x) {
  require_same_dim(p, x.size(), "support");
  return (x.transpose() * p.vertices()).maxCoeff();
}

double gauge(const Polytope& p, const Direction& theta) {
  require_same_dim(p, theta.size(), "gauge");
  require_origin_interior(p, "gauge");
  double g = -INFINITY;
  for (const PolytopeFacet& f : p.facets()) g = std::max(g, f.normal.dot(theta) / f.offset);
  return g;
}

Polytope polar(const Polytope& p) {
  require_origin_interior(p, "polar");
  Points pts(p.dim(), static_cast<Eigen::Index>(p.facets().size()));
  for (std::size_t i = 0; i < p.facets().size(); ++i)
    pts.col(static_cast<Eigen::Index>(i)) = p.facets()[i].normal / p.facets()[i].offset;
  return convex_hull(pts);
}

Polytope project(const Polytope& p, const SubspaceBasis& f) {
  require_same_dim(p, f.dim_ambient(), "project");
  if (f.dim_sub() < 2 || f.dim_sub() >= p.dim())
    throw GeometryError(ErrorKind::kInvalidDimension,
                        "project needs 2 <= k <= n-1; use interval_shadow for k = 1");
  return convex_hull(Points(f.frame * p.vertices()));
}

ShadowMeasure shadow_measure(const Polytope& p, const SubspaceBasis& f) {
  require_same_dim(p, f.dim_ambient(), "shadow_measure");
  return hull_measure(Points(f.frame * p.vertices()));
}

double interval_shadow(const Polytope& p, const Direction& direction) {
  require_same_dim(p, direction.size(), "interval_shadow");
  const Eigen::RowVectorXd values = direction.transpose() * p.vertices();
  return values.maxCoeff() - values.minCoeff();
}

Polytope transform(const Polytope& p, const Mat& t) {
  require_same_dim(p, t.rows(), "transform");
  require_same_dim(p, t.cols(), "transform");
  if (std::abs(t.determinant()) <= 1e-12) throw GeometryError(ErrorKind::kSingularMatrix, "transform is singular");
  return convex_hull(Points(t * p.vertices()));
}

double surface_area_under_transform(const SurfaceAreaMeasure& sigma, const Mat& t) {
  const double det = t.determinant();
  if (std::abs(det) <= 1e-12) throw GeometryError(ErrorKind::kSingularMatrix, "transform is singular");
  const Mat inv_t = t.inverse().transpose();
  double s = 0.0;
  for (const auto& a : sigma.atoms) s += a.weight * (inv_t * a.direction).norm();
  return std::abs(det) * s;
}

double surface_area_under_transform(const Polytope& p, const Mat& t) {
  require_same_dim(p, t.rows(), "surface_area_under_transform");
  return surface_area_under_transform(surface_measure(p), t);
}

double shadow_surface(const Polytope& p, const Direction& xi) {
  const auto& facets = p.facets();
  std::vector<double> dots(facets.size());
  for (std::size_t i = 0; i < facets.size(); ++i) dots[i] = facets[i].normal.dot(xi);
  double total = 0.0;
  for (const auto& r : p.ridges()) {
    const double a1 = dots[static_cast<std::size_t>(r.facet_a)];
    const double a2 = dots[static_cast<std::size_t>(r.facet_b)];
    if ((a1 > 0) == (a2 > 0)) continue;
    const double c = facets[static_cast<std::size_t>(r.facet_a)].normal.dot(facets[static_cast<std::size_t>(r.facet_b)].normal);
    const double s2 = std::max(1.0 - c * c, 1e-300);
    total += r.measure * std::sqrt(std::max(0.0, (a1 * a1 - 2.0 * c * a1 * a2 + a2 * a2) / s2));
  }
  return total;
}

double mean_shadow_surface(const Polytope& p) {
  const int n = p.dim();
  // E|P_N xi| for a 2-plane N and xi uniform on the sphere
  const double mean_radius = std::exp(std::lgamma(1.5) + std::lgamma(n / 2.0) - std::lgamma((n + 1) / 2.0));
  const auto& facets = p.facets();
  double total = 0.0;
  for (const auto& r : p.ridges()) {
    const double c = facets[static_cast<std::size_t>(r.facet_a)].normal.dot(facets[static_cast<std::size_t>(r.facet_b)].normal);
    total += r.measure * std::acos(std::clamp(c, -1.0, 1.0));
  }
  return total * mean_radius / std::numbers::pi;
}

double cauchy_shadow_volume(const SurfaceAreaMeasure& sigma, const Direction& xi) {
  double s = 0.0;
  for (const auto& a : sigma.atoms) s += a.weight * std::abs(a.direction.dot(xi));
  return 0.5 * s;
}

Eigen::VectorXd maximize_lp(const Eigen::VectorXd& c, const Eigen::MatrixXd& a, const Eigen::VectorXd& b,
                            const Eigen::VectorXd& x0) {
  const int dim = static_cast<int>(c.size());
  const int m = static_cast<int>(a.rows());
  const double tol = 1e-12 * std::max(1.0, b.cwiseAbs().maxCoeff());
  Eigen::VectorXd x = x0;
  std::vector<int> active;
  std::vector<char> is_active(static_cast<std::size_t>(m), 0);

  auto ratio_test = [&](const Eigen::VectorXd& d, int& hit) {
    double best = INFINITY;
    hit = -1;
    for (int i = 0; i < m; ++i) {
      if (is_active[static_cast<std::size_t>(i)]) continue;
      const double ad = a.row(i).dot(d);
      if (ad <= 1e-14 * d.norm() * a.row(i).norm()) continue;
      const double t = std::max(0.0, (b[i] - a.row(i).dot(x)) / ad);
      if (t < best - tol) {
        best = t;
        hit = i;
      }
    }
    return best;
  };

  // Walk to a vertex of the feasible region without decreasing the objective.
  while (static_cast<int>(active.size()) < dim) {
    Eigen::VectorXd d;
    if (active.empty()) {
      d = c;
    } else {
      Eigen::MatrixXd aw(static_cast<Eigen::Index>(active.size()), dim);
      for (std::size_t r = 0; r < active.size(); ++r) aw.row(static_cast<Eigen::Index>(r)) = a.row(active[r]);
      Eigen::FullPivLU<Eigen::MatrixXd> lu(aw);
      const Eigen::MatrixXd null = lu.kernel();
      d = null * (null.transpose() * c);
      if (d.norm() < 1e-12 * c.norm()) d = null.col(0);
    }
    if (c.dot(d) < 0) d = -d;
    int hit = -1;
    const double t = ratio_test(d, hit);
    if (hit < 0) throw GeometryError(ErrorKind::kInvalidArgument, "linear program is unbounded");
    x += t * d;
    active.push_back(hit);
    is_active[static_cast<std::size_t>(hit)] = 1;
  }

  for (int iter = 0; iter < 50 * (m + dim); ++iter) {
    Eigen::MatrixXd basis(dim, dim);
    for (int r = 0; r < dim; ++r) basis.row(r) = a.row(active[static_cast<std::size_t>(r)]);
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(basis);
    const Eigen::VectorXd lambda = lu.transpose().solve(c);
    // Bland's rule: leave on the smallest constraint index with a negative multiplier.
    int leave = -1;
    for (int r = 0; r < dim; ++r) {
      if (lambda[r] < -1e-12 * c.norm() &&
          (leave < 0 || active[static_cast<std::size_t>(r)] < active[static_cast<std::size_t>(leave)]))
        leave = r;
    }
    if (leave < 0) return x;
    Eigen::VectorXd e = Eigen::VectorXd::Zero(dim);
    e[leave] = -1.0;
    const Eigen::VectorXd d = lu.solve(e);
    int hit = -1;
    const double t = ratio_test(d, hit);
    if (hit < 0) throw GeometryError(ErrorKind::kInvalidArgument, "linear program is unbounded");
    x += t * d;
    is_active[static_cast<std::size_t>(active[static_cast<std::size_t>(leave)])] = 0;
    active[static_cast<std::size_t>(leave)] = hit;
    is_active[static_cast<std::size_t>(hit)] = 1;
  }
  throw GeometryError(ErrorKind::kInvalidArgument, "linear program did not terminate");
}

Inball inradius(const Polytope& p) {
  const int n = p.dim();
  const int m = static_cast<int>(p.facets().size());
  Eigen::MatrixXd a(m, n + 1);
  Eigen::VectorXd b(m);
  for (int i = 0; i < m; ++i) {
    const auto& f = p.facets()[static_cast<std::size_t>(i)];
    a.row(i).head(n) = f.normal.transpose();
    a(i, n) = 1.0;
    b[i] = f.offset;
  }
  Eigen::VectorXd c = Eigen::VectorXd::Zero(n + 1);
  c[n] = 1.0;
  Eigen::VectorXd x0 = Eigen::VectorXd::Zero(n + 1);
  x0.head(n) = p.interior_point();
  const Eigen::VectorXd x = maximize_lp(c, a, b, x0);
  return {x[n], Vec(x.head(n))};
}

double circumradius(const Polytope& p) { return p.vertices().colwise().norm().maxCoeff(); }

PolytopeMoments centroid_and_covariance(const Polytope& p) {
  const int n = p.dim();
  const Vec& apex = p.interior_;
  double total = 0.0;
  Eigen::VectorXd first = Eigen::VectorXd::Zero(n);
  Eigen::MatrixXd second = Eigen::MatrixXd::Zero(n, n);
  const double nfact = factorial(n);
  Eigen::MatrixXd edges(n, n);
  for (const auto& t : p.tri_facets_) {
    Eigen::VectorXd sum = apex;
    Eigen::MatrixXd outer = apex * apex.transpose();
    for (int i = 0; i < n; ++i) {
      const auto v = p.tri_points_.col(t[static_cast<std::size_t>(i)]);
      edges.col(i) = v - apex;
      sum += v;
      outer += v * v.transpose();
    }
    const double vol = std::abs(edges.determinant()) / nfact;
    total += vol;
    first += vol * sum / (n + 1.0);
    second += vol / ((n + 1.0) * (n + 2.0)) * (outer + sum * sum.transpose());
  }
  PolytopeMoments m;
  m.centroid = first / total;
  const Eigen::MatrixXd cov = second / total - (first / total) * (first / total).transpose();
  m.covariance = 0.5 * (cov + cov.transpose());
  return m;
}

}  // namespace shadowgeom
