#include "shadowgeom/zonotope.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace shadowgeom {

namespace {

int matrix_rank(const Points& g) {
  if (g.cols() == 0) return 0;
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(g);
  qr.setThreshold(1e-10);
  return static_cast<int>(qr.rank());
}

Mat columns(const Points& g, const std::vector<int>& idx, int extra = 0) {
  Mat m(g.rows(), static_cast<Eigen::Index>(idx.size()) + extra);
  for (std::size_t j = 0; j < idx.size(); ++j) m.col(static_cast<Eigen::Index>(j)) = g.col(idx[j]);
  return m;
}

}  // namespace

double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return std::round(r);
}

Vec generalized_cross(const Mat& vs) {
  const int n = static_cast<int>(vs.rows());
  Mat m(n, n);
  m.leftCols(n - 1) = vs;
  Vec w(n);
  for (int i = 0; i < n; ++i) {
    m.col(n - 1).setZero();
    m(i, n - 1) = 1.0;
    w[i] = m.determinant();
  }
  return w;
}

Zonotope::Zonotope(Vec center, Points generators) : center_(std::move(center)), generators_(std::move(generators)) {
  if (generators_.rows() != center_.size())
    throw GeometryError(ErrorKind::kInvalidDimension, "zonotope center and generators differ in dimension");
  if (center_.size() < 1 || center_.size() > kMaxDim)
    throw GeometryError(ErrorKind::kInvalidDimension, "zonotope dimension must be in [1, 8]");
  if (matrix_rank(generators_) < center_.size())
    throw GeometryError(ErrorKind::kDegenerateZonotope, "generators do not span R^" + std::to_string(center_.size()));
}

Points merge_parallel_generators(const Points& generators) {
  const int n = static_cast<int>(generators.rows());
  struct Item {
    Vec unit;
    double length;
    int index;
  };
  std::vector<Item> items;
  for (Eigen::Index j = 0; j < generators.cols(); ++j) {
    const double len = generators.col(j).norm();
    if (len == 0.0) continue;
    Vec u = generators.col(j) / len;
    for (int i = 0; i < n; ++i) {
      if (std::abs(u[i]) > 1e-3) {
        if (u[i] < 0) u = -u;
        break;
      }
    }
    items.push_back({u, len, static_cast<int>(j)});
  }
  std::sort(items.begin(), items.end(), [](const Item& a, const Item& b) {
    return a.unit[0] < b.unit[0] || (a.unit[0] == b.unit[0] && a.index < b.index);
  });
  std::vector<char> used(items.size(), 0);
  std::vector<std::pair<int, Vec>> merged;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (used[i]) continue;
    double len = items[i].length;
    int first = items[i].index;
    for (std::size_t j = i + 1; j < items.size() && items[j].unit[0] - items[i].unit[0] <= 2e-5; ++j) {
      if (used[j]) continue;
      const double c = items[i].unit.dot(items[j].unit);
      if (std::abs(c) > 1.0 - 1e-10) {
        len += items[j].length;
        first = std::min(first, items[j].index);
        used[j] = 1;
      }
    }
    merged.emplace_back(first, len * items[i].unit);
  }
  std::sort(merged.begin(), merged.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  Points out(n, static_cast<Eigen::Index>(merged.size()));
  for (std::size_t j = 0; j < merged.size(); ++j) out.col(static_cast<Eigen::Index>(j)) = merged[j].second;
  return out;
}

double zonotope_support(const Zonotope& z, const Vec& x) {
  if (x.size() != z.dim()) throw GeometryError(ErrorKind::kInvalidDimension, "zonotope_support: dimension mismatch");
  return z.center().dot(x) + (x.transpose() * z.generators()).cwiseAbs().sum();
}

double zonotope_volume(const Zonotope& z) {
  const Points g = merge_parallel_generators(z.generators());
  const int n = z.dim();
  const int m = static_cast<int>(g.cols());
  if (binomial(m, n) > kMaxExactSubsets)
    throw GeometryError(ErrorKind::kTooManyGenerators,
                        std::to_string(m) + " generators give too many subsets for the exact volume");
  double s = 0.0;
  for_each_subset(m, n, [&](const std::vector<int>& idx) { s += std::abs(columns(g, idx).determinant()); });
  return std::ldexp(s, n);
}

Estimate zonotope_volume_estimate(const Zonotope& z, int samples, RngSeed seed) {
  const Points g = merge_parallel_generators(z.generators());
  const int n = z.dim();
  const int m = static_cast<int>(g.cols());
  const double subsets = binomial(m, n);
  if (subsets <= kMaxExactSubsets) return Estimate::exact_value(zonotope_volume(z));
  auto engine = make_engine(seed);
  std::uniform_int_distribution<int> pick(0, m - 1);
  std::vector<double> values;
  values.reserve(static_cast<std::size_t>(samples));
  std::vector<int> idx;
  for (int s = 0; s < samples; ++s) {
    idx.clear();
    while (static_cast<int>(idx.size()) < n) {
      const int c = pick(engine);
      if (std::find(idx.begin(), idx.end(), c) == idx.end()) idx.push_back(c);
    }
    values.push_back(std::ldexp(subsets * std::abs(columns(g, idx).determinant()), n));
  }
  return mc_estimate(values);
}

double zonotope_surface_area(const Zonotope& z) {
  const Points g = merge_parallel_generators(z.generators());
  const int n = z.dim();
  const int m = static_cast<int>(g.cols());
  if (binomial(m, n - 1) > kMaxExactSubsets)
    throw GeometryError(ErrorKind::kTooManyGenerators,
                        std::to_string(m) + " generators give too many subsets for the exact surface area");
  double s = 0.0;
  for_each_subset(m, n - 1, [&](const std::vector<int>& idx) {
    const Mat c = columns(g, idx);
    s += std::sqrt(std::max(0.0, (c.transpose() * c).determinant()));
  });
  return std::ldexp(s, n);
}

Points shadow_generators(const Zonotope& z) {
  const Points g = merge_parallel_generators(z.generators());
  const int n = z.dim();
  const int m = static_cast<int>(g.cols());
  const double count = binomial(m, n - 1);
  if (count > kMaxExactSubsets)
    throw GeometryError(ErrorKind::kTooManyGenerators,
                        std::to_string(m) + " generators give too many subsets for exact shadows");
  Points w(n, static_cast<Eigen::Index>(count));
  Eigen::Index col = 0;
  for_each_subset(m, n - 1, [&](const std::vector<int>& idx) { w.col(col++) = generalized_cross(columns(g, idx)); });
  return w;
}

double zonotope_shadow_volume(const Zonotope& z, const Direction& xi) {
  const Points w = shadow_generators(z);
  return std::ldexp((xi.transpose() * w).cwiseAbs().sum() / xi.norm(), z.dim() - 1);
}

Zonotope projection_body(const SurfaceAreaMeasure& sigma) {
  Points g(sigma.dim, static_cast<Eigen::Index>(sigma.atoms.size()));
  for (std::size_t i = 0; i < sigma.atoms.size(); ++i)
    g.col(static_cast<Eigen::Index>(i)) = 0.5 * sigma.atoms[i].weight * sigma.atoms[i].direction;
  return Zonotope(Vec::Zero(sigma.dim), merge_parallel_generators(g));
}

Zonotope projection_body(const Polytope& p) { return projection_body(surface_measure(p)); }

Zonotope zonotope_project(const Zonotope& z, const SubspaceBasis& f) {
  if (f.dim_ambient() != z.dim())
    throw GeometryError(ErrorKind::kInvalidDimension, "zonotope_project: frame and zonotope dimensions differ");
  if (f.dim_sub() < 1 || f.dim_sub() > z.dim() - 1)
    throw GeometryError(ErrorKind::kInvalidDimension, "zonotope_project needs 1 <= k <= n-1");
  return Zonotope(f.frame * z.center(), Points(f.frame * z.generators()));
}

Polytope zonotope_to_polytope(const Zonotope& z) {
  const int n = z.dim();
  if (n < 2) throw GeometryError(ErrorKind::kInvalidDimension, "zonotope_to_polytope needs n >= 2");
  const Points g = merge_parallel_generators(z.generators());
  const int m = static_cast<int>(g.cols());
  if (m > kMaxConvertGenerators)
    throw GeometryError(ErrorKind::kTooManyGenerators,
                        std::to_string(m) + " generators exceed the conversion bound of 12");
  const double glen = g.colwise().norm().maxCoeff();

  std::vector<Vec> normals;
  for_each_subset(m, n - 1, [&](const std::vector<int>& idx) {
    const Vec w = generalized_cross(columns(g, idx));
    const double wn = w.norm();
    if (wn <= 1e-12 * std::pow(glen, n - 1)) return;
    const Vec u = w / wn;
    for (const Vec& v : normals)
      if (std::abs(std::abs(v.dot(u)) - 1.0) < 1e-12) return;
    normals.push_back(u);
  });

  std::vector<Vec> pts;
  for (const Vec& u0 : normals) {
    for (double sign : {1.0, -1.0}) {
      const Vec u = sign * u0;
      Vec base = z.center();
      std::vector<int> in_plane;
      for (int j = 0; j < m; ++j) {
        const double d = g.col(j).dot(u);
        if (std::abs(d) <= 1e-10 * g.col(j).norm())
          in_plane.push_back(j);
        else
          base += (d > 0 ? 1.0 : -1.0) * g.col(j);
      }
      const int k = static_cast<int>(in_plane.size());
      for (std::uint32_t mask = 0; mask < (1u << k); ++mask) {
        Vec p = base;
        for (int b = 0; b < k; ++b) p += ((mask >> b) & 1u ? 1.0 : -1.0) * g.col(in_plane[static_cast<std::size_t>(b)]);
        pts.push_back(p);
      }
    }
  }
  Polytope poly = convex_hull(pts, n);

  auto engine = make_engine({0x5eed, fnv1a("zonotope_to_polytope")});
  const double tol = 1e-9 * std::max(1.0, poly.scale());
  for (int i = 0; i < 16; ++i) {
    const Direction x = random_direction(n, engine);
    if (std::abs(support(poly, x) - zonotope_support(z, x)) > tol)
      throw GeometryError(ErrorKind::kDegenerateZonotope, "converted polytope disagrees with the zonotope support");
  }
  return poly;
}

SphereMinimum zonoid_min_projection(const Zonotope& z, RngSeed seed, int restarts) {
  const int n = z.dim();
  if (n < 2) throw GeometryError(ErrorKind::kInvalidDimension, "zonoid_min_projection needs n >= 2");
  const Points w = shadow_generators(z);
  const double scale = std::ldexp(1.0, n - 1);
  MinimizeOptions options;
  const Points g = merge_parallel_generators(z.generators());
  for (Eigen::Index j = 0; j < g.cols(); ++j) options.extra_starts.push_back(g.col(j).normalized());
  for (Eigen::Index j = 0; j < w.cols() && j < 64; ++j)
    if (w.col(j).norm() > 0) options.extra_starts.push_back(w.col(j).normalized());
  return minimize_on_sphere([&](const Direction& xi) { return scale * (xi.transpose() * w).cwiseAbs().sum(); }, n,
                            restarts > 0 ? restarts : default_restarts(n), seed, options);
}

}  // namespace shadowgeom
