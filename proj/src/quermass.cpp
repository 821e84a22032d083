#include "shadowgeom/quermass.hpp"

#include <cmath>
#include <memory>
#include <numbers>

namespace shadowgeom {

double omega(int n) {
  if (n < 0) throw GeometryError(ErrorKind::kInvalidDimension, "omega needs n >= 0");
  return std::pow(std::numbers::pi, n / 2.0) / std::tgamma(n / 2.0 + 1.0);
}

double b_constant(int n) {
  if (n < 2) throw GeometryError(ErrorKind::kInvalidDimension, "b_constant needs n >= 2");
  return (n - 1) * omega(n - 1) / (n * std::pow(omega(n), (n - 1.0) / n));
}

DimConstants dim_constants(int n) {
  DimConstants c;
  c.n = n;
  for (int m = 0; m <= n; ++m) c.omega.push_back(omega(m));
  c.b = n >= 2 ? b_constant(n) : 0.0;
  return c;
}

namespace {

void require_k(int n, int k, const char* what) {
  if (k < 1 || k > n - 1)
    throw GeometryError(ErrorKind::kInvalidDimension,
                        std::string(what) + " needs 1 <= k <= n-1, got k=" + std::to_string(k));
}

}  // namespace

ShadowVolume polytope_shadow_volume(const Polytope& p) {
  const int n = p.dim();
  auto sigma = std::make_shared<SurfaceAreaMeasure>(surface_measure(p));
  return [&p, n, sigma](const SubspaceBasis& f) {
    const int k = f.dim_sub();
    if (k == n) return p.volume();
    if (k == 1) return interval_shadow(p, Direction(f.frame.row(0).transpose()));
    if (k == n - 1) {
      const Mat normal = orthocomplement(f.frame);
      return cauchy_shadow_volume(*sigma, Direction(normal.row(0).transpose()));
    }
    return shadow_measure(p, f).volume;
  };
}

Estimate mean_shadow_volume(const ShadowVolume& shadow, int n, int k, int samples, RngSeed seed) {
  if (k == n) return Estimate::exact_value(shadow(SubspaceBasis{Mat::Identity(n, n)}));
  const auto frames = sample_grassmannian(n, k, samples, seed);
  std::vector<double> values;
  values.reserve(frames.size());
  for (const auto& f : frames) values.push_back(shadow(f));
  return mc_estimate(values);
}

Estimate mean_shadow_volume(const Polytope& p, int k, int samples, RngSeed seed) {
  return mean_shadow_volume(polytope_shadow_volume(p), p.dim(), k, samples, seed);
}

Estimate power_estimate(const Estimate& e, double exponent) {
  Estimate r = e;
  r.mean = std::pow(e.mean, exponent);
  r.std_error = e.mean == 0.0 ? 0.0 : std::abs(exponent * r.mean / e.mean) * e.std_error;
  return r;
}

Estimate scale_estimate(const Estimate& e, double factor) {
  Estimate r = e;
  r.mean *= factor;
  r.std_error *= std::abs(factor);
  return r;
}

Estimate Q_k(const Polytope& p, int k, int samples, RngSeed seed) {
  require_k(p.dim(), k, "Q_k");
  const Estimate mean = mean_shadow_volume(p, k, samples, seed);
  return power_estimate(scale_estimate(mean, 1.0 / omega(k)), 1.0 / k);
}

Estimate quermassintegral(const Polytope& p, int pindex, int samples, RngSeed seed) {
  const int n = p.dim();
  require_k(n, pindex, "quermassintegral");
  const int k = n - pindex;
  const Estimate mean = mean_shadow_volume(p, k, samples, seed);
  return scale_estimate(mean, omega(n) / omega(k));
}

Estimate mean_width(const Polytope& p, int samples, RngSeed seed) {
  std::vector<double> values;
  values.reserve(static_cast<std::size_t>(samples));
  for (const auto& u : sample_sphere(p.dim(), samples, seed)) values.push_back(support(p, u));
  return mc_estimate(values);
}

Estimate M_value(const Polytope& p, int samples, RngSeed seed) {
  if (!p.origin_interior())
    throw GeometryError(ErrorKind::kOriginNotInterior, "M_value requires the origin in the interior");
  std::vector<double> values;
  values.reserve(static_cast<std::size_t>(samples));
  for (const auto& u : sample_sphere(p.dim(), samples, seed)) values.push_back(gauge(p, u));
  return mc_estimate(values);
}

double vrad(const Polytope& p) { return std::pow(p.volume() / omega(p.dim()), 1.0 / p.dim()); }

Estimate polar_vrad(const std::function<double(const Direction&)>& support_fn, int n, int samples, RngSeed seed) {
  std::vector<double> values;
  values.reserve(static_cast<std::size_t>(samples));
  for (const auto& u : sample_sphere(n, samples, seed)) {
    const double h = support_fn(u);
    if (!(h > 0.0))
      throw GeometryError(ErrorKind::kOriginNotInterior, "polar_vrad requires the origin in the interior");
    values.push_back(std::pow(h, -n));
  }
  return power_estimate(mc_estimate(values), 1.0 / n);
}

Estimate polar_vrad(const Polytope& p, int samples, RngSeed seed) {
  if (!p.origin_interior())
    throw GeometryError(ErrorKind::kOriginNotInterior, "polar_vrad requires the origin in the interior");
  return polar_vrad([&p](const Direction& u) { return support(p, u); }, p.dim(), samples, seed);
}

double mixed_volume_vn1(const SurfaceAreaMeasure& sigma, const std::function<double(const Vec&)>& support_c) {
  double s = 0.0;
  for (const auto& a : sigma.atoms) s += a.weight * support_c(a.direction);
  return s / sigma.dim;
}

double mixed_volume_vn1(const Polytope& p, const Polytope& c) {
  return mixed_volume_vn1(surface_measure(p), [&c](const Vec& u) { return support(c, u); });
}

double mixed_volume_vn1(const Polytope& p, const Zonotope& c) {
  return mixed_volume_vn1(surface_measure(p), [&c](const Vec& u) { return zonotope_support(c, u); });
}

Estimate p_k(const Polytope& p, int k, int samples, RngSeed seed) {
  require_k(p.dim(), k, "p_k");
  const Estimate mean = mean_shadow_volume(p, k, samples, seed);
  return scale_estimate(mean, std::pow(p.volume(), -static_cast<double>(k) / p.dim()));
}

}  // namespace shadowgeom
