#include "shadowgeom/harness.hpp"

#include "harness_internal.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <functional>
#include <mutex>
#include <optional>
#include <thread>

namespace shadowgeom {

const char* to_string(CheckStatus status) {
  switch (status) {
    case CheckStatus::kPass: return "pass";
    case CheckStatus::kFail: return "fail";
    case CheckStatus::kInconclusive: return "inconclusive";
    case CheckStatus::kSkipped: return "skipped";
    case CheckStatus::kError: return "error";
  }
  return "unknown";
}

const char* to_string(BodyClass body_class) {
  switch (body_class) {
    case BodyClass::kAny: return "any";
    case BodyClass::kZonoid: return "zonoid";
    case BodyClass::kPositioned: return "position-tagged";
    case BodyClass::kBallApprox: return "ball-approx";
  }
  return "unknown";
}

const char* to_string(BoundKind bound) {
  switch (bound) {
    case BoundKind::kUpper: return "upper";
    case BoundKind::kLower: return "lower";
    case BoundKind::kEquality: return "equality";
  }
  return "unknown";
}

int SuiteOptions::grass_samples() const { return std::max(1, samples / 2); }
int SuiteOptions::hull_samples() const { return std::max(1, samples / 10); }
int SuiteOptions::outer_samples() const { return std::max(1, samples / 10); }
int SuiteOptions::search_screen() const { return std::max(16, samples / 10); }

namespace {

constexpr int kCheckedDirections = 100;
constexpr int kCheckedSubspaces = 50;
constexpr double kBallEqLow = 0.93;
constexpr double kBallEqHigh = 1.0;

const std::vector<CheckSpec>& build_catalog() {
  static const std::vector<CheckSpec> catalog{
      {"GHP", "hyperplane shadow surface-to-volume ratio", BodyClass::kAny,
       "S(P K)/|P K| <= (2(n-1)/n) S(K)/|K| for hyperplane shadows P K at random directions"},
      {"T-HYPER-1", "minimal hyperplane shadow surface, general bodies", BodyClass::kAny,
       "|K|^(1/n) min S(P K) <= (2 b_n d_K/(n omega_n^(1/n))) S(K)"},
      {"T-LOWER-MIN", "minimal hyperplane shadow surface, lower bound", BodyClass::kPositioned,
       "in minimal surface position: |K|^(1/n) min S(P K) >= ((n-1) omega_n^(1/(n-1))/(4 n^((n-2)/(n-1)) d_K^(1/(n-1)))) S(K)"},
      {"T-HYPER-2", "minimal hyperplane shadow surface, zonoids", BodyClass::kZonoid,
       "|Z|^(1/n) min S(P Z) <= 2 b_n S(Z)"},
      {"T-HYPER-3", "average hyperplane shadow surface, upper bound", BodyClass::kAny,
       "|K| mean S(P K) <= (2(n-1) omega_(n-1)/(n^2 omega_n)) S(K)^2"},
      {"T-HYPER-4", "average hyperplane shadow surface in classical positions", BodyClass::kPositioned,
       "|K|^(1/n) mean S(P K) <= c2 sqrt(n) S(K) with c2 measured"},
      {"T-HYPER-5", "average hyperplane shadow surface, lower bound", BodyClass::kAny,
       "mean S(P K) >= ((n-1) omega_(n-1)/(n omega_n)^((n-2)/(n-1))) S(K)^((n-2)/(n-1))"},
      {"T-HYPER-6", "average hyperplane shadow surface in positions, lower bound", BodyClass::kPositioned,
       "|K|^(1/n) mean S(P K) >= c5 S(K) with c5 measured from S(K)^(1/(n-1)) <= c |K|^(1/n)"},
      {"L-ZON-1", "minimal hyperplane shadow of a zonoid", BodyClass::kZonoid,
       "min |P Z| <= (n b_n/(n-1)) |Z|^((n-1)/n)"},
      {"T-ZON-2", "minimal k-dimensional shadow of a zonoid", BodyClass::kZonoid,
       "min_F |P_F Z| <= (n b_n^(n-k)/k) |Z|^(k/n) for 2 <= k <= n-1"},
      {"ZON-VOL", "volume of the projection body and its polar", BodyClass::kAny,
       "(d_K/n)^n <= |Pi K| <= omega_n (omega_(n-1) d_K/(n omega_n))^n and the polar bounds, for |K| = 1"},
      {"MINPROJ", "minimal hyperplane shadow equals the inradius of the projection body", BodyClass::kAny,
       "min |P K| = r(Pi K); reports c = min |P K|/(sqrt(n) |K|^((n-1)/n))"},
      {"ALEK", "monotonicity of normalised averaged shadows", BodyClass::kAny,
       "w = Q_1 >= Q_2 >= ... >= Q_(n-1) >= vrad"},
      {"S-INRADIUS", "surface area and inradius", BodyClass::kAny, "S(K) <= n |K|/r(K)"},
      {"T-QUER-1", "minimal shadow quermassintegral", BodyClass::kAny,
       "|K|^(1/n) min V_(n-1-p)(P K) <= ((p+1) omega_(n-1) d_K/(n omega_n)) V_(n-p)(K); zonoids with (p+1) b_n"},
      {"T-QUER-2", "average shadow quermassintegral, upper bound", BodyClass::kAny,
       "|K|^(1/n) mean V_(n-1-p)(P K) <= ((p+1) omega_(n-1)/(n omega_n)) (S(K)/|K|^((n-1)/n)) V_(n-p)(K)"},
      {"T-QUER-3", "average shadow quermassintegral, lower bound", BodyClass::kAny,
       "mean V_(n-1-p)(P K) >= (omega_(n-1)/omega_n^((n-1-p)/(n-p))) V_(n-p)(K)^((n-1-p)/(n-p))"},
      {"T-QUER-4", "average shadow quermassintegral in positions", BodyClass::kPositioned,
       "|K|^(1/n) mean V_(n-1-p)(P K) >= (omega_(n-1) c0^(p/(n-p))/omega_n^((n-1-p)/(n-p))) V_(n-p)(K), c0 = r(K)/|K|^(1/n)"},
      {"FGM", "quermassintegral ratios under projection", BodyClass::kAny,
       "V_(n-p)(K)/|K| >= V_(k-p)(P_F K)/(C(n-k+p, n-k) |P_F K|) at random F, 0 <= p <= k"},
      {"L-HIGHER-1", "surface-to-volume ratio under projection", BodyClass::kAny,
       "S(K)/|K| >= (n/(k(n-k+1))) S(P_F K)/|P_F K| at random F"},
      {"T-HIGHER-2", "minimal k-dimensional shadow surface of a zonoid", BodyClass::kZonoid,
       "|Z|^((n-k)/n) min_F S(P_F Z) <= (n-k+1) b_n^(n-k) S(Z)"},
      {"T-HIGHER-5", "average k-dimensional shadow surface, upper bound", BodyClass::kAny,
       "|K|^((n-k)/n) mean S(P_F K) <= (k(n-k+1)/n) S(K) p_k(K)"},
      {"T-HIGHER-6", "average k-dimensional shadow surface, lower bound", BodyClass::kAny,
       "mean S(P_F K) >= (k omega_k/(n omega_n)^((k-1)/(n-1))) S(K)^((k-1)/(n-1))"},
      {"T-HIGHER-7", "average k-dimensional shadow surface in positions", BodyClass::kPositioned,
       "|K|^((n-k)/n) mean S(P_F K) >= (k omega_k/((n omega_n)^((k-1)/(n-1)) (c0 n)^((n-k)/(n-1)))) S(K), c0 = S(K)/(n |K|^((n-1)/n))"},
      {"ZON-VOL-ID", "zonoid volume formula", BodyClass::kAny,
       "|Z| = (1/n) sum a_i |P_(u_i) Z| for Z = Pi K"},
      {"CK-IDENT", "Cauchy-Kubota and codimension-two averaging identities", BodyClass::kAny,
       "S(K) = (n omega_n/omega_(n-1)) mean |P K| and mean S(P K) = ((n-1) omega_(n-1)/omega_(n-2)) mean_(G(n,n-2)) |P_F K|"},
      {"BALL-EQ", "equality case at the ball", BodyClass::kBallApprox,
       "ratio of the zonoid minimal shadow surface bound lies in [0.93, 1] on ball approximants"},
  };
  return catalog;
}

/// Computes a value once; concurrent callers wait for the first one.
template <class T>
class Lazy {
 public:
  template <class F>
  const T& get(F&& make) {
    std::call_once(flag_, [&] { value_.emplace(make()); });
    return *value_;
  }

 private:
  std::once_flag flag_;
  std::optional<T> value_;
};

enum PositionKind { kMinSurface = 0, kIsotropic, kJohn, kLowner, kMinMeanWidth, kPositionCount };
constexpr std::array<const char*, kPositionCount> kPositionNames{"min-surface", "isotropic", "john", "lowner",
                                                                 "min-mean-width"};
/// Residual certificate each position must meet before a check may use it.
constexpr std::array<double, kPositionCount> kPositionThreshold{1e-6, 1e-8, 1e-5, 1e-5, 0.1};

struct PairedMeans {
  Estimate surface;
  Estimate volume;
  std::vector<double> surfaces;
  std::vector<double> volumes;
};

struct Positioned {
  PositionKind kind = kMinSurface;
  PositionResult position;
  std::unique_ptr<BodyContext> context;
};

class PositionNotCertified : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace

namespace detail {

ScreenedMin screened_sphere_min(const SphereObjective& f, int n, RngSeed seed, int screen,
                                const std::vector<Direction>& candidates) {
  std::vector<Direction> pool = sample_sphere(n, screen, seed.derive("screen"));
  pool.insert(pool.end(), candidates.begin(), candidates.end());
  std::vector<std::pair<double, std::size_t>> scored;
  scored.reserve(pool.size());
  for (std::size_t i = 0; i < pool.size(); ++i) scored.emplace_back(f(pool[i]), i);
  std::sort(scored.begin(), scored.end());
  MinimizeOptions opt;
  opt.step_tol = 1e-10;
  opt.max_iter = 600;
  const std::size_t starts = std::min<std::size_t>(3, scored.size());
  for (std::size_t i = 0; i < starts; ++i) opt.extra_starts.push_back(pool[scored[i].second]);
  const SphereMinimum m = minimize_on_sphere(f, n, 1, seed.derive("descent"), opt);
  ScreenedMin out{pool[scored.front().second], scored.front().first};
  if (m.value < out.value) out = {m.direction, m.value};
  return out;
}

double screened_grassmann_min(const GrassmannObjective& f, int n, int k, RngSeed seed, int screen) {
  const auto pool = sample_grassmannian(n, k, screen, seed.derive("screen"));
  std::vector<std::pair<double, std::size_t>> scored;
  for (std::size_t i = 0; i < pool.size(); ++i) scored.emplace_back(f(pool[i]), i);
  std::sort(scored.begin(), scored.end());
  MinimizeOptions opt;
  opt.step_tol = 1e-9;
  opt.max_iter = 400;
  for (std::size_t i = 0; i < std::min<std::size_t>(2, scored.size()); ++i)
    opt.extra_frames.push_back(pool[scored[i].second]);
  const GrassmannMinimum m = minimize_on_grassmannian(f, n, k, 1, seed.derive("descent"), opt);
  return std::min(m.value, scored.front().first);
}

}  // namespace detail

using detail::ScreenedMin;

struct BodyContext::Impl {
  Body body;
  int n = 0;
  std::uint64_t seed = 0;
  SuiteOptions options;
  RngSeed root;
  SurfaceAreaMeasure sigma;
  double S = 0.0;
  double V = 0.0;

  Lazy<double> mean_surface_cache;
  Lazy<ScreenedMin> min_surface_shadow_cache;
  Lazy<ScreenedMin> min_volume_shadow_cache;
  Lazy<MinSurfaceResult> min_surface_cache;
  Lazy<Inball> inball_cache;
  Lazy<Zonotope> projection_cache;
  Lazy<Estimate> projection_volume_cache;
  std::array<Lazy<Estimate>, kMaxDim + 1> shadow_mean_cache;
  std::array<Lazy<PairedMeans>, kMaxDim + 1> paired_cache;
  std::array<Lazy<std::shared_ptr<Positioned>>, kPositionCount> position_cache;

  RngSeed seed_for(std::string_view quantity) const { return root.derive(quantity); }

  double mean_shadow_surface() {
    return mean_surface_cache.get([&] { return shadowgeom::mean_shadow_surface(body.polytope); });
  }

  const ScreenedMin& min_shadow_surface() {
    return min_surface_shadow_cache.get([&] {
      std::vector<Direction> cand;
      for (int i = 0; i < n; ++i) cand.push_back(Direction(Vec::Unit(n, i)));
      std::vector<std::size_t> order(body.polytope.facets().size());
      for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
      const auto& facets = body.polytope.facets();
      std::stable_sort(order.begin(), order.end(),
                       [&](std::size_t a, std::size_t b) { return facets[a].measure > facets[b].measure; });
      for (std::size_t i = 0; i < std::min<std::size_t>(32, order.size()); ++i)
        cand.push_back(facets[order[i]].normal);
      const Polytope& p = body.polytope;
      return detail::screened_sphere_min([&p](const Direction& xi) { return shadow_surface(p, xi); }, n,
                                 seed_for("min-shadow-surface"), options.search_screen(), cand);
    });
  }

  const ScreenedMin& min_shadow_volume() {
    return min_volume_shadow_cache.get([&] {
      const SurfaceAreaMeasure& s = sigma;
      const ScreenedMin m = detail::screened_sphere_min(
          [&s](const Direction& xi) { return cauchy_shadow_volume(s, xi); }, n, seed_for("min-shadow-volume"),
          options.search_screen(), {});
      return polish_piecewise_linear(m);
    });
  }

  /// Moves the direction onto the best normal of n-1 facet normals chosen
  /// among the 2n closest to orthogonal, where the piecewise-linear shadow
  /// volume has its vertices.
  ScreenedMin polish_piecewise_linear(ScreenedMin best) const {
    const int m = static_cast<int>(sigma.atoms.size());
    for (int round = 0; round < 4 * n; ++round) {
      std::vector<std::pair<double, int>> order;
      for (int i = 0; i < m; ++i)
        order.emplace_back(std::abs(sigma.atoms[static_cast<std::size_t>(i)].direction.dot(best.direction)), i);
      std::sort(order.begin(), order.end());
      const int near = std::min(m, 2 * n);
      ScreenedMin step = best;
      for_each_subset(near, n - 1, [&](const std::vector<int>& idx) {
        Mat cols(n, n - 1);
        for (int j = 0; j < n - 1; ++j)
          cols.col(j) = sigma.atoms[static_cast<std::size_t>(order[static_cast<std::size_t>(idx[static_cast<std::size_t>(j)])].second)].direction;
        Direction cand = generalized_cross(cols);
        const double len = cand.norm();
        if (len < 1e-9) return;
        cand /= len;
        if (cand.dot(best.direction) < 0) cand = -cand;
        const double v = cauchy_shadow_volume(sigma, cand);
        if (v < step.value) step = {cand, v};
      });
      if (!(step.value < best.value)) break;
      best = step;
    }
    return best;
  }

  const MinSurfaceResult& min_surface() {
    return min_surface_cache.get([&] { return minimal_surface_position(body.polytope, 1e-9, 500); });
  }

  double partial() {
    const MinSurfaceResult& m = min_surface();
    if (!(m.position.residual <= kPositionThreshold[kMinSurface]))
      throw PositionNotCertified("minimal surface position residual " + std::to_string(m.position.residual) +
                                 " exceeds " + std::to_string(kPositionThreshold[kMinSurface]));
    return m.partial;
  }

  const Inball& inball() {
    return inball_cache.get([&] { return inradius(body.polytope); });
  }

  const Zonotope& projection() {
    return projection_cache.get([&] { return projection_body(sigma); });
  }

  /// |Pi K|, exact when the determinant expansion is within budget.
  const Estimate& projection_volume() {
    return projection_volume_cache.get([&] {
      return zonotope_volume_estimate(projection(), 50 * options.samples, seed_for("projection-volume"));
    });
  }

  /// Haar mean of |P_F K| over G_{n,k}.
  Estimate shadow_mean(int k) {
    return shadow_mean_cache[static_cast<std::size_t>(k)].get([&]() -> Estimate {
      if (k == n) return Estimate::exact_value(V);
      if (k == n - 1) return Estimate::exact_value(S * omega(n - 1) / (n * omega(n)));
      const int count = k == 1 ? options.samples : options.hull_samples();
      return mean_shadow_volume(body.polytope, k, count, seed_for("shadow-mean-" + std::to_string(k)));
    });
  }

  /// V_{n-p}(K).
  Estimate quermass(int p) {
    if (p == 0) return Estimate::exact_value(V);
    if (p == n) return Estimate::exact_value(omega(n));
    return scale_estimate(shadow_mean(n - p), omega(n) / omega(n - p));
  }

  Estimate Q(int k) { return power_estimate(scale_estimate(shadow_mean(k), 1.0 / omega(k)), 1.0 / k); }

  /// Sphere mean of V_{n-1-p}(P_{xi^perp} K) for 1 <= p <= n-2.
  Estimate shadow_quermass_mean(int p) {
    if (p == 1) return Estimate::exact_value(mean_shadow_surface() / (n - 1));
    return scale_estimate(shadow_mean(n - 1 - p), omega(n - 1) / omega(n - 1 - p));
  }

  /// Paired Haar means of S(P_F K) and |P_F K| for 2 <= k <= n-1.
  const PairedMeans& paired(int k) {
    return paired_cache[static_cast<std::size_t>(k)].get([&] {
      PairedMeans out;
      if (k == n - 1) {
        out.surface = Estimate::exact_value(mean_shadow_surface());
        out.volume = shadow_mean(n - 1);
        return out;
      }
      const auto frames = sample_grassmannian(n, k, options.hull_samples(), seed_for("paired-" + std::to_string(k)));
      for (const auto& f : frames) {
        const ShadowMeasure m = shadow_measure(body.polytope, f);
        out.surfaces.push_back(m.surface);
        out.volumes.push_back(m.volume);
      }
      out.surface = mc_estimate(out.surfaces);
      out.volume = mc_estimate(out.volumes);
      return out;
    });
  }

  Positioned& positioned(PositionKind kind) {
    auto& ptr = position_cache[static_cast<std::size_t>(kind)].get([&] {
      auto out = std::make_shared<Positioned>();
      out->kind = kind;
      switch (kind) {
        case kMinSurface: out->position = min_surface().position; break;
        case kIsotropic: out->position = isotropic_position(body.polytope).position; break;
        case kJohn: out->position = john_position(body.polytope, 1e-7).position; break;
        case kLowner: out->position = lowner_position(body.polytope, 1e-7, 100000).position; break;
        case kMinMeanWidth:
          out->position = min_mean_width_position(body.polytope, options.hull_samples(), 200,
                                                  seed_for("min-mean-width"));
          break;
        default: break;
      }
      if (out->position.residual <= kPositionThreshold[kind]) {
        Body b;
        b.name = body.name + "@" + kPositionNames[kind];
        b.polytope = out->position.apply(body.polytope);
        b.symmetric = body.symmetric;
        out->context = std::make_unique<BodyContext>(std::move(b), seed, options);
      }
      return out;
    });
    if (!ptr->context)
      throw PositionNotCertified(std::string(kPositionNames[kind]) + " position residual " +
                                 std::to_string(ptr->position.residual) + " exceeds " +
                                 std::to_string(kPositionThreshold[kind]));
    return *ptr;
  }
};

BodyContext::BodyContext(Body body, std::uint64_t seed, const SuiteOptions& options)
    : impl_(std::make_unique<Impl>()) {
  Impl& c = *impl_;
  c.n = body.dim();
  c.seed = seed;
  c.options = options;
  c.root = RngSeed{seed, 0}.derive("body").derive(body.name).derive(static_cast<std::uint64_t>(c.n));
  c.sigma = surface_measure(body.polytope);
  c.S = body.polytope.surface_area();
  c.V = body.polytope.volume();
  c.body = std::move(body);
}

BodyContext::~BodyContext() = default;
const Body& BodyContext::body() const { return impl_->body; }
int BodyContext::dim() const { return impl_->n; }
const SuiteOptions& BodyContext::options() const { return impl_->options; }
RngSeed BodyContext::seed(std::string_view quantity) const { return impl_->seed_for(quantity); }
BodyContext::Impl& BodyContext::impl() const { return *impl_; }

const std::vector<CheckSpec>& check_catalog() { return build_catalog(); }

const CheckSpec* find_check(std::string_view id) {
  for (const auto& c : check_catalog())
    if (c.id == id) return &c;
  return nullptr;
}

std::vector<std::string> all_check_ids() {
  std::vector<std::string> ids;
  for (const auto& c : check_catalog()) ids.push_back(c.id);
  return ids;
}

CheckStatus decide(BoundKind bound, const Estimate& lhs, const Estimate& rhs, double tol, double equality_tol) {
  if (!std::isfinite(lhs.mean) || !std::isfinite(rhs.mean)) return CheckStatus::kError;
  if (bound == BoundKind::kEquality) {
    const double diff = std::abs(lhs.mean - rhs.mean);
    const double sigma = std::hypot(lhs.std_error, rhs.std_error);
    return diff <= std::max(equality_tol * std::abs(rhs.mean), 4.0 * sigma) ? CheckStatus::kPass : CheckStatus::kFail;
  }
  const double factor = bound == BoundKind::kUpper ? 1.0 + tol : 1.0 - tol;
  const double edge = rhs.mean * factor;
  const double margin = bound == BoundKind::kUpper ? edge - lhs.mean : lhs.mean - edge;
  const double sigma = std::hypot(lhs.std_error, factor * rhs.std_error);
  if (margin >= 3.0 * sigma) return CheckStatus::kPass;
  if (margin < -3.0 * sigma) return CheckStatus::kFail;
  return CheckStatus::kInconclusive;
}

namespace {

int severity(CheckStatus s) {
  switch (s) {
    case CheckStatus::kError: return 4;
    case CheckStatus::kFail: return 3;
    case CheckStatus::kInconclusive: return 2;
    case CheckStatus::kPass: return 1;
    case CheckStatus::kSkipped: return 0;
  }
  return 0;
}

double tightness(const CaseResult& c) {
  switch (c.bound) {
    case BoundKind::kUpper: return c.rhs.mean != 0.0 ? c.lhs.mean / c.rhs.mean : INFINITY;
    case BoundKind::kLower: return c.lhs.mean != 0.0 ? c.rhs.mean / c.lhs.mean : INFINITY;
    case BoundKind::kEquality:
      return 1.0 + (c.rhs.mean != 0.0 ? std::abs(c.lhs.mean - c.rhs.mean) / std::abs(c.rhs.mean) : 0.0);
  }
  return 0.0;
}

/// True if `a` is the more critical of two cases.
bool worse(const CaseResult& a, const CaseResult& b) {
  if (severity(a.status) != severity(b.status)) return severity(a.status) > severity(b.status);
  return tightness(a) > tightness(b);
}

struct Run {
  BodyContext::Impl& c;
  const CheckSpec& spec;
  RngSeed seed;
  CheckResult& out;

  double tol() const { return c.options.tol; }

  CaseResult make(std::string label, BoundKind bound, const Estimate& lhs, const Estimate& rhs,
                  double equality_tol = 0.0) const {
    CaseResult r;
    r.label = std::move(label);
    r.bound = bound;
    r.lhs = lhs;
    r.rhs = rhs;
    r.ratio = rhs.mean != 0.0 ? lhs.mean / rhs.mean : NAN;
    r.status = decide(bound, lhs, rhs, tol(), equality_tol);
    return r;
  }

  void add(std::string label, BoundKind bound, const Estimate& lhs, const Estimate& rhs, double equality_tol = 0.0) {
    out.cases.push_back(make(std::move(label), bound, lhs, rhs, equality_tol));
  }

  void add(CaseResult r) { out.cases.push_back(std::move(r)); }

  void value(const std::string& key, double v) { out.values[key] = v; }
  void note(const std::string& key, const std::string& v) { out.notes[key] = v; }

  std::vector<int> k_range(int lo, int hi) const {
    std::vector<int> ks;
    for (int k = lo; k <= hi; ++k)
      if (c.options.k < 0 || c.options.k == k) ks.push_back(k);
    return ks;
  }
  std::vector<int> p_range(int lo, int hi) const {
    std::vector<int> ps;
    for (int p = lo; p <= hi; ++p)
      if (c.options.p < 0 || c.options.p == p) ps.push_back(p);
    return ps;
  }
};

Estimate exact(double v) { return Estimate::exact_value(v); }

std::string kp_label(const char* name, int v) { return std::string(name) + "=" + std::to_string(v); }

/// Quermassintegral V_{k-p}(P_F K) of a shadow, with the inner Kubota
/// average taken over `inner` random subspaces of F.
Estimate shadow_quermass(const Polytope& p, const ShadowMeasure& m, const SubspaceBasis& f, int pindex, int inner,
                         std::mt19937_64& engine) {
  const int k = f.dim_sub();
  if (pindex == 0) return exact(m.volume);
  if (pindex == k) return exact(omega(k));
  if (pindex == 1) return exact(m.surface / k);
  const int j = k - pindex;
  std::vector<double> values;
  values.reserve(static_cast<std::size_t>(inner));
  for (int s = 0; s < inner; ++s) {
    const SubspaceBasis e = random_subspace(k, j, engine);
    const SubspaceBasis g{Mat(e.frame * f.frame)};
    values.push_back(j == 1 ? interval_shadow(p, Direction(g.frame.row(0).transpose())) : shadow_measure(p, g).volume);
  }
  return scale_estimate(mc_estimate(values), omega(k) / omega(j));
}

ShadowMeasure shadow_pair(BodyContext::Impl& c, const SubspaceBasis& f) {
  const int k = f.dim_sub();
  if (k == c.n - 1) {
    const Mat normal = orthocomplement(f.frame);
    const Direction xi = normal.row(0).transpose();
    return {cauchy_shadow_volume(c.sigma, xi), shadow_surface(c.body.polytope, xi)};
  }
  if (k == 1) return {interval_shadow(c.body.polytope, Direction(f.frame.row(0).transpose())), 2.0};
  return shadow_measure(c.body.polytope, f);
}

std::vector<PositionKind> positions_for(const std::string& id, const Body& body) {
  if (id == "T-HYPER-4") return {kMinSurface, kIsotropic, kJohn};
  if (id == "T-HYPER-6") return {kMinMeanWidth, kIsotropic, kJohn, kLowner};
  if (id == "T-LOWER-MIN") return {kMinSurface};
  std::vector<PositionKind> out{kMinSurface, kIsotropic, kJohn};
  if (body.symmetric) out.push_back(kLowner);
  return out;
}

void check_ghp(Run& r) {
  auto& c = r.c;
  const int n = c.n;
  const double bound = 2.0 * (n - 1) / n * c.S / c.V;
  const auto dirs = sample_sphere(n, kCheckedDirections, r.seed.derive("directions"));
  std::optional<CaseResult> worst;
  for (std::size_t i = 0; i < dirs.size(); ++i) {
    const double vol = cauchy_shadow_volume(c.sigma, dirs[i]);
    const double surf = shadow_surface(c.body.polytope, dirs[i]);
    CaseResult cr = r.make("worst of " + std::to_string(kCheckedDirections) + " directions", BoundKind::kUpper,
                           exact(surf / vol), exact(bound));
    if (!worst || worse(cr, *worst)) worst = cr;
  }
  r.add(*worst);
  r.value("directions", kCheckedDirections);
}

void check_hyper1(Run& r) {
  auto& c = r.c;
  const int n = c.n;
  const double d = c.partial();
  const ScreenedMin& m = c.min_shadow_surface();
  const double factor = 2.0 * b_constant(n) * d / (n * std::pow(omega(n), 1.0 / n));
  r.add("min over directions", BoundKind::kUpper, exact(std::pow(c.V, 1.0 / n) * m.value), exact(factor * c.S));
  r.value("partial", d);
  r.value("factor", factor);
  r.value("min_shadow_surface", m.value);
}

void check_lower_min(Run& r) {
  auto& pc = r.c.positioned(kMinSurface).context->impl();
  const int n = pc.n;
  const double d = pc.S / std::pow(pc.V, (n - 1.0) / n);
  const ScreenedMin& m = pc.min_shadow_surface();
  const double factor =
      (n - 1) * std::pow(omega(n), 1.0 / (n - 1)) / (4.0 * std::pow(n, (n - 2.0) / (n - 1)) * std::pow(d, 1.0 / (n - 1)));
  r.add("min-surface", BoundKind::kLower, exact(std::pow(pc.V, 1.0 / n) * m.value), exact(factor * pc.S));
  r.value("partial", d);
  r.value("factor", factor);
  r.note("min_search", "screened sphere search; the reported minimum is an upper estimate");
}

void check_hyper2(Run& r) {
  auto& c = r.c;
  const int n = c.n;
  const ScreenedMin& m = c.min_shadow_surface();
  const double lhs = std::pow(c.V, 1.0 / n) * m.value;
  r.add("min over directions", BoundKind::kUpper, exact(lhs), exact(2.0 * b_constant(n) * c.S));
  r.value("sharp_ratio", lhs / (b_constant(n) * c.S));
}

void check_hyper3(Run& r) {
  auto& c = r.c;
  const int n = c.n;
  const double factor = 2.0 * (n - 1) * omega(n - 1) / (n * n * omega(n));
  r.add("sphere mean", BoundKind::kUpper, exact(c.V * c.mean_shadow_surface()), exact(factor * c.S * c.S));
}

void check_hyper4(Run& r) {
  const int n = r.c.n;
  const double c3 = 2.0 * (n - 1) * omega(n - 1) / (n * n * omega(n));
  for (PositionKind kind : positions_for(r.spec.id, r.c.body)) {
    auto& pc = r.c.positioned(kind).context->impl();
    const double c2 = c3 * pc.S / std::pow(pc.V, (n - 1.0) / n) / std::sqrt(n);
    r.add(kPositionNames[kind], BoundKind::kUpper, exact(std::pow(pc.V, 1.0 / n) * pc.mean_shadow_surface()),
          exact(c2 * std::sqrt(n) * pc.S));
    r.value(std::string("c2_") + kPositionNames[kind], c2);
  }
}

double hyper5_factor(int n) { return (n - 1) * omega(n - 1) / std::pow(n * omega(n), (n - 2.0) / (n - 1)); }

void check_hyper5(Run& r) {
  auto& c = r.c;
  const int n = c.n;
  r.add("sphere mean", BoundKind::kLower, exact(c.mean_shadow_surface()),
        exact(hyper5_factor(n) * std::pow(c.S, (n - 2.0) / (n - 1))));
}

void check_hyper6(Run& r) {
  const int n = r.c.n;
  for (PositionKind kind : positions_for(r.spec.id, r.c.body)) {
    auto& pc = r.c.positioned(kind).context->impl();
    const double cpre = std::pow(pc.S, 1.0 / (n - 1)) / std::pow(pc.V, 1.0 / n);
    const double c5 = hyper5_factor(n) / cpre;
    r.add(kPositionNames[kind], BoundKind::kLower, exact(std::pow(pc.V, 1.0 / n) * pc.mean_shadow_surface()),
          exact(c5 * pc.S));
    r.value(std::string("c5_") + kPositionNames[kind], c5);
    r.value(std::string("c4_") + kPositionNames[kind], cpre);
  }
}

void check_lzon1(Run& r) {
  auto& c = r.c;
  const int n = c.n;
  const ScreenedMin& m = c.min_shadow_volume();
  r.add("min over directions", BoundKind::kUpper, exact(m.value),
        exact(n * b_constant(n) / (n - 1) * std::pow(c.V, (n - 1.0) / n)));
}

void check_tzon2(Run& r) {
  auto& c = r.c;
  const int n = c.n;
  const Zonotope& z = *c.body.zonotope;
  for (int k : r.k_range(2, n - 1)) {
    const double m = detail::screened_grassmann_min(
        [&z](const SubspaceBasis& f) { return zonotope_volume(zonotope_project(z, f)); }, n, k,
        r.seed.derive(static_cast<std::uint64_t>(k)), std::max(16, c.options.search_screen() / 10));
    r.add(kp_label("k", k), BoundKind::kUpper, exact(m),
          exact(n * std::pow(b_constant(n), n - k) / k * std::pow(c.V, static_cast<double>(k) / n)));
  }
}

void check_zonvol(Run& r) {
  auto& c = r.c;
  const int n = c.n;
  const double d = c.partial();
  const Zonotope& pi = c.projection();
  const Estimate pi_vol = c.projection_volume();
  const SurfaceAreaMeasure& sigma = c.sigma;
  const Estimate polar_r = polar_vrad([&sigma](const Direction& u) { return cauchy_shadow_volume(sigma, u); }, n,
                                      c.options.samples, r.seed.derive("polar-volume"));
  const Estimate polar_vol = scale_estimate(power_estimate(polar_r, n), omega(n));
  const double vn1 = std::pow(c.V, n - 1.0);
  const double wn = omega(n);
  const double wn1 = omega(n - 1);
  double fact = 1.0;
  for (int i = 2; i <= n; ++i) fact *= i;
  r.add("|Pi K| lower", BoundKind::kLower, pi_vol, exact(std::pow(d / n, n) * vn1));
  r.add("|Pi K| upper", BoundKind::kUpper, pi_vol, exact(wn * std::pow(wn1 * d / (n * wn), n) * vn1));
  r.add("|Pi* K| lower", BoundKind::kLower, polar_vol, exact(wn * std::pow(n * wn / (wn1 * d), n) / vn1));
  r.add("|Pi* K| upper", BoundKind::kUpper, polar_vol,
        exact(std::pow(4.0, n) * std::pow(n, n) / (fact * std::pow(d, n)) / vn1));
  r.value("partial", d);
  r.value("projection_generators", pi.num_generators());
}

void check_minproj(Run& r) {
  auto& c = r.c;
  const int n = c.n;
  const ScreenedMin& m = c.min_shadow_volume();
  r.value("c", m.value / (std::sqrt(n) * std::pow(c.V, (n - 1.0) / n)));
  r.value("min_shadow_volume", m.value);
  const Zonotope& pi = c.projection();
  r.value("projection_generators", pi.num_generators());
  if (pi.num_generators() > kMaxConvertGenerators) {
    r.note("skipped", "projection body has more than " + std::to_string(kMaxConvertGenerators) + " generators");
    return;
  }
  const double radius = inradius(zonotope_to_polytope(pi)).radius;
  r.add("sphere minimum vs inradius of Pi K", BoundKind::kEquality, exact(m.value), exact(radius), 1e-6);
}

void check_alek(Run& r) {
  auto& c = r.c;
  const int n = c.n;
  const Estimate w = mean_width(c.body.polytope, c.options.samples, r.seed.derive("mean-width"));
  std::vector<Estimate> q(static_cast<std::size_t>(n));
  for (int k = 1; k <= n - 1; ++k) q[static_cast<std::size_t>(k)] = c.Q(k);
  r.add("w = Q_1", BoundKind::kEquality, w, q[1]);
  for (int k = 1; k + 1 <= n - 1; ++k)
    r.add("Q_" + std::to_string(k) + " >= Q_" + std::to_string(k + 1), BoundKind::kLower,
          q[static_cast<std::size_t>(k)], q[static_cast<std::size_t>(k + 1)]);
  r.add("Q_" + std::to_string(n - 1) + " >= vrad", BoundKind::kLower, q[static_cast<std::size_t>(n - 1)],
        exact(vrad(c.body.polytope)));
  r.value("w", w.mean);
  r.value("vrad", vrad(c.body.polytope));
  for (int k = 1; k <= n - 1; ++k) r.value("Q_" + std::to_string(k), q[static_cast<std::size_t>(k)].mean);
}

void check_sinradius(Run& r) {
  auto& c = r.c;
  const double radius = c.inball().radius;
  r.add("inball", BoundKind::kUpper, exact(c.S), exact(c.n * c.V / radius));
  r.value("inradius", radius);
}

void check_quer1(Run& r) {
  auto& c = r.c;
  const int n = c.n;
  const double d = c.partial();
  const ScreenedMin& m = c.min_shadow_surface();
  const SubspaceBasis h = SubspaceBasis::hyperplane(m.direction);
  auto engine = make_engine(r.seed.derive("inner"));
  const ShadowMeasure sm{cauchy_shadow_volume(c.sigma, m.direction), m.value};
  for (int p : r.p_range(1, n - 2)) {
    const Estimate vs = shadow_quermass(c.body.polytope, sm, h, p, c.options.hull_samples(), engine);
    const Estimate lhs = scale_estimate(vs, std::pow(c.V, 1.0 / n));
    const Estimate vq = c.quermass(p);
    r.add(kp_label("p", p), BoundKind::kUpper, lhs, scale_estimate(vq, (p + 1) * omega(n - 1) * d / (n * omega(n))));
    if (c.body.is_zonoid())
      r.add(kp_label("p", p) + " zonoid", BoundKind::kUpper, lhs, scale_estimate(vq, (p + 1) * b_constant(n)));
  }
  r.value("partial", d);
  r.note("direction", "evaluated at the direction minimising the shadow surface area");
}

void check_quer2(Run& r) {
  auto& c = r.c;
  const int n = c.n;
  for (int p : r.p_range(1, n - 2)) {
    const Estimate lhs = scale_estimate(c.shadow_quermass_mean(p), std::pow(c.V, 1.0 / n));
    const double factor = (p + 1) * omega(n - 1) / (n * omega(n)) * c.S / std::pow(c.V, (n - 1.0) / n);
    r.add(kp_label("p", p), BoundKind::kUpper, lhs, scale_estimate(c.quermass(p), factor));
  }
}

void check_quer3(Run& r) {
  auto& c = r.c;
  const int n = c.n;
  for (int p : r.p_range(1, n - 2)) {
    const double e = (n - 1.0 - p) / (n - p);
    const Estimate rhs = scale_estimate(power_estimate(c.quermass(p), e), omega(n - 1) / std::pow(omega(n), e));
    r.add(kp_label("p", p), BoundKind::kLower, c.shadow_quermass_mean(p), rhs);
  }
}

void check_quer4(Run& r) {
  const int n = r.c.n;
  for (PositionKind kind : positions_for(r.spec.id, r.c.body)) {
    auto& pc = r.c.positioned(kind).context->impl();
    const double c0 = pc.inball().radius / std::pow(pc.V, 1.0 / n);
    r.value(std::string("c0_") + kPositionNames[kind], c0);
    for (int p : r.p_range(1, n - 2)) {
      const double e = (n - 1.0 - p) / (n - p);
      const Estimate lhs = scale_estimate(pc.shadow_quermass_mean(p), std::pow(pc.V, 1.0 / n));
      const double factor = omega(n - 1) * std::pow(c0, static_cast<double>(p) / (n - p)) / std::pow(omega(n), e);
      r.add(std::string(kPositionNames[kind]) + " " + kp_label("p", p), BoundKind::kLower, lhs,
            scale_estimate(pc.quermass(p), factor));
    }
  }
}

void check_fgm(Run& r) {
  auto& c = r.c;
  const int n = c.n;
  const int inner = std::max(16, c.options.outer_samples() / 10);
  for (int k : r.k_range(1, n - 1)) {
    const auto frames =
        sample_grassmannian(n, k, kCheckedSubspaces, r.seed.derive("frames").derive(static_cast<std::uint64_t>(k)));
    std::vector<ShadowMeasure> shadows;
    for (const auto& f : frames) shadows.push_back(shadow_pair(c, f));
    auto engine = make_engine(r.seed.derive("inner").derive(static_cast<std::uint64_t>(k)));
    for (int p = 0; p <= k; ++p) {
      if (c.options.p >= 0 && c.options.p != p) continue;
      const Estimate lhs = scale_estimate(c.quermass(p), 1.0 / c.V);
      const double coef = 1.0 / binomial(n - k + p, n - k);
      std::optional<CaseResult> worst;
      for (std::size_t i = 0; i < frames.size(); ++i) {
        const Estimate vq = shadow_quermass(c.body.polytope, shadows[i], frames[i], p, inner, engine);
        const Estimate rhs = scale_estimate(vq, coef / shadows[i].volume);
        CaseResult cr = r.make("k=" + std::to_string(k) + " p=" + std::to_string(p),
                               p == 0 ? BoundKind::kEquality : BoundKind::kLower, lhs, rhs, 1e-12);
        if (!worst || worse(cr, *worst)) worst = cr;
      }
      r.add(*worst);
    }
  }
  r.value("subspaces", kCheckedSubspaces);
  r.value("inner_samples", inner);
}

void check_lhigher1(Run& r) {
  auto& c = r.c;
  const int n = c.n;
  for (int k : r.k_range(1, n - 1)) {
    const auto frames =
        sample_grassmannian(n, k, kCheckedSubspaces, r.seed.derive("frames").derive(static_cast<std::uint64_t>(k)));
    std::optional<CaseResult> worst;
    for (const auto& f : frames) {
      const ShadowMeasure m = shadow_pair(c, f);
      CaseResult cr = r.make(kp_label("k", k), BoundKind::kLower, exact(c.S / c.V),
                             exact(static_cast<double>(n) / (k * (n - k + 1)) * m.surface / m.volume));
      if (!worst || worse(cr, *worst)) worst = cr;
    }
    r.add(*worst);
  }
  r.value("subspaces", kCheckedSubspaces);
}

void check_higher2(Run& r) {
  auto& c = r.c;
  const int n = c.n;
  const Zonotope& z = *c.body.zonotope;
  for (int k : r.k_range(2, n - 1)) {
    const double m = detail::screened_grassmann_min(
        [&z](const SubspaceBasis& f) { return zonotope_surface_area(zonotope_project(z, f)); }, n, k,
        r.seed.derive(static_cast<std::uint64_t>(k)), std::max(16, c.options.search_screen() / 10));
    r.add(kp_label("k", k), BoundKind::kUpper, exact(std::pow(c.V, (n - k) / static_cast<double>(n)) * m),
          exact((n - k + 1) * std::pow(b_constant(n), n - k) * c.S));
  }
}

void check_higher5(Run& r) {
  auto& c = r.c;
  const int n = c.n;
  for (int k : r.k_range(2, n - 1)) {
    const PairedMeans& pm = c.paired(k);
    const Estimate lhs = scale_estimate(pm.surface, std::pow(c.V, (n - k) / static_cast<double>(n)));
    const Estimate pk = scale_estimate(pm.volume, std::pow(c.V, -static_cast<double>(k) / n));
    r.add(kp_label("k", k), BoundKind::kUpper, lhs, scale_estimate(pk, k * (n - k + 1.0) / n * c.S));
  }
}

double higher6_factor(int n, int k) { return k * omega(k) / std::pow(n * omega(n), (k - 1.0) / (n - 1)); }

void check_higher6(Run& r) {
  auto& c = r.c;
  const int n = c.n;
  for (int k : r.k_range(2, n - 1))
    r.add(kp_label("k", k), BoundKind::kLower, c.paired(k).surface,
          exact(higher6_factor(n, k) * std::pow(c.S, (k - 1.0) / (n - 1))));
}

void check_higher7(Run& r) {
  const int n = r.c.n;
  for (PositionKind kind : positions_for(r.spec.id, r.c.body)) {
    auto& pc = r.c.positioned(kind).context->impl();
    const double c0 = pc.S / (n * std::pow(pc.V, (n - 1.0) / n));
    r.value(std::string("c0_") + kPositionNames[kind], c0);
    for (int k : r.k_range(2, n - 1)) {
      const Estimate lhs = scale_estimate(pc.paired(k).surface, std::pow(pc.V, (n - k) / static_cast<double>(n)));
      const double factor = higher6_factor(n, k) / std::pow(c0 * n, (n - k) / (n - 1.0));
      r.add(std::string(kPositionNames[kind]) + " " + kp_label("k", k), BoundKind::kLower, lhs, exact(factor * pc.S));
    }
  }
}

void check_zonvolid(Run& r) {
  auto& c = r.c;
  const int n = c.n;
  const Zonotope& pi = c.projection();
  const int g = pi.num_generators();
  const double shadow_work = binomial(g, n - 1) * static_cast<double>(c.sigma.atoms.size());
  r.value("projection_generators", g);
  if (binomial(g, n) > kMaxExactSubsets || shadow_work > 50 * kMaxExactSubsets) {
    r.note("skipped", "determinant expansion of Pi K exceeds the subset budget");
    return;
  }
  const Points w = shadow_generators(pi);
  double sum = 0.0;
  for (const auto& a : c.sigma.atoms) sum += a.weight * std::ldexp((w.transpose() * a.direction).cwiseAbs().sum(), n - 1);
  r.add("|Pi K| vs facet sum", BoundKind::kEquality, c.projection_volume(), exact(sum / n), 1e-8);
}

void check_ckident(Run& r) {
  auto& c = r.c;
  const int n = c.n;
  const int count = c.options.samples;
  std::vector<double> shadows;
  shadows.reserve(static_cast<std::size_t>(count));
  for (const auto& xi : sample_sphere(n, count, r.seed.derive("shadows")))
    shadows.push_back(cauchy_shadow_volume(c.sigma, xi));
  r.add("Cauchy-Kubota", BoundKind::kEquality, exact(c.S),
        scale_estimate(mc_estimate(shadows), n * omega(n) / omega(n - 1)), 1e-9);
  r.add("codimension-two average", BoundKind::kEquality, exact(c.mean_shadow_surface()),
        scale_estimate(c.shadow_mean(n - 2), (n - 1) * omega(n - 1) / omega(n - 2)), 1e-9);
  r.value("shadow_samples", count);
}

void check_balleq(Run& r) {
  auto& c = r.c;
  const int n = c.n;
  const ScreenedMin& m = c.min_shadow_surface();
  const double lhs = std::pow(c.V, 1.0 / n) * m.value;
  const double rhs = 2.0 * b_constant(n) * c.S;
  CaseResult cr = r.make("ratio in [0.93, 1]", BoundKind::kEquality, exact(lhs), exact(rhs));
  cr.status = cr.ratio >= kBallEqLow && cr.ratio <= kBallEqHigh ? CheckStatus::kPass : CheckStatus::kFail;
  r.add(cr);
  r.value("sharp_ratio", lhs / (b_constant(n) * c.S));
}

using CheckFn = void (*)(Run&);

CheckFn check_function(const std::string& id) {
  static const std::vector<std::pair<std::string, CheckFn>> table{
      {"GHP", check_ghp},           {"T-HYPER-1", check_hyper1},    {"T-LOWER-MIN", check_lower_min},
      {"T-HYPER-2", check_hyper2},  {"T-HYPER-3", check_hyper3},    {"T-HYPER-4", check_hyper4},
      {"T-HYPER-5", check_hyper5},  {"T-HYPER-6", check_hyper6},    {"L-ZON-1", check_lzon1},
      {"T-ZON-2", check_tzon2},     {"ZON-VOL", check_zonvol},      {"MINPROJ", check_minproj},
      {"ALEK", check_alek},         {"S-INRADIUS", check_sinradius}, {"T-QUER-1", check_quer1},
      {"T-QUER-2", check_quer2},    {"T-QUER-3", check_quer3},      {"T-QUER-4", check_quer4},
      {"FGM", check_fgm},           {"L-HIGHER-1", check_lhigher1}, {"T-HIGHER-2", check_higher2},
      {"T-HIGHER-5", check_higher5}, {"T-HIGHER-6", check_higher6}, {"T-HIGHER-7", check_higher7},
      {"ZON-VOL-ID", check_zonvolid}, {"CK-IDENT", check_ckident},  {"BALL-EQ", check_balleq},
  };
  for (const auto& [name, fn] : table)
    if (name == id) return fn;
  return nullptr;
}

bool is_ball_approx(const Body& body) { return body.name.rfind("ball-approx", 0) == 0; }

void finalize(CheckResult& out) {
  if (out.cases.empty()) {
    out.status = CheckStatus::kSkipped;
    return;
  }
  const CaseResult* worst = &out.cases.front();
  for (const auto& c : out.cases)
    if (worse(c, *worst)) worst = &c;
  out.bound = worst->bound;
  out.lhs = worst->lhs;
  out.rhs = worst->rhs;
  out.ratio = worst->ratio;
  out.status = worst->status;
  if (out.status != CheckStatus::kFail && out.status != CheckStatus::kError) {
    for (const auto& c : out.cases) {
      if (c.status == CheckStatus::kFail) out.status = CheckStatus::kFail;
      if (c.status == CheckStatus::kInconclusive && out.status == CheckStatus::kPass)
        out.status = CheckStatus::kInconclusive;
    }
  }
}

}  // namespace

bool admissible(const CheckSpec& spec, const Body& body) {
  switch (spec.body_class) {
    case BodyClass::kZonoid: return body.is_zonoid();
    case BodyClass::kBallApprox: return is_ball_approx(body);
    default: return true;
  }
}

CheckResult run_check(const CheckSpec& spec, BodyContext& context, std::uint64_t seed) {
  BodyContext::Impl& c = context.impl();
  CheckResult out;
  out.id = spec.id;
  out.body = c.body.name;
  out.n = c.n;
  out.ratio = NAN;
  out.lhs.mean = out.rhs.mean = NAN;
  if (!admissible(spec, c.body)) {
    out.status = CheckStatus::kSkipped;
    out.notes["skipped"] = std::string("requires a ") + to_string(spec.body_class) + " body";
    return out;
  }
  const CheckFn fn = check_function(spec.id);
  Run run{c, spec, RngSeed{seed, 0}.derive(spec.id).derive(c.body.name).derive(static_cast<std::uint64_t>(c.n)), out};
  try {
    if (!fn) throw GeometryError(ErrorKind::kInvalidArgument, "no evaluator for check " + spec.id);
    fn(run);
    finalize(out);
  } catch (const std::exception& e) {
    out.status = CheckStatus::kError;
    out.notes["error"] = e.what();
  }
  return out;
}

namespace {

CheckResult build_error_cell(const CheckSpec& spec, const BodySpec& body, const std::string& what) {
  CheckResult out;
  out.id = spec.id;
  out.body = body.path.empty() ? body.name : body.path;
  out.n = body.dim;
  out.ratio = NAN;
  out.lhs.mean = out.rhs.mean = NAN;
  out.status = CheckStatus::kError;
  out.notes["error"] = what;
  return out;
}

}  // namespace

CheckResult run_check(const CheckSpec& spec, const BodySpec& body, std::uint64_t seed, const SuiteOptions& options) {
  std::unique_ptr<BodyContext> context;
  try {
    context = std::make_unique<BodyContext>(body.build(), seed, options);
  } catch (const std::exception& e) {
    return build_error_cell(spec, body, e.what());
  }
  return run_check(spec, *context, seed);
}

Body BodySpec::build() const {
  if (!path.empty()) {
    Body b = load_body_file(path);
    if (!name.empty()) b.name = name;
    return b;
  }
  return make_named_body(name, dim);
}

std::string BodySpec::key() const { return (path.empty() ? name : path) + "@" + std::to_string(dim); }

std::vector<BodySpec> default_corpus_specs(int dim, int random_count) {
  std::vector<BodySpec> out;
  for (const auto& name : default_corpus(dim, random_count)) out.push_back({name, dim, {}});
  return out;
}

int SuiteReport::count(CheckStatus status) const {
  return static_cast<int>(
      std::count_if(results.begin(), results.end(), [status](const CheckResult& r) { return r.status == status; }));
}

namespace {

void parallel_for(int count, int jobs, const std::function<void(int)>& fn) {
  jobs = std::max(1, std::min(jobs, count));
  if (jobs == 1) {
    for (int i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> threads;
  for (int t = 0; t < jobs; ++t)
    threads.emplace_back([&] {
      for (int i = next++; i < count; i = next++) fn(i);
    });
  for (auto& th : threads) th.join();
}

}  // namespace

SuiteReport run_suite(const std::vector<BodySpec>& corpus, const std::vector<std::string>& ids, std::uint64_t seed,
                      const SuiteOptions& options) {
  std::vector<const CheckSpec*> specs;
  for (const auto& id : ids) {
    const CheckSpec* s = find_check(id);
    if (!s) throw GeometryError(ErrorKind::kInvalidArgument, "unknown check id '" + id + "'");
    specs.push_back(s);
  }
  SuiteReport report;
  report.seed = seed;
  report.options = options;

  const int nb = static_cast<int>(corpus.size());
  std::vector<std::unique_ptr<BodyContext>> contexts(static_cast<std::size_t>(nb));
  std::vector<std::string> build_errors(static_cast<std::size_t>(nb));
  parallel_for(nb, options.jobs, [&](int i) {
    const auto idx = static_cast<std::size_t>(i);
    try {
      contexts[idx] = std::make_unique<BodyContext>(corpus[idx].build(), seed, options);
    } catch (const std::exception& e) {
      build_errors[idx] = e.what();
    }
  });

  const int ns = static_cast<int>(specs.size());
  report.results.resize(static_cast<std::size_t>(nb * ns));
  parallel_for(nb * ns, options.jobs, [&](int cell) {
    const auto b = static_cast<std::size_t>(cell / ns);
    const CheckSpec& spec = *specs[static_cast<std::size_t>(cell % ns)];
    CheckResult& out = report.results[static_cast<std::size_t>(cell)];
    out = contexts[b] ? run_check(spec, *contexts[b], seed) : build_error_cell(spec, corpus[b], build_errors[b]);
  });
  return report;
}

}  // namespace shadowgeom
