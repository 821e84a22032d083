#include "shadowgeom/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace shadowgeom {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kInvalidDimension: return "invalid-dimension";
    case ErrorKind::kEmptyInput: return "empty-input";
    case ErrorKind::kObjectiveError: return "objective-error";
    case ErrorKind::kDegenerateInput: return "degenerate-input";
    case ErrorKind::kOriginNotInterior: return "origin-not-interior";
    case ErrorKind::kSingularMatrix: return "singular-matrix";
    case ErrorKind::kDegenerateZonotope: return "degenerate-zonotope";
    case ErrorKind::kTooManyGenerators: return "too-many-generators";
    case ErrorKind::kInvalidArgument: return "invalid-argument";
    case ErrorKind::kIo: return "io-error";
  }
  return "unknown";
}

std::uint64_t fnv1a(std::string_view text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

namespace {

std::uint64_t mix(std::uint64_t x) {
  // splitmix64 finaliser
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

RngSeed RngSeed::derive(std::string_view tag) const {
  return {seed, mix(stream_id ^ fnv1a(tag))};
}

RngSeed RngSeed::derive(std::uint64_t index) const {
  return {seed, mix(stream_id + 0x632be59bd9b4e019ULL * (index + 1))};
}

std::mt19937_64 make_engine(RngSeed s) {
  std::seed_seq seq{static_cast<std::uint32_t>(s.seed), static_cast<std::uint32_t>(s.seed >> 32),
                    static_cast<std::uint32_t>(s.stream_id),
                    static_cast<std::uint32_t>(s.stream_id >> 32)};
  return std::mt19937_64(seq);
}

double Estimate::rel_error() const {
  if (mean == 0.0) return std_error == 0.0 ? 0.0 : INFINITY;
  return std_error / std::abs(mean);
}

Estimate mc_estimate(std::span<const double> values) {
  if (values.empty()) throw GeometryError(ErrorKind::kEmptyInput, "mc_estimate needs at least one value");
  const auto count = static_cast<std::int64_t>(values.size());
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= static_cast<double>(count);
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  double se = 0.0;
  if (count > 1) se = std::sqrt(ss / static_cast<double>(count - 1) / static_cast<double>(count));
  return {mean, se, count, false};
}

Direction random_direction(int n, std::mt19937_64& engine) {
  std::normal_distribution<double> normal;
  Direction v(n);
  double norm = 0.0;
  do {
    for (int i = 0; i < n; ++i) v[i] = normal(engine);
    norm = v.norm();
  } while (norm < 1e-300);
  return v / norm;
}

std::vector<Direction> sample_sphere(int n, int count, RngSeed seed) {
  if (n < 2 || n > kMaxDim)
    throw GeometryError(ErrorKind::kInvalidDimension, "sample_sphere needs 2 <= n <= 8, got " + std::to_string(n));
  if (count < 1) throw GeometryError(ErrorKind::kInvalidArgument, "sample_sphere needs count >= 1");
  auto engine = make_engine(seed);
  std::vector<Direction> out;
  out.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) out.push_back(random_direction(n, engine));
  return out;
}

SubspaceBasis SubspaceBasis::from_rows(const Mat& rows) {
  const int k = static_cast<int>(rows.rows());
  const int n = static_cast<int>(rows.cols());
  Mat a = rows.transpose();  // n x k
  Eigen::HouseholderQR<Mat> qr(a);
  Mat q = qr.householderQ() * Mat::Identity(n, k);
  Mat r = qr.matrixQR().topRows(k).triangularView<Eigen::Upper>();
  for (int j = 0; j < k; ++j) {
    if (r(j, j) < 0) q.col(j) = -q.col(j);
  }
  return SubspaceBasis{q.transpose()};
}

SubspaceBasis random_subspace(int n, int k, std::mt19937_64& engine) {
  std::normal_distribution<double> normal;
  Mat g(k, n);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < n; ++j) g(i, j) = normal(engine);
  return SubspaceBasis::from_rows(g);
}

std::vector<SubspaceBasis> sample_grassmannian(int n, int k, int count, RngSeed seed) {
  if (n < 1 || n > kMaxDim || k < 1 || k > n)
    throw GeometryError(ErrorKind::kInvalidDimension,
                        "sample_grassmannian needs 1 <= k <= n <= 8, got n=" + std::to_string(n) +
                            " k=" + std::to_string(k));
  if (count < 1) throw GeometryError(ErrorKind::kInvalidArgument, "sample_grassmannian needs count >= 1");
  auto engine = make_engine(seed);
  std::vector<SubspaceBasis> out;
  out.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) out.push_back(random_subspace(n, k, engine));
  return out;
}

Mat orthocomplement(const Mat& frame) {
  const int k = static_cast<int>(frame.rows());
  const int n = static_cast<int>(frame.cols());
  Mat a = frame.transpose();  // n x k
  Eigen::HouseholderQR<Mat> qr(a);
  Mat q = qr.householderQ() * Mat::Identity(n, n);
  return q.rightCols(n - k).transpose();
}

SubspaceBasis SubspaceBasis::hyperplane(const Direction& xi) {
  Mat row(1, xi.size());
  row.row(0) = xi.transpose() / xi.norm();
  return SubspaceBasis{orthocomplement(row)};
}

int default_restarts(int n) { return 16 * n; }

namespace {

std::string describe(const Vec& v) {
  std::ostringstream os;
  os.precision(17);
  os << "(";
  for (int i = 0; i < v.size(); ++i) os << (i ? ", " : "") << v[i];
  os << ")";
  return os.str();
}

/// Local coordinates around a point of a manifold embedded in a matrix space.
template <class Point>
struct Chart {
  int dim = 0;
  std::function<Point(const Eigen::VectorXd&)> retract;
};

template <class Point>
struct Descent {
  std::function<double(const Point&)> evaluate;
  std::function<Chart<Point>(const Point&)> chart_at;
};

template <class Point>
std::pair<Point, double> descend(const Descent<Point>& problem, Point x, double fx,
                                 const MinimizeOptions& options) {
  constexpr double kFdStep = 1e-7;
  constexpr double kArmijo = 1e-4;
  double poll = 0.25;
  double line = 0.5;
  for (int iter = 0; iter < options.max_iter; ++iter) {
    const Chart<Point> chart = problem.chart_at(x);
    const int d = chart.dim;
    if (d == 0) break;
    Eigen::VectorXd y = Eigen::VectorXd::Zero(d);
    Eigen::VectorXd grad(d);
    for (int i = 0; i < d; ++i) {
      y[i] = kFdStep;
      const double fp = problem.evaluate(chart.retract(y));
      y[i] = -kFdStep;
      const double fm = problem.evaluate(chart.retract(y));
      y[i] = 0.0;
      grad[i] = (fp - fm) / (2.0 * kFdStep);
    }
    const double gnorm = grad.norm();
    bool moved = false;
    if (gnorm > 1e-14) {
      const Eigen::VectorXd dir = -grad / gnorm;
      for (double t = std::min(line, 1.0); t >= options.step_tol; t *= 0.5) {
        Point cand = chart.retract(t * dir);
        const double fc = problem.evaluate(cand);
        if (fc <= fx - kArmijo * t * gnorm && fc < fx) {
          x = std::move(cand);
          fx = fc;
          line = 2.0 * t;
          moved = true;
          break;
        }
      }
    }
    if (moved) continue;
    // Compass poll along the chart axes.
    double best = fx;
    Point best_point = x;
    for (int i = 0; i < d; ++i) {
      for (double sign : {1.0, -1.0}) {
        y.setZero();
        y[i] = sign * poll;
        Point cand = chart.retract(y);
        const double fc = problem.evaluate(cand);
        if (fc < best) {
          best = fc;
          best_point = std::move(cand);
        }
      }
    }
    if (best < fx) {
      x = std::move(best_point);
      fx = best;
      line = std::max(line, poll);
      continue;
    }
    poll *= 0.5;
    if (poll < options.step_tol) break;
  }
  return {std::move(x), fx};
}

}  // namespace

SphereMinimum minimize_on_sphere(const SphereObjective& objective, int n, int restarts,
                                 RngSeed seed, const MinimizeOptions& options) {
  if (n < 2 || n > kMaxDim)
    throw GeometryError(ErrorKind::kInvalidDimension, "minimize_on_sphere needs 2 <= n <= 8");
  if (restarts < 1) throw GeometryError(ErrorKind::kInvalidArgument, "restarts must be >= 1");

  Descent<Direction> problem;
  problem.evaluate = [&](const Direction& xi) {
    const double v = objective(xi);
    if (!std::isfinite(v))
      throw GeometryError(ErrorKind::kObjectiveError, "non-finite objective at direction " + describe(xi));
    return v;
  };
  problem.chart_at = [](const Direction& x) {
    Mat row(1, x.size());
    row.row(0) = x.transpose();
    const Mat tangent = orthocomplement(row);  // (n-1) x n
    Chart<Direction> chart;
    chart.dim = static_cast<int>(tangent.rows());
    chart.retract = [x, tangent](const Eigen::VectorXd& y) {
      Direction v = x + tangent.transpose() * y;
      return Direction(v / v.norm());
    };
    return chart;
  };

  std::vector<Direction> starts;
  for (const Vec& s : options.extra_starts) starts.push_back(s / s.norm());
  for (auto& s : sample_sphere(n, restarts, seed)) starts.push_back(std::move(s));

  SphereMinimum best;
  best.value = INFINITY;
  for (const Direction& start : starts) {
    const double f0 = problem.evaluate(start);
    auto [x, fx] = descend(problem, start, f0, options);
    if (fx < best.value) {
      best.value = fx;
      best.direction = x;
    }
  }
  return best;
}

GrassmannMinimum minimize_on_grassmannian(const GrassmannObjective& objective, int n, int k,
                                          int restarts, RngSeed seed, const MinimizeOptions& options) {
  if (n < 1 || n > kMaxDim || k < 1 || k > n)
    throw GeometryError(ErrorKind::kInvalidDimension, "minimize_on_grassmannian needs 1 <= k <= n <= 8");
  if (restarts < 1) throw GeometryError(ErrorKind::kInvalidArgument, "restarts must be >= 1");

  Descent<SubspaceBasis> problem;
  problem.evaluate = [&](const SubspaceBasis& f) {
    const double v = objective(f);
    if (!std::isfinite(v)) {
      Eigen::Map<const Eigen::VectorXd> flat(f.frame.data(), f.frame.size());
      throw GeometryError(ErrorKind::kObjectiveError,
                          "non-finite objective at frame " + describe(Vec(flat.head(std::min<Eigen::Index>(flat.size(), kMaxDim)))));
    }
    return v;
  };
  problem.chart_at = [n, k](const SubspaceBasis& f) {
    const Mat comp = orthocomplement(f.frame);  // (n-k) x n
    Chart<SubspaceBasis> chart;
    chart.dim = k * (n - k);
    chart.retract = [f, comp, k, n](const Eigen::VectorXd& y) {
      Mat moved = f.frame;
      for (int i = 0; i < k; ++i)
        for (int j = 0; j < n - k; ++j) moved.row(i) += y[i * (n - k) + j] * comp.row(j);
      return SubspaceBasis::from_rows(moved);
    };
    return chart;
  };

  std::vector<SubspaceBasis> starts = options.extra_frames;
  for (auto& s : sample_grassmannian(n, k, restarts, seed)) starts.push_back(std::move(s));

  GrassmannMinimum best;
  best.value = INFINITY;
  for (const SubspaceBasis& start : starts) {
    const double f0 = problem.evaluate(start);
    auto [x, fx] = descend(problem, start, f0, options);
    if (fx < best.value) {
      best.value = fx;
      best.subspace = x;
    }
  }
  return best;
}

}  // namespace shadowgeom
