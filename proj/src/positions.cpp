#include "shadowgeom/positions.hpp"

#include "shadowgeom/quermass.hpp"

#include <algorithm>
#include <cmath>

namespace shadowgeom {

namespace {

Mat sym_power(const Mat& m, double exponent) {
  Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (m + m.transpose()));
  Vec ev = es.eigenvalues();
  for (int i = 0; i < ev.size(); ++i) ev[i] = std::pow(std::max(ev[i], 1e-300), exponent);
  return es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().transpose();
}

Mat sym_exp(const Mat& m) {
  Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (m + m.transpose()));
  Vec ev = es.eigenvalues().array().exp().matrix();
  return es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().transpose();
}

Mat det_normalize(const Mat& t) {
  const double det = std::abs(t.determinant());
  return t / std::pow(det, 1.0 / static_cast<double>(t.rows()));
}

void transformed_measure(const SurfaceAreaMeasure& sigma, const Mat& t, double& total, Mat& second) {
  const int n = sigma.dim;
  const Mat inv_t = t.inverse().transpose();
  const double det = std::abs(t.determinant());
  total = 0.0;
  second = Mat::Zero(n, n);
  for (const auto& a : sigma.atoms) {
    const Vec v = inv_t * a.direction;
    const double len = v.norm();
    const double w = a.weight * det * len;
    total += w;
    second += (w / (len * len)) * v * v.transpose();
  }
}

}  // namespace

Polytope PositionResult::apply(const Polytope& p) const {
  Points v = p.vertices();
  if (translation.size() == v.rows()) v.colwise() -= translation;
  return convex_hull(Points(transform * v));
}

double Ellipsoid::volume() const {
  return omega(static_cast<int>(shape.rows())) * std::sqrt(std::max(0.0, shape.determinant()));
}

double petty_residual(const SurfaceAreaMeasure& sigma, const Mat& t) {
  double total = 0.0;
  Mat second;
  transformed_measure(sigma, t, total, second);
  const int n = sigma.dim;
  return (n * second / total - Mat::Identity(n, n)).norm();
}

MinSurfaceResult minimal_surface_position(const Polytope& p, double tol, int max_iter) {
  const int n = p.dim();
  const SurfaceAreaMeasure sigma = surface_measure(p);
  constexpr double kDamping = 0.5;
  Mat t = Mat::Identity(n, n);
  MinSurfaceResult out;
  double total = 0.0;
  Mat second;
  int iter = 0;
  for (;; ++iter) {
    transformed_measure(sigma, t, total, second);
    const Mat m = second / total;
    out.position.residual = (n * m - Mat::Identity(n, n)).norm();
    if (out.position.residual < tol) {
      out.position.converged = true;
      break;
    }
    if (iter >= max_iter) break;
    const Mat b = sym_power(m, 0.5 * kDamping);
    t = det_normalize(b * t);
  }
  out.position.transform = t;
  out.position.translation = Vec::Zero(n);
  out.position.iterations = iter;
  out.partial = total / std::pow(p.volume() * std::abs(t.determinant()), (n - 1.0) / n);
  out.position.objective = out.partial;
  return out;
}

IsotropicResult isotropic_position(const Polytope& p) {
  const int n = p.dim();
  const PolytopeMoments mom = centroid_and_covariance(p);
  const Mat w = sym_power(mom.covariance, -0.5);
  const double s = std::pow(p.volume() * w.determinant(), -1.0 / n);
  IsotropicResult out;
  out.L_K = std::pow(mom.covariance.determinant(), 1.0 / (2.0 * n)) * std::pow(p.volume(), -1.0 / n);
  out.position.transform = s * w;
  out.position.translation = mom.centroid;
  out.position.iterations = 1;
  const Polytope tk = out.position.apply(p);
  const PolytopeMoments after = centroid_and_covariance(tk);
  out.position.residual = (after.covariance / (out.L_K * out.L_K) - Mat::Identity(n, n)).norm();
  out.position.objective = out.L_K;
  out.position.converged = out.position.residual < 1e-8;
  return out;
}

EllipsoidResult lowner_position(const Polytope& p, double tol, int max_iter) {
  const int n = p.dim();
  const int m = p.num_vertices();
  const int d = n + 1;
  Eigen::MatrixXd q(d, m);
  q.topRows(n) = p.vertices();
  q.row(n).setOnes();
  // Kumar-Yildirim start: extreme pairs along successively orthogonal directions.
  Eigen::VectorXd u = Eigen::VectorXd::Zero(m);
  {
    Mat spanned(0, n);
    for (int step = 0; step < n; ++step) {
      const Mat complement = orthocomplement(spanned);
      const Vec b = complement.row(0).transpose();
      const Eigen::VectorXd proj = p.vertices().transpose() * b;
      int hi = 0;
      int lo = 0;
      proj.maxCoeff(&hi);
      proj.minCoeff(&lo);
      u[hi] = u[lo] = 1.0;
      Mat grown(step + 1, n);
      if (step > 0) grown.topRows(step) = spanned;
      grown.row(step) = (p.vertex(hi) - p.vertex(lo)).transpose();
      spanned = SubspaceBasis::from_rows(grown).frame;
    }
    u /= u.sum();
  }
  EllipsoidResult out;
  int iter = 0;
  double gap = INFINITY;
  Eigen::MatrixXd xinv;
  Eigen::VectorXd mvals;
  auto refresh = [&] {
    const Eigen::MatrixXd x = q * u.asDiagonal() * q.transpose();
    xinv = x.llt().solve(Eigen::MatrixXd::Identity(d, d));
    mvals = (q.transpose() * xinv).cwiseProduct(q.transpose()).rowwise().sum();
  };
  refresh();
  for (; iter < max_iter; ++iter) {
    if (iter % 256 == 255) refresh();
    int j = 0;
    mvals.maxCoeff(&j);
    int k = -1;
    for (int i = 0; i < m; ++i)
      if (u[i] > 0 && (k < 0 || mvals[i] < mvals[k])) k = i;
    const double up = mvals[j] / d - 1.0;
    const double down = 1.0 - mvals[k] / d;
    gap = std::max(up, down);
    if (gap <= tol) {
      refresh();
      j = 0;
      mvals.maxCoeff(&j);
      double low = INFINITY;
      for (int i = 0; i < m; ++i)
        if (u[i] > 0) low = std::min(low, mvals[i]);
      gap = std::max(mvals[j] / d - 1.0, 1.0 - low / d);
      if (gap <= tol) break;
      continue;
    }
    // u <- (1 - alpha) u + alpha e_i; alpha < 0 is an away step.
    int i = j;
    double alpha = (mvals[j] - d) / (d * (mvals[j] - 1.0));
    bool drop = false;
    if (up < down) {
      i = k;
      const double cap = u[k] / (1.0 - u[k]);
      alpha = (mvals[k] - d) / (d * (mvals[k] - 1.0));
      if (-alpha >= cap) {
        alpha = -cap;
        drop = true;
      }
    }
    const Eigen::VectorXd w = xinv * q.col(i);
    const double denom = (1.0 - alpha) + alpha * mvals[i];
    const Eigen::VectorXd cross = q.transpose() * w;
    xinv = (xinv - (alpha / denom) * w * w.transpose()) / (1.0 - alpha);
    mvals = (mvals - (alpha / denom) * cross.cwiseProduct(cross)) / (1.0 - alpha);
    u *= 1.0 - alpha;
    u[i] = drop ? 0.0 : u[i] + alpha;
  }
  const Vec c = p.vertices() * u;
  Mat shape = n * (p.vertices() * u.asDiagonal() * p.vertices().transpose() - c * c.transpose());
  shape = 0.5 * (shape + shape.transpose());
  // Enlarge slightly so that every vertex is covered.
  const Eigen::LLT<Mat> chol(shape);
  double cover = 0.0;
  for (int i = 0; i < m; ++i) {
    const Vec diff = p.vertex(i) - c;
    cover = std::max(cover, diff.dot(chol.solve(diff)));
  }
  shape *= std::max(cover, 1.0);
  out.ellipsoid = {shape, c};
  out.position.transform = det_normalize(sym_power(shape, -0.5));
  out.position.translation = c;
  out.position.residual = gap;
  out.position.iterations = iter;
  out.position.converged = gap <= tol;
  out.position.objective = out.ellipsoid.volume();
  return out;
}

bool is_centrally_symmetric(const Polytope& p) {
  const double tol = 1e-9 * std::max(1.0, p.scale());
  for (int i = 0; i < p.num_vertices(); ++i) {
    bool found = false;
    for (int j = 0; j < p.num_vertices() && !found; ++j) found = (p.vertex(i) + p.vertex(j)).norm() <= tol;
    if (!found) return false;
  }
  return true;
}

namespace {

class JohnBarrier {
 public:
  JohnBarrier(int n, bool fix_center, std::vector<Vec> normals, std::vector<double> offsets)
      : n_(n), fix_center_(fix_center), normals_(std::move(normals)), offsets_(std::move(offsets)) {
    nsym_ = n_ * (n_ + 1) / 2;
  }

  int size() const { return nsym_ + (fix_center_ ? 0 : n_); }

  Mat matrix(const Eigen::VectorXd& x) const {
    Mat a(n_, n_);
    int k = 0;
    for (int i = 0; i < n_; ++i)
      for (int j = i; j < n_; ++j) a(i, j) = a(j, i) = x[k++];
    return a;
  }

  Vec center(const Eigen::VectorXd& x) const {
    return fix_center_ ? Vec(Vec::Zero(n_)) : Vec(x.tail(n_));
  }

  Eigen::VectorXd pack(const Mat& a, const Vec& d) const {
    Eigen::VectorXd x(size());
    int k = 0;
    for (int i = 0; i < n_; ++i)
      for (int j = i; j < n_; ++j) x[k++] = a(i, j);
    if (!fix_center_) x.tail(n_) = d;
    return x;
  }

  /// Returns false outside the domain.
  bool value(const Eigen::VectorXd& x, double mu, double& f) const {
    const Mat a = matrix(x);
    const Eigen::LLT<Mat> llt(a);
    if (llt.info() != Eigen::Success) return false;
    double logdet = 0.0;
    for (int i = 0; i < n_; ++i) {
      const double l = llt.matrixL()(i, i);
      if (!(l > 0)) return false;
      logdet += 2.0 * std::log(l);
    }
    const Vec d = center(x);
    double barrier = 0.0;
    for (std::size_t i = 0; i < normals_.size(); ++i) {
      const double s = offsets_[i] - normals_[i].dot(d) - (a * normals_[i]).norm();
      if (!(s > 0)) return false;
      barrier += std::log(s);
    }
    f = -logdet - mu * barrier;
    return true;
  }

  /// Analytic gradient and Hessian of the barrier objective.
  void derivatives(const Eigen::VectorXd& x, double mu, Eigen::VectorXd& g, Eigen::MatrixXd& h) const {
    const Mat a = matrix(x);
    const Vec d = center(x);
    const Mat ainv = a.inverse();
    const int dim = size();
    const int m = facets();
    std::vector<Mat> basis;
    std::vector<std::pair<int, int>> index;
    for (int i = 0; i < n_; ++i)
      for (int j = i; j < n_; ++j) {
        Mat e = Mat::Zero(n_, n_);
        e(i, j) = e(j, i) = 1.0;
        basis.push_back(e);
        index.emplace_back(i, j);
      }
    g = Eigen::VectorXd::Zero(dim);
    h = Eigen::MatrixXd::Zero(dim, dim);
    Eigen::MatrixXd slack_part(dim, m);
    Eigen::MatrixXd norm_part(nsym_, m);
    Mat weighted = Mat::Zero(n_, n_);
    for (int c = 0; c < m; ++c) {
      const Vec& u = normals_[static_cast<std::size_t>(c)];
      const Vec au = a * u;
      const double r = au.norm();
      const double s = offsets_[static_cast<std::size_t>(c)] - u.dot(d) - r;
      Eigen::Matrix<double, Eigen::Dynamic, 1, 0, 44, 1> ds(dim);
      for (int k = 0; k < nsym_; ++k) {
        const auto [i, j] = index[static_cast<std::size_t>(k)];
        const double dr = i == j ? u[i] * au[i] / r : (u[i] * au[j] + u[j] * au[i]) / r;
        ds[k] = -dr;
        norm_part(k, c) = dr * std::sqrt(mu / (s * r));
      }
      if (!fix_center_) ds.tail(n_) = -u;
      g -= (mu / s) * ds;
      slack_part.col(c) = (std::sqrt(mu) / s) * ds;
      weighted += (mu / (s * r)) * u * u.transpose();
    }
    h.noalias() += slack_part * slack_part.transpose();
    h.topLeftCorner(nsym_, nsym_).noalias() -= norm_part * norm_part.transpose();
    std::vector<Mat> scaled;
    for (int k = 0; k < nsym_; ++k) {
      scaled.push_back(ainv * basis[static_cast<std::size_t>(k)]);
      g[k] -= scaled[static_cast<std::size_t>(k)].trace();
    }
    for (int k = 0; k < nsym_; ++k)
      for (int l = k; l < nsym_; ++l) {
        const auto& ek = basis[static_cast<std::size_t>(k)];
        const auto& el = basis[static_cast<std::size_t>(l)];
        const double v = scaled[static_cast<std::size_t>(k)].cwiseProduct(scaled[static_cast<std::size_t>(l)].transpose()).sum() +
                         (ek * el).cwiseProduct(weighted.transpose()).sum();
        h(k, l) += v;
        if (l != k) h(l, k) += v;
      }
  }

  /// Residual of John's decomposition in the frame where the ellipsoid is the unit ball.
  double decomposition_residual(const Eigen::VectorXd& x, double mu) const {
    const Mat a = matrix(x);
    const Vec d = center(x);
    Mat sum = Mat::Zero(n_, n_);
    Vec first = Vec::Zero(n_);
    for (std::size_t i = 0; i < normals_.size(); ++i) {
      const Vec au = a * normals_[i];
      const double r = au.norm();
      const double s = offsets_[i] - normals_[i].dot(d) - r;
      const double c = mu / s * r;
      const Vec w = au / r;
      sum += c * w * w.transpose();
      first += c * w;
    }
    return (sum - Mat::Identity(n_, n_)).norm() + (fix_center_ ? 0.0 : first.norm());
  }

  int facets() const { return static_cast<int>(normals_.size()); }

 private:
  int n_;
  bool fix_center_;
  std::vector<Vec> normals_;
  std::vector<double> offsets_;
  int nsym_ = 0;
};

struct BarrierPath {
  Eigen::VectorXd x;
  double mu = 1.0;
  int newton = 0;
};

/// Follows the central path from a strictly feasible x until m * mu <= tol.
BarrierPath follow_path(const JohnBarrier& problem, Eigen::VectorXd x, double tol) {
  BarrierPath out;
  const int m = problem.facets();
  double mu = 1.0;
  const double mu_end = tol / m;
  while (true) {
    for (int it = 0; it < 200; ++it) {
      Eigen::VectorXd g;
      Eigen::MatrixXd h;
      problem.derivatives(x, mu, g, h);
      h = 0.5 * (h + h.transpose());
      Eigen::LDLT<Eigen::MatrixXd> ldlt(h);
      Eigen::VectorXd dx = -ldlt.solve(g);
      double decrement = -g.dot(dx);
      if (!(decrement > 0) || !dx.allFinite()) {
        dx = -g;
        decrement = g.squaredNorm();
      }
      ++out.newton;
      // Newton decrement of the self-concordant function f / mu.
      const double scaled = decrement / mu;
      if (scaled < 1e-16) break;
      double f0 = 0.0;
      problem.value(x, mu, f0);
      double t = 1.0;
      double ft = 0.0;
      const bool quadratic = scaled < 0.1;
      while (t > 1e-14 && !(problem.value(x + t * dx, mu, ft) && (quadratic || ft <= f0 - 0.25 * t * decrement)))
        t *= 0.5;
      if (t <= 1e-14) break;
      x += t * dx;
      if (scaled < 1e-12) break;
    }
    if (mu <= mu_end) break;
    mu = std::max(mu / 8.0, mu_end);
  }
  out.x = std::move(x);
  out.mu = mu;
  return out;
}

}  // namespace

EllipsoidResult john_position(const Polytope& p, double tol) {
  const int n = p.dim();
  const bool symmetric = is_centrally_symmetric(p);
  Vec d0;
  double r0;
  if (symmetric) {
    d0 = Vec::Zero(n);
    r0 = INFINITY;
    for (const auto& f : p.facets()) r0 = std::min(r0, f.offset);
  } else {
    const Inball ib = inradius(p);
    d0 = ib.center;
    r0 = ib.radius;
  }
  const auto& facets = p.facets();
  const int total = static_cast<int>(facets.size());
  const int nvars = n * (n + 1) / 2 + (symmetric ? 0 : n);
  // Working set: facets closest to the starting centre, grown by the violated ones.
  std::vector<int> order(static_cast<std::size_t>(total));
  for (int i = 0; i < total; ++i) order[static_cast<std::size_t>(i)] = i;
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    const double sa = facets[static_cast<std::size_t>(a)].offset - facets[static_cast<std::size_t>(a)].normal.dot(d0);
    const double sb = facets[static_cast<std::size_t>(b)].offset - facets[static_cast<std::size_t>(b)].normal.dot(d0);
    return sa < sb || (sa == sb && a < b);
  });
  std::vector<char> active(static_cast<std::size_t>(total), 0);
  const int initial = std::min(total, std::max(4 * nvars, 2 * n + 2));
  for (int i = 0; i < initial; ++i) active[static_cast<std::size_t>(order[static_cast<std::size_t>(i)])] = 1;

  const double feas_tol = 1e-12 * std::max(1.0, p.scale());
  int newton = 0;
  while (true) {
    std::vector<Vec> normals;
    std::vector<double> offsets;
    for (int i = 0; i < total; ++i)
      if (active[static_cast<std::size_t>(i)]) {
        normals.push_back(facets[static_cast<std::size_t>(i)].normal);
        offsets.push_back(facets[static_cast<std::size_t>(i)].offset);
      }
    const JohnBarrier problem(n, symmetric, std::move(normals), std::move(offsets));
    const BarrierPath path = follow_path(problem, problem.pack(Mat(0.9 * r0 * Mat::Identity(n, n)), d0), tol);
    newton += path.newton;
    const Mat a = problem.matrix(path.x);
    const Vec d = problem.center(path.x);
    std::vector<std::pair<double, int>> violated;
    for (int i = 0; i < total; ++i) {
      if (active[static_cast<std::size_t>(i)]) continue;
      const auto& f = facets[static_cast<std::size_t>(i)];
      const double s = f.offset - f.normal.dot(d) - (a * f.normal).norm();
      if (s < feas_tol) violated.emplace_back(s, i);
    }
    if (violated.empty()) {
      const int m = problem.facets();
      EllipsoidResult out;
      out.ellipsoid = {Mat(a * a), d};
      out.position.transform = det_normalize(a.inverse());
      out.position.translation = d;
      out.position.residual = std::max(m * path.mu, problem.decomposition_residual(path.x, path.mu));
      out.position.iterations = newton;
      out.position.converged = m * path.mu <= tol * (1 + 1e-12);
      out.position.objective = out.ellipsoid.volume();
      return out;
    }
    std::sort(violated.begin(), violated.end());
    const std::size_t add = std::min(violated.size(), static_cast<std::size_t>(std::max(2 * nvars, 16)));
    for (std::size_t i = 0; i < add; ++i) active[static_cast<std::size_t>(violated[i].second)] = 1;
  }
}

PositionResult min_mean_width_position(const Polytope& p, int samples, int steps, RngSeed seed) {
  const int n = p.dim();
  const auto dirs = sample_sphere(n, samples, seed);
  Eigen::MatrixXd theta(n, samples);
  for (int j = 0; j < samples; ++j) theta.col(j) = dirs[static_cast<std::size_t>(j)];
  const Eigen::MatrixXd& v = p.vertices();

  auto evaluate = [&](const Mat& t, Mat* grad) {
    const Eigen::MatrixXd tv = t * v;
    const Eigen::MatrixXd dots = theta.transpose() * tv;  // samples x vertices
    double sum = 0.0;
    if (grad) grad->setZero(n, n);
    for (int j = 0; j < samples; ++j) {
      Eigen::Index best = 0;
      sum += dots.row(j).maxCoeff(&best);
      if (grad) *grad += theta.col(j) * v.col(best).transpose();
    }
    if (grad) *grad /= samples;
    return sum / samples;
  };

  PositionResult out;
  Mat t = Mat::Identity(n, n);
  Mat g(n, n);
  double f = evaluate(t, &g);
  out.trace.push_back(f);
  double step = 0.25;
  int it = 0;
  for (; it < steps; ++it) {
    const Mat gt = g * t.transpose();
    Mat h = 0.5 * (gt + gt.transpose());
    h -= (h.trace() / n) * Mat::Identity(n, n);
    const double hn = h.norm();
    if (hn <= 1e-12 * f) {
      out.converged = true;
      break;
    }
    const Mat dir = h / hn;
    const double slope = (gt.cwiseProduct(dir)).sum();
    bool accepted = false;
    for (double s = std::min(1.0, 2.0 * step); s >= 1e-10; s *= 0.5) {
      const Mat cand = det_normalize(sym_exp(-s * dir) * t);
      Mat gc(n, n);
      const double fc = evaluate(cand, &gc);
      if (fc <= f - 1e-4 * s * slope && fc < f) {
        t = cand;
        f = fc;
        g = gc;
        step = s;
        accepted = true;
        break;
      }
    }
    if (!accepted) {
      out.converged = true;
      break;
    }
    out.trace.push_back(f);
  }
  // Condition of the minimal mean width position on the sample set.
  const Eigen::MatrixXd dots = theta.transpose() * (t * v);
  Mat moment = Mat::Zero(n, n);
  double w = 0.0;
  for (int j = 0; j < samples; ++j) {
    const double h = dots.row(j).maxCoeff();
    w += h;
    moment += h * theta.col(j) * theta.col(j).transpose();
  }
  w /= samples;
  moment *= static_cast<double>(n) / samples;
  Eigen::SelfAdjointEigenSolver<Mat> es(moment / w - Mat::Identity(n, n));
  out.residual = es.eigenvalues().cwiseAbs().maxCoeff();
  out.transform = t;
  out.translation = Vec::Zero(n);
  out.objective = f;
  out.iterations = it;
  return out;
}

double volume_ratio(const Polytope& p) {
  const EllipsoidResult j = john_position(p);
  return std::pow(p.volume() / j.ellipsoid.volume(), 1.0 / p.dim());
}

double outer_volume_ratio(const Polytope& p) { return volume_ratio(polar(p)); }

}  // namespace shadowgeom
