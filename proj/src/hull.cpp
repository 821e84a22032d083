#include "shadowgeom/hull.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_map>

namespace shadowgeom {

double SimplicialHull::volume() const {
  double v = 0.0;
  for (const Facet& f : facets) v += f.area * (f.offset - f.normal.dot(interior));
  return v / dim;
}

double SimplicialHull::surface() const {
  double s = 0.0;
  for (const Facet& f : facets) s += f.area;
  return s;
}

namespace {

double factorial(int k) {
  double r = 1.0;
  for (int i = 2; i <= k; ++i) r *= i;
  return r;
}

struct WorkFacet {
  std::array<int, kMaxDim> v{};
  std::array<int, kMaxDim> nb{};
  Vec normal;
  double offset = 0.0;
  double area = 0.0;
  std::vector<int> outside;
  int far = -1;
  double far_dist = 0.0;
  bool alive = true;
  int visible_stamp = -1;
  int tested_stamp = -1;
};

struct RidgeKey {
  std::array<int, kMaxDim> ids{};
  bool operator==(const RidgeKey& o) const { return ids == o.ids; }
};

struct RidgeKeyHash {
  std::size_t operator()(const RidgeKey& k) const {
    std::size_t h = 1469598103934665603ULL;
    for (int id : k.ids) {
      h ^= static_cast<std::size_t>(id + 1);
      h *= 1099511628211ULL;
    }
    return h;
  }
};

class QuickHull {
 public:
  explicit QuickHull(const Points& pts) : pts_(pts), d_(static_cast<int>(pts.rows())) {}

  SimplicialHull run() {
    const int n_pts = static_cast<int>(pts_.cols());
    if (d_ < 2 || d_ > kMaxDim)
      throw GeometryError(ErrorKind::kInvalidDimension, "hull dimension must be in [2, 8]");
    if (n_pts < d_ + 1) {
      int affine = n_pts == 0 ? -1 : std::min(n_pts - 1, d_);
      if (n_pts > 0) affine = affine_rank();
      throw DegenerateInputError(affine, d_);
    }
    Vec centroid = pts_.rowwise().mean();
    scale_ = 0.0;
    for (int i = 0; i < n_pts; ++i) scale_ = std::max(scale_, (pts_.col(i) - centroid).norm());
    if (scale_ == 0.0) throw DegenerateInputError(0, d_);
    eps_ = kHullRelEps * scale_;

    std::vector<int> simplex = initial_simplex();
    interior_ = Vec::Zero(d_);
    for (int idx : simplex) interior_ += pts_.col(idx);
    interior_ /= static_cast<double>(simplex.size());

    build_initial(simplex);
    assign_initial(simplex);

    std::vector<int> stack;
    for (int f = 0; f < static_cast<int>(facets_.size()); ++f)
      if (!facets_[f].outside.empty()) stack.push_back(f);
    while (!stack.empty()) {
      const int f = stack.back();
      stack.pop_back();
      if (!facets_[f].alive || facets_[f].outside.empty()) continue;
      add_point(f, stack);
    }

    SimplicialHull out;
    out.dim = d_;
    out.scale = scale_;
    out.interior = interior_;
    std::vector<int> remap(facets_.size(), -1);
    int count = 0;
    for (std::size_t i = 0; i < facets_.size(); ++i)
      if (facets_[i].alive) remap[i] = count++;
    out.facets.reserve(static_cast<std::size_t>(count));
    for (const WorkFacet& wf : facets_) {
      if (!wf.alive) continue;
      SimplicialHull::Facet f;
      f.vertices = wf.v;
      for (int i = 0; i < d_; ++i) f.neighbors[i] = remap[static_cast<std::size_t>(wf.nb[i])];
      f.normal = wf.normal;
      f.offset = wf.offset;
      f.area = wf.area;
      out.facets.push_back(std::move(f));
    }
    return out;
  }

 private:
  int affine_rank() const {
    const int n_pts = static_cast<int>(pts_.cols());
    Eigen::MatrixXd diffs(d_, std::max(n_pts - 1, 1));
    diffs.setZero();
    for (int i = 1; i < n_pts; ++i) diffs.col(i - 1) = pts_.col(i) - pts_.col(0);
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(diffs);
    double s = 0.0;
    for (int i = 0; i < n_pts; ++i) s = std::max(s, (pts_.col(i) - pts_.col(0)).norm());
    qr.setThreshold(1e-9);
    return s == 0.0 ? 0 : static_cast<int>(qr.rank());
  }

  std::vector<int> initial_simplex() {
    const int n_pts = static_cast<int>(pts_.cols());
    std::vector<int> chosen;
    int first = 0;
    for (int i = 1; i < n_pts; ++i)
      if (pts_(0, i) < pts_(0, first)) first = i;
    chosen.push_back(first);
    std::vector<Vec> basis;
    const double rank_tol = 1e-9 * scale_;
    while (static_cast<int>(chosen.size()) < d_ + 1) {
      int best = -1;
      double best_norm = rank_tol;
      for (int i = 0; i < n_pts; ++i) {
        Vec r = pts_.col(i) - pts_.col(first);
        for (const Vec& b : basis) r -= r.dot(b) * b;
        const double nr = r.norm();
        if (nr > best_norm) {
          best_norm = nr;
          best = i;
        }
      }
      if (best < 0) throw DegenerateInputError(static_cast<int>(basis.size()), d_);
      Vec r = pts_.col(best) - pts_.col(first);
      for (const Vec& b : basis) r -= r.dot(b) * b;
      // second Gram-Schmidt pass
      for (const Vec& b : basis) r -= r.dot(b) * b;
      basis.push_back(r / r.norm());
      chosen.push_back(best);
    }
    return chosen;
  }

  double distance(const WorkFacet& f, int p) const {
    const double dist = f.normal.dot(pts_.col(p)) - f.offset;
    if (std::abs(dist) > 8.0 * eps_) return dist;
    // Ambiguous band: re-evaluate relative to a facet vertex in extended precision.
    const int base = f.v[0];
    long double acc = 0.0L;
    for (int i = 0; i < d_; ++i)
      acc += static_cast<long double>(f.normal[i]) *
             (static_cast<long double>(pts_(i, p)) - static_cast<long double>(pts_(i, base)));
    return static_cast<double>(acc);
  }

  void set_plane(WorkFacet& f) const {
    Mat m(d_, d_ - 1);
    const auto p0 = pts_.col(f.v[0]);
    for (int j = 1; j < d_; ++j) m.col(j - 1) = pts_.col(f.v[j]) - p0;
    Vec w(d_);
    if (d_ == 2) {
      w << -m(1, 0), m(0, 0);
      f.area = w.norm();
      w /= f.area;
    } else if (d_ == 3) {
      const Eigen::Vector3d a = m.col(0), b = m.col(1);
      const Eigen::Vector3d c = a.cross(b);
      w = c;
      const double nrm = w.norm();
      f.area = nrm / 2.0;
      w /= nrm;
    } else {
      Eigen::HouseholderQR<Mat> qr(m);
      Mat q = qr.householderQ() * Mat::Identity(d_, d_);
      w = q.col(d_ - 1);
      double det = 1.0;
      for (int i = 0; i < d_ - 1; ++i) det *= qr.matrixQR()(i, i);
      f.area = std::abs(det) / factorial(d_ - 1);
      w /= w.norm();
    }
    if (w.dot(interior_ - p0) > 0.0) w = -w;
    f.normal = w;
    f.offset = w.dot(p0);
  }

  void build_initial(const std::vector<int>& simplex) {
    facets_.clear();
    facets_.resize(static_cast<std::size_t>(d_ + 1));
    for (int i = 0; i <= d_; ++i) {
      WorkFacet& f = facets_[static_cast<std::size_t>(i)];
      int pos = 0;
      for (int j = 0; j <= d_; ++j) {
        if (j == i) continue;
        f.v[pos] = simplex[static_cast<std::size_t>(j)];
        f.nb[pos] = j;
        ++pos;
      }
      set_plane(f);
    }
  }

  void consider(WorkFacet& f, int p, double dist) {
    f.outside.push_back(p);
    if (dist > f.far_dist || f.far < 0) {
      f.far_dist = dist;
      f.far = p;
    }
  }

  void assign_initial(const std::vector<int>& simplex) {
    const int n_pts = static_cast<int>(pts_.cols());
    std::vector<char> used(static_cast<std::size_t>(n_pts), 0);
    for (int idx : simplex) used[static_cast<std::size_t>(idx)] = 1;
    for (int p = 0; p < n_pts; ++p) {
      if (used[static_cast<std::size_t>(p)]) continue;
      for (WorkFacet& f : facets_) {
        const double dist = distance(f, p);
        if (dist > eps_) {
          consider(f, p, dist);
          break;
        }
      }
    }
  }

  void add_point(int start, std::vector<int>& stack) {
    ++stamp_;
    const int p = facets_[static_cast<std::size_t>(start)].far;
    std::vector<int> visible{start};
    facets_[static_cast<std::size_t>(start)].visible_stamp = stamp_;
    struct Horizon {
      int facet;
      int slot;
    };
    std::vector<Horizon> horizon;
    for (std::size_t q = 0; q < visible.size(); ++q) {
      const int vf = visible[q];
      for (int j = 0; j < d_; ++j) {
        const int nb = facets_[static_cast<std::size_t>(vf)].nb[j];
        WorkFacet& nf = facets_[static_cast<std::size_t>(nb)];
        if (nf.visible_stamp == stamp_) continue;
        if (nf.tested_stamp != stamp_) {
          nf.tested_stamp = stamp_;
          if (distance(nf, p) > eps_) {
            nf.visible_stamp = stamp_;
            visible.push_back(nb);
            continue;
          }
        }
        horizon.push_back({vf, j});
      }
    }

    std::unordered_map<RidgeKey, std::pair<int, int>, RidgeKeyHash> open;
    std::vector<int> created;
    created.reserve(horizon.size());
    for (const Horizon& h : horizon) {
      const WorkFacet& vf = facets_[static_cast<std::size_t>(h.facet)];
      WorkFacet nf;
      int pos = 0;
      for (int i = 0; i < d_; ++i) {
        if (i == h.slot) continue;
        nf.v[pos++] = vf.v[i];
      }
      nf.v[d_ - 1] = p;
      const int outer = vf.nb[h.slot];
      nf.nb[d_ - 1] = outer;
      set_plane(nf);
      const int id = static_cast<int>(facets_.size());
      WorkFacet& of = facets_[static_cast<std::size_t>(outer)];
      for (int i = 0; i < d_; ++i)
        if (of.nb[i] == h.facet) of.nb[i] = id;
      facets_.push_back(std::move(nf));
      created.push_back(id);
      WorkFacet& made = facets_.back();
      for (int t = 0; t < d_ - 1; ++t) {
        RidgeKey key;
        key.ids.fill(-1);
        int kpos = 0;
        for (int i = 0; i < d_ - 1; ++i)
          if (i != t) key.ids[kpos++] = made.v[i];
        std::sort(key.ids.begin(), key.ids.begin() + kpos);
        auto it = open.find(key);
        if (it == open.end()) {
          open.emplace(key, std::make_pair(id, t));
        } else {
          made.nb[t] = it->second.first;
          facets_[static_cast<std::size_t>(it->second.first)].nb[it->second.second] = id;
          open.erase(it);
        }
      }
    }

    std::vector<int> orphans;
    for (int vf : visible) {
      WorkFacet& f = facets_[static_cast<std::size_t>(vf)];
      f.alive = false;
      for (int q : f.outside)
        if (q != p) orphans.push_back(q);
      f.outside.clear();
      f.outside.shrink_to_fit();
    }
    for (int q : orphans) {
      for (int id : created) {
        WorkFacet& f = facets_[static_cast<std::size_t>(id)];
        const double dist = distance(f, q);
        if (dist > eps_) {
          consider(f, q, dist);
          break;
        }
      }
    }
    for (int id : created)
      if (!facets_[static_cast<std::size_t>(id)].outside.empty()) stack.push_back(id);
  }

  const Points& pts_;
  int d_;
  double scale_ = 0.0;
  double eps_ = 0.0;
  Vec interior_;
  std::vector<WorkFacet> facets_;
  int stamp_ = 0;
};

double cross2(const Eigen::Vector2d& o, const Eigen::Vector2d& a, const Eigen::Vector2d& b) {
  return (a.x() - o.x()) * (b.y() - o.y()) - (a.y() - o.y()) * (b.x() - o.x());
}

ShadowMeasure planar_measure(const Points& points) {
  const int n = static_cast<int>(points.cols());
  std::vector<Eigen::Vector2d> p(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) p[static_cast<std::size_t>(i)] = points.col(i);
  std::sort(p.begin(), p.end(), [](const Eigen::Vector2d& a, const Eigen::Vector2d& b) {
    return a.x() < b.x() || (a.x() == b.x() && a.y() < b.y());
  });
  std::vector<Eigen::Vector2d> h(2 * p.size());
  std::size_t k = 0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    while (k >= 2 && cross2(h[k - 2], h[k - 1], p[i]) <= 0) --k;
    h[k++] = p[i];
  }
  for (std::size_t i = p.size() - 1, t = k + 1; i > 0; --i) {
    while (k >= t && cross2(h[k - 2], h[k - 1], p[i - 1]) <= 0) --k;
    h[k++] = p[i - 1];
  }
  ShadowMeasure m;
  if (k < 4) throw DegenerateInputError(k <= 2 ? 0 : 1, 2);
  for (std::size_t i = 0; i + 1 < k; ++i) {
    m.volume += h[i].x() * h[i + 1].y() - h[i + 1].x() * h[i].y();
    m.surface += (h[i + 1] - h[i]).norm();
  }
  m.volume *= 0.5;
  if (m.volume <= 0.0) throw DegenerateInputError(1, 2);
  return m;
}

}  // namespace

SimplicialHull simplicial_hull(const Points& points) { return QuickHull(points).run(); }

ShadowMeasure hull_measure(const Points& points) {
  const int d = static_cast<int>(points.rows());
  if (points.cols() == 0) throw GeometryError(ErrorKind::kEmptyInput, "hull of no points");
  if (d == 1) {
    const double len = points.maxCoeff() - points.minCoeff();
    if (len <= 0.0) throw DegenerateInputError(0, 1);
    return {len, 2.0};
  }
  if (d == 2) return planar_measure(points);
  const SimplicialHull h = simplicial_hull(points);
  return {h.volume(), h.surface()};
}

}  // namespace shadowgeom
