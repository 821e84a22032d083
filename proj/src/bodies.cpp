#include "shadowgeom/bodies.hpp"

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <regex>
#include <sstream>

namespace shadowgeom {

namespace {

using nlohmann::json;

bool is_symmetric(const Points& v, double scale) {
  const double tol = 1e-9 * std::max(1.0, scale);
  for (Eigen::Index i = 0; i < v.cols(); ++i) {
    bool found = false;
    for (Eigen::Index j = 0; j < v.cols() && !found; ++j) found = (v.col(i) + v.col(j)).norm() <= tol;
    if (!found) return false;
  }
  return true;
}

Points cube_points(int n, double half) {
  Points p(n, 1 << n);
  for (int mask = 0; mask < (1 << n); ++mask)
    for (int i = 0; i < n; ++i) p(i, mask) = (mask >> i) & 1 ? half : -half;
  return p;
}

Points regular_simplex(int n) {
  // Standard basis of R^{n+1} expressed in an orthonormal basis of the hyperplane sum x = 0.
  Mat ones(1, n + 1);
  ones.setOnes();
  const Mat basis = orthocomplement(ones);  // n x (n+1)
  Points p(n, n + 1);
  for (int i = 0; i <= n; ++i) p.col(i) = basis.col(i);
  const Vec c = p.rowwise().mean();
  p.colwise() -= c;
  Mat edges(n, n);
  for (int i = 1; i <= n; ++i) edges.col(i - 1) = p.col(i) - p.col(0);
  double fact = 1.0;
  for (int i = 2; i <= n; ++i) fact *= i;
  const double vol = std::abs(edges.determinant()) / fact;
  return p * std::pow(1.0 / vol, 1.0 / n);
}

Points sphere_pairs(int n, int count, RngSeed seed) {
  const int pairs = (count + 1) / 2;
  const auto dirs = sample_sphere(n, pairs, seed);
  Points p(n, 2 * pairs);
  for (int i = 0; i < pairs; ++i) {
    p.col(2 * i) = dirs[static_cast<std::size_t>(i)];
    p.col(2 * i + 1) = -dirs[static_cast<std::size_t>(i)];
  }
  return p;
}

Body centered_hull_body(const std::string& name, const Points& pts) {
  const Polytope raw = convex_hull(pts);
  const Vec c = centroid_and_covariance(raw).centroid;
  Points shifted = raw.vertices();
  shifted.colwise() -= c;
  return make_body_from_points(name, shifted);
}

struct ParsedName {
  std::string family;
  std::vector<double> args;
};

ParsedName parse_name(const std::string& name) {
  static const std::regex re(R"(^\s*([a-z\-]+)\s*(?:\(([^)]*)\))?\s*$)");
  std::smatch m;
  if (!std::regex_match(name, m, re))
    throw GeometryError(ErrorKind::kInvalidArgument, "cannot parse body name '" + name + "'");
  ParsedName out{m[1].str(), {}};
  if (m[2].matched) {
    std::stringstream ss(m[2].str());
    std::string tok;
    while (std::getline(ss, tok, ',')) {
      try {
        out.args.push_back(std::stod(tok));
      } catch (const std::exception&) {
        throw GeometryError(ErrorKind::kInvalidArgument, "bad argument '" + tok + "' in body name '" + name + "'");
      }
    }
  }
  return out;
}

int int_arg(const ParsedName& p, std::size_t i, int fallback, const std::string& name) {
  if (i >= p.args.size()) return fallback;
  const double v = p.args[i];
  if (v != std::floor(v) || v < 0)
    throw GeometryError(ErrorKind::kInvalidArgument, "body '" + name + "' needs non-negative integer arguments");
  return static_cast<int>(v);
}

Vec to_vec(const json& j, int dim, const char* what) {
  if (!j.is_array() || static_cast<int>(j.size()) != dim)
    throw GeometryError(ErrorKind::kIo, std::string(what) + " must be an array of " + std::to_string(dim) + " numbers");
  Vec v(dim);
  for (int i = 0; i < dim; ++i) v[i] = j[static_cast<std::size_t>(i)].get<double>();
  return v;
}

Points to_points(const json& j, int dim, const char* what) {
  if (!j.is_array() || j.empty()) throw GeometryError(ErrorKind::kIo, std::string(what) + " must be a non-empty array");
  Points p(dim, static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) p.col(static_cast<Eigen::Index>(i)) = to_vec(j[i], dim, what);
  return p;
}

json points_json(const Points& p) {
  json arr = json::array();
  for (Eigen::Index i = 0; i < p.cols(); ++i) {
    json row = json::array();
    for (Eigen::Index r = 0; r < p.rows(); ++r) row.push_back(p(r, i));
    arr.push_back(row);
  }
  return arr;
}

}  // namespace

Body make_body_from_points(const std::string& name, const Points& points) {
  Body b;
  b.name = name;
  b.polytope = convex_hull(points);
  b.symmetric = is_symmetric(b.polytope.vertices(), b.polytope.scale());
  return b;
}

Body make_body_from_zonotope(const std::string& name, const Zonotope& z) {
  Body b;
  b.name = name;
  b.polytope = zonotope_to_polytope(z);
  b.zonotope = z;
  b.symmetric = z.center().norm() <= 1e-12 * std::max(1.0, b.polytope.scale());
  return b;
}

Body make_named_body(const std::string& name, int n) {
  if (n < 2 || n > kMaxDim) throw GeometryError(ErrorKind::kInvalidDimension, "body dimension must be in [2, 8]");
  const ParsedName p = parse_name(name);
  const RngSeed family_seed{0, fnv1a(p.family)};
  if (p.family == "cube") return make_body_from_zonotope(name, Zonotope(Vec::Zero(n), Points::Identity(n, n)));
  if (p.family == "unit-cube")
    return make_body_from_zonotope(name, Zonotope(Vec::Zero(n), Points(0.5 * Points::Identity(n, n))));
  if (p.family == "cross") {
    Points pts(n, 2 * n);
    pts << Points::Identity(n, n), -Points::Identity(n, n);
    return make_body_from_points(name, pts);
  }
  if (p.family == "simplex") return make_body_from_points(name, regular_simplex(n));
  if (p.family == "ball-approx") {
    const int count = int_arg(p, 0, 500, name);
    if (count < 2 * n) throw GeometryError(ErrorKind::kInvalidArgument, "ball-approx needs at least 2n points");
    return make_body_from_points(name, sphere_pairs(n, count, family_seed.derive(static_cast<std::uint64_t>(count))));
  }
  if (p.family == "random-hull") {
    const int count = int_arg(p, 0, 2 * n + 2, name);
    const int seed = int_arg(p, 1, 0, name);
    if (count < n + 1) throw GeometryError(ErrorKind::kInvalidArgument, "random-hull needs at least n+1 points");
    auto engine = make_engine({static_cast<std::uint64_t>(seed), family_seed.stream_id ^ static_cast<std::uint64_t>(n)});
    std::normal_distribution<double> normal;
    Points pts(n, count);
    for (int j = 0; j < count; ++j)
      for (int i = 0; i < n; ++i) pts(i, j) = normal(engine);
    return centered_hull_body(name, pts);
  }
  if (p.family == "random-zonotope") {
    const int m = int_arg(p, 0, n + 3, name);
    const int seed = int_arg(p, 1, 0, name);
    if (m < n) throw GeometryError(ErrorKind::kInvalidArgument, "random-zonotope needs at least n generators");
    auto engine = make_engine({static_cast<std::uint64_t>(seed), family_seed.stream_id ^ static_cast<std::uint64_t>(n)});
    std::normal_distribution<double> normal;
    Points g(n, m);
    for (int j = 0; j < m; ++j)
      for (int i = 0; i < n; ++i) g(i, j) = normal(engine);
    return make_body_from_zonotope(name, Zonotope(Vec::Zero(n), g));
  }
  if (p.family == "perturbed-cube") {
    const double eps = p.args.empty() ? 0.1 : p.args[0];
    const int seed = int_arg(p, 1, 0, name);
    auto engine = make_engine({static_cast<std::uint64_t>(seed), family_seed.stream_id ^ static_cast<std::uint64_t>(n)});
    std::uniform_real_distribution<double> u(-eps, eps);
    Points pts = cube_points(n, 1.0);
    for (Eigen::Index j = 0; j < pts.cols(); ++j)
      for (int i = 0; i < n; ++i) pts(i, j) += u(engine);
    return centered_hull_body(name, pts);
  }
  throw GeometryError(ErrorKind::kInvalidArgument, "unknown body '" + name + "'");
}

Points hrep_vertices(const Eigen::MatrixXd& a, const Eigen::VectorXd& b) {
  const int n = static_cast<int>(a.cols());
  const int m = static_cast<int>(a.rows());
  if (m != b.size() || m < n + 1)
    throw GeometryError(ErrorKind::kInvalidArgument, "hrep needs at least n+1 inequalities with matching offsets");
  // Chebyshev centre from a start with a very negative radius.
  Eigen::MatrixXd lp(m, n + 1);
  Eigen::VectorXd x0 = Eigen::VectorXd::Zero(n + 1);
  double start = INFINITY;
  for (int i = 0; i < m; ++i) {
    const double len = a.row(i).norm();
    if (len == 0.0) throw GeometryError(ErrorKind::kInvalidArgument, "hrep row with zero normal");
    lp.row(i).head(n) = a.row(i);
    lp(i, n) = len;
    start = std::min(start, b[i] / len);
  }
  x0[n] = start - 1.0;
  Eigen::VectorXd c = Eigen::VectorXd::Zero(n + 1);
  c[n] = 1.0;
  const Eigen::VectorXd x = maximize_lp(c, lp, b, x0);
  if (!(x[n] > 0.0)) throw GeometryError(ErrorKind::kDegenerateInput, "hrep polyhedron has empty interior");
  const Vec center = x.head(n);
  Points dual(n, m);
  for (int i = 0; i < m; ++i) dual.col(i) = a.row(i).transpose() / (b[i] - a.row(i).dot(center));
  const Polytope d = convex_hull(dual);
  Points v(n, static_cast<Eigen::Index>(d.facets().size()));
  for (std::size_t i = 0; i < d.facets().size(); ++i)
    v.col(static_cast<Eigen::Index>(i)) = d.facets()[i].normal / d.facets()[i].offset + center;
  return v;
}

Body body_from_json(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw GeometryError(ErrorKind::kIo, std::string("invalid body JSON: ") + e.what());
  }
  try {
    const std::string type = doc.at("type").get<std::string>();
    const int dim = doc.at("dim").get<int>();
    if (dim < 2 || dim > kMaxDim) throw GeometryError(ErrorKind::kInvalidDimension, "body dimension must be in [2, 8]");
    const std::string name = doc.value("name", type);
    if (type == "named") {
      const std::string named = doc.contains("data") ? doc.at("data").get<std::string>() : doc.at("name").get<std::string>();
      Body b = make_named_body(named, dim);
      if (doc.contains("name")) b.name = name;
      return b;
    }
    if (type == "vrep") return make_body_from_points(name, to_points(doc.at("data"), dim, "vrep data"));
    if (type == "hrep") {
      const json& data = doc.at("data");
      const Points rows = to_points(data.at("A"), dim, "hrep A");
      const json& bj = data.at("b");
      Eigen::VectorXd b(static_cast<Eigen::Index>(bj.size()));
      for (std::size_t i = 0; i < bj.size(); ++i) b[static_cast<Eigen::Index>(i)] = bj[i].get<double>();
      return make_body_from_points(name, hrep_vertices(rows.transpose(), b));
    }
    if (type == "zonotope") {
      const json& src = doc.contains("generators") ? doc : doc.at("data");
      const Points g = to_points(src.at("generators"), dim, "generators");
      const Vec c = src.contains("center") ? to_vec(src.at("center"), dim, "center") : Vec(Vec::Zero(dim));
      return make_body_from_zonotope(name, Zonotope(c, g));
    }
    throw GeometryError(ErrorKind::kIo, "unknown body type '" + type + "'");
  } catch (const json::exception& e) {
    throw GeometryError(ErrorKind::kIo, std::string("malformed body file: ") + e.what());
  }
}

Body load_body_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw GeometryError(ErrorKind::kIo, "cannot open body file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return body_from_json(ss.str());
}

std::string body_to_json(const Body& body) {
  json doc;
  doc["name"] = body.name;
  doc["dim"] = body.dim();
  if (body.zonotope) {
    doc["type"] = "zonotope";
    doc["generators"] = points_json(body.zonotope->generators());
    json c = json::array();
    for (int i = 0; i < body.dim(); ++i) c.push_back(body.zonotope->center()[i]);
    doc["center"] = c;
  } else {
    doc["type"] = "vrep";
    doc["data"] = points_json(body.polytope.vertices());
  }
  return doc.dump(2);
}

std::vector<std::string> default_corpus(int dim, int random_count) {
  std::vector<std::string> names{"cube", "cross", "simplex", "ball-approx(500)"};
  for (int s = 0; s < random_count; ++s)
    names.push_back("random-hull(" + std::to_string(2 * dim + 2) + "," + std::to_string(s) + ")");
  for (int s = 0; s < random_count; ++s)
    names.push_back("random-zonotope(" + std::to_string(dim + 3) + "," + std::to_string(s) + ")");
  return names;
}

}  // namespace shadowgeom
