// Acceptance criteria runner: prints one PASS/FAIL line per criterion.
#include "cli.hpp"
#include "shadowgeom/harness.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/QR>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <sstream>
#include <thread>

using namespace shadowgeom;

namespace {

struct Verdict {
  bool pass;
  std::string detail;
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

int worker_count() { return static_cast<int>(std::max(1u, std::thread::hardware_concurrency())); }

Verdict full_suite() {
  SuiteOptions options;
  options.jobs = worker_count();
  std::string detail;
  int fails = 0;
  int errors = 0;
  for (int n : {3, 4, 5}) {
    const SuiteReport report = run_suite(default_corpus_specs(n), all_check_ids(), 0, options);
    fails += report.count(CheckStatus::kFail);
    errors += report.count(CheckStatus::kError);
    detail += "n=" + std::to_string(n) + ": pass " + std::to_string(report.count(CheckStatus::kPass)) + ", skipped " +
              std::to_string(report.count(CheckStatus::kSkipped)) + ", inconclusive " +
              std::to_string(report.count(CheckStatus::kInconclusive)) + ", fail " +
              std::to_string(report.count(CheckStatus::kFail));
    for (const auto& r : report.results)
      if (r.status == CheckStatus::kFail || r.status == CheckStatus::kError)
        detail += " [" + r.id + " on " + r.body + " " + to_string(r.status) + " ratio " + fmt("%.4f", r.ratio) + "]";
    detail += "; ";
  }
  return {fails == 0 && errors == 0, detail};
}

Verdict ball_equality() {
  const CheckResult r = run_check(*find_check("BALL-EQ"), BodySpec{"ball-approx(2000)", 3, {}}, 0);
  return {r.status == CheckStatus::kPass,
          "T-HYPER-2 ratio " + fmt("%.5f", r.ratio) + " (target [0.93, 1]); ratio against b_n S " +
              fmt("%.5f", r.values.count("sharp_ratio") ? r.values.at("sharp_ratio") : NAN)};
}

Verdict cube_quermass() {
  const Polytope cube = make_named_body("cube", 3).polytope;
  bool ok = true;
  std::string detail;
  const double expected[] = {0.0, 8.0, 2.0 * std::numbers::pi};
  for (int p : {1, 2}) {
    const Estimate e = quermassintegral(cube, p, 20000, RngSeed{0, 0}.derive("acceptance").derive(p));
    const double diff = std::abs(e.mean - expected[p]);
    const bool within = diff <= 3.0 * e.std_error + 1e-12 * expected[p];
    const bool precise = e.std_error / e.mean < 0.02;
    ok = ok && within && precise;
    detail += "p=" + std::to_string(p) + ": " + fmt("%.6f", e.mean) + " +- " + fmt("%.2g", e.std_error) +
              " vs " + fmt("%.6f", expected[p]) + "; ";
  }
  return {ok, detail};
}

Verdict cauchy_kubota() {
  const Polytope cube = make_named_body("cube", 4).polytope;
  const int n = 4;
  std::vector<double> shadows;
  for (const auto& xi : sample_sphere(n, 20000, RngSeed{0, 0}.derive("acceptance-shadows")))
    shadows.push_back(project(cube, SubspaceBasis::hyperplane(xi)).volume());
  const Estimate mean = mc_estimate(shadows);
  const double factor = n * omega(n) / omega(n - 1);
  const double s_mc = factor * mean.mean;
  const double err = factor * mean.std_error;
  const double s = surface_measure(cube).total();
  return {std::abs(s_mc - s) <= 4.0 * err && std::abs(s - 64.0) <= 1e-9,
          "exact S = " + fmt("%.9g", s) + ", shadow estimate " + fmt("%.5f", s_mc) + " +- " + fmt("%.3g", err)};
}

Verdict zonotope_volumes() {
  std::mt19937_64 engine(20240501);
  std::normal_distribution<double> normal;
  int agree = 0;
  double worst = 0.0;
  for (int t = 0; t < 50; ++t) {
    const int n = 2 + t % 4;
    const int m = n + static_cast<int>(engine() % static_cast<std::uint64_t>(9 - n));
    Points g(n, m);
    for (int j = 0; j < m; ++j)
      for (int i = 0; i < n; ++i) g(i, j) = normal(engine);
    const Zonotope z(Vec::Zero(n), g);
    const double a = zonotope_volume(z);
    const double b = zonotope_to_polytope(z).volume();
    const double rel = std::abs(a - b) / std::max(a, b);
    worst = std::max(worst, rel);
    if (rel <= 1e-9) ++agree;
  }
  return {agree == 50, std::to_string(agree) + "/50 agree, worst relative gap " + fmt("%.2e", worst)};
}

Verdict projection_identity() {
  int pass = 0;
  int total = 0;
  double worst = 0.0;
  std::string bad;
  for (int n : {3, 4})
    for (int s = 0; s < 10; ++s) {
      const BodySpec body{"random-hull(" + std::to_string(n + 5) + "," + std::to_string(100 + s) + ")", n, {}};
      const CheckResult r = run_check(*find_check("ZON-VOL-ID"), body, 0);
      ++total;
      if (r.status == CheckStatus::kPass) {
        ++pass;
        worst = std::max(worst, std::abs(r.ratio - 1.0));
      } else {
        bad += " " + body.name + "@" + std::to_string(n) + ":" + to_string(r.status);
      }
    }
  return {pass == total, std::to_string(pass) + "/" + std::to_string(total) + " within 1e-8, worst gap " +
                             fmt("%.2e", worst) + bad};
}

Mat random_map(int n, std::mt19937_64& engine) {
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> logs(0.0, std::log(10.0));
  auto orthogonal = [&] {
    Eigen::MatrixXd a(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) a(i, j) = normal(engine);
    return Eigen::MatrixXd(Eigen::HouseholderQR<Eigen::MatrixXd>(a).householderQ());
  };
  Eigen::VectorXd s(n);
  for (int i = 0; i < n; ++i) s(i) = std::exp(logs(engine));
  s(0) = 1.0;
  const Eigen::MatrixXd t = orthogonal() * s.asDiagonal() * orthogonal();
  return t;
}

Verdict min_surface_recovery() {
  const Polytope cube = make_named_body("cube", 3).polytope;
  const Polytope cross = make_named_body("cross", 3).polytope;
  std::vector<std::pair<std::string, Polytope>> cases;
  std::vector<double> targets;
  Mat d = Mat::Identity(3, 3);
  d(0, 0) = 4.0;
  cases.emplace_back("cube diag(4,1,1)", transform(cube, d));
  targets.push_back(6.0);
  std::mt19937_64 engine(7);
  const double cross_partial = cross.surface_area() / std::pow(cross.volume(), 2.0 / 3.0);
  for (int i = 0; i < 10; ++i) {
    cases.emplace_back("cube map", transform(cube, random_map(3, engine)));
    targets.push_back(6.0);
    cases.emplace_back("cross map", transform(cross, random_map(3, engine)));
    targets.push_back(cross_partial);
  }
  int ok = 0;
  double worst_gap = 0.0, worst_res = 0.0;
  int worst_iter = 0;
  for (std::size_t i = 0; i < cases.size(); ++i) {
    const MinSurfaceResult r = minimal_surface_position(cases[i].second);
    const double gap = std::abs(r.partial - targets[i]);
    worst_gap = std::max(worst_gap, gap);
    worst_res = std::max(worst_res, r.position.residual);
    worst_iter = std::max(worst_iter, r.position.iterations);
    if (gap <= 1e-3 && r.position.residual < 1e-6 && r.position.iterations <= 500) ++ok;
  }
  return {ok == static_cast<int>(cases.size()),
          std::to_string(ok) + "/" + std::to_string(cases.size()) + " recovered; worst gap " + fmt("%.2e", worst_gap) +
              ", worst residual " + fmt("%.2e", worst_res) + ", most iterations " + std::to_string(worst_iter)};
}

Verdict certificates() {
  bool ok = true;
  std::string detail;
  for (const char* name : {"cube", "cross"}) {
    const MinSurfaceResult r = minimal_surface_position(make_named_body(name, 3).polytope);
    const double off = (r.position.transform - Mat::Identity(3, 3)).norm();
    ok = ok && r.position.residual <= 1e-10 && off <= 1e-10;
    detail += std::string(name) + " residual " + fmt("%.1e", r.position.residual) + " |T-I| " + fmt("%.1e", off) + "; ";
  }
  const IsotropicResult iso = isotropic_position(make_named_body("unit-cube", 3).polytope);
  const double gap = std::abs(iso.L_K - 1.0 / std::sqrt(12.0));
  ok = ok && gap <= 1e-10;
  detail += "unit cube L_K " + fmt("%.12f", iso.L_K) + " (gap " + fmt("%.1e", gap) + ")";
  return {ok, detail};
}

double radius_gap(const Ellipsoid& e, double radius) {
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(Eigen::MatrixXd(e.shape));
  double gap = e.center.norm();
  for (int i = 0; i < es.eigenvalues().size(); ++i)
    gap = std::max(gap, std::abs(std::sqrt(es.eigenvalues()(i)) - radius));
  return gap;
}

Verdict ellipsoids() {
  const Polytope cube = make_named_body("cube", 3).polytope;
  const double outer = radius_gap(lowner_position(cube, 1e-7).ellipsoid, std::sqrt(3.0));
  const double inner = radius_gap(john_position(cube).ellipsoid, 1.0);
  return {outer <= 1e-5 && inner <= 1e-5,
          "Lowner radius gap " + fmt("%.2e", outer) + ", John radius gap " + fmt("%.2e", inner)};
}

Verdict minimal_projection() {
  bool ok = true;
  std::string detail;
  for (const char* name : {"cube", "cross"}) {
    const CheckResult r = run_check(*find_check("MINPROJ"), BodySpec{name, 3, {}}, 0);
    const bool has = !r.cases.empty();
    const double lhs = has ? r.cases.front().lhs.mean : NAN;
    const double rhs = has ? r.cases.front().rhs.mean : NAN;
    const double rel = std::abs(lhs - rhs) / std::abs(rhs);
    ok = ok && has && rel <= 1e-6;
    if (std::string(name) == "cube") ok = ok && std::abs(lhs - 4.0) <= 1e-9;
    detail += std::string(name) + ": min " + fmt("%.10g", lhs) + " vs r(Pi K) " + fmt("%.10g", rhs) + "; ";
  }
  return {ok, detail};
}

Verdict aleksandrov_chain() {
  SuiteOptions options;
  options.tol = 0.0;
  options.jobs = worker_count();
  const SuiteReport report = run_suite(default_corpus_specs(4), {"ALEK"}, 0, options);
  int violations = 0;
  int inconclusive = 0;
  int cases = 0;
  for (const auto& r : report.results) {
    if (r.status == CheckStatus::kError) ++violations;
    for (const auto& c : r.cases) {
      ++cases;
      if (c.status == CheckStatus::kFail || c.status == CheckStatus::kError) ++violations;
      if (c.status == CheckStatus::kInconclusive) ++inconclusive;
    }
  }
  return {violations == 0, std::to_string(report.results.size()) + " bodies, " + std::to_string(cases) +
                               " comparisons, " + std::to_string(violations) + " violations, " +
                               std::to_string(inconclusive) + " inconclusive"};
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

Verdict determinism() {
  const auto dir = std::filesystem::temp_directory_path() / "shadowgeom_acceptance";
  std::filesystem::create_directories(dir);
  std::ostringstream sink;
  for (const char* name : {"first", "second"}) {
    const std::vector<std::string> args{"verify", "--dim", "3", "--corpus", "default", "--seed", "0",
                                        "--out", (dir / (std::string(name) + ".json")).string()};
    shadowgeom::cli::run(args, sink, sink);
  }
  const std::string j1 = slurp(dir / "first.json"), j2 = slurp(dir / "second.json");
  const std::string c1 = slurp(dir / "first.csv"), c2 = slurp(dir / "second.csv");
  const bool ok = !j1.empty() && !c1.empty() && j1 == j2 && c1 == c2;
  return {ok, "JSON " + std::to_string(j1.size()) + " bytes " + (j1 == j2 ? "identical" : "differ") + ", CSV " +
                  std::to_string(c1.size()) + " bytes " + (c1 == c2 ? "identical" : "differ")};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria{
      {"full suite at n = 3, 4, 5 has zero failures", full_suite},
      {"ball approximant equality case", ball_equality},
      {"cube quermassintegrals", cube_quermass},
      {"Cauchy-Kubota surface of the 4-cube", cauchy_kubota},
      {"zonotope volume equivalence", zonotope_volumes},
      {"projection body volume identity", projection_identity},
      {"minimal surface position recovery", min_surface_recovery},
      {"Petty and isotropy certificates", certificates},
      {"Lowner and John ellipsoids of the cube", ellipsoids},
      {"minimal projection equals projection body inradius", minimal_projection},
      {"Aleksandrov chain at n = 4", aleksandrov_chain},
      {"verify determinism", determinism},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto start = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = criteria[i].second();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (!v.pass) ++failed;
    std::printf("%s criterion %zu: %s (%.1fs) -- %s\n", v.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(),
                secs, v.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
