#include "cli.hpp"

#include "shadowgeom/harness.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace shadowgeom::cli {

namespace {

std::string fmt9(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

std::string fmt_estimate(const Estimate& e) {
  if (e.exact) return fmt9(e.mean);
  return fmt9(e.mean) + " +- " + fmt9(e.std_error) + " (" + std::to_string(e.n_samples) + " samples)";
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw GeometryError(ErrorKind::kIo, "cannot write '" + path + "'");
  f << text;
  if (!f) throw GeometryError(ErrorKind::kIo, "failed writing '" + path + "'");
}

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw GeometryError(ErrorKind::kIo, "cannot open '" + path + "'");
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

struct BodyArgs {
  std::string name = "cube";
  std::string file;
  int dim = 3;

  Body build() const { return file.empty() ? make_named_body(name, dim) : load_body_file(file); }
};

void add_body_options(CLI::App* cmd, BodyArgs& b) {
  cmd->add_option("--body", b.name, "Named body, e.g. cube, cross, simplex, ball-approx(500), random-hull(12,3)");
  cmd->add_option("--body-file", b.file, "Body file (vrep, hrep, zonotope or named JSON)");
  cmd->add_option("--dim", b.dim, "Ambient dimension")->check(CLI::Range(2, kMaxDim));
}

std::string corpus_dir(const std::string& path) {
  const auto slash = path.find_last_of('/');
  return slash == std::string::npos ? std::string() : path.substr(0, slash + 1);
}

std::vector<BodySpec> load_corpus(const std::string& corpus, const std::vector<int>& dims) {
  std::vector<BodySpec> out;
  if (corpus == "default") {
    for (int d : dims)
      for (auto& b : default_corpus_specs(d)) out.push_back(std::move(b));
    return out;
  }
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(read_file(corpus));
  } catch (const nlohmann::json::exception& e) {
    throw GeometryError(ErrorKind::kIo, std::string("invalid corpus file: ") + e.what());
  }
  const nlohmann::json& list = doc.is_array() ? doc : doc.at("bodies");
  const std::string base = corpus_dir(corpus);
  for (const auto& item : list) {
    if (item.is_string()) {
      for (int d : dims) out.push_back({item.get<std::string>(), d, {}});
      continue;
    }
    BodySpec spec;
    spec.name = item.value("name", std::string());
    if (item.contains("path")) {
      spec.path = item.at("path").get<std::string>();
      if (!spec.path.empty() && spec.path.front() != '/') spec.path = base + spec.path;
      spec.dim = spec.path.empty() ? 0 : load_body_file(spec.path).dim();
      out.push_back(spec);
    } else if (item.contains("dim")) {
      spec.dim = item.at("dim").get<int>();
      out.push_back(spec);
    } else {
      for (int d : dims) out.push_back({spec.name, d, {}});
    }
  }
  return out;
}

std::vector<std::string> split_ids(const std::string& text) {
  if (text.empty() || text == "all") return all_check_ids();
  std::vector<std::string> ids;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ','))
    if (!tok.empty()) ids.push_back(tok);
  return ids;
}

std::string replace_extension(const std::string& path, const std::string& ext) {
  const auto slash = path.find_last_of('/');
  const auto dot = path.find_last_of('.');
  if (dot == std::string::npos || (slash != std::string::npos && dot < slash)) return path + ext;
  return path.substr(0, dot) + ext;
}

void print_matrix(std::ostream& out, const char* label, const Mat& m) {
  out << label << ":\n";
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    out << " ";
    for (Eigen::Index j = 0; j < m.cols(); ++j) out << ' ' << fmt9(m(i, j));
    out << '\n';
  }
}

int cmd_bodies(const BodyArgs& b, bool show, const std::string& out_path, std::ostream& out) {
  if (!show) {
    out << "default corpus for n = " << b.dim << ":\n";
    for (const auto& name : default_corpus(b.dim)) out << "  " << name << '\n';
    out << "families: cube, unit-cube, cross, simplex, ball-approx(N), random-hull(N,seed), "
           "random-zonotope(m,seed), perturbed-cube(eps,seed)\n";
    return 0;
  }
  const Body body = b.build();
  const Polytope& p = body.polytope;
  out << "name: " << body.name << '\n'
      << "dim: " << body.dim() << '\n'
      << "vertices: " << p.num_vertices() << '\n'
      << "facets: " << p.facets().size() << '\n'
      << "volume: " << fmt9(p.volume()) << '\n'
      << "surface: " << fmt9(p.surface_area()) << '\n'
      << "zonoid: " << (body.is_zonoid() ? "yes" : "no") << '\n'
      << "symmetric: " << (body.symmetric ? "yes" : "no") << '\n';
  if (!out_path.empty()) write_file(out_path, body_to_json(body) + "\n");
  return 0;
}

int cmd_compute(const BodyArgs& b, const std::string& quantity, int pindex, int k, int samples, std::uint64_t seed,
                std::ostream& out) {
  const Body body = b.build();
  const Polytope& p = body.polytope;
  const RngSeed rs = RngSeed{seed, 0}.derive("compute").derive(quantity);
  if (quantity == "volume") {
    out << fmt9(volume(p)) << '\n';
  } else if (quantity == "surface") {
    out << fmt9(surface_measure(p).total()) << '\n';
  } else if (quantity == "inradius") {
    out << fmt9(inradius(p).radius) << '\n';
  } else if (quantity == "circumradius") {
    out << fmt9(circumradius(p)) << '\n';
  } else if (quantity == "mean-width") {
    out << fmt_estimate(mean_width(p, samples, rs)) << '\n';
  } else if (quantity == "vrad") {
    out << fmt9(vrad(p)) << '\n';
  } else if (quantity == "quermass") {
    if (pindex < 1) throw CLI::ValidationError("--p", "quermass needs --p in [1, n-1]");
    out << fmt_estimate(quermassintegral(p, pindex, samples, rs)) << '\n';
  } else if (quantity == "partial") {
    out << fmt9(minimal_surface_position(p).partial) << '\n';
  } else if (quantity == "pk") {
    if (k < 1) throw CLI::ValidationError("--k", "pk needs --k in [1, n-1]");
    out << fmt_estimate(p_k(p, k, samples, rs)) << '\n';
  } else {
    throw CLI::ValidationError("--quantity", "unknown quantity '" + quantity + "'");
  }
  return 0;
}

int cmd_position(const BodyArgs& b, const std::string& kind, int samples, std::uint64_t seed,
                 const std::string& out_path, std::ostream& out) {
  const Body body = b.build();
  const Polytope& p = body.polytope;
  PositionResult pos;
  std::vector<std::pair<std::string, double>> extra;
  std::optional<Ellipsoid> ellipsoid;
  if (kind == "min-surface") {
    const MinSurfaceResult r = minimal_surface_position(p);
    pos = r.position;
    extra.emplace_back("partial", r.partial);
  } else if (kind == "isotropic") {
    const IsotropicResult r = isotropic_position(p);
    pos = r.position;
    extra.emplace_back("L_K", r.L_K);
  } else if (kind == "john" || kind == "lowner") {
    const EllipsoidResult r = kind == "john" ? john_position(p) : lowner_position(p);
    pos = r.position;
    ellipsoid = r.ellipsoid;
    extra.emplace_back("ellipsoid_volume", r.ellipsoid.volume());
    extra.emplace_back(kind == "john" ? "volume_ratio" : "outer_volume_ratio",
                       kind == "john" ? std::pow(p.volume() / r.ellipsoid.volume(), 1.0 / p.dim())
                                      : std::pow(r.ellipsoid.volume() / p.volume(), 1.0 / p.dim()));
  } else if (kind == "min-mean-width") {
    pos = min_mean_width_position(p, samples, 200, RngSeed{seed, 0}.derive("position"));
    extra.emplace_back("mean_width", pos.objective);
  } else {
    throw CLI::ValidationError("--kind", "unknown position '" + kind + "'");
  }
  out << "kind: " << kind << '\n'
      << "residual: " << fmt9(pos.residual) << '\n'
      << "iterations: " << pos.iterations << '\n'
      << "converged: " << (pos.converged ? "yes" : "no") << '\n';
  for (const auto& [k, v] : extra) out << k << ": " << fmt9(v) << '\n';
  print_matrix(out, "transform", pos.transform);
  print_matrix(out, "translation", pos.translation.transpose());
  if (ellipsoid) {
    print_matrix(out, "ellipsoid shape", ellipsoid->shape);
    print_matrix(out, "ellipsoid center", ellipsoid->center.transpose());
  }
  if (!out_path.empty()) {
    Body moved;
    moved.name = body.name + "@" + kind;
    moved.polytope = pos.apply(p);
    write_file(out_path, body_to_json(moved) + "\n");
  }
  return 0;
}

int cmd_verify(const std::vector<int>& dims, const std::string& corpus, const std::string& ids_text,
               const std::string& out_path, std::string csv_path, const SuiteOptions& options, std::uint64_t seed,
               bool quiet, std::ostream& out) {
  const auto bodies = load_corpus(corpus, dims);
  const auto ids = split_ids(ids_text);
  for (const auto& id : ids)
    if (!find_check(id)) throw CLI::ValidationError("--ids", "unknown check id '" + id + "'");
  const SuiteReport report = run_suite(bodies, ids, seed, options);
  if (!out_path.empty()) {
    write_file(out_path, report_json(report));
    if (csv_path.empty()) csv_path = replace_extension(out_path, ".csv");
  }
  if (!csv_path.empty()) write_file(csv_path, report_csv(report));
  for (const auto& r : report.results) {
    if (quiet && (r.status == CheckStatus::kPass || r.status == CheckStatus::kSkipped)) continue;
    out << r.id << ' ' << r.body << " n=" << r.n << ' ' << to_string(r.status);
    if (r.status != CheckStatus::kSkipped && r.status != CheckStatus::kError) out << " ratio=" << fmt9(r.ratio);
    if (auto it = r.notes.find("error"); it != r.notes.end()) out << " (" << it->second << ')';
    out << '\n';
  }
  out << "summary:";
  for (CheckStatus s : {CheckStatus::kPass, CheckStatus::kFail, CheckStatus::kInconclusive, CheckStatus::kSkipped,
                        CheckStatus::kError})
    out << ' ' << to_string(s) << '=' << report.count(s);
  out << '\n';
  return report.any_fail() ? 1 : 0;
}

int cmd_search(const std::string& id, const std::string& family, int dim, int budget, std::uint64_t seed,
               const std::string& out_path, std::ostream& out) {
  const SearchTrace trace = extremizer_search(id, family, dim, budget, seed);
  for (const auto& s : trace.steps) out << "evaluation " << s.evaluation << " ratio " << fmt9(s.ratio) << '\n';
  out << "best ratio: " << fmt9(trace.best_ratio) << '\n';
  if (!out_path.empty()) write_file(out_path, search_json(trace));
  return 0;
}

int cmd_plot(const std::string& report_path, const std::string& out_path, std::ostream& out) {
  const SuiteReport report = report_from_json(read_file(report_path));
  const std::string svg = report_svg(report);
  if (out_path.empty())
    out << svg;
  else
    write_file(out_path, svg);
  return 0;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Convex-geometry computations and inequality verification"};
  app.name("shadowgeom");
  app.require_subcommand(1);

  BodyArgs body;
  std::uint64_t seed = 0;
  int samples = 20000;
  double tol = 0.05;
  std::string out_path;

  auto* bodies = app.add_subcommand("bodies", "List the default corpus or describe and export one body");
  bool show = false;
  add_body_options(bodies, body);
  bodies->add_option("--out", out_path, "Write the body as a JSON body file");
  bodies->callback([&] { show = bodies->count("--body") + bodies->count("--body-file") > 0; });

  auto* compute = app.add_subcommand("compute", "Evaluate one quantity of a body");
  std::string quantity;
  int pindex = 0;
  int kdim = 0;
  add_body_options(compute, body);
  compute->add_option("--quantity", quantity,
                      "volume, surface, inradius, circumradius, mean-width, vrad, quermass, partial, pk")
      ->required();
  compute->add_option("--p", pindex, "Index p of the quermassintegral V_(n-p)");
  compute->add_option("--k", kdim, "Subspace dimension for pk");
  compute->add_option("--samples", samples, "Monte Carlo samples")->check(CLI::PositiveNumber);
  compute->add_option("--seed", seed, "Random seed");

  auto* position = app.add_subcommand("position", "Bring a body into a classical position");
  std::string kind = "min-surface";
  add_body_options(position, body);
  position->add_option("--kind", kind, "min-surface, isotropic, john, lowner, min-mean-width");
  position->add_option("--samples", samples, "Direction samples for min-mean-width")->check(CLI::PositiveNumber);
  position->add_option("--seed", seed, "Random seed");
  position->add_option("--out", out_path, "Write the positioned body as a JSON body file");

  auto* verify = app.add_subcommand("verify", "Run the check catalog over a corpus");
  std::vector<int> dims{3};
  std::string corpus = "default";
  std::string ids = "all";
  std::string csv_path;
  int jobs = 1;
  int only_k = -1;
  int only_p = -1;
  bool quiet = false;
  verify->add_option("--dim", dims, "Dimensions (comma separated)")
      ->delimiter(',')
      ->check(CLI::Range(2, kMaxDim));
  verify->add_option("--corpus", corpus, "'default' or a JSON corpus file");
  verify->add_option("--ids", ids, "Comma-separated check ids or 'all'");
  verify->add_option("--out", out_path, "JSON report path (CSV written alongside)");
  verify->add_option("--csv", csv_path, "CSV report path");
  verify->add_option("--samples", samples, "Sphere samples per estimate")->check(CLI::PositiveNumber);
  verify->add_option("--tol", tol, "Relative tolerance of the bounds")->check(CLI::Range(0.0, 1.0));
  verify->add_option("--seed", seed, "Random seed");
  verify->add_option("--jobs", jobs, "Parallel cells")->check(CLI::PositiveNumber);
  verify->add_option("--k", only_k, "Restrict k-indexed checks to one k");
  verify->add_option("--p", only_p, "Restrict p-indexed checks to one p");
  verify->add_flag("--quiet", quiet, "Only print cells that did not pass");

  auto* search = app.add_subcommand("search", "Evolutionary search for near-extremal bodies");
  std::string search_id = "GHP";
  std::string family = "random-hull";
  int search_dim = 3;
  int budget = 200;
  search->add_option("--id", search_id, "GHP, T-HYPER-1, T-HYPER-2, T-ZON-2 or T-LOWER-MIN");
  search->add_option("--family", family, "random-hull, random-zonotope, perturbed-cube or unconditional-hull");
  search->add_option("--dim", search_dim, "Ambient dimension")->check(CLI::Range(2, kMaxDim));
  search->add_option("--budget", budget, "Number of ratio evaluations")->check(CLI::PositiveNumber);
  search->add_option("--seed", seed, "Random seed");
  search->add_option("--out", out_path, "JSON trace path");

  auto* plot = app.add_subcommand("plot", "Plot ratios of a report against dimension as SVG");
  std::string report_path;
  plot->add_option("--report", report_path, "JSON report written by verify")->required();
  plot->add_option("--out", out_path, "SVG output path (stdout when omitted)");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n' << "run 'shadowgeom --help' for usage\n";
    return 2;
  }

  try {
    if (bodies->parsed()) return cmd_bodies(body, show, out_path, out);
    if (compute->parsed()) return cmd_compute(body, quantity, pindex, kdim, samples, seed, out);
    if (position->parsed()) return cmd_position(body, kind, samples, seed, out_path, out);
    if (verify->parsed()) {
      SuiteOptions options;
      options.samples = samples;
      options.tol = tol;
      options.jobs = jobs;
      options.k = only_k;
      options.p = only_p;
      return cmd_verify(dims, corpus, ids, out_path, csv_path, options, seed, quiet, out);
    }
    if (search->parsed()) return cmd_search(search_id, family, search_dim, budget, seed, out_path, out);
    if (plot->parsed()) return cmd_plot(report_path, out_path, out);
  } catch (const CLI::Error& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }
  err << "error: no subcommand\n";
  return 2;
}

}  // namespace shadowgeom::cli
