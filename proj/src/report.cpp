#include "shadowgeom/harness.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <set>
#include <sstream>

namespace shadowgeom {

namespace {

using nlohmann::ordered_json;

std::string fmt9(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

ordered_json number(double v) {
  if (!std::isfinite(v)) return nullptr;
  return v;
}

double from_number(const ordered_json& j) { return j.is_null() ? NAN : j.get<double>(); }

ordered_json estimate_json(const Estimate& e) {
  ordered_json j;
  j["value"] = number(e.mean);
  j["stderr"] = number(e.std_error);
  j["samples"] = e.n_samples;
  j["exact"] = e.exact;
  return j;
}

Estimate estimate_from(const ordered_json& j) {
  Estimate e;
  e.mean = from_number(j.at("value"));
  e.std_error = from_number(j.at("stderr"));
  e.n_samples = j.at("samples").get<std::int64_t>();
  e.exact = j.at("exact").get<bool>();
  return e;
}

CheckStatus status_from(const std::string& s) {
  for (CheckStatus c : {CheckStatus::kPass, CheckStatus::kFail, CheckStatus::kInconclusive, CheckStatus::kSkipped,
                        CheckStatus::kError})
    if (s == to_string(c)) return c;
  throw GeometryError(ErrorKind::kIo, "unknown status '" + s + "' in report");
}

BoundKind bound_from(const std::string& s) {
  for (BoundKind b : {BoundKind::kUpper, BoundKind::kLower, BoundKind::kEquality})
    if (s == to_string(b)) return b;
  throw GeometryError(ErrorKind::kIo, "unknown bound '" + s + "' in report");
}

const char* status_colour(CheckStatus s) {
  switch (s) {
    case CheckStatus::kPass: return "#2e7d32";
    case CheckStatus::kFail: return "#c62828";
    case CheckStatus::kInconclusive: return "#f9a825";
    case CheckStatus::kError: return "#6a1b9a";
    case CheckStatus::kSkipped: return "#9e9e9e";
  }
  return "#000000";
}

std::string fixed(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

}  // namespace

std::string report_json(const SuiteReport& report) {
  ordered_json doc;
  doc["seed"] = report.seed;
  ordered_json opt;
  opt["samples"] = report.options.samples;
  opt["tol"] = report.options.tol;
  opt["grassmann_samples"] = report.options.grass_samples();
  opt["hull_shadow_samples"] = report.options.hull_samples();
  opt["nested_outer_samples"] = report.options.outer_samples();
  opt["nested_inner_samples"] = 1;
  opt["search_screen"] = report.options.search_screen();
  doc["options"] = opt;
  ordered_json summary;
  for (CheckStatus s : {CheckStatus::kPass, CheckStatus::kFail, CheckStatus::kInconclusive, CheckStatus::kSkipped,
                        CheckStatus::kError})
    summary[to_string(s)] = report.count(s);
  doc["summary"] = summary;
  ordered_json results = ordered_json::array();
  for (const auto& r : report.results) {
    ordered_json j;
    j["id"] = r.id;
    j["body"] = r.body;
    j["n"] = r.n;
    j["status"] = to_string(r.status);
    j["bound"] = to_string(r.bound);
    j["lhs"] = estimate_json(r.lhs);
    j["rhs"] = estimate_json(r.rhs);
    j["ratio"] = number(r.ratio);
    ordered_json cases = ordered_json::array();
    for (const auto& c : r.cases) {
      ordered_json cj;
      cj["label"] = c.label;
      cj["bound"] = to_string(c.bound);
      cj["status"] = to_string(c.status);
      cj["lhs"] = estimate_json(c.lhs);
      cj["rhs"] = estimate_json(c.rhs);
      cj["ratio"] = number(c.ratio);
      cases.push_back(cj);
    }
    j["cases"] = cases;
    ordered_json values = ordered_json::object();
    for (const auto& [k, v] : r.values) values[k] = number(v);
    j["values"] = values;
    ordered_json notes = ordered_json::object();
    for (const auto& [k, v] : r.notes) notes[k] = v;
    j["notes"] = notes;
    results.push_back(j);
  }
  doc["results"] = results;
  return doc.dump(2) + "\n";
}

SuiteReport report_from_json(const std::string& text) {
  SuiteReport report;
  try {
    const ordered_json doc = ordered_json::parse(text);
    report.seed = doc.at("seed").get<std::uint64_t>();
    const auto& opt = doc.at("options");
    report.options.samples = opt.at("samples").get<int>();
    report.options.tol = opt.at("tol").get<double>();
    for (const auto& j : doc.at("results")) {
      CheckResult r;
      r.id = j.at("id").get<std::string>();
      r.body = j.at("body").get<std::string>();
      r.n = j.at("n").get<int>();
      r.status = status_from(j.at("status").get<std::string>());
      r.bound = bound_from(j.at("bound").get<std::string>());
      r.lhs = estimate_from(j.at("lhs"));
      r.rhs = estimate_from(j.at("rhs"));
      r.ratio = from_number(j.at("ratio"));
      for (const auto& cj : j.at("cases")) {
        CaseResult c;
        c.label = cj.at("label").get<std::string>();
        c.bound = bound_from(cj.at("bound").get<std::string>());
        c.status = status_from(cj.at("status").get<std::string>());
        c.lhs = estimate_from(cj.at("lhs"));
        c.rhs = estimate_from(cj.at("rhs"));
        c.ratio = from_number(cj.at("ratio"));
        r.cases.push_back(c);
      }
      for (const auto& [k, v] : j.at("values").items()) r.values[k] = from_number(v);
      for (const auto& [k, v] : j.at("notes").items()) r.notes[k] = v.get<std::string>();
      report.results.push_back(std::move(r));
    }
  } catch (const nlohmann::json::exception& e) {
    throw GeometryError(ErrorKind::kIo, std::string("malformed report: ") + e.what());
  }
  return report;
}

std::string report_csv(const SuiteReport& report) {
  std::ostringstream out;
  out << "id,body,n,lhs,lhs_err,rhs,rhs_err,ratio,status\n";
  for (const auto& r : report.results) {
    std::string body = r.body;
    if (body.find_first_of(",\"") != std::string::npos) {
      std::string quoted = "\"";
      for (char ch : body) quoted += ch == '"' ? std::string("\"\"") : std::string(1, ch);
      body = quoted + "\"";
    }
    out << r.id << ',' << body << ',' << r.n << ',' << fmt9(r.lhs.mean) << ',' << fmt9(r.lhs.std_error) << ','
        << fmt9(r.rhs.mean) << ',' << fmt9(r.rhs.std_error) << ',' << fmt9(r.ratio) << ',' << to_string(r.status)
        << '\n';
  }
  return out.str();
}

std::string report_svg(const SuiteReport& report) {
  std::vector<std::string> ids;
  std::map<std::string, std::vector<const CheckResult*>> by_id;
  int nmin = 1 << 30;
  int nmax = -1;
  for (const auto& r : report.results) {
    if (r.status == CheckStatus::kSkipped || !std::isfinite(r.ratio)) continue;
    if (!by_id.count(r.id)) ids.push_back(r.id);
    by_id[r.id].push_back(&r);
    nmin = std::min(nmin, r.n);
    nmax = std::max(nmax, r.n);
  }
  const int cols = 4;
  const double pw = 260.0, ph = 190.0, ml = 44.0, mr = 12.0, mt = 26.0, mb = 30.0;
  const int rows = std::max(1, (static_cast<int>(ids.size()) + cols - 1) / cols);
  const double width = cols * pw, height = rows * ph + 30.0;
  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fixed(width) << "\" height=\"" << fixed(height)
      << "\" font-family=\"sans-serif\" font-size=\"10\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<text x=\"8\" y=\"18\" font-size=\"13\">lhs/rhs against dimension (dashed: ratio 1)</text>\n";
  if (ids.empty()) {
    out << "</svg>\n";
    return out.str();
  }
  if (nmin == nmax) {
    --nmin;
    ++nmax;
  }
  for (std::size_t i = 0; i < ids.size(); ++i) {
    const auto& cells = by_id[ids[i]];
    const double ox = static_cast<double>(i % cols) * pw;
    const double oy = 30.0 + static_cast<double>(i / cols) * ph;
    double ymax = 1.2;
    for (const auto* r : cells) ymax = std::max(ymax, std::min(r->ratio, 10.0) * 1.05);
    const double x0 = ox + ml, x1 = ox + pw - mr, y0 = oy + ph - mb, y1 = oy + mt;
    auto px = [&](double n) { return x0 + (n - nmin) / (nmax - nmin) * (x1 - x0); };
    auto py = [&](double v) { return y0 - std::clamp(v, 0.0, ymax) / ymax * (y0 - y1); };
    out << "<g>\n<text x=\"" << fixed(ox + ml) << "\" y=\"" << fixed(oy + 16) << "\" font-size=\"12\">" << ids[i]
        << "</text>\n";
    out << "<rect x=\"" << fixed(x0) << "\" y=\"" << fixed(y1) << "\" width=\"" << fixed(x1 - x0) << "\" height=\""
        << fixed(y0 - y1) << "\" fill=\"none\" stroke=\"#444\"/>\n";
    out << "<line x1=\"" << fixed(x0) << "\" y1=\"" << fixed(py(1.0)) << "\" x2=\"" << fixed(x1) << "\" y2=\""
        << fixed(py(1.0)) << "\" stroke=\"#888\" stroke-dasharray=\"4 3\"/>\n";
    for (int n = nmin; n <= nmax; ++n)
      out << "<text x=\"" << fixed(px(n)) << "\" y=\"" << fixed(y0 + 14) << "\" text-anchor=\"middle\">" << n
          << "</text>\n";
    for (double t : {0.0, ymax / 2, ymax})
      out << "<text x=\"" << fixed(x0 - 4) << "\" y=\"" << fixed(py(t) + 3) << "\" text-anchor=\"end\">" << fmt9(std::round(t * 100) / 100)
          << "</text>\n";
    std::map<int, double> top;
    for (const auto* r : cells) {
      top[r->n] = top.count(r->n) ? std::max(top[r->n], r->ratio) : r->ratio;
      out << "<circle cx=\"" << fixed(px(r->n)) << "\" cy=\"" << fixed(py(r->ratio)) << "\" r=\"2.5\" fill=\""
          << status_colour(r->status) << "\" fill-opacity=\"0.7\"/>\n";
    }
    if (top.size() > 1) {
      out << "<polyline fill=\"none\" stroke=\"#1565c0\" points=\"";
      bool first = true;
      for (const auto& [n, v] : top) {
        out << (first ? "" : " ") << fixed(px(n)) << ',' << fixed(py(v));
        first = false;
      }
      out << "\"/>\n";
    }
    out << "</g>\n";
  }
  out << "</svg>\n";
  return out.str();
}

}  // namespace shadowgeom
