#pragma once

#include "shadowgeom/bodies.hpp"
#include "shadowgeom/positions.hpp"
#include "shadowgeom/quermass.hpp"

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace shadowgeom {

enum class CheckStatus { kPass, kFail, kInconclusive, kSkipped, kError };
const char* to_string(CheckStatus status);

enum class BodyClass {
  kAny,
  kZonoid,
  /// Evaluated on images of the body under the named position maps.
  kPositioned,
  /// Only for ball-approx(N) bodies.
  kBallApprox,
};
const char* to_string(BodyClass body_class);

enum class BoundKind { kUpper, kLower, kEquality };
const char* to_string(BoundKind bound);

struct CheckSpec {
  std::string id;
  /// Short name of the claim being checked.
  std::string anchor;
  BodyClass body_class = BodyClass::kAny;
  std::string claim;
};

/// Every check id in catalog order.
const std::vector<CheckSpec>& check_catalog();
/// nullptr when the id is unknown.
const CheckSpec* find_check(std::string_view id);
std::vector<std::string> all_check_ids();

struct SuiteOptions {
  /// Sphere samples for cheap integrands; the Grassmannian and nested
  /// estimators use fixed fractions of this budget.
  int samples = 20000;
  double tol = 0.05;
  /// Restrict k and p ranges to a single value when >= 0.
  int k = -1;
  int p = -1;
  int jobs = 1;

  int grass_samples() const;
  int hull_samples() const;
  int outer_samples() const;
  int search_screen() const;
};

/// Decides the status of `lhs <= rhs` (upper), `lhs >= rhs` (lower) or
/// `lhs == rhs` (equality) from the estimates and their standard errors.
CheckStatus decide(BoundKind bound, const Estimate& lhs, const Estimate& rhs, double tol,
                   double equality_tol = 0.0);

struct CaseResult {
  std::string label;
  BoundKind bound = BoundKind::kUpper;
  Estimate lhs;
  Estimate rhs;
  double ratio = 0.0;
  CheckStatus status = CheckStatus::kPass;
};

struct CheckResult {
  std::string id;
  std::string body;
  int n = 0;
  BoundKind bound = BoundKind::kUpper;
  /// Sides of the deciding (worst) case.
  Estimate lhs;
  Estimate rhs;
  double ratio = 0.0;
  CheckStatus status = CheckStatus::kSkipped;
  std::vector<CaseResult> cases;
  /// Measured constants and diagnostics.
  std::map<std::string, double> values;
  std::map<std::string, std::string> notes;
};

/// A corpus entry: a named body (parameters and seed live in the name) or a
/// body file.
struct BodySpec {
  std::string name;
  int dim = 3;
  std::string path;

  Body build() const;
  std::string key() const;
};

std::vector<BodySpec> default_corpus_specs(int dim, int random_count = 5);

/// Per-body cache of derived quantities shared by all checks on that body.
class BodyContext {
 public:
  BodyContext(Body body, std::uint64_t seed, const SuiteOptions& options);
  ~BodyContext();
  BodyContext(const BodyContext&) = delete;
  BodyContext& operator=(const BodyContext&) = delete;

  const Body& body() const;
  int dim() const;
  const SuiteOptions& options() const;
  RngSeed seed(std::string_view quantity) const;

  struct Impl;
  Impl& impl() const;

 private:
  std::unique_ptr<Impl> impl_;
};

bool admissible(const CheckSpec& spec, const Body& body);

CheckResult run_check(const CheckSpec& spec, BodyContext& context, std::uint64_t seed);
CheckResult run_check(const CheckSpec& spec, const BodySpec& body, std::uint64_t seed,
                      const SuiteOptions& options = {});

struct SuiteReport {
  std::uint64_t seed = 0;
  SuiteOptions options;
  std::vector<CheckResult> results;

  int count(CheckStatus status) const;
  bool any_fail() const { return count(CheckStatus::kFail) > 0; }
};

/// Cross product of admissible (check, body) cells. Cells run on up to
/// options.jobs threads; the report does not depend on the thread count.
SuiteReport run_suite(const std::vector<BodySpec>& corpus, const std::vector<std::string>& ids,
                      std::uint64_t seed, const SuiteOptions& options = {});

std::string report_json(const SuiteReport& report);
std::string report_csv(const SuiteReport& report);
/// Ratio lhs/rhs against n, one panel per check id.
std::string report_svg(const SuiteReport& report);
/// Rebuilds a report from its JSON text (used by the plot command).
SuiteReport report_from_json(const std::string& text);

struct SearchStep {
  int evaluation = 0;
  double ratio = 0.0;
  /// Body document (vrep or zonotope) of the candidate.
  std::string body_json;
};

struct SearchTrace {
  std::string id;
  std::string family;
  int n = 0;
  int budget = 0;
  /// Best-so-far after each improvement; ratios are non-decreasing.
  std::vector<SearchStep> steps;
  double best_ratio = 0.0;
};

/// Ratio lhs/rhs of a search target on a single body.
double search_ratio(const std::string& id, const Body& body, std::uint64_t seed);

/// Elitist (1+1) evolution strategy maximising lhs/rhs over a body family.
SearchTrace extremizer_search(const std::string& id, const std::string& family, int n, int budget,
                              std::uint64_t seed);
std::string search_json(const SearchTrace& trace);

}  // namespace shadowgeom
