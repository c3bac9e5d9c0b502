#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "finsler/flatness.hpp"
#include "finsler/geodesics.hpp"
#include "finsler/metric.hpp"
#include "finsler/sampling.hpp"

namespace finsler {

inline constexpr const char* kToolName = "finslerlab";
inline constexpr const char* kToolVersion = FINSLERLAB_VERSION;

/// A DSL-defined metric as given on the command line.
struct ExprRequest {
  std::string source;
  MetricKind kind = MetricKind::Complex;
  int dim = 2;
  std::vector<std::string> param_names;
  std::vector<double> param_values;
};

/// Either a zoo name with parameter overrides, or a DSL expression.
struct MetricRequest {
  std::string zoo_name;
  Params overrides;
  std::optional<ExprRequest> expr;
  int dim = 2;
};

MetricField resolve_metric(const MetricRequest& req);

/// Parses "a=1,b=2" (or a single "a=1") into named values; UsageError on malformed input.
Params parse_assignments(const std::string& text);
/// Parses "1,2.5,-3" into doubles.
std::vector<double> parse_number_list(const std::string& text);

struct Tolerances {
  double homog = 1e-9;
  double posdef = 1e-12;
  double flat = 1e-8;
  double nonflat = 1e-4;
  double fd = 1e-5;
};

enum class CheckVerdict { Pass, Fail, Inconclusive, Skipped };
std::string to_string(CheckVerdict v);

struct ReportEntry {
  std::string name;
  double max_abs = 0.0;
  double max_rel = 0.0;
  double tolerance = 0.0;
  CheckVerdict verdict = CheckVerdict::Skipped;
  std::string note;  // meaning of the statistic, or why the check was skipped
};

struct ResidualReport {
  std::string metric;
  Params params;
  MetricKind kind = MetricKind::Real;
  int dim = 0;
  SampleSpec spec;
  std::vector<ReportEntry> entries;
  std::string classification;
  int sample_errors = 0;
  std::string first_error;
  std::optional<double> wall_time_s;

  bool all_pass() const;
};

struct CheckOptions {
  SampleSpec spec;
  Tolerances tol;
  bool fd_check = false;
};

/// Runs every applicable check on a metric. Per-sample numeric failures are
/// counted in sample_errors rather than thrown.
ResidualReport cmd_check(const MetricField& metric, const CheckOptions& opts);

struct RigidityRow {
  Params params;
  RigiditySummary summary;
  CheckVerdict verdict = CheckVerdict::Inconclusive;
};

struct RigidityTable {
  std::string metric;
  MetricKind kind = MetricKind::Complex;
  int dim = 0;
  SampleSpec spec;
  std::vector<std::string> swept;  // parameter names varied across rows
  std::vector<RigidityRow> rows;

  bool all_pass() const;
};

/// One parameter of a sweep with its values.
struct Sweep {
  std::string param;
  std::vector<double> values;
};

/// Cartesian product over `sweeps` (in order) applied on top of req.overrides.
RigidityTable cmd_rigidity(const MetricRequest& req, const std::vector<Sweep>& sweeps, const SampleSpec& spec,
                           const RigidityOptions& opts = {});

std::string cmd_list();

nlohmann::ordered_json to_json(const ResidualReport& r);
nlohmann::ordered_json to_json(const RigidityTable& t);
std::string to_text(const ResidualReport& r);
std::string to_text(const RigidityTable& t);

/// CSV with header t,x_1..x_m,u_1..u_m; numbers in shortest round-trip form.
std::string to_csv(const GeodesicTrace& trace);
std::string summary_line(const GeodesicTrace& trace);

/// Shortest decimal that round-trips to the same double.
std::string format_number(double v);

}  // namespace finsler
