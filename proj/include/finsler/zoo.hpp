#pragma once

#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "finsler/metric.hpp"

namespace finsler {

/// Claimed properties of a zoo metric. Every flag is a claim checked by the test
/// suites; analyzers never read them. Real-side flags of a complex metric refer
/// to its real form F°.
struct ExpectedProperties {
  bool homogeneous_real = false;      // F(x, λu) = λF(x, u), λ > 0
  bool reversible = false;            // F(x, -u) = F(x, u), i.e. |λ|-homogeneous
  bool homogeneous_complex = false;   // F(z, λv) = |λ|F(z, v), λ ∈ C
  bool strongly_convex = false;       // real fundamental tensor positive definite
  bool strongly_pseudoconvex = false; // complex fundamental tensor positive definite
  bool projectively_flat_real = false;
  bool dually_flat_real = false;
  bool complex_pf = false;
  bool complex_df = false;
  bool z_independent = false;         // complex Minkowski
};

struct ZooEntry {
  std::string name;
  MetricKind kind;
  std::string doc;
  Params defaults;
  ExpectedProperties flags;
  std::function<MetricField(int dim, const Params& params)> build;
  /// DSL source equal to the builtin, with parameters referenced by name.
  std::function<std::optional<std::string>(int dim)> dsl;
};

const std::vector<ZooEntry>& zoo_list();

/// Throws UnknownMetric.
const ZooEntry& zoo_find(std::string_view name);

/// Builds a zoo metric with `overrides` applied on top of the defaults. Unknown
/// parameter names and out-of-range values raise UsageError.
MetricField make_zoo_metric(std::string_view name, int dim, const Params& overrides = {});

}  // namespace finsler
