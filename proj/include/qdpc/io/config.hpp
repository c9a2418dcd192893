#pragma once

// Run configuration: a flat `key = value` document with `#` comments.
// Dimensioned keys carry their unit in the name (w_d_nm, Gamma_load_per_ns).

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "qdpc/device.hpp"
#include "qdpc/numerics/radau.hpp"

namespace qdpc::io {

enum class Experiment { kRates, kDynamics, kSteady, kIv, kSweepGammaX, kSweepGeometry };
enum class ModelSelection { kCoupled, kUncoupled, kBoth };

std::string_view to_string(Experiment e);
std::string_view to_string(ModelSelection m);
Experiment parse_experiment(std::string_view text);
ModelSelection parse_models(std::string_view text);

/// A grid written either as an explicit list "a,b,c" or generated as
/// "log:lo:hi:n" / "lin:lo:hi:n".
struct GridSpec {
  enum class Kind { kList, kLog, kLinear };

  Kind kind = Kind::kList;
  double lo = 0.0;
  double hi = 0.0;
  std::size_t count = 0;
  std::vector<double> list;

  static GridSpec log(double lo, double hi, std::size_t n) { return {Kind::kLog, lo, hi, n, {}}; }
  static GridSpec linear(double lo, double hi, std::size_t n) { return {Kind::kLinear, lo, hi, n, {}}; }
  static GridSpec of(std::vector<double> values) { return {Kind::kList, 0, 0, 0, std::move(values)}; }

  std::vector<double> values() const;
  bool operator==(const GridSpec&) const = default;
};

struct RunConfig {
  DeviceParams device{};
  SolverConfig solver{};
  Experiment experiment = Experiment::kIv;
  ModelSelection models = ModelSelection::kBoth;
  std::string output = "qdcell_";
  bool parallel = true;

  double t_end_ns = 200.0;
  double first_checkpoint_ns = 1e-6;
  std::size_t checkpoints = 60;

  GridSpec load_grid = GridSpec::log(1e-4, 1e9, 60);
  GridSpec gamma_x_multipliers = GridSpec::of({0.01, 0.1, 0.5, 1.0, 2.0, 4.0});
  GridSpec d_perp_grid = GridSpec::linear(1.0, 4.0, 8);
  GridSpec w_br_grid = GridSpec::linear(0.2, 1.5, 8);

  bool operator==(const RunConfig&) const = default;
};

/// Strict parse; omitted keys keep their defaults. Throws ParseError,
/// UnknownKey or UnitMismatch.
RunConfig parse_config(std::string_view text);

/// Applies one `key = value` assignment, as from a `--set` flag.
void apply_setting(RunConfig& cfg, std::string_view key, std::string_view value, int line = 0);

/// Every key with its resolved value; parse_config(serialize_config(c)) == c.
std::string serialize_config(const RunConfig& cfg);

/// FNV-1a 64 of the serialized config, as 16 hex digits.
std::string config_hash(const RunConfig& cfg);

/// Shortest text that reads back to exactly `v`.
std::string format_double(double v);

}  // namespace qdpc::io
