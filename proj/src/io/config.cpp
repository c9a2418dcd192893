#include "qdpc/io/config.hpp"

#include <array>
#include <charconv>
#include <cstdio>
#include <cstdint>
#include <functional>
#include <set>
#include <sstream>

#include "qdpc/errors.hpp"
#include "qdpc/observables.hpp"

namespace qdpc::io {

std::string_view to_string(Experiment e) {
  switch (e) {
    case Experiment::kRates:
      return "rates";
    case Experiment::kDynamics:
      return "dynamics";
    case Experiment::kSteady:
      return "steady";
    case Experiment::kIv:
      return "iv";
    case Experiment::kSweepGammaX:
      return "sweep-gamma-x";
    case Experiment::kSweepGeometry:
      return "sweep-geometry";
  }
  return "?";
}

std::string_view to_string(ModelSelection m) {
  switch (m) {
    case ModelSelection::kCoupled:
      return "coupled";
    case ModelSelection::kUncoupled:
      return "uncoupled";
    case ModelSelection::kBoth:
      return "both";
  }
  return "?";
}

Experiment parse_experiment(std::string_view text) {
  for (auto e : {Experiment::kRates, Experiment::kDynamics, Experiment::kSteady, Experiment::kIv,
                 Experiment::kSweepGammaX, Experiment::kSweepGeometry}) {
    if (text == to_string(e)) return e;
  }
  throw ParseError(0, "experiment", "unknown experiment '" + std::string(text) + "'");
}

ModelSelection parse_models(std::string_view text) {
  for (auto m : {ModelSelection::kCoupled, ModelSelection::kUncoupled, ModelSelection::kBoth}) {
    if (text == to_string(m)) return m;
  }
  throw ParseError(0, "model", "expected coupled, uncoupled or both, got '" + std::string(text) + "'");
}

std::string format_double(double v) {
  std::array<char, 32> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), res.ptr);
}

std::vector<double> GridSpec::values() const {
  switch (kind) {
    case Kind::kLog:
      return log_grid(lo, hi, count);
    case Kind::kLinear:
      return linear_grid(lo, hi, count);
    case Kind::kList:
      break;
  }
  return list;
}

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double parse_number(std::string_view text, int line, std::string_view key) {
  text = trim(text);
  double v = 0.0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (res.ec != std::errc{} || res.ptr != text.data() + text.size() || text.empty()) {
    throw ParseError(line, std::string(key), "expected a number, got '" + std::string(text) + "'");
  }
  return v;
}

long parse_integer(std::string_view text, int line, std::string_view key) {
  text = trim(text);
  long v = 0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (res.ec != std::errc{} || res.ptr != text.data() + text.size() || text.empty()) {
    throw ParseError(line, std::string(key), "expected an integer, got '" + std::string(text) + "'");
  }
  return v;
}

std::size_t parse_count(std::string_view text, int line, std::string_view key) {
  const long v = parse_integer(text, line, key);
  if (v < 1) throw ParseError(line, std::string(key), "expected a positive count");
  return static_cast<std::size_t>(v);
}

bool parse_bool(std::string_view text, int line, std::string_view key) {
  text = trim(text);
  if (text == "true") return true;
  if (text == "false") return false;
  throw ParseError(line, std::string(key), "expected true or false");
}

GridSpec parse_grid(std::string_view text, int line, std::string_view key) {
  text = trim(text);
  for (auto [prefix, kind] : {std::pair{std::string_view("log:"), GridSpec::Kind::kLog},
                              std::pair{std::string_view("lin:"), GridSpec::Kind::kLinear}}) {
    if (!text.starts_with(prefix)) continue;
    std::string_view rest = text.substr(prefix.size());
    std::array<std::string_view, 3> parts{};
    for (int i = 0; i < 2; ++i) {
      const auto colon = rest.find(':');
      if (colon == std::string_view::npos) {
        throw ParseError(line, std::string(key), "generated grid must read <log|lin>:lo:hi:count");
      }
      parts[i] = rest.substr(0, colon);
      rest = rest.substr(colon + 1);
    }
    parts[2] = rest;
    GridSpec g{kind, parse_number(parts[0], line, key), parse_number(parts[1], line, key),
               parse_count(parts[2], line, key), {}};
    if (!(g.hi >= g.lo) || (kind == GridSpec::Kind::kLog && !(g.lo > 0.0))) {
      throw ParseError(line, std::string(key), "invalid grid bounds");
    }
    return g;
  }
  std::vector<double> values;
  while (!text.empty()) {
    const auto comma = text.find(',');
    values.push_back(parse_number(text.substr(0, comma), line, key));
    if (comma == std::string_view::npos) break;
    text = text.substr(comma + 1);
  }
  if (values.empty()) throw ParseError(line, std::string(key), "empty grid");
  return GridSpec::of(std::move(values));
}

std::string format_grid(const GridSpec& g) {
  switch (g.kind) {
    case GridSpec::Kind::kLog:
      return "log:" + format_double(g.lo) + ":" + format_double(g.hi) + ":" + std::to_string(g.count);
    case GridSpec::Kind::kLinear:
      return "lin:" + format_double(g.lo) + ":" + format_double(g.hi) + ":" + std::to_string(g.count);
    case GridSpec::Kind::kList:
      break;
  }
  std::string out;
  for (std::size_t i = 0; i < g.list.size(); ++i) {
    if (i > 0) out += ",";
    out += format_double(g.list[i]);
  }
  return out;
}

struct Key {
  std::string_view name;
  // Name without its unit suffix; empty for dimensionless keys.
  std::string_view base;
  std::function<void(RunConfig&, std::string_view, int)> set;
  std::function<std::string(const RunConfig&)> get;
};


template <typename Member>
Key device_real(std::string_view name, std::string_view base, Member member) {
  return {name, base,
          [name, member](RunConfig& c, std::string_view v, int line) { c.device.*member = parse_number(v, line, name); },
          [member](const RunConfig& c) { return format_double(c.device.*member); }};
}

template <typename Member>
Key solver_real(std::string_view name, std::string_view base, Member member) {
  return {name, base,
          [name, member](RunConfig& c, std::string_view v, int line) { c.solver.*member = parse_number(v, line, name); },
          [member](const RunConfig& c) { return format_double(c.solver.*member); }};
}

template <typename Member>
Key grid_key(std::string_view name, std::string_view base, Member member) {
  return {name, base,
          [name, member](RunConfig& c, std::string_view v, int line) { c.*member = parse_grid(v, line, name); },
          [member](const RunConfig& c) { return format_grid(c.*member); }};
}

const std::vector<Key>& keys() {
  static const std::vector<Key> table = [] {
    std::vector<Key> k;
    k.push_back(device_real("E_g_eV", "E_g", &DeviceParams::band_gap_eV));
    k.push_back(device_real("delta_E_c_eV", "delta_E_c", &DeviceParams::conduction_offset_eV));
    k.push_back(device_real("delta_E_v_eV", "delta_E_v", &DeviceParams::valence_offset_eV));
    k.push_back(device_real("m_e_eff", "", &DeviceParams::electron_mass));
    k.push_back(device_real("m_h_eff", "", &DeviceParams::hole_mass));
    k.push_back(device_real("eps_r", "", &DeviceParams::permittivity));
    k.push_back(device_real("w_d_nm", "w_d", &DeviceParams::dot_width_nm));
    k.push_back(device_real("F_d_V_per_nm", "F_d", &DeviceParams::dot_field_V_per_nm));
    k.push_back(device_real("F_br_V_per_nm", "F_br", &DeviceParams::barrier_field_V_per_nm));
    k.push_back(device_real("chi", "", &DeviceParams::recombination_fraction));
    k.push_back(device_real("T_a_K", "T_a", &DeviceParams::temperature_K));
    k.push_back(device_real("E_1b_eV", "E_1b", &DeviceParams::exciton_energy_eV));
    k.push_back(device_real("n_h", "", &DeviceParams::photon_occupation));
    k.push_back(device_real("w_br_nm", "w_br", &DeviceParams::barrier_width_nm));
    k.push_back(device_real("d_perp_nm", "d_perp", &DeviceParams::dot_spacing_nm));
    k.push_back(device_real("dipole_fraction", "", &DeviceParams::dipole_fraction));
    k.push_back(device_real("E_star_eV", "E_star", &DeviceParams::escape_energy_eV));
    k.push_back(device_real("Gamma_load_per_ns", "Gamma_load", &DeviceParams::load_rate_per_ns));
    k.push_back({"gamma_x_multiplier", "",
                 [](RunConfig& c, std::string_view v, int line) {
                   c.device.phonon_rate.multiplier = parse_number(v, line, "gamma_x_multiplier");
                 },
                 [](const RunConfig& c) { return format_double(c.device.phonon_rate.multiplier); }});
    // gamma_x is either the symbolic "2J" rule or an explicit gamma_x_per_ns.
    k.push_back({"gamma_x", "",
                 [](RunConfig& c, std::string_view v, int line) {
                   if (trim(v) != "2J") throw UnitMismatch(line, "gamma_x", "gamma_x = 2J or gamma_x_per_ns");
                   c.device.phonon_rate.mode = PhononRateSpec::Mode::kTwoJ;
                   c.device.phonon_rate.explicit_per_ns = 0.0;
                 },
                 nullptr});
    k.push_back({"gamma_x_per_ns", "",
                 [](RunConfig& c, std::string_view v, int line) {
                   c.device.phonon_rate.mode = PhononRateSpec::Mode::kExplicit;
                   c.device.phonon_rate.explicit_per_ns = parse_number(v, line, "gamma_x_per_ns");
                 },
                 nullptr});

    k.push_back(solver_real("rel_tol", "", &SolverConfig::rel_tol));
    k.push_back(solver_real("abs_tol", "", &SolverConfig::abs_tol));
    k.push_back(solver_real("max_step_ns", "max_step", &SolverConfig::max_step));
    k.push_back(solver_real("newton_tol", "", &SolverConfig::newton_tol));
    k.push_back({"max_newton_iters", "",
                 [](RunConfig& c, std::string_view v, int line) {
                   c.solver.max_newton_iters = static_cast<int>(parse_integer(v, line, "max_newton_iters"));
                 },
                 [](const RunConfig& c) { return std::to_string(c.solver.max_newton_iters); }});
    k.push_back(solver_real("initial_step_ns", "initial_step", &SolverConfig::initial_step));
    k.push_back({"max_steps", "",
                 [](RunConfig& c, std::string_view v, int line) { c.solver.max_steps = parse_integer(v, line, "max_steps"); },
                 [](const RunConfig& c) { return std::to_string(c.solver.max_steps); }});

    k.push_back({"experiment", "",
                 [](RunConfig& c, std::string_view v, int line) {
                   try {
                     c.experiment = parse_experiment(trim(v));
                   } catch (const ParseError& e) {
                     throw ParseError(line, "experiment", e.what());
                   }
                 },
                 [](const RunConfig& c) { return std::string(to_string(c.experiment)); }});
    k.push_back({"model", "",
                 [](RunConfig& c, std::string_view v, int line) {
                   try {
                     c.models = parse_models(trim(v));
                   } catch (const ParseError& e) {
                     throw ParseError(line, "model", e.what());
                   }
                 },
                 [](const RunConfig& c) { return std::string(to_string(c.models)); }});
    k.push_back({"output", "",
                 [](RunConfig& c, std::string_view v, int) { c.output = std::string(trim(v)); },
                 [](const RunConfig& c) { return c.output; }});
    k.push_back({"parallel", "",
                 [](RunConfig& c, std::string_view v, int line) { c.parallel = parse_bool(v, line, "parallel"); },
                 [](const RunConfig& c) { return std::string(c.parallel ? "true" : "false"); }});
    k.push_back({"t_end_ns", "t_end",
                 [](RunConfig& c, std::string_view v, int line) { c.t_end_ns = parse_number(v, line, "t_end_ns"); },
                 [](const RunConfig& c) { return format_double(c.t_end_ns); }});
    k.push_back({"first_checkpoint_ns", "first_checkpoint",
                 [](RunConfig& c, std::string_view v, int line) {
                   c.first_checkpoint_ns = parse_number(v, line, "first_checkpoint_ns");
                 },
                 [](const RunConfig& c) { return format_double(c.first_checkpoint_ns); }});
    k.push_back({"checkpoints", "",
                 [](RunConfig& c, std::string_view v, int line) { c.checkpoints = parse_count(v, line, "checkpoints"); },
                 [](const RunConfig& c) { return std::to_string(c.checkpoints); }});
    k.push_back(grid_key("load_grid_per_ns", "load_grid", &RunConfig::load_grid));
    k.push_back(grid_key("gamma_x_multipliers", "", &RunConfig::gamma_x_multipliers));
    k.push_back(grid_key("d_perp_grid_nm", "d_perp_grid", &RunConfig::d_perp_grid));
    k.push_back(grid_key("w_br_grid_nm", "w_br_grid", &RunConfig::w_br_grid));
    return k;
  }();
  return table;
}

}  // namespace

void apply_setting(RunConfig& cfg, std::string_view key, std::string_view value, int line) {
  key = trim(key);
  for (const auto& k : keys()) {
    if (k.name == key) {
      k.set(cfg, value, line);
      return;
    }
  }
  for (const auto& k : keys()) {
    if (k.base.empty()) continue;
    if (key == k.base || (key.starts_with(k.base) && key.size() > k.base.size() && key[k.base.size()] == '_')) {
      throw UnitMismatch(line, std::string(key), std::string(k.name));
    }
  }
  throw UnknownKey(line, std::string(key));
}

RunConfig parse_config(std::string_view text) {
  RunConfig cfg;
  std::set<std::string, std::less<>> seen;
  int line_no = 0;
  while (!text.empty()) {
    ++line_no;
    const auto nl = text.find('\n');
    const std::string_view raw = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);

    const std::string_view line = trim(raw);
    if (line.empty() || line.front() == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ParseError(line_no, "", "expected 'key = value'");
    const std::string_view key = trim(line.substr(0, eq));
    const std::string_view value = trim(line.substr(eq + 1));
    if (key.empty()) throw ParseError(line_no, "", "empty key");
    if (!seen.insert(std::string(key)).second) throw ParseError(line_no, std::string(key), "duplicate key");
    apply_setting(cfg, key, value, line_no);
  }
  return cfg;
}

std::string serialize_config(const RunConfig& cfg) {
  std::ostringstream out;
  for (const auto& k : keys()) {
    if (k.name == "gamma_x") {
      if (cfg.device.phonon_rate.mode == PhononRateSpec::Mode::kTwoJ) out << "gamma_x = 2J\n";
      continue;
    }
    if (k.name == "gamma_x_per_ns") {
      if (cfg.device.phonon_rate.mode == PhononRateSpec::Mode::kExplicit) {
        out << "gamma_x_per_ns = " << format_double(cfg.device.phonon_rate.explicit_per_ns) << '\n';
      }
      continue;
    }
    out << k.name << " = " << k.get(cfg) << '\n';
  }
  return out.str();
}

std::string config_hash(const RunConfig& cfg) {
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (unsigned char ch : serialize_config(cfg)) {
    hash ^= ch;
    hash *= 0x100000001b3ULL;
  }
  std::array<char, 17> buf{};
  std::snprintf(buf.data(), buf.size(), "%016llx", static_cast<unsigned long long>(hash));
  return std::string(buf.data(), 16);
}

}  // namespace qdpc::io
