#include "qdpc/io/run.hpp"

#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <string>

#include "json.hpp"

#include "qdpc/errors.hpp"
#include "qdpc/kinetics.hpp"
#include "qdpc/observables.hpp"

namespace qdpc::io {

namespace {

using nlohmann::json;

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream out;
  out << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return out.str();
}

std::string num(double v) { return format_double(v); }

// Keeps free-form failure text from breaking the column layout.
std::string sanitize(std::string text) {
  for (char& ch : text) {
    if (ch == ',' || ch == '\n' || ch == '\r' || ch == '"') ch = ';';
  }
  return text;
}

class Writer {
 public:
  Writer(const RunConfig& cfg, RunOutcome& outcome) : cfg_(cfg), outcome_(outcome), hash_(config_hash(cfg)) {}

  std::ofstream open(const std::string& name, std::string_view description) {
    const std::filesystem::path path = cfg_.output + name;
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot open " + path.string() + " for writing");
    outcome_.files.push_back(path);
    out << "# qdcell " << to_string(cfg_.experiment) << ": " << description << '\n';
    out << "# written " << utc_timestamp() << '\n';
    out << "# config_hash " << hash_ << '\n';
    return out;
  }

  const std::string& hash() const { return hash_; }

 private:
  const RunConfig& cfg_;
  RunOutcome& outcome_;
  std::string hash_;
};

std::vector<ModelKind> selected(ModelSelection m) {
  switch (m) {
    case ModelSelection::kCoupled:
      return {ModelKind::kCoupled};
    case ModelSelection::kUncoupled:
      return {ModelKind::kUncoupled};
    case ModelSelection::kBoth:
      break;
  }
  return {ModelKind::kUncoupled, ModelKind::kCoupled};
}

std::string model_name(ModelKind k) { return std::string(to_string(k)); }

const char* limit_flag(VoltageLimit l) {
  switch (l) {
    case VoltageLimit::kOpenCircuit:
      return "open_circuit";
    case VoltageLimit::kShortCircuit:
      return "short_circuit";
    case VoltageLimit::kNone:
      break;
  }
  return "ok";
}

std::string point_flag(const OperatingPoint& p) {
  if (!p.ok()) return "failed: " + sanitize(p.failure);
  return limit_flag(p.limit);
}

std::string cell_flag(const EnhancementCell& c) {
  if (!c.converged) return "failed: " + sanitize(c.failure);
  return c.peak_on_grid_edge ? "peak_on_grid_edge" : "ok";
}

json point_json(const OperatingPoint& p) {
  return {{"Gamma_load_per_ns", p.load_rate},
          {"V_volts", std::isfinite(p.voltage) ? json(p.voltage) : json(nullptr)},
          {"j_e_per_ns", p.current},
          {"P_eV_per_ns", p.power},
          {"P_sun_eV_per_ns", p.solar_power}};
}

json cell_json(const EnhancementCell& c) {
  json j = {{"converged", c.converged}, {"peak_on_grid_edge", c.peak_on_grid_edge}};
  if (c.converged) {
    j["eta"] = c.eta;
    j["P_max_coupled_eV_per_ns"] = c.coupled_peak;
    j["P_max_uncoupled_eV_per_ns"] = c.uncoupled_peak;
    j["Gamma_peak_coupled_per_ns"] = c.coupled_peak_load;
    j["Gamma_peak_uncoupled_per_ns"] = c.uncoupled_peak_load;
  } else {
    j["failure"] = c.failure;
  }
  return j;
}

struct RateRow {
  const char* name;
  double value;
  const char* unit;
};

std::vector<RateRow> rate_rows(const DerivedRates& r) {
  std::vector<RateRow> rows = {
      {"J", r.coupling_eV, "eV"},
      {"dipole_length", r.dipole_length_nm, "nm"},
      {"gamma_h", r.pump_rate, "per_ns"},
      {"n_h", r.photon_occupation, "1"},
      {"Gamma_beta_b", r.hole_tunnel, "per_ns"},
      {"Gamma_load", r.load_rate, "per_ns"},
      {"chi", r.recombination_fraction, "1"},
      {"E_alpha_minus_E_beta", r.transport_gap_eV, "eV"},
  };
  if (r.kind == ModelKind::kCoupled) {
    rows.push_back({"gamma_x", r.phonon_rate, "per_ns"});
    rows.push_back({"n_x", r.phonon_occupation, "1"});
    rows.push_back({"E_x1", r.bright_energy_eV, "eV"});
    rows.push_back({"E_x2", r.dark_energy_eV, "eV"});
    rows.push_back({"Gamma_x1_alpha", r.tunnel_bright, "per_ns"});
    rows.push_back({"Gamma_x2_alpha", r.tunnel_dark, "per_ns"});
  } else {
    rows.push_back({"E_a", r.bright_energy_eV, "eV"});
    rows.push_back({"Gamma_a_alpha", r.tunnel_uncoupled, "per_ns"});
  }
  return rows;
}

int run_rates(const RunConfig& cfg, Writer& w, json& summary, std::ostream& log) {
  auto out = w.open("rates.csv", "derived rates and energies");
  out << "model,quantity,value,unit\n";
  for (ModelKind k : selected(cfg.models)) {
    const DerivedRates r = derive_rates(cfg.device, k);
    log << model_name(k) << " model\n";
    json& block = summary["rates"][model_name(k)];
    for (const auto& row : rate_rows(r)) {
      log << "  " << std::left << std::setw(22) << row.name << std::setprecision(10) << row.value << ' '
          << row.unit << '\n';
      out << model_name(k) << ',' << row.name << ',' << num(row.value) << ',' << row.unit << '\n';
      block[row.name] = row.value;
    }
  }
  return kExitOk;
}

int run_dynamics(const RunConfig& cfg, Writer& w, json& summary, std::ostream& log) {
  for (ModelKind k : selected(cfg.models)) {
    const Trajectory tr = population_dynamics(cfg.device, k, cfg.t_end_ns, cfg.checkpoints, cfg.solver,
                                              cfg.first_checkpoint_ns);
    auto out = w.open("dynamics_" + model_name(k) + ".csv", "populations from rho_b = 1 at t = 0");
    out << "t_ns";
    for (auto label : state_labels(k)) out << ',' << label;
    out << ",trace\n";
    for (std::size_t i = 0; i < tr.times.size(); ++i) {
      out << num(tr.times[i]);
      double trace = 0.0;
      for (double v : tr.states[i]) {
        out << ',' << num(v);
        trace += v;
      }
      out << ',' << num(trace) << '\n';
    }
    const auto& last = tr.states.back();
    json final_state;
    const auto labels = state_labels(k);
    for (std::size_t s = 0; s < kStateCount; ++s) final_state[std::string(labels[s])] = last[s];
    summary["dynamics"][model_name(k)] = {{"t_end_ns", tr.times.back()},
                                          {"final_populations", final_state},
                                          {"steps", tr.stats.steps},
                                          {"rejected_steps", tr.stats.rejected}};
    log << model_name(k) << ": " << tr.stats.steps << " steps (" << tr.stats.rejected << " rejected)\n";
  }
  return kExitOk;
}

int run_steady(const RunConfig& cfg, Writer& w, json& summary, std::ostream& log) {
  auto out = w.open("steady.csv", "stationary populations; rho_e1/rho_e2 are x1/x2 (coupled) or a1/a2 (uncoupled)");
  out << "model,rho_e1,rho_e2,rho_alpha,rho_beta,rho_b,V_volts,j_e_per_ns,P_eV_per_ns,P_sun_eV_per_ns,residual,flag\n";
  for (ModelKind k : selected(cfg.models)) {
    const Generator g = build_generator(derive_rates(cfg.device, k));
    const OperatingPoint p = operating_point(g);
    double residual = 0.0;
    for (double v : rhs(g, p.steady)) residual = std::max(residual, std::abs(v));
    out << model_name(k);
    for (double v : p.steady.values) out << ',' << num(v);
    out << ',' << num(p.voltage) << ',' << num(p.current) << ',' << num(p.power) << ',' << num(p.solar_power)
        << ',' << num(residual) << ',' << point_flag(p) << '\n';
    json j = point_json(p);
    j["residual_per_ns"] = residual;
    summary["steady"][model_name(k)] = j;
    log << model_name(k) << ": V = " << p.voltage << " V, j = " << p.current << " e/ns, P = " << p.power
        << " eV/ns\n";
  }
  return kExitOk;
}

int run_iv(const RunConfig& cfg, Writer& w, json& summary, std::ostream& log) {
  const std::vector<double> grid = cfg.load_grid.values();
  const Execution exec = cfg.parallel ? Execution::kParallel : Execution::kSerial;
  int code = kExitOk;
  std::vector<std::pair<ModelKind, double>> peaks;
  for (ModelKind k : selected(cfg.models)) {
    const IVCurve curve = iv_sweep(cfg.device, k, grid, exec);
    auto out = w.open("iv_" + model_name(k) + ".csv", "steady-state current-voltage curve");
    out << "Gamma_per_ns,V_volts,j_e_per_ns,P_eV_per_ns,P_sun_eV_per_ns,flag\n";
    std::size_t failed = 0;
    for (const auto& p : curve.points) {
      out << num(p.load_rate);
      if (p.ok()) {
        out << ',' << num(p.voltage) << ',' << num(p.current) << ',' << num(p.power) << ',' << num(p.solar_power);
      } else {
        out << ",nan,nan,nan,nan";
      }
      out << ',' << point_flag(p) << '\n';
      if (!p.ok()) ++failed;
    }
    json& block = summary["iv"][model_name(k)];
    block["failed_points"] = failed;
    if (failed > 0) {
      code = kExitPartial;
      log << model_name(k) << ": " << failed << " of " << curve.points.size() << " points failed\n";
    }
    try {
      const PeakPower peak = peak_power(curve);
      block["P_max_eV_per_ns"] = peak.power;
      block["peak"] = point_json(peak.at);
      block["peak_on_grid_edge"] = peak.at_boundary;
      peaks.emplace_back(k, peak.power);
      log << model_name(k) << ": P_max = " << std::setprecision(8) << peak.power << " eV/ns at Gamma = "
          << peak.at.load_rate << " /ns" << (peak.at_boundary ? " (on grid edge)" : "") << '\n';
    } catch (const Error& e) {
      block["peak_failure"] = e.what();
      code = kExitPartial;
      log << model_name(k) << ": no peak: " << e.what() << '\n';
    }
  }
  if (peaks.size() == 2) {
    const double eta = relative_enhancement(peaks[1].second, peaks[0].second);
    summary["iv"]["eta"] = eta;
    log << "eta = " << eta << '\n';
  }
  return code;
}

int write_sweep(const EnhancementGrid& grid, std::ofstream& out, const char* axis1, const char* axis2,
                json& block, std::ostream& log) {
  out << axis1;
  if (axis2 != nullptr) out << ',' << axis2;
  out << ",eta,P_max_coupled_eV_per_ns,P_max_uncoupled_eV_per_ns,Gamma_peak_coupled_per_ns,"
         "Gamma_peak_uncoupled_per_ns,flag\n";
  std::size_t failed = 0;
  const EnhancementCell* best = nullptr;
  std::size_t best_index = 0;
  json cells = json::array();
  for (std::size_t i = 0; i < grid.axis1.size(); ++i) {
    for (std::size_t k = 0; k < grid.cols(); ++k) {
      const EnhancementCell& c = grid.at(i, k);
      out << num(grid.axis1[i]);
      if (axis2 != nullptr) out << ',' << num(grid.axis2[k]);
      if (c.converged) {
        out << ',' << num(c.eta) << ',' << num(c.coupled_peak) << ',' << num(c.uncoupled_peak) << ','
            << num(c.coupled_peak_load) << ',' << num(c.uncoupled_peak_load);
      } else {
        out << ",nan,nan,nan,nan,nan";
      }
      out << ',' << cell_flag(c) << '\n';
      json cj = cell_json(c);
      cj[axis1] = grid.axis1[i];
      if (axis2 != nullptr) cj[axis2] = grid.axis2[k];
      cells.push_back(cj);
      if (!c.converged) {
        ++failed;
        continue;
      }
      if (best == nullptr || c.eta > best->eta) {
        best = &c;
        best_index = cells.size() - 1;
      }
    }
  }
  block["cells"] = cells;
  block["failed_cells"] = failed;
  if (best != nullptr) {
    block["max_eta"] = cells[best_index];
    log << "max eta = " << best->eta << '\n';
  }
  if (failed > 0) log << failed << " of " << grid.cells.size() << " cells failed\n";
  return failed > 0 ? kExitPartial : kExitOk;
}

int run_sweep_gamma_x(const RunConfig& cfg, Writer& w, json& summary, std::ostream& log) {
  const Execution exec = cfg.parallel ? Execution::kParallel : Execution::kSerial;
  const auto multipliers = cfg.gamma_x_multipliers.values();
  const auto grid = phonon_rate_sweep(cfg.device, multipliers, cfg.load_grid.values(), exec);
  auto out = w.open("sweep_gamma_x.csv", "peak-power enhancement vs gamma_x in units of 2J/hbar");
  return write_sweep(grid, out, "gamma_x_multiplier", nullptr, summary["sweep_gamma_x"], log);
}

int run_sweep_geometry(const RunConfig& cfg, Writer& w, json& summary, std::ostream& log) {
  const Execution exec = cfg.parallel ? Execution::kParallel : Execution::kSerial;
  const auto grid = geometry_sweep(cfg.device, cfg.d_perp_grid.values(), cfg.w_br_grid.values(),
                                   cfg.load_grid.values(), exec);
  auto out = w.open("sweep_geometry.csv", "peak-power enhancement over dot spacing and barrier width");
  return write_sweep(grid, out, "d_perp_nm", "w_br_nm", summary["sweep_geometry"], log);
}

json provenance(const RunConfig& cfg, const std::string& hash) {
  const auto& rate = cfg.device.phonon_rate;
  const std::string gamma_x_rule =
      rate.mode == PhononRateSpec::Mode::kTwoJ
          ? "gamma_x = " + format_double(rate.multiplier) + " * 2J/hbar"
          : "gamma_x = " + format_double(rate.explicit_per_ns) + " per_ns";
  return {{"E_star_eV", cfg.device.escape_energy_eV},
          {"hole_rate_rule", "Gamma_beta_b = Gamma(E_star)"},
          {"Gamma_unit", "per_ns"},
          {"gamma_x_rule", gamma_x_rule},
          {"E_b_eV", 0.0},
          {"config_hash", hash}};
}

}  // namespace

RunOutcome run_experiment(const RunConfig& cfg, std::ostream& log) {
  RunOutcome outcome;
  try {
    require_valid(cfg.device);
    validate(cfg.solver);
    Writer writer(cfg, outcome);
    {
      auto out = writer.open("config.txt", "resolved configuration");
      out << serialize_config(cfg);
    }
    json summary = {{"experiment", std::string(to_string(cfg.experiment))},
                    {"model", std::string(to_string(cfg.models))},
                    {"provenance", provenance(cfg, writer.hash())}};

    int code = kExitOk;
    switch (cfg.experiment) {
      case Experiment::kRates:
        code = run_rates(cfg, writer, summary, log);
        break;
      case Experiment::kDynamics:
        code = run_dynamics(cfg, writer, summary, log);
        break;
      case Experiment::kSteady:
        code = run_steady(cfg, writer, summary, log);
        break;
      case Experiment::kIv:
        code = run_iv(cfg, writer, summary, log);
        break;
      case Experiment::kSweepGammaX:
        code = run_sweep_gamma_x(cfg, writer, summary, log);
        break;
      case Experiment::kSweepGeometry:
        code = run_sweep_geometry(cfg, writer, summary, log);
        break;
    }
    summary["exit_code"] = code;

    const std::filesystem::path path = cfg.output + "summary.json";
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot open " + path.string() + " for writing");
    out << summary.dump(2) << '\n';
    outcome.files.push_back(path);
    outcome.exit_code = code;
  } catch (const std::exception& e) {
    log << "error: " << e.what() << '\n';
    outcome.exit_code = kExitFatal;
  }
  return outcome;
}

}  // namespace qdpc::io
