#include "freqint/cli.hpp"

#include <CLI11.hpp>
#include <cmath>
#include <fstream>
#include <json.hpp>
#include <memory>
#include <numbers>
#include <sstream>

#include "freqint/csv.hpp"
#include "freqint/freq_analysis.hpp"
#include "freqint/stability.hpp"
#include "freqint/transient.hpp"

namespace freqint::cli {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Flat JSON object whose keys are long flag names without the dashes, e.g.
// {"integrator": "A", "h": 0.002, "re-min": -10}.
class JsonConfig : public CLI::Config {
 public:
  std::string to_config(const CLI::App* app, bool, bool, std::string) const override {
    nlohmann::json j = nlohmann::json::object();
    for (const CLI::Option* opt : app->get_options()) {
      if (opt->get_lnames().empty() || opt->count() == 0) continue;
      const auto& results = opt->results();
      if (results.size() == 1) {
        j[opt->get_lnames().front()] = results.front();
      } else {
        j[opt->get_lnames().front()] = results;
      }
    }
    return j.dump(2) + "\n";
  }

  std::vector<CLI::ConfigItem> from_config(std::istream& input) const override {
    nlohmann::json j;
    try {
      input >> j;
    } catch (const nlohmann::json::exception& e) {
      throw CLI::ConversionError(std::string("config file is not valid JSON: ") + e.what());
    }
    if (!j.is_object()) throw CLI::ConversionError("config file must hold a JSON object");

    std::vector<CLI::ConfigItem> items;
    for (const auto& [key, value] : j.items()) {
      CLI::ConfigItem item;
      item.name = key;
      auto text = [](const nlohmann::json& v) {
        if (v.is_string()) return v.get<std::string>();
        if (v.is_boolean()) return std::string(v.get<bool>() ? "true" : "false");
        return v.dump();
      };
      if (value.is_array()) {
        for (const auto& v : value) item.inputs.push_back(text(v));
      } else {
        item.inputs.push_back(text(value));
      }
      items.push_back(std::move(item));
    }
    return items;
  }
};

void check_step(IntegratorKind kind, double omega, double h) {
  if (!uses_omega_select(kind)) return;
  const auto verdict = validate_step_size(kind, omega, h);
  if (!verdict.valid) throw ConfigError(StepSizeError(kind, h, verdict.bound).what());
}

double positive(double value, const char* flag) {
  if (!std::isfinite(value) || value <= 0.0) {
    std::ostringstream os;
    os << flag << " must be positive and finite (got " << value << ")";
    throw ConfigError(os.str());
  }
  return value;
}

struct Range {
  double lo;
  double hi;
};

Range range_or(const std::optional<double>& lo, const std::optional<double>& hi,
               Range fallback, const char* what) {
  Range r{lo.value_or(fallback.lo), hi.value_or(fallback.hi)};
  if (!std::isfinite(r.lo) || !std::isfinite(r.hi) || !(r.lo < r.hi)) {
    std::ostringstream os;
    os << what << " range must satisfy min < max (got [" << r.lo << ", " << r.hi << "])";
    throw ConfigError(os.str());
  }
  return r;
}

constexpr Range kMapRe{-10.0, 0.0};
constexpr Range kMapIm{-10.0, 10.0};
constexpr Range kGainMu{-1e4, -1e-2};
constexpr std::size_t kMapN = 101;
constexpr std::size_t kGainN = 121;
constexpr double kDemoPole = -5000.0;

Signal derivative_signal(const LinearSystem& sys, InputDerivative mode, double h) {
  switch (mode) {
    case InputDerivative::analytic: return sys.u_dot;
    case InputDerivative::backward:
      return finite_diff_input_derivative(sys.u, FdScheme::backward, h);
    case InputDerivative::central:
      return finite_diff_input_derivative(sys.u, FdScheme::central, h);
  }
  return sys.u_dot;
}

TestCaseParams simulate_params(const RunConfig& cfg) {
  TestCaseParams p = TestCaseParams::for_case(cfg.case_id);
  if (cfg.pole) {
    p.a = *cfg.pole;
    // Case 1 keeps starting on the steady-state sinusoid of the new pole.
    if (cfg.case_id == 1) p.x0 = -p.a * p.b / (p.omega_syn * p.omega_syn + p.a * p.a);
  }
  if (cfg.x0) p.x0 = *cfg.x0;
  return p;
}

void emit(const RunConfig& cfg, std::ostream& os) {
  const double omega = cfg.omega_select();
  switch (cfg.command) {
    case Command::coeffs:
      csv::write_coefficients(os, build_coefficients(cfg.integrator, omega, cfg.h));
      return;

    case Command::freq_sweep: {
      const auto coeffs = build_coefficients(cfg.integrator, omega, cfg.h);
      SweepGrid grid = default_sweep_grid(coeffs);
      if (cfg.f_min_hz) grid.omega_min = kTwoPi * *cfg.f_min_hz;
      if (cfg.f_max_hz) grid.omega_max = kTwoPi * *cfg.f_max_hz;
      if (cfg.n) grid.n_points = *cfg.n;
      grid.spacing = cfg.log_spacing ? Spacing::log : Spacing::linear;
      csv::write_sweep(os, magnitude_sweep(coeffs, grid));
      return;
    }

    case Command::stability_map: {
      const auto coeffs = build_coefficients(cfg.integrator, omega, cfg.h);
      const Range re = range_or(cfg.re_min, cfg.re_max, kMapRe, "Re(lambda*h)");
      const Range im = range_or(cfg.im_min, cfg.im_max, kMapIm, "Im(lambda*h)");
      const std::size_t n = cfg.n.value_or(kMapN);
      const auto map = stability_map(coeffs, {re.lo, re.hi}, {im.lo, im.hi}, n, n,
                                     cfg.workers);
      csv::write_stability_map(os, map);
      if (!cfg.out.empty()) {
        std::ofstream meta(cfg.out + ".json", std::ios::binary);
        if (!meta) throw std::runtime_error("cannot open " + cfg.out + ".json");
        meta << csv::stability_map_metadata(map).dump(2) << '\n';
      }
      return;
    }

    case Command::transient_gains: {
      const Range mu = range_or(cfg.re_min, cfg.re_max, kGainMu, "lambda*h");
      const std::size_t n = cfg.n.value_or(kGainN);
      std::vector<CoefficientSet> sets;
      for (auto kind : kAllKinds) sets.push_back(build_coefficients(kind, omega, cfg.h));
      std::vector<csv::GainRow> rows;
      const double log_lo = std::log10(-mu.hi);
      const double log_hi = std::log10(-mu.lo);
      for (std::size_t k = 0; k < n; ++k) {
        // From the most negative lambda*h toward zero.
        const double frac = static_cast<double>(k) / static_cast<double>(n - 1);
        const double mu_k = -std::pow(10.0, log_hi + (log_lo - log_hi) * frac);
        csv::GainRow row;
        row.lambda_h = mu_k;
        for (const auto& c : sets) row.gains.push_back(transient_gain(c, mu_k / cfg.h));
        row.exact = std::exp(mu_k);
        rows.push_back(std::move(row));
      }
      csv::write_gain_curve(os, rows);
      return;
    }

    case Command::verify_roots: {
      const auto coeffs = build_coefficients(cfg.integrator, omega, cfg.h);
      csv::write_root_reports(os, verify_root_design(cfg.integrator, coeffs, cfg.tolerance));
      return;
    }

    case Command::case_table:
      csv::write_case_table(os, run_case_table(cfg.case_id, cfg.workers));
      return;

    case Command::demo_transient: {
      TestCaseParams p = TestCaseParams::case2();
      p.a = cfg.pole.value_or(kDemoPole);
      if (cfg.x0) p.x0 = *cfg.x0;
      const LinearSystem sys = scalar_test_system(p);
      const Vector x0 = Vector::Constant(1, p.x0);
      std::vector<std::string> names{"analytic"};
      std::vector<Trace> traces;
      for (auto kind : kAllKinds) {
        names.emplace_back(to_string(kind));
        traces.push_back(simulate(sys, kind, p.omega_syn, cfg.h, cfg.t_end, x0));
      }
      traces.insert(traces.begin(), analytic_trace(p, cfg.h, traces.front().size()));
      csv::write_traces(os, names, traces);
      return;
    }

    case Command::simulate: {
      const TestCaseParams p = simulate_params(cfg);
      LinearSystem sys = scalar_test_system(p);
      sys.u_dot = derivative_signal(sys, cfg.u_dot, cfg.h);
      std::optional<SwitchPolicy> policy;
      if (cfg.startup_kind) {
        policy = SwitchPolicy{*cfg.startup_kind, cfg.integrator, cfg.startup_steps};
      }
      csv::write_trace(os, simulate(sys, cfg.integrator, p.omega_syn, cfg.h, cfg.t_end,
                                    Vector::Constant(1, p.x0), policy));
      return;
    }
  }
}

}  // namespace

double RunConfig::omega_select() const { return kTwoPi * f_select_hz; }

void validate(const RunConfig& cfg) {
  positive(cfg.h, "--h");
  positive(cfg.f_select_hz, "--fselect");
  positive(cfg.t_end, "--tend");
  if (cfg.n && *cfg.n < 2) throw ConfigError("--n must be at least 2");
  if (!(cfg.tolerance > 0.0)) throw ConfigError("--tol must be positive");
  if (cfg.workers == 0) throw ConfigError("--workers must be at least 1");
  const double omega = cfg.omega_select();

  switch (cfg.command) {
    case Command::coeffs:
    case Command::verify_roots:
      check_step(cfg.integrator, omega, cfg.h);
      break;
    case Command::freq_sweep: {
      check_step(cfg.integrator, omega, cfg.h);
      const double lo = cfg.f_min_hz.value_or(cfg.log_spacing ? 1.0 : 0.0);
      const double hi = cfg.f_max_hz.value_or(
          uses_omega_select(cfg.integrator) ? 2.0 * cfg.f_select_hz : 1.0 / cfg.h);
      if (!(lo >= 0.0) || !(lo < hi)) throw ConfigError("--fmin/--fmax must satisfy 0 <= fmin < fmax");
      if (cfg.log_spacing && !cfg.f_min_hz) throw ConfigError("--log needs an explicit positive --fmin");
      if (cfg.log_spacing && !(lo > 0.0)) throw ConfigError("--log needs --fmin > 0");
      break;
    }
    case Command::stability_map:
      check_step(cfg.integrator, omega, cfg.h);
      range_or(cfg.re_min, cfg.re_max, kMapRe, "Re(lambda*h)");
      range_or(cfg.im_min, cfg.im_max, kMapIm, "Im(lambda*h)");
      break;
    case Command::transient_gains: {
      for (auto kind : kAllKinds) check_step(kind, omega, cfg.h);
      const Range mu = range_or(cfg.re_min, cfg.re_max, kGainMu, "lambda*h");
      if (!(mu.hi < 0.0)) throw ConfigError("transient gains need lambda*h < 0 (--re-max < 0)");
      break;
    }
    case Command::case_table:
      if (cfg.case_id != 1 && cfg.case_id != 2) throw ConfigError("--id must be 1 or 2");
      break;
    case Command::demo_transient:
      for (auto kind : kAllKinds) check_step(kind, 120.0 * std::numbers::pi, cfg.h);
      if (cfg.t_end < cfg.h) throw ConfigError("--tend must be at least --h");
      break;
    case Command::simulate:
      if (cfg.case_id != 1 && cfg.case_id != 2) throw ConfigError("--id must be 1 or 2");
      if (cfg.t_end < cfg.h) throw ConfigError("--tend must be at least --h");
      check_step(cfg.integrator, 120.0 * std::numbers::pi, cfg.h);
      if (cfg.startup_kind) {
        check_step(*cfg.startup_kind, 120.0 * std::numbers::pi, cfg.h);
        try {
          SwitchPolicy{*cfg.startup_kind, cfg.integrator, cfg.startup_steps}.validate();
        } catch (const std::invalid_argument& e) {
          throw ConfigError(e.what());
        }
      }
      break;
  }
}

void dispatch(const RunConfig& cfg, std::ostream& out) {
  validate(cfg);
  if (cfg.out.empty()) {
    emit(cfg, out);
    return;
  }
  std::ostringstream buffer;
  emit(cfg, buffer);
  std::ofstream file(cfg.out, std::ios::binary);
  if (!file) throw std::runtime_error("cannot open output file " + cfg.out);
  file << buffer.str();
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Frequency-response optimized second-derivative integrators", "freqint"};
  app.set_help_flag("--help", "Print this help message and exit");
  app.fallthrough();
  app.require_subcommand(1);
  app.config_formatter(std::make_shared<JsonConfig>());
  app.set_config("--config", "", "JSON file mirroring the command-line flags");

  RunConfig cfg;
  const std::vector<std::string> kinds{"A", "B", "C", "D", "TR", "BE"};
  std::string integrator = "A";
  std::string startup_kind;
  std::string u_dot = "analytic";

  app.add_option("--integrator", integrator, "Integrator kind")
      ->check(CLI::IsMember(kinds));
  app.add_option("--h", cfg.h, "Step size in seconds")->capture_default_str();
  app.add_option("--fselect", cfg.f_select_hz, "Tuned frequency in Hz (kinds A and B)")
      ->capture_default_str();
  app.add_option("--tend", cfg.t_end, "Simulation end time in seconds")->capture_default_str();
  app.add_option("--out", cfg.out, "Output CSV path (stdout when omitted)");
  app.add_option("--re-min", cfg.re_min, "Lower Re(lambda*h) bound");
  app.add_option("--re-max", cfg.re_max, "Upper Re(lambda*h) bound");
  app.add_option("--im-min", cfg.im_min, "Lower Im(lambda*h) bound");
  app.add_option("--im-max", cfg.im_max, "Upper Im(lambda*h) bound");
  app.add_option("--n", cfg.n, "Grid points (per axis for maps)");
  app.add_option("--fmin", cfg.f_min_hz, "Sweep start frequency in Hz");
  app.add_option("--fmax", cfg.f_max_hz, "Sweep end frequency in Hz");
  app.add_flag("--log", cfg.log_spacing, "Log-spaced sweep");
  app.add_option("--tol", cfg.tolerance, "Root check tolerance")->capture_default_str();
  app.add_option("--id", cfg.case_id, "Benchmark case (1 or 2)")->capture_default_str();
  app.add_option("--a", cfg.pole, "Override the test-system pole a (1/s)");
  app.add_option("--x0", cfg.x0, "Override the initial state");
  app.add_option("--startup-kind", startup_kind, "Startup integrator of a switch policy")
      ->check(CLI::IsMember({"B", "D"}));
  app.add_option("--startup-steps", cfg.startup_steps, "Steps taken with the startup integrator")
      ->capture_default_str();
  app.add_option("--udot", u_dot, "Input derivative: analytic, backward or central")
      ->check(CLI::IsMember({"analytic", "backward", "central"}))
      ->capture_default_str();
  app.add_option("--workers", cfg.workers, "Worker threads for case and stability-map")
      ->capture_default_str();

  const std::vector<std::pair<std::string, Command>> commands{
      {"coeffs", Command::coeffs},
      {"freq-sweep", Command::freq_sweep},
      {"stability-map", Command::stability_map},
      {"transient-gains", Command::transient_gains},
      {"verify-roots", Command::verify_roots},
      {"case", Command::case_table},
      {"demo-transient", Command::demo_transient},
      {"simulate", Command::simulate},
  };
  const std::vector<std::string> help{
      "Print the coefficient set",
      "Error magnitude over frequency",
      "|g| over a lambda*h grid",
      "Real-axis gain curves of all integrators",
      "Check the designed roots of the error expression",
      "Benchmark table for case --id",
      "Stiff transient (a = -5000) with all integrators",
      "Trace of one benchmark case",
  };
  for (std::size_t i = 0; i < commands.size(); ++i) {
    app.add_subcommand(commands[i].first, help[i]);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  const std::string chosen = app.get_subcommands().front()->get_name();
  for (const auto& [name, command] : commands) {
    if (name == chosen) cfg.command = command;
  }
  cfg.integrator = *parse_kind(integrator);
  if (!startup_kind.empty()) cfg.startup_kind = parse_kind(startup_kind);
  cfg.u_dot = u_dot == "backward"  ? InputDerivative::backward
              : u_dot == "central" ? InputDerivative::central
                                   : InputDerivative::analytic;

  try {
    dispatch(cfg, out);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

}  // namespace freqint::cli
