// polarity_lab: command-line front end for the bulk-surface GTPase toolkit.
//
// Subcommands: equilibrium, stability, dispersion, growth-curve, scan,
// simulate, nondim. Global flags: --config <path>, --output <dir>,
// --seed <int>. Exit codes: 0 ok, 2 config error, 3 numerical failure,
// 4 I/O error.

#include <chrono>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "polarity/config.hpp"
#include "polarity/emit.hpp"
#include "polarity/errors.hpp"
#include "polarity/kinetics.hpp"
#include "polarity/linstab_full.hpp"
#include "polarity/linstab_reduced.hpp"
#include "polarity/scan.hpp"
#include "polarity/simulate.hpp"

namespace {

using namespace polarity;

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::ParseError:
    case ErrorCode::ValidationError:
    case ErrorCode::UnitViolation:
      return 2;
    case ErrorCode::IoError:
      return 4;
    default:
      return 3;
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorCode::IoError, "cannot read config file " + path);
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

const kinetics::Equilibrium* pick_state(
    const std::vector<kinetics::Equilibrium>& states) {
  for (const kinetics::Equilibrium& eq : states) {
    if (eq.u_star > 0.0 && eq.v_star > 0.0 && eq.V_star > 0.0 &&
        kinetics::stability_value_S(eq) > 0.0) {
      return &eq;
    }
  }
  return states.empty() ? nullptr : &states.front();
}

struct CommandContext {
  cli::RunConfig cfg;
  std::string config_echo;
  std::chrono::steady_clock::time_point start;

  void finish(const std::map<std::string, std::string>& files) const {
    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    cli::emit_outputs(cfg.output_dir, files, config_echo, cfg.seed, wall);
  }
};

int cmd_equilibrium(const CommandContext& ctx) {
  const kinetics::EquilibriaResult result =
      kinetics::find_equilibria(ctx.cfg.params);
  std::map<std::string, std::string> files;
  files["equilibria.csv"] = cli::equilibria_csv(result.states);
  ctx.finish(files);
  if (result.bracket_overflow) {
    std::cerr << "warning: no sign change up to u_max; root may lie beyond "
                 "the search range\n";
  }
  std::cout << result.states.size() << " equilibrium state(s) written\n";
  return 0;
}

int cmd_stability(const CommandContext& ctx) {
  const kinetics::KineticParams& p = ctx.cfg.params;
  const kinetics::EquilibriaResult eqs = kinetics::find_equilibria(p);
  const kinetics::Equilibrium* eq = pick_state(eqs.states);
  if (eq == nullptr) {
    throw Error(ErrorCode::DomainError, "no equilibrium found");
  }
  const bool reduced =
      p.reduced_model() || ctx.cfg.model_override == "reduced";
  const int l_max = ctx.cfg.stability_l_max;
  std::map<std::string, std::string> files;

  if (reduced) {
    std::vector<double> mu(l_max), cterm(l_max);
    std::vector<std::optional<double>> root(l_max);
    std::vector<const char*> verdict(l_max);
    const linstab_reduced::SpectrumSpec spec =
        linstab_reduced::SpectrumSpec::unit_sphere(l_max);
    const linstab_reduced::ReducedCaseReport cases =
        linstab_reduced::classify_case_reduced(*eq, p, spec);
    for (int l = 1; l <= l_max; ++l) {
      mu[l - 1] = static_cast<double>(l) * (l + 1);
      cterm[l - 1] = linstab_full::coefficient_e(l, *eq, p);
      const linstab_reduced::QuadraticRoots roots =
          linstab_reduced::quadratic_dispersion_roots(mu[l - 1], *eq, p);
      root[l - 1] = roots.positive_root;
      verdict[l - 1] = roots.positive_root ? "Unstable" : "Stable";
    }
    files["stability.csv"] = cli::reduced_stability_csv(
        mu, cterm, root, verdict, linstab_full::case_name(cases.instability_case));
    std::cout << "reduced model: case "
              << linstab_full::case_name(cases.instability_case) << ", "
              << cases.admissible_mu.size() << " admissible mode(s)\n";
  } else {
    std::vector<linstab_full::DispersionReport> rows;
    rows.reserve(l_max);
    for (int l = 1; l <= l_max; ++l) {
      rows.push_back(linstab_full::mode_instability(l, *eq, p));
    }
    files["stability.csv"] = cli::stability_csv(rows);
    const linstab_full::HomogeneousReport hom =
        linstab_full::homogeneous_stability(*eq, p);
    const linstab_full::AggregateReport aggregate =
        linstab_full::aggregate_stability(*eq, p);
    std::cout << "S = " << cli::format_g17(hom.S) << ", case "
              << linstab_full::case_name(rows.front().instability_case)
              << ", overall " << linstab_full::verdict_name(aggregate.overall)
              << " over l <= " << aggregate.l_cut << "\n";
  }
  ctx.finish(files);
  return 0;
}

int cmd_dispersion(const CommandContext& ctx) {
  const kinetics::KineticParams& p = ctx.cfg.params;
  if (p.reduced_model()) {
    throw Error(ErrorCode::DomainError,
                "dispersion curves require finite D; use growth-curve for "
                "the reduced model");
  }
  const kinetics::EquilibriaResult eqs = kinetics::find_equilibria(p);
  const kinetics::Equilibrium* eq = pick_state(eqs.states);
  if (eq == nullptr) {
    throw Error(ErrorCode::DomainError, "no equilibrium found");
  }
  std::vector<int> ls;
  std::vector<double> omegas, values;
  constexpr int kOmegaSamples = 200;
  for (int l = 0; l <= ctx.cfg.stability_l_max; ++l) {
    for (int k = 0; k < kOmegaSamples; ++k) {
      const double omega =
          1e-4 * std::pow(1e8 / 1e-4, static_cast<double>(k) /
                                          (kOmegaSamples - 1));
      ls.push_back(l);
      omegas.push_back(omega);
      values.push_back(linstab_full::dispersion_G(l, omega, *eq, p));
    }
  }
  std::map<std::string, std::string> files;
  files["dispersion.csv"] = cli::dispersion_csv(ls, omegas, values);
  ctx.finish(files);
  return 0;
}

int cmd_growth_curve(const CommandContext& ctx) {
  const kinetics::KineticParams& p = ctx.cfg.params;
  const kinetics::EquilibriaResult eqs = kinetics::find_equilibria(p);
  const kinetics::Equilibrium* eq = pick_state(eqs.states);
  if (eq == nullptr) {
    throw Error(ErrorCode::DomainError, "no equilibrium found");
  }
  std::vector<double> grid;
  for (int l = 1; l <= ctx.cfg.stability_l_max; ++l) {
    grid.push_back(static_cast<double>(l) * (l + 1));
  }
  const std::vector<linstab_reduced::GrowthPoint> curve =
      linstab_reduced::growth_rate_curve(*eq, p, grid);
  std::map<std::string, std::string> files;
  files["growth_curve.csv"] = cli::growth_curve_csv(curve);
  ctx.finish(files);
  return 0;
}

int cmd_scan(const CommandContext& ctx) {
  const std::vector<cli::ScanRow> rows = cli::run_scan(ctx.cfg);
  std::map<std::string, std::string> files;
  files["scan.csv"] =
      cli::scan_csv(rows, ctx.cfg.stability_l_max, ctx.cfg.scan->param);
  ctx.finish(files);
  std::cout << rows.size() << " scan points written\n";
  return 0;
}

int cmd_simulate(const CommandContext& ctx) {
  const sim::SimRecord record = sim::run_simulation(ctx.cfg.sim);
  std::map<std::string, std::string> files;
  files["snapshots.csv"] =
      cli::snapshots_csv(record, ctx.cfg.sim.model == sim::Model::Full);
  files["diagnostics.csv"] = cli::diagnostics_csv(record);
  ctx.finish(files);
  if (record.dt_halved) {
    std::cerr << "warning: dt halved to " << record.dt_used
              << " after NaN guard trip\n";
  }
  std::cout << "simulated to t=" << record.times.back() << " ("
            << record.times.size() << " diagnostic records)\n";
  return 0;
}

int cmd_nondim(const CommandContext& ctx) {
  if (!ctx.cfg.dimensional) {
    throw Error(ErrorCode::ValidationError,
                "nondim requires a 'nondim' block of dimensional parameters");
  }
  const kinetics::KineticParams p = nondim::nondimensionalize(*ctx.cfg.dimensional);
  nlohmann::json out;
  out["a1"] = p.a1;
  out["a2"] = p.a2;
  out["a3"] = p.a3;
  out["a4"] = p.a4;
  out["a5"] = p.a5;
  out["a6"] = p.a6;
  out["a_m6"] = p.a_m6;
  out["gamma"] = p.gamma;
  out["d"] = p.d;
  out["D"] = p.D;
  out["V_init"] = p.V_init;
  std::map<std::string, std::string> files;
  files["params.json"] = out.dump(2) + "\n";
  ctx.finish(files);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"bulk-surface GTPase polarization toolkit"};
  app.require_subcommand(1);
  app.fallthrough();  // global flags may follow the subcommand name

  std::string config_path;
  std::string output_dir;
  std::optional<std::uint64_t> seed_override;
  std::string model_flag;
  app.add_option("--config", config_path, "JSON config file");
  app.add_option("--output", output_dir, "output directory");
  app.add_option("--seed", seed_override, "seed override");

  CLI::App* sub_equilibrium = app.add_subcommand("equilibrium");
  CLI::App* sub_stability = app.add_subcommand("stability");
  sub_stability->add_option("--model", model_flag, "full or reduced");
  CLI::App* sub_dispersion = app.add_subcommand("dispersion");
  CLI::App* sub_growth = app.add_subcommand("growth-curve");
  CLI::App* sub_scan = app.add_subcommand("scan");
  CLI::App* sub_simulate = app.add_subcommand("simulate");
  CLI::App* sub_nondim = app.add_subcommand("nondim");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  try {
    CommandContext ctx;
    ctx.start = std::chrono::steady_clock::now();
    ctx.config_echo = config_path.empty() ? "{}" : read_file(config_path);
    ctx.cfg = cli::parse_config(ctx.config_echo);
    if (!output_dir.empty()) ctx.cfg.output_dir = output_dir;
    if (seed_override) {
      ctx.cfg.seed = *seed_override;
      ctx.cfg.sim.seed = *seed_override;
    }
    if (!model_flag.empty()) {
      if (model_flag != "full" && model_flag != "reduced") {
        throw Error(ErrorCode::ValidationError,
                    "--model must be full or reduced");
      }
      ctx.cfg.model_override = model_flag;
    }

    if (sub_equilibrium->parsed()) return cmd_equilibrium(ctx);
    if (sub_stability->parsed()) return cmd_stability(ctx);
    if (sub_dispersion->parsed()) return cmd_dispersion(ctx);
    if (sub_growth->parsed()) return cmd_growth_curve(ctx);
    if (sub_scan->parsed()) return cmd_scan(ctx);
    if (sub_simulate->parsed()) return cmd_simulate(ctx);
    if (sub_nondim->parsed()) return cmd_nondim(ctx);
    std::cerr << "error: ValidationError no subcommand\n";
    return 2;
  } catch (const Error& e) {
    std::cerr << "error: " << error_code_name(e.code()) << " " << e.what()
              << "\n";
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: Unhandled " << e.what() << "\n";
    return 3;
  }
}
