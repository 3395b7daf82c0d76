// Command-line front end: one subcommand per pipeline stage plus a `full`
// meta-command. Every artifact lands in the configured output directory and
// embeds the tool version and the hash of the effective configuration, so
// identical inputs and configs reproduce byte-identical files.

#include <CLI11.hpp>

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "holorigid/config.hpp"
#include "holorigid/errors.hpp"
#include "holorigid/map_engine.hpp"
#include "holorigid/markov.hpp"
#include "holorigid/orbits.hpp"
#include "holorigid/rigidity.hpp"
#include "holorigid/thermo.hpp"

namespace {

using namespace holorigid;

std::string out_path(const RunConfig& cfg, const std::string& name) {
  return (std::filesystem::path(cfg.out_dir) / name).string();
}

void write_json_artifact(const RunConfig& cfg, const std::string& name,
                         nlohmann::ordered_json j) {
  j["provenance"] = provenance_json(cfg);
  write_text_file(out_path(cfg, name), j.dump(2) + "\n");
  std::cout << "wrote " << out_path(cfg, name) << "\n";
}

void write_csv_artifact(const RunConfig& cfg, const std::string& name,
                        const std::string& body) {
  write_text_file(out_path(cfg, name), body + csv_footer(cfg));
  std::cout << "wrote " << out_path(cfg, name) << "\n";
}

// The resolved configuration is itself an artifact, so a run can be
// reproduced from its output directory alone.
void persist_config(const RunConfig& cfg) {
  write_json_artifact(cfg, "config.json", cfg.to_json());
}

int cmd_analyze(const RunConfig& cfg, const std::string& map_file,
                const std::string& suffix) {
  MapSpec f = load_map(map_file);
  DegenerateFlags flags = classify_degenerate(f);
  CriticalOrbit co = critical_orbit(f, 2 * cfg.max_period);

  nlohmann::ordered_json j;
  j["map_file"] = std::filesystem::path(map_file).filename().string();
  j["degenerate"] = {{"chebyshev", flags.chebyshev},
                     {"power_like", flags.power_like}};
  j["critical_orbit"] = nlohmann::ordered_json::object();
  j["critical_orbit"]["escaped"] = co.escaped;
  j["critical_orbit"]["points"] = nlohmann::ordered_json::array();
  for (Complex p : co.points)
    j["critical_orbit"]["points"].push_back({p.real(), p.imag()});
  write_json_artifact(cfg, "analysis" + suffix + ".json", std::move(j));

  std::string csv = "period,re,im,multiplier_abs,word\n";
  for (const SpectrumEntry& e :
       multiplier_spectrum(f, cfg.max_period, cfg.orbit_tol))
    csv += std::to_string(e.period) + "," + fmt_double(e.point.real()) + "," +
           fmt_double(e.point.imag()) + "," + fmt_double(e.multiplier_abs) +
           "," + e.word + "\n";
  write_csv_artifact(cfg, "spectrum" + suffix + ".csv", csv);
  return 0;
}

int cmd_orbits(const RunConfig& cfg, const std::string& map_file,
               const std::string& suffix) {
  MapSpec f = load_map(map_file);
  std::string csv = "period,re,im,multiplier_abs,word,post_critical\n";
  for (const PeriodicOrbit& o :
       all_orbits_upto(f, cfg.max_period, cfg.orbit_tol))
    csv += orbit_csv_row(o) + "\n";
  write_csv_artifact(cfg, "orbits" + suffix + ".csv", csv);
  return 0;
}

int cmd_build_an(const RunConfig& cfg, const std::string& map_file) {
  MapSpec f = load_map(map_file);
  MarkovModel m =
      build_AN(f, cfg.critical_radius, cfg.cell_size, cfg.grid_depth);
  write_json_artifact(cfg, "model_an.json", m.to_json());
  // state centers double as a plottable point cloud of the covered set
  std::string csv = "id,re,im\n";
  for (const auto& s : m.states)
    csv += s.id + "," + fmt_double(s.region.center().real()) + "," +
           fmt_double(s.region.center().imag()) + "\n";
  write_csv_artifact(cfg, "cells.csv", csv);
  return 0;
}

int cmd_build_bn(const RunConfig& cfg, const std::string& map_file) {
  MapSpec f = load_map(map_file);
  std::vector<PeriodicOrbit> anchors = select_anchor_orbits(f);
  BnOptions opts;
  opts.max_depth = cfg.bridge_depth;
  auto [plan, m] = build_Bn(f, anchors, cfg.neighborhood_radius, opts);
  write_json_artifact(cfg, "plan_bn.json", plan.to_json());
  write_json_artifact(cfg, "model_bn.json", m.to_json());
  return 0;
}

int cmd_pressure(const RunConfig& cfg, const std::string& model_file,
                 double t_min, double t_max, int steps) {
  if (steps < 1) throw InputError("--steps must be at least 1");
  MarkovModel m = load_model(model_file);
  std::string csv = "t,pressure_lower,pressure_upper\n";
  for (int k = 0; k < steps; ++k) {
    double t = steps == 1
                   ? t_min
                   : t_min + (t_max - t_min) * k / static_cast<double>(steps - 1);
    auto [lo, hi] =
        pressure(m, PotentialSpec::log_deriv_scaled(t), cfg.pressure_order);
    csv += fmt_double(t) + "," + fmt_double(lo) + "," + fmt_double(hi) + "\n";
  }
  csv += "# entropy=" + fmt_double(entropy(m)) + "\n";
  try {
    auto [dlo, dhi] = bowen_dimension(m, cfg.pressure_order, cfg.dimension_tol);
    csv += "# bowen_lower=" + fmt_double(dlo) + "\n";
    csv += "# bowen_upper=" + fmt_double(dhi) + "\n";
  } catch (const Error& e) {
    csv += std::string("# bowen=unavailable (") + e.what() + ")\n";
  }
  write_csv_artifact(cfg, "pressure.csv", csv);
  return 0;
}

int cmd_dimension(const RunConfig& cfg, const std::string& model_file,
                  const std::string& suffix) {
  MarkovModel m = load_model(model_file);
  ThermoReport rep = dimension_report(m, cfg.pressure_order, cfg.dimension_tol);
  write_json_artifact(cfg, "dimension" + suffix + ".json", rep.to_json());
  return 0;
}

int cmd_livshitz(const RunConfig& cfg, const std::string& model_file,
                 double t_scale, double constant) {
  MarkovModel m = load_model(model_file);
  RigidityVerdict v = livshitz_test(
      m, PotentialSpec::log_deriv_scaled(t_scale),
      PotentialSpec::constant(constant), cfg.max_period, cfg.tol,
      cfg.pressure_order);
  write_json_artifact(cfg, "livshitz.json", v.to_json());
  std::cout << "livshitz: " << v.kind << " (residual "
            << fmt_double(v.residual) << ")\n";
  return v.positive() ? 0 : 1;
}

int cmd_affine(const RunConfig& cfg, const std::string& model_file) {
  MarkovModel m = load_model(model_file);
  RigidityVerdict v = affine_structure_test(m, cfg.max_period, cfg.tol);
  write_json_artifact(cfg, "affine.json", v.to_json());
  std::cout << "affine structure: " << v.kind << " (residual "
            << fmt_double(v.residual) << ")\n";
  return v.positive() ? 0 : 1;
}

int cmd_compare(const RunConfig& cfg, const std::string& map_file_f,
                const std::string& map_file_g) {
  MapSpec f = load_map(map_file_f);
  MapSpec g = load_map(map_file_g);
  RigidityReport rep;
  try {
    rep = rigidity_verdict(f, g, cfg.max_period, cfg.tol);
  } catch (const BridgeNotFoundError& e) {
    // the two maps admit no matched symbolic model: negative verdict, but
    // recorded as a matching failure rather than a divergence certificate
    nlohmann::ordered_json j;
    j["certificate"] = "MODEL_MATCHING_FAILED";
    j["criteria_met"] = false;
    j["reason"] = e.what();
    write_json_artifact(cfg, "verdict.json", std::move(j));
    std::cout << "verdict: MODEL_MATCHING_FAILED\n";
    return 1;
  }
  // persist the intermediate artifacts so each stage can be re-run alone
  write_json_artifact(cfg, "model_first.json", rep.model_f.to_json());
  write_json_artifact(cfg, "model_second.json", rep.model_g.to_json());
  write_json_artifact(cfg, "plan_first.json", rep.plan_f.to_json());
  write_json_artifact(cfg, "plan_second.json", rep.plan_g.to_json());
  write_json_artifact(cfg, "verdict.json", rep.to_json());
  std::cout << "verdict: " << rep.certificate << "\n";
  return rep.certificate == "CONFORMAL_CONJUGACY_CRITERIA_MET" ? 0 : 1;
}

int cmd_full(const RunConfig& cfg, const std::string& map_file_f,
             const std::string& map_file_g) {
  cmd_analyze(cfg, map_file_f, "_first");
  cmd_analyze(cfg, map_file_g, "_second");
  cmd_orbits(cfg, map_file_f, "_first");
  cmd_orbits(cfg, map_file_g, "_second");
  int verdict = cmd_compare(cfg, map_file_f, map_file_g);
  // dimension reports for both matched models when they were produced
  std::string first = out_path(cfg, "model_first.json");
  if (std::filesystem::exists(first)) {
    cmd_dimension(cfg, first, "_first");
    cmd_dimension(cfg, out_path(cfg, "model_second.json"), "_second");
  }
  return verdict;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "holorigid: expansion-certified symbolic models, pressure and "
      "dimension reports, and conformal-rigidity verdicts for "
      "polynomial-like maps"};
  app.require_subcommand(1);

  std::string config_path, out_dir;
  int max_period = 0, order = 0;
  double cell = 0.0, tol = 0.0;
  std::uint64_t seed = 0;
  app.add_option("--config", config_path, "JSON run configuration");
  app.add_option("--out", out_dir, "output directory (overrides config)");
  app.add_option("--max-period", max_period, "longest tested cyclic word");
  app.add_option("--order", order, "finite partition-sum order");
  app.add_option("--cell", cell, "grid cell size");
  app.add_option("--tol", tol, "verdict acceptance tolerance");
  app.add_option("--seed", seed, "seed for randomized property trials");

  std::string map_a, map_b, model_file;
  double t_min = 0.0, t_max = 1.0, t_scale = 1.0, constant = 0.0;
  int steps = 9;

  CLI::App* analyze = app.add_subcommand(
      "analyze", "degeneracy flags, critical orbit, multiplier spectrum");
  analyze->add_option("map", map_a, "map JSON file")->required();

  CLI::App* orbits = app.add_subcommand(
      "orbits", "periodic orbits up to the configured period, as CSV");
  orbits->add_option("map", map_a, "map JSON file")->required();

  CLI::App* build_an = app.add_subcommand(
      "build-an", "grid model over the off-critical invariant set");
  build_an->add_option("map", map_a, "map JSON file")->required();

  CLI::App* build_bn = app.add_subcommand(
      "build-bn", "anchored orbit model with connecting bridges");
  build_bn->add_option("map", map_a, "map JSON file")->required();

  CLI::App* pressure_cmd = app.add_subcommand(
      "pressure", "two-sided pressure curve over an exponent grid");
  pressure_cmd->add_option("model", model_file, "model JSON file")->required();
  pressure_cmd->add_option("--t-min", t_min, "grid start (default 0)");
  pressure_cmd->add_option("--t-max", t_max, "grid end (default 1)");
  pressure_cmd->add_option("--steps", steps, "number of rows (default 9)");

  CLI::App* dimension = app.add_subcommand(
      "dimension", "dimension bracket, entropy, and measure report");
  dimension->add_option("model", model_file, "model JSON file")->required();

  CLI::App* livshitz = app.add_subcommand(
      "livshitz", "orbit-sum cohomology test of two potentials");
  livshitz->add_option("model", model_file, "model JSON file")->required();
  livshitz->add_option("--t-scale", t_scale,
                       "scale of the log-derivative potential (default 1)");
  livshitz->add_option("--constant", constant,
                       "value of the constant potential (default 0)");

  CLI::App* affine = app.add_subcommand(
      "affine", "per-edge-weight consistency of cycle derivative sums");
  affine->add_option("model", model_file, "model JSON file")->required();

  CLI::App* compare = app.add_subcommand(
      "compare", "full conjugacy-criteria pipeline for a pair of maps");
  compare->add_option("map_first", map_a, "first map JSON file")->required();
  compare->add_option("map_second", map_b, "second map JSON file")->required();

  CLI::App* full = app.add_subcommand(
      "full", "analyze + orbits + compare + dimension in one run");
  full->add_option("map_first", map_a, "first map JSON file")->required();
  full->add_option("map_second", map_b, "second map JSON file")->required();

  for (CLI::App* sub : app.get_subcommands({})) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;  // flag misuse is an input error
  }

  try {
    RunConfig cfg;
    if (!config_path.empty()) cfg = RunConfig::load(config_path);
    if (app.count("--out")) cfg.out_dir = out_dir;
    if (app.count("--max-period")) cfg.max_period = max_period;
    if (app.count("--order")) cfg.pressure_order = order;
    if (app.count("--cell")) cfg.cell_size = cell;
    if (app.count("--tol")) cfg.tol = tol;
    if (app.count("--seed")) cfg.seed = seed;
    cfg.validate();
    persist_config(cfg);

    if (analyze->parsed()) return cmd_analyze(cfg, map_a, "");
    if (orbits->parsed()) return cmd_orbits(cfg, map_a, "");
    if (build_an->parsed()) return cmd_build_an(cfg, map_a);
    if (build_bn->parsed()) return cmd_build_bn(cfg, map_a);
    if (pressure_cmd->parsed())
      return cmd_pressure(cfg, model_file, t_min, t_max, steps);
    if (dimension->parsed()) return cmd_dimension(cfg, model_file, "");
    if (livshitz->parsed())
      return cmd_livshitz(cfg, model_file, t_scale, constant);
    if (affine->parsed()) return cmd_affine(cfg, model_file);
    if (compare->parsed()) return cmd_compare(cfg, map_a, map_b);
    if (full->parsed()) return cmd_full(cfg, map_a, map_b);
    return 2;
  } catch (const InputError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  } catch (const UncertifiedModelError& e) {
    std::cerr << "uncertified model: " << e.what() << "\n";
    return 3;
  } catch (const DegenerateMapError& e) {
    std::cerr << "degenerate map: " << e.what() << "\n";
    return 4;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
