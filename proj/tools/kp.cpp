#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "kp/errors.hpp"
#include "kp/run.hpp"

namespace {

struct Flags {
  std::optional<std::string> config;
  std::optional<std::string> kind;
  std::optional<double> alpha, beta, sigma, area, radius, a0;
  bool verify = false;
  std::optional<std::string> out;
  std::optional<std::string> format;
  std::optional<std::string> param;
  std::optional<std::string> range;
  std::optional<std::string> sigma_range;
  std::optional<std::string> area_range;
  std::vector<std::string> shapes;
  bool allow_inadmissible = false;
};

void add_common(CLI::App* sub, Flags& f) {
  sub->add_option("--config", f.config, "JSON config file; flags override its values");
  sub->add_option("--case", f.kind, "ellipse | dilation | oval");
  sub->add_option("--alpha", f.alpha, "bending stiffness (default 1)");
  sub->add_option("--beta", f.beta, "shape penalty weight");
  sub->add_option("--sigma", f.sigma, "surface tension");
  sub->add_option("--area", f.area, "cross-section area");
  sub->add_option("--radius", f.radius, "midline radius");
  sub->add_option("--a0", f.a0, "dilation base semi-axis");
  sub->add_option("--out", f.out, "output path (stdout when absent)");
  sub->add_option("--format", f.format, "json | csv | svg");
}

kp::RunConfig build_config(kp::Command command, const Flags& f) {
  kp::RunConfig cfg;
  bool have_case = false;
  bool have_beta = false, have_sigma = false, have_area = false, have_radius = false;
  if (f.config) {
    std::ifstream in(*f.config);
    if (!in) throw kp::ConfigError("cannot read config '" + *f.config + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    cfg = kp::parse_config_json(ss.str());
    have_case = have_beta = have_sigma = have_area = have_radius = true;
  }
  cfg.command = command;
  if (f.kind) {
    try {
      cfg.kind = kp::parse_case(*f.kind);
    } catch (const kp::DomainError& e) {
      throw kp::ConfigError(e.what());
    }
    have_case = true;
  }
  if (!have_case) throw kp::ConfigError("--case is required");
  if (f.alpha) cfg.params.alpha = *f.alpha;
  if (f.beta) cfg.params.beta = *f.beta, have_beta = true;
  if (f.sigma) cfg.params.sigma = *f.sigma, have_sigma = true;
  if (f.area) cfg.params.area = *f.area, have_area = true;
  if (f.radius) cfg.params.radius = *f.radius, have_radius = true;
  if (f.a0) cfg.a0 = *f.a0;
  if (f.verify) cfg.verify = true;
  if (f.out) cfg.out_path = *f.out;
  if (f.format) cfg.format = kp::parse_format(*f.format);

  if (command == kp::Command::Sweep) {
    if (f.param && f.range) {
      cfg.sweep = kp::SweepSpec{kp::parse_sweep_param(*f.param), kp::parse_range(*f.range)};
    } else if (f.param || f.range) {
      throw kp::ConfigError("sweep needs both --param and --range");
    }
    if (!cfg.sweep) throw kp::ConfigError("sweep needs --param and --range");
    switch (cfg.sweep->param) {
      case kp::SweepParam::Sigma: have_sigma = true; break;
      case kp::SweepParam::Beta: have_beta = true; break;
      case kp::SweepParam::Area: have_area = true; break;
      case kp::SweepParam::Radius: have_radius = true; break;
    }
    if (!f.format && !f.config) cfg.format = kp::OutputFormat::Csv;
  }
  if (command == kp::Command::Region) {
    if (f.sigma_range) {
      if (!cfg.region) cfg.region = kp::RegionSpec{};
      cfg.region->sigma = kp::parse_range(*f.sigma_range);
    }
    if (f.area_range) {
      if (!cfg.region) cfg.region = kp::RegionSpec{};
      cfg.region->area = kp::parse_range(*f.area_range);
    }
    if (!cfg.region || (!f.config && (!f.sigma_range || !f.area_range))) {
      throw kp::ConfigError("region needs --sigma-range and --area-range");
    }
    have_sigma = have_area = true;
    if (!f.format) cfg.format = kp::OutputFormat::Csv;
  }
  if (command == kp::Command::Emit) {
    if (!f.shapes.empty()) {
      cfg.shapes.clear();
      for (const auto& s : f.shapes) cfg.shapes.push_back(kp::parse_shape(s));
    }
    if (cfg.shapes.empty()) cfg.shapes.push_back(kp::ShapeKind::CrossSection);
    if (f.allow_inadmissible) cfg.allow_inadmissible = true;
    if (!f.format && !f.config) cfg.format = kp::OutputFormat::Svg;
  }

  std::string missing;
  if (!have_beta) missing += " --beta";
  if (!have_sigma) missing += " --sigma";
  if (!have_area) missing += " --area";
  if (!have_radius) missing += " --radius";
  if (!missing.empty()) throw kp::ConfigError("missing required parameters:" + missing);
  try {
    if (command != kp::Command::Sweep && command != kp::Command::Region) kp::validate(cfg.params);
  } catch (const kp::DomainError& e) {
    throw kp::ConfigError(e.what());
  }
  cfg.n_nodes = kp::nodes_from_env(cfg.n_nodes);
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Planar rod + soap film critical points"};
  app.require_subcommand(1);
  Flags f;

  auto* solve = app.add_subcommand("solve", "solve one case");
  add_common(solve, f);
  solve->add_flag("--verify", f.verify, "run the discretized-energy verifier");

  auto* sweep = app.add_subcommand("sweep", "sweep one parameter");
  add_common(sweep, f);
  sweep->add_option("--param", f.param, "sigma | beta | area | radius");
  sweep->add_option("--range", f.range, "LO:HI:N");

  auto* region = app.add_subcommand("region", "oval admissibility map over (sigma, area)");
  add_common(region, f);
  region->add_option("--sigma-range", f.sigma_range, "LO:HI:N");
  region->add_option("--area-range", f.area_range, "LO:HI:N");

  auto* emit = app.add_subcommand("emit", "export shapes");
  add_common(emit, f);
  emit->add_option("--shape", f.shapes, "section | midline | film | tube")->delimiter(',');
  emit->add_flag("--allow-inadmissible", f.allow_inadmissible, "emit even when constraints fail");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kp::kExitConfig;
  }

  kp::Command command = kp::Command::Solve;
  if (*sweep) command = kp::Command::Sweep;
  if (*region) command = kp::Command::Region;
  if (*emit) command = kp::Command::Emit;

  kp::RunConfig cfg;
  try {
    cfg = build_config(command, f);
  } catch (const kp::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kp::kExitConfig;
  }
  return kp::run(cfg, std::cout, std::cerr);
}
