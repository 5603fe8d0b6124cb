// Command-line front end: assemble, eigs, verify-geometry, solve-mp,
// solve-link, verify-paper, preset, run.

#include "mixnl/config.hpp"
#include "mixnl/error.hpp"
#include "mixnl/pipeline.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <map>
#include <string>
#include <vector>

namespace {

struct Common {
  std::string config_path;
  std::vector<std::string> overrides;
  std::string output;
  std::string dump_matrices;
  bool eigenvectors = false;
  bool quiet = false;
  // solver shortcuts
  double tol = 0.0;
  int max_iter = 0;
  int seeds = -1;
  int path_points = 0;
};

mixnl::RunConfig resolve(const Common& c)
{
  mixnl::RunConfig cfg;
  if (!c.config_path.empty())
    cfg = mixnl::load_config(c.config_path);
  std::vector<std::string> sets = c.overrides;
  if (!c.output.empty())
    sets.push_back("output=\"" + c.output + "\"");
  if (c.tol > 0.0)
    sets.push_back("solver.tol=" + std::to_string(c.tol));
  if (c.max_iter > 0)
    sets.push_back("solver.max_iter=" + std::to_string(c.max_iter));
  if (c.seeds >= 0)
    sets.push_back("solver.seeds=" + std::to_string(c.seeds));
  if (c.path_points > 0)
    sets.push_back("solver.path_points=" + std::to_string(c.path_points));
  return mixnl::apply_overrides(cfg, sets);
}

void add_common(CLI::App* sub, Common& c)
{
  sub->add_option("-c,--config", c.config_path, "TOML run configuration")->check(CLI::ExistingFile);
  sub->add_option("--set", c.overrides, "Override a config key (key=value, TOML syntax)");
  sub->add_option("-o,--output", c.output, "Output directory");
  sub->add_option("--dump-matrices", c.dump_matrices, "Write mass/stiffness/gagliardo .coo files here");
  sub->add_flag("--eigenvectors", c.eigenvectors, "Include eigenvectors in eigs.csv");
  sub->add_flag("-q,--quiet", c.quiet, "Do not print the report");
}

void add_solver(CLI::App* sub, Common& c)
{
  sub->add_option("--tol", c.tol, "Residual tolerance");
  sub->add_option("--max-iter", c.max_iter, "Iteration cap");
  sub->add_option("--seeds", c.seeds, "Perturbed seeds per amplitude (linking)");
  sub->add_option("--path-points", c.path_points, "Mountain-pass path points");
}

int execute(const Common& c, mixnl::Stage stage)
{
  const mixnl::RunConfig cfg = resolve(c);
  mixnl::RunOptions opts;
  if (!c.dump_matrices.empty())
    opts.dump_matrices = c.dump_matrices;
  opts.eigenvectors = c.eigenvectors;
  const mixnl::RunOutcome out = mixnl::run(cfg, stage, opts);
  if (!c.quiet)
    std::cout << out.report.dump(2) << '\n';
  if (out.error) {
    std::cerr << "error: " << *out.error << '\n';
    return 2;
  }
  return out.ok ? 0 : 1;
}

} // namespace

int main(int argc, char** argv)
{
  CLI::App app{"Mixed-order nonlocal Neumann problems: assembly, spectra and critical points"};
  app.require_subcommand(1);
  app.set_version_flag("--version", mixnl::kToolVersion);

  Common common;
  const std::vector<std::pair<std::string, mixnl::Stage>> stages = {
      {"assemble", mixnl::Stage::assemble},
      {"eigs", mixnl::Stage::eigs},
      {"verify-geometry", mixnl::Stage::geometry},
      {"solve-mp", mixnl::Stage::solve_mp},
      {"solve-link", mixnl::Stage::solve_link},
      {"verify-paper", mixnl::Stage::verify_paper},
      {"run", mixnl::Stage::full},
  };
  const std::map<std::string, std::string> help = {
      {"assemble", "Assemble mass, stiffness and nonlocal matrices"},
      {"eigs", "Solve the Neumann eigenproblem and write eigs.csv"},
      {"verify-geometry", "Certify the mountain-pass or linking geometry"},
      {"solve-mp", "Mountain-pass solve (lambda < 1)"},
      {"solve-link", "Linking solve (lambda >= 1)"},
      {"verify-paper", "Run the worked counterexamples"},
      {"run", "Full pipeline with the branch chosen by lambda"},
  };
  std::map<CLI::App*, mixnl::Stage> subs;
  for (const auto& [name, stage] : stages) {
    CLI::App* sub = app.add_subcommand(name, help.at(name));
    add_common(sub, common);
    if (stage == mixnl::Stage::solve_mp || stage == mixnl::Stage::solve_link ||
        stage == mixnl::Stage::full)
      add_solver(sub, common);
    subs[sub] = stage;
  }

  std::string preset_name;
  std::vector<std::string> preset_params;
  CLI::App* pre = app.add_subcommand("preset", "Print the TOML configuration of a preset");
  pre->add_option("name", preset_name, "cor1 | cor2 | cor3 | cor4")->required();
  pre->add_option("--param", preset_params, "Preset parameter (name=value)");
  pre->add_option("--set", common.overrides, "Override a config key (key=value)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (pre->parsed()) {
      std::map<std::string, double> params;
      for (const std::string& p : preset_params) {
        const auto eq = p.find('=');
        if (eq == std::string::npos)
          throw mixnl::ConfigError(p, "expected name=value");
        try {
          params[p.substr(0, eq)] = std::stod(p.substr(eq + 1));
        } catch (const std::exception&) {
          throw mixnl::ConfigError(p.substr(0, eq), "expected a number");
        }
      }
      const mixnl::RunConfig cfg =
          mixnl::apply_overrides(mixnl::preset(preset_name, params), common.overrides);
      std::cout << mixnl::to_toml(cfg);
      return 0;
    }
    for (const auto& [sub, stage] : subs)
      if (sub->parsed())
        return execute(common, stage);
  } catch (const mixnl::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
