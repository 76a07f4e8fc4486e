// Command-line front end: truncated/full Poisson solves, the semilinear
// iteration, kernel tables, convergence studies, and the verification suite
// for the regional fractional Laplacian on the unit ball.
#include <cstdio>
#include <exception>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "regfrac/io.hpp"
#include "regfrac/report.hpp"
#include "regfrac/types.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitVerificationFailure = 1;
constexpr int kExitConfigError = 2;

void add_common_flags(CLI::App* cmd, regfrac::RunConfig& cfg, std::string& config_path,
                      std::vector<std::string>& given) {
  auto track = [&given](const std::string& name) {
    return [&given, name](auto) { given.push_back(name); };
  };
  cmd->add_option("--config", config_path, "JSON config file mirroring the run fields");
  cmd->add_option("--s", cfg.s, "fractional order in (0, 1/2]")->each(track("s"));
  cmd->add_option("--dim", cfg.dim, "space dimension N >= 2")->each(track("dim"));
  cmd->add_option("--nodes", cfg.nodes, "grid intervals M")->each(track("nodes"));
  cmd->add_option("--beta", cfg.beta, "grid grading exponent >= 1")->each(track("beta"));
  cmd->add_option("--r0", cfg.r0, "truncation radius (repeatable)")->each(track("r0"));
  cmd->add_option("--eps", cfg.eps, "semilinear eps (repeatable)")->each(track("eps"));
  cmd->add_option("--p", cfg.p, "semilinear exponent p > 1")->each(track("p"));
  cmd->add_option("--source", cfg.source, "source descriptor")->each(track("source"));
  cmd->add_option("--h1", cfg.h1, "semilinear h1 descriptor")->each(track("h1"));
  cmd->add_option("--h2", cfg.h2, "semilinear h2 descriptor")->each(track("h2"));
  cmd->add_option("--seed", cfg.seed, "seed for randomized checks")->each(track("seed"));
  cmd->add_option("--out", cfg.out, "output path stem")->each(track("out"));
  cmd->add_option("--format", cfg.format, "csv | json")->each(track("format"));
  cmd->add_flag("--allow-large-s", cfg.allow_large_s, "lift the s <= 1/2 restriction");
}

void merge_cli_over_file(regfrac::RunConfig& cfg, const regfrac::RunConfig& cli,
                         const std::vector<std::string>& given, bool large_s_flag) {
  for (const auto& name : given) {
    if (name == "s") cfg.s = cli.s;
    else if (name == "dim") cfg.dim = cli.dim;
    else if (name == "nodes") cfg.nodes = cli.nodes;
    else if (name == "beta") cfg.beta = cli.beta;
    else if (name == "r0") cfg.r0 = cli.r0;
    else if (name == "eps") cfg.eps = cli.eps;
    else if (name == "p") cfg.p = cli.p;
    else if (name == "source") cfg.source = cli.source;
    else if (name == "h1") cfg.h1 = cli.h1;
    else if (name == "h2") cfg.h2 = cli.h2;
    else if (name == "seed") cfg.seed = cli.seed;
    else if (name == "out") cfg.out = cli.out;
    else if (name == "format") cfg.format = cli.format;
  }
  if (large_s_flag) cfg.allow_large_s = true;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"radial solver for the regional fractional Laplacian on the unit ball"};
  app.require_subcommand(1);

  regfrac::RunConfig cli_cfg;
  std::string config_path;
  std::vector<std::string> given;
  const std::vector<std::string> commands{"phi", "poisson", "semilinear", "verify",
                                          "convergence"};
  const std::vector<std::string> help{
      "kernel table: phi and the killing potential on the grid",
      "linear solve (full ball, truncated, or exhaustion study)",
      "monotone iteration for the semilinear problem",
      "run the whole property-verification suite",
      "extension-identity residuals across grid refinements"};
  for (std::size_t k = 0; k < commands.size(); ++k) {
    CLI::App* sub = app.add_subcommand(commands[k], help[k]);
    add_common_flags(sub, cli_cfg, config_path, given);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    std::cerr << e.what() << "\n" << app.help() << std::flush;
    return kExitConfigError;
  }

  regfrac::RunConfig cfg;
  try {
    if (!config_path.empty()) cfg = regfrac::config_from_json_file(config_path);
    merge_cli_over_file(cfg, cli_cfg, given, cli_cfg.allow_large_s);
    cfg.command = app.get_subcommands().front()->get_name();

    regfrac::RunOutput out = regfrac::run_command(cfg);
    if (!out.log.empty()) std::cerr << out.log;
    for (const auto& [name, content] : out.files) {
      if (cfg.out.empty() && out.files.size() == 1) {
        std::cout << content;
      } else {
        regfrac::atomic_write(name, content);
        std::cerr << "wrote " << name << "\n";
      }
    }
    return out.verification_failed ? kExitVerificationFailure : kExitOk;
  } catch (const regfrac::ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return kExitConfigError;
  } catch (const regfrac::DomainError& e) {
    std::cerr << "domain error: " << e.what() << "\n";
    return kExitConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitVerificationFailure;
  }
}
