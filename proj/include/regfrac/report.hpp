#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "regfrac/assembly.hpp"
#include "regfrac/poisson.hpp"
#include "regfrac/semilinear.hpp"
#include "regfrac/verify.hpp"

namespace regfrac {

// One run of the tool: exactly one command plus its inputs. A JSON config
// file mirrors these field names; command-line flags override file values.
struct RunConfig {
  std::string command;  // phi | poisson | semilinear | verify | convergence
  double s = 0.25;
  int dim = 2;
  int nodes = 256;  // M
  double beta = 2.0;
  std::string source = "two-minus-r-squared";
  std::string h1 = "constant:1";
  std::string h2 = "constant:1";
  double p = 2.0;
  std::vector<double> r0;   // truncation radii (poisson / exhaustion)
  std::vector<double> eps;  // semilinear sweep
  std::uint64_t seed = 42;
  std::string out;          // output path stem ("" = stdout)
  std::string format = "json";  // csv | json
  bool allow_large_s = false;

  void validate() const;
};

// Serialized run artifacts: file name -> content. Writing is the caller's
// business (the CLI writes atomically).
struct RunOutput {
  std::vector<std::pair<std::string, std::string>> files;
  bool verification_failed = false;
  std::string log;  // human-readable progress, not part of the artifacts
};

RunOutput run_phi(const RunConfig& cfg);
RunOutput run_poisson(const RunConfig& cfg);
RunOutput run_semilinear(const RunConfig& cfg);
RunOutput run_convergence(const RunConfig& cfg);
RunOutput run_verify(const RunConfig& cfg);
RunOutput run_command(const RunConfig& cfg);

// The property suite behind `verify`.
VerificationReport verify_suite(const RunConfig& cfg);

// JSON text of a verification report: {config, checks, summary}. Timings are
// reported on the log stream, not here, so identical configs give identical
// bytes.
std::string report_to_json(const RunConfig& cfg, const VerificationReport& report);

std::string solve_report_to_json(const RunConfig& cfg, double r0_used,
                                 const SolveReport& rep);

RunConfig config_from_json_file(const std::string& path);

}  // namespace regfrac
