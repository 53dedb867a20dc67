#pragma once

#include <cstddef>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

namespace biotcr::cli {

/// Everything a command needs. Defaults reproduce the two experiments.
struct RunConfig {
  std::string command;  // converge | footing | run

  // converge
  std::vector<std::size_t> levels{4, 8, 16, 32, 64};
  std::vector<std::size_t> steps_per_level;  // empty: one step per mesh division
  double final_time = 1.0;
  double young = 1.0;
  double poisson = 0.2;
  double conductivity = 1.0;

  // footing and run
  std::size_t nx = 32;
  double tau = 1e-3;
  std::size_t steps = 1;
  std::string problem = "footing";  // run only: footing | manufactured
  std::string restart;              // run only: state checkpoint to start from
  double lambda = 12500.0;
  double mu = 8333.0;
  double kappa = 1e-6;
  std::string kappa_spec = "homogeneous";  // homogeneous | checkerboard
  double checker_low = 1e-3;
  double checker_high = 1.0;

  // shared
  std::string mode;  // lumped | consistent | both; empty picks the command default
  double gamma1 = 0.5;
  std::string diagonal = "sw-ne";  // sw-ne | alternating
  bool jump_boundary = true;
  bool jump_normal_only = false;
  std::string output = "biotcr-out";
  std::vector<std::string> formats{"csv", "vtk"};
};

/// Bad flags, bad config file or values outside the operations' preconditions.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Parses argv, merging an optional --config file (flags win). Returns
/// false with `exit_code` set when parsing ended early (help, or a usage
/// error already printed to err).
bool parse(int argc, const char* const* argv, RunConfig& config, int& exit_code, std::ostream& out,
           std::ostream& err);

/// Checks value ranges and resolves the command default for `mode`.
/// Throws UsageError.
void validate(RunConfig& config);

/// key=value lines accepted back by --config. The command is not included.
std::string serialize(const RunConfig& config);

/// Runs a validated config. Returns the process exit status.
int execute(const RunConfig& config, std::ostream& out, std::ostream& err);

/// parse + validate + execute.
int main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace biotcr::cli
