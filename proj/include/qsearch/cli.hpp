#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "qsearch/hamiltonian.hpp"

namespace qsearch::cli {

enum class Command { Curve, Sweep, Classify, Verify, Oshima, Correct, BetaScaling };
enum class SweepAxis { Delta, Phi, Eps, N };

struct SweepSpec {
  SweepAxis axis = SweepAxis::Delta;
  double min = 0.0;
  double max = 0.0;
  int steps = 2;
};

struct RunConfig {
  Command command = Command::Curve;
  HamiltonianParams params;
  SearchSpace space{4};
  std::optional<SweepSpec> sweep;
  std::string output_path = "-";
  int worker_count = 1;

  int steps = 1001;            // curve samples
  int grid = 4096;             // oracle scan points
  std::int64_t n_max = 256;    // verify
  std::vector<std::int64_t> n_list;  // oshima, beta-scaling
  int eps_steps = 64;          // correct
  int phi_steps = 64;
};

// Bad flags, bad values or unknown config keys. what() names the token.
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

std::string usage();

// args excludes the program name. A `--config FILE` argument loads flat
// key=value lines ('#' starts a comment); explicit flags win over file keys.
RunConfig parse_config(const std::vector<std::string>& args);

// Exit codes: 0 success, 1 precondition violation, 2 numerical failure.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

// Parses and runs; usage errors print to err and return 1.
int main_entry(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// One CSV line (no newline) per sweep grid point, evaluated on `workers`
// OpenMP threads and returned in grid order.
std::string sweep_header(const RunConfig& config);
std::vector<std::string> sweep_rows(const RunConfig& config, int workers);
std::vector<std::string> sweep_rows_serial(const RunConfig& config);

}  // namespace qsearch::cli
