#pragma once

#include <cstdint>
#include <ostream>
#include <span>
#include <vector>

#include "qsearch/hamiltonian.hpp"

namespace qsearch {

// One closed-form vs full-dimension comparison.
struct EquivalenceRecord {
  HamiltonianParams params;
  std::int64_t n_items = 0;
  double formula_time = 0.0;         // pi / (2 M_e)
  double formula_probability = 0.0;  // 1 - x^2 + A_e / M_e^2
  double oracle_peak_time = 0.0;     // scan_peak
  double oracle_peak_probability = 0.0;
  double oracle_at_formula_time = 0.0;  // full evolution evaluated at pi / (2 M_e)
  double two_level_peak_time = 0.0;     // first maximum of the effective model
  double two_level_peak_probability = 0.0;
  double residual = 0.0;                // time/probability relation
  double max_norm_error = 0.0;
  double max_leakage = 0.0;
};

// Grid E in {0.5, 1, 2}, eps in {0, 0.1, 0.5 E}, phi in {0, pi/4, pi/2, 3pi/4},
// delta in {0, +-beta/2, +-0.1 Ex}, for each N in n_values.
std::vector<HamiltonianParams> equivalence_parameter_grid(std::int64_t n_items);

EquivalenceRecord compare_with_oracle(const HamiltonianParams& params, const SearchSpace& space,
                                      int grid);

std::vector<EquivalenceRecord> oracle_equivalence_suite(std::span<const std::int64_t> n_values,
                                                        int grid);

inline double relative_gap(double a, double b) {
  const double scale = b == 0.0 ? 1.0 : (b < 0.0 ? -b : b);
  return (a > b ? a - b : b - a) / scale;
}

struct VerifyCounts {
  int passed = 0;
  int failed = 0;
};

struct VerifyReport {
  VerifyCounts oracle_at_formula_time;  // full evolution reproduces P at T
  VerifyCounts peak_equivalence;        // oracle peak == effective-model peak
  VerifyCounts relation_identity;       // residual < 1e-9
  VerifyCounts unitarity;               // norm and leakage < 1e-10
  VerifyCounts formula_is_peak;         // informational; not gating

  bool ok() const {
    return oracle_at_formula_time.failed == 0 && peak_equivalence.failed == 0 &&
           relation_identity.failed == 0 && unitarity.failed == 0;
  }
};

VerifyReport summarize(std::span<const EquivalenceRecord> records);
void print_report(const VerifyReport& report, std::ostream& out);

}  // namespace qsearch
