#include "qsearch/verify.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "qsearch/analysis.hpp"
#include "qsearch/evolution.hpp"
#include "qsearch/oracle.hpp"

namespace qsearch {

namespace {
constexpr double kPeakTolerance = 1e-6;
constexpr double kRelationTolerance = 1e-9;
constexpr double kUnitarityTolerance = 1e-10;
constexpr int kUnitaritySamples = 8;
}  // namespace

std::vector<HamiltonianParams> equivalence_parameter_grid(std::int64_t n_items) {
  const SearchSpace space(n_items);
  const double pi = std::numbers::pi;
  std::vector<HamiltonianParams> out;
  for (double energy : {0.5, 1.0, 2.0}) {
    for (double eps : {0.0, 0.1, 0.5 * energy}) {
      for (double phi : {0.0, pi / 4, pi / 2, 3 * pi / 4}) {
        const HamiltonianParams base{energy, eps, phi, 0.0};
        const double b = beta(base, space);
        const double shift = 0.1 * energy * space.overlap();
        for (double delta : {0.0, b / 2, -b / 2, shift, -shift}) {
          HamiltonianParams p = base;
          p.delta = delta;
          out.push_back(p);
        }
      }
    }
  }
  return out;
}

EquivalenceRecord compare_with_oracle(const HamiltonianParams& params, const SearchSpace& space,
                                      int grid) {
  EquivalenceRecord rec;
  rec.params = params;
  rec.n_items = space.n_items();
  const EvolutionSummary summary = summary_perturbed(params, space);
  rec.formula_time = summary.proper_time;
  rec.formula_probability = summary.peak_probability;
  const PeakPoint two_level = true_peak(params, space);
  rec.two_level_peak_time = two_level.time;
  rec.two_level_peak_probability = two_level.probability;
  rec.residual = relation_residual(params, space);

  const SpectralPropagator prop(build_full(params, space));
  const PeakScanResult scan = scan_peak(prop, 4.0 * summary.proper_time, grid);
  rec.oracle_peak_time = scan.peak_time;
  rec.oracle_peak_probability = scan.peak_probability;
  rec.oracle_at_formula_time = prop.target_probability(summary.proper_time);

  for (int i = 0; i <= kUnitaritySamples; ++i) {
    const double t = 4.0 * summary.proper_time * i / kUnitaritySamples;
    const Eigen::VectorXcd state = prop.evolve(t);
    rec.max_norm_error = std::max(rec.max_norm_error, std::abs(state.norm() - 1.0));
    rec.max_leakage = std::max(rec.max_leakage, leakage(state, prop.target_index()));
  }
  return rec;
}

std::vector<EquivalenceRecord> oracle_equivalence_suite(std::span<const std::int64_t> n_values,
                                                        int grid) {
  std::vector<EquivalenceRecord> out;
  for (std::int64_t n : n_values) {
    const SearchSpace space(n);
    for (const HamiltonianParams& p : equivalence_parameter_grid(n)) {
      out.push_back(compare_with_oracle(p, space, grid));
    }
  }
  return out;
}

namespace {
void tally(VerifyCounts& c, bool ok) { ok ? ++c.passed : ++c.failed; }
}  // namespace

VerifyReport summarize(std::span<const EquivalenceRecord> records) {
  VerifyReport r;
  for (const EquivalenceRecord& rec : records) {
    tally(r.oracle_at_formula_time,
          relative_gap(rec.oracle_at_formula_time, rec.formula_probability) < kPeakTolerance);
    tally(r.peak_equivalence,
          relative_gap(rec.oracle_peak_probability, rec.two_level_peak_probability) <
                  kPeakTolerance &&
              relative_gap(rec.oracle_peak_time, rec.two_level_peak_time) < kPeakTolerance);
    tally(r.relation_identity, std::abs(rec.residual) < kRelationTolerance);
    tally(r.unitarity,
          rec.max_norm_error < kUnitarityTolerance && rec.max_leakage < kUnitarityTolerance);
    tally(r.formula_is_peak,
          relative_gap(rec.oracle_peak_probability, rec.formula_probability) < kPeakTolerance &&
              relative_gap(rec.oracle_peak_time, rec.formula_time) < kPeakTolerance);
  }
  return r;
}

void print_report(const VerifyReport& report, std::ostream& out) {
  auto line = [&](const char* name, const VerifyCounts& c, const char* note) {
    out << name << ',' << c.passed << ',' << c.failed << ',' << note << '\n';
  };
  out << "check,passed,failed,gating\n";
  line("oracle_at_formula_time", report.oracle_at_formula_time, "yes");
  line("oracle_peak_vs_two_level_peak", report.peak_equivalence, "yes");
  line("time_probability_relation", report.relation_identity, "yes");
  line("unitarity_and_leakage", report.unitarity, "yes");
  // pi/(2M) is the argmax only when eps sin(phi) = 0.
  line("formula_time_is_peak", report.formula_is_peak, "no");
}

}  // namespace qsearch
