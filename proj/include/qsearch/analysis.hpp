#pragma once

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "qsearch/evolution.hpp"
#include "qsearch/hamiltonian.hpp"
#include "qsearch/oracle.hpp"

namespace qsearch {

enum class Region { BothImproved, TimeOnlyImproved, BothCorrupted, Boundary, Degenerate };
enum class SignCase { Positive, Negative, Zero };

std::string_view to_string(Region r);
std::string_view to_string(SignCase s);

struct PerturbationClass {
  Region region = Region::Degenerate;
  SignCase sign_case = SignCase::Zero;

  friend bool operator==(const PerturbationClass&, const PerturbationClass&) = default;
};

// Least-squares fit of log(observed) against log(n_values).
struct ScalingFit {
  std::vector<double> n_values;
  std::vector<double> observed;
  double exponent = 0.0;
  double r_squared = 0.0;
};

// Requires >= 4 points, all positive. Throws std::invalid_argument otherwise.
ScalingFit fit_power_law(std::span<const double> n_values, std::span<const double> observed);

// Tolerances used to snap the no-boost cases to exact zeros.
inline constexpr double kPhaseSnap = 1e-12;
inline constexpr double kEdgeTolerance = 1e-12;

// True for the configurations that admit no probability boost:
// eps = 0, sin(phi) = 0, or cos(phi) = -Ex/eps.
bool is_degenerate(const HamiltonianParams& params, const SearchSpace& space);

// Ex + eps cos(phi), snapped to 0 within 1e-12 of the energy scale.
double snapped_discriminant(const HamiltonianParams& params, const SearchSpace& space);
SignCase sign_case(const HamiltonianParams& params, const SearchSpace& space);

// Width of the window of energy shifts that raise the success probability:
//   beta = 2x^3 K eps^2 sin^2 phi / (K^2 + (1 - 2x^2) eps^2 sin^2 phi),
//   K = Ex + eps cos(phi).
// params.delta is ignored. Returns exactly 0 in the degenerate cases.
// Throws DegenerateDenominator when the denominator vanishes.
double beta(const HamiltonianParams& params, const SearchSpace& space);

// T_e <= T_0 under an energy shift delta (params.delta is ignored).
bool time_improved(const HamiltonianParams& params, const SearchSpace& space,
                           double delta);
// P_e >= P_0 under an energy shift delta (params.delta is ignored).
bool probability_improved(const HamiltonianParams& params, const SearchSpace& space,
                           double delta);

PerturbationClass classify(const HamiltonianParams& params, const SearchSpace& space,
                           double delta);

// Detuned Farhi-Gutmann runs (eps = 0) measured with the full oracle.
struct OshimaScaling {
  ScalingFit total_time;           // peak_time / peak_probability vs N
  ScalingFit inverse_probability;  // 1 / peak_probability vs N
  std::vector<PeakScanResult> peaks;
};

OshimaScaling oshima_scaling(double energy, double delta, std::span<const std::int64_t> n_list,
                             int grid = kDefaultScanGrid);

struct CorrectionResult {
  PhaseTerm term;
  EvolutionSummary summary;
};

// Grid search over added couplings (eps, phi) for fixed (E, delta). Best is
// max peak_probability, then min proper_time, then min eps. Points without a
// proper time are skipped. Throws std::invalid_argument when no grid point is
// usable.
CorrectionResult error_correction_search(double energy, double delta, const SearchSpace& space,
                                         std::span<const double> eps_grid,
                                         std::span<const double> phi_grid);
// Serial reference for the OpenMP sweep above.
CorrectionResult error_correction_search_serial(double energy, double delta,
                                                const SearchSpace& space,
                                                std::span<const double> eps_grid,
                                                std::span<const double> phi_grid);

// |beta(N)| vs N for a fixed (E, eps, phi).
ScalingFit beta_window_scaling(const HamiltonianParams& family,
                               std::span<const std::int64_t> n_list);

// n evenly spaced values over [lo, hi], endpoints included.
std::vector<double> linspace(double lo, double hi, int n);

}  // namespace qsearch
