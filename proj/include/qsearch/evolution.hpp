#pragma once

#include "qsearch/hamiltonian.hpp"

namespace qsearch {

// Closed-form description of one search run. rabi_frequency is M, the
// half-splitting of the effective two-level system, and proper_time = pi/(2M).
// a_coeff is A_e (A_0 when delta = 0), with peak_probability = 1 - x^2 + A/M^2.
struct EvolutionSummary {
  double proper_time = 0.0;
  double peak_probability = 0.0;
  double rabi_frequency = 0.0;
  double a_coeff = 0.0;
};

// exp(-iHt) for a 2x2 Hermitian H from its eigenvalues c +- M and spectral
// projectors (I +- (H - c)/M)/2. When the splitting falls below 1e-13 of the
// matrix scale the sin(Mt)/M factor is replaced by its limit t.
class TwoLevelPropagator {
 public:
  explicit TwoLevelPropagator(const EffectiveHamiltonian& h);

  TwoLevelState evolve(const TwoLevelState& state, double t) const;

  double lower_eigenvalue() const { return center_ - half_gap_; }
  double upper_eigenvalue() const { return center_ + half_gap_; }
  double half_gap() const { return half_gap_; }

 private:
  EffectiveHamiltonian h_;
  double center_;
  double half_gap_;
  bool near_degenerate_;
};

// |<w| exp(-iHt) |psi(0)>|^2. Throws std::logic_error if roundoff pushed the
// value more than 1e-12 outside [0, 1]; otherwise clamps.
double probability_at(const HamiltonianParams& params, const SearchSpace& space, double t);

TwoLevelState evolve_initial(const HamiltonianParams& params, const SearchSpace& space, double t);

// Requires params.delta == 0 (std::invalid_argument otherwise).
// Throws DegenerateFrequency when Ex + eps cos(phi) and eps sin(phi) both vanish.
EvolutionSummary summary_unperturbed(const HamiltonianParams& params, const SearchSpace& space);

// Energy-perturbed summary; equals summary_unperturbed at delta = 0.
EvolutionSummary summary_perturbed(const HamiltonianParams& params, const SearchSpace& space);

// (pi^2/4)(P_e - P_0) - (A_e T_e^2 - A_0 T_0^2). Identically zero.
double relation_residual(const HamiltonianParams& params, const SearchSpace& space);

struct PeakPoint {
  double time = 0.0;
  double probability = 0.0;
};

// First maximum (t > 0) of |<w|exp(-iHt)|psi>|^2. This differs from
// (proper_time, peak_probability) whenever eps sin(phi) != 0: the
// interference term x Im(q) sin(2Mt) shifts the maximum off t = pi/(2M).
PeakPoint true_peak(const HamiltonianParams& params, const SearchSpace& space);

}  // namespace qsearch
