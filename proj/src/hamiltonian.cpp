#include "qsearch/hamiltonian.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace qsearch {

SearchSpace::SearchSpace(std::int64_t n_items) : n_items_(n_items) {
  if (n_items < 2) {
    throw std::invalid_argument("search space needs at least 2 items, got " +
                                std::to_string(n_items));
  }
  const double n = static_cast<double>(n_items);
  overlap_ = 1.0 / std::sqrt(n);
  overlap_sq_ = 1.0 / n;
  residual_ = std::sqrt(1.0 - overlap_sq_);
}

void validate(const HamiltonianParams& params) {
  if (!std::isfinite(params.energy) || !std::isfinite(params.coupling) ||
      !std::isfinite(params.phase) || !std::isfinite(params.delta)) {
    throw std::invalid_argument("hamiltonian parameters must be finite");
  }
  if (!(params.energy > 0.0)) {
    throw std::invalid_argument("energy must be positive");
  }
  if (params.coupling < 0.0) {
    throw std::invalid_argument("coupling must be non-negative");
  }
}

EffectiveHamiltonian build_effective(const HamiltonianParams& params, const SearchSpace& space) {
  validate(params);
  const double x = space.overlap();
  const double x2 = space.overlap_sq();
  const double E = params.energy;
  const double eps = params.coupling;

  EffectiveHamiltonian h;
  h.h_ww = E * (1.0 + x2) + 2.0 * eps * x * std::cos(params.phase) + 2.0 * params.delta;
  h.h_rr = E * (1.0 - x2);
  h.h_wr = (Complex(E * x, 0.0) + std::polar(eps, params.phase)) * space.residual_amplitude();
  return h;
}

TwoLevelState initial_state(const SearchSpace& space) {
  return {Complex(space.overlap(), 0.0), Complex(space.residual_amplitude(), 0.0)};
}

PhaseTerm compose_phase_terms(const PhaseTerm& a, const PhaseTerm& b) {
  if (a.eps < 0.0 || b.eps < 0.0) {
    throw std::invalid_argument("phase term magnitude must be non-negative");
  }
  const double radicand =
      a.eps * a.eps + b.eps * b.eps + 2.0 * a.eps * b.eps * std::cos(a.phi - b.phi);
  const double eps = std::sqrt(std::max(radicand, 0.0));
  if (eps == 0.0) return {0.0, 0.0};
  // cos^-1 of the real part would lose the sign of the imaginary part.
  const Complex sum = std::polar(a.eps, a.phi) + std::polar(b.eps, b.phi);
  return {eps, std::atan2(sum.imag(), sum.real())};
}

HamiltonianParams with_added_coupling(const HamiltonianParams& params, const PhaseTerm& extra) {
  const PhaseTerm combined = compose_phase_terms({params.coupling, params.phase}, extra);
  HamiltonianParams out = params;
  out.coupling = combined.eps;
  out.phase = combined.phi;
  return out;
}

double discriminant(const HamiltonianParams& params, const SearchSpace& space) {
  return params.energy * space.overlap() + params.coupling * std::cos(params.phase);
}

}  // namespace qsearch
