#include "qsearch/evolution.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "qsearch/errors.hpp"

namespace qsearch {
namespace {

constexpr double kNearDegenerate = 1e-13;
constexpr double kFrequencyFloor = 1e-14;
constexpr double kProbabilitySlack = 1e-12;

double energy_scale(const HamiltonianParams& p) {
  return p.energy + p.coupling + std::abs(p.delta);
}

double checked_probability(double p) {
  if (!(p >= -kProbabilitySlack && p <= 1.0 + kProbabilitySlack)) {
    throw std::logic_error("probability out of range: " + std::to_string(p));
  }
  return std::clamp(p, 0.0, 1.0);
}

}  // namespace

TwoLevelPropagator::TwoLevelPropagator(const EffectiveHamiltonian& h) : h_(h) {
  center_ = 0.5 * (h.h_ww + h.h_rr);
  const double detuning = 0.5 * (h.h_ww - h.h_rr);
  half_gap_ = std::sqrt(detuning * detuning + std::norm(h.h_wr));
  const double scale = std::max({std::abs(h.h_ww), std::abs(h.h_rr), std::abs(h.h_wr)});
  near_degenerate_ = half_gap_ <= kNearDegenerate * scale;
}

TwoLevelState TwoLevelPropagator::evolve(const TwoLevelState& state, double t) const {
  // exp(-iHt) = exp(-ict) [cos(Mt) I - i sin(Mt)/M (H - c I)]
  const double c = std::cos(half_gap_ * t);
  const double sinc_t = near_degenerate_ ? t : std::sin(half_gap_ * t) / half_gap_;
  const double detuning = 0.5 * (h_.h_ww - h_.h_rr);
  const Complex traceless_w = detuning * state.amp_w + h_.h_wr * state.amp_r;
  const Complex traceless_r = h_.h_rw() * state.amp_w - detuning * state.amp_r;
  const Complex global = std::polar(1.0, -center_ * t);
  const Complex minus_i(0.0, -1.0);
  return {global * (c * state.amp_w + minus_i * sinc_t * traceless_w),
          global * (c * state.amp_r + minus_i * sinc_t * traceless_r)};
}

TwoLevelState evolve_initial(const HamiltonianParams& params, const SearchSpace& space, double t) {
  return TwoLevelPropagator(build_effective(params, space)).evolve(initial_state(space), t);
}

double probability_at(const HamiltonianParams& params, const SearchSpace& space, double t) {
  if (!std::isfinite(t)) throw std::invalid_argument("time must be finite");
  return checked_probability(std::norm(evolve_initial(params, space, t).amp_w));
}

EvolutionSummary summary_unperturbed(const HamiltonianParams& params, const SearchSpace& space) {
  if (params.delta != 0.0) {
    throw std::invalid_argument("summary_unperturbed requires delta == 0");
  }
  validate(params);
  const double x2 = space.overlap_sq();
  const double k = discriminant(params, space);
  const double s = params.coupling * std::sin(params.phase);
  const double radicand = k * k + (1.0 - x2) * s * s;
  const double m = std::sqrt(radicand);
  if (m <= kFrequencyFloor * energy_scale(params)) {
    throw DegenerateFrequency("Ex + eps cos(phi) and eps sin(phi) both vanish");
  }
  EvolutionSummary out;
  out.rabi_frequency = m;
  out.proper_time = std::numbers::pi / (2.0 * m);
  out.a_coeff = x2 * k * k;
  out.peak_probability = checked_probability((1.0 - x2) + x2 * k * k / radicand);
  return out;
}

EvolutionSummary summary_perturbed(const HamiltonianParams& params, const SearchSpace& space) {
  validate(params);
  const double x = space.overlap();
  const double x2 = space.overlap_sq();
  const double k = discriminant(params, space);
  const double s = params.coupling * std::sin(params.phase);
  const double d = params.delta;

  const double shifted = k * x + d;
  const double m_sq = (k * k + s * s) * (1.0 - x2) + shifted * shifted;
  const double m = std::sqrt(m_sq);
  if (m <= kFrequencyFloor * energy_scale(params)) {
    throw DegenerateFrequency("effective two-level splitting vanishes");
  }
  EvolutionSummary out;
  out.a_coeff = -(1.0 - 2.0 * x2) * d * d + 2.0 * x2 * x * k * d + x2 * k * k;
  out.rabi_frequency = m;
  out.proper_time = std::numbers::pi / (2.0 * m);
  out.peak_probability = checked_probability((1.0 - x2) + out.a_coeff / m_sq);
  return out;
}

double relation_residual(const HamiltonianParams& params, const SearchSpace& space) {
  HamiltonianParams base = params;
  base.delta = 0.0;
  const EvolutionSummary s0 = summary_unperturbed(base, space);
  const EvolutionSummary se = summary_perturbed(params, space);
  const double lhs = 0.25 * std::numbers::pi * std::numbers::pi *
                     (se.peak_probability - s0.peak_probability);
  const double rhs = se.a_coeff * se.proper_time * se.proper_time -
                     s0.a_coeff * s0.proper_time * s0.proper_time;
  return lhs - rhs;
}

PeakPoint true_peak(const HamiltonianParams& params, const SearchSpace& space) {
  const EffectiveHamiltonian h = build_effective(params, space);
  const double x = space.overlap();
  const double detuning = 0.5 * (h.h_ww - h.h_rr);
  const double m = std::sqrt(detuning * detuning + std::norm(h.h_wr));
  if (m <= kFrequencyFloor * energy_scale(params)) {
    throw DegenerateFrequency("effective two-level splitting vanishes");
  }
  // <w|exp(-iHt)|psi> = phase * (x cos(Mt) - i q sin(Mt)), q = ((H-c)psi)_w / M,
  // so P = mean + R cos(2Mt - alpha).
  const Complex q = (detuning * x + h.h_wr * space.residual_amplitude()) / m;
  const double mean = 0.5 * (x * x + std::norm(q));
  const double cos_part = 0.5 * (x * x - std::norm(q));
  const double sin_part = x * q.imag();
  const double alpha = std::atan2(sin_part, cos_part);
  const double angle = alpha > 0.0 ? alpha : alpha + 2.0 * std::numbers::pi;
  PeakPoint out;
  out.time = angle / (2.0 * m);
  out.probability = checked_probability(mean + std::hypot(cos_part, sin_part));
  return out;
}

}  // namespace qsearch
