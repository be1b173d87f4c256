#pragma once

#include <array>
#include <complex>
#include <cstdint>

namespace qsearch {

using Complex = std::complex<double>;

// Database of n_items entries searched from the uniform superposition.
// The overlap x = <w|psi> = 1/sqrt(N) is stored exactly, together with
// x^2 = 1/N, so that formulas using 1 - x^2 see the same rounding as 1 - 1/N.
class SearchSpace {
 public:
  // Throws std::invalid_argument for n_items < 2.
  explicit SearchSpace(std::int64_t n_items);

  std::int64_t n_items() const { return n_items_; }
  double overlap() const { return overlap_; }
  double overlap_sq() const { return overlap_sq_; }
  // sqrt(1 - x^2), the amplitude of |r> in |psi>.
  double residual_amplitude() const { return residual_; }

 private:
  std::int64_t n_items_;
  double overlap_;
  double overlap_sq_;
  double residual_;
};

// H = E(|w><w| + |psi><psi|) + eps(e^{i phi}|w><psi| + h.c.) + 2 delta |w><w|,
// with hbar = 1.
struct HamiltonianParams {
  double energy = 1.0;
  double coupling = 0.0;
  double phase = 0.0;
  double delta = 0.0;

  // The search regime assumes E >= eps. Larger couplings are still
  // computable (composed phase terms produce them) but are flagged.
  bool out_of_regime() const { return coupling > energy; }
};

// Throws std::invalid_argument unless energy > 0, coupling >= 0 and all
// fields are finite.
void validate(const HamiltonianParams& params);

// One coupling term eps * (e^{i phi}|w><psi| + h.c.).
struct PhaseTerm {
  double eps = 0.0;
  double phi = 0.0;
};

// Projection of H onto span{|w>, |r>}, |r> being the normalized part of
// |psi> orthogonal to |w>. <r|H|w> is conj(h_wr) by construction.
struct EffectiveHamiltonian {
  double h_ww = 0.0;
  double h_rr = 0.0;
  Complex h_wr{0.0, 0.0};

  Complex h_rw() const { return std::conj(h_wr); }
  std::array<std::array<Complex, 2>, 2> matrix() const {
    return {{{Complex(h_ww, 0.0), h_wr}, {h_rw(), Complex(h_rr, 0.0)}}};
  }
};

// Coordinates of a state in the {|w>, |r>} basis.
struct TwoLevelState {
  Complex amp_w{0.0, 0.0};
  Complex amp_r{0.0, 0.0};

  double norm_sq() const { return std::norm(amp_w) + std::norm(amp_r); }
};

EffectiveHamiltonian build_effective(const HamiltonianParams& params, const SearchSpace& space);

// |psi(0)> = x|w> + sqrt(1 - x^2)|r>.
TwoLevelState initial_state(const SearchSpace& space);

// Adds two couplings as complex numbers: eps' e^{i phi'} = a + b.
// The phase is recovered with atan2 and lies in (-pi, pi]; a vanishing
// sum returns (0, 0).
PhaseTerm compose_phase_terms(const PhaseTerm& a, const PhaseTerm& b);

// Applies a phase term on top of params (the H0 + H1 decomposition).
HamiltonianParams with_added_coupling(const HamiltonianParams& params, const PhaseTerm& extra);

// Ex + eps cos(phi). Its sign decides which side of delta = 0 helps.
double discriminant(const HamiltonianParams& params, const SearchSpace& space);

}  // namespace qsearch
