#pragma once

// Brute-force ground truth: the full N x N search Hamiltonian in the
// computational basis, diagonalized densely. Nothing here may depend on the
// closed-form two-level results in evolution.hpp.

#include <Eigen/Dense>
#include <cstdint>
#include <span>
#include <vector>

#include "qsearch/hamiltonian.hpp"

namespace qsearch {

inline constexpr std::int64_t kDefaultDimensionCap = 4096;
inline constexpr int kDefaultScanGrid = 4096;

class FullHamiltonian {
 public:
  FullHamiltonian(Eigen::MatrixXcd matrix, std::int64_t target_index);

  std::int64_t dim() const { return matrix_.rows(); }
  std::int64_t target_index() const { return target_; }
  const Eigen::MatrixXcd& matrix() const { return matrix_; }

 private:
  Eigen::MatrixXcd matrix_;
  std::int64_t target_;
};

// E(|w><w| + |psi><psi|) + eps(e^{i phi}|w><psi| + h.c.) + 2 delta |w><w| with
// |psi> the uniform superposition. The upper triangle is computed and mirrored,
// so the result is exactly Hermitian. Throws DimensionTooLarge above cap.
FullHamiltonian build_full(const HamiltonianParams& params, const SearchSpace& space,
                           std::int64_t target_index = 0,
                           std::int64_t cap = kDefaultDimensionCap);

Eigen::VectorXcd uniform_superposition(std::int64_t dim);

// Diagonalizes H once; every later evolution is O(N) (target amplitude) or
// O(N^2) (full state).
class SpectralPropagator {
 public:
  // Throws EigensolverFailure if the dense solver does not converge.
  explicit SpectralPropagator(const FullHamiltonian& h);

  std::int64_t dim() const { return eigenvalues_.size(); }
  std::int64_t target_index() const { return target_; }
  const Eigen::VectorXd& eigenvalues() const { return eigenvalues_; }

  // exp(-iHt)|psi>.
  Eigen::VectorXcd evolve(double t) const;
  // |<w| exp(-iHt) |psi>|^2.
  double target_probability(double t) const;
  // d/dt of the unclamped target probability.
  double target_probability_rate(double t) const;

 private:
  Eigen::VectorXd eigenvalues_;
  Eigen::MatrixXcd eigenvectors_;
  Eigen::VectorXcd spectral_weights_;  // V^dagger |psi>
  Eigen::VectorXcd target_row_;        // <w|V
  std::int64_t target_;
};

Eigen::VectorXcd evolve_full(const FullHamiltonian& h, double t);

// Probability weight of state outside span{|w>, |psi>}.
double leakage(const Eigen::VectorXcd& state, std::int64_t target_index);

// OpenMP over time points; results are stored by index so the output does not
// depend on thread count.
std::vector<double> sample_target_probability(const SpectralPropagator& prop,
                                              std::span<const double> times);
// Serial reference for the loop above.
std::vector<double> sample_target_probability_serial(const SpectralPropagator& prop,
                                                     std::span<const double> times);

struct PeakScanResult {
  double peak_time = 0.0;
  double peak_probability = 0.0;
  int samples = 0;
};

// Samples the target probability on `grid` evenly spaced points of
// [0, window], takes the first local maximum in the upper half of the sampled
// range and refines it by golden section to 1e-10 * window, then polishes the
// time by bisecting the sign change of the probability rate. Throws
// WindowTooNarrow when that maximum sits on the right edge.
PeakScanResult scan_peak(const SpectralPropagator& prop, double window,
                         int grid = kDefaultScanGrid);
PeakScanResult scan_peak(const FullHamiltonian& h, double window, int grid = kDefaultScanGrid);
PeakScanResult scan_peak_serial(const SpectralPropagator& prop, double window,
                                int grid = kDefaultScanGrid);

// 4 pi sqrt(N) / E: at least one full oscillation for any detuning.
double default_scan_window(const HamiltonianParams& params, const SearchSpace& space);

}  // namespace qsearch
