#include "qsearch/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

#include "qsearch/errors.hpp"
#include "qsearch/golden_section.hpp"

namespace qsearch {

FullHamiltonian::FullHamiltonian(Eigen::MatrixXcd matrix, std::int64_t target_index)
    : matrix_(std::move(matrix)), target_(target_index) {
  if (matrix_.rows() != matrix_.cols()) {
    throw std::invalid_argument("full hamiltonian must be square");
  }
  if (target_index < 0 || target_index >= matrix_.rows()) {
    throw std::invalid_argument("target index out of range");
  }
}

FullHamiltonian build_full(const HamiltonianParams& params, const SearchSpace& space,
                           std::int64_t target_index, std::int64_t cap) {
  validate(params);
  const std::int64_t n = space.n_items();
  if (n > cap) {
    throw DimensionTooLarge("dimension " + std::to_string(n) + " exceeds cap " +
                            std::to_string(cap));
  }
  if (target_index < 0 || target_index >= n) {
    throw std::invalid_argument("target index out of range");
  }
  const double amp = 1.0 / std::sqrt(static_cast<double>(n));
  const double E = params.energy;
  const Complex coupling = std::polar(params.coupling, params.phase);
  const auto w = target_index;

  Eigen::MatrixXcd m(n, n);
  for (std::int64_t j = 0; j < n; ++j) {
    for (std::int64_t i = 0; i <= j; ++i) {
      // E |psi><psi|
      Complex v(E * amp * amp, 0.0);
      if (i == w && j == w) {
        v += E + 2.0 * params.delta + 2.0 * params.coupling * std::cos(params.phase) * amp;
      } else if (i == w) {
        v += coupling * amp;  // eps e^{i phi} <w|..|psi>
      } else if (j == w) {
        v += std::conj(coupling) * amp;
      }
      m(i, j) = v;
      m(j, i) = std::conj(v);
    }
    m(j, j) = Complex(m(j, j).real(), 0.0);
  }
  return FullHamiltonian(std::move(m), target_index);
}

Eigen::VectorXcd uniform_superposition(std::int64_t dim) {
  return Eigen::VectorXcd::Constant(dim, Complex(1.0 / std::sqrt(static_cast<double>(dim)), 0.0));
}

SpectralPropagator::SpectralPropagator(const FullHamiltonian& h) : target_(h.target_index()) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(h.matrix());
  if (solver.info() != Eigen::Success) {
    throw EigensolverFailure("dense hermitian eigensolver did not converge (dim " +
                             std::to_string(h.dim()) + ")");
  }
  eigenvalues_ = solver.eigenvalues();
  eigenvectors_ = solver.eigenvectors();
  spectral_weights_ = eigenvectors_.adjoint() * uniform_superposition(h.dim());
  target_row_ = eigenvectors_.row(target_).transpose();
}

Eigen::VectorXcd SpectralPropagator::evolve(double t) const {
  Eigen::VectorXcd phased(dim());
  for (Eigen::Index k = 0; k < phased.size(); ++k) {
    phased(k) = std::polar(1.0, -eigenvalues_(k) * t) * spectral_weights_(k);
  }
  return eigenvectors_ * phased;
}

double SpectralPropagator::target_probability(double t) const {
  Complex amp(0.0, 0.0);
  for (Eigen::Index k = 0; k < eigenvalues_.size(); ++k) {
    amp += target_row_(k) * std::polar(1.0, -eigenvalues_(k) * t) * spectral_weights_(k);
  }
  return std::clamp(std::norm(amp), 0.0, 1.0);
}

double SpectralPropagator::target_probability_rate(double t) const {
  Complex amp(0.0, 0.0);
  Complex rate(0.0, 0.0);
  for (Eigen::Index k = 0; k < eigenvalues_.size(); ++k) {
    const Complex term = target_row_(k) * std::polar(1.0, -eigenvalues_(k) * t) * spectral_weights_(k);
    amp += term;
    rate += Complex(0.0, -eigenvalues_(k)) * term;
  }
  return 2.0 * std::real(std::conj(amp) * rate);
}

Eigen::VectorXcd evolve_full(const FullHamiltonian& h, double t) {
  return SpectralPropagator(h).evolve(t);
}

double leakage(const Eigen::VectorXcd& state, std::int64_t target_index) {
  const auto n = state.size();
  const double x = 1.0 / std::sqrt(static_cast<double>(n));
  const double s = std::sqrt(1.0 - x * x);
  // |r> = (|psi> - x|w>)/s has amplitude (1/sqrt(N))/s off target, 0 on it.
  Complex sum_off(0.0, 0.0);
  for (Eigen::Index i = 0; i < n; ++i) {
    if (i != target_index) sum_off += state(i);
  }
  const Complex on_r = sum_off * (x / s);
  const double inside = std::norm(state(target_index)) + std::norm(on_r);
  return std::max(state.squaredNorm() - inside, 0.0);
}

std::vector<double> sample_target_probability(const SpectralPropagator& prop,
                                              std::span<const double> times) {
  std::vector<double> out(times.size());
  const auto count = static_cast<std::int64_t>(times.size());
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < count; ++i) {
    out[i] = prop.target_probability(times[i]);
  }
  return out;
}

std::vector<double> sample_target_probability_serial(const SpectralPropagator& prop,
                                                     std::span<const double> times) {
  std::vector<double> out;
  out.reserve(times.size());
  for (double t : times) out.push_back(prop.target_probability(t));
  return out;
}

namespace {

std::vector<double> scan_times(double window, int grid) {
  if (!(window > 0.0) || !std::isfinite(window)) {
    throw std::invalid_argument("scan window must be positive");
  }
  if (grid < 64) throw std::invalid_argument("scan grid needs at least 64 points");
  std::vector<double> times(grid);
  for (int i = 0; i < grid; ++i) times[i] = window * i / (grid - 1);
  return times;
}

// Bisection on the sign change of dP/dt near the golden-section guess.
double polish_peak(const SpectralPropagator& prop, double guess, double lo, double hi,
                   double window) {
  const double near = 1e-6 * window;
  double a = std::max(lo, guess - near);
  double b = std::min(hi, guess + near);
  if (!(prop.target_probability_rate(a) > 0.0 && prop.target_probability_rate(b) < 0.0)) {
    a = lo;
    b = hi;
    if (!(prop.target_probability_rate(a) > 0.0 && prop.target_probability_rate(b) < 0.0)) {
      return guess;
    }
  }
  for (int iter = 0; iter < 200 && b - a > 4 * std::numeric_limits<double>::epsilon() * b;
       ++iter) {
    const double mid = 0.5 * (a + b);
    if (prop.target_probability_rate(mid) > 0.0) {
      a = mid;
    } else {
      b = mid;
    }
  }
  return 0.5 * (a + b);
}

PeakScanResult locate_peak(const SpectralPropagator& prop, const std::vector<double>& times,
                           const std::vector<double>& probs, double window) {
  const auto [lo_it, hi_it] = std::minmax_element(probs.begin(), probs.end());
  const double threshold = *lo_it + 0.5 * (*hi_it - *lo_it);
  const int grid = static_cast<int>(probs.size());
  for (int i = 1; i < grid; ++i) {
    if (probs[i] < threshold || probs[i] < probs[i - 1]) continue;
    if (i == grid - 1) {
      throw WindowTooNarrow("maximum on the right edge of the scan window");
    }
    if (probs[i] < probs[i + 1]) continue;
    const Extremum best = golden_section_maximize(
        [&](double t) { return prop.target_probability(t); }, times[i - 1], times[i + 1],
        1e-10 * window);
    const double t = polish_peak(prop, best.x, times[i - 1], times[i + 1], window);
    return {t, prop.target_probability(t), grid};
  }
  throw WindowTooNarrow("no oscillation maximum inside the scan window");
}

}  // namespace

PeakScanResult scan_peak(const SpectralPropagator& prop, double window, int grid) {
  const auto times = scan_times(window, grid);
  return locate_peak(prop, times, sample_target_probability(prop, times), window);
}

PeakScanResult scan_peak(const FullHamiltonian& h, double window, int grid) {
  return scan_peak(SpectralPropagator(h), window, grid);
}

PeakScanResult scan_peak_serial(const SpectralPropagator& prop, double window, int grid) {
  const auto times = scan_times(window, grid);
  return locate_peak(prop, times, sample_target_probability_serial(prop, times), window);
}

double default_scan_window(const HamiltonianParams& params, const SearchSpace& space) {
  return 4.0 * std::numbers::pi * std::sqrt(static_cast<double>(space.n_items())) /
         params.energy;
}

}  // namespace qsearch
