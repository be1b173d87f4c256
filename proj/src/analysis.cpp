#include "qsearch/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>

#include "qsearch/errors.hpp"

namespace qsearch {

std::string_view to_string(Region r) {
  switch (r) {
    case Region::BothImproved: return "BothImproved";
    case Region::TimeOnlyImproved: return "TimeOnlyImproved";
    case Region::BothCorrupted: return "BothCorrupted";
    case Region::Boundary: return "Boundary";
    case Region::Degenerate: return "Degenerate";
  }
  return "?";
}

std::string_view to_string(SignCase s) {
  switch (s) {
    case SignCase::Positive: return "Positive";
    case SignCase::Negative: return "Negative";
    case SignCase::Zero: return "Zero";
  }
  return "?";
}

ScalingFit fit_power_law(std::span<const double> n_values, std::span<const double> observed) {
  if (n_values.size() != observed.size()) {
    throw std::invalid_argument("fit_power_law: length mismatch");
  }
  if (n_values.size() < 4) throw std::invalid_argument("fit_power_law: need at least 4 points");
  const auto count = static_cast<double>(n_values.size());
  double mx = 0.0, my = 0.0;
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < n_values.size(); ++i) {
    if (!(n_values[i] > 0.0) || !(observed[i] > 0.0)) {
      throw std::invalid_argument("fit_power_law: values must be positive");
    }
    lx.push_back(std::log(n_values[i]));
    ly.push_back(std::log(observed[i]));
    mx += lx.back();
    my += ly.back();
  }
  mx /= count;
  my /= count;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
    syy += (ly[i] - my) * (ly[i] - my);
  }
  if (sxx == 0.0) throw std::invalid_argument("fit_power_law: n values must not all be equal");
  ScalingFit fit;
  fit.n_values.assign(n_values.begin(), n_values.end());
  fit.observed.assign(observed.begin(), observed.end());
  fit.exponent = sxy / sxx;
  const double intercept = my - fit.exponent * mx;
  double ss_res = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    const double r = ly[i] - (intercept + fit.exponent * lx[i]);
    ss_res += r * r;
  }
  fit.r_squared = syy == 0.0 ? 1.0 : std::clamp(1.0 - ss_res / syy, 0.0, 1.0);
  return fit;
}

namespace {

double energy_scale(const HamiltonianParams& p, const SearchSpace& space) {
  return p.energy * space.overlap() + p.coupling;
}

bool sin_vanishes(double phase) { return std::abs(std::sin(phase)) <= kPhaseSnap; }

bool near(double a, double b, double scale) { return std::abs(a - b) <= kEdgeTolerance * scale; }

}  // namespace

double snapped_discriminant(const HamiltonianParams& params, const SearchSpace& space) {
  const double k = discriminant(params, space);
  return std::abs(k) <= kEdgeTolerance * energy_scale(params, space) ? 0.0 : k;
}

SignCase sign_case(const HamiltonianParams& params, const SearchSpace& space) {
  const double k = snapped_discriminant(params, space);
  if (k > 0.0) return SignCase::Positive;
  if (k < 0.0) return SignCase::Negative;
  return SignCase::Zero;
}

bool is_degenerate(const HamiltonianParams& params, const SearchSpace& space) {
  return params.coupling == 0.0 || sin_vanishes(params.phase) ||
         snapped_discriminant(params, space) == 0.0;
}

double beta(const HamiltonianParams& params, const SearchSpace& space) {
  validate(params);
  const double x = space.overlap();
  const double x2 = space.overlap_sq();
  const double k = snapped_discriminant(params, space);
  const double s = sin_vanishes(params.phase) ? 0.0 : params.coupling * std::sin(params.phase);
  const double u = s * s;
  const double denom = k * k + (1.0 - 2.0 * x2) * u;
  if (denom == 0.0) {
    throw DegenerateDenominator("K^2 + (1 - 2x^2) eps^2 sin^2(phi) vanishes");
  }
  return 2.0 * x2 * x * k * u / denom;
}

bool time_improved(const HamiltonianParams& params, const SearchSpace& space,
                           double delta) {
  const double k = snapped_discriminant(params, space);
  const double edge = -2.0 * space.overlap() * k;
  const bool positive_side = delta >= 0.0 || delta <= edge;
  const bool negative_side = delta <= 0.0 || delta >= edge;
  if (k > 0.0) return positive_side;
  if (k < 0.0) return negative_side;
  return positive_side && negative_side;
}

bool probability_improved(const HamiltonianParams& params, const SearchSpace& space,
                           double delta) {
  const double b = beta(params, space);
  const double k = snapped_discriminant(params, space);
  if (k > 0.0) return delta >= 0.0 && delta <= b;
  if (k < 0.0) return delta >= b && delta <= 0.0;
  return delta == 0.0;
}

PerturbationClass classify(const HamiltonianParams& params, const SearchSpace& space,
                           double delta) {
  PerturbationClass out;
  out.sign_case = sign_case(params, space);
  if (is_degenerate(params, space)) {
    out.region = Region::Degenerate;
    return out;
  }
  const double k = snapped_discriminant(params, space);
  const double b = beta(params, space);
  const double edge = -2.0 * space.overlap() * k;
  const double scale = params.energy + params.coupling;
  if (near(delta, 0.0, scale) || near(delta, b, scale) || near(delta, edge, scale)) {
    out.region = Region::Boundary;
    return out;
  }
  // k > 0: edge < 0 < b.  k < 0: b < 0 < edge.
  const bool inside_window = k > 0.0 ? (delta > 0.0 && delta < b) : (delta > b && delta < 0.0);
  const bool corrupted = k > 0.0 ? (delta > edge && delta < 0.0) : (delta > 0.0 && delta < edge);
  if (inside_window) {
    out.region = Region::BothImproved;
  } else if (corrupted) {
    out.region = Region::BothCorrupted;
  } else {
    out.region = Region::TimeOnlyImproved;
  }
  return out;
}

OshimaScaling oshima_scaling(double energy, double delta, std::span<const std::int64_t> n_list,
                             int grid) {
  if (delta == 0.0) {
    throw std::invalid_argument("oshima_scaling needs a nonzero energy mismatch");
  }
  if (n_list.size() < 4 || !std::is_sorted(n_list.begin(), n_list.end())) {
    throw std::invalid_argument("oshima_scaling needs at least 4 ascending N values");
  }
  OshimaScaling out;
  std::vector<double> ns, total, inverse_p;
  for (std::int64_t n : n_list) {
    const SearchSpace space(n);
    const HamiltonianParams params{energy, 0.0, 0.0, delta};
    const double window = 4.0 * summary_perturbed(params, space).proper_time;
    const PeakScanResult peak = scan_peak(build_full(params, space), window, grid);
    out.peaks.push_back(peak);
    ns.push_back(static_cast<double>(n));
    total.push_back(peak.peak_time / peak.peak_probability);
    inverse_p.push_back(1.0 / peak.peak_probability);
  }
  out.total_time = fit_power_law(ns, total);
  out.inverse_probability = fit_power_law(ns, inverse_p);
  return out;
}

namespace {

using GridResult = std::optional<EvolutionSummary>;

GridResult evaluate_correction(double energy, double delta, const SearchSpace& space, double eps,
                               double phi) {
  try {
    return summary_perturbed({energy, eps, phi, delta}, space);
  } catch (const DegenerateFrequency&) {
    return std::nullopt;
  }
}

bool better(const EvolutionSummary& a, double eps_a, const EvolutionSummary& b, double eps_b) {
  if (a.peak_probability != b.peak_probability) return a.peak_probability > b.peak_probability;
  if (a.proper_time != b.proper_time) return a.proper_time < b.proper_time;
  return eps_a < eps_b;
}

void check_correction_inputs(double energy, double delta, std::span<const double> eps_grid,
                             std::span<const double> phi_grid) {
  validate({energy, 0.0, 0.0, delta});
  if (eps_grid.empty() || phi_grid.empty()) {
    throw std::invalid_argument("error_correction_search needs nonempty grids");
  }
  for (double e : eps_grid) {
    if (!(e >= 0.0)) throw std::invalid_argument("coupling grid values must be >= 0");
  }
}

CorrectionResult reduce_correction(const std::vector<GridResult>& results,
                                   std::span<const double> eps_grid,
                                   std::span<const double> phi_grid) {
  std::optional<CorrectionResult> best;
  for (std::size_t i = 0; i < eps_grid.size(); ++i) {
    for (std::size_t j = 0; j < phi_grid.size(); ++j) {
      const GridResult& r = results[i * phi_grid.size() + j];
      if (!r) continue;
      if (!best || better(*r, eps_grid[i], best->summary, best->term.eps)) {
        best = CorrectionResult{{eps_grid[i], phi_grid[j]}, *r};
      }
    }
  }
  if (!best) throw std::invalid_argument("no grid point has a defined proper time");
  return *best;
}

}  // namespace

CorrectionResult error_correction_search(double energy, double delta, const SearchSpace& space,
                                         std::span<const double> eps_grid,
                                         std::span<const double> phi_grid) {
  check_correction_inputs(energy, delta, eps_grid, phi_grid);
  const auto n_phi = static_cast<std::int64_t>(phi_grid.size());
  const auto total = static_cast<std::int64_t>(eps_grid.size()) * n_phi;
  std::vector<GridResult> results(total);
#pragma omp parallel for schedule(static)
  for (std::int64_t idx = 0; idx < total; ++idx) {
    results[idx] =
        evaluate_correction(energy, delta, space, eps_grid[idx / n_phi], phi_grid[idx % n_phi]);
  }
  return reduce_correction(results, eps_grid, phi_grid);
}

CorrectionResult error_correction_search_serial(double energy, double delta,
                                                const SearchSpace& space,
                                                std::span<const double> eps_grid,
                                                std::span<const double> phi_grid) {
  check_correction_inputs(energy, delta, eps_grid, phi_grid);
  std::vector<GridResult> results;
  results.reserve(eps_grid.size() * phi_grid.size());
  for (double eps : eps_grid) {
    for (double phi : phi_grid) {
      results.push_back(evaluate_correction(energy, delta, space, eps, phi));
    }
  }
  return reduce_correction(results, eps_grid, phi_grid);
}

ScalingFit beta_window_scaling(const HamiltonianParams& family,
                               std::span<const std::int64_t> n_list) {
  if (family.coupling == 0.0 || sin_vanishes(family.phase)) {
    throw std::invalid_argument("beta window vanishes identically for eps = 0 or sin(phi) = 0");
  }
  if (!std::is_sorted(n_list.begin(), n_list.end())) {
    throw std::invalid_argument("beta_window_scaling needs ascending N values");
  }
  std::vector<double> ns, widths;
  for (std::int64_t n : n_list) {
    ns.push_back(static_cast<double>(n));
    widths.push_back(std::abs(beta(family, SearchSpace(n))));
  }
  return fit_power_law(ns, widths);
}

std::vector<double> linspace(double lo, double hi, int n) {
  if (n < 2) throw std::invalid_argument("linspace needs at least 2 points");
  std::vector<double> out(n);
  for (int i = 0; i < n; ++i) out[i] = lo + (hi - lo) * i / (n - 1);
  out.back() = hi;
  return out;
}

}  // namespace qsearch
