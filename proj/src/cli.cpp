#include "qsearch/cli.hpp"

#include <omp.h>

#include <CLI11.hpp>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <map>
#include <numbers>
#include <set>
#include <sstream>

#include "qsearch/analysis.hpp"
#include "qsearch/errors.hpp"
#include "qsearch/evolution.hpp"
#include "qsearch/oracle.hpp"
#include "qsearch/verify.hpp"

namespace qsearch::cli {
namespace {

const std::map<std::string, Command> kCommands = {
    {"curve", Command::Curve},   {"sweep", Command::Sweep},     {"classify", Command::Classify},
    {"verify", Command::Verify}, {"oshima", Command::Oshima},   {"correct", Command::Correct},
    {"beta-scaling", Command::BetaScaling}};

const std::map<std::string, SweepAxis> kAxes = {
    {"delta", SweepAxis::Delta}, {"phi", SweepAxis::Phi}, {"eps", SweepAxis::Eps}, {"n", SweepAxis::N}};

// Keys accepted both as --flag and in a config file.
const std::set<std::string> kKeys = {"n",     "energy", "eps",    "phi",     "delta",
                                     "axis",  "min",    "max",    "steps",   "output",
                                     "workers", "grid", "n-max",  "n-list",  "eps-steps",
                                     "phi-steps"};

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> read_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read config file '" + path + "'");
  std::vector<std::string> tokens;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw UsageError(path + ":" + std::to_string(lineno) + ": expected key=value, got '" +
                       line + "'");
    }
    const std::string key = trim(line.substr(0, eq));
    if (!kKeys.contains(key)) {
      throw UsageError(path + ":" + std::to_string(lineno) + ": unknown key '" + key + "'");
    }
    tokens.push_back("--" + key);
    tokens.push_back(trim(line.substr(eq + 1)));
  }
  return tokens;
}

std::vector<std::int64_t> parse_n_list(const std::string& text) {
  std::vector<std::int64_t> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    std::size_t used = 0;
    long long v = 0;
    try {
      v = std::stoll(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (item.empty() || used != item.size()) {
      throw UsageError("--n-list: '" + item + "' is not an integer");
    }
    out.push_back(v);
  }
  if (!std::is_sorted(out.begin(), out.end())) {
    throw UsageError("--n-list must be ascending");
  }
  return out;
}

int default_workers() { return std::max(1, omp_get_max_threads()); }

}  // namespace

std::string usage() {
  return "usage: qsearch <command> [options]\n"
         "commands: curve sweep classify verify oshima correct beta-scaling\n"
         "options:\n"
         "  --n N              database size (integer >= 2)\n"
         "  --energy E         base energy (> 0)\n"
         "  --eps EPS          coupling magnitude (>= 0)\n"
         "  --phi PHI          coupling phase, radians\n"
         "  --delta D          target energy shift (adds 2D|w><w|)\n"
         "  --axis A           sweep axis: delta|phi|eps|n\n"
         "  --min X --max X    sweep range\n"
         "  --steps K          sweep / curve sample count\n"
         "  --grid G           oracle scan grid (verify, oshima)\n"
         "  --n-max N          largest N for verify\n"
         "  --n-list a,b,c     N values for oshima / beta-scaling\n"
         "  --eps-steps K --phi-steps K   correction grid size\n"
         "  --output PATH      CSV destination ('-' for stdout)\n"
         "  --workers W        OpenMP threads\n"
         "  --config FILE      key=value defaults; flags override\n";
}

RunConfig parse_config(const std::vector<std::string>& args) {
  if (args.empty()) throw UsageError(usage());

  std::vector<std::string> tokens;
  std::vector<std::string> rest;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config") {
      if (i + 1 >= args.size()) throw UsageError("--config needs a file path");
      const auto file_tokens = read_config_file(args[++i]);
      tokens.insert(tokens.end(), file_tokens.begin(), file_tokens.end());
    } else if (args[i].starts_with("--config=")) {
      const auto file_tokens = read_config_file(args[i].substr(9));
      tokens.insert(tokens.end(), file_tokens.begin(), file_tokens.end());
    } else {
      rest.push_back(args[i]);
    }
  }
  tokens.insert(tokens.end(), rest.begin(), rest.end());

  CLI::App app{"qsearch"};
  app.set_help_flag();
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);

  std::string command;
  std::int64_t n = 4;
  HamiltonianParams params;
  std::string axis;
  double min = 0.0, max = 0.0;
  RunConfig cfg;
  cfg.worker_count = default_workers();
  std::string n_list;

  app.add_option("command", command)->required();
  app.add_option("--n", n);
  app.add_option("--energy", params.energy);
  app.add_option("--eps", params.coupling);
  app.add_option("--phi", params.phase);
  app.add_option("--delta", params.delta);
  auto* axis_opt = app.add_option("--axis", axis);
  auto* min_opt = app.add_option("--min", min);
  auto* max_opt = app.add_option("--max", max);
  auto* steps_opt = app.add_option("--steps", cfg.steps);
  app.add_option("--output", cfg.output_path);
  app.add_option("--workers", cfg.worker_count);
  app.add_option("--grid", cfg.grid);
  app.add_option("--n-max", cfg.n_max);
  auto* n_list_opt = app.add_option("--n-list", n_list);
  app.add_option("--eps-steps", cfg.eps_steps);
  app.add_option("--phi-steps", cfg.phi_steps);

  std::reverse(tokens.begin(), tokens.end());
  try {
    app.parse(tokens);
  } catch (const CLI::ParseError& e) {
    throw UsageError(std::string(e.what()));
  }

  const auto cmd = kCommands.find(command);
  if (cmd == kCommands.end()) throw UsageError("unknown command '" + command + "'");
  cfg.command = cmd->second;

  try {
    cfg.space = SearchSpace(n);
    validate(params);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  cfg.params = params;
  if (cfg.worker_count < 1) throw UsageError("--workers must be >= 1");
  if (cfg.grid < 64) throw UsageError("--grid must be >= 64");
  if (cfg.eps_steps < 1 || cfg.phi_steps < 1) throw UsageError("correction grid must be nonempty");

  if (cfg.command == Command::Sweep) {
    if (axis_opt->count() == 0 || min_opt->count() == 0 || max_opt->count() == 0) {
      throw UsageError("sweep needs --axis, --min and --max");
    }
    const auto ax = kAxes.find(axis);
    if (ax == kAxes.end()) throw UsageError("--axis: '" + axis + "' is not delta|phi|eps|n");
    if (!(min < max)) throw UsageError("--min must be below --max");
    const int steps = steps_opt->count() ? cfg.steps : 101;
    if (steps < 2) throw UsageError("--steps must be >= 2");
    cfg.sweep = SweepSpec{ax->second, min, max, steps};
  }
  if (cfg.command == Command::Curve && cfg.steps < 2) throw UsageError("--steps must be >= 2");

  if (n_list_opt->count()) {
    cfg.n_list = parse_n_list(n_list);
  } else if (cfg.command == Command::Oshima) {
    cfg.n_list = {256, 512, 1024, 2048};
  } else if (cfg.command == Command::BetaScaling) {
    cfg.n_list = {100, 1000, 10000, 100000};
  }
  return cfg;
}

std::string sweep_header(const RunConfig& config) {
  static const char* names[] = {"delta", "phi", "eps", "n"};
  return std::string(names[static_cast<int>(config.sweep->axis)]) +
         ",P0,T0,Pe,Te,Ae,Me,beta,region,sign_case,relation_residual";
}

namespace {

std::string sweep_row(const RunConfig& config, int index) {
  const SweepSpec& sw = *config.sweep;
  const double value = sw.min + (sw.max - sw.min) * index / (sw.steps - 1);
  HamiltonianParams p = config.params;
  SearchSpace space = config.space;
  std::string label = fmt(value);
  switch (sw.axis) {
    case SweepAxis::Delta: p.delta = value; break;
    case SweepAxis::Phi: p.phase = value; break;
    case SweepAxis::Eps: p.coupling = value; break;
    case SweepAxis::N: {
      const auto n = static_cast<std::int64_t>(std::llround(value));
      space = SearchSpace(n);
      label = std::to_string(n);
      break;
    }
  }
  HamiltonianParams base = p;
  base.delta = 0.0;
  const EvolutionSummary s0 = summary_unperturbed(base, space);
  const EvolutionSummary se = summary_perturbed(p, space);
  const PerturbationClass cls = classify(p, space, p.delta);
  std::string row = label;
  for (double v : {s0.peak_probability, s0.proper_time, se.peak_probability, se.proper_time,
                   se.a_coeff, se.rabi_frequency, beta(p, space)}) {
    row += ',' + fmt(v);
  }
  row += ',';
  row += to_string(cls.region);
  row += ',';
  row += to_string(cls.sign_case);
  row += ',' + fmt(relation_residual(p, space));
  return row;
}

}  // namespace

std::vector<std::string> sweep_rows(const RunConfig& config, int workers) {
  const int steps = config.sweep->steps;
  std::vector<std::string> rows(steps);
  std::vector<std::exception_ptr> errors(steps);
#pragma omp parallel for num_threads(workers) schedule(static)
  for (int i = 0; i < steps; ++i) {
    try {
      rows[i] = sweep_row(config, i);
    } catch (...) {
      errors[i] = std::current_exception();
    }
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return rows;
}

std::vector<std::string> sweep_rows_serial(const RunConfig& config) {
  std::vector<std::string> rows;
  for (int i = 0; i < config.sweep->steps; ++i) rows.push_back(sweep_row(config, i));
  return rows;
}

namespace {

void write_fit(std::ostream& out, const char* name, const ScalingFit& fit) {
  out << "# fit," << name << ",exponent=" << fmt(fit.exponent)
      << ",r_squared=" << fmt(fit.r_squared) << '\n';
}

int run_command(const RunConfig& cfg, std::ostream& out) {
  const double pi = std::numbers::pi;
  switch (cfg.command) {
    case Command::Curve: {
      const double horizon = 2.0 * summary_perturbed(cfg.params, cfg.space).proper_time;
      out << "t,probability\n";
      for (int i = 0; i < cfg.steps; ++i) {
        const double t = horizon * i / (cfg.steps - 1);
        out << fmt(t) << ',' << fmt(probability_at(cfg.params, cfg.space, t)) << '\n';
      }
      return 0;
    }
    case Command::Sweep: {
      out << sweep_header(cfg) << '\n';
      for (const auto& row : sweep_rows(cfg, cfg.worker_count)) out << row << '\n';
      return 0;
    }
    case Command::Classify: {
      const PerturbationClass cls = classify(cfg.params, cfg.space, cfg.params.delta);
      out << "delta,beta,region,sign_case\n"
          << fmt(cfg.params.delta) << ',' << fmt(beta(cfg.params, cfg.space)) << ','
          << to_string(cls.region) << ',' << to_string(cls.sign_case) << '\n';
      return 0;
    }
    case Command::Verify: {
      if (cfg.n_max < 4) throw std::invalid_argument("--n-max must be >= 4");
      if (cfg.n_max > kDefaultDimensionCap) throw DimensionTooLarge("--n-max exceeds the oracle cap");
      std::vector<std::int64_t> ns;
      for (std::int64_t n = 4; n <= cfg.n_max; n *= 4) ns.push_back(n);
      const auto records = oracle_equivalence_suite(ns, cfg.grid);
      const VerifyReport report = summarize(records);
      print_report(report, out);
      return report.ok() ? 0 : 2;
    }
    case Command::Oshima: {
      const OshimaScaling res =
          oshima_scaling(cfg.params.energy, cfg.params.delta, cfg.n_list, cfg.grid);
      out << "n,peak_time,peak_probability,total_time\n";
      for (std::size_t i = 0; i < res.peaks.size(); ++i) {
        out << cfg.n_list[i] << ',' << fmt(res.peaks[i].peak_time) << ','
            << fmt(res.peaks[i].peak_probability) << ',' << fmt(res.total_time.observed[i])
            << '\n';
      }
      write_fit(out, "total_time", res.total_time);
      write_fit(out, "inverse_probability", res.inverse_probability);
      return 0;
    }
    case Command::Correct: {
      const double E = cfg.params.energy;
      const auto eps_grid = cfg.eps_steps == 1 ? std::vector<double>{0.0}
                                               : linspace(0.0, E, cfg.eps_steps);
      std::vector<double> phi_grid(cfg.phi_steps);
      for (int j = 0; j < cfg.phi_steps; ++j) phi_grid[j] = 2.0 * pi * j / cfg.phi_steps;
      const CorrectionResult best =
          error_correction_search(E, cfg.params.delta, cfg.space, eps_grid, phi_grid);
      const EvolutionSummary bare = summary_perturbed({E, 0.0, 0.0, cfg.params.delta}, cfg.space);
      out << "eps,phi,peak_probability,proper_time,rabi_frequency,a_coeff,"
             "uncorrected_probability\n"
          << fmt(best.term.eps) << ',' << fmt(best.term.phi) << ','
          << fmt(best.summary.peak_probability) << ',' << fmt(best.summary.proper_time) << ','
          << fmt(best.summary.rabi_frequency) << ',' << fmt(best.summary.a_coeff) << ','
          << fmt(bare.peak_probability) << '\n';
      return 0;
    }
    case Command::BetaScaling: {
      const ScalingFit fit = beta_window_scaling(cfg.params, cfg.n_list);
      out << "n,abs_beta\n";
      for (std::size_t i = 0; i < fit.n_values.size(); ++i) {
        out << cfg.n_list[i] << ',' << fmt(fit.observed[i]) << '\n';
      }
      write_fit(out, "abs_beta", fit);
      return 0;
    }
  }
  return 1;
}

}  // namespace

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
  omp_set_num_threads(config.worker_count);
  try {
    if (config.output_path == "-" || config.output_path.empty()) {
      return run_command(config, out);
    }
    std::ostringstream buffer;
    const int code = run_command(config, buffer);
    std::ofstream file(config.output_path, std::ios::binary);
    if (!file) throw std::invalid_argument("cannot open output '" + config.output_path + "'");
    file << buffer.str();
    return code;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "numerical failure: " << e.what() << '\n';
    return 2;
  }
}

int main_entry(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  if (!args.empty() && (args[0] == "--help" || args[0] == "-h" || args[0] == "help")) {
    out << usage();
    return 0;
  }
  RunConfig cfg;
  try {
    cfg = parse_config(args);
  } catch (const UsageError& e) {
    err << e.what();
    if (std::string_view(e.what()).back() != '\n') err << '\n';
    return 1;
  }
  return run(cfg, out, err);
}

}  // namespace qsearch::cli
