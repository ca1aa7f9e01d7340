#include "dpdo/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace dpdo {

namespace {

// Acceptance thresholds.
constexpr double kRoundTripTolerance = 1e-6;
constexpr double kHomogeneousTolerance = 1e-6;
constexpr double kAprioriSpread = 2.0;
constexpr double kKernelGapGrowth = 1.10;
constexpr double kRateFraction = 0.9;
constexpr double kFiniteSectionSlope = 0.9;
constexpr double kSolveResidual = 1e-10;
constexpr double kWellConditioned = 1e8;

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string num(int v) { return std::to_string(v); }

std::string short_num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

// "one", "zeta1", "zeta2", optionally raised to an integer power ("zeta2^3").
PeriodicSymbol boundary_symbol(const std::string& name, double h) {
  if (name == "one") return PeriodicSymbol([](double, double) { return cplx(1.0); }, 0.0, h);
  const auto caret = name.find('^');
  const std::string base = name.substr(0, caret);
  int power = 1;
  if (caret != std::string::npos) {
    const std::string exp = name.substr(caret + 1);
    if (exp.empty() || !std::all_of(exp.begin(), exp.end(), [](char ch) { return std::isdigit(ch) != 0; })) {
      throw InvalidInput("bad boundary symbol power in '" + name + "'");
    }
    power = std::stoi(exp);
  }
  if (base != "zeta1" && base != "zeta2") throw InvalidInput("unknown boundary symbol '" + name + "'");
  const bool first = base == "zeta1";
  return PeriodicSymbol(
      [h, power, first](double x1, double x2) {
        const cplx z = zeta(first ? x1 : x2, h);
        cplx out = 1.0;
        for (int i = 0; i < power; ++i) out *= z;
        return out;
      },
      power, h);
}

void require_decreasing(const Config& cfg, const std::vector<double>& hs, std::size_t min_count) {
  if (hs.size() < min_count) cfg.fail("grid.h", "need at least " + std::to_string(min_count) + " mesh sizes");
  for (std::size_t i = 0; i < hs.size(); ++i) {
    if (!(hs[i] > 0.0)) cfg.fail("grid.h", "mesh sizes must be positive");
    if (i > 0 && !(hs[i] < hs[i - 1])) cfg.fail("grid.h", "mesh sizes must be strictly decreasing");
  }
}

ContinuousProblem continuous_from(const Config& cfg) {
  const std::string family = cfg.text("problem.family");
  if (family != "radial") {
    const auto names = builtin_continuous_problem_names();
    if (std::find(names.begin(), names.end(), family) == names.end()) {
      cfg.fail("problem.family", "expected one of commutator, gap, arctan, radial for this mode");
    }
    return builtin_continuous_problem(family);
  }
  const double index = cfg.real("problem.index");
  ContinuousProblem p{cfg.real("problem.s"), cfg.integer("problem.n"), 0.0, radial_symbol(index), {}, {}};
  p.delta = cfg.real("problem.delta", index - p.s - p.n);
  const auto beta = cfg.reals("problem.beta");
  const auto gamma = cfg.reals("problem.gamma");
  if (p.n < 1 || beta.size() != static_cast<std::size_t>(p.n)) cfg.fail("problem.beta", "need n orders");
  if (gamma.size() != static_cast<std::size_t>(p.n)) cfg.fail("problem.gamma", "need n orders");
  for (int j = 0; j < p.n; ++j) {
    p.b_symbols.push_back(radial_symbol(beta[static_cast<std::size_t>(j)]));
    p.g_symbols.push_back(radial_symbol(gamma[static_cast<std::size_t>(j)]));
  }
  try {
    p.validate();
  } catch (const InvalidInput& e) {
    cfg.fail("problem.delta", e.what());
  }
  return p;
}

void require_margins(const Config& cfg, const ContinuousProblem& p, double beta_margin, double gamma_margin) {
  for (int j = 0; j < p.n; ++j) {
    if (!(p.s - p.beta(j) > beta_margin) || !(p.s - p.gamma(j) > gamma_margin)) {
      std::ostringstream msg;
      msg << "hypothesis fails: need s - beta_j > " << beta_margin << " and s - gamma_j > " << gamma_margin
          << " (j = " << j << ")";
      cfg.fail("problem.family", msg.str());
    }
  }
}

}  // namespace

Mode parse_mode(const std::string& name) {
  if (name == "solve") return Mode::Solve;
  if (name == "roundtrip") return Mode::Roundtrip;
  if (name == "lemma1") return Mode::ZetaGap;
  if (name == "lemma2") return Mode::KernelGap;
  if (name == "theorem3") return Mode::Commutator;
  if (name == "theorem4") return Mode::FiniteSection;
  throw InvalidConfiguration("unknown mode '" + name + "'");
}

std::string mode_name(Mode mode) {
  switch (mode) {
    case Mode::Solve: return "solve";
    case Mode::Roundtrip: return "roundtrip";
    case Mode::ZetaGap: return "lemma1";
    case Mode::KernelGap: return "lemma2";
    case Mode::Commutator: return "theorem3";
    case Mode::FiniteSection: return "theorem4";
  }
  return "unknown";
}

std::vector<std::string> mode_names() { return {"solve", "roundtrip", "lemma1", "lemma2", "theorem3", "theorem4"}; }

ProblemSpec ExperimentConfig::problem_at(double h) const {
  if (continuous) return discretize(*continuous, h);
  WaveFactorization fac = family == "geometric"
                              ? builtin_factor_family(FactorFamily::Geometric, params, h)
                              : builtin_factor_family(FactorFamily::ZetaShift, params, h);
  ProblemSpec spec{s, n, delta, std::move(fac), {}, {}, {}, {}};
  for (const auto& name : b_symbols) {
    const PeriodicSymbol sym = boundary_symbol(name, h);
    spec.b_ops.emplace_back(TraceSide::Bottom, sym, sym.order());
  }
  for (const auto& name : g_symbols) {
    const PeriodicSymbol sym = boundary_symbol(name, h);
    spec.g_ops.emplace_back(TraceSide::Left, sym, sym.order());
  }
  spec.validate();
  return spec;
}

int ExperimentConfig::nodes_at(double h) const {
  const int scaled = static_cast<int>(std::lround(nodes * hs.front() / h));
  return scaled + (scaled % 2);
}

ExperimentConfig make_experiment_config(const Config& cfg) {
  ExperimentConfig out;
  out.source = cfg;
  out.mode = parse_mode(cfg.text("mode"));
  const int seed = cfg.integer("seed", 1);
  if (seed < 0) cfg.fail("seed", "seed must be nonnegative");
  out.seed = static_cast<std::uint64_t>(seed);
  out.output_dir = cfg.text("output.dir", ".");
  out.name = cfg.text("output.name", mode_name(out.mode));
  out.hs = cfg.reals("grid.h");

  switch (out.mode) {
    case Mode::Solve:
    case Mode::Roundtrip: {
      out.family = cfg.text("problem.family");
      const auto periodized = builtin_continuous_problem_names();
      if (std::find(periodized.begin(), periodized.end(), out.family) != periodized.end()) {
        out.continuous = builtin_continuous_problem(out.family);
        out.s = out.continuous->s;
        out.n = out.continuous->n;
        out.delta = out.continuous->delta;
      } else {
        if (out.family != "geometric" && out.family != "zeta-shift") {
          cfg.fail("problem.family", "expected geometric, zeta-shift, commutator, gap or arctan");
        }
        out.params.a = cfg.real("problem.a", 0.0);
        out.params.p = cfg.real("problem.p", 1.0);
        out.params.q = cfg.real("problem.q", 1.0);
        out.params.c = cfg.real("problem.c", 0.0);
        out.params.kappa = cfg.real("problem.kappa", 1.0);
        out.params.kappa_minus = cfg.real("problem.kappa_minus", 1.0);
        if (out.family == "zeta-shift" && !cfg.has("problem.c")) cfg.text("problem.c");
        out.s = cfg.real("problem.s");
        out.n = cfg.integer("problem.n");
        out.delta = cfg.real("problem.delta");
        if (out.n < 1) cfg.fail("problem.n", "n must be a positive integer");
        out.b_symbols = cfg.texts("problem.b_symbols");
        out.g_symbols = cfg.texts("problem.g_symbols");
        if (out.b_symbols.size() != static_cast<std::size_t>(out.n)) cfg.fail("problem.b_symbols", "need n symbols");
        if (out.g_symbols.size() != static_cast<std::size_t>(out.n)) cfg.fail("problem.g_symbols", "need n symbols");
      }
      out.nodes = cfg.integer("grid.nodes");
      require_decreasing(cfg, out.hs, 1);
      out.trace_count = cfg.integer("roundtrip.traces", 5);
      if (out.trace_count < 1) cfg.fail("roundtrip.traces", "need at least one trace vector");
      if (out.mode == Mode::Solve) {
        out.data_kind = cfg.text("solve.data", "manufactured");
        if (out.data_kind == "constant") {
          out.b_values = cfg.reals("solve.b_values");
          out.g_values = cfg.reals("solve.g_values");
          if (out.b_values.size() != static_cast<std::size_t>(out.n)) cfg.fail("solve.b_values", "need n values");
          if (out.g_values.size() != static_cast<std::size_t>(out.n)) cfg.fail("solve.g_values", "need n values");
        } else if (out.data_kind != "manufactured") {
          cfg.fail("solve.data", "expected manufactured or constant");
        }
      }
      if (out.nodes < 2 * (out.n + 5)) cfg.fail("grid.nodes", "need at least 2 (n + 5) nodes per axis");
      for (const double h : out.hs) {
        try {
          (void)out.problem_at(h);
          (void)FrequencyGrid(h, out.nodes_at(h));
        } catch (const InvalidInput& e) {
          cfg.fail("problem.family", e.what());
        }
      }
      break;
    }
    case Mode::ZetaGap:
      require_decreasing(cfg, out.hs, 1);
      out.k_max = cfg.integer("lemma1.k_max", 4);
      out.samples = cfg.integer("lemma1.samples", 10000);
      if (out.k_max < 1) cfg.fail("lemma1.k_max", "k_max must be positive");
      if (out.samples < 2) cfg.fail("lemma1.samples", "need at least two samples");
      break;
    case Mode::KernelGap:
      out.continuous = continuous_from(cfg);
      require_margins(cfg, *out.continuous, 2.0, 2.0);
      require_decreasing(cfg, out.hs, 2);
      out.nodes = cfg.integer("grid.nodes");
      if (out.nodes < 2 || out.nodes % 2 != 0) cfg.fail("grid.nodes", "need a positive even node count");
      out.block_j = cfg.integer("lemma2.j", 0);
      out.block_k = cfg.integer("lemma2.k", 0);
      if (out.block_j < 0 || out.block_j >= out.continuous->n) cfg.fail("lemma2.j", "block index out of range");
      if (out.block_k < 0 || out.block_k >= out.continuous->n) cfg.fail("lemma2.k", "block index out of range");
      break;
    case Mode::Commutator:
    case Mode::FiniteSection:
      out.continuous = continuous_from(cfg);
      if (out.mode == Mode::Commutator) {
        require_margins(cfg, *out.continuous, 1.0, 2.0);
      } else {
        require_margins(cfg, *out.continuous, 3.0, 3.0);
      }
      require_decreasing(cfg, out.hs, 3);
      out.sweep.lambda = cfg.real("grid.lambda", 0.0);
      out.sweep.cells_per_pi = cfg.integer("grid.cells_per_pi", 4);
      try {
        (void)sweep_line(out.hs, out.sweep);
      } catch (const InvalidConfiguration& e) {
        cfg.fail(cfg.has("grid.lambda") ? "grid.lambda" : "grid.h", e.what());
      }
      break;
  }
  return out;
}

bool ExperimentReport::all_pass() const {
  return std::all_of(gates.begin(), gates.end(), [](const GateVerdict& g) { return g.pass; });
}

namespace {

void run_roundtrip(const ExperimentConfig& cfg, ExperimentReport& rep) {
  rep.columns = {"h", "N", "seed", "rel_error", "condition", "residual", "homogeneous_residual", "solution_norm",
                 "apriori_ratio"};
  double worst_error = 0.0, worst_homogeneous = 0.0, worst_solve = 0.0;
  bool solve_ok = true;
  std::vector<std::vector<double>> ratios(static_cast<std::size_t>(cfg.trace_count));
  // Each draw is sampled on every grid, sized for the coarsest cell.
  std::vector<RandomTraces> draws;
  for (int t = 0; t < cfg.trace_count; ++t) {
    draws.push_back(random_bump_traces(cfg.n, cfg.seed + static_cast<std::uint64_t>(t), 1.0 / cfg.hs.front()));
  }
  for (const double h : cfg.hs) {
    const ProblemSpec spec = cfg.problem_at(h);
    const FrequencyGrid grid(h, cfg.nodes_at(h));
    const IndexBox window{spec.n, spec.n + 4, spec.n, spec.n + 4};
    for (int t = 0; t < cfg.trace_count; ++t) {
      const std::uint64_t seed = cfg.seed + static_cast<std::uint64_t>(t);
      const TraceVector planted = draws[static_cast<std::size_t>(t)].sample(grid.line());
      const RoundTripReport rt = manufactured_roundtrip(spec, planted, grid);
      const HomogeneousResidual hr = homogeneous_residual(spec, planted, grid, window);
      const double ratio = apriori_ratio(spec, planted, grid);
      ratios[static_cast<std::size_t>(t)].push_back(ratio);
      worst_error = std::max(worst_error, rt.rel_error);
      worst_homogeneous = std::max(worst_homogeneous, hr.max_residual / hr.solution_norm);
      if (rt.condition <= kWellConditioned) {
        worst_solve = std::max(worst_solve, rt.residual);
        solve_ok = solve_ok && rt.residual <= kSolveResidual;
      }
      rep.rows.push_back({num(h), num(grid.size()), std::to_string(seed), num(rt.rel_error), num(rt.condition),
                          num(rt.residual), num(hr.max_residual), num(hr.solution_norm), num(ratio)});
    }
  }
  rep.gates.push_back({"AC1", worst_error <= kRoundTripTolerance,
                       "max rel_error " + short_num(worst_error) + " <= " + short_num(kRoundTripTolerance)});
  rep.gates.push_back({"AC2", worst_homogeneous <= kHomogeneousTolerance,
                       "max |A_d u_d| / ||u_d||_s " + short_num(worst_homogeneous) + " <= " +
                           short_num(kHomogeneousTolerance) + " over 25 points"});
  rep.gates.push_back({"AC8", solve_ok,
                       "max solve residual at condition <= 1e8: " + short_num(worst_solve) + " <= " +
                           short_num(kSolveResidual)});
  if (cfg.hs.size() >= 2) {
    double spread = 1.0;
    for (const auto& r : ratios) spread = std::max(spread, *std::max_element(r.begin(), r.end()) / *std::min_element(r.begin(), r.end()));
    rep.gates.push_back({"AC7", spread <= kAprioriSpread,
                         "max/min a priori ratio across h " + short_num(spread) + " <= " + short_num(kAprioriSpread)});
    rep.summary.emplace_back("apriori_spread", num(spread));
  }
  rep.summary.emplace_back("max_rel_error", num(worst_error));
  rep.summary.emplace_back("max_relative_homogeneous_residual", num(worst_homogeneous));
}

void run_solve(const ExperimentConfig& cfg, ExperimentReport& rep) {
  rep.columns = {"h", "N", "component", "k", "xi", "re", "im"};
  bool solve_ok = true;
  double worst = 0.0;
  for (const double h : cfg.hs) {
    ProblemSpec spec = cfg.problem_at(h);
    const FrequencyGrid grid(h, cfg.nodes_at(h));
    if (cfg.data_kind == "constant") {
      for (int j = 0; j < spec.n; ++j) {
        const auto uj = static_cast<std::size_t>(j);
        spec.b_data.push_back({grid, Eigen::VectorXcd::Constant(grid.size(), cplx(cfg.b_values[uj]))});
        spec.g_data.push_back({grid, Eigen::VectorXcd::Constant(grid.size(), cplx(cfg.g_values[uj]))});
      }
    } else {
      const TraceVector planted = random_bump_traces(spec.n, cfg.seed, grid.hbar()).sample(grid.line());
      const Spectrum2D u_hat = reconstruct_solution(planted, spec.factorization, grid);
      for (int j = 0; j < spec.n; ++j) {
        spec.b_data.push_back(boundary_trace_spectrum(spec.b_ops[static_cast<std::size_t>(j)], u_hat));
        spec.g_data.push_back(boundary_trace_spectrum(spec.g_ops[static_cast<std::size_t>(j)], u_hat));
      }
    }
    const SolveReport sol = solve_block_system(assemble_discrete_system(spec, grid));
    if (sol.condition <= kWellConditioned) {
      worst = std::max(worst, sol.residual);
      solve_ok = solve_ok && sol.residual <= kSolveResidual;
    }
    rep.summary.emplace_back("h=" + num(h) + ".condition", num(sol.condition));
    rep.summary.emplace_back("h=" + num(h) + ".residual", num(sol.residual));
    for (int k = 0; k < spec.n; ++k) {
      const auto uk = static_cast<std::size_t>(k);
      for (int i = 0; i < grid.size(); ++i) {
        const cplx c = sol.traces.c[uk](i);
        const cplx d = sol.traces.d[uk](i);
        rep.rows.push_back({num(h), num(grid.size()), "c", num(k), num(grid.node(i)), num(c.real()), num(c.imag())});
        rep.rows.push_back({num(h), num(grid.size()), "d", num(k), num(grid.node(i)), num(d.real()), num(d.imag())});
      }
    }
  }
  rep.gates.push_back({"AC8", solve_ok,
                       "max solve residual at condition <= 1e8: " + short_num(worst) + " <= " + short_num(kSolveResidual)});
}

void run_zeta_gap(const ExperimentConfig& cfg, ExperimentReport& rep) {
  rep.columns = {"h", "N", "k", "max_gap", "max_bound", "ratio", "violations"};
  int violations = 0;
  double worst = 0.0;
  for (const auto& row : zeta_power_sweep(cfg.hs, cfg.k_max, cfg.samples)) {
    violations += row.violations;
    worst = std::max(worst, row.max_ratio);
    rep.rows.push_back({num(row.h), num(row.samples), num(row.k), num(row.max_gap), num(row.max_bound),
                        num(row.max_ratio), num(row.violations)});
  }
  rep.gates.push_back({"AC3", violations == 0,
                       std::to_string(violations) + " violations of gap <= k e^{k pi} h |xi|^{k+1}, max ratio " +
                           short_num(worst)});
}

void run_kernel_gap(const ExperimentConfig& cfg, ExperimentReport& rep) {
  rep.columns = {"h", "N", "j", "k", "ratio_l", "ratio_m", "ratio_r", "ratio_p"};
  std::vector<KernelGapRatios> all;
  for (const double h : cfg.hs) {
    const FrequencyGrid grid(h, cfg.nodes_at(h));
    const KernelGapRatios r = kernel_gaps(*cfg.continuous, grid, cfg.block_j, cfg.block_k);
    all.push_back(r);
    rep.rows.push_back({num(h), num(grid.size()), num(cfg.block_j), num(cfg.block_k), num(r.l), num(r.m), num(r.r),
                        num(r.p)});
  }
  double worst = 0.0;
  bool ok = true;
  auto check = [&](double prev, double next) {
    if (prev == 0.0) {
      ok = ok && next == 0.0;
      return;
    }
    worst = std::max(worst, next / prev);
    ok = ok && next <= kKernelGapGrowth * prev;
  };
  for (std::size_t i = 1; i < all.size(); ++i) {
    check(all[i - 1].l, all[i].l);
    check(all[i - 1].m, all[i].m);
    check(all[i - 1].r, all[i].r);
    check(all[i - 1].p, all[i].p);
  }
  rep.gates.push_back({"AC4", ok, "max growth factor per refinement " + short_num(worst) + " <= " + short_num(kKernelGapGrowth)});
}

void run_rate(const ExperimentConfig& cfg, ExperimentReport& rep) {
  rep.columns = {"h", "N", "norm"};
  const bool commutator = cfg.mode == Mode::Commutator;
  const RateReport r = commutator ? commutator_rate(*cfg.continuous, cfg.hs, cfg.sweep)
                                  : finite_section_rate(*cfg.continuous, cfg.hs, cfg.sweep);
  for (std::size_t i = 0; i < r.norms.size(); ++i) {
    rep.rows.push_back({num(r.h_values[i]), num(r.nodes[i]), num(r.norms[i])});
  }
  rep.summary.emplace_back("slope", num(r.slope));
  rep.summary.emplace_back("epsilon", num(r.epsilon));
  rep.summary.emplace_back("degenerate", r.degenerate ? "true" : "false");
  rep.summary.emplace_back("monotone", r.monotone ? "true" : (r.coarse_inversion_only ? "coarse-inversion" : "false"));
  rep.summary.emplace_back("lambda", num(sweep_line(cfg.hs, cfg.sweep).half_width()));
  const double target = commutator ? kRateFraction * r.epsilon : kFiniteSectionSlope;
  const bool pass = !r.degenerate && r.slope >= target;
  rep.gates.push_back({commutator ? "AC6" : "AC5", pass,
                       r.degenerate ? std::string("degenerate fit (nonpositive norm)")
                                    : "slope " + short_num(r.slope) + " >= " + short_num(target)});
}

}  // namespace

ExperimentReport run_experiment(const ExperimentConfig& cfg) {
  ExperimentReport rep;
  rep.schema = mode_name(cfg.mode) + "-v1";
  const auto start = Clock::now();
  switch (cfg.mode) {
    case Mode::Roundtrip: run_roundtrip(cfg, rep); break;
    case Mode::Solve: run_solve(cfg, rep); break;
    case Mode::ZetaGap: run_zeta_gap(cfg, rep); break;
    case Mode::KernelGap: run_kernel_gap(cfg, rep); break;
    case Mode::Commutator:
    case Mode::FiniteSection: run_rate(cfg, rep); break;
  }
  rep.timings.emplace_back("compute_seconds", seconds_since(start));
  return rep;
}

std::string schema_text(Mode mode) {
  std::ostringstream out;
  out << "# schema=" << mode_name(mode) << "-v1\n";
  auto col = [&out](const char* name, const char* what) { out << name << "\t" << what << "\n"; };
  col("h", "mesh size");
  switch (mode) {
    case Mode::Solve:
      col("N", "frequency nodes per axis");
      col("component", "c (traces on xi_1) or d (traces on xi_2)");
      col("k", "trace index 0..n-1");
      col("xi", "frequency node");
      col("re", "real part of the trace value");
      col("im", "imaginary part of the trace value");
      break;
    case Mode::Roundtrip:
      col("N", "frequency nodes per axis");
      col("seed", "seed of the planted random traces");
      col("rel_error", "s_k-weighted error of the recovered traces relative to the planted ones");
      col("condition", "1-norm condition estimate of the reduced system");
      col("residual", "relative residual of the linear solve");
      col("homogeneous_residual", "max |A_d u_d| over 25 interior quadrant points");
      col("solution_norm", "||u_d||_s");
      col("apriori_ratio", "||u_d||_s / sum_k ([c_k]_{s_k} + [d_k]_{s_k})");
      break;
    case Mode::ZetaGap:
      col("N", "xi samples on [-pi/h, pi/h]");
      col("k", "power");
      col("max_gap", "max |(i xi)^k - zeta^k|");
      col("max_bound", "max k e^{k pi} h |xi|^{k+1}");
      col("ratio", "max gap / bound");
      col("violations", "samples with gap > bound");
      break;
    case Mode::KernelGap:
      col("N", "frequency nodes per axis");
      col("j", "boundary operator index");
      col("k", "trace index");
      col("ratio_l", "max |L - l| / (h (1 + |xi|)^{beta_j - index + k + 1})");
      col("ratio_m", "max |M - m| / (h (1 + |xi|)^{gamma_j - index + k + 1})");
      col("ratio_r", "max |R - r| / (h (1 + |xi_1|)^{beta_j - index + k + 2})");
      col("ratio_p", "max |P - p| / (h (1 + |xi_2|)^{gamma_j - index + k + 2})");
      break;
    case Mode::Commutator:
      col("N", "truncated-line nodes inside (-pi/h, pi/h)");
      col("norm", "weighted norm of X_h Q - Q X_h");
      break;
    case Mode::FiniteSection:
      col("N", "nodes per axis of the cell grid");
      col("norm", "weighted norm of X_h Q X_h - q");
      break;
  }
  return out.str();
}

OutputPaths write_report(const ExperimentConfig& cfg, const ExperimentReport& report) {
  const char* env = std::getenv("DPDO_OUTPUT_DIR");
  const std::filesystem::path dir = (env != nullptr && *env != '\0') ? std::filesystem::path(env)
                                                                     : std::filesystem::path(cfg.output_dir);
  std::filesystem::create_directories(dir);
  OutputPaths paths{(dir / (cfg.name + ".csv")).string(), (dir / (cfg.name + ".summary")).string()};

  std::ofstream csv(paths.csv);
  if (!csv) throw Error("cannot write " + paths.csv);
  csv << "# schema=" << report.schema << "\n";
  for (std::size_t i = 0; i < report.columns.size(); ++i) csv << (i ? "," : "") << report.columns[i];
  csv << "\n";
  for (const auto& row : report.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) csv << (i ? "," : "") << row[i];
    csv << "\n";
  }

  std::ofstream sum(paths.summary);
  if (!sum) throw Error("cannot write " + paths.summary);
  sum << "schema = " << report.schema << "\n";
  sum << "csv = " << paths.csv << "\n";
  for (const auto& [key, entry] : cfg.source.entries()) sum << "config." << key << " = " << entry.value << "\n";
  for (const auto& [key, value] : report.summary) sum << "result." << key << " = " << value << "\n";
  for (const auto& gate : report.gates) {
    sum << "gate." << gate.id << " = " << (gate.pass ? "PASS" : "FAIL") << "\n";
    sum << "gate." << gate.id << ".detail = " << gate.detail << "\n";
  }
  for (const auto& [key, value] : report.timings) sum << "timing." << key << " = " << short_num(value) << "\n";
  sum << "verdict = " << (report.all_pass() ? "PASS" : "FAIL") << "\n";
  return paths;
}

}  // namespace dpdo
