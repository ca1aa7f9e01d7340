#include "dpdo/comparison.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <boost/math/quadrature/sinh_sinh.hpp>

#include "dpdo/linalg.hpp"

namespace dpdo {

namespace {

cplx ipow(cplx z, int k) {
  cplx out = 1.0;
  for (int i = 0; i < k; ++i) out *= z;
  return out;
}

void require_margin(const ContinuousProblem& problem, double beta_margin, double gamma_margin, const char* what) {
  for (int j = 0; j < problem.n; ++j) {
    if (!(problem.s - problem.beta(j) > beta_margin) || !(problem.s - problem.gamma(j) > gamma_margin)) {
      std::ostringstream msg;
      msg << what << ": need s - beta_j > " << beta_margin << " and s - gamma_j > " << gamma_margin
          << " (fails at j = " << j << ")";
      throw InvalidInput(msg.str());
    }
  }
}

// Integral over the real line of a complex integrand.
cplx integrate_line(const std::function<cplx(double)>& f) {
  thread_local boost::math::quadrature::sinh_sinh<double> rule;
  const double re = rule.integrate([&f](double x) { return f(x).real(); });
  const double im = rule.integrate([&f](double x) { return f(x).imag(); });
  return {re, im};
}

double block_norm(const Eigen::Ref<const Eigen::MatrixXcd>& block) {
  if (block.size() == 0) return 0.0;
  if (block.rows() == block.cols()) {
    const Eigen::MatrixXcd off = block.triangularView<Eigen::StrictlyUpper>().toDenseMatrix() +
                                 block.triangularView<Eigen::StrictlyLower>().toDenseMatrix();
    if (off.cwiseAbs().maxCoeff() == 0.0) return block.diagonal().cwiseAbs().maxCoeff();
  }
  return largest_singular_value(block).sigma;
}

std::vector<Eigen::VectorXd> block_weights(const ContinuousProblem& problem,
                                           const std::function<Eigen::VectorXd(double)>& weight) {
  std::vector<Eigen::VectorXd> out;
  for (int side = 0; side < 2; ++side) {
    for (int k = 0; k < problem.n; ++k) out.push_back(weight(problem.trace_exponent(k)));
  }
  return out;
}

}  // namespace

ZetaPowerGap zeta_power_gap(double xi, int k, double h) {
  if (k < 1) throw InvalidInput("zeta_power_gap: k must be positive");
  if (!(h > 0.0)) throw InvalidInput("zeta_power_gap: h must be positive");
  if (std::abs(xi) > kPi / h * (1.0 + 1e-12)) throw InvalidInput("zeta_power_gap: need |xi| <= pi / h");
  ZetaPowerGap out;
  out.gap = std::abs(ipow(cplx(0.0, xi), k) - ipow(zeta(xi, h), k));
  out.bound = k * std::exp(k * kPi) * h * std::pow(std::abs(xi), k + 1);
  return out;
}

std::vector<ZetaPowerSweepRow> zeta_power_sweep(const std::vector<double>& hs, int k_max, int samples) {
  if (samples < 2) throw InvalidInput("zeta_power_sweep: need at least two samples");
  std::vector<ZetaPowerSweepRow> rows;
  for (const double h : hs) {
    const double edge = kPi / h;
    for (int k = 1; k <= k_max; ++k) {
      ZetaPowerSweepRow row;
      row.h = h;
      row.k = k;
      row.samples = samples;
      for (int i = 0; i < samples; ++i) {
        const double xi = (i == samples - 1) ? edge : -edge + 2.0 * edge * i / (samples - 1);
        const ZetaPowerGap g = zeta_power_gap(xi, k, h);
        row.max_gap = std::max(row.max_gap, g.gap);
        row.max_bound = std::max(row.max_bound, g.bound);
        if (g.bound > 0.0) row.max_ratio = std::max(row.max_ratio, g.gap / g.bound);
        if (g.gap > g.bound) ++row.violations;
      }
      rows.push_back(row);
    }
  }
  return rows;
}

KernelGapRatios kernel_gaps(const ContinuousProblem& problem, const FrequencyGrid& grid, int j, int k) {
  problem.validate();
  require_margin(problem, 2.0, 2.0, "kernel_gaps");
  if (j < 0 || j >= problem.n || k < 0 || k >= problem.n) throw InvalidInput("kernel_gaps: block index out of range");

  const double h = grid.h();
  const ProblemSpec discrete = discretize(problem, h);
  const BlockSystem q = assemble_discrete_system(discrete, grid);
  const BlockSystem cont = assemble_continuous_system(problem, grid.line());
  const auto idx = static_cast<std::size_t>(j * problem.n + k);
  const double w = grid.weight();
  const double index = problem.index();
  const double e_l = problem.beta(j) - index + k + 1;
  const double e_m = problem.gamma(j) - index + k + 1;

  const ContinuousSymbol& b = problem.b_symbols[static_cast<std::size_t>(j)];
  const ContinuousSymbol& g = problem.g_symbols[static_cast<std::size_t>(j)];
  const ContinuousSymbol& plus = problem.plus_factor;

  KernelGapRatios out;
  for (int a = 0; a < grid.size(); ++a) {
    const double x1 = grid.node(a);
    for (int c = 0; c < grid.size(); ++c) {
      const double radius = 1.0 + std::hypot(x1, grid.node(c));
      const double dl = std::abs(cont.l[idx](a, c) - q.l[idx](a, c)) / w;
      const double dm = std::abs(cont.m[idx](a, c) - q.m[idx](a, c)) / w;
      out.l = std::max(out.l, dl / (h * std::pow(radius, e_l)));
      out.m = std::max(out.m, dm / (h * std::pow(radius, e_m)));
    }
    const cplx r_full = integrate_line([&](double x2) { return b(x1, x2) / plus(x1, x2) * ipow(cplx(0.0, x2), k); });
    const cplx p_full = integrate_line([&](double y1) { return g(y1, x1) / plus(y1, x1) * ipow(cplx(0.0, y1), k); });
    const double radius = 1.0 + std::abs(x1);
    out.r = std::max(out.r, std::abs(r_full - q.r[idx](a)) / (h * std::pow(radius, e_l + 1)));
    out.p = std::max(out.p, std::abs(p_full - q.p[idx](a)) / (h * std::pow(radius, e_m + 1)));
  }
  return out;
}

WeightedOperatorFrame make_weighted_frame(const Eigen::MatrixXcd& op, const std::vector<Eigen::VectorXd>& row_weights,
                                          const std::vector<Eigen::VectorXd>& col_weights) {
  auto stack = [](const std::vector<Eigen::VectorXd>& parts, std::vector<Eigen::Index>& sizes) {
    Eigen::Index total = 0;
    for (const auto& p : parts) total += p.size();
    Eigen::VectorXd v(total);
    Eigen::Index at = 0;
    for (const auto& p : parts) {
      if ((p.array() <= 0.0).any() || !p.allFinite()) throw InvalidInput("make_weighted_frame: weights must be positive");
      v.segment(at, p.size()) = p;
      at += p.size();
      sizes.push_back(p.size());
    }
    return v;
  };
  WeightedOperatorFrame frame;
  const Eigen::VectorXd rw = stack(row_weights, frame.row_blocks);
  const Eigen::VectorXd cw = stack(col_weights, frame.col_blocks);
  if (rw.size() != op.rows() || cw.size() != op.cols()) throw InvalidInput("make_weighted_frame: block sizes do not match the matrix");
  frame.matrix = rw.cwiseSqrt().asDiagonal() * op * cw.cwiseSqrt().cwiseInverse().asDiagonal();
  return frame;
}

Eigen::VectorXd continuous_sobolev_weights(const MidpointLine& line, double s) {
  Eigen::VectorXd w(line.size());
  for (int i = 0; i < line.size(); ++i) w(i) = line.weight() * std::pow(1.0 + line.node(i) * line.node(i), s);
  return w;
}

Eigen::VectorXd discrete_sobolev_weights(const FrequencyGrid& grid, double s) {
  Eigen::VectorXd w(grid.size());
  for (int i = 0; i < grid.size(); ++i) w(i) = grid.weight() * std::pow(1.0 + std::norm(zeta(grid.node(i), grid.h())), s);
  return w;
}

double estimate_operator_norm(const WeightedOperatorFrame& frame) {
  if (!frame.matrix.allFinite()) throw EstimationError("estimate_operator_norm: matrix has non-finite entries");
  double norm = 0.0;
  Eigen::Index col = 0;
  for (const Eigen::Index cols : frame.col_blocks) {
    double column_sum = 0.0;
    Eigen::Index row = 0;
    for (const Eigen::Index rows : frame.row_blocks) {
      column_sum += block_norm(frame.matrix.block(row, col, rows, cols));
      row += rows;
    }
    norm = std::max(norm, column_sum);
    col += cols;
  }
  return norm;
}

RateReport fit_rate(const std::vector<double>& h_values, const std::vector<double>& norms) {
  if (h_values.size() != norms.size()) throw InvalidInput("fit_rate: h and norm counts differ");
  if (h_values.size() < 3) throw InvalidInput("fit_rate: need at least three points");
  for (std::size_t i = 0; i < h_values.size(); ++i) {
    if (!(h_values[i] > 0.0)) throw InvalidInput("fit_rate: h values must be positive");
    if (i > 0 && !(h_values[i] < h_values[i - 1])) throw InvalidInput("fit_rate: h values must be strictly decreasing");
  }
  RateReport report;
  report.h_values = h_values;
  report.norms = norms;

  int inversions = 0;
  bool first_only = true;
  for (std::size_t i = 1; i < norms.size(); ++i) {
    if (norms[i] > norms[i - 1]) {
      ++inversions;
      if (i != 1) first_only = false;
    }
  }
  report.monotone = inversions == 0;
  report.coarse_inversion_only = inversions == 1 && first_only;

  if (std::any_of(norms.begin(), norms.end(), [](double v) { return !(v > 0.0) || !std::isfinite(v); })) {
    report.degenerate = true;
    report.slope = std::numeric_limits<double>::quiet_NaN();
    return report;
  }
  const auto count = static_cast<double>(norms.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < norms.size(); ++i) {
    mx += std::log(h_values[i]);
    my += std::log(norms[i]);
  }
  mx /= count;
  my /= count;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < norms.size(); ++i) {
    const double dx = std::log(h_values[i]) - mx;
    sxy += dx * (std::log(norms[i]) - my);
    sxx += dx * dx;
  }
  report.slope = sxy / sxx;
  return report;
}

MidpointLine sweep_line(const std::vector<double>& hs, const SweepOptions& options) {
  if (hs.empty()) throw InvalidConfiguration("sweep: empty h list");
  if (options.cells_per_pi < 1) throw InvalidConfiguration("sweep: cells_per_pi must be positive");
  const double h_min = *std::min_element(hs.begin(), hs.end());
  if (!(h_min > 0.0)) throw InvalidConfiguration("sweep: h values must be positive");
  const double lambda = options.lambda > 0.0 ? options.lambda : 4.0 * kPi / h_min;
  if (lambda < kPi / h_min * (1.0 - 1e-12)) {
    std::ostringstream msg;
    msg << "sweep: truncation lambda = " << lambda << " is below pi / h = " << kPi / h_min;
    throw InvalidConfiguration(msg.str());
  }
  const double k = options.cells_per_pi;
  auto aligned = [](double v) { return std::abs(v - std::round(v)) <= 1e-9 * std::max(1.0, std::abs(v)); };
  const double cells = 2.0 * lambda * k / kPi;
  if (!aligned(cells)) throw InvalidConfiguration("sweep: 2 lambda / (pi / cells_per_pi) is not an integer");
  for (const double h : hs) {
    if (!aligned(k / h)) {
      std::ostringstream msg;
      msg << "sweep: cells_per_pi / h = " << k / h << " is not an integer, cell edge pi / h is off the grid";
      throw InvalidConfiguration(msg.str());
    }
  }
  return MidpointLine(lambda, static_cast<int>(std::lround(cells)));
}

namespace {

Eigen::VectorXd inside_indicator(const MidpointLine& line, double h) {
  Eigen::VectorXd chi(line.size());
  for (int i = 0; i < line.size(); ++i) chi(i) = std::abs(line.node(i)) < kPi / h ? 1.0 : 0.0;
  return chi;
}

}  // namespace

RateReport commutator_rate(const ContinuousProblem& problem, const std::vector<double>& hs,
                           const SweepOptions& options) {
  problem.validate();
  require_margin(problem, 1.0, 2.0, "commutator_rate");
  const MidpointLine line = sweep_line(hs, options);
  const BlockSystem sys = assemble_continuous_system(problem, line);
  const auto weights = block_weights(problem, [&line](double s) { return continuous_sobolev_weights(line, s); });
  const WeightedOperatorFrame q = make_weighted_frame(sys.dense(), weights, weights);

  const int blocks = 2 * problem.n;
  std::vector<double> norms;
  std::vector<int> nodes;
  for (const double h : hs) {
    const Eigen::VectorXd chi = inside_indicator(line, h);
    Eigen::VectorXd x(blocks * line.size());
    for (int b = 0; b < blocks; ++b) x.segment(b * line.size(), line.size()) = chi;
    WeightedOperatorFrame c = q;
    for (Eigen::Index col = 0; col < c.matrix.cols(); ++col) {
      for (Eigen::Index row = 0; row < c.matrix.rows(); ++row) c.matrix(row, col) *= x(row) - x(col);
    }
    norms.push_back(estimate_operator_norm(c));
    nodes.push_back(static_cast<int>(chi.sum()));
  }
  RateReport report = fit_rate(hs, norms);
  report.nodes = nodes;
  report.epsilon = std::numeric_limits<double>::infinity();
  for (int j = 0; j < problem.n; ++j) {
    report.epsilon = std::min({report.epsilon, problem.s - problem.beta(j) - 1.0, problem.s - problem.gamma(j) - 1.0});
  }
  return report;
}

RateReport finite_section_rate(const ContinuousProblem& problem, const std::vector<double>& hs,
                               const SweepOptions& options) {
  problem.validate();
  require_margin(problem, 3.0, 3.0, "finite_section_rate");
  const MidpointLine line = sweep_line(hs, options);
  const Eigen::MatrixXcd q_full = assemble_continuous_system(problem, line).dense();
  const int n_line = line.size();
  const int blocks = 2 * problem.n;

  std::vector<double> norms;
  std::vector<int> nodes;
  for (const double h : hs) {
    const int inside = static_cast<int>(std::lround(2.0 * options.cells_per_pi / h));
    const int first = (n_line - inside) / 2;
    const FrequencyGrid grid(h, inside);
    if (std::abs(line.node(first) - grid.node(0)) > 1e-9 * std::max(1.0, std::abs(grid.node(0)))) {
      throw InvalidConfiguration("finite_section_rate: truncated grid does not align with the cell grid");
    }
    const Eigen::MatrixXcd q = assemble_discrete_system(discretize(problem, h), grid).dense();
    Eigen::MatrixXcd diff(blocks * inside, blocks * inside);
    for (int rb = 0; rb < blocks; ++rb) {
      for (int cb = 0; cb < blocks; ++cb) {
        diff.block(rb * inside, cb * inside, inside, inside) =
            q_full.block(rb * n_line + first, cb * n_line + first, inside, inside) -
            q.block(rb * inside, cb * inside, inside, inside);
      }
    }
    const auto weights = block_weights(problem, [&grid](double s) { return discrete_sobolev_weights(grid, s); });
    norms.push_back(estimate_operator_norm(make_weighted_frame(diff, weights, weights)));
    nodes.push_back(inside);
  }
  RateReport report = fit_rate(hs, norms);
  report.nodes = nodes;
  report.epsilon = 1.0;
  return report;
}

ContinuousProblem builtin_continuous_problem(std::string_view name) {
  auto make = [](double index, double s, int n, std::vector<double> orders) {
    ContinuousProblem p{s, n, 0.0, radial_symbol(index), {}, {}};
    p.delta = index - s - n;
    for (const double o : orders) {
      p.b_symbols.push_back(radial_symbol(o));
      p.g_symbols.push_back(radial_symbol(o));
    }
    return p;
  };
  if (name == "commutator") return make(3.0, 2.25, 1, {0.0});
  if (name == "gap") return make(5.0, 3.25, 2, {0.0, -1.0});
  if (name == "arctan") return make(4.0, 3.25, 1, {0.0});
  throw InvalidInput("unknown built-in continuous problem '" + std::string(name) + "'");
}

std::vector<std::string> builtin_continuous_problem_names() { return {"commutator", "gap", "arctan"}; }

}  // namespace dpdo
