#include "dpdo/system.hpp"

#include <cmath>
#include <random>
#include <sstream>

#include "dpdo/linalg.hpp"

namespace dpdo {

namespace {

constexpr double kIndexTolerance = 1e-9;

void validate_orders(double index, double s, int n, double delta) {
  if (n < 1) throw InvalidInput("problem: n must be a positive integer");
  if (!(std::abs(delta) < 0.5)) throw InvalidInput("problem: need |delta| < 1/2");
  if (std::abs(index - s - (n + delta)) > kIndexTolerance) {
    std::ostringstream msg;
    msg << "problem: index - s = " << index - s << " but n + delta = " << n + delta;
    throw InvalidInput(msg.str());
  }
}

struct KernelSource {
  int n = 0;
  RealSymbolFn plus;
  std::function<cplx(int, double, double)> b;
  std::function<cplx(int, double, double)> g;
  std::function<cplx(double)> phi;  // phi_1; phi_k = phi_1^k
};

BlockSystem assemble(const KernelSource& src, const MidpointLine& line) {
  const int n = src.n;
  const int nodes = line.size();
  const double w = line.weight();

  Eigen::MatrixXcd inv_plus(nodes, nodes);
  for (int b = 0; b < nodes; ++b) {
    for (int a = 0; a < nodes; ++a) {
      const cplx v = src.plus(line.node(a), line.node(b));
      if (!(std::abs(v) > 0.0) || !std::isfinite(std::abs(v))) {
        std::ostringstream msg;
        msg << "assembly: plus factor vanishes or is not finite at node (" << line.node(a) << ", "
            << line.node(b) << ")";
        throw AssemblyError(msg.str());
      }
      inv_plus(a, b) = 1.0 / v;
    }
  }

  BlockSystem sys;
  sys.n = n;
  sys.line = line;
  sys.trace_powers.assign(static_cast<std::size_t>(n), Eigen::VectorXcd::Ones(nodes));
  for (int k = 1; k < n; ++k) {
    for (int i = 0; i < nodes; ++i) {
      sys.trace_powers[static_cast<std::size_t>(k)](i) =
          sys.trace_powers[static_cast<std::size_t>(k - 1)](i) * src.phi(line.node(i));
    }
  }
  const std::size_t blocks = static_cast<std::size_t>(n * n);
  sys.r.resize(blocks);
  sys.p.resize(blocks);
  sys.l.resize(blocks);
  sys.m.resize(blocks);

  Eigen::MatrixXcd kb(nodes, nodes), kg(nodes, nodes);
  for (int j = 0; j < n; ++j) {
    for (int b = 0; b < nodes; ++b) {
      for (int a = 0; a < nodes; ++a) {
        kb(a, b) = src.b(j, line.node(a), line.node(b)) * inv_plus(a, b);
        kg(a, b) = src.g(j, line.node(a), line.node(b)) * inv_plus(a, b);
      }
    }
    for (int k = 0; k < n; ++k) {
      const auto idx = static_cast<std::size_t>(j * n + k);
      const Eigen::VectorXcd& phi = sys.trace_powers[static_cast<std::size_t>(k)];
      sys.r[idx] = (kb * phi) * w;
      sys.l[idx] = (phi.asDiagonal() * kb) * w;
      sys.p[idx] = (kg.transpose() * phi) * w;
      sys.m[idx] = (phi.asDiagonal() * kg.transpose()) * w;
      if (!sys.r[idx].allFinite() || !sys.l[idx].allFinite() || !sys.p[idx].allFinite() ||
          !sys.m[idx].allFinite()) {
        throw AssemblyError("assembly: non-finite kernel entry");
      }
    }
  }
  return sys;
}

}  // namespace

void ProblemSpec::validate() const {
  validate_orders(index(), s, n, delta);
  const auto un = static_cast<std::size_t>(n);
  if (b_ops.size() != un || g_ops.size() != un) {
    throw InvalidInput("problem: need exactly n B-type and n G-type boundary operators");
  }
  for (const auto& op : b_ops) {
    if (op.side != TraceSide::Bottom) throw InvalidInput("problem: B-type operators must trace on x_2 = 0");
    if (std::abs(op.symbol.h() - h()) > 1e-14 * h()) throw InvalidInput("problem: boundary symbol mesh mismatch");
  }
  for (const auto& op : g_ops) {
    if (op.side != TraceSide::Left) throw InvalidInput("problem: G-type operators must trace on x_1 = 0");
    if (std::abs(op.symbol.h() - h()) > 1e-14 * h()) throw InvalidInput("problem: boundary symbol mesh mismatch");
  }
  if (!b_data.empty() || !g_data.empty()) {
    if (b_data.size() != un || g_data.size() != un) {
      throw InvalidInput("problem: boundary data must hold n entries per side");
    }
    for (int j = 0; j < n; ++j) {
      const auto uj = static_cast<std::size_t>(j);
      const double nb = sobolev_norm_1d(b_data[uj], s - b_ops[uj].order - 0.5);
      const double ng = sobolev_norm_1d(g_data[uj], s - g_ops[uj].order - 0.5);
      if (!std::isfinite(nb) || !std::isfinite(ng)) {
        throw InvalidInput("problem: boundary data are not in the trace spaces");
      }
    }
  }
}

void ContinuousProblem::validate() const {
  validate_orders(index(), s, n, delta);
  const auto un = static_cast<std::size_t>(n);
  if (b_symbols.size() != un || g_symbols.size() != un) {
    throw InvalidInput("continuous problem: need exactly n B-type and n G-type symbols");
  }
}

ProblemSpec discretize(const ContinuousProblem& problem, double h) {
  problem.validate();
  const PeriodicSymbol plus = periodize(problem.plus_factor, h);
  AnalyticFactor plus_factor{[plus](double x1, double x2) { return plus(x1, x2); }, {}, problem.index()};
  AnalyticFactor minus_factor{[](double, double) { return cplx(1.0); }, {}, 0.0};
  ProblemSpec spec{problem.s,
                   problem.n,
                   problem.delta,
                   WaveFactorization(std::move(plus_factor), std::move(minus_factor), problem.index(), h),
                   {},
                   {},
                   {},
                   {}};
  for (int j = 0; j < problem.n; ++j) {
    const auto uj = static_cast<std::size_t>(j);
    spec.b_ops.emplace_back(TraceSide::Bottom, periodize(problem.b_symbols[uj], h), problem.beta(j));
    spec.g_ops.emplace_back(TraceSide::Left, periodize(problem.g_symbols[uj], h), problem.gamma(j));
  }
  spec.validate();
  return spec;
}

Eigen::VectorXcd TraceVector::stacked() const {
  const int nn = n();
  if (nn == 0) return {};
  const auto nodes = c.front().size();
  Eigen::VectorXcd v(2 * nn * nodes);
  for (int k = 0; k < nn; ++k) {
    v.segment(k * nodes, nodes) = c[static_cast<std::size_t>(k)];
    v.segment((nn + k) * nodes, nodes) = d[static_cast<std::size_t>(k)];
  }
  return v;
}

TraceVector TraceVector::from_stacked(int n, const Eigen::VectorXcd& v) {
  if (n <= 0 || v.size() % (2 * n) != 0) throw InvalidInput("TraceVector: stacked size mismatch");
  const auto nodes = v.size() / (2 * n);
  TraceVector t;
  for (int k = 0; k < n; ++k) {
    t.c.emplace_back(v.segment(k * nodes, nodes));
    t.d.emplace_back(v.segment((n + k) * nodes, nodes));
  }
  return t;
}

TraceVector TraceVector::zero(int n, int nodes) {
  TraceVector t;
  t.c.assign(static_cast<std::size_t>(n), Eigen::VectorXcd::Zero(nodes));
  t.d.assign(static_cast<std::size_t>(n), Eigen::VectorXcd::Zero(nodes));
  return t;
}

Eigen::MatrixXcd BlockSystem::dense() const {
  const int nodes = this->nodes();
  Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(unknowns(), unknowns());
  for (int j = 0; j < n; ++j) {
    for (int k = 0; k < n; ++k) {
      const auto idx = static_cast<std::size_t>(j * n + k);
      a.block(j * nodes, k * nodes, nodes, nodes).diagonal() = r[idx];
      a.block(j * nodes, (n + k) * nodes, nodes, nodes) = l[idx];
      a.block((n + j) * nodes, k * nodes, nodes, nodes) = m[idx];
      a.block((n + j) * nodes, (n + k) * nodes, nodes, nodes).diagonal() = p[idx];
    }
  }
  return a;
}

Eigen::VectorXcd BlockSystem::apply(const Eigen::VectorXcd& x) const {
  const int nodes = this->nodes();
  if (x.size() != unknowns()) throw InvalidInput("BlockSystem::apply: size mismatch");
  Eigen::VectorXcd y = Eigen::VectorXcd::Zero(unknowns());
  for (int j = 0; j < n; ++j) {
    for (int k = 0; k < n; ++k) {
      const auto idx = static_cast<std::size_t>(j * n + k);
      const auto ck = x.segment(k * nodes, nodes);
      const auto dk = x.segment((n + k) * nodes, nodes);
      y.segment(j * nodes, nodes) += r[idx].cwiseProduct(ck) + l[idx] * dk;
      y.segment((n + j) * nodes, nodes) += m[idx] * ck + p[idx].cwiseProduct(dk);
    }
  }
  return y;
}

BlockSystem assemble_discrete_system(const ProblemSpec& spec, const FrequencyGrid& grid) {
  spec.validate();
  if (std::abs(spec.h() - grid.h()) > 1e-14 * grid.h()) {
    throw InvalidInput("assemble_discrete_system: grid mesh does not match the problem mesh");
  }
  const double h = grid.h();
  KernelSource src;
  src.n = spec.n;
  src.plus = spec.factorization.plus().on_real;
  src.b = [&spec](int j, double x1, double x2) { return spec.b_ops[static_cast<std::size_t>(j)].symbol(x1, x2); };
  src.g = [&spec](int j, double x1, double x2) { return spec.g_ops[static_cast<std::size_t>(j)].symbol(x1, x2); };
  src.phi = [h](double x) { return zeta(x, h); };
  BlockSystem sys = assemble(src, grid.line());

  if (!spec.b_data.empty()) {
    const int nodes = grid.size();
    sys.rhs.resize(sys.unknowns());
    for (int j = 0; j < spec.n; ++j) {
      const auto uj = static_cast<std::size_t>(j);
      if (spec.b_data[uj].values.size() != nodes || spec.g_data[uj].values.size() != nodes) {
        throw InvalidInput("assemble_discrete_system: boundary data do not match the grid");
      }
      sys.rhs.segment(j * nodes, nodes) = spec.b_data[uj].values;
      sys.rhs.segment((spec.n + j) * nodes, nodes) = spec.g_data[uj].values;
    }
  }
  return sys;
}

BlockSystem assemble_continuous_system(const ContinuousProblem& problem, const MidpointLine& line) {
  problem.validate();
  KernelSource src;
  src.n = problem.n;
  src.plus = [&problem](double x1, double x2) { return problem.plus_factor(x1, x2); };
  src.b = [&problem](int j, double x1, double x2) { return problem.b_symbols[static_cast<std::size_t>(j)](x1, x2); };
  src.g = [&problem](int j, double x1, double x2) { return problem.g_symbols[static_cast<std::size_t>(j)](x1, x2); };
  src.phi = [](double x) { return cplx(0.0, x); };
  return assemble(src, line);
}

namespace {

// Gauge rows <phi_k, d_m>_w = 0 as an (n^2 x 2nN) matrix; row index m * n + k.
Eigen::MatrixXcd gauge_rows(const BlockSystem& sys) {
  const int n = sys.n;
  const int nodes = sys.nodes();
  Eigen::MatrixXcd rows = Eigen::MatrixXcd::Zero(n * n, sys.unknowns());
  for (int m = 0; m < n; ++m) {
    for (int k = 0; k < n; ++k) {
      rows.row(m * n + k).segment((n + m) * nodes, nodes) =
          sys.trace_powers[static_cast<std::size_t>(k)].adjoint() * sys.line.weight();
    }
  }
  return rows;
}

}  // namespace

SolveReport solve_block_system(const BlockSystem& sys) {
  const Eigen::MatrixXcd a = sys.dense();
  if (!a.allFinite()) throw AssemblyError("solve_block_system: matrix has non-finite entries");
  Eigen::VectorXcd rhs = sys.rhs.size() == 0 ? Eigen::VectorXcd::Zero(sys.unknowns()) : sys.rhs;
  if (rhs.size() != sys.unknowns()) throw InvalidInput("solve_block_system: rhs size mismatch");

  Eigen::MatrixXcd gauge = gauge_rows(sys);
  const double row_scale = a.rowwise().norm().mean();
  for (Eigen::Index i = 0; i < gauge.rows(); ++i) {
    const double norm = gauge.row(i).norm();
    if (norm > 0.0) gauge.row(i) *= row_scale / norm;
  }

  Eigen::MatrixXcd augmented(a.rows() + gauge.rows(), a.cols());
  augmented << a, gauge;
  Eigen::VectorXcd augmented_rhs = Eigen::VectorXcd::Zero(augmented.rows());
  augmented_rhs.head(a.rows()) = rhs;

  const Eigen::ColPivHouseholderQR<Eigen::MatrixXcd> qr(augmented);
  const Eigen::MatrixXcd upper = qr.matrixR().topLeftCorner(a.cols(), a.cols());
  const double condition = triangular_condition_estimate(upper);
  if (!(condition <= kNearSingularThreshold)) {
    std::ostringstream msg;
    msg << "solve_block_system: system not uniquely solvable (condition estimate " << condition << ")";
    throw NearSingular(msg.str(), condition);
  }

  const Eigen::VectorXcd x = qr.solve(augmented_rhs);
  SolveReport report;
  report.traces = TraceVector::from_stacked(sys.n, x);
  report.condition = condition;
  const double rhs_norm = rhs.norm();
  const double res = (sys.apply(x) - rhs).norm();
  report.residual = rhs_norm > 0.0 ? res / rhs_norm : res;
  return report;
}

TraceVector canonicalize_traces(const TraceVector& t, const BlockSystem& sys) {
  const int n = sys.n;
  if (t.n() != n) throw InvalidInput("canonicalize_traces: trace count mismatch");
  const double w = sys.line.weight();
  Eigen::MatrixXcd gram(n, n);
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      gram(a, b) = sys.trace_powers[static_cast<std::size_t>(a)].dot(sys.trace_powers[static_cast<std::size_t>(b)]) * w;
    }
  }
  const auto gram_lu = gram.fullPivLu();
  TraceVector out = t;
  for (int m = 0; m < n; ++m) {
    Eigen::VectorXcd moments(n);
    for (int k = 0; k < n; ++k) {
      moments(k) = sys.trace_powers[static_cast<std::size_t>(k)].dot(t.d[static_cast<std::size_t>(m)]) * w;
    }
    const Eigen::VectorXcd alpha = gram_lu.solve(moments);  // alpha(k) = alpha_{k m}
    for (int k = 0; k < n; ++k) {
      out.d[static_cast<std::size_t>(m)] -= alpha(k) * sys.trace_powers[static_cast<std::size_t>(k)];
      out.c[static_cast<std::size_t>(k)] += alpha(k) * sys.trace_powers[static_cast<std::size_t>(m)];
    }
  }
  return out;
}

namespace {

Eigen::MatrixXcd reconstruct(const TraceVector& t, const RealSymbolFn& plus, const MidpointLine& line,
                             const std::function<cplx(double)>& phi) {
  const int nodes = line.size();
  const int n = t.n();
  for (int k = 0; k < n; ++k) {
    if (t.c[static_cast<std::size_t>(k)].size() != nodes || t.d[static_cast<std::size_t>(k)].size() != nodes) {
      throw InvalidInput("reconstruct_solution: trace length does not match the grid");
    }
  }
  Eigen::MatrixXcd u(nodes, nodes);
  for (int b = 0; b < nodes; ++b) {
    const cplx phi2 = phi(line.node(b));
    for (int a = 0; a < nodes; ++a) {
      const cplx phi1 = phi(line.node(a));
      cplx pow1 = 1.0, pow2 = 1.0, sum = 0.0;
      for (int k = 0; k < n; ++k) {
        sum += t.c[static_cast<std::size_t>(k)](a) * pow2 + t.d[static_cast<std::size_t>(k)](b) * pow1;
        pow1 *= phi1;
        pow2 *= phi2;
      }
      const cplx f = plus(line.node(a), line.node(b));
      if (!(std::abs(f) > 0.0)) {
        std::ostringstream msg;
        msg << "reconstruct_solution: plus factor vanishes at node (" << line.node(a) << ", " << line.node(b) << ")";
        throw AssemblyError(msg.str());
      }
      u(a, b) = sum / f;
    }
  }
  return u;
}

}  // namespace

Spectrum2D reconstruct_solution(const TraceVector& t, const WaveFactorization& fac, const FrequencyGrid& grid) {
  const double h = grid.h();
  return Spectrum2D{grid, reconstruct(t, fac.plus().on_real, grid.line(), [h](double x) { return zeta(x, h); })};
}

Eigen::MatrixXcd reconstruct_continuous_solution(const TraceVector& t, const ContinuousSymbol& plus_factor,
                                                 const MidpointLine& line) {
  return reconstruct(t, [&plus_factor](double x1, double x2) { return plus_factor(x1, x2); }, line,
                     [](double x) { return cplx(0.0, x); });
}

cplx BumpSum::operator()(double xi) const {
  cplx sum = 0.0;
  for (std::size_t i = 0; i < 3; ++i) {
    const double z = (xi - center[i]) / width[i];
    sum += amplitude[i] * std::exp(-z * z);
  }
  return sum;
}

TraceVector RandomTraces::sample(const MidpointLine& line) const {
  TraceVector t;
  for (std::size_t k = 0; k < c.size(); ++k) {
    Eigen::VectorXcd ck(line.size()), dk(line.size());
    for (int i = 0; i < line.size(); ++i) {
      ck(i) = c[k](line.node(i));
      dk(i) = d[k](line.node(i));
    }
    t.c.push_back(std::move(ck));
    t.d.push_back(std::move(dk));
  }
  return t;
}

RandomTraces random_bump_traces(int n, std::uint64_t seed, double hbar) {
  std::mt19937_64 engine(seed);
  // Explicit mapping keeps draws identical across standard libraries.
  auto uniform = [&engine](double lo, double hi) {
    return lo + (hi - lo) * (static_cast<double>(engine() >> 11) * 0x1.0p-53);
  };
  const double center_range = std::min(1.5, 0.5 * kPi * hbar);
  const double width_scale = std::min(1.0, hbar);
  auto draw = [&] {
    BumpSum bump;
    for (std::size_t i = 0; i < 3; ++i) {
      bump.center[i] = uniform(-center_range, center_range);
      bump.width[i] = uniform(0.3, 1.0) * width_scale;
      bump.amplitude[i] = cplx(uniform(-1.0, 1.0), uniform(-1.0, 1.0));
    }
    return bump;
  };
  RandomTraces traces;
  for (int k = 0; k < n; ++k) {
    traces.c.push_back(draw());
    traces.d.push_back(draw());
  }
  return traces;
}

double trace_norm_sum(const TraceVector& t, const FrequencyGrid& grid, const ProblemSpec& spec) {
  double sum = 0.0;
  for (int k = 0; k < t.n(); ++k) {
    const double sk = spec.trace_exponent(k);
    sum += sobolev_norm_1d(grid, t.c[static_cast<std::size_t>(k)], sk);
    sum += sobolev_norm_1d(grid, t.d[static_cast<std::size_t>(k)], sk);
  }
  return sum;
}

RoundTripReport manufactured_roundtrip(const ProblemSpec& spec, const TraceVector& planted,
                                       const FrequencyGrid& grid) {
  if (planted.n() != spec.n) throw InvalidInput("manufactured_roundtrip: planted trace count must equal n");
  const Spectrum2D u_hat = reconstruct_solution(planted, spec.factorization, grid);

  ProblemSpec with_data = spec;
  with_data.b_data.clear();
  with_data.g_data.clear();
  for (int j = 0; j < spec.n; ++j) {
    with_data.b_data.push_back(boundary_trace_spectrum(spec.b_ops[static_cast<std::size_t>(j)], u_hat));
    with_data.g_data.push_back(boundary_trace_spectrum(spec.g_ops[static_cast<std::size_t>(j)], u_hat));
  }
  const BlockSystem sys = assemble_discrete_system(with_data, grid);
  const SolveReport solved = solve_block_system(sys);

  RoundTripReport report;
  report.planted = canonicalize_traces(planted, sys);
  report.recovered = solved.traces;
  report.condition = solved.condition;
  report.residual = solved.residual;

  double error = 0.0;
  for (int k = 0; k < spec.n; ++k) {
    const auto uk = static_cast<std::size_t>(k);
    const double sk = spec.trace_exponent(k);
    error += sobolev_norm_1d(grid, report.recovered.c[uk] - report.planted.c[uk], sk);
    error += sobolev_norm_1d(grid, report.recovered.d[uk] - report.planted.d[uk], sk);
  }
  const double reference = trace_norm_sum(report.planted, grid, spec);
  report.rel_error = reference > 0.0 ? error / reference : error;
  return report;
}

HomogeneousResidual homogeneous_residual(const ProblemSpec& spec, const TraceVector& t,
                                         const FrequencyGrid& grid, const IndexBox& window) {
  const Spectrum2D u_hat = reconstruct_solution(t, spec.factorization, grid);
  const int half = grid.size() / 2;
  const LatticeFunction u = inverse_discrete_fourier(u_hat, IndexBox{-half, half - 1, -half, half - 1});
  const LatticeFunction au = apply_digital_pdo(spec.factorization.full_symbol(), u, grid, window);
  HomogeneousResidual out;
  out.max_residual = au.values().cwiseAbs().maxCoeff();
  out.solution_norm = sobolev_norm_2d(u_hat, spec.s);
  return out;
}

double apriori_ratio(const ProblemSpec& spec, const TraceVector& t, const FrequencyGrid& grid) {
  const Spectrum2D u_hat = reconstruct_solution(t, spec.factorization, grid);
  const double traces = trace_norm_sum(t, grid, spec);
  if (!(traces > 0.0)) throw InvalidInput("apriori_ratio: traces must be nonzero");
  return sobolev_norm_2d(u_hat, spec.s) / traces;
}

}  // namespace dpdo
