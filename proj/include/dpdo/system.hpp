#pragma once

// Reduction of the quadrant boundary value problem
//   A_d u_d = 0 in K_d,  B_{d,j} u_d = b_j on x_2 = 0,  G_{d,j} u_d = g_j on x_1 = 0
// to 2n coupled integral equations for the traces c_k(xi_1), d_k(xi_2) of the
// general solution
//   u~(xi) = A_plus(xi)^{-1} sum_k (c_k(xi_1) zeta_2^k + d_k(xi_2) zeta_1^k),
// plus the continuous counterpart with (i xi)^k in place of zeta^k.
//
// Both systems are discretized by the Nystrom method on a midpoint grid. The
// representation of u~ by traces is not unique: c_k = zeta_1^m, d_m = -zeta_2^k
// produce u~ = 0, so every assembled matrix has an n^2-dimensional null
// space. solve_block_system removes it with the gauge
//   <zeta^k, d_m>_w = 0,  k, m = 0..n-1.

#include <array>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "dpdo/lattice.hpp"
#include "dpdo/operators.hpp"
#include "dpdo/symbols.hpp"

namespace dpdo {

/// Discrete boundary value problem statement.
struct ProblemSpec {
  double s;
  int n;
  double delta;
  WaveFactorization factorization;
  std::vector<BoundaryOperatorSpec> b_ops;
  std::vector<BoundaryOperatorSpec> g_ops;
  /// Boundary data b~_j, g~_j; either empty or n entries each.
  std::vector<Spectrum1D> b_data;
  std::vector<Spectrum1D> g_data;

  double index() const { return factorization.index(); }
  double h() const { return factorization.h(); }
  /// s_k = s - index + k - 1/2.
  double trace_exponent(int k) const { return s - index() + k - 0.5; }
  /// Throws InvalidInput if index - s != n + delta, |delta| >= 1/2, the
  /// operator lists are malformed, or boundary data leave the trace spaces.
  void validate() const;
};

/// Continuous analogue: plus factor A_plus on R^2 with index = its order, and
/// boundary symbols B_j, G_j whose orders are beta_j, gamma_j.
struct ContinuousProblem {
  double s;
  int n;
  double delta;
  ContinuousSymbol plus_factor;
  std::vector<ContinuousSymbol> b_symbols;
  std::vector<ContinuousSymbol> g_symbols;

  double index() const { return plus_factor.order(); }
  double beta(int j) const { return b_symbols[static_cast<std::size_t>(j)].order(); }
  double gamma(int j) const { return g_symbols[static_cast<std::size_t>(j)].order(); }
  double trace_exponent(int k) const { return s - index() + k - 0.5; }
  void validate() const;
};

/// Discrete problem obtained by restricting every continuous symbol to
/// hbarT^2 and continuing it periodically. The minus factor is taken as 1.
ProblemSpec discretize(const ContinuousProblem& problem, double h);

/// Trace unknowns c_k, d_k as node values on the system's grid.
struct TraceVector {
  std::vector<Eigen::VectorXcd> c;
  std::vector<Eigen::VectorXcd> d;

  int n() const { return static_cast<int>(c.size()); }
  Eigen::VectorXcd stacked() const;
  static TraceVector from_stacked(int n, const Eigen::VectorXcd& v);
  static TraceVector zero(int n, int nodes);
};

enum class TracePower {
  /// zeta(xi)^k, digital problems
  Zeta,
  /// (i xi)^k, continuous problems
  ImaginaryXi,
};

/// Nystrom discretization of the 2n x 2n block operator [[R, L], [M, P]].
/// Unknown order: c_0..c_{n-1}, d_0..d_{n-1}; equation order: the n B-rows on
/// xi_1 followed by the n G-rows on xi_2. Block index is j * n + k.
struct BlockSystem {
  int n = 0;
  MidpointLine line;
  /// r_jk(xi_1) and p_jk(xi_2) at the nodes.
  std::vector<Eigen::VectorXcd> r;
  std::vector<Eigen::VectorXcd> p;
  /// l_jk(xi_1, xi_2) (rows xi_1) and m_jk(xi_1, xi_2) (rows xi_2), weights folded in.
  std::vector<Eigen::MatrixXcd> l;
  std::vector<Eigen::MatrixXcd> m;
  /// phi_k at the nodes: zeta^k or (i xi)^k.
  std::vector<Eigen::VectorXcd> trace_powers;
  Eigen::VectorXcd rhs;

  int nodes() const { return line.size(); }
  int unknowns() const { return 2 * n * nodes(); }
  Eigen::MatrixXcd dense() const;
  Eigen::VectorXcd apply(const Eigen::VectorXcd& x) const;
};

BlockSystem assemble_discrete_system(const ProblemSpec& spec, const FrequencyGrid& grid);

/// Truncated-line system on line = [-Lambda, Lambda]; improper integrals over R
/// are replaced by the midpoint rule on the line.
BlockSystem assemble_continuous_system(const ContinuousProblem& problem, const MidpointLine& line);

struct SolveReport {
  TraceVector traces;
  /// 1-norm condition estimate of the gauge-fixed least-squares factor.
  double condition = 0.0;
  /// ||A x - rhs|| / ||rhs|| for the ungauged Nystrom matrix (0 for zero rhs).
  double residual = 0.0;
};

inline constexpr double kNearSingularThreshold = 1e12;

/// Gauge-fixed dense solve. Throws NearSingular when the condition estimate
/// exceeds kNearSingularThreshold.
SolveReport solve_block_system(const BlockSystem& sys);

/// Adds the null-space vector that moves t into the solver's gauge.
TraceVector canonicalize_traces(const TraceVector& t, const BlockSystem& sys);

/// u~ on the 2D grid from the traces (zeta powers).
Spectrum2D reconstruct_solution(const TraceVector& t, const WaveFactorization& fac, const FrequencyGrid& grid);

/// Continuous counterpart on the tensor line grid with (i xi) powers; entry
/// (a, b) is u~(x_a, x_b).
Eigen::MatrixXcd reconstruct_continuous_solution(const TraceVector& t, const ContinuousSymbol& plus_factor,
                                                 const MidpointLine& line);

/// Sum of three Gaussians with complex amplitudes.
struct BumpSum {
  std::array<double, 3> center{};
  std::array<double, 3> width{};
  std::array<cplx, 3> amplitude{};

  cplx operator()(double xi) const;
};

/// Seeded smooth random traces, defined as functions of xi so the same draw
/// can be sampled on several grids.
struct RandomTraces {
  std::vector<BumpSum> c;
  std::vector<BumpSum> d;

  TraceVector sample(const MidpointLine& line) const;
};

/// Centers lie in (-min(1.5, pi hbar / 2), ...) and widths in [0.3, 1] scaled
/// by min(1, hbar), so the bumps sit well inside hbarT.
RandomTraces random_bump_traces(int n, std::uint64_t seed, double hbar);

double trace_norm_sum(const TraceVector& t, const FrequencyGrid& grid, const ProblemSpec& spec);

struct RoundTripReport {
  TraceVector planted;
  TraceVector recovered;
  double rel_error = 0.0;
  double condition = 0.0;
  double residual = 0.0;
};

/// Builds u~ from the planted traces, derives boundary data by
/// boundary_trace_spectrum, solves the reduced system and compares. Boundary
/// data already in spec are ignored. rel_error is the s_k-weighted error
/// relative to the planted traces moved into the solver's gauge.
RoundTripReport manufactured_roundtrip(const ProblemSpec& spec, const TraceVector& planted,
                                       const FrequencyGrid& grid);

struct HomogeneousResidual {
  double max_residual = 0.0;
  double solution_norm = 0.0;
};

/// |A_d u_d| over window for u~ reconstructed from t, and ||u_d||_s.
HomogeneousResidual homogeneous_residual(const ProblemSpec& spec, const TraceVector& t,
                                         const FrequencyGrid& grid, const IndexBox& window);

/// ||u_d||_s / sum_k ([c_k]_{s_k} + [d_k]_{s_k}).
double apriori_ratio(const ProblemSpec& spec, const TraceVector& t, const FrequencyGrid& grid);

}  // namespace dpdo
