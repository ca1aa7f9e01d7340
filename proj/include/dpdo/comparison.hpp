#pragma once

// Measured discrete-vs-continuous gaps: pointwise zeta-power gaps, kernel
// gaps, the commutator of the truncated operator with the cell projection,
// the finite-section gap, and log-log rate fits.

#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "dpdo/system.hpp"

namespace dpdo {

struct ZetaPowerGap {
  double gap = 0.0;
  double bound = 0.0;
};

/// gap = |(i xi)^k - zeta(xi)^k|, bound = k e^{k pi} h |xi|^{k+1}. Requires
/// |xi| <= pi / h.
ZetaPowerGap zeta_power_gap(double xi, int k, double h);

struct ZetaPowerSweepRow {
  double h = 0.0;
  int k = 0;
  int samples = 0;
  double max_gap = 0.0;
  double max_bound = 0.0;
  /// Largest gap / bound over samples with bound > 0.
  double max_ratio = 0.0;
  int violations = 0;
};

/// `samples` equispaced points on [-pi/h, pi/h] (endpoints included) for each
/// (h, k) with k = 1..k_max.
std::vector<ZetaPowerSweepRow> zeta_power_sweep(const std::vector<double>& hs, int k_max, int samples);

/// Max over nodes of |K_cont - K_disc| / (h (1 + |xi|)^e) for the four kernel
/// families. Exponents: beta_j - index + k + 1 for l, gamma_j - index + k + 1
/// for m, and +2 for r, p.
struct KernelGapRatios {
  double l = 0.0;
  double m = 0.0;
  double r = 0.0;
  double p = 0.0;
};

/// The continuous kernels R, P are integrated over the whole line; the
/// discrete ones use the midpoint rule on grid. Requires s - beta_j > 2 and
/// s - gamma_j > 2.
KernelGapRatios kernel_gaps(const ContinuousProblem& problem, const FrequencyGrid& grid, int j, int k);

/// Operator in coordinates where each block's norm is Euclidean.
struct WeightedOperatorFrame {
  Eigen::MatrixXcd matrix;
  std::vector<Eigen::Index> row_blocks;
  std::vector<Eigen::Index> col_blocks;
};

/// Per-node weights w_i (quadrature weight times Sobolev weight) for each
/// block; matrix = diag(sqrt(w_row)) op diag(1 / sqrt(w_col)).
WeightedOperatorFrame make_weighted_frame(const Eigen::MatrixXcd& op, const std::vector<Eigen::VectorXd>& row_weights,
                                          const std::vector<Eigen::VectorXd>& col_weights);

/// quadrature weight * (1 + xi^2)^s at every node of line.
Eigen::VectorXd continuous_sobolev_weights(const MidpointLine& line, double s);
/// quadrature weight * (1 + |zeta(xi)|^2)^s at every node of grid.
Eigen::VectorXd discrete_sobolev_weights(const FrequencyGrid& grid, double s);

/// Norm for the sum-of-norms structure of the block spaces: the maximum over
/// column blocks of the summed spectral norms of that column's blocks. With a
/// single block this is the largest singular value. Diagonal blocks are
/// evaluated exactly, the rest by power iteration.
double estimate_operator_norm(const WeightedOperatorFrame& frame);

struct RateReport {
  std::vector<double> h_values;
  std::vector<double> norms;
  std::vector<int> nodes;
  double slope = 0.0;
  double epsilon = 0.0;
  /// Some norm was not positive, so no slope was fitted.
  bool degenerate = false;
  /// Norms nonincreasing along the sweep.
  bool monotone = false;
  /// Norms nonincreasing except for one inversion between the two coarsest h.
  bool coarse_inversion_only = false;
};

/// Least-squares slope of log(norm) against log(h). Requires at least three
/// strictly decreasing h values.
RateReport fit_rate(const std::vector<double>& h_values, const std::vector<double>& norms);

struct SweepOptions {
  /// Truncation half-width; 0 selects 4 pi / h_min.
  double lambda = 0.0;
  /// Cells of the truncated line per unit pi; every pi hbar of the sweep must
  /// fall on a cell edge.
  int cells_per_pi = 4;
};

/// Truncated line for a sweep. Throws InvalidConfiguration when lambda is
/// below pi / h_min or the cells do not align with the cell edges pi / h.
MidpointLine sweep_line(const std::vector<double>& hs, const SweepOptions& options);

/// ||X Q - Q X|| with X the 0/1 projection onto nodes inside (-pi/h, pi/h),
/// Q the truncated continuous block operator, continuous Sobolev weights.
/// Requires s - beta_j > 1 and s - gamma_j > 2. epsilon = min_j
/// {s - beta_j - 1, s - gamma_j - 1}.
RateReport commutator_rate(const ContinuousProblem& problem, const std::vector<double>& hs,
                           const SweepOptions& options = {});

/// ||X Q X - q|| on the nodes inside the cell, q assembled from the
/// periodized problem on the same nodes, discrete Sobolev weights. Requires
/// s - beta_j > 3 and s - gamma_j > 3. epsilon = 1.
RateReport finite_section_rate(const ContinuousProblem& problem, const std::vector<double>& hs,
                               const SweepOptions& options = {});

/// Built-in radial problems, plus factor (1 + |xi|^2)^{index/2} and radial
/// boundary symbols:
///   "commutator": index 3, s = 2.25, n = 1, beta = gamma = (0)
///   "gap":        index 5, s = 3.25, n = 2, beta = gamma = (0, -1)
///   "arctan":     index 4, s = 3.25, n = 1, beta = gamma = (0)
ContinuousProblem builtin_continuous_problem(std::string_view name);
std::vector<std::string> builtin_continuous_problem_names();

}  // namespace dpdo
