#pragma once

#include <Eigen/Dense>

namespace dpdo {

struct PowerIterationResult {
  double sigma = 0.0;
  int iterations = 0;
  double residual = 0.0;
};

/// Largest singular value of m by power iteration on m^H m. Stops when the
/// eigen-residual ||m^H m v - lambda v|| falls below tol * lambda; throws
/// EstimationError after max_iterations. The start vector is a fixed
/// pseudo-random complex vector so runs are reproducible.
PowerIterationResult largest_singular_value(const Eigen::MatrixXcd& m, double tol = 1e-8,
                                            int max_iterations = 10000);

/// Hager-Higham estimate of ||r^{-1}||_1 for an upper triangular r.
double inverse_norm1_estimate(const Eigen::MatrixXcd& upper);

/// ||r||_1 * est ||r^{-1}||_1 for an upper triangular r.
double triangular_condition_estimate(const Eigen::MatrixXcd& upper);

}  // namespace dpdo
