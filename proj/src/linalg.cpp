#include "dpdo/linalg.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "dpdo/common.hpp"

namespace dpdo {

namespace {

Eigen::VectorXcd start_vector(Eigen::Index n) {
  // An all-ones start is blind to odd modes of the reflection-symmetric
  // operators this library produces, so use a fixed pseudo-random vector.
  std::mt19937_64 engine(0x5eed5eedULL);
  Eigen::VectorXcd v(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double re = static_cast<double>(engine() >> 11) * 0x1.0p-53;
    const double im = static_cast<double>(engine() >> 11) * 0x1.0p-53;
    v(i) = cplx(0.5 + re, im - 0.5);
  }
  return v.normalized();
}

}  // namespace

PowerIterationResult largest_singular_value(const Eigen::MatrixXcd& m, double tol, int max_iterations) {
  PowerIterationResult result;
  if (m.size() == 0 || m.cwiseAbs().maxCoeff() == 0.0) return result;
  if (!m.allFinite()) throw EstimationError("largest_singular_value: matrix has non-finite entries");

  Eigen::VectorXcd v = start_vector(m.cols());
  double lambda = 0.0;
  for (int it = 1; it <= max_iterations; ++it) {
    const Eigen::VectorXcd y = m * v;
    const Eigen::VectorXcd z = m.adjoint() * y;
    lambda = y.squaredNorm();
    const double residual = (z - lambda * v).norm();
    result.iterations = it;
    result.residual = residual;
    result.sigma = std::sqrt(lambda);
    if (lambda == 0.0) {
      // v landed in the null space; restart along the image of m^H.
      const Eigen::Index j = [&] {
        Eigen::Index row;
        m.rowwise().norm().maxCoeff(&row);
        return row;
      }();
      v = m.row(j).adjoint().normalized();
      continue;
    }
    if (residual <= tol * lambda) return result;
    v = z / z.norm();
  }
  std::ostringstream msg;
  msg << "largest_singular_value: no convergence after " << max_iterations
      << " iterations (sigma estimate " << result.sigma << ", relative residual "
      << result.residual / lambda << ")";
  throw EstimationError(msg.str());
}

double inverse_norm1_estimate(const Eigen::MatrixXcd& upper) {
  const Eigen::Index n = upper.rows();
  if (n == 0) return 0.0;
  const auto tri = upper.triangularView<Eigen::Upper>();
  Eigen::VectorXcd x = Eigen::VectorXcd::Constant(n, cplx(1.0 / static_cast<double>(n)));
  double estimate = 0.0;
  Eigen::Index last_j = -1;
  for (int iter = 0; iter < 5; ++iter) {
    const Eigen::VectorXcd y = tri.solve(x);
    estimate = y.lpNorm<1>();
    Eigen::VectorXcd sign(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      const double a = std::abs(y(i));
      sign(i) = a > 0.0 ? y(i) / a : cplx(1.0);
    }
    const Eigen::VectorXcd z = tri.adjoint().solve(sign);
    Eigen::Index j;
    const double zmax = z.cwiseAbs().maxCoeff(&j);
    if (zmax <= (z.adjoint() * x)(0).real() || j == last_j) break;
    x.setZero();
    x(j) = 1.0;
    last_j = j;
  }
  return estimate;
}

double triangular_condition_estimate(const Eigen::MatrixXcd& upper) {
  const Eigen::MatrixXcd r = upper.triangularView<Eigen::Upper>();
  const double norm1 = r.cwiseAbs().colwise().sum().maxCoeff();
  for (Eigen::Index i = 0; i < r.rows(); ++i) {
    if (r(i, i) == cplx(0.0)) return std::numeric_limits<double>::infinity();
  }
  return norm1 * inverse_norm1_estimate(r);
}

}  // namespace dpdo
