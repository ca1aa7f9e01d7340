#include "dpdo/lattice.hpp"

#include <cmath>
#include <sstream>

namespace dpdo {

MidpointLine::MidpointLine(double half_width, int n) : half_width_(half_width) {
  if (!(half_width > 0.0) || n <= 0) {
    throw InvalidInput("MidpointLine: need half_width > 0 and n > 0");
  }
  weight_ = 2.0 * half_width / n;
  nodes_.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    nodes_[static_cast<std::size_t>(i)] = -half_width + (i + 0.5) * weight_;
  }
}

FrequencyGrid::FrequencyGrid(double h, int nodes_per_axis) : h_(h) {
  if (!(h > 0.0)) throw InvalidInput("FrequencyGrid: mesh size must be positive");
  if (nodes_per_axis <= 0 || nodes_per_axis % 2 != 0) {
    throw InvalidInput("FrequencyGrid: node count must be a positive even integer");
  }
  line_ = MidpointLine(kPi / h, nodes_per_axis);
}

LatticeFunction::LatticeFunction(double h, IndexBox box) : h_(h), box_(box) {
  if (!(h > 0.0)) throw InvalidInput("LatticeFunction: mesh size must be positive");
  if (box.width1() <= 0 || box.width2() <= 0) throw InvalidInput("LatticeFunction: empty box");
  values_ = Eigen::MatrixXcd::Zero(box.width1(), box.width2());
}

LatticeFunction LatticeFunction::unit_mass(double h, int i1, int i2) {
  LatticeFunction u(h, IndexBox{i1, i1, i2, i2});
  u.at(i1, i2) = 1.0;
  return u;
}

cplx LatticeFunction::value(int i1, int i2) const {
  if (!box_.contains(i1, i2)) return 0.0;
  return values_(i1 - box_.x1_min, i2 - box_.x2_min);
}

cplx& LatticeFunction::at(int i1, int i2) {
  if (!box_.contains(i1, i2)) {
    std::ostringstream msg;
    msg << "LatticeFunction: index (" << i1 << ", " << i2 << ") outside the stored box";
    throw InvalidInput(msg.str());
  }
  return values_(i1 - box_.x1_min, i2 - box_.x2_min);
}

cplx zeta(double xi, double h) {
  const double theta = h * xi;
  const double s = std::sin(0.5 * theta);
  return cplx(-2.0 * s * s, std::sin(theta)) / h;
}

cplx zeta(cplx z, double h) {
  // e^{ihz} - 1 = expm1(-h tau) e^{i h xi} + (e^{i h xi} - 1)
  const double a = -h * z.imag();
  const double b = h * z.real();
  const double s = std::sin(0.5 * b);
  const cplx rotation_minus_one(-2.0 * s * s, std::sin(b));
  const cplx rotation(std::cos(b), std::sin(b));
  return (std::expm1(a) * rotation + rotation_minus_one) / h;
}

cplx zeta_squared(double xi1, double xi2, double h) {
  const cplx z1 = zeta(xi1, h);
  const cplx z2 = zeta(xi2, h);
  return z1 * z1 + z2 * z2;
}

namespace {

// E(a, i) = exp(sign * i h (first + i) xi_a)
Eigen::MatrixXcd exponential_table(const FrequencyGrid& grid, int first, int count, double sign) {
  Eigen::MatrixXcd table(grid.size(), count);
  for (int a = 0; a < grid.size(); ++a) {
    for (int i = 0; i < count; ++i) {
      const double phase = sign * grid.h() * (first + i) * grid.node(a);
      table(a, i) = cplx(std::cos(phase), std::sin(phase));
    }
  }
  return table;
}

}  // namespace

Spectrum2D discrete_fourier(const LatticeFunction& u, const FrequencyGrid& grid) {
  if (std::abs(u.h() - grid.h()) > 1e-14 * grid.h()) {
    throw InvalidInput("discrete_fourier: lattice mesh does not match the grid mesh");
  }
  const IndexBox& box = u.box();
  const Eigen::MatrixXcd e1 = exponential_table(grid, box.x1_min, box.width1(), 1.0);
  const Eigen::MatrixXcd e2 = exponential_table(grid, box.x2_min, box.width2(), 1.0);
  Spectrum2D out{grid, (e1 * u.values() * e2.transpose()) * (u.h() * u.h())};
  return out;
}

LatticeFunction inverse_discrete_fourier(const Spectrum2D& f, const IndexBox& box) {
  const FrequencyGrid& grid = f.grid;
  if (f.values.rows() != grid.size() || f.values.cols() != grid.size()) {
    throw InvalidInput("inverse_discrete_fourier: values do not match the grid shape");
  }
  LatticeFunction u(grid.h(), box);
  const Eigen::MatrixXcd e1 = exponential_table(grid, box.x1_min, box.width1(), -1.0);
  const Eigen::MatrixXcd e2 = exponential_table(grid, box.x2_min, box.width2(), -1.0);
  const double scale = grid.weight() * grid.weight() / (4.0 * kPi * kPi);
  u.values() = (e1.transpose() * f.values * e2) * scale;
  return u;
}

double lattice_l2_norm(const LatticeFunction& u) {
  return std::sqrt(u.values().squaredNorm()) * u.h();
}

double sobolev_norm_2d(const Spectrum2D& f, double s) {
  const FrequencyGrid& grid = f.grid;
  const int n = grid.size();
  if (f.values.rows() != n || f.values.cols() != n) {
    throw InvalidInput("sobolev_norm_2d: values do not match the grid shape");
  }
  double sum = 0.0;
  for (int b = 0; b < n; ++b) {
    for (int a = 0; a < n; ++a) {
      const double w = std::pow(1.0 + std::abs(zeta_squared(grid.node(a), grid.node(b), grid.h())), s);
      sum += w * std::norm(f.values(a, b));
    }
  }
  return std::sqrt(sum) * grid.weight();
}

double sobolev_norm_1d(const FrequencyGrid& grid, const Eigen::VectorXcd& values, double s) {
  if (values.size() != grid.size()) {
    throw InvalidInput("sobolev_norm_1d: values do not match the grid size");
  }
  double sum = 0.0;
  for (int a = 0; a < grid.size(); ++a) {
    sum += std::pow(1.0 + std::norm(zeta(grid.node(a), grid.h())), s) * std::norm(values(a));
  }
  return std::sqrt(sum * grid.weight());
}

double sobolev_norm_1d(const Spectrum1D& f, double s) {
  return sobolev_norm_1d(f.grid, f.values, s);
}

}  // namespace dpdo
