#pragma once

// Lattice functions on hZ^2, frequency grids on the period cell, the discrete
// Fourier pair and the discrete Sobolev-Slobodetskii norms.
//
// Conventions used throughout the library:
//   forward  u~(xi) = sum_x e^{i x.xi} u(x) h^2
//   inverse  u(x)   = (2 pi)^{-2} int e^{-i x.xi} u~(xi) dxi
// Both integrals over the period cell [-pi/h, pi/h]^2 are taken with the
// composite midpoint rule, which makes the pair exactly mutually inverse for
// lattice windows narrower than the node count.

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "dpdo/common.hpp"

namespace dpdo {

/// Composite midpoint rule on [-half_width, half_width] with n uniform cells.
class MidpointLine {
 public:
  MidpointLine() = default;
  MidpointLine(double half_width, int n);

  double half_width() const { return half_width_; }
  int size() const { return static_cast<int>(nodes_.size()); }
  double node(int i) const { return nodes_[static_cast<std::size_t>(i)]; }
  std::span<const double> nodes() const { return nodes_; }
  double weight() const { return weight_; }

 private:
  double half_width_ = 0.0;
  double weight_ = 0.0;
  std::vector<double> nodes_;
};

/// Midpoint nodes on the frequency period cell [-pi/h, pi/h] of the lattice hZ.
/// The 2D grid is the tensor product of this axis with itself. N is even so
/// that xi = 0 is never a node.
class FrequencyGrid {
 public:
  FrequencyGrid(double h, int nodes_per_axis);

  double h() const { return h_; }
  double hbar() const { return 1.0 / h_; }
  int size() const { return line_.size(); }
  double node(int i) const { return line_.node(i); }
  std::span<const double> nodes() const { return line_.nodes(); }
  double weight() const { return line_.weight(); }
  const MidpointLine& line() const { return line_; }

 private:
  double h_;
  MidpointLine line_;
};

/// Inclusive index ranges of a rectangular window of hZ^2.
struct IndexBox {
  int x1_min = 0;
  int x1_max = 0;
  int x2_min = 0;
  int x2_max = 0;

  int width1() const { return x1_max - x1_min + 1; }
  int width2() const { return x2_max - x2_min + 1; }
  bool contains(int i1, int i2) const {
    return i1 >= x1_min && i1 <= x1_max && i2 >= x2_min && i2 <= x2_max;
  }
};

/// Finitely supported function on hZ^2; values outside the box are zero.
class LatticeFunction {
 public:
  LatticeFunction(double h, IndexBox box);

  static LatticeFunction unit_mass(double h, int i1, int i2);

  double h() const { return h_; }
  const IndexBox& box() const { return box_; }

  cplx value(int i1, int i2) const;
  cplx& at(int i1, int i2);

  /// Storage indexed (i1 - x1_min, i2 - x2_min).
  const Eigen::MatrixXcd& values() const { return values_; }
  Eigen::MatrixXcd& values() { return values_; }

 private:
  double h_;
  IndexBox box_;
  Eigen::MatrixXcd values_;
};

/// Samples of a 2 pi hbar periodic function on one frequency axis.
struct Spectrum1D {
  FrequencyGrid grid;
  Eigen::VectorXcd values;
};

/// Samples on the tensor grid; values(a, b) is the value at (xi_a, xi_b).
struct Spectrum2D {
  FrequencyGrid grid;
  Eigen::MatrixXcd values;
};

/// Per-axis symbol zeta(xi) = (e^{i h xi} - 1) / h, computed without
/// cancellation for small h xi.
cplx zeta(double xi, double h);

/// Complexified per-axis map hbar (e^{i h z} - 1) for z = xi + i tau.
cplx zeta(cplx z, double h);

/// zeta^2 = zeta(xi1)^2 + zeta(xi2)^2 (a complex number).
cplx zeta_squared(double xi1, double xi2, double h);

/// Forward transform of u evaluated on every node of the 2D grid.
Spectrum2D discrete_fourier(const LatticeFunction& u, const FrequencyGrid& grid);

/// Quadrature inverse of discrete_fourier, evaluated on the requested box.
LatticeFunction inverse_discrete_fourier(const Spectrum2D& f, const IndexBox& box);

/// (sum_x |u(x)|^2 h^2)^{1/2}.
double lattice_l2_norm(const LatticeFunction& u);

/// Quadrature value of (int (1 + |zeta^2|)^s |f|^2 dxi)^{1/2} over the cell.
double sobolev_norm_2d(const Spectrum2D& f, double s);

/// One-axis analogue with weight (1 + |zeta(xi)|^2)^{s}.
double sobolev_norm_1d(const Spectrum1D& f, double s);

/// Same as sobolev_norm_1d for raw node values on grid.
double sobolev_norm_1d(const FrequencyGrid& grid, const Eigen::VectorXcd& values, double s);

}  // namespace dpdo
