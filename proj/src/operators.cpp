#include "dpdo/operators.hpp"

#include <cmath>

namespace dpdo {

namespace {

bool same_mesh(double a, double b) { return std::abs(a - b) <= 1e-14 * std::max(a, b); }

Spectrum2D multiply(const PeriodicSymbol& symbol, const Spectrum2D& u_hat) {
  const FrequencyGrid& grid = u_hat.grid;
  if (!same_mesh(symbol.h(), grid.h())) {
    throw InvalidInput("digital operator: symbol mesh does not match the grid mesh");
  }
  Spectrum2D out = u_hat;
  for (int b = 0; b < grid.size(); ++b) {
    for (int a = 0; a < grid.size(); ++a) {
      out.values(a, b) *= symbol(grid.node(a), grid.node(b));
    }
  }
  return out;
}

void require_quadrant(const IndexBox& window) {
  if (window.x1_min < 0 || window.x2_min < 0) {
    throw InvalidInput("apply_digital_pdo: window must lie in the closed quadrant");
  }
}

}  // namespace

BoundaryOperatorSpec::BoundaryOperatorSpec(TraceSide side_, PeriodicSymbol symbol_, double order_)
    : side(side_), symbol(std::move(symbol_)), order(order_) {
  if (std::abs(order - symbol.order()) > 1e-12) {
    throw InvalidInput("BoundaryOperatorSpec: order does not match the symbol's declared order");
  }
}

LatticeFunction apply_symbol(const PeriodicSymbol& symbol, const LatticeFunction& u,
                             const FrequencyGrid& grid, const IndexBox& window) {
  if (!same_mesh(u.h(), grid.h())) {
    throw InvalidInput("apply_symbol: lattice mesh does not match the grid mesh");
  }
  return inverse_discrete_fourier(multiply(symbol, discrete_fourier(u, grid)), window);
}

LatticeFunction apply_digital_pdo(const PeriodicSymbol& symbol, const LatticeFunction& u,
                                  const FrequencyGrid& grid, const IndexBox& window) {
  require_quadrant(window);
  return apply_symbol(symbol, u, grid, window);
}

LatticeFunction apply_digital_pdo(const PeriodicSymbol& symbol, const Spectrum2D& u_hat,
                                  const IndexBox& window) {
  require_quadrant(window);
  return inverse_discrete_fourier(multiply(symbol, u_hat), window);
}

Spectrum1D boundary_trace_spectrum(const BoundaryOperatorSpec& op, const Spectrum2D& u_hat) {
  const FrequencyGrid& grid = u_hat.grid;
  if (!same_mesh(op.symbol.h(), grid.h())) {
    throw InvalidInput("boundary_trace_spectrum: symbol mesh does not match the grid mesh");
  }
  const int n = grid.size();
  Spectrum1D out{grid, Eigen::VectorXcd::Zero(n)};
  for (int outer = 0; outer < n; ++outer) {
    cplx sum = 0.0;
    for (int inner = 0; inner < n; ++inner) {
      if (op.side == TraceSide::Bottom) {
        sum += op.symbol(grid.node(outer), grid.node(inner)) * u_hat.values(outer, inner);
      } else {
        sum += op.symbol(grid.node(inner), grid.node(outer)) * u_hat.values(inner, outer);
      }
    }
    out.values(outer) = sum * grid.weight();
  }
  return out;
}

}  // namespace dpdo
