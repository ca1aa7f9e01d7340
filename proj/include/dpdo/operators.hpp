#pragma once

#include "dpdo/lattice.hpp"
#include "dpdo/symbols.hpp"

namespace dpdo {

/// Which boundary line a boundary operator is traced on.
enum class TraceSide {
  /// x_2 = 0 row (B-type); the trace spectrum integrates over xi_2.
  Bottom,
  /// x_1 = 0 column (G-type); the trace spectrum integrates over xi_1.
  Left,
};

struct BoundaryOperatorSpec {
  TraceSide side;
  PeriodicSymbol symbol;
  double order;

  BoundaryOperatorSpec(TraceSide side, PeriodicSymbol symbol, double order);
};

/// Fourier multiplier (2 pi)^{-2} int A(xi) e^{-i x.xi} u~(xi) dxi evaluated on
/// an arbitrary lattice box; no quadrant restriction.
LatticeFunction apply_symbol(const PeriodicSymbol& symbol, const LatticeFunction& u,
                             const FrequencyGrid& grid, const IndexBox& window);

/// Digital pseudo-differential operator evaluated at quadrant points of the window.
/// The window must lie in the closed quadrant (nonnegative indices).
LatticeFunction apply_digital_pdo(const PeriodicSymbol& symbol, const LatticeFunction& u,
                                  const FrequencyGrid& grid, const IndexBox& window);

/// Same as apply_digital_pdo with the spectrum of u already in hand.
LatticeFunction apply_digital_pdo(const PeriodicSymbol& symbol, const Spectrum2D& u_hat,
                                  const IndexBox& window);

/// Boundary condition in Fourier images: int B(xi) u~(xi) dxi_2 for Bottom,
/// int G(xi) u~(xi) dxi_1 for Left, as a spectrum on the remaining axis.
Spectrum1D boundary_trace_spectrum(const BoundaryOperatorSpec& op, const Spectrum2D& u_hat);

}  // namespace dpdo
