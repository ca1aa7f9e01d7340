#pragma once

#include <functional>
#include <span>
#include <utility>
#include <vector>

#include "dpdo/common.hpp"
#include "dpdo/lattice.hpp"

namespace dpdo {

using RealSymbolFn = std::function<cplx(double, double)>;
using ComplexSymbolFn = std::function<cplx(cplx, cplx)>;

/// Symbol of a digital operator: 2 pi hbar periodic in each frequency.
class PeriodicSymbol {
 public:
  PeriodicSymbol(RealSymbolFn fn, double order, double h);

  cplx operator()(double xi1, double xi2) const { return fn_(xi1, xi2); }
  double order() const { return order_; }
  double h() const { return h_; }

 private:
  RealSymbolFn fn_;
  double order_;
  double h_;
};

/// Symbol of a pseudo-differential operator on R^2, |A(xi)| ~ (1 + |xi|)^order.
class ContinuousSymbol {
 public:
  ContinuousSymbol(RealSymbolFn fn, double order);

  cplx operator()(double xi1, double xi2) const { return fn_(xi1, xi2); }
  double order() const { return order_; }

 private:
  RealSymbolFn fn_;
  double order_;
};

/// One factor of a wave factorization. `on_complex` evaluates the holomorphic
/// extension into the tube domain and may be empty.
struct AnalyticFactor {
  RealSymbolFn on_real;
  ComplexSymbolFn on_complex;
  double order = 0.0;
};

/// Periodic wave factorization A_d = plus * minus with index kappa. The plus
/// factor extends into hbarT^2 + iK, the minus factor into hbarT^2 - iK.
class WaveFactorization {
 public:
  WaveFactorization(AnalyticFactor plus, AnalyticFactor minus, double index, double h);

  const AnalyticFactor& plus() const { return plus_; }
  const AnalyticFactor& minus() const { return minus_; }
  double index() const { return index_; }
  double h() const { return h_; }

  PeriodicSymbol plus_symbol() const;
  PeriodicSymbol minus_symbol() const;
  PeriodicSymbol full_symbol() const;

 private:
  AnalyticFactor plus_;
  AnalyticFactor minus_;
  double index_;
  double h_;
};

/// Reduce xi modulo 2 pi hbar into [-pi hbar, pi hbar).
double wrap_frequency(double xi, double h);

/// Restriction to hbarT^2 followed by periodic continuation.
PeriodicSymbol periodize(const ContinuousSymbol& c, double h);

struct SymbolClassReport {
  double c1_est = 0.0;
  double c2_est = 0.0;
  bool pass = false;
};

/// Sampled constants of c1 (1+|zeta^2|)^{alpha/2} <= |p| <= c2 (1+|zeta^2|)^{alpha/2}.
SymbolClassReport check_symbol_class(const PeriodicSymbol& p, double alpha, const FrequencyGrid& sample);

enum class FactorFamily {
  /// plus = (1 - a e^{ih xi_1})^p (1 - a e^{ih xi_2})^q, |a| < 1, index 0.
  Geometric,
  /// plus = (c + zeta_1 + zeta_2)^kappa, c > 4 hbar, index kappa.
  ZetaShift,
};

struct FamilyParams {
  double a = 0.0;
  double p = 1.0;
  double q = 1.0;
  double c = 0.0;
  double kappa = 1.0;
  double kappa_minus = 1.0;
};

WaveFactorization builtin_factor_family(FactorFamily kind, const FamilyParams& params, double h);

struct TubeReport {
  double min_ratio = 0.0;
  double max_ratio = 0.0;
  bool pass = false;
};

/// Samples |plus(xi + i tau)| / (1 + |zeta^2(xi + i tau)|)^{index/2} over grid x taus.
TubeReport sample_tube_holomorphy(const WaveFactorization& w,
                                  std::span<const std::pair<double, double>> taus,
                                  const FrequencyGrid& grid);

/// Default tau sample set {(0.1,0.1), (1,1), (5,5)}.
std::vector<std::pair<double, double>> default_tau_samples();

/// (1 + xi_1^2 + xi_2^2)^{order/2}.
ContinuousSymbol radial_symbol(double order);

}  // namespace dpdo
