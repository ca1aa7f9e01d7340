#include "dpdo/symbols.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace dpdo {

PeriodicSymbol::PeriodicSymbol(RealSymbolFn fn, double order, double h)
    : fn_(std::move(fn)), order_(order), h_(h) {
  if (!fn_) throw InvalidInput("PeriodicSymbol: empty evaluator");
  if (!(h > 0.0)) throw InvalidInput("PeriodicSymbol: mesh size must be positive");
}

ContinuousSymbol::ContinuousSymbol(RealSymbolFn fn, double order) : fn_(std::move(fn)), order_(order) {
  if (!fn_) throw InvalidInput("ContinuousSymbol: empty evaluator");
}

WaveFactorization::WaveFactorization(AnalyticFactor plus, AnalyticFactor minus, double index, double h)
    : plus_(std::move(plus)), minus_(std::move(minus)), index_(index), h_(h) {
  if (!plus_.on_real || !minus_.on_real) throw InvalidInput("WaveFactorization: empty factor");
  if (!(h > 0.0)) throw InvalidInput("WaveFactorization: mesh size must be positive");
}

PeriodicSymbol WaveFactorization::plus_symbol() const {
  return PeriodicSymbol(plus_.on_real, plus_.order, h_);
}

PeriodicSymbol WaveFactorization::minus_symbol() const {
  return PeriodicSymbol(minus_.on_real, minus_.order, h_);
}

PeriodicSymbol WaveFactorization::full_symbol() const {
  auto plus = plus_.on_real;
  auto minus = minus_.on_real;
  return PeriodicSymbol([plus, minus](double x1, double x2) { return plus(x1, x2) * minus(x1, x2); },
                        plus_.order + minus_.order, h_);
}

double wrap_frequency(double xi, double h) {
  const double period = 2.0 * kPi / h;
  const double half = kPi / h;
  double wrapped = xi - period * std::floor((xi + half) / period);
  // floor can land exactly on the right end after rounding
  if (wrapped >= half) wrapped -= period;
  return wrapped;
}

PeriodicSymbol periodize(const ContinuousSymbol& c, double h) {
  return PeriodicSymbol(
      [c, h](double x1, double x2) { return c(wrap_frequency(x1, h), wrap_frequency(x2, h)); },
      c.order(), h);
}

SymbolClassReport check_symbol_class(const PeriodicSymbol& p, double alpha, const FrequencyGrid& sample) {
  if (std::abs(p.h() - sample.h()) > 1e-14 * sample.h()) {
    throw InvalidInput("check_symbol_class: symbol mesh does not match the sample grid");
  }
  SymbolClassReport report;
  report.c1_est = std::numeric_limits<double>::infinity();
  report.c2_est = 0.0;
  for (double x1 : sample.nodes()) {
    for (double x2 : sample.nodes()) {
      const double scale = std::pow(1.0 + std::abs(zeta_squared(x1, x2, sample.h())), 0.5 * alpha);
      const double ratio = std::abs(p(x1, x2)) / scale;
      report.c1_est = std::min(report.c1_est, ratio);
      report.c2_est = std::max(report.c2_est, ratio);
    }
  }
  report.pass = report.c1_est > 0.0;
  return report;
}

namespace {

cplx expi(cplx z) { return std::exp(cplx(0.0, 1.0) * z); }

cplx complex_power(cplx base, double exponent) {
  if (exponent == 1.0) return base;
  if (exponent == std::round(exponent) && std::abs(exponent) <= 16.0) {
    const int e = static_cast<int>(exponent);
    cplx result = 1.0;
    for (int i = 0; i < std::abs(e); ++i) result *= base;
    return e >= 0 ? result : 1.0 / result;
  }
  return std::pow(base, exponent);
}

// hbar (e^{-ihz} - 1): the minus-side analogue of zeta.
cplx zeta_minus(cplx z, double h) { return zeta(-z, h); }

WaveFactorization geometric_family(const FamilyParams& fp, double h) {
  if (!(std::abs(fp.a) < 1.0)) throw InvalidInput("geometric family: need |a| < 1");
  const double a = fp.a, p = fp.p, q = fp.q;
  auto plus_c = [a, p, q, h](cplx z1, cplx z2) {
    return complex_power(1.0 - a * expi(h * z1), p) * complex_power(1.0 - a * expi(h * z2), q);
  };
  auto minus_c = [a, p, q, h](cplx z1, cplx z2) {
    return complex_power(1.0 - a * expi(-h * z1), p) * complex_power(1.0 - a * expi(-h * z2), q);
  };
  AnalyticFactor plus{[plus_c](double x1, double x2) { return plus_c(x1, x2); }, plus_c, 0.0};
  AnalyticFactor minus{[minus_c](double x1, double x2) { return minus_c(x1, x2); }, minus_c, 0.0};
  return WaveFactorization(std::move(plus), std::move(minus), 0.0, h);
}

WaveFactorization zeta_shift_family(const FamilyParams& fp, double h) {
  const double hbar = 1.0 / h;
  if (!(fp.c > 4.0 * hbar)) {
    throw InvalidInput("zeta-shift family: need c > 4 hbar so the factor cannot vanish in the tube");
  }
  const double c = fp.c, kappa = fp.kappa, kappa_minus = fp.kappa_minus;
  auto plus_c = [c, kappa, h](cplx z1, cplx z2) {
    return complex_power(c + zeta(z1, h) + zeta(z2, h), kappa);
  };
  auto minus_c = [c, kappa_minus, h](cplx z1, cplx z2) {
    return complex_power(c + zeta_minus(z1, h) + zeta_minus(z2, h), kappa_minus);
  };
  AnalyticFactor plus{[plus_c](double x1, double x2) { return plus_c(x1, x2); }, plus_c, kappa};
  AnalyticFactor minus{[minus_c](double x1, double x2) { return minus_c(x1, x2); }, minus_c,
                       kappa_minus};
  return WaveFactorization(std::move(plus), std::move(minus), kappa, h);
}

}  // namespace

WaveFactorization builtin_factor_family(FactorFamily kind, const FamilyParams& params, double h) {
  if (!(h > 0.0)) throw InvalidInput("builtin_factor_family: mesh size must be positive");
  switch (kind) {
    case FactorFamily::Geometric:
      return geometric_family(params, h);
    case FactorFamily::ZetaShift:
      return zeta_shift_family(params, h);
  }
  throw InvalidInput("builtin_factor_family: unknown family");
}

TubeReport sample_tube_holomorphy(const WaveFactorization& w,
                                  std::span<const std::pair<double, double>> taus,
                                  const FrequencyGrid& grid) {
  if (!w.plus().on_complex) {
    throw UnsupportedCapability("sample_tube_holomorphy: plus factor has no complex extension");
  }
  const double h = grid.h();
  TubeReport report;
  report.min_ratio = std::numeric_limits<double>::infinity();
  report.max_ratio = 0.0;
  for (const auto& [t1, t2] : taus) {
    if (!(t1 > 0.0 && t2 > 0.0)) throw InvalidInput("sample_tube_holomorphy: tau must lie in the open quadrant");
    for (double x1 : grid.nodes()) {
      for (double x2 : grid.nodes()) {
        const cplx z1(x1, t1), z2(x2, t2);
        const cplx zh1 = zeta(z1, h), zh2 = zeta(z2, h);
        const double scale = std::pow(1.0 + std::abs(zh1 * zh1 + zh2 * zh2), 0.5 * w.index());
        const double ratio = std::abs(w.plus().on_complex(z1, z2)) / scale;
        if (!std::isfinite(ratio)) {
          report.min_ratio = 0.0;
          continue;
        }
        report.min_ratio = std::min(report.min_ratio, ratio);
        report.max_ratio = std::max(report.max_ratio, ratio);
      }
    }
  }
  report.pass = report.min_ratio > 0.0;
  return report;
}

std::vector<std::pair<double, double>> default_tau_samples() {
  return {{0.1, 0.1}, {1.0, 1.0}, {5.0, 5.0}};
}

ContinuousSymbol radial_symbol(double order) {
  if (order == 0.0) return ContinuousSymbol([](double, double) { return cplx(1.0); }, 0.0);
  return ContinuousSymbol(
      [order](double x1, double x2) { return cplx(std::pow(1.0 + x1 * x1 + x2 * x2, 0.5 * order)); },
      order);
}

}  // namespace dpdo
