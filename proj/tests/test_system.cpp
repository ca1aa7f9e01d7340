#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "dpdo/comparison.hpp"
#include "dpdo/system.hpp"

using namespace dpdo;
using doctest::Approx;

namespace {

PeriodicSymbol constant(cplx v, double h) { return PeriodicSymbol([v](double, double) { return v; }, 0.0, h); }
PeriodicSymbol zeta1(double h) { return PeriodicSymbol([h](double x1, double) { return zeta(x1, h); }, 1.0, h); }
PeriodicSymbol zeta2(double h) { return PeriodicSymbol([h](double, double x2) { return zeta(x2, h); }, 1.0, h); }

WaveFactorization geometric(double a, double h) {
  FamilyParams p;
  p.a = a;
  return builtin_factor_family(FactorFamily::Geometric, p, h);
}

// n = 1, index 0, s = -1.
ProblemSpec identity_problem(double a, double h) {
  return ProblemSpec{-1.0, 1, 0.0, geometric(a, h),
                     {BoundaryOperatorSpec(TraceSide::Bottom, constant(1.0, h), 0.0)},
                     {BoundaryOperatorSpec(TraceSide::Left, constant(1.0, h), 0.0)}, {}, {}};
}

ProblemSpec zeta_problem(double a, double h) {
  return ProblemSpec{-1.0, 1, 0.0, geometric(a, h), {BoundaryOperatorSpec(TraceSide::Bottom, zeta2(h), 1.0)},
                     {BoundaryOperatorSpec(TraceSide::Left, zeta1(h), 1.0)}, {}, {}};
}

// zeta(-xi_m): a polynomial in e^{-ih xi_m}. Against a plus factor, boundary
// symbols that are polynomials in zeta_2 alone give proportional kernels, so
// the second pair uses this one.
PeriodicSymbol minus_zeta(int axis, double h) {
  return PeriodicSymbol([axis, h](double x1, double x2) { return zeta(-(axis == 1 ? x1 : x2), h); }, 1.0, h);
}

// n = 2 with the zeta-shift factor, index 1, s = -1.
ProblemSpec two_trace_problem(double h) {
  FamilyParams p;
  p.c = 5.0 / h;
  p.kappa = 1.0;
  return ProblemSpec{-1.0, 2, 0.0, builtin_factor_family(FactorFamily::ZetaShift, p, h),
                     {BoundaryOperatorSpec(TraceSide::Bottom, constant(1.0, h), 0.0),
                      BoundaryOperatorSpec(TraceSide::Bottom, minus_zeta(2, h), 1.0)},
                     {BoundaryOperatorSpec(TraceSide::Left, constant(1.0, h), 0.0),
                      BoundaryOperatorSpec(TraceSide::Left, minus_zeta(1, h), 1.0)},
                     {}, {}};
}

ContinuousProblem radial_problem(double index, double s, int n, std::vector<double> orders) {
  ContinuousProblem p{s, n, index - s - n, radial_symbol(index), {}, {}};
  for (double o : orders) {
    p.b_symbols.push_back(radial_symbol(o));
    p.g_symbols.push_back(radial_symbol(o));
  }
  return p;
}

}  // namespace

TEST_CASE("problem validation") {
  CHECK_NOTHROW(identity_problem(0.5, 1.0).validate());
  ProblemSpec bad = identity_problem(0.5, 1.0);
  bad.s = -1.3;  // index - s = 1.3 != n + delta
  CHECK_THROWS_AS(bad.validate(), InvalidInput);
  bad = identity_problem(0.5, 1.0);
  bad.s = -1.6;
  bad.delta = 0.6;
  CHECK_THROWS_AS(bad.validate(), InvalidInput);
  bad = identity_problem(0.5, 1.0);
  bad.g_ops.clear();
  CHECK_THROWS_AS(bad.validate(), InvalidInput);
  bad = identity_problem(0.5, 1.0);
  bad.b_ops = {BoundaryOperatorSpec(TraceSide::Left, constant(1.0, 1.0), 0.0)};
  CHECK_THROWS_AS(bad.validate(), InvalidInput);
  bad = identity_problem(0.5, 1.0);
  bad.b_data = {Spectrum1D{FrequencyGrid(1.0, 8), Eigen::VectorXcd::Constant(8, cplx(NAN))}};
  bad.g_data = bad.b_data;
  CHECK_THROWS_AS(bad.validate(), InvalidInput);
  CHECK(identity_problem(0.5, 1.0).trace_exponent(0) == Approx(-1.5));
}

TEST_CASE("trace vector stacking") {
  TraceVector t = TraceVector::zero(2, 3);
  t.c[1](2) = 4.0;
  t.d[0](1) = cplx(0.0, 2.0);
  const Eigen::VectorXcd v = t.stacked();
  CHECK(v.size() == 12);
  CHECK(v(5) == cplx(4.0));
  CHECK(v(7) == cplx(0.0, 2.0));
  const TraceVector back = TraceVector::from_stacked(2, v);
  CHECK(back.c[1](2) == cplx(4.0));
  CHECK(back.d[0](1) == cplx(0.0, 2.0));
  CHECK_THROWS_AS(TraceVector::from_stacked(2, Eigen::VectorXcd::Zero(7)), InvalidInput);
}

TEST_CASE("discrete assembly examples") {
  const FrequencyGrid g(1.0, 16);
  const BlockSystem sys = assemble_discrete_system(identity_problem(0.0, 1.0), g);
  CHECK(sys.unknowns() == 32);
  CHECK((sys.r[0].array() - cplx(2.0 * kPi)).abs().maxCoeff() < 1e-13);
  CHECK((sys.l[0].array() / g.weight() - cplx(1.0)).abs().maxCoeff() < 1e-14);

  // B equal to the plus factor cancels it
  const WaveFactorization fac = geometric(0.5, 1.0);
  ProblemSpec own = identity_problem(0.5, 1.0);
  own.b_ops = {BoundaryOperatorSpec(TraceSide::Bottom, fac.plus_symbol(), 0.0)};
  const BlockSystem s2 = assemble_discrete_system(own, g);
  CHECK((s2.l[0].array() / g.weight() - cplx(1.0)).abs().maxCoeff() < 1e-14);

  const Eigen::MatrixXcd dense = sys.dense();
  CHECK(dense.allFinite());
  const Eigen::VectorXcd x = Eigen::VectorXcd::LinSpaced(32, -1.0, 2.0);
  CHECK((dense * x - sys.apply(x)).norm() < 1e-12);

  CHECK_THROWS_AS(assemble_discrete_system(identity_problem(0.0, 1.0), FrequencyGrid(0.5, 16)), InvalidInput);
}

TEST_CASE("assembly reports a vanishing plus factor") {
  const FrequencyGrid g(1.0, 8);
  const double bad = g.node(3);
  AnalyticFactor plus{[bad](double x1, double) { return cplx(x1 == bad ? 0.0 : 1.0); }, {}, 0.0};
  AnalyticFactor minus{[](double, double) { return cplx(1.0); }, {}, 0.0};
  ProblemSpec spec = identity_problem(0.0, 1.0);
  spec.factorization = WaveFactorization(plus, minus, 0.0, 1.0);
  try {
    (void)assemble_discrete_system(spec, g);
    FAIL("expected AssemblyError");
  } catch (const AssemblyError& e) {
    CHECK(std::string(e.what()).find("node") != std::string::npos);
  }
}

TEST_CASE("continuous assembly examples") {
  // R_00(0) = int_{-L}^{L} (1 + xi^2)^{-1} = 2 atan(L); references 2 atan(10), 2 atan(20).
  const ContinuousProblem p = radial_problem(2.0, 1.0, 1, {0.0});
  for (const auto& [lambda, expected] : {std::pair{10.0, 2.9422553486074691837}, std::pair{20.0, 3.0416758621459077156}}) {
    const MidpointLine line(lambda, 1001);
    const BlockSystem sys = assemble_continuous_system(p, line);
    CHECK(sys.r[0](500).real() == Approx(expected).epsilon(1e-5));
  }

  // index 4: R_00(xi_1) on [-8, 8] = 8 / (a^2 (a^2 + 64)) + atan(8 / a) / a^3, a^2 = 1 + xi_1^2
  const ContinuousProblem q = radial_problem(4.0, 3.25, 1, {0.0});
  const MidpointLine odd(8.0, 1001);
  CHECK(assemble_continuous_system(q, odd).r[0](500).real() == Approx(1.5695182553250582611).epsilon(1e-6));
  const MidpointLine shifted(8.0, 496);
  CHECK(shifted.node(294) == Approx(1.5));
  CHECK(assemble_continuous_system(q, shifted).r[0](294).real() == Approx(0.2668719400863233038).epsilon(1e-6));

  // L_00 with B = A = 1 is 1
  ContinuousProblem flat{-1.0, 1, 0.0, radial_symbol(0.0), {radial_symbol(0.0)}, {radial_symbol(0.0)}};
  const MidpointLine line(3.0, 12);
  const BlockSystem s = assemble_continuous_system(flat, line);
  CHECK((s.l[0].array() / line.weight() - cplx(1.0)).abs().maxCoeff() < 1e-14);

  // odd integrand: R_{j1} vanishes for even B / A
  const ContinuousProblem two = radial_problem(4.0, 2.0, 2, {0.0, 0.0});
  const BlockSystem s2 = assemble_continuous_system(two, MidpointLine(6.0, 40));
  CHECK(s2.r[1].cwiseAbs().maxCoeff() < 1e-14);
  CHECK(s2.r[0].cwiseAbs().minCoeff() > 0.0);
}

TEST_CASE("solve: constant data for the identity problem") {
  const double h = 1.0;
  const FrequencyGrid g(h, 32);
  ProblemSpec spec = identity_problem(0.0, h);
  const Eigen::VectorXcd data = Eigen::VectorXcd::Constant(32, cplx(2.0 * kPi / h));
  spec.b_data = {Spectrum1D{g, data}};
  spec.g_data = {Spectrum1D{g, data}};
  const SolveReport rep = solve_block_system(assemble_discrete_system(spec, g));
  CHECK(rep.residual <= 1e-10);
  CHECK(rep.condition < 1e8);
}

TEST_CASE("solve: zero data give zero traces") {
  const FrequencyGrid g(1.0, 32);
  const SolveReport rep = solve_block_system(assemble_discrete_system(zeta_problem(0.5, 1.0), g));
  CHECK(rep.traces.stacked().norm() == 0.0);
}

TEST_CASE("solve: degenerate boundary operators are near-singular") {
  ProblemSpec spec = identity_problem(0.5, 1.0);
  spec.b_ops = {BoundaryOperatorSpec(TraceSide::Bottom, constant(0.0, 1.0), 0.0)};
  try {
    (void)solve_block_system(assemble_discrete_system(spec, FrequencyGrid(1.0, 16)));
    FAIL("expected NearSingular");
  } catch (const NearSingular& e) {
    CHECK(e.condition() > kNearSingularThreshold);
  }
}

TEST_CASE("the null space of the reduced system and the gauge") {
  const FrequencyGrid g(1.0, 32);
  const ProblemSpec spec = zeta_problem(0.5, 1.0);
  const BlockSystem sys = assemble_discrete_system(spec, g);
  // c = zeta^0 = 1, d = -1: u~ = 0 and the system maps it to zero
  TraceVector null = TraceVector::zero(1, 32);
  null.c[0].setOnes();
  null.d[0].setConstant(-1.0);
  CHECK(reconstruct_solution(null, spec.factorization, g).values.cwiseAbs().maxCoeff() < 1e-15);
  CHECK(sys.apply(null.stacked()).norm() < 1e-12);

  const TraceVector planted = random_bump_traces(1, 3, g.hbar()).sample(g.line());
  const TraceVector canon = canonicalize_traces(planted, sys);
  CHECK(std::abs(canon.d[0].sum() * g.weight()) < 1e-12);
  const Eigen::MatrixXcd u1 = reconstruct_solution(planted, spec.factorization, g).values;
  const Eigen::MatrixXcd u2 = reconstruct_solution(canon, spec.factorization, g).values;
  CHECK((u1 - u2).cwiseAbs().maxCoeff() < 1e-13);
}

TEST_CASE("reconstruct_solution examples") {
  const FrequencyGrid g(1.0, 8);
  TraceVector t = TraceVector::zero(1, 8);
  t.c[0].setOnes();
  const Spectrum2D u = reconstruct_solution(t, geometric(0.0, 1.0), g);
  CHECK((u.values.array() - cplx(1.0)).abs().maxCoeff() == 0.0);

  const WaveFactorization fac = geometric(0.5, 1.0);
  TraceVector t2 = TraceVector::zero(2, 8);
  t2.d[1].setOnes();
  const Spectrum2D u2 = reconstruct_solution(t2, fac, g);
  for (int a = 0; a < 8; ++a) {
    for (int b = 0; b < 8; ++b) {
      const cplx expected = zeta(g.node(a), 1.0) / fac.plus().on_real(g.node(a), g.node(b));
      CHECK(std::abs(u2.values(a, b) - expected) < 1e-14);
    }
  }

  const MidpointLine line(4.0, 10);
  TraceVector t3 = TraceVector::zero(2, 10);
  t3.c[1].setOnes();
  const Eigen::MatrixXcd uc = reconstruct_continuous_solution(t3, radial_symbol(2.0), line);
  const double x1 = line.node(2), x2 = line.node(7);
  CHECK(std::abs(uc(2, 7) - cplx(0.0, x2) / (1.0 + x1 * x1 + x2 * x2)) < 1e-15);
  CHECK_THROWS_AS(reconstruct_solution(TraceVector::zero(1, 6), fac, g), InvalidInput);
}

TEST_CASE("random bump traces are deterministic and confined") {
  const RandomTraces a = random_bump_traces(2, 99, 1.0);
  const RandomTraces b = random_bump_traces(2, 99, 1.0);
  const RandomTraces c = random_bump_traces(2, 100, 1.0);
  CHECK(a.c[1](0.3) == b.c[1](0.3));
  CHECK(a.c[1](0.3) != c.c[1](0.3));
  for (const auto& bump : a.c) {
    for (std::size_t i = 0; i < 3; ++i) {
      CHECK(std::abs(bump.center[i]) < std::min(1.5, kPi / 2));
      CHECK(bump.width[i] >= 0.3);
      CHECK(bump.width[i] <= 1.0);
    }
  }
  const RandomTraces fine = random_bump_traces(1, 5, 0.5);
  for (std::size_t i = 0; i < 3; ++i) CHECK(std::abs(fine.d[0].center[i]) < kPi / 4);
}

TEST_CASE("manufactured round trip: examples") {
  const double h = 1.0;
  const FrequencyGrid g(h, 256);
  const TraceVector planted = random_bump_traces(1, 1, g.hbar()).sample(g.line());

  const RoundTripReport id = manufactured_roundtrip(identity_problem(0.0, h), planted, g);
  CHECK(id.rel_error <= 1e-6);

  const RoundTripReport zero = manufactured_roundtrip(zeta_problem(0.5, h), TraceVector::zero(1, 256), g);
  CHECK(zero.recovered.stacked().norm() == 0.0);
  CHECK(zero.rel_error == 0.0);

  const RoundTripReport fam = manufactured_roundtrip(zeta_problem(0.5, h), planted, g);
  CHECK(fam.rel_error <= 1e-6);
  CHECK(fam.residual <= 1e-10);

  CHECK_THROWS_AS(manufactured_roundtrip(zeta_problem(0.5, h), TraceVector::zero(2, 256), g), InvalidInput);
}

TEST_CASE("manufactured round trip with two traces per side") {
  for (const double h : {1.0, 0.5}) {
    const FrequencyGrid g(h, static_cast<int>(64 / h));
    const TraceVector planted = random_bump_traces(2, 4, g.hbar()).sample(g.line());
    const RoundTripReport rt = manufactured_roundtrip(two_trace_problem(h), planted, g);
    CHECK(rt.rel_error <= 1e-6);
    CHECK(rt.condition < kNearSingularThreshold);
  }
}

TEST_CASE("property: round-trip error no worse than O(N^-2)") {
  std::vector<double> errors;
  for (const int n : {64, 128, 256}) {
    const FrequencyGrid g(1.0, n);
    const TraceVector planted = random_bump_traces(1, 21, 1.0).sample(g.line());
    errors.push_back(manufactured_roundtrip(zeta_problem(0.5, 1.0), planted, g).rel_error);
  }
  for (std::size_t i = 1; i < errors.size(); ++i) CHECK(errors[i] <= std::max(1e-12, 4.0 * errors[i - 1]));
}

TEST_CASE("property: reconstructed solutions satisfy the homogeneous equation") {
  const double h = 1.0;
  const FrequencyGrid g(h, 128);
  for (const ProblemSpec& spec : {zeta_problem(0.5, h), two_trace_problem(h)}) {
    const IndexBox window{spec.n, spec.n + 4, spec.n, spec.n + 4};
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      const TraceVector t = random_bump_traces(spec.n, seed, g.hbar()).sample(g.line());
      const HomogeneousResidual r = homogeneous_residual(spec, t, g, window);
      CHECK(r.solution_norm > 0.0);
      CHECK(r.max_residual <= 1e-6 * r.solution_norm);
    }
  }
}

TEST_CASE("property: a priori ratio does not depend on h") {
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    std::vector<double> ratios;
    // one draw, sampled on every grid
    const RandomTraces draw = random_bump_traces(1, seed, 1.0);
    for (const double h : {1.0, 0.5, 0.25}) {
      const FrequencyGrid g(h, static_cast<int>(64 / h));
      const TraceVector t = draw.sample(g.line());
      ratios.push_back(apriori_ratio(discretize(builtin_continuous_problem("arctan"), h), t, g));
    }
    CHECK(*std::max_element(ratios.begin(), ratios.end()) <= 2.0 * *std::min_element(ratios.begin(), ratios.end()));
  }
}

TEST_CASE("property: solve residual small when well conditioned") {
  for (const double a : {0.0, 0.3, 0.5, 0.8}) {
    const FrequencyGrid g(1.0, 64);
    const TraceVector planted = random_bump_traces(1, 8, 1.0).sample(g.line());
    const RoundTripReport rt = manufactured_roundtrip(zeta_problem(a, 1.0), planted, g);
    if (rt.condition <= 1e8) CHECK(rt.residual <= 1e-10);
  }
}

TEST_CASE("discretize keeps the continuous symbols inside the cell") {
  const ContinuousProblem p = radial_problem(3.0, 2.25, 1, {0.0});
  const ProblemSpec d = discretize(p, 0.5);
  CHECK(d.index() == 3.0);
  CHECK(d.b_ops[0].order == 0.0);
  CHECK(d.factorization.plus().on_real(1.0, -2.0).real() == Approx(std::pow(6.0, 1.5)));
  CHECK(d.factorization.plus().on_real(1.0 + 4.0 * kPi, -2.0).real() == Approx(std::pow(6.0, 1.5)));
  CHECK(d.factorization.minus().on_real(1.0, 2.0) == cplx(1.0));
}
