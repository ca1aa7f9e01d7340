#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "dpdo/lattice.hpp"

using namespace dpdo;
using doctest::Approx;

namespace {

LatticeFunction random_function(double h, IndexBox box, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  LatticeFunction u(h, box);
  for (int i = box.x1_min; i <= box.x1_max; ++i) {
    for (int j = box.x2_min; j <= box.x2_max; ++j) u.at(i, j) = cplx(dist(rng), dist(rng));
  }
  return u;
}

}  // namespace

TEST_CASE("frequency grid: midpoint nodes, weights and parity") {
  const FrequencyGrid g(0.5, 16);
  CHECK(g.hbar() == Approx(2.0));
  CHECK(g.weight() * g.size() == Approx(2.0 * kPi * g.hbar()).epsilon(1e-15));
  for (int i = 0; i < g.size(); ++i) {
    CHECK(std::abs(g.node(i)) < kPi * g.hbar());
    CHECK(g.node(i) != 0.0);
  }
  CHECK(g.node(0) == Approx(-kPi * 2.0 + g.weight() / 2));
  CHECK_THROWS_AS(FrequencyGrid(1.0, 15), InvalidInput);
  CHECK_THROWS_AS(FrequencyGrid(1.0, 0), InvalidInput);
  CHECK_THROWS_AS(FrequencyGrid(-1.0, 16), InvalidInput);
}

TEST_CASE("lattice function storage") {
  LatticeFunction u(1.0, IndexBox{-1, 1, 0, 2});
  u.at(1, 2) = 3.0;
  CHECK(u.value(1, 2) == cplx(3.0));
  CHECK(u.value(5, 5) == cplx(0.0));
  CHECK_THROWS_AS(u.at(2, 0), InvalidInput);
}

TEST_CASE("zeta values") {
  CHECK(zeta(0.0, 0.3) == cplx(0.0));
  const cplx edge = zeta(kPi / 0.25, 0.25);
  CHECK(edge.real() == Approx(-8.0).epsilon(1e-14));
  CHECK(std::abs(edge.imag()) < 1e-13);
  const cplx z = zeta(1.0, 0.1);
  CHECK(z.real() == Approx(-0.049958347219742339).epsilon(1e-14));
  CHECK(z.imag() == Approx(0.99833416646828152).epsilon(1e-14));
  // complex argument on the real axis agrees
  const cplx zc = zeta(cplx(1.0, 0.0), 0.1);
  CHECK(std::abs(zc - z) < 1e-15);
  const cplx sq = zeta_squared(0.4, -1.1, 0.5);
  CHECK(std::abs(sq - (zeta(0.4, 0.5) * zeta(0.4, 0.5) + zeta(-1.1, 0.5) * zeta(-1.1, 0.5))) < 1e-14);
}

TEST_CASE("zeta stays within e^pi h xi^2 of i xi on the cell") {
  for (const double h : {1.0, 0.5, 0.125}) {
    for (int i = 0; i <= 400; ++i) {
      const double xi = -kPi / h + 2.0 * kPi / h * i / 400.0;
      CHECK(std::abs(zeta(xi, h) - cplx(0.0, xi)) <= std::exp(kPi) * h * xi * xi + 1e-12);
    }
  }
}

TEST_CASE("discrete fourier examples") {
  const FrequencyGrid g1(1.0, 8);
  const Spectrum2D one = discrete_fourier(LatticeFunction::unit_mass(1.0, 0, 0), g1);
  CHECK((one.values.array() - cplx(1.0)).abs().maxCoeff() < 1e-15);

  const Spectrum2D shift = discrete_fourier(LatticeFunction::unit_mass(1.0, 1, 0), g1);
  for (int a = 0; a < g1.size(); ++a) {
    for (int b = 0; b < g1.size(); ++b) {
      CHECK(std::abs(shift.values(a, b) - std::exp(cplx(0.0, g1.node(a)))) < 1e-14);
    }
  }

  // two masses, h = 0.5
  LatticeFunction two(0.5, IndexBox{0, 1, 0, 0});
  two.at(0, 0) = 1.0;
  two.at(1, 0) = 1.0;
  const FrequencyGrid g(0.5, 32);
  const Spectrum2D f = discrete_fourier(two, g);
  for (int a = 0; a < g.size(); ++a) {
    const cplx expected = 0.25 * (1.0 + std::exp(cplx(0.0, 0.5 * g.node(a))));
    CHECK(std::abs(f.values(a, 3) - expected) < 1e-15);
  }
  CHECK_THROWS_AS(discrete_fourier(two, g1), InvalidInput);
}

TEST_CASE("two-mass transform against high-precision reference") {
  // 30-digit values of h^2 (1 + e^{i h xi_1}) at nodes 3 and 20 of the
  // 32-node grid for h = 0.5.
  LatticeFunction two(0.5, IndexBox{0, 1, 0, 0});
  two.at(0, 0) = 1.0;
  two.at(1, 0) = 1.0;
  const Spectrum2D f = discrete_fourier(two, FrequencyGrid(0.5, 32));
  CHECK(f.values(3, 7).real() == Approx(0.056747386659315759797).epsilon(1e-14));
  CHECK(f.values(3, 7).imag() == Approx(-0.15859832104091137455).epsilon(1e-14));
  CHECK(f.values(20, 0).real() == Approx(0.40859832104091137455).epsilon(1e-14));
  CHECK(f.values(20, 0).imag() == Approx(0.1932526133406842402).epsilon(1e-14));
}

TEST_CASE("inverse transform examples and round trip") {
  const FrequencyGrid g(1.0, 8);
  const Spectrum2D ones{g, Eigen::MatrixXcd::Constant(8, 8, cplx(1.0))};
  const LatticeFunction delta = inverse_discrete_fourier(ones, IndexBox{-3, 3, -3, 3});
  for (int i = -3; i <= 3; ++i) {
    for (int j = -3; j <= 3; ++j) {
      CHECK(std::abs(delta.value(i, j) - cplx(i == 0 && j == 0 ? 1.0 : 0.0)) < 1e-14);
    }
  }

  Spectrum2D shift{g, Eigen::MatrixXcd(8, 8)};
  for (int a = 0; a < 8; ++a) shift.values.row(a).setConstant(std::exp(cplx(0.0, g.node(a))));
  const LatticeFunction moved = inverse_discrete_fourier(shift, IndexBox{-2, 2, -2, 2});
  CHECK(std::abs(moved.value(1, 0) - cplx(1.0)) < 1e-14);
  CHECK(std::abs(moved.value(0, 0)) < 1e-14);

  LatticeFunction two(0.5, IndexBox{0, 1, 0, 0});
  two.at(0, 0) = 1.0;
  two.at(1, 0) = 1.0;
  const FrequencyGrid g2(0.5, 8);
  const LatticeFunction back = inverse_discrete_fourier(discrete_fourier(two, g2), IndexBox{-1, 2, -1, 1});
  CHECK(std::abs(back.value(0, 0) - cplx(1.0)) < 1e-12);
  CHECK(std::abs(back.value(1, 0) - cplx(1.0)) < 1e-12);
  CHECK(std::abs(back.value(2, 0)) < 1e-12);
  CHECK(std::abs(back.value(-1, 1)) < 1e-12);
}

TEST_CASE("property: round trip recovers random functions when N >= 2 width") {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const IndexBox box{-3, 4, 0, 5};
    const LatticeFunction u = random_function(0.25, box, seed);
    const FrequencyGrid g(0.25, 16);
    const LatticeFunction back = inverse_discrete_fourier(discrete_fourier(u, g), box);
    const double err = (back.values() - u.values()).norm() / u.values().norm();
    CHECK(err <= 1e-10);
  }
}

TEST_CASE("property: Parseval identity") {
  for (std::uint64_t seed = 10; seed < 15; ++seed) {
    const LatticeFunction u = random_function(0.5, IndexBox{-2, 3, -4, 1}, seed);
    const FrequencyGrid g(0.5, 12);
    const Spectrum2D f = discrete_fourier(u, g);
    const double lhs = std::pow(lattice_l2_norm(u), 2);
    const double rhs = f.values.squaredNorm() * g.weight() * g.weight() / (4.0 * kPi * kPi);
    CHECK(std::abs(lhs - rhs) <= 1e-10 * lhs);
  }
}

TEST_CASE("property: transforms are linear") {
  const FrequencyGrid g(1.0, 10);
  const IndexBox box{0, 3, -1, 2};
  const LatticeFunction u = random_function(1.0, box, 3);
  const LatticeFunction v = random_function(1.0, box, 4);
  LatticeFunction w(1.0, box);
  const cplx alpha(0.3, -1.2);
  w.values() = u.values() + alpha * v.values();
  const Eigen::MatrixXcd lhs = discrete_fourier(w, g).values;
  const Eigen::MatrixXcd rhs = discrete_fourier(u, g).values + alpha * discrete_fourier(v, g).values;
  CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-13);
}

TEST_CASE("sobolev norms: examples") {
  const FrequencyGrid g1(1.0, 64);
  const Spectrum2D one{g1, Eigen::MatrixXcd::Constant(64, 64, cplx(1.0))};
  CHECK(sobolev_norm_2d(one, 0.0) == Approx(2.0 * kPi).epsilon(1e-14));

  const FrequencyGrid gh(0.5, 16);
  const Spectrum2D mass = discrete_fourier(LatticeFunction::unit_mass(0.5, 0, 0), gh);
  CHECK(sobolev_norm_2d(mass, 0.0) == Approx(2.0 * kPi * 0.5).epsilon(1e-14));

  const Spectrum1D zero{g1, Eigen::VectorXcd::Zero(64)};
  CHECK(sobolev_norm_1d(zero, 1.3) == 0.0);
  const Spectrum1D one1{g1, Eigen::VectorXcd::Ones(64)};
  CHECK(sobolev_norm_1d(one1, 0.0) == Approx(std::sqrt(2.0 * kPi)).epsilon(1e-14));
}

TEST_CASE("sobolev norms against dense quadrature references") {
  // References: adaptive 2D / 1D quadrature of the weight at 15-30 digits.
  const FrequencyGrid g(1.0, 512);
  const Spectrum2D one{g, Eigen::MatrixXcd::Constant(512, 512, cplx(1.0))};
  CHECK(sobolev_norm_2d(one, 0.5) == Approx(8.9027142025168473).epsilon(1e-6));
  CHECK(sobolev_norm_2d(one, -1.0) == Approx(3.4298812419508318).epsilon(1e-6));
  CHECK(sobolev_norm_2d(one, 1.5) == Approx(19.232283517292576).epsilon(1e-6));

  const FrequencyGrid gh(0.5, 256);
  CHECK(sobolev_norm_1d(gh, Eigen::VectorXcd::Ones(256), -1.0) == Approx(1.745792814566439209).epsilon(1e-12));
  // closed form: (2/h) pi / sqrt(1 + 4/h^2)
  CHECK(std::pow(sobolev_norm_1d(gh, Eigen::VectorXcd::Ones(256), -1.0), 2) ==
        Approx(4.0 * kPi / std::sqrt(17.0)).epsilon(1e-12));
  const FrequencyGrid g1(1.0, 256);
  CHECK(sobolev_norm_1d(g1, Eigen::VectorXcd::Ones(256), 0.75) == Approx(3.7410749430339314554).epsilon(1e-10));
}

TEST_CASE("property: norm monotone in s") {
  const FrequencyGrid g(0.5, 32);
  const Spectrum2D f = discrete_fourier(random_function(0.5, IndexBox{0, 4, 0, 4}, 9), g);
  double prev = 0.0;
  for (const double s : {-2.0, -1.0, -0.25, 0.0, 0.5, 1.0, 2.0}) {
    const double v = sobolev_norm_2d(f, s);
    CHECK(v >= prev);
    prev = v;
  }
}

TEST_CASE("property: doubling N changes smooth norms by at most 0.1%") {
  for (const double s : {-1.0, 0.5}) {
    const auto norm_at = [s](int n) {
      const FrequencyGrid g(1.0, n);
      Spectrum2D f{g, Eigen::MatrixXcd(n, n)};
      for (int a = 0; a < n; ++a) {
        for (int b = 0; b < n; ++b) f.values(a, b) = std::exp(-g.node(a) * g.node(a) - 2.0 * g.node(b) * g.node(b));
      }
      return sobolev_norm_2d(f, s);
    };
    CHECK(std::abs(norm_at(128) / norm_at(64) - 1.0) <= 1e-3);
  }
}
