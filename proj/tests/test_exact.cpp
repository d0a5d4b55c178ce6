#include <cmath>
#include <tuple>

#include "doctest.h"
#include "villain/bounds.hpp"
#include "villain/exact.hpp"
#include "villain/greens.hpp"

using namespace villain;

// Reference values from tests/oracles/reference_values.py (independent numpy
// full-grid quadrature and enumeration).
namespace ref {
constexpr double kZ2x2 = 17.496456807054024;
constexpr double kCos10 = 0.8289057140996849;
constexpr double kCos11 = 0.778584967747572;
constexpr double kZ2x2Aniso = 15.786532388019967;
constexpr double kCos10Aniso = 0.733656890155839;
constexpr double kCos01Aniso = 0.8931249043233873;
constexpr double kCos11Aniso = 0.7244401476594787;
constexpr double kZ1x2 = 11.137808159514089;
constexpr double kHeightDiffSq = 0.36525536311709894;
}  // namespace ref

namespace {
const KernelTruncation kTrunc = make_truncation(8, 1e-12);
const LatticeSpec k2x2 = build_lattice(2, 2, 1.0);
const LatticeSpec k1x2 = build_oracle_lattice(1, 2, 1.0);
}  // namespace

TEST_CASE("angle partition function matches the reference quadrature") {
  const Couplings c = make_couplings(1.0, 1.0);
  CHECK(exact_partition_angle(k2x2, c, kTrunc, 24) == doctest::Approx(ref::kZ2x2).epsilon(1e-10));
  CHECK(exact_partition_angle(k1x2, c, kTrunc, 24) == doctest::Approx(ref::kZ1x2).epsilon(1e-10));
  CHECK(exact_partition_angle(k2x2, make_couplings(2.0, 0.5), kTrunc, 24) ==
        doctest::Approx(ref::kZ2x2Aniso).epsilon(1e-10));
  CHECK(exact_partition_angle(build_lattice(2, 2, 0.5), make_couplings(1.0, 1.0), kTrunc, 24) ==
        doctest::Approx(ref::kZ2x2Aniso).epsilon(1e-10));
}

TEST_CASE("quadrature is converged under doubling") {
  const Couplings c = make_couplings(1.0, 1.0);
  const double a = exact_partition_angle(k2x2, c, kTrunc, 24);
  const double b = exact_partition_angle(k2x2, c, kTrunc, 48);
  CHECK(std::abs(a - b) / b < 1e-10);
  const double p = exact_partition_angle(k1x2, c, kTrunc, 16);
  const double q = exact_partition_angle(k1x2, c, kTrunc, 32);
  CHECK(std::abs(p - q) / q < 1e-10);
}

TEST_CASE("two-point functions match the reference") {
  const Couplings c = make_couplings(1.0, 1.0);
  const std::vector<Separation> seps{{0, 0}, {1, 0}, {0, 1}, {1, 1}};
  const auto v = exact_two_point_angle(k2x2, c, kTrunc, 24, seps);
  CHECK(v[0] == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(v[1] == doctest::Approx(ref::kCos10).epsilon(1e-10));
  CHECK(v[2] == doctest::Approx(ref::kCos10).epsilon(1e-10));
  CHECK(v[3] == doctest::Approx(ref::kCos11).epsilon(1e-10));

  const auto w = exact_two_point_angle(k2x2, make_couplings(2.0, 0.5), kTrunc, 24, seps);
  CHECK(w[1] == doctest::Approx(ref::kCos10Aniso).epsilon(1e-10));
  CHECK(w[2] == doctest::Approx(ref::kCos01Aniso).epsilon(1e-10));
  CHECK(w[3] == doctest::Approx(ref::kCos11Aniso).epsilon(1e-10));
}

TEST_CASE("two-point function lies in (0, 1) and grows with J") {
  double prev = 0.0;
  for (double j : {0.5, 1.0, 2.0}) {
    const double g = exact_two_point_angle(k2x2, make_couplings(1.0, j), kTrunc, 24, Separation{1, 0});
    CHECK(g > 0.0);
    CHECK(g < 1.0);
    CHECK(g > prev);
    prev = g;
  }
}

TEST_CASE("axis swap symmetry of Z") {
  // I = delta^2 J with delta = 1 makes both stiffnesses equal.
  const LatticeSpec a = build_lattice(3, 2, 1.0);
  const LatticeSpec b = build_lattice(2, 3, 1.0);
  const Couplings c = make_couplings(1.7, 1.7);
  CHECK(exact_partition_angle(a, c, kTrunc, 16) == doctest::Approx(exact_partition_angle(b, c, kTrunc, 16)));
}

TEST_CASE("exact oracle rejects large lattices") {
  const LatticeSpec big = build_lattice(3, 3, 1.0);
  CHECK_THROWS_AS(exact_partition_angle(big, make_couplings(1, 1), kTrunc, 8), ValidationError);
  CHECK_THROWS_AS(exact_partition_angle(k2x2, make_couplings(1, 1), kTrunc, 4), ValidationError);
  CHECK_THROWS_AS(exact_partition_current(big, make_couplings(1, 1), 50), ValidationError);
}

TEST_CASE("current representation") {
  const Couplings c = make_couplings(1.0, 1.0);
  CHECK(free_current_count(k2x2) == 5);
  CHECK(free_current_count(k1x2) == 3);
  double floor = std::pow(kTwoPi, 4.0);
  for (std::size_t b = 0; b < 8; ++b) floor /= std::sqrt(kTwoPi * 1.0);
  CHECK(exact_partition_current(k2x2, c, 5) >= floor);
  CHECK(std::abs(exact_partition_current(k2x2, c, 5) - exact_partition_current(k2x2, c, 6)) /
            exact_partition_current(k2x2, c, 6) <
        1e-10);
  CHECK(exact_partition_current(k2x2, c, 5) == doctest::Approx(exact_partition_angle(k2x2, c, kTrunc, 24)).epsilon(1e-8));
}

TEST_CASE("duality residual") {
  for (auto [i, j, d] : {std::tuple{1.0, 1.0, 1.0}, std::tuple{2.0, 0.5, 1.0}, std::tuple{1.0, 1.0, 0.5}}) {
    const Couplings c = make_couplings(i, j);
    CHECK(duality_residual(build_lattice(2, 2, d), c, kTrunc, 24, 8) < 1e-6);
    CHECK(duality_residual(build_oracle_lattice(1, 2, d), c, kTrunc, 24, 8) < 1e-8);
  }
  const Couplings c = make_couplings(1.0, 1.0);
  const double r24 = duality_residual(k2x2, c, kTrunc, 24, 8);
  const double r48 = duality_residual(k2x2, c, kTrunc, 48, 8);
  CHECK(r48 < 1e-10);
  CHECK(r24 < 1e-10);
}

TEST_CASE("external charge correlation") {
  const Couplings c = make_couplings(1.0, 1.0);
  CHECK(exact_external_charge_correlation(k2x2, c, 4, make_charge_density(k2x2, 0.0, 1)) == 1.0);
  const ChargeDensity rho = make_charge_density(k2x2, 1.0, 1);
  double sum = 0.0;
  for (double v : rho.rho) sum += v;
  CHECK(sum == 0.0);
  const double g = exact_external_charge_correlation(k2x2, c, 4, rho);
  const double gm = exact_external_charge_correlation(k2x2, c, 4, make_charge_density(k2x2, -1.0, 1));
  CHECK(g == doctest::Approx(gm).epsilon(1e-13));
  const GreensTable dual = build_greens(dual_form(k2x2, c), GreensMethod::Direct);
  CHECK(g > finite_lattice_jensen_bound(dual, rho));
  ChargeDensity bad = rho;
  bad.rho[0] += 0.1;
  CHECK_THROWS_AS(exact_external_charge_correlation(k2x2, c, 4, bad), ValidationError);
}

TEST_CASE("disorder identity on 2x2") {
  const Couplings c = make_couplings(1.0, 1.0);
  CHECK(exact_disorder(k2x2, c, 8, 8, 0.0, 1) == doctest::Approx(1.0).epsilon(1e-14));
  const double d = exact_disorder(k2x2, c, 8, 8, 1.0, 1);
  CHECK(std::abs(d - ref::kCos10) < 1e-6);
  for (double xi : {0.25, 0.5, 0.75, 1.0}) {
    const double v = exact_disorder(k2x2, c, 8, 8, xi, 1);
    CHECK(v > 0.0);
    CHECK(v <= 1.0);
  }
  const LatticeSpec half = build_lattice(2, 2, 0.5);
  const double dh = exact_disorder(half, c, 8, 8, 2.0, 1);
  CHECK(std::abs(dh - exact_two_point_angle(half, c, kTrunc, 24, Separation{1, 0})) < 1e-6);
}

TEST_CASE("height moments match the reference enumeration") {
  const Couplings c = make_couplings(1.0, 1.0);
  const HeightMoments m = exact_height_moments(k2x2, c, 8, 0, {1, 0});
  CHECK(m.mean_diff == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(m.mean_diff_sq == doctest::Approx(ref::kHeightDiffSq).epsilon(1e-10));
}
