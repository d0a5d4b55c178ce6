#include <cmath>

#include "doctest.h"
#include "villain/action.hpp"

using namespace villain;

namespace {
const KernelTruncation kTrunc = make_truncation(8, 1e-12);
}

TEST_CASE("villain_kernel at z=1, theta=0") {
  const KernelTruncation m4 = make_truncation(4, 1e-12);
  const double expected = 1.0 + 2.0 * std::exp(-2.0 * kPi * kPi) + 2.0 * std::exp(-8.0 * kPi * kPi);
  CHECK(villain_kernel(1.0, 0.0, m4) == doctest::Approx(expected).epsilon(1e-15));
  CHECK(villain_kernel(1.0, 0.0, m4) == doctest::Approx(1.000000005350576).epsilon(1e-14));
  CHECK(villain_kernel(1.0, 0.0, kTrunc) == doctest::Approx(villain_kernel(1.0, 0.0, m4)).epsilon(1e-15));
}

TEST_CASE("kernel is periodic, even and maximal at zero") {
  for (double z : {0.1, 1.0, 10.0}) {
    const double v0 = villain_weight(z, 0.0, kTrunc);
    for (int i = 0; i < 64; ++i) {
      const double th = -kPi + kTwoPi * i / 64.0;
      const double v = villain_weight(z, th, kTrunc);
      CHECK(v > 0.0);
      CHECK(v <= v0 * (1 + 1e-15));
      CHECK(std::abs(villain_weight(z, th + kTwoPi, kTrunc) - v) < 1e-14);
      CHECK(std::abs(villain_weight(z, -th, kTrunc) - v) < 1e-14);
    }
  }
}

TEST_CASE("Poisson identity between direct and dual forms") {
  const KernelTruncation wide = make_truncation(40, 1e-12);
  CHECK(std::abs(villain_kernel(0.1, kPi, wide) - villain_kernel_dual(0.1, kPi, wide)) < 1e-12);
  CHECK(std::abs(villain_kernel(10.0, 0.0, wide) - villain_kernel_dual(10.0, 0.0, wide)) < 1e-12);
  CHECK(std::abs(villain_kernel(1.0, kPi / 3, wide) - villain_kernel_dual(1.0, kPi / 3, wide)) < 1e-12);
}

TEST_CASE("dual kernel integrates to sqrt(2 pi / z)") {
  const double z = 0.7;
  const int n = 256;
  double s = 0.0;
  for (int i = 0; i < n; ++i) s += villain_kernel_dual(z, -kPi + kTwoPi * i / n, kTrunc);
  CHECK(s * kTwoPi / n == doctest::Approx(std::sqrt(kTwoPi / z)).epsilon(1e-12));
}

TEST_CASE("kernel arguments are validated") {
  CHECK_THROWS_AS(villain_kernel(0.0, 0.0, kTrunc), ValidationError);
  CHECK_THROWS_AS(villain_kernel_dual(-1.0, 0.0, kTrunc), ValidationError);
  CHECK_THROWS_AS(make_truncation(0, 1e-12), ValidationError);
  CHECK_THROWS_AS(make_truncation(4, 0.0), ValidationError);
  // Truncation too short for the requested tolerance.
  CHECK_THROWS_AS(villain_kernel(0.01, 0.0, make_truncation(1, 1e-12)), ValidationError);
}

TEST_CASE("log kernel is stable where the kernel underflows") {
  const double z = 4000.0;
  CHECK(villain_log_kernel(z, 0.0, kTrunc) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(villain_log_kernel(z, 1.0, kTrunc) == doctest::Approx(-z / 2).epsilon(1e-12));
  CHECK(villain_log_kernel(1.0, 0.3, kTrunc) == doctest::Approx(std::log(villain_weight(1.0, 0.3, kTrunc))));
  CHECK(villain_log_kernel(0.05, 0.3, kTrunc) == doctest::Approx(std::log(villain_weight(0.05, 0.3, kTrunc))));
}

TEST_CASE("villain_log_weight of a constant configuration") {
  const LatticeSpec s = build_lattice(3, 4, 0.5);
  const Couplings c = make_couplings(2.0, 0.7);
  const AngleConfig cfg(s, 1.234);
  const double per_site =
      villain_log_kernel(c.z_time(0.5), 0.0, kTrunc) + villain_log_kernel(c.z_space(0.5), 0.0, kTrunc);
  CHECK(villain_log_weight(cfg, s, c, kTrunc) == doctest::Approx(12 * per_site));
}

TEST_CASE("villain_log_weight is invariant under rotations and 2 pi shifts") {
  const LatticeSpec s = build_lattice(3, 3, 1.0);
  const Couplings c = make_couplings(1.0, 1.0);
  std::vector<double> th{0.1, -2.0, 1.5, 3.0, -0.4, 0.9, 2.2, -1.1, 0.0};
  const double base = villain_log_weight(AngleConfig(s, th), s, c, kTrunc);
  std::vector<double> rot = th;
  for (double& v : rot) v += 0.77;
  CHECK(villain_log_weight(AngleConfig(s, rot), s, c, kTrunc) == doctest::Approx(base).epsilon(1e-12));
  AngleConfig shifted(s, th);
  shifted.set(4, th[4] + kTwoPi);
  CHECK(villain_log_weight(shifted, s, c, kTrunc) == doctest::Approx(base).epsilon(1e-12));
}

TEST_CASE("villain_log_weight matches a brute-force shift-field sum on 2x2") {
  const LatticeSpec s = build_lattice(2, 2, 1.0);
  const Couplings c = make_couplings(1.0, 1.0);
  const AngleConfig cfg(s, {0.0, kPi / 2, kPi, -kPi / 2});
  // Per-bond sums over m in [-3, 3] factorise the full sum over [-3, 3]^8.
  double expected = 0.0;
  for (std::size_t id = 0; id < s.bond_count(); ++id) {
    const Bond b = s.bond(id);
    const double z = bond_stiffness(s, c, b.kind);
    const double d = bond_difference(cfg, s, b);
    double sum = 0.0;
    for (int m = -3; m <= 3; ++m) sum += std::exp(-0.5 * z * (d + kTwoPi * m) * (d + kTwoPi * m));
    expected += std::log(sum);
  }
  CHECK(villain_log_weight(cfg, s, c, kTrunc) == doctest::Approx(expected).epsilon(1e-13));
}

TEST_CASE("cosine_log_weight") {
  const LatticeSpec s = build_lattice(2, 2, 0.5);
  const Couplings c = make_couplings(1.0, 3.0);
  CHECK(cosine_log_weight(AngleConfig(s, 0.4), s, c) == doctest::Approx(-(0.5 * 3.0 / 2) * 4));

  const AngleConfig cfg(s, {0.0, 1.0, 3.0, -2.5});
  double expected = 0.0;
  for (std::size_t id = 0; id < s.bond_count(); ++id) {
    const Bond b = s.bond(id);
    const double d = bond_difference(cfg, s, b);
    if (b.kind == BondKind::Space) {
      expected -= 0.5 * 0.5 * 3.0 * std::cos(d);
    } else {
      const double w = canonical_angle(d);
      expected -= 1.0 / (2 * 0.5) * w * w;
    }
  }
  CHECK(cosine_log_weight(cfg, s, c) == doctest::Approx(expected));
}
