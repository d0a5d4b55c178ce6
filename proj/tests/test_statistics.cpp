#include <cmath>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "villain/rng.hpp"
#include "villain/statistics.hpp"

using namespace villain;

TEST_CASE("Binner forms bin means and ignores a trailing partial bin") {
  Binner b(3);
  for (int i = 1; i <= 10; ++i) b.add(i);
  REQUIRE(b.bin_means().size() == 3);
  CHECK(b.bin_means()[0] == doctest::Approx(2.0));
  CHECK(b.bin_means()[1] == doctest::Approx(5.0));
  CHECK(b.bin_means()[2] == doctest::Approx(8.0));
  CHECK(b.samples() == 10);
}

TEST_CASE("standard and jackknife errors agree for the mean") {
  const std::vector<double> v{1.0, 2.0, 4.0, 7.0, 11.0};
  // Unbiased variance 66/4 = 16.5.
  CHECK(standard_error(v) == doctest::Approx(std::sqrt(16.5 / 5.0)));
  CHECK(jackknife_error(v) == doctest::Approx(standard_error(v)));
}

TEST_CASE("summarize requires at least 16 bins") {
  Binner b(10);
  for (int i = 0; i < 150; ++i) b.add(i % 7);
  CHECK_THROWS_AS(summarize(b, 1), std::invalid_argument);
  for (int i = 0; i < 10; ++i) b.add(1.0);
  const CorrelationEstimate e = summarize(b, 42);
  CHECK(e.bins == 16);
  CHECK(e.seed == 42);
}

TEST_CASE("constant stream has zero error") {
  Binner b(5);
  for (int i = 0; i < 100; ++i) b.add(1.0);
  const CorrelationEstimate e = summarize(b, 0);
  CHECK(e.mean == 1.0);
  CHECK(e.std_error == 0.0);
  CHECK(e.jackknife_error == 0.0);
}

TEST_CASE("error bars are calibrated on independent samples") {
  Rng rng(7);
  Binner b(10);
  for (int i = 0; i < 100000; ++i) b.add(rng.uniform());
  const CorrelationEstimate e = summarize(b, 7);
  const double expected = std::sqrt(1.0 / 12.0 / 100000.0);
  CHECK(e.std_error == doctest::Approx(expected).epsilon(0.1));
  CHECK(std::abs(e.mean - 0.5) < 4 * e.std_error);
  CHECK(e.tau_int == doctest::Approx(0.5).epsilon(0.2));
}

TEST_CASE("merge is associative") {
  auto fill = [](int start) {
    Binner b(4);
    for (int i = 0; i < 40; ++i) b.add(std::sin(start + i));
    return b;
  };
  Binner left = fill(0);
  Binner tmp = fill(100);
  left.merge(tmp);
  left.merge(fill(200));
  Binner inner = fill(100);
  inner.merge(fill(200));
  Binner right = fill(0);
  right.merge(inner);
  REQUIRE(left.bin_means().size() == right.bin_means().size());
  for (std::size_t i = 0; i < left.bin_means().size(); ++i) CHECK(left.bin_means()[i] == right.bin_means()[i]);
  Binner other(5);
  CHECK_THROWS(left.merge(other));
}

TEST_CASE("rng streams are reproducible and distinct") {
  Rng a(11, 0), b(11, 0), c(11, 1);
  bool differs = false;
  for (int i = 0; i < 100; ++i) {
    const auto x = a.next();
    CHECK(x == b.next());
    differs = differs || x != c.next();
  }
  CHECK(differs);
  Rng r(3);
  for (int i = 0; i < 1000; ++i) {
    const double u = r.uniform();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
  }
}
