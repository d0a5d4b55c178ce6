#include <cmath>
#include <map>
#include <vector>

#include "doctest.h"
#include "villain/exact.hpp"
#include "villain/greens.hpp"
#include "villain/sampler.hpp"

using namespace villain;

namespace {

ChainSpec make_chain(int lx, int lt, double delta, double i, double j, int sweeps, int bin, std::uint64_t seed = 1) {
  ChainSpec chain;
  chain.spec = build_lattice(lx, lt, delta);
  chain.couplings = make_couplings(i, j);
  chain.seed = seed;
  chain.thermalization_sweeps = 500;
  chain.measurement_sweeps = sweeps;
  chain.bin_size = bin;
  return chain;
}

bool within(const CorrelationEstimate& e, double exact, double sigmas = 3.0) {
  return std::abs(e.mean - exact) <= sigmas * e.std_error;
}

// Pearson statistic of observed counts against exact bin probabilities.
double chi_square(const std::vector<double>& counts, const std::vector<double>& probs, double n) {
  double chi = 0.0;
  for (std::size_t k = 0; k < counts.size(); ++k) {
    const double e = n * probs[k];
    chi += (counts[k] - e) * (counts[k] - e) / e;
  }
  return chi;
}

}  // namespace

TEST_CASE("chain validation") {
  ChainSpec c = make_chain(4, 4, 1.0, 1.0, 1.0, 1600, 100);
  CHECK_NOTHROW(validate_chain(c));
  c.measurement_sweeps = 1550;
  CHECK_THROWS_AS(validate_chain(c), ValidationError);
  c.measurement_sweeps = 1500;
  CHECK_THROWS_AS(validate_chain(c), ValidationError);  // 15 bins
  c.measurement_sweeps = 1600;
  c.thermalization_sweeps = -1;
  CHECK_THROWS_AS(validate_chain(c), ValidationError);
}

TEST_CASE("zero proposal width leaves the configuration unchanged") {
  const ChainSpec chain = make_chain(4, 4, 1.0, 1.0, 1.0, 1600, 100);
  std::vector<double> init(16);
  for (std::size_t i = 0; i < 16; ++i) init[i] = 0.3 * static_cast<double>(i) - 2.0;
  AngleConfig cfg(chain.spec, init);
  const AngleConfig before = cfg;
  Rng rng(5);
  for (int s = 0; s < 10; ++s) metropolis_sweep_angle(cfg, chain, rng, 0.0);
  for (std::size_t i = 0; i < 16; ++i) CHECK(cfg[i] == before[i]);
}

TEST_CASE("frozen height configuration at very stiff couplings") {
  // Tiny delta*J and I/delta make every nonzero current exponentially costly.
  ChainSpec chain = make_chain(4, 4, 1.0, 1e-3, 1e-3, 1600, 100);
  HeightConfig h(chain.spec);
  Rng rng(9);
  std::size_t accepted = 0;
  for (int s = 0; s < 50; ++s) accepted += metropolis_sweep_height(h, chain, rng).accepted;
  CHECK(accepted == 0);
  for (long v : h.phi) CHECK(v == 0);
}

TEST_CASE("strong spatial coupling aligns neighbours") {
  ChainSpec chain = make_chain(8, 8, 1.0, 1.0, 1000.0, 1600, 100);
  const Observable obs{ObservableKind::SpatialCos};
  const ChainResult r = run_chain(chain, Representation::Angle, std::span(&obs, 1));
  CHECK(r.estimates[0].mean > 0.99);
}

TEST_CASE("separation zero is exactly one") {
  const ChainSpec chain = make_chain(4, 4, 1.0, 1.0, 1.0, 1600, 100);
  const CorrelationEstimate e = estimate_two_point(chain, {0, 0});
  CHECK(e.mean == 1.0);
  CHECK(e.std_error == 0.0);
  CHECK(estimate_gaussian_two_point(chain, {0, 0}).mean == 1.0);
  CHECK(estimate_disorder(chain, 0.0, 1).mean == 1.0);
}

TEST_CASE("identical chain specs give bit-identical streams") {
  const ChainSpec chain = make_chain(4, 4, 1.0, 1.0, 1.0, 1600, 100, 77);
  const std::vector<Observable> obs{{ObservableKind::CosTwoPoint, {1, 0}}, {ObservableKind::SinTwoPoint, {1, 0}}};
  for (Representation rep : {Representation::Angle, Representation::Gaussian}) {
    std::vector<double> a, b;
    const ChainResult ra = run_chain(chain, rep, obs, [&](std::size_t, std::size_t, double v) { a.push_back(v); });
    const ChainResult rb = run_chain(chain, rep, obs, [&](std::size_t, std::size_t, double v) { b.push_back(v); });
    CHECK(a == b);
    CHECK(ra.estimates[0].mean == rb.estimates[0].mean);
    CHECK(ra.estimates[0].std_error == rb.estimates[0].std_error);
  }
  ChainSpec other = chain;
  other.chain_index = 1;
  CHECK(estimate_two_point(chain, {1, 0}).mean != estimate_two_point(other, {1, 0}).mean);
}

TEST_CASE("two-point estimates lie in [-1, 1] and respect torus symmetry") {
  const ChainSpec chain = make_chain(6, 6, 1.0, 1.0, 1.0, 3200, 200);
  const std::vector<Observable> obs{{ObservableKind::CosTwoPoint, {2, 1}}, {ObservableKind::CosTwoPoint, {4, 1}},
                                    {ObservableKind::SinTwoPoint, {2, 1}}};
  const ChainResult r = run_chain(chain, Representation::Angle, obs);
  for (const auto& e : r.estimates) {
    CHECK(e.mean >= -1.0);
    CHECK(e.mean <= 1.0);
  }
  const double combined = std::hypot(r.estimates[0].std_error, r.estimates[1].std_error);
  CHECK(std::abs(r.estimates[0].mean - r.estimates[1].mean) <= 3.0 * combined);
  CHECK(std::abs(r.estimates[2].mean) <= 3.0 * r.estimates[2].std_error);
}

TEST_CASE("width tuning lands in the target acceptance window") {
  ChainSpec chain = make_chain(8, 8, 1.0, 1.0, 1.0, 1600, 100);
  chain.initial_width = 0.01;
  const Observable obs{ObservableKind::CosTwoPoint, {1, 0}};
  const ChainResult r = run_chain(chain, Representation::Angle, std::span(&obs, 1));
  CHECK(r.acceptance_rate > 0.3);
  CHECK(r.acceptance_rate < 0.6);
}

TEST_CASE("angle update is stationary for the exact conditional on two sites") {
  ChainSpec chain;
  chain.spec = build_oracle_lattice(1, 2, 1.0);
  chain.couplings = make_couplings(1.0, 1.0);
  const LatticeSpec& s = chain.spec;
  auto weight = [&](double th) {
    return std::exp(villain_log_weight(AngleConfig(s, {0.0, th}), s, chain.couplings, chain.trunc));
  };
  const double wmax = weight(0.0);
  constexpr int kBins = 16;
  std::vector<double> probs(kBins, 0.0);
  {
    const int fine = 64000;
    double total = 0.0;
    for (int i = 0; i < fine; ++i) {
      const double th = -kPi + kTwoPi * (i + 0.5) / fine;
      const double w = weight(th);
      probs[i * kBins / fine] += w;
      total += w;
    }
    for (double& p : probs) p /= total;
  }
  Rng rng(2024);
  std::vector<double> counts(kBins, 0.0);
  const int n = 200000;
  for (int k = 0; k < n; ++k) {
    double th;
    do {
      th = -kPi + kTwoPi * rng.uniform();
    } while (rng.uniform() * wmax > weight(th));
    AngleConfig cfg(s, {0.0, th});
    update_angle_site(cfg, chain, rng, 1, 1.5);
    const int bin = static_cast<int>((cfg[1] + kPi) / kTwoPi * kBins);
    counts[std::min(bin, kBins - 1)] += 1.0;
  }
  // 15 degrees of freedom; 44.3 is the 1e-4 upper tail.
  CHECK(chi_square(counts, probs, n) < 44.3);
}

TEST_CASE("height update is stationary for the exact conditional on two sites") {
  ChainSpec chain;
  chain.spec = build_oracle_lattice(1, 2, 1.0);
  chain.couplings = make_couplings(0.8, 1.3);
  const LatticeSpec& s = chain.spec;
  const int span = 12;
  auto energy = [&](long phi1) {
    HeightConfig h(s);
    h.phi[1] = phi1;
    h.winding_x = 1;
    return height_energy(h, s, chain.couplings);
  };
  std::vector<double> probs;
  double total = 0.0;
  for (long v = -span; v <= span; ++v) {
    probs.push_back(std::exp(-energy(v)));
    total += probs.back();
  }
  for (double& p : probs) p /= total;
  Rng rng(99);
  std::vector<double> counts(probs.size(), 0.0);
  const int n = 200000;
  for (int k = 0; k < n; ++k) {
    double u = rng.uniform();
    long v = -span;
    for (std::size_t i = 0; i < probs.size(); ++i, ++v) {
      u -= probs[i];
      if (u < 0.0) break;
    }
    v = std::min<long>(v, span);
    HeightConfig h(s);
    h.phi[1] = v;
    h.winding_x = 1;
    update_height_site(h, chain, rng, 1);
    if (std::abs(h.phi[1]) <= span) counts[h.phi[1] + span] += 1.0;
  }
  // Pool the negligible tails into their neighbours.
  std::vector<double> pc, pp;
  double ct = 0.0, pt = 0.0;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    ct += counts[i];
    pt += probs[i];
    if (pt * n >= 20.0) {
      pc.push_back(ct);
      pp.push_back(pt);
      ct = pt = 0.0;
    }
  }
  pc.back() += ct;
  pp.back() += pt;
  REQUIRE(pc.size() >= 3);
  // Generous upper tail for at most ~10 degrees of freedom.
  CHECK(chi_square(pc, pp, n) < 35.0);
}

TEST_CASE("angle chain reproduces the 2x2 oracle") {
  ChainSpec chain = make_chain(2, 2, 1.0, 1.0, 1.0, 100000, 1000, 3);
  const double exact = exact_two_point_angle(chain.spec, chain.couplings, chain.trunc, 24, Separation{1, 0});
  CHECK(within(estimate_two_point(chain, {1, 0}), exact));
}

TEST_CASE("height chain reproduces 2x2 moments and the disorder oracle") {
  ChainSpec chain = make_chain(2, 2, 1.0, 1.0, 1.0, 100000, 1000, 4);
  chain.windings = false;
  const HeightMoments m = exact_height_moments(chain.spec, chain.couplings, 8, 0, {1, 0});
  const std::vector<Observable> obs{{ObservableKind::HeightDiffSq, {1, 0}}, {ObservableKind::HeightDiff, {1, 0}}};
  const ChainResult r = run_chain(chain, Representation::Height, obs);
  CHECK(within(r.estimates[0], m.mean_diff_sq));
  CHECK(within(r.estimates[1], 0.0));

  chain.windings = true;
  const double exact = exact_disorder(chain.spec, chain.couplings, 8, 8, 1.0, 1);
  CHECK(within(estimate_disorder(chain, 1.0, 1), exact));
}

TEST_CASE("disorder operator decays with line length on 8x8") {
  const ChainSpec chain = make_chain(8, 8, 1.0, 1.0, 1.0, 16000, 1000, 5);
  const std::vector<Observable> obs{{ObservableKind::Disorder, {}, 1.0, 1}, {ObservableKind::Disorder, {}, 1.0, 2}};
  const ChainResult r = run_chain(chain, Representation::Height, obs);
  const double combined = std::hypot(r.estimates[0].std_error, r.estimates[1].std_error);
  CHECK(r.estimates[1].mean <= r.estimates[0].mean + 3.0 * combined);
}

TEST_CASE("gaussian chain reproduces exp(greens_diff)") {
  const ChainSpec chain = make_chain(16, 16, 1.0, 1.0, 1.0, 16000, 1000, 6);
  const GreensTable t = build_greens(primal_form(chain.spec, chain.couplings));
  CHECK(within(estimate_gaussian_two_point(chain, {3, 0}), std::exp(greens_diff(t, {3, 0}))));

  const ChainSpec a = make_chain(16, 16, 1.0, 4.0, 1.0, 16000, 1000, 7);
  const ChainSpec b = make_chain(16, 16, 1.0, 1.0, 4.0, 16000, 1000, 8);
  const CorrelationEstimate ea = estimate_gaussian_two_point(a, {0, 3});
  const CorrelationEstimate eb = estimate_gaussian_two_point(b, {3, 0});
  CHECK(std::abs(ea.mean - eb.mean) <= 3.0 * std::hypot(ea.std_error, eb.std_error));
}

TEST_CASE("observable names and representation checks") {
  CHECK(Observable{ObservableKind::CosTwoPoint, {1, 0}}.name() == "cos(1;0)");
  CHECK(Observable{ObservableKind::HeightDiffSq, {2, 3}}.name() == "dphi2(2;3)");
  CHECK(valid_for(Representation::Angle, ObservableKind::CosTwoPoint));
  CHECK_FALSE(valid_for(Representation::Angle, ObservableKind::Disorder));
  CHECK_FALSE(valid_for(Representation::Height, ObservableKind::CosTwoPoint));
  const ChainSpec chain = make_chain(4, 4, 1.0, 1.0, 1.0, 1600, 100);
  const Observable bad{ObservableKind::Disorder, {}, 1.0, 1};
  CHECK_THROWS_AS(run_chain(chain, Representation::Angle, std::span(&bad, 1)), ValidationError);
}
