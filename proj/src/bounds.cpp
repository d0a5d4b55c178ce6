#include "villain/bounds.hpp"

#include <cmath>
#include <limits>

namespace villain {

namespace {

double checked_distance(const Couplings& c, double dx, double tau) {
  if (dx == 0.0 && tau == 0.0) throw ValidationError("bound undefined at zero separation");
  return anisotropic_distance(c, dx, tau);
}

}  // namespace

double mbs_bound(const Couplings& c, double dx, double tau) {
  const double r = checked_distance(c, dx, tau);
  const double eta = std::sqrt(c.inertia * c.coupling) / kTwoPi;
  return std::pow(r, -eta);
}

double mbs_statement_bound(const Couplings& c, double dx, double tau) {
  const double r = checked_distance(c, dx, tau);
  return std::exp(-std::sqrt(c.inertia * c.coupling) / kTwoPi * r);
}

double finite_lattice_mbs_bound(const GreensTable& primal_table, Separation r) {
  return std::exp(greens_diff(primal_table, r));
}

double jensen_lower_exponent(const Couplings& c, double xi) {
  if (xi == 0.0) throw ValidationError("Jensen exponent is trivial at xi = 0");
  return xi * xi * std::sqrt(c.inertia * c.coupling) / kTwoPi;
}

double finite_lattice_jensen_bound(const GreensTable& dual_table, const ChargeDensity& rho) {
  const LatticeSpec& spec = dual_table.spec();
  if (rho.rho.size() != spec.site_count()) throw ValidationError("charge density size mismatch");
  double total = 0.0;
  for (double v : rho.rho) total += v;
  if (std::abs(total) > 1e-12) throw ValidationError("external charge density must be neutral");
  double energy = 0.0;
  for (std::size_t i = 0; i < spec.site_count(); ++i) {
    if (rho.rho[i] == 0.0) continue;
    const SiteIndex a = spec.site(i);
    for (std::size_t j = 0; j < spec.site_count(); ++j) {
      if (rho.rho[j] == 0.0) continue;
      const SiteIndex b = spec.site(j);
      energy += rho.rho[i] * dual_table(a.x - b.x, a.t - b.t) * rho.rho[j];
    }
  }
  return std::exp(-0.5 * energy);
}

bool within_finite_size_window(const LatticeSpec& spec, Separation r) {
  return 4 * std::abs(r.dx) <= spec.lx() && 4 * std::abs(r.dt) <= spec.lt();
}

BoundReport check_bound(const CorrelationEstimate& estimate, double bound_value, BoundSide side,
                        Separation separation) {
  if (!(estimate.std_error >= 0.0)) throw ValidationError("standard error must be nonnegative");
  BoundReport r;
  r.separation = separation;
  r.estimate = estimate;
  r.bound_value = bound_value;
  r.side = side;
  const double margin = side == BoundSide::Upper ? bound_value - estimate.mean : estimate.mean - bound_value;
  if (estimate.std_error == 0.0) {
    constexpr double inf = std::numeric_limits<double>::infinity();
    r.slack = margin > 0.0 ? inf : (margin < 0.0 ? -inf : 0.0);
    r.verdict = margin >= 0.0 ? Verdict::Satisfied : Verdict::Violated;
    return r;
  }
  r.slack = margin / estimate.std_error;
  if (r.slack >= kVerdictSigmas) {
    r.verdict = Verdict::Satisfied;
  } else if (r.slack >= 0.0) {
    r.verdict = Verdict::Inconclusive;
  } else {
    r.verdict = Verdict::Violated;
  }
  return r;
}

const char* to_string(BoundSide side) { return side == BoundSide::Upper ? "upper" : "lower"; }

const char* to_string(Verdict verdict) {
  switch (verdict) {
    case Verdict::Satisfied: return "satisfied";
    case Verdict::Violated: return "violated";
    case Verdict::Inconclusive: return "inconclusive";
  }
  return "?";
}

nlohmann::json to_json(const BoundReport& report) {
  nlohmann::json j;
  j["separation"] = {report.separation.dx, report.separation.dt};
  j["mean"] = report.estimate.mean;
  j["stderr"] = report.estimate.std_error;
  j["bound"] = report.bound_value;
  j["side"] = to_string(report.side);
  j["verdict"] = to_string(report.verdict);
  j["slack"] = std::isfinite(report.slack) ? nlohmann::json(report.slack) : nlohmann::json(nullptr);
  return j;
}

}  // namespace villain
