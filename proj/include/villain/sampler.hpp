#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "villain/action.hpp"
#include "villain/lattice.hpp"
#include "villain/rng.hpp"
#include "villain/statistics.hpp"

namespace villain {

struct ChainSpec {
  LatticeSpec spec = build_lattice(2, 2, 1.0);
  Couplings couplings;
  KernelTruncation trunc;
  std::uint64_t seed = 1;
  std::uint64_t chain_index = 0;
  int thermalization_sweeps = 0;
  int measurement_sweeps = 1600;
  int bin_size = 100;
  /// Initial angle proposal half-width; retuned during thermalization.
  double initial_width = 1.0;
  bool tune_width = true;
  /// Height chains also sample the two torus winding sectors.
  bool windings = true;
};

/// Throws unless measurement_sweeps is a multiple of bin_size with at least kMinBins bins.
void validate_chain(const ChainSpec& chain);

struct SweepStats {
  std::size_t proposed = 0;
  std::size_t accepted = 0;
  double rate() const { return proposed ? static_cast<double>(accepted) / proposed : 0.0; }
};

// ---------------------------------------------------------------------------
// Angle representation: compact theta with the Villain weight.

/// One typewriter sweep of single-site Metropolis updates with proposal
/// theta' = theta + U(-width, width), accepted with min(1, exp(dlogW)) where
/// dlogW only involves the four bonds touching the site.
SweepStats metropolis_sweep_angle(AngleConfig& config, const ChainSpec& chain, Rng& rng, double width);

/// Single-site update; exposed for detailed-balance tests.
bool update_angle_site(AngleConfig& config, const ChainSpec& chain, Rng& rng, std::size_t site,
                       double width);

// ---------------------------------------------------------------------------
// Dual height representation: integer phi on dual sites plus winding sectors.
//
// phi(y, t) sits on the dual site (y - 1/2, t - 1/2). The integer current on
// the spatial bond (y-1, t) -> (y, t) is phi(y, t+1) - phi(y, t) (+ winding_x
// on the row t = 0); on the temporal bond (y, t) -> (y, t+1) it is
// phi(y, t+1) - phi(y+1, t+1) (+ winding_t on the column y = 0). The weight is
// exp(-n^2 / (2 delta J)) per spatial bond and exp(-n^2 delta / (2 I)) per
// temporal bond, i.e. the discrete Gaussian measure with coefficients
// delta/(2I) on spatial and delta/(2J) * delta^-2 on temporal height differences.

struct HeightConfig {
  int lx = 0;
  int lt = 0;
  std::vector<long> phi;
  long winding_x = 0;
  long winding_t = 0;

  explicit HeightConfig(const LatticeSpec& spec) : lx(spec.lx()), lt(spec.lt()), phi(spec.site_count(), 0) {}
  long at(const LatticeSpec& spec, int y, int t) const { return phi[spec.index(spec.canonical(y, t))]; }
};

/// Integer current on a primal bond (bond ids as in LatticeSpec).
long height_current(const HeightConfig& h, const LatticeSpec& spec, std::size_t bond_id);

/// Total discrete-Gaussian energy (minus log weight).
double height_energy(const HeightConfig& h, const LatticeSpec& spec, const Couplings& c);

/// Sweep of phi -> phi +/- 1 proposals over all dual sites, followed by
/// +/- 1 proposals on each winding number when chain.windings is set.
SweepStats metropolis_sweep_height(HeightConfig& config, const ChainSpec& chain, Rng& rng);

bool update_height_site(HeightConfig& config, const ChainSpec& chain, Rng& rng, std::size_t site);

/// Ratio v(d2 phi + xi f^x) / v(d2 phi) of temporal-difference weights, with the
/// line f^x started at dual column `origin_x` on row `origin_t`.
double disorder_ratio(const HeightConfig& h, const LatticeSpec& spec, const Couplings& c, double xi,
                      int x, int origin_x = 0, int origin_t = 0);

// ---------------------------------------------------------------------------
// Non-compact Gaussian (spin-wave) model: theta real, action
// sum (z_s/2)(d_x theta)^2 + (z_t/2)(d_t theta)^2.

SweepStats metropolis_sweep_gaussian(std::vector<double>& theta, const ChainSpec& chain, Rng& rng,
                                     double width);

// ---------------------------------------------------------------------------
// Chains and estimators.

enum class Representation { Angle, Height, Gaussian };

enum class ObservableKind {
  CosTwoPoint,   ///< Re e^{i(theta(s) - theta(s+r))}, translation averaged
  SinTwoPoint,   ///< Im part, diagnostic
  HeightDiff,    ///< phi(s) - phi(s+r)
  HeightDiffSq,  ///< (phi(s) - phi(s+r))^2
  Disorder,      ///< disorder ratio, translation averaged
  SpatialCos,    ///< cos of the spatial bond difference, averaged
};

struct Observable {
  ObservableKind kind = ObservableKind::CosTwoPoint;
  Separation separation;
  double xi = 0.0;
  int x = 1;

  std::string name() const;
};

struct ChainResult {
  std::vector<Observable> observables;
  std::vector<CorrelationEstimate> estimates;
  double acceptance_rate = 0.0;  ///< over measurement sweeps
  double width = 0.0;            ///< frozen proposal width (angle/gaussian)
};

/// Called once per measurement sweep and observable.
using MeasurementSink = std::function<void(std::size_t sweep, std::size_t observable, double value)>;

/// Thermalizes (tuning the proposal width to acceptance in [0.35, 0.55], then
/// freezing it), measures every observable after every sweep and bins.
ChainResult run_chain(const ChainSpec& chain, Representation rep, std::span<const Observable> observables,
                      const MeasurementSink& sink = {});

CorrelationEstimate estimate_two_point(const ChainSpec& chain, Separation r);
CorrelationEstimate estimate_gaussian_two_point(const ChainSpec& chain, Separation r);
CorrelationEstimate estimate_disorder(const ChainSpec& chain, double xi, int x);

bool valid_for(Representation rep, ObservableKind kind);
const char* to_string(Representation rep);

}  // namespace villain
