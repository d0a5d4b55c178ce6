#include "villain/sampler.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

namespace villain {

namespace {

// Up to four distinct bonds; duplicates appear on unit-extent oracle lattices.
struct BondSet {
  std::array<std::size_t, 4> ids{};
  std::size_t size = 0;
  void add(std::size_t id) {
    for (std::size_t i = 0; i < size; ++i) {
      if (ids[i] == id) return;
    }
    ids[size++] = id;
  }
  const std::size_t* begin() const { return ids.data(); }
  const std::size_t* end() const { return ids.data() + size; }
};

BondSet angle_site_bonds(const LatticeSpec& spec, SiteIndex s) {
  BondSet set;
  set.add(spec.space_bond(s));
  set.add(spec.space_bond(spec.neighbor(s, Direction::SpaceMinus)));
  set.add(spec.time_bond(s));
  set.add(spec.time_bond(spec.neighbor(s, Direction::TimeMinus)));
  return set;
}

// Bonds whose current depends on phi(y, t).
BondSet height_site_bonds(const LatticeSpec& spec, SiteIndex s) {
  BondSet set;
  set.add(spec.space_bond(spec.canonical(s.x - 1, s.t - 1)));
  set.add(spec.space_bond(spec.canonical(s.x - 1, s.t)));
  set.add(spec.time_bond(spec.canonical(s.x, s.t - 1)));
  set.add(spec.time_bond(spec.canonical(s.x - 1, s.t - 1)));
  return set;
}

double local_angle_logw(const AngleConfig& cfg, const ChainSpec& chain, const BondSet& bonds,
                        std::size_t site, double value) {
  const LatticeSpec& spec = chain.spec;
  double total = 0.0;
  for (std::size_t id : bonds) {
    const Bond b = spec.bond(id);
    const std::size_t from = spec.index(b.from);
    const std::size_t to = spec.index(b.to);
    const double tf = from == site ? value : cfg[from];
    const double tt = to == site ? value : cfg[to];
    total += villain_log_kernel(bond_stiffness(spec, chain.couplings, b.kind), tf - tt, chain.trunc);
  }
  return total;
}

double bond_energy(long n, BondKind kind, const LatticeSpec& spec, const Couplings& c) {
  const double dn = static_cast<double>(n);
  return dn * dn / (2.0 * bond_stiffness(spec, c, kind));
}

double local_height_energy(const HeightConfig& h, const LatticeSpec& spec, const Couplings& c,
                           const BondSet& bonds) {
  double e = 0.0;
  for (std::size_t id : bonds) {
    e += bond_energy(height_current(h, spec, id), id % 2 == 0 ? BondKind::Space : BondKind::Time, spec, c);
  }
  return e;
}

bool metropolis_accept(double log_ratio, Rng& rng) {
  return log_ratio >= 0.0 || rng.uniform() < std::exp(log_ratio);
}

double winding_row_energy(const HeightConfig& h, const LatticeSpec& spec, const Couplings& c) {
  double e = 0.0;
  for (int x = 0; x < spec.lx(); ++x) {
    e += bond_energy(height_current(h, spec, spec.space_bond({x, 0})), BondKind::Space, spec, c);
  }
  return e;
}

double winding_column_energy(const HeightConfig& h, const LatticeSpec& spec, const Couplings& c) {
  double e = 0.0;
  for (int t = 0; t < spec.lt(); ++t) {
    e += bond_energy(height_current(h, spec, spec.time_bond({0, t})), BondKind::Time, spec, c);
  }
  return e;
}

bool update_winding(HeightConfig& h, const ChainSpec& chain, Rng& rng, bool row) {
  const LatticeSpec& spec = chain.spec;
  const Couplings& c = chain.couplings;
  long& w = row ? h.winding_x : h.winding_t;
  auto energy = [&] { return row ? winding_row_energy(h, spec, c) : winding_column_energy(h, spec, c); };
  const double before = energy();
  const long old = w;
  w += rng.coin() ? 1 : -1;
  if (metropolis_accept(before - energy(), rng)) return true;
  w = old;
  return false;
}

double gaussian_local_energy(const std::vector<double>& theta, const ChainSpec& chain, SiteIndex s,
                             double value) {
  const LatticeSpec& spec = chain.spec;
  const double zs = chain.couplings.z_space(spec.delta());
  const double zt = chain.couplings.z_time(spec.delta());
  auto diff = [&](Direction d) {
    const SiteIndex n = spec.neighbor(s, d);
    const double other = n == s ? value : theta[spec.index(n)];
    return value - other;
  };
  const double a = diff(Direction::SpacePlus), b = diff(Direction::SpaceMinus);
  const double u = diff(Direction::TimePlus), v = diff(Direction::TimeMinus);
  return 0.5 * zs * (a * a + b * b) + 0.5 * zt * (u * u + v * v);
}

constexpr int kTuneBlock = 10;

double retune(double width, const SweepStats& block, double max_width) {
  const double r = block.rate();
  if (r < 0.35) return width * 0.7;
  if (r > 0.55) return std::min(width * 1.3, max_width);
  return width;
}

void accumulate(SweepStats& into, const SweepStats& s) {
  into.proposed += s.proposed;
  into.accepted += s.accepted;
}

}  // namespace

void validate_chain(const ChainSpec& chain) {
  if (chain.thermalization_sweeps < 0) throw ValidationError("thermalization sweeps must be nonnegative");
  if (chain.measurement_sweeps <= 0 || chain.bin_size <= 0) {
    throw ValidationError("measurement sweeps and bin size must be positive");
  }
  if (chain.measurement_sweeps % chain.bin_size != 0) {
    throw ValidationError("measurement sweeps must be a multiple of the bin size");
  }
  if (static_cast<std::size_t>(chain.measurement_sweeps / chain.bin_size) < kMinBins) {
    throw ValidationError("chain yields fewer than " + std::to_string(kMinBins) + " bins");
  }
  if (!(chain.initial_width >= 0.0)) throw ValidationError("proposal width must be nonnegative");
  make_couplings(chain.couplings.inertia, chain.couplings.coupling);
}

// --- angle -----------------------------------------------------------------

bool update_angle_site(AngleConfig& config, const ChainSpec& chain, Rng& rng, std::size_t site,
                       double width) {
  const LatticeSpec& spec = chain.spec;
  const BondSet bonds = angle_site_bonds(spec, spec.site(site));
  const double old_value = config[site];
  const double proposal = canonical_angle(old_value + rng.symmetric(width));
  const double dlogw = local_angle_logw(config, chain, bonds, site, proposal) -
                       local_angle_logw(config, chain, bonds, site, old_value);
  if (!metropolis_accept(dlogw, rng)) return false;
  config.set(site, proposal);
  return true;
}

SweepStats metropolis_sweep_angle(AngleConfig& config, const ChainSpec& chain, Rng& rng, double width) {
  if (!config.matches(chain.spec)) throw ValidationError("configuration is not defined on the chain lattice");
  SweepStats stats;
  for (std::size_t i = 0; i < config.size(); ++i) {
    ++stats.proposed;
    if (update_angle_site(config, chain, rng, i, width)) ++stats.accepted;
  }
  return stats;
}

// --- heights ---------------------------------------------------------------

long height_current(const HeightConfig& h, const LatticeSpec& spec, std::size_t bond_id) {
  const Bond b = spec.bond(bond_id);
  const int x = b.from.x;
  const int t = b.from.t;
  if (b.kind == BondKind::Space) {
    // Dual column y = x + 1 sandwiches this bond between rows t and t + 1.
    return h.at(spec, x + 1, t + 1) - h.at(spec, x + 1, t) + (t == 0 ? h.winding_x : 0);
  }
  return h.at(spec, x, t + 1) - h.at(spec, x + 1, t + 1) + (x == 0 ? h.winding_t : 0);
}

double height_energy(const HeightConfig& h, const LatticeSpec& spec, const Couplings& c) {
  double e = 0.0;
  for (std::size_t id = 0; id < spec.bond_count(); ++id) {
    e += bond_energy(height_current(h, spec, id), id % 2 == 0 ? BondKind::Space : BondKind::Time, spec, c);
  }
  return e;
}

bool update_height_site(HeightConfig& config, const ChainSpec& chain, Rng& rng, std::size_t site) {
  const LatticeSpec& spec = chain.spec;
  const BondSet bonds = height_site_bonds(spec, spec.site(site));
  const double before = local_height_energy(config, spec, chain.couplings, bonds);
  const long old = config.phi[site];
  config.phi[site] += rng.coin() ? 1 : -1;
  const double after = local_height_energy(config, spec, chain.couplings, bonds);
  if (metropolis_accept(before - after, rng)) return true;
  config.phi[site] = old;
  return false;
}

SweepStats metropolis_sweep_height(HeightConfig& config, const ChainSpec& chain, Rng& rng) {
  if (config.lx != chain.spec.lx() || config.lt != chain.spec.lt()) {
    throw ValidationError("height configuration is not defined on the chain lattice");
  }
  SweepStats stats;
  for (std::size_t i = 0; i < config.phi.size(); ++i) {
    ++stats.proposed;
    if (update_height_site(config, chain, rng, i)) ++stats.accepted;
  }
  if (chain.windings) {
    for (bool row : {true, false}) {
      ++stats.proposed;
      if (update_winding(config, chain, rng, row)) ++stats.accepted;
    }
  }
  return stats;
}

double disorder_ratio(const HeightConfig& h, const LatticeSpec& spec, const Couplings& c, double xi,
                      int x, int origin_x, int origin_t) {
  if (x < 1 || x >= spec.lx()) throw ValidationError("line length x must satisfy 1 <= x < Lx");
  const double shift = xi * spec.delta();
  const double z = c.z_space(spec.delta());
  double exponent = 0.0;
  for (int y = 1; y <= x; ++y) {
    // f^x(y, 0) marks the spatial bond (y-1, 0) -> (y, 0); the temporal height
    // difference across it is -n / delta.
    const SiteIndex from = spec.canonical(origin_x + y - 1, origin_t);
    const double n = static_cast<double>(height_current(h, spec, spec.space_bond(from)));
    exponent -= ((n - shift) * (n - shift) - n * n) / (2.0 * z);
  }
  return std::exp(exponent);
}

// --- gaussian --------------------------------------------------------------

SweepStats metropolis_sweep_gaussian(std::vector<double>& theta, const ChainSpec& chain, Rng& rng,
                                     double width) {
  const LatticeSpec& spec = chain.spec;
  if (theta.size() != spec.site_count()) throw ValidationError("field size does not match the lattice");
  SweepStats stats;
  for (std::size_t i = 0; i < theta.size(); ++i) {
    const SiteIndex s = spec.site(i);
    const double old = theta[i];
    const double proposal = old + rng.symmetric(width);
    const double de = gaussian_local_energy(theta, chain, s, proposal) - gaussian_local_energy(theta, chain, s, old);
    ++stats.proposed;
    if (metropolis_accept(-de, rng)) {
      theta[i] = proposal;
      ++stats.accepted;
    }
  }
  return stats;
}

// --- chains ----------------------------------------------------------------

std::string Observable::name() const {
  std::ostringstream os;
  switch (kind) {
    case ObservableKind::CosTwoPoint: os << "cos"; break;
    case ObservableKind::SinTwoPoint: os << "sin"; break;
    case ObservableKind::HeightDiff: os << "dphi"; break;
    case ObservableKind::HeightDiffSq: os << "dphi2"; break;
    case ObservableKind::Disorder: os << "disorder"; break;
    case ObservableKind::SpatialCos: os << "bondcos"; break;
  }
  if (kind == ObservableKind::Disorder) {
    os << "(xi=" << xi << ";x=" << x << ")";
  } else if (kind != ObservableKind::SpatialCos) {
    os << "(" << separation.dx << ";" << separation.dt << ")";
  }
  return os.str();
}

bool valid_for(Representation rep, ObservableKind kind) {
  switch (kind) {
    case ObservableKind::CosTwoPoint:
    case ObservableKind::SinTwoPoint:
      return rep != Representation::Height;
    case ObservableKind::SpatialCos:
      return rep == Representation::Angle;
    case ObservableKind::HeightDiff:
    case ObservableKind::HeightDiffSq:
    case ObservableKind::Disorder:
      return rep == Representation::Height;
  }
  return false;
}

const char* to_string(Representation rep) {
  switch (rep) {
    case Representation::Angle: return "angle";
    case Representation::Height: return "height";
    case Representation::Gaussian: return "gaussian";
  }
  return "?";
}

namespace {

template <typename Field>
double measure_field(const Field& theta, const LatticeSpec& spec, const Observable& obs) {
  const std::size_t n = spec.site_count();
  double sum = 0.0;
  if (obs.kind == ObservableKind::SpatialCos) {
    for (std::size_t i = 0; i < n; ++i) {
      const SiteIndex s = spec.site(i);
      sum += std::cos(theta[i] - theta[spec.index(spec.neighbor(s, Direction::SpacePlus))]);
    }
    return sum / static_cast<double>(n);
  }
  for (std::size_t i = 0; i < n; ++i) {
    const double d = theta[i] - theta[spec.index(spec.shifted(spec.site(i), obs.separation))];
    sum += obs.kind == ObservableKind::CosTwoPoint ? std::cos(d) : std::sin(d);
  }
  return sum / static_cast<double>(n);
}

double measure_height(const HeightConfig& h, const ChainSpec& chain, const Observable& obs) {
  const LatticeSpec& spec = chain.spec;
  const std::size_t n = spec.site_count();
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const SiteIndex s = spec.site(i);
    if (obs.kind == ObservableKind::Disorder) {
      sum += disorder_ratio(h, spec, chain.couplings, obs.xi, obs.x, s.x, s.t);
    } else {
      const double d = static_cast<double>(h.phi[i] - h.phi[spec.index(spec.shifted(s, obs.separation))]);
      sum += obs.kind == ObservableKind::HeightDiff ? d : d * d;
    }
  }
  return sum / static_cast<double>(n);
}

}  // namespace

ChainResult run_chain(const ChainSpec& chain, Representation rep, std::span<const Observable> observables,
                      const MeasurementSink& sink) {
  validate_chain(chain);
  for (const Observable& o : observables) {
    if (!valid_for(rep, o.kind)) {
      throw ValidationError("observable " + o.name() + " is not defined for the " + to_string(rep) +
                            " representation");
    }
    if (o.kind == ObservableKind::Disorder && (o.x < 1 || o.x >= chain.spec.lx())) {
      throw ValidationError("disorder line length must satisfy 1 <= x < Lx");
    }
  }

  Rng rng(chain.seed, chain.chain_index);
  AngleConfig angles(chain.spec);
  HeightConfig heights(chain.spec);
  std::vector<double> field(chain.spec.site_count(), 0.0);

  const double max_width = rep == Representation::Angle ? kPi : 1e6;
  double width = std::min(chain.initial_width, max_width);
  auto sweep = [&]() -> SweepStats {
    switch (rep) {
      case Representation::Angle: return metropolis_sweep_angle(angles, chain, rng, width);
      case Representation::Height: return metropolis_sweep_height(heights, chain, rng);
      case Representation::Gaussian: return metropolis_sweep_gaussian(field, chain, rng, width);
    }
    return {};
  };

  SweepStats block;
  for (int s = 0; s < chain.thermalization_sweeps; ++s) {
    accumulate(block, sweep());
    if (chain.tune_width && rep != Representation::Height && (s + 1) % kTuneBlock == 0) {
      width = retune(width, block, max_width);
      block = {};
    }
  }

  std::vector<Binner> binners(observables.size(), Binner(static_cast<std::size_t>(chain.bin_size)));
  SweepStats measured;
  for (int m = 0; m < chain.measurement_sweeps; ++m) {
    accumulate(measured, sweep());
    const std::size_t sweep_no = static_cast<std::size_t>(chain.thermalization_sweeps + m);
    for (std::size_t k = 0; k < observables.size(); ++k) {
      double v = 0.0;
      switch (rep) {
        case Representation::Angle: v = measure_field(angles, chain.spec, observables[k]); break;
        case Representation::Gaussian: v = measure_field(field, chain.spec, observables[k]); break;
        case Representation::Height: v = measure_height(heights, chain, observables[k]); break;
      }
      binners[k].add(v);
      if (sink) sink(sweep_no, k, v);
    }
  }

  ChainResult result;
  result.observables.assign(observables.begin(), observables.end());
  for (const Binner& b : binners) result.estimates.push_back(summarize(b, chain.seed));
  result.acceptance_rate = measured.rate();
  result.width = rep == Representation::Height ? 0.0 : width;
  return result;
}

CorrelationEstimate estimate_two_point(const ChainSpec& chain, Separation r) {
  const Observable obs{ObservableKind::CosTwoPoint, r};
  return run_chain(chain, Representation::Angle, std::span(&obs, 1)).estimates.front();
}

CorrelationEstimate estimate_gaussian_two_point(const ChainSpec& chain, Separation r) {
  const Observable obs{ObservableKind::CosTwoPoint, r};
  return run_chain(chain, Representation::Gaussian, std::span(&obs, 1)).estimates.front();
}

CorrelationEstimate estimate_disorder(const ChainSpec& chain, double xi, int x) {
  const Observable obs{ObservableKind::Disorder, {}, xi, x};
  return run_chain(chain, Representation::Height, std::span(&obs, 1)).estimates.front();
}

}  // namespace villain
