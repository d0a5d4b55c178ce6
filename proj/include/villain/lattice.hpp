#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace villain {

/// Raised for any parameter or precondition violation.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

/// Maps an angle onto the canonical window [-pi, pi).
double canonical_angle(double theta);

struct SiteIndex {
  int x = 0;
  int t = 0;
  friend bool operator==(const SiteIndex&, const SiteIndex&) = default;
};

/// Lattice displacement (dx, dt) in site units.
struct Separation {
  int dx = 0;
  int dt = 0;
  friend bool operator==(const Separation&, const Separation&) = default;
};

enum class Direction { SpacePlus, SpaceMinus, TimePlus, TimeMinus };

Direction opposite(Direction d);

enum class BondKind { Space, Time };

/// Bond from `from` to its +x (Space) or +t (Time) neighbour.
struct Bond {
  std::size_t id = 0;
  BondKind kind = BondKind::Space;
  SiteIndex from;
  SiteIndex to;
};

/// Periodic space-time torus of Lx sites by Lt Trotter slices with step delta.
/// beta = Lt * delta is derived and cannot be set independently.
///
/// Sites are stored time-major: index = t * Lx + x. Bond ids are
/// 2 * index(from) for the spatial bond and 2 * index(from) + 1 for the
/// temporal bond, so every site owns exactly one bond of each kind.
class LatticeSpec {
 public:
  int lx() const { return lx_; }
  int lt() const { return lt_; }
  double delta() const { return delta_; }
  double beta() const { return static_cast<double>(lt_) * delta_; }

  std::size_t site_count() const { return static_cast<std::size_t>(lx_) * lt_; }
  std::size_t bond_count() const { return 2 * site_count(); }

  SiteIndex canonical(int x, int t) const;
  std::size_t index(SiteIndex s) const {
    return static_cast<std::size_t>(s.t) * lx_ + s.x;
  }
  SiteIndex site(std::size_t index) const {
    return {static_cast<int>(index % lx_), static_cast<int>(index / lx_)};
  }

  SiteIndex neighbor(SiteIndex s, Direction d) const;
  SiteIndex shifted(SiteIndex s, Separation r) const {
    return canonical(s.x + r.dx, s.t + r.dt);
  }

  std::size_t space_bond(SiteIndex from) const { return 2 * index(from); }
  std::size_t time_bond(SiteIndex from) const { return 2 * index(from) + 1; }
  Bond bond(std::size_t id) const;

  friend bool operator==(const LatticeSpec&, const LatticeSpec&) = default;

 private:
  friend LatticeSpec build_lattice(int lx, int lt, double delta);
  friend LatticeSpec build_oracle_lattice(int lx, int lt, double delta);
  LatticeSpec(int lx, int lt, double delta) : lx_(lx), lt_(lt), delta_(delta) {}

  int lx_;
  int lt_;
  double delta_;
};

/// Validated constructor: Lx >= 2, Lt >= 2, delta > 0.
LatticeSpec build_lattice(int lx, int lt, double delta);

/// Relaxed constructor for brute-force oracles and tiny sampler checks. A unit
/// extent is allowed; bonds along it close on themselves (self-loops whose
/// difference is identically zero). At least two sites are still required.
LatticeSpec build_oracle_lattice(int lx, int lt, double delta);

/// Moment of inertia I and coupling J of the rotator chain.
struct Couplings {
  double inertia = 1.0;
  double coupling = 1.0;

  /// Villain stiffness of a spatial bond: delta * J.
  double z_space(double delta) const { return delta * coupling; }
  /// Villain stiffness of a temporal bond: I / delta.
  double z_time(double delta) const { return inertia / delta; }

  friend bool operator==(const Couplings&, const Couplings&) = default;
};

Couplings make_couplings(double inertia, double coupling);

/// Per-bond Villain stiffness for a given bond kind.
inline double bond_stiffness(const LatticeSpec& spec, const Couplings& c, BondKind kind) {
  return kind == BondKind::Space ? c.z_space(spec.delta()) : c.z_time(spec.delta());
}

}  // namespace villain
