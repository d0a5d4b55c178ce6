#include "villain/lattice.hpp"

#include <cmath>

namespace villain {

namespace {

int wrap(int v, int n) {
  int r = v % n;
  return r < 0 ? r + n : r;
}

void check_delta(double delta) {
  if (!(delta > 0.0) || !std::isfinite(delta)) {
    throw ValidationError("delta must be positive and finite");
  }
}

}  // namespace

double canonical_angle(double theta) {
  double r = std::fmod(theta + kPi, kTwoPi);
  if (r < 0.0) r += kTwoPi;
  r -= kPi;
  // fmod can land exactly on +pi after the shift back.
  return r >= kPi ? r - kTwoPi : r;
}

Direction opposite(Direction d) {
  switch (d) {
    case Direction::SpacePlus: return Direction::SpaceMinus;
    case Direction::SpaceMinus: return Direction::SpacePlus;
    case Direction::TimePlus: return Direction::TimeMinus;
    case Direction::TimeMinus: return Direction::TimePlus;
  }
  return d;
}

SiteIndex LatticeSpec::canonical(int x, int t) const { return {wrap(x, lx_), wrap(t, lt_)}; }

SiteIndex LatticeSpec::neighbor(SiteIndex s, Direction d) const {
  switch (d) {
    case Direction::SpacePlus: return canonical(s.x + 1, s.t);
    case Direction::SpaceMinus: return canonical(s.x - 1, s.t);
    case Direction::TimePlus: return canonical(s.x, s.t + 1);
    case Direction::TimeMinus: return canonical(s.x, s.t - 1);
  }
  return s;
}

Bond LatticeSpec::bond(std::size_t id) const {
  Bond b;
  b.id = id;
  b.from = site(id / 2);
  if (id % 2 == 0) {
    b.kind = BondKind::Space;
    b.to = neighbor(b.from, Direction::SpacePlus);
  } else {
    b.kind = BondKind::Time;
    b.to = neighbor(b.from, Direction::TimePlus);
  }
  return b;
}

LatticeSpec build_lattice(int lx, int lt, double delta) {
  if (lx < 2 || lt < 2) {
    throw ValidationError("lattice extents must be at least 2 (got Lx=" + std::to_string(lx) +
                          ", Lt=" + std::to_string(lt) + ")");
  }
  check_delta(delta);
  return LatticeSpec(lx, lt, delta);
}

LatticeSpec build_oracle_lattice(int lx, int lt, double delta) {
  if (lx < 1 || lt < 1 || lx * lt < 2) {
    throw ValidationError("oracle lattice needs positive extents and at least two sites");
  }
  check_delta(delta);
  return LatticeSpec(lx, lt, delta);
}

Couplings make_couplings(double inertia, double coupling) {
  if (!(inertia > 0.0) || !(coupling > 0.0) || !std::isfinite(inertia) ||
      !std::isfinite(coupling)) {
    throw ValidationError("couplings I and J must be positive and finite");
  }
  return {inertia, coupling};
}

}  // namespace villain
