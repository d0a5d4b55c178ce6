#include "villain/exact.hpp"

#include <cmath>
#include <functional>
#include <queue>
#include <string>

#include "villain/greens.hpp"

namespace villain {

namespace {

void check_quadrature(const LatticeSpec& spec, int quad_points) {
  if (spec.site_count() > kMaxQuadratureSites) {
    throw ValidationError("angle quadrature limited to " + std::to_string(kMaxQuadratureSites) + " sites");
  }
  if (quad_points < 8) throw ValidationError("quad_points must be at least 8");
}

void check_enumeration(int range, std::size_t variables, const char* what) {
  if (std::pow(2.0 * range + 1.0, static_cast<double>(variables)) > kMaxEnumeration) {
    throw ValidationError(std::string(what) + " enumeration exceeds 1e8 configurations");
  }
}

struct ClosingBond {
  std::size_t other;
  bool is_space;
};

struct QuadratureSums {
  double weight = 0.0;
  std::vector<double> cos_sums;
};

// Trapezoid sum over the grid with theta_0 pinned to node 0.
QuadratureSums angle_quadrature(const LatticeSpec& spec, const Couplings& c, const KernelTruncation& trunc,
                                int q, std::span<const Separation> seps) {
  check_quadrature(spec, q);
  const std::size_t n = spec.site_count();
  std::vector<double> ks(q), kt(q), cq(q);
  for (int d = 0; d < q; ++d) {
    const double th = kTwoPi * d / q;
    ks[d] = villain_weight(c.z_space(spec.delta()), th, trunc);
    kt[d] = villain_weight(c.z_time(spec.delta()), th, trunc);
    cq[d] = std::cos(th);
  }

  // Each bond is multiplied in when its later endpoint is assigned.
  std::vector<std::vector<ClosingBond>> closing(n);
  for (std::size_t id = 0; id < spec.bond_count(); ++id) {
    const Bond b = spec.bond(id);
    const std::size_t u = spec.index(b.from);
    const std::size_t v = spec.index(b.to);
    const std::size_t hi = std::max(u, v);
    closing[hi].push_back({u == hi ? v : u, b.kind == BondKind::Space});
  }
  std::vector<std::size_t> partner(seps.size());
  for (std::size_t k = 0; k < seps.size(); ++k) partner[k] = spec.index(spec.shifted({0, 0}, seps[k]));

  QuadratureSums sums;
  sums.cos_sums.assign(seps.size(), 0.0);
  std::vector<int> node(n, 0);

  std::function<void(std::size_t, double)> descend = [&](std::size_t site, double w) {
    if (site == n) {
      sums.weight += w;
      for (std::size_t k = 0; k < partner.size(); ++k) {
        sums.cos_sums[k] += w * cq[(node[0] - node[partner[k]] + q) % q];
      }
      return;
    }
    const int last = site == 0 ? 1 : q;
    for (int i = 0; i < last; ++i) {
      node[site] = i;
      double wi = w;
      for (const ClosingBond& cb : closing[site]) {
        const int d = (i - node[cb.other] + q) % q;
        wi *= cb.is_space ? ks[d] : kt[d];
      }
      descend(site + 1, wi);
    }
  };
  descend(0, 1.0);
  return sums;
}

// Spanning tree of the site graph (self-loops never enter the tree).
struct TreeLayout {
  std::vector<std::size_t> free_bonds;
  std::vector<std::size_t> order;        // BFS order, root first
  std::vector<long> parent_bond;         // bond id to the parent, -1 at root
};

TreeLayout spanning_tree(const LatticeSpec& spec) {
  const std::size_t n = spec.site_count();
  TreeLayout tree;
  tree.parent_bond.assign(n, -1);
  std::vector<bool> seen(n, false), in_tree(spec.bond_count(), false);
  std::vector<std::vector<std::size_t>> incident(n);
  for (std::size_t id = 0; id < spec.bond_count(); ++id) {
    const Bond b = spec.bond(id);
    incident[spec.index(b.from)].push_back(id);
    incident[spec.index(b.to)].push_back(id);
  }
  std::queue<std::size_t> frontier;
  frontier.push(0);
  seen[0] = true;
  while (!frontier.empty()) {
    const std::size_t v = frontier.front();
    frontier.pop();
    tree.order.push_back(v);
    for (std::size_t id : incident[v]) {
      const Bond b = spec.bond(id);
      const std::size_t u = spec.index(b.from) == v ? spec.index(b.to) : spec.index(b.from);
      if (seen[u]) continue;
      seen[u] = true;
      in_tree[id] = true;
      tree.parent_bond[u] = static_cast<long>(id);
      frontier.push(u);
    }
  }
  for (std::size_t id = 0; id < spec.bond_count(); ++id) {
    if (!in_tree[id]) tree.free_bonds.push_back(id);
  }
  return tree;
}

// Currents n on every bond of the dual height configuration (see sampler
// header for the geometry; recomputed here from the full field).
void dual_currents(const LatticeSpec& spec, const std::vector<long>& phi, long wx, long wt,
                   std::vector<long>& n) {
  auto at = [&](int y, int t) { return phi[spec.index(spec.canonical(y, t))]; };
  for (int t = 0; t < spec.lt(); ++t) {
    for (int x = 0; x < spec.lx(); ++x) {
      n[spec.space_bond({x, t})] = at(x + 1, t + 1) - at(x + 1, t) + (t == 0 ? wx : 0);
      n[spec.time_bond({x, t})] = at(x, t + 1) - at(x + 1, t + 1) + (x == 0 ? wt : 0);
    }
  }
}

// Visits every truncated (phi, windings) configuration with its weight and currents.
void enumerate_heights(const LatticeSpec& spec, const Couplings& c, int max_height, int max_winding,
                       const std::function<void(const std::vector<long>&, const std::vector<long>&, double)>& visit) {
  if (max_height < 1 || max_winding < 0) throw ValidationError("height truncation must be positive");
  const std::size_t n = spec.site_count();
  check_enumeration(max_height, n - 1, "height");
  if (std::pow(2.0 * max_height + 1.0, static_cast<double>(n - 1)) * std::pow(2.0 * max_winding + 1.0, 2.0) >
      kMaxEnumeration) {
    throw ValidationError("height enumeration exceeds 1e8 configurations");
  }
  const double zs = c.z_space(spec.delta());
  const double zt = c.z_time(spec.delta());
  std::vector<long> phi(n, 0), cur(spec.bond_count(), 0);
  std::vector<long> digits(n - 1, -max_height);
  for (;;) {
    for (std::size_t i = 1; i < n; ++i) phi[i] = digits[i - 1];
    for (long wx = -max_winding; wx <= max_winding; ++wx) {
      for (long wt = -max_winding; wt <= max_winding; ++wt) {
        dual_currents(spec, phi, wx, wt, cur);
        double e = 0.0;
        for (std::size_t id = 0; id < cur.size(); ++id) {
          const double v = static_cast<double>(cur[id]);
          e += v * v / (2.0 * (id % 2 == 0 ? zs : zt));
        }
        visit(phi, cur, std::exp(-e));
      }
    }
    std::size_t k = 0;
    while (k < digits.size() && digits[k] == max_height) digits[k++] = -max_height;
    if (k == digits.size()) break;
    ++digits[k];
  }
}

}  // namespace

double exact_partition_angle(const LatticeSpec& spec, const Couplings& c, const KernelTruncation& trunc,
                             int quad_points) {
  const QuadratureSums s = angle_quadrature(spec, c, trunc, quad_points, {});
  const double h = kTwoPi / quad_points;
  return s.weight * quad_points * std::pow(h, static_cast<double>(spec.site_count()));
}

std::vector<double> exact_two_point_angle(const LatticeSpec& spec, const Couplings& c,
                                          const KernelTruncation& trunc, int quad_points,
                                          std::span<const Separation> separations) {
  const QuadratureSums s = angle_quadrature(spec, c, trunc, quad_points, separations);
  std::vector<double> out(separations.size());
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = s.cos_sums[k] / s.weight;
  return out;
}

double exact_two_point_angle(const LatticeSpec& spec, const Couplings& c, const KernelTruncation& trunc,
                             int quad_points, Separation r) {
  return exact_two_point_angle(spec, c, trunc, quad_points, std::span(&r, 1)).front();
}

std::size_t free_current_count(const LatticeSpec& spec) { return spec.bond_count() - spec.site_count() + 1; }

double exact_partition_current(const LatticeSpec& spec, const Couplings& c, int max_current) {
  if (max_current < 1) throw ValidationError("current truncation K must be at least 1");
  const TreeLayout tree = spanning_tree(spec);
  check_enumeration(max_current, tree.free_bonds.size(), "current");

  const double zs = c.z_space(spec.delta());
  const double zt = c.z_time(spec.delta());
  const int span = 2 * max_current + 1;
  std::vector<double> ws(span), wt(span);
  for (int i = 0; i < span; ++i) {
    const double v = i - max_current;
    ws[i] = std::exp(-v * v / (2.0 * zs));
    wt[i] = std::exp(-v * v / (2.0 * zt));
  }
  auto weight = [&](std::size_t id, long v) { return (id % 2 == 0 ? ws : wt)[v + max_current]; };

  const std::size_t nsite = spec.site_count();
  std::vector<long> n(spec.bond_count(), 0);
  std::vector<long> digits(tree.free_bonds.size(), -max_current);
  double total = 0.0;
  for (;;) {
    for (std::size_t k = 0; k < digits.size(); ++k) n[tree.free_bonds[k]] = digits[k];
    // Net outflow per site from the free bonds; tree bonds fix it leaf-first.
    std::vector<long> outflow(nsite, 0);
    for (std::size_t id : tree.free_bonds) {
      const Bond b = spec.bond(id);
      outflow[spec.index(b.from)] += n[id];
      outflow[spec.index(b.to)] -= n[id];
    }
    bool admissible = true;
    for (std::size_t k = tree.order.size(); k-- > 1;) {
      const std::size_t v = tree.order[k];
      const std::size_t id = static_cast<std::size_t>(tree.parent_bond[v]);
      const Bond b = spec.bond(id);
      // Choose n[id] so the outflow at v vanishes, then pass the flux to the parent.
      const bool v_is_from = spec.index(b.from) == v;
      const long val = v_is_from ? -outflow[v] : outflow[v];
      n[id] = val;
      const std::size_t p = v_is_from ? spec.index(b.to) : spec.index(b.from);
      outflow[v] = 0;
      outflow[p] += v_is_from ? -val : val;
      if (std::abs(val) > max_current) {
        admissible = false;
        break;
      }
    }
    if (admissible) {
      double w = 1.0;
      for (std::size_t id = 0; id < n.size(); ++id) w *= weight(id, n[id]);
      total += w;
    }
    std::size_t k = 0;
    while (k < digits.size() && digits[k] == max_current) digits[k++] = -max_current;
    if (k == digits.size()) break;
    ++digits[k];
  }

  double prefactor = std::pow(kTwoPi, static_cast<double>(nsite));
  prefactor *= std::pow(kTwoPi * zs, -0.5 * static_cast<double>(nsite));
  prefactor *= std::pow(kTwoPi * zt, -0.5 * static_cast<double>(nsite));
  return prefactor * total;
}

double duality_residual(const LatticeSpec& spec, const Couplings& c, const KernelTruncation& trunc,
                        int quad_points, int max_current) {
  const double za = exact_partition_angle(spec, c, trunc, quad_points);
  const double zc = exact_partition_current(spec, c, max_current);
  return std::abs(za - zc) / za;
}

ChargeDensity make_charge_density(const LatticeSpec& spec, double xi, int x) {
  if (x < 1 || x >= spec.lx()) throw ValidationError("charge separation must satisfy 1 <= x < Lx");
  ChargeDensity rho;
  rho.rho.assign(spec.site_count(), 0.0);
  rho.rho[spec.index({0, 0})] += xi;
  rho.rho[spec.index({x, 0})] -= xi;
  rho.xi = xi;
  rho.x_sep = x;
  return rho;
}

double exact_external_charge_correlation(const LatticeSpec& spec, const Couplings& c, int max_charge,
                                         const ChargeDensity& rho) {
  if (rho.rho.size() != spec.site_count()) throw ValidationError("charge density size mismatch");
  double total = 0.0;
  for (double v : rho.rho) total += v;
  if (std::abs(total) > 1e-12) throw ValidationError("external charge density must be neutral");
  if (max_charge < 1) throw ValidationError("charge truncation must be positive");
  const std::size_t n = spec.site_count();
  check_enumeration(max_charge, n - 1, "charge");

  const GreensTable table = build_greens(dual_form(spec, c), GreensMethod::Direct);
  std::vector<double> kernel(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const SiteIndex a = spec.site(i), b = spec.site(j);
      kernel[i * n + j] = table(a.x - b.x, a.t - b.t);
    }
  }
  auto energy = [&](const std::vector<double>& q) {
    double e = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (q[i] == 0.0) continue;
      for (std::size_t j = 0; j < n; ++j) e += q[i] * kernel[i * n + j] * q[j];
    }
    return 0.5 * e;
  };

  std::vector<long> digits(n - 1, -max_charge);
  std::vector<double> q(n), shifted(n);
  double plain = 0.0, with_rho = 0.0;
  for (;;) {
    long last = 0;
    for (long d : digits) last -= d;
    if (std::abs(last) <= max_charge) {
      for (std::size_t i = 0; i + 1 < n; ++i) q[i] = kTwoPi * static_cast<double>(digits[i]);
      q[n - 1] = kTwoPi * static_cast<double>(last);
      for (std::size_t i = 0; i < n; ++i) shifted[i] = q[i] + rho.rho[i];
      plain += std::exp(-energy(q));
      with_rho += std::exp(-energy(shifted));
    }
    std::size_t k = 0;
    while (k < digits.size() && digits[k] == max_charge) digits[k++] = -max_charge;
    if (k == digits.size()) break;
    ++digits[k];
  }
  return with_rho / plain;
}

double exact_disorder(const LatticeSpec& spec, const Couplings& c, int max_height, int max_winding,
                      double xi, int x) {
  if (x < 1 || x >= spec.lx()) throw ValidationError("line length x must satisfy 1 <= x < Lx");
  const double shift = xi * spec.delta();
  const double zs = c.z_space(spec.delta());
  double z = 0.0, num = 0.0;
  enumerate_heights(spec, c, max_height, max_winding,
                    [&](const std::vector<long>&, const std::vector<long>& cur, double w) {
                      double expo = 0.0;
                      for (int y = 1; y <= x; ++y) {
                        const double n = static_cast<double>(cur[spec.space_bond({y - 1, 0})]);
                        expo -= ((n - shift) * (n - shift) - n * n) / (2.0 * zs);
                      }
                      z += w;
                      num += w * std::exp(expo);
                    });
  return num / z;
}

HeightMoments exact_height_moments(const LatticeSpec& spec, const Couplings& c, int max_height,
                                   int max_winding, Separation r) {
  const std::size_t partner = spec.index(spec.shifted({0, 0}, r));
  double z = 0.0, m1 = 0.0, m2 = 0.0;
  enumerate_heights(spec, c, max_height, max_winding,
                    [&](const std::vector<long>& phi, const std::vector<long>&, double w) {
                      const double d = static_cast<double>(phi[0] - phi[partner]);
                      z += w;
                      m1 += w * d;
                      m2 += w * d * d;
                    });
  return {m1 / z, m2 / z};
}

}  // namespace villain
