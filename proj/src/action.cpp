#include "villain/action.hpp"

#include <cmath>
#include <string>

namespace villain {

namespace {

void check_z(double z) {
  if (!(z > 0.0) || !std::isfinite(z)) throw ValidationError("kernel stiffness z must be positive");
}

void check_direct(double z, const KernelTruncation& trunc) {
  if (direct_tail_bound(z, trunc.max_shift) > trunc.tol) {
    throw ValidationError("direct Villain sum with M=" + std::to_string(trunc.max_shift) +
                          " cannot reach tol at z=" + std::to_string(z));
  }
}

void check_dual(double z, const KernelTruncation& trunc) {
  if (dual_tail_bound(z, trunc.max_shift) > trunc.tol) {
    throw ValidationError("character sum with M=" + std::to_string(trunc.max_shift) +
                          " cannot reach tol at z=" + std::to_string(z));
  }
}

// sum_{m != 0} exp(-(z/2)[(th + 2 pi m)^2 - th^2]) for th in [-pi, pi).
double direct_excess(double z, double th, int max_shift) {
  double sum = 0.0;
  for (int m = 1; m <= max_shift; ++m) {
    const double a = th + kTwoPi * m;
    const double b = th - kTwoPi * m;
    const double tp = std::exp(-0.5 * z * (a * a - th * th));
    const double tm = std::exp(-0.5 * z * (b * b - th * th));
    sum += tp + tm;
    if (tp + tm < 1e-18 * (1.0 + sum)) break;
  }
  return sum;
}

double dual_sum(double z, double th, int max_shift) {
  double sum = 1.0;
  for (int n = 1; n <= max_shift; ++n) {
    const double w = std::exp(-0.5 * n * n / z);
    sum += 2.0 * w * std::cos(n * th);
    if (w < 1e-18) break;
  }
  return sum / std::sqrt(kTwoPi * z);
}

}  // namespace

KernelTruncation make_truncation(int max_shift, double tol) {
  if (max_shift < 1) throw ValidationError("max_shift must be at least 1");
  if (!(tol > 0.0)) throw ValidationError("truncation tol must be positive");
  return {max_shift, tol};
}

double direct_tail_bound(double z, int max_shift) {
  const double gap = kTwoPi * (max_shift + 1) - kPi;
  return 2.0 * std::exp(-0.5 * z * gap * gap);
}

double dual_tail_bound(double z, int max_shift) {
  const double n = max_shift + 1.0;
  // Geometric majorant of sum_{k>=n} exp(-k^2/2z).
  const double ratio = std::exp(-(2.0 * n + 1.0) / (2.0 * z));
  return 2.0 * std::exp(-n * n / (2.0 * z)) / (1.0 - ratio) / std::sqrt(kTwoPi * z);
}

double villain_kernel(double z, double theta, const KernelTruncation& trunc) {
  check_z(z);
  check_direct(z, trunc);
  const double th = canonical_angle(theta);
  return std::exp(-0.5 * z * th * th) * (1.0 + direct_excess(z, th, trunc.max_shift));
}

double villain_kernel_dual(double z, double theta, const KernelTruncation& trunc) {
  check_z(z);
  check_dual(z, trunc);
  return dual_sum(z, canonical_angle(theta), trunc.max_shift);
}

double villain_weight(double z, double theta, const KernelTruncation& trunc) {
  return z >= kKernelSwitch ? villain_kernel(z, theta, trunc) : villain_kernel_dual(z, theta, trunc);
}

double villain_log_kernel(double z, double theta, const KernelTruncation& trunc) {
  if (z < kKernelSwitch) return std::log(villain_kernel_dual(z, theta, trunc));
  check_z(z);
  check_direct(z, trunc);
  const double th = canonical_angle(theta);
  return -0.5 * z * th * th + std::log1p(direct_excess(z, th, trunc.max_shift));
}

AngleConfig::AngleConfig(const LatticeSpec& spec, double value)
    : lx_(spec.lx()), lt_(spec.lt()), theta_(spec.site_count(), canonical_angle(value)) {}

AngleConfig::AngleConfig(const LatticeSpec& spec, std::vector<double> values)
    : lx_(spec.lx()), lt_(spec.lt()), theta_(std::move(values)) {
  if (theta_.size() != spec.site_count()) {
    throw ValidationError("angle configuration size does not match the lattice");
  }
  for (double& v : theta_) v = canonical_angle(v);
}

double villain_log_weight(const AngleConfig& config, const LatticeSpec& spec, const Couplings& c,
                          const KernelTruncation& trunc) {
  if (!config.matches(spec)) throw ValidationError("configuration is not defined on this lattice");
  const double zs = c.z_space(spec.delta());
  const double zt = c.z_time(spec.delta());
  double total = 0.0;
  for (std::size_t id = 0; id < spec.bond_count(); ++id) {
    const Bond b = spec.bond(id);
    const double z = b.kind == BondKind::Space ? zs : zt;
    total += villain_log_kernel(z, bond_difference(config, spec, b), trunc);
  }
  return total;
}

double cosine_log_weight(const AngleConfig& config, const LatticeSpec& spec, const Couplings& c) {
  if (!config.matches(spec)) throw ValidationError("configuration is not defined on this lattice");
  const double temporal = c.inertia / (2.0 * spec.delta());
  const double spatial = spec.delta() * c.coupling / 2.0;
  double total = 0.0;
  for (std::size_t id = 0; id < spec.bond_count(); ++id) {
    const Bond b = spec.bond(id);
    const double d = bond_difference(config, spec, b);
    if (b.kind == BondKind::Time) {
      const double principal = canonical_angle(d);
      total -= temporal * principal * principal;
    } else {
      total -= spatial * std::cos(d);
    }
  }
  return total;
}

}  // namespace villain
