#pragma once

#include <span>
#include <vector>

#include "villain/lattice.hpp"

namespace villain {

/// Truncation of the shift sum over m (direct form) or the character sum over
/// n (dual form): terms with |m| or |n| > max_shift are dropped. Evaluations
/// check that the provable tail bound stays below tol.
struct KernelTruncation {
  int max_shift = 8;
  double tol = 1e-12;
};

KernelTruncation make_truncation(int max_shift, double tol);

/// Upper bound on the dropped tail of the direct sum for theta in [-pi, pi):
/// 2 exp(-(z/2) (2 pi (M+1) - pi)^2).
double direct_tail_bound(double z, int max_shift);

/// Upper bound on the dropped tail of the character sum.
double dual_tail_bound(double z, int max_shift);

/// Periodised Gaussian sum_{|m|<=M} exp(-(z/2)(theta + 2 pi m)^2).
/// theta is reduced to [-pi, pi) first, so the result is exactly 2pi-periodic.
double villain_kernel(double z, double theta, const KernelTruncation& trunc);

/// Character expansion (2 pi z)^{-1/2} sum_{|n|<=M} exp(-n^2/(2z)) cos(n theta).
double villain_kernel_dual(double z, double theta, const KernelTruncation& trunc);

/// Below this stiffness the character sum converges faster than the shift sum.
inline constexpr double kKernelSwitch = 1.0 / kTwoPi;

/// Kernel value using whichever representation converges faster for z.
double villain_weight(double z, double theta, const KernelTruncation& trunc);

/// log v_z(theta), stable for large z where v itself underflows.
double villain_log_kernel(double z, double theta, const KernelTruncation& trunc);

/// Angle field theta(x, t), stored canonicalised to [-pi, pi) in lattice index order.
class AngleConfig {
 public:
  explicit AngleConfig(const LatticeSpec& spec, double value = 0.0);
  AngleConfig(const LatticeSpec& spec, std::vector<double> values);

  int lx() const { return lx_; }
  int lt() const { return lt_; }
  std::size_t size() const { return theta_.size(); }

  double operator[](std::size_t i) const { return theta_[i]; }
  double at(const LatticeSpec& spec, SiteIndex s) const { return theta_[spec.index(s)]; }
  void set(std::size_t i, double value) { theta_[i] = canonical_angle(value); }
  std::span<const double> values() const { return theta_; }

  bool matches(const LatticeSpec& spec) const { return spec.lx() == lx_ && spec.lt() == lt_; }

 private:
  int lx_;
  int lt_;
  std::vector<double> theta_;
};

/// Bond difference theta(from) - theta(to).
inline double bond_difference(const AngleConfig& cfg, const LatticeSpec& spec, const Bond& b) {
  return cfg.at(spec, b.from) - cfg.at(spec, b.to);
}

/// Logarithm of the Villain Gibbs weight with both integer shift fields summed
/// bond by bond: sum over bonds of ln v_{z_b}(dtheta_b), z = delta*J on spatial
/// and I/delta on temporal bonds.
double villain_log_weight(const AngleConfig& config, const LatticeSpec& spec, const Couplings& c,
                          const KernelTruncation& trunc);

/// Pre-Villain action for comparison runs: Gaussian (principal branch) on temporal
/// bonds and -(delta J/2) cos(dtheta) on spatial bonds, with the sign as printed.
double cosine_log_weight(const AngleConfig& config, const LatticeSpec& spec, const Couplings& c);

}  // namespace villain
