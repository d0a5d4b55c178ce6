#pragma once

#include <span>
#include <vector>

#include "villain/action.hpp"
#include "villain/lattice.hpp"

namespace villain {

/// Largest lattice the angle quadrature accepts.
inline constexpr std::size_t kMaxQuadratureSites = 6;
/// Largest enumeration (2K+1)^free_variables any oracle will attempt.
inline constexpr double kMaxEnumeration = 1e8;

/// Z = int_{[-pi,pi]^N} prod_b v_{z_b}(dtheta_b) dtheta, by the uniform
/// trapezoid rule with quad_points nodes per angle (spectrally accurate for
/// this smooth periodic integrand). One angle is fixed by global rotation
/// invariance, which is exact on the uniform grid.
double exact_partition_angle(const LatticeSpec& spec, const Couplings& c, const KernelTruncation& trunc,
                             int quad_points);

/// <cos(theta(0,0) - theta(r))> for each separation, from the same quadrature.
std::vector<double> exact_two_point_angle(const LatticeSpec& spec, const Couplings& c,
                                          const KernelTruncation& trunc, int quad_points,
                                          std::span<const Separation> separations);

double exact_two_point_angle(const LatticeSpec& spec, const Couplings& c, const KernelTruncation& trunc,
                             int quad_points, Separation r);

/// Number of independent bond currents once the divergence constraint is
/// solved on a spanning tree: bonds - sites + 1.
std::size_t free_current_count(const LatticeSpec& spec);

/// Z_current = (2 pi)^N prod_b (2 pi z_b)^{-1/2} sum_{div n = 0, |n_b| <= K} prod_b exp(-n_b^2 / (2 z_b)).
double exact_partition_current(const LatticeSpec& spec, const Couplings& c, int max_current);

/// |Z_angle - Z_current| / Z_angle.
double duality_residual(const LatticeSpec& spec, const Couplings& c, const KernelTruncation& trunc,
                        int quad_points, int max_current);

/// Two external charges: +xi at the origin, -xi at (x, 0).
struct ChargeDensity {
  std::vector<double> rho;
  double xi = 0.0;
  int x_sep = 1;
};

ChargeDensity make_charge_density(const LatticeSpec& spec, double xi, int x);

/// Ratio of shifted to unshifted sums of exp(-1/2 (q + rho, C (q + rho))) over
/// neutral q in 2 pi Z^N with |q/2pi| <= K, C the dual-form Green's table.
double exact_external_charge_correlation(const LatticeSpec& spec, const Couplings& c, int max_charge,
                                         const ChargeDensity& rho);

/// Expectation of the disorder operator in the dual height ensemble, by
/// enumeration of heights (phi(0,0) pinned to 0, |phi| <= max_height) and both
/// winding numbers (|w| <= max_winding). With max_winding = 0 only the
/// single-valued height sector is summed.
double exact_disorder(const LatticeSpec& spec, const Couplings& c, int max_height, int max_winding,
                      double xi, int x);

struct HeightMoments {
  double mean_diff = 0.0;     ///< <phi(0,0) - phi(r)>
  double mean_diff_sq = 0.0;  ///< <(phi(0,0) - phi(r))^2>
};

HeightMoments exact_height_moments(const LatticeSpec& spec, const Couplings& c, int max_height,
                                   int max_winding, Separation r);

}  // namespace villain
