#pragma once

#include "json.hpp"
#include "villain/exact.hpp"
#include "villain/greens.hpp"
#include "villain/lattice.hpp"
#include "villain/statistics.hpp"

namespace villain {

enum class BoundSide { Upper, Lower };
enum class Verdict { Satisfied, Violated, Inconclusive };

/// Margin, in standard errors, required for a "satisfied" verdict.
inline constexpr double kVerdictSigmas = 3.0;

struct BoundReport {
  Separation separation;
  CorrelationEstimate estimate;
  double bound_value = 0.0;
  BoundSide side = BoundSide::Upper;
  Verdict verdict = Verdict::Inconclusive;
  /// (bound - mean)/stderr for upper bounds, (mean - bound)/stderr for lower.
  /// With stderr = 0 this is +inf, 0 or -inf.
  double slack = 0.0;
};

/// Power-law upper bound r~^{-eta}, eta = sqrt(IJ)/(2 pi), r~ = sqrt(dx^2 + (J/I) tau^2).
double mbs_bound(const Couplings& c, double dx, double tau);

/// The exponential form exp(-sqrt(IJ/4pi^2) r~). Kept for comparison output only;
/// nothing asserts it.
double mbs_statement_bound(const Couplings& c, double dx, double tau);

/// Finite-torus complex-translation bound exp(C(r) - C(0)) on the primal table.
double finite_lattice_mbs_bound(const GreensTable& primal_table, Separation r);

/// xi^2 sqrt(IJ) / (2 pi).
double jensen_lower_exponent(const Couplings& c, double xi);

/// exp(-1/2 (rho, C rho)) with C the dual-form table.
double finite_lattice_jensen_bound(const GreensTable& dual_table, const ChargeDensity& rho);

/// Bound comparisons are made only for |dx| <= Lx/4 and |dt| <= Lt/4.
bool within_finite_size_window(const LatticeSpec& spec, Separation r);

BoundReport check_bound(const CorrelationEstimate& estimate, double bound_value, BoundSide side,
                        Separation separation = {});

const char* to_string(BoundSide side);
const char* to_string(Verdict verdict);

/// {separation, mean, stderr, bound, side, verdict, slack}; infinite slack is written as null.
nlohmann::json to_json(const BoundReport& report);

}  // namespace villain
