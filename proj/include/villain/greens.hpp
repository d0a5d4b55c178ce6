#pragma once

#include <iosfwd>
#include <span>
#include <vector>

#include "villain/lattice.hpp"

namespace villain {

/// -Delta = c_space d1* d1 + c_time d_delta* d_delta on the torus, where
/// d_delta f(x,t) = (f(x,t+1) - f(x,t)) / delta.
struct QuadraticFormSpec {
  double c_space = 1.0;
  double c_time = 1.0;
  LatticeSpec spec;
};

QuadraticFormSpec make_form(double c_space, double c_time, const LatticeSpec& spec);
/// Angle-representation form: c_space = J, c_time = I.
QuadraticFormSpec primal_form(const LatticeSpec& spec, const Couplings& c);
/// Height/charge-representation form: c_space = 1/I, c_time = 1/J.
QuadraticFormSpec dual_form(const LatticeSpec& spec, const Couplings& c);

bool same_form(const QuadraticFormSpec& a, const QuadraticFormSpec& b);

/// Fourier symbol of -Delta at momentum indices (k, l).
double form_symbol(const QuadraticFormSpec& form, int k, int l);

enum class GreensMethod { Auto, Direct, Fft };

/// Sites at or above this count use the FFT path under GreensMethod::Auto.
inline constexpr std::size_t kFftThreshold = 1024;

/// Tabulated C(x,t), the kernel of (delta * (-Delta))^{-1} with the zero mode
/// removed:
///
///   C(x,t) = 1/(Lx beta) sum_{(k,l) != 0} exp(i(p x + q t delta)) / symbol(k,l)
///
/// Only differences C(r) - C(0) carry physical meaning.
class GreensTable {
 public:
  GreensTable(QuadraticFormSpec form, std::vector<double> values, double max_imag);

  const QuadraticFormSpec& form() const { return form_; }
  const LatticeSpec& spec() const { return form_.spec; }

  /// Periodic lookup.
  double operator()(int x, int t) const {
    const SiteIndex s = form_.spec.canonical(x, t);
    return values_[form_.spec.index(s)];
  }
  double operator()(Separation r) const { return (*this)(r.dx, r.dt); }
  std::span<const double> values() const { return values_; }

  /// Largest imaginary residue seen during construction (zero on the direct path).
  double max_imaginary() const { return max_imag_; }

 private:
  QuadraticFormSpec form_;
  std::vector<double> values_;
  double max_imag_;
};

GreensTable build_greens(const QuadraticFormSpec& form, GreensMethod method = GreensMethod::Auto);

/// C(r) - C(0,0); never positive.
double greens_diff(const GreensTable& table, Separation r);

/// sqrt(dx^2 + (J/I) tau^2) with tau measured in time units.
double anisotropic_distance(const Couplings& c, double dx, double tau);

/// Large-distance form -(1/(2 pi sqrt(IJ))) ln r~ (no additive constant).
double asymptotic_diff(const Couplings& c, double dx, double tau);

struct SlopeFit {
  double slope = 0.0;
  double intercept = 0.0;
  std::size_t points = 0;
};

/// Least-squares fit of greens_diff against ln r~ over every separation in the
/// half-torus with r~ in [r_min, r_max]. Time separations are converted to
/// time units (dt * delta) before forming r~.
SlopeFit fit_asymptotic_slope(const GreensTable& table, const Couplings& c, double r_min,
                              double r_max);

/// Real field on the lattice (shift fields, indicator lines, sources).
class ShiftField {
 public:
  explicit ShiftField(const LatticeSpec& spec, double value = 0.0)
      : spec_(spec), values_(spec.site_count(), value) {}

  const LatticeSpec& spec() const { return spec_; }
  double operator[](std::size_t i) const { return values_[i]; }
  double& operator[](std::size_t i) { return values_[i]; }
  double at(SiteIndex s) const { return values_[spec_.index(s)]; }
  double at(int x, int t) const { return at(spec_.canonical(x, t)); }
  std::span<const double> values() const { return values_; }
  double sum() const;

 private:
  LatticeSpec spec_;
  std::vector<double> values_;
};

/// a(z) = C(z - src) - C(z - snk).
ShiftField thm1_shift_field(const GreensTable& table, SiteIndex src, SiteIndex snk);

/// (-Delta) a.
ShiftField apply_form(const ShiftField& a, const QuadraticFormSpec& form);

/// (delta/2) sum [c_space (d1 a)^2 + c_time (d_delta a)^2] = (delta/2)(a, -Delta a).
double quadratic_form_energy(const ShiftField& a, const QuadraticFormSpec& form);

/// d_delta f(y,t) = (f(y,t+1) - f(y,t)) / delta.
ShiftField time_derivative(const ShiftField& f);

/// Indicator of the spatial bonds crossed by a straight line of length x at
/// t = 0: f(y, 0) = 1 for 1 <= y <= x, zero elsewhere.
ShiftField heaviside_line(const LatticeSpec& spec, int x);

/// sigma = (xi/J) (-Delta)^{-1} d_delta f^x, with (-Delta)^{-1} = delta * C for
/// the dual-form table. Odd under the time reflection t -> -1 - t.
ShiftField sigma_field(const GreensTable& table, const Couplings& c, double xi, int x);

/// g(x) = -(delta xi^2 / (I J)) (C(0,0) - C(x,0)) on the dual-form table.
double gaussian_contribution(const GreensTable& table, const Couplings& c, const LatticeSpec& spec,
                             double xi, int x);

/// Log of the disorder-operator expectation in the non-compact Gaussian height
/// measure, from completing the square directly:
///   -(delta xi^2 / 2J) x + (delta^2 xi^2 / 2J^2) (d_delta f, C d_delta f).
double disorder_gaussian_exponent(const GreensTable& table, const Couplings& c, double xi, int x);

/// CSV dump, header `x,t,C`, 17 significant digits.
void write_greens_csv(std::ostream& out, const GreensTable& table);

}  // namespace villain
