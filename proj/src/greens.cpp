#include "villain/greens.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <memory>
#include <ostream>

namespace villain {

namespace {

// cos(2 pi k x / n) with k*x reduced mod n first.
std::vector<double> cos_table(int n) {
  std::vector<double> c(n);
  for (int j = 0; j < n; ++j) c[j] = std::cos(kTwoPi * j / n);
  return c;
}

void check_dual_table(const GreensTable& table, const Couplings& c) {
  if (!same_form(table.form(), dual_form(table.spec(), c))) {
    throw ValidationError("table must be built with the dual form (1/I, 1/J) of these couplings");
  }
}

void check_line(const LatticeSpec& spec, int x) {
  if (x < 1 || x >= spec.lx()) throw ValidationError("line length x must satisfy 1 <= x < Lx");
}

std::vector<double> build_direct(const QuadraticFormSpec& form) {
  const LatticeSpec& spec = form.spec;
  const int lx = spec.lx();
  const int lt = spec.lt();
  const auto cx = cos_table(lx);
  const auto ct = cos_table(lt);

  // Stage 1: partial[k][t] = sum_l cos(2 pi l t / Lt) / symbol(k, l).
  std::vector<double> partial(static_cast<std::size_t>(lx) * lt, 0.0);
  for (int k = 0; k < lx; ++k) {
    for (int t = 0; t < lt; ++t) {
      double s = 0.0;
      for (int l = 0; l < lt; ++l) {
        if (k == 0 && l == 0) continue;
        s += ct[(static_cast<long>(l) * t) % lt] / form_symbol(form, k, l);
      }
      partial[static_cast<std::size_t>(k) * lt + t] = s;
    }
  }
  // Stage 2: C(x,t) = 1/(N delta) sum_k cos(2 pi k x / Lx) partial[k][t].
  const double norm = 1.0 / (static_cast<double>(spec.site_count()) * spec.delta());
  std::vector<double> values(spec.site_count());
  for (int t = 0; t < lt; ++t) {
    for (int x = 0; x < lx; ++x) {
      double s = 0.0;
      for (int k = 0; k < lx; ++k) {
        s += cx[(static_cast<long>(k) * x) % lx] * partial[static_cast<std::size_t>(k) * lt + t];
      }
      values[spec.index({x, t})] = s * norm;
    }
  }
  return values;
}

struct FftwFree {
  void operator()(fftw_complex* p) const { fftw_free(p); }
};

std::vector<double> build_fft(const QuadraticFormSpec& form, double& max_imag) {
  const LatticeSpec& spec = form.spec;
  const int lx = spec.lx();
  const int lt = spec.lt();
  const std::size_t n = spec.site_count();
  std::unique_ptr<fftw_complex[], FftwFree> buf(fftw_alloc_complex(n));

  // Row-major (Lt, Lx) matches the lattice index t * Lx + x.
  fftw_plan plan = fftw_plan_dft_2d(lt, lx, buf.get(), buf.get(), FFTW_BACKWARD, FFTW_ESTIMATE);
  for (int l = 0; l < lt; ++l) {
    for (int k = 0; k < lx; ++k) {
      const std::size_t i = static_cast<std::size_t>(l) * lx + k;
      buf[i][0] = (k == 0 && l == 0) ? 0.0 : 1.0 / form_symbol(form, k, l);
      buf[i][1] = 0.0;
    }
  }
  fftw_execute(plan);
  fftw_destroy_plan(plan);

  const double norm = 1.0 / (static_cast<double>(n) * spec.delta());
  std::vector<double> values(n);
  max_imag = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    values[i] = buf[i][0] * norm;
    max_imag = std::max(max_imag, std::abs(buf[i][1] * norm));
  }
  return values;
}

}  // namespace

QuadraticFormSpec make_form(double c_space, double c_time, const LatticeSpec& spec) {
  if (!(c_space > 0.0) || !(c_time > 0.0)) {
    throw ValidationError("quadratic form coefficients must be positive");
  }
  return {c_space, c_time, spec};
}

QuadraticFormSpec primal_form(const LatticeSpec& spec, const Couplings& c) {
  return make_form(c.coupling, c.inertia, spec);
}

QuadraticFormSpec dual_form(const LatticeSpec& spec, const Couplings& c) {
  return make_form(1.0 / c.inertia, 1.0 / c.coupling, spec);
}

bool same_form(const QuadraticFormSpec& a, const QuadraticFormSpec& b) {
  auto close = [](double u, double v) { return std::abs(u - v) <= 1e-14 * std::max(std::abs(u), std::abs(v)); };
  return a.spec == b.spec && close(a.c_space, b.c_space) && close(a.c_time, b.c_time);
}

double form_symbol(const QuadraticFormSpec& form, int k, int l) {
  const double p = kTwoPi * k / form.spec.lx();
  const double qd = kTwoPi * l / form.spec.lt();
  const double d = form.spec.delta();
  return form.c_space * (2.0 - 2.0 * std::cos(p)) + form.c_time / (d * d) * (2.0 - 2.0 * std::cos(qd));
}

GreensTable::GreensTable(QuadraticFormSpec form, std::vector<double> values, double max_imag)
    : form_(std::move(form)), values_(std::move(values)), max_imag_(max_imag) {
  if (values_.size() != form_.spec.site_count()) {
    throw ValidationError("Green's table size does not match the lattice");
  }
}

GreensTable build_greens(const QuadraticFormSpec& form, GreensMethod method) {
  make_form(form.c_space, form.c_time, form.spec);
  if (method == GreensMethod::Auto) {
    method = form.spec.site_count() >= kFftThreshold ? GreensMethod::Fft : GreensMethod::Direct;
  }
  if (method == GreensMethod::Direct) return GreensTable(form, build_direct(form), 0.0);
  double max_imag = 0.0;
  auto values = build_fft(form, max_imag);
  return GreensTable(form, std::move(values), max_imag);
}

double greens_diff(const GreensTable& table, Separation r) {
  if (r.dx == 0 && r.dt == 0) return 0.0;
  return table(r) - table(0, 0);
}

double anisotropic_distance(const Couplings& c, double dx, double tau) {
  return std::sqrt(dx * dx + (c.coupling / c.inertia) * tau * tau);
}

double asymptotic_diff(const Couplings& c, double dx, double tau) {
  if (dx == 0.0 && tau == 0.0) throw ValidationError("asymptotic form is singular at r = 0");
  return -std::log(anisotropic_distance(c, dx, tau)) / (kTwoPi * std::sqrt(c.inertia * c.coupling));
}

SlopeFit fit_asymptotic_slope(const GreensTable& table, const Couplings& c, double r_min,
                              double r_max) {
  const LatticeSpec& spec = table.spec();
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  std::size_t n = 0;
  for (int dt = 0; dt <= spec.lt() / 2; ++dt) {
    for (int dx = 0; dx <= spec.lx() / 2; ++dx) {
      const double r = anisotropic_distance(c, dx, dt * spec.delta());
      if (r < r_min || r > r_max) continue;
      const double u = std::log(r);
      const double v = greens_diff(table, {dx, dt});
      sx += u;
      sy += v;
      sxx += u * u;
      sxy += u * v;
      ++n;
    }
  }
  if (n < 2) throw ValidationError("fewer than two separations inside the fit window");
  const double nn = static_cast<double>(n);
  SlopeFit fit;
  fit.points = n;
  fit.slope = (nn * sxy - sx * sy) / (nn * sxx - sx * sx);
  fit.intercept = (sy - fit.slope * sx) / nn;
  return fit;
}

double ShiftField::sum() const {
  double s = 0.0;
  for (double v : values_) s += v;
  return s;
}

ShiftField thm1_shift_field(const GreensTable& table, SiteIndex src, SiteIndex snk) {
  if (src == snk) throw ValidationError("source and sink must differ");
  const LatticeSpec& spec = table.spec();
  ShiftField a(spec);
  for (std::size_t i = 0; i < spec.site_count(); ++i) {
    const SiteIndex z = spec.site(i);
    a[i] = table(z.x - src.x, z.t - src.t) - table(z.x - snk.x, z.t - snk.t);
  }
  return a;
}

ShiftField apply_form(const ShiftField& a, const QuadraticFormSpec& form) {
  const LatticeSpec& spec = form.spec;
  if (!(a.spec() == spec)) throw ValidationError("field and form live on different lattices");
  const double ct = form.c_time / (spec.delta() * spec.delta());
  ShiftField out(spec);
  for (std::size_t i = 0; i < spec.site_count(); ++i) {
    const SiteIndex s = spec.site(i);
    const double v = a[i];
    out[i] = form.c_space * (2.0 * v - a.at(s.x + 1, s.t) - a.at(s.x - 1, s.t)) +
             ct * (2.0 * v - a.at(s.x, s.t + 1) - a.at(s.x, s.t - 1));
  }
  return out;
}

double quadratic_form_energy(const ShiftField& a, const QuadraticFormSpec& form) {
  const LatticeSpec& spec = form.spec;
  if (!(a.spec() == spec)) throw ValidationError("field and form live on different lattices");
  const double d = spec.delta();
  double total = 0.0;
  for (std::size_t i = 0; i < spec.site_count(); ++i) {
    const SiteIndex s = spec.site(i);
    const double gx = a.at(s.x + 1, s.t) - a[i];
    const double gt = (a.at(s.x, s.t + 1) - a[i]) / d;
    total += form.c_space * gx * gx + form.c_time * gt * gt;
  }
  return 0.5 * d * total;
}

ShiftField time_derivative(const ShiftField& f) {
  const LatticeSpec& spec = f.spec();
  ShiftField out(spec);
  for (std::size_t i = 0; i < spec.site_count(); ++i) {
    const SiteIndex s = spec.site(i);
    out[i] = (f.at(s.x, s.t + 1) - f[i]) / spec.delta();
  }
  return out;
}

ShiftField heaviside_line(const LatticeSpec& spec, int x) {
  check_line(spec, x);
  ShiftField f(spec);
  for (int y = 1; y <= x; ++y) f[spec.index({y, 0})] = 1.0;
  return f;
}

ShiftField sigma_field(const GreensTable& table, const Couplings& c, double xi, int x) {
  check_dual_table(table, c);
  const LatticeSpec& spec = table.spec();
  const ShiftField source = time_derivative(heaviside_line(spec, x));
  const double scale = xi / c.coupling * spec.delta();
  ShiftField sigma(spec);
  for (std::size_t j = 0; j < spec.site_count(); ++j) {
    if (source[j] == 0.0) continue;
    const SiteIndex zsrc = spec.site(j);
    for (std::size_t i = 0; i < spec.site_count(); ++i) {
      const SiteIndex y = spec.site(i);
      sigma[i] += scale * table(y.x - zsrc.x, y.t - zsrc.t) * source[j];
    }
  }
  return sigma;
}

double gaussian_contribution(const GreensTable& table, const Couplings& c, const LatticeSpec& spec,
                             double xi, int x) {
  check_dual_table(table, c);
  if (!(table.spec() == spec)) throw ValidationError("table and lattice disagree");
  check_line(spec, x);
  return -(spec.delta() * xi * xi / (c.inertia * c.coupling)) * (table(0, 0) - table(x, 0));
}

double disorder_gaussian_exponent(const GreensTable& table, const Couplings& c, double xi, int x) {
  check_dual_table(table, c);
  const LatticeSpec& spec = table.spec();
  const ShiftField g = time_derivative(heaviside_line(spec, x));
  double quad = 0.0;
  for (std::size_t i = 0; i < spec.site_count(); ++i) {
    if (g[i] == 0.0) continue;
    const SiteIndex a = spec.site(i);
    for (std::size_t j = 0; j < spec.site_count(); ++j) {
      if (g[j] == 0.0) continue;
      const SiteIndex b = spec.site(j);
      quad += g[i] * table(a.x - b.x, a.t - b.t) * g[j];
    }
  }
  const double d = spec.delta();
  const double j = c.coupling;
  return -(d * xi * xi / (2.0 * j)) * x + (d * d * xi * xi / (2.0 * j * j)) * quad;
}

void write_greens_csv(std::ostream& out, const GreensTable& table) {
  const LatticeSpec& spec = table.spec();
  out << "x,t,C\n";
  char buf[64];
  for (int x = 0; x < spec.lx(); ++x) {
    for (int t = 0; t < spec.lt(); ++t) {
      std::snprintf(buf, sizeof buf, "%.17g", table(x, t));
      out << x << ',' << t << ',' << buf << '\n';
    }
  }
}

}  // namespace villain
