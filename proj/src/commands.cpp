#include "villain/commands.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

#include "villain/bounds.hpp"
#include "villain/exact.hpp"
#include "villain/greens.hpp"
#include "villain/sampler.hpp"

namespace villain {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

json finite_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json estimate_json(const CorrelationEstimate& e) {
  return {{"mean", e.mean},       {"stderr", e.std_error},
          {"bins", e.bins},       {"jackknife_error", e.jackknife_error},
          {"tau_int", e.tau_int}, {"seed", e.seed}};
}

json header(const char* command, const RunConfig& config) {
  json j;
  j["command"] = command;
  j["params"] = to_json(config);
  j["config_text"] = to_config_text(config);
  j["seed"] = config.seed;
  return j;
}

GreensMethod parse_method(const std::string& m) {
  if (m == "direct") return GreensMethod::Direct;
  if (m == "fft") return GreensMethod::Fft;
  return GreensMethod::Auto;
}

Representation parse_rep(const std::string& r) {
  if (r == "height") return Representation::Height;
  if (r == "gaussian") return Representation::Gaussian;
  return Representation::Angle;
}

void prepare_out_dir(const fs::path& out_dir) {
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec || !fs::is_directory(out_dir)) throw ValidationError("cannot create output directory " + out_dir.string());
}

ChainSpec chain_from(const RunConfig& config) {
  ChainSpec chain;
  chain.spec = build_lattice(config.lx, config.lt, config.delta);
  chain.couplings = make_couplings(config.inertia, config.coupling);
  chain.trunc = make_truncation(config.max_shift, config.tol);
  chain.seed = config.seed;
  chain.thermalization_sweeps = config.therm;
  chain.measurement_sweeps = config.sweeps;
  chain.bin_size = config.bin;
  chain.initial_width = config.width;
  chain.windings = config.windings;
  validate_chain(chain);
  return chain;
}

std::vector<Separation> require_separations(const std::vector<Separation>& seps, const char* key) {
  if (seps.empty()) throw ValidationError(std::string(key) + " must list at least one separation");
  return seps;
}

}  // namespace

void write_atomic(const fs::path& path, const std::string& content) {
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + tmp.string());
    out << content;
    out.flush();
    if (!out) throw std::runtime_error("write failed: " + tmp.string());
  }
  fs::rename(tmp, path);
}

int cmd_greens(const RunConfig& config, const fs::path& out_dir, std::ostream& log) {
  const LatticeSpec spec = build_lattice(config.lx, config.lt, config.delta);
  const Couplings c = make_couplings(config.inertia, config.coupling);
  const QuadraticFormSpec form = config.form == "dual" ? dual_form(spec, c) : primal_form(spec, c);
  if (!(config.fit_min > 0.0) || !(config.fit_max > config.fit_min)) {
    throw ValidationError("fit window must satisfy 0 < fit_min < fit_max");
  }
  const GreensTable table = build_greens(form, parse_method(config.method));

  std::ostringstream csv;
  write_greens_csv(csv, table);

  json summary = header("greens", config);
  summary["form"] = config.form;
  summary["C0"] = table(0, 0);
  summary["max_imaginary"] = table.max_imaginary();
  summary["diff_1_0"] = greens_diff(table, {1, 0});
  const double expected = -1.0 / (kTwoPi * std::sqrt(form.c_space * form.c_time));
  try {
    const SlopeFit fit = fit_asymptotic_slope(table, c, config.fit_min, config.fit_max);
    summary["fit"] = {{"slope", fit.slope},
                      {"intercept", fit.intercept},
                      {"points", fit.points},
                      {"r_min", config.fit_min},
                      {"r_max", config.fit_max},
                      {"expected_slope", expected},
                      {"relative_error", std::abs(fit.slope - expected) / std::abs(expected)}};
  } catch (const ValidationError& e) {
    summary["fit"] = nullptr;
    summary["fit_note"] = e.what();
  }

  prepare_out_dir(out_dir);
  write_atomic(out_dir / "greens.csv", csv.str());
  write_atomic(out_dir / "summary.json", summary.dump(2) + "\n");
  log << "greens: " << spec.site_count() << " sites, C(0) = " << table(0, 0) << "\n";
  return kExitOk;
}

int cmd_sample(const RunConfig& config, const fs::path& out_dir, std::ostream& log) {
  const ChainSpec chain = chain_from(config);
  const Representation rep = parse_rep(config.rep);
  const auto seps = require_separations(config.sample_separations, "[sample] separations");

  std::vector<Observable> observables;
  if (rep == Representation::Height) {
    for (const Separation& s : seps) observables.push_back({ObservableKind::HeightDiffSq, s});
    for (int x : config.sample_x) {
      Observable o;
      o.kind = ObservableKind::Disorder;
      o.xi = config.sample_xi;
      o.x = x;
      observables.push_back(o);
    }
  } else {
    for (const Separation& s : seps) observables.push_back({ObservableKind::CosTwoPoint, s});
    for (const Separation& s : seps) observables.push_back({ObservableKind::SinTwoPoint, s});
  }
  for (const Observable& o : observables) {
    if (o.kind == ObservableKind::Disorder && (o.x < 1 || o.x >= config.lx)) {
      throw ValidationError("[sample] x must satisfy 1 <= x < Lx");
    }
  }
  if (config.bound_check == "mbs" && rep == Representation::Height) {
    throw ValidationError("bound_check = mbs needs an angle or gaussian chain");
  }

  std::ostringstream csv;
  csv << "sweep,observable,value\n";
  std::vector<std::string> names;
  for (const Observable& o : observables) names.push_back(o.name());
  char buf[64];
  const ChainResult result = run_chain(chain, rep, observables, [&](std::size_t sweep, std::size_t obs, double v) {
    std::snprintf(buf, sizeof buf, "%.17g", v);
    csv << sweep << ',' << names[obs] << ',' << buf << '\n';
  });

  json summary = header("sample", config);
  summary["representation"] = to_string(rep);
  summary["acceptance_rate"] = result.acceptance_rate;
  summary["width"] = result.width;
  json results = json::array();
  int exit_code = kExitOk;
  const GreensTable table = build_greens(primal_form(chain.spec, chain.couplings));
  for (std::size_t i = 0; i < observables.size(); ++i) {
    const Observable& o = observables[i];
    json r = estimate_json(result.estimates[i]);
    r["name"] = names[i];
    r["separation"] = {o.separation.dx, o.separation.dt};
    if (rep == Representation::Gaussian && o.kind == ObservableKind::CosTwoPoint) {
      const double exact = std::exp(greens_diff(table, o.separation));
      const double z = (result.estimates[i].mean - exact) / result.estimates[i].std_error;
      r["exact"] = exact;
      r["z"] = finite_or_null(z);
    }
    results.push_back(r);
  }
  summary["results"] = results;

  if (config.bound_check == "mbs") {
    json reports = json::array();
    for (std::size_t i = 0; i < observables.size(); ++i) {
      const Observable& o = observables[i];
      if (o.kind != ObservableKind::CosTwoPoint) continue;
      if (o.separation.dx == 0 && o.separation.dt == 0) continue;
      if (!within_finite_size_window(chain.spec, o.separation)) continue;
      const double bound = mbs_bound(chain.couplings, o.separation.dx, o.separation.dt * config.delta);
      const BoundReport report = check_bound(result.estimates[i], bound, BoundSide::Upper, o.separation);
      if (report.verdict == Verdict::Violated) exit_code = kExitCheckFailed;
      reports.push_back(to_json(report));
    }
    summary["bounds"] = reports;
  }

  prepare_out_dir(out_dir);
  write_atomic(out_dir / "measurements.csv", csv.str());
  write_atomic(out_dir / "summary.json", summary.dump(2) + "\n");
  log << "sample: " << to_string(rep) << " chain, acceptance " << result.acceptance_rate << "\n";
  return exit_code;
}

int cmd_duality_check(const RunConfig& config, const fs::path& out_dir, std::ostream& log) {
  const LatticeSpec spec = build_oracle_lattice(config.lx, config.lt, config.delta);
  const Couplings c = make_couplings(config.inertia, config.coupling);
  const KernelTruncation trunc = make_truncation(config.max_shift, config.tol);
  if (config.quad_points < 4) throw ValidationError("quad_points must be at least 4");
  if (config.max_current < 1) throw ValidationError("K must be at least 1");
  if (spec.site_count() > kMaxQuadratureSites) throw ValidationError("lattice too large for the exact oracle");
  if (config.disorder && (config.oracle_x < 1 || config.oracle_x >= config.lx)) {
    throw ValidationError("[oracle] x must satisfy 1 <= x < Lx");
  }
  const std::size_t free = free_current_count(spec);
  const double leaves_next = std::pow(2.0 * (config.max_current + 1) + 1.0, static_cast<double>(free));

  const double z_angle = exact_partition_angle(spec, c, trunc, config.quad_points);
  const double z_current = exact_partition_current(spec, c, config.max_current);
  const double residual = std::abs(z_angle - z_current) / std::abs(z_angle);

  json summary = header("duality-check", config);
  summary["Z_angle"] = z_angle;
  summary["Z_current"] = z_current;
  summary["residual"] = residual;
  summary["threshold"] = config.threshold;
  summary["free_currents"] = free;
  json warnings = json::array();
  if (leaves_next <= kMaxEnumeration) {
    const double z_next = exact_partition_current(spec, c, config.max_current + 1);
    const double tail = std::abs(z_next - z_current) / std::abs(z_next);
    summary["current_tail_change"] = tail;
    if (tail > config.tail_tol) warnings.push_back("current truncation K not converged within tail_tol");
  } else {
    summary["current_tail_change"] = nullptr;
  }
  if (std::pow(2.0 * config.quad_points, static_cast<double>(spec.site_count() - 1)) <= 1e7) {
    const double z_fine = exact_partition_angle(spec, c, trunc, 2 * config.quad_points);
    summary["quadrature_change"] = std::abs(z_fine - z_angle) / std::abs(z_fine);
  } else {
    summary["quadrature_change"] = nullptr;
  }

  bool pass = residual <= config.threshold;
  if (config.disorder) {
    const double d = exact_disorder(spec, c, config.max_height, config.max_winding, config.oracle_xi, config.oracle_x);
    const double g = exact_two_point_angle(spec, c, trunc, config.quad_points, Separation{config.oracle_x, 0});
    const bool applicable = std::abs(config.oracle_xi * config.delta - 1.0) < 1e-12;
    json dj = {{"xi", config.oracle_xi},
               {"x", config.oracle_x},
               {"disorder", d},
               {"two_point", g},
               {"difference", std::abs(d - g)},
               {"identity_applies", applicable}};
    if (!applicable) warnings.push_back("disorder identity compared only when xi * delta = 1");
    if (applicable && std::abs(d - g) > config.threshold) pass = false;
    summary["disorder"] = dj;
  }
  summary["warnings"] = warnings;
  summary["pass"] = pass;

  prepare_out_dir(out_dir);
  write_atomic(out_dir / "duality.json", summary.dump(2) + "\n");
  log << "duality-check: residual " << residual << (pass ? " (pass)" : " (FAIL)") << "\n";
  for (const auto& w : warnings) log << "warning: " << w.get<std::string>() << "\n";
  return pass ? kExitOk : kExitCheckFailed;
}

int cmd_bounds(const RunConfig& config, const fs::path& out_dir, std::ostream& log) {
  const auto seps = require_separations(config.bound_separations, "[bounds] separations");
  json summary = header("bounds", config);
  summary["source"] = config.source;
  summary["statement_form"] = config.statement_form;
  json reports = json::array();
  bool violated = false;
  auto add = [&](const BoundReport& r, const char* kind, json extra) {
    json j = to_json(r);
    j["bound_kind"] = kind;
    for (auto& [k, v] : extra.items()) j[k] = v;
    if (r.verdict == Verdict::Violated) violated = true;
    reports.push_back(j);
  };

  if (config.source == "exact") {
    const LatticeSpec spec = build_oracle_lattice(config.lx, config.lt, config.delta);
    const Couplings c = make_couplings(config.inertia, config.coupling);
    const KernelTruncation trunc = make_truncation(config.max_shift, config.tol);
    if (spec.site_count() > kMaxQuadratureSites) throw ValidationError("lattice too large for the exact oracle");
    if (config.bound_xi.empty()) throw ValidationError("[bounds] xi must list at least one value");
    const GreensTable primal = build_greens(primal_form(spec, c), GreensMethod::Direct);
    const GreensTable dual = build_greens(dual_form(spec, c), GreensMethod::Direct);

    const std::vector<double> exact = exact_two_point_angle(spec, c, trunc, config.quad_points, seps);
    for (std::size_t i = 0; i < seps.size(); ++i) {
      CorrelationEstimate e;
      e.mean = exact[i];
      json extra = {{"in_window", within_finite_size_window(spec, seps[i])}};
      add(check_bound(e, finite_lattice_mbs_bound(primal, seps[i]), BoundSide::Upper, seps[i]), "finite_lattice_mbs",
          extra);
      if (seps[i].dx != 0 || seps[i].dt != 0) {
        const double tau = seps[i].dt * config.delta;
        extra["power_law_bound"] = mbs_bound(c, seps[i].dx, tau);
        if (config.statement_form) extra["statement_bound"] = mbs_statement_bound(c, seps[i].dx, tau);
        reports.back().update(extra);
      }
    }
    for (double xi : config.bound_xi) {
      const ChargeDensity rho = make_charge_density(spec, xi, config.bound_x);
      CorrelationEstimate e;
      e.mean = exact_external_charge_correlation(spec, c, config.max_current, rho);
      json extra = {{"xi", xi}, {"x", config.bound_x}};
      if (xi != 0.0) extra["asymptotic_exponent"] = jensen_lower_exponent(c, xi);
      add(check_bound(e, finite_lattice_jensen_bound(dual, rho), BoundSide::Lower, {config.bound_x, 0}), "jensen",
          extra);
    }
  } else {
    if (config.input.empty()) throw ValidationError("[bounds] input is required when source = file");
    std::ifstream in(config.input);
    if (!in) throw ValidationError("cannot read bounds input " + config.input);
    json sample;
    try {
      in >> sample;
    } catch (const json::exception& e) {
      throw ValidationError(std::string("bounds input is not valid JSON: ") + e.what());
    }
    if (!sample.contains("config_text") || !sample.contains("results")) {
      throw ValidationError("bounds input is not a sample summary");
    }
    const RunConfig src = parse_config(sample["config_text"].get<std::string>());
    if (src.rep == "height") throw ValidationError("bounds input must come from an angle or gaussian chain");
    const LatticeSpec spec = build_lattice(src.lx, src.lt, src.delta);
    const Couplings c = make_couplings(src.inertia, src.coupling);
    summary["input"] = config.input;
    for (const Separation& s : seps) {
      if (s.dx == 0 && s.dt == 0) throw ValidationError("bounds separation 0:0 is undefined");
      const std::string name = Observable{ObservableKind::CosTwoPoint, s}.name();
      const json* found = nullptr;
      for (const json& r : sample["results"]) {
        if (r.value("name", "") == name) found = &r;
      }
      if (!found) throw ValidationError("bounds input has no estimate for " + name);
      if (!within_finite_size_window(spec, s)) {
        log << "skipping " << name << ": outside the finite-size window\n";
        continue;
      }
      CorrelationEstimate e;
      e.mean = (*found)["mean"].get<double>();
      e.std_error = (*found)["stderr"].get<double>();
      e.bins = (*found)["bins"].get<std::size_t>();
      const double tau = s.dt * src.delta;
      json extra = json::object();
      if (config.statement_form) extra["statement_bound"] = mbs_statement_bound(c, s.dx, tau);
      add(check_bound(e, mbs_bound(c, s.dx, tau), BoundSide::Upper, s), "mbs", extra);
    }
  }
  summary["reports"] = reports;
  summary["any_violated"] = violated;

  prepare_out_dir(out_dir);
  write_atomic(out_dir / "bounds.json", summary.dump(2) + "\n");
  log << "bounds: " << reports.size() << " reports" << (violated ? ", violations found" : "") << "\n";
  return violated ? kExitCheckFailed : kExitOk;
}

int run_command(const std::string& command, const fs::path& config_path, const fs::path& out_dir,
                std::ostream& log) {
  try {
    const RunConfig config = load_config(config_path);
    if (command == "greens") return cmd_greens(config, out_dir, log);
    if (command == "sample") return cmd_sample(config, out_dir, log);
    if (command == "duality-check") return cmd_duality_check(config, out_dir, log);
    if (command == "bounds") return cmd_bounds(config, out_dir, log);
    throw ValidationError("unknown command " + command);
  } catch (const ValidationError& e) {
    log << "error: " << e.what() << "\n";
    return kExitInvalid;
  }
}

}  // namespace villain
