#include "singreg/cli.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <numbers>

#include "singreg/analysis.hpp"
#include "singreg/error.hpp"
#include "singreg/evolution.hpp"
#include "singreg/fracint.hpp"
#include "singreg/kernels.hpp"
#include "singreg/parallel.hpp"
#include "singreg/special.hpp"
#include "singreg/volterra.hpp"

namespace singreg::cli {

namespace {

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

class Csv {
 public:
  Csv(const std::filesystem::path& path, std::initializer_list<const char*> header) : out_(path) {
    if (!out_) throw ConfigError("cannot write '" + path.string() + "'");
    bool first = true;
    for (const char* h : header) out_ << (first ? "" : ",") << h, first = false;
    out_ << '\n';
  }
  template <class... T>
  void row(const T&... cells) {
    bool first = true;
    ((out_ << (first ? "" : ",") << cell(cells), first = false), ...);
    out_ << '\n';
  }

 private:
  static std::string cell(double v) { return fmt(v); }
  static std::string cell(const std::string& s) { return s; }
  static std::string cell(const char* s) { return s; }
  std::ofstream out_;
};

class Timer {
 public:
  double lap() {
    const auto now = std::chrono::steady_clock::now();
    const double s = std::chrono::duration<double>(now - last_).count();
    last_ = now;
    return s;
  }

 private:
  std::chrono::steady_clock::time_point last_ = std::chrono::steady_clock::now();
};

ScaleLaw scale_of(const MollifierConfig& m) {
  if (m.scale == "log") return ScaleLaw::log();
  if (m.scale == "loglog") return ScaleLaw::loglog();
  return ScaleLaw::power(m.gamma);
}

MollifierSpec mollifier_of(const MollifierConfig& m, int dim, double amplitude) {
  MollifierSpec s;
  s.profile = m.profile == "bump" ? ProfileKind::Bump : ProfileKind::MomentVanishing;
  s.scale = scale_of(m);
  s.amplitude_exponent = amplitude;
  s.dim = dim;
  return s;
}

NonlinearitySpec nonlinearity_of(const std::string& model, double gamma, double b, double c,
                                 const ScaleLaw& scale, bool override_guard) {
  NonlinearitySpec s;
  if (model == "linear") s.model = NonlinearityModel::Linear;
  else if (model == "power") s.model = NonlinearityModel::PowerLaw;
  else if (model == "sqrt") s.model = NonlinearityModel::SqrtAbs;
  else if (model == "step") s.model = NonlinearityModel::PiecewiseStep;
  else if (model == "quadratic") s.model = NonlinearityModel::Quadratic;
  else if (model == "extremal") s.model = NonlinearityModel::Extremal;
  else throw ConfigError("unknown nonlinearity model '" + model + "'");
  s.gamma = gamma;
  s.b = b;
  s.coefficient = c;
  s.scale = scale;
  s.override_guard = override_guard;
  return s;
}

// Cut-off exponent seen by the Gronwall envelope: linear maps have a fixed Lipschitz constant.
double lipschitz_exponent(const std::string& model, double b) {
  return (model == "none" || model == "zero" || model == "linear") ? 0.0 : b;
}

SweepTable to_table(const BoundTable& t) {
  SweepTable s;
  for (const auto& r : t) s.push_back({r.eps, r.value});
  return s;
}

double max_over_min(const SweepTable& t) {
  double lo = kInf, hi = 0.0;
  for (const auto& r : t) lo = std::min(lo, r.value), hi = std::max(hi, r.value);
  return hi / lo;
}

void write_table(const std::filesystem::path& path, const SweepTable& t, const char* column) {
  Csv csv(path, {"eps", column});
  for (const auto& r : t) csv.row(r.eps, r.value);
}

Check envelope_entry(const std::string& name, const SweepTable& t, const Envelope& env, bool expect_fail,
                     double runtime) {
  const EnvelopeVerdict v = envelope_check(t, env);
  return {name, expect_fail ? !v.pass : v.pass, v.max_ratio, 1.0, runtime};
}

Check zero_entry(const std::string& name, const SweepTable& t, double runtime) {
  double worst = 0.0;
  for (const auto& r : t) worst = std::max(worst, std::abs(r.value));
  return {name, worst == 0.0, worst, 0.0, runtime};
}

Check negligible_entry(const std::string& name, const SweepTable& t, double runtime) {
  const FamilyVerdict v = classify_family(t, {});
  const GrowthFit f = fit_growth(t);
  return {name, v.kind == FamilyClass::Negligible, f.exponent, -1.0, runtime};
}

bool overrides(const RunConfig& cfg, const Options& opt) { return cfg.override_guards || opt.override_guards; }

// Volterra problem at the configured sample ε.
VolterraProblem volterra_problem(const RunConfig& cfg, const Options& opt) {
  const VolterraConfig& v = cfg.volterra;
  VolterraProblem p;
  p.alpha = v.alpha;
  p.X = v.X;
  p.points = static_cast<std::size_t>(v.points);
  p.mollifier = mollifier_of(cfg.mollifier, 1, cfg.mollifier.amplitude);
  p.eps = v.eps;
  p.override_guard = overrides(cfg, opt);
  if (v.model == "zero") {
    p.kernel_zero = true;
  } else {
    p.kernel.components = {
        nonlinearity_of(v.model, v.gamma, v.b, v.coefficient, p.mollifier.scale, p.override_guard)};
  }
  FreeTerm g;
  if (v.free_term == "constant") {
    const double c = v.free_value;
    g.smooth = [c](double) { return c; };
  } else {
    g.singular = SingularDataSpec::delta(p.mollifier, v.free_position, 0, v.free_value);
  }
  p.free_terms = {g};
  return p;
}

std::function<double(double)> volterra_oracle(const VolterraConfig& v) {
  const double g = v.free_value, c = v.coefficient;
  if (v.oracle == "free") return [g](double) { return g; };
  if (v.oracle == "exp") return [g, c](double x) { return g * std::exp(c * x); };
  if (v.oracle == "mittag-leffler")
    return [g, c](double x) { return g * mittag_leffler(0.5, c * std::sqrt(std::numbers::pi) * std::sqrt(x)); };
  return {};
}

EvolutionProblem evolution_problem(const RunConfig& cfg, const Options& opt) {
  const EvolutionConfig& e = cfg.evolution;
  EvolutionProblem p;
  p.variant = e.variant == "plain"          ? Variant::ParabolicPlain
              : e.variant == "conservative" ? Variant::ParabolicConservative
                                            : Variant::ParabolicPotential;
  const auto n = static_cast<std::size_t>(e.points);
  p.grid = e.dim == 1 ? GridSpec::line(-e.half_width, e.half_width, n)
                      : GridSpec::plane(-e.half_width, e.half_width, n, -e.half_width, e.half_width, n);
  p.T = e.T;
  p.dt = e.dt;
  const MollifierSpec data = mollifier_of(cfg.mollifier, e.dim, cfg.mollifier.amplitude);
  if (e.data == "gaussian")
    p.initial.smooth = [](double x, double y) { return std::exp(-(x * x + y * y)); };
  else
    p.initial.singular = SingularDataSpec::delta(data);
  p.override_guard = overrides(cfg, opt);
  if (e.model != "none")
    p.nonlinearity = nonlinearity_of(e.model, e.gamma, e.b, e.coefficient, data.scale, p.override_guard);
  if (e.potential == "delta") {
    p.potential.singular =
        SingularDataSpec::delta(mollifier_of(cfg.mollifier, e.dim, e.potential_exponent), 0.0, 0,
                                e.potential_strength);
  } else if (e.potential == "gaussian") {
    const double s = e.potential_strength;
    p.potential.smooth = [s](double x, double y) { return s * std::exp(-(x * x + y * y)); };
  }
  p.time_mollifier = mollifier_of(cfg.mollifier, 1, 1.0);
  p.mollify_kernel = e.mollify_kernel;
  p.eps = cfg.schedule.front();
  return p;
}

struct RunResult {
  EvolutionSolution solution;
  double mass_drift = 0.0;
};

std::vector<RunResult> evolution_runs(const EvolutionProblem& p, const std::vector<double>& schedule,
                                      unsigned threads) {
  std::vector<RunResult> out(schedule.size());
  parallel_for(schedule.size(), threads, [&](std::size_t i) {
    EvolutionProblem q = p;
    q.eps = schedule[i];
    out[i].solution = solve_evolution(q);
    const double m0 = integral(out[i].solution.history.front().field);
    for (const auto& s : out[i].solution.history)
      out[i].mass_drift = std::max(out[i].mass_drift, std::abs(integral(s.field) - m0));
  });
  return out;
}

void write_history(Csv& csv, double eps, const History& h, double p, int stride) {
  const std::string kind = std::isinf(p) ? "Linf" : "L" + fmt(p);
  for (std::size_t k = 0; k < h.size(); ++k)
    if (k % static_cast<std::size_t>(stride) == 0 || k + 1 == h.size()) csv.row(eps, h[k].t, kind, lp_norm(h[k].field, p));
}

void check_experiment(const RunConfig& cfg, const std::string& name) {
  if (!cfg.experiment.empty() && cfg.experiment != name && cfg.experiment != "all")
    throw ConfigError("config is for experiment '" + cfg.experiment + "', not '" + name + "'");
}

}  // namespace

bool VerdictReport::all_pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
}

void VerdictReport::write(const std::filesystem::path& dir) const {
  std::filesystem::create_directories(dir);
  Csv v(dir / "verdict.csv", {"check", "pass", "measured", "tolerance"});
  for (const auto& c : checks) v.row(c.name, c.pass ? "PASS" : "FAIL", c.measured, c.tolerance);
  Csv r(dir / "runtime.csv", {"check", "seconds"});
  for (const auto& c : checks) r.row(c.name, c.runtime);
}

VerdictReport cmd_frac_bounds(const RunConfig& cfg, const Options& opt) {
  check_experiment(cfg, "frac-bounds");
  std::filesystem::create_directories(opt.out);
  Timer timer;
  const FracOrder order(cfg.frac.alpha);
  const MollifierSpec spec = mollifier_of(cfg.mollifier, 1, cfg.mollifier.amplitude);
  BoundTable bt(cfg.schedule.size());
  parallel_for(cfg.schedule.size(), opt.threads, [&](std::size_t i) {
    bt[i] = lemma1_bound_report(order, spec, std::span(&cfg.schedule[i], 1), cfg.frac.T, cfg.frac.h)[0];
  });
  const SweepTable t = to_table(bt);
  const GrowthFit fit = fit_growth(t);
  Csv csv(opt.out / "frac_bounds.csv", {"eps", "alpha", "l1_norm", "fitted_model", "exponent"});
  for (const auto& r : t) csv.row(r.eps, cfg.frac.alpha, r.value, model_name(fit.model), fit.exponent);
  const double rt = timer.lap();

  VerdictReport rep;
  const double alpha = cfg.frac.alpha;
  if (alpha > 0.0) {
    rep.checks.push_back({"frac_bounds_ratio", max_over_min(t) <= 1.5, max_over_min(t), 1.5, rt});
    rep.checks.push_back({"frac_bounds_model_bounded", fit.model == GrowthModel::Bounded, fit.exponent, 0.0, 0.0});
  } else {
    const double abar = -alpha;
    if (spec.scale.kind() == ScaleLaw::Kind::Log) {
      const bool ok = fit.model == GrowthModel::LogPower && std::abs(fit.exponent - abar) <= 0.2;
      rep.checks.push_back({"frac_bounds_logpower_exponent", ok, fit.exponent, 0.2, rt});
    }
    const ScaleLaw L = spec.scale;
    const Envelope env{[L, abar](double e) { return std::pow(L(e), abar + 0.1); }, {}, "L^(abar+0.1)"};
    rep.checks.push_back(envelope_entry("frac_bounds_envelope", t, env, false, 0.0));
  }
  return rep;
}

VerdictReport cmd_volterra(const RunConfig& cfg, const Options& opt) {
  check_experiment(cfg, "volterra");
  const VolterraConfig& v = cfg.volterra;
  VolterraProblem p = volterra_problem(cfg, opt);
  p.check_guard();
  std::filesystem::create_directories(opt.out);
  VerdictReport rep;
  Timer timer;

  // solution samples at the configured ε
  {
    const VolterraSolution sol = solve_volterra(p);
    const auto oracle = volterra_oracle(v);
    const Field& f = sol.fields[0];
    double err = 0.0;
    if (oracle) {
      Csv csv(opt.out / "solution.csv", {"x", "f", "oracle", "error"});
      for (std::size_t j = 0; j < f.size(); ++j) {
        const double x = f.grid().coord(0, j);
        const double e = std::abs(f.value(j).real() - oracle(x));
        err = std::max(err, e);
        csv.row(x, f.value(j).real(), oracle(x), e);
      }
      rep.checks.push_back({"volterra_oracle_error", err <= v.oracle_tol, err, v.oracle_tol, timer.lap()});
    } else {
      Csv csv(opt.out / "solution.csv", {"x", "f"});
      for (std::size_t j = 0; j < f.size(); ++j) csv.row(f.grid().coord(0, j), f.value(j).real());
      timer.lap();
    }
  }

  // moderateness sweep and Gronwall envelope
  const SweepTable sweep = volterra_sweep(p, cfg.schedule, opt.threads);
  write_table(opt.out / "sweep.csv", sweep, "sup_norm");
  {
    const ScaleLaw L = p.mollifier.scale;
    const double m = v.alpha > 0.0 ? 0.0 : -v.alpha;
    // the moderate form caps the exponent at 1 (exp(C L) is a power of ε under the log scale)
    const double q = std::min(lipschitz_exponent(v.model, v.b) + m, 1.0);
    Envelope env{[L](double e) { return L(e); }, {}, "L exp(C X L^(b+m))"};
    if (!p.kernel_zero && q > 0.0) env.B = [L, q, X = v.X](double e) { return X * std::pow(L(e), q); };
    const double rt = timer.lap();
    if (v.negative_control) {
      rep.checks.push_back(envelope_entry("volterra_envelope_negative_control", sweep, env, true, rt));
    } else {
      rep.checks.push_back(envelope_entry("volterra_envelope", sweep, env, false, rt));
      const FamilyVerdict fam = classify_family(sweep, {});
      rep.checks.push_back({"volterra_moderate", fam.kind == FamilyClass::Moderate, fam.N, 0.0, 0.0});
    }
  }

  // uniqueness probes
  if (!v.negative_control) {
    const SweepTable same = uniqueness_probe(p, Perturbation{}, cfg.schedule, opt.threads);
    rep.checks.push_back(zero_entry("volterra_uniqueness_identical", same, timer.lap()));
    Perturbation shift;
    shift.kind = Perturbation::Kind::NegligibleShift;
    shift.s = v.shift_s;
    const SweepTable diff = uniqueness_probe(p, shift, cfg.schedule, opt.threads);
    Csv csv(opt.out / "uniqueness.csv", {"eps", "probe", "sup_difference"});
    for (const auto& r : same) csv.row(r.eps, "identical", r.value);
    for (const auto& r : diff) csv.row(r.eps, "negligible_shift", r.value);
    rep.checks.push_back(negligible_entry("volterra_uniqueness_negligible", diff, timer.lap()));
  }
  return rep;
}

VerdictReport cmd_evolution(const RunConfig& cfg, const Options& opt) {
  check_experiment(cfg, "evolution");
  const EvolutionConfig& e = cfg.evolution;
  EvolutionProblem p = evolution_problem(cfg, opt);
  p.check_guard();
  std::filesystem::create_directories(opt.out);
  VerdictReport rep;
  Timer timer;

  const auto runs = evolution_runs(p, cfg.schedule, opt.threads);
  SweepTable sup, c1;
  double drift = 0.0;
  {
    Csv csv(opt.out / "evolution.csv", {"eps", "t", "norm_kind", "value"});
    for (std::size_t i = 0; i < runs.size(); ++i) {
      const double eps = cfg.schedule[i];
      const auto& s = runs[i].solution;
      write_history(csv, eps, s.history, e.p, e.csv_stride);
      sup.push_back({eps, s.sup_norm(e.p)});
      c1.push_back({eps, s.c1_seminorm(e.p)});
      csv.row(eps, e.T, "sup_in_time", sup.back().value);
      csv.row(eps, e.T, "c1_seminorm", c1.back().value);
      drift = std::max(drift, runs[i].mass_drift);
    }
  }
  const double rt = timer.lap();

  const ScaleLaw L = scale_of(cfg.mollifier);
  const double n = e.dim;
  const double a = e.data == "delta" ? n * (cfg.mollifier.amplitude - 1.0 / e.p) : 0.0;
  const double b = lipschitz_exponent(e.model, e.b);
  const bool nonlinear = e.model != "none";
  const bool singular_potential = e.potential == "delta";
  Envelope env{[L, a](double eps) { return std::pow(L(eps), a); }, {}, "L^a exp(C T B)"};
  if ((nonlinear && b > 0.0) || singular_potential) {
    const double c = e.potential_exponent;
    env.B = [=, T = e.T](double eps) {
      double s = nonlinear ? std::pow(L(eps), b) : 0.0;
      if (singular_potential) s += std::pow(L(eps), c * n);
      return T * s;
    };
  }
  rep.checks.push_back(envelope_entry("evolution_envelope", sup, env, false, rt));
  if (e.variant == "plain" && !nonlinear && !e.mollify_kernel)
    rep.checks.push_back({"evolution_mass", drift <= 1e-8, drift, 1e-8, 0.0});
  const FamilyVerdict fam = classify_family(sup, c1);
  rep.checks.push_back({"evolution_moderate", fam.kind == FamilyClass::Moderate, fam.N, 0.0, 0.0});

  const SweepTable same = uniqueness_probe_evolution(p, Perturbation{}, cfg.schedule, e.p, opt.threads);
  rep.checks.push_back(zero_entry("evolution_uniqueness_identical", same, timer.lap()));
  Perturbation shift;
  shift.kind = Perturbation::Kind::NegligibleShift;
  shift.s = e.shift_s;
  const SweepTable diff = uniqueness_probe_evolution(p, shift, cfg.schedule, e.p, opt.threads);
  Csv csv(opt.out / "uniqueness.csv", {"eps", "probe", "sup_difference"});
  for (const auto& r : same) csv.row(r.eps, "identical", r.value);
  for (const auto& r : diff) csv.row(r.eps, "negligible_shift", r.value);
  rep.checks.push_back(negligible_entry("evolution_uniqueness_negligible", diff, timer.lap()));
  return rep;
}

VerdictReport cmd_schrodinger(const RunConfig& cfg, const Options& opt) {
  check_experiment(cfg, "schrodinger");
  const SchrodingerConfig& s = cfg.schrodinger;
  std::filesystem::create_directories(opt.out);
  VerdictReport rep;
  Timer timer;

  EvolutionProblem p;
  p.variant = Variant::SchrodingerLinear;
  const auto pts = static_cast<std::size_t>(s.points);
  p.grid = s.dim == 1 ? GridSpec::line(-s.half_width, s.half_width, pts)
                      : GridSpec::plane(-s.half_width, s.half_width, pts, -s.half_width, s.half_width, pts);
  p.T = s.T;
  p.dt = s.dt;
  p.initial.smooth = [](double x, double y) { return std::exp(-(x * x + y * y)); };
  p.mollify_kernel = false;
  p.time_mollifier = mollifier_of(cfg.mollifier, 1, 1.0);
  p.override_guard = overrides(cfg, opt);
  p.eps = cfg.schedule.front();

  // free propagator: L² drift
  {
    const EvolutionSolution sol = solve_evolution(p);
    const double n0 = lp_norm(sol.history.front().field, 2.0);
    double drift = 0.0;
    Csv csv(opt.out / "evolution.csv", {"eps", "t", "norm_kind", "value"});
    for (std::size_t k = 0; k < sol.history.size(); ++k) {
      const double nk = lp_norm(sol.history[k].field, 2.0);
      drift = std::max(drift, std::abs(nk - n0) / n0);
      csv.row(0.0, sol.history[k].t, "L2", nk);
    }
    rep.checks.push_back({"schrodinger_unitarity", drift <= 1e-8, drift, 1e-8, timer.lap()});
  }

  // sup bound of the time-mollified kernel through its 1-D reduction
  {
    PropagatorSpec ps;
    ps.family = Family::Schrodinger;
    ps.dim = s.dim;
    ps.beta = s.beta;
    ps.mollifier = mollifier_of(cfg.mollifier, 1, 1.0);
    BoundTable bt(cfg.schedule.size());
    parallel_for(cfg.schedule.size(), opt.threads, [&](std::size_t i) {
      bt[i] = schrodinger_sup_bound(ps, s.t, std::span(&cfg.schedule[i], 1))[0];
    });
    const SweepTable t = to_table(bt);
    write_table(opt.out / "sup_bound.csv", t, "sup_kernel");
    const double order = s.dim / 2.0 + s.beta;
    const double rt = timer.lap();
    if (order < 1.0) {
      rep.checks.push_back({"schrodinger_sup_bounded", max_over_min(t) <= 2.0, max_over_min(t), 2.0, rt});
    } else {
      const double m = order - 1.0 + 0.5;
      const ScaleLaw L = ps.mollifier.scale;
      const Envelope env{[L, m](double e) { return std::pow(L(e), m); }, {}, "L^m"};
      rep.checks.push_back(envelope_entry("schrodinger_sup_envelope", t, env, false, rt));
    }
  }

  // potential: Gronwall envelope of the L² norm
  if (s.potential != "none") {
    if (s.potential == "delta")
      p.potential.singular = SingularDataSpec::delta(mollifier_of(cfg.mollifier, s.dim, s.potential_exponent),
                                                     0.0, 0, s.potential_strength);
    else
      p.potential.smooth = [k = s.potential_strength](double x, double y) { return k * std::exp(-(x * x + y * y)); };
    p.mollify_kernel = true;
    p.check_guard();
    const auto runs = evolution_runs(p, cfg.schedule, opt.threads);
    SweepTable sup;
    for (std::size_t i = 0; i < runs.size(); ++i) sup.push_back({cfg.schedule[i], runs[i].solution.sup_norm(2.0)});
    write_table(opt.out / "potential_sweep.csv", sup, "sup_l2");
    const ScaleLaw L = scale_of(cfg.mollifier);
    const double cn = s.potential_exponent * s.dim;
    const bool singular = s.potential == "delta";
    Envelope env{[](double) { return 1.0; }, {}, "exp(C T L^(cn))"};
    if (singular) env.B = [=, T = s.T](double e) { return T * std::pow(L(e), cn); };
    rep.checks.push_back(envelope_entry("schrodinger_potential_envelope", sup, env, false, timer.lap()));
  }
  return rep;
}

VerdictReport cmd_sweep(const RunConfig& cfg, const Options& opt) {
  check_experiment(cfg, "sweep");
  const SweepConfig& w = cfg.sweep;
  if (cfg.mollifier.scale != "log")
    throw ConfigError("sweep: exponent recovery needs mollifier.scale = log");
  std::filesystem::create_directories(opt.out);
  VerdictReport rep;
  Timer timer;

  EvolutionProblem p;
  const auto pts = static_cast<std::size_t>(w.points);
  p.grid = w.dim == 1 ? GridSpec::line(-w.half_width, w.half_width, pts)
                      : GridSpec::plane(-w.half_width, w.half_width, pts, -w.half_width, w.half_width, pts);
  p.T = w.T;
  p.dt = w.dt;
  p.initial.singular = SingularDataSpec::delta(mollifier_of(cfg.mollifier, w.dim, cfg.mollifier.amplitude));
  p.mollify_kernel = false;
  const ModerateTable mt = moderateness_sweep(p, cfg.schedule, w.p, opt.threads);
  SweepTable sup;
  {
    Csv csv(opt.out / "sweep.csv", {"eps", "t", "norm_kind", "value"});
    for (const auto& r : mt) {
      sup.push_back({r.eps, r.sup_norm});
      csv.row(r.eps, w.T, "sup_in_time", r.sup_norm);
      csv.row(r.eps, w.T, "c1_seminorm", r.c1_seminorm);
    }
  }
  const GrowthFit fit = fit_growth(sup);
  const double expected = w.dim * (cfg.mollifier.amplitude - 1.0 / w.p);
  const double rt = timer.lap();
  if (expected == 0.0) {
    rep.checks.push_back({"sweep_bounded", fit.model == GrowthModel::Bounded, fit.exponent, 0.0, rt});
  } else {
    const bool ok = fit.model == GrowthModel::LogPower && std::abs(fit.exponent - expected) <= 0.15;
    rep.checks.push_back({"sweep_exponent", ok, fit.exponent, 0.15, rt});
  }

  const SelfTestResult st = classifier_self_test(100, 0.01, probe_seed(cfg.seed));
  const double worst = std::min({st.accuracy(GrowthModel::Bounded), st.accuracy(GrowthModel::LogPower),
                                 st.accuracy(GrowthModel::EpsPower)});
  rep.checks.push_back({"classifier_self_test", worst >= 0.95, worst, 0.95, timer.lap()});
  return rep;
}

int run(int argc, char** argv) {
  CLI::App app{"singreg: regularized singular problems, sweeps and verdicts"};
  app.require_subcommand(1);
  std::string config;
  Options opt;
  std::string out = "out";
  const std::vector<std::pair<std::string, std::function<VerdictReport(const RunConfig&, const Options&)>>>
      commands{{"frac-bounds", cmd_frac_bounds}, {"volterra", cmd_volterra}, {"evolution", cmd_evolution},
               {"schrodinger", cmd_schrodinger}, {"sweep", cmd_sweep}};
  std::vector<CLI::App*> subs;
  for (const char* name : {"frac-bounds", "volterra", "evolution", "schrodinger", "sweep", "all"}) {
    CLI::App* s = app.add_subcommand(name);
    s->add_option("--config", config, "INI configuration file")->required();
    s->add_option("--out", out, "output directory");
    s->add_option("--threads", opt.threads, "worker threads for sweeps")->check(CLI::Range(1u, 256u));
    s->add_flag("--override-guards", opt.override_guards, "admit parameters outside the guards");
    subs.push_back(s);
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }
  CLI::App* sub = app.get_subcommands().front();
  const std::string chosen = sub->get_name();

  RunConfig cfg;
  try {
    cfg = load_config(config);
    if (chosen == "all") cfg.experiment.clear();
    opt.out = sub->count("--out") == 0 && !cfg.out.empty() ? cfg.out : out;
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }

  try {
    bool pass = true;
    for (const auto& [name, fn] : commands) {
      if (chosen != "all" && chosen != name) continue;
      Options o = opt;
      if (chosen == "all") o.out = opt.out / name;
      const VerdictReport rep = fn(cfg, o);
      rep.write(o.out);
      for (const auto& c : rep.checks)
        std::cout << (c.pass ? "PASS " : "FAIL ") << name << ' ' << c.name << " measured=" << fmt(c.measured)
                  << " tolerance=" << fmt(c.tolerance) << '\n';
      pass = pass && rep.all_pass();
    }
    return pass ? 0 : 2;
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const GuardViolation& e) {
    std::cerr << "guard violation: " << e.what() << '\n';
    return 2;
  } catch (const ResolutionError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const InvalidArgument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const Error& e) {
    std::cerr << "failure: " << e.what() << '\n';
    return 2;
  }
}

}  // namespace singreg::cli
