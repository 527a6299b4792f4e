// Acceptance harness: one PASS/FAIL line per criterion, exit 1 if any fails.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "singreg/analysis.hpp"
#include "singreg/cli.hpp"
#include "singreg/evolution.hpp"
#include "singreg/fracint.hpp"
#include "singreg/kernels.hpp"
#include "singreg/special.hpp"
#include "singreg/volterra.hpp"

using namespace singreg;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string num(double v) {
  char b[32];
  std::snprintf(b, sizeof b, "%.4g", v);
  return b;
}

int failures = 0;

void criterion(const char* id, const char* title, const std::function<Outcome()>& body) {
  const auto t0 = Clock::now();
  Outcome o{false, ""};
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  if (!o.pass) ++failures;
  std::printf("%s %-4s %s: %s [%.2fs]\n", o.pass ? "PASS" : "FAIL", id, title, o.detail.c_str(), seconds_since(t0));
  std::fflush(stdout);
}

const std::vector<double>& schedule() {
  static const EpsSchedule s;
  return s.values();
}

SweepTable to_table(const BoundTable& b) {
  SweepTable t;
  for (const auto& r : b) t.push_back({r.eps, r.value});
  return t;
}

double ratio(const SweepTable& t) {
  double lo = kInf, hi = 0.0;
  for (const auto& r : t) lo = std::min(lo, r.value), hi = std::max(hi, r.value);
  return hi / lo;
}

const cli::Check& find(const cli::VerdictReport& r, const std::string& name) {
  for (const auto& c : r.checks)
    if (c.name == name) return c;
  throw std::runtime_error("check '" + name + "' missing from report");
}

fs::path out_root() {
  const fs::path p = fs::temp_directory_path() / "singreg_acceptance";
  fs::create_directories(p);
  return p;
}

cli::Options options(const std::string& sub) {
  cli::Options o;
  o.out = out_root() / sub;
  return o;
}

NonlinearitySpec linear(double c) {
  NonlinearitySpec s;
  s.model = NonlinearityModel::Linear;
  s.coefficient = c;
  return s;
}

VolterraProblem linear_volterra(double alpha, double eps) {
  VolterraProblem p;
  p.alpha = alpha;
  p.kernel.components = {linear(1.0)};
  p.free_terms = {FreeTerm{[](double) { return 1.0; }, {}}};
  p.eps = eps;
  return p;
}

double sup_error(const Field& f, const std::function<double(double)>& exact) {
  double e = 0.0;
  for (std::size_t j = 0; j < f.size(); ++j)
    e = std::max(e, std::abs(f.value(j).real() - exact(f.grid().coord(0, j))));
  return e;
}

}  // namespace

int main() {
  const auto start = Clock::now();

  criterion("1", "fractional quadrature of 1", [] {
    const auto t0 = Clock::now();
    const double h = 1e-3;
    const std::vector<double> one(1001, 1.0);
    double worst = 0.0;
    for (double a : {0.5, 1.0, 1.5, 2.5}) {
      const auto J = frac_integral(one, h, a);
      for (std::size_t j = 1; j < J.size(); ++j) {
        const double t = j * h, exact = std::pow(t, a) / gamma_fn(a + 1.0);
        worst = std::max(worst, std::abs(J[j] - exact) / exact);
      }
    }
    const double rt = seconds_since(t0);
    return Outcome{worst <= 1e-6 && rt < 1.0, "max rel error " + num(worst) + " (<= 1e-6), runtime " + num(rt) + " s (< 1)"};
  });

  criterion("2", "semigroup J^0.3 J^0.7 = J^1", [] {
    const double h = 1e-3;
    std::vector<double> f(1001);
    for (std::size_t j = 0; j < f.size(); ++j) f[j] = std::sin(j * h);
    const auto a = frac_integral(frac_integral(f, h, 0.7), h, 0.3);
    const auto b = frac_integral(f, h, 1.0);
    double worst = 0.0;
    for (std::size_t j = 0; j < f.size(); ++j) worst = std::max(worst, std::abs(a[j] - b[j]));
    return Outcome{worst <= 1e-4, "sup difference " + num(worst) + " (<= 1e-4)"};
  });

  {
    const auto t0 = Clock::now();
    MollifierSpec m;  // bump, log scale
    criterion("3a", "fractional integral of the delta sequence, alpha = 0.5", [&] {
      const SweepTable t = to_table(lemma1_bound_report(FracOrder(0.5), m, schedule(), 1.0));
      return Outcome{ratio(t) <= 1.5, "max/min " + num(ratio(t)) + " (<= 1.5)"};
    });
    criterion("3b", "fractional integral of the delta sequence, alpha = -1", [&] {
      const SweepTable t = to_table(lemma1_bound_report(FracOrder(-1.0), m, schedule(), 1.0));
      const GrowthFit f = fit_growth(t);
      // closed form: ||D phi_eps||_1 = L ||phi'||_1
      double oracle = 0.0;
      for (const auto& r : t) oracle = std::max(oracle, std::abs(r.value / mollifier_derivative_l1(m, r.eps, 1) - 1.0));
      const bool ok = f.model == GrowthModel::LogPower && f.exponent >= 0.8 && f.exponent <= 1.2;
      return Outcome{ok, std::string(model_name(f.model)) + " exponent " + num(f.exponent) +
                             " (in [0.8, 1.2]); max rel. deviation from L||phi'||_1 " + num(oracle)};
    });
    criterion("3c", "fractional integral of the delta sequence, alpha = -1.5", [&] {
      const SweepTable t = to_table(lemma1_bound_report(FracOrder(-1.5), m, schedule(), 1.0));
      const GrowthFit f = fit_growth(t);
      const bool ok = f.model == GrowthModel::LogPower && f.exponent >= 1.7 && f.exponent <= 2.3;
      return Outcome{ok, std::string(model_name(f.model)) + " exponent " + num(f.exponent) + " (in [1.7, 2.3])"};
    });
    criterion("3t", "fractional integral runtime", [&] {
      const double rt = seconds_since(t0);
      return Outcome{rt < 10.0, "total " + num(rt) + " s (< 10)"};
    });
  }

  criterion("4", "heat kernel L1 identities at eps = 0", [] {
    const GridSpec g = GridSpec::line(-16.0, 16.0, 65536);
    double e0 = 0.0, e1 = 0.0;
    for (double t : {0.1, 1.0}) {
      PropagatorSpec s;
      e0 = std::max(e0, std::abs(lp_norm(sample_kernel(KernelHandle::closed_form(s, t), g), 1.0) - 1.0));
      s.beta = 1;
      e1 = std::max(e1, std::abs(lp_norm(sample_kernel(KernelHandle::closed_form(s, t), g), 1.0) -
                                 1.0 / std::sqrt(std::numbers::pi * t)));
    }
    return Outcome{e0 <= 1e-8 && e1 <= 1e-6, "|E| error " + num(e0) + " (<= 1e-8), |dE| error " + num(e1) + " (<= 1e-6)"};
  });

  criterion("5", "mollified heat / gradient L1 envelopes, loglog scale", [] {
    const double t = 0.1;
    PropagatorSpec h;
    h.beta = 2;
    h.mollifier.scale = ScaleLaw::loglog();
    PropagatorSpec g = h;
    g.family = Family::HeatGradient;
    g.beta = 1;
    const ScaleLaw L = ScaleLaw::loglog();
    // m = beta/2 - 1 + 1/2 for the heat family, m = 1/2 > (beta - 1)/2 for the gradient
    const Envelope env{[L](double e) { return std::pow(L(e), 0.5); }, {}, "(ln|ln eps|)^0.5"};
    const EnvelopeVerdict a = envelope_check(to_table(heat_l1_bound(h, t, schedule())), env);
    const EnvelopeVerdict b = envelope_check(to_table(heat_gradient_l1_bound(g, t, schedule())), env);
    return Outcome{a.pass && b.pass, "max ratio heat " + num(a.max_ratio) + ", gradient " + num(b.max_ratio) + " (<= 1)"};
  });

  {
    const auto t0 = Clock::now();
    criterion("6a", "Volterra alpha = 1 against e^x", [] {
      const auto p = linear_volterra(1.0, 0.0);
      const double h = p.grid().spacing();
      const double err = sup_error(solve_volterra(p).fields[0], [](double x) { return std::exp(x); });
      return Outcome{err <= 1e-4 && h <= 1e-3, "sup error " + num(err) + " (<= 1e-4) at h = " + num(h)};
    });
    criterion("6b", "Abel case against the Mittag-Leffler series", [] {
      const auto ml = [](double x) { return mittag_leffler(0.5, std::sqrt(std::numbers::pi) * std::sqrt(x)); };
      const auto& s = schedule();
      std::vector<double> errs;
      for (double e : s) errs.push_back(sup_error(solve_volterra(linear_volterra(0.5, e)).fields[0], ml));
      const double at8 = sup_error(solve_volterra(linear_volterra(0.5, 1e-8)).fields[0], ml);
      bool decreasing = true;
      for (std::size_t i = errs.size() - 3; i < errs.size(); ++i) decreasing = decreasing && errs[i] < errs[i - 1];
      return Outcome{at8 <= 5e-2 && decreasing, "error at eps = 1e-8 " + num(at8) + " (<= 5e-2); last four " +
                                                    num(errs[errs.size() - 4]) + " > " + num(errs[errs.size() - 3]) +
                                                    " > " + num(errs[errs.size() - 2]) + " > " + num(errs.back())};
    });
    criterion("6t", "Volterra runtime", [&] {
      const double rt = seconds_since(t0);
      return Outcome{rt < 30.0, "total " + num(rt) + " s (< 30)"};
    });
  }

  criterion("7a", "delta-data sweep, n = 1, p = inf", [] {
    cli::RunConfig c;
    c.sweep.p = kInf;
    const auto r = cli::cmd_sweep(c, options("sweep_inf"));
    const auto& k = find(r, "sweep_exponent");
    return Outcome{k.pass, "LogPower exponent " + num(k.measured) + " (1 +- 0.15)"};
  });
  criterion("7b", "delta-data sweep, n = 1, p = 1", [] {
    cli::RunConfig c;
    c.sweep.p = 1.0;
    const auto r = cli::cmd_sweep(c, options("sweep_one"));
    const auto& k = find(r, "sweep_bounded");
    return Outcome{k.pass, k.pass ? "Bounded" : "not Bounded (exponent " + num(k.measured) + ")"};
  });

  // Gronwall envelopes over the solver sweeps; collected into one line per solver family
  cli::VerdictReport volterra_shift, parabolic_shift;
  {
    auto volterra_cfg = [](double alpha, const char* model, double b, const char* free_term) {
      cli::RunConfig c;
      c.volterra.alpha = alpha;
      c.volterra.model = model;
      c.volterra.b = b;
      c.volterra.free_term = free_term;
      c.volterra.points = 512;
      c.volterra.eps = 1e-4;
      return c;
    };
    criterion("8a", "Volterra sweeps honor the Gronwall envelope", [&] {
      std::ostringstream d;
      bool ok = true;
      int i = 0;
      for (const auto& c : {volterra_cfg(1.0, "linear", 0.5, "constant"), volterra_cfg(0.5, "power", 0.3, "constant"),
                            volterra_cfg(0.5, "sqrt", 0.5, "delta"), volterra_cfg(-0.25, "power", 0.5, "constant")}) {
        const auto r = cli::cmd_volterra(c, options("volterra_" + std::to_string(i++)));
        const auto& k = find(r, "volterra_envelope");
        ok = ok && k.pass;
        d << c.volterra.model << "(alpha " << c.volterra.alpha << ", b " << c.volterra.b << ") " << num(k.measured) << "; ";
        if (c.volterra.alpha == 0.5 && c.volterra.model == std::string("power")) volterra_shift = r;
      }
      return Outcome{ok, "max ratios " + d.str() + "(<= 1)"};
    });

    auto evo_cfg = [](const char* variant, const char* data, const char* model, const char* potential) {
      cli::RunConfig c;
      auto& e = c.evolution;
      e.variant = variant;
      e.data = data;
      e.model = model;
      e.b = 0.5;
      e.potential = potential;
      e.potential_exponent = 0.5;
      e.half_width = 8.0;
      e.points = std::string(data) == "delta" ? 2048 : 512;
      e.T = 0.25;
      e.dt = 1e-3;
      return c;
    };
    criterion("8b", "parabolic sweeps honor the Gronwall envelope", [&] {
      std::ostringstream d;
      bool ok = true;
      int i = 0;
      for (const auto& c : {evo_cfg("plain", "gaussian", "power", "none"), evo_cfg("plain", "delta", "sqrt", "none"),
                            evo_cfg("conservative", "gaussian", "quadratic", "none"),
                            evo_cfg("potential", "delta", "power", "delta")}) {
        const auto r = cli::cmd_evolution(c, options("evolution_" + std::to_string(i++)));
        const auto& k = find(r, "evolution_envelope");
        ok = ok && k.pass;
        d << c.evolution.variant << "/" << c.evolution.data << "/" << c.evolution.model << " " << num(k.measured) << "; ";
        if (i == 1) parabolic_shift = r;
      }
      return Outcome{ok, "max ratios " + d.str() + "(<= 1)"};
    });
    criterion("8c", "Schrodinger sweep with a singular potential honors the Gronwall envelope", [&] {
      cli::RunConfig c;
      c.schrodinger.potential = "delta";
      c.schrodinger.potential_exponent = 0.5;
      c.schrodinger.half_width = 8.0;
      c.schrodinger.points = 2048;
      c.schrodinger.T = 0.25;
      const auto r = cli::cmd_schrodinger(c, options("schrodinger_potential"));
      const auto& k = find(r, "schrodinger_potential_envelope");
      return Outcome{k.pass, "max ratio " + num(k.measured) + " (<= 1)"};
    });
    criterion("8d", "b = 1.2 override demo fails the envelope", [&] {
      cli::RunConfig c = volterra_cfg(1.0, "extremal", 1.2, "constant");
      c.volterra.X = 0.5;
      c.volterra.negative_control = true;
      cli::Options o = options("volterra_negative_control");
      o.override_guards = true;
      const auto r = cli::cmd_volterra(c, o);
      const auto& k = find(r, "volterra_envelope_negative_control");
      return Outcome{k.pass, "max ratio " + num(k.measured) + " (> 1 expected)"};
    });
  }

  criterion("9a", "free Schrodinger L2 drift over T = 1", [] {
    cli::RunConfig c;
    const auto r = cli::cmd_schrodinger(c, options("schrodinger_1d"));
    const auto& k = find(r, "schrodinger_unitarity");
    return Outcome{k.pass, "drift " + num(k.measured) + " (<= 1e-8)"};
  });
  criterion("9b", "Schrodinger sup bound, n = 1", [] {
    PropagatorSpec s;
    s.family = Family::Schrodinger;
    const SweepTable t = to_table(schrodinger_sup_bound(s, 1.0, schedule()));
    return Outcome{ratio(t) <= 2.0, "max/min " + num(ratio(t)) + " (<= 2)"};
  });
  criterion("9c", "Schrodinger sup bound, n = 2, calibrated envelope", [] {
    cli::RunConfig c;
    c.schrodinger.dim = 2;
    c.schrodinger.points = 128;
    c.schrodinger.half_width = 8.0;
    c.schrodinger.T = 0.1;
    c.schrodinger.dt = 1e-2;
    const auto r = cli::cmd_schrodinger(c, options("schrodinger_2d"));
    const auto& k = find(r, "schrodinger_sup_envelope");
    return Outcome{k.pass, "max ratio " + num(k.measured) + " (<= 1)"};
  });

  criterion("10a", "Volterra negligible shift classifies as Negligible", [&] {
    const auto& k = find(volterra_shift, "volterra_uniqueness_negligible");
    const auto& z = find(volterra_shift, "volterra_uniqueness_identical");
    return Outcome{k.pass && z.pass, "decay exponent " + num(k.measured) + " (<= -1, monotone); identical max " + num(z.measured)};
  });
  criterion("10b", "parabolic negligible shift classifies as Negligible", [&] {
    const auto& k = find(parabolic_shift, "evolution_uniqueness_negligible");
    const auto& z = find(parabolic_shift, "evolution_uniqueness_identical");
    return Outcome{k.pass && z.pass, "decay exponent " + num(k.measured) + " (<= -1, monotone); identical max " + num(z.measured)};
  });

  criterion("11a", "growth classifier self-test", [] {
    const SelfTestResult r = classifier_self_test(100, 0.01, probe_seed());
    const double worst = std::min({r.accuracy(GrowthModel::Bounded), r.accuracy(GrowthModel::LogPower),
                                   r.accuracy(GrowthModel::EpsPower)});
    return Outcome{worst >= 0.95, "worst per-class accuracy " + num(worst) + " (>= 0.95)"};
  });
  criterion("11b", "acceptance suite runtime", [&] {
    const double rt = seconds_since(start);
    return Outcome{rt < 300.0, num(rt) + " s (< 300)"};
  });

  std::printf("%d criterion line(s) failed\n", failures);
  return failures == 0 ? 0 : 1;
}
