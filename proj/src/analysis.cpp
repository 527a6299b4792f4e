#include "singreg/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numbers>
#include <random>

#include "singreg/error.hpp"

namespace singreg {

namespace {

const double kGrowthThreshold = std::log(1.25);

struct LineFit {
  double intercept = 0.0;
  double slope = 0.0;
  double rss = 0.0;
};

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) mx += x[i], my += y[i];
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  LineFit f;
  f.slope = sxx > 0.0 ? sxy / sxx : 0.0;
  f.intercept = my - f.slope * mx;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - f.intercept - f.slope * x[i];
    f.rss += r * r;
  }
  return f;
}

double bic(double rss, std::size_t n, int k) {
  const double nn = static_cast<double>(n);
  return nn * std::log(rss / nn + 1e-300) + k * std::log(nn);
}

void check_table(const SweepTable& t, const char* what) {
  if (t.size() < 5) throw InvalidArgument(std::string(what) + ": need at least 5 points");
  for (const auto& r : t) {
    if (!(r.eps > 0.0 && r.eps < 1.0)) throw InvalidArgument(std::string(what) + ": eps outside (0,1)");
    if (!(r.value > 0.0) || !std::isfinite(r.value))
      throw InvalidArgument(std::string(what) + ": values must be positive and finite");
  }
}

bool all_zero(const SweepTable& t) {
  return std::all_of(t.begin(), t.end(), [](const SweepRow& r) { return r.value == 0.0; });
}

}  // namespace

EpsSchedule::EpsSchedule() {
  for (int k = 2; k <= 12; ++k) values_.push_back(std::pow(10.0, -k));
}

EpsSchedule::EpsSchedule(std::vector<double> values) : values_(std::move(values)) {
  if (values_.size() < 5) throw InvalidArgument("EpsSchedule: at least 5 points required");
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (!(values_[i] > 0.0 && values_[i] < std::exp(-1.0)))
      throw InvalidArgument("EpsSchedule: values must lie in (0, 1/e)");
    if (i > 0 && !(values_[i] < values_[i - 1]))
      throw InvalidArgument("EpsSchedule: values must strictly decrease");
  }
}

const char* model_name(GrowthModel m) {
  switch (m) {
    case GrowthModel::Bounded: return "Bounded";
    case GrowthModel::LogLogPower: return "LogLogPower";
    case GrowthModel::LogPower: return "LogPower";
    case GrowthModel::EpsPower: return "EpsPower";
  }
  return "?";
}

const char* class_name(FamilyClass c) {
  switch (c) {
    case FamilyClass::Moderate: return "Moderate";
    case FamilyClass::Negligible: return "Negligible";
    case FamilyClass::Indeterminate: return "Indeterminate";
  }
  return "?";
}

GrowthFit fit_growth(const SweepTable& table) {
  check_table(table, "fit_growth");
  const std::size_t n = table.size();
  std::vector<double> y(n), xlog(n), xeps(n), zero(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    y[i] = std::log(table[i].value);
    xeps[i] = std::log(1.0 / table[i].eps);
    xlog[i] = std::log(xeps[i]);
  }
  const LineFit c = fit_line(zero, y);
  const LineFit lp = fit_line(xlog, y);
  const LineFit ep = fit_line(xeps, y);
  const auto range = [](const std::vector<double>& x) {
    const auto [lo, hi] = std::minmax_element(x.begin(), x.end());
    return *hi - *lo;
  };
  // LogLogPower is never selected here: ln ln|ln ε| barely moves at desk scale
  GrowthModel model = GrowthModel::Bounded;
  LineFit chosen = c;
  const double b_lp = bic(lp.rss, n, 2), b_ep = bic(ep.rss, n, 2);
  const LineFit& best = b_lp <= b_ep ? lp : ep;
  const double best_range = b_lp <= b_ep ? range(xlog) : range(xeps);
  if (std::abs(best.slope) * best_range > kGrowthThreshold && std::min(b_lp, b_ep) < bic(c.rss, n, 1)) {
    model = b_lp <= b_ep ? GrowthModel::LogPower : GrowthModel::EpsPower;
    chosen = best;
  }
  GrowthFit f;
  f.model = model;
  f.exponent = model == GrowthModel::Bounded ? 0.0 : chosen.slope;
  const double tss = c.rss;
  f.r2 = tss > 0.0 ? std::clamp(1.0 - chosen.rss / tss, 0.0, 1.0) : 1.0;
  const std::vector<double>& x = model == GrowthModel::LogPower ? xlog : (model == GrowthModel::EpsPower ? xeps : zero);
  for (std::size_t i = 0; i < n; ++i) f.residuals.push_back(y[i] - chosen.intercept - chosen.slope * x[i]);
  return f;
}

EnvelopeVerdict envelope_check(const SweepTable& table, const Envelope& env, std::size_t k) {
  if (!env.A) throw InvalidArgument("envelope_check: envelope shape A missing");
  const std::size_t nconst = env.B ? 2 : 1;
  if (k < 2 || k < nconst) throw InvalidArgument("envelope_check: calibration needs k >= 2");
  if (table.size() <= k) throw InvalidArgument("envelope_check: nothing left to check after calibration");
  SweepTable t = table;
  std::stable_sort(t.begin(), t.end(), [](const SweepRow& a, const SweepRow& b) { return a.eps > b.eps; });
  for (const auto& r : t)
    if (!(r.value > 0.0) || !std::isfinite(r.value))
      throw InvalidArgument("envelope_check: values must be positive and finite");

  EnvelopeVerdict v;
  // ln(v/A) = ln C₁ + C₂ B on the calibration points
  std::vector<double> y(k), x(k);
  for (std::size_t i = 0; i < k; ++i) {
    y[i] = std::log(t[i].value / env.A(t[i].eps));
    x[i] = env.B ? env.B(t[i].eps) : 0.0;
  }
  double lnC1 = 0.0;
  if (env.B) {
    const auto [lo, hi] = std::minmax_element(x.begin(), x.end());
    if (!(*hi - *lo > 0.0)) throw InvalidArgument("envelope_check: calibration underdetermined");
    const LineFit f = fit_line(x, y);
    v.C2 = std::max(0.0, f.slope);
  }
  lnC1 = -1e300;
  for (std::size_t i = 0; i < k; ++i) lnC1 = std::max(lnC1, y[i] - v.C2 * x[i]);
  v.C1 = std::exp(lnC1);

  v.pass = true;
  for (std::size_t i = k; i < t.size(); ++i) {
    const double B = env.B ? env.B(t[i].eps) : 0.0;
    // ratio in logs so huge envelopes do not overflow
    const double lr = std::log(t[i].value) - (lnC1 + std::log(env.A(t[i].eps)) + v.C2 * B);
    const double ratio = std::exp(std::min(lr, 700.0));
    if (i == k || ratio > v.max_ratio) {
      v.max_ratio = ratio;
      v.worst_index = i;
    }
    if (lr > 1e-9) v.pass = false;
  }
  return v;
}

FamilyVerdict classify_family(const SweepTable& sup_table, const SweepTable& c1_table) {
  if (!c1_table.empty() && c1_table.size() != sup_table.size())
    throw InvalidArgument("classify_family: inconsistent table lengths");
  for (std::size_t i = 0; i < c1_table.size(); ++i)
    if (c1_table[i].eps != sup_table[i].eps)
      throw InvalidArgument("classify_family: tables use different schedules");
  FamilyVerdict v;
  if (all_zero(sup_table) && (c1_table.empty() || all_zero(c1_table))) {
    v.kind = FamilyClass::Negligible;
    v.diagnostics = "identically zero";
    return v;
  }
  std::vector<const SweepTable*> tables{&sup_table};
  if (!c1_table.empty()) tables.push_back(&c1_table);

  bool negligible = true, slow_decay = false, log_mode = false;
  double N = 0.0;
  for (const SweepTable* t : tables) {
    if (all_zero(*t)) continue;
    const GrowthFit f = fit_growth(*t);
    v.diagnostics += std::string(model_name(f.model)) + "(" + std::to_string(f.exponent) + ") ";
    SweepTable s = *t;
    std::stable_sort(s.begin(), s.end(), [](const SweepRow& a, const SweepRow& b) { return a.eps > b.eps; });
    bool monotone = true;
    for (std::size_t i = 1; i < s.size(); ++i) monotone = monotone && s[i].value <= s[i - 1].value;
    const bool eps_model = f.model == GrowthModel::EpsPower;
    // decay at least ε¹ with monotone improvement
    negligible = negligible && eps_model && f.exponent <= -1.0 && monotone;
    slow_decay = slow_decay || (eps_model && f.exponent < 0.0 && !(f.exponent <= -1.0 && monotone));
    if (eps_model) N = std::max(N, f.exponent);
    log_mode = log_mode || f.model == GrowthModel::LogPower;
  }
  if (negligible) {
    v.kind = FamilyClass::Negligible;
    v.diagnostics += "consistent with negligible";
  } else if (slow_decay) {
    v.kind = FamilyClass::Indeterminate;
    v.diagnostics += "decays, but slower than eps^1";
  } else {
    v.kind = FamilyClass::Moderate;
    v.N = N;
    v.log_mode = log_mode;
  }
  return v;
}

double SelfTestResult::accuracy(GrowthModel m) const {
  if (trials == 0) return 0.0;
  const double t = static_cast<double>(trials);
  switch (m) {
    case GrowthModel::Bounded: return bounded_correct / t;
    case GrowthModel::LogPower: return logpower_correct / t;
    case GrowthModel::EpsPower: return epspower_correct / t;
    default: return 0.0;
  }
}

SelfTestResult classifier_self_test(std::size_t seeds, double noise, std::uint64_t seed) {
  const EpsSchedule sched;
  SelfTestResult r;
  r.trials = seeds;
  for (std::size_t s = 0; s < seeds; ++s) {
    std::mt19937_64 rng(seed + s);
    std::normal_distribution<double> z(0.0, noise);
    std::uniform_real_distribution<double> amp(0.1, 10.0), m(0.5, 3.0), N(0.3, 2.0), sign(0.0, 1.0);
    const double A = amp(rng), mm = m(rng), NN = sign(rng) < 0.5 ? -N(rng) : N(rng);
    SweepTable b, l, e;
    for (double eps : sched.values()) {
      const double L = std::log(1.0 / eps);
      b.push_back({eps, A * std::exp(z(rng))});
      l.push_back({eps, A * std::pow(L, mm) * std::exp(z(rng))});
      e.push_back({eps, A * std::pow(eps, -NN) * std::exp(z(rng))});
    }
    r.bounded_correct += fit_growth(b).model == GrowthModel::Bounded;
    r.logpower_correct += fit_growth(l).model == GrowthModel::LogPower;
    r.epspower_correct += fit_growth(e).model == GrowthModel::EpsPower;
  }
  return r;
}

std::uint64_t probe_seed(std::uint64_t fallback) {
  if (const char* s = std::getenv("SINGREG_SEED")) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(s, &end, 10);
    if (end != s && *end == '\0') return v;
    throw InvalidArgument("SINGREG_SEED must be a non-negative integer");
  }
  return fallback;
}

}  // namespace singreg
