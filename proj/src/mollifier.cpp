#include "singreg/mollifier.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <vector>

#include "singreg/error.hpp"
#include "singreg/special.hpp"

namespace singreg {

namespace {

// Moment-vanishing profile: χ = 1 on |ξ| ≤ 1, smooth descent to 0 at |ξ| = 4.
constexpr double kFlatTop = 1.0;
constexpr double kTransition = 3.0;
constexpr double kBandLimit = kFlatTop + kTransition;
constexpr double kMomentVanishingRadius = 100.0;

double chi(double xi) {
  const double a = std::abs(xi);
  return 1.0 - smooth_step((a - kFlatTop) / kTransition);
}

double bump_raw(double u) { return u > 0.0 ? std::exp(-1.0 / u) : 0.0; }

struct BumpNorms {
  double c1;
  double c2;
};

const BumpNorms& bump_norms() {
  static const BumpNorms norms = [] {
    const QuadratureRule q = composite_gauss(-1.0, 1.0, 64, 16);
    double s1 = 0.0;
    for (std::size_t i = 0; i < q.nodes.size(); ++i)
      s1 += q.weights[i] * bump_raw(1.0 - q.nodes[i] * q.nodes[i]);
    const QuadratureRule r = composite_gauss(0.0, 1.0, 64, 16);
    double s2 = 0.0;
    for (std::size_t i = 0; i < r.nodes.size(); ++i)
      s2 += r.weights[i] * r.nodes[i] * bump_raw(1.0 - r.nodes[i] * r.nodes[i]);
    return BumpNorms{1.0 / s1, 1.0 / (2.0 * std::numbers::pi * s2)};
  }();
  return norms;
}

// k-th derivative in x of exp(-1/(c - x^2)) via Taylor jets in the shift t.
double bump_jet(double c, double x, int k) {
  const double u0 = c - x * x;
  if (u0 <= 0.0) return 0.0;
  const double e0 = std::exp(-1.0 / u0);
  if (e0 == 0.0) return 0.0;
  if (k == 0) return e0;
  const double u1 = -2.0 * x;
  std::vector<double> w(k + 1), e(k + 1);
  w[0] = 1.0 / u0;
  for (int j = 1; j <= k; ++j) {
    double s = u1 * w[j - 1];
    if (j >= 2) s -= w[j - 2];  // u2 = -1
    w[j] = -s / u0;
  }
  // v = -w, e = exp(v)
  e[0] = e0;
  for (int j = 1; j <= k; ++j) {
    double s = 0.0;
    for (int i = 1; i <= j; ++i) s += i * (-w[i]) * e[j - i];
    e[j] = s / j;
  }
  double fact = 1.0;
  for (int j = 2; j <= k; ++j) fact *= j;
  return fact * e[k];
}

struct SpectralTable {
  std::vector<double> xi;
  std::vector<double> weight;  // χ(ξ) ξ^k w / π
};

const SpectralTable& spectral_table(int k) {
  static std::mutex mu;
  static std::map<int, SpectralTable> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(k);
  if (it != cache.end()) return it->second;
  SpectralTable t;
  const QuadratureRule inner = composite_gauss(0.0, kFlatTop, 8, 16);
  const QuadratureRule outer = composite_gauss(kFlatTop, kBandLimit, 24, 16);
  for (const QuadratureRule* q : {&inner, &outer}) {
    for (std::size_t i = 0; i < q->nodes.size(); ++i) {
      const double xi = q->nodes[i];
      t.xi.push_back(xi);
      t.weight.push_back(q->weights[i] * chi(xi) * std::pow(xi, k) / std::numbers::pi);
    }
  }
  return cache.emplace(k, std::move(t)).first->second;
}

double moment_vanishing_derivative(double x, int k) {
  const SpectralTable& t = spectral_table(k);
  const double phase = 0.5 * std::numbers::pi * k;
  double s = 0.0;
  for (std::size_t i = 0; i < t.xi.size(); ++i) s += t.weight[i] * std::cos(x * t.xi[i] + phase);
  return s;
}

double amplitude(const MollifierSpec& spec, double L) {
  return std::pow(L, spec.amplitude_exponent * spec.dim);
}

}  // namespace

ScaleLaw ScaleLaw::power(double gamma) {
  if (!(gamma > 0.0)) throw InvalidArgument("ScaleLaw::power: gamma must be positive");
  return ScaleLaw(Kind::Power, gamma);
}

bool ScaleLaw::valid(double eps) const noexcept {
  switch (kind_) {
    case Kind::Log:
      return eps > 0.0 && eps < 1.0;
    case Kind::LogLog:
      return eps > 0.0 && eps < std::exp(-1.0);
    case Kind::Power:
      return eps > 0.0 && eps < 1.0;
  }
  return false;
}

double ScaleLaw::operator()(double eps) const {
  if (!valid(eps))
    throw InvalidArgument("ScaleLaw " + name() + ": eps=" + std::to_string(eps) +
                          " outside validity range");
  switch (kind_) {
    case Kind::Log:
      return -std::log(eps);
    case Kind::LogLog:
      return std::log(-std::log(eps));
    case Kind::Power:
      return std::pow(eps, -gamma_);
  }
  return 0.0;
}

std::string ScaleLaw::name() const {
  switch (kind_) {
    case Kind::Log:
      return "log";
    case Kind::LogLog:
      return "loglog";
    case Kind::Power:
      return "power(" + std::to_string(gamma_) + ")";
  }
  return "?";
}

void MollifierSpec::validate() const {
  if (dim < 1 || dim > 2) throw InvalidArgument("MollifierSpec: dim must be 1 or 2");
  if (!(amplitude_exponent > 0.0))
    throw InvalidArgument("MollifierSpec: amplitude exponent a must be positive");
  if (moment_order < 0) throw InvalidArgument("MollifierSpec: moment order must be >= 0");
}

double profile_support(ProfileKind kind) {
  return kind == ProfileKind::Bump ? 1.0 : kMomentVanishingRadius;
}

double profile_value(ProfileKind kind, double x) { return profile_derivative(kind, x, 0); }

double profile_value(ProfileKind kind, double x, double y) {
  return profile_derivative(kind, x, y, 0);
}

double profile_derivative(ProfileKind kind, double x, int k) {
  if (k < 0) throw InvalidArgument("profile_derivative: negative order");
  if (kind == ProfileKind::Bump) return bump_norms().c1 * bump_jet(1.0, x, k);
  if (std::abs(x) > kMomentVanishingRadius) return 0.0;
  return moment_vanishing_derivative(x, k);
}

double profile_derivative(ProfileKind kind, double x, double y, int k) {
  if (k < 0) throw InvalidArgument("profile_derivative: negative order");
  if (kind == ProfileKind::Bump) return bump_norms().c2 * bump_jet(1.0 - y * y, x, k);
  if (std::abs(x) > kMomentVanishingRadius || std::abs(y) > kMomentVanishingRadius) return 0.0;
  return moment_vanishing_derivative(x, k) * moment_vanishing_derivative(y, 0);
}

double profile_fourier(ProfileKind kind, double xi) {
  if (kind == ProfileKind::MomentVanishing) return chi(xi);
  static const QuadratureRule q = composite_gauss(0.0, 1.0, 64, 16);
  double s = 0.0;
  for (std::size_t i = 0; i < q.nodes.size(); ++i)
    s += q.weights[i] * profile_value(kind, q.nodes[i]) * std::cos(xi * q.nodes[i]);
  return 2.0 * s;
}

double mollifier_value(const MollifierSpec& spec, double eps, double x) {
  return mollifier_derivative(spec, eps, x, 0);
}

double mollifier_derivative(const MollifierSpec& spec, double eps, double x, int k) {
  if (spec.dim != 1) throw InvalidArgument("mollifier_derivative: 1-D spec expected");
  const double L = spec.scale(eps);
  return amplitude(spec, L) * std::pow(L, k) * profile_derivative(spec.profile, x * L, k);
}

void check_resolution(const MollifierSpec& spec, double eps, const GridSpec& grid) {
  const double L = spec.scale(eps);
  const double width = 2.0 / L;
  for (int axis = 0; axis < grid.dim(); ++axis) {
    const double h = grid.spacing(axis);
    if (width < 8.0 * h)
      throw ResolutionError("mollifier width 2/L=" + std::to_string(width) +
                                " spans fewer than 8 cells; need spacing <= " +
                                std::to_string(width / 8.0),
                            width / 8.0);
  }
}

Field sample_mollifier(const MollifierSpec& spec, double eps, const GridSpec& grid) {
  return sample_mollifier_derivative(spec, eps, grid, 0);
}

Field sample_mollifier_derivative(const MollifierSpec& spec, double eps,
                                  const GridSpec& grid, int k) {
  spec.validate();
  if (spec.dim != grid.dim()) throw InvalidArgument("sample_mollifier: dimension mismatch");
  check_resolution(spec, eps, grid);
  const double L = spec.scale(eps);
  const double amp = amplitude(spec, L) * std::pow(L, k);
  const ProfileKind kind = spec.profile;
  if (grid.dim() == 1)
    return Field::sample(grid, [&](double x) { return amp * profile_derivative(kind, x * L, k); });
  return Field::sample(grid, [&](double x, double y) {
    return amp * profile_derivative(kind, x * L, y * L, k);
  });
}

double mollifier_derivative_l1(const MollifierSpec& spec, double eps, int k) {
  spec.validate();
  if (k < 0) throw InvalidArgument("mollifier_derivative_l1: negative order");
  if (k > 12) throw ResolutionError("mollifier_derivative_l1: order above 12 not resolved", 0.0);
  const double L = spec.scale(eps);
  const double R = profile_support(spec.profile);
  const double amp = amplitude(spec, L) * std::pow(L, k);
  const double a = -R / L, b = R / L;
  const std::size_t panels = spec.profile == ProfileKind::Bump ? 2048 : 8192;
  const QuadratureRule q = composite_gauss(a, b, panels, 8);
  if (spec.dim == 1) {
    double s = 0.0;
    for (std::size_t i = 0; i < q.nodes.size(); ++i)
      s += q.weights[i] * std::abs(profile_derivative(spec.profile, q.nodes[i] * L, k));
    return amp * s;
  }
  if (spec.profile == ProfileKind::MomentVanishing) {
    double sx = 0.0, sy = 0.0;
    for (std::size_t i = 0; i < q.nodes.size(); ++i) {
      sx += q.weights[i] * std::abs(profile_derivative(spec.profile, q.nodes[i] * L, k));
      sy += q.weights[i] * std::abs(profile_derivative(spec.profile, q.nodes[i] * L, 0));
    }
    return amp * sx * sy;
  }
  const QuadratureRule q2 = composite_gauss(a, b, 256, 8);
  double s = 0.0;
  for (std::size_t i = 0; i < q2.nodes.size(); ++i)
    for (std::size_t j = 0; j < q2.nodes.size(); ++j)
      s += q2.weights[i] * q2.weights[j] *
           std::abs(profile_derivative(spec.profile, q2.nodes[i] * L, q2.nodes[j] * L, k));
  return amp * s;
}

double plateau_value(const CutoffPlateau& p, double x) {
  if (!(p.hi - p.lo > 4.0 * p.eps) || p.eps < 0.0)
    throw InvalidArgument("CutoffPlateau: requires hi - lo > 4 eps and eps >= 0");
  if (p.eps == 0.0) return (x > p.lo && x < p.hi) ? 1.0 : 0.0;
  const double e = p.eps;
  if (x <= p.lo + e || x >= p.hi - e) return 0.0;
  if (x >= p.lo + 2.0 * e && x <= p.hi - 2.0 * e) return 1.0;
  if (x < p.lo + 2.0 * e) return smooth_step((x - p.lo - e) / e);
  return smooth_step((p.hi - e - x) / e);
}

Field sample_plateau(const CutoffPlateau& p, const GridSpec& grid) {
  if (grid.dim() != 1) throw InvalidArgument("sample_plateau: 1-D grids only");
  return Field::sample(grid, [&](double x) { return plateau_value(p, x); });
}

}  // namespace singreg
