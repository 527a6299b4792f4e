#include "singreg/regularize.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "singreg/error.hpp"
#include "singreg/fft.hpp"
#include "singreg/special.hpp"

namespace singreg {

namespace {

using cd = std::complex<double>;

double sgn(double u) { return u > 0.0 ? 1.0 : (u < 0.0 ? -1.0 : 0.0); }

// offset of node j from the origin on a periodic axis
double offset(std::size_t j, std::size_t n, double h) {
  return j < n / 2 ? static_cast<double>(j) * h
                   : (static_cast<double>(j) - static_cast<double>(n)) * h;
}

// samples of a function of the periodic offset, laid out like the grid
std::vector<cd> offset_samples(const GridSpec& g,
                               const std::function<double(double, double)>& f) {
  std::vector<cd> v(g.size());
  if (g.dim() == 1) {
    for (std::size_t j = 0; j < g.points(0); ++j)
      v[j] = f(offset(j, g.points(0), g.spacing(0)), 0.0);
  } else {
    const std::size_t ny = g.points(1);
    for (std::size_t i = 0; i < g.points(0); ++i)
      for (std::size_t j = 0; j < ny; ++j)
        v[i * ny + j] = f(offset(i, g.points(0), g.spacing(0)), offset(j, ny, g.spacing(1)));
  }
  return v;
}

std::function<double(double, double)> mollifier_fn(const MollifierSpec& spec, double eps, int k) {
  const double L = spec.scale(eps);
  const double amp = std::pow(L, spec.amplitude_exponent * spec.dim + k);
  const ProfileKind kind = spec.profile;
  if (spec.dim == 1)
    return [=](double x, double) { return amp * profile_derivative(kind, x * L, k); };
  return [=](double x, double y) { return amp * profile_derivative(kind, x * L, y * L, k); };
}

Field real_part(const GridSpec& g, const std::vector<cd>& v) {
  std::vector<double> r(v.size());
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = v[i].real();
  return Field::real(g, std::move(r));
}

}  // namespace

void NonlinearitySpec::validate() const {
  if (model == NonlinearityModel::Linear) return;
  if (!(b > 0.0)) throw InvalidArgument("nonlinearity: cut-off exponent b must be positive");
  if (b >= 1.0 && !override_guard)
    throw GuardViolation("nonlinearity: requires b < 1 for moderate solutions (b = " +
                         std::to_string(b) + ")");
  if (model == NonlinearityModel::PowerLaw && !(gamma > 0.0 && gamma < 1.0))
    throw InvalidArgument("nonlinearity: PowerLaw needs gamma in (0,1)");
  if (model == NonlinearityModel::Custom) {
    if (custom_u.size() < 2 || custom_u.size() != custom_g.size())
      throw InvalidArgument("nonlinearity: Custom needs at least two (u, g) samples");
    for (std::size_t i = 1; i < custom_u.size(); ++i)
      if (!(custom_u[i] > custom_u[i - 1]))
        throw InvalidArgument("nonlinearity: Custom abscissae must increase");
  }
}

RegularizedNonlinearity::RegularizedNonlinearity(const NonlinearitySpec& spec, double eps)
    : spec_(spec), eps_(eps) {
  spec.validate();
  if (eps < 0.0) throw InvalidArgument("regularize_nonlinearity: eps must be >= 0");
  if (eps == 0.0) {
    if (spec.model == NonlinearityModel::Extremal)
      throw InvalidArgument("regularize_nonlinearity: Extremal family has no eps = 0 member");
    return;
  }
  L_ = spec.scale(eps);
  switch (spec.model) {
    case NonlinearityModel::PowerLaw:
      delta_ = std::pow(L_, -spec.b / (1.0 - spec.gamma));
      break;
    case NonlinearityModel::SqrtAbs:
      delta_ = std::pow(L_, -spec.b / 0.5);
      break;
    case NonlinearityModel::PiecewiseStep:
    case NonlinearityModel::Custom:
      delta_ = std::pow(L_, -spec.b);
      break;
    case NonlinearityModel::Quadratic:
      delta_ = std::pow(L_, spec.b);  // clamp radius R
      break;
    case NonlinearityModel::Linear:
    case NonlinearityModel::Extremal:
      delta_ = 0.0;
      break;
  }
}

bool RegularizedNonlinearity::is_odd() const noexcept {
  switch (spec_.model) {
    case NonlinearityModel::SqrtAbs:
    case NonlinearityModel::Quadratic:
      return false;
    case NonlinearityModel::Custom:
      return false;
    default:
      return true;
  }
}

double RegularizedNonlinearity::custom_linear(double u) const {
  const auto& xs = spec_.custom_u;
  const auto& ys = spec_.custom_g;
  if (u <= xs.front()) return ys.front();
  if (u >= xs.back()) return ys.back();
  const auto it = std::upper_bound(xs.begin(), xs.end(), u);
  const std::size_t i = static_cast<std::size_t>(it - xs.begin()) - 1;
  const double f = (u - xs[i]) / (xs[i + 1] - xs[i]);
  return ys[i] + f * (ys[i + 1] - ys[i]);
}

double RegularizedNonlinearity::custom_slope(double u) const {
  const auto& xs = spec_.custom_u;
  const auto& ys = spec_.custom_g;
  if (u <= xs.front() || u >= xs.back()) return 0.0;
  const auto it = std::upper_bound(xs.begin(), xs.end(), u);
  const std::size_t i = static_cast<std::size_t>(it - xs.begin()) - 1;
  return (ys[i + 1] - ys[i]) / (xs[i + 1] - xs[i]);
}

double RegularizedNonlinearity::limit(double u) const {
  const double c = spec_.coefficient;
  switch (spec_.model) {
    case NonlinearityModel::PowerLaw:
      return c * sgn(u) * std::pow(std::abs(u), spec_.gamma);
    case NonlinearityModel::SqrtAbs:
      return c * std::sqrt(std::abs(u));
    case NonlinearityModel::PiecewiseStep:
      return c * sgn(u);
    case NonlinearityModel::Quadratic:
      return 0.5 * c * u * u;
    case NonlinearityModel::Linear:
      return c * u;
    case NonlinearityModel::Extremal:
      return c * std::pow(L_, spec_.b) * u;  // no ε-independent limit
    case NonlinearityModel::Custom:
      return c * custom_linear(u);
  }
  return 0.0;
}

double RegularizedNonlinearity::operator()(double u) const {
  const double c = spec_.coefficient;
  if (eps_ == 0.0) return limit(u);
  const double a = std::abs(u);
  const double d = delta_;
  switch (spec_.model) {
    case NonlinearityModel::PowerLaw:
    case NonlinearityModel::SqrtAbs: {
      const double g = spec_.model == NonlinearityModel::PowerLaw ? spec_.gamma : 0.5;
      if (a >= 2.0 * d) return limit(u);
      // odd core u δ^{γ-1} or even core u² δ^{γ-2}; both meet |u|^γ at |u| = δ
      const double core = spec_.model == NonlinearityModel::PowerLaw ? a * std::pow(d, g - 1.0)
                                                                     : a * a * std::pow(d, g - 2.0);
      const double s = smooth_step((a - d) / d);
      const double mag = (1.0 - s) * core + s * std::pow(a, g);
      return spec_.model == NonlinearityModel::PowerLaw ? c * sgn(u) * mag : c * mag;
    }
    case NonlinearityModel::PiecewiseStep:
      return c * sgn(u) * smooth_step(a / d);
    case NonlinearityModel::Quadratic:
      return 0.5 * c * u * u * (1.0 - smooth_step((a - d) / d));
    case NonlinearityModel::Linear:
    case NonlinearityModel::Extremal:
      return limit(u);
    case NonlinearityModel::Custom: {
      const QuadratureRule& q = gauss_legendre(48);
      double s = 0.0;
      for (std::size_t i = 0; i < q.nodes.size(); ++i)
        s += q.weights[i] * profile_value(ProfileKind::Bump, q.nodes[i]) *
             custom_linear(u - d * q.nodes[i]);
      return c * s;
    }
  }
  return 0.0;
}

double RegularizedNonlinearity::derivative(double u) const {
  const double c = spec_.coefficient;
  const double a = std::abs(u);
  const double d = delta_;
  switch (spec_.model) {
    case NonlinearityModel::PowerLaw:
    case NonlinearityModel::SqrtAbs: {
      const double g = spec_.model == NonlinearityModel::PowerLaw ? spec_.gamma : 0.5;
      const bool odd = spec_.model == NonlinearityModel::PowerLaw;
      // derivative of the magnitude in a; chain rule with sign
      double dmag;
      if (eps_ == 0.0 || a >= 2.0 * d) {
        if (a == 0.0) return std::numeric_limits<double>::infinity();
        dmag = g * std::pow(a, g - 1.0);
      } else {
        const double core = odd ? a * std::pow(d, g - 1.0) : a * a * std::pow(d, g - 2.0);
        const double dcore = odd ? std::pow(d, g - 1.0) : 2.0 * a * std::pow(d, g - 2.0);
        const double s = smooth_step((a - d) / d);
        const double ds = smooth_step_derivative((a - d) / d) / d;
        const double pw = a > 0.0 ? std::pow(a, g) : 0.0;
        const double dpw = (a > 0.0 && s > 0.0) ? g * std::pow(a, g - 1.0) : 0.0;
        dmag = (1.0 - s) * dcore - ds * core + ds * pw + s * dpw;
      }
      return odd ? c * dmag : c * sgn(u) * dmag;
    }
    case NonlinearityModel::PiecewiseStep:
      if (eps_ == 0.0) return 0.0;
      return c * smooth_step_derivative(a / d) / d;
    case NonlinearityModel::Quadratic: {
      if (eps_ == 0.0) return c * u;
      const double s = smooth_step((a - d) / d);
      const double ds = smooth_step_derivative((a - d) / d) / d;
      return c * u * (1.0 - s) - 0.5 * c * u * u * ds * sgn(u);
    }
    case NonlinearityModel::Linear:
      return c;
    case NonlinearityModel::Extremal:
      return c * std::pow(L_, spec_.b);
    case NonlinearityModel::Custom: {
      if (eps_ == 0.0) return c * custom_slope(u);
      const QuadratureRule& q = gauss_legendre(48);
      double s = 0.0;
      for (std::size_t i = 0; i < q.nodes.size(); ++i)
        s += q.weights[i] * profile_value(ProfileKind::Bump, q.nodes[i]) *
             custom_slope(u - d * q.nodes[i]);
      return c * s;
    }
  }
  return 0.0;
}

RegularizedNonlinearity regularize_nonlinearity(const NonlinearitySpec& spec, double eps) {
  return RegularizedNonlinearity(spec, eps);
}

double lipschitz_probe(const std::function<double(double)>& map, double lo, double hi,
                       std::size_t samples, std::uint64_t seed) {
  if (!(hi > lo)) throw InvalidArgument("lipschitz_probe: empty region");
  if (samples < 2) throw InvalidArgument("lipschitz_probe: need at least two samples");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(lo, hi);
  std::vector<double> xs(samples);
  for (auto& x : xs) x = u(rng);
  std::vector<double> ys(samples);
  for (std::size_t i = 0; i < samples; ++i) ys[i] = map(xs[i]);
  double best = 0.0;
  // random pairs
  std::uniform_int_distribution<std::size_t> pick(0, samples - 1);
  for (std::size_t r = 0; r < samples; ++r) {
    const std::size_t i = pick(rng), j = pick(rng);
    if (xs[i] == xs[j]) continue;
    best = std::max(best, std::abs(ys[i] - ys[j]) / std::abs(xs[i] - xs[j]));
  }
  // neighbours on the sorted lattice catch the small-scale slopes
  std::vector<std::size_t> order(samples);
  for (std::size_t i = 0; i < samples; ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return xs[a] < xs[b]; });
  for (std::size_t k = 1; k < samples; ++k) {
    const std::size_t i = order[k - 1], j = order[k];
    if (xs[i] == xs[j]) continue;
    best = std::max(best, std::abs(ys[i] - ys[j]) / (xs[j] - xs[i]));
  }
  return best;
}

double KernelFunctionSpec::max_b() const {
  double b = 0.0;
  for (const auto& c : components)
    if (c.model != NonlinearityModel::Linear) b = std::max(b, c.b);
  return b;
}

void KernelFunctionSpec::validate() const {
  if (components.empty()) throw InvalidArgument("KernelFunctionSpec: no components");
  const std::size_t n = components.size();
  if (!coupling.empty()) {
    if (coupling.size() != n) throw InvalidArgument("KernelFunctionSpec: coupling must be n x n");
    for (const auto& row : coupling)
      if (row.size() != n) throw InvalidArgument("KernelFunctionSpec: coupling must be n x n");
  }
  if (!lambda.empty() && lambda.size() != n)
    throw InvalidArgument("KernelFunctionSpec: lambda must have n entries");
  for (const auto& c : components) c.validate();
}

SingularDataSpec SingularDataSpec::delta(const MollifierSpec& m, double position, int order,
                                         double coefficient) {
  SingularDataSpec s;
  s.kind = Kind::DeltaSum;
  s.mollifier = m;
  s.deltas.push_back({position, 0.0, order, coefficient});
  return s;
}

Field convolve_mollifier(const Field& f, const MollifierSpec& spec, double eps, int k) {
  const GridSpec& g = f.grid();
  if (spec.dim != g.dim()) throw InvalidArgument("convolve_mollifier: dimension mismatch");
  check_resolution(spec, eps, g);
  std::vector<cd> kernel = offset_samples(g, mollifier_fn(spec, eps, k));
  std::vector<cd> data = f.to_complex();
  fft::forward(kernel, g);
  fft::forward(data, g);
  const double vol = g.cell_volume();
  for (std::size_t i = 0; i < data.size(); ++i) data[i] *= kernel[i] * vol;
  fft::inverse(data, g);
  return f.is_complex() ? Field::complex(g, std::move(data)) : real_part(g, data);
}

Field regularize_data(const SingularDataSpec& spec, double eps, const GridSpec& grid) {
  const MollifierSpec& m = spec.mollifier;
  m.validate();
  if (m.dim != grid.dim()) throw InvalidArgument("regularize_data: dimension mismatch");
  check_resolution(m, eps, grid);
  switch (spec.kind) {
    case SingularDataSpec::Kind::DeltaSum: {
      const auto fn_cache = [&](int k) { return mollifier_fn(m, eps, k); };
      std::vector<double> v(grid.size(), 0.0);
      for (const DeltaTerm& d : spec.deltas) {
        if (d.order < 0) throw InvalidArgument("regularize_data: negative delta order");
        const auto fn = fn_cache(d.order);
        if (grid.dim() == 1) {
          for (std::size_t i = 0; i < v.size(); ++i)
            v[i] += d.coefficient * fn(grid.coord(0, i) - d.position, 0.0);
        } else {
          const std::size_t ny = grid.points(1);
          for (std::size_t i = 0; i < grid.points(0); ++i)
            for (std::size_t j = 0; j < ny; ++j)
              v[i * ny + j] += d.coefficient * fn(grid.coord(0, i) - d.position,
                                                  grid.coord(1, j) - d.position_y);
        }
      }
      return Field::real(grid, std::move(v));
    }
    case SingularDataSpec::Kind::FracPower: {
      if (!spec.psi) throw InvalidArgument("regularize_data: FracPower needs psi");
      if (!(spec.psi->grid() == grid)) throw InvalidArgument("regularize_data: psi grid differs");
      if (!(spec.k > 0.0)) throw InvalidArgument("regularize_data: FracPower needs k > 0");
      if (spec.route == FracPowerRoute::Direct) {
        const double r = std::round(spec.k);
        if (std::abs(spec.k - r) > 1e-12 || static_cast<long>(r) % 2 != 0)
          throw InvalidArgument("regularize_data: direct route needs an even integer k");
        const int kk = static_cast<int>(r);
        const double sign = (kk / 2) % 2 == 0 ? 1.0 : -1.0;
        return convolve_mollifier(*spec.psi, m, eps, kk).scaled(sign);
      }
      std::vector<cd> kernel = offset_samples(grid, mollifier_fn(m, eps, 0));
      std::vector<cd> data = spec.psi->to_complex();
      fft::forward(kernel, grid);
      fft::forward(data, grid);
      const auto kx = fft::wavenumbers(grid.points(0), grid.length(0));
      std::vector<double> ky{0.0};
      if (grid.dim() == 2) ky = fft::wavenumbers(grid.points(1), grid.length(1));
      const double vol = grid.cell_volume();
      for (std::size_t i = 0; i < kx.size(); ++i)
        for (std::size_t j = 0; j < ky.size(); ++j) {
          const std::size_t idx = i * ky.size() + j;
          const double xi = std::sqrt(kx[i] * kx[i] + ky[j] * ky[j]);
          data[idx] *= kernel[idx] * vol * std::pow(xi, spec.k);
        }
      fft::inverse(data, grid);
      return real_part(grid, data);
    }
    case SingularDataSpec::Kind::Distribution: {
      if (grid.dim() != 1) throw InvalidArgument("regularize_data: Distribution data is 1-D");
      const CutoffPlateau plateau{spec.interval_lo, spec.interval_hi, eps};
      const double L = m.scale(eps);
      const double h = grid.spacing();
      const auto reach = static_cast<long>(std::ceil(profile_support(m.profile) / (L * h)));
      const long n = static_cast<long>(grid.size());
      std::vector<double> out(grid.size(), 0.0);
      for (const DistributionTerm& term : spec.terms) {
        if (term.order < 0) throw InvalidArgument("regularize_data: negative derivative order");
        std::vector<double> ck(grid.size());
        for (std::size_t i = 0; i < ck.size(); ++i) {
          const double x = grid.coord(0, i);
          ck[i] = term.density(x) * plateau_value(plateau, x);
        }
        std::vector<double> kern(2 * reach + 1);
        for (long j = -reach; j <= reach; ++j)
          kern[j + reach] = mollifier_derivative(m, eps, j * h, term.order);
        // non-periodic: c κ_ε vanishes outside the interval
        for (long i = 0; i < n; ++i) {
          double s = 0.0;
          for (long j = -reach; j <= reach; ++j) {
            const long src = i - j;
            if (src < 0 || src >= n) continue;
            s += kern[j + reach] * ck[src];
          }
          out[i] += h * s;
        }
      }
      return Field::real(grid, std::move(out));
    }
  }
  throw InvalidArgument("regularize_data: unknown kind");
}

}  // namespace singreg
