#include "singreg/kernels.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>

#include "singreg/error.hpp"
#include "singreg/fft.hpp"
#include "singreg/special.hpp"

namespace singreg {

namespace {

using cd = std::complex<double>;

double hermite(int k, double y) {
  double h0 = 1.0;
  if (k == 0) return h0;
  double h1 = y;
  for (int j = 1; j < k; ++j) {
    const double h2 = y * h1 - j * h0;
    h0 = h1;
    h1 = h2;
  }
  return h1;
}

// M_k(z) = ∫_0^1 ρ^k e^{-zρ} dρ for k = 0, 1, 2
void exp_moments(cd z, cd& m0, cd& m1, cd& m2) {
  if (std::abs(z) < 1.0) {
    cd term = 1.0;  // (-z)^j / j!
    m0 = m1 = m2 = 0.0;
    for (int j = 0; j < 28; ++j) {
      m0 += term / static_cast<double>(j + 1);
      m1 += term / static_cast<double>(j + 2);
      m2 += term / static_cast<double>(j + 3);
      term *= -z / static_cast<double>(j + 1);
    }
    return;
  }
  const cd em = std::exp(-z);
  m0 = (1.0 - em) / z;
  m1 = (1.0 - em * (1.0 + z)) / (z * z);
  m2 = (2.0 - em * (z * z + 2.0 * z + 2.0)) / (z * z * z);
}

// derivative polynomial of exp(i a x^2): ∂^k e^{iax²} = P_k(x) e^{iax²}
cd schrodinger_derivative_factor(int k, double a, double x) {
  std::vector<cd> p{1.0};
  const cd ia(0.0, a);
  for (int j = 0; j < k; ++j) {
    std::vector<cd> q(p.size() + 1, 0.0);
    for (std::size_t m = 1; m < p.size(); ++m) q[m - 1] += static_cast<double>(m) * p[m];
    for (std::size_t m = 0; m < p.size(); ++m) q[m + 1] += 2.0 * ia * p[m];
    p = std::move(q);
  }
  cd s = 0.0, xp = 1.0;
  for (const cd& c : p) {
    s += c * xp;
    xp *= x;
  }
  return s;
}

// closed-form kernel at (s, x, y), s > 0
cd closed_kernel(const PropagatorSpec& spec, double s, double x, double y) {
  const double r2 = spec.dim == 1 ? x * x : x * x + y * y;
  const double pref = std::pow(4.0 * std::numbers::pi * s, -0.5 * spec.dim);
  const int k = spec.x_order();
  if (spec.family == Family::Schrodinger) {
    const double a = 1.0 / (4.0 * s);
    return pref * std::exp(cd(0.0, a * r2)) * schrodinger_derivative_factor(k, a, x);
  }
  const double e = pref * std::exp(-r2 / (4.0 * s));
  const double yy = x / std::sqrt(2.0 * s);
  const double sign = (k % 2 == 0) ? 1.0 : -1.0;
  return sign * std::pow(2.0 * s, -0.5 * k) * hermite(k, yy) * e;
}

// L¹(-support, t] norm of the mollified fractional kernel, Γ(α) restored for α > 0
double time_reduction(double alpha, const MollifierSpec& mspec, double eps, double t) {
  const double L = mspec.scale(eps);
  const double h = std::min(1e-3, 0.01 / L);
  const GridSpec g = kernel_grid(mspec, eps, t, h);
  const MollifiedKernel k = build_mollified_kernel(FracOrder(alpha), mspec, eps, g);
  const double norm = k.l1_on(g.lo(), t);
  return alpha > 0.0 ? gamma_fn(alpha) * norm : norm;
}

BoundTable reduction_table(const PropagatorSpec& spec, double t, std::span<const double> schedule,
                           double alpha, double constant, double closed_power) {
  if (!(t > 0.0)) throw InvalidArgument("bound table: t must be positive");
  std::vector<double> eps_list(schedule.begin(), schedule.end());
  if (eps_list.empty()) eps_list.push_back(spec.eps);
  BoundTable out;
  for (double eps : eps_list) {
    if (eps == 0.0) {
      out.push_back({0.0, constant * std::pow(t, closed_power)});
    } else {
      out.push_back({eps, constant * time_reduction(alpha, spec.mollifier, eps, t)});
    }
  }
  return out;
}

}  // namespace

void PropagatorSpec::validate() const {
  if (dim < 1) throw InvalidArgument("PropagatorSpec: dim must be >= 1");
  if (beta < 0) throw InvalidArgument("PropagatorSpec: beta must be >= 0");
  if (eps < 0.0) throw InvalidArgument("PropagatorSpec: eps must be >= 0");
  if (eps > 0.0) {
    if (mollifier.dim != 1) throw InvalidArgument("PropagatorSpec: time mollifier must be 1-D");
    (void)mollifier.scale(eps);
  }
}

double heat_norm_constant(int k) {
  if (k < 0) throw InvalidArgument("heat_norm_constant: negative order");
  static std::mutex mu;
  static std::map<int, double> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(k);
  if (it != cache.end()) return it->second;
  // split at the roots of He_k so each piece is smooth
  const double R = 14.0;
  std::vector<double> breaks{-R};
  const int scan = 20000;
  double prev = hermite(k, -R);
  for (int i = 1; i <= scan; ++i) {
    const double x = -R + 2.0 * R * i / scan;
    const double v = hermite(k, x);
    if ((v < 0.0) != (prev < 0.0) && k > 0) {
      double a = x - 2.0 * R / scan, b = x;
      for (int it2 = 0; it2 < 200; ++it2) {
        const double m = 0.5 * (a + b);
        if ((hermite(k, m) < 0.0) == (hermite(k, a) < 0.0)) a = m; else b = m;
      }
      breaks.push_back(0.5 * (a + b));
    }
    prev = v;
  }
  breaks.push_back(R);
  double s = 0.0;
  for (std::size_t j = 0; j + 1 < breaks.size(); ++j) {
    const QuadratureRule q = composite_gauss(breaks[j], breaks[j + 1], 32, 16);
    for (std::size_t i = 0; i < q.nodes.size(); ++i) {
      const double z = q.nodes[i];
      s += q.weights[i] * std::abs(hermite(k, z)) * std::exp(-0.5 * z * z);
    }
  }
  const double c = std::pow(2.0, -0.5 * k) * s / std::sqrt(2.0 * std::numbers::pi);
  cache.emplace(k, c);
  return c;
}

TimeMollifiedMultiplier::TimeMollifiedMultiplier(const MollifierSpec& spec, double eps,
                                                 int cells_per_width) {
  if (spec.dim != 1) throw InvalidArgument("TimeMollifiedMultiplier: 1-D mollifier expected");
  if (cells_per_width < 8) throw InvalidArgument("TimeMollifiedMultiplier: too few cells");
  const double L = spec.scale(eps);
  const double radius = profile_support(spec.profile);
  support_ = radius / L;
  lo_ = -support_;
  const auto cells = static_cast<std::size_t>(std::ceil(radius * cells_per_width));
  d_ = 2.0 * support_ / static_cast<double>(cells);
  // nodes and cell midpoints interleaved
  phi_.resize(2 * cells + 1);
  for (std::size_t i = 0; i < phi_.size(); ++i)
    phi_[i] = mollifier_value(spec, eps, lo_ + 0.5 * i * d_);
}

double TimeMollifiedMultiplier::phi_at(double tau) const {
  const double u = (tau - lo_) / d_;
  const double cells = 0.5 * static_cast<double>(phi_.size() - 1);
  if (u <= 0.0 || u >= cells) return 0.0;
  const auto i = std::min(static_cast<std::size_t>(u), phi_.size() / 2 - 1);
  const double r = u - static_cast<double>(i);  // in [0,1]
  const double f0 = phi_[2 * i], fm = phi_[2 * i + 1], f1 = phi_[2 * i + 2];
  // quadratic through r = 0, 1/2, 1
  return f0 * (2.0 * r - 1.0) * (r - 1.0) + fm * 4.0 * r * (1.0 - r) + f1 * r * (2.0 * r - 1.0);
}

std::complex<double> TimeMollifiedMultiplier::segment(cd lambda, double a, double b,
                                                      double t) const {
  a = std::max(a, lo_);
  b = std::min(b, support_);
  if (!(b > a)) return 0.0;
  cd acc = 0.0;
  double p = a;
  while (p < b) {
    const double u = (p - lo_) / d_;
    double q = lo_ + (std::floor(u + 1e-12) + 1.0) * d_;
    if (q > b) q = b;
    const double w = q - p;
    if (w > 0.0) {
      // ρ runs from q (ρ = 0) back to p (ρ = 1); quadratic in ρ through q, mid, p
      cd m0, m1, m2;
      exp_moments(lambda * w, m0, m1, m2);
      const double fq = phi_at(q), fm = phi_at(0.5 * (p + q)), fp = phi_at(p);
      const cd iq = 2.0 * m2 - 3.0 * m1 + m0;
      const cd im = 4.0 * (m1 - m2);
      const cd ip = 2.0 * m2 - m1;
      acc += w * std::exp(-lambda * (t - q)) * (fq * iq + fm * im + fp * ip);
    }
    p = q;
  }
  return acc;
}

std::complex<double> TimeMollifiedMultiplier::operator()(double t, cd lambda) const {
  if (t <= lo_) return 0.0;
  return segment(lambda, lo_, std::min(t, support_), t);
}

std::vector<std::complex<double>> TimeMollifiedMultiplier::series(std::span<const cd> lambdas,
                                                                  double t0, double dt,
                                                                  std::size_t count) const {
  const std::size_t m = lambdas.size();
  std::vector<cd> out(count * m);
  for (std::size_t j = 0; j < m; ++j) {
    const cd lam = lambdas[j];
    const cd decay = std::exp(-lam * dt);
    cd v = (*this)(t0, lam);
    if (count > 0) out[j] = v;
    for (std::size_t k = 1; k < count; ++k) {
      const double ta = t0 + (k - 1) * dt, tb = t0 + k * dt;
      v = decay * v + segment(lam, ta, tb, tb);
      out[k * m + j] = v;
    }
  }
  return out;
}

KernelHandle KernelHandle::closed_form(const PropagatorSpec& spec, double t) {
  spec.validate();
  if (!(t >= 0.0)) throw InvalidArgument("KernelHandle: t must be >= 0");
  KernelHandle h(spec, t);
  if (spec.eps > 0.0) h.mass_ = TimeMollifiedMultiplier(spec.mollifier, spec.eps).mass_before(t);
  return h;
}

KernelHandle KernelHandle::on_grid(const PropagatorSpec& spec, double t, const GridSpec& grid) {
  KernelHandle h = closed_form(spec, t);
  if (spec.dim != grid.dim()) throw InvalidArgument("KernelHandle: grid dimension mismatch");
  h.grid_ = grid;
  h.mult_ = propagator_multipliers(spec, t, grid);
  return h;
}

const GridSpec& KernelHandle::grid() const {
  if (!grid_) throw InvalidArgument("KernelHandle: no grid realization");
  return *grid_;
}

std::complex<double> KernelHandle::value(double x, double y) const {
  if (spec_.eps == 0.0) {
    if (!(t_ > 0.0)) throw InvalidArgument("KernelHandle::value: t must be positive");
    return closed_kernel(spec_, t_, x, y);
  }
  // u = sqrt(t - τ) removes the (t-τ)^{-1/2} endpoint behaviour
  const double L = spec_.mollifier.scale(spec_.eps);
  const double S = profile_support(spec_.mollifier.profile) / L;
  if (t_ <= -S) return 0.0;
  const double u_lo = t_ > S ? std::sqrt(t_ - S) : 0.0;
  const double u_hi = std::sqrt(t_ + S);
  const QuadratureRule q = composite_gauss(u_lo, u_hi, 400, 16);
  cd acc = 0.0;
  for (std::size_t i = 0; i < q.nodes.size(); ++i) {
    const double u = q.nodes[i];
    if (u <= 0.0) continue;
    const double tau = t_ - u * u;
    const double w = mollifier_value(spec_.mollifier, spec_.eps, tau);
    if (w == 0.0) continue;
    acc += q.weights[i] * 2.0 * u * w * closed_kernel(spec_, u * u, x, y);
  }
  return acc;
}

ModeTable mode_table(const PropagatorSpec& spec, const GridSpec& grid) {
  const int k = spec.x_order();
  const auto kx = fft::wavenumbers(grid.points(0), grid.length(0));
  std::vector<double> ky{0.0};
  if (grid.dim() == 2) ky = fft::wavenumbers(grid.points(1), grid.length(1));
  const std::size_t nx = kx.size(), ny = ky.size();
  ModeTable t;
  t.lambda.resize(nx * ny);
  t.derivative.resize(nx * ny);
  const bool odd = k % 2 == 1;
  for (std::size_t i = 0; i < nx; ++i) {
    cd dfac = std::pow(cd(0.0, kx[i]), k);
    if (odd && i == nx / 2) dfac = 0.0;  // Nyquist mode has no sign
    for (std::size_t j = 0; j < ny; ++j) {
      const double l2 = kx[i] * kx[i] + ky[j] * ky[j];
      t.lambda[i * ny + j] = spec.family == Family::Schrodinger ? cd(0.0, l2) : cd(l2, 0.0);
      t.derivative[i * ny + j] = dfac;
    }
  }
  return t;
}

std::vector<std::complex<double>> propagator_multipliers(const PropagatorSpec& spec, double t,
                                                         const GridSpec& grid) {
  const ModeTable modes = mode_table(spec, grid);
  std::vector<cd> m(modes.lambda.size());
  if (spec.eps == 0.0) {
    for (std::size_t i = 0; i < m.size(); ++i)
      m[i] = std::exp(-modes.lambda[i] * t) * modes.derivative[i];
    return m;
  }
  const TimeMollifiedMultiplier tm(spec.mollifier, spec.eps);
  const auto v = tm.series(modes.lambda, t, 1.0, 1);
  for (std::size_t i = 0; i < m.size(); ++i) m[i] = v[i] * modes.derivative[i];
  return m;
}

Field sample_kernel(const KernelHandle& handle, const GridSpec& grid) {
  if (handle.spec().dim != grid.dim()) throw InvalidArgument("sample_kernel: dimension mismatch");
  std::vector<cd> v(grid.size());
  if (grid.dim() == 1) {
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = handle.value(grid.coord(0, i));
  } else {
    const std::size_t ny = grid.points(1);
    for (std::size_t i = 0; i < grid.points(0); ++i)
      for (std::size_t j = 0; j < ny; ++j)
        v[i * ny + j] = handle.value(grid.coord(0, i), grid.coord(1, j));
  }
  if (handle.spec().family == Family::Schrodinger) return Field::complex(grid, std::move(v));
  std::vector<double> r(v.size());
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = v[i].real();
  return Field::real(grid, std::move(r));
}

Field apply_propagator(const KernelHandle& handle, const Field& f) {
  if (!handle.has_grid() || !(handle.grid() == f.grid()))
    throw InvalidArgument("apply_propagator: handle and field grids differ");
  std::vector<cd> data = f.to_complex();
  fft::forward(data, f.grid());
  const auto m = handle.multipliers();
  for (std::size_t i = 0; i < data.size(); ++i) data[i] *= m[i];
  fft::inverse(data, f.grid());
  if (handle.spec().family == Family::Schrodinger || f.is_complex())
    return Field::complex(f.grid(), std::move(data));
  std::vector<double> r(data.size());
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = data[i].real();
  return Field::real(f.grid(), std::move(r));
}

BoundTable heat_l1_bound(const PropagatorSpec& spec, double t, std::span<const double> schedule) {
  if (spec.family != Family::Heat) throw InvalidArgument("heat_l1_bound: Heat family expected");
  const int k = spec.x_order();
  return reduction_table(spec, t, schedule, 1.0 - 0.5 * k, heat_norm_constant(k), -0.5 * k);
}

BoundTable heat_gradient_l1_bound(const PropagatorSpec& spec, double t,
                                  std::span<const double> schedule) {
  if (spec.family != Family::HeatGradient)
    throw InvalidArgument("heat_gradient_l1_bound: HeatGradient family expected");
  const int k = spec.x_order();
  return reduction_table(spec, t, schedule, 1.0 - 0.5 * k, heat_norm_constant(k), -0.5 * k);
}

BoundTable schrodinger_sup_bound(const PropagatorSpec& spec, double t,
                                 std::span<const double> schedule) {
  if (spec.family != Family::Schrodinger)
    throw InvalidArgument("schrodinger_sup_bound: Schrodinger family expected");
  const double power = 0.5 * spec.dim + spec.beta;
  const double c = std::pow(4.0 * std::numbers::pi, -0.5 * spec.dim);
  return reduction_table(spec, t, schedule, 1.0 - power, c, -power);
}

double schrodinger_sup_pointwise(const PropagatorSpec& spec, double t) {
  const double power = 0.5 * spec.dim + spec.beta;
  const double c = std::pow(4.0 * std::numbers::pi, -0.5 * spec.dim);
  if (spec.eps == 0.0) return c * std::pow(t, -power);
  const double alpha = 1.0 - power;
  const double v = mollified_kernel_value(FracOrder(alpha), spec.mollifier, spec.eps, t);
  return c * (alpha > 0.0 ? gamma_fn(alpha) * v : v);
}

}  // namespace singreg
