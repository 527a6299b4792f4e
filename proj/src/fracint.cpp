#include "singreg/fracint.hpp"

#include <cmath>
#include <string>

#include "singreg/error.hpp"
#include "singreg/fft.hpp"
#include "singreg/special.hpp"

namespace singreg {

namespace {

// second difference of k^p at integer k ≥ 1, without cancellation
double second_difference(double k, double p) {
  return std::pow(k, p) * (std::expm1(p * std::log1p(1.0 / k)) +
                           std::expm1(p * std::log1p(-1.0 / k)));
}

constexpr std::size_t kDirectLimit = 2048;

}  // namespace

FracOrder::FracOrder(double alpha) : alpha_(alpha), n_shift_(0) {
  if (!std::isfinite(alpha)) throw InvalidArgument("FracOrder: non-finite alpha");
  while (alpha_ + n_shift_ <= 0.0) ++n_shift_;
}

double phi_alpha(double alpha, double t) {
  if (!(alpha > 0.0))
    throw InvalidArgument("phi_alpha: alpha <= 0 is distributional, use build_mollified_kernel");
  if (t <= 0.0) return 0.0;
  return std::pow(t, alpha - 1.0) / gamma_fn(alpha);
}

std::vector<double> frac_integral(std::span<const double> f, double h, double alpha) {
  return frac_integral_from(f, h, alpha, 0);
}

std::vector<double> frac_integral_from(std::span<const double> f, double h, double alpha,
                                       std::size_t first) {
  if (!(alpha > 0.0)) throw InvalidArgument("frac_integral: alpha must be positive");
  if (!(h > 0.0)) throw InvalidArgument("frac_integral: spacing must be positive");
  const std::size_t n = f.size();
  std::vector<double> out(n, 0.0);
  if (n == 0) return out;
  const double p = alpha + 1.0;
  const double c = std::pow(h, alpha) / gamma_fn(alpha + 2.0);

  // interior weights depend on k = j - i only
  std::vector<double> w(n, 0.0);
  for (std::size_t k = 1; k < n; ++k) w[k] = second_difference(static_cast<double>(k), p);

  const std::size_t begin = std::max<std::size_t>(first, 1);
  std::vector<double> conv;
  const bool use_fft = n > kDirectLimit && begin < n;
  if (use_fft) {
    // Σ_{i=1}^{j-1} w_{j-i} f_i as a linear convolution of f[1..] with w[1..]
    std::vector<double> a(f.begin() + 1, f.end());
    std::vector<double> b(w.begin() + 1, w.end());
    conv = fft::linear_convolution(a, b);
  }
  for (std::size_t j = begin; j < n; ++j) {
    const double jj = static_cast<double>(j);
    const double a0 = std::pow(jj - 1.0, p) - (jj - 1.0 - alpha) * std::pow(jj, alpha);
    double s = a0 * f[0] + f[j];
    if (use_fft) {
      if (j >= 2) s += conv[j - 2];
    } else {
      for (std::size_t i = 1; i < j; ++i) s += w[j - i] * f[i];
    }
    out[j] = c * s;
  }
  return out;
}

double ProductWeights::start(std::size_t j) const {
  if (j == 0) return 0.0;
  const double jj = static_cast<double>(j);
  return scale * (std::pow(jj - 1.0, alpha + 1.0) - (jj - 1.0 - alpha) * std::pow(jj, alpha));
}

ProductWeights product_weights(std::size_t n, double h, double alpha) {
  if (!(alpha > 0.0)) throw InvalidArgument("product_weights: alpha must be positive");
  if (!(h > 0.0)) throw InvalidArgument("product_weights: spacing must be positive");
  ProductWeights w{alpha, std::pow(h, alpha) / gamma_fn(alpha + 2.0), std::vector<double>(n, 0.0)};
  if (n > 0) w.lag[0] = w.scale;
  for (std::size_t k = 1; k < n; ++k) w.lag[k] = w.scale * second_difference(static_cast<double>(k), alpha + 1.0);
  return w;
}

Field frac_integral(const Field& f, double alpha) {
  if (f.grid().dim() != 1) throw InvalidArgument("frac_integral: 1-D field expected");
  auto v = frac_integral(f.real_values(), f.grid().spacing(), alpha);
  return Field::real(f.grid(), std::move(v));
}

double MollifiedKernel::l1_on(double lo, double hi) const { return lp_norm_on(samples, 1.0, lo, hi); }

std::size_t MollifiedKernel::origin_index() const {
  const GridSpec& g = samples.grid();
  return static_cast<std::size_t>(std::llround(-g.lo() / g.spacing()));
}

GridSpec kernel_grid(const MollifierSpec& spec, double eps, double T, double h) {
  if (!(T > 0.0) || !(h > 0.0)) throw InvalidArgument("kernel_grid: T and h must be positive");
  const double L = spec.scale(eps);
  const double support = profile_support(spec.profile) / L;
  const double m = std::ceil(support / h);
  const double lo = -m * h;
  const auto needed = static_cast<std::size_t>(std::ceil((T - lo) / h)) + 1;
  const std::size_t n = std::max<std::size_t>(8, next_power_of_two(needed));
  return GridSpec::line(lo, lo + static_cast<double>(n) * h, n);
}

MollifiedKernel build_mollified_kernel(const FracOrder& order, const MollifierSpec& spec,
                                       double eps, const GridSpec& grid) {
  if (grid.dim() != 1 || spec.dim != 1)
    throw InvalidArgument("build_mollified_kernel: 1-D time kernels only");
  const double h = grid.spacing();
  const double m = -grid.lo() / h;
  if (std::abs(m - std::round(m)) > 1e-6 || m < 0)
    throw InvalidArgument("build_mollified_kernel: grid must have a node at t = 0");
  const Field psi = sample_mollifier_derivative(spec, eps, grid, order.n_shift());
  const double beta = order.n_shift() > 0 ? order.shifted() : order.alpha();
  auto v = frac_integral(psi.real_values(), h, beta);
  return MollifiedKernel{order, spec, eps, Field::real(grid, std::move(v))};
}

double mollified_kernel_value(const FracOrder& order, const MollifierSpec& spec, double eps,
                              double t) {
  const double L = spec.scale(eps);
  const double S = profile_support(spec.profile) / L;
  if (t <= -S) return 0.0;
  const int n = order.n_shift();
  const double beta = n > 0 ? order.shifted() : order.alpha();
  const std::size_t panels = spec.profile == ProfileKind::Bump ? 512 : 4096;
  if (beta >= 1.0) {
    const QuadratureRule q = composite_gauss(-S, std::min(t, S), panels, 16);
    double s = 0.0;
    for (std::size_t i = 0; i < q.nodes.size(); ++i)
      s += q.weights[i] * std::pow(t - q.nodes[i], beta - 1.0) *
           mollifier_derivative(spec, eps, q.nodes[i], n);
    return s / gamma_fn(beta);
  }
  // weak singularity at s = t removed by u = (t - s)^β
  const double u_lo = t > S ? std::pow(t - S, beta) : 0.0;
  const double u_hi = std::pow(t + S, beta);
  const QuadratureRule q = composite_gauss(u_lo, u_hi, panels, 16);
  double s = 0.0;
  for (std::size_t i = 0; i < q.nodes.size(); ++i) {
    const double sarg = t - std::pow(q.nodes[i], 1.0 / beta);
    s += q.weights[i] * mollifier_derivative(spec, eps, sarg, n);
  }
  return s / gamma_fn(beta + 1.0);
}

BoundTable lemma1_bound_report(const FracOrder& order, const MollifierSpec& spec,
                               std::span<const double> schedule, double T, double h) {
  if (schedule.empty()) throw InvalidArgument("lemma1_bound_report: empty schedule");
  BoundTable out;
  out.reserve(schedule.size());
  for (double eps : schedule) {
    const double L = spec.scale(eps);
    const double hh = std::min(h, 0.01 / L);
    const GridSpec g = kernel_grid(spec, eps, T, hh);
    const MollifiedKernel k = build_mollified_kernel(order, spec, eps, g);
    out.push_back({eps, k.l1_on(g.lo(), T)});
  }
  return out;
}

}  // namespace singreg
