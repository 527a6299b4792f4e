#include "singreg/volterra.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "singreg/error.hpp"
#include "singreg/fracint.hpp"
#include "singreg/parallel.hpp"
#include "singreg/special.hpp"

namespace singreg {

namespace {

// Assembled discrete operator of one problem at one ε.
struct Discrete {
  std::size_t N = 0;
  std::size_t n = 0;
  double h = 0.0;
  GridSpec grid = GridSpec::line(0.0, 1.0, 8);
  std::vector<RegularizedNonlinearity> g;
  std::vector<std::vector<double>> C;
  std::vector<double> lambda;
  bool zero = false;
  // eps > 0: trapezoid on R samples; eps = 0: product weights of the polar kernel
  std::vector<double> R;
  std::optional<ProductWeights> pw;
  double gamma_alpha = 1.0;

  double weight(std::size_t j, std::size_t i) const {
    if (pw) {
      const double w = i == 0 ? pw->start(j) : pw->lag[j - i];
      return gamma_alpha * w;
    }
    const double trap = (i == 0 || i == j) ? 0.5 : 1.0;
    return h * trap * R[j - i];
  }

  std::vector<double> z_of(const double* f) const {
    std::vector<double> z(n);
    for (std::size_t a = 0; a < n; ++a) {
      if (C.empty()) {
        z[a] = f[a];
        continue;
      }
      double s = 0.0;
      for (std::size_t b = 0; b < n; ++b) s += C[a][b] * f[b];
      z[a] = s;
    }
    return z;
  }

  void apply_K(const double* f, double* out) const {
    if (zero) {
      std::fill(out, out + n, 0.0);
      return;
    }
    const auto z = z_of(f);
    for (std::size_t a = 0; a < n; ++a) out[a] = lambda[a] * g[a](z[a]);
  }

  // (∫₀¹ ∇K(f + θF) dθ) F
  void apply_mean_slope(const double* f, const double* F, double* out) const {
    if (zero) {
      std::fill(out, out + n, 0.0);
      return;
    }
    static const QuadratureRule q = [] {
      QuadratureRule r = gauss_legendre(8);
      for (std::size_t i = 0; i < r.nodes.size(); ++i) {
        r.nodes[i] = 0.5 * (r.nodes[i] + 1.0);
        r.weights[i] *= 0.5;
      }
      return r;
    }();
    const auto z = z_of(f);
    const auto zeta = z_of(F);
    for (std::size_t a = 0; a < n; ++a) {
      double m = 0.0;
      for (std::size_t k = 0; k < q.nodes.size(); ++k)
        m += q.weights[k] * g[a].derivative(z[a] + q.nodes[k] * zeta[a]);
      out[a] = lambda[a] * m * zeta[a];
    }
  }
};

Discrete assemble(const VolterraProblem& p) {
  Discrete d;
  d.grid = p.grid();
  d.N = p.points;
  d.n = p.size();
  d.h = p.X / static_cast<double>(p.points - 1);
  d.zero = p.kernel_zero;
  if (!d.zero) {
    for (auto spec : p.kernel.components) {
      if (p.override_guard) spec.override_guard = true;
      d.g.push_back(regularize_nonlinearity(spec, p.eps));
    }
    d.C = p.kernel.coupling;
    d.lambda = p.kernel.lambda.empty() ? std::vector<double>(d.n, 1.0) : p.kernel.lambda;
  }
  if (p.eps == 0.0) {
    d.pw = product_weights(d.N, d.h, p.alpha);
    d.gamma_alpha = gamma_fn(p.alpha);
  } else {
    d.R = volterra_kernel_samples(p, d.h, d.N);
  }
  return d;
}

std::vector<std::vector<double>> free_values(const VolterraProblem& p, const GridSpec& grid) {
  std::vector<std::vector<double>> out;
  for (const FreeTerm& ft : p.free_terms) {
    std::vector<double> v(grid.size(), 0.0);
    if (ft.smooth)
      for (std::size_t j = 0; j < v.size(); ++j) v[j] = ft.smooth(grid.coord(0, j));
    if (ft.singular) {
      if (p.eps == 0.0) throw InvalidArgument("solve_volterra: singular free term needs eps > 0");
      const Field s = regularize_data(*ft.singular, p.eps, grid);
      for (std::size_t j = 0; j < v.size(); ++j) v[j] += s.value(j).real();
    }
    for (std::size_t j = 0; j < v.size(); ++j)
      if (!std::isfinite(v[j])) throw NonFiniteError("solve_volterra: free term", j);
    out.push_back(std::move(v));
  }
  return out;
}

// Forward march of u_j = A_j + Σ_{i<j} W_ji S(u_i) + W_jj S(u_j), S given per node.
template <class Source>
VolterraSolution march(const VolterraProblem& p, const Discrete& d,
                       const std::vector<std::vector<double>>& A, Source&& S,
                       double floor = 1.0) {
  const std::size_t N = d.N, n = d.n;
  std::vector<double> u(N * n), s(N * n), tmp(n), acc(n);
  VolterraSolution sol;
  for (std::size_t j = 0; j < N; ++j) {
    for (std::size_t a = 0; a < n; ++a) acc[a] = A[a][j];
    if (j > 0)
      for (std::size_t i = 0; i < j; ++i) {
        const double w = d.weight(j, i);
        for (std::size_t a = 0; a < n; ++a) acc[a] += w * s[i * n + a];
      }
    double* uj = &u[j * n];
    const double wjj = j == 0 ? 0.0 : d.weight(j, j);
    // predictor: previous node value
    for (std::size_t a = 0; a < n; ++a) uj[a] = j == 0 ? acc[a] : u[(j - 1) * n + a];
    double res = 0.0;
    int it = 0;
    if (j == 0 || wjj == 0.0) {
      for (std::size_t a = 0; a < n; ++a) uj[a] = acc[a];
    } else {
      // components converge independently so a decoupled system matches its scalar solves
      std::vector<char> active(n, 1);
      std::size_t remaining = n;
      while (remaining > 0) {
        S(j, uj, tmp.data());
        ++it;
        double worst = 0.0;
        for (std::size_t a = 0; a < n; ++a) {
          if (!active[a]) continue;
          const double v = acc[a] + wjj * tmp[a];
          const double r = std::abs(v - uj[a]);
          uj[a] = v;
          if (r <= p.tolerance * std::max(floor, std::abs(v))) {
            res = std::max(res, r);
            active[a] = 0;
            --remaining;
          } else {
            worst = std::max(worst, r);
          }
        }
        if (remaining > 0 && it >= p.max_iterations)
          throw ConvergenceError("solve_volterra: node fixed point did not converge", j, worst);
      }
    }
    for (std::size_t a = 0; a < n; ++a)
      if (!std::isfinite(uj[a])) throw NonFiniteError("solve_volterra: solution", j);
    S(j, uj, &s[j * n]);
    sol.iterations = std::max(sol.iterations, it);
    sol.residual = std::max(sol.residual, res);
  }
  for (std::size_t a = 0; a < n; ++a) {
    std::vector<double> v(N);
    for (std::size_t j = 0; j < N; ++j) v[j] = u[j * n + a];
    sol.fields.push_back(Field::real(d.grid, std::move(v)));
  }
  return sol;
}

double sup_all(const std::vector<Field>& fs) {
  double m = 0.0;
  for (const Field& f : fs) m = std::max(m, lp_norm(f, kInf));
  return m;
}

}  // namespace

GridSpec VolterraProblem::grid() const {
  if (!is_power_of_two(points) || points < 8)
    throw InvalidArgument("VolterraProblem: points must be a power of two >= 8");
  const double n = static_cast<double>(points);
  return GridSpec::line(0.0, X * n / (n - 1.0), points);
}

void VolterraProblem::check_guard() const {
  if (kernel_zero || override_guard) return;
  const double b = kernel.max_b();
  const double abar = FracOrder(alpha).abar();
  if (alpha > 0.0 && !(b < 1.0))
    throw GuardViolation("volterra: requires b < 1 when alpha > 0 (b = " + std::to_string(b) + ")");
  if (alpha <= 0.0 && !(b + abar < 1.0))
    throw GuardViolation("volterra: requires b + |alpha| < 1 when alpha <= 0 (b + |alpha| = " +
                         std::to_string(b + abar) + ")");
}

void VolterraProblem::validate() const {
  if (!std::isfinite(alpha)) throw InvalidArgument("volterra: alpha must be finite");
  if (!(X > 0.0)) throw InvalidArgument("volterra: interval length X must be positive");
  if (free_terms.empty()) throw InvalidArgument("volterra: at least one component required");
  if (!(eps >= 0.0)) throw InvalidArgument("volterra: eps must be >= 0");
  if (eps == 0.0 && !(alpha > 0.0))
    throw InvalidArgument("volterra: eps = 0 needs alpha > 0 (the polar kernel is not integrable)");
  if (max_iterations < 1 || !(tolerance > 0.0))
    throw InvalidArgument("volterra: iteration limits must be positive");
  grid();
  if (!kernel_zero) {
    if (kernel.size() != free_terms.size())
      throw InvalidArgument("volterra: kernel and free term sizes differ");
    KernelFunctionSpec k = kernel;
    for (auto& c : k.components) c.override_guard = c.override_guard || override_guard;
    k.validate();
  }
  mollifier.validate();
  check_guard();
}

std::vector<double> volterra_kernel_samples(const VolterraProblem& p, double h, std::size_t count) {
  const FracOrder order(p.alpha);
  const double T = h * static_cast<double>(count);
  const GridSpec kg = kernel_grid(p.mollifier, p.eps, T, h);
  check_resolution(p.mollifier, p.eps, kg);
  const MollifiedKernel k = build_mollified_kernel(order, p.mollifier, p.eps, kg);
  const std::size_t o = k.origin_index();
  const double c = p.alpha > 0.0 ? gamma_fn(p.alpha) : 1.0;
  std::vector<double> R(count);
  for (std::size_t j = 0; j < count; ++j) R[j] = c * k.samples.value(o + j).real();
  return R;
}

VolterraSolution solve_volterra(const VolterraProblem& p) {
  p.validate();
  const Discrete d = assemble(p);
  const auto A = free_values(p, d.grid);
  return march(p, d, A, [&](std::size_t, const double* u, double* out) { d.apply_K(u, out); });
}

SweepTable volterra_sweep(const VolterraProblem& p, const std::vector<double>& schedule,
                          unsigned threads) {
  SweepTable t(schedule.size());
  parallel_for(schedule.size(), threads, [&](std::size_t i) {
    VolterraProblem q = p;
    q.eps = schedule[i];
    t[i] = {schedule[i], sup_all(solve_volterra(q).fields)};
  });
  return t;
}

double shift_bump(double x, double X) {
  return profile_value(ProfileKind::Bump, (2.0 * x - X) / X) / profile_value(ProfileKind::Bump, 0.0);
}

SweepTable uniqueness_probe(const VolterraProblem& p, const Perturbation& pert,
                            const std::vector<double>& schedule, unsigned threads) {
  SweepTable t(schedule.size());
  parallel_for(schedule.size(), threads, [&](std::size_t idx) {
    VolterraProblem q = p;
    q.eps = schedule[idx];
    const VolterraSolution base = solve_volterra(q);
    double diff = 0.0;
    switch (pert.kind) {
      case Perturbation::Kind::Identical: {
        const VolterraSolution again = solve_volterra(q);
        for (std::size_t a = 0; a < base.fields.size(); ++a)
          for (std::size_t j = 0; j < base.fields[a].size(); ++j)
            diff = std::max(diff, std::abs(again.fields[a].value(j).real() -
                                           base.fields[a].value(j).real()));
        break;
      }
      case Perturbation::Kind::TwoMollifiers: {
        VolterraProblem r = q;
        r.mollifier.profile = pert.alternate;
        for (auto& ft : r.free_terms)
          if (ft.singular) ft.singular->mollifier.profile = pert.alternate;
        const VolterraSolution other = solve_volterra(r);
        for (std::size_t a = 0; a < base.fields.size(); ++a)
          for (std::size_t j = 0; j < base.fields[a].size(); ++j)
            diff = std::max(diff, std::abs(other.fields[a].value(j).real() -
                                           base.fields[a].value(j).real()));
        break;
      }
      case Perturbation::Kind::NegligibleShift: {
        // the difference F = f̃ - f is marched directly; ε^s is far below
        // the rounding level of f itself
        const Discrete d = assemble(q);
        const std::size_t n = d.n;
        std::vector<double> f(d.N * n);
        for (std::size_t a = 0; a < n; ++a)
          for (std::size_t j = 0; j < d.N; ++j) f[j * n + a] = base.fields[a].value(j).real();
        const double amp = std::pow(q.eps, pert.s);
        std::vector<std::vector<double>> A(n, std::vector<double>(d.N));
        for (std::size_t a = 0; a < n; ++a)
          for (std::size_t j = 0; j < d.N; ++j) A[a][j] = amp * shift_bump(d.grid.coord(0, j), q.X);
        const VolterraSolution F = march(q, d, A, [&](std::size_t j, const double* u, double* out) {
          d.apply_mean_slope(&f[j * n], u, out);
        }, amp);
        diff = sup_all(F.fields);
        break;
      }
    }
    t[idx] = {schedule[idx], diff};
  });
  return t;
}

}  // namespace singreg
