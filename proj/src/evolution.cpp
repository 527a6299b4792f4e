#include "singreg/evolution.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "singreg/error.hpp"
#include "singreg/fft.hpp"
#include "singreg/kernels.hpp"
#include "singreg/parallel.hpp"
#include "singreg/special.hpp"

namespace singreg {

namespace {

using cd = std::complex<double>;
using cvec = std::vector<cd>;

bool is_parabolic(Variant v) { return v != Variant::SchrodingerLinear; }

// Mild-solution march in Fourier space.
//  unmollified kernel: exponential Euler  û_{k+1} = e^{-λΔt}(û_k + Δt F̂_k)
//  mollified kernel:   û_k = m(t_k) û_0 + Δt Σ_{0<j≤k} m(jΔt) F̂_{k-j}
// where m(t, λ) = ∫_{τ<t} e^{-λ(t-τ)} φ_ε(τ) dτ. Past the mollifier support m obeys
// the semigroup law, so lags ≥ W are folded into one running sum.
class Marcher {
 public:
  Marcher(const EvolutionProblem& p, const cvec& u0_real) : grid_(p.grid), dt_(p.dt) {
    PropagatorSpec ps;
    ps.family = is_parabolic(p.variant) ? Family::Heat : Family::Schrodinger;
    ps.dim = p.dim();
    const ModeTable modes = mode_table(ps, grid_);
    lambda_ = modes.lambda;
    const std::size_t M = lambda_.size();
    dfac_.assign(M, 1.0);
    if (p.variant == Variant::ParabolicConservative) {
      PropagatorSpec gs = ps;
      gs.family = Family::HeatGradient;
      const ModeTable gm = mode_table(gs, grid_);
      for (std::size_t i = 0; i < M; ++i) dfac_[i] = -gm.derivative[i];
    }
    decay_.resize(M);
    for (std::size_t i = 0; i < M; ++i) decay_[i] = std::exp(-lambda_[i] * dt_);
    uhat_ = u0_real;
    fft::forward(uhat_, grid_);
    mollified_ = p.mollify_kernel && p.eps > 0.0;
    if (mollified_) {
      const TimeMollifiedMultiplier tm(p.time_mollifier, p.eps);
      const std::size_t K = p.steps();
      W_ = std::min<std::size_t>(K + 1, static_cast<std::size_t>(std::ceil(tm.support() / dt_)) + 1);
      W_ = std::max<std::size_t>(W_, 1);
      mtab_ = tm.series(lambda_, 0.0, dt_, W_ + 1);
      u0hat_ = uhat_;
      a_.assign(mtab_.begin(), mtab_.begin() + static_cast<long>(M));
      ring_.assign(W_ * M, 0.0);
      G_.assign(M, 0.0);
      for (std::size_t i = 0; i < M; ++i) uhat_[i] = a_[i] * u0hat_[i];
    }
    sync();
  }

  const cvec& state() const { return u_; }

  // F_real: forcing at the current state (before any derivative factor)
  void advance(const cvec& F_real) {
    const std::size_t M = lambda_.size();
    cvec F = F_real;
    fft::forward(F, grid_);
    for (std::size_t i = 0; i < M; ++i) F[i] *= dfac_[i];
    if (!mollified_) {
      for (std::size_t i = 0; i < M; ++i) uhat_[i] = decay_[i] * (uhat_[i] + dt_ * F[i]);
      ++k_;
      sync();
      return;
    }
    // store F̂_k; ring slot k mod W
    std::copy(F.begin(), F.end(), ring_.begin() + static_cast<long>((k_ % W_) * M));
    ++k_;
    const std::size_t k = k_;
    // the term leaving the window has lag W at step k
    if (k >= W_) {
      const cd* Fo = &ring_[((k - W_) % W_) * M];
      for (std::size_t i = 0; i < M; ++i) G_[i] = decay_[i] * G_[i] + Fo[i];
    }
    // initial-data multiplier a_k = m(t_k)
    if (k <= W_) {
      for (std::size_t i = 0; i < M; ++i) a_[i] = mtab_[k * M + i];
    } else {
      for (std::size_t i = 0; i < M; ++i) a_[i] *= decay_[i];
    }
    const cd* mW = &mtab_[W_ * M];
    for (std::size_t i = 0; i < M; ++i) uhat_[i] = a_[i] * u0hat_[i] + dt_ * mW[i] * G_[i];
    const std::size_t jmax = std::min(k, W_ - 1);
    for (std::size_t j = 1; j <= jmax; ++j) {
      const cd* mj = &mtab_[j * M];
      const cd* Fi = &ring_[((k - j) % W_) * M];
      for (std::size_t i = 0; i < M; ++i) uhat_[i] += dt_ * mj[i] * Fi[i];
    }
    sync();
  }

 private:
  void sync() {
    u_ = uhat_;
    fft::inverse(u_, grid_);
  }

  GridSpec grid_;
  double dt_;
  cvec lambda_, dfac_, decay_, uhat_, u_;
  bool mollified_ = false;
  std::size_t W_ = 0, k_ = 0;
  cvec mtab_, u0hat_, a_, ring_, G_;
};

Field sample_term(const SpatialTerm& term, double eps, const GridSpec& grid, const char* what) {
  std::vector<double> v(grid.size(), 0.0);
  if (term.smooth) {
    if (grid.dim() == 1) {
      for (std::size_t i = 0; i < v.size(); ++i) v[i] = term.smooth(grid.coord(0, i), 0.0);
    } else {
      const std::size_t ny = grid.points(1);
      for (std::size_t i = 0; i < grid.points(0); ++i)
        for (std::size_t j = 0; j < ny; ++j)
          v[i * ny + j] = term.smooth(grid.coord(0, i), grid.coord(1, j));
    }
  }
  if (term.singular) {
    if (!(eps > 0.0)) throw InvalidArgument(std::string(what) + ": singular term needs eps > 0");
    const Field s = regularize_data(*term.singular, eps, grid);
    for (std::size_t i = 0; i < v.size(); ++i) v[i] += s.value(i).real();
  }
  return Field::real(grid, std::move(v));
}

double sup_abs(const cvec& v) {
  double m = 0.0;
  for (const cd& z : v) m = std::max(m, std::abs(z));
  return m;
}

struct Forcing {
  Variant variant;
  std::optional<RegularizedNonlinearity> g;
  std::vector<double> V;

  cvec operator()(const cvec& u) const {
    cvec F(u.size(), 0.0);
    switch (variant) {
      case Variant::ParabolicPlain:
      case Variant::ParabolicConservative:
        if (g)
          for (std::size_t i = 0; i < u.size(); ++i) F[i] = (*g)(u[i].real());
        break;
      case Variant::ParabolicPotential:
        for (std::size_t i = 0; i < u.size(); ++i)
          F[i] = (V.empty() ? 0.0 : V[i] * u[i].real()) + (g ? (*g)(u[i].real()) : 0.0);
        break;
      case Variant::SchrodingerLinear:
        if (!V.empty())
          for (std::size_t i = 0; i < u.size(); ++i) F[i] = cd(0.0, -V[i]) * u[i];
        break;
    }
    return F;
  }

  // (∫₀¹ F'(u + θw) dθ) w
  cvec slope(const cvec& u, const cvec& w) const {
    static const QuadratureRule q = [] {
      QuadratureRule r = gauss_legendre(8);
      for (std::size_t i = 0; i < r.nodes.size(); ++i) {
        r.nodes[i] = 0.5 * (r.nodes[i] + 1.0);
        r.weights[i] *= 0.5;
      }
      return r;
    }();
    cvec F(u.size(), 0.0);
    const auto gbar = [&](double a, double b) {
      double m = 0.0;
      for (std::size_t k = 0; k < q.nodes.size(); ++k) m += q.weights[k] * g->derivative(a + q.nodes[k] * b);
      return m;
    };
    for (std::size_t i = 0; i < u.size(); ++i) {
      const double ur = u[i].real(), wr = w[i].real();
      switch (variant) {
        case Variant::ParabolicPlain:
        case Variant::ParabolicConservative:
          F[i] = g ? gbar(ur, wr) * wr : 0.0;
          break;
        case Variant::ParabolicPotential:
          F[i] = ((V.empty() ? 0.0 : V[i]) + (g ? gbar(ur, wr) : 0.0)) * wr;
          break;
        case Variant::SchrodingerLinear:
          F[i] = V.empty() ? cd(0.0) : cd(0.0, -V[i]) * w[i];
          break;
      }
    }
    return F;
  }
};

Forcing make_forcing(const EvolutionProblem& p) {
  Forcing f{p.variant, std::nullopt, {}};
  if (p.nonlinearity) {
    NonlinearitySpec s = *p.nonlinearity;
    if (p.override_guard) s.override_guard = true;
    f.g = regularize_nonlinearity(s, p.eps);
  }
  if (auto V = potential_field(p)) {
    const auto r = V->real_values();
    f.V.assign(r.begin(), r.end());
  }
  return f;
}

Field as_field(const GridSpec& g, const cvec& u, bool complex) {
  if (complex) return Field::complex(g, u);
  std::vector<double> r(u.size());
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = u[i].real();
  return Field::real(g, std::move(r));
}

cvec realify(cvec u, bool parabolic) {
  if (parabolic)
    for (auto& z : u) z = z.real();
  return u;
}

// One march; visit(k, u_k) sees every step k = 0..K.
template <class Visit>
void run(const EvolutionProblem& p, const Forcing& F, const cvec& u0, Visit&& visit,
         std::vector<double>* incr) {
  const bool parabolic = is_parabolic(p.variant);
  Marcher m(p, u0);
  const std::size_t K = p.steps();
  for (std::size_t k = 0;; ++k) {
    const cvec u = realify(m.state(), parabolic);
    const double s = sup_abs(u);
    if (!std::isfinite(s) || s > p.overflow)
      throw BlowUpError("solve_evolution: sup norm exceeded the overflow guard", k);
    visit(k, u);
    if (k == K) break;
    const cvec f = F(u);
    if (incr) incr->push_back(p.dt * sup_abs(f));
    m.advance(f);
  }
}

}  // namespace

std::size_t EvolutionProblem::steps() const {
  return static_cast<std::size_t>(std::llround(T / dt));
}

void EvolutionProblem::check_guard() const {
  if (override_guard) return;
  const double n = dim();
  if (nonlinearity && nonlinearity->model != NonlinearityModel::Linear && !(nonlinearity->b < 1.0))
    throw GuardViolation("evolution: requires b < 1 for the cut-off nonlinearity");
  if (potential.singular) {
    const double c = potential.singular->mollifier.amplitude_exponent;
    if (variant == Variant::ParabolicPotential && !(c * n < 1.0))
      throw GuardViolation("evolution: potential variant requires c*n < 1 (c*n = " +
                           std::to_string(c * n) + ")");
    if (variant == Variant::SchrodingerLinear && !(c < 1.0 + 1.0 / n))
      throw GuardViolation("evolution: Schrodinger requires c < 1 + 1/n (c = " + std::to_string(c) + ")");
  }
}

void EvolutionProblem::validate() const {
  if (grid.dim() != 1 && grid.dim() != 2) throw InvalidArgument("evolution: dim must be 1 or 2");
  if (!(T > 0.0) || !(dt > 0.0) || dt > T) throw InvalidArgument("evolution: need 0 < dt <= T");
  if (std::abs(static_cast<double>(steps()) * dt - T) > 1e-9 * T)
    throw InvalidArgument("evolution: T must be a multiple of dt");
  if (!initial.present()) throw InvalidArgument("evolution: initial datum missing");
  if (!(eps >= 0.0)) throw InvalidArgument("evolution: eps must be >= 0");
  if (record_stride < 1) throw InvalidArgument("evolution: record stride must be >= 1");
  if (variant == Variant::SchrodingerLinear && nonlinearity)
    throw InvalidArgument("evolution: the Schrodinger variant is linear");
  if ((variant == Variant::ParabolicPlain || variant == Variant::ParabolicConservative) &&
      potential.present())
    throw InvalidArgument("evolution: potential given for a variant without one");
  if (nonlinearity) {
    NonlinearitySpec s = *nonlinearity;
    s.override_guard = s.override_guard || override_guard;
    s.validate();
  }
  if (mollify_kernel && eps > 0.0) {
    if (time_mollifier.dim != 1) throw InvalidArgument("evolution: time mollifier must be 1-D");
    time_mollifier.validate();
  }
  check_guard();
}

Field initial_field(const EvolutionProblem& p) { return sample_term(p.initial, p.eps, p.grid, "initial"); }

std::optional<Field> potential_field(const EvolutionProblem& p) {
  if (!p.potential.present()) return std::nullopt;
  return sample_term(p.potential, p.eps, p.grid, "potential");
}

EvolutionSolution solve_evolution(const EvolutionProblem& p) {
  p.validate();
  const Forcing F = make_forcing(p);
  const Field u0 = initial_field(p);
  EvolutionSolution sol;
  sol.T1 = p.T / 4.0;
  const bool complex = !is_parabolic(p.variant);
  run(p, F, u0.to_complex(), [&](std::size_t k, const cvec& u) {
    if (k % p.record_stride == 0)
      sol.history.push_back({static_cast<double>(k) * p.dt, as_field(p.grid, u, complex)});
  }, &sol.duhamel_increment);
  return sol;
}

double EvolutionSolution::sup_norm(double p) const { return sup_in_time_norm(history, p); }

double EvolutionSolution::c1_seminorm(double p) const {
  return time_derivative_seminorm(history, T1, p);
}

ModerateTable moderateness_sweep(const EvolutionProblem& problem,
                                 const std::vector<double>& schedule, double p, unsigned threads) {
  ModerateTable t(schedule.size());
  parallel_for(schedule.size(), threads, [&](std::size_t i) {
    EvolutionProblem q = problem;
    q.eps = schedule[i];
    const EvolutionSolution s = solve_evolution(q);
    t[i] = {schedule[i], s.sup_norm(p), s.c1_seminorm(p)};
  });
  return t;
}

SweepTable uniqueness_probe_evolution(const EvolutionProblem& problem, const Perturbation& pert,
                                      const std::vector<double>& schedule, double qn,
                                      unsigned threads) {
  SweepTable t(schedule.size());
  parallel_for(schedule.size(), threads, [&](std::size_t idx) {
    EvolutionProblem p = problem;
    p.eps = schedule[idx];
    p.validate();
    const bool complex = !is_parabolic(p.variant);
    const auto norm = [&](const cvec& w) { return lp_norm(as_field(p.grid, w, complex), qn); };
    double worst = 0.0;
    switch (pert.kind) {
      case Perturbation::Kind::Identical:
      case Perturbation::Kind::TwoMollifiers: {
        EvolutionProblem r = p;
        if (pert.kind == Perturbation::Kind::TwoMollifiers) {
          r.time_mollifier.profile = pert.alternate;
          if (r.initial.singular) r.initial.singular->mollifier.profile = pert.alternate;
          if (r.potential.singular) r.potential.singular->mollifier.profile = pert.alternate;
        }
        const EvolutionSolution a = solve_evolution(p);
        const EvolutionSolution b = solve_evolution(r);
        for (std::size_t k = 0; k < a.history.size(); ++k) {
          const cvec ua = a.history[k].field.to_complex();
          cvec ub = b.history[k].field.to_complex();
          for (std::size_t i = 0; i < ub.size(); ++i) ub[i] -= ua[i];
          worst = std::max(worst, norm(ub));
        }
        break;
      }
      case Perturbation::Kind::NegligibleShift: {
        // base and difference marched in lockstep; ε^s is far below the rounding level of u
        const Forcing F = make_forcing(p);
        const Field u0 = initial_field(p);
        const double amp = std::pow(p.eps, pert.s);
        const GridSpec& g = p.grid;
        const double cx = 0.5 * (g.lo(0) + g.hi(0)), rx = 0.25 * g.length(0);
        std::vector<cd> w0(g.size());
        if (g.dim() == 1) {
          for (std::size_t i = 0; i < w0.size(); ++i) w0[i] = amp * shift_bump(g.coord(0, i) - cx + rx, 2 * rx);
        } else {
          const double cy = 0.5 * (g.lo(1) + g.hi(1)), ry = 0.25 * g.length(1);
          const std::size_t ny = g.points(1);
          for (std::size_t i = 0; i < g.points(0); ++i)
            for (std::size_t j = 0; j < ny; ++j)
              w0[i * ny + j] = amp * shift_bump(g.coord(0, i) - cx + rx, 2 * rx) *
                               shift_bump(g.coord(1, j) - cy + ry, 2 * ry);
        }
        const bool parabolic = is_parabolic(p.variant);
        Marcher base(p, u0.to_complex());
        Marcher diff(p, w0);
        const std::size_t K = p.steps();
        for (std::size_t k = 0;; ++k) {
          const cvec u = realify(base.state(), parabolic);
          const cvec w = realify(diff.state(), parabolic);
          if (!std::isfinite(sup_abs(u)) || sup_abs(u) > p.overflow)
            throw BlowUpError("uniqueness_probe_evolution: base solution blew up", k);
          worst = std::max(worst, norm(w));
          if (k == K) break;
          diff.advance(F.slope(u, w));
          base.advance(F(u));
        }
        break;
      }
    }
    t[idx] = {schedule[idx], worst};
  });
  return t;
}

}  // namespace singreg
