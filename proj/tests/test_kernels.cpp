#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "singreg/error.hpp"
#include "singreg/kernels.hpp"
#include "singreg/special.hpp"

using namespace singreg;

namespace {

const double kPi = std::numbers::pi;

PropagatorSpec heat(int beta = 0, double eps = 0.0) {
  PropagatorSpec s;
  s.beta = beta;
  s.eps = eps;
  return s;
}

double normal_pdf(double z) { return std::exp(-0.5 * z * z) / std::sqrt(2.0 * kPi); }

const std::vector<double> kSweep = {1e-2, 1e-3, 1e-4,  1e-5,  1e-6, 1e-7,
                                    1e-8, 1e-9, 1e-10, 1e-11, 1e-12};

}  // namespace

TEST_CASE("Hermite norm constants") {
  CHECK(heat_norm_constant(0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(heat_norm_constant(1) == doctest::Approx(1.0 / std::sqrt(kPi)).epsilon(1e-12));
  CHECK(heat_norm_constant(2) == doctest::Approx(0.5 * 4.0 * normal_pdf(1.0)).epsilon(1e-12));
}

TEST_CASE("grid L1 norms of the heat kernel and its gradient") {
  const GridSpec g = GridSpec::line(-16.0, 16.0, 65536);
  for (double t : {0.1, 1.0}) {
    const Field e = sample_kernel(KernelHandle::closed_form(heat(), t), g);
    CHECK(std::abs(lp_norm(e, 1.0) - 1.0) <= 1e-8);
    const Field de = sample_kernel(KernelHandle::closed_form(heat(1), t), g);
    CHECK(std::abs(lp_norm(de, 1.0) - 1.0 / std::sqrt(kPi * t)) <= 1e-6);
  }
}

TEST_CASE("closed-form bound entries at eps = 0") {
  for (double t : {0.1, 1.0}) {
    const auto a = heat_l1_bound(heat(), t, std::vector<double>{0.0});
    CHECK(std::abs(a[0].value - 1.0) <= 1e-8);
    PropagatorSpec g;
    g.family = Family::HeatGradient;
    const auto b = heat_gradient_l1_bound(g, t, std::vector<double>{0.0});
    CHECK(std::abs(b[0].value - 1.0 / std::sqrt(kPi * t)) <= 1e-6);
  }
  CHECK_THROWS_AS(heat_l1_bound(heat(), -1.0, std::vector<double>{0.0}), InvalidArgument);
}

TEST_CASE("kernel derivatives against finite differences") {
  for (Family fam : {Family::Heat, Family::Schrodinger}) {
    PropagatorSpec s0;
    s0.family = fam;
    PropagatorSpec s1 = s0;
    s1.beta = 1;
    PropagatorSpec s2 = s0;
    s2.beta = 2;
    const auto k0 = KernelHandle::closed_form(s0, 0.7);
    const auto k1 = KernelHandle::closed_form(s1, 0.7);
    const auto k2 = KernelHandle::closed_form(s2, 0.7);
    for (double x : {-1.3, 0.2, 0.9}) {
      const double h = 1e-4;
      const auto fd1 = (k0.value(x + h) - k0.value(x - h)) / (2.0 * h);
      const auto fd2 = (k1.value(x + h) - k1.value(x - h)) / (2.0 * h);
      CHECK(std::abs(k1.value(x) - fd1) <= 1e-6);
      CHECK(std::abs(k2.value(x) - fd2) <= 1e-6);
    }
  }
}

TEST_CASE("heat propagator spreads a Gaussian") {
  const GridSpec g = GridSpec::line(-30.0, 30.0, 1024);
  const double s0 = 0.5;  // variance 2 s0
  auto gauss = [](double var, double x) { return std::exp(-x * x / (2.0 * var)) / std::sqrt(2.0 * kPi * var); };
  const Field f = Field::sample(g, [&](double x) { return gauss(2.0 * s0, x); });
  const double t = 0.8;
  const Field u = apply_propagator(KernelHandle::on_grid(heat(), t, g), f);
  double err = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i)
    err = std::max(err, std::abs(u.real_values()[i] - gauss(2.0 * s0 + 2.0 * t, g.coord(0, i))));
  CHECK(err <= 1e-6);

  // gradient family: derivative of the spread Gaussian
  PropagatorSpec gs;
  gs.family = Family::HeatGradient;
  const Field du = apply_propagator(KernelHandle::on_grid(gs, t, g), f);
  err = 0.0;
  const double v = 2.0 * s0 + 2.0 * t;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double x = g.coord(0, i);
    err = std::max(err, std::abs(du.real_values()[i] + x / v * gauss(v, x)));
  }
  CHECK(err <= 1e-6);
}

TEST_CASE("semigroup and unitarity at eps = 0") {
  const GridSpec g = GridSpec::line(-20.0, 20.0, 512);
  const Field f = Field::sample(g, [](double x) { return std::exp(-x * x) * (1.0 + std::sin(3.0 * x)); });
  const Field a = apply_propagator(KernelHandle::on_grid(heat(), 0.3, g),
                                   apply_propagator(KernelHandle::on_grid(heat(), 0.4, g), f));
  const Field b = apply_propagator(KernelHandle::on_grid(heat(), 0.7, g), f);
  double err = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i)
    err = std::max(err, std::abs(a.real_values()[i] - b.real_values()[i]));
  CHECK(err <= 1e-8);

  PropagatorSpec sch;
  sch.family = Family::Schrodinger;
  const Field fc = Field::complex(g, f.to_complex());
  const Field s = apply_propagator(KernelHandle::on_grid(sch, 1.0, g), fc);
  CHECK(lp_norm(s, 2.0) == doctest::Approx(lp_norm(fc, 2.0)).epsilon(1e-10));
}

TEST_CASE("grid mismatch is rejected") {
  const GridSpec g = GridSpec::line(-1.0, 1.0, 64);
  const GridSpec h = GridSpec::line(-1.0, 1.0, 128);
  const Field f = Field::zeros(h);
  CHECK_THROWS_AS(apply_propagator(KernelHandle::on_grid(heat(), 0.1, g), f), InvalidArgument);
}

TEST_CASE("time-mollified multiplier against direct quadrature") {
  MollifierSpec m;
  for (double eps : {1e-2, 1e-6}) {
    const TimeMollifiedMultiplier tm(m, eps);
    const double S = 1.0 / m.scale(eps);
    for (double t : {-0.5 * S, 0.0, 0.3 * S, 2.0}) {
      for (std::complex<double> lam : {std::complex<double>(0.0), std::complex<double>(3.0),
                                       std::complex<double>(400.0), std::complex<double>(0.0, 50.0)}) {
        const QuadratureRule q = composite_gauss(-S, std::min(t, S), 200, 16);
        std::complex<double> ref = 0.0;
        for (std::size_t i = 0; i < q.nodes.size(); ++i)
          ref += q.weights[i] * std::exp(-lam * (t - q.nodes[i])) * mollifier_value(m, eps, q.nodes[i]);
        CHECK(std::abs(tm(t, lam) - ref) <= 1e-6);
      }
    }
    // causality: all mass after t gives the zero multiplier
    CHECK(tm(-1.01 * S, 0.0) == std::complex<double>(0.0));
    CHECK(tm.mass_before(0.0) == doctest::Approx(0.5).epsilon(1e-10));
    CHECK(tm.mass_before(1.0) == doctest::Approx(1.0).epsilon(1e-10));
    // series matches pointwise evaluation
    std::vector<std::complex<double>> lams{0.0, 10.0, {0.0, 7.0}};
    const auto ser = tm.series(lams, -S, 0.013, 40);
    for (std::size_t k = 0; k < 40; k += 7)
      for (std::size_t j = 0; j < lams.size(); ++j)
        CHECK(std::abs(ser[k * 3 + j] - tm(-S + k * 0.013, lams[j])) <= 1e-12);
  }
}

TEST_CASE("mollified heat propagator scales mass by the mollifier mass") {
  const GridSpec g = GridSpec::line(-20.0, 20.0, 512);
  const Field f = Field::sample(g, [](double x) { return std::exp(-x * x) + 0.5 * std::exp(-(x - 2) * (x - 2)); });
  for (double t : {0.0, 0.05, 1.0}) {
    const auto h = KernelHandle::on_grid(heat(0, 1e-3), t, g);
    const Field u = apply_propagator(h, f);
    CHECK(std::abs(integral(u) - integral(f) * h.mollifier_mass()) <= 1e-6);
  }
}

TEST_CASE("Schrodinger sup reduces to the time integral") {
  PropagatorSpec s;
  s.family = Family::Schrodinger;
  for (double eps : {1e-2, 1e-6}) {
    s.eps = eps;
    const auto h = KernelHandle::closed_form(s, 1.0);
    const GridSpec g = GridSpec::line(-4.0, 4.0, 256);
    const double grid_sup = lp_norm(sample_kernel(h, g), kInf);
    const double red = schrodinger_sup_pointwise(s, 1.0);
    CHECK(std::abs(grid_sup / red - 1.0) <= 0.05);
  }
}

TEST_CASE("bound tables: bounded regimes") {
  PropagatorSpec gs;
  gs.family = Family::HeatGradient;
  auto ratio = [](const BoundTable& t) {
    double lo = 1e300, hi = 0.0;
    for (const auto& r : t) lo = std::min(lo, r.value), hi = std::max(hi, r.value);
    return hi / lo;
  };
  CHECK(ratio(heat_gradient_l1_bound(gs, 1.0, kSweep)) <= 2.0);
  PropagatorSpec sch;
  sch.family = Family::Schrodinger;
  CHECK(ratio(schrodinger_sup_bound(sch, 1.0, kSweep)) <= 2.0);
  CHECK(ratio(heat_l1_bound(heat(), 1.0, kSweep)) <= 1.0 + 1e-3);
}
