#include <doctest.h>

#include <cmath>
#include <vector>

#include "singreg/error.hpp"
#include "singreg/regularize.hpp"

using namespace singreg;

namespace {

NonlinearitySpec power_law(double gamma, double b) {
  NonlinearitySpec s;
  s.model = NonlinearityModel::PowerLaw;
  s.gamma = gamma;
  s.b = b;
  return s;
}

MollifierSpec bump1() {
  MollifierSpec m;
  m.profile = ProfileKind::Bump;
  m.dim = 1;
  return m;
}

double fit_slope(const std::vector<double>& x, const std::vector<double>& y) {
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) mx += x[i], my += y[i];
  mx /= x.size();
  my /= y.size();
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  return sxy / sxx;
}

}  // namespace

TEST_CASE("cutoff inactive far from zero") {
  for (auto model : {NonlinearityModel::PowerLaw, NonlinearityModel::SqrtAbs,
                     NonlinearityModel::PiecewiseStep}) {
    NonlinearitySpec s = power_law(0.5, 0.5);
    s.model = model;
    const auto g = regularize_nonlinearity(s, 1e-4);
    const double d = g.delta();
    REQUIRE(d > 0.0);
    for (double u : {2.0 * d * 1.0001, 0.3, 1.7, -0.9, -2.0 * d * 1.01}) {
      if (model == NonlinearityModel::PiecewiseStep && std::abs(u) < d) continue;
      CHECK(g(u) == doctest::Approx(g.limit(u)).epsilon(1e-14));
    }
  }
}

TEST_CASE("odd models vanish at zero and are odd") {
  for (auto model : {NonlinearityModel::PowerLaw, NonlinearityModel::PiecewiseStep,
                     NonlinearityModel::Linear, NonlinearityModel::Extremal}) {
    NonlinearitySpec s = power_law(0.3, 0.4);
    s.model = model;
    const auto g = regularize_nonlinearity(s, 1e-3);
    REQUIRE(g.is_odd());
    CHECK(g(0.0) == 0.0);
    for (double u : {1e-5, 0.01, 0.4}) CHECK(g(-u) == doctest::Approx(-g(u)));
  }
}

TEST_CASE("b >= 1 rejected unless overridden") {
  NonlinearitySpec s = power_law(0.5, 1.0);
  CHECK_THROWS_AS(regularize_nonlinearity(s, 1e-3), GuardViolation);
  s.override_guard = true;
  CHECK_NOTHROW(regularize_nonlinearity(s, 1e-3));
  CHECK_THROWS_AS(regularize_nonlinearity(power_law(1.2, 0.5), 1e-3), InvalidArgument);
}

TEST_CASE("eps = 0 returns the limit") {
  const auto g = regularize_nonlinearity(power_law(0.5, 0.5), 0.0);
  for (double u : {-2.0, -1e-8, 0.0, 3e-6, 5.0}) CHECK(g(u) == g.limit(u));
}

TEST_CASE("analytic derivatives match finite differences") {
  for (auto model : {NonlinearityModel::PowerLaw, NonlinearityModel::SqrtAbs,
                     NonlinearityModel::PiecewiseStep, NonlinearityModel::Quadratic,
                     NonlinearityModel::Custom}) {
    NonlinearitySpec s = power_law(0.5, 0.5);
    s.model = model;
    s.custom_u = {-1.0, 0.0, 0.5, 1.0};
    s.custom_g = {1.0, 0.0, 1.0, 0.2};
    const auto g = regularize_nonlinearity(s, 1e-2);
    const double d = g.delta();
    for (double f : {-3.1, -1.4, -0.6, 0.2, 0.7, 1.3, 1.9, 2.6}) {
      const double u = model == NonlinearityModel::Quadratic ? f * d : f * 0.5 * d;
      const double h = 1e-5 * std::max(d, 1e-3);
      const double fd = (g(u + h) - g(u - h)) / (2 * h);
      INFO("model ", static_cast<int>(model), " u ", u);
      CHECK(g.derivative(u) == doctest::Approx(fd).epsilon(1e-5).scale(1.0));
    }
  }
}

TEST_CASE("lipschitz probe oracles") {
  CHECK(lipschitz_probe([](double u) { return 3.0 * u; }, -2, 2, 2000) ==
        doctest::Approx(3.0).epsilon(1e-9));
  CHECK(lipschitz_probe([](double) { return 4.2; }, -2, 2, 2000) == 0.0);
  const auto f = [](double u) { return std::sin(u); };
  CHECK(lipschitz_probe(f, -1, 1, 4000, 7) == lipschitz_probe(f, -1, 1, 4000, 7));
}

TEST_CASE("power law Lipschitz constant follows L^b") {
  const double b = 0.5;
  const auto s = power_law(0.5, b);
  const auto probe = [&](double eps) {
    const auto g = regularize_nonlinearity(s, eps);
    return lipschitz_probe([&](double u) { return g(u); }, -4 * g.delta(), 4 * g.delta(), 20000);
  };
  const double C = probe(1e-2) / std::pow(std::log(1e2), b);
  CHECK(probe(1e-8) <= 1.05 * C * std::pow(std::log(1e8), b));

  std::vector<double> lx, ly;
  for (double e : {1e-2, 1e-4, 1e-8, 1e-16, 1e-32, 1e-64, 1e-128, 1e-256}) {
    lx.push_back(std::log(std::log(1.0 / e)));
    ly.push_back(std::log(probe(e)));
  }
  CHECK(std::abs(fit_slope(lx, ly) - b) < 0.15);
}

TEST_CASE("consistency away from zero") {
  const auto s = power_law(0.4, 0.6);
  double prev = 1e300;
  for (double e : {1e-2, 1e-6, 1e-20, 1e-80}) {
    const auto g = regularize_nonlinearity(s, e);
    double worst = 0;
    for (double u = 0.05; u < 2; u += 0.01) worst = std::max(worst, std::abs(g(u) - g.limit(u)));
    CHECK(worst <= prev);
    prev = worst;
  }
  CHECK(prev < 1e-12);
}

TEST_CASE("kernel function spec validation") {
  KernelFunctionSpec k;
  CHECK_THROWS_AS(k.validate(), InvalidArgument);
  k.components = {power_law(0.5, 0.3), power_law(0.5, 0.7)};
  CHECK_NOTHROW(k.validate());
  CHECK(k.max_b() == doctest::Approx(0.7));
  k.coupling = {{1, 0}};
  CHECK_THROWS_AS(k.validate(), InvalidArgument);
}

TEST_CASE("delta data: mass and sup scaling") {
  const auto grid = GridSpec::line(-4, 4, 1 << 14);
  std::vector<double> lx, ly;
  for (double e : {1e-2, 1e-6, 1e-12, 1e-24, 1e-48}) {
    const auto spec = SingularDataSpec::delta(bump1());
    const Field f = regularize_data(spec, e, grid);
    CHECK(lp_norm(f, 1.0) == doctest::Approx(1.0).epsilon(1e-5));
    const double L = bump1().scale(e);
    const double sup = lp_norm(f, kInf);
    CHECK(sup == doctest::Approx(L * profile_value(ProfileKind::Bump, 0.0)).epsilon(1e-12));
    lx.push_back(std::log(L));
    ly.push_back(std::log(sup));
  }
  CHECK(std::abs(fit_slope(lx, ly) - 1.0) < 0.1);
}

TEST_CASE("delta data: weak limit against polynomials") {
  MollifierSpec m;
  m.profile = ProfileKind::MomentVanishing;
  m.dim = 1;
  const auto grid = GridSpec::line(-64, 64, 1 << 14);
  const double x0 = 0.25;
  for (double e : {1e-3, 1e-9}) {
    const Field f = regularize_data(SingularDataSpec::delta(m, x0), e, grid);
    for (int p = 0; p <= 3; ++p) {
      const Field test = Field::sample(grid, [&](double x) { return std::pow(x, p); });
      double s = 0;
      for (std::size_t i = 0; i < grid.size(); ++i)
        s += f.value(i).real() * test.value(i).real();
      s *= grid.spacing();
      INFO("p = ", p, " eps = ", e);
      CHECK(s == doctest::Approx(std::pow(x0, p)).epsilon(1e-6).scale(1.0));
    }
  }
}

TEST_CASE("delta derivative data pairs with -test'") {
  const auto grid = GridSpec::line(-4, 4, 1 << 14);
  const Field f = regularize_data(SingularDataSpec::delta(bump1(), 0.5, 1), 1e-4, grid);
  double s = 0;
  for (std::size_t i = 0; i < grid.size(); ++i) s += f.value(i).real() * std::sin(grid.coord(0, i));
  s *= grid.spacing();
  // <δ'_{0.5}, sin> = -cos(0.5) up to O(L^-2)
  CHECK(s == doctest::Approx(-std::cos(0.5)).epsilon(2e-2));
}

TEST_CASE("frac power: spectral and direct routes agree for k = 2") {
  // band-limited profile: sampled derivatives carry no aliasing error
  const auto grid = GridSpec::line(-40, 40, 1 << 12);
  SingularDataSpec s;
  s.kind = SingularDataSpec::Kind::FracPower;
  s.k = 2.0;
  s.mollifier.profile = ProfileKind::MomentVanishing;
  s.mollifier.dim = 1;
  s.psi = Field::sample(grid, [](double x) { return std::exp(-x * x); });
  const Field a = regularize_data(s, 1e-3, grid);
  s.route = FracPowerRoute::Direct;
  const Field b = regularize_data(s, 1e-3, grid);
  double worst = 0;
  for (std::size_t i = 0; i < grid.size(); ++i)
    worst = std::max(worst, std::abs(a.value(i).real() - b.value(i).real()));
  CHECK(worst < 1e-6);
  s.k = 1.0;
  CHECK_THROWS_AS(regularize_data(s, 1e-3, grid), InvalidArgument);
}

TEST_CASE("frac power k = 1: L1 norm within the L^{n(a-1)+1} envelope") {
  const auto grid = GridSpec::line(-20, 20, 1 << 15);
  SingularDataSpec s;
  s.kind = SingularDataSpec::Kind::FracPower;
  s.k = 1.0;
  s.mollifier = bump1();
  s.psi = Field::sample(grid, [](double x) { return std::exp(-x * x); });
  const std::vector<double> eps{1e-2, 1e-4, 1e-8, 1e-16, 1e-32, 1e-64};
  std::vector<double> r;
  for (double e : eps) r.push_back(lp_norm(regularize_data(s, e, grid), 1.0) / s.mollifier.scale(e));
  const double C = r.front();
  for (double v : r) CHECK(v <= C * 1.0001 + 1e-12);
}

TEST_CASE("distribution data: derivative moved onto the mollifier") {
  const auto grid = GridSpec::line(-4, 4, 1 << 13);
  SingularDataSpec s;
  s.kind = SingularDataSpec::Kind::Distribution;
  s.mollifier = bump1();
  s.interval_lo = -2;
  s.interval_hi = 2;
  // g = D(sin) on the interval, so g_ε ≈ cos inside
  s.terms.push_back({1, [](double x) { return std::sin(x); }});
  const Field f = regularize_data(s, 1e-6, grid);
  for (double x : {-1.0, -0.3, 0.0, 0.8, 1.2}) {
    const auto i = static_cast<std::size_t>(std::llround((x + 4) / grid.spacing()));
    CHECK(f.value(i).real() == doctest::Approx(std::cos(grid.coord(0, i))).epsilon(1e-3));
  }
  // sup grows no faster than L (the jump at the plateau edge)
  const double L = s.mollifier.scale(1e-6);
  CHECK(lp_norm(f, kInf) <= 2.0 * L);
}

TEST_CASE("under-resolved data rejected") {
  const auto grid = GridSpec::line(-4, 4, 64);
  CHECK_THROWS_AS(regularize_data(SingularDataSpec::delta(bump1()), 1e-200, grid), ResolutionError);
}
