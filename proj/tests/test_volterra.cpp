#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "singreg/error.hpp"
#include "singreg/special.hpp"
#include "singreg/volterra.hpp"

using namespace singreg;

namespace {

NonlinearitySpec linear(double c = 1.0) {
  NonlinearitySpec s;
  s.model = NonlinearityModel::Linear;
  s.coefficient = c;
  return s;
}

VolterraProblem scalar(double alpha, NonlinearitySpec k, double eps) {
  VolterraProblem p;
  p.alpha = alpha;
  p.kernel.components = {k};
  p.free_terms = {FreeTerm{[](double) { return 1.0; }, {}}};
  p.mollifier.profile = ProfileKind::Bump;
  p.mollifier.dim = 1;
  p.eps = eps;
  return p;
}

double mittag_leffler_half(double lambda, double x) {
  double s = 0.0;
  const double z = lambda * std::sqrt(std::numbers::pi);
  for (int k = 0; k < 60; ++k) s += std::pow(z, k) * std::pow(x, 0.5 * k) / gamma_fn(0.5 * k + 1.0);
  return s;
}

double sup_error(const Field& f, const std::function<double(double)>& exact) {
  double e = 0.0;
  for (std::size_t j = 0; j < f.size(); ++j)
    e = std::max(e, std::abs(f.value(j).real() - exact(f.grid().coord(0, j))));
  return e;
}

}  // namespace

TEST_CASE("zero kernel returns the free term exactly") {
  auto p = scalar(0.5, linear(), 1e-4);
  p.kernel_zero = true;
  p.free_terms[0].smooth = [](double x) { return std::cos(3 * x); };
  const auto sol = solve_volterra(p);
  for (std::size_t j = 0; j < sol.fields[0].size(); ++j)
    CHECK(sol.fields[0].value(j).real() == std::cos(3 * p.grid().coord(0, j)));
}

TEST_CASE("alpha = 1 linear case reproduces e^x") {
  const auto sol = solve_volterra(scalar(1.0, linear(), 0.0));
  CHECK(sup_error(sol.fields[0], [](double x) { return std::exp(x); }) <= 1e-4);
  const auto g = scalar(1.0, linear(), 0.0).grid();
  CHECK(g.coord(0, g.points(0) - 1) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(g.spacing() <= 1e-3);
}

TEST_CASE("alpha = 1 mollified kernel approaches e^x") {
  double prev = 1e9;
  for (double e : {1e-2, 1e-4, 1e-8, 1e-16}) {
    const auto sol = solve_volterra(scalar(1.0, linear(), e));
    const double err = sup_error(sol.fields[0], [](double x) { return std::exp(x); });
    CHECK(err < prev);
    prev = err;
  }
}

TEST_CASE("abel case against the Mittag-Leffler series") {
  const auto sol0 = solve_volterra(scalar(0.5, linear(), 0.0));
  const auto ml = [](double x) { return mittag_leffler_half(1.0, x); };
  CHECK(sup_error(sol0.fields[0], ml) <= 2e-3);
  std::vector<double> errs;
  for (double e : {1e-2, 1e-4, 1e-6, 1e-8, 1e-12}) {
    const auto sol = solve_volterra(scalar(0.5, linear(), e));
    errs.push_back(sup_error(sol.fields[0], ml));
  }
  for (std::size_t i = 1; i < errs.size(); ++i) CHECK(errs[i] < errs[i - 1]);
}

TEST_CASE("determinism") {
  auto p = scalar(0.5, NonlinearitySpec{}, 1e-6);
  const auto a = solve_volterra(p);
  const auto b = solve_volterra(p);
  CHECK(std::ranges::equal(a.fields[0].real_values(), b.fields[0].real_values()));
}

TEST_CASE("first-order convergence in h") {
  auto p = scalar(1.0, linear(), 0.0);
  std::vector<double> err;
  for (std::size_t n : {64u, 128u, 256u}) {
    p.points = n;
    err.push_back(sup_error(solve_volterra(p).fields[0], [](double x) { return std::exp(x); }));
  }
  CHECK(std::log2(err[0] / err[1]) >= 0.9);
  CHECK(std::log2(err[1] / err[2]) >= 0.9);
}

TEST_CASE("decoupled system equals scalar solves") {
  auto p1 = scalar(0.5, NonlinearitySpec{}, 1e-4);
  auto p2 = scalar(0.5, linear(-0.7), 1e-4);
  p2.free_terms[0].smooth = [](double x) { return std::sin(x) + 0.5; };
  VolterraProblem sys = p1;
  sys.kernel.components = {p1.kernel.components[0], p2.kernel.components[0]};
  sys.kernel.coupling = {{1, 0}, {0, 1}};
  sys.free_terms = {p1.free_terms[0], p2.free_terms[0]};
  const auto s = solve_volterra(sys);
  CHECK(std::ranges::equal(s.fields[0].real_values(), solve_volterra(p1).fields[0].real_values()));
  CHECK(std::ranges::equal(s.fields[1].real_values(), solve_volterra(p2).fields[0].real_values()));
}

TEST_CASE("coupled system: the sum of two linear components") {
  // f1 = 1 + ∫ (f1+f2), f2 = 1 + ∫ (f1+f2): f1 = f2 = (1 + e^{2x}) / 2 ... f1 + f2 = 2 e^{2x}
  VolterraProblem p = scalar(1.0, linear(), 0.0);
  p.kernel.components = {linear(), linear()};
  p.kernel.coupling = {{1, 1}, {1, 1}};
  p.free_terms = {p.free_terms[0], p.free_terms[0]};
  const auto s = solve_volterra(p);
  CHECK(sup_error(s.fields[0], [](double x) { return std::exp(2 * x); }) <= 5e-4);
}

TEST_CASE("guards") {
  NonlinearitySpec k;
  k.b = 1.2;
  auto p = scalar(0.5, k, 1e-3);
  CHECK_THROWS_AS(solve_volterra(p), GuardViolation);
  p.override_guard = true;
  CHECK_NOTHROW(solve_volterra(p));
  k.b = 0.6;
  auto q = scalar(-0.5, k, 1e-3);
  CHECK_THROWS_AS(solve_volterra(q), GuardViolation);  // b + 0.5 >= 1
  k.b = 0.4;
  q = scalar(-0.5, k, 1e-3);
  CHECK_NOTHROW(solve_volterra(q));
  CHECK_THROWS_AS(solve_volterra(scalar(-0.5, k, 0.0)), InvalidArgument);
}

TEST_CASE("non-convergent node iteration reports its node") {
  auto p = scalar(0.5, linear(), 1e-3);
  p.max_iterations = 1;
  try {
    solve_volterra(p);
    FAIL("expected ConvergenceError");
  } catch (const ConvergenceError& e) {
    CHECK(e.node() == 1);
    CHECK(e.residual() > 0.0);
  }
}

TEST_CASE("uniqueness probe: identical inputs give zero") {
  const auto t = uniqueness_probe(scalar(0.5, NonlinearitySpec{}, 1e-3), {}, {1e-2, 1e-4, 1e-6});
  for (const auto& r : t) CHECK(r.value == 0.0);
}

TEST_CASE("uniqueness probe: negligible shift within the eps^1.5 envelope") {
  NonlinearitySpec k;
  k.b = 0.3;
  Perturbation pert;
  pert.kind = Perturbation::Kind::NegligibleShift;
  pert.s = 2.0;
  const std::vector<double> sched{1e-2, 1e-3, 1e-4, 1e-5, 1e-6, 1e-8, 1e-10, 1e-12};
  const auto t = uniqueness_probe(scalar(0.5, k, 1e-3), pert, sched);
  const double C = t[0].value / std::pow(sched[0], 1.5);
  for (const auto& r : t) {
    CHECK(r.value > 0.0);
    CHECK(r.value <= C * std::pow(r.eps, 1.5));
  }
}

TEST_CASE("uniqueness probe: two mollifiers converge together") {
  const auto t = uniqueness_probe(scalar(1.0, linear(), 1e-3),
                                  {Perturbation::Kind::TwoMollifiers, 0.0, ProfileKind::MomentVanishing},
                                  {1e-2, 1e-4, 1e-8, 1e-16});
  for (std::size_t i = 1; i < t.size(); ++i) CHECK(t[i].value < t[i - 1].value);
}
