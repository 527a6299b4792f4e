#pragma once

#include <cstddef>
#include <vector>

namespace singreg {

/// Γ(x) by the Lanczos approximation (g = 7, 9 terms), reflection for x < 1/2.
double gamma_fn(double x);

/// E_α(z) = Σ_{k<terms} z^k / Γ(αk + 1), truncated series.
double mittag_leffler(double alpha, double z, int terms = 60);

/// C^∞ step: 0 for s ≤ 0, 1 for s ≥ 1, strictly increasing in between.
double smooth_step(double s);

/// d/ds smooth_step(s).
double smooth_step_derivative(double s);

struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// n-point Gauss-Legendre rule on [-1, 1].
const QuadratureRule& gauss_legendre(std::size_t n);

/// Composite Gauss-Legendre rule on [a, b] with `panels` equal panels.
QuadratureRule composite_gauss(double a, double b, std::size_t panels,
                               std::size_t order = 16);

bool is_power_of_two(std::size_t n);
std::size_t next_power_of_two(std::size_t n);

}  // namespace singreg
