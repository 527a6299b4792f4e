#pragma once

#include <span>
#include <vector>

#include "singreg/grid_field.hpp"
#include "singreg/mollifier.hpp"

namespace singreg {

/// Order α of J^α together with the derivative shift used when α ≤ 0.
class FracOrder {
 public:
  explicit FracOrder(double alpha);
  double alpha() const noexcept { return alpha_; }
  /// ᾱ = -α for α < 0, otherwise 0.
  double abar() const noexcept { return alpha_ < 0.0 ? -alpha_ : 0.0; }
  /// Smallest n ≥ 0 with α + n > 0.
  int n_shift() const noexcept { return n_shift_; }
  /// α + n_shift, always in (0, 1] when α ≤ 0.
  double shifted() const noexcept { return alpha_ + n_shift_; }

 private:
  double alpha_;
  int n_shift_;
};

/// Φ_α(t) = t_+^{α-1} / Γ(α).
double phi_alpha(double alpha, double t);

/// Product-trapezoid J^α on samples f_j = f(j h), exact for piecewise-linear f.
std::vector<double> frac_integral(std::span<const double> f, double h, double alpha);
/// Same quadrature, only outputs j ≥ first (entries below are zero).
std::vector<double> frac_integral_from(std::span<const double> f, double h, double alpha,
                                       std::size_t first);
/// Product-trapezoid weights of J^α on a uniform grid:
/// J^α f(x_j) ≈ start(j) f_0 + Σ_{0<i≤j} lag[j-i] f_i.
struct ProductWeights {
  double alpha;
  double scale;             // h^α / Γ(α+2)
  std::vector<double> lag;  // lag[0] is the diagonal weight
  double start(std::size_t j) const;
};
ProductWeights product_weights(std::size_t n, double h, double alpha);

/// J^α with the integration origin at the grid's lower bound.
Field frac_integral(const Field& f, double alpha);

struct MollifiedKernel {
  FracOrder order;
  MollifierSpec mollifier;
  double eps;
  Field samples;  // on a grid covering [-support, T] with a node at 0

  /// L¹ norm over the nodes in [lo, hi].
  double l1_on(double lo, double hi) const;
  /// Index of the node at t = 0.
  std::size_t origin_index() const;
};

/// Grid with spacing h, a node at 0, covering [-support, T].
GridSpec kernel_grid(const MollifierSpec& spec, double eps, double T, double h);

/// Φ_α * φ_ε for α > 0, Φ_{α+n} * D^n φ_ε for α ≤ 0, by product integration.
MollifiedKernel build_mollified_kernel(const FracOrder& order, const MollifierSpec& spec,
                                       double eps, const GridSpec& grid);

/// Same kernel at one point by Gauss quadrature after the substitution u = (t-s)^β.
double mollified_kernel_value(const FracOrder& order, const MollifierSpec& spec, double eps,
                              double t);

struct BoundRow {
  double eps;
  double value;
};
using BoundTable = std::vector<BoundRow>;

/// ||Φ_α * φ_ε||_{L¹(-support, T)} for each ε.
BoundTable lemma1_bound_report(const FracOrder& order, const MollifierSpec& spec,
                               std::span<const double> schedule, double T, double h = 1e-3);

}  // namespace singreg
