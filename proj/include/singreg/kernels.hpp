#pragma once

#include <complex>
#include <optional>
#include <span>
#include <vector>

#include "singreg/fracint.hpp"
#include "singreg/grid_field.hpp"
#include "singreg/mollifier.hpp"

namespace singreg {

enum class Family { Heat, HeatGradient, Schrodinger };

/// Propagator ∂_{x_0}^β P_n(t), optionally mollified in time with φ_ε.
/// HeatGradient carries one extra x_0 derivative. eps = 0 means unmollified.
struct PropagatorSpec {
  Family family = Family::Heat;
  int dim = 1;
  int beta = 0;
  MollifierSpec mollifier;  // 1-D time mollifier
  double eps = 0.0;

  void validate() const;
  /// Total number of x_0 derivatives.
  int x_order() const { return beta + (family == Family::HeatGradient ? 1 : 0); }
};

/// ||s^{k/2} ∂_{x_0}^k E_n(s, ·)||_1 = 2^{-k/2} E|He_k(Z)|, independent of s and n.
double heat_norm_constant(int k);

/// m(t, λ) = ∫_{τ<t} e^{-λ(t-τ)} φ_ε(τ) dτ ;
/// φ_ε is interpolated quadratically per cell and each cell is integrated exactly
/// against the exponential.
class TimeMollifiedMultiplier {
 public:
  TimeMollifiedMultiplier(const MollifierSpec& spec, double eps, int cells_per_width = 256);

  std::complex<double> operator()(double t, std::complex<double> lambda) const;
  /// Values at t_k = t0 + k dt, k < count, for each λ; layout [k * lambdas.size() + j].
  std::vector<std::complex<double>> series(std::span<const std::complex<double>> lambdas,
                                           double t0, double dt, std::size_t count) const;
  /// ∫_{τ<t} φ_ε.
  double mass_before(double t) const { return (*this)(t, 0.0).real(); }
  double support() const noexcept { return support_; }

 private:
  std::complex<double> segment(std::complex<double> lambda, double a, double b, double t) const;
  double phi_at(double tau) const;
  double lo_;
  double d_;
  double support_;
  std::vector<double> phi_;
};

/// A propagator at one time, realized as Fourier multipliers on a grid or in closed form.
class KernelHandle {
 public:
  static KernelHandle on_grid(const PropagatorSpec& spec, double t, const GridSpec& grid);
  static KernelHandle closed_form(const PropagatorSpec& spec, double t);

  const PropagatorSpec& spec() const noexcept { return spec_; }
  double time() const noexcept { return t_; }
  bool has_grid() const noexcept { return grid_.has_value(); }
  const GridSpec& grid() const;
  std::span<const std::complex<double>> multipliers() const { return mult_; }
  /// Mollifier mass at τ < t that actually enters the kernel (1 when eps = 0).
  double mollifier_mass() const noexcept { return mass_; }

  /// Kernel value at a point (eps = 0 closed form, eps > 0 by τ-quadrature).
  std::complex<double> value(double x, double y = 0.0) const;

 private:
  KernelHandle(const PropagatorSpec& spec, double t) : spec_(spec), t_(t) {}
  PropagatorSpec spec_;
  double t_;
  std::optional<GridSpec> grid_;
  std::vector<std::complex<double>> mult_;
  double mass_ = 1.0;
};

/// Kernel sampled on a grid from its closed form (eps = 0 only).
Field sample_kernel(const KernelHandle& handle, const GridSpec& grid);

/// Periodic convolution with the kernel through its Fourier multiplier.
Field apply_propagator(const KernelHandle& handle, const Field& f);

/// Fourier multiplier of the spec at time t for every mode of the grid.
std::vector<std::complex<double>> propagator_multipliers(const PropagatorSpec& spec, double t,
                                                         const GridSpec& grid);
/// Spatial symbol part: λ(ξ) and (iξ_0)^k per mode.
struct ModeTable {
  std::vector<std::complex<double>> lambda;
  std::vector<std::complex<double>> derivative;
};
ModeTable mode_table(const PropagatorSpec& spec, const GridSpec& grid);

/// Per-ε L¹ norms of ∂^β E_{nε}(t,·) through the time reduction; eps = 0 entries are closed form.
BoundTable heat_l1_bound(const PropagatorSpec& spec, double t, std::span<const double> schedule);
BoundTable heat_gradient_l1_bound(const PropagatorSpec& spec, double t,
                                  std::span<const double> schedule);
BoundTable schrodinger_sup_bound(const PropagatorSpec& spec, double t,
                                 std::span<const double> schedule);

/// sup_x |S_{nε}(t,x)| = (4π)^{-n/2} ∫_{τ<t} (t-τ)^{-n/2-β} φ_ε(τ) dτ at a single t.
double schrodinger_sup_pointwise(const PropagatorSpec& spec, double t);

}  // namespace singreg
