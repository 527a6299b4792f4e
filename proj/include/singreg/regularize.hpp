#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "singreg/grid_field.hpp"
#include "singreg/mollifier.hpp"

namespace singreg {

enum class NonlinearityModel {
  PowerLaw,       // c sign(u) |u|^γ
  SqrtAbs,        // c |u|^{1/2}
  PiecewiseStep,  // c sign(u)
  Quadratic,      // c u²/2
  Linear,         // c u
  Extremal,       // c L(ε)^b u, saturates the Lipschitz budget
  Custom          // piecewise-linear through (u_i, g_i)
};

struct NonlinearitySpec {
  NonlinearityModel model = NonlinearityModel::PowerLaw;
  double gamma = 0.5;
  double b = 0.5;
  double coefficient = 1.0;
  ScaleLaw scale = ScaleLaw::log();
  std::vector<double> custom_u;
  std::vector<double> custom_g;
  bool override_guard = false;  // admit b ≥ 1

  void validate() const;
};

/// g_ε: the cut-off regularization of g at one ε (eps = 0 returns g itself).
class RegularizedNonlinearity {
 public:
  RegularizedNonlinearity() = default;
  RegularizedNonlinearity(const NonlinearitySpec& spec, double eps);

  double operator()(double u) const;
  double derivative(double u) const;
  /// The unregularized g.
  double limit(double u) const;
  /// Transition width δ(ε); 0 when inactive.
  double delta() const noexcept { return delta_; }
  double scale_value() const noexcept { return L_; }
  bool is_odd() const noexcept;
  const NonlinearitySpec& spec() const noexcept { return spec_; }

 private:
  double custom_linear(double u) const;
  double custom_slope(double u) const;
  NonlinearitySpec spec_;
  double eps_ = 0.0;
  double L_ = 1.0;
  double delta_ = 0.0;
};

RegularizedNonlinearity regularize_nonlinearity(const NonlinearitySpec& spec, double eps);

/// Max difference quotient over seeded random pairs and over neighbours of a
/// sorted random lattice in [lo, hi].
double lipschitz_probe(const std::function<double(double)>& map, double lo, double hi,
                       std::size_t samples, std::uint64_t seed = 20240917);

/// K^i(f) = λ_i g^i_ε(Σ_j c_ij f_j): the u-dependence of the Volterra kernel.
struct KernelFunctionSpec {
  std::vector<NonlinearitySpec> components;
  std::vector<std::vector<double>> coupling;  // empty means identity
  std::vector<double> lambda;                 // empty means all ones

  std::size_t size() const noexcept { return components.size(); }
  double max_b() const;
  void validate() const;
};

struct DeltaTerm {
  double position = 0.0;
  double position_y = 0.0;
  int order = 0;
  double coefficient = 1.0;
};

struct DistributionTerm {
  int order = 0;
  std::function<double(double)> density;  // continuous c_j with g = Σ D^{order} c_j
};

enum class FracPowerRoute { Spectral, Direct };

struct SingularDataSpec {
  enum class Kind { DeltaSum, FracPower, Distribution };
  Kind kind = Kind::DeltaSum;
  std::vector<DeltaTerm> deltas;
  double k = 1.0;
  std::optional<Field> psi;
  FracPowerRoute route = FracPowerRoute::Spectral;
  std::vector<DistributionTerm> terms;
  double interval_lo = -1.0;
  double interval_hi = 1.0;
  MollifierSpec mollifier;

  static SingularDataSpec delta(const MollifierSpec& m, double position = 0.0, int order = 0,
                                double coefficient = 1.0);
};

/// The ε-regularized datum sampled on the grid.
Field regularize_data(const SingularDataSpec& spec, double eps, const GridSpec& grid);

/// Periodic convolution of a field with the ε-mollifier derivative ∂^k φ_ε centred at 0.
Field convolve_mollifier(const Field& f, const MollifierSpec& spec, double eps, int k);

}  // namespace singreg
