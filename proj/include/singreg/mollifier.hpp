#pragma once

#include <string>

#include "singreg/grid_field.hpp"

namespace singreg {

/// L(ε): the rate at which the delta sequence concentrates.
class ScaleLaw {
 public:
  enum class Kind { Log, LogLog, Power };

  static ScaleLaw log() { return ScaleLaw(Kind::Log, 0.0); }
  static ScaleLaw loglog() { return ScaleLaw(Kind::LogLog, 0.0); }
  static ScaleLaw power(double gamma);

  Kind kind() const noexcept { return kind_; }
  double gamma() const noexcept { return gamma_; }
  bool valid(double eps) const noexcept;
  /// Throws InvalidArgument outside the validity range.
  double operator()(double eps) const;
  std::string name() const;

  bool operator==(const ScaleLaw&) const = default;

 private:
  ScaleLaw(Kind k, double g) : kind_(k), gamma_(g) {}
  Kind kind_;
  double gamma_;
};

enum class ProfileKind { Bump, MomentVanishing };

/// φ_ε(x) = L(ε)^{a n} φ(x L(ε)).
struct MollifierSpec {
  ProfileKind profile = ProfileKind::Bump;
  int moment_order = 0;  // MomentVanishing only; 0 means every order
  ScaleLaw scale = ScaleLaw::log();
  double amplitude_exponent = 1.0;
  int dim = 1;

  void validate() const;
};

/// Radius outside which φ is zero (Bump) or negligible (MomentVanishing).
double profile_support(ProfileKind kind);

/// Unscaled profile and its x-derivatives; 2-D derivatives act on axis 0.
double profile_value(ProfileKind kind, double x);
double profile_value(ProfileKind kind, double x, double y);
double profile_derivative(ProfileKind kind, double x, int k);
double profile_derivative(ProfileKind kind, double x, double y, int k);

/// Fourier transform of the unscaled 1-D profile (real, even).
double profile_fourier(ProfileKind kind, double xi);

double mollifier_value(const MollifierSpec& spec, double eps, double x);
double mollifier_derivative(const MollifierSpec& spec, double eps, double x, int k);

/// Throws ResolutionError when 2/L(ε) spans fewer than 8 grid cells.
void check_resolution(const MollifierSpec& spec, double eps, const GridSpec& grid);

Field sample_mollifier(const MollifierSpec& spec, double eps, const GridSpec& grid);
/// ∂_{x_0}^k φ_ε on the grid.
Field sample_mollifier_derivative(const MollifierSpec& spec, double eps,
                                  const GridSpec& grid, int k);

/// ||∂^k φ_ε||_1 by quadrature of the scaled derivative.
double mollifier_derivative_l1(const MollifierSpec& spec, double eps, int k);

/// κ_ε: 1 on (lo+2ε, hi-2ε), 0 outside (lo+ε, hi-ε); eps = 0 gives the indicator.
struct CutoffPlateau {
  double lo = -1.0;
  double hi = 1.0;
  double eps = 0.0;
};

double plateau_value(const CutoffPlateau& p, double x);
Field sample_plateau(const CutoffPlateau& p, const GridSpec& grid);

}  // namespace singreg
