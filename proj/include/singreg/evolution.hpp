#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "singreg/grid_field.hpp"
#include "singreg/mollifier.hpp"
#include "singreg/regularize.hpp"
#include "singreg/volterra.hpp"

namespace singreg {

enum class Variant { ParabolicPlain, ParabolicConservative, ParabolicPotential, SchrodingerLinear };

/// Data or potential: a singular datum regularized at ε, a smooth function, or both (summed).
struct SpatialTerm {
  std::optional<SingularDataSpec> singular;
  std::function<double(double, double)> smooth;  // (x, y); y = 0 in 1-D
  bool present() const { return singular.has_value() || static_cast<bool>(smooth); }
};

struct EvolutionProblem {
  Variant variant = Variant::ParabolicPlain;
  GridSpec grid = GridSpec::line(-16.0, 16.0, 1024);
  double T = 1.0;
  double dt = 1e-3;
  SpatialTerm initial;
  std::optional<NonlinearitySpec> nonlinearity;  // g (plain, potential) or ĝ (conservative)
  SpatialTerm potential;                         // V (potential, Schrödinger)
  MollifierSpec time_mollifier;                  // φ_ε in E_{nε} = E_n *_t φ_ε
  bool mollify_kernel = true;                    // false: only the data are regularized
  double eps = 1e-4;
  bool override_guard = false;
  double overflow = 1e12;
  std::size_t record_stride = 1;

  int dim() const { return grid.dim(); }
  std::size_t steps() const;
  /// b < 1; potential: c·n < 1; Schrödinger: c < 1 + 1/n (c = potential amplitude exponent).
  void check_guard() const;
  void validate() const;
};

struct EvolutionSolution {
  History history;                      // t_k = k·dt·stride, k = 0..
  std::vector<double> duhamel_increment;  // per step: sup of dt·|F(u_k)|
  double T1 = 0.0;                        // C¹ window start, T/4

  /// sup over recorded times of ||u(t)||_p.
  double sup_norm(double p) const;
  /// sup over t ∈ [T1, T) of ||∂_t u(t)||_p.
  double c1_seminorm(double p) const;
};

EvolutionSolution solve_evolution(const EvolutionProblem& problem);

/// Initial datum u_{0ε} and potential V_ε on the problem grid.
Field initial_field(const EvolutionProblem& problem);
std::optional<Field> potential_field(const EvolutionProblem& problem);

struct ModerateRow {
  double eps;
  double sup_norm;
  double c1_seminorm;
};
using ModerateTable = std::vector<ModerateRow>;

ModerateTable moderateness_sweep(const EvolutionProblem& problem,
                                 const std::vector<double>& schedule, double p,
                                 unsigned threads = 1);

/// sup_t ||ũ_ε(t) - u_ε(t)||_q per ε. NegligibleShift adds ε^s·bump to the initial datum
/// and marches the difference through the mean-value slope of F.
SweepTable uniqueness_probe_evolution(const EvolutionProblem& problem,
                                      const Perturbation& perturbation,
                                      const std::vector<double>& schedule, double q,
                                      unsigned threads = 1);

}  // namespace singreg
