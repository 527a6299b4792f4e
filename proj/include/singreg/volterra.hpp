#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "singreg/grid_field.hpp"
#include "singreg/mollifier.hpp"
#include "singreg/regularize.hpp"

namespace singreg {

/// One component of the free term: a smooth function, a singular datum, or both (summed).
struct FreeTerm {
  std::function<double(double)> smooth;
  std::optional<SingularDataSpec> singular;
};

/// f_i = g_i + ∫₀ˣ K^i(f(y)) R_ε(x-y) dy with R_ε = |·|^{α-1} * φ_ε (α > 0)
/// or Φ_{α+n} * Dⁿφ_ε (α ≤ 0).
struct VolterraProblem {
  double alpha = 1.0;
  KernelFunctionSpec kernel;
  bool kernel_zero = false;  // K ≡ 0
  std::vector<FreeTerm> free_terms;
  double X = 1.0;
  std::size_t points = 1024;  // nodes x_j = j X/(points-1), power of two
  MollifierSpec mollifier;
  double eps = 1e-4;          // 0 selects the unmollified polar kernel (α > 0 only)
  bool override_guard = false;
  double tolerance = 1e-10;
  int max_iterations = 50;

  std::size_t size() const noexcept { return free_terms.size(); }
  GridSpec grid() const;
  /// Parameter guard: b < 1 for α > 0, b + ᾱ < 1 for α ≤ 0.
  void check_guard() const;
  void validate() const;
};

struct VolterraSolution {
  std::vector<Field> fields;
  int iterations = 0;    // worst per-node count
  double residual = 0.0; // sup of the last per-node fixed-point defect
};

VolterraSolution solve_volterra(const VolterraProblem& problem);

/// R_ε sampled at t = j·h, j = 0..count-1.
std::vector<double> volterra_kernel_samples(const VolterraProblem& problem, double h,
                                            std::size_t count);

struct SweepRow {
  double eps;
  double value;
};
using SweepTable = std::vector<SweepRow>;

/// sup_x max_i |f_i| per ε.
SweepTable volterra_sweep(const VolterraProblem& problem, const std::vector<double>& schedule,
                          unsigned threads = 1);

struct Perturbation {
  enum class Kind { Identical, TwoMollifiers, NegligibleShift };
  Kind kind = Kind::Identical;
  double s = 3.0;  // NegligibleShift: free term + ε^s · bump
  ProfileKind alternate = ProfileKind::MomentVanishing;
};

/// sup |f_ε - f̃_ε| per ε, f̃ solved from the perturbed problem.
SweepTable uniqueness_probe(const VolterraProblem& problem, const Perturbation& perturbation,
                            const std::vector<double>& schedule, unsigned threads = 1);

/// Bump of unit height centred on [0, X] used by NegligibleShift.
double shift_bump(double x, double X);

}  // namespace singreg
