#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <limits>
#include <span>
#include <type_traits>
#include <vector>

namespace singreg {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Uniform periodic box in one or two dimensions. Samples sit at
/// lo + i*h for i < points (the right endpoint is excluded).
class GridSpec {
 public:
  static GridSpec line(double lo, double hi, std::size_t points);
  static GridSpec plane(double lo_x, double hi_x, std::size_t nx, double lo_y,
                        double hi_y, std::size_t ny);

  int dim() const noexcept { return dim_; }
  double lo(int axis = 0) const { return lo_.at(axis); }
  double hi(int axis = 0) const { return hi_.at(axis); }
  std::size_t points(int axis = 0) const { return n_.at(axis); }
  double spacing(int axis = 0) const { return (hi_.at(axis) - lo_.at(axis)) / n_.at(axis); }
  double coord(int axis, std::size_t i) const { return lo(axis) + i * spacing(axis); }
  double length(int axis = 0) const { return hi(axis) - lo(axis); }
  std::size_t size() const noexcept { return dim_ == 1 ? n_[0] : n_[0] * n_[1]; }
  double cell_volume() const;

  bool operator==(const GridSpec&) const = default;

 private:
  GridSpec(int dim, std::array<double, 2> lo, std::array<double, 2> hi,
           std::array<std::size_t, 2> n);
  int dim_ = 1;
  std::array<double, 2> lo_{};
  std::array<double, 2> hi_{};
  std::array<std::size_t, 2> n_{};
};

enum class FieldKind { Real, Complex };

/// Immutable samples of a real or complex function on a GridSpec.
/// 2-D layout is row-major with axis 0 slowest.
class Field {
 public:
  static Field real(const GridSpec& grid, std::vector<double> values);
  static Field complex(const GridSpec& grid, std::vector<std::complex<double>> values);
  static Field zeros(const GridSpec& grid, FieldKind kind = FieldKind::Real);

  /// f(x) on 1-D grids, f(x, y) on 2-D grids.
  template <class F>
  static Field sample(const GridSpec& grid, F&& f) {
    std::vector<double> v(grid.size());
    if constexpr (std::is_invocable_v<F, double>) {
      if (grid.dim() != 1) throw_dim_mismatch();
      for (std::size_t i = 0; i < v.size(); ++i) v[i] = f(grid.coord(0, i));
    } else {
      if (grid.dim() != 2) throw_dim_mismatch();
      const std::size_t ny = grid.points(1);
      for (std::size_t i = 0; i < grid.points(0); ++i)
        for (std::size_t j = 0; j < ny; ++j)
          v[i * ny + j] = f(grid.coord(0, i), grid.coord(1, j));
    }
    return real(grid, std::move(v));
  }

  const GridSpec& grid() const noexcept { return grid_; }
  FieldKind kind() const noexcept { return kind_; }
  bool is_complex() const noexcept { return kind_ == FieldKind::Complex; }
  std::size_t size() const noexcept { return grid_.size(); }

  /// Throws for complex fields.
  std::span<const double> real_values() const;
  /// Throws for real fields.
  std::span<const std::complex<double>> complex_values() const;

  std::complex<double> value(std::size_t i) const;
  double modulus(std::size_t i) const;

  /// Promotes to complex (copy if already complex).
  std::vector<std::complex<double>> to_complex() const;
  Field scaled(double c) const;

 private:
  Field(const GridSpec& grid, FieldKind kind) : grid_(grid), kind_(kind) {}
  [[noreturn]] static void throw_dim_mismatch();
  GridSpec grid_;
  FieldKind kind_;
  std::vector<double> re_;
  std::vector<std::complex<double>> cx_;
};

/// (h^dim Σ|f_j|^p)^{1/p}; max |f_j| for p = ∞. Quasi-norm for p < 1.
double lp_norm(const Field& f, double p);

/// lp_norm restricted to 1-D nodes with lo ≤ x ≤ hi.
double lp_norm_on(const Field& f, double p, double lo, double hi);

/// ∫f over the box (Riemann sum); complex fields return the real part.
double integral(const Field& f);

struct TimeSample {
  double t;
  Field field;
};
using History = std::vector<TimeSample>;

/// sup over stored times of ||u(t)||_p.
double sup_in_time_norm(std::span<const TimeSample> history, double p);

/// max over interior times t_k ≥ T1 of ||(u_{k+1} - u_{k-1}) / (2Δt)||_p.
double time_derivative_seminorm(std::span<const TimeSample> history, double t1,
                                double p);

struct NormRequest {
  enum class Kind { Lp, SupInTime, C1Seminorm };
  Kind kind = Kind::Lp;
  double p = 2.0;
  double t1 = 0.0;
  double theta = 0.0;
};

/// Evaluates a request on a history; Lp uses the last sample.
double evaluate_norm(std::span<const TimeSample> history, const NormRequest& req);

struct InterpolationReport {
  double lhs;
  double rhs;
};

/// lhs = ||f||_{p/(p+1)}, rhs = ||f||_1^{1-θ} ||f||_2^θ. Reports only.
InterpolationReport interpolation_check(const Field& f, double p, double theta);

}  // namespace singreg
