#include "singreg/grid_field.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "singreg/error.hpp"
#include "singreg/special.hpp"

namespace singreg {

namespace {

void check_axis(double lo, double hi, std::size_t n) {
  if (!(std::isfinite(lo) && std::isfinite(hi)) || !(hi > lo))
    throw InvalidArgument("GridSpec: requires hi > lo");
  if (n < 8) throw InvalidArgument("GridSpec: at least 8 points per axis");
  if (!is_power_of_two(n))
    throw InvalidArgument("GridSpec: points must be a power of two, got " + std::to_string(n));
}

template <class T>
void check_finite(std::span<const T> v) {
  for (std::size_t i = 0; i < v.size(); ++i) {
    bool ok;
    if constexpr (std::is_same_v<T, double>) {
      ok = std::isfinite(v[i]);
    } else {
      ok = std::isfinite(v[i].real()) && std::isfinite(v[i].imag());
    }
    if (!ok) throw NonFiniteError("Field: non-finite sample at index " + std::to_string(i), i);
  }
}

double power_sum(const Field& f, double p, std::size_t begin, std::size_t end) {
  double acc = 0.0;
  if (p == 1.0) {
    for (std::size_t i = begin; i < end; ++i) acc += f.modulus(i);
  } else if (p == 2.0) {
    for (std::size_t i = begin; i < end; ++i) {
      const double m = f.modulus(i);
      acc += m * m;
    }
  } else {
    for (std::size_t i = begin; i < end; ++i) acc += std::pow(f.modulus(i), p);
  }
  return acc;
}

}  // namespace

GridSpec::GridSpec(int dim, std::array<double, 2> lo, std::array<double, 2> hi,
                   std::array<std::size_t, 2> n)
    : dim_(dim), lo_(lo), hi_(hi), n_(n) {}

GridSpec GridSpec::line(double lo, double hi, std::size_t points) {
  check_axis(lo, hi, points);
  return GridSpec(1, {lo, 0.0}, {hi, 0.0}, {points, 1});
}

GridSpec GridSpec::plane(double lo_x, double hi_x, std::size_t nx, double lo_y,
                         double hi_y, std::size_t ny) {
  check_axis(lo_x, hi_x, nx);
  check_axis(lo_y, hi_y, ny);
  return GridSpec(2, {lo_x, lo_y}, {hi_x, hi_y}, {nx, ny});
}

double GridSpec::cell_volume() const {
  return dim_ == 1 ? spacing(0) : spacing(0) * spacing(1);
}

Field Field::real(const GridSpec& grid, std::vector<double> values) {
  if (values.size() != grid.size())
    throw InvalidArgument("Field: value count does not match grid");
  check_finite<double>(values);
  Field f(grid, FieldKind::Real);
  f.re_ = std::move(values);
  return f;
}

Field Field::complex(const GridSpec& grid, std::vector<std::complex<double>> values) {
  if (values.size() != grid.size())
    throw InvalidArgument("Field: value count does not match grid");
  check_finite<std::complex<double>>(values);
  Field f(grid, FieldKind::Complex);
  f.cx_ = std::move(values);
  return f;
}

void Field::throw_dim_mismatch() {
  throw InvalidArgument("Field::sample: callable arity does not match grid dimension");
}

Field Field::zeros(const GridSpec& grid, FieldKind kind) {
  if (kind == FieldKind::Real) return real(grid, std::vector<double>(grid.size(), 0.0));
  return complex(grid, std::vector<std::complex<double>>(grid.size()));
}

std::span<const double> Field::real_values() const {
  if (kind_ != FieldKind::Real) throw InvalidArgument("Field: not a real field");
  return re_;
}

std::span<const std::complex<double>> Field::complex_values() const {
  if (kind_ != FieldKind::Complex) throw InvalidArgument("Field: not a complex field");
  return cx_;
}

std::complex<double> Field::value(std::size_t i) const {
  return kind_ == FieldKind::Real ? std::complex<double>(re_[i], 0.0) : cx_[i];
}

double Field::modulus(std::size_t i) const {
  return kind_ == FieldKind::Real ? std::abs(re_[i]) : std::abs(cx_[i]);
}

std::vector<std::complex<double>> Field::to_complex() const {
  if (kind_ == FieldKind::Complex) return cx_;
  return std::vector<std::complex<double>>(re_.begin(), re_.end());
}

Field Field::scaled(double c) const {
  if (kind_ == FieldKind::Real) {
    std::vector<double> v(re_);
    for (double& x : v) x *= c;
    return real(grid_, std::move(v));
  }
  std::vector<std::complex<double>> v(cx_);
  for (auto& z : v) z *= c;
  return complex(grid_, std::move(v));
}

double lp_norm(const Field& f, double p) {
  if (!(p > 0.0)) throw InvalidArgument("lp_norm: p must be positive");
  if (std::isinf(p)) {
    double m = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) m = std::max(m, f.modulus(i));
    return m;
  }
  const double s = f.grid().cell_volume() * power_sum(f, p, 0, f.size());
  return std::pow(s, 1.0 / p);
}

double lp_norm_on(const Field& f, double p, double lo, double hi) {
  if (!(p > 0.0)) throw InvalidArgument("lp_norm_on: p must be positive");
  if (f.grid().dim() != 1) throw InvalidArgument("lp_norm_on: 1-D fields only");
  const GridSpec& g = f.grid();
  const double h = g.spacing();
  // node tolerance so that a window edge on a node is included
  const double tol = 1e-9 * h;
  std::size_t begin = f.size(), end = 0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double x = g.coord(0, i);
    if (x >= lo - tol && x <= hi + tol) {
      begin = std::min(begin, i);
      end = i + 1;
    }
  }
  if (begin >= end) return 0.0;
  if (std::isinf(p)) {
    double m = 0.0;
    for (std::size_t i = begin; i < end; ++i) m = std::max(m, f.modulus(i));
    return m;
  }
  return std::pow(h * power_sum(f, p, begin, end), 1.0 / p);
}

double integral(const Field& f) {
  double acc = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) acc += f.value(i).real();
  return acc * f.grid().cell_volume();
}

double sup_in_time_norm(std::span<const TimeSample> history, double p) {
  if (history.empty()) throw InvalidArgument("sup_in_time_norm: empty history");
  double m = 0.0;
  for (const auto& s : history) m = std::max(m, lp_norm(s.field, p));
  return m;
}

double time_derivative_seminorm(std::span<const TimeSample> history, double t1,
                                double p) {
  std::size_t first = history.size();
  for (std::size_t k = 0; k < history.size(); ++k) {
    if (history[k].t >= t1) {
      first = k;
      break;
    }
  }
  if (first >= history.size() || history.size() - first < 3)
    throw InvalidArgument("time_derivative_seminorm: need at least 3 samples at t >= T1");
  const double dt = history[1].t - history[0].t;
  for (std::size_t k = 1; k < history.size(); ++k) {
    const double step = history[k].t - history[k - 1].t;
    if (std::abs(step - dt) > 1e-9 * std::max(1.0, std::abs(dt)))
      throw InvalidArgument("time_derivative_seminorm: non-uniform time step");
  }
  const GridSpec& g = history[first].field.grid();
  double best = 0.0;
  for (std::size_t k = std::max<std::size_t>(first, 1); k + 1 < history.size(); ++k) {
    const Field& a = history[k + 1].field;
    const Field& b = history[k - 1].field;
    std::vector<std::complex<double>> d(g.size());
    for (std::size_t i = 0; i < d.size(); ++i) d[i] = (a.value(i) - b.value(i)) / (2.0 * dt);
    best = std::max(best, lp_norm(Field::complex(g, std::move(d)), p));
  }
  return best;
}

double evaluate_norm(std::span<const TimeSample> history, const NormRequest& req) {
  if (history.empty()) throw InvalidArgument("evaluate_norm: empty history");
  switch (req.kind) {
    case NormRequest::Kind::Lp:
      return lp_norm(history.back().field, req.p);
    case NormRequest::Kind::SupInTime:
      return sup_in_time_norm(history, req.p);
    case NormRequest::Kind::C1Seminorm: {
      const double t_end = history.back().t;
      if (!(req.t1 > 0.0 && req.t1 < t_end))
        throw InvalidArgument("evaluate_norm: C1 seminorm needs 0 < T1 < T");
      return time_derivative_seminorm(history, req.t1, req.p);
    }
  }
  return 0.0;
}

InterpolationReport interpolation_check(const Field& f, double p, double theta) {
  if (!(theta >= 0.0 && theta <= 1.0))
    throw InvalidArgument("interpolation_check: theta must lie in [0,1]");
  if (!(p > 0.0)) throw InvalidArgument("interpolation_check: p must be positive");
  const double r = std::isinf(p) ? 1.0 : p / (p + 1.0);
  const double lhs = lp_norm(f, r);
  const double n1 = lp_norm(f, 1.0);
  const double n2 = lp_norm(f, 2.0);
  const double rhs = (n1 == 0.0 || n2 == 0.0) ? 0.0
                                              : std::pow(n1, 1.0 - theta) * std::pow(n2, theta);
  return {lhs, rhs};
}

}  // namespace singreg
