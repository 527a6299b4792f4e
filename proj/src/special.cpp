#include "singreg/special.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>

#include "singreg/error.hpp"

namespace singreg {

namespace {

constexpr double kLanczosG = 7.0;
constexpr double kLanczosCoef[9] = {
    0.99999999999980993,     676.5203681218851,     -1259.1392167224028,
    771.32342877765313,      -176.61502916214059,   12.507343278686905,
    -0.13857109526572012,    9.9843695780195716e-6, 1.5056327351493116e-7};

double bump_core(double s) { return s > 0.0 ? std::exp(-1.0 / s) : 0.0; }

}  // namespace

double gamma_fn(double x) {
  if (!std::isfinite(x)) throw InvalidArgument("gamma_fn: non-finite argument");
  if (x <= 0.0 && x == std::floor(x))
    throw InvalidArgument("gamma_fn: pole at non-positive integer");
  if (x < 0.5) {
    return std::numbers::pi / (std::sin(std::numbers::pi * x) * gamma_fn(1.0 - x));
  }
  x -= 1.0;
  double a = kLanczosCoef[0];
  const double t = x + kLanczosG + 0.5;
  for (int i = 1; i < 9; ++i) a += kLanczosCoef[i] / (x + i);
  return std::sqrt(2.0 * std::numbers::pi) * std::pow(t, x + 0.5) * std::exp(-t) * a;
}

double mittag_leffler(double alpha, double z, int terms) {
  if (!(alpha > 0.0)) throw InvalidArgument("mittag_leffler: alpha must be positive");
  double s = 0.0;
  double zk = 1.0;
  for (int k = 0; k < terms; ++k) {
    s += zk / gamma_fn(alpha * k + 1.0);
    zk *= z;
  }
  return s;
}

double smooth_step(double s) {
  if (s <= 0.0) return 0.0;
  if (s >= 1.0) return 1.0;
  const double a = bump_core(s);
  const double b = bump_core(1.0 - s);
  return a / (a + b);
}

double smooth_step_derivative(double s) {
  if (s <= 0.0 || s >= 1.0) return 0.0;
  const double a = bump_core(s);
  const double b = bump_core(1.0 - s);
  const double da = a / (s * s);
  const double db = -b / ((1.0 - s) * (1.0 - s));
  const double d = a + b;
  return (da * d - a * (da + db)) / (d * d);
}

const QuadratureRule& gauss_legendre(std::size_t n) {
  static std::mutex mu;
  static std::map<std::size_t, QuadratureRule> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  if (n == 0) throw InvalidArgument("gauss_legendre: n must be positive");

  QuadratureRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  // Newton on P_n starting from the Chebyshev-like guess
  for (std::size_t i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (std::size_t k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    double p0 = 1.0, p1 = x;
    for (std::size_t k = 2; k <= n; ++k) {
      const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    dp = n * (x * p1 - p0) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[i] = -x;
    rule.nodes[n - 1 - i] = x;
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  if (n == 1) {
    rule.nodes[0] = 0.0;
    rule.weights[0] = 2.0;
  }
  return cache.emplace(n, std::move(rule)).first->second;
}

QuadratureRule composite_gauss(double a, double b, std::size_t panels,
                               std::size_t order) {
  if (panels == 0) throw InvalidArgument("composite_gauss: panels must be positive");
  const QuadratureRule& base = gauss_legendre(order);
  QuadratureRule out;
  out.nodes.reserve(panels * order);
  out.weights.reserve(panels * order);
  const double w = (b - a) / static_cast<double>(panels);
  for (std::size_t p = 0; p < panels; ++p) {
    const double mid = a + (p + 0.5) * w;
    for (std::size_t i = 0; i < order; ++i) {
      out.nodes.push_back(mid + 0.5 * w * base.nodes[i]);
      out.weights.push_back(0.5 * w * base.weights[i]);
    }
  }
  return out;
}

bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

std::size_t next_power_of_two(std::size_t n) {
  std::size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

}  // namespace singreg
