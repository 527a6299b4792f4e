#include "singreg/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <numbers>
#include <tuple>

#include "singreg/error.hpp"
#include "singreg/special.hpp"

namespace singreg::fft {

namespace {

// fftw planning is not thread safe; execution with new-array execute is.
std::mutex& plan_mutex() {
  static std::mutex mu;
  return mu;
}

using PlanKey = std::tuple<std::size_t, std::size_t, int>;

fftw_plan get_plan(std::size_t n0, std::size_t n1, int sign) {
  static std::map<PlanKey, fftw_plan> cache;
  std::lock_guard<std::mutex> lock(plan_mutex());
  const PlanKey key{n0, n1, sign};
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  const std::size_t total = n0 * n1;
  fftw_complex* buf = fftw_alloc_complex(total);
  fftw_plan p = n1 == 1 ? fftw_plan_dft_1d(static_cast<int>(n0), buf, buf, sign,
                                           FFTW_ESTIMATE | FFTW_UNALIGNED)
                        : fftw_plan_dft_2d(static_cast<int>(n0), static_cast<int>(n1), buf,
                                           buf, sign, FFTW_ESTIMATE | FFTW_UNALIGNED);
  fftw_free(buf);
  if (p == nullptr) throw Error("fft: planner failed");
  cache.emplace(key, p);
  return p;
}

void run(cvec& data, std::size_t n0, std::size_t n1, int sign) {
  if (data.size() != n0 * n1) throw InvalidArgument("fft: data size does not match shape");
  fftw_plan p = get_plan(n0, n1, sign);
  auto* ptr = reinterpret_cast<fftw_complex*>(data.data());
  fftw_execute_dft(p, ptr, ptr);
}

std::pair<std::size_t, std::size_t> shape(const GridSpec& g) {
  return g.dim() == 1 ? std::pair<std::size_t, std::size_t>{g.points(0), 1}
                      : std::pair<std::size_t, std::size_t>{g.points(0), g.points(1)};
}

}  // namespace

void forward(cvec& data, const GridSpec& grid) {
  auto [n0, n1] = shape(grid);
  run(data, n0, n1, FFTW_FORWARD);
}

void inverse(cvec& data, const GridSpec& grid) {
  auto [n0, n1] = shape(grid);
  run(data, n0, n1, FFTW_BACKWARD);
  const double s = 1.0 / static_cast<double>(data.size());
  for (auto& z : data) z *= s;
}

void forward(cvec& data) { run(data, data.size(), 1, FFTW_FORWARD); }

void inverse(cvec& data) {
  run(data, data.size(), 1, FFTW_BACKWARD);
  const double s = 1.0 / static_cast<double>(data.size());
  for (auto& z : data) z *= s;
}

std::vector<double> wavenumbers(std::size_t n, double length) {
  std::vector<double> k(n);
  const double base = 2.0 * std::numbers::pi / length;
  for (std::size_t i = 0; i < n; ++i) {
    const long m = i <= n / 2 ? static_cast<long>(i) : static_cast<long>(i) - static_cast<long>(n);
    k[i] = base * static_cast<double>(m);
  }
  return k;
}

std::vector<double> linear_convolution(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty()) return {};
  const std::size_t out = a.size() + b.size() - 1;
  const std::size_t n = next_power_of_two(out);
  cvec fa(n), fb(n);
  for (std::size_t i = 0; i < a.size(); ++i) fa[i] = a[i];
  for (std::size_t i = 0; i < b.size(); ++i) fb[i] = b[i];
  forward(fa);
  forward(fb);
  for (std::size_t i = 0; i < n; ++i) fa[i] *= fb[i];
  inverse(fa);
  std::vector<double> r(out);
  for (std::size_t i = 0; i < out; ++i) r[i] = fa[i].real();
  return r;
}

}  // namespace singreg::fft
