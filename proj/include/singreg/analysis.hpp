#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "singreg/volterra.hpp"

namespace singreg {

/// Strictly decreasing ε values in (0, e^{-1}), at least five.
class EpsSchedule {
 public:
  EpsSchedule();  // 1e-2, 1e-3, ..., 1e-12
  explicit EpsSchedule(std::vector<double> values);
  const std::vector<double>& values() const noexcept { return values_; }
  std::size_t size() const noexcept { return values_.size(); }

 private:
  std::vector<double> values_;
};

enum class GrowthModel { Bounded, LogLogPower, LogPower, EpsPower };
const char* model_name(GrowthModel m);

struct GrowthFit {
  GrowthModel model = GrowthModel::Bounded;
  double exponent = 0.0;  // m for the log models; N for EpsPower (value ~ ε^{-N})
  double r2 = 0.0;
  std::vector<double> residuals;  // ln(value) - fitted, in table order
};

/// Least-squares fits of ln(value) against 1, ln ln(1/ε) and ln(1/ε); BIC selection.
/// A growth model is kept only when its fitted change over the sweep exceeds ln 1.25.
GrowthFit fit_growth(const SweepTable& table);

/// Envelope C₁·A(ε)·exp(C₂·B(ε)); B empty means the one-constant form C₁·A(ε).
struct Envelope {
  std::function<double(double)> A;
  std::function<double(double)> B;
  std::string label;
};

struct EnvelopeVerdict {
  bool pass = false;
  double C1 = 0.0;
  double C2 = 0.0;
  double max_ratio = 0.0;   // over the checked (smaller-ε) points
  std::size_t worst_index = 0;
};

/// Calibrates on the k largest ε and checks every remaining point.
EnvelopeVerdict envelope_check(const SweepTable& table, const Envelope& envelope,
                               std::size_t k = 2);

enum class FamilyClass { Moderate, Negligible, Indeterminate };
const char* class_name(FamilyClass c);

struct FamilyVerdict {
  FamilyClass kind = FamilyClass::Indeterminate;
  double N = 0.0;
  bool log_mode = false;  // log growth: moderate for every N > 0
  std::string diagnostics;
};

/// sup-in-time norms and C¹ seminorms of one family (c1 may be empty for stationary problems).
FamilyVerdict classify_family(const SweepTable& sup_table, const SweepTable& c1_table);

struct SelfTestResult {
  std::size_t trials = 0;
  std::size_t bounded_correct = 0;
  std::size_t logpower_correct = 0;
  std::size_t epspower_correct = 0;
  double accuracy(GrowthModel m) const;
};

/// Synthetic families with multiplicative noise, one per seed and class.
SelfTestResult classifier_self_test(std::size_t seeds = 100, double noise = 0.01,
                                    std::uint64_t seed = 20240917);

/// Seed from SINGREG_SEED when set, else the fallback.
std::uint64_t probe_seed(std::uint64_t fallback = 20240917);

}  // namespace singreg
