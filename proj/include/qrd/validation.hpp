#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "qrd/channel.hpp"

// Self-check suite for the special functions, the closed-form Laplace
// transform and the fading sampler, plus the statistics it relies on.

namespace qrd::validation {

struct ValidationOptions {
  std::uint64_t seed = 1;
  std::size_t samples = 200'000;
  /// Relative error injected into Lambda; nonzero values exist to prove the gate trips.
  double lambda_perturbation = 0.0;
};

struct CheckResult {
  std::string name;
  double observed;
  double expected;
  double tolerance;
  /// Relative checks compare |observed - expected| / |expected|; absolute
  /// checks |observed - expected|; minimum checks observed >= expected.
  enum class Kind { relative, absolute, minimum } kind;
  bool passed;
};

std::vector<CheckResult> run_validation(const ValidationOptions& opts = {});

/// Fixed-width table, one line per check, followed by a summary line.
std::string format_table(const std::vector<CheckResult>& results);

bool all_passed(const std::vector<CheckResult>& results);

/// Gamma-Gamma CDF tabulated on log-spaced nodes by adaptive quadrature of
/// the density and evaluated by cubic Hermite interpolation with the
/// density as slope.
class TabulatedCdf {
 public:
  TabulatedCdf(const channel::GammaGammaParams& params, double z_min = 1e-12, double z_max = 1e4,
               std::size_t nodes = 4000);
  double operator()(double z) const;

 private:
  double g_;
  std::vector<double> z_;
  std::vector<double> f_;
  std::vector<double> pdf_;
};

struct KsResult {
  double statistic;
  double p_value;
};

/// One-sample Kolmogorov-Smirnov test; `sorted` must be in ascending order.
KsResult ks_test(std::span<const double> sorted, const std::function<double(double)>& cdf);

/// P(D_n > d) from the asymptotic Kolmogorov law with Stephens' small-n correction.
double ks_p_value(double statistic, std::size_t n);

}  // namespace qrd::validation
