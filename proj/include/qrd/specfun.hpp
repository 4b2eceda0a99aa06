#pragma once

// Real-argument special functions used by the turbulence and error-rate
// models: log-Gamma, Beta, the modified Bessel function K_nu, the Tricomi
// confluent hypergeometric function U(a, b; x) and the Gaussian Q-function.
//
// Domain violations throw std::domain_error. Parameters outside the
// supported set (integer b in tricomi_u) throw std::invalid_argument.
// Results that cannot be represented in double precision throw
// std::overflow_error with the offending arguments in the message.

namespace qrd::specfun {

/// Convergence controls for the series-based evaluators.
struct Accuracy {
  double rel_tol = 1e-15;
  int max_terms = 500;

  /// Throws std::invalid_argument unless 0 < rel_tol < 1e-3 and max_terms >= 50.
  void validate() const;
};

double ln_gamma(double x);

/// Gamma(x) for any real x that is not a pole. Negative arguments use reflection.
double gamma(double x);

/// 1/Gamma(x); zero at the poles 0, -1, -2, ...
double reciprocal_gamma(double x);

double beta(double a, double b);

/// K_nu(x) for real order nu and x > 0.
double bessel_k(double nu, double x);

/// e^x K_nu(x). Stays finite where K_nu itself underflows.
double bessel_k_scaled(double nu, double x);

/// ln K_nu(x), usable far beyond the underflow point of bessel_k.
double log_bessel_k(double nu, double x);

/// Which evaluation route tricomi_u took. Exposed for tests and diagnostics.
enum class TricomiPath { kummer_series, miller_recurrence, asymptotic_series };

struct TricomiResult {
  double value;
  TricomiPath path;
};

/// Tricomi U(a, b; x) for a > 0, non-integer b and x > 0.
///
/// Small x uses the Kummer connection of two 1F1 series. Large x uses the
/// Poincare asymptotic series truncated at its smallest term, when that term
/// is below the tolerance. Everything in between, and any asymptotic attempt
/// that does not converge, goes through backward recurrence in a with
/// Temme's normalising sum
///   sum_n (a)_n (a + 1 - b)_n / n! * U(a + n, b; x) = x^(-a).
double tricomi_u(double a, double b, double x, const Accuracy& acc = {});
TricomiResult tricomi_u_detailed(double a, double b, double x, const Accuracy& acc = {});

/// Crossovers between the tricomi_u evaluation routes.
inline constexpr double kTricomiKummerMax = 1.0;
inline constexpr double kTricomiAsymptoticMin = 25.0;

/// Q(x) = P(Z > x) for a standard normal Z.
double q_function(double x);

}  // namespace qrd::specfun
