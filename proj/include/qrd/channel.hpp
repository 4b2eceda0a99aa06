#pragma once

#include <cstddef>
#include <vector>

#include "qrd/random.hpp"

// Gamma-Gamma irradiance fading: density, Laplace transform (exact and
// high-s asymptote) and a sampler.

namespace qrd::channel {

/// Smallest accepted |epsilon - zeta| relative to max(epsilon, zeta).
inline constexpr double kMinRelativeShapeGap = 1e-6;

/// Shape pair of the unit-mean Gamma-Gamma law. epsilon is the large-scale
/// shape, zeta the small-scale one. The closed forms used here need
/// epsilon != zeta, so near-equal shapes are rejected on construction.
class GammaGammaParams {
 public:
  GammaGammaParams(double epsilon, double zeta);

  double epsilon() const { return epsilon_; }
  double zeta() const { return zeta_; }
  /// min(epsilon, zeta); sets the high-SNR decay exponent.
  double g() const { return g_; }

  GammaGammaParams swapped() const { return {zeta_, epsilon_}; }

 private:
  double epsilon_;
  double zeta_;
  double g_;
};

/// Fading coefficients of the two slots, both strictly positive.
struct IrradiancePair {
  double i1;
  double i2;

  IrradiancePair(double first, double second);
};

double pdf(const GammaGammaParams& params, double z);
double log_pdf(const GammaGammaParams& params, double z);

/// E[exp(-s I)] = (eps zeta / s)^eps U(eps, eps + 1 - zeta; eps zeta / s).
///
/// The same expression holds with the shapes exchanged (Kummer's
/// transformation maps one labelling onto the other), so the argument order
/// is kept as given. Throws std::invalid_argument when epsilon - zeta is an
/// integer, where the Tricomi evaluator has no supported route.
double laplace_exact(const GammaGammaParams& params, double s);

/// Lambda = Gamma(|eps - zeta|) Gamma(g) (eps zeta)^g / (Gamma(eps) Gamma(zeta)).
double lambda_constant(const GammaGammaParams& params);

/// Lambda s^-g, the leading term of laplace_exact as s -> inf.
double laplace_asymptotic(const GammaGammaParams& params, double s);

/// E[I^2] = (1 + 1/eps)(1 + 1/zeta).
double second_moment(const GammaGammaParams& params);

/// One irradiance draw: product of independent unit-mean Gamma(eps) and Gamma(zeta) variates.
double draw(const GammaGammaParams& params, RandomStream& stream);

std::vector<double> sample(const GammaGammaParams& params, RandomStream& stream, std::size_t n);

}  // namespace qrd::channel
