#include "qrd/channel.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "qrd/specfun.hpp"

namespace qrd::channel {

GammaGammaParams::GammaGammaParams(double epsilon, double zeta) : epsilon_(epsilon), zeta_(zeta) {
  if (!(std::isfinite(epsilon) && std::isfinite(zeta) && epsilon > 0.0 && zeta > 0.0)) {
    std::ostringstream os;
    os << "GammaGammaParams: shapes must be positive and finite (epsilon=" << epsilon << ", zeta=" << zeta << ")";
    throw std::invalid_argument(os.str());
  }
  if (std::abs(epsilon - zeta) < kMinRelativeShapeGap * std::max(epsilon, zeta)) {
    std::ostringstream os;
    os << "GammaGammaParams: epsilon and zeta must differ (epsilon=" << epsilon << ", zeta=" << zeta << ")";
    throw std::invalid_argument(os.str());
  }
  g_ = std::min(epsilon, zeta);
}

IrradiancePair::IrradiancePair(double first, double second) : i1(first), i2(second) {
  if (!(std::isfinite(first) && std::isfinite(second) && first > 0.0 && second > 0.0)) {
    throw std::invalid_argument("IrradiancePair: irradiances must be positive and finite");
  }
}

double log_pdf(const GammaGammaParams& params, double z) {
  if (!(std::isfinite(z) && z > 0.0)) throw std::domain_error("channel::pdf: requires finite z > 0");
  const double e = params.epsilon();
  const double k = params.zeta();
  const double half_sum = 0.5 * (e + k);
  const double log_norm = std::log(2.0) + half_sum * std::log(e * k) - specfun::ln_gamma(e) - specfun::ln_gamma(k);
  return log_norm + (half_sum - 1.0) * std::log(z) + specfun::log_bessel_k(e - k, 2.0 * std::sqrt(e * k * z));
}

double pdf(const GammaGammaParams& params, double z) { return std::exp(log_pdf(params, z)); }

double laplace_exact(const GammaGammaParams& params, double s) {
  if (!(std::isfinite(s) && s > 0.0)) throw std::domain_error("channel::laplace_exact: requires finite s > 0");
  const double e = params.epsilon();
  const double k = params.zeta();
  const double x = e * k / s;
  if (!std::isfinite(x)) return 1.0;
  const double u = specfun::tricomi_u(e, e + 1.0 - k, x);
  return std::min(1.0, std::exp(e * std::log(x) + std::log(u)));
}

double lambda_constant(const GammaGammaParams& params) {
  const double e = params.epsilon();
  const double k = params.zeta();
  const double g = params.g();
  return std::exp(specfun::ln_gamma(std::abs(e - k)) + specfun::ln_gamma(g) + g * std::log(e * k) -
                  specfun::ln_gamma(e) - specfun::ln_gamma(k));
}

double laplace_asymptotic(const GammaGammaParams& params, double s) {
  if (!(std::isfinite(s) && s > 0.0)) throw std::domain_error("channel::laplace_asymptotic: requires finite s > 0");
  return lambda_constant(params) * std::pow(s, -params.g());
}

double second_moment(const GammaGammaParams& params) {
  return (1.0 + 1.0 / params.epsilon()) * (1.0 + 1.0 / params.zeta());
}

double draw(const GammaGammaParams& params, RandomStream& stream) {
  const double large_scale = stream.gamma(params.epsilon(), 1.0 / params.epsilon());
  const double small_scale = stream.gamma(params.zeta(), 1.0 / params.zeta());
  return large_scale * small_scale;
}

std::vector<double> sample(const GammaGammaParams& params, RandomStream& stream, std::size_t n) {
  if (n == 0) throw std::invalid_argument("channel::sample: n must be at least 1");
  std::vector<double> out(n);
  for (auto& v : out) v = draw(params, stream);
  return out;
}

}  // namespace qrd::channel
