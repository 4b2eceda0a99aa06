#include "qrd/link.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace qrd::link {

namespace {

constexpr double kAngleSlack = 1e-12;

double checked_theta(double theta) {
  if (!std::isfinite(theta) || theta < -kAngleSlack || theta > std::numbers::pi / 2 + kAngleSlack) {
    std::ostringstream os;
    os << "ModulationDesign: theta must lie in [0, pi/2] (got " << theta << ")";
    throw std::domain_error(os.str());
  }
  return std::clamp(theta, 0.0, std::numbers::pi / 2);
}

}  // namespace

double theta_star() { return 0.5 * std::atan(2.0); }

PhotonBudget::PhotonBudget(double n) : n_total(n) {
  if (!(std::isfinite(n) && n >= 0.0)) throw std::domain_error("PhotonBudget: n_total must be finite and >= 0");
}

ModulationDesign::ModulationDesign(double n_total, double beta, double alpha, double r, double theta)
    : n_total_(n_total),
      beta_(beta),
      alpha_(alpha),
      r_(r),
      theta_(theta),
      sigma_q_sq_(0.5 * std::exp(-2.0 * r)) {}

ModulationDesign ModulationDesign::from_split(double n_total, double beta, double theta) {
  const PhotonBudget budget(n_total);
  if (!(beta >= 0.0 && beta <= 1.0)) {
    std::ostringstream os;
    os << "design_from_split: beta must lie in [0, 1] (got " << beta << ")";
    throw std::domain_error(os.str());
  }
  const double squeezed = beta * budget.n_total;
  const double alpha = std::sqrt((1.0 - beta) * budget.n_total);
  return {budget.n_total, beta, alpha, std::asinh(std::sqrt(squeezed)), checked_theta(theta)};
}

ModulationDesign ModulationDesign::from_amplitudes(double alpha, double r, double theta) {
  if (!(std::isfinite(alpha) && alpha >= 0.0 && std::isfinite(r) && r >= 0.0)) {
    throw std::domain_error("ModulationDesign::from_amplitudes: alpha and r must be finite and >= 0");
  }
  const double squeezed = std::sinh(r) * std::sinh(r);
  const double n_total = alpha * alpha + squeezed;
  const double beta = n_total > 0.0 ? squeezed / n_total : 0.0;
  return {n_total, beta, alpha, r, checked_theta(theta)};
}

ModulationDesign ModulationDesign::with_theta(double theta) const {
  return {n_total_, beta_, alpha_, r_, checked_theta(theta)};
}

ModulationDesign optimal_split_design(double n_total) {
  return ModulationDesign::from_split(n_total, n_total / (2.0 * n_total + 1.0), theta_star());
}

SlotPair rotate(double theta, const SlotPair& x) {
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  return {x[0] * c - x[1] * s, x[0] * s + x[1] * c};
}

Codebook::Codebook(const ModulationDesign& design) {
  const double a = design.alpha();
  for (std::size_t i = 0; i < kSize; ++i) {
    symbols_[i] = {(i & 2u) ? -a : a, (i & 1u) ? -a : a};
    codewords_[i] = rotate(design.theta(), symbols_[i]);
  }
}

SlotPair difference_vector(const ModulationDesign& design, PairClass pair_class) {
  const double two_alpha = 2.0 * design.alpha();
  const SlotPair diff = pair_class == PairClass::one_position ? SlotPair{two_alpha, 0.0} : SlotPair{two_alpha, two_alpha};
  return rotate(design.theta(), diff);
}

LinkConfig::LinkConfig(double eta_, channel::GammaGammaParams channel_, ModulationDesign design_, std::uint64_t seed_)
    : eta(eta_), channel(channel_), design(design_), seed(seed_) {
  if (!(eta >= 0.0 && eta <= 1.0)) {
    std::ostringstream os;
    os << "LinkConfig: eta must lie in [0, 1] (got " << eta << ")";
    throw std::domain_error(os.str());
  }
}

SlotPair homodyne_observe(const LinkConfig& cfg, const SlotPair& codeword, const channel::IrradiancePair& fading,
                          RandomStream& noise) {
  const double sigma = std::sqrt(cfg.design.sigma_q_sq());
  return {std::sqrt(cfg.eta * fading.i1) * codeword[0] + sigma * noise.normal(),
          std::sqrt(cfg.eta * fading.i2) * codeword[1] + sigma * noise.normal()};
}

double effective_snr_proxy(const ModulationDesign& design) {
  return std::exp(2.0 * design.r()) * design.alpha() * design.alpha();
}

}  // namespace qrd::link
