#pragma once

#include <array>
#include <cstddef>
#include <cstdint>

#include "qrd/channel.hpp"
#include "qrd/random.hpp"

// Transmit side of the two-slot rotated BPSK link: photon budget split
// between displacement and squeezing, the rotation codebook and the
// homodyne observation model.

namespace qrd::link {

/// Values of the two consecutive time slots.
using SlotPair = std::array<double, 2>;

/// Rotation angle that balances the two pairwise-error classes: atan(2) / 2.
double theta_star();

/// Mean photon number available per transmitted symbol.
struct PhotonBudget {
  double n_total;

  explicit PhotonBudget(double n);
};

/// Displacement amplitude alpha and squeezing r carved out of a photon
/// budget N, with beta = sinh^2(r) / N the squeezing share. Quadrature
/// noise variance is e^{-2r} / 2. Immutable once built.
///
/// theta is accepted on [0, pi/2]; angles past pi/4 describe the mirrored,
/// equivalent constellation and are only useful for symmetry checks.
class ModulationDesign {
 public:
  /// alpha = sqrt((1 - beta) N), r = asinh(sqrt(beta N)) = ln(sqrt(beta N) + sqrt(beta N + 1)).
  static ModulationDesign from_split(double n_total, double beta, double theta);
  /// Design with the given alpha >= 0 and r >= 0; the budget is alpha^2 + sinh^2(r).
  static ModulationDesign from_amplitudes(double alpha, double r, double theta);

  double n_total() const { return n_total_; }
  double beta() const { return beta_; }
  double alpha() const { return alpha_; }
  double r() const { return r_; }
  double theta() const { return theta_; }
  double sigma_q_sq() const { return sigma_q_sq_; }

  ModulationDesign with_theta(double theta) const;

 private:
  ModulationDesign(double n_total, double beta, double alpha, double r, double theta);

  double n_total_;
  double beta_;
  double alpha_;
  double r_;
  double theta_;
  double sigma_q_sq_;
};

inline ModulationDesign design_from_split(double n_total, double beta, double theta) {
  return ModulationDesign::from_split(n_total, beta, theta);
}

/// Closed-form optimum for budget N: beta = N / (2N + 1), theta = theta_star().
ModulationDesign optimal_split_design(double n_total);

/// R(theta) x = [x1 cos - x2 sin, x1 sin + x2 cos].
SlotPair rotate(double theta, const SlotPair& x);

/// The four rotated codewords. Hypothesis index i carries bits (i >> 1, i & 1)
/// with bit 0 mapped to +alpha: 0 -> (+,+), 1 -> (+,-), 2 -> (-,+), 3 -> (-,-).
class Codebook {
 public:
  static constexpr std::size_t kSize = 4;

  explicit Codebook(const ModulationDesign& design);

  const SlotPair& symbols(std::size_t index) const { return symbols_[index]; }
  const SlotPair& codeword(std::size_t index) const { return codewords_[index]; }

  static std::size_t index_of(bool first_bit, bool second_bit) {
    return (first_bit ? 2u : 0u) | (second_bit ? 1u : 0u);
  }

 private:
  std::array<SlotPair, kSize> symbols_;
  std::array<SlotPair, kSize> codewords_;
};

/// Codeword pairs split into two classes by how many symbols differ.
enum class PairClass { one_position, two_positions };

/// u = R(theta)(x - x~) for the representative pair of a class, x = (+alpha, +alpha):
/// one_position gives 2 alpha (cos, sin), two_positions 2 alpha (cos - sin, sin + cos).
SlotPair difference_vector(const ModulationDesign& design, PairClass pair_class);

/// Everything needed to run the link: path loss, fading law, modulation and master seed.
struct LinkConfig {
  double eta;
  channel::GammaGammaParams channel;
  ModulationDesign design;
  std::uint64_t seed;

  LinkConfig(double eta, channel::GammaGammaParams channel, ModulationDesign design, std::uint64_t seed = 0);
};

/// y_i = sqrt(eta I_i) x'_i + n_i with n_i ~ N(0, e^{-2r} / 2) drawn from `noise`.
SlotPair homodyne_observe(const LinkConfig& cfg, const SlotPair& codeword, const channel::IrradiancePair& fading,
                          RandomStream& noise);

/// Scale of the decision statistic, e^{2r} alpha^2.
double effective_snr_proxy(const ModulationDesign& design);

}  // namespace qrd::link
