#include "qrd/specfun.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace qrd::specfun {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kEps = std::numeric_limits<double>::epsilon();

std::string describe(const char* fn, std::initializer_list<double> args) {
  std::ostringstream os;
  os.precision(17);
  os << fn << '(';
  bool first = true;
  for (double v : args) {
    if (!first) os << ", ";
    os << v;
    first = false;
  }
  os << ')';
  return os.str();
}

void require_finite(const char* fn, double v) {
  if (!std::isfinite(v)) throw std::domain_error(describe(fn, {v}) + ": argument must be finite");
}

bool is_nonpositive_integer(double x) { return x <= 0.0 && x == std::floor(x); }

// Taylor coefficients of 1/Gamma(z) about z = 0, c[k] multiplies z^k.
constexpr std::array<double, 27> kRecipGammaTaylor = {
    0.0,
    1.0,
    0.5772156649015328606065,
    -0.655878071520253881077,
    -0.042002635034095235529,
    0.1665386113822914895017,
    -0.04219773455554433674821,
    -0.009621971527876973562115,
    0.007218943246663099542395,
    -0.001165167591859065112114,
    -0.0002152416741149509728157,
    0.0001280502823881161861532,
    -0.00002013485478078823865569,
    -0.000001250493482142670657345,
    0.000001133027231981695882374,
    -2.05633841697760710345e-7,
    6.116095104481415817862e-9,
    5.002007644469222930056e-9,
    -1.181274570487020144588e-9,
    1.043426711691100510492e-10,
    7.78226343990507125405e-12,
    -3.696805618642205708188e-12,
    5.100370287454475979015e-13,
    -2.058326053566506783222e-14,
    -5.34812253942301798237e-15,
    1.226778628238260790159e-15,
    -1.181259301697458769514e-16,
};

// Temme's auxiliary gammas for |mu| <= 1/2:
//   gam1 = (1/G(1-mu) - 1/G(1+mu)) / (2 mu),  gam2 = (1/G(1-mu) + 1/G(1+mu)) / 2
// evaluated from the 1/Gamma Taylor series so that gam1 has no cancellation at mu -> 0.
struct TemmeGammas {
  double gam1, gam2, gampl, gammi;
};

TemmeGammas temme_gammas(double mu) {
  double gam1 = 0.0;
  double gam2 = 0.0;
  // Horner over the even / odd index subsequences.
  for (std::size_t k = kRecipGammaTaylor.size() - 1; k >= 1; --k) {
    if (k % 2 == 0) {
      gam1 = gam1 * mu * mu + kRecipGammaTaylor[k];
    } else {
      gam2 = gam2 * mu * mu + kRecipGammaTaylor[k];
    }
  }
  gam1 = -gam1;
  return {gam1, gam2, gam2 - mu * gam1, gam2 + mu * gam1};
}

struct KPair {
  double k_mu;
  double k_mu1;
};

// K_mu and K_{mu+1} for |mu| <= 1/2 and x <= 2, unscaled.
KPair bessel_k_temme(double mu, double x) {
  const double half_x = 0.5 * x;
  const double pimu = kPi * mu;
  const double fact = std::abs(pimu) < kEps ? 1.0 : pimu / std::sin(pimu);
  double d = -std::log(half_x);
  double e = mu * d;
  const double fact2 = std::abs(e) < kEps ? 1.0 : std::sinh(e) / e;
  const auto [gam1, gam2, gampl, gammi] = temme_gammas(mu);
  double ff = fact * (gam1 * std::cosh(e) + gam2 * fact2 * d);
  double sum = ff;
  e = std::exp(e);
  double p = 0.5 * e / gampl;
  double q = 0.5 / (e * gammi);
  double c = 1.0;
  d = half_x * half_x;
  double sum1 = p;
  for (int i = 1; i < 10000; ++i) {
    const double di = i;
    ff = (di * ff + p + q) / (di * di - mu * mu);
    c *= d / di;
    p /= di - mu;
    q /= di + mu;
    const double del = c * ff;
    sum += del;
    sum1 += c * (p - di * ff);
    if (std::abs(del) < std::abs(sum) * kEps) break;
  }
  return {sum, sum1 * 2.0 / x};
}

// e^x K_mu and e^x K_{mu+1} for |mu| <= 1/2 and x > 2 (Steed's method on CF2).
KPair bessel_k_steed_scaled(double mu, double x) {
  double b = 2.0 * (1.0 + x);
  double d = 1.0 / b;
  double h = d;
  double delh = d;
  double q1 = 0.0;
  double q2 = 1.0;
  const double a1 = 0.25 - mu * mu;
  double q = a1;
  double c = a1;
  double a = -a1;
  double s = 1.0 + q * delh;
  for (int i = 1; i < 100000; ++i) {
    a -= 2.0 * i;
    c = -a * c / (i + 1.0);
    const double qnew = (q1 - b * q2) / a;
    q1 = q2;
    q2 = qnew;
    q += c * qnew;
    b += 2.0;
    d = 1.0 / (b + a * d);
    delh = (b * d - 1.0) * delh;
    h += delh;
    const double dels = q * delh;
    s += dels;
    if (std::abs(dels / s) < kEps) break;
  }
  h *= a1;
  const double k_mu = std::sqrt(kPi / (2.0 * x)) / s;
  return {k_mu, k_mu * (mu + x + 0.5 - h) / x};
}

constexpr double kBesselSeriesMax = 2.0;

double bessel_k_impl(double nu, double x, bool scaled) {
  if (!std::isfinite(nu) || !std::isfinite(x)) {
    throw std::domain_error(describe("bessel_k", {nu, x}) + ": arguments must be finite");
  }
  if (x <= 0.0) throw std::domain_error(describe("bessel_k", {nu, x}) + ": requires x > 0");
  const double order = std::abs(nu);
  const int shifts = static_cast<int>(order + 0.5);
  const double mu = order - shifts;

  KPair k;
  if (x <= kBesselSeriesMax) {
    k = bessel_k_temme(mu, x);
    if (scaled) {
      const double ex = std::exp(x);
      k.k_mu *= ex;
      k.k_mu1 *= ex;
    }
  } else {
    k = bessel_k_steed_scaled(mu, x);
    if (!scaled) {
      const double ex = std::exp(-x);
      k.k_mu *= ex;
      k.k_mu1 *= ex;
    }
  }
  // Forward recurrence in the order is stable for K.
  const double two_over_x = 2.0 / x;
  for (int i = 1; i <= shifts; ++i) {
    const double next = (mu + i) * two_over_x * k.k_mu1 + k.k_mu;
    k.k_mu = k.k_mu1;
    k.k_mu1 = next;
  }
  if (!std::isfinite(k.k_mu)) {
    throw std::overflow_error(describe(scaled ? "bessel_k_scaled" : "bessel_k", {nu, x}) +
                              ": result saturates double precision");
  }
  return k.k_mu;
}

double hyp1f1_series(double a, double b, double x, const Accuracy& acc) {
  double term = 1.0;
  double sum = 1.0;
  for (int n = 0; n < acc.max_terms; ++n) {
    term *= (a + n) / (b + n) * x / (n + 1.0);
    sum += term;
    if (std::abs(term) <= acc.rel_tol * std::abs(sum) && n + 1 > -b) return sum;
  }
  throw std::runtime_error(describe("hyp1f1_series", {a, b, x}) + ": series did not converge");
}

double tricomi_kummer(double a, double b, double x, const Accuracy& acc) {
  const double regular = specfun::gamma(1.0 - b) * reciprocal_gamma(a - b + 1.0);
  const double singular = specfun::gamma(b - 1.0) * reciprocal_gamma(a);
  double value = 0.0;
  if (regular != 0.0) value += regular * hyp1f1_series(a, b, x, acc);
  if (singular != 0.0) value += singular * std::pow(x, 1.0 - b) * hyp1f1_series(a - b + 1.0, 2.0 - b, x, acc);
  return value;
}

std::optional<double> tricomi_asymptotic(double a, double b, double x, const Accuracy& acc) {
  const double a2 = a - b + 1.0;
  double term = 1.0;
  double sum = 1.0;
  for (int n = 0; n < acc.max_terms; ++n) {
    const double next = -term * (a + n) * (a2 + n) / ((n + 1.0) * x);
    if (std::abs(next) > std::abs(term)) return std::nullopt;
    term = next;
    sum += term;
    if (std::abs(term) <= acc.rel_tol * std::abs(sum)) return std::pow(x, -a) * sum;
  }
  return std::nullopt;
}

constexpr int kMillerMaxDepth = 1 << 20;

double tricomi_miller(double a, double b, double x, const Accuracy& acc) {
  const double c = a + 1.0 - b;
  const double reach = 20.0 + std::abs(a) + std::abs(c);
  int depth = static_cast<int>(std::ceil(reach * reach / x)) + 50;
  std::vector<double> ratio;
  while (depth <= kMillerMaxDepth) {
    ratio.assign(static_cast<std::size_t>(depth) + 1, 0.0);
    // ratio[n] = U(a+n) / U(a+n-1), from the three-term recurrence run downwards.
    double r = 0.0;
    for (int n = depth; n >= 1; --n) {
      const double an = a + n;
      r = 1.0 / ((2.0 * an + x - b) - an * (an - b + 1.0) * r);
      ratio[static_cast<std::size_t>(n)] = r;
    }
    double term = 1.0;
    double sum = 1.0;
    double tail = 0.0;
    const int tail_start = depth - depth / 10;
    for (int n = 1; n <= depth; ++n) {
      term *= ratio[static_cast<std::size_t>(n)] * (a + n - 1.0) * (c + n - 1.0) / n;
      sum += term;
      if (n >= tail_start) tail = std::max(tail, std::abs(term));
    }
    if (tail <= 0.1 * acc.rel_tol * std::abs(sum)) return std::pow(x, -a) / sum;
    depth *= 2;
  }
  throw std::runtime_error(describe("tricomi_u", {a, b, x}) + ": recurrence depth exhausted");
}

}  // namespace

void Accuracy::validate() const {
  if (!(rel_tol > 0.0 && rel_tol < 1e-3)) throw std::invalid_argument("Accuracy: rel_tol must lie in (0, 1e-3)");
  if (max_terms < 50) throw std::invalid_argument("Accuracy: max_terms must be at least 50");
}

double ln_gamma(double x) {
  require_finite("ln_gamma", x);
  if (x <= 0.0) throw std::domain_error(describe("ln_gamma", {x}) + ": requires x > 0");
  if (x < 10.0) {
    const double g = std::tgamma(x);
    // ln Gamma vanishes at 1 and 2; log1p keeps the relative error bounded there.
    return (g > 0.5 && g < 2.0) ? std::log1p(g - 1.0) : std::log(g);
  }
  // Stirling series with Bernoulli corrections through B_16.
  constexpr std::array<double, 8> kStirling = {
      1.0 / 12.0,    -1.0 / 360.0,   1.0 / 1260.0, -1.0 / 1680.0,
      1.0 / 1188.0, -691.0 / 360360.0, 1.0 / 156.0, -3617.0 / 122400.0,
  };
  const double inv = 1.0 / x;
  const double inv2 = inv * inv;
  double series = 0.0;
  for (auto it = kStirling.rbegin(); it != kStirling.rend(); ++it) series = series * inv2 + *it;
  series *= inv;
  return (x - 0.5) * std::log(x) - x + 0.5 * std::log(2.0 * kPi) + series;
}

double gamma(double x) {
  require_finite("gamma", x);
  if (is_nonpositive_integer(x)) throw std::domain_error(describe("gamma", {x}) + ": pole");
  const double g = std::tgamma(x);
  if (!std::isfinite(g)) throw std::overflow_error(describe("gamma", {x}) + ": result saturates double precision");
  return g;
}

double reciprocal_gamma(double x) {
  require_finite("reciprocal_gamma", x);
  if (is_nonpositive_integer(x)) return 0.0;
  if (x > 170.0) return std::exp(-ln_gamma(x));
  return 1.0 / std::tgamma(x);
}

double beta(double a, double b) {
  require_finite("beta", a);
  require_finite("beta", b);
  if (a <= 0.0 || b <= 0.0) throw std::domain_error(describe("beta", {a, b}) + ": requires a, b > 0");
  return std::exp(ln_gamma(a) + ln_gamma(b) - ln_gamma(a + b));
}

double bessel_k(double nu, double x) { return bessel_k_impl(nu, x, false); }

double bessel_k_scaled(double nu, double x) { return bessel_k_impl(nu, x, true); }

double log_bessel_k(double nu, double x) { return std::log(bessel_k_impl(nu, x, true)) - x; }

TricomiResult tricomi_u_detailed(double a, double b, double x, const Accuracy& acc) {
  acc.validate();
  if (!std::isfinite(a) || !std::isfinite(b) || !std::isfinite(x)) {
    throw std::domain_error(describe("tricomi_u", {a, b, x}) + ": arguments must be finite");
  }
  if (x <= 0.0) throw std::domain_error(describe("tricomi_u", {a, b, x}) + ": requires x > 0");
  if (a <= 0.0) throw std::domain_error(describe("tricomi_u", {a, b, x}) + ": requires a > 0");
  if (std::abs(b - std::round(b)) <= 1e-12 * std::max(1.0, std::abs(b))) {
    throw std::invalid_argument(describe("tricomi_u", {a, b, x}) + ": integer b is not supported");
  }
  if (x >= kTricomiAsymptoticMin) {
    if (auto v = tricomi_asymptotic(a, b, x, acc)) return {*v, TricomiPath::asymptotic_series};
  }
  if (x > kTricomiKummerMax) return {tricomi_miller(a, b, x, acc), TricomiPath::miller_recurrence};
  return {tricomi_kummer(a, b, x, acc), TricomiPath::kummer_series};
}

double tricomi_u(double a, double b, double x, const Accuracy& acc) {
  return tricomi_u_detailed(a, b, x, acc).value;
}

double q_function(double x) {
  require_finite("q_function", x);
  return 0.5 * std::erfc(x / std::numbers::sqrt2);
}

}  // namespace qrd::specfun
