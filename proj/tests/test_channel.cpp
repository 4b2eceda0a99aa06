#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/special_functions/bessel.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "qrd/channel.hpp"
#include "qrd/random.hpp"

using qrd::RandomStream;
using qrd::channel::GammaGammaParams;
namespace ch = qrd::channel;

namespace {

double rel_err(double a, double b) { return std::abs(a - b) / std::abs(b); }

double boost_pdf(double e, double k, double z) {
  const double h = 0.5 * (e + k);
  return 2.0 * std::pow(e * k, h) / (boost::math::tgamma(e) * boost::math::tgamma(k)) * std::pow(z, h - 1.0) *
         boost::math::cyl_bessel_k(e - k, 2.0 * std::sqrt(e * k * z));
}

// E[exp(-sI)] by direct quadrature of the density, substituting z = w / s.
double boost_laplace(double e, double k, double s) {
  boost::math::quadrature::exp_sinh<double> integrator;
  auto f = [&](double w) { return w <= 0.0 ? 0.0 : boost_pdf(e, k, w / s) * std::exp(-w); };
  return integrator.integrate(f, 1e-13) / s;
}

const double kShapes[][2] = {{0.5, 1.2}, {2.1, 4.5}, {4.0, 1.9}};

}  // namespace

TEST_CASE("parameters are validated") {
  CHECK_THROWS_AS(GammaGammaParams(0.0, 1.2), std::invalid_argument);
  CHECK_THROWS_AS(GammaGammaParams(0.5, -1.0), std::invalid_argument);
  CHECK_THROWS_AS(GammaGammaParams(std::nan(""), 1.0), std::invalid_argument);
  CHECK_THROWS_AS(GammaGammaParams(1.3, 1.3), std::invalid_argument);
  CHECK_THROWS_AS(ch::IrradiancePair(0.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(ch::IrradiancePair(1.0, -2.0), std::invalid_argument);
  const GammaGammaParams p(0.5, 1.2);
  CHECK(p.g() == 0.5);
  CHECK(p.swapped().epsilon() == 1.2);
  CHECK(p.swapped().g() == 0.5);
}

TEST_CASE("pdf matches the Bessel-K form evaluated with Boost") {
  CHECK(rel_err(ch::pdf(GammaGammaParams(0.5, 1.2), 0.8), 0.23441376516866011301) < 1e-13);
  for (const auto& s : kShapes) {
    const GammaGammaParams p(s[0], s[1]);
    for (double z : {1e-6, 1e-3, 0.05, 0.4, 1.0, 2.5, 8.0, 30.0}) {
      CAPTURE(z);
      CHECK(rel_err(ch::pdf(p, z), boost_pdf(s[0], s[1], z)) < 1e-11);
    }
  }
  CHECK_THROWS_AS(ch::pdf(GammaGammaParams(0.5, 1.2), 0.0), std::domain_error);
  CHECK_THROWS_AS(ch::pdf(GammaGammaParams(0.5, 1.2), -1.0), std::domain_error);
}

TEST_CASE("pdf has unit mass and unit mean") {
  boost::math::quadrature::exp_sinh<double> integrator;
  for (const auto& s : kShapes) {
    const GammaGammaParams p(s[0], s[1]);
    const double mass = integrator.integrate([&](double z) { return z <= 0 ? 0.0 : ch::pdf(p, z); }, 1e-12);
    const double mean = integrator.integrate([&](double z) { return z <= 0 ? 0.0 : z * ch::pdf(p, z); }, 1e-12);
    const double m2 = integrator.integrate([&](double z) { return z <= 0 ? 0.0 : z * z * ch::pdf(p, z); }, 1e-12);
    CHECK(rel_err(mass, 1.0) < 1e-9);
    CHECK(rel_err(mean, 1.0) < 1e-9);
    CHECK(rel_err(m2, ch::second_moment(p)) < 1e-8);
  }
  CHECK(ch::second_moment(GammaGammaParams(0.5, 1.2)) == doctest::Approx(5.5).epsilon(1e-15));
}

TEST_CASE("laplace_exact matches direct quadrature of the density") {
  for (const auto& s : kShapes) {
    const GammaGammaParams p(s[0], s[1]);
    for (double sv : {1e-2, 0.1, 1.0, 10.0, 1e2, 1e3, 1e4, 1e5}) {
      CAPTURE(s[0]);
      CAPTURE(sv);
      CHECK(rel_err(ch::laplace_exact(p, sv), boost_laplace(s[0], s[1], sv)) < 1e-8);
    }
  }
  CHECK(rel_err(ch::laplace_exact(GammaGammaParams(0.5, 1.2), 10.0), 0.29615719416305204252) < 1e-12);
}

TEST_CASE("laplace_exact does not depend on which shape is called epsilon") {
  for (const auto& s : kShapes) {
    const GammaGammaParams p(s[0], s[1]);
    for (double sv : {1e-3, 0.7, 40.0, 1e6}) CHECK(rel_err(ch::laplace_exact(p, sv), ch::laplace_exact(p.swapped(), sv)) < 1e-11);
  }
}

TEST_CASE("laplace_exact: limits, range and monotonicity") {
  for (const auto& s : kShapes) {
    const GammaGammaParams p(s[0], s[1]);
    CHECK(std::abs(ch::laplace_exact(p, 1e-12) - 1.0) < 1e-9);
    double previous = 1.0;
    for (int i = 0; i <= 60; ++i) {
      const double sv = std::pow(10.0, -4.0 + 0.2 * i);
      const double v = ch::laplace_exact(p, sv);
      CHECK(v > 0.0);
      CHECK(v <= 1.0);
      CHECK(v < previous);
      previous = v;
    }
  }
  const GammaGammaParams p(0.5, 1.2);
  CHECK_THROWS_AS(ch::laplace_exact(p, 0.0), std::domain_error);
  CHECK_THROWS_AS(ch::laplace_exact(p, -1.0), std::domain_error);
  CHECK_THROWS_AS(ch::laplace_exact(GammaGammaParams(0.5, 1.5), 1.0), std::invalid_argument);
}

TEST_CASE("Lambda and the high-s asymptote") {
  const GammaGammaParams p(0.5, 1.2);
  CHECK(rel_err(ch::lambda_constant(p), 1.095081209726233159) < 1e-13);
  CHECK(rel_err(ch::lambda_constant(p), ch::lambda_constant(p.swapped())) < 1e-15);
  for (const auto& s : kShapes) {
    const GammaGammaParams q(s[0], s[1]);
    double previous = 1e300;
    for (double sv : {1e2, 1e4, 1e6, 1e8, 1e10}) {
      const double gap = std::abs(ch::laplace_asymptotic(q, sv) / ch::laplace_exact(q, sv) - 1.0);
      CHECK(gap < previous);
      previous = gap;
    }
    CHECK(previous < 1e-3);
  }
}

TEST_CASE("sampler moments and reproducibility") {
  const GammaGammaParams p(0.5, 1.2);
  RandomStream a(11, 0, qrd::stream_domain::channel_samples);
  RandomStream b(11, 0, qrd::stream_domain::channel_samples);
  RandomStream c(11, 1, qrd::stream_domain::channel_samples);
  const auto xa = ch::sample(p, a, 200'000);
  const auto xb = ch::sample(p, b, 200'000);
  const auto xc = ch::sample(p, c, 10);
  CHECK(xa == xb);
  CHECK(xa[0] != xc[0]);
  double m1 = 0.0;
  double m2 = 0.0;
  std::size_t non_positive = 0;
  for (double v : xa) {
    if (!(v > 0.0)) ++non_positive;
    m1 += v;
    m2 += v * v;
  }
  CHECK(non_positive == 0);
  const double n = static_cast<double>(xa.size());
  m1 /= n;
  m2 /= n;
  // E[I^4] = prod (k)_4 / k^4 over both shapes.
  const double e4 = (0.5 * 1.5 * 2.5 * 3.5 / std::pow(0.5, 4)) * (1.2 * 2.2 * 3.2 * 4.2 / std::pow(1.2, 4));
  CHECK(std::abs(m1 - 1.0) < 3.0 * std::sqrt((5.5 - 1.0) / n));
  CHECK(std::abs(m2 - 5.5) < 3.0 * std::sqrt((e4 - 5.5 * 5.5) / n));
  CHECK_THROWS_AS(ch::sample(p, a, 0), std::invalid_argument);
}
