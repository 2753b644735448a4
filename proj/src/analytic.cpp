#include "uavlos/analytic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace uavlos {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kQuadTol = 1e-12;
constexpr unsigned kQuadDepth = 20;
constexpr double kTinySingle = 1e-30;

double clamp01(double p) noexcept { return std::clamp(p, 0.0, 1.0); }

template <class F> double integrate(F f, double a, double b) {
  using boost::math::quadrature::gauss_kronrod;
  return gauss_kronrod<double, 61>::integrate(f, a, b, kQuadDepth, kQuadTol);
}

} // namespace

double HeightPair::h_min() const noexcept { return std::min(h1, h2); }
double HeightPair::h_max() const noexcept { return std::max(h1, h2); }
double HeightPair::delta_h() const noexcept { return std::fabs(h1 - h2); }

double q_function(double x) noexcept {
  return 0.5 * std::erfc(x / std::numbers::sqrt2);
}

double p_los_single(const HeightPair& hp, double gamma_m) noexcept {
  const double dh = hp.delta_h();
  if (dh == 0.0) return rayleigh_cdf(gamma_m, hp.h_min());
  const double tail = q_function(hp.h_min() / gamma_m) -
                      q_function(hp.h_max() / gamma_m);
  return clamp01(1.0 - std::sqrt(2.0 * kPi) * gamma_m / dh * tail);
}

double expected_buildings(double l_km, double alpha,
                          double beta_per_km2) noexcept {
  return 2.0 * std::sqrt(alpha * beta_per_km2 / kPi) * l_km + alpha;
}

double p_los_at_distance(double l_km, const HeightPair& hp,
                         const ItuParams& params) noexcept {
  const double p1 = p_los_single(hp, params.gamma_m);
  return clamp01(std::pow(
      p1, expected_buildings(l_km, params.alpha, params.beta_per_km2)));
}

double same_street_probability(const ItuParams& params) {
  const double beta_s = params.beta_per_km2 * params.patch_area_km2();
  if (!(beta_s > 0.0)) {
    throw std::invalid_argument("same-street probability needs beta * S > 0");
  }
  const double root = 1.0 - std::sqrt(params.alpha);
  return clamp01(2.0 * root * root /
                     ((1.0 - params.alpha) * std::sqrt(beta_s)) +
                 params.d_correction);
}

double corrected_p_los(double l_km, const HeightPair& hp,
                       const ItuParams& params) {
  const double p0 = same_street_probability(params);
  return p0 + (1.0 - p0) * p_los_at_distance(l_km, hp, params);
}

double distance_pdf_poly(double k) noexcept {
  if (!(k > 0.0 && k < 1.0)) return 0.0;
  return 2.0 * kPi * k - 8.0 * k * k + 2.0 * k * k * k;
}

double distance_pdf_poly_mass() noexcept { return kPi - 8.0 / 3.0 + 0.5; }

DistanceMoments distance_moments(MomentMode mode) {
  if (mode == MomentMode::paper) return {0.52, 0.06};
  using boost::math::quadrature::gauss;
  const double m0 = gauss<double, 20>::integrate(
      [](double k) { return distance_pdf_poly(k); }, 0.0, 1.0);
  const double m1 = gauss<double, 20>::integrate(
      [](double k) { return k * distance_pdf_poly(k); }, 0.0, 1.0);
  const double m2 = gauss<double, 20>::integrate(
      [](double k) { return k * k * distance_pdf_poly(k); }, 0.0, 1.0);
  const double mean = m1 / m0;
  return {mean, std::sqrt(m2 / m0 - mean * mean)};
}

double distance_pdf_gauss(double l_m, const DistanceMoments& m,
                          double patch_side_m) noexcept {
  if (l_m <= 0.0) return 0.0;
  const double mu = m.mean_m(patch_side_m);
  const double sigma = m.stddev_m(patch_side_m);
  const double z = (l_m - mu) / sigma;
  return std::exp(-0.5 * z * z) / (std::sqrt(2.0 * kPi) * sigma);
}

double average_p_los_numeric(const HeightPair& hp, const ItuParams& params,
                             PdfChoice pdf, MomentMode moments) {
  return average_p_los_numeric(hp, params, pdf, distance_moments(moments));
}

double average_p_los_numeric(const HeightPair& hp, const ItuParams& params,
                             PdfChoice pdf, const DistanceMoments& m) {
  params.validate();
  const double side = params.patch_side_m;
  if (pdf == PdfChoice::poly) {
    const double mass = distance_pdf_poly_mass();
    return integrate(
        [&](double k) {
          return corrected_p_los(k * side / 1000.0, hp, params) *
                 distance_pdf_poly(k) / mass;
        },
        0.0, 1.0);
  }
  const double mu = m.mean_m(side);
  const double sigma = m.stddev_m(side);
  auto f = [&](double l) {
    return corrected_p_los(l / 1000.0, hp, params) *
           distance_pdf_gauss(l, m, side);
  };
  // Mass beyond 12 sigma is below double precision.
  const double lo = std::max(0.0, mu - 12.0 * sigma);
  const double hi = mu + 12.0 * sigma;
  return clamp01(integrate(f, lo, mu) + integrate(f, mu, hi));
}

ClosedFormTerms closed_form_terms(const HeightPair& hp, const ItuParams& params,
                                  MomentMode moments) {
  return closed_form_terms(hp, params, distance_moments(moments));
}

ClosedFormTerms closed_form_terms(const HeightPair& hp, const ItuParams& params,
                                  const DistanceMoments& m) {
  params.validate();
  ClosedFormTerms t;
  t.p_single = p_los_single(hp, params.gamma_m);
  t.p_same_street = same_street_probability(params);
  t.mu_km = m.mean_m(params.patch_side_m) / 1000.0;
  t.sigma_km = m.stddev_m(params.patch_side_m) / 1000.0;

  if (t.p_single <= kTinySingle) {
    t.shifted_mean_km = -std::numeric_limits<double>::infinity();
    t.exponent = std::numeric_limits<double>::quiet_NaN();
    t.value = t.p_same_street;
    return t;
  }
  const double log_p = std::log(t.p_single);
  const double slope = 2.0 * std::sqrt(params.alpha * params.beta_per_km2 / kPi);
  const double var = t.sigma_km * t.sigma_km;
  t.shifted_mean_km = t.mu_km + slope * log_p * var;
  t.exponent = params.alpha + slope * t.mu_km +
               2.0 * params.alpha * params.beta_per_km2 / kPi * var * log_p;
  t.gaussian_regime = t.shifted_mean_km >= 2.0 * t.sigma_km;
  t.value = t.gaussian_regime
                ? t.p_same_street +
                      (1.0 - t.p_same_street) * std::pow(t.p_single, t.exponent)
                : t.p_same_street;
  t.value = clamp01(t.value);
  return t;
}

double average_p_los_closed(const HeightPair& hp, const ItuParams& params,
                            MomentMode moments) {
  return closed_form_terms(hp, params, moments).value;
}

} // namespace uavlos
