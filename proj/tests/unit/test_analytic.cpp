#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <numbers>

#include "oracles.hpp"
#include "uavlos/analytic.hpp"
#include "uavlos/random.hpp"

using namespace uavlos;

TEST_CASE("q_function matches a quadrature of the Gaussian density") {
  CHECK(q_function(0.0) == 0.5);
  CHECK(std::fabs(q_function(1.5038) - 0.06636) < 1e-4);
  CHECK(std::fabs(q_function(1.5038) - oracle::gaussian_tail(1.5038)) < 1e-9);
  CHECK(std::fabs(q_function(2.2556) - 0.01204) < 1e-4);
  CHECK(std::fabs(q_function(2.2556) - oracle::gaussian_tail(2.2556)) < 1e-9);
  for (double x = -4.0; x <= 6.0; x += 0.37) {
    CHECK(std::fabs(q_function(x) - oracle::gaussian_tail(x)) < 1e-9);
  }
}

TEST_CASE("p_los_single against the double quadrature oracle") {
  CHECK(p_los_single({0, 0}, 13.3) == 0.0);
  CHECK(std::fabs(p_los_single({30, 30}, 13.3) - 0.9214) < 1e-3);
  CHECK(std::fabs(p_los_single({30, 20}, 13.3) - 0.8189) < 1e-3);
  CHECK(p_los_single({30, 20}, 13.3) == p_los_single({20, 30}, 13.3));
  for (double gamma : {8.0, 13.3, 20.0}) {
    for (double h1 = 0.0; h1 <= 60.0; h1 += 7.5) {
      for (double h2 = 0.0; h2 <= 60.0; h2 += 7.5) {
        CHECK(std::fabs(p_los_single({h1, h2}, gamma) -
                        oracle::single_building_los(h1, h2, gamma, 200)) < 1e-6);
      }
    }
  }
}

TEST_CASE("p_los_single is continuous at equal heights") {
  for (double h : {0.5, 5.0, 13.3, 30.0, 80.0}) {
    CHECK(std::fabs(p_los_single({h, h + 1e-6}, 13.3) -
                    p_los_single({h, h}, 13.3)) < 1e-6);
    CHECK(p_los_single({h, h}, 13.3) ==
          doctest::Approx(1.0 - std::exp(-h * h / (2 * 13.3 * 13.3))));
  }
}

TEST_CASE("p_los_single is nondecreasing in each height") {
  for (int a = 0; a <= 100; ++a) {
    for (int b = 0; b < 100; ++b) {
      const double p = p_los_single({double(a), double(b)}, 13.3);
      REQUIRE(p_los_single({double(a), double(b + 1)}, 13.3) >= p - 1e-15);
      if (a < 100) REQUIRE(p_los_single({double(a + 1), double(b)}, 13.3) >= p - 1e-15);
    }
  }
}

TEST_CASE("building-count chain") {
  const ItuParams p;
  CHECK(expected_buildings(0.0, 0.37, 188.0) == doctest::Approx(0.37));
  // 2 sqrt(0.37 * 188 / pi) * 0.403 + 0.37
  const double en = 2.0 * std::sqrt(0.37 * 188.0 / std::numbers::pi) * 0.403 + 0.37;
  CHECK(std::fabs(expected_buildings(0.403, 0.37, 188.0) - 4.163) < 1e-3);
  CHECK(expected_buildings(0.403, 0.37, 188.0) == doctest::Approx(en));

  const double p1 = p_los_single({30, 30}, 13.3);
  CHECK(std::fabs(p_los_at_distance(0.403, {30, 30}, p) - 0.7112) < 2e-3);
  CHECK(p_los_at_distance(0.403, {30, 30}, p) == doctest::Approx(std::pow(p1, en)));
  CHECK(p_los_at_distance(0.7, {500, 500}, p) == doctest::Approx(1.0));

  CHECK(std::fabs(same_street_probability(p) - 0.0959) < 1e-3);
  ItuParams full = p;
  full.alpha = 0.9999;
  CHECK(same_street_probability(full) == doctest::Approx(0.05).epsilon(1e-3));
  ItuParams none = p;
  none.beta_per_km2 = 0.0;
  CHECK_THROWS_AS(same_street_probability(none), std::invalid_argument);

  const double p0 = same_street_probability(p);
  CHECK(std::fabs(corrected_p_los(0.403, {30, 30}, p) - 0.7389) < 2e-3);
  CHECK(corrected_p_los(0.403, {0, 0}, p) == doctest::Approx(p0));
  CHECK(corrected_p_los(0.403, {500, 500}, p) == doctest::Approx(1.0));
}

namespace {

double raw_poly(double k) {
  return 2.0 * std::numbers::pi * k - 8.0 * k * k + 2.0 * k * k * k;
}

} // namespace

TEST_CASE("separation densities and moments") {
  CHECK(distance_pdf_poly(0.0) == 0.0);
  CHECK(std::fabs(distance_pdf_poly(0.5) - 1.3916) < 1e-4);
  CHECK(distance_pdf_poly(1.1) == 0.0);
  CHECK(distance_pdf_poly(-0.2) == 0.0);

  const double mass = std::numbers::pi - 8.0 / 3.0 + 0.5;
  CHECK(distance_pdf_poly_mass() == doctest::Approx(mass).epsilon(1e-12));
  CHECK(std::fabs(mass - 0.9749) < 1e-4);
  CHECK(distance_pdf_poly(0.5) == doctest::Approx(raw_poly(0.5)));
  CHECK(oracle::simpson(raw_poly, 0.0, 1.0) ==
        doctest::Approx(mass).epsilon(1e-9));

  const DistanceMoments paper = distance_moments(MomentMode::paper);
  CHECK(paper.mean == 0.52);
  CHECK(paper.stddev == 0.06);

  const DistanceMoments derived = distance_moments(MomentMode::derived);
  CHECK(std::fabs(derived.mean - 0.507) < 0.002);
  const double m1 =
      oracle::simpson([](double k) { return k * raw_poly(k); }, 0, 1) / mass;
  const double m2 =
      oracle::simpson([](double k) { return k * k * raw_poly(k); }, 0, 1) / mass;
  CHECK(derived.mean == doctest::Approx(m1).epsilon(1e-9));
  CHECK(derived.stddev == doctest::Approx(std::sqrt(m2 - m1 * m1)).epsilon(1e-9));

  const double a = 775.0;
  const double mode = distance_pdf_gauss(paper.mean_m(a), paper, a);
  CHECK(mode == doctest::Approx(1.0 / (std::sqrt(2 * std::numbers::pi) *
                                       paper.stddev_m(a))));
  CHECK(distance_pdf_gauss(0.0, paper, a) == 0.0);
  CHECK(distance_pdf_gauss(-5.0, paper, a) == 0.0);
  for (const DistanceMoments& m : {paper, derived}) {
    const double total = oracle::simpson(
        [&](double l) { return distance_pdf_gauss(l, m, a); }, 0.0,
        m.mean_m(a) + 12 * m.stddev_m(a), 20000);
    CHECK(total >= 0.97);
  }
}

TEST_CASE("numeric average LOS probability") {
  const ItuParams p;
  CHECK(average_p_los_numeric({500, 500}, p, PdfChoice::poly) == doctest::Approx(1.0));
  CHECK(average_p_los_numeric({500, 500}, p, PdfChoice::gauss) == doctest::Approx(1.0).epsilon(1e-9));

  const double poly = average_p_los_numeric({30, 30}, p, PdfChoice::poly);
  const double gauss = average_p_los_numeric({30, 30}, p, PdfChoice::gauss);
  CHECK(std::fabs(poly - gauss) < 0.05);

  // Independent Simpson quadrature of the same integrands.
  const double a = p.patch_side_m;
  const double mass = distance_pdf_poly_mass();
  const double poly_ref = oracle::simpson(
      [&](double k) {
        return corrected_p_los(k * a / 1000.0, {30, 30}, p) * raw_poly(k) / mass;
      },
      0.0, 1.0, 4000);
  CHECK(poly == doctest::Approx(poly_ref).epsilon(1e-8));
  const DistanceMoments m = distance_moments(MomentMode::paper);
  const double gauss_ref = oracle::simpson(
      [&](double l) {
        return corrected_p_los(l / 1000.0, {30, 30}, p) * distance_pdf_gauss(l, m, a);
      },
      1e-9, m.mean_m(a) + 12 * m.stddev_m(a), 20000);
  CHECK(gauss == doctest::Approx(gauss_ref).epsilon(1e-8));

  const DistanceMoments sharp{0.52, 1e-6};
  CHECK(average_p_los_numeric({30, 20}, p, PdfChoice::gauss, sharp) ==
        doctest::Approx(corrected_p_los(0.52 * a / 1000.0, {30, 20}, p)).epsilon(1e-6));
}

TEST_CASE("closed form against quadrature") {
  const ItuParams p;
  CHECK(average_p_los_closed({500, 500}, p) == doctest::Approx(1.0));
  const double closed = average_p_los_closed({30, 30}, p);
  const double numeric = average_p_los_numeric({30, 30}, p, PdfChoice::gauss);
  CHECK(std::fabs(closed - numeric) < 0.03);

  const ClosedFormTerms t = closed_form_terms({30, 30}, p);
  CHECK(t.gaussian_regime);
  CHECK(t.p_same_street == doctest::Approx(same_street_probability(p)));
  CHECK(t.mu_km == doctest::Approx(0.52 * 0.775));
  CHECK(t.sigma_km == doctest::Approx(0.06 * 0.775));
  const double ln_p1 = std::log(t.p_single);
  const double k = 2.0 * std::sqrt(p.alpha * p.beta_per_km2 / std::numbers::pi);
  CHECK(t.shifted_mean_km == doctest::Approx(t.mu_km + k * ln_p1 * t.sigma_km * t.sigma_km));
  CHECK(t.exponent == doctest::Approx(p.alpha + k * t.mu_km +
                                      0.5 * k * k * t.sigma_km * t.sigma_km * ln_p1));
  CHECK(t.value == doctest::Approx(t.p_same_street +
                                   (1 - t.p_same_street) * std::pow(t.p_single, t.exponent)));

  // A small sigma makes the Gaussian a point mass, where the closed form is exact.
  const DistanceMoments sharp{0.52, 1e-6};
  for (double h : {5.0, 20.0, 45.0}) {
    CHECK(closed_form_terms({h, h}, p, sharp).value ==
          doctest::Approx(average_p_los_numeric({h, h}, p, PdfChoice::gauss, sharp)).epsilon(1e-6));
  }
}

TEST_CASE("closed form falls back to the same-street term") {
  ItuParams dense;
  dense.alpha = 0.5;
  dense.beta_per_km2 = 300.0;
  dense.gamma_m = 20.0;
  CHECK(std::fabs(average_p_los_closed({2, 2}, dense) - same_street_probability(dense)) < 1e-9);
  const ClosedFormTerms low = closed_form_terms({0.05, 0.05}, dense);
  CHECK_FALSE(low.gaussian_regime);
  CHECK(low.value == low.p_same_street);
  CHECK(average_p_los_closed({0.05, 0.05}, dense) == same_street_probability(dense));
  CHECK(average_p_los_closed({0.0, 0.0}, dense) == same_street_probability(dense));
}

TEST_CASE("closed form is nondecreasing in a common height") {
  const ItuParams p;
  double prev = 0.0;
  for (double h = 0.0; h <= 120.0; h += 0.5) {
    const double v = average_p_los_closed({h, h}, p);
    REQUIRE(v >= prev - 1e-15);
    prev = v;
  }
}

TEST_CASE("denser and taller environments lower the average LOS probability") {
  struct Env { double alpha, beta, gamma; };
  const Env envs[] = {{0.1, 750, 8}, {0.3, 500, 15}, {0.5, 300, 20}, {0.5, 300, 50}};
  for (double h : {20.0, 50.0, 100.0}) {
    double prev = 2.0;
    for (const Env& e : envs) {
      ItuParams p;
      p.alpha = e.alpha;
      p.beta_per_km2 = e.beta;
      p.gamma_m = e.gamma;
      const double v = average_p_los_numeric({h, h}, p, PdfChoice::gauss);
      CHECK(v < prev);
      prev = v;
    }
  }
}

TEST_CASE("all analytic outputs are probabilities") {
  Rng rng(77);
  for (int i = 0; i < 400; ++i) {
    ItuParams p;
    p.alpha = rng.uniform(0.01, 0.9);
    p.beta_per_km2 = rng.uniform(5.0, 2000.0);
    p.gamma_m = rng.uniform(1.0, 60.0);
    p.d_correction = rng.uniform(0.0, 0.3);
    p.patch_side_m = rng.uniform(100.0, 3000.0);
    const HeightPair hp{rng.uniform(0, 150), rng.uniform(0, 150)};
    const double l = rng.uniform(0.0, 4.0);
    for (double v : {p_los_single(hp, p.gamma_m), p_los_at_distance(l, hp, p),
                     same_street_probability(p), corrected_p_los(l, hp, p),
                     average_p_los_closed(hp, p),
                     average_p_los_closed(hp, p, MomentMode::derived)}) {
      REQUIRE(v >= 0.0);
      REQUIRE(v <= 1.0);
    }
    if (i % 8 == 0) {
      for (PdfChoice c : {PdfChoice::poly, PdfChoice::gauss}) {
        const double v = average_p_los_numeric(hp, p, c);
        REQUIRE(v >= 0.0);
        REQUIRE(v <= 1.0 + 1e-12);
      }
    }
  }
}
