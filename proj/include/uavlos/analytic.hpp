#pragma once

// Closed-form average LOS probability between two UAV layers over a square
// urban patch, plus the numeric-quadrature references it approximates.
//
// Unit convention: horizontal distances passed to the building-count chain
// (expected_buildings, p_los_at_distance, corrected_p_los) are kilometres,
// because beta is per km^2. Everything else is metres.

#include "uavlos/scene.hpp"

namespace uavlos {

struct HeightPair {
  double h1 = 0.0;
  double h2 = 0.0;

  double h_min() const noexcept;
  double h_max() const noexcept;
  double delta_h() const noexcept;
};

/// Mean and standard deviation of the horizontal UAV separation, as
/// fractions of the patch side A.
struct DistanceMoments {
  double mean = 0.0;
  double stddev = 0.0;

  double mean_m(double patch_side_m) const noexcept {
    return mean * patch_side_m;
  }
  double stddev_m(double patch_side_m) const noexcept {
    return stddev * patch_side_m;
  }
};

enum class MomentMode {
  paper,   ///< mu = 0.52 A, sigma = 0.06 A
  derived, ///< moments of the renormalised polynomial separation density
};

enum class PdfChoice { poly, gauss };

/// Standard Gaussian upper tail.
double q_function(double x) noexcept;

/// LOS probability past a single building of Rayleigh(gamma) height whose
/// crossing point is uniform along the link: the mean Rayleigh CDF over the
/// link height profile [h_min, h_max].
double p_los_single(const HeightPair& hp, double gamma_m) noexcept;

/// Expected number of buildings crossed by a link of horizontal length
/// `l_km`: 2 sqrt(alpha beta / pi) l + alpha.
double expected_buildings(double l_km, double alpha,
                          double beta_per_km2) noexcept;

double p_los_at_distance(double l_km, const HeightPair& hp,
                         const ItuParams& params) noexcept;

/// Probability that both endpoints share a street, plus the correction D,
/// clamped to [0, 1]. Throws std::invalid_argument if beta * S <= 0.
double same_street_probability(const ItuParams& params);

double corrected_p_los(double l_km, const HeightPair& hp,
                       const ItuParams& params);

/// Polynomial separation density of normalised distance k = l / A for two
/// uniform points in a square. Zero outside (0, 1); integrates to
/// pi - 8/3 + 1/2 on its support.
double distance_pdf_poly(double k) noexcept;

/// Mass of distance_pdf_poly over (0, 1).
double distance_pdf_poly_mass() noexcept;

DistanceMoments distance_moments(MomentMode mode);

/// Gaussian separation density in 1/m, truncated (not renormalised) to l > 0.
double distance_pdf_gauss(double l_m, const DistanceMoments& m,
                          double patch_side_m) noexcept;

/// Adaptive quadrature of corrected_p_los(l) p(l) over the density support.
/// The poly density is renormalised to unit mass; `moments` only matters for
/// the Gaussian.
double average_p_los_numeric(const HeightPair& hp, const ItuParams& params,
                             PdfChoice pdf,
                             MomentMode moments = MomentMode::paper);
double average_p_los_numeric(const HeightPair& hp, const ItuParams& params,
                             PdfChoice pdf, const DistanceMoments& moments);

/// Intermediate quantities of the closed form. Distances in km.
struct ClosedFormTerms {
  double p_single = 0.0;    // single-building LOS probability
  double p_same_street = 0.0;
  double mu_km = 0.0;
  double sigma_km = 0.0;
  double shifted_mean_km = 0.0; // Gamma
  double exponent = 0.0;        // eta
  bool gaussian_regime = false; // Gamma >= 2 sigma
  double value = 0.0;
};

ClosedFormTerms closed_form_terms(const HeightPair& hp, const ItuParams& params,
                                  MomentMode moments = MomentMode::paper);
ClosedFormTerms closed_form_terms(const HeightPair& hp, const ItuParams& params,
                                  const DistanceMoments& moments);

/// P0 + (1 - P0) P1^eta when Gamma >= 2 sigma, P0 otherwise (and whenever
/// P1 <= 1e-30).
double average_p_los_closed(const HeightPair& hp, const ItuParams& params,
                            MomentMode moments = MomentMode::paper);

} // namespace uavlos
