#pragma once

// Elliptical ground footprints of a directional transmitter.
//
// Two ways to produce an ellipse on the ground plane:
//   * a conical beam of semi-apex angle theta, tilted by psi off nadir
//     (footprint center offset x0 from the transmitter ground projection O);
//   * a nadir-pointing beam with unequal azimuth/elevation beamwidths,
//     described directly by its semi-axes (center at O, x0 = 0).
//
// All library math is in radians and meters; degree conversion happens at
// the CLI boundary.

#include <stdexcept>

namespace ellcov {

/// Raised when scenario parameters cannot produce a valid footprint
/// (e.g. a tilted cone that no longer closes on the ground plane).
class ValidityError : public std::domain_error {
  public:
    using std::domain_error::domain_error;
};

/// Tilted conical beam: altitude H, semi-apex angle theta, tilt psi.
/// Valid when cos^2(psi) - sin^2(theta) > 0, i.e. psi + theta < pi/2.
struct TiltedScenario {
    double altitude_m;      // H > 0
    double semi_apex_rad;   // theta in (0, pi/2)
    double tilt_rad;        // psi in [0, pi/2)
};

/// Nadir-pointing beam with an elliptical footprint given by its semi-axes.
/// b = a degenerates to the circular disc.
struct VerticalScenario {
    double semi_major_m;    // a > 0
    double semi_minor_m;    // b, 0 < b <= a
    double altitude_m;      // H > 0
};

/// An elliptical footprint { (x,y) : b^2 (x-x0)^2 + a^2 y^2 <= a^2 b^2 },
/// with the constants that the distance-distribution formulas consume
/// precomputed.  k2 is stored squared: ecc^2 a^2 - x0^2 goes negative
/// whenever x0 > ecc*a (always the case for cone-derived footprints), so
/// only the square is a real number.
struct EllipseFootprint {
    double a;      // semi-major axis, m
    double b;      // semi-minor axis, m
    double x0;     // center offset from O along the major axis, m (>= 0)
    double ecc;    // eccentricity sqrt(1 - b^2/a^2), in [0, 1)
    double area;   // pi a b, m^2

    // Constants of the closed-form distance expressions.
    double k1;     // -b^2 x0
    double k2sq;   // b^2 (ecc^2 a^2 - x0^2); may be negative
    double k3, k4, k5, k6, k7, k8, k9, k10;

    /// Validates axes/offset, fills every derived field, and checks that
    /// boundary_angle_term is real at the radial support endpoints.
    static EllipseFootprint create(double a, double b, double x0);

    /// a * sqrt(ecc^2 a^2 r^2 - k2sq); the helper inside the polar
    /// boundary-angle expression.
    double boundary_angle_term(double r) const;
};

/// Euclidean-distance support of a uniformly placed user, as seen from the
/// transmitter: zero density outside [d_min, d_max], formula branch change
/// at d_break.
struct SupportBounds {
    double d_min;
    double d_break;
    double d_max;
};

/// Footprint of a tilted conical beam (the cone's ground section).
/// a = H sin(2 theta) / (2 (cos^2 psi - sin^2 theta)),
/// b = H sin(theta) / sqrt(cos^2 psi - sin^2 theta),
/// x0 = a - H tan(theta - psi).
/// Throws ValidityError when psi + theta >= pi/2 (within margin).
EllipseFootprint footprint_from_tilt(const TiltedScenario& s);

/// Footprint of a nadir-pointing beam; x0 = 0.
/// Throws ValidityError for non-positive axes or b > a.
EllipseFootprint footprint_vertical(const VerticalScenario& s);

/// Footprint area divided by the area of the psi = 0 circular footprint
/// of the same beam, (a b) / (H tan theta)^2.  Equals 1 at psi = 0 and is
/// independent of H.
double area_ratio_vs_circle(const TiltedScenario& s);

/// Altitude a nadir-pointing transmitter with the same semi-apex angle
/// needs in order to reproduce the tilted footprint's semi-major axis:
/// H_v = a / tan(theta).  (Its elevation beamwidth is assumed adjusted to
/// reproduce b.)
double equivalent_vertical_altitude(const TiltedScenario& s);

/// Euclidean-distance support for a footprint seen from altitude H.
SupportBounds support_bounds(const EllipseFootprint& fp, double altitude_m);

namespace validity {
/// Margin required on cos^2(psi) - sin^2(theta); near-degenerate cones
/// produce footprints too large for stable downstream quadrature.
inline constexpr double kMinConeMargin = 1e-9;
}  // namespace validity

}  // namespace ellcov
