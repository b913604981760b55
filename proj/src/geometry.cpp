#include "ellcov/geometry.hpp"

#include <cmath>
#include <string>

namespace ellcov {

namespace {

void require(bool ok, const std::string& what) {
    if (!ok) throw ValidityError(what);
}

void check_tilted(const TiltedScenario& s) {
    require(s.altitude_m > 0.0, "altitude must be positive, got H=" +
                                    std::to_string(s.altitude_m));
    require(s.semi_apex_rad > 0.0 && s.semi_apex_rad < M_PI / 2,
            "semi-apex angle must lie in (0, pi/2) rad, got theta=" +
                std::to_string(s.semi_apex_rad));
    require(s.tilt_rad >= 0.0 && s.tilt_rad < M_PI / 2,
            "tilt angle must lie in [0, pi/2) rad, got psi=" +
                std::to_string(s.tilt_rad));
    const double margin = std::cos(s.tilt_rad) * std::cos(s.tilt_rad) -
                          std::sin(s.semi_apex_rad) * std::sin(s.semi_apex_rad);
    require(margin > validity::kMinConeMargin,
            "beam does not close on the ground plane: need psi + theta < pi/2 "
            "(cos^2 psi - sin^2 theta = " +
                std::to_string(margin) + ")");
}

}  // namespace

EllipseFootprint EllipseFootprint::create(double a, double b, double x0) {
    require(a > 0.0 && b > 0.0, "footprint axes must be positive");
    require(b <= a, "semi-minor axis exceeds semi-major axis (b=" +
                        std::to_string(b) + ", a=" + std::to_string(a) + ")");
    require(x0 >= 0.0, "center offset must be nonnegative");

    EllipseFootprint fp{};
    fp.a = a;
    fp.b = b;
    fp.x0 = x0;
    fp.ecc = std::sqrt(std::max(0.0, 1.0 - (b * b) / (a * a)));
    fp.area = M_PI * a * b;

    const double e2 = fp.ecc * fp.ecc;
    const double e = fp.ecc;
    const double om = 1.0 - e2;  // b^2/a^2
    fp.k1 = -b * b * x0;
    fp.k2sq = b * b * (e2 * a * a - x0 * x0);
    fp.k3 = a * fp.k2sq - fp.k1 * fp.k1;
    fp.k4 = e2 * std::pow(a, 4) * om;
    fp.k7 = std::pow(a, 6) * std::pow(e, 3) * om * fp.k1;
    fp.k5 = -fp.k7 * fp.k3;
    fp.k6 = -fp.k1 * std::pow(a, 12) * std::pow(e, 5) * om * om;
    fp.k8 = -std::pow(a, 6) * std::pow(e, 3) * std::sqrt(om) *
            (om * a * a * fp.k2sq + fp.k1 * fp.k1);
    fp.k9 = std::pow(a, 4) * e2 * std::sqrt(om);
    fp.k10 = -std::pow(a, 12) * std::pow(e, 7) * om * om;

    // The boundary-angle helper must be real on the radial interval where
    // the arccos branch is evaluated.
    if (x0 > 0.0 || b < a) {
        const double r_lo = (x0 > a) ? x0 - a : (x0 > 0.0 ? a - x0 : b);
        const double r_hi = a + x0;
        const double scale = e2 * a * a * r_hi * r_hi;
        const double tol = 1e-12 * std::max(1.0, scale);
        require(e2 * a * a * r_lo * r_lo - fp.k2sq >= -tol &&
                    e2 * a * a * r_hi * r_hi - fp.k2sq >= -tol,
                "boundary-angle helper is not real over the radial support");
    }
    return fp;
}

double EllipseFootprint::boundary_angle_term(double r) const {
    const double s = ecc * ecc * a * a * r * r - k2sq;
    return a * std::sqrt(std::max(0.0, s));
}

EllipseFootprint footprint_from_tilt(const TiltedScenario& s) {
    check_tilted(s);
    const double theta = s.semi_apex_rad;
    const double psi = s.tilt_rad;
    const double H = s.altitude_m;

    if (psi == 0.0) {
        // Exact circular limit; keeps the psi = 0 cone bit-identical to the
        // equivalent vertical construction.
        const double r = H * std::tan(theta);
        return EllipseFootprint::create(r, r, 0.0);
    }

    const double denom = std::cos(psi) * std::cos(psi) - std::sin(theta) * std::sin(theta);
    const double a = H * std::sin(2.0 * theta) / (2.0 * denom);
    const double b = H * std::sin(theta) / std::sqrt(denom);
    const double x0 = (psi <= theta) ? a - H * std::tan(theta - psi)
                                     : a + H * std::tan(psi - theta);
    return EllipseFootprint::create(a, b, x0);
}

EllipseFootprint footprint_vertical(const VerticalScenario& s) {
    require(s.altitude_m > 0.0, "altitude must be positive, got H=" +
                                    std::to_string(s.altitude_m));
    return EllipseFootprint::create(s.semi_major_m, s.semi_minor_m, 0.0);
}

double area_ratio_vs_circle(const TiltedScenario& s) {
    const EllipseFootprint fp = footprint_from_tilt(s);
    const double r0 = s.altitude_m * std::tan(s.semi_apex_rad);
    return fp.a * fp.b / (r0 * r0);
}

double equivalent_vertical_altitude(const TiltedScenario& s) {
    const EllipseFootprint fp = footprint_from_tilt(s);
    return fp.a / std::tan(s.semi_apex_rad);
}

SupportBounds support_bounds(const EllipseFootprint& fp, double altitude_m) {
    require(altitude_m > 0.0, "altitude must be positive, got H=" +
                                  std::to_string(altitude_m));
    const double H = altitude_m;
    auto slant = [H](double r) { return std::sqrt(r * r + H * H); };

    if (fp.x0 == 0.0) return {H, slant(fp.b), slant(fp.a)};
    if (fp.x0 <= fp.a) return {H, slant(fp.a - fp.x0), slant(fp.a + fp.x0)};
    // O outside the ellipse: no full-circle branch, support starts at the
    // near edge.
    const double d_near = slant(fp.x0 - fp.a);
    return {d_near, d_near, slant(fp.a + fp.x0)};
}

}  // namespace ellcov
