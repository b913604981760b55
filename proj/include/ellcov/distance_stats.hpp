#pragma once

// Distance statistics of a user placed uniformly inside an elliptical
// footprint, seen from a transmitter at altitude H above the reference
// point O.
//
// Radial distance r is measured on the ground from O, Euclidean (slant)
// distance d = sqrt(r^2 + H^2) from the transmitter.  The densities are
// piecewise: a 2r/(ab) disc branch where a circle about O is contained in
// the ellipse, and an arccos boundary-angle branch outside it.  Which
// branches exist depends on where O sits relative to the ellipse:
//
//   Vertical      x0 = 0        branches [0,b] and (b,a]
//   TiltedInside  0 < x0 <= a   branches [0,a-x0] and (a-x0,a+x0]
//   TiltedOutside x0 > a        single branch (x0-a, a+x0]
//
// CDFs are evaluated by adaptive quadrature of the validated PDFs (split
// at the branch point); the printed closed forms are kept behind
// euclidean_cdf_closed_form as a cross-check path only.

#include <memory>
#include <string>

#include "ellcov/geometry.hpp"

namespace ellcov {

enum class ScenarioTag { TiltedInside, TiltedOutside, Vertical };

class DistanceModel {
  public:
    static DistanceModel from_footprint(const EllipseFootprint& fp, double altitude_m);
    static DistanceModel tilted(const TiltedScenario& s);
    static DistanceModel vertical(const VerticalScenario& s);

    ScenarioTag tag() const { return tag_; }
    const EllipseFootprint& footprint() const { return fp_; }
    double altitude() const { return H_; }
    const SupportBounds& bounds() const { return bounds_; }

    /// Radial support [radial_low, radial_high] with the branch change at
    /// radial_break (== radial_low when there is no disc branch).
    double radial_low() const { return r_lo_; }
    double radial_break() const { return r_break_; }
    double radial_high() const { return r_hi_; }

    /// True when the disc of radius a-x0 about O is contained in the
    /// ellipse (x0 >= ecc^2 a), the assumption behind the 2r/(ab) branch.
    /// Holds for every cone-derived footprint; can fail for hand-built
    /// ones, in which case warning() is non-empty and the densities are
    /// approximate.
    bool disc_branch_exact() const { return disc_branch_exact_; }
    const std::string& warning() const { return warning_; }

    /// Polar half-angle subtended at O by the ellipse boundary at radius r;
    /// the arccos argument is clamped when within 1e-9 of [-1, 1].
    /// Throws std::domain_error outside the arccos branch of the support.
    double polar_boundary_angle(double r) const;

    /// Density of the radial distance; 0 outside the support.
    double radial_pdf(double r) const;

    /// Density of the Euclidean distance; 0 outside [d_min, d_max].
    double euclidean_pdf(double d) const;

    /// CDF of the radial distance (quadrature of radial_pdf).
    double radial_cdf(double r) const;

    /// CDF of the Euclidean distance (quadrature of euclidean_pdf).
    double euclidean_cdf(double d) const;

    /// Printed closed-form CDF of the Euclidean distance.  Exact for the
    /// vertical scenario; the tilted transcription is known to disagree
    /// with the quadrature path and is exposed for cross-check logging,
    /// never as an evaluation path.  May return NaN where its inner
    /// square roots go negative.
    double euclidean_cdf_closed_form(double d) const;

  private:
    DistanceModel(const EllipseFootprint& fp, double altitude_m);

    double boundary_angle_unchecked(double r) const;

    ScenarioTag tag_;
    EllipseFootprint fp_;
    double H_;
    SupportBounds bounds_;
    double r_lo_, r_break_, r_hi_;
    bool disc_branch_exact_;
    std::string warning_;

    struct CdfCache;
    std::shared_ptr<CdfCache> cache_;
};

}  // namespace ellcov
