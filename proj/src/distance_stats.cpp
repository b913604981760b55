#include "ellcov/distance_stats.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <stdexcept>
#include <vector>

#include "ellcov/quadrature.hpp"

namespace ellcov {

namespace {

constexpr double kAcosClampWindow = 1e-9;

// Cumulative integral of a pdf on [lo, hi], sampled on a cosine-spaced
// grid per branch so that probe intervals shrink near the support edges
// where the density has square-root behavior.  Queries re-integrate only
// the partial segment, so the table introduces no interpolation error.
struct CumulativeTable {
    std::vector<double> nodes;
    std::vector<double> cum;

    template <class Pdf>
    void build(Pdf&& pdf, double lo, double brk, double hi) {
        constexpr int kSegmentsPerBranch = 512;
        nodes.clear();
        nodes.push_back(lo);
        auto add_branch = [&](double b0, double b1) {
            if (!(b1 > b0)) return;
            for (int k = 1; k <= kSegmentsPerBranch; ++k) {
                const double t = 0.5 * (1.0 - std::cos(M_PI * k / kSegmentsPerBranch));
                nodes.push_back(b0 + (b1 - b0) * t);
            }
            nodes.back() = b1;
        };
        add_branch(lo, brk);
        add_branch(std::max(lo, brk), hi);

        cum.assign(nodes.size(), 0.0);
        const quad::Options opts{1e-12, 1e-15, 8};
        for (std::size_t i = 1; i < nodes.size(); ++i) {
            const double seg = quad::integrate(pdf, nodes[i - 1], nodes[i], opts).value;
            cum[i] = cum[i - 1] + std::max(0.0, seg);
        }
    }

    template <class Pdf>
    double query(Pdf&& pdf, double x) const {
        if (x <= nodes.front()) return 0.0;
        if (x >= nodes.back()) return cum.back();
        const auto it = std::upper_bound(nodes.begin(), nodes.end(), x);
        const std::size_t i = static_cast<std::size_t>(it - nodes.begin()) - 1;
        const quad::Options opts{1e-12, 1e-15, 8};
        return cum[i] + std::max(0.0, quad::integrate(pdf, nodes[i], x, opts).value);
    }
};

}  // namespace

struct DistanceModel::CdfCache {
    std::once_flag radial_once;
    std::once_flag euclid_once;
    CumulativeTable radial;
    CumulativeTable euclid;
};

DistanceModel::DistanceModel(const EllipseFootprint& fp, double altitude_m)
    : fp_(fp), H_(altitude_m), bounds_(support_bounds(fp, altitude_m)),
      cache_(std::make_shared<CdfCache>()) {
    if (fp_.x0 == 0.0) {
        tag_ = ScenarioTag::Vertical;
        r_lo_ = 0.0;
        r_break_ = fp_.b;
        r_hi_ = fp_.a;
    } else if (fp_.x0 <= fp_.a) {
        tag_ = ScenarioTag::TiltedInside;
        r_lo_ = 0.0;
        r_break_ = fp_.a - fp_.x0;
        r_hi_ = fp_.a + fp_.x0;
    } else {
        tag_ = ScenarioTag::TiltedOutside;
        r_lo_ = fp_.x0 - fp_.a;
        r_break_ = r_lo_;
        r_hi_ = fp_.a + fp_.x0;
    }

    disc_branch_exact_ = true;
    if (tag_ == ScenarioTag::TiltedInside &&
        fp_.x0 < fp_.ecc * fp_.ecc * fp_.a) {
        // Nearest boundary point to O is then off the major axis, closer
        // than a-x0, and the disc branch overlaps the exterior.
        disc_branch_exact_ = false;
        warning_ = "footprint has x0 < ecc^2*a: the disc of radius a-x0 about O "
                   "is not contained in the ellipse and the first-branch "
                   "densities are approximate";
    }
}

DistanceModel DistanceModel::from_footprint(const EllipseFootprint& fp, double altitude_m) {
    return DistanceModel(fp, altitude_m);
}

DistanceModel DistanceModel::tilted(const TiltedScenario& s) {
    return DistanceModel(footprint_from_tilt(s), s.altitude_m);
}

DistanceModel DistanceModel::vertical(const VerticalScenario& s) {
    return DistanceModel(footprint_vertical(s), s.altitude_m);
}

double DistanceModel::boundary_angle_unchecked(double r) const {
    double arg;
    if (tag_ == ScenarioTag::Vertical) {
        arg = std::sqrt(std::max(0.0, r * r - fp_.b * fp_.b)) / (fp_.ecc * r);
    } else {
        if (r == 0.0) return M_PI / 2;  // x0 == a limit
        arg = (fp_.k1 + fp_.boundary_angle_term(r)) /
              (fp_.ecc * fp_.ecc * fp_.a * fp_.a * r);
    }
    return std::acos(std::clamp(arg, -1.0, 1.0));
}

double DistanceModel::polar_boundary_angle(double r) const {
    const double lo = (tag_ == ScenarioTag::Vertical) ? fp_.b : r_break_;
    const double slack = 1e-12 * std::max(1.0, r_hi_);
    if (!(r >= lo - slack) || !(r <= r_hi_ + slack))
        throw std::domain_error("polar_boundary_angle: r outside the arccos branch");
    if (tag_ == ScenarioTag::Vertical && fp_.ecc == 0.0)
        throw std::domain_error("polar_boundary_angle: circular footprint has no "
                                "arccos branch");

    double arg;
    if (tag_ == ScenarioTag::Vertical) {
        arg = std::sqrt(std::max(0.0, r * r - fp_.b * fp_.b)) / (fp_.ecc * r);
    } else if (r == 0.0) {
        return M_PI / 2;
    } else {
        arg = (fp_.k1 + fp_.boundary_angle_term(r)) /
              (fp_.ecc * fp_.ecc * fp_.a * fp_.a * r);
    }
    if (arg > 1.0 + kAcosClampWindow || arg < -1.0 - kAcosClampWindow)
        throw std::domain_error("polar_boundary_angle: arccos argument out of range");
    return std::acos(std::clamp(arg, -1.0, 1.0));
}

double DistanceModel::radial_pdf(double r) const {
    if (!(r >= r_lo_) || r > r_hi_) return 0.0;
    const double ab = fp_.a * fp_.b;
    if (r <= r_break_) {
        // Disc branch (absent for TiltedOutside where r_break_ == r_lo_;
        // the measure-zero endpoint value is continuous either way).
        if (tag_ == ScenarioTag::TiltedOutside) return 0.0;
        return 2.0 * r / ab;
    }
    const double phi = boundary_angle_unchecked(r);
    const double lobes = (tag_ == ScenarioTag::Vertical) ? 4.0 : 2.0;
    return lobes * r * phi / (M_PI * ab);
}

double DistanceModel::euclidean_pdf(double d) const {
    if (!(d >= bounds_.d_min) || d > bounds_.d_max) return 0.0;
    const double ab = fp_.a * fp_.b;
    if (d <= bounds_.d_break && tag_ != ScenarioTag::TiltedOutside)
        return 2.0 * d / ab;
    // d/r * f_r(r) with the 2r (or 4r) factor cancelled, so the x0 == a
    // case (r -> 0 at the branch start) stays finite.
    const double r = std::sqrt(std::max(0.0, d * d - H_ * H_));
    if (r > r_hi_) return 0.0;
    const double phi = boundary_angle_unchecked(r);
    const double lobes = (tag_ == ScenarioTag::Vertical) ? 4.0 : 2.0;
    return lobes * d * phi / (M_PI * ab);
}

double DistanceModel::radial_cdf(double r) const {
    std::call_once(cache_->radial_once, [this] {
        cache_->radial.build([this](double t) { return radial_pdf(t); },
                             r_lo_, r_break_, r_hi_);
    });
    return cache_->radial.query([this](double t) { return radial_pdf(t); }, r);
}

double DistanceModel::euclidean_cdf(double d) const {
    std::call_once(cache_->euclid_once, [this] {
        cache_->euclid.build([this](double t) { return euclidean_pdf(t); },
                             bounds_.d_min, bounds_.d_break, bounds_.d_max);
    });
    return cache_->euclid.query([this](double t) { return euclidean_pdf(t); }, d);
}

double DistanceModel::euclidean_cdf_closed_form(double d) const {
    const double ab = fp_.a * fp_.b;
    if (d <= bounds_.d_min) return 0.0;
    if (d >= bounds_.d_max) return 1.0;

    if (tag_ == ScenarioTag::Vertical) {
        const double r2 = d * d - H_ * H_;
        if (d <= bounds_.d_break) return r2 / ab;
        const double e = fp_.ecc;
        const double om = std::sqrt(1.0 - e * e);
        const double b2 = fp_.b * fp_.b;
        const double u = d * d - bounds_.d_break * bounds_.d_break;
        const double ac = std::acos(std::clamp(std::sqrt(u / (e * e * r2)), -1.0, 1.0));
        const double as = std::asin(std::clamp(std::sqrt((1.0 - e * e) * u) / (fp_.b * e),
                                               -1.0, 1.0));
        return (2.0 * r2 * om * ac + 2.0 * b2 * as) / (M_PI * ab * om);
    }

    // Tilted branches, transcribed as printed (cross-check only).
    const double r2 = d * d - H_ * H_;
    if (tag_ == ScenarioTag::TiltedInside && d <= bounds_.d_break) return r2 / ab;
    const double x = std::sqrt(r2);
    const double e2 = fp_.ecc * fp_.ecc;
    const double a = fp_.a;
    const double lam1 = fp_.boundary_angle_term(x);
    const double lam3 = std::sqrt(fp_.k3 + fp_.k4 * x * x - 2.0 * fp_.k1 * lam1);
    const double term1 =
        x * x * std::acos(std::clamp((fp_.k1 + lam1) / (e2 * a * a * x), -1.0, 1.0)) /
        (M_PI * ab);
    const double atan_arg =
        (-fp_.k1 * e2 * a * a * a * a - fp_.k4 * lam1) / (fp_.k9 * lam3);
    const double numer = fp_.k5 + fp_.k6 * x * x - 2.0 * fp_.k7 * lam1 +
                         fp_.k8 * lam3 * std::atan(atan_arg);
    const double denom = M_PI * ab * fp_.k10 * x *
                         std::sqrt(1.0 + (fp_.k1 - lam1) * (fp_.k1 - lam1) /
                                             (e2 * a * a * x));
    const double lam2 = term1 - numer / denom;
    return 0.5 + r2 / ab + lam2;
}

}  // namespace ellcov
