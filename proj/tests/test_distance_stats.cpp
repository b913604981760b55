#include <doctest.h>

#include <cmath>
#include <vector>

#include "ellcov/distance_stats.hpp"
#include "ellcov/montecarlo.hpp"
#include "ellcov/quadrature.hpp"

using namespace ellcov;

namespace {

double deg(double d) { return d * M_PI / 180.0; }

DistanceModel tilted20() { return DistanceModel::tilted({300.0, deg(30), deg(20)}); }
DistanceModel tilted40() { return DistanceModel::tilted({300.0, deg(30), deg(40)}); }

double integrate_radial(const DistanceModel& m) {
    const double brk = m.radial_break();
    return quad::integrate_split([&](double r) { return m.radial_pdf(r); }, m.radial_low(),
                                 m.radial_high(), std::span<const double>(&brk, 1),
                                 quad::Options{1e-10, 1e-14, 60});
}

double integrate_euclidean(const DistanceModel& m) {
    const double brk = m.bounds().d_break;
    return quad::integrate_split([&](double d) { return m.euclidean_pdf(d); },
                                 m.bounds().d_min, m.bounds().d_max,
                                 std::span<const double>(&brk, 1),
                                 quad::Options{1e-10, 1e-14, 60});
}

}  // namespace

TEST_SUITE("distance_stats") {

TEST_CASE("scenario tagging follows the center offset") {
    CHECK(tilted20().tag() == ScenarioTag::TiltedInside);
    CHECK(tilted40().tag() == ScenarioTag::TiltedOutside);
    CHECK(DistanceModel::vertical({180.0, 90.0, 300.0}).tag() == ScenarioTag::Vertical);
    CHECK(tilted20().warning().empty());
    CHECK(tilted20().disc_branch_exact());
}

TEST_CASE("polar boundary angle anchors") {
    const auto v = DistanceModel::vertical({180.0, 90.0, 300.0});
    CHECK(v.polar_boundary_angle(90.0) == doctest::Approx(M_PI / 2).epsilon(1e-12));
    CHECK(v.polar_boundary_angle(180.0) == doctest::Approx(0.0).epsilon(1e-9));

    const auto t = tilted20();
    CHECK(t.polar_boundary_angle(t.radial_high()) == doctest::Approx(0.0).epsilon(1e-6));
    // acos conditioning near +-1 limits the attainable accuracy to ~sqrt(eps).
    CHECK(std::abs(t.polar_boundary_angle(t.radial_break()) - M_PI) < 1e-5);

    CHECK_THROWS_AS((void)v.polar_boundary_angle(50.0), std::domain_error);
    CHECK_THROWS_AS((void)v.polar_boundary_angle(200.0), std::domain_error);
    const auto disc = DistanceModel::vertical({180.0, 180.0, 300.0});
    CHECK_THROWS_AS((void)disc.polar_boundary_angle(180.0), std::domain_error);
}

TEST_CASE("boundary angle lands on the Cartesian ellipse") {
    // Oracle: (r cos phi, r sin phi) must satisfy the ellipse equation.
    for (const auto& m : {tilted20(), tilted40()}) {
        const auto& fp = m.footprint();
        const double lo = m.radial_break(), hi = m.radial_high();
        for (int i = 1; i < 60; ++i) {
            const double r = lo + (hi - lo) * i / 60.0;
            const double phi = m.polar_boundary_angle(r);
            const double x = r * std::cos(phi), y = r * std::sin(phi);
            const double resid = fp.b * fp.b * (x - fp.x0) * (x - fp.x0) +
                                 fp.a * fp.a * y * y - fp.a * fp.a * fp.b * fp.b;
            CHECK(std::abs(resid) <= 1e-9 * fp.a * fp.a * fp.b * fp.b);
        }
    }
}

TEST_CASE("radial pdf branch values") {
    const auto disc = DistanceModel::vertical({150.0, 150.0, 300.0});
    for (double r : {10.0, 75.0, 149.0})
        CHECK(disc.radial_pdf(r) == doctest::Approx(2.0 * r / (150.0 * 150.0)).epsilon(1e-14));
    CHECK(disc.radial_pdf(151.0) == 0.0);

    const auto v = DistanceModel::vertical({2.0, 1.0, 3.0});
    CHECK(v.radial_pdf(0.5) == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(v.radial_pdf(-0.1) == 0.0);
    CHECK(v.radial_pdf(2.5) == 0.0);

    // Outside scenario: zero below the near edge.
    const auto t = tilted40();
    CHECK(t.radial_pdf(t.radial_low() * 0.999) == 0.0);
    CHECK(t.radial_pdf(t.radial_low()) == 0.0);
    CHECK(t.radial_pdf(t.radial_high()) == doctest::Approx(0.0).epsilon(1e-9));
}

TEST_CASE("radial pdf matches a dense Monte-Carlo histogram") {
    const auto m = tilted20();
    const std::size_t n = 10'000'000;
    // Radial histogram via the slant-distance transform of the sampler.
    const auto emp = mc::sample_distance({2024, n, m, {}});
    auto radial_mass = [&](double r_lo, double r_hi) {
        const double h = m.altitude();
        return emp.cdf(std::hypot(r_hi, h)) - emp.cdf(std::hypot(r_lo, h));
    };
    for (double r : {150.0, 250.0, 320.0}) {
        const double density = radial_mass(r - 1.0, r + 1.0) / 2.0;
        CHECK(density == doctest::Approx(m.radial_pdf(r)).epsilon(0.02));
    }
}

TEST_CASE("euclidean pdf matches a dense Monte-Carlo histogram (outside case)") {
    const auto m = tilted40();
    const std::size_t n = 10'000'000;
    const auto emp = mc::sample_distance({4051, n, m, {}});
    for (double d : {450.0, 550.0, 700.0}) {
        const double density = (emp.cdf(d + 1.0) - emp.cdf(d - 1.0)) / 2.0;
        CHECK(density == doctest::Approx(m.euclidean_pdf(d)).epsilon(0.02));
    }
}

TEST_CASE("euclidean pdf anchors") {
    const auto v = DistanceModel::vertical({180.0, 90.0, 300.0});
    CHECK(v.euclidean_pdf(305.0) == doctest::Approx(2.0 * 305.0 / 16200.0).epsilon(1e-13));
    CHECK(v.euclidean_pdf(v.bounds().d_max) == doctest::Approx(0.0).epsilon(1e-9));
    CHECK(v.euclidean_pdf(299.0) == 0.0);
    CHECK(v.euclidean_pdf(351.0) == 0.0);

    // Transform consistency with the radial density.
    const auto t = tilted20();
    for (double d : {310.0, 360.0, 420.0, 460.0}) {
        const double r = std::sqrt(d * d - 300.0 * 300.0);
        CHECK(t.euclidean_pdf(d) ==
              doctest::Approx(d / r * t.radial_pdf(r)).epsilon(1e-12));
    }
}

TEST_CASE("euclidean cdf anchors") {
    const auto v = DistanceModel::vertical({180.0, 90.0, 300.0});
    CHECK(v.euclidean_cdf(v.bounds().d_break) == doctest::Approx(0.5).epsilon(1e-9));
    CHECK(v.euclidean_cdf(v.bounds().d_max) == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(v.euclidean_cdf(200.0) == 0.0);
    CHECK(v.euclidean_cdf(1000.0) == doctest::Approx(1.0).epsilon(1e-8));

    for (const auto& m : {tilted20(), tilted40()})
        CHECK(m.euclidean_cdf(m.bounds().d_max) == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("radial cdf anchors") {
    const auto disc = DistanceModel::vertical({150.0, 150.0, 300.0});
    CHECK(disc.radial_cdf(75.0) == doctest::Approx(0.25).epsilon(1e-10));

    const auto v = DistanceModel::vertical({2.0, 1.0, 3.0});
    CHECK(v.radial_cdf(1.0) == doctest::Approx(0.5).epsilon(1e-10));

    const auto t = tilted40();
    CHECK(t.radial_cdf(t.radial_low()) == 0.0);
}

TEST_CASE("normalization across scenario grid") {
    std::vector<DistanceModel> models;
    for (double th : {20.0, 30.0, 40.0})
        for (double ps : {0.0, 10.0, 25.0, 40.0, 48.0}) {
            if (th + ps >= 89.0) continue;
            models.push_back(DistanceModel::tilted({300.0, deg(th), deg(ps)}));
        }
    models.push_back(DistanceModel::vertical({180.0, 90.0, 300.0}));
    models.push_back(DistanceModel::vertical({180.0, 180.0, 300.0}));
    models.push_back(DistanceModel::vertical({400.0, 100.0, 120.0}));
    for (const auto& m : models) {
        CHECK(integrate_radial(m) == doctest::Approx(1.0).epsilon(1e-7));
        CHECK(integrate_euclidean(m) == doctest::Approx(1.0).epsilon(1e-7));
    }
}

TEST_CASE("euclidean and radial cdf are the same law") {
    for (const auto& m :
         {tilted20(), tilted40(), DistanceModel::vertical({180.0, 90.0, 300.0})}) {
        const auto& sb = m.bounds();
        for (int i = 0; i <= 120; ++i) {
            const double d = sb.d_min + (sb.d_max - sb.d_min) * i / 120.0;
            const double r = std::sqrt(std::max(0.0, d * d - m.altitude() * m.altitude()));
            CHECK(m.euclidean_cdf(d) == doctest::Approx(m.radial_cdf(r)).epsilon(1e-9));
        }
    }
}

TEST_CASE("branch-point continuity") {
    for (const auto& m : {tilted20(), DistanceModel::vertical({180.0, 90.0, 300.0})}) {
        const double brk = m.radial_break();
        const double delta = brk * 1e-13;
        const double below = m.radial_pdf(brk - delta);
        const double above = m.radial_pdf(brk + delta);
        CHECK(above == doctest::Approx(below).epsilon(1e-6));
        // The branch point itself belongs to the disc branch.
        CHECK(m.radial_pdf(brk) ==
              doctest::Approx(2.0 * brk / (m.footprint().a * m.footprint().b))
                  .epsilon(1e-14));
    }
}

TEST_CASE("circular disc limit is exact") {
    const auto m = DistanceModel::vertical({180.0, 180.0, 300.0});
    const double R = 180.0, H = 300.0;
    const auto& sb = m.bounds();
    for (int i = 0; i <= 1000; ++i) {
        const double d = sb.d_min + (sb.d_max - sb.d_min) * i / 1000.0;
        CHECK(std::abs(m.euclidean_pdf(d) - 2.0 * d / (R * R)) <= 1e-9);
        CHECK(std::abs(m.euclidean_cdf(d) - (d * d - H * H) / (R * R)) <= 1e-9);
    }
}

TEST_CASE("vertical closed-form cdf agrees with quadrature") {
    for (const auto& m : {DistanceModel::vertical({180.0, 90.0, 300.0}),
                          DistanceModel::vertical({205.2, 188.5, 300.0})}) {
        const auto& sb = m.bounds();
        for (int i = 0; i <= 500; ++i) {
            const double d = sb.d_min + (sb.d_max - sb.d_min) * i / 500.0;
            CHECK(m.euclidean_cdf_closed_form(d) ==
                  doctest::Approx(m.euclidean_cdf(d)).epsilon(1e-6));
        }
    }
}

TEST_CASE("empirical cdf cross-check at a fixed distance") {
    const auto m = tilted20();
    const std::size_t n = 10'000'000;
    const auto emp = mc::sample_distance({77, n, m, {}});
    const double bound = 3.0 * mc::ks_critical_value(n);
    CHECK(std::abs(emp.cdf(400.0) - m.euclidean_cdf(400.0)) < bound);
}

TEST_CASE("kolmogorov-smirnov oracle (reduced n)") {
    const std::size_t n = 200'000;
    const double bound = mc::ks_critical_value(n) * 1.5;
    for (const auto& m : {tilted20(), DistanceModel::vertical({180.0, 90.0, 300.0})}) {
        const auto emp = mc::sample_distance({3, n, m, {}});
        const double ks = mc::ks_distance(emp, [&](double d) { return m.euclidean_cdf(d); });
        CHECK(ks < bound);
    }
}

TEST_CASE("hand-built footprint can violate the disc-branch assumption") {
    // x0 below ecc^2 a: flagged, not silently accepted.
    const auto fp = EllipseFootprint::create(200.0, 80.0, 20.0);
    CHECK(20.0 < fp.ecc * fp.ecc * fp.a);
    const auto m = DistanceModel::from_footprint(fp, 300.0);
    CHECK_FALSE(m.disc_branch_exact());
    CHECK_FALSE(m.warning().empty());

    // Cone-derived footprints always satisfy it (x0/(ecc a) = cos psi/sin theta > 1).
    for (double th : {20.0, 30.0, 40.0})
        for (double ps : {5.0, 20.0, 40.0}) {
            if (th + ps >= 89.0) continue;
            const auto mt = DistanceModel::tilted({300.0, deg(th), deg(ps)});
            CHECK(mt.disc_branch_exact());
        }
}

}  // TEST_SUITE
