#include <doctest.h>

#include <cmath>

#include "ellcov/distance_stats.hpp"
#include "ellcov/montecarlo.hpp"
#include "ellcov/quadrature.hpp"
#include "ellcov/rng.hpp"
#include "ellcov/snr_outage.hpp"

using namespace ellcov;

namespace {

// Deterministic scenario generator over the valid parameter space.
struct ScenarioGen {
    mc::CounterRng rng;

    explicit ScenarioGen(std::uint64_t seed) : rng(seed, 0) {}

    TiltedScenario tilted() {
        const double H = 50.0 + 950.0 * rng.uniform01();
        const double theta = (2.0 + 60.0 * rng.uniform01()) * M_PI / 180.0;
        // Stay clear of the degeneracy line psi + theta = pi/2.
        const double max_psi = M_PI / 2 - theta - 2.0 * M_PI / 180.0;
        const double psi = std::max(0.0, max_psi * rng.uniform01());
        return {H, theta, psi};
    }

    VerticalScenario vertical() {
        const double a = 20.0 + 600.0 * rng.uniform01();
        const double b = a * (0.15 + 0.85 * rng.uniform01());
        const double H = 50.0 + 950.0 * rng.uniform01();
        return {a, b, H};
    }
};

double radial_mass(const DistanceModel& m) {
    const double brk = m.radial_break();
    return quad::integrate_split([&](double r) { return m.radial_pdf(r); }, m.radial_low(),
                                 m.radial_high(), std::span<const double>(&brk, 1),
                                 quad::Options{1e-10, 1e-14, 60});
}

void check_distance_invariants(const DistanceModel& m, mc::CounterRng& rng) {
    const auto& sb = m.bounds();
    CAPTURE(m.footprint().a);
    CAPTURE(m.footprint().b);
    CAPTURE(m.footprint().x0);
    CAPTURE(m.altitude());

    CHECK(radial_mass(m) == doctest::Approx(1.0).epsilon(1e-7));
    CHECK(m.euclidean_cdf(sb.d_max) == doctest::Approx(1.0).epsilon(1e-8));

    // Zero density outside the support, nonnegative inside.
    CHECK(m.euclidean_pdf(sb.d_min * (1.0 - 1e-6)) == 0.0);
    CHECK(m.euclidean_pdf(sb.d_max * (1.0 + 1e-6)) == 0.0);

    double prev_d = sb.d_min, prev_f = 0.0;
    for (int i = 0; i < 16; ++i) {
        const double d = sb.d_min + (sb.d_max - sb.d_min) * rng.uniform01();
        CHECK(m.euclidean_pdf(d) >= 0.0);
        const double f = m.euclidean_cdf(d);
        CHECK(f >= -1e-15);
        CHECK(f <= 1.0 + 1e-9);
        if (d >= prev_d)
            CHECK(f >= prev_f - 1e-12);
        else
            CHECK(f <= prev_f + 1e-12);
        prev_d = d;
        prev_f = f;

        const double r = std::sqrt(std::max(0.0, d * d - m.altitude() * m.altitude()));
        CHECK(m.euclidean_cdf(d) == doctest::Approx(m.radial_cdf(r)).epsilon(1e-9));
    }
}

}  // namespace

TEST_SUITE("properties") {

TEST_CASE("random tilted scenarios satisfy the distance-law invariants") {
    ScenarioGen gen(0xE11C0Bu);
    mc::CounterRng probe(0xE11C0Bu, 1);
    int inside = 0, outside = 0;
    for (int k = 0; k < 40; ++k) {
        const TiltedScenario s = gen.tilted();
        const auto m = DistanceModel::tilted(s);
        (m.tag() == ScenarioTag::TiltedOutside ? outside : inside) += 1;
        check_distance_invariants(m, probe);

        // Placement rule: the offset side of the tag matches psi vs theta.
        CHECK((m.footprint().x0 <= m.footprint().a) == (s.tilt_rad <= s.semi_apex_rad));
        CHECK(m.disc_branch_exact());
    }
    // The generator must have exercised both tilted branch structures.
    CHECK(inside > 0);
    CHECK(outside > 0);
}

TEST_CASE("random vertical scenarios satisfy the distance-law invariants") {
    ScenarioGen gen(0xBEEFu);
    mc::CounterRng probe(0xBEEFu, 1);
    for (int k = 0; k < 30; ++k) {
        const auto m = DistanceModel::vertical(gen.vertical());
        check_distance_invariants(m, probe);
    }
}

TEST_CASE("equivalent altitude grows with tilt and maps back to the footprint") {
    for (double th_deg : {15.0, 30.0, 42.0}) {
        double prev = 0.0;
        for (double ps_deg = 0.0; ps_deg + th_deg < 88.0; ps_deg += 4.0) {
            const TiltedScenario s{300.0, th_deg * M_PI / 180.0, ps_deg * M_PI / 180.0};
            const double hv = equivalent_vertical_altitude(s);
            CHECK(hv > prev);  // strictly increasing in psi
            prev = hv;
            // The nadir beam at hv with the same semi-apex angle spans the
            // tilted footprint's major axis.
            const auto fp = footprint_from_tilt(s);
            CHECK(hv * std::tan(s.semi_apex_rad) == doctest::Approx(fp.a).epsilon(1e-12));
        }
    }
}

TEST_CASE("random scenarios keep the snr cdf monotone and normalized") {
    ScenarioGen gen(0xCAFEu);
    for (int k = 0; k < 6; ++k) {
        const auto m = (k % 2 == 0) ? DistanceModel::tilted(gen.tilted())
                                    : DistanceModel::vertical(gen.vertical());
        mc::CounterRng r(0xCAFEu, 100 + static_cast<std::uint64_t>(k));
        const FadingChannel ch{0.5 + 4.0 * r.uniform01(), 2.0 + 1.5 * r.uniform01(),
                               80.0 + 25.0 * r.uniform01()};
        double prev = -1.0;
        for (int i = 0; i <= 40; ++i) {
            const double g = std::pow(10.0, (-5.0 + 40.0 * i / 40.0) / 10.0);
            const double f = snr_cdf(ch, m, g);
            CHECK(f >= prev - 1e-12);
            CHECK(f >= 0.0);
            CHECK(f <= 1.0 + 1e-9);
            prev = f;
        }
        CHECK(snr_cdf(ch, m, ch.gamma_bar() * 1e6) == doctest::Approx(1.0).epsilon(1e-9));
    }
}

}  // TEST_SUITE
