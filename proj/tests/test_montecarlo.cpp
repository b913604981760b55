#include <doctest.h>

#include <cmath>
#include <sstream>
#include <vector>

#include "ellcov/montecarlo.hpp"

using namespace ellcov;
using namespace ellcov::mc;

namespace {

double deg(double d) { return d * M_PI / 180.0; }

}  // namespace

TEST_SUITE("montecarlo") {

TEST_CASE("philox known-answer vectors") {
    using C = Philox4x32::Counter;
    using K = Philox4x32::Key;
    CHECK(Philox4x32::block(K{0, 0}, C{0, 0, 0, 0}) ==
          C{0x6627e8d5u, 0xe169c58du, 0xbc57ac4cu, 0x9b00dbd8u});
    CHECK(Philox4x32::block(K{0xffffffffu, 0xffffffffu},
                            C{0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu}) ==
          C{0x408f276du, 0x41c83b0eu, 0xa20bc7c6u, 0x6d5451fdu});
    CHECK(Philox4x32::block(K{0xa4093822u, 0x299f31d0u},
                            C{0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u}) ==
          C{0xd16cfe09u, 0x94fdccebu, 0x5001e420u, 0x24126ea1u});
}

TEST_CASE("streams are independent of draw history") {
    CounterRng a(42, 7);
    (void)a.next_u64();
    (void)a.normal();
    CounterRng b(42, 8);
    CounterRng c(42, 8);
    for (int i = 0; i < 100; ++i) CHECK(b.next_u32() == c.next_u32());
    CounterRng d(43, 8);
    bool all_equal = true;
    CounterRng e(42, 8);
    for (int i = 0; i < 8; ++i) all_equal = all_equal && (d.next_u32() == e.next_u32());
    CHECK_FALSE(all_equal);
}

TEST_CASE("uniform01 range") {
    CounterRng rng(11, 0);
    for (int i = 0; i < 10'000; ++i) {
        const double u = rng.uniform01();
        CHECK(u >= 0.0);
        CHECK(u < 1.0);
    }
}

TEST_CASE("reproducibility is bit-exact") {
    const DistanceModel m = DistanceModel::tilted({300.0, deg(30), deg(20)});
    const SimConfig cfg{123, 50'000, m, {}};
    const auto e1 = sample_distance(cfg);
    const auto e2 = sample_distance(cfg);
    CHECK(e1.samples() == e2.samples());

    const FadingChannel ch{4.0 / 3.0, 2.5, 95.0};
    const SimConfig scfg{123, 50'000, m, ch};
    CHECK(sample_snr(scfg).samples() == sample_snr(scfg).samples());
}

TEST_CASE("ellipse samples are uniform") {
    const EllipseFootprint fp = footprint_from_tilt({300.0, deg(30), deg(20)});
    const std::size_t n = 1'000'000;
    double sx = 0.0, sy = 0.0;
    std::size_t inside_inscribed = 0;
    for (std::size_t i = 0; i < n; ++i) {
        CounterRng rng(31337, i);
        const auto p = sample_point_in_ellipse(fp, rng);
        // Every draw satisfies the ellipse inequality.
        const double q = fp.b * fp.b * (p.x - fp.x0) * (p.x - fp.x0) +
                         fp.a * fp.a * p.y * p.y;
        CHECK(q <= fp.a * fp.a * fp.b * fp.b * (1.0 + 1e-12));
        sx += p.x;
        sy += p.y;
        const double cx = p.x - fp.x0;
        if (cx * cx + p.y * p.y <= fp.b * fp.b) ++inside_inscribed;
    }
    const double nn = static_cast<double>(n);
    // CLT bounds: sd of x is a/2, of y is b/2 over the ellipse.
    CHECK(std::abs(sx / nn - fp.x0) <= 4.0 * (fp.a / 2.0) / std::sqrt(nn));
    CHECK(std::abs(sy / nn) <= 4.0 * (fp.b / 2.0) / std::sqrt(nn));
    // Inscribed-circle mass is the area ratio b/a.
    const double frac = static_cast<double>(inside_inscribed) / nn;
    const double p0 = fp.b / fp.a;
    CHECK(std::abs(frac - p0) <= 4.0 * std::sqrt(p0 * (1.0 - p0) / nn));
}

TEST_CASE("rejection sampler agrees with the disc-stretch map") {
    const DistanceModel m = DistanceModel::vertical({180.0, 90.0, 300.0});
    const std::size_t n = 200'000;
    const auto a = sample_distance({5, n, m, {}, EllipseSampler::DiscStretch});
    const auto b = sample_distance({5, n, m, {}, EllipseSampler::Rejection});
    const double bound = ks_critical_value(n) * 1.5;
    CHECK(ks_distance(a, [&](double d) { return m.euclidean_cdf(d); }) < bound);
    CHECK(ks_distance(b, [&](double d) { return m.euclidean_cdf(d); }) < bound);
}

TEST_CASE("gamma variates down to shape 0.5") {
    const std::size_t n = 400'000;
    std::uint64_t seed = 99;
    for (double k : {0.5, 0.7, 1.0, 4.0 / 3.0, 4.0, 11.0}) {
        double sum = 0.0, sumsq = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            CounterRng rng(seed, i);
            const double g = gamma_variate(rng, k);
            CHECK(g >= 0.0);
            sum += g;
            sumsq += g * g;
        }
        ++seed;
        const double nn = static_cast<double>(n);
        const double mean = sum / nn;
        const double var = sumsq / nn - mean * mean;
        CHECK(std::abs(mean - k) <= 5.0 * std::sqrt(k / nn));
        CHECK(std::abs(var - k) <= 5.0 * std::sqrt((2.0 * k * k + 6.0 * k) / nn));
    }
}

TEST_CASE("conditional snr draws have the right mean and law") {
    const FadingChannel ch{1.0, 2.5, 95.0};
    const double d = 300.0;
    const double mean_ref = ch.gamma_bar() / std::pow(d, ch.nu);
    const std::size_t n = 400'000;
    std::vector<double> draws(n);
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        CounterRng rng(2718, i);
        draws[i] = nakagami_snr_draw(rng, ch, d);
        sum += draws[i];
    }
    const double nn = static_cast<double>(n);
    // Gamma(m, mean/m): sd = mean/sqrt(m); here m = 1.
    CHECK(std::abs(sum / nn - mean_ref) <= 4.0 * mean_ref / std::sqrt(nn));

    // m = 1 is exponential: KS against 1 - exp(-g/mean).
    const EmpiricalDistribution emp(std::move(draws));
    const double ks = ks_distance(
        emp, [&](double g) { return 1.0 - std::exp(-g / mean_ref); });
    CHECK(ks < ks_critical_value(n) * 1.5);
}

TEST_CASE("ks statistic calibration") {
    // Exactly placed quantiles: the statistic collapses to 1/(2n).
    const std::size_t n = 1000;
    std::vector<double> exact(n);
    for (std::size_t i = 0; i < n; ++i)
        exact[i] = (static_cast<double>(i) + 0.5) / static_cast<double>(n);
    const EmpiricalDistribution emp(std::move(exact));
    CHECK(ks_distance(emp, [](double x) { return x; }) <=
          1.0 / static_cast<double>(n));

    // Uniform variates against the identity CDF stay under the 1% critical
    // value (fixed seed).
    const std::size_t nu = 100'000;
    std::vector<double> u(nu);
    for (std::size_t i = 0; i < nu; ++i) {
        CounterRng rng(4242, i);
        u[i] = rng.uniform01();
    }
    const EmpiricalDistribution ue(std::move(u));
    CHECK(ks_distance(ue, [](double x) { return std::clamp(x, 0.0, 1.0); }) <
          ks_critical_value(nu));
}

TEST_CASE("empirical cdf is a step function with the usual conventions") {
    const EmpiricalDistribution emp(std::vector<double>{3.0, 1.0, 2.0, 2.0});
    CHECK(emp.cdf(0.5) == 0.0);
    CHECK(emp.cdf(1.0) == doctest::Approx(0.25));
    CHECK(emp.cdf(2.0) == doctest::Approx(0.75));
    CHECK(emp.cdf(2.5) == doctest::Approx(0.75));
    CHECK(emp.cdf(10.0) == 1.0);
    CHECK(emp.min() == 1.0);
    CHECK(emp.max() == 3.0);
}

TEST_CASE("sample export format") {
    const EmpiricalDistribution emp(std::vector<double>{2.0, 1.5});
    std::ostringstream os;
    write_samples_csv(os, emp, "distance_m");
    CHECK(os.str() == "distance_m\n1.5\n2\n");
}

TEST_CASE("config validation") {
    const DistanceModel m = DistanceModel::vertical({180.0, 90.0, 300.0});
    CHECK_THROWS_AS((void)sample_distance({1, 0, m, {}}), std::invalid_argument);
    CHECK_THROWS_AS((void)sample_snr({1, 10, m, {}}), std::invalid_argument);
    CHECK_THROWS_AS((void)outage_monte_carlo({1, 10, m, {}}, 1.0), std::invalid_argument);
}

}  // TEST_SUITE
