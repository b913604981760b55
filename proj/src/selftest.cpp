#include "ellcov/selftest.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "ellcov/distance_stats.hpp"
#include "ellcov/geometry.hpp"
#include "ellcov/montecarlo.hpp"
#include "ellcov/quadrature.hpp"
#include "ellcov/rng.hpp"
#include "ellcov/snr_outage.hpp"
#include "ellcov/special_functions.hpp"
#include "ellcov/text.hpp"

namespace ellcov::selftest {

namespace {

using text::format_double;

double deg(double degrees) { return degrees * M_PI / 180.0; }
double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

struct Harness {
    const Options& opts;
    std::ostream& out;
    std::ostream& timing;
    Report report;

    void check(const std::string& name, const std::function<std::string()>& body) {
        const auto t0 = std::chrono::steady_clock::now();
        std::string detail;
        bool passed = true;
        try {
            detail = body();
        } catch (const std::exception& e) {
            passed = false;
            detail = std::string("exception: ") + e.what();
        }
        if (!detail.empty() && detail.rfind("FAIL", 0) == 0) {
            passed = false;
            detail = detail.substr(4);
            if (!detail.empty() && detail.front() == ' ') detail.erase(0, 1);
        }
        const auto t1 = std::chrono::steady_clock::now();
        const double secs = std::chrono::duration<double>(t1 - t0).count();
        out << (passed ? "[PASS] " : "[FAIL] ") << name;
        if (!detail.empty()) out << ": " << detail;
        out << '\n';
        timing << "  " << name << ": " << format_double(secs, 3) << " s\n";
        ++report.checks;
        if (!passed) ++report.failures;
    }
};

std::string fail(const std::string& why) { return "FAIL " + why; }

// ---------------------------------------------------------------------------
// Check bodies
// ---------------------------------------------------------------------------

std::string geometry_anchors() {
    const auto fp20 = footprint_from_tilt({300.0, deg(30), deg(20)});
    const auto fp40 = footprint_from_tilt({300.0, deg(30), deg(40)});
    if (std::abs(fp20.a - 205.2) > 0.1 || std::abs(fp20.b - 188.5) > 0.1)
        return fail("psi=20 axes off: a=" + format_double(fp20.a) +
                    " b=" + format_double(fp20.b));
    if (std::abs(fp40.a - 385.6) > 0.1 || std::abs(fp40.b - 258.5) > 0.1)
        return fail("psi=40 axes off: a=" + format_double(fp40.a) +
                    " b=" + format_double(fp40.b));
    const double hv20 = equivalent_vertical_altitude({300.0, deg(30), deg(20)});
    const double hv40 = equivalent_vertical_altitude({300.0, deg(30), deg(40)});
    if (std::abs(hv20 - 355.4) > 0.5 || std::abs(hv40 - 668.0) > 1.0)
        return fail("equivalent altitudes off: " + format_double(hv20) + ", " +
                    format_double(hv40));
    return "a,b anchors and equivalent altitudes " + format_double(hv20, 4) + "/" +
           format_double(hv40, 4) + " m";
}

std::string incomplete_gamma_vs_quadrature() {
    // Brute-force integral of the defining integrand, independent of the
    // series/continued-fraction evaluation.
    const quad::Options tight{1e-13, 1e-16, 60};
    struct Case {
        double s, x, hi;
    };
    const Case cases[] = {{2.5, 1.3, 60.0}, {0.5, 2.0, 60.0}, {4.0, 4.0, 80.0},
                          {10.0, 12.0, 120.0}, {1.0, 0.7, 60.0}};
    double worst = 0.0;
    for (const auto& c : cases) {
        const double oracle = quad::integrate(
            [&](double t) { return std::pow(t, c.s - 1.0) * std::exp(-t); }, c.x, c.hi,
            tight);
        const double got = sf::upper_incomplete_gamma(c.s, c.x);
        worst = std::max(worst, std::abs(got - oracle) / oracle);
    }
    if (worst > 1e-10)
        return fail("worst relative deviation " + format_double(worst, 3));
    return "worst relative deviation " + format_double(worst, 3);
}

std::vector<DistanceModel> normalization_models(bool quick) {
    std::vector<DistanceModel> models;
    const double thetas[] = {deg(20), deg(30), deg(40)};
    const double psis[] = {0.0, deg(10), deg(25), deg(40), deg(55)};
    for (double th : thetas)
        for (double ps : psis) {
            if (ps + th >= deg(89.5)) continue;
            models.push_back(DistanceModel::tilted({300.0, th, ps}));
            if (quick && models.size() >= 6) return models;
        }
    models.push_back(DistanceModel::vertical({180.0, 90.0, 300.0}));
    models.push_back(DistanceModel::vertical({180.0, 180.0, 300.0}));
    models.push_back(DistanceModel::vertical({205.2, 188.5, 300.0}));
    models.push_back(DistanceModel::vertical({400.0, 100.0, 120.0}));
    return models;
}

std::string radial_normalization(bool quick, bool inject_fault) {
    const double tol = inject_fault ? 0.0 : 1e-7;
    const quad::Options opts{1e-10, 1e-14, 60};
    double worst = 0.0;
    const auto models = normalization_models(quick);
    for (const auto& m : models) {
        const double brk = m.radial_break();
        const double mass = quad::integrate_split(
            [&](double r) { return m.radial_pdf(r); }, m.radial_low(), m.radial_high(),
            std::span<const double>(&brk, 1), opts);
        worst = std::max(worst, std::abs(mass - 1.0));
    }
    if (worst > tol)
        return fail("worst |integral-1| = " + format_double(worst, 3) + " over " +
                    std::to_string(models.size()) + " configs (tol " +
                    format_double(tol, 3) + ")");
    return "worst |integral-1| = " + format_double(worst, 3) + " over " +
           std::to_string(models.size()) + " configs";
}

std::string branch_continuity() {
    const DistanceModel cases[] = {
        DistanceModel::tilted({300.0, deg(30), deg(20)}),
        DistanceModel::vertical({180.0, 90.0, 300.0}),
    };
    double worst = 0.0;
    for (const auto& m : cases) {
        const double brk = m.radial_break();
        const double delta = std::max(brk, 1.0) * 1e-13;
        const double below = m.radial_pdf(brk - delta);
        const double above = m.radial_pdf(brk + delta);
        worst = std::max(worst, std::abs(above - below) / m.radial_pdf(brk));
    }
    if (worst > 1e-6) return fail("worst relative jump " + format_double(worst, 3));
    return "worst relative jump " + format_double(worst, 3);
}

std::string circle_limit() {
    const DistanceModel m = DistanceModel::vertical({180.0, 180.0, 300.0});
    const double R = 180.0, H = 300.0;
    const double d_max = std::sqrt(R * R + H * H);
    double worst = 0.0;
    for (int i = 0; i <= 1000; ++i) {
        const double d = H + (d_max - H) * i / 1000.0;
        const double pdf_ref = 2.0 * d / (R * R);
        const double cdf_ref = (d * d - H * H) / (R * R);
        worst = std::max(worst, std::abs(m.euclidean_pdf(d) - pdf_ref));
        worst = std::max(worst, std::abs(m.euclidean_cdf(d) - cdf_ref));
    }
    if (worst > 1e-9) return fail("worst deviation " + format_double(worst, 3));
    return "worst deviation from disc law " + format_double(worst, 3);
}

std::string cdf_consistency() {
    const DistanceModel cases[] = {
        DistanceModel::tilted({300.0, deg(30), deg(20)}),
        DistanceModel::tilted({300.0, deg(30), deg(40)}),
        DistanceModel::vertical({180.0, 90.0, 300.0}),
    };
    double worst = 0.0;
    for (const auto& m : cases) {
        const auto& sb = m.bounds();
        for (int i = 1; i < 200; ++i) {
            const double d = sb.d_min + (sb.d_max - sb.d_min) * i / 200.0;
            const double r = std::sqrt(d * d - m.altitude() * m.altitude());
            worst = std::max(worst, std::abs(m.euclidean_cdf(d) - m.radial_cdf(r)));
        }
    }
    if (worst > 1e-9) return fail("worst |F_d - F_r| = " + format_double(worst, 3));
    return "worst |F_d - F_r| = " + format_double(worst, 3);
}

std::string vertical_cdf_closed_form() {
    const DistanceModel cases[] = {
        DistanceModel::vertical({180.0, 90.0, 300.0}),
        DistanceModel::vertical({205.2, 188.5, 300.0}),
    };
    double worst = 0.0;
    for (const auto& m : cases) {
        const auto& sb = m.bounds();
        for (int i = 0; i <= 500; ++i) {
            const double d = sb.d_min + (sb.d_max - sb.d_min) * i / 500.0;
            worst = std::max(worst,
                             std::abs(m.euclidean_cdf(d) - m.euclidean_cdf_closed_form(d)));
        }
    }
    if (worst > 1e-6) return fail("worst deviation " + format_double(worst, 3));
    return "worst deviation " + format_double(worst, 3);
}

std::string tilted_cdf_closed_form_log() {
    // Cross-check only: the printed tilted closed form is a known-suspect
    // transcription; deviations are reported, never failed on.
    const DistanceModel m = DistanceModel::tilted({300.0, deg(30), deg(20)});
    const auto& sb = m.bounds();
    double worst = 0.0;
    bool finite = true;
    for (int i = 0; i <= 200; ++i) {
        const double d = sb.d_min + (sb.d_max - sb.d_min) * i / 200.0;
        const double cf = m.euclidean_cdf_closed_form(d);
        if (!std::isfinite(cf)) {
            finite = false;
            continue;
        }
        worst = std::max(worst, std::abs(m.euclidean_cdf(d) - cf));
    }
    std::string note = "max |quadrature - printed form| = " + format_double(worst, 3);
    if (!finite) note += " (non-finite points skipped)";
    if (worst > 1e-4) note += "; transcription issue logged, quadrature path is authoritative";
    return note;
}

std::string distance_ks(bool quick) {
    const std::size_t n = quick ? 100'000 : 1'000'000;
    const double bound = mc::ks_critical_value(n) * 1.5;
    std::vector<DistanceModel> models;
    for (double psi : {10.0, 20.0, 30.0, 40.0})
        models.push_back(DistanceModel::tilted({300.0, deg(30), deg(psi)}));
    models.push_back(DistanceModel::vertical({180.0, 90.0, 300.0}));
    models.push_back(DistanceModel::vertical({180.0, 180.0, 300.0}));

    double worst = 0.0;
    std::uint64_t seed = 42;
    for (const auto& m : models) {
        const auto emp = mc::sample_distance({seed++, n, m, {}, mc::EllipseSampler::DiscStretch});
        worst = std::max(worst,
                         mc::ks_distance(emp, [&](double d) { return m.euclidean_cdf(d); }));
    }
    // The rejection sampler is the cross-check for the disc-stretch map.
    const auto emp_rej = mc::sample_distance(
        {seed, n, models[1], {}, mc::EllipseSampler::Rejection});
    worst = std::max(worst, mc::ks_distance(emp_rej, [&](double d) {
        return models[1].euclidean_cdf(d);
    }));

    if (worst > bound)
        return fail("worst KS " + format_double(worst, 3) + " > bound " +
                    format_double(bound, 3) + " at n=" + std::to_string(n));
    return "worst KS " + format_double(worst, 3) + " < bound " + format_double(bound, 3) +
           " (n=" + std::to_string(n) + ")";
}

std::string uniformity_chi2(bool quick) {
    const std::size_t n = quick ? 200'000 : 1'000'000;
    const EllipseFootprint fp = footprint_from_tilt({300.0, deg(30), deg(20)});
    // 20x20 equal-area cells in the stretched disc coordinates.
    std::vector<std::size_t> counts(400, 0);
    for (std::size_t i = 0; i < n; ++i) {
        mc::CounterRng rng(977, i);
        const auto p = mc::sample_point_in_ellipse(fp, rng);
        const double u = (p.x - fp.x0) / fp.a;
        const double v = p.y / fp.b;
        const double rho2 = u * u + v * v;
        const int ir = std::min(19, static_cast<int>(rho2 * 20.0));
        const double ang = std::atan2(v, u) + M_PI;
        const int ia = std::min(19, static_cast<int>(ang / (2.0 * M_PI) * 20.0));
        ++counts[static_cast<std::size_t>(ir) * 20 + static_cast<std::size_t>(ia)];
    }
    const double expect = static_cast<double>(n) / 400.0;
    double chi2 = 0.0;
    for (std::size_t c : counts) {
        const double diff = static_cast<double>(c) - expect;
        chi2 += diff * diff / expect;
    }
    const double crit = 492.0224634558814;  // chi-square dof=399, upper 0.1%
    if (chi2 > crit)
        return fail("chi2 " + format_double(chi2, 6) + " > " + format_double(crit, 6));
    return "chi2 " + format_double(chi2, 6) + " < " + format_double(crit, 6) +
           " (dof 399, 0.1% level)";
}

std::string gamma_sampler_moments(bool quick) {
    const std::size_t n = quick ? 200'000 : 1'000'000;
    const double shapes[] = {0.5, 0.7, 1.0, 4.0 / 3.0, 4.0};
    std::uint64_t seed = 5150;
    for (double k : shapes) {
        double sum = 0.0, sumsq = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            mc::CounterRng rng(seed, i);
            const double g = mc::gamma_variate(rng, k);
            sum += g;
            sumsq += g * g;
        }
        ++seed;
        const double nn = static_cast<double>(n);
        const double mean = sum / nn;
        const double var = sumsq / nn - mean * mean;
        const double mean_tol = 5.0 * std::sqrt(k / nn);
        const double var_tol = 5.0 * std::sqrt((2.0 * k * k + 6.0 * k) / nn);
        if (std::abs(mean - k) > mean_tol)
            return fail("shape " + format_double(k, 4) + ": mean " +
                        format_double(mean, 6) + " vs " + format_double(k, 6));
        if (std::abs(var - k) > var_tol)
            return fail("shape " + format_double(k, 4) + ": variance " +
                        format_double(var, 6) + " vs " + format_double(k, 6));
    }
    return "mean/variance within 5 sigma for shapes 0.5..4";
}

std::string rng_known_answers() {
    using C = mc::Philox4x32::Counter;
    using K = mc::Philox4x32::Key;
    const C zero = mc::Philox4x32::block(K{0, 0}, C{0, 0, 0, 0});
    if (zero != C{0x6627e8d5u, 0xe169c58du, 0xbc57ac4cu, 0x9b00dbd8u})
        return fail("zero-key block mismatch");
    const C ones = mc::Philox4x32::block(K{0xffffffffu, 0xffffffffu},
                                         C{0xffffffffu, 0xffffffffu, 0xffffffffu,
                                           0xffffffffu});
    if (ones != C{0x408f276du, 0x41c83b0eu, 0xa20bc7c6u, 0x6d5451fdu})
        return fail("all-ones block mismatch");
    const C pi = mc::Philox4x32::block(K{0xa4093822u, 0x299f31d0u},
                                       C{0x243f6a88u, 0x85a308d3u, 0x13198a2eu,
                                         0x03707344u});
    if (pi != C{0xd16cfe09u, 0x94fdccebu, 0x5001e420u, 0x24126ea1u})
        return fail("pi-digits block mismatch");
    return "3 published Philox4x32-10 vectors reproduced";
}

std::string snr_monotone() {
    struct Case {
        DistanceModel model;
        FadingChannel ch;
    };
    const Case cases[] = {
        {DistanceModel::tilted({300.0, deg(30), deg(20)}), {4.0 / 3.0, 2.5, 95.0}},
        {DistanceModel::vertical({205.2, 188.5, 300.0}), {4.0, 2.5, 95.0}},
    };
    for (const auto& c : cases) {
        double prev = -1.0;
        for (int i = 0; i < 200; ++i) {
            const double gamma = db_to_linear(-10.0 + 50.0 * i / 199.0);
            const double f = snr_cdf(c.ch, c.model, gamma);
            if (f < prev - 1e-12)
                return fail("CDF decreased at grid point " + std::to_string(i));
            prev = f;
        }
    }
    return "nondecreasing over 200-point log grids";
}

double find_gamma_for_cdf(const FadingChannel& ch, const DistanceModel& m, double target) {
    double lo_db = -40.0, hi_db = 60.0;
    for (int i = 0; i < 60; ++i) {
        const double mid = 0.5 * (lo_db + hi_db);
        if (snr_cdf(ch, m, db_to_linear(mid)) < target)
            lo_db = mid;
        else
            hi_db = mid;
    }
    return db_to_linear(0.5 * (lo_db + hi_db));
}

std::string snr_derivative_consistency() {
    struct Case {
        DistanceModel model;
        FadingChannel ch;
    };
    const Case cases[] = {
        {DistanceModel::tilted({300.0, deg(30), deg(20)}), {4.0 / 3.0, 2.5, 95.0}},
        {DistanceModel::vertical({205.2, 188.5, 300.0}), {4.0, 2.5, 95.0}},
    };
    double worst = 0.0;
    for (const auto& c : cases) {
        const double g_lo = find_gamma_for_cdf(c.ch, c.model, 0.02);
        const double g_hi = find_gamma_for_cdf(c.ch, c.model, 0.98);
        for (int i = 1; i <= 50; ++i) {
            const double gamma =
                g_lo * std::pow(g_hi / g_lo, static_cast<double>(i) / 51.0);
            // Step by the cube root of the CDF evaluation tolerance (1e-9),
            // balancing truncation against quadrature noise.
            const double h = gamma * 1e-3;
            const double deriv = (snr_cdf(c.ch, c.model, gamma + h) -
                                  snr_cdf(c.ch, c.model, gamma - h)) /
                                 (2.0 * h);
            const double pdf = snr_pdf(c.ch, c.model, gamma);
            worst = std::max(worst, std::abs(deriv - pdf) / pdf);
        }
    }
    if (worst > 1e-4) return fail("worst relative mismatch " + format_double(worst, 3));
    return "worst relative mismatch " + format_double(worst, 3) + " at 50 interior points";
}

std::string snr_cross_path() {
    const DistanceModel vert = DistanceModel::vertical({205.2, 188.5, 300.0});
    const FadingChannel ch{4.0 / 3.0, 2.5, 95.0};
    double worst_v = 0.0;
    for (double th_db : {5.0, 10.0, 15.0, 20.0, 25.0}) {
        const double g = db_to_linear(th_db);
        worst_v = std::max(worst_v,
                           std::abs(snr_cdf(ch, vert, g) - snr_cdf_semi_closed(ch, vert, g)));
    }
    const DistanceModel tilt = DistanceModel::tilted({300.0, deg(30), deg(20)});
    double worst_t = 0.0;
    for (double th_db : {5.0, 10.0, 15.0, 20.0, 25.0}) {
        const double g = db_to_linear(th_db);
        worst_t = std::max(worst_t,
                           std::abs(snr_cdf(ch, tilt, g) - snr_cdf_semi_closed(ch, tilt, g)));
    }
    if (worst_v > 1e-5)
        return fail("vertical path disagreement " + format_double(worst_v, 3));
    std::string note = "vertical " + format_double(worst_v, 3) + ", tilted " +
                       format_double(worst_t, 3);
    if (worst_t > 1e-4) note += " (tilted deviation logged, not failed)";
    return note;
}

std::string snr_pdf_normalization() {
    struct Case {
        DistanceModel model;
        FadingChannel ch;
    };
    const Case cases[] = {
        {DistanceModel::tilted({300.0, deg(30), deg(20)}), {4.0 / 3.0, 2.5, 95.0}},
        {DistanceModel::vertical({205.2, 188.5, 300.0}), {4.0, 2.5, 95.0}},
    };
    double worst = 0.0;
    for (const auto& c : cases) {
        const auto& sb = c.model.bounds();
        const double gb = c.ch.gamma_bar();
        const double mean_far = gb / std::pow(sb.d_max, c.ch.nu);
        const double mean_near = gb / std::pow(sb.d_min, c.ch.nu);
        const double g_hi =
            (c.ch.m + 20.0 * std::sqrt(c.ch.m) + 45.0) / c.ch.m * mean_near;
        const double splits[] = {mean_far, mean_near};
        const double mass = quad::integrate_split(
            [&](double g) { return snr_pdf(c.ch, c.model, g); }, 0.0, g_hi,
            std::span<const double>(splits, 2), quad::Options{1e-8, 1e-10, 60});
        worst = std::max(worst, std::abs(mass - 1.0));
    }
    if (worst > 1e-6) return fail("worst |integral-1| = " + format_double(worst, 3));
    return "worst |integral-1| = " + format_double(worst, 3);
}

std::string mc_outage_binomial(bool quick) {
    const std::size_t n = quick ? 200'000 : 2'000'000;
    const DistanceModel model = DistanceModel::tilted({300.0, deg(30), deg(20)});
    const FadingChannel ch{4.0 / 3.0, 2.5, 95.0};
    const double gamma_th = db_to_linear(20.0);
    const double analytic = snr_cdf(ch, model, gamma_th);
    const auto est = mc::outage_monte_carlo({1234, n, model, ch}, gamma_th);
    const double sigma = std::sqrt(analytic * (1.0 - analytic) / static_cast<double>(n));
    const double dev = std::abs(est.p_hat - analytic) / sigma;
    if (dev > 3.0)
        return fail("deviation " + format_double(dev, 3) + " sigma (analytic " +
                    format_double(analytic, 6) + ", mc " + format_double(est.p_hat, 6) +
                    ")");
    return "P_out analytic " + format_double(analytic, 6) + ", mc " +
           format_double(est.p_hat, 6) + " (" + format_double(dev, 2) + " sigma, n=" +
           std::to_string(n) + ")";
}

}  // namespace

Report run(const Options& opts, std::ostream& out, std::ostream& timing) {
    Harness h{opts, out, timing, {}};
    out << "ellcov selftest (" << (opts.quick ? "quick" : "full") << ")\n";

    h.check("geometry_anchors", geometry_anchors);
    h.check("rng_known_answers", rng_known_answers);
    h.check("incomplete_gamma_vs_quadrature", incomplete_gamma_vs_quadrature);
    h.check("radial_normalization",
            [&] { return radial_normalization(opts.quick, opts.inject_tolerance_fault); });
    h.check("branch_continuity", branch_continuity);
    h.check("circle_limit", circle_limit);
    h.check("cdf_consistency", cdf_consistency);
    h.check("vertical_cdf_closed_form", vertical_cdf_closed_form);
    h.check("tilted_cdf_closed_form", tilted_cdf_closed_form_log);
    h.check("distance_ks", [&] { return distance_ks(opts.quick); });
    h.check("uniformity_chi2", [&] { return uniformity_chi2(opts.quick); });
    h.check("gamma_sampler_moments", [&] { return gamma_sampler_moments(opts.quick); });
    h.check("snr_monotone", snr_monotone);
    h.check("snr_derivative_consistency", snr_derivative_consistency);
    h.check("snr_cross_path", snr_cross_path);
    h.check("snr_pdf_normalization", snr_pdf_normalization);
    h.check("mc_outage_binomial", [&] { return mc_outage_binomial(opts.quick); });

    out << (h.report.ok() ? "ALL CHECKS PASSED" : "CHECKS FAILED") << " ("
        << h.report.checks - h.report.failures << "/" << h.report.checks << ")\n";
    return h.report;
}

}  // namespace ellcov::selftest
