#include "ellcov/snr_outage.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <thread>
#include <type_traits>

#include "ellcov/quadrature.hpp"
#include "ellcov/special_functions.hpp"

namespace ellcov {

namespace {

constexpr double kQuadratureFloor = 1e-10;

const quad::Options kSnrQuad{1e-9, 1e-12, 60};

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

}  // namespace

double FadingChannel::gamma_bar() const { return db_to_linear(gamma_bar_db); }

void FadingChannel::validate() const {
    if (!(m >= 0.5))
        throw std::domain_error("Nakagami shape must satisfy m >= 0.5, got m=" +
                                std::to_string(m));
    if (!(nu > 0.0))
        throw std::domain_error("path-loss exponent must be positive, got nu=" +
                                std::to_string(nu));
    if (!std::isfinite(gamma_bar_db))
        throw std::domain_error("transmit SNR must be finite");
}

double conditional_snr_cdf(const FadingChannel& ch, double distance_m, double gamma) {
    ch.validate();
    if (!(distance_m > 0.0))
        throw std::domain_error("distance must be positive");
    if (gamma <= 0.0) return 0.0;
    const double x = ch.m * gamma * std::pow(distance_m, ch.nu) / ch.gamma_bar();
    return sf::regularized_lower_gamma(ch.m, x);
}

double conditional_snr_pdf(const FadingChannel& ch, double distance_m, double gamma) {
    ch.validate();
    if (!(distance_m > 0.0))
        throw std::domain_error("distance must be positive");
    if (gamma < 0.0) return 0.0;
    // (m d^nu / gb)^m gamma^(m-1) exp(-gamma m d^nu / gb) / Gamma(m),
    // evaluated in log space so large d^nu cannot overflow.
    const double rate = ch.m * std::pow(distance_m, ch.nu) / ch.gamma_bar();
    if (gamma == 0.0) {
        if (ch.m > 1.0) return 0.0;
        if (ch.m == 1.0) return rate;
        return std::numeric_limits<double>::infinity();
    }
    const double log_pdf = ch.m * std::log(rate) + (ch.m - 1.0) * std::log(gamma) -
                           gamma * rate - std::lgamma(ch.m);
    return std::exp(log_pdf);
}

double snr_pdf(const FadingChannel& ch, const DistanceModel& model, double gamma) {
    ch.validate();
    if (gamma < 0.0) return 0.0;
    const SupportBounds& sb = model.bounds();
    const double brk = sb.d_break;
    return quad::integrate_split(
        [&](double d) { return conditional_snr_pdf(ch, d, gamma) * model.euclidean_pdf(d); },
        sb.d_min, sb.d_max, std::span<const double>(&brk, 1), kSnrQuad);
}

double snr_cdf(const FadingChannel& ch, const DistanceModel& model, double gamma) {
    ch.validate();
    if (gamma <= 0.0) return 0.0;
    const SupportBounds& sb = model.bounds();
    const double brk = sb.d_break;
    return quad::integrate_split(
        [&](double d) { return conditional_snr_cdf(ch, d, gamma) * model.euclidean_pdf(d); },
        sb.d_min, sb.d_max, std::span<const double>(&brk, 1), kSnrQuad);
}

namespace {

// x^2-weighted tail function of the disc-branch closed form:
//   M(x, gamma) = u^(-2/nu) Gamma(m + 2/nu, u) - Gamma(m, u),  u = gamma m x^nu / gb
// (times x^2 it telescopes the disc-branch average between two distances).
double m_function(const FadingChannel& ch, double x, double gamma) {
    const double u = gamma * ch.m * std::pow(x, ch.nu) / ch.gamma_bar();
    return std::pow(u, -2.0 / ch.nu) * sf::upper_incomplete_gamma(ch.m + 2.0 / ch.nu, u) -
           sf::upper_incomplete_gamma(ch.m, u);
}

}  // namespace

double snr_cdf_semi_closed(const FadingChannel& ch, const DistanceModel& model,
                           double gamma) {
    ch.validate();
    if (gamma <= 0.0) return 0.0;
    const SupportBounds& sb = model.bounds();
    const EllipseFootprint& fp = model.footprint();
    const double ab = fp.a * fp.b;

    double disc_term = 0.0;
    if (model.tag() != ScenarioTag::TiltedOutside && sb.d_break > sb.d_min) {
        const double mass = (sb.d_break * sb.d_break - sb.d_min * sb.d_min) / ab;
        disc_term = mass - (sb.d_min * sb.d_min * m_function(ch, sb.d_min, gamma) -
                            sb.d_break * sb.d_break * m_function(ch, sb.d_break, gamma)) /
                               (ab * std::tgamma(ch.m));
    }

    const double arc_term = quad::integrate(
        [&](double d) { return conditional_snr_cdf(ch, d, gamma) * model.euclidean_pdf(d); },
        sb.d_break, sb.d_max, kSnrQuad);

    return disc_term + arc_term;
}

OutageResult outage_probability(const OutageQuery& q) {
    const double p = snr_cdf(q.channel, q.model, db_to_linear(q.gamma_th_db));
    return {p, p < kQuadratureFloor};
}

std::string to_string(SweepAxis axis) {
    switch (axis) {
        case SweepAxis::Psi: return "psi";
        case SweepAxis::Theta: return "theta";
        case SweepAxis::Altitude: return "H";
        case SweepAxis::NakagamiM: return "m";
        case SweepAxis::GammaThDb: return "gamma_th";
        case SweepAxis::GammaBarDb: return "gamma_bar";
    }
    return "?";
}

namespace {

DistanceModel build_model(const TiltedScenario& s) { return DistanceModel::tilted(s); }
DistanceModel build_model(const VerticalScenario& s) { return DistanceModel::vertical(s); }

SweepRow evaluate_sweep_point(const SweepSpec& spec, double value) {
    SweepRow row;
    row.axis_value = value;
    try {
        auto scenario = spec.scenario;
        FadingChannel ch = spec.channel;
        double gamma_th_db = spec.gamma_th_db;

        switch (spec.axis) {
            case SweepAxis::Psi:
                std::get<TiltedScenario>(scenario).tilt_rad = value;
                break;
            case SweepAxis::Theta:
                std::get<TiltedScenario>(scenario).semi_apex_rad = value;
                break;
            case SweepAxis::Altitude:
                std::visit([&](auto& s) { s.altitude_m = value; }, scenario);
                break;
            case SweepAxis::NakagamiM:
                ch.m = value;
                break;
            case SweepAxis::GammaThDb:
                gamma_th_db = value;
                break;
            case SweepAxis::GammaBarDb:
                ch.gamma_bar_db = value;
                break;
        }

        const DistanceModel model = std::visit(
            [](const auto& s) { return build_model(s); }, scenario);
        const OutageResult res = outage_probability({ch, model, gamma_th_db});
        row.p_out = res.p_out;
        row.quadrature_floor = res.quadrature_floor;
        row.valid = true;

        if (spec.compare_vertical) {
            const auto& tilted = std::get<TiltedScenario>(scenario);
            const EllipseFootprint fp = footprint_from_tilt(tilted);
            const double hv = equivalent_vertical_altitude(tilted);
            const DistanceModel vmodel =
                DistanceModel::vertical({fp.a, fp.b, hv});
            row.p_out_vertical =
                outage_probability({ch, vmodel, gamma_th_db}).p_out;
        }
    } catch (const std::bad_variant_access&) {
        row.valid = false;
        row.error = "axis '" + to_string(spec.axis) +
                    "' does not apply to this scenario";
    } catch (const std::exception& e) {
        row.valid = false;
        row.error = e.what();
    }
    return row;
}

}  // namespace

std::vector<SweepRow> outage_sweep(const SweepSpec& spec) {
    std::vector<SweepRow> rows(spec.grid.size());
    const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    const std::size_t n_threads = std::min<std::size_t>(hw, spec.grid.size());
    if (n_threads <= 1) {
        for (std::size_t i = 0; i < spec.grid.size(); ++i)
            rows[i] = evaluate_sweep_point(spec, spec.grid[i]);
        return rows;
    }
    std::vector<std::thread> pool;
    pool.reserve(n_threads);
    std::atomic<std::size_t> next{0};
    for (std::size_t t = 0; t < n_threads; ++t) {
        pool.emplace_back([&] {
            for (std::size_t i = next.fetch_add(1); i < spec.grid.size();
                 i = next.fetch_add(1))
                rows[i] = evaluate_sweep_point(spec, spec.grid[i]);
        });
    }
    for (auto& th : pool) th.join();
    return rows;
}

}  // namespace ellcov
