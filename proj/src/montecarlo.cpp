#include "ellcov/montecarlo.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <stdexcept>
#include <thread>
#include <vector>

namespace ellcov::mc {

double gamma_variate(CounterRng& rng, double shape) {
    if (!(shape > 0.0)) throw std::domain_error("gamma_variate: shape must be positive");
    if (shape < 1.0) {
        const double g = gamma_variate(rng, shape + 1.0);
        return g * std::pow(rng.uniform01_open(), 1.0 / shape);
    }
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
        double x, v;
        do {
            x = rng.normal();
            v = 1.0 + c * x;
        } while (v <= 0.0);
        v = v * v * v;
        const double u = rng.uniform01_open();
        if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
        if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
    }
}

GroundPoint sample_point_in_ellipse(const EllipseFootprint& fp, CounterRng& rng) {
    const double radius = std::sqrt(rng.uniform01());
    const double angle = 2.0 * M_PI * rng.uniform01();
    return {fp.x0 + fp.a * radius * std::cos(angle), fp.b * radius * std::sin(angle)};
}

GroundPoint sample_point_in_ellipse_rejection(const EllipseFootprint& fp, CounterRng& rng) {
    for (;;) {
        const double u = 2.0 * rng.uniform01() - 1.0;
        const double v = 2.0 * rng.uniform01() - 1.0;
        if (u * u + v * v <= 1.0) return {fp.x0 + fp.a * u, fp.b * v};
    }
}

double nakagami_snr_draw(CounterRng& rng, const FadingChannel& ch, double distance_m) {
    ch.validate();
    if (!(distance_m > 0.0)) throw std::domain_error("distance must be positive");
    const double scale = ch.gamma_bar() / (ch.m * std::pow(distance_m, ch.nu));
    return scale * gamma_variate(rng, ch.m);
}

EmpiricalDistribution::EmpiricalDistribution(std::vector<double> samples)
    : samples_(std::move(samples)) {
    if (samples_.empty())
        throw std::invalid_argument("EmpiricalDistribution requires at least one sample");
    std::sort(samples_.begin(), samples_.end());
}

double EmpiricalDistribution::cdf(double x) const {
    const auto it = std::upper_bound(samples_.begin(), samples_.end(), x);
    return static_cast<double>(it - samples_.begin()) / static_cast<double>(samples_.size());
}

namespace {

// Runs fn(i) for i in [0, n) over a thread pool.  Output determinism comes
// from per-index RNG streams, not from scheduling.
template <class Fn>
void parallel_for(std::size_t n, Fn&& fn) {
    const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    const std::size_t n_threads = std::min<std::size_t>(hw, std::max<std::size_t>(1, n / 4096));
    if (n_threads <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(n_threads);
    const std::size_t chunk = (n + n_threads - 1) / n_threads;
    for (std::size_t t = 0; t < n_threads; ++t) {
        const std::size_t lo = t * chunk;
        const std::size_t hi = std::min(n, lo + chunk);
        pool.emplace_back([lo, hi, &fn] {
            for (std::size_t i = lo; i < hi; ++i) fn(i);
        });
    }
    for (auto& th : pool) th.join();
}

GroundPoint draw_point(const SimConfig& cfg, CounterRng& rng) {
    return cfg.sampler == EllipseSampler::DiscStretch
               ? sample_point_in_ellipse(cfg.model.footprint(), rng)
               : sample_point_in_ellipse_rejection(cfg.model.footprint(), rng);
}

double draw_distance(const SimConfig& cfg, CounterRng& rng) {
    const GroundPoint p = draw_point(cfg, rng);
    const double h = cfg.model.altitude();
    return std::sqrt(p.x * p.x + p.y * p.y + h * h);
}

}  // namespace

EmpiricalDistribution sample_distance(const SimConfig& cfg) {
    if (cfg.n_samples == 0) throw std::invalid_argument("n_samples must be >= 1");
    std::vector<double> out(cfg.n_samples);
    parallel_for(cfg.n_samples, [&](std::size_t i) {
        CounterRng rng(cfg.seed, i);
        out[i] = draw_distance(cfg, rng);
    });
    return EmpiricalDistribution(std::move(out));
}

EmpiricalDistribution sample_snr(const SimConfig& cfg) {
    if (cfg.n_samples == 0) throw std::invalid_argument("n_samples must be >= 1");
    if (!cfg.channel) throw std::invalid_argument("sample_snr requires a channel");
    const FadingChannel ch = *cfg.channel;
    ch.validate();
    std::vector<double> out(cfg.n_samples);
    parallel_for(cfg.n_samples, [&](std::size_t i) {
        CounterRng rng(cfg.seed, i);
        const double d = draw_distance(cfg, rng);
        out[i] = nakagami_snr_draw(rng, ch, d);
    });
    return EmpiricalDistribution(std::move(out));
}

BinomialEstimate outage_monte_carlo(const SimConfig& cfg, double gamma_th_linear) {
    if (cfg.n_samples == 0) throw std::invalid_argument("n_samples must be >= 1");
    if (!cfg.channel) throw std::invalid_argument("outage_monte_carlo requires a channel");
    const FadingChannel ch = *cfg.channel;
    ch.validate();
    std::atomic<std::size_t> events{0};
    parallel_for(cfg.n_samples, [&](std::size_t i) {
        CounterRng rng(cfg.seed, i);
        const double d = draw_distance(cfg, rng);
        if (nakagami_snr_draw(rng, ch, d) < gamma_th_linear)
            events.fetch_add(1, std::memory_order_relaxed);
    });
    const double n = static_cast<double>(cfg.n_samples);
    const double p = static_cast<double>(events.load()) / n;
    return {p, events.load(), cfg.n_samples, std::sqrt(p * (1.0 - p) / n)};
}

double ks_distance(const EmpiricalDistribution& emp,
                   const std::function<double(double)>& analytic_cdf) {
    const auto& xs = emp.samples();
    const double n = static_cast<double>(xs.size());
    double stat = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double f = analytic_cdf(xs[i]);
        stat = std::max(stat, f - static_cast<double>(i) / n);
        stat = std::max(stat, static_cast<double>(i + 1) / n - f);
    }
    return stat;
}

double ks_critical_value(std::size_t n, double alpha) {
    return std::sqrt(-0.5 * std::log(alpha / 2.0)) / std::sqrt(static_cast<double>(n));
}

void write_samples_csv(std::ostream& out, const EmpiricalDistribution& emp,
                       std::string_view header) {
    out << header << '\n';
    char buf[32];
    for (double v : emp.samples()) {
        const auto res = std::to_chars(buf, buf + sizeof(buf), v,
                                       std::chars_format::general, 17);
        out.write(buf, res.ptr - buf);
        out.put('\n');
    }
}

}  // namespace ellcov::mc
