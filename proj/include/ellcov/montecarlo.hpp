#pragma once

// Simulation oracle for the analytic distance and SNR distributions:
// uniform sampling inside footprints, Nakagami power draws, empirical
// CDFs, and Kolmogorov-Smirnov comparison.
//
// Determinism contract: a fixed (seed, n_samples, model, channel) fully
// determines every sample.  Sample i draws from Philox stream i, so the
// result is independent of thread count and scheduling.

#include <cstdint>
#include <functional>
#include <optional>
#include <ostream>
#include <string_view>
#include <vector>

#include "ellcov/distance_stats.hpp"
#include "ellcov/rng.hpp"
#include "ellcov/snr_outage.hpp"

namespace ellcov::mc {

enum class EllipseSampler {
    DiscStretch,  // unit-disc draw scaled by (a, b), shifted by (x0, 0)
    Rejection     // bounding-box rejection; cross-check sampler
};

struct SimConfig {
    std::uint64_t seed = 1;
    std::size_t n_samples = 1'000'000;
    DistanceModel model;
    std::optional<FadingChannel> channel;
    EllipseSampler sampler = EllipseSampler::DiscStretch;
};

struct GroundPoint {
    double x;
    double y;
};

/// One uniform draw inside the footprint, density 1/(pi a b).
GroundPoint sample_point_in_ellipse(const EllipseFootprint& fp, CounterRng& rng);
GroundPoint sample_point_in_ellipse_rejection(const EllipseFootprint& fp, CounterRng& rng);

/// One conditional SNR draw at distance d: Gamma(m, gamma_bar/(m d^nu)).
double nakagami_snr_draw(CounterRng& rng, const FadingChannel& ch, double distance_m);

/// Sorted sample set with empirical-CDF queries.
class EmpiricalDistribution {
  public:
    explicit EmpiricalDistribution(std::vector<double> samples);

    /// Fraction of samples <= x.
    double cdf(double x) const;

    std::size_t size() const { return samples_.size(); }
    const std::vector<double>& samples() const { return samples_; }
    double min() const { return samples_.front(); }
    double max() const { return samples_.back(); }

  private:
    std::vector<double> samples_;
};

/// Euclidean distances of cfg.n_samples uniform users (parallelized).
EmpiricalDistribution sample_distance(const SimConfig& cfg);

/// Linear SNR draws over random position and Nakagami fading; requires
/// cfg.channel.
EmpiricalDistribution sample_snr(const SimConfig& cfg);

struct BinomialEstimate {
    double p_hat;
    std::size_t events;
    std::size_t n;
    double std_error;  // sqrt(p_hat (1 - p_hat) / n)
};

/// Fraction of SNR draws below the linear threshold, without storing the
/// samples; the Monte-Carlo side of the outage cross-checks.
BinomialEstimate outage_monte_carlo(const SimConfig& cfg, double gamma_th_linear);

/// Two-sided one-sample Kolmogorov-Smirnov distance between the empirical
/// CDF and an analytic CDF, evaluated at the step discontinuities.
double ks_distance(const EmpiricalDistribution& emp,
                   const std::function<double(double)>& analytic_cdf);

/// Critical KS value c(alpha)/sqrt(n); alpha = 0.01 gives the 1.6276/sqrt(n)
/// bound used by the oracle suites.
double ks_critical_value(std::size_t n, double alpha = 0.01);

/// Raw-sample export, one value per line under the given header
/// ("distance_m" or "snr_linear").
void write_samples_csv(std::ostream& out, const EmpiricalDistribution& emp,
                       std::string_view header);

}  // namespace ellcov::mc
