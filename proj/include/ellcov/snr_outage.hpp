#pragma once

// SNR statistics and outage probability of a link to a user at random
// position, under Nakagami-m power fading.
//
// Conditioned on slant distance d the received SNR is
// Gamma(shape m, scale gamma_bar / (m d^nu)); the unconditional law is the
// average of the conditional one over the distance density.  That direct
// averaging (adaptive quadrature split at the distance branch point) is
// the authoritative path; the semi-closed incomplete-gamma form is kept
// as a cross-check.

#include <string>
#include <variant>
#include <vector>

#include "ellcov/distance_stats.hpp"

namespace ellcov {

/// Nakagami-m fading channel.  dB -> linear conversion happens here, once.
struct FadingChannel {
    double m = 1.0;             // Nakagami shape, >= 0.5
    double nu = 2.5;            // path-loss exponent, > 0
    double gamma_bar_db = 95.0; // transmit SNR P_t/P_n in dB

    double gamma_bar() const;   // linear transmit SNR
    void validate() const;      // throws std::domain_error
};

/// Default link parameters used across the CLI and the test suites.
struct LinkDefaults {
    static constexpr double kPathLossExponent = 2.5;
    static constexpr double kAltitudeM = 300.0;
    static constexpr double kGammaBarDb = 95.0;
};

/// P(gamma <= g | d): Nakagami power CDF at conditional mean gamma_bar/d^nu.
double conditional_snr_cdf(const FadingChannel& ch, double distance_m, double gamma);

/// Conditional SNR density at distance d.
double conditional_snr_pdf(const FadingChannel& ch, double distance_m, double gamma);

/// Unconditional SNR density f_gamma(g), averaged over the user position.
double snr_pdf(const FadingChannel& ch, const DistanceModel& model, double gamma);

/// Unconditional SNR CDF F_gamma(g); the outage probability at threshold g.
double snr_cdf(const FadingChannel& ch, const DistanceModel& model, double gamma);

/// Cross-check path: disc-branch contribution in closed incomplete-gamma
/// form (the M-function terms), arccos branch integrated numerically.
double snr_cdf_semi_closed(const FadingChannel& ch, const DistanceModel& model,
                           double gamma);

struct OutageQuery {
    FadingChannel channel;
    DistanceModel model;
    double gamma_th_db = 10.0;
};

struct OutageResult {
    double p_out;
    bool quadrature_floor;  // result below 1e-10: smaller than the
                            // quadrature tolerance can resolve
};

OutageResult outage_probability(const OutageQuery& q);

/// Sweepable parameters.  Angles are radians, altitude meters, thresholds
/// and transmit SNR in dB (converted internally exactly once).
enum class SweepAxis { Psi, Theta, Altitude, NakagamiM, GammaThDb, GammaBarDb };

/// Base configuration of a sweep: one scenario (tilted or vertical), one
/// channel, one threshold; the swept axis overrides the matching field
/// point by point and geometry is revalidated per point.
struct SweepSpec {
    std::variant<TiltedScenario, VerticalScenario> scenario;
    FadingChannel channel;
    double gamma_th_db = 10.0;
    SweepAxis axis = SweepAxis::GammaThDb;
    std::vector<double> grid;
    bool compare_vertical = false;  // tilted base only: add the outage of a
                                    // nadir transmitter matching the footprint
};

struct SweepRow {
    double axis_value = 0.0;
    double p_out = 0.0;
    bool valid = false;
    bool quadrature_floor = false;
    double p_out_vertical = 0.0;     // only when compare_vertical
    std::string error;               // why the row is invalid
};

/// One outage evaluation per grid value; invalid geometry flags the row
/// instead of dropping it.  Rows are computed in parallel and returned in
/// grid order.
std::vector<SweepRow> outage_sweep(const SweepSpec& spec);

std::string to_string(SweepAxis axis);

}  // namespace ellcov
