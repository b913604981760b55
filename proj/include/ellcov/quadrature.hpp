#pragma once

// Adaptive Gauss-Kronrod integration (7/15 point pair).
//
// The worst-error interval is bisected until the accumulated error
// estimate meets the tolerance or the subdivision budget is spent.
// Interval bookkeeping is a flat array scanned linearly; the budget is
// small enough that anything fancier would not pay for itself.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <vector>

namespace ellcov::quad {

struct Options {
    double rel_tol = 1e-9;
    double abs_tol = 1e-12;
    int max_subdivisions = 60;
};

struct Result {
    double value = 0.0;
    double error_estimate = 0.0;
    int subdivisions = 0;
    bool converged = true;

    operator double() const { return value; }
};

namespace detail {

// 15-point Kronrod abscissae on [-1,1] (positive half) and weights,
// with the embedded 7-point Gauss weights on the odd-indexed nodes.
inline constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};

inline constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};

inline constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Interval {
    double lo, hi, value, error;
};

// One Gauss-Kronrod 7/15 evaluation on [lo, hi].  The error estimate is
// the QUADPACK rescaling of |K15 - G7| against the integrand variation.
template <class F>
Interval gk15(F&& f, double lo, double hi) {
    const double center = 0.5 * (lo + hi);
    const double half = 0.5 * (hi - lo);

    const double fc = f(center);
    double result_gauss = kWg[3] * fc;
    double result_kronrod = kWgk[7] * fc;
    double resabs = std::abs(result_kronrod);

    std::array<double, 15> fv{};
    fv[14] = fc;
    for (int j = 0; j < 7; ++j) {
        const double dx = half * kXgk[j];
        const double f1 = f(center - dx);
        const double f2 = f(center + dx);
        fv[j] = f1;
        fv[7 + j] = f2;
        result_kronrod += kWgk[j] * (f1 + f2);
        if (j % 2 == 1) result_gauss += kWg[j / 2] * (f1 + f2);
        resabs += kWgk[j] * (std::abs(f1) + std::abs(f2));
    }

    const double mean = 0.5 * result_kronrod;
    double resasc = kWgk[7] * std::abs(fc - mean);
    for (int j = 0; j < 7; ++j)
        resasc += kWgk[j] * (std::abs(fv[j] - mean) + std::abs(fv[7 + j] - mean));

    result_kronrod *= half;
    result_gauss *= half;
    resabs *= std::abs(half);
    resasc *= std::abs(half);

    double err = std::abs(result_kronrod - result_gauss);
    if (resasc != 0.0 && err != 0.0)
        err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
    const double eps = std::numeric_limits<double>::epsilon();
    const double min_err = 50.0 * eps * resabs;
    if (resabs > std::numeric_limits<double>::min() / (50.0 * eps))
        err = std::max(err, min_err);

    return {lo, hi, result_kronrod, err};
}

}  // namespace detail

/// Integrate f over [lo, hi].
template <class F>
Result integrate(F&& f, double lo, double hi, const Options& opts = {}) {
    Result out;
    if (!(hi > lo)) return out;

    std::vector<detail::Interval> ivals;
    ivals.reserve(static_cast<std::size_t>(opts.max_subdivisions) + 1);
    ivals.push_back(detail::gk15(f, lo, hi));

    for (int n = 0; n < opts.max_subdivisions; ++n) {
        double sum = 0.0, err = 0.0;
        std::size_t worst = 0;
        for (std::size_t i = 0; i < ivals.size(); ++i) {
            sum += ivals[i].value;
            err += ivals[i].error;
            if (ivals[i].error > ivals[worst].error) worst = i;
        }
        out.value = sum;
        out.error_estimate = err;
        out.subdivisions = n;
        if (err <= std::max(opts.abs_tol, opts.rel_tol * std::abs(sum))) return out;

        const detail::Interval w = ivals[worst];
        const double mid = 0.5 * (w.lo + w.hi);
        if (mid <= w.lo || mid >= w.hi) break;  // interval at rounding limit
        ivals[worst] = detail::gk15(f, w.lo, mid);
        ivals.push_back(detail::gk15(f, mid, w.hi));
    }

    double sum = 0.0, err = 0.0;
    for (const auto& iv : ivals) {
        sum += iv.value;
        err += iv.error;
    }
    out.value = sum;
    out.error_estimate = err;
    out.subdivisions = static_cast<int>(ivals.size()) - 1;
    out.converged = err <= std::max(opts.abs_tol, opts.rel_tol * std::abs(sum));
    return out;
}

/// Integrate f over [lo, hi] with mandatory breaks at the given interior
/// points (sorted, each inside (lo, hi)).  Used where the integrand has a
/// kink, e.g. at a distance-distribution branch point.
template <class F>
Result integrate_split(F&& f, double lo, double hi, std::span<const double> breaks,
                       const Options& opts = {}) {
    Result total;
    if (!(hi > lo)) return total;
    double a = lo;
    bool ok = true;
    auto accumulate = [&](double b) {
        if (b > a) {
            Result r = integrate(f, a, b, opts);
            total.value += r.value;
            total.error_estimate += r.error_estimate;
            total.subdivisions += r.subdivisions;
            ok = ok && r.converged;
        }
        a = b;
    };
    for (double br : breaks)
        if (br > lo && br < hi) accumulate(br);
    accumulate(hi);
    total.converged = ok;
    return total;
}

}  // namespace ellcov::quad
