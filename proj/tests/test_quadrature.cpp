#include <doctest.h>

#include <cmath>

#include "ellcov/quadrature.hpp"

using ellcov::quad::integrate;
using ellcov::quad::integrate_split;
using ellcov::quad::Options;

TEST_SUITE("quadrature") {

TEST_CASE("polynomials are exact") {
    const auto r = integrate([](double x) { return 3.0 * x * x; }, 0.0, 2.0);
    CHECK(r.value == doctest::Approx(8.0).epsilon(1e-14));
    CHECK(r.converged);
}

TEST_CASE("smooth transcendental") {
    const auto r = integrate([](double x) { return std::exp(-x) * std::sin(x); }, 0.0, 10.0);
    // (1 - e^-10 (sin 10 + cos 10)) / 2
    const double ref = 0.5 * (1.0 - std::exp(-10.0) * (std::sin(10.0) + std::cos(10.0)));
    CHECK(r.value == doctest::Approx(ref).epsilon(1e-12));
}

TEST_CASE("square-root endpoint behavior converges") {
    const auto r = integrate([](double x) { return std::sqrt(x); }, 0.0, 1.0,
                             Options{1e-12, 1e-15, 60});
    CHECK(r.value == doctest::Approx(2.0 / 3.0).epsilon(1e-10));
}

TEST_CASE("kinked integrand needs the split") {
    auto kink = [](double x) { return x < 1.0 ? x : 2.0 - x; };
    const double brk = 1.0;
    const auto r = integrate_split(kink, 0.0, 2.0, std::span<const double>(&brk, 1));
    CHECK(r.value == doctest::Approx(1.0).epsilon(1e-13));
}

TEST_CASE("empty and reversed ranges integrate to zero") {
    CHECK(integrate([](double) { return 1.0; }, 1.0, 1.0).value == 0.0);
    CHECK(integrate([](double) { return 1.0; }, 2.0, 1.0).value == 0.0);
}

TEST_CASE("error estimate reported for rough integrands") {
    // Fast oscillation: the estimate must not be silently optimistic.
    const auto r = integrate([](double x) { return std::sin(50.0 * x); }, 0.0, M_PI,
                             Options{1e-10, 1e-14, 60});
    const double ref = (1.0 - std::cos(50.0 * M_PI)) / 50.0;
    CHECK(std::abs(r.value - ref) <= std::max(1e-10, 10.0 * r.error_estimate));
}

}  // TEST_SUITE
