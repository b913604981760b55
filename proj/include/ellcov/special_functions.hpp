#pragma once

namespace ellcov::sf {

/// Upper incomplete gamma function Gamma(s, x) = int_x^inf t^(s-1) e^(-t) dt.
///
/// Power series for x < s + 1, modified-Lentz continued fraction otherwise;
/// relative accuracy is ~1e-14 over the supported domain (s up to a few
/// hundred before Gamma(s) itself overflows).
/// Throws std::domain_error for s <= 0 or x < 0.
double upper_incomplete_gamma(double s, double x);

/// Regularized lower incomplete gamma P(s, x) = 1 - Gamma(s, x)/Gamma(s).
/// Nondecreasing in x, P(s, 0) = 0, P(s, inf) = 1.
/// Throws std::domain_error for s <= 0 or x < 0.
double regularized_lower_gamma(double s, double x);

/// Regularized upper incomplete gamma Q(s, x) = Gamma(s, x)/Gamma(s).
double regularized_upper_gamma(double s, double x);

}  // namespace ellcov::sf
