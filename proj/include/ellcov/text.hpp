#pragma once

#include <string>

namespace ellcov::text {

/// Locale-independent decimal formatting ('.' decimal point, shortest form
/// at the given significance).  All user-visible numbers go through here so
/// identical runs produce byte-identical files.
std::string format_double(double v, int significant = 12);

}  // namespace ellcov::text
