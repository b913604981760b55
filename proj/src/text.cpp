#include "ellcov/text.hpp"

#include <charconv>

namespace ellcov::text {

std::string format_double(double v, int significant) {
    char buf[64];
    const auto res =
        std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, significant);
    return std::string(buf, res.ptr);
}

}  // namespace ellcov::text
