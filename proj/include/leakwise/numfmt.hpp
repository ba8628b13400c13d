#pragma once

#include <charconv>
#include <string>
#include <system_error>

namespace leakwise {

/// Shortest decimal that parses back to the same double.
inline std::string format_number(double value) {
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, value);
    if (ec != std::errc{}) return "nan";
    return {buf, end};
}

}  // namespace leakwise
