#pragma once

#include <charconv>
#include <string>

namespace swucc {

/// Shortest decimal string that round-trips the double exactly.
inline std::string format_double(double value) {
    char buf[32];
    const auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), value);
    (void)ec;
    return std::string(buf, end);
}

}  // namespace swucc
