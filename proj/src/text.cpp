#include "text.hpp"

#include <charconv>
#include <cmath>
#include <system_error>

namespace semnorm {

namespace {

std::string to_chars_or_special(double value, std::chars_format fmt, int precision) {
    if (std::isnan(value)) return "nan";
    if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, value, fmt, precision);
    if (ec != std::errc()) return "nan";
    std::string s(buf, end);
    if (s == "-0" || s.find_first_not_of("-0.") == std::string::npos) {
        // Avoid printing negative zero.
        if (!s.empty() && s.front() == '-') s.erase(0, 1);
    }
    return s;
}

} // namespace

std::string format_general(double value, int significant_digits) {
    return to_chars_or_special(value, std::chars_format::general, significant_digits);
}

std::string format_fixed(double value, int decimals) {
    return to_chars_or_special(value, std::chars_format::fixed, decimals);
}

std::string tsv_field(std::string_view s) {
    std::string out(s);
    for (char& c : out) {
        if (c == '\t' || c == '\n' || c == '\r') c = ' ';
    }
    return out;
}

std::string truncate_utf8(std::string_view s, std::size_t width) {
    if (width == 0) return std::string(s);
    std::size_t points = 0;
    for (std::size_t i = 0; i < s.size(); ++i) {
        const auto c = static_cast<unsigned char>(s[i]);
        if ((c & 0xC0u) != 0x80u) {
            if (points == width) return std::string(s.substr(0, i)) + "...";
            ++points;
        }
    }
    return std::string(s);
}

} // namespace semnorm
