#pragma once

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <string>
#include <system_error>

namespace liwcad::report {

// Fixed-point rendering with round-half-even applied to the shortest
// round-trip decimal form of `value`, so 0.0125 -> "0.012" and
// 0.1004999 -> "0.100" on every platform.
inline std::string format_fixed(double value, int decimals) {
    if (std::isnan(value)) return "nan";
    if (std::isinf(value)) return value < 0 ? "-inf" : "inf";

    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::scientific);
    std::string sci(buf, res.ptr);

    const bool negative = !sci.empty() && sci.front() == '-';
    if (negative) sci.erase(0, 1);
    const auto e_pos = sci.find('e');
    const int exponent = std::atoi(sci.c_str() + e_pos + 1);
    std::string digits;
    for (std::size_t i = 0; i < e_pos; ++i) {
        if (sci[i] != '.') digits.push_back(sci[i]);
    }

    // `point` = number of digits before the decimal point.
    int point = exponent + 1;
    while (point < 1) {
        digits.insert(digits.begin(), '0');
        ++point;
    }
    const auto keep = static_cast<std::size_t>(point + decimals);
    if (digits.size() < keep + 1) digits.append(keep + 1 - digits.size(), '0');

    std::string kept = digits.substr(0, keep);
    const std::string rest = digits.substr(keep);
    bool round_up = false;
    if (rest[0] > '5') {
        round_up = true;
    } else if (rest[0] == '5') {
        const bool beyond = rest.find_first_not_of('0', 1) != std::string::npos;
        const bool odd = !kept.empty() && ((kept.back() - '0') % 2 == 1);
        round_up = beyond || odd;
    }
    if (round_up) {
        int i = static_cast<int>(kept.size()) - 1;
        while (i >= 0 && kept[static_cast<std::size_t>(i)] == '9') {
            kept[static_cast<std::size_t>(i)] = '0';
            --i;
        }
        if (i < 0) {
            kept.insert(kept.begin(), '1');
            ++point;
        } else {
            ++kept[static_cast<std::size_t>(i)];
        }
    }

    std::string int_part = kept.substr(0, static_cast<std::size_t>(point));
    const std::string frac_part = kept.substr(static_cast<std::size_t>(point));
    const auto nz = int_part.find_first_not_of('0');
    int_part = nz == std::string::npos ? "0" : int_part.substr(nz);

    std::string out = int_part;
    if (decimals > 0) out += "." + frac_part;
    const bool is_zero = out.find_first_not_of("0.") == std::string::npos;
    if (negative && !is_zero) out.insert(out.begin(), '-');
    return out;
}

}  // namespace liwcad::report
