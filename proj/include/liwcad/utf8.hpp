#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace liwcad::utf8 {

inline constexpr char32_t kReplacement = 0xFFFD;

struct Decoded {
    char32_t scalar = kReplacement;
    std::size_t length = 1;  // bytes consumed
    bool valid = false;
};

// Decodes one scalar at `pos`. Rejects overlongs, surrogates and values
// above U+10FFFF.
inline Decoded decode(std::string_view s, std::size_t pos) {
    const auto byte = [&](std::size_t i) { return static_cast<unsigned char>(s[i]); };
    const unsigned char b0 = byte(pos);
    if (b0 < 0x80) return {b0, 1, true};

    std::size_t need = 0;
    char32_t cp = 0;
    char32_t min = 0;
    if ((b0 & 0xE0) == 0xC0) {
        need = 1; cp = b0 & 0x1F; min = 0x80;
    } else if ((b0 & 0xF0) == 0xE0) {
        need = 2; cp = b0 & 0x0F; min = 0x800;
    } else if ((b0 & 0xF8) == 0xF0) {
        need = 3; cp = b0 & 0x07; min = 0x10000;
    } else {
        return {};
    }
    if (pos + need >= s.size()) return {};
    for (std::size_t i = 1; i <= need; ++i) {
        const unsigned char b = byte(pos + i);
        if ((b & 0xC0) != 0x80) return {};
        cp = (cp << 6) | (b & 0x3F);
    }
    if (cp < min || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) return {};
    return {cp, need + 1, true};
}

// Byte offset of the first invalid sequence, or nullopt when `s` is valid.
inline std::optional<std::size_t> first_invalid(std::string_view s) {
    std::size_t pos = 0;
    while (pos < s.size()) {
        const auto d = decode(s, pos);
        if (!d.valid) return pos;
        pos += d.length;
    }
    return std::nullopt;
}

inline bool is_valid(std::string_view s) { return !first_invalid(s).has_value(); }

inline void append(std::string& out, char32_t cp) {
    if (cp < 0x80) {
        out.push_back(static_cast<char>(cp));
    } else if (cp < 0x800) {
        out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else if (cp < 0x10000) {
        out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else {
        out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    }
}

inline std::string encode(char32_t cp) {
    std::string out;
    append(out, cp);
    return out;
}

inline std::string encode(std::u32string_view cps) {
    std::string out;
    for (char32_t cp : cps) append(out, cp);
    return out;
}

// Lossy decode: invalid bytes become U+FFFD.
inline std::u32string decode_all(std::string_view s) {
    std::u32string out;
    std::size_t pos = 0;
    while (pos < s.size()) {
        const auto d = decode(s, pos);
        out.push_back(d.scalar);
        pos += d.length;
    }
    return out;
}

inline std::size_t count_scalars(std::string_view s) {
    std::size_t n = 0;
    std::size_t pos = 0;
    while (pos < s.size()) {
        pos += decode(s, pos).length;
        ++n;
    }
    return n;
}

inline std::string_view strip_bom(std::string_view s) {
    if (s.size() >= 3 && s.substr(0, 3) == "\xEF\xBB\xBF") s.remove_prefix(3);
    return s;
}

}  // namespace liwcad::utf8
