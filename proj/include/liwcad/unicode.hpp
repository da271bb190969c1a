#pragma once

// Thin ICU wrappers: normalization, case folding and the character
// properties the classifier falls back on.

#include <algorithm>
#include <stdexcept>
#include <string>
#include <string_view>

#include <unicode/normalizer2.h>
#include <unicode/uchar.h>
#include <unicode/unistr.h>

namespace liwcad::unicode {

namespace detail {

inline const icu::Normalizer2& nfkc_instance() {
    static const icu::Normalizer2* instance = [] {
        UErrorCode status = U_ZERO_ERROR;
        const icu::Normalizer2* n = icu::Normalizer2::getNFKCInstance(status);
        if (U_FAILURE(status) || n == nullptr) {
            throw std::runtime_error(std::string("ICU NFKC unavailable: ") + u_errorName(status));
        }
        return n;
    }();
    return *instance;
}

inline bool is_ascii(std::string_view s) {
    return std::all_of(s.begin(), s.end(), [](char c) { return static_cast<unsigned char>(c) < 0x80; });
}

}  // namespace detail

inline std::string nfkc(std::string_view s) {
    if (detail::is_ascii(s)) return std::string(s);
    UErrorCode status = U_ZERO_ERROR;
    const auto src = icu::UnicodeString::fromUTF8(icu::StringPiece(s.data(), static_cast<int32_t>(s.size())));
    icu::UnicodeString dst = detail::nfkc_instance().normalize(src, status);
    if (U_FAILURE(status)) throw std::runtime_error(std::string("NFKC failed: ") + u_errorName(status));
    std::string out;
    dst.toUTF8String(out);
    return out;
}

// NFKC followed by full case folding. Dictionary stems and tokens both go
// through this before any comparison.
inline std::string normalize_token(std::string_view s) {
    if (detail::is_ascii(s)) {
        std::string out(s);
        for (char& c : out) {
            if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
        }
        return out;
    }
    UErrorCode status = U_ZERO_ERROR;
    const auto src = icu::UnicodeString::fromUTF8(icu::StringPiece(s.data(), static_cast<int32_t>(s.size())));
    icu::UnicodeString dst = detail::nfkc_instance().normalize(src, status);
    if (U_FAILURE(status)) throw std::runtime_error(std::string("NFKC failed: ") + u_errorName(status));
    dst.foldCase(U_FOLD_CASE_DEFAULT);
    std::string out;
    dst.toUTF8String(out);
    return out;
}

inline std::u32string nfkc_scalar(char32_t cp) {
    icu::UnicodeString src(static_cast<UChar32>(cp));
    UErrorCode status = U_ZERO_ERROR;
    icu::UnicodeString dst = detail::nfkc_instance().normalize(src, status);
    std::u32string out;
    if (U_FAILURE(status)) return out;
    for (int32_t i = 0; i < dst.length();) {
        const UChar32 c = dst.char32At(i);
        out.push_back(static_cast<char32_t>(c));
        i += U16_LENGTH(c);
    }
    return out;
}

inline bool is_whitespace(char32_t cp) { return u_isUWhiteSpace(static_cast<UChar32>(cp)) != 0; }

inline bool is_decimal_digit(char32_t cp) {
    return u_charType(static_cast<UChar32>(cp)) == U_DECIMAL_DIGIT_NUMBER;
}

inline bool has_emoji_presentation(char32_t cp) {
    return u_hasBinaryProperty(static_cast<UChar32>(cp), UCHAR_EMOJI_PRESENTATION) != 0;
}

inline bool is_emoji_modifier(char32_t cp) { return cp >= 0x1F3FB && cp <= 0x1F3FF; }
inline bool is_regional_indicator(char32_t cp) { return cp >= 0x1F1E6 && cp <= 0x1F1FF; }

inline constexpr char32_t kVariationSelector16 = 0xFE0F;
inline constexpr char32_t kZeroWidthJoiner = 0x200D;
inline constexpr char32_t kCombiningKeycap = 0x20E3;

}  // namespace liwcad::unicode
