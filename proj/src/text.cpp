#include "subcollect/text.hpp"

#include <algorithm>
#include <array>
#include <cctype>

namespace subcollect {

namespace {

// Windows-1252 0x80..0x9F; zero marks an unassigned byte.
constexpr std::array<char32_t, 32> kCp1252High = {
    0x20AC, 0,      0x201A, 0x0192, 0x201E, 0x2026, 0x2020, 0x2021, 0x02C6, 0x2030, 0x0160,
    0x2039, 0x0152, 0,      0x017D, 0,      0,      0x2018, 0x2019, 0x201C, 0x201D, 0x2022,
    0x2013, 0x2014, 0x02DC, 0x2122, 0x0161, 0x203A, 0x0153, 0,      0x017E, 0x0178};

struct Range {
    char32_t lo, hi;
};

constexpr Range kWordRanges[] = {
    {'0', '9'},       {'A', 'Z'},       {'a', 'z'},       {0xAA, 0xAA},     {0xB5, 0xB5},
    {0xBA, 0xBA},     {0xC0, 0xD6},     {0xD8, 0xF6},     {0xF8, 0x2C1},    {0x370, 0x374},
    {0x376, 0x377},   {0x37B, 0x37D},   {0x37F, 0x37F},   {0x386, 0x386},   {0x388, 0x3FF},
    {0x400, 0x481},   {0x48A, 0x52F},   {0x531, 0x556},   {0x561, 0x587},   {0x5D0, 0x5EA},
    {0x620, 0x64A},   {0x660, 0x669},   {0x671, 0x6D3},   {0x904, 0x939},   {0x966, 0x96F},
    {0xE01, 0xE30},   {0xE50, 0xE59},   {0x1E00, 0x1FBC}, {0x1FC2, 0x1FCC}, {0x1FD0, 0x1FDB},
    {0x1FE0, 0x1FEC}, {0x1FF2, 0x1FFC}, {0x3041, 0x3096}, {0x30A1, 0x30FA}, {0x3400, 0x4DBF},
    {0x4E00, 0x9FFF}, {0xAC00, 0xD7A3}, {0xFF10, 0xFF19}, {0xFF21, 0xFF3A}, {0xFF41, 0xFF5A},
};

bool even(char32_t c) { return c % 2 == 0; }

}  // namespace

std::optional<Charset> charset_from_label(std::string_view label) {
    std::string l;
    for (char c : label)
        if (c != ' ' && c != '"' && c != '\'') l += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    if (l == "utf-8" || l == "utf8") return Charset::utf8;
    if (l == "iso-8859-1" || l == "iso8859-1" || l == "latin1" || l == "latin-1" || l == "l1" ||
        l == "us-ascii" || l == "ascii" || l == "iso_8859-1")
        return Charset::latin1;
    if (l == "windows-1252" || l == "cp1252" || l == "x-cp1252") return Charset::windows1252;
    return std::nullopt;
}

std::u32string decode_text(std::string_view bytes, Charset charset) {
    std::u32string out;
    out.reserve(bytes.size());
    if (charset != Charset::utf8) {
        for (char ch : bytes) {
            const auto b = static_cast<unsigned char>(ch);
            if (charset == Charset::windows1252 && b >= 0x80 && b <= 0x9F) {
                const char32_t mapped = kCp1252High[b - 0x80];
                out += mapped ? mapped : U'�';
            } else {
                out += static_cast<char32_t>(b);
            }
        }
        return out;
    }
    std::size_t i = 0;
    while (i < bytes.size()) {
        const auto b0 = static_cast<unsigned char>(bytes[i]);
        int extra = 0;
        char32_t cp = 0;
        char32_t min = 0;
        if (b0 < 0x80) {
            out += b0;
            ++i;
            continue;
        } else if ((b0 & 0xE0) == 0xC0) {
            extra = 1, cp = b0 & 0x1F, min = 0x80;
        } else if ((b0 & 0xF0) == 0xE0) {
            extra = 2, cp = b0 & 0x0F, min = 0x800;
        } else if ((b0 & 0xF8) == 0xF0) {
            extra = 3, cp = b0 & 0x07, min = 0x10000;
        } else {
            out += U'�';
            ++i;
            continue;
        }
        if (i + extra >= bytes.size()) {
            out += U'�';
            ++i;
            continue;
        }
        bool ok = true;
        for (int k = 1; k <= extra; ++k) {
            const auto b = static_cast<unsigned char>(bytes[i + k]);
            if ((b & 0xC0) != 0x80) {
                ok = false;
                break;
            }
            cp = (cp << 6) | (b & 0x3F);
        }
        if (!ok || cp < min || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) {
            out += U'�';
            ++i;
            continue;
        }
        out += cp;
        i += extra + 1;
    }
    return out;
}

bool is_word_char(char32_t c) {
    for (const auto& r : kWordRanges) {
        if (c < r.lo) return false;
        if (c <= r.hi) return true;
    }
    return false;
}

char32_t to_lower(char32_t c) {
    if (c < 0x80) return (c >= 'A' && c <= 'Z') ? c + 32 : c;
    if (c >= 0xC0 && c <= 0xDE && c != 0xD7) return c + 0x20;
    if (c == 0x130) return U'i';
    if (c == 0x178) return 0xFF;
    if ((c >= 0x100 && c <= 0x137 && even(c)) || (c >= 0x139 && c <= 0x148 && !even(c)) ||
        (c >= 0x14A && c <= 0x177 && even(c)) || (c >= 0x179 && c <= 0x17E && !even(c)) ||
        (c >= 0x1CD && c <= 0x1DC && !even(c)) || (c >= 0x1DE && c <= 0x1EF && even(c)) ||
        (c >= 0x1F8 && c <= 0x21F && even(c)) || (c >= 0x222 && c <= 0x233 && even(c)))
        return c + 1;
    if ((c >= 0x391 && c <= 0x3A1) || (c >= 0x3A3 && c <= 0x3AB)) return c + 0x20;
    if (c == 0x386) return 0x3AC;
    if (c >= 0x388 && c <= 0x38A) return c + 0x25;
    if (c == 0x38C) return 0x3CC;
    if (c == 0x38E || c == 0x38F) return c + 0x3F;
    if (c >= 0x410 && c <= 0x42F) return c + 0x20;
    if (c >= 0x400 && c <= 0x40F) return c + 0x50;
    if ((c >= 0x460 && c <= 0x481 && even(c)) || (c >= 0x48A && c <= 0x4BF && even(c)) ||
        (c >= 0x4C1 && c <= 0x4CE && !even(c)) || (c >= 0x4D0 && c <= 0x52F && even(c)))
        return c + 1;
    if (c == 0x4C0) return 0x4CF;
    if (c >= 0x531 && c <= 0x556) return c + 0x30;
    if (c == 0x1E9E) return 0xDF;
    if (((c >= 0x1E00 && c <= 0x1E95) || (c >= 0x1EA0 && c <= 0x1EFF)) && even(c)) return c + 1;
    if (c >= 0xFF21 && c <= 0xFF3A) return c + 0x20;
    return c;
}

void append_utf8(std::string& out, char32_t c) {
    if (c < 0x80) {
        out += static_cast<char>(c);
    } else if (c < 0x800) {
        out += static_cast<char>(0xC0 | (c >> 6));
        out += static_cast<char>(0x80 | (c & 0x3F));
    } else if (c < 0x10000) {
        out += static_cast<char>(0xE0 | (c >> 12));
        out += static_cast<char>(0x80 | ((c >> 6) & 0x3F));
        out += static_cast<char>(0x80 | (c & 0x3F));
    } else {
        out += static_cast<char>(0xF0 | (c >> 18));
        out += static_cast<char>(0x80 | ((c >> 12) & 0x3F));
        out += static_cast<char>(0x80 | ((c >> 6) & 0x3F));
        out += static_cast<char>(0x80 | (c & 0x3F));
    }
}

void append_tokens(std::u32string_view text, std::vector<std::string>& out) {
    std::string current;
    for (char32_t c : text) {
        if (is_word_char(c)) {
            append_utf8(current, to_lower(c));
        } else if (!current.empty()) {
            out.push_back(std::move(current));
            current.clear();
        }
    }
    if (!current.empty()) out.push_back(std::move(current));
}

std::vector<std::string> tokenize(std::string_view utf8_text) {
    std::vector<std::string> out;
    append_tokens(decode_text(utf8_text, Charset::utf8), out);
    return out;
}

}  // namespace subcollect
