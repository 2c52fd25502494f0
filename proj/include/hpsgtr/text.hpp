#pragma once

// UTF-8 helpers. Grammar identifiers and surface forms may contain the
// Turkish letters ç, ğ, ı, ö, ş, ü (and their capitals); everything is
// handled as sequences of Unicode code points.

#include <cstdint>
#include <string>
#include <vector>

namespace hpsgtr {

using Codepoint = char32_t;

inline std::vector<Codepoint> utf8_decode(std::string_view s) {
    std::vector<Codepoint> out;
    size_t i = 0;
    while (i < s.size()) {
        unsigned char c = s[i];
        Codepoint cp = 0;
        int n = 0;
        if (c < 0x80) { cp = c; n = 1; }
        else if ((c >> 5) == 0x6) { cp = c & 0x1f; n = 2; }
        else if ((c >> 4) == 0xe) { cp = c & 0x0f; n = 3; }
        else if ((c >> 3) == 0x1e) { cp = c & 0x07; n = 4; }
        else { cp = 0xFFFD; n = 1; }
        for (int k = 1; k < n && i + k < s.size(); ++k)
            cp = (cp << 6) | (s[i + k] & 0x3f);
        out.push_back(cp);
        i += n;
    }
    return out;
}

inline void utf8_append(std::string& out, Codepoint cp) {
    if (cp < 0x80) out += char(cp);
    else if (cp < 0x800) {
        out += char(0xc0 | (cp >> 6));
        out += char(0x80 | (cp & 0x3f));
    } else if (cp < 0x10000) {
        out += char(0xe0 | (cp >> 12));
        out += char(0x80 | ((cp >> 6) & 0x3f));
        out += char(0x80 | (cp & 0x3f));
    } else {
        out += char(0xf0 | (cp >> 18));
        out += char(0x80 | ((cp >> 12) & 0x3f));
        out += char(0x80 | ((cp >> 6) & 0x3f));
        out += char(0x80 | (cp & 0x3f));
    }
}

inline std::string utf8_encode(const std::vector<Codepoint>& cps) {
    std::string out;
    for (Codepoint cp : cps) utf8_append(out, cp);
    return out;
}

// Composes the decomposed (NFD) spellings of the Turkish letters into their
// precomposed forms so that pattern matching sees a single code point per
// letter. Only the combining marks these letters use are handled.
inline std::vector<Codepoint> compose_turkish(std::vector<Codepoint> cps) {
    std::vector<Codepoint> out;
    out.reserve(cps.size());
    auto compose = [](Codepoint base, Codepoint mark) -> Codepoint {
        switch (mark) {
        case 0x0327: // cedilla
            if (base == U'c') return U'ç';
            if (base == U'C') return U'Ç';
            if (base == U's') return U'ş';
            if (base == U'S') return U'Ş';
            break;
        case 0x0306: // breve
            if (base == U'g') return U'ğ';
            if (base == U'G') return U'Ğ';
            break;
        case 0x0308: // diaeresis
            if (base == U'o') return U'ö';
            if (base == U'O') return U'Ö';
            if (base == U'u') return U'ü';
            if (base == U'U') return U'Ü';
            break;
        case 0x0307: // dot above
            if (base == U'I') return U'İ';
            break;
        }
        return 0;
    };
    for (Codepoint cp : cps) {
        if (!out.empty()) {
            if (Codepoint comp = compose(out.back(), cp)) {
                out.back() = comp;
                continue;
            }
        }
        out.push_back(cp);
    }
    return out;
}

inline std::string normalize_utf8(std::string_view s) {
    return utf8_encode(compose_turkish(utf8_decode(s)));
}

// Turkish-aware lowercasing for the letters that appear in the grammar.
inline Codepoint to_lower_tr(Codepoint cp) {
    switch (cp) {
    case U'I': return U'ı';
    case U'İ': return U'i';
    case U'Ç': return U'ç';
    case U'Ğ': return U'ğ';
    case U'Ö': return U'ö';
    case U'Ş': return U'ş';
    case U'Ü': return U'ü';
    default:
        if (cp >= U'A' && cp <= U'Z') return cp - U'A' + U'a';
        return cp;
    }
}

inline std::string lower_tr(std::string_view s) {
    auto cps = utf8_decode(s);
    for (auto& c : cps) c = to_lower_tr(c);
    return utf8_encode(cps);
}

} // namespace hpsgtr
