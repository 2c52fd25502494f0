#pragma once

// Turkish phonology primitives and the guarded surface-pattern engine used
// by lexical rules.
//
// A morphs block is an ordered list of patterns "lhs becomes rhs when guard".
// The lhs splits the surface into a stem and a final one- or two-letter
// window; the guard classifies the window (vowel harmony class, optionally
// consonant softening); the rhs rebuilds the surface from stem, window
// letters, the softened consonant, and literal suffix letters. Patterns are
// tried top to bottom; the first applicable one wins.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "lexer.hpp"
#include "text.hpp"

namespace hpsgtr {

using Letters = std::vector<std::string>;

inline Letters split_letters(std::string_view s) {
    Letters out;
    for (Codepoint c : utf8_decode(normalize_utf8(s))) {
        std::string l;
        utf8_append(l, c);
        out.push_back(std::move(l));
    }
    return out;
}

inline std::string join_letters(const Letters& ls) {
    std::string out;
    for (auto& l : ls) out += l;
    return out;
}

// --- vowel harmony classes and consonant softening -------------------------

inline bool back_unrounded(const std::string& l) { return l == "a" || l == "ı"; }
inline bool back_rounded(const std::string& l) { return l == "o" || l == "u"; }
inline bool front_unrounded(const std::string& l) { return l == "e" || l == "i"; }
inline bool front_rounded(const std::string& l) { return l == "ö" || l == "ü"; }
inline bool back_vowel(const std::string& l) {
    return back_unrounded(l) || back_rounded(l);
}
inline bool front_vowel(const std::string& l) {
    return front_unrounded(l) || front_rounded(l);
}
inline bool is_vowel(const std::string& l) { return back_vowel(l) || front_vowel(l); }

struct VowelClass {
    bool back, rounded;
};

inline std::optional<VowelClass> vowel_class(const std::string& l) {
    if (!is_vowel(l)) return std::nullopt;
    return VowelClass{back_vowel(l), back_rounded(l) || front_rounded(l)};
}

inline std::optional<std::string> soften(const std::string& c) {
    if (c == "p") return "b";
    if (c == "ç") return "c";
    if (c == "t") return "d";
    if (c == "k") return "ğ";
    return std::nullopt;
}

// --- guards -----------------------------------------------------------------

// The window of a guard is the final 1 or 2 letters of the surface; the
// classified vowel is the first letter of the window. "_yum" guards also
// require the final consonant to soften and expose the softened letter.
struct GuardResult {
    std::optional<std::string> softened;
};

inline std::optional<GuardResult> eval_guard(const std::string& name,
                                             const Letters& window) {
    auto single = [&](bool (*cls)(const std::string&)) -> std::optional<GuardResult> {
        if (window.size() != 1 || !cls(window[0])) return std::nullopt;
        return GuardResult{};
    };
    auto hece = [&](bool (*cls)(const std::string&)) -> std::optional<GuardResult> {
        if (window.empty() || window.size() > 2 || !cls(window[0]))
            return std::nullopt;
        return GuardResult{};
    };
    auto yum = [&](bool (*cls)(const std::string&)) -> std::optional<GuardResult> {
        if (window.size() != 2 || !cls(window[0])) return std::nullopt;
        auto s = soften(window[1]);
        if (!s) return std::nullopt;
        return GuardResult{std::move(s)};
    };
    if (name == "back") return single(back_vowel);
    if (name == "front") return single(front_vowel);
    if (name == "backrounded") return single(back_rounded);
    if (name == "frontrounded") return single(front_rounded);
    if (name == "backunrounded") return single(back_unrounded);
    if (name == "frontunrounded") return single(front_unrounded);
    if (name == "wovel") return single(is_vowel);
    if (name == "kalin_hece") return hece(back_vowel);
    if (name == "ince_hece") return hece(front_vowel);
    if (name == "b_r_hece") return hece(back_rounded);
    if (name == "f_r_hece") return hece(front_rounded);
    if (name == "b_u_hece") return hece(back_unrounded);
    if (name == "f_u_hece") return hece(front_unrounded);
    if (name == "kal_yum") return yum(back_vowel);
    if (name == "ince_yum") return yum(front_vowel);
    if (name == "b_r_yum") return yum(back_rounded);
    if (name == "f_r_yum") return yum(front_rounded);
    if (name == "b_u_yum") return yum(back_unrounded);
    if (name == "f_u_yum") return yum(front_unrounded);
    throw GrammarError("unknown-guard: '" + name + "'");
}

// --- pattern engine ---------------------------------------------------------

struct MorphPattern {
    enum class Lhs { Whole, VarWindow, One, Two } lhs = Lhs::Whole;
    struct Item {
        enum Kind { Stem, Window, First, Second, Softened, Lit } kind;
        std::string lit;
    };
    std::vector<Item> rhs;
    std::string guard; // empty = unconditional
};

struct Morphs {
    std::vector<MorphPattern> patterns;

    std::optional<std::string> apply(const std::string& surface) const {
        Letters ls = split_letters(surface);
        for (const MorphPattern& p : patterns) {
            std::vector<size_t> lens;
            switch (p.lhs) {
            case MorphPattern::Lhs::Whole: lens = {0}; break;
            case MorphPattern::Lhs::One: lens = {1}; break;
            case MorphPattern::Lhs::Two: lens = {2}; break;
            case MorphPattern::Lhs::VarWindow: lens = {1, 2}; break;
            }
            for (size_t len : lens) {
                if (ls.size() < len) continue;
                Letters stem(ls.begin(), ls.end() - len);
                Letters window(ls.end() - len, ls.end());
                GuardResult gr;
                if (!p.guard.empty()) {
                    auto r = eval_guard(p.guard, window);
                    if (!r) continue;
                    gr = *r;
                }
                Letters out;
                for (const auto& item : p.rhs) {
                    switch (item.kind) {
                    case MorphPattern::Item::Stem:
                        if (p.lhs == MorphPattern::Lhs::Whole)
                            out.insert(out.end(), ls.begin(), ls.end());
                        else
                            out.insert(out.end(), stem.begin(), stem.end());
                        break;
                    case MorphPattern::Item::Window:
                        out.insert(out.end(), window.begin(), window.end());
                        break;
                    case MorphPattern::Item::First:
                        out.push_back(window.at(0));
                        break;
                    case MorphPattern::Item::Second:
                        out.push_back(window.at(1));
                        break;
                    case MorphPattern::Item::Softened:
                        out.push_back(*gr.softened);
                        break;
                    case MorphPattern::Item::Lit:
                        for (auto& l : split_letters(item.lit)) out.push_back(l);
                        break;
                    }
                }
                return join_letters(out);
            }
        }
        return std::nullopt;
    }
};

// Parses a morphs block: "pat, pat, ... ." with
//   pat := lhs becomes rhs [when guard(args)]
//   lhs := X | (X) | (X,W) | (X,[L]) | (X,[L1,L2])
// The trailing '.' is consumed.
inline Morphs parse_morphs(Lexer& lx) {
    Morphs out;
    for (;;) {
        MorphPattern pat;
        std::string stem_var, window_var, l1_var, l2_var;
        // lhs
        if (lx.peek().kind == Tok::Var) {
            stem_var = lx.next().text;
            pat.lhs = MorphPattern::Lhs::Whole;
        } else {
            lx.expect("(");
            stem_var = lx.expect_kind(Tok::Var, "stem variable").text;
            if (lx.accept(",")) {
                if (lx.accept("[")) {
                    l1_var = lx.expect_kind(Tok::Var, "letter variable").text;
                    if (lx.accept(",")) {
                        l2_var = lx.expect_kind(Tok::Var, "letter variable").text;
                        pat.lhs = MorphPattern::Lhs::Two;
                    } else {
                        pat.lhs = MorphPattern::Lhs::One;
                    }
                    lx.expect("]");
                } else {
                    window_var = lx.expect_kind(Tok::Var, "window variable").text;
                    pat.lhs = MorphPattern::Lhs::VarWindow;
                }
            } else {
                pat.lhs = MorphPattern::Lhs::Whole;
            }
            lx.expect(")");
        }
        lx.expect("becomes");
        // rhs
        auto resolve = [&](const Token& t) -> MorphPattern::Item {
            if (t.kind == Tok::Var) {
                if (t.text == stem_var) return {MorphPattern::Item::Stem, ""};
                if (t.text == window_var) return {MorphPattern::Item::Window, ""};
                if (t.text == l1_var) return {MorphPattern::Item::First, ""};
                if (t.text == l2_var) return {MorphPattern::Item::Second, ""};
                // otherwise it must be the guard's softened-consonant output
                return {MorphPattern::Item::Softened, ""};
            }
            return {MorphPattern::Item::Lit, t.text};
        };
        if (lx.peek().kind == Tok::Var) {
            pat.rhs.push_back(resolve(lx.next()));
        } else {
            lx.expect("(");
            for (;;) {
                if (lx.accept("[")) {
                    for (;;) {
                        pat.rhs.push_back(resolve(lx.next()));
                        if (!lx.accept(",")) break;
                    }
                    lx.expect("]");
                } else {
                    pat.rhs.push_back(resolve(lx.next()));
                }
                if (!lx.accept(",")) break;
            }
            lx.expect(")");
        }
        // guard
        if (lx.accept("when")) {
            pat.guard = lx.expect_kind(Tok::Ident, "guard name").text;
            lx.expect("(");
            int depth = 1; // guard arguments restate the lhs; skip them
            while (depth > 0) {
                const std::string& t = lx.next().text;
                if (t == "(") ++depth;
                else if (t == ")") --depth;
                else if (t == "<end>") lx.fail("unterminated guard arguments");
            }
        }
        out.patterns.push_back(std::move(pat));
        if (lx.accept(",")) continue;
        lx.expect(".");
        break;
    }
    return out;
}

inline Morphs parse_morphs(std::string_view text) {
    Lexer lx(std::string(text) + " .", "<morphs>");
    return parse_morphs(lx);
}

// --- suffix catalog ----------------------------------------------------------

// Surface realization for the closed suffix inventory. The accusative,
// plural, possessive and copula blocks are the lexical-rule morphs blocks;
// the remaining case suffixes follow the same harmony/softening machinery
// with the buffer consonants of their archiphoneme templates: -(y/n)A,
// -(n)DA, -(n)DAn, -(n)Hn, -(y)lA.
inline const std::map<std::string, const char*>& suffix_catalog_sources() {
    static const std::map<std::string, const char*> cat{
        {"plural",
         "(X,L2) becomes (X,L2,lar) when kalin_hece(L2),"
         "(X,L2) becomes (X,L2,ler) when ince_hece(L2)."},
        {"acc",
         "(X,[L]) becomes (X,[L],yı) when backunrounded(L),"
         "(X,[L]) becomes (X,[L],yi) when frontunrounded(L),"
         "(X,[L]) becomes (X,[L],yu) when backrounded(L),"
         "(X,[L]) becomes (X,[L],yü) when frontrounded(L),"
         "(X,[L1,L2]) becomes (X,L1,[Y],[ı]) when b_u_yum([L1,L2],Y),"
         "(X,[L1,L2]) becomes (X,L1,[Y],[i]) when f_u_yum([L1,L2],Y),"
         "(X,[L1,L2]) becomes (X,L1,[Y],[u]) when b_r_yum([L1,L2],Y),"
         "(X,[L1,L2]) becomes (X,L1,[Y],[ü]) when f_r_yum([L1,L2],Y),"
         "(X,L2) becomes (X,L2,[ı]) when b_u_hece(L2),"
         "(X,L2) becomes (X,L2,i) when f_u_hece(L2),"
         "(X,L2) becomes (X,L2,u) when b_r_hece(L2),"
         "(X,L2) becomes (X,L2,[ü]) when f_r_hece(L2)."},
        {"acc_n",
         "(X,[L]) becomes (X,[L],nı) when backunrounded(L),"
         "(X,[L]) becomes (X,[L],ni) when frontunrounded(L),"
         "(X,[L]) becomes (X,[L],nu) when backrounded(L),"
         "(X,[L]) becomes (X,[L],nü) when frontrounded(L)."},
        {"dat",
         "(X,[L]) becomes (X,[L],ya) when back(L),"
         "(X,[L]) becomes (X,[L],ye) when front(L),"
         "(X,[L1,L2]) becomes (X,L1,[Y],[a]) when kal_yum([L1,L2],Y),"
         "(X,[L1,L2]) becomes (X,L1,[Y],[e]) when ince_yum([L1,L2],Y),"
         "(X,L2) becomes (X,L2,a) when kalin_hece(L2),"
         "(X,L2) becomes (X,L2,e) when ince_hece(L2)."},
        {"dat_n",
         "(X,[L]) becomes (X,[L],na) when back(L),"
         "(X,[L]) becomes (X,[L],ne) when front(L)."},
        {"loc",
         "(X,[L1,L2]) becomes (X,L1,[L2],ta) when kal_yum([L1,L2],Y),"
         "(X,[L1,L2]) becomes (X,L1,[L2],te) when ince_yum([L1,L2],Y),"
         "(X,L2) becomes (X,L2,da) when kalin_hece(L2),"
         "(X,L2) becomes (X,L2,de) when ince_hece(L2)."},
        {"loc_n",
         "(X,[L]) becomes (X,[L],nda) when back(L),"
         "(X,[L]) becomes (X,[L],nde) when front(L)."},
        {"abl",
         "(X,[L1,L2]) becomes (X,L1,[L2],tan) when kal_yum([L1,L2],Y),"
         "(X,[L1,L2]) becomes (X,L1,[L2],ten) when ince_yum([L1,L2],Y),"
         "(X,L2) becomes (X,L2,dan) when kalin_hece(L2),"
         "(X,L2) becomes (X,L2,den) when ince_hece(L2)."},
        {"abl_n",
         "(X,[L]) becomes (X,[L],ndan) when back(L),"
         "(X,[L]) becomes (X,[L],nden) when front(L)."},
        {"gen",
         "(X,[L]) becomes (X,[L],nın) when backunrounded(L),"
         "(X,[L]) becomes (X,[L],nin) when frontunrounded(L),"
         "(X,[L]) becomes (X,[L],nun) when backrounded(L),"
         "(X,[L]) becomes (X,[L],nün) when frontrounded(L),"
         "(X,[L1,L2]) becomes (X,L1,[Y],[ı,n]) when b_u_yum([L1,L2],Y),"
         "(X,[L1,L2]) becomes (X,L1,[Y],[i,n]) when f_u_yum([L1,L2],Y),"
         "(X,[L1,L2]) becomes (X,L1,[Y],[u,n]) when b_r_yum([L1,L2],Y),"
         "(X,[L1,L2]) becomes (X,L1,[Y],[ü,n]) when f_r_yum([L1,L2],Y),"
         "(X,L2) becomes (X,L2,[ı,n]) when b_u_hece(L2),"
         "(X,L2) becomes (X,L2,in) when f_u_hece(L2),"
         "(X,L2) becomes (X,L2,un) when b_r_hece(L2),"
         "(X,L2) becomes (X,L2,[ü,n]) when f_r_hece(L2)."},
        {"ins",
         "(X,[L]) becomes (X,[L],yla) when back(L),"
         "(X,[L]) becomes (X,[L],yle) when front(L),"
         "(X,L2) becomes (X,L2,la) when kalin_hece(L2),"
         "(X,L2) becomes (X,L2,le) when ince_hece(L2)."},
        {"poss3s",
         "(X,[L]) becomes (X,[L],sı) when backunrounded(L),"
         "(X,[L]) becomes (X,[L],si) when frontunrounded(L),"
         "(X,[L]) becomes (X,[L],su) when backrounded(L),"
         "(X,[L]) becomes (X,[L],sü) when frontrounded(L),"
         "(X,[L1,L2]) becomes (X,L1,[Y],[ı]) when b_u_yum([L1,L2],Y),"
         "(X,[L1,L2]) becomes (X,L1,[Y],[i]) when f_u_yum([L1,L2],Y),"
         "(X,[L1,L2]) becomes (X,L1,[Y],[u]) when b_r_yum([L1,L2],Y),"
         "(X,[L1,L2]) becomes (X,L1,[Y],[ü]) when f_r_yum([L1,L2],Y),"
         "(X,L2) becomes (X,L2,[ı]) when b_u_hece(L2),"
         "(X,L2) becomes (X,L2,i) when f_u_hece(L2),"
         "(X,L2) becomes (X,L2,u) when b_r_hece(L2),"
         "(X,L2) becomes (X,L2,[ü]) when f_r_hece(L2)."},
        {"poss1s",
         "(X,[L]) becomes (X,[L],m) when wovel(L),"
         "(X,[L1,L2]) becomes (X,L1,[Y],[ı,m]) when b_u_yum([L1,L2],Y),"
         "(X,[L1,L2]) becomes (X,L1,[Y],[i,m]) when f_u_yum([L1,L2],Y),"
         "(X,[L1,L2]) becomes (X,L1,[Y],um) when b_r_yum([L1,L2],Y),"
         "(X,[L1,L2]) becomes (X,L1,[Y],[ü,m]) when f_r_yum([L1,L2],Y),"
         "(X,L2) becomes (X,L2,[ı],m) when b_u_hece(L2),"
         "(X,L2) becomes (X,L2,im) when f_u_hece(L2),"
         "(X,L2) becomes (X,L2,um) when b_r_hece(L2),"
         "(X,L2) becomes (X,L2,[ü],m) when f_r_hece(L2)."},
        {"cop1s",
         "(X,[L2]) becomes (X,[L2],yım) when backunrounded(L2),"
         "(X,[L2]) becomes (X,[L2],yim) when frontunrounded(L2),"
         "(X,[L2]) becomes (X,[L2],yum) when backrounded(L2),"
         "(X,[L2]) becomes (X,[L2],yüm) when frontrounded(L2),"
         "(X,[L1,L2]) becomes (X,L1,[Y],[ı,m]) when b_u_yum([L1,L2],Y),"
         "(X,[L1,L2]) becomes (X,L1,[Y],[i,m]) when f_u_yum([L1,L2],Y),"
         "(X,[L1,L2]) becomes (X,L1,[Y],um) when b_r_yum([L1,L2],Y),"
         "(X,[L1,L2]) becomes (X,L1,[Y],[ü,m]) when f_r_yum([L1,L2],Y),"
         "(X,L2) becomes (X,L2,[ı],m) when b_u_hece(L2),"
         "(X,L2) becomes (X,L2,im) when f_u_hece(L2),"
         "(X,L2) becomes (X,L2,um) when b_r_hece(L2),"
         "(X,L2) becomes (X,L2,[ü],m) when f_r_hece(L2)."},
        {"cop3s",
         "(X,[L1,L2]) becomes (X,L1,[L2],tır) when b_u_yum([L1,L2],Y),"
         "(X,[L1,L2]) becomes (X,L1,[L2],tir) when f_u_yum([L1,L2],Y),"
         "(X,[L1,L2]) becomes (X,L1,[L2],tur) when b_r_yum([L1,L2],Y),"
         "(X,[L1,L2]) becomes (X,L1,[L2],tür) when f_r_yum([L1,L2],Y),"
         "(X,L2) becomes (X,L2,dır) when b_u_hece(L2),"
         "(X,L2) becomes (X,L2,dir) when f_u_hece(L2),"
         "(X,L2) becomes (X,L2,dur) when b_r_hece(L2),"
         "(X,L2) becomes (X,L2,dür) when f_r_hece(L2)."},
        {"rlvz-ki", "(X) becomes (X,ki)."},
    };
    return cat;
}

inline std::optional<std::string> harmonize_catalog(const std::string& stem,
                                                    const std::string& suffix_id) {
    static std::map<std::string, Morphs> parsed;
    auto it = parsed.find(suffix_id);
    if (it == parsed.end()) {
        auto src = suffix_catalog_sources().find(suffix_id);
        if (src == suffix_catalog_sources().end())
            throw GrammarError("unknown-suffix: '" + suffix_id + "'");
        it = parsed.emplace(suffix_id, parse_morphs(src->second)).first;
    }
    return it->second.apply(stem);
}

} // namespace hpsgtr
