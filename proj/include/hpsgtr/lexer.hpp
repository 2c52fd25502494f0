#pragma once

// Tokenizer for the grammar source files: signature clauses, macro and cons
// declarations, lexicon entries, phrase structure rules, and lexical rules.
// `%` starts a line comment. Identifiers may contain UTF-8 letters.

#include <stdexcept>
#include <string>
#include <vector>

#include "text.hpp"

namespace hpsgtr {

struct GrammarError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class Tok {
    Ident,     // lowercase-initial identifier (sort, feature, clause keyword)
    Var,       // uppercase-initial identifier or _
    Punct,     // single-char punctuation ( ) [ ] { } , ; : | @
    Op,        // multi-char operators ---> ===> **> =\= == :- .
    End,
};

struct Token {
    Tok kind;
    std::string text;
    int line = 0;
};

class Lexer {
public:
    explicit Lexer(std::string_view src, std::string file = "<input>")
        : file_(std::move(file)) {
        tokenize(normalize_utf8(src));
    }

    const Token& peek(size_t ahead = 0) const {
        size_t i = pos_ + ahead;
        return i < toks_.size() ? toks_[i] : end_;
    }
    Token next() {
        Token t = peek();
        if (pos_ < toks_.size()) ++pos_;
        return t;
    }
    bool at_end() const { return pos_ >= toks_.size(); }

    bool accept(std::string_view text) {
        if (peek().text == text && peek().kind != Tok::End) { next(); return true; }
        return false;
    }
    Token expect(std::string_view text) {
        if (!at_end() && peek().text == text) return next();
        fail("expected '" + std::string(text) + "', found '" + peek().text + "'");
    }
    Token expect_kind(Tok kind, const char* what) {
        if (peek().kind == kind) return next();
        fail(std::string("expected ") + what + ", found '" + peek().text + "'");
    }

    [[noreturn]] void fail(const std::string& msg) const {
        throw GrammarError(file_ + ":" + std::to_string(peek().line) + ": " + msg);
    }

private:
    static bool ident_start(Codepoint c) {
        return (c >= U'a' && c <= U'z') || (c >= U'A' && c <= U'Z') || c == U'_' ||
               c >= 0x80;
    }
    static bool ident_char(Codepoint c) {
        return ident_start(c) || (c >= U'0' && c <= U'9');
    }
    static bool upper_start(Codepoint c) {
        return (c >= U'A' && c <= U'Z') || c == U'_';
    }

    void tokenize(const std::string& src) {
        auto cps = utf8_decode(src);
        size_t i = 0;
        int line = 1;
        auto push = [&](Tok k, std::string s) { toks_.push_back({k, std::move(s), line}); };
        while (i < cps.size()) {
            Codepoint c = cps[i];
            if (c == U'\n') { ++line; ++i; continue; }
            if (c == U' ' || c == U'\t' || c == U'\r') { ++i; continue; }
            if (c == U'%') {
                while (i < cps.size() && cps[i] != U'\n') ++i;
                continue;
            }
            if (ident_start(c)) {
                std::vector<Codepoint> id;
                while (i < cps.size() && ident_char(cps[i])) id.push_back(cps[i++]);
                push(upper_start(c) ? Tok::Var : Tok::Ident, utf8_encode(id));
                continue;
            }
            if (c >= U'0' && c <= U'9') {
                std::vector<Codepoint> num;
                while (i < cps.size() && cps[i] >= U'0' && cps[i] <= U'9')
                    num.push_back(cps[i++]);
                push(Tok::Ident, utf8_encode(num));
                continue;
            }
            auto starts = [&](std::string_view s) {
                auto scp = utf8_decode(s);
                if (i + scp.size() > cps.size()) return false;
                for (size_t k = 0; k < scp.size(); ++k)
                    if (cps[i + k] != scp[k]) return false;
                return true;
            };
            bool matched = false;
            for (std::string_view op : {"--->", "===>", "**>", "=\\=", "==", ":-"}) {
                if (starts(op)) {
                    push(Tok::Op, std::string(op));
                    i += utf8_decode(op).size();
                    matched = true;
                    break;
                }
            }
            if (matched) continue;
            if (c == U'.' || c == U'!') {
                push(Tok::Op, std::string(1, char(c)));
                ++i;
                continue;
            }
            std::string p;
            utf8_append(p, c);
            static const std::string punct = "()[]{},;:|@<>";
            if (c < 0x80 && punct.find(char(c)) != std::string::npos) {
                push(Tok::Punct, p);
                ++i;
                continue;
            }
            toks_.push_back({Tok::End, p, line});
            pos_ = toks_.size() - 1;
            fail("unexpected character '" + p + "'");
        }
        end_ = {Tok::End, "<end>", line};
    }

    std::string file_;
    std::vector<Token> toks_;
    Token end_{Tok::End, "<end>", 0};
    size_t pos_ = 0;
};

} // namespace hpsgtr
