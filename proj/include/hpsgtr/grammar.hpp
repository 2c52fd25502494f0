#pragma once

// Grammar bundle: a JSON manifest naming the signature, macro/constraint,
// clause, lexicon, lexical-rule and phrase-structure-rule files, plus parse
// limits. Loading is all-or-nothing.

#include <filesystem>
#include <fstream>
#include <memory>

#include "parser.hpp"
#include "render.hpp"

namespace hpsgtr {

struct Grammar {
    Signature sig;
    std::unique_ptr<Lexicon> lexicon;
    std::unique_ptr<Parser> parser;
    ParseLimits limits;
    std::string corpus_path;
};

namespace detail {

// The manifest is a flat JSON object: string, number, or array-of-string
// values only.
class ManifestParser {
public:
    explicit ManifestParser(std::string_view text) : t_(text) {}

    std::map<std::string, std::vector<std::string>> parse() {
        std::map<std::string, std::vector<std::string>> out;
        expect('{');
        skip();
        if (peek() == '}') { ++i_; return out; }
        while (true) {
            std::string key = str();
            expect(':');
            skip();
            std::vector<std::string> vals;
            if (peek() == '[') {
                ++i_;
                skip();
                if (peek() != ']')
                    while (true) {
                        vals.push_back(str());
                        skip();
                        if (peek() == ']') break;
                        expect(',');
                    }
                ++i_;
            } else if (peek() == '"') {
                vals.push_back(str());
            } else {
                std::string num;
                while (i_ < t_.size() && (isdigit(t_[i_]) || t_[i_] == '-'))
                    num += t_[i_++];
                if (num.empty()) fail("expected a value");
                vals.push_back(num);
            }
            out[key] = std::move(vals);
            skip();
            if (peek() == '}') { ++i_; break; }
            expect(',');
        }
        return out;
    }

private:
    char peek() {
        skip();
        if (i_ >= t_.size()) fail("unexpected end of manifest");
        return t_[i_];
    }
    void skip() { while (i_ < t_.size() && isspace((unsigned char)t_[i_])) ++i_; }
    void expect(char c) {
        if (peek() != c) fail(std::string("expected '") + c + "'");
        ++i_;
    }
    std::string str() {
        expect('"');
        std::string s;
        while (i_ < t_.size() && t_[i_] != '"') s += t_[i_++];
        expect('"');
        return s;
    }
    [[noreturn]] void fail(const std::string& msg) {
        throw GrammarError("manifest: " + msg);
    }

    std::string_view t_;
    size_t i_ = 0;
};

inline std::string read_file(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) throw GrammarError("cannot open '" + p.string() + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace detail

inline std::unique_ptr<Grammar> load_grammar(const std::string& manifest_path) {
    namespace fs = std::filesystem;
    fs::path mp(manifest_path);
    fs::path dir = mp.parent_path();
    auto m = detail::ManifestParser(detail::read_file(mp)).parse();

    auto one = [&](const std::string& key) -> std::string {
        auto it = m.find(key);
        if (it == m.end() || it->second.size() != 1)
            throw GrammarError("manifest: missing entry '" + key + "'");
        return it->second[0];
    };
    auto path = [&](const std::string& rel) { return (dir / rel).string(); };

    auto g = std::make_unique<Grammar>();
    g->sig = Signature::load(detail::read_file(path(one("signature"))),
                             one("signature"));
    g->lexicon = std::make_unique<Lexicon>(g->sig);
    g->lexicon->load_defs(detail::read_file(path(one("macros"))), one("macros"));
    g->lexicon->load_clauses(detail::read_file(path(one("clauses"))),
                             one("clauses"));
    g->lexicon->load_lexrules(detail::read_file(path(one("lexrules"))),
                              one("lexrules"));
    auto lx = m.find("lexicon");
    if (lx == m.end() || lx->second.empty())
        throw GrammarError("manifest: missing entry 'lexicon'");
    for (const std::string& f : lx->second)
        g->lexicon->load_entries(detail::read_file(path(f)), f);
    g->parser = std::make_unique<Parser>(*g->lexicon);
    g->parser->load_rules(detail::read_file(path(one("rules"))), one("rules"));
    if (m.count("max_edges")) g->limits.max_edges = std::stoul(one("max_edges"));
    if (m.count("corpus")) g->corpus_path = path(one("corpus"));
    return g;
}

} // namespace hpsgtr
