// Command-line front end: parse sentences, run regression corpora, and
// inspect lexicon entries against a grammar bundle.

#include <cstdlib>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "hpsgtr/grammar.hpp"

using namespace hpsgtr;

namespace {

std::string default_bundle() {
    if (const char* env = std::getenv("HPSGTR_BUNDLE")) return env;
    return std::string(HPSGTR_GRAMMAR_DIR) + "/bundle.json";
}

std::string tree_text(const ParseResult& res, int id) {
    const Edge& e = res.edges[id];
    if (e.rule == "lexical") return "(lexical " + e.surface + ")";
    if (e.rule == "empty") return "(empty)";
    std::string out = "(" + e.rule;
    for (int d : e.dtrs) out += " " + tree_text(res, d);
    return out + ")";
}

struct ParseFlags {
    bool all = false, tree = false, avm = false, json = false, trace = false;
    size_t max_edges = 0;
    int depth = -1;
};

int cmd_parse(Grammar& g, const std::vector<std::string>& words,
              const ParseFlags& f) {
    if (f.depth >= 0) g.lexicon->set_rule_depth(f.depth);
    ParseLimits limits = g.limits;
    if (f.max_edges) limits.max_edges = f.max_edges;
    if (f.trace) limits.trace = &std::cerr;

    std::string sentence;
    for (const std::string& w : words) sentence += (sentence.empty() ? "" : " ") + w;
    ParseResult res = g.parser->parse_sentence(sentence, limits);
    if (res.sentences.empty()) {
        std::cout << "no parse\n";
        return 1;
    }
    size_t shown = f.all ? res.sentences.size() : 1;
    std::cout << res.sentences.size() << " sentential parse(s)\n";
    for (size_t i = 0; i < shown; ++i) {
        int id = res.sentences[i];
        if (f.json)
            std::cout << render_json(res.edges[id].fs) << "\n";
        else if (f.tree)
            std::cout << tree_text(res, id) << "\n";
        else
            std::cout << render_avm(res.edges[id].fs) << "\n";
    }
    return 0;
}

int cmd_corpus(Grammar& g, const std::string& file) {
    std::ifstream in(file, std::ios::binary);
    if (!in) {
        std::cerr << "hpsgtr: cannot open corpus '" << file << "'\n";
        return 2;
    }
    int passed = 0, failed = 0;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        size_t tab = line.find('\t');
        if (tab == std::string::npos) {
            std::cerr << file << ":" << lineno << ": missing tab separator\n";
            return 2;
        }
        std::string expect = line.substr(0, tab);
        std::string sentence = line.substr(tab + 1);
        size_t got = g.parser->parse_sentence(sentence, g.limits).sentences.size();
        bool ok;
        if (expect == "OK") ok = got > 0;
        else if (expect == "NO") ok = got == 0;
        else if (expect.rfind("N=", 0) == 0)
            ok = got == std::stoul(expect.substr(2));
        else {
            std::cerr << file << ":" << lineno << ": bad expectation '" << expect
                      << "'\n";
            return 2;
        }
        (ok ? passed : failed)++;
        std::cout << (ok ? "pass" : "FAIL") << "\t" << expect << "\t" << got
                  << "\t" << sentence << "\n";
    }
    std::cout << passed << " passed, " << failed << " failed\n";
    return failed == 0 ? 0 : 1;
}

int cmd_lexicon(Grammar& g, const std::string& token) {
    auto entries = g.lexicon->lookup(token);
    if (entries.empty()) {
        std::cout << "unknown token '" << token << "'\n";
        return 1;
    }
    for (const LexEntry* e : entries) {
        std::cout << e->surface;
        for (const std::string& r : e->chain) std::cout << " <- " << r;
        std::cout << "\n" << render_avm(e->fs) << "\n\n";
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"HPSG grammar engine for Turkish"};
    app.require_subcommand(1);
    std::string bundle = default_bundle();
    app.add_option("--bundle", bundle, "grammar bundle manifest");

    auto* parse = app.add_subcommand("parse", "parse a sentence");
    ParseFlags flags;
    std::vector<std::string> words;
    parse->add_flag("--all", flags.all, "print every sentential parse");
    parse->add_flag("--tree", flags.tree, "print bracketed trees");
    parse->add_flag("--avm", flags.avm, "print attribute-value matrices");
    parse->add_flag("--json", flags.json, "print machine-readable structures");
    parse->add_flag("--trace", flags.trace, "log edges to stderr");
    parse->add_option("--max-edges", flags.max_edges, "chart edge limit");
    parse->add_option("--depth", flags.depth, "lexical-rule closure depth");
    parse->add_option("sentence", words, "sentence tokens")->required();

    auto* corpus = app.add_subcommand("corpus", "run a regression corpus");
    std::string corpus_file;
    corpus->add_option("file", corpus_file, "corpus file (default: bundled)");

    auto* lexicon = app.add_subcommand("lexicon", "show entries for a token");
    std::string token;
    lexicon->add_option("token", token, "surface form")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        auto g = load_grammar(bundle);
        if (parse->parsed()) return cmd_parse(*g, words, flags);
        if (corpus->parsed())
            return cmd_corpus(*g, corpus_file.empty() ? g->corpus_path
                                                      : corpus_file);
        return cmd_lexicon(*g, token);
    } catch (const std::exception& ex) {
        std::cerr << "hpsgtr: " << ex.what() << "\n";
        return 2;
    }
}
