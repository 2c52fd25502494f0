#pragma once

// Bottom-up chart parser driving the phrase structure rules. Rule files use
//   name rule Mother ===> cat> Dtr1, ..., goal> (Goal, ...).
// Daughters are matched left to right over adjacent spans; the goals run
// through the clause engine after the mother and daughter descriptions have
// been applied. Edges are packed per span and rule up to iso-equality.

#include <deque>
#include <optional>

#include "lexicon.hpp"

namespace hpsgtr {

struct Edge {
    FS fs;
    int from = 0, to = 0;
    std::string rule;          // rule name, or "lexical" / "empty"
    std::vector<int> dtrs;     // edge indices, surface order
    std::string surface;       // token for lexical edges
    const LexEntry* entry = nullptr;
};

struct ParseLimits {
    size_t max_edges = 20000;
    std::ostream* trace = nullptr; // edge-by-edge log
};

struct ParseResult {
    std::vector<Edge> edges;
    std::vector<int> full;      // edge ids spanning the input
    std::vector<int> sentences; // full edges accepted as sentences
};

class Parser {
public:
    explicit Parser(Lexicon& lex) : lex_(&lex) {}

    void load_rules(std::string_view text, std::string file = "<rules>") {
        Lexer lx(text, std::move(file));
        while (!lx.at_end()) {
            Rule r;
            r.name = lx.expect_kind(Tok::Ident, "rule name").text;
            lx.expect("rule");
            DescParser p(lx);
            Desc mother = p.parse_primary();
            lx.expect("===>");
            std::vector<Desc> dtrs;
            std::string goals = "true";
            std::string head_var;
            while (true) {
                Token kw = lx.expect_kind(Tok::Ident, "'cat' or 'goal'");
                lx.expect(">");
                if (kw.text == "cat") {
                    dtrs.push_back(p.parse_primary());
                    if (!lx.accept(",")) { lx.expect("."); break; }
                    continue;
                }
                if (kw.text != "goal") lx.fail("expected 'cat>' or 'goal>'");
                lx.expect("(");
                goals = goal_list(lx, p, head_var);
                lx.expect(")");
                lx.expect(".");
                break;
            }
            if (dtrs.empty()) lx.fail("rule '" + r.name + "' has no daughters");
            r.arity = dtrs.size();
            for (size_t i = 0; i < dtrs.size(); ++i)
                if (!head_var.empty() && first_var(dtrs[i]) == head_var)
                    r.head_dtr = int(i);
            std::string head = desc_to_text(mother);
            for (const Desc& d : dtrs) head += "," + desc_to_text(d);
            lex_->clauses().load(
                "rule_" + r.name + "(" + head + ") if " + goals + ".",
                "<rule:" + r.name + ">");
            rules_.push_back(std::move(r));
        }
    }

    struct Rule {
        std::string name;
        size_t arity = 0;
        int head_dtr = -1; // daughter named in head_feature_principle
    };
    const std::vector<Rule>& rules() const { return rules_; }

    static std::vector<std::string> tokenize(std::string_view sentence) {
        std::string norm = normalize_utf8(sentence);
        std::vector<std::string> out;
        std::string cur;
        for (size_t i = 0; i <= norm.size(); ++i) {
            if (i == norm.size() || isspace((unsigned char)norm[i])) {
                while (!cur.empty() && std::string(".?!,;:").find(cur.back()) !=
                                           std::string::npos)
                    cur.pop_back();
                if (!cur.empty()) out.push_back(cur);
                cur.clear();
            } else {
                cur += norm[i];
            }
        }
        if (out.empty()) throw GrammarError("empty input");
        return out;
    }

    ParseResult parse(const std::vector<std::string>& tokens,
                      ParseLimits limits = {}) const {
        ParseResult res;
        int n = int(tokens.size());
        for (int i = 0; i < n; ++i)
            if (lex_->lookup(tokens[i]).empty())
                throw GrammarError("unknown token '" + tokens[i] +
                                   "' at position " + std::to_string(i + 1));

        std::deque<int> agenda;
        auto assert_edge = [&](Edge e) {
            // packs schema1a/1b duplicates: first derivation wins
            for (int id : span_index(res, e.from, e.to))
                if (iso_equal(res.edges[id].fs, e.fs)) return;
            if (res.edges.size() >= limits.max_edges)
                throw GrammarError("edge limit exceeded (" +
                                   std::to_string(limits.max_edges) + ")");
            int id = int(res.edges.size());
            if (limits.trace) {
                const Graph& g = *e.fs.graph;
                *limits.trace << "edge " << id << " [" << e.from << "," << e.to
                              << ") " << e.rule << " "
                              << g.sig().sort_name(g.sort_of(g.deref(e.fs.root)));
                for (int d : e.dtrs) *limits.trace << " <" << d;
                *limits.trace << "\n";
            }
            res.edges.push_back(std::move(e));
            agenda.push_back(id);
        };

        // lexical edges right to left, then the empty categories
        for (int i = n - 1; i >= 0; --i)
            for (const LexEntry* le : lex_->lookup(tokens[i]))
                assert_edge(Edge{le->fs, i, i + 1, "lexical", {}, tokens[i], le});
        for (int i = n; i >= 0; --i)
            for (const LexEntry& le : lex_->empty_categories())
                assert_edge(Edge{le.fs, i, i, "empty", {}, "", &le});

        while (!agenda.empty()) {
            int id = agenda.front();
            agenda.pop_front();
            for (const Rule& r : rules_) {
                if (r.arity == 1) {
                    for (Edge& m : apply(r, {id}, res))
                        assert_edge(std::move(m));
                    continue;
                }
                // as left daughter with every adjacent right neighbour
                std::vector<int> partners;
                for (int j = 0; j < int(res.edges.size()); ++j) {
                    if (j == id && res.edges[id].from == res.edges[id].to)
                        continue;
                    if (res.edges[j].from == res.edges[id].to)
                        partners.push_back(j);
                }
                for (int j : partners)
                    for (Edge& m : apply(r, {id, j}, res))
                        assert_edge(std::move(m));
                partners.clear();
                for (int j = 0; j < int(res.edges.size()); ++j) {
                    if (j == id) continue;
                    if (res.edges[j].to == res.edges[id].from)
                        partners.push_back(j);
                }
                for (int j : partners)
                    for (Edge& m : apply(r, {j, id}, res))
                        assert_edge(std::move(m));
            }
        }

        for (int id = 0; id < int(res.edges.size()); ++id)
            if (res.edges[id].from == 0 && res.edges[id].to == n && n > 0) {
                res.full.push_back(id);
                if (accept_sentence(res.edges[id].fs)) res.sentences.push_back(id);
            }
        return res;
    }

    ParseResult parse_sentence(std::string_view sentence,
                               ParseLimits limits = {}) const {
        return parse(tokenize(sentence), limits);
    }

    // A sentence is a saturated phrase with bound nonlocal features and a
    // finite or predicative head.
    bool accept_sentence(const FS& fs) const {
        for (const Desc& alt : sentence_descs()) {
            Graph g(*fs.graph);
            std::map<std::string, NodeRef> env;
            DescBuilder b(g, env, nullptr);
            if (b.apply(fs.root, alt)) return true;
        }
        return false;
    }

private:
    static std::string goal_list(Lexer& lx, DescParser& p,
                                 std::string& head_var) {
        std::string out;
        do {
            std::string goal = lx.expect_kind(Tok::Ident, "goal name").text;
            bool is_hfp = goal == "head_feature_principle";
            if (lx.accept("(")) {
                goal += "(";
                if (!lx.accept(")")) {
                    std::vector<Desc> args;
                    args.push_back(p.parse_primary());
                    goal += desc_to_text(args.back());
                    while (lx.accept(",")) {
                        args.push_back(p.parse_primary());
                        goal += "," + desc_to_text(args.back());
                    }
                    lx.expect(")");
                    if (is_hfp && args.size() == 2) head_var = first_var(args[1]);
                }
                goal += ")";
            }
            if (!out.empty()) out += ",";
            out += goal;
        } while (lx.accept(","));
        return out;
    }

    static std::string first_var(const Desc& d) {
        if (d.kind == Desc::Var) return d.text;
        for (const Desc& k : d.kids) {
            std::string v = first_var(k);
            if (!v.empty()) return v;
        }
        return "";
    }

    static std::vector<int> span_index(const ParseResult& res, int from, int to) {
        std::vector<int> out;
        for (int id = 0; id < int(res.edges.size()); ++id)
            if (res.edges[id].from == from && res.edges[id].to == to)
                out.push_back(id);
        return out;
    }

    std::vector<Edge> apply(const Rule& r, const std::vector<int>& dtrs,
                            const ParseResult& res) const {
        // empty-only derivations would recurse without consuming input, and
        // an empty category never projects as the head of a phrase
        bool all_empty = true;
        for (size_t i = 0; i < dtrs.size(); ++i) {
            bool empty = res.edges[dtrs[i]].from == res.edges[dtrs[i]].to;
            if (empty && int(i) == r.head_dtr) return {};
            all_empty = all_empty && empty;
        }
        if (all_empty) return {};

        State st{Graph(&lex_->sig()), {}};
        NodeRef mother = st.g.make(lex_->sig().most_general());
        std::vector<NodeRef> args{mother};
        for (int d : dtrs) {
            const FS& dfs = res.edges[d].fs;
            std::map<NodeRef, NodeRef> memo;
            args.push_back(st.g.copy_from(*dfs.graph, dfs.root, &memo));
        }
        std::vector<Edge> out;
        for (State& s : lex_->clauses().call("rule_" + r.name, st, args)) {
            bool pass = true;
            for (const Guard& gu : s.deferred) pass &= gu.eval(s.g);
            if (!pass || !s.g.acyclic(mother)) continue;
            Edge e;
            e.fs = extract_fs(s.g, mother);
            e.from = res.edges[dtrs.front()].from;
            e.to = res.edges[dtrs.back()].to;
            e.rule = r.name;
            e.dtrs = dtrs;
            out.push_back(std::move(e));
        }
        return out;
    }

    const std::vector<Desc>& sentence_descs() const {
        if (sentence_descs_.empty()) {
            Lexer lx("@f_sent", "<accept>");
            DescParser p(lx);
            Desc d = p.parse();
            int gensym = 0;
            sentence_descs_ = expand_description(d, lex_->macros(), &gensym);
        }
        return sentence_descs_;
    }

    Lexicon* lex_;
    std::vector<Rule> rules_;
    mutable std::vector<Desc> sentence_descs_;
};

} // namespace hpsgtr
