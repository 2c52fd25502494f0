#pragma once

// Lexical entries, lexical-type constraints (cons), macros, empty categories,
// and the lexical-rule closure.
//
// Grammar definition files use:
//   name macro Desc.          name(Params) macro Desc.
//   sort cons Desc.
//   surface ---> Desc.        empty Desc.
//   name lex_rule Lhs **> Rhs [if Goal, ...] morphs Pattern, ... .
//   :-lex_rule_depth(N).
//
// A lexical rule pairs a feature-structure transform (run through the clause
// engine: the in/out templates become the head of a synthesized clause, the
// `if` goals its body) with a surface morphs block. A rule applies to an
// entry only if both succeed. The closure applies all rules up to the depth
// bound, pruning duplicates (same surface + iso-equal structure).

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "morph.hpp"
#include "subcat.hpp"

namespace hpsgtr {

struct LexEntry {
    std::string surface;
    FS fs;
    std::vector<std::string> chain; // applied rule names; empty = base entry
};

// A stable textual key for a subgraph: sorts and feature names in DFS order
// with back-reference numbering. Used to order set elements canonically so
// that permutation variants collapse under iso-equality.
inline std::string canonical_key(const Graph& g, NodeRef root) {
    struct Walk {
        const Graph& g;
        std::map<NodeRef, int> seen;
        std::string out;
        void rec(NodeRef n) {
            n = g.deref(n);
            auto it = seen.find(n);
            if (it != seen.end()) {
                out += "#" + std::to_string(it->second);
                return;
            }
            seen.emplace(n, int(seen.size()));
            out += g.sig().sort_name(g.sort_of(n));
            out += "(";
            for (auto& [f, v] : g.arcs(n)) {
                out += g.sig().feature_name(f);
                out += ":";
                rec(v);
                out += ";";
            }
            out += ")";
        }
    } w{g, {}, {}};
    w.rec(root);
    return w.out;
}

// --- lexical-type constraints -------------------------------------------------

class ConsTable {
public:
    struct Item {
        SortId sort;
        std::string sort_name, text;
        std::vector<Desc> alts; // macro- and disjunction-expanded
    };
    struct Fail {
        std::string sort, constraint;
    };

    void add(const Signature& sig, const std::string& sort_name, const Desc& d,
             const MacroTable& macros, int& gensym) {
        SortId s = sig.sort_id(sort_name);
        if (s == kNoSort)
            throw GrammarError("cons on unknown sort '" + sort_name + "'");
        items_.push_back(Item{s, sort_name, desc_to_text(d),
                              expand_description(d, macros, &gensym)});
    }

    bool empty() const { return items_.empty(); }
    const std::vector<Item>& items() const { return items_; }

    // Enforces every constraint on every reachable node whose sort lies at or
    // below the constraint's sort, forking on disjunctive constraints, until
    // a fixpoint. Returns the surviving variants (empty = rejected; the last
    // failing constraint is reported through `fail`).
    std::vector<Graph> enforce(Graph g, NodeRef root, Fail* fail = nullptr) const {
        std::vector<Graph> states;
        states.push_back(std::move(g));
        std::vector<FS> prev;
        for (int round = 0; round < 8; ++round) {
            for (const Item& item : items_) {
                std::vector<Graph> after;
                for (Graph& st : states) {
                    std::vector<NodeRef> targets;
                    for (NodeRef n : reachable(st, root))
                        if (st.sig().subsort(st.sort_of(n), item.sort))
                            targets.push_back(n);
                    std::vector<Graph> local;
                    local.push_back(std::move(st));
                    for (NodeRef n : targets) {
                        std::vector<Graph> res;
                        for (Graph& l : local)
                            for (const Desc& alt : item.alts) {
                                Graph c = l;
                                std::map<std::string, NodeRef> env;
                                DescBuilder b(c, env, nullptr);
                                if (b.apply(n, alt) && c.acyclic(root))
                                    res.push_back(std::move(c));
                            }
                        if (res.empty() && fail)
                            *fail = Fail{item.sort_name, item.text};
                        local = std::move(res);
                        if (local.empty()) break;
                    }
                    for (Graph& l : local) after.push_back(std::move(l));
                }
                states = std::move(after);
                if (states.empty()) return {};
            }
            // converged when the extracted structures stopped changing
            std::vector<FS> now;
            for (Graph& st : states) now.push_back(extract_fs(st, root));
            if (now.size() == prev.size()) {
                bool same = true;
                for (size_t i = 0; same && i < now.size(); ++i)
                    same = iso_equal(now[i], prev[i]);
                if (same) break;
            }
            prev = std::move(now);
        }
        // drop iso-duplicate forks
        std::vector<Graph> uniq;
        std::vector<FS> seen;
        for (Graph& st : states) {
            FS f = extract_fs(st, root);
            bool dup = false;
            for (auto& s : seen) dup = dup || iso_equal(s, f);
            if (!dup) {
                seen.push_back(std::move(f));
                uniq.push_back(std::move(st));
            }
        }
        return uniq;
    }

private:
    static std::vector<NodeRef> reachable(const Graph& g, NodeRef root) {
        std::vector<NodeRef> out, stack{g.deref(root)};
        std::map<NodeRef, bool> seen;
        while (!stack.empty()) {
            NodeRef n = g.deref(stack.back());
            stack.pop_back();
            if (seen.count(n)) continue;
            seen[n] = true;
            out.push_back(n);
            for (auto& [f, v] : g.arcs(n)) stack.push_back(v);
        }
        return out;
    }

    std::vector<Item> items_;
};

// --- the lexicon ----------------------------------------------------------------

class Lexicon {
public:
    explicit Lexicon(const Signature& sig) : sig_(&sig), db_(sig) {
        db_.set_macros(&macros_);
        register_list_set_clauses(db_);
        db_.defer_guards("check_rel");
        register_natives();
    }

    const Signature& sig() const { return *sig_; }
    MacroTable& macros() { return macros_; }
    const MacroTable& macros() const { return macros_; }
    ClauseDB& clauses() { return db_; }
    const ClauseDB& clauses() const { return db_; }
    const ConsTable& cons() const { return cons_; }
    int rule_depth() const { return depth_; }
    void set_rule_depth(int d) {
        depth_ = d;
        closed_ = false;
    }

    // Reorders the lexical rules (closure must not depend on the order).
    void permute_rules(const std::vector<size_t>& order) {
        std::vector<Rule> next;
        for (size_t i : order) next.push_back(rules_.at(i));
        rules_ = std::move(next);
        closed_ = false;
    }

    // "name macro Desc." and "sort cons Desc." declarations.
    void load_defs(std::string_view text, std::string file = "<defs>") {
        Lexer lx(text, std::move(file));
        while (!lx.at_end()) {
            Token name = lx.expect_kind(Tok::Ident, "macro or sort name");
            std::vector<std::string> params;
            if (lx.accept("(")) {
                params.push_back(lx.expect_kind(Tok::Var, "macro parameter").text);
                while (lx.accept(","))
                    params.push_back(lx.expect_kind(Tok::Var, "macro parameter").text);
                lx.expect(")");
            }
            Token kw = lx.expect_kind(Tok::Ident, "'macro' or 'cons'");
            DescParser p(lx);
            Desc d = p.parse();
            lx.expect(".");
            if (kw.text == "macro") {
                macros_[name.text] = MacroDef{std::move(params), std::move(d)};
            } else if (kw.text == "cons") {
                if (!params.empty()) lx.fail("cons declarations take no parameters");
                cons_.add(*sig_, name.text, d, macros_, gensym_);
            } else {
                lx.fail("expected 'macro' or 'cons', found '" + kw.text + "'");
            }
        }
    }

    void load_clauses(std::string_view text, std::string file = "<clauses>") {
        db_.load(text, std::move(file));
    }

    // "surface ---> Desc." entries and "empty Desc." empty categories.
    void load_entries(std::string_view text, std::string file = "<lexicon>") {
        Lexer lx(text, std::move(file));
        while (!lx.at_end()) {
            if (lx.accept("empty")) {
                DescParser p(lx);
                Desc d = p.parse();
                lx.expect(".");
                auto built = build_entries("", d);
                for (auto& e : built) empties_.push_back(std::move(e));
                continue;
            }
            Token surface = lx.expect_kind(Tok::Ident, "entry surface form");
            lx.expect("--->");
            DescParser p(lx);
            Desc d = p.parse();
            lx.expect(".");
            for (auto& e : build_entries(surface.text, d)) add_entry(base_, e);
        }
    }

    void load_lexrules(std::string_view text, std::string file = "<lexrules>") {
        Lexer lx(text, std::move(file));
        while (!lx.at_end()) {
            if (lx.accept(":-")) {
                lx.expect("lex_rule_depth");
                lx.expect("(");
                depth_ = std::stoi(lx.expect_kind(Tok::Ident, "depth bound").text);
                lx.expect(")");
                lx.expect(".");
                continue;
            }
            Token name = lx.expect_kind(Tok::Ident, "lexical rule name");
            lx.expect("lex_rule");
            DescParser p(lx);
            Desc lhs = p.parse_primary();
            lx.expect("**>");
            Desc rhs = p.parse_primary();
            std::string body;
            if (lx.accept("if")) {
                for (;;) {
                    std::string goal = lx.expect_kind(Tok::Ident, "goal name").text;
                    if (lx.accept("(")) {
                        goal += "(";
                        if (!lx.accept(")")) {
                            goal += desc_to_text(p.parse_primary());
                            while (lx.accept(","))
                                goal += "," + desc_to_text(p.parse_primary());
                            lx.expect(")");
                        }
                        goal += ")";
                    }
                    if (!body.empty()) body += ",";
                    body += goal;
                    if (!lx.accept(",")) break;
                }
            }
            lx.expect("morphs");
            Morphs m = parse_morphs(lx);
            if (body.empty()) body = "true";
            db_.load("lexrule_" + name.text + "(" + desc_to_text(lhs) + "," +
                         desc_to_text(rhs) + ") if " + body + ".",
                     "<lexrule:" + name.text + ">");
            rules_.push_back(Rule{name.text, std::move(m)});
        }
    }

    // Lexical-rule closure up to the depth bound.
    void close() {
        if (closed_) return;
        closed_ = true;
        store_.clear();
        for (const LexEntry& e : base_) add_entry(store_[e.surface], e);
        std::vector<LexEntry> frontier = base_;
        for (int d = 0; d < depth_ && !frontier.empty(); ++d) {
            std::vector<LexEntry> next;
            for (const LexEntry& e : frontier)
                for (const Rule& r : rules_)
                    for (LexEntry& out : apply_rule(r, e))
                        if (add_entry(store_[out.surface], out))
                            next.push_back(std::move(out));
            frontier = std::move(next);
        }
    }

    struct Rule {
        std::string name;
        Morphs morphs;
    };

    // All derivations of an entry under one rule (empty if inapplicable).
    std::vector<LexEntry> apply_rule(const Rule& r, const LexEntry& e) const {
        auto surface = r.morphs.apply(e.surface);
        if (!surface) return {};
        State st{Graph(*e.fs.graph), {}};
        NodeRef out = st.g.make(sig_->most_general());
        std::vector<LexEntry> res;
        for (State& s : db_.call("lexrule_" + r.name, st, {e.fs.root, out})) {
            bool pass = true;
            for (const Guard& gu : s.deferred) pass &= gu.eval(s.g);
            if (!pass || !s.g.acyclic(out)) continue;
            for (Graph& fork : cons_.enforce(s.g, out)) {
                LexEntry derived{*surface, extract_fs(fork, out), e.chain};
                derived.chain.push_back(r.name);
                res.push_back(std::move(derived));
            }
        }
        return res;
    }

    const std::vector<Rule>& rules() const { return rules_; }
    const std::vector<LexEntry>& base_entries() const { return base_; }
    const std::vector<LexEntry>& empty_categories() const { return empties_; }

    std::vector<const LexEntry*> lookup(const std::string& token) const {
        const_cast<Lexicon*>(this)->close();
        std::vector<const LexEntry*> out;
        auto it = store_.find(lower_tr(normalize_utf8(token)));
        if (it != store_.end())
            for (const LexEntry& e : it->second) out.push_back(&e);
        return out;
    }

    const std::map<std::string, std::vector<LexEntry>>& store() const {
        const_cast<Lexicon*>(this)->close();
        return store_;
    }

private:
    // Builds the expanded, constraint-checked entries of one description.
    std::vector<LexEntry> build_entries(const std::string& surface, const Desc& d) {
        std::vector<LexEntry> out;
        ConsTable::Fail fail;
        bool cons_failed = false;
        for (const Desc& alt : expand_description(d, macros_, &gensym_)) {
            Graph g(sig_);
            NodeRef root = g.make(sig_->most_general());
            std::map<std::string, NodeRef> env;
            DescBuilder b(g, env, nullptr);
            if (!b.apply(root, alt) || !g.acyclic(root)) continue;
            auto forks = cons_.enforce(std::move(g), root, &fail);
            if (forks.empty()) cons_failed = true;
            for (Graph& fork : forks)
                out.push_back(LexEntry{surface, extract_fs(fork, root), {}});
        }
        if (out.empty()) {
            std::string what = surface.empty() ? "empty category" : "'" + surface + "'";
            if (cons_failed)
                throw GrammarError("entry " + what + " rejected: sort '" + fail.sort +
                                   "' violates cons (" + fail.constraint + ")");
            throw GrammarError("entry " + what + " has an unsatisfiable description");
        }
        return out;
    }

    static bool add_entry(std::vector<LexEntry>& into, const LexEntry& e) {
        for (const LexEntry& have : into)
            if (have.surface == e.surface && iso_equal(have.fs, e.fs)) return false;
        into.push_back(e);
        return true;
    }

    void register_natives() {
        // to_obl_set(List, Set): rebuilds a ground synsem list as a set of
        // obligatory subcat elements in canonical order, so that permutation
        // variants of the same argument collection collapse.
        db_.add_native("to_obl_set", [this](const State& s,
                                            const std::vector<NodeRef>& args)
                                         -> std::vector<State> {
            if (args.size() != 2) return {};
            State st{s.g, s.deferred};
            Graph& g = st.g;
            FeatId hd = sig_->feature_id("hd"), tl = sig_->feature_id("tl");
            SortId elist = sig_->sort_id("e_list");
            std::vector<NodeRef> elems;
            NodeRef n = g.deref(args[0]);
            while (g.sort_of(n) != elist) {
                NodeRef h = g.get(n, hd);
                if (h == kNoNode) return {}; // not a ground list
                elems.push_back(h);
                n = g.get(n, tl);
                if (n == kNoNode) return {};
                n = g.deref(n);
            }
            std::sort(elems.begin(), elems.end(),
                      [&](NodeRef a, NodeRef b) {
                          return canonical_key(g, a) < canonical_key(g, b);
                      });
            SortId neset = sig_->sort_id("ne_set"), obl = sig_->sort_id("obl");
            FeatId el = sig_->feature_id("el"), els = sig_->feature_id("els");
            FeatId s_arg = sig_->feature_id("s_arg");
            NodeRef cur = args[1];
            for (NodeRef e : elems) {
                if (!g.refine(cur, neset)) return {};
                NodeRef slot = g.get_or_add(cur, el);
                if (slot == kNoNode || !g.refine(slot, obl)) return {};
                NodeRef sa = g.get_or_add(slot, s_arg);
                if (sa == kNoNode || !g.unify(sa, e)) return {};
                cur = g.get_or_add(cur, els);
                if (cur == kNoNode) return {};
            }
            if (!g.refine(cur, elist)) return {};
            return one(std::move(st));
        });
        // token_identical(A, B): succeeds iff the two arguments are the same
        // node (structure sharing), without unifying them.
        db_.add_native("token_identical",
                       [](const State& s, const std::vector<NodeRef>& args)
                           -> std::vector<State> {
                           if (args.size() != 2) return {};
                           if (s.g.deref(args[0]) != s.g.deref(args[1])) return {};
                           return {State{s.g, s.deferred}};
                       });
    }

    static std::vector<State> one(State&& s) {
        std::vector<State> out;
        out.push_back(std::move(s));
        return out;
    }

    const Signature* sig_;
    MacroTable macros_;
    ConsTable cons_;
    ClauseDB db_;
    std::vector<Rule> rules_;
    int depth_ = 4;
    int gensym_ = 0;
    bool closed_ = false;
    std::vector<LexEntry> base_, empties_;
    std::map<std::string, std::vector<LexEntry>> store_;
};

} // namespace hpsgtr
