#pragma once

// The attribute-value description language used by the grammar files:
// sort literals, feature:value pairs, conjunction ",", disjunction ";",
// tags as capitalized variables, lists "[a,b|T]", sets "{a,b}", macro calls
// "@m(...)", path equations "[f,g] == [h]", and the "=\=" guard.
//
// Descriptions are compiled into feature structures by expanding
// disjunctions into alternatives (no disjunctive nodes exist at runtime).

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "lexer.hpp"
#include "tfs.hpp"

namespace hpsgtr {

struct Desc {
    enum Kind {
        Sort,   // text = sort name
        Var,    // text = variable name ("_" = anonymous)
        Feat,   // text = feature name, kids[0] = value
        Conj,   // kids
        Disj,   // kids
        List,   // kids = elements; tail ? kids.back() is the tail desc
        SetLit, // kids = elements
        Macro,  // text = macro name, kids = arguments
        PathEq, // text unused; lhs/rhs feature paths
        Neg,    // kids[0] = Sort or Var: the "=\=" guard
    };
    Kind kind = Sort;
    std::string text;
    std::vector<Desc> kids;
    bool tail = false;
    std::vector<std::string> lhs_path, rhs_path;
};

struct MacroDef {
    std::vector<std::string> params;
    Desc body;
};
using MacroTable = std::map<std::string, MacroDef>;

// ---------------------------------------------------------------------------
// Parsing

class DescParser {
public:
    explicit DescParser(Lexer& lx) : lx_(lx) {}

    // Full description (disjunction level).
    Desc parse() { return parse_disj(); }

    Desc parse_disj() {
        Desc d = parse_conj();
        if (lx_.peek().text != ";") return d;
        Desc out{Desc::Disj};
        out.kids.push_back(std::move(d));
        while (lx_.accept(";")) out.kids.push_back(parse_conj());
        return out;
    }

    Desc parse_conj() {
        Desc d = parse_primary();
        if (lx_.peek().text != ",") return d;
        Desc out{Desc::Conj};
        out.kids.push_back(std::move(d));
        while (lx_.accept(",")) out.kids.push_back(parse_primary());
        return out;
    }

    // A single conjunct; also the element level inside [ ] and { }.
    Desc parse_primary() {
        const Token& t = lx_.peek();
        if (t.text == "(") {
            lx_.next();
            Desc d = parse_disj();
            lx_.expect(")");
            return d;
        }
        if (t.text == "[") return parse_list_or_patheq();
        if (t.text == "{") {
            lx_.next();
            Desc d{Desc::SetLit};
            if (!lx_.accept("}")) {
                d.kids.push_back(parse_primary());
                while (lx_.accept(",")) d.kids.push_back(parse_primary());
                lx_.expect("}");
            }
            return d;
        }
        if (t.text == "@") {
            lx_.next();
            Desc d{Desc::Macro};
            d.text = lx_.expect_kind(Tok::Ident, "macro name").text;
            if (lx_.accept("(")) {
                if (!lx_.accept(")")) {
                    d.kids.push_back(parse_primary());
                    while (lx_.accept(",")) d.kids.push_back(parse_primary());
                    lx_.expect(")");
                }
            }
            return d;
        }
        if (t.text == "=\\=") {
            lx_.next();
            Desc d{Desc::Neg};
            d.kids.push_back(parse_primary());
            return d;
        }
        if (t.kind == Tok::Var) {
            lx_.next();
            Desc d{Desc::Var};
            d.text = t.text;
            return maybe_value(std::move(d));
        }
        if (t.kind == Tok::Ident) {
            lx_.next();
            if (lx_.peek().text == ":") {
                lx_.next();
                Desc d{Desc::Feat};
                d.text = t.text;
                d.kids.push_back(parse_primary());
                return d;
            }
            Desc d{Desc::Sort};
            d.text = t.text;
            return d;
        }
        lx_.fail("expected a description, found '" + t.text + "'");
    }

private:
    // `X` used as `Var` only; feature chains always start with an identifier.
    Desc maybe_value(Desc d) { return d; }

    Desc parse_list_or_patheq() {
        lx_.expect("[");
        // Path equation "[f,g] == [h]" vs list literal: try the path shape.
        if (is_path_eq()) {
            Desc d{Desc::PathEq};
            d.lhs_path.push_back(lx_.next().text);
            while (lx_.accept(",")) d.lhs_path.push_back(
                lx_.expect_kind(Tok::Ident, "feature name").text);
            lx_.expect("]");
            lx_.expect("==");
            lx_.expect("[");
            d.rhs_path.push_back(lx_.expect_kind(Tok::Ident, "feature name").text);
            while (lx_.accept(",")) d.rhs_path.push_back(
                lx_.expect_kind(Tok::Ident, "feature name").text);
            lx_.expect("]");
            return d;
        }
        Desc d{Desc::List};
        if (lx_.accept("]")) return d;
        d.kids.push_back(parse_primary());
        while (lx_.accept(",")) d.kids.push_back(parse_primary());
        if (lx_.accept("|")) {
            d.kids.push_back(parse_primary());
            d.tail = true;
        }
        lx_.expect("]");
        return d;
    }

    bool is_path_eq() const {
        // after '[': idents separated by ',' then "] ==".
        size_t i = 0;
        if (lx_.peek(i).kind != Tok::Ident) return false;
        ++i;
        while (lx_.peek(i).text == ",") {
            if (lx_.peek(i + 1).kind != Tok::Ident) return false;
            i += 2;
        }
        return lx_.peek(i).text == "]" && lx_.peek(i + 1).text == "==";
    }

    Lexer& lx_;
};

// Renders a description back to parseable source text (round-trips through
// DescParser); used when embedding parsed descriptions into clause sources.
inline std::string desc_to_text(const Desc& d) {
    auto join = [](const std::vector<Desc>& kids, const char* sep) {
        std::string out;
        for (size_t i = 0; i < kids.size(); ++i) {
            if (i) out += sep;
            out += desc_to_text(kids[i]);
        }
        return out;
    };
    switch (d.kind) {
    case Desc::Sort:
    case Desc::Var:
        return d.text;
    case Desc::Feat:
        return d.text + ":" + desc_to_text(d.kids[0]);
    case Desc::Conj:
        return "(" + join(d.kids, ",") + ")";
    case Desc::Disj:
        return "(" + join(d.kids, ";") + ")";
    case Desc::List: {
        if (!d.tail) return "[" + join(d.kids, ",") + "]";
        std::vector<Desc> elems(d.kids.begin(), d.kids.end() - 1);
        return "[" + join(elems, ",") + "|" + desc_to_text(d.kids.back()) + "]";
    }
    case Desc::SetLit:
        return "{" + join(d.kids, ",") + "}";
    case Desc::Macro:
        return "@" + d.text + (d.kids.empty() ? "" : "(" + join(d.kids, ",") + ")");
    case Desc::PathEq: {
        auto path = [](const std::vector<std::string>& p) {
            std::string out = "[";
            for (size_t i = 0; i < p.size(); ++i) {
                if (i) out += ",";
                out += p[i];
            }
            return out + "]";
        };
        return path(d.lhs_path) + " == " + path(d.rhs_path);
    }
    case Desc::Neg:
        return "( =\\= " + desc_to_text(d.kids[0]) + ")";
    }
    return "";
}

// ---------------------------------------------------------------------------
// Macro substitution and disjunction expansion

namespace detail {

inline Desc substitute_macros(const Desc& d, const MacroTable& macros, int& gensym);

inline Desc subst_vars(const Desc& d, const std::map<std::string, Desc>& binding,
                       const std::string& suffix) {
    Desc out = d;
    if (d.kind == Desc::Var && d.text != "_") {
        auto it = binding.find(d.text);
        if (it != binding.end()) return it->second;
        out.text = d.text + suffix; // macro-local variable, freshly scoped
        return out;
    }
    for (auto& k : out.kids) k = subst_vars(k, binding, suffix);
    return out;
}

inline Desc substitute_macros(const Desc& d, const MacroTable& macros, int& gensym) {
    if (d.kind == Desc::Macro) {
        auto it = macros.find(d.text);
        if (it == macros.end())
            throw GrammarError("unknown-macro: '@" + d.text + "'");
        const MacroDef& def = it->second;
        if (def.params.size() != d.kids.size())
            throw GrammarError("arity-mismatch for macro '@" + d.text + "': expected " +
                               std::to_string(def.params.size()) + " argument(s), got " +
                               std::to_string(d.kids.size()));
        std::map<std::string, Desc> binding;
        for (size_t i = 0; i < def.params.size(); ++i)
            binding.emplace(def.params[i],
                            substitute_macros(d.kids[i], macros, gensym));
        std::string suffix = "~m" + std::to_string(gensym++);
        Desc body = subst_vars(def.body, binding, suffix);
        return substitute_macros(body, macros, gensym);
    }
    Desc out = d;
    for (auto& k : out.kids) k = substitute_macros(k, macros, gensym);
    return out;
}

// DNF expansion: returns the disjunction-free alternatives of d.
inline std::vector<Desc> expand_disj(const Desc& d) {
    switch (d.kind) {
    case Desc::Disj: {
        std::vector<Desc> out;
        for (auto& k : d.kids)
            for (auto& e : expand_disj(k)) out.push_back(e);
        return out;
    }
    case Desc::Sort:
    case Desc::Var:
    case Desc::PathEq:
        return {d};
    case Desc::Neg: {
        std::vector<Desc> out;
        for (auto& e : expand_disj(d.kids[0])) {
            Desc n = d;
            n.kids = {e};
            out.push_back(n);
        }
        return out;
    }
    default: {
        // product over children
        std::vector<Desc> out{[&] {
            Desc base = d;
            base.kids.clear();
            return base;
        }()};
        for (auto& k : d.kids) {
            auto alts = expand_disj(k);
            std::vector<Desc> next;
            for (auto& partial : out)
                for (auto& a : alts) {
                    Desc p = partial;
                    p.kids.push_back(a);
                    next.push_back(std::move(p));
                }
            out = std::move(next);
        }
        return out;
    }
    }
}

} // namespace detail

// ---------------------------------------------------------------------------
// Building feature structures from disjunction-free descriptions

// A "=\=" guard recorded during building, to be evaluated on concrete
// structures: either "sort of node is not at-or-below `sort`" or
// "node is not token-identical to `other`".
struct Guard {
    NodeRef node = kNoNode;
    SortId not_below = kNoSort;
    NodeRef other = kNoNode;

    bool eval(const Graph& g) const {
        if (not_below != kNoSort)
            return !g.sig().subsort(g.sort_of(node), not_below);
        return g.deref(node) != g.deref(other);
    }
};

class DescBuilder {
public:
    DescBuilder(Graph& g, std::map<std::string, NodeRef>& env,
                std::vector<Guard>* guards = nullptr)
        : g_(g), env_(env), guards_(guards) {}

    // Applies a disjunction-free description to node n. Returns false on
    // unification failure; throws GrammarError on ill-formed descriptions.
    bool apply(NodeRef n, const Desc& d) {
        switch (d.kind) {
        case Desc::Sort: {
            SortId s = g_.sig().sort_id(d.text);
            if (s == kNoSort) throw GrammarError("unknown-sort: '" + d.text + "'");
            return g_.refine(n, s);
        }
        case Desc::Var: {
            if (d.text == "_") return true;
            auto it = env_.find(d.text);
            if (it == env_.end()) {
                env_.emplace(d.text, g_.deref(n));
                return true;
            }
            return g_.unify(n, it->second);
        }
        case Desc::Feat: {
            FeatId f = g_.sig().feature_id(d.text);
            if (f < 0) throw GrammarError("unknown-feature: '" + d.text + "'");
            NodeRef t = g_.get_or_add(n, f);
            if (t == kNoNode) return false; // feature not appropriate here
            return apply(t, d.kids[0]);
        }
        case Desc::Conj: {
            for (auto& k : d.kids)
                if (!apply(n, k)) return false;
            return true;
        }
        case Desc::List:
            return apply_seq(n, d, "ne_list", "e_list", "hd", "tl", d.tail);
        case Desc::SetLit:
            return apply_seq(n, d, "ne_set", "e_list", "el", "els", false);
        case Desc::PathEq: {
            NodeRef a = walk(n, d.lhs_path);
            NodeRef b = walk(n, d.rhs_path);
            if (a == kNoNode || b == kNoNode) return false;
            return g_.unify(a, b);
        }
        case Desc::Neg: {
            if (!guards_)
                throw GrammarError("'=\\=' guard not allowed in this context");
            const Desc& inner = d.kids[0];
            if (inner.kind == Desc::Sort) {
                SortId s = g_.sig().sort_id(inner.text);
                if (s == kNoSort)
                    throw GrammarError("unknown-sort: '" + inner.text + "'");
                guards_->push_back({g_.deref(n), s, kNoNode});
            } else if (inner.kind == Desc::Var) {
                pending_neq_.emplace_back(g_.deref(n), inner.text);
            } else {
                throw GrammarError("'=\\=' expects a sort or a variable");
            }
            return true;
        }
        case Desc::Macro:
            throw GrammarError("unexpanded macro '@" + d.text + "'");
        case Desc::Disj:
            throw GrammarError("unexpanded disjunction");
        }
        return false;
    }

    // Resolves "=\= Var" guards once the whole clause has been built.
    bool finish() {
        for (auto& [node, var] : pending_neq_) {
            auto it = env_.find(var);
            if (it == env_.end())
                throw GrammarError("'=\\= " + var + "': variable never bound");
            guards_->push_back({node, kNoSort, it->second});
        }
        pending_neq_.clear();
        return true;
    }

private:
    NodeRef walk(NodeRef n, const std::vector<std::string>& path) {
        for (auto& fname : path) {
            FeatId f = g_.sig().feature_id(fname);
            if (f < 0) throw GrammarError("unknown-feature: '" + fname + "'");
            n = g_.get_or_add(n, f);
            if (n == kNoNode) return kNoNode;
        }
        return n;
    }

    bool apply_seq(NodeRef n, const Desc& d, const char* cons_sort,
                   const char* nil_sort, const char* head_feat,
                   const char* tail_feat, bool has_tail) {
        SortId cons = g_.sig().sort_id(cons_sort);
        SortId nil = g_.sig().sort_id(nil_sort);
        FeatId hf = g_.sig().feature_id(head_feat);
        FeatId tf = g_.sig().feature_id(tail_feat);
        if (cons == kNoSort || nil == kNoSort || hf < 0 || tf < 0)
            throw GrammarError(std::string("signature lacks the sorts/features for ") +
                               cons_sort + " literals");
        size_t n_elems = d.kids.size() - (has_tail ? 1 : 0);
        NodeRef cur = n;
        for (size_t i = 0; i < n_elems; ++i) {
            if (!g_.refine(cur, cons)) return false;
            NodeRef h = g_.get_or_add(cur, hf);
            if (h == kNoNode || !apply(h, d.kids[i])) return false;
            cur = g_.get_or_add(cur, tf);
            if (cur == kNoNode) return false;
        }
        if (has_tail) return apply(cur, d.kids.back());
        return g_.refine(cur, nil);
    }

    Graph& g_;
    std::map<std::string, NodeRef>& env_;
    std::vector<Guard>* guards_;
    std::vector<std::pair<NodeRef, std::string>> pending_neq_;
};

// ---------------------------------------------------------------------------
// Public entry point: text -> set of feature structures (one per disjunct
// assignment that is satisfiable).

inline std::vector<Desc> expand_description(const Desc& d, const MacroTable& macros,
                                             int* gensym = nullptr) {
    int local = 0;
    return detail::expand_disj(
        detail::substitute_macros(d, macros, gensym ? *gensym : local));
}

inline std::vector<FS> parse_description(std::string_view text, const Signature& sig,
                                         const MacroTable& macros = {}) {
    Lexer lx(text, "<description>");
    DescParser parser(lx);
    Desc d = parser.parse();
    if (!lx.at_end()) lx.fail("trailing input after description");
    std::vector<FS> out;
    for (auto& alt : expand_description(d, macros)) {
        Graph g(&sig);
        NodeRef root = g.make(sig.most_general());
        std::map<std::string, NodeRef> env;
        DescBuilder b(g, env);
        if (!b.apply(root, alt)) continue;
        if (!g.acyclic(root)) continue;
        out.push_back(extract_fs(g, root));
    }
    return out;
}

} // namespace hpsgtr
