#pragma once

// Definite-clause engine over feature-structure descriptions.
//
// Predicates are defined by ordered clauses "name(D1,...,Dk) if Body." where
// each Di is a description template and Body is a comma list of `true`, `!`,
// and goal calls. Solving a goal unifies the templates against the argument
// nodes in a working copy of the state's graph and runs the body by
// depth-first search, backtracking with the graph's mark/undo trail; each
// complete solution is copied out as a successor state. A cut commits to the
// current clause and its first solution, discarding the pending alternatives
// of goals to its left.
//
// "=\=" guards are evaluated on the concrete structure as soon as the
// clause body has run, except for predicates registered with defer_guards(),
// whose guards are attached to the state for the caller to evaluate once
// all other constraints are in place.

#include <functional>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "description.hpp"

namespace hpsgtr {

struct State {
    Graph g;
    std::vector<Guard> deferred;
};

class ClauseDB {
public:
    using NativeGoal =
        std::function<std::vector<State>(const State&, const std::vector<NodeRef>&)>;

    explicit ClauseDB(const Signature& sig) : sig_(&sig) {}

    void set_macros(const MacroTable* macros) { macros_ = macros; }

    void add_native(const std::string& name, NativeGoal g) {
        natives_[name] = std::move(g);
    }

    void defer_guards(const std::string& name) { defer_.insert(name); }

    bool has(const std::string& name) const {
        return preds_.count(name) || natives_.count(name);
    }

    // Clause source: "name(Args) if Goal, ..., Goal ." with `true` and `!`
    // as pseudo-goals.
    void load(std::string_view text, std::string file = "<clauses>") {
        Lexer lx(text, std::move(file));
        while (!lx.at_end()) parse_clause(lx);
    }

    std::vector<State> call(const std::string& name, const State& s,
                            const std::vector<NodeRef>& args, int depth = 0) const {
        std::vector<State> results;
        Solver sv(*this, s);
        sv.solve(name, args, depth, Solver::Emit::of([&] {
            results.push_back(State{sv.g, sv.deferred});
            return true;
        }));
        return results;
    }

private:
    static constexpr int kMaxDepth = 400;

    struct BodyItem {
        bool is_true = false, is_cut = false;
        std::string name;
        std::vector<Desc> args;
    };
    struct Clause {
        std::vector<Desc> head;
        std::vector<BodyItem> body;
    };

    struct Solver {
        const ClauseDB& db;
        Graph g;
        std::vector<Guard> deferred;
        // Non-null while abandoning choice points: the Attempt whose cut (or
        // whose emit refusing more solutions) started the unwind.
        const void* unwind = nullptr;

        Solver(const ClauseDB& db_, const State& s)
            : db(db_), g(s.g), deferred(s.deferred) {}

        // Non-owning callback invoked with g/deferred holding one solution;
        // returns false to stop the enumeration.
        struct Emit {
            void* ctx;
            bool (*fn)(void*);
            bool operator()() const { return fn(ctx); }
            template <class F> static Emit of(F&& f) {
                return {&f, [](void* c) { return (*static_cast<F*>(c))(); }};
            }
        };

        struct Attempt {
            const Clause* cl;
            int depth;
            Emit emit;
            std::map<std::string, NodeRef> env;
            std::vector<Guard> guards;
            bool committed = false, emitted = false, stop_caller = false;
            size_t first_cut = SIZE_MAX;
        };

        // Enumerates the solutions of name(args). Returns false iff an unwind
        // is still propagating past this call.
        bool solve(const std::string& name, const std::vector<NodeRef>& args,
                   int depth, Emit emit) {
            if (depth > kMaxDepth) return true;
            if (auto it = db.natives_.find(name); it != db.natives_.end())
                return solve_native(it->second, args, emit);
            auto it = db.preds_.find(name);
            if (it == db.preds_.end())
                throw GrammarError("unknown-goal: '" + name + "/" +
                                   std::to_string(args.size()) + "'");
            bool defer = db.defer_.count(name) != 0;
            bool emitted_any = false;
            for (const Clause& cl : it->second) {
                if (cl.head.size() != args.size()) continue;
                Graph::Mark m = g.mark();
                size_t dmark = deferred.size();
                Attempt at{&cl, depth, emit};
                DescBuilder b(g, at.env, &at.guards);
                bool ok = true;
                for (size_t i = 0; ok && i < args.size(); ++i)
                    ok = b.apply(args[i], cl.head[i]);
                if (ok) {
                    b.finish();
                    if (defer) {
                        deferred.insert(deferred.end(), at.guards.begin(),
                                        at.guards.end());
                        at.guards.clear();
                    }
                    body(at, 0);
                }
                g.undo(m);
                deferred.resize(dmark);
                if (unwind) {
                    if (unwind != &at) return false;
                    unwind = nullptr;
                }
                emitted_any |= at.emitted;
                if (at.stop_caller) return true;
                if (at.committed && emitted_any) break;
            }
            return true;
        }

        void body(Attempt& at, size_t idx) {
            const auto& items = at.cl->body;
            if (idx == items.size()) {
                bool pass = true;
                for (const Guard& gu : at.guards) pass &= gu.eval(g);
                if (pass) {
                    at.emitted = true;
                    if (!at.emit()) {
                        at.stop_caller = true;
                        if (!unwind) unwind = &at;
                        return;
                    }
                }
                // a committed clause keeps only its first candidate solution
                if (at.committed && !unwind) unwind = &at;
                return;
            }
            const BodyItem& item = items[idx];
            if (item.is_true) return body(at, idx + 1);
            if (item.is_cut) {
                at.committed = true;
                at.first_cut = std::min(at.first_cut, idx);
                return body(at, idx + 1);
            }
            Graph::Mark m = g.mark();
            auto env_saved = at.env;
            size_t gmark = at.guards.size();
            std::vector<NodeRef> goal_args;
            bool built = true;
            for (const Desc& ad : item.args) {
                NodeRef n = g.make(db.sig_->most_general());
                DescBuilder ab(g, at.env, &at.guards);
                if (!ab.apply(n, ad)) { built = false; break; }
                ab.finish();
                goal_args.push_back(n);
            }
            if (built)
                solve(item.name, goal_args, at.depth + 1, Emit::of([&] {
                    body(at, idx + 1);
                    if (unwind) return false;
                    // a cut left of a later goal erases this choice point
                    return !(at.committed && idx < at.first_cut);
                }));
            g.undo(m);
            at.env = std::move(env_saved);
            at.guards.resize(gmark);
        }

        bool solve_native(const NativeGoal& native,
                          const std::vector<NodeRef>& args, Emit emit) {
            // Natives run on a value State; graft each result in as the
            // working graph (arena indices are preserved by the copies).
            State snap{g, deferred};
            for (State& out : native(snap, args)) {
                Graph saved = std::move(g);
                std::vector<Guard> dsaved = std::move(deferred);
                g = std::move(out.g);
                deferred = std::move(out.deferred);
                bool cont = emit();
                g = std::move(saved);
                deferred = std::move(dsaved);
                if (unwind) return false;
                if (!cont) return true;
            }
            return true;
        }
    };

    void parse_clause(Lexer& lx) {
        Token name = lx.expect_kind(Tok::Ident, "predicate name");
        DescParser dp(lx);
        std::vector<Desc> head;
        lx.expect("(");
        if (!lx.accept(")")) {
            head.push_back(dp.parse_primary());
            while (lx.accept(",")) head.push_back(dp.parse_primary());
            lx.expect(")");
        }
        std::vector<BodyItem> body;
        lx.expect("if");
        for (;;) {
            BodyItem item;
            if (lx.accept("!")) {
                item.is_cut = true;
            } else if (lx.accept("true")) {
                item.is_true = true;
            } else {
                item.name = lx.expect_kind(Tok::Ident, "goal name").text;
                if (lx.accept("(")) {
                    if (!lx.accept(")")) {
                        item.args.push_back(dp.parse_primary());
                        while (lx.accept(",")) item.args.push_back(dp.parse_primary());
                        lx.expect(")");
                    }
                }
            }
            body.push_back(std::move(item));
            if (!lx.accept(",")) break;
        }
        lx.expect(".");

        // Expand macros and head-level disjunctions into clause variants.
        const MacroTable empty;
        const MacroTable& macros = macros_ ? *macros_ : empty;
        for (auto& item : body)
            for (auto& a : item.args) {
                auto alts = expand_description(a, macros, &gensym_);
                if (alts.size() != 1)
                    throw GrammarError("disjunction in a goal argument of '" +
                                       name.text + "'");
                a = alts[0];
            }
        std::vector<std::vector<Desc>> heads{{}};
        for (auto& h : head) {
            auto alts = expand_description(h, macros, &gensym_);
            std::vector<std::vector<Desc>> next;
            for (auto& partial : heads)
                for (auto& alt : alts) {
                    auto p = partial;
                    p.push_back(alt);
                    next.push_back(std::move(p));
                }
            heads = std::move(next);
        }
        for (auto& h : heads)
            preds_[name.text].push_back(Clause{std::move(h), body});
    }

    const Signature* sig_;
    const MacroTable* macros_ = nullptr;
    int gensym_ = 0;
    std::map<std::string, std::vector<Clause>> preds_;
    std::map<std::string, NativeGoal> natives_;
    std::set<std::string> defer_;
};

} // namespace hpsgtr
