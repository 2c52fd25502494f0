#pragma once

// Random feature-structure generator for property tests: builds small
// partial structures over a signature by a random sequence of refine /
// add-feature / merge operations, so results include reentrancy.

#include <map>
#include <random>
#include <vector>

#include "hpsgtr/tfs.hpp"

namespace hpsgtr::testgen {

inline void collect(const Graph& g, NodeRef n, std::vector<NodeRef>& out) {
    n = g.deref(n);
    for (NodeRef m : out)
        if (m == n) return;
    out.push_back(n);
    for (auto& [f, t] : g.arcs(n)) collect(g, t, out);
}

inline void mutate(std::unique_ptr<Graph>& g, NodeRef& root, std::mt19937& rng,
                   int ops) {
    const Signature& sig = g->sig();
    std::vector<NodeRef> nodes;
    collect(*g, root, nodes);
    std::uniform_int_distribution<int> op_dist(0, 9);
    auto pick_node = [&] {
        std::uniform_int_distribution<size_t> d(0, nodes.size() - 1);
        return nodes[d(rng)];
    };
    // Destructive ops are tried on a copy and kept only if consistent.
    auto attempt = [&](auto&& op) {
        auto trial = std::make_unique<Graph>(&sig);
        std::map<NodeRef, NodeRef> memo;
        NodeRef troot = trial->copy_from(*g, root, &memo);
        if (op(*trial, memo) && trial->acyclic(troot)) {
            g = std::move(trial);
            root = troot;
            nodes.clear();
            collect(*g, root, nodes);
        }
    };
    for (int i = 0; i < ops; ++i) {
        int op = op_dist(rng);
        if (op < 4) {
            // refine one step down the hierarchy, so that independently
            // generated structures still unify reasonably often
            NodeRef n = g->deref(pick_node());
            auto& subs = sig.direct_subsorts(g->sort_of(n));
            if (subs.empty()) continue;
            std::uniform_int_distribution<size_t> sd(0, subs.size() - 1);
            SortId s = subs[sd(rng)];
            attempt([&](Graph& t, auto& memo) { return t.refine(memo.at(n), s); });
        } else if (op < 8) {
            // materialize a random appropriate feature
            NodeRef n = pick_node();
            auto& feats = sig.appropriate_features(g->sort_of(n));
            if (feats.empty()) continue;
            std::uniform_int_distribution<size_t> fd(0, feats.size() - 1);
            NodeRef t = g->get_or_add(n, feats[fd(rng)].first);
            if (t != kNoNode) nodes.push_back(t);
        } else {
            // merge two nodes if that keeps the structure consistent
            NodeRef a = g->deref(pick_node()), b = g->deref(pick_node());
            attempt([&](Graph& t, auto& memo) {
                return t.unify(memo.at(a), memo.at(b));
            });
        }
    }
}

inline FS random_fs(const Signature& sig, std::mt19937& rng, int ops = 12) {
    auto g = std::make_unique<Graph>(&sig);
    NodeRef root = g->make(sig.most_general());
    mutate(g, root, rng, ops);
    return extract_fs(*g, root);
}

// A structure grown from `base`, so pairs drawn this way share a consistent
// core and exercise the non-failure side of the lattice laws.
inline FS extend_fs(const FS& base, std::mt19937& rng, int ops = 5) {
    auto g = std::make_unique<Graph>(&base.sig());
    NodeRef root = g->copy_from(*base.graph, base.root);
    mutate(g, root, rng, ops);
    return extract_fs(*g, root);
}

} // namespace hpsgtr::testgen
