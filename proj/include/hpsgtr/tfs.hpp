#pragma once

// Typed feature structures: rooted, possibly reentrant, sorted
// attribute-value DAGs over a Signature.
//
// A Graph is an arena of nodes with union-find forwarding; unification is
// destructive inside a Graph, so callers either clone first or bracket
// speculative work with mark()/undo(), which records touched nodes on a
// trail. The public FS value (shared graph + root) is immutable.

#include <algorithm>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "signature.hpp"

namespace hpsgtr {

using NodeRef = int;
inline constexpr NodeRef kNoNode = -1;

class Graph {
public:
    explicit Graph(const Signature* sig) : sig_(sig) {}

    // Copies share nothing with the speculative trail of the source.
    Graph(const Graph& o) : sig_(o.sig_), nodes_(o.nodes_) {}
    Graph& operator=(const Graph& o) {
        sig_ = o.sig_;
        nodes_ = o.nodes_;
        trail_.clear();
        trailing_ = false;
        return *this;
    }
    Graph(Graph&&) = default;
    Graph& operator=(Graph&&) = default;

    const Signature& sig() const { return *sig_; }

    // Checkpoint for backtracking: undo() restores every node touched since
    // the mark and drops nodes created after it.
    struct Mark {
        size_t nodes, trail;
    };
    Mark mark() {
        trailing_ = true;
        return {nodes_.size(), trail_.size()};
    }
    void undo(const Mark& m) {
        for (size_t i = trail_.size(); i > m.trail; --i) {
            auto& [n, old] = trail_[i - 1];
            if (size_t(n) < m.nodes) nodes_[n] = std::move(old);
        }
        trail_.resize(m.trail);
        nodes_.resize(m.nodes);
    }

    NodeRef make(SortId sort) {
        nodes_.push_back(Node{sort, {}, kNoNode});
        return NodeRef(nodes_.size() - 1);
    }

    NodeRef deref(NodeRef n) const {
        while (nodes_[n].forward != kNoNode) n = nodes_[n].forward;
        return n;
    }

    SortId sort_of(NodeRef n) const { return nodes_[deref(n)].sort; }

    const std::vector<std::pair<FeatId, NodeRef>>& arcs(NodeRef n) const {
        return nodes_[deref(n)].arcs;
    }

    NodeRef get(NodeRef n, FeatId f) const {
        n = deref(n);
        for (auto& [feat, t] : nodes_[n].arcs)
            if (feat == f) return deref(t);
        return kNoNode;
    }

    NodeRef get_path(NodeRef n, const std::vector<FeatId>& path) const {
        for (FeatId f : path) {
            if (n == kNoNode) return kNoNode;
            n = get(n, f);
        }
        return n == kNoNode ? kNoNode : deref(n);
    }

    // Narrows the sort of `n` to glb(sort(n), s), pushing value restrictions
    // down existing arcs. Returns false on inconsistency.
    bool refine(NodeRef n, SortId s) {
        n = deref(n);
        SortId g = sig_->glb(nodes_[n].sort, s);
        if (g == kNoSort) return false;
        if (g == nodes_[n].sort) return true;
        touch(n);
        nodes_[n].sort = g;
        auto arcs_copy = nodes_[n].arcs;
        for (auto& [f, t] : arcs_copy) {
            SortId v = sig_->approp_value(g, f);
            if (v == kNoSort) return false; // feature not appropriate any more
            if (!refine(t, v)) return false;
        }
        return true;
    }

    // Fetches the target of feature f on n, creating it (and refining n to
    // the feature's introduction sort) if absent. kNoNode on inconsistency.
    NodeRef get_or_add(NodeRef n, FeatId f) {
        n = deref(n);
        for (auto& [feat, t] : nodes_[n].arcs)
            if (feat == f) return deref(t);
        SortId intro = sig_->intro_sort(f);
        if (intro == kNoSort) return kNoNode;
        if (!refine(n, intro)) return kNoNode;
        n = deref(n);
        SortId v = sig_->approp_value(sort_of(n), f);
        if (v == kNoSort) return kNoNode;
        NodeRef t = make(v);
        n = deref(n);
        touch(n);
        auto& as = nodes_[n].arcs;
        as.insert(std::upper_bound(as.begin(), as.end(),
                                   std::pair<FeatId, NodeRef>{f, kNoNode},
                                   [](auto& a, auto& b) { return a.first < b.first; }),
                  {f, t});
        return t;
    }

    bool unify(NodeRef a, NodeRef b) {
        a = deref(a);
        b = deref(b);
        if (a == b) return true;
        SortId g = sig_->glb(nodes_[a].sort, nodes_[b].sort);
        if (g == kNoSort) return false;
        // Merge b into a.
        touch(b);
        nodes_[b].forward = a;
        auto barcs = std::move(nodes_[b].arcs);
        nodes_[b].arcs.clear();
        SortId old = nodes_[a].sort;
        touch(a);
        nodes_[a].sort = g;
        if (g != old) {
            auto arcs_copy = nodes_[a].arcs;
            for (auto& [f, t] : arcs_copy) {
                SortId v = sig_->approp_value(g, f);
                if (v == kNoSort || !refine(t, v)) return false;
            }
        }
        for (auto& [f, t] : barcs) {
            NodeRef existing = get(a, f);
            if (existing != kNoNode) {
                if (!unify(existing, t)) return false;
            } else {
                SortId v = sig_->approp_value(sort_of(a), f);
                if (v == kNoSort || !refine(t, v)) return false;
                NodeRef ad = deref(a);
                touch(ad);
                auto& as = nodes_[ad].arcs;
                as.insert(std::upper_bound(
                              as.begin(), as.end(),
                              std::pair<FeatId, NodeRef>{f, kNoNode},
                              [](auto& x, auto& y) { return x.first < y.first; }),
                          {f, t});
            }
        }
        return true;
    }

    // Copies the subgraph under src_root of `src` into this graph,
    // preserving reentrancy. Returns the copied root.
    NodeRef copy_from(const Graph& src, NodeRef src_root,
                      std::map<NodeRef, NodeRef>* memo_out = nullptr) {
        std::map<NodeRef, NodeRef> memo;
        NodeRef r = copy_rec(src, src_root, memo);
        if (memo_out) *memo_out = std::move(memo);
        return r;
    }

    // True if the subgraph under n is acyclic.
    bool acyclic(NodeRef n) const {
        std::map<NodeRef, int> state; // 1 = on stack, 2 = done
        return acyclic_rec(n, state);
    }

    size_t size() const { return nodes_.size(); }

private:
    struct Node {
        SortId sort;
        std::vector<std::pair<FeatId, NodeRef>> arcs;
        NodeRef forward;
    };

    // copy_rec never needs a touch: it only mutates nodes it just created,
    // which undo() drops wholesale.
    void touch(NodeRef n) {
        if (trailing_) trail_.emplace_back(n, nodes_[n]);
    }

    NodeRef copy_rec(const Graph& src, NodeRef n, std::map<NodeRef, NodeRef>& memo) {
        n = src.deref(n);
        auto it = memo.find(n);
        if (it != memo.end()) return it->second;
        NodeRef c = make(src.nodes_[n].sort);
        memo.emplace(n, c);
        for (auto& [f, t] : src.nodes_[n].arcs) {
            NodeRef ct = copy_rec(src, t, memo);
            nodes_[c].arcs.emplace_back(f, ct);
        }
        std::sort(nodes_[c].arcs.begin(), nodes_[c].arcs.end());
        return c;
    }

    bool acyclic_rec(NodeRef n, std::map<NodeRef, int>& state) const {
        n = deref(n);
        auto [it, fresh] = state.emplace(n, 1);
        if (!fresh) return it->second == 2;
        for (auto& [f, t] : nodes_[n].arcs)
            if (!acyclic_rec(t, state)) return false;
        state[n] = 2;
        return true;
    }

    const Signature* sig_;
    std::vector<Node> nodes_;
    std::vector<std::pair<NodeRef, Node>> trail_;
    bool trailing_ = false;
};

// Immutable feature-structure value.
struct FS {
    std::shared_ptr<const Graph> graph;
    NodeRef root = kNoNode;

    bool valid() const { return graph && root != kNoNode; }
    const Signature& sig() const { return graph->sig(); }
};

// Compacts the subgraph reachable from root into a fresh shared graph.
inline FS extract_fs(const Graph& g, NodeRef root) {
    auto out = std::make_shared<Graph>(&g.sig());
    NodeRef r = out->copy_from(g, root);
    return FS{std::move(out), r};
}

// Non-destructive unification.
inline std::optional<FS> unify(const FS& a, const FS& b) {
    Graph g(&a.sig());
    NodeRef ra = g.copy_from(*a.graph, a.root);
    NodeRef rb = g.copy_from(*b.graph, b.root);
    if (!g.unify(ra, rb)) return std::nullopt;
    if (!g.acyclic(ra)) return std::nullopt; // cyclic results are rejected
    return extract_fs(g, ra);
}

// Two-clause subsumption: general subsumes specific iff every path/value of
// general is present (with an at-or-below sort) in specific, and every
// structure sharing in general is shared in specific.
inline bool subsumes(const Graph& gen_g, NodeRef gen_r, const Graph& spec_g,
                     NodeRef spec_r) {
    std::map<NodeRef, NodeRef> image; // general node -> specific node
    struct Frame { NodeRef g, s; };
    std::vector<Frame> stack{{gen_g.deref(gen_r), spec_g.deref(spec_r)}};
    while (!stack.empty()) {
        auto [gn, sn] = stack.back();
        stack.pop_back();
        auto it = image.find(gn);
        if (it != image.end()) {
            if (it->second != sn) return false; // sharing clause
            continue;
        }
        image.emplace(gn, sn);
        if (!gen_g.sig().subsort(spec_g.sort_of(sn), gen_g.sort_of(gn)))
            return false;
        for (auto& [f, gt] : gen_g.arcs(gn)) {
            NodeRef st = spec_g.get(sn, f);
            if (st == kNoNode) return false;
            stack.push_back({gen_g.deref(gt), st});
        }
    }
    return true;
}

inline bool subsumes(const FS& general, const FS& specific) {
    return subsumes(*general.graph, general.root, *specific.graph, specific.root);
}

// Alphabetic variance: identical up to node renaming.
inline bool iso_equal(const Graph& ag, NodeRef ar, const Graph& bg, NodeRef br) {
    std::map<NodeRef, NodeRef> a2b, b2a;
    struct Frame { NodeRef a, b; };
    std::vector<Frame> stack{{ag.deref(ar), bg.deref(br)}};
    while (!stack.empty()) {
        auto [a, b] = stack.back();
        stack.pop_back();
        auto ia = a2b.find(a);
        auto ib = b2a.find(b);
        if (ia != a2b.end() || ib != b2a.end()) {
            if (ia == a2b.end() || ib == b2a.end()) return false;
            if (ia->second != b || ib->second != a) return false;
            continue;
        }
        a2b.emplace(a, b);
        b2a.emplace(b, a);
        if (ag.sort_of(a) != bg.sort_of(b)) return false;
        auto& aa = ag.arcs(a);
        auto& ba = bg.arcs(b);
        if (aa.size() != ba.size()) return false;
        for (size_t i = 0; i < aa.size(); ++i) {
            if (aa[i].first != ba[i].first) return false;
            stack.push_back({ag.deref(aa[i].second), bg.deref(ba[i].second)});
        }
    }
    return true;
}

inline bool iso_equal(const FS& a, const FS& b) {
    return iso_equal(*a.graph, a.root, *b.graph, b.root);
}

// Adds every appropriate-but-missing feature with its most general value,
// recursively. Returns the totally well-typed structure.
inline std::optional<FS> well_type(const FS& fs) {
    Graph g(&fs.sig());
    NodeRef root = g.copy_from(*fs.graph, fs.root);
    std::vector<NodeRef> work{root};
    std::map<NodeRef, bool> done;
    while (!work.empty()) {
        NodeRef n = g.deref(work.back());
        work.pop_back();
        if (done.count(n)) continue;
        done[n] = true;
        for (auto& [f, v] : g.sig().appropriate_features(g.sort_of(n))) {
            NodeRef t = g.get_or_add(n, f);
            if (t == kNoNode) return std::nullopt;
            work.push_back(t);
        }
    }
    return extract_fs(g, root);
}

inline NodeRef path_value(const FS& fs, const std::vector<std::string>& path) {
    NodeRef n = fs.graph->deref(fs.root);
    for (auto& fname : path) {
        FeatId f = fs.sig().feature_id(fname);
        if (f < 0) return kNoNode;
        n = fs.graph->get(n, f);
        if (n == kNoNode) return kNoNode;
    }
    return n;
}

// Paths (as feature-name sequences) whose node carries a non-leaf sort.
// One (shortest, first-found) path is reported per offending node.
inline std::vector<std::vector<std::string>> check_sort_resolved(const FS& fs) {
    std::vector<std::vector<std::string>> out;
    std::map<NodeRef, bool> seen;
    struct Frame { NodeRef n; std::vector<std::string> path; };
    std::vector<Frame> queue{{fs.graph->deref(fs.root), {}}};
    for (size_t i = 0; i < queue.size(); ++i) {
        auto [n, path] = queue[i];
        if (seen.count(n)) continue;
        seen[n] = true;
        if (!fs.sig().is_leaf(fs.graph->sort_of(n))) out.push_back(path);
        for (auto& [f, t] : fs.graph->arcs(n)) {
            auto p = path;
            p.push_back(fs.sig().feature_name(f));
            queue.push_back({fs.graph->deref(t), std::move(p)});
        }
    }
    return out;
}

} // namespace hpsgtr
