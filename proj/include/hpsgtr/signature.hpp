#pragma once

// Sort hierarchy with appropriateness conditions, loaded from ALE-style
// "Sort sub [Children] intro [feat:Value, ...]." clauses.
//
// The hierarchy is validated at load time: acyclic, rooted at `bot`, every
// feature introduced at exactly one most-general sort, and bounded complete
// (any two sorts with a common subsort have a unique greatest lower bound),
// so that unification of sorts is a total function into sorts-or-failure.

#include <algorithm>
#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "lexer.hpp"

namespace hpsgtr {

using SortId = int;
using FeatId = int;
inline constexpr SortId kNoSort = -1; // unification failure / absent

class Signature {
public:
    // --- queries ---------------------------------------------------------

    SortId sort_id(std::string_view name) const {
        auto it = sort_ids_.find(std::string(name));
        return it == sort_ids_.end() ? kNoSort : it->second;
    }
    const std::string& sort_name(SortId s) const { return sort_names_[s]; }
    size_t sort_count() const { return sort_names_.size(); }
    SortId most_general() const { return root_; }

    FeatId feature_id(std::string_view name) const {
        auto it = feat_ids_.find(std::string(name));
        return it == feat_ids_.end() ? -1 : it->second;
    }
    const std::string& feature_name(FeatId f) const { return feat_names_[f]; }
    size_t feature_count() const { return feat_names_.size(); }

    // Most general sort for which `f` is appropriate.
    SortId intro_sort(FeatId f) const { return feat_intro_[f]; }

    bool subsort(SortId a, SortId b) const {
        return bit(below_[b], a);
    }

    SortId glb(SortId a, SortId b) const {
        if (a == kNoSort || b == kNoSort) return kNoSort;
        return glb_[size_t(a) * sort_names_.size() + b];
    }

    // Inherited-plus-introduced feature map, value sorts at their most
    // specific restriction. Sorted by feature id (declaration order).
    const std::vector<std::pair<FeatId, SortId>>& appropriate_features(SortId s) const {
        return approp_[s];
    }

    SortId approp_value(SortId s, FeatId f) const {
        for (auto& [feat, val] : approp_[s])
            if (feat == f) return val;
        return kNoSort;
    }

    bool is_leaf(SortId s) const { return children_[s].empty(); }

    std::vector<SortId> leaf_sorts(SortId s) const {
        std::vector<SortId> out;
        for (SortId t = 0; t < SortId(sort_names_.size()); ++t)
            if (subsort(t, s) && is_leaf(t)) out.push_back(t);
        return out;
    }

    const std::vector<SortId>& direct_subsorts(SortId s) const { return children_[s]; }

    // --- loading ---------------------------------------------------------

    static Signature load(std::string_view text, std::string file = "<signature>") {
        Signature sig;
        sig.parse(text, std::move(file));
        sig.validate();
        return sig;
    }

private:
    struct Decl {
        std::vector<std::string> children;
        std::vector<std::pair<std::string, std::string>> intro;
        int line = 0;
    };

    void parse(std::string_view text, std::string file) {
        Lexer lx(text, file);
        while (!lx.at_end()) {
            Token name = lx.expect_kind(Tok::Ident, "sort name");
            lx.expect("sub");
            Decl d;
            d.line = name.line;
            lx.expect("[");
            while (!lx.accept("]")) {
                Token c = lx.expect_kind(Tok::Ident, "sort name");
                if (std::find(d.children.begin(), d.children.end(), c.text) ==
                    d.children.end())
                    d.children.push_back(c.text); // the source lists a few twice
                if (!lx.accept(",")) { lx.expect("]"); break; }
            }
            if (lx.accept("intro")) {
                lx.expect("[");
                while (!lx.accept("]")) {
                    Token f = lx.expect_kind(Tok::Ident, "feature name");
                    lx.expect(":");
                    Token v = lx.expect_kind(Tok::Ident, "value sort");
                    d.intro.emplace_back(f.text, v.text);
                    if (!lx.accept(",")) { lx.expect("]"); break; }
                }
            }
            lx.expect(".");
            if (decls_.count(name.text))
                throw GrammarError(file + ":" + std::to_string(name.line) +
                                   ": duplicate-sort: '" + name.text + "'");
            decls_.emplace(name.text, std::move(d));
            decl_order_.push_back(name.text);
        }
        file_ = std::move(file);
    }

    [[noreturn]] void err(const std::string& what) const {
        throw GrammarError(file_ + ": " + what);
    }

    void validate() {
        // Every mentioned sort must be declared.
        for (auto& nm : decl_order_)
            for (auto& c : decls_[nm].children)
                if (!decls_.count(c))
                    err("undeclared sort '" + c + "' listed under '" + nm + "'");

        // Assign ids; ensure a unique root named bot (created if absent).
        std::unordered_map<std::string, bool> has_parent;
        for (auto& nm : decl_order_)
            for (auto& c : decls_[nm].children) has_parent[c] = true;
        if (!decls_.count("bot")) {
            Decl root;
            for (auto& nm : decl_order_)
                if (!has_parent.count(nm)) root.children.push_back(nm);
            decl_order_.insert(decl_order_.begin(), "bot");
            decls_.emplace("bot", std::move(root));
        } else if (has_parent.count("bot")) {
            err("'bot' may not appear below another sort");
        }
        for (auto& nm : decl_order_) {
            sort_ids_.emplace(nm, SortId(sort_names_.size()));
            sort_names_.push_back(nm);
        }
        root_ = sort_ids_.at("bot");

        size_t n = sort_names_.size();
        children_.assign(n, {});
        parents_.assign(n, {});
        for (auto& nm : decl_order_) {
            SortId s = sort_ids_.at(nm);
            for (auto& c : decls_[nm].children) {
                SortId t = sort_ids_.at(c);
                children_[s].push_back(t);
                parents_[t].push_back(s);
            }
        }
        for (size_t s = 0; s < n; ++s)
            if (s != size_t(root_) && parents_[s].empty())
                parents_[s].push_back(root_), children_[root_].push_back(SortId(s));

        topo_sort();
        build_below();
        build_glb();
        build_approp();
    }

    void topo_sort() {
        size_t n = sort_names_.size();
        std::vector<int> indeg(n, 0);
        for (size_t s = 0; s < n; ++s)
            for (SortId c : children_[s]) ++indeg[c];
        std::vector<SortId> queue{root_};
        topo_.clear();
        while (!queue.empty()) {
            SortId s = queue.back();
            queue.pop_back();
            topo_.push_back(s);
            for (SortId c : children_[s])
                if (--indeg[c] == 0) queue.push_back(c);
        }
        if (topo_.size() != n) {
            // Some sort never reached indegree 0: a cycle (or unreachable-
            // from-root subgraph, which with implicit rooting is a cycle too).
            std::vector<bool> seen(n, false);
            for (SortId s : topo_) seen[s] = true;
            for (size_t s = 0; s < n; ++s)
                if (!seen[s])
                    err("cycle-in-hierarchy involving '" + sort_names_[s] + "'");
        }
    }

    static bool bit(const std::vector<uint64_t>& bs, int i) {
        return (bs[i >> 6] >> (i & 63)) & 1;
    }
    static void set_bit(std::vector<uint64_t>& bs, int i) {
        bs[i >> 6] |= uint64_t(1) << (i & 63);
    }

    void build_below() {
        size_t n = sort_names_.size(), w = (n + 63) / 64;
        below_.assign(n, std::vector<uint64_t>(w, 0));
        for (auto it = topo_.rbegin(); it != topo_.rend(); ++it) {
            SortId s = *it;
            set_bit(below_[s], s);
            for (SortId c : children_[s])
                for (size_t k = 0; k < w; ++k) below_[s][k] |= below_[c][k];
        }
    }

    void build_glb() {
        size_t n = sort_names_.size(), w = (n + 63) / 64;
        glb_.assign(n * n, kNoSort);
        std::vector<uint64_t> common(w);
        for (size_t a = 0; a < n; ++a) {
            for (size_t b = a; b < n; ++b) {
                bool empty = true;
                for (size_t k = 0; k < w; ++k) {
                    common[k] = below_[a][k] & below_[b][k];
                    empty &= common[k] == 0;
                }
                SortId g = kNoSort;
                if (!empty) {
                    for (size_t c = 0; c < n && g == kNoSort; ++c) {
                        if (!bit(common, int(c))) continue;
                        bool covers = true;
                        for (size_t k = 0; k < w; ++k)
                            covers &= (common[k] & ~below_[c][k]) == 0;
                        if (covers) g = SortId(c);
                    }
                    if (g == kNoSort)
                        err("no-unique-GLB for sorts ('" + sort_names_[a] + "', '" +
                            sort_names_[b] + "')");
                }
                glb_[a * n + b] = glb_[b * n + a] = g;
            }
        }
    }

    void build_approp() {
        size_t n = sort_names_.size();
        approp_.assign(n, {});
        auto feat_id = [&](const std::string& nm) {
            auto it = feat_ids_.find(nm);
            if (it != feat_ids_.end()) return it->second;
            FeatId f = FeatId(feat_names_.size());
            feat_ids_.emplace(nm, f);
            feat_names_.push_back(nm);
            feat_intro_.push_back(kNoSort);
            return f;
        };
        for (SortId s : topo_) {
            // Inherit from all parents; multiple parents must agree down to
            // a common value restriction.
            std::vector<std::pair<FeatId, SortId>> feats;
            for (SortId p : parents_[s]) {
                for (auto& [f, v] : approp_[p]) {
                    auto it = std::find_if(feats.begin(), feats.end(),
                                           [f = f](auto& e) { return e.first == f; });
                    if (it == feats.end()) {
                        feats.emplace_back(f, v);
                    } else {
                        SortId g = glb(it->second, v);
                        if (g == kNoSort)
                            err("incompatible inherited value sorts for feature '" +
                                feat_names_[f] + "' at '" + sort_names_[s] + "'");
                        it->second = g;
                    }
                }
            }
            for (auto& [fname, vname] : decls_[sort_names_[s]].intro) {
                auto vit = sort_ids_.find(vname);
                if (vit == sort_ids_.end())
                    err("unknown-value-sort '" + vname + "' for feature '" + fname +
                        "' at '" + sort_names_[s] + "'");
                FeatId f = feat_id(fname);
                auto it = std::find_if(feats.begin(), feats.end(),
                                       [f](auto& e) { return e.first == f; });
                if (it == feats.end()) {
                    // s introduces f; the introduction condition requires a
                    // unique most-general introducing sort.
                    if (feat_intro_[f] != kNoSort && !subsort(s, feat_intro_[f]))
                        err("feature-introduced-twice: '" + fname + "' at '" +
                            sort_names_[feat_intro_[f]] + "' and '" + sort_names_[s] +
                            "'");
                    if (feat_intro_[f] == kNoSort) feat_intro_[f] = s;
                    feats.emplace_back(f, vit->second);
                } else {
                    SortId g = glb(it->second, vit->second);
                    if (g == kNoSort)
                        err("feature '" + fname + "' at '" + sort_names_[s] +
                            "' redeclared with value sort incompatible with the "
                            "inherited one");
                    it->second = g;
                }
            }
            std::sort(feats.begin(), feats.end());
            approp_[s] = std::move(feats);
        }
    }

    std::string file_;
    std::unordered_map<std::string, Decl> decls_;
    std::vector<std::string> decl_order_;

    std::vector<std::string> sort_names_;
    std::unordered_map<std::string, SortId> sort_ids_;
    SortId root_ = 0;
    std::vector<std::vector<SortId>> children_, parents_;
    std::vector<SortId> topo_;
    std::vector<std::vector<uint64_t>> below_;
    std::vector<SortId> glb_;

    std::vector<std::string> feat_names_;
    std::unordered_map<std::string, FeatId> feat_ids_;
    std::vector<SortId> feat_intro_;
    std::vector<std::vector<std::pair<FeatId, SortId>>> approp_;
};

} // namespace hpsgtr
