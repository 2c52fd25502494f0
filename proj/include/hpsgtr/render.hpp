#pragma once

// Rendering of feature structures: attribute-value matrices, bracketed
// trees, and a JSON form that reconstructs to the same AVM.

#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "tfs.hpp"

namespace hpsgtr {

struct RenderOpts {
    bool sorts = true;     // print sort names on non-atomic nodes
    bool strings = true;   // render char lists as "quoted strings"
};

namespace detail {

inline std::string upper_ascii(std::string s) {
    for (char& c : s)
        if (c >= 'a' && c <= 'z') c = char(c - 'a' + 'A');
    return s;
}

class AvmWriter {
public:
    AvmWriter(const FS& fs, RenderOpts opts) : fs_(fs), opts_(opts) {
        number_shared(fs_.graph->deref(fs_.root));
        for (auto& [n, c] : counts_)
            if (c > 1) tags_.emplace(n, int(tags_.size()) + 1);
    }

    std::string write() { return node(fs_.graph->deref(fs_.root), 0); }

private:
    const Graph& g() const { return *fs_.graph; }

    void number_shared(NodeRef n) {
        n = g().deref(n);
        if (counts_[n]++ > 0) return;
        for (auto& [f, v] : g().arcs(n)) number_shared(v);
    }

    bool is_string(NodeRef n) const {
        n = g().deref(n);
        FeatId hd = fs_.sig().feature_id("hd"), tl = fs_.sig().feature_id("tl");
        SortId ch = fs_.sig().sort_id("char");
        if (hd < 0 || ch == kNoSort) return false;
        bool any = false;
        while (true) {
            if (g().arcs(n).empty())
                return any && fs_.sig().sort_name(g().sort_of(n)) == "e_list";
            NodeRef h = g().get(n, hd), t = g().get(n, tl);
            if (h == kNoNode || t == kNoNode) return false;
            if (!fs_.sig().subsort(g().sort_of(h), ch)) return false;
            if (counts_.count(g().deref(t)) && tags_.count(g().deref(t)))
                return false;
            any = true;
            n = g().deref(t);
        }
    }

    std::string string_text(NodeRef n) const {
        n = g().deref(n);
        FeatId hd = fs_.sig().feature_id("hd"), tl = fs_.sig().feature_id("tl");
        std::string out = "\"";
        while (!g().arcs(n).empty()) {
            out += fs_.sig().sort_name(g().sort_of(g().get(n, hd)));
            n = g().deref(g().get(n, tl));
        }
        return out + "\"";
    }

    // Renders a node as a block whose continuation lines are indented to
    // `col`. Atomic nodes are their sort name.
    std::string node(NodeRef n, size_t col) {
        n = g().deref(n);
        std::string tag;
        if (auto it = tags_.find(n); it != tags_.end()) {
            tag = "<" + std::to_string(it->second) + ">";
            if (!emitted_.insert(n).second) return tag;
            tag += " ";
        }
        if (g().arcs(n).empty())
            return tag + fs_.sig().sort_name(g().sort_of(n));
        if (opts_.strings && is_string(n)) return tag + string_text(n);

        std::string head = tag;
        if (opts_.sorts) head += fs_.sig().sort_name(g().sort_of(n)) + " ";
        head += "[ ";
        size_t inner = col + head.size();
        std::string out = head;
        bool first = true;
        for (auto& [f, v] : g().arcs(n)) {
            if (!first) out += "\n" + std::string(inner, ' ');
            first = false;
            std::string fname = detail::upper_ascii(fs_.sig().feature_name(f));
            out += fname + " " + node(v, inner + fname.size() + 1);
        }
        return out + " ]";
    }

    const FS& fs_;
    RenderOpts opts_;
    std::map<NodeRef, int> counts_, tags_;
    std::set<NodeRef> emitted_;
};

} // namespace detail

inline std::string render_avm(const FS& fs, RenderOpts opts = {}) {
    return detail::AvmWriter(fs, opts).write();
}

// --- JSON ---------------------------------------------------------------------

inline void json_escape(std::string& out, const std::string& s) {
    out += '"';
    for (char c : s) {
        if (c == '"' || c == '\\') out += '\\';
        out += c;
    }
    out += '"';
}

inline std::string render_json(const FS& fs) {
    std::map<NodeRef, int> counts, tags;
    std::set<NodeRef> emitted;
    const Graph& g = *fs.graph;
    std::function<void(NodeRef)> count = [&](NodeRef n) {
        n = g.deref(n);
        if (counts[n]++ > 0) return;
        for (auto& [f, v] : g.arcs(n)) count(v);
    };
    count(fs.root);
    for (auto& [n, c] : counts)
        if (c > 1) tags.emplace(n, int(tags.size()) + 1);

    std::function<void(std::string&, NodeRef)> emit = [&](std::string& out,
                                                          NodeRef n) {
        n = g.deref(n);
        out += "{";
        if (auto it = tags.find(n); it != tags.end()) {
            out += "\"tag\":" + std::to_string(it->second);
            if (!emitted.insert(n).second) {
                out += "}";
                return;
            }
            out += ",";
        }
        out += "\"sort\":";
        json_escape(out, fs.sig().sort_name(g.sort_of(n)));
        if (!g.arcs(n).empty()) {
            out += ",\"feats\":{";
            bool first = true;
            for (auto& [f, v] : g.arcs(n)) {
                if (!first) out += ",";
                first = false;
                json_escape(out, fs.sig().feature_name(f));
                out += ":";
                emit(out, v);
            }
            out += "}";
        }
        out += "}";
    };
    std::string out;
    emit(out, fs.root);
    return out;
}

// Rebuilds a feature structure from render_json output (used to check that
// the JSON form carries the full structure).
inline FS fs_from_json(const Signature& sig, const std::string& text) {
    size_t i = 0;
    auto skip = [&] { while (i < text.size() && isspace(text[i])) ++i; };
    auto expect = [&](char c) {
        skip();
        if (i >= text.size() || text[i] != c)
            throw GrammarError("json: expected '" + std::string(1, c) + "'");
        ++i;
    };
    auto str = [&]() {
        expect('"');
        std::string s;
        while (i < text.size() && text[i] != '"') {
            if (text[i] == '\\') ++i;
            s += text[i++];
        }
        expect('"');
        return s;
    };
    auto num = [&]() {
        skip();
        int v = 0;
        while (i < text.size() && isdigit(text[i])) v = v * 10 + (text[i++] - '0');
        return v;
    };
    auto g = std::make_shared<Graph>(&sig);
    std::map<int, NodeRef> by_tag;
    std::function<NodeRef()> obj = [&]() -> NodeRef {
        expect('{');
        NodeRef n = kNoNode;
        int tag = 0;
        bool first = true;
        while (true) {
            skip();
            if (text[i] == '}') { ++i; break; }
            if (!first) expect(',');
            first = false;
            std::string key = str();
            expect(':');
            if (key == "tag") {
                tag = num();
                if (auto it = by_tag.find(tag); it != by_tag.end()) n = it->second;
            } else if (key == "sort") {
                std::string s = str();
                SortId sid = sig.sort_id(s);
                if (sid == kNoSort) throw GrammarError("json: unknown sort " + s);
                if (n == kNoNode) n = g->make(sid);
                else g->refine(n, sid);
                if (tag) by_tag[tag] = n;
            } else if (key == "feats") {
                expect('{');
                bool ffirst = true;
                while (true) {
                    skip();
                    if (text[i] == '}') { ++i; break; }
                    if (!ffirst) expect(',');
                    ffirst = false;
                    std::string fname = str();
                    expect(':');
                    NodeRef v = obj();
                    FeatId f = sig.feature_id(fname);
                    NodeRef slot = g->get_or_add(n, f);
                    if (slot == kNoNode || !g->unify(slot, v))
                        throw GrammarError("json: inconsistent structure");
                }
            }
        }
        if (n == kNoNode) n = g->make(sig.most_general());
        if (tag) by_tag[tag] = n;
        return n;
    };
    NodeRef root = obj();
    return extract_fs(*g, root);
}

} // namespace hpsgtr
