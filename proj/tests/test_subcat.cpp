#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "hpsgtr/subcat.hpp"

using namespace hpsgtr;

static const Signature& sig() {
    static Signature s = [] {
        std::ifstream in(std::string(HPSGTR_GRAMMAR_DIR) + "/signature.gr",
                         std::ios::binary);
        std::ostringstream ss;
        ss << in.rdbuf();
        return Signature::load(ss.str(), "signature.gr");
    }();
    return s;
}

static ClauseDB& db() {
    static ClauseDB d = [] {
        ClauseDB d(sig());
        register_list_set_clauses(d);
        return d;
    }();
    return d;
}

// Builds a subcat structure in a fresh state; synsem elements are tagged by
// their CASE value so surfaced orders can be read back as strings.
struct Setup {
    State state{Graph(&sig()), {}};
    NodeRef sub, out;

    explicit Setup(const std::string& desc) {
        Lexer lx(desc, "<test>");
        DescParser p(lx);
        Desc d = p.parse();
        std::map<std::string, NodeRef> env;
        DescBuilder b(state.g, env, nullptr);
        sub = state.g.make(sig().most_general());
        REQUIRE(b.apply(sub, expand_description(d, {})[0]));
        out = state.g.make(sig().most_general());
    }
};

// Reads the CASE sort names of the synsem elements of a flat list.
static std::string order_of(const Graph& g, NodeRef list) {
    std::string out;
    FeatId hd = sig().feature_id("hd"), tl = sig().feature_id("tl");
    std::vector<FeatId> case_path{sig().feature_id("local"), sig().feature_id("cat"),
                                  sig().feature_id("head"), sig().feature_id("case")};
    NodeRef n = g.deref(list);
    while (g.sig().subsort(g.sort_of(n), sig().sort_id("ne_list")) ||
           g.get(n, hd) != kNoNode) {
        NodeRef el = g.get(n, hd);
        if (el == kNoNode) break;
        NodeRef c = g.get_path(el, case_path);
        if (!out.empty()) out += " ";
        out += c == kNoNode ? "?" : sig().sort_name(g.sort_of(c));
        n = g.get(n, tl);
        if (n == kNoNode) break;
    }
    return out;
}

static std::multiset<std::string> surface_orders(const std::string& desc) {
    Setup s(desc);
    std::multiset<std::string> orders;
    for (State& r : db().call("surface", s.state, {s.sub, s.out}))
        orders.insert(order_of(r.g, s.out));
    return orders;
}

#define S(c) "(obl,s_arg:(synsem,local:cat:head:(noun,case:" c ")))"
#define OPT(c) "(opt,s_arg:(synsem,local:cat:head:(noun,case:" c ")))"

TEST_CASE("a pure list surfaces in order") {
    auto orders = surface_orders("[" S("nom") "," S("gen") "," S("loc") "]");
    REQUIRE(orders == std::multiset<std::string>{"nom gen loc"});
}

TEST_CASE("a set surfaces in every permutation") {
    auto orders = surface_orders("{" S("nom") "," S("gen") "," S("loc") "}");
    REQUIRE(orders == std::multiset<std::string>{"nom gen loc", "nom loc gen",
                                                 "gen nom loc", "gen loc nom",
                                                 "loc nom gen", "loc gen nom"});
}

TEST_CASE("a set nested in a list permutes before the fixed tail") {
    auto orders = surface_orders("[{" S("nom") "," S("dat") "," S("abl") "},"
                                 S("obj") "]");
    REQUIRE(orders.size() == 6);
    std::multiset<std::string> expect{"nom dat abl obj", "nom abl dat obj",
                                      "dat nom abl obj", "dat abl nom obj",
                                      "abl nom dat obj", "abl dat nom obj"};
    CHECK(orders == expect);
}

TEST_CASE("optional arguments are omitted or kept") {
    Setup s("{" OPT("nom") "," S("obj") "}");
    NodeRef removed = s.state.g.make(sig().most_general());
    std::multiset<std::string> all;
    for (State& r1 : db().call("removeop", s.state, {s.sub, removed}))
        for (State& r2 : db().call("surface", r1, {removed, s.out}))
            all.insert(order_of(r2.g, s.out));
    REQUIRE(all == std::multiset<std::string>{"nom obj", "obj nom", "obj"});
}

TEST_CASE("selectlast takes the last surfaced complement") {
    Setup s("[{" S("nom") "," S("dat") "}," S("obj") "]");
    NodeRef arg = s.state.g.make(sig().most_general());
    auto results = db().call("selectlast", s.state, {arg, s.sub, s.out});
    REQUIRE(results.size() == 2); // nom dat | dat nom, each ending in obj
    std::vector<FeatId> case_path{sig().feature_id("local"), sig().feature_id("cat"),
                                  sig().feature_id("head"), sig().feature_id("case")};
    std::multiset<std::string> rests;
    for (State& r : results) {
        NodeRef c = r.g.get_path(arg, case_path);
        REQUIRE(c != kNoNode);
        CHECK(sig().sort_name(r.g.sort_of(c)) == "obj");
        rests.insert(order_of(r.g, s.out));
    }
    CHECK(rests == std::multiset<std::string>{"nom dat", "dat nom"});
}

TEST_CASE("selectlast commits to the plain-list clause when it applies") {
    // remainders of earlier retrievals are plain synsem lists
    Setup s("(ne_list_synsem,[(synsem,local:cat:head:(noun,case:nom)),"
            "(synsem,local:cat:head:(noun,case:gen))])");
    NodeRef arg = s.state.g.make(sig().most_general());
    auto results = db().call("selectlast", s.state, {arg, s.sub, s.out});
    REQUIRE(results.size() == 1);
    std::vector<FeatId> case_path{sig().feature_id("local"), sig().feature_id("cat"),
                                  sig().feature_id("head"), sig().feature_id("case")};
    CHECK(sig().sort_name(results[0].g.sort_of(
              results[0].g.get_path(arg, case_path))) == "gen");
    CHECK(order_of(results[0].g, s.out) == "nom");
}

TEST_CASE("selectfirst takes the first surfaced complement") {
    Setup s("[" S("nom") "," S("gen") "]");
    NodeRef arg = s.state.g.make(sig().most_general());
    auto results = db().call("selectfirst", s.state, {arg, s.sub, s.out});
    REQUIRE(results.size() == 1);
    std::vector<FeatId> case_path{sig().feature_id("local"), sig().feature_id("cat"),
                                  sig().feature_id("head"), sig().feature_id("case")};
    CHECK(sig().sort_name(results[0].g.sort_of(
              results[0].g.get_path(arg, case_path))) == "nom");
    CHECK(order_of(results[0].g, s.out) == "gen");
}

TEST_CASE("append concatenates plain lists") {
    Setup s("[(synsem,local:cat:head:(noun,case:nom))]");
    Lexer lx("[(synsem,local:cat:head:(noun,case:gen))]", "<test>");
    DescParser p(lx);
    std::map<std::string, NodeRef> env;
    DescBuilder b(s.state.g, env, nullptr);
    NodeRef second = s.state.g.make(sig().most_general());
    REQUIRE(b.apply(second, expand_description(p.parse(), {})[0]));
    auto results = db().call("append", s.state, {s.sub, second, s.out});
    REQUIRE(results.size() == 1);
    CHECK(order_of(results[0].g, s.out) == "nom gen");
}
