#include <catch2/catch_amalgamated.hpp>

#include <fstream>
#include <sstream>

#include "hpsgtr/description.hpp"

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

static std::string sort_at(const FS& fs, std::vector<std::string> path) {
    NodeRef n = path_value(fs, path);
    REQUIRE(n != kNoNode);
    return fs.sig().sort_name(fs.graph->sort_of(n));
}

TEST_CASE("conjunction of feature constraints") {
    auto fss = parse_description("noun, case:nom, agr:(per:third,num:sing)", sig());
    REQUIRE(fss.size() == 1);
    CHECK(sort_at(fss[0], {}) == "noun");
    CHECK(sort_at(fss[0], {"case"}) == "nom");
    CHECK(sort_at(fss[0], {"agr", "per"}) == "third");
    CHECK(sort_at(fss[0], {"agr", "num"}) == "sing");
}

TEST_CASE("features pull in their introduction sort") {
    auto fss = parse_description("per:first", sig());
    REQUIRE(fss.size() == 1);
    CHECK(sort_at(fss[0], {}) == "agr");
}

TEST_CASE("inconsistent descriptions yield no structure") {
    CHECK(parse_description("noun, verb", sig()).empty());
    CHECK(parse_description("verb, case:nom", sig()).empty());
    CHECK_THROWS_WITH(parse_description("noun, zzz:nom", sig()),
                      Catch::Matchers::ContainsSubstring("unknown-feature"));
    CHECK_THROWS_WITH(parse_description("nounx", sig()),
                      Catch::Matchers::ContainsSubstring("unknown-sort"));
}

TEST_CASE("variables denote token identity") {
    auto fss = parse_description("noun, agr:X, n_ind:X", sig());
    REQUIRE(fss.size() == 1);
    CHECK(path_value(fss[0], {"agr"}) == path_value(fss[0], {"n_ind"}));

    auto eq = parse_description("noun, [agr] == [n_ind]", sig());
    REQUIRE(eq.size() == 1);
    CHECK(iso_equal(fss[0], eq[0]));

    // binding a variable in two incompatible positions fails
    CHECK(parse_description("cat, head:X, subj:X", sig()).empty());
}

TEST_CASE("disjunctions expand to alternatives") {
    auto fss = parse_description("case:(nom;gen)", sig());
    REQUIRE(fss.size() == 2);
    CHECK(sort_at(fss[0], {"case"}) == "nom");
    CHECK(sort_at(fss[1], {"case"}) == "gen");

    // unsatisfiable disjuncts are dropped
    auto some = parse_description("(noun;verb), case:nom", sig());
    REQUIRE(some.size() == 1);
    CHECK(sort_at(some[0], {}) == "noun");
}

TEST_CASE("list and set literals") {
    auto fss = parse_description("phon:[[k,e,d,i]]", sig());
    REQUIRE(fss.size() == 1);
    const FS& fs = fss[0];
    CHECK(sort_at(fs, {"phon"}) == "ne_list_string");
    CHECK(sort_at(fs, {"phon", "hd"}) == "ne_string");
    CHECK(sort_at(fs, {"phon", "hd", "hd"}) == "k");
    CHECK(sort_at(fs, {"phon", "hd", "tl", "hd"}) == "e");
    CHECK(sort_at(fs, {"phon", "hd", "tl", "tl", "tl", "tl"}) == "e_list");
    CHECK(sort_at(fs, {"phon", "tl"}) == "e_list");

    // a cons cell unified with its own tail: cyclic, rejected
    auto cyc = parse_description("[noun|T], [tl] == [tl,tl]", sig());
    CHECK(cyc.empty());

    auto open = parse_description("hd:noun, tl:T", sig());
    REQUIRE(open.size() == 1);
    CHECK(sort_at(open[0], {"tl"}) == "list");

    auto st = parse_description("subcat:{synsem}", sig());
    REQUIRE(st.size() == 1);
    CHECK(sort_at(st[0], {"subcat", "el"}) == "synsem");
    CHECK(sort_at(st[0], {"subcat", "els"}) == "e_list");

    auto empty = parse_description("subcat:[]", sig());
    REQUIRE(empty.size() == 1);
    CHECK(sort_at(empty[0], {"subcat"}) == "e_list");
}

TEST_CASE("macros substitute arguments and rename local variables") {
    MacroTable macros;
    {
        Lexer lx("np(Case,Ind) macro synsem, local:(cat:(head:(noun,case:Case), "
                 "subcat:e_list), cont:index:Ind).",
                 "<macros>");
        Token name = lx.expect_kind(Tok::Ident, "macro name");
        MacroDef def;
        lx.expect("(");
        def.params.push_back(lx.expect_kind(Tok::Var, "parameter").text);
        lx.expect(",");
        def.params.push_back(lx.expect_kind(Tok::Var, "parameter").text);
        lx.expect(")");
        lx.expect("macro");
        DescParser p(lx);
        def.body = p.parse();
        lx.expect(".");
        macros.emplace(name.text, std::move(def));
    }
    auto fss = parse_description("@np(nom, I), local:cont:index:(I, per:third)",
                                 sig(), macros);
    REQUIRE(fss.size() == 1);
    CHECK(sort_at(fss[0], {"local", "cat", "head", "case"}) == "nom");
    CHECK(sort_at(fss[0], {"local", "cont", "index", "per"}) == "third");
    CHECK(path_value(fss[0], {"local", "cont", "index"}) != kNoNode);

    // two expansions must not share macro-local variables
    MacroDef shared;
    shared.body = Desc{Desc::Conj, "", {Desc{Desc::Feat, "agr", {Desc{Desc::Var, "L"}}},
                                        Desc{Desc::Feat, "n_ind", {Desc{Desc::Var, "L"}}}}};
    macros.emplace("selfagr", std::move(shared));
    auto two = parse_description("hd:(noun,@selfagr), tl:hd:(noun,@selfagr)", sig(),
                                 macros);
    REQUIRE(two.size() == 1);
    CHECK(path_value(two[0], {"hd", "agr"}) ==
          path_value(two[0], {"hd", "n_ind"}));
    CHECK(path_value(two[0], {"hd", "agr"}) !=
          path_value(two[0], {"tl", "hd", "agr"}));

    CHECK_THROWS_WITH(parse_description("@nosuch", sig(), macros),
                      Catch::Matchers::ContainsSubstring("unknown-macro"));
    CHECK_THROWS_WITH(parse_description("@np(nom)", sig(), macros),
                      Catch::Matchers::ContainsSubstring("arity-mismatch"));
}

TEST_CASE("guards are rejected outside clause contexts") {
    CHECK_THROWS_WITH(parse_description("head: =\\= noun", sig()),
                      Catch::Matchers::ContainsSubstring("guard"));
}

TEST_CASE("guards record deferred checks in clause contexts") {
    Graph g(&sig());
    NodeRef root = g.make(sig().most_general());
    std::map<std::string, NodeRef> env;
    std::vector<Guard> guards;
    DescBuilder b(g, env, &guards);

    Lexer lx("cat, head:(=\\= noun), subj:X, subcat:(=\\= X)", "<clause>");
    DescParser p(lx);
    Desc d = p.parse();
    REQUIRE(b.apply(root, d));
    REQUIRE(b.finish());
    REQUIRE(guards.size() == 2);

    // head is still just `head`: the sort guard passes
    CHECK(guards[0].eval(g));
    // refine head below noun: the guard now fails
    REQUIRE(g.refine(g.get_or_add(root, sig().feature_id("head")),
                     sig().sort_id("common")));
    CHECK(!guards[0].eval(g));

    // subj and subcat are distinct tokens: inequation passes
    CHECK(guards[1].eval(g));
}
