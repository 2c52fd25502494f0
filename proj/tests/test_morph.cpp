#include <catch2/catch_amalgamated.hpp>

#include "hpsgtr/morph.hpp"

using namespace hpsgtr;

TEST_CASE("letters split and join as code points") {
    Letters ls = split_letters("çiçeği");
    REQUIRE(ls == Letters{"ç", "i", "ç", "e", "ğ", "i"});
    CHECK(join_letters(ls) == "çiçeği");
}

TEST_CASE("decomposed spellings are composed before matching") {
    // c + combining cedilla, g + combining breve
    std::string nfd = "c\xCC\xA7" "i\xC3\xA7" "ek";
    CHECK(split_letters(nfd) == Letters{"ç", "i", "ç", "e", "k"});
    CHECK(split_letters("g\xCC\x86") == Letters{"ğ"});
}

TEST_CASE("vowel classification") {
    for (auto l : {"a", "ı", "o", "u"}) {
        CHECK(back_vowel(l));
        CHECK_FALSE(front_vowel(l));
    }
    for (auto l : {"e", "i", "ö", "ü"}) CHECK(front_vowel(l));
    CHECK(back_rounded("o"));
    CHECK(front_rounded("ü"));
    CHECK(back_unrounded("ı"));
    CHECK(front_unrounded("e"));
    CHECK_FALSE(is_vowel("k"));

    auto vc = vowel_class("ö");
    REQUIRE(vc);
    CHECK_FALSE(vc->back);
    CHECK(vc->rounded);
    CHECK_FALSE(vowel_class("m"));
}

TEST_CASE("consonant softening") {
    CHECK(soften("p") == "b");
    CHECK(soften("ç") == "c");
    CHECK(soften("t") == "d");
    CHECK(soften("k") == "ğ");
    CHECK_FALSE(soften("m"));
    CHECK_FALSE(soften("a"));
}

TEST_CASE("guards classify one- and two-letter windows") {
    CHECK(eval_guard("back", {"a"}));
    CHECK_FALSE(eval_guard("back", {"e"}));
    CHECK_FALSE(eval_guard("back", {"a", "m"})); // single-letter guard
    CHECK(eval_guard("kalin_hece", {"a"}));
    CHECK(eval_guard("kalin_hece", {"a", "m"}));
    CHECK_FALSE(eval_guard("kalin_hece", {"e", "v"}));
    CHECK(eval_guard("b_u_hece", {"ı", "ş"}));
    CHECK_FALSE(eval_guard("b_u_hece", {"o", "ş"}));

    auto yum = eval_guard("b_u_yum", {"a", "p"});
    REQUIRE(yum);
    CHECK(yum->softened == "b");
    CHECK_FALSE(eval_guard("b_u_yum", {"a", "m"})); // m does not soften
    CHECK_FALSE(eval_guard("b_u_yum", {"e", "p"})); // wrong vowel class
    CHECK_FALSE(eval_guard("b_u_yum", {"p"}));      // needs two letters

    CHECK_THROWS_AS(eval_guard("no_such_guard", {"a"}), GrammarError);
}

TEST_CASE("morphs patterns apply first-match") {
    Morphs m = parse_morphs(
        "(X,L2) becomes (X,L2,lar) when kalin_hece(L2),"
        "(X,L2) becomes (X,L2,ler) when ince_hece(L2).");
    CHECK(m.apply("kapı") == "kapılar");
    CHECK(m.apply("adam") == "adamlar");
    CHECK(m.apply("ev") == "evler");
    CHECK(m.apply("kedi") == "kediler");
    CHECK(m.apply("çocuk") == "çocuklar");
}

TEST_CASE("softening clauses take precedence over plain harmony") {
    Morphs m = parse_morphs(
        "(X,[L1,L2]) becomes (X,L1,[Y],[ı]) when b_u_yum([L1,L2],Y),"
        "(X,L2) becomes (X,L2,[ı]) when b_u_hece(L2).");
    CHECK(m.apply("kitap") == "kitabı");
    CHECK(m.apply("adam") == "adamı");
}

TEST_CASE("identity and suffix-only patterns") {
    Morphs id = parse_morphs("X becomes X.");
    CHECK(id.apply("söylüyor") == "söylüyor");
    Morphs ki = parse_morphs("(X) becomes (X,ki).");
    CHECK(ki.apply("evde") == "evdeki");
}

TEST_CASE("no pattern applies") {
    Morphs m = parse_morphs("(X,[L]) becomes (X,[L],nı) when backunrounded(L).");
    CHECK_FALSE(m.apply("adam")); // consonant-final
    CHECK_FALSE(m.apply("kedi")); // wrong class
    CHECK(m.apply("kapı") == "kapını");
}

TEST_CASE("malformed blocks are rejected") {
    CHECK_THROWS_AS(parse_morphs("(X,L2) becomes"), GrammarError);
    CHECK_THROWS_AS(parse_morphs("(X,L2) (X,L2,lar)."), GrammarError);
    Morphs m = parse_morphs("(X,L2) becomes (X,L2,lar) when nonsense(L2).");
    CHECK_THROWS_AS(m.apply("kapı"), GrammarError);
}

TEST_CASE("suffix catalog: accusative") {
    CHECK(harmonize_catalog("adam", "acc") == "adamı");
    CHECK(harmonize_catalog("kedi", "acc") == "kediyi");
    CHECK(harmonize_catalog("kapı", "acc") == "kapıyı");
    CHECK(harmonize_catalog("ev", "acc") == "evi");
    CHECK(harmonize_catalog("kitap", "acc") == "kitabı");
    CHECK(harmonize_catalog("çocuk", "acc") == "çocuğu");
    CHECK(harmonize_catalog("çiçek", "acc") == "çiçeği");
    CHECK(harmonize_catalog("kalem", "acc") == "kalemi");
    CHECK(harmonize_catalog("köy", "acc") == "köyü");
    // buffer-n variant used after a possessive suffix
    CHECK(harmonize_catalog("kapısı", "acc_n") == "kapısını");
    CHECK(harmonize_catalog("evi", "acc_n") == "evini");
    CHECK_FALSE(harmonize_catalog("adam", "acc_n"));
}

TEST_CASE("suffix catalog: plural") {
    CHECK(harmonize_catalog("kapı", "plural") == "kapılar");
    CHECK(harmonize_catalog("ev", "plural") == "evler");
    CHECK(harmonize_catalog("çocuk", "plural") == "çocuklar");
    CHECK(harmonize_catalog("çiçek", "plural") == "çiçekler");
}

TEST_CASE("suffix catalog: dative") {
    CHECK(harmonize_catalog("adam", "dat") == "adama");
    CHECK(harmonize_catalog("kedi", "dat") == "kediye");
    CHECK(harmonize_catalog("kapı", "dat") == "kapıya");
    CHECK(harmonize_catalog("ev", "dat") == "eve");
    CHECK(harmonize_catalog("kitap", "dat") == "kitaba");
    CHECK(harmonize_catalog("kapısı", "dat_n") == "kapısına");
    CHECK(harmonize_catalog("evi", "dat_n") == "evine");
}

TEST_CASE("suffix catalog: locative and ablative") {
    CHECK(harmonize_catalog("adam", "loc") == "adamda");
    CHECK(harmonize_catalog("kedi", "loc") == "kedide");
    CHECK(harmonize_catalog("kitap", "loc") == "kitapta");
    CHECK(harmonize_catalog("çiçek", "loc") == "çiçekte");
    CHECK(harmonize_catalog("adam", "abl") == "adamdan");
    CHECK(harmonize_catalog("kedi", "abl") == "kediden");
    CHECK(harmonize_catalog("kitap", "abl") == "kitaptan");
    CHECK(harmonize_catalog("kapısı", "loc_n") == "kapısında");
    CHECK(harmonize_catalog("evi", "abl_n") == "evinden");
}

TEST_CASE("suffix catalog: genitive") {
    CHECK(harmonize_catalog("adam", "gen") == "adamın");
    CHECK(harmonize_catalog("kedi", "gen") == "kedinin");
    CHECK(harmonize_catalog("kapı", "gen") == "kapının");
    CHECK(harmonize_catalog("ev", "gen") == "evin");
    CHECK(harmonize_catalog("kitap", "gen") == "kitabın");
    CHECK(harmonize_catalog("çocuk", "gen") == "çocuğun");
    CHECK(harmonize_catalog("köy", "gen") == "köyün");
}

TEST_CASE("suffix catalog: instrumental") {
    CHECK(harmonize_catalog("adam", "ins") == "adamla");
    CHECK(harmonize_catalog("kedi", "ins") == "kediyle");
    CHECK(harmonize_catalog("çocuk", "ins") == "çocukla");
    CHECK(harmonize_catalog("kapı", "ins") == "kapıyla");
}

TEST_CASE("suffix catalog: third person possessive") {
    CHECK(harmonize_catalog("kapı", "poss3s") == "kapısı");
    CHECK(harmonize_catalog("kedi", "poss3s") == "kedisi");
    CHECK(harmonize_catalog("ev", "poss3s") == "evi");
    CHECK(harmonize_catalog("kitap", "poss3s") == "kitabı");
    CHECK(harmonize_catalog("çocuk", "poss3s") == "çocuğu");
    CHECK(harmonize_catalog("kalem", "poss3s") == "kalemi");
}

TEST_CASE("suffix catalog: first person possessive") {
    CHECK(harmonize_catalog("kapı", "poss1s") == "kapım");
    CHECK(harmonize_catalog("kedi", "poss1s") == "kedim");
    CHECK(harmonize_catalog("ev", "poss1s") == "evim");
    CHECK(harmonize_catalog("kitap", "poss1s") == "kitabım");
    CHECK(harmonize_catalog("çocuk", "poss1s") == "çocuğum");
    CHECK(harmonize_catalog("adam", "poss1s") == "adamım");
}

TEST_CASE("suffix catalog: copulas") {
    CHECK(harmonize_catalog("kedi", "cop1s") == "kediyim");
    CHECK(harmonize_catalog("doktor", "cop1s") == "doktorum");
    CHECK(harmonize_catalog("kitap", "cop1s") == "kitabım");
    CHECK(harmonize_catalog("adam", "cop1s") == "adamım");
    CHECK(harmonize_catalog("kedi", "cop3s") == "kedidir");
    CHECK(harmonize_catalog("adam", "cop3s") == "adamdır");
    CHECK(harmonize_catalog("doktor", "cop3s") == "doktordur");
    // the softenable final consonant devoices the suffix but stays itself
    CHECK(harmonize_catalog("kitap", "cop3s") == "kitaptır");
}

TEST_CASE("suffix catalog: relativizer") {
    CHECK(harmonize_catalog("evde", "rlvz-ki") == "evdeki");
    CHECK_THROWS_AS(harmonize_catalog("ev", "no-such-suffix"), GrammarError);
}
