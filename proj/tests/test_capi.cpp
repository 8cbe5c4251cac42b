#include <doctest.h>

#include <string>

#include "fixtures.hpp"
#include "mtmorph/mtmorph.h"

namespace {

struct Loaded {
    mtm_grammar* g = nullptr;
    mtm_morphology* m = nullptr;
    explicit Loaded(const std::string& lang) {
        REQUIRE(mtm_grammar_load(fixtures::data(lang + ".mtl").c_str(), &g) == MTM_OK);
        REQUIRE(mtm_morphology_open(g, fixtures::data(lang + ".lex").c_str(), &m) == MTM_OK);
    }
    ~Loaded() {
        mtm_morphology_free(m);
        mtm_grammar_free(g);
    }
};

std::string field(const mtm_result* r, std::size_t row, std::size_t col) {
    const char* f = mtm_result_field(r, row, col);
    return f ? f : "<null>";
}

}  // namespace

TEST_CASE("grammar handles") {
    Loaded ar("arabic");
    CHECK(mtm_grammar_tape_count(ar.g) == 3);
    CHECK(std::string(mtm_grammar_tape_name(ar.g, 1)) == "root");
    CHECK(mtm_grammar_tape_name(ar.g, 3) == nullptr);
    CHECK(mtm_grammar_has_rule(ar.g, "r15"));
    CHECK_FALSE(mtm_grammar_has_rule(ar.g, "r99"));

    const char* drop[] = {"r16"};
    mtm_grammar* v = nullptr;
    REQUIRE(mtm_grammar_without(ar.g, drop, 1, &v) == MTM_OK);
    CHECK_FALSE(mtm_grammar_has_rule(v, "r16"));
    mtm_grammar_free(v);

    mtm_result* r = nullptr;
    REQUIRE(mtm_grammar_dump(ar.g, "r15", &r) == MTM_OK);
    CHECK(field(r, 0, 0) == fixtures::slurp(fixtures::golden("r15.dump")));
    mtm_result_free(r);
    CHECK(mtm_grammar_dump(ar.g, "r99", &r) == MTM_ERR_UNKNOWN_RULE);
    CHECK(std::string(mtm_last_error()).find("r99") != std::string::npos);

    REQUIRE(mtm_grammar_compile(ar.g, &r) == MTM_OK);
    CHECK(mtm_result_rows(r) == 12);
    CHECK(mtm_result_fields(r, 0) == 3);
    mtm_result_free(r);

    REQUIRE(mtm_grammar_print(ar.g, &r) == MTM_OK);
    mtm_grammar* again = nullptr;
    CHECK(mtm_grammar_parse(field(r, 0, 0).c_str(), &again) == MTM_OK);
    mtm_grammar_free(again);
    mtm_result_free(r);
}

TEST_CASE("errors") {
    mtm_grammar* g = nullptr;
    CHECK(mtm_grammar_load("/nonexistent.mtl", &g) == MTM_ERR_IO);
    CHECK(g == nullptr);
    CHECK(mtm_grammar_parse("tapes: t*\nrule r1: nonsense\n", &g) == MTM_ERR_GRAMMAR);
    CHECK(std::string(mtm_last_error()) != "");
    CHECK(mtm_grammar_parse(nullptr, &g) == MTM_ERR_ARGUMENT);
    CHECK(mtm_grammar_load("x", nullptr) == MTM_ERR_ARGUMENT);

    Loaded ar("arabic");
    mtm_morphology* m = nullptr;
    CHECK(mtm_morphology_open(ar.g, fixtures::data("english.lex").c_str(), &m) == MTM_ERR_LEXICON);
    mtm_result* r = nullptr;
    CHECK(mtm_generate(ar.m, "pattern=form99,root=ktb,vocalism=a", MTM_MODE_FULL, MTM_ENGINE_AFST, &r) ==
          MTM_ERR_UNKNOWN_MORPHEME);
    CHECK(r == nullptr);
    mtm_result_free(nullptr);
}

TEST_CASE("generate and analyze") {
    Loaded ar("arabic");
    mtm_result* r = nullptr;
    REQUIRE(mtm_generate(ar.m, "pattern=q3,root=dħrj,vocalism=ui,affix=a", MTM_MODE_FULL, MTM_ENGINE_AFST, &r) ==
            MTM_OK);
    REQUIRE(mtm_result_rows(r) == 1);
    CHECK(field(r, 0, 0) == "dħunrija");
    CHECK(field(r, 0, 1) == "d ħ u n r i j a");
    CHECK(mtm_result_fields(r, 0) >= 3);
    CHECK(mtm_result_field(r, 0, 99) == nullptr);
    CHECK(mtm_result_field(r, 5, 0) == nullptr);
    mtm_result_free(r);

    REQUIRE(mtm_analyze(ar.m, "dħunrija", MTM_MODE_ALL, MTM_ENGINE_INTERPRETER, &r) == MTM_OK);
    REQUIRE(mtm_result_rows(r) == 1);
    CHECK(field(r, 0, 1) == "q3");
    CHECK(field(r, 0, 2) == "dħrj");
    CHECK(field(r, 0, 3) == "ui");
    CHECK(field(r, 0, 4) == "-a");
    mtm_result_free(r);

    REQUIRE(mtm_analyze(ar.m, "zzz", MTM_MODE_ALL, MTM_ENGINE_AFST, &r) == MTM_OK);
    CHECK(mtm_result_rows(r) == 0);
    mtm_result_free(r);
}

TEST_CASE("verify and equivalence") {
    Loaded ar("arabic");
    mtm_result* r = nullptr;
    REQUIRE(mtm_verify(ar.m, fixtures::data("arabic.tsv").c_str(), MTM_ENGINE_AFST, &r) == MTM_OK);
    CHECK(mtm_result_rows(r) == 38);
    CHECK(mtm_result_failures(r) == 0);
    CHECK(std::string(mtm_result_summary(r)).find("32") != std::string::npos);
    mtm_result_free(r);

    Loaded en("english");
    REQUIRE(mtm_equivalence(en.m, nullptr, 50, 1, &r) == MTM_OK);
    CHECK(mtm_result_failures(r) == 0);
    CHECK(mtm_result_rows(r) == 0);
    mtm_result_free(r);
}

TEST_CASE("ascii") {
    mtm_result* r = nullptr;
    REQUIRE(mtm_to_ascii("kpòlò", &r) == MTM_OK);
    CHECK(field(r, 0, 0) == "kpo^Llo^L");
    mtm_result_free(r);
    CHECK(std::string(mtm_version()) != "");
}
