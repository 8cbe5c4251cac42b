#include <doctest.h>

#include <algorithm>

#include "fixtures.hpp"

using namespace mtmorph;
using fixtures::syms;

namespace {

std::set<std::string> generate(const Morphology& m, std::string_view sel, Mode mode,
                               EngineKind engine = EngineKind::Afst) {
    std::set<std::string> out;
    for (const auto& gen : m.generate(parse_selection(m.grammar(), sel), mode, engine))
        out.insert(m.render(gen.surface));
    return out;
}

std::vector<std::string> labels(const Analysis& a) {
    auto out = a.main_ids();
    auto affixes = a.affix_labels();
    out.insert(out.end(), affixes.begin(), affixes.end());
    return out;
}

using Ids = std::vector<std::string>;

}  // namespace

TEST_CASE("selections") {
    const Grammar& g = fixtures::grammar("arabic");
    auto s = parse_selection(g, "pattern=q3,root=dħrj,vocalism=ui,affix=a");
    CHECK(s.main == Ids{"q3", "dħrj", "ui"});
    CHECK(s.affixes == Ids{"a"});
    CHECK(parse_selection(g, "root=ktb,prefix=t").affixes == Ids{"t-"});
    CHECK(parse_selection(g, "suffix=a").affixes == Ids{"-a"});
    CHECK_THROWS_AS(parse_selection(g, "stem=move"), MorphologyError);
    CHECK_THROWS_AS(parse_selection(g, "pattern"), MorphologyError);
    CHECK(parse_engine("afst") == EngineKind::Afst);
    CHECK(parse_engine("interpreter") == EngineKind::Interpreter);
    CHECK_FALSE(parse_engine("fst"));
}

TEST_CASE("generation") {
    const auto& m = fixtures::morphology("arabic");
    CHECK(generate(m, "pattern=q3,root=dħrj,vocalism=ui,affix=a", Mode::Full) == std::set<std::string>{"dħunrija"});
    CHECK(generate(m, "pattern=form10,root=ktb,vocalism=a", Mode::Full) == std::set<std::string>{"staktab"});
    CHECK(generate(m, "pattern=form1,root=ktb,vocalism=ui", Mode::Bare) == std::set<std::string>{"ktb"});
    CHECK(generate(m, "pattern=form1,root=ktb,vocalism=a", Mode::Full, EngineKind::Interpreter) ==
          std::set<std::string>{"katab"});
    CHECK(generate(m, "pattern=plural,root=ktb,vocalism=u", Mode::Full) == std::set<std::string>{"kutub"});
    CHECK_THROWS_AS(m.generate(parse_selection(m.grammar(), "pattern=form99,root=ktb,vocalism=a"), Mode::Full,
                               EngineKind::Afst),
                    MorphologyError);
}

TEST_CASE("analysis") {
    const auto& m = fixtures::morphology("arabic");
    for (auto engine : {EngineKind::Interpreter, EngineKind::Afst}) {
        auto dh = m.analyze(std::string_view("dħunrija"), Mode::All, engine);
        REQUIRE(dh.size() == 1);
        CHECK(labels(dh[0]) == Ids{"q3", "dħrj", "ui", "-a"});
        CHECK(dh[0].matches(parse_selection(m.grammar(), "pattern=q3,root=dħrj,vocalism=ui,affix=a")));

        auto ktb = m.analyze(std::string_view("ktb"), Mode::All, engine);
        CHECK(ktb.size() >= 2);
        CHECK(std::is_sorted(ktb.begin(), ktb.end(), [](const Analysis& a, const Analysis& b) {
            return a.morpheme_count() < b.morpheme_count();
        }));

        auto kutb = m.analyze(std::string_view("kutb"), Mode::All, engine);
        CHECK(std::none_of(kutb.begin(), kutb.end(),
                           [](const Analysis& a) { return labels(a) == Ids{"form1", "ktb", "a"}; }));

        CHECK(m.analyze(std::string_view("zzz"), Mode::All, engine).empty());
        CHECK(m.analyze(std::string_view(""), Mode::All, engine).empty());
    }
}

TEST_CASE("compatibility") {
    const auto& m = fixtures::morphology("arabic");
    const auto& lex = m.lexicon();
    auto one = [&](const char* id) { return lex.find(id)[0]; };
    CHECK(m.compatible({one("form1"), one("ktb"), one("a")}));
    CHECK_FALSE(m.compatible({one("q1"), one("ktb"), one("a")}));
    CHECK_FALSE(m.compatible({one("form1"), one("dħrj"), one("a")}));
    CHECK_FALSE(m.compatible({one("form1"), one("ktb"), one("u")}));
    CHECK(m.compatible({one("plural"), one("ktb"), one("u")}));
    CHECK_FALSE(m.compatible({one("plural"), one("qtl"), one("u")}));

    // brute force over every triple
    std::size_t count = 0;
    for (const auto* p : lex.main_entries(0))
        for (const auto* r : lex.main_entries(1))
            for (const auto* v : lex.main_entries(2)) count += m.compatible({p, r, v});
    CHECK(m.combinations().size() == count);
}

TEST_CASE("golden tables") {
    for (const char* lang : {"arabic", "english", "ngbaka"}) {
        CAPTURE(lang);
        const auto& m = fixtures::morphology(lang);
        auto rows = load_golden(fixtures::data(std::string(lang) + ".tsv"),
                                m.grammar());
        for (auto engine : {EngineKind::Interpreter, EngineKind::Afst}) {
            auto report = verify_golden(m, rows, engine);
            CHECK(report.ok());
            CHECK(report.passed + report.skipped == rows.size());
        }
    }
    const Grammar& g = fixtures::grammar("arabic");
    auto rows = parse_golden(g, "form-id\tvoice\tsurface\tmorpheme-ids\n1\tactive\tkatab\tpattern=form1,root=ktb,"
                                "vocalism=a\n1\tpassive\t—\tpattern=form1,root=ktb,vocalism=ui\n");
    REQUIRE(rows.size() == 2);
    CHECK(rows[0].attested());
    CHECK_FALSE(rows[1].attested());
    CHECK_THROWS_AS(parse_golden(g, "1\tactive\n"), MorphologyError);

    auto report = verify_golden(fixtures::morphology("arabic"),
                                parse_golden(g, "1\tactive\tkitab\tpattern=form1,root=ktb,vocalism=a\n"),
                                EngineKind::Afst);
    CHECK(report.failed == 1);
    CHECK_FALSE(report.ok());
}

TEST_CASE("engines agree") {
    for (const char* lang : {"english", "ngbaka"}) {
        CAPTURE(lang);
        const auto& m = fixtures::morphology(lang);
        auto corpus = equivalence_corpus(m, {}, 100, 7);
        auto report = equivalence_check(m, corpus);
        CHECK(report.generation_items == corpus.tapes.size());
        CHECK(report.ok());
    }
    const auto& m = fixtures::morphology("english");
    auto a = equivalence_corpus(m, {}, 50, 3);
    auto b = equivalence_corpus(m, {}, 50, 3);
    CHECK(a.tapes == b.tapes);
    CHECK(a.surfaces == b.surfaces);
    for (const auto& tapes : a.tapes)
        for (const auto& t : tapes) CHECK(t.size() <= 8);
}

TEST_CASE("round trip over the lexicon") {
    for (const char* lang : {"english", "ngbaka", "arabic"}) {
        CAPTURE(lang);
        const auto& m = fixtures::morphology(lang);
        for (const auto& sel : m.combinations()) {
            CAPTURE(join(sel.main, " "));
            for (const auto& gen : m.generate(sel, Mode::Full, EngineKind::Afst)) {
                auto back = m.analyze(gen.surface, Mode::All, EngineKind::Afst);
                CHECK(std::any_of(back.begin(), back.end(), [&](const Analysis& a) { return a.matches(sel); }));
            }
        }
    }
}
