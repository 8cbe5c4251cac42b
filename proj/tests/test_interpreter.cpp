#include <doctest.h>

#include <algorithm>

#include "fixtures.hpp"

using namespace mtmorph;
using fixtures::syms;

namespace {

std::vector<std::vector<Symbol>> tapes3(std::string_view pt, std::string_view rt, std::string_view vt) {
    return {syms(pt), syms(rt), syms(vt)};
}

std::vector<std::string> numbers(const Derivation& d) {
    std::vector<std::string> out;
    for (const auto& id : d.rule_ids()) out.push_back(id.substr(1));
    return out;
}

std::set<std::string> surfaces(const Grammar& g, const std::vector<Generation>& gens) {
    std::set<std::string> out;
    for (const auto& gen : gens) out.insert(render_surface(g, gen.surface));
    return out;
}

}  // namespace

TEST_CASE("English: move+ed to moved") {
    Interpreter in(fixtures::grammar("english"));
    auto ds = in.check({syms("m o v e + e d")}, syms("m o v e d"));
    REQUIRE(ds.size() == 1);
    const auto& steps = ds[0].steps;
    REQUIRE(steps.size() == 7);
    CHECK(steps[3].pair.lex.cells[0] == "e");
    CHECK(steps[3].pair.surf.empty());
    CHECK(steps[3].rule == "r6");
    CHECK(steps[4].pair.lex.cells[0] == "+");
    CHECK(steps[4].rule == "r5");

    CHECK(in.check({syms("m o v e + e d")}, syms("m o v e e d")).empty());
    CHECK(in.check({syms("m o v e + s")}, syms("m o v e s")).size() == 1);
}

TEST_CASE("dħunrija and dħunrj derivations") {
    Interpreter in(fixtures::grammar("arabic"));
    auto tapes = tapes3("c1 c2 v1 n c3 v2 c4 + a +", "d ħ r j +", "u i +");

    auto a = in.check(tapes, syms("d ħ u n r i j a"));
    REQUIRE(a.size() == 1);
    CHECK(numbers(a[0]) == std::vector<std::string>{"8", "8", "9", "7", "8", "9", "8", "11", "7", "10"});

    auto b = in.check(tapes, syms("d ħ u n r j"));
    REQUIRE(b.size() == 1);
    CHECK(numbers(b[0]) == std::vector<std::string>{"8", "8", "9", "7", "8", "13", "8", "11", "12", "10"});

    CHECK(format_trace(a[0]) == fixtures::slurp(fixtures::golden("dhunrija.trace")));
    CHECK(format_trace(b[0]) == fixtures::slurp(fixtures::golden("dhunrj.trace")));

    CHECK(in.check(tapes, syms("k t b")).empty());
}

TEST_CASE("synthesis") {
    const Grammar& g = fixtures::grammar("arabic");
    Interpreter geminate(g.without({"r16"}));
    auto form5 = geminate.synthesize(tapes3("t v1 c1 v1 c2 c2 v2 c3", "k t b", "u i"), Mode::Full);
    REQUIRE(form5.size() == 1);
    CHECK(render_surface(g, form5[0].surface) == "tukuttib");
    REQUIRE(form5[0].derivations.size() == 1);
    CHECK(numbers(form5[0].derivations[0]) == std::vector<std::string>{"7", "9", "8", "15", "8", "14", "9", "8"});

    Interpreter both(g);
    auto spread = both.synthesize(tapes3("t v1 c1 v1 c2 c2 v2 c3", "k t b", "u i"), Mode::Full);
    REQUIRE(spread.size() == 1);
    std::set<std::string> gemination_rules;
    for (const auto& d : spread[0].derivations) gemination_rules.insert(numbers(d)[5]);
    CHECK(gemination_rules == std::set<std::string>{"14", "16"});

    auto q3 = both.synthesize(tapes3("c1 c2 v1 n c3 v2 c4 + a +", "d ħ r j +", "u i +"), Mode::All);
    auto q3s = surfaces(g, q3);
    CHECK(q3s.contains("dħunrija"));
    CHECK(q3s.contains("dħunrj"));

    auto katab = both.synthesize(tapes3("c1 v1 c2 v2 c3", "k t b", "a"), Mode::Full);
    CHECK(surfaces(g, katab) == std::set<std::string>{"katab"});

    CHECK(both.synthesize(tapes3("", "k t b", "a"), Mode::All).empty());
}

TEST_CASE("ellipsis binds the nearest match") {
    const Grammar& g = fixtures::grammar("arabic");
    const Rule* r15 = g.find_rule("r15");
    REQUIRE(r15);
    const std::vector<SymbolTuple> alphabet{{syms("v1 0 a")}, {syms("v1 0 u")}, {syms("c1 k 0")}, {syms("v1 0 0")},
                                            {syms("v2 0 i")}};

    // every history of up to five tuples
    std::vector<std::vector<SymbolTuple>> histories{{}};
    for (std::size_t len = 0; len < 5; ++len) {
        std::vector<std::vector<SymbolTuple>> longer;
        for (const auto& h : histories)
            if (h.size() == len)
                for (const auto& t : alphabet) {
                    auto n = h;
                    n.push_back(t);
                    longer.push_back(std::move(n));
                }
        histories.insert(histories.end(), longer.begin(), longer.end());
    }
    REQUIRE(histories.size() == 3906);

    for (const auto& h : histories) {
        std::optional<Symbol> nearest;
        for (std::size_t i = h.size(); i-- > 0;)
            if (h[i].cells[0] == "v1" && h[i].cells[2] != "0") {
                nearest = h[i].cells[2];
                break;
            }
        auto got = match_llc(g, *r15, h, {});
        if (!nearest) {
            CHECK(got.empty());
            continue;
        }
        REQUIRE(got.size() == 1);
        CHECK(got[0].at("X") == *nearest);
    }
}

TEST_CASE("empty context always matches") {
    const Grammar& g = fixtures::grammar("arabic");
    const Rule* r7 = g.find_rule("r7");
    auto got = match_llc(g, *r7, {{syms("c1 k 0")}}, {{"Q", "q"}});
    REQUIRE(got.size() == 1);
    CHECK(got[0] == Bindings{{"Q", "q"}});
}

TEST_CASE("vocalisation modes") {
    const auto& m = fixtures::morphology("arabic");
    const Grammar& g = m.grammar();
    std::size_t with_deletion = 0;
    for (const auto& sel : m.combinations()) {
        auto tapes = m.resolve(sel);
        auto full = surfaces(g, m.interpreter().synthesize(tapes, Mode::Full));
        auto all = surfaces(g, m.interpreter().synthesize(tapes, Mode::All));
        auto bare = surfaces(g, m.interpreter().synthesize(tapes, Mode::Bare));
        CAPTURE(join(sel.main, " "));
        CHECK(std::includes(all.begin(), all.end(), full.begin(), full.end()));
        CHECK(std::includes(all.begin(), all.end(), bare.begin(), bare.end()));
        if (all.size() > full.size()) {
            ++with_deletion;
            for (const auto& s : full) CHECK_FALSE(bare.contains(s));
        }
    }
    CHECK(with_deletion > 0);
}

TEST_CASE("matres lectionis survive bare mode") {
    const auto& m = fixtures::morphology("arabic");
    const Grammar& g = m.grammar();
    for (const auto* pattern : m.lexicon().main_entries(0)) {
        const auto& p = pattern->symbols;
        bool long_vowel = false;
        for (std::size_t i = 0; i + 1 < p.size(); ++i) long_vowel |= p[i] == "v1" && p[i + 1] == "v1";
        if (!long_vowel) continue;
        Selection sel{{pattern->id, "ktb", "a"}, {}};
        for (const auto& gen : m.interpreter().synthesize(m.resolve(sel), Mode::Bare)) {
            CAPTURE(pattern->id);
            CHECK(render_surface(g, gen.surface).find("aa") != std::string::npos);
        }
    }
}
