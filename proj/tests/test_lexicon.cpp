#include <doctest.h>

#include <algorithm>

#include "fixtures.hpp"

using namespace mtmorph;
using fixtures::syms;

namespace {

std::vector<std::string> ids(const std::vector<const MorphemeEntry*>& seg) {
    std::vector<std::string> out;
    for (const auto* e : seg) out.push_back(e->id);
    return out;
}

// walk a tape string through the cursors, keeping every branch alive
bool reaches_end(const Lexicon& lex, std::size_t tape, const std::vector<Symbol>& symbols) {
    std::vector<Lexicon::Cursor> live{lex.cursor(tape)};
    for (const auto& s : symbols) {
        std::vector<Lexicon::Cursor> next;
        for (const auto& c : live)
            for (const auto& n : lex.advance(tape, c, s)) next.push_back(n);
        live = std::move(next);
    }
    return std::any_of(live.begin(), live.end(), [&](const auto& c) { return lex.at_entry_end(tape, c); });
}

}  // namespace

TEST_CASE("lookup") {
    const Lexicon& lex = fixtures::morphology("arabic").lexicon();
    auto ktb = lex.find("ktb");
    REQUIRE(ktb.size() == 1);
    CHECK(ktb[0]->category == "root");
    CHECK(ktb[0]->tape == 1);
    CHECK(ktb[0]->symbols == syms("k t b +"));
    CHECK(ktb[0]->attrs.at("arity") == "3");
    CHECK(ktb[0]->gloss == "notion of writing");
    CHECK(lex.find("ktb", "pattern").empty());
    CHECK(lex.find("nothing").empty());
    CHECK(lex.main_entries(0).size() == 20);
}

TEST_CASE("cursors follow the morphotactics") {
    const Lexicon& lex = fixtures::morphology("english").lexicon();
    CHECK(reaches_end(lex, 0, syms("m o v e +")));
    CHECK(reaches_end(lex, 0, syms("m o v e + e d +")));
    CHECK(reaches_end(lex, 0, syms("w a l k + s +")));
    CHECK_FALSE(reaches_end(lex, 0, syms("m o v e")));
    CHECK_FALSE(reaches_end(lex, 0, syms("e d +")));
    CHECK_FALSE(reaches_end(lex, 0, syms("m o v e + m o v e +")));
    CHECK(lex.advance(0, lex.cursor(0), "z").empty());
    CHECK(lex.advance(0, lex.cursor(0), "+").empty());
}

TEST_CASE("segmentation") {
    const Lexicon& lex = fixtures::morphology("english").lexicon();
    auto seg = lex.segment(0, syms("m o v e + e d +"));
    REQUIRE(seg.size() == 1);
    CHECK(ids(seg[0]) == std::vector<std::string>{"move", "ed"});
    CHECK(lex.segment(0, syms("m o v e + e d")).empty());

    const Lexicon& ar = fixtures::morphology("arabic").lexicon();
    auto q3 = ar.segment(0, syms("c1 c2 v1 n c3 v2 c4 + a +"));
    REQUIRE(q3.size() == 1);
    CHECK(ids(q3[0]) == std::vector<std::string>{"q3", "a"});
}

TEST_CASE("enumeration lists each entry once") {
    for (const char* lang : {"arabic", "english", "ngbaka"}) {
        CAPTURE(lang);
        const Lexicon& lex = fixtures::morphology(lang).lexicon();
        for (std::size_t t = 0; t < lex.tapes().size(); ++t) {
            std::multiset<const MorphemeEntry*> seen;
            for (const auto& [path, e] : lex.enumerate(t)) {
                CHECK(path == e->symbols);
                seen.insert(e);
            }
            std::multiset<const MorphemeEntry*> expected;
            for (const auto& e : lex.entries())
                if (e.tape == t) expected.insert(&e);
            CHECK(seen == expected);
        }
    }
}

TEST_CASE("shared prefixes keep every entry reachable") {
    auto g = parse_grammar("tapes: t*\nalphabet t: a b +\nalphabet surface: a b\nrule r1: * - X - * => * - X - *\n");
    // every word over {a, b} of length 1 to 3, each ending in a boundary
    std::string text = "tapes: t*\n";
    std::vector<std::vector<Symbol>> words;
    for (std::size_t len = 1; len <= 3; ++len)
        for (std::size_t bits = 0; bits < (1u << len); ++bits) {
            std::vector<Symbol> w;
            for (std::size_t i = 0; i < len; ++i) w.push_back(bits >> i & 1 ? "b" : "a");
            text += "t w" + std::to_string(words.size()) + " : " + join(w, " ") + " +\n";
            w.push_back("+");
            words.push_back(w);
        }
    Lexicon lex = parse_lexicon(text, g);
    CHECK(lex.enumerate(0).size() == words.size());
    for (const auto& w : words) {
        CAPTURE(join(w, " "));
        CHECK(reaches_end(lex, 0, w));
        auto seg = lex.segment(0, w);
        REQUIRE(seg.size() == 1);
        CHECK(seg[0][0]->symbols == w);
    }
    CHECK_FALSE(reaches_end(lex, 0, syms("a a a a +")));
}

TEST_CASE("lexicon errors") {
    const Grammar& g = fixtures::grammar("english");
    CHECK_THROWS_AS(parse_lexicon("stem move : m o v e +\n", g), LexiconError);
    CHECK_THROWS_AS(parse_lexicon("tapes: stem* tone\nstem move : m o v e +\n", g), LexiconError);
    CHECK_THROWS_AS(parse_lexicon("tapes: stem*\nverb move : m o v e +\n", g), LexiconError);
    CHECK_THROWS_AS(parse_lexicon("tapes: stem*\nstem move : m o v E +\n", g), LexiconError);
    CHECK_THROWS_AS(parse_lexicon("tapes: stem*\nstem move :\n", g), LexiconError);
    CHECK_THROWS_AS(parse_lexicon("tapes: stem*\nstem move m o v e +\n", g), LexiconError);
    CHECK_THROWS_AS(parse_lexicon("tapes: stem*\nstem a : a +\nstem a : a +\n", g), LexiconError);
    CHECK_THROWS_AS(load_lexicon("/nonexistent.lex", g), LexiconError);
    CHECK_NOTHROW(parse_lexicon("tapes: stem*\n# nothing else\n", g));
}
