#include <doctest.h>

#include <algorithm>

#include "fixtures.hpp"

using namespace mtmorph;
using fixtures::syms;

namespace {

SymbolTuple tuple(std::string_view text) { return {syms(text)}; }

TuplePattern pattern(std::initializer_list<Term> cells, bool plt_only = false) { return {cells, plt_only}; }

const char* kMini = R"(tapes: pattern* root vocalism
alphabet pattern: c1 c2 v1 +
alphabet root: k t +
alphabet vocalism: a +
alphabet surface: k t a
)";

}  // namespace

TEST_CASE("match_tuple binds variables cell by cell") {
    auto p = pattern({Term::variable("C"), Term::variable("X"), Term::epsilon()});
    VariableRanges ranges{{"C", {"c1", "c2", "c3", "c4"}}};
    auto env = match_tuple(p, tuple("c1 d 0"), {}, ranges);
    REQUIRE(env);
    CHECK(*env == Bindings{{"C", "c1"}, {"X", "d"}});

    CHECK_FALSE(match_tuple(pattern({Term::literal("v1"), Term::epsilon(), Term::variable("X")}), tuple("c1 d 0"), {}));
    CHECK_FALSE(match_tuple(p, tuple("v1 d 0"), {}, ranges));
    CHECK_FALSE(match_tuple(p, tuple("c1 0 0"), {}, ranges));
    CHECK_FALSE(match_tuple(p, tuple("c1 d 0"), {{"X", "k"}}, ranges));
}

TEST_CASE("PLT shorthand") {
    auto p = pattern({Term::variable("X"), Term::epsilon(), Term::epsilon()}, true);
    auto env = match_tuple(p, tuple("a 0 0"), {});
    REQUIRE(env);
    CHECK(env->at("X") == "a");
    CHECK_FALSE(match_tuple(p, tuple("+ + +"), {}, {}, 0, MatchMode::Strict));
    auto ctx = match_tuple(p, tuple("+ + +"), {}, {}, 0, MatchMode::Context);
    REQUIRE(ctx);
    CHECK(ctx->at("X") == "+");
}

TEST_CASE("match_surface drops epsilon terms") {
    std::vector<Term> terms{Term::variable("X"), Term::epsilon()};
    auto env = match_surface(terms, {"u"}, {});
    REQUIRE(env);
    CHECK(env->at("X") == "u");
    CHECK_FALSE(match_surface(terms, {}, {}));
    CHECK(match_surface({Term::epsilon()}, {}, {}));
}

TEST_CASE("parse r8 and r15") {
    const Grammar& g = fixtures::grammar("arabic");
    const Rule* r8 = g.find_rule("r8");
    REQUIRE(r8);
    CHECK(r8->surf == std::vector<Term>{Term::variable("X")});
    CHECK(r8->lex.str() == "(C,X,0)");
    CHECK(r8->llc.empty());
    CHECK(r8->rlc.empty());
    CHECK(r8->op == Operator::Optional);

    const Rule* r15 = g.find_rule("r15");
    REQUIRE(r15);
    REQUIRE(r15->llc.size() == 2);
    CHECK(r15->llc[0].tuple.str() == "(v1,0,X)");
    CHECK(r15->llc[1].kind == ContextItem::Kind::Ellipsis);
    CHECK(r15->lex.str() == "(v1,0,0)");
    CHECK(r15->lex.plt_only);
}

TEST_CASE("parse errors") {
    std::string base = kMini;
    CHECK_THROWS_AS(parse_grammar(base + "rule r1:\n"), GrammarError);
    CHECK_THROWS_AS(parse_grammar(base + "rule r1: * - X - * <= * - X - *\n"), GrammarError);
    CHECK_THROWS_AS(parse_grammar(base + "rule r1: * - X - * => * - (X,0) - *\n"), GrammarError);
    CHECK_THROWS_AS(parse_grammar(base + "rule r1: * - X * => * - X - *\n"), GrammarError);
    CHECK_THROWS_AS(parse_grammar(base + "rule r1: * - X - * => * - X - *\nrule r1: * - X - * => * - X - *\n"),
                    GrammarError);
    try {
        parse_grammar(base + "\nrule r1: * - X - * => * - X - * where X in nowhere\n");
        FAIL("expected an error");
    } catch (const GrammarError& e) {
        CHECK(e.line() == 7);
    }
}

TEST_CASE("validation") {
    for (const char* lang : {"arabic", "english", "ngbaka"}) {
        CAPTURE(lang);
        CHECK_FALSE(has_errors(validate_grammar(fixtures::grammar(lang))));
    }

    auto g = parse_grammar(std::string(kMini) + "rule r9: * - X - * => * - (v2,0,X) - *\n");
    auto diags = validate_grammar(g);
    REQUIRE(has_errors(diags));
    CHECK(std::any_of(diags.begin(), diags.end(),
                      [](const Diagnostic& d) { return d.message.find("undeclared symbol v2") != std::string::npos; }));

    auto unbounded = parse_grammar(std::string(kMini) + "rule r1: * - Y - * => * - (c1,0,0) - *\n");
    diags = validate_grammar(unbounded);
    CHECK(std::any_of(diags.begin(), diags.end(), [](const Diagnostic& d) {
        return d.rule == "r1" && d.message.find("unbounded variable Y") != std::string::npos;
    }));

    const Rule* r20 = fixtures::grammar("ngbaka").find_rule("r20");
    REQUIRE(r20);
    CHECK(r20->op == Operator::Composite);
}

TEST_CASE("print then parse is the identity") {
    for (const char* lang : {"arabic", "english", "ngbaka"}) {
        CAPTURE(lang);
        const Grammar& g = fixtures::grammar(lang);
        std::string printed = print_grammar(g);
        Grammar again = parse_grammar(printed);
        CHECK(again.tapes == g.tapes);
        CHECK(again.alphabets == g.alphabets);
        CHECK(again.sets == g.sets);
        CHECK(again.render == g.render);
        CHECK(again.deletion_rules == g.deletion_rules);
        REQUIRE(again.rules.size() == g.rules.size());
        for (std::size_t i = 0; i < g.rules.size(); ++i) CHECK(again.rules[i] == g.rules[i]);
        CHECK(print_grammar(again) == printed);
    }
}

TEST_CASE("feasible pairs of r8") {
    const Grammar& g = fixtures::grammar("arabic");
    const auto& root = g.alphabet("root");
    const auto& surface = g.alphabet(kSurfaceAlphabet);
    std::size_t radicals = std::count_if(root.begin(), root.end(), [&](const Symbol& s) {
        return std::find(surface.begin(), surface.end(), s) != surface.end();
    });

    auto sigma = compute_licensed_pairs(g);
    std::size_t r8 = 0;
    while (g.rules[r8].id != "r8") ++r8;
    std::set<FeasiblePair> from_r8;
    for (const auto& lp : sigma)
        if (lp.rule == r8) from_r8.insert(lp.pair);
    CHECK(from_r8.size() == 4 * radicals);
    for (const auto& p : from_r8) {
        CHECK(p.lex.cells[0][0] == 'c');
        CHECK(p.surf == std::vector<Symbol>{p.lex.cells[1]});
        CHECK(p.lex.cells[2] == "0");
    }
}

TEST_CASE("default rule alone yields identity pairs") {
    auto g = parse_grammar("tapes: t*\nalphabet t: a b c\nalphabet surface: a b c\nrule r1: * - X - * => * - X - *\n");
    auto pairs = compute_feasible_pairs(g);
    CHECK(pairs.size() == 3);
    for (const auto& p : pairs) CHECK(p.surf == p.lex.cells);
}

TEST_CASE("the dħunrija tuples are feasible") {
    const Grammar& g = fixtures::grammar("arabic");
    auto feasible = compute_feasible_pairs(g);
    CHECK_FALSE(feasible.empty());
    for (const auto& line : {"c1 d 0:d", "c2 ħ 0:ħ", "v1 0 u:u", "n 0 0:n", "c3 r 0:r", "v2 0 i:i", "c4 j 0:j",
                             "+ + +:", "a 0 0:a", "+ 0 0:"}) {
        std::string s = line;
        auto colon = s.find(':');
        FeasiblePair p{tuple(s.substr(0, colon)), syms(s.substr(colon + 1))};
        CAPTURE(p.str());
        CHECK(feasible.contains(p));
    }
}

TEST_CASE("without removes rules") {
    const Grammar& g = fixtures::grammar("arabic");
    Grammar v = g.without({"r16"});
    CHECK(v.rules.size() + 1 == g.rules.size());
    CHECK_FALSE(v.find_rule("r16"));
    CHECK(v.find_rule("r14"));
}
