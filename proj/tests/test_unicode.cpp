#include <doctest.h>

#include "fixtures.hpp"

using namespace mtmorph;
using fixtures::syms;

TEST_CASE("normalization") {
    CHECK(nfc("o\xCC\x80") == "\xC3\xB2");
    CHECK(nfd("\xC3\xB2") == "o\xCC\x80");
    CHECK(nfc("katab") == "katab");
}

TEST_CASE("rendering and tokenizing") {
    const Grammar& ng = fixtures::grammar("ngbaka");
    CHECK(render_surface(ng, syms("k p o L l o L")) == "kpòlò");
    CHECK(render_surface(ng, syms("k p o H l o H")) == "kpóló");
    CHECK(tokenize_surface(ng, "kpòlò") == syms("k p o L l o L"));
    CHECK(tokenize_surface(ng, "kpo\xCC\x80lo\xCC\x80") == syms("k p o L l o L"));
    CHECK_FALSE(tokenize_surface(ng, "kpxlo"));

    const Grammar& ar = fixtures::grammar("arabic");
    CHECK(tokenize_surface(ar, "dħunrija") == syms("d ħ u n r i j a"));
    CHECK(render_surface(ar, syms("d ħ u n r i j a")) == "dħunrija");
    CHECK(tokenize_surface(ar, "") == std::vector<Symbol>{});
}

TEST_CASE("ascii transliteration") {
    CHECK(to_ascii("dħunrija") == "dHunrija");
    CHECK(to_ascii("ʔaktab") == "'aktab");
    CHECK(to_ascii("kpòló") == "kpo^Llo^H");
    CHECK(to_ascii("kpōlō") == "kpo^Mlo^M");
    CHECK(to_ascii("walked") == "walked");
}
