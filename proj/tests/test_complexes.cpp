#include "hsec/complexes.hpp"

#include <catch_amalgamated.hpp>

using namespace hsec;

TEST_CASE("catalog cell structures") {
    auto T = catalog::torus2();
    REQUIRE(T.two_cells.size() == 1);
    CHECK(T.two_cells[0].attach.to_string() == "a b a^-1 b^-1");
    CHECK(catalog::rp2().two_cells[0].attach.to_string() == "a^2");
    CHECK(catalog::genus_surface(2).two_cells[0].attach.to_string() == "a1 b1 a1^-1 b1^-1 a2 b2 a2^-1 b2^-1");
    CHECK(catalog::genus_surface(3).alphabet->size() == 6);
    CHECK(catalog::torus_knot(2, 3).two_cells[0].attach.to_string() == "a^2 b^-3");
    CHECK(catalog::klein_bottle() == catalog::torus_knot(2, 2));
    CHECK(catalog::s1_wedge_s2().two_cells[0].attach.empty());

    auto S = catalog::sphere2();
    CHECK(S.alphabet->size() == 0);
    REQUIRE(S.two_cells.size() == 1);
    CHECK(S.two_cells[0].attach.empty());
    CHECK(S.dimension() == 2);

    auto T3 = catalog::torus3();
    CHECK(T3.alphabet->size() == 3);
    CHECK(T3.two_cells.size() == 3);
    CHECK(T3.three_cells.size() == 1);
    CHECK(T3.dimension() == 3);
    CHECK(T3.two_cells[0].attach.to_string() == "b c b^-1 c^-1");
    CHECK(T3.two_cells[1].attach.to_string() == "c a c^-1 a^-1");
    CHECK(T3.two_cells[2].attach.to_string() == "a b a^-1 b^-1");
    const auto& x = T3.three_cells[0].attach;
    REQUIRE(x.size() == 6);
    std::vector<std::string> conjs, cells;
    std::vector<int> signs;
    for (const auto& l : x) {
        conjs.push_back(l.f.to_string());
        cells.push_back(T3.two_cells[l.cell].name);
        signs.push_back(l.sign);
    }
    CHECK(conjs == std::vector<std::string>{"", "c", "", "a", "", "b"});
    CHECK(cells == std::vector<std::string>{"t", "v", "u", "t", "v", "u"});
    CHECK(signs == std::vector<int>{1, -1, 1, -1, 1, -1});

    auto P = catalog::s1_x_s2();
    CHECK(P.two_cells[0].attach.empty());
    REQUIRE(P.three_cells[0].attach.size() == 2);
    CHECK(P.three_cells[0].attach[1].f.to_string() == "a");
}

TEST_CASE("catalog parameters") {
    CHECK_THROWS_AS(catalog::get("genus_surface:0"), ValidationError);
    CHECK_THROWS_AS(catalog::get("torus_knot:0,3"), ValidationError);
    CHECK_THROWS_AS(catalog::get("torus_knot:2"), ValidationError);
    CHECK_THROWS_AS(catalog::get("lens_space"), ValidationError);
    CHECK_THROWS_AS(catalog::get("torus2:1"), ValidationError);
    CHECK(catalog::get("torus_knot:3,4").two_cells[0].attach.to_string() == "a^3 b^-4");
    CHECK(catalog::get("circle_wedge:2").alphabet->size() == 2);
}

TEST_CASE("boundary of the free pre-crossed module") {
    auto R = catalog::rp2();
    CHECK(free_pre_crossed_boundary(R, {{R.identity(), 0, 1}}).to_string() == "a^2");
    CHECK(free_pre_crossed_boundary(R, {{R.word("a"), 0, -1}}).to_string() == "a^-2");
    auto T = catalog::torus2();
    CHECK(free_pre_crossed_boundary(T, {{T.identity(), 0, 1}}).to_string() == "a b a^-1 b^-1");
    CHECK(free_pre_crossed_boundary(T, {}).empty());
}

TEST_CASE("triad validation") {
    for (const auto& M : {catalog::torus3(), catalog::s1_x_s2()})
        for (const auto& c : M.three_cells) {
            auto r = validate_triad(M, c.attach);
            CHECK(r.ok);
            CHECK(r.f_component.empty());
        }
    auto T3 = catalog::torus3();
    auto bad = validate_triad(T3, {triad_letter(T3, "", "t", 1)});
    CHECK_FALSE(bad.ok);
    REQUIRE(bad.offending_letter);
    CHECK(*bad.offending_letter == 0);
    CHECK(bad.f_component.to_string() == "b c b^-1 c^-1");

    // a closed prefix followed by an unbalanced letter
    TriadWord w = T3.three_cells[0].attach;
    w.push_back(triad_letter(T3, "", "u", 1));
    auto r = validate_triad(T3, w);
    CHECK_FALSE(r.ok);
    CHECK(*r.offending_letter == 6);

    // conjugation by an H element keeps the word closed
    TriadWord conjugated;
    for (auto l : T3.three_cells[0].attach) {
        l.h = {{T3.word("a"), 2, 1}};
        conjugated.push_back(l);
    }
    CHECK(validate_triad(T3, conjugated).ok);
}

TEST_CASE("save and load round trip") {
    for (const auto& M : {catalog::torus2(), catalog::rp2(), catalog::sphere2(), catalog::genus_surface(2),
                          catalog::torus_knot(2, 3), catalog::s1_wedge_s2(), catalog::torus3(), catalog::s1_x_s2()}) {
        std::string text = save(M);
        CWComplex back = load_text(text);
        CHECK(back == M);
        CHECK(save(back) == text);
    }
}

TEST_CASE("load errors") {
    CHECK_THROWS_AS(load_text(R"({"generators":["a"],"two_cells":[{"name":"t","attach":"a^x"}]})"), ParseError);
    CHECK_THROWS_AS(load_text(R"({"generators":["a"],"two_cells":[],"colour":1})"), ParseError);
    CHECK_THROWS_AS(load_text(R"({"generators":["a"],"two_cells":[{"name":"t","attach":"b"}]})"), ValidationError);
    CHECK_THROWS_AS(load_text(R"({"generators":["a"],"two_cells":[{"name":"t","attach":""}],
        "three_cells":[{"name":"x","attach":[{"f":"","h":[],"cell":"w","sign":1}]}]})"),
                    ValidationError);
    CHECK_THROWS_AS(load_text(R"({"generators":["a"],"two_cells":[{"name":"t","attach":"a"}],
        "three_cells":[{"name":"x","attach":[{"f":"","h":[],"cell":"t","sign":1}]}]})"),
                    ValidationError);
    try {
        load_text("{\n  \"generators\": [\"a\",\n  ]\n}");
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(e.line() == 3);
        CHECK(e.column() >= 1);
    }
}

TEST_CASE("abelian labels") {
    auto T = catalog::torus2();
    AbelianLabeling lab(T);
    CHECK(lab.canonical(T.word("a b a^-1")).to_string() == "b");
    auto R = catalog::rp2();
    AbelianLabeling lr(R);
    CHECK(lr.canonical(R.word("a^5")).to_string() == "a");
    CHECK(lr.canonical(R.word("a^-1")).to_string() == "a");
    auto K = catalog::torus_knot(2, 3);
    AbelianLabeling lk(K);
    // a^2 = b^3 in the abelianization
    CHECK(lk.label(K.word("a^2")) == lk.label(K.word("b^3")));
    CHECK(lk.label(K.word("a")) != lk.label(K.word("b")));
}
