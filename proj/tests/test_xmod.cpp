#include "hsec/xmod.hpp"

#include <catch_amalgamated.hpp>

#include <algorithm>
#include <random>

using namespace hsec;

TEST_CASE("target catalog") {
    auto R = targets::rp2();
    CHECK(R.k() == 1);
    CHECK(R.rank == 2);
    CHECK(R.action[0] == (IntMatrix{{0, 1}, {1, 0}}));
    CHECK(R.boundary == (IntMatrix{{2, 2}}));
    CHECK(R.pi1().invariant_factors() == int_vector({2}));
    CHECK(R.pi2().invariant_factors() == int_vector({0}));
    auto S = targets::sphere2();
    CHECK(S.k() == 0);
    CHECK(S.pi1().is_trivial());
    CHECK(S.pi2().invariant_factors() == int_vector({0}));
    auto T = targets::trivial(2, 0);
    CHECK(T.k() == 0);
    CHECK(T.pi2().invariant_factors() == int_vector({0, 0}));
    CHECK_THROWS_AS(targets::get("cp2"), ValidationError);
}

TEST_CASE("module crossed module validation") {
    for (const auto& X : {targets::rp2(), targets::sphere2(), targets::trivial(2, 0), targets::trivial(1, 2)})
        CHECK(validate(X).empty());
    auto bad = targets::rp2();
    bad.boundary = IntMatrix{{1, 1}};
    auto v = validate(bad);
    REQUIRE(v.size() == 2);
    for (const auto& msg : v) CHECK(msg.find("condition 2") != std::string::npos);

    auto c1 = targets::rp2();
    c1.boundary = IntMatrix{{2, 0}};
    auto v1 = validate(c1);
    CHECK(std::any_of(v1.begin(), v1.end(), [](auto& s) { return s.find("condition 1") != std::string::npos; }));

    auto sing = targets::rp2();
    sing.action = {IntMatrix{{1, 1}, {1, 1}}};
    CHECK_FALSE(validate(sing).empty());

    ModuleXMod tor;
    tor.torsion = int_vector({2});
    tor.rank = 2;
    tor.action = {IntMatrix{{1, 1}, {0, 1}}};
    tor.boundary = IntMatrix(1, 2);
    CHECK_FALSE(validate(tor).empty());

    auto nc = targets::trivial(2, 2);
    nc.action = {IntMatrix{{0, 1}, {1, 0}}, IntMatrix{{1, 1}, {0, 1}}};
    auto vn = validate(nc);
    CHECK(std::any_of(vn.begin(), vn.end(), [](auto& s) { return s.find("commute") != std::string::npos; }));
}

TEST_CASE("target file round trip") {
    auto R = targets::rp2();
    std::string text = to_json(R).dump();
    CHECK(text == R"({"G":{"free_rank":1,"torsion":[]},"rank":2,"action":[[[0,1],[1,0]]],"boundary":[[2],[2]]})");
    auto back = load_xmod_text(text);
    CHECK(back.action == R.action);
    CHECK(back.boundary == R.boundary);
    CHECK_THROWS_AS(load_xmod_text(R"({"G":{"free_rank":1},"rank":2,"action":[],"boundary":[[2],[2]]})"), ParseError);
    CHECK_THROWS_AS(load_xmod_text(R"({"G":{"free_rank":1},"rank":1,"action":[[[1]]],"boundary":[[0]],"x":0})"), ParseError);
}

TEST_CASE("finite pi1 coordinates") {
    Pi1X P(targets::rp2());
    CHECK(P.size() == 2);
    CHECK(P.label(int_vector({3})) == int_vector({1}));
    CHECK(P.label(P.lift(int_vector({1}))) == int_vector({1}));
    CHECK_THROWS_AS(Pi1X(targets::trivial(1, 1)), UnsupportedError);
    CHECK(Pi1X(targets::sphere2()).size() == 1);
}

TEST_CASE("derivation image") {
    auto R = catalog::rp2();
    auto lab = abelian_labeling(R);
    auto img = derivation_image(R, HWord{{R.identity(), 0, 1}, {R.word("a"), 0, 1}}, lab);
    REQUIRE(img.size() == 1);
    CHECK(img[0].coefficient(R.identity()) == 1);
    CHECK(img[0].coefficient(R.word("a")) == 1);
    CHECK(derivation_image(R, HWord{}, lab)[0].is_zero());
}

TEST_CASE("derivation image kills Peiffer commutators") {
    std::mt19937 rng(41);
    for (const auto& M : {catalog::torus2(), catalog::rp2(), catalog::torus3(), catalog::torus_knot(2, 3),
                          catalog::genus_surface(2)}) {
        auto lab = abelian_labeling(M);
        std::uniform_int_distribution<int> len(0, 4), cell(0, static_cast<int>(M.two_cells.size()) - 1),
            gen(0, static_cast<int>(M.alphabet->size()) - 1), ex(-2, 2), sg(0, 1);
        auto rand_h = [&] {
            HWord h;
            int n = len(rng);
            for (int i = 0; i < n; ++i) {
                Word f = Word::identity(M.alphabet);
                for (int j = 0; j < 3; ++j) f = f * Word::generator(M.alphabet, gen(rng), ex(rng));
                h.push_back({f, static_cast<std::size_t>(cell(rng)), sg(rng) ? 1 : -1});
            }
            return h;
        };
        auto inverse = [](const HWord& h) {
            HWord out;
            for (auto it = h.rbegin(); it != h.rend(); ++it) out.push_back({it->f, it->cell, -it->sign});
            return out;
        };
        for (int it = 0; it < 60; ++it) {
            HWord h = rand_h(), h2 = rand_h();
            Word dh = free_pre_crossed_boundary(M, h);
            // h h' h^-1 (dh acting on h')^-1
            HWord acted;
            for (const auto& l : h2) acted.push_back({dh * l.f, l.cell, l.sign});
            HWord peiffer = h;
            for (const auto& l : h2) peiffer.push_back(l);
            for (const auto& l : inverse(h)) peiffer.push_back(l);
            for (const auto& l : inverse(acted)) peiffer.push_back(l);
            for (const auto& x : derivation_image(M, peiffer, lab)) CHECK(x.is_zero());
            // its boundary is trivial too
            CHECK(free_pre_crossed_boundary(M, peiffer).empty());
        }
    }
}

TEST_CASE("finite groups") {
    auto gs = small_groups(8);
    CHECK(gs.size() == 14);
    std::size_t abelian = 0;
    for (const auto& g : gs) abelian += g.is_abelian();
    CHECK(abelian == 11);
    auto Q = FiniteGroup::quaternion();
    std::size_t order4 = 0;
    for (std::size_t x = 0; x < 8; ++x) order4 += Q.element_order(x) == 4;
    CHECK(order4 == 6);
    auto D = FiniteGroup::dihedral(4);
    std::size_t inv = 0;
    for (std::size_t x = 0; x < 8; ++x) inv += D.element_order(x) == 2;
    CHECK(inv == 5);
    CHECK(automorphisms(FiniteGroup::direct_product(FiniteGroup::cyclic(2), FiniteGroup::cyclic(2))).size() == 6);
    CHECK(automorphisms(FiniteGroup::symmetric3()).size() == 6);
    CHECK(automorphisms(FiniteGroup::cyclic(8)).size() == 4);
    CHECK(automorphisms(Q).size() == 24);
    CHECK(homomorphisms(FiniteGroup::cyclic(4), FiniteGroup::cyclic(6)).size() == 2);
}

TEST_CASE("finite crossed module validation") {
    auto S3 = FiniteGroup::symmetric3();
    CHECK(validate(finite_xmods::identity(S3)).empty());
    CHECK(validate(finite_xmods::reduction(4, 2)).empty());
    CHECK(validate(finite_xmods::trivial(FiniteGroup::cyclic(2), FiniteGroup::cyclic(2))).empty());
    CHECK(validate(finite_xmods::automorphism(S3)).empty());
    // nonabelian H with trivial boundary and trivial action breaks condition 2
    auto bad = finite_xmods::trivial(S3, FiniteGroup::cyclic(2));
    auto v = validate(bad);
    REQUIRE_FALSE(v.empty());
    CHECK(v.back().find("condition 2") != std::string::npos);
}

TEST_CASE("enumeration finds exactly the valid structures") {
    auto C2 = FiniteGroup::cyclic(2), C4 = FiniteGroup::cyclic(4);
    auto xs = enumerate_crossed_modules(C2, C2);
    // d in {0, id}; action trivial (Aut(C2) = 1)
    CHECK(xs.size() == 2);
    for (const auto& x : enumerate_crossed_modules(C4, C2)) CHECK(validate(x).empty());
    auto S3 = FiniteGroup::symmetric3();
    for (const auto& x : enumerate_crossed_modules(S3, S3)) CHECK(validate(x).empty());
    // brute force cross-check on a small pair: every (d, action) satisfying the axioms is listed
    auto V = FiniteGroup::direct_product(C2, C2);
    // every map d : V -> C2 and every pair of permutations of V as the action table
    std::size_t valid = 0;
    std::vector<Perm> perms;
    Perm p{0, 1, 2, 3};
    do perms.push_back(p);
    while (std::next_permutation(p.begin(), p.end()));
    for (std::size_t mask = 0; mask < 16; ++mask) {
        std::vector<std::size_t> d(4);
        for (std::size_t h = 0; h < 4; ++h) d[h] = (mask >> h) & 1;
        for (const auto& p0 : perms)
            for (const auto& p1 : perms) {
                FiniteCrossedModule x{"", V, C2, d, {p0, p1}};
                valid += validate(x).empty();
            }
    }
    CHECK(enumerate_crossed_modules(V, C2).size() == valid);
}

TEST_CASE("kernel of the boundary is central and abelian") {
    for (const auto& H : small_groups(6))
        for (const auto& G : small_groups(4))
            for (const auto& x : enumerate_crossed_modules(H, G))
                for (std::size_t h = 0; h < H.order(); ++h) {
                    if (x.boundary[h] != 0) continue;
                    for (std::size_t y = 0; y < H.order(); ++y) CHECK(H.mul(h, y) == H.mul(y, h));
                }
}

TEST_CASE("Hoang data examples") {
    auto id = hoang_data(finite_xmods::identity(FiniteGroup::cyclic(3)));
    CHECK(id.pi1.order() == 1);
    CHECK(id.pi2.is_trivial());
    for (auto b : id.beta) CHECK(b == 0);

    auto zero = finite_xmods::trivial(FiniteGroup::cyclic(2), FiniteGroup::cyclic(2));
    auto dz = hoang_data(zero);
    CHECK(dz.pi1.order() == 2);
    CHECK(dz.pi2.invariant_factors() == int_vector({2}));
    CHECK(cocycle_defects(dz) == 0);
    CHECK(homomorphic_section(zero, dz).has_value());
    CHECK(coboundary_witness(dz).has_value());

    auto red = hoang_data(finite_xmods::reduction(4, 2));
    CHECK(red.pi1.order() == 1);
    CHECK(red.pi2.invariant_factors() == int_vector({2}));
    for (auto b : red.beta) CHECK(b == 0);
}

TEST_CASE("pi2 structure from element orders") {
    auto C4 = FiniteGroup::cyclic(4), C2 = FiniteGroup::cyclic(2);
    auto x = finite_xmods::trivial(FiniteGroup::direct_product(C4, C2), C2);
    CHECK(hoang_data(x).pi2.invariant_factors() == int_vector({2, 4}));
    auto y = finite_xmods::trivial(FiniteGroup::cyclic(6), C2);
    CHECK(hoang_data(y).pi2.invariant_factors() == int_vector({6}));
    auto z = finite_xmods::trivial(FiniteGroup::direct_product(FiniteGroup::direct_product(C2, C2), C2), C2);
    CHECK(hoang_data(z).pi2.invariant_factors() == int_vector({2, 2, 2}));
}

TEST_CASE("coboundary witnesses beyond split extensions") {
    // Z4 -> Z4, multiplication by 2, trivial action: no homomorphic section, yet beta vanishes
    auto C4 = FiniteGroup::cyclic(4);
    std::vector<std::size_t> d{0, 2, 0, 2}, id{0, 1, 2, 3}, neg{0, 3, 2, 1};
    FiniteCrossedModule x{"x2", C4, C4, d, std::vector<std::vector<std::size_t>>(4, id)};
    REQUIRE(validate(x).empty());
    auto D = hoang_data(x);
    CHECK(D.pi1.order() == 2);
    CHECK(cocycle_defects(D) == 0);
    CHECK_FALSE(homomorphic_section(x, D).has_value());
    CHECK(coboundary_witness(D).has_value());

    // same boundary, odd elements acting by inversion: the class is nontrivial
    FiniteCrossedModule y{"x2-twisted", C4, C4, d, {id, neg, id, neg}};
    REQUIRE(validate(y).empty());
    auto E = hoang_data(y);
    CHECK(cocycle_defects(E) == 0);
    CHECK_FALSE(homomorphic_section(y, E).has_value());
    bool hit = false;
    CHECK_FALSE(coboundary_witness(E, 1'000'000, &hit).has_value());
    CHECK_FALSE(hit);
}

TEST_CASE("witness verifies as a coboundary") {
    auto x = finite_xmods::automorphism(FiniteGroup::direct_product(FiniteGroup::cyclic(2), FiniteGroup::cyclic(2)));
    auto D = hoang_data(x);
    auto w = coboundary_witness(D);
    REQUIRE(w);
    for (std::size_t a = 0; a < D.n(); ++a)
        for (std::size_t b = 0; b < D.n(); ++b)
            for (std::size_t c = 0; c < D.n(); ++c) CHECK(coboundary_at(D, *w, a, b, c) == D.beta_at(a, b, c));
}

TEST_CASE("strict 2-group round trip") {
    for (const auto& x : {finite_xmods::identity(FiniteGroup::cyclic(2)),
                          finite_xmods::trivial(FiniteGroup::cyclic(2), FiniteGroup::cyclic(2)),
                          finite_xmods::reduction(4, 2), finite_xmods::automorphism(FiniteGroup::symmetric3())}) {
        auto S = to_strict_2group(x);
        CHECK(S.G2.order() == x.H.order() * x.G.order());
        auto back = from_strict_2group(S);
        CHECK(back.H.table() == x.H.table());
        CHECK(back.G.table() == x.G.table());
        CHECK(back.boundary == x.boundary);
        CHECK(back.action == x.action);
        for (std::size_t a = 0; a < S.G2.order(); ++a)
            for (std::size_t b = 0; b < S.G2.order(); ++b) {
                CHECK(S.source[S.G2.mul(a, b)] == S.G1.mul(S.source[a], S.source[b]));
                CHECK(S.target[S.G2.mul(a, b)] == S.G1.mul(S.target[a], S.target[b]));
            }
    }
}
