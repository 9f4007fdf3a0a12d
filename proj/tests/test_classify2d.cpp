#include "hsec/classify2d.hpp"

#include <catch_amalgamated.hpp>

#include <array>
#include <random>
#include <set>

using namespace hsec;

namespace {

IntVector iv(std::initializer_list<long long> xs) { return int_vector(xs); }

bool on_lattice(const AffineLattice& L, const IntVector& x) {
    IntVector diff(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) diff[i] = x[i] - L.point[i];
    return solve(L.basis, diff).has_value();
}

std::vector<IntVector> display_reps(const SectorResult& s) {
    std::vector<IntVector> out;
    for (const auto& r : s.representatives()) out.push_back(s.quotient.display(r));
    return out;
}

std::vector<std::string> group_names(const SectorClassification& c) {
    std::vector<std::string> out;
    for (const auto& s : c.sectors) out.push_back(s.based_group.to_string());
    return out;
}

const SectorResult& sector(const SectorClassification& c, std::initializer_list<long long> labels) {
    for (const auto& s : c.sectors) {
        bool match = s.phi1.size() == labels.size();
        std::size_t a = 0;
        for (long long l : labels) match = match && s.phi1[a++] == iv({l});
        if (match) return s;
    }
    throw std::runtime_error("sector not found");
}

// Target RP^2 written out by hand: pi_2(X, X^1) = Z^2, d = (2, 2), odd elements swap.
using Vec2 = std::array<long long, 2>;

Vec2 act_rp2(long long g, Vec2 v) { return (g % 2 != 0) ? Vec2{v[1], v[0]} : v; }

// theta of a word, computed letter by letter from theta(g g') = theta(g) + psi(g) theta(g').
Vec2 theta_of(const Word& w, const std::vector<long long>& psi, const std::vector<Vec2>& theta) {
    Vec2 out{0, 0};
    long long prefix = 0;
    for (const Letter& l : w.letters()) {
        long long step = l.exp > 0 ? 1 : -1;
        for (long long k = 0; k < (l.exp > 0 ? l.exp : -l.exp); ++k) {
            Vec2 piece;
            if (step > 0) {
                piece = act_rp2(prefix, theta[l.gen]);
            } else {
                // theta(a^-1) = -psi(a)^-1 theta(a)
                Vec2 t = act_rp2(prefix - psi[l.gen], theta[l.gen]);
                piece = {-t[0], -t[1]};
            }
            out[0] += piece[0];
            out[1] += piece[1];
            prefix += step * psi[l.gen];
        }
    }
    return out;
}

// phi ~ psi iff some theta has d theta(a) = phi1(a) - psi1(a) and theta(sigma(t)) = phi2(t) - psi2(t).
// Homomorphisms are (phi1 per generator, phi2(t) for the single 2-cell).
bool brute_homotopic(const CWComplex& M, const std::vector<long long>& phi1, Vec2 phi2,
                     const std::vector<long long>& psi1, Vec2 psi2, long long box) {
    const std::size_t n = phi1.size();
    std::vector<Vec2> theta(n, Vec2{-box, -box});
    for (;;) {
        bool ok = true;
        for (std::size_t a = 0; a < n && ok; ++a) ok = 2 * (theta[a][0] + theta[a][1]) == phi1[a] - psi1[a];
        if (ok) {
            Vec2 t = theta_of(M.two_cells[0].attach, psi1, theta);
            if (t[0] == phi2[0] - psi2[0] && t[1] == phi2[1] - psi2[1]) return true;
        }
        std::size_t i = 0;
        for (; i < 2 * n; ++i) {
            long long& c = theta[i / 2][i % 2];
            if (++c <= box) break;
            c = -box;
        }
        if (i == 2 * n) return false;
    }
}

IntVector pack(const std::vector<long long>& phi1, Vec2 phi2) {
    IntVector x;
    for (long long a : phi1) x.emplace_back(a);
    x.emplace_back(phi2[0]);
    x.emplace_back(phi2[1]);
    return x;
}

}  // namespace

TEST_CASE("fundamental group sectors") {
    auto X = targets::rp2();
    auto s = pi1_sectors(catalog::torus2(), X);
    REQUIRE(s.size() == 4);
    CHECK(s[0] == Phi1Class{iv({0}), iv({0})});
    CHECK(s[1] == Phi1Class{iv({1}), iv({0})});
    CHECK(s[2] == Phi1Class{iv({0}), iv({1})});
    CHECK(s[3] == Phi1Class{iv({1}), iv({1})});

    // p odd, q even: phi1(a) must be even
    auto k = pi1_sectors(catalog::torus_knot(3, 2), X);
    REQUIRE(k.size() == 2);
    CHECK(k[0] == Phi1Class{iv({0}), iv({0})});
    CHECK(k[1] == Phi1Class{iv({0}), iv({1})});

    for (const auto& M : {catalog::torus2(), catalog::rp2(), catalog::genus_surface(2), catalog::sphere2()}) {
        auto t = pi1_sectors(M, targets::sphere2());
        REQUIRE(t.size() == 1);
        for (const auto& l : t[0]) CHECK(l.empty());
    }

    CHECK_THROWS_AS(pi1_sectors(catalog::torus2(), targets::trivial(1, 1)), UnsupportedError);
    CHECK_THROWS_AS(pi1_sectors(catalog::torus3(), X), UnsupportedError);
}

TEST_CASE("homomorphism lattices agree with a direct check of the commuting square") {
    auto X = targets::rp2();
    for (auto [p, q] : std::vector<std::pair<int, int>>{{1, 1}, {2, 3}, {2, 2}, {3, 3}}) {
        // torus_knot(1,1) is not used; (1,1) stands for the torus here
        CWComplex M = (p == 1) ? catalog::torus2() : catalog::torus_knot(p, q);
        auto L = hom_layout(M, X);
        for (const auto& s : pi1_sectors(M, X)) {
            AffineLattice lat = hom_lattice(M, X, s);
            for (long long a = -3; a <= 3; ++a)
                for (long long b = -3; b <= 3; ++b)
                    for (long long x = -3; x <= 3; ++x)
                        for (long long y = -3; y <= 3; ++y) {
                            long long ea = (p == 1) ? 0 : p, eb = (p == 1) ? 0 : -q;
                            bool square = ea * a + eb * b == 2 * (x + y);
                            bool over = floor_mod(Integer(a), 2) == s[0][0] && floor_mod(Integer(b), 2) == s[1][0];
                            IntVector pt = iv({a, b, x, y});
                            CHECK(on_lattice(lat, pt) == (square && over));
                            if (square) CHECK(commutes(M, X, L.unpack(pt)));
                        }
        }
    }

    // S^1 v S^2: phi2(t) ranges over ker d
    auto W = catalog::s1_wedge_s2();
    for (const auto& s : pi1_sectors(W, X)) {
        AffineLattice lat = hom_lattice(W, X, s);
        CHECK(lat.dimension() == 2);
        CHECK(on_lattice(lat, iv({s[0][0].convert_to<long long>(), 5, -5})));
        CHECK_FALSE(on_lattice(lat, iv({s[0][0].convert_to<long long>(), 1, 0})));
    }

    // T^2, trivial sector: three free integers with phi2(t)_1 = -phi2(t)_0
    AffineLattice t0 = hom_lattice(catalog::torus2(), X, {iv({0}), iv({0})});
    CHECK(t0.dimension() == 3);
    CHECK(on_lattice(t0, iv({2, -4, 7, -7})));
}

TEST_CASE("homotopy directions") {
    auto X = targets::rp2();
    auto T = catalog::torus2();
    // trivial sector: no phi2 movement, phi1 moves by multiples of 2
    IntMatrix H0 = homotopy_sublattice(T, X, {iv({0}), iv({0})});
    for (std::size_t j = 0; j < H0.cols(); ++j) {
        CHECK(H0(2, j) == 0);
        CHECK(H0(3, j) == 0);
        CHECK(floor_mod(H0(0, j), 2) == 0);
        CHECK(floor_mod(H0(1, j), 2) == 0);
    }
    // sector (1,0): theta(b) = e_0 shifts phi2(t) by -(e_0 - e_1)
    IntMatrix H1 = homotopy_sublattice(T, X, {iv({1}), iv({0})});
    bool found = false;
    for (std::size_t j = 0; j < H1.cols(); ++j) found = found || H1.column(j) == iv({0, 2, -1, 1});
    CHECK(found);
}

TEST_CASE("based homotopy against a direct search for theta") {
    auto T = catalog::torus2();
    auto C = classify_based(T, targets::rp2());
    auto L = C.layout;
    auto cls = [&](const IntVector& x) -> const SectorResult& {
        Phi1Class s{IntVector{floor_mod(x[0], 2)}, IntVector{floor_mod(x[1], 2)}};
        for (const auto& r : C.sectors)
            if (r.phi1 == s) return r;
        throw std::runtime_error("no sector");
    };

    // (2,0,n) and (0,0,n) are homotopic; (0,0,n) and (0,0,n') are not
    for (long long n = -2; n <= 2; ++n) {
        CHECK(brute_homotopic(T, {2, 0}, {n, -n}, {0, 0}, {n, -n}, 2));
        CHECK(cls(pack({0, 0}, {n, -n})).homotopic(pack({2, 0}, {n, -n}), pack({0, 0}, {n, -n})));
        for (long long m = -2; m <= 2; ++m)
            if (m != n) {
                CHECK_FALSE(brute_homotopic(T, {0, 0}, {m, -m}, {0, 0}, {n, -n}, 3));
                CHECK_FALSE(cls(pack({0, 0}, {0, 0})).homotopic(pack({0, 0}, {m, -m}), pack({0, 0}, {n, -n})));
            }
    }

    // exhaustive comparison in a window around a few base points
    const std::vector<std::pair<std::vector<long long>, Vec2>> bases = {
        {{0, 0}, {0, 0}}, {{1, 0}, {0, 0}}, {{0, 1}, {1, -1}}, {{1, 1}, {0, 0}}, {{-1, 1}, {2, -2}}};
    for (const auto& [psi1, psi2] : bases)
        for (long long da = -2; da <= 2; da += 2)
            for (long long db = -2; db <= 2; db += 2)
                for (long long x = -2; x <= 2; ++x) {
                    std::vector<long long> phi1{psi1[0] + da, psi1[1] + db};
                    Vec2 phi2{x, -x};
                    bool brute = brute_homotopic(T, phi1, phi2, psi1, psi2, 3);
                    bool lattice = cls(pack(psi1, psi2)).homotopic(pack(phi1, phi2), pack(psi1, psi2));
                    CHECK(brute == lattice);
                }
    (void)L;
}

TEST_CASE("based classes of textures") {
    auto X = targets::rp2();
    auto T = classify_based(catalog::torus2(), X);
    CHECK(group_names(T) == std::vector<std::string>{"Z", "Z_2", "Z_2", "Z_2"});
    CHECK(display_reps(sector(T, {0, 0})) == std::vector<IntVector>{iv({0, 0, 0})});
    CHECK(sector(T, {0, 0}).quotient.free_directions().size() == 1);
    CHECK(sector(T, {0, 0}).quotient.display(sector(T, {0, 0}).quotient.free_directions()[0]) == iv({0, 0, 1}));
    CHECK(display_reps(sector(T, {1, 0})) == std::vector<IntVector>{iv({1, 0, 0}), iv({1, 0, 1})});
    CHECK(display_reps(sector(T, {0, 1})) == std::vector<IntVector>{iv({0, 1, 0}), iv({0, 1, 1})});
    CHECK(display_reps(sector(T, {1, 1})) == std::vector<IntVector>{iv({1, 1, 0}), iv({1, 1, 1})});

    auto R = classify_based(catalog::rp2(), X);
    CHECK(group_names(R) == std::vector<std::string>{"Z_2", "Z"});
    CHECK(display_reps(sector(R, {0})) == std::vector<IntVector>{iv({0, 0}), iv({0, 1})});
    const auto& id = sector(R, {1});
    for (long long n = -3; n <= 3; ++n) {
        // [1, n] are pairwise distinct and the family parameter is phi2(e_0)_0
        IntVector pt = id.quotient.family_point(0, {Integer(n)});
        CHECK(id.quotient.display(pt) == iv({1, n}));
    }
}

TEST_CASE("torus knot complements") {
    auto X = targets::rp2();
    for (auto [p, q] : std::vector<std::pair<long long, long long>>{{2, 2}, {4, 2}, {2, 4}, {4, 6}, {6, 4}}) {
        auto C = classify_based(catalog::torus_knot(static_cast<int>(p), static_cast<int>(q)), X);
        long long r = std::gcd(p, q);
        REQUIRE(C.sectors.size() == 4);
        CHECK(sector(C, {0, 0}).based_group == AbelianGroup::from_orders({r}));
        CHECK(sector(C, {1, 0}).based_group == AbelianGroup::from_orders({q}));
        CHECK(sector(C, {0, 1}).based_group == AbelianGroup::from_orders({p}));
        CHECK(sector(C, {1, 1}).based_group == AbelianGroup::free(1));
        for (long long x = 0; x < r; ++x) CHECK(display_reps(sector(C, {0, 0}))[x] == iv({0, 0, x}));
        for (long long x = 0; x < q; ++x) CHECK(display_reps(sector(C, {1, 0}))[x] == iv({1, 0, x}));
        for (long long x = 0; x < p; ++x) CHECK(display_reps(sector(C, {0, 1}))[x] == iv({0, 1, x}));

        // the free action fixes phi1 and sends phi2(t)_0 to phi2(t)_1
        auto F = classify_free(catalog::torus_knot(static_cast<int>(p), static_cast<int>(q)), X);
        auto partner = [&](const SectorResult& s, long long a, long long b, long long x) {
            long long y = (p * a - q * b) / 2 - x;
            return s.quotient.locate(iv({a, b, y, x})).first;
        };
        for (auto [a, b] : std::vector<std::pair<long long, long long>>{{0, 0}, {1, 0}, {0, 1}}) {
            const auto& s = sector(F, {a, b});
            for (std::size_t i = 0; i < s.representatives().size(); ++i) {
                long long x = display_reps(s)[i][2].convert_to<long long>();
                std::size_t j = partner(s, a, b, x);
                bool together = false;
                for (const auto& orb : s.free.orbits)
                    together = together || (std::count(orb.begin(), orb.end(), i) && std::count(orb.begin(), orb.end(), j));
                CHECK(together);
            }
        }
    }

    // p even, q odd and both odd
    auto odd = classify_based(catalog::torus_knot(3, 5), X);
    REQUIRE(odd.sectors.size() == 2);
    CHECK(sector(odd, {1, 1}).based_group.order() == 1);
    CHECK(display_reps(sector(odd, {1, 1})) == std::vector<IntVector>{iv({1, 1, 0})});
}

TEST_CASE("free classes") {
    auto X = targets::rp2();
    auto T = classify_free(catalog::torus2(), X);
    const auto& t0 = sector(T, {0, 0});
    REQUIRE(t0.free.families.size() == 1);
    REQUIRE(t0.free.families[0].reflection);
    CHECK(*t0.free.families[0].reflection == 0);  // n ~ -n, so n >= 0
    for (auto s : {std::initializer_list<long long>{1, 0}, {0, 1}, {1, 1}})
        CHECK(sector(T, s).free.orbits == std::vector<std::vector<std::size_t>>{{0}, {1}});

    auto R = classify_free(catalog::rp2(), X);
    CHECK(sector(R, {0}).free.orbits == std::vector<std::vector<std::size_t>>{{0}, {1}});
    const auto& id = sector(R, {1});
    REQUIRE(id.free.families.size() == 1);
    REQUIRE(id.free.families[0].reflection);
    CHECK(*id.free.families[0].reflection == 1);  // [1, n] ~ [1, 1 - n]
    CHECK(id.free.resolved);

    // trefoil: three sectors in total
    auto K = classify_free(catalog::torus_knot(2, 3), X);
    std::vector<IntVector> reps;
    for (const auto& s : K.sectors)
        for (const auto& orb : s.free.orbits) reps.push_back(s.quotient.display(s.representatives()[orb.front()]));
    CHECK(reps == std::vector<IntVector>{iv({0, 0, 0}), iv({1, 0, 0}), iv({1, 0, 2})});

    // based-to-free: orbits partition the representatives
    for (const auto& C : {T, R, K})
        for (const auto& s : C.sectors) {
            std::vector<std::size_t> all;
            for (const auto& o : s.free.orbits) {
                CHECK_FALSE(o.empty());
                all.insert(all.end(), o.begin(), o.end());
            }
            for (const auto& f : s.free.families) all.insert(all.end(), f.members.begin(), f.members.end());
            std::sort(all.begin(), all.end());
            std::vector<std::size_t> expect(s.representatives().size());
            std::iota(expect.begin(), expect.end(), 0);
            CHECK(all == expect);
        }
}

TEST_CASE("surfaces of higher genus") {
    auto X = targets::rp2();
    for (int g = 1; g <= 3; ++g) {
        auto C = classify_free(catalog::genus_surface(g), X);
        REQUIRE(C.sectors.size() == (std::size_t{1} << (2 * g)));
        std::size_t z2 = 0;
        for (const auto& s : C.sectors) {
            bool trivial = true;
            for (const auto& l : s.phi1) trivial = trivial && l[0] == 0;
            if (trivial) {
                CHECK(s.based_group == AbelianGroup::free(1));
                REQUIRE(s.free.families.size() == 1);
                CHECK(s.free.families[0].reflection == Integer(0));
            } else {
                CHECK(s.based_group == AbelianGroup::from_orders({2}));
                CHECK(s.free.orbits.size() == 2);
                ++z2;
            }
        }
        CHECK(z2 == (std::size_t{1} << (2 * g)) - 1);
    }
}

TEST_CASE("knot determinant") {
    auto X = targets::rp2();
    for (auto [p, q] : std::vector<std::pair<int, int>>{{2, 3}, {3, 2}, {2, 5}, {3, 4}, {4, 3}, {3, 5}, {5, 7}, {4, 5}}) {
        auto C = classify_based(catalog::torus_knot(p, q), X);
        Integer nontrivial = 0;
        for (const auto& s : C.sectors) {
            bool trivial = s.phi1[0][0] == 0 && s.phi1[1][0] == 0;
            if (!trivial) nontrivial += s.based_group.order();
            else CHECK(s.based_group.order() == 1);
        }
        int det = p % 2 == 0 ? q : (q % 2 == 0 ? p : 1);
        CHECK(nontrivial == det);
    }
}

TEST_CASE("homotopy is an equivalence relation") {
    std::mt19937 rng(7);
    std::uniform_int_distribution<int> coef(-4, 4);
    auto X = targets::rp2();
    for (const auto& M : {catalog::torus2(), catalog::torus_knot(2, 4), catalog::genus_surface(2)}) {
        auto C = classify_based(M, X);
        for (const auto& s : C.sectors) {
            const AffineLattice& L = s.quotient.lattice();
            auto random_point = [&]() {
                IntVector x = L.point;
                for (std::size_t j = 0; j < L.dimension(); ++j) {
                    int c = coef(rng);
                    for (std::size_t i = 0; i < x.size(); ++i) x[i] += c * L.basis(i, j);
                }
                return x;
            };
            for (int trial = 0; trial < 20; ++trial) {
                IntVector x = random_point(), y = random_point(), z = random_point();
                CHECK(s.homotopic(x, x));
                CHECK(s.homotopic(x, y) == s.homotopic(y, x));
                if (s.homotopic(x, y) && s.homotopic(y, z)) CHECK(s.homotopic(x, z));
                CHECK(commutes(M, X, C.layout.unpack(x)));
            }
        }
    }
}

TEST_CASE("targets with trivial fundamental group") {
    auto S = targets::sphere2();
    for (const auto& M : {catalog::sphere2(), catalog::torus2(), catalog::genus_surface(2)}) {
        auto C = classify_free(M, S);
        REQUIRE(C.sectors.size() == 1);
        CHECK(C.sectors[0].based_group == AbelianGroup::free(1));
        REQUIRE(C.sectors[0].free.families.size() == 1);
        CHECK_FALSE(C.sectors[0].free.families[0].reflection);
    }
    auto P = classify_based(catalog::rp2(), S);
    CHECK(P.sectors[0].based_group == AbelianGroup::from_orders({2}));
}

TEST_CASE("one-dimensional classification") {
    auto S3 = FiniteGroup::symmetric3();
    auto r = classify_dim1(1, S3);
    CHECK(r.based.size() == 6);
    std::set<std::set<std::size_t>> classes;
    for (std::size_t x = 0; x < 6; ++x) {
        std::set<std::size_t> c;
        for (std::size_t g = 0; g < 6; ++g) c.insert(S3.mul(S3.mul(g, x), S3.inv(g)));
        classes.insert(c);
    }
    CHECK(r.free.size() == classes.size());
    CHECK(r.free.size() == 3);

    auto z = classify_dim1(2, FiniteGroup::cyclic(2));
    CHECK(z.based.size() == 4);
    CHECK(z.free.size() == 4);
    auto one = classify_dim1(1, FiniteGroup::cyclic(1));
    CHECK(one.based.size() == 1);
    CHECK(one.free.size() == 1);

    // pairs in S3 up to simultaneous conjugation, counted through Burnside
    auto pairs = classify_dim1(2, S3);
    std::size_t fixed = 0;
    for (std::size_t g = 0; g < 6; ++g) {
        std::size_t c = 0;
        for (std::size_t x = 0; x < 6; ++x) c += S3.mul(g, x) == S3.mul(x, g);
        fixed += c * c;
    }
    CHECK(pairs.free.size() == fixed / 6);
}

TEST_CASE("closed form for the circle wedge sphere") {
    auto X = targets::rp2();
    auto w = wedge_formula(X);
    CHECK(w.based == AbelianGroup::from_orders({0, 2}));
    REQUIRE(w.pi2_action.size() == 1);
    CHECK(w.pi2_action[0] == IntMatrix{{-1}});

    auto C = classify_free(catalog::s1_wedge_s2(), X);
    CHECK(C.sectors.size() == static_cast<std::size_t>(w.pi1.order()));
    for (const auto& s : C.sectors) {
        CHECK(s.based_group == w.pi2);
        REQUIRE(s.free.families.size() == 1);
        CHECK(s.free.families[0].reflection == Integer(0));
    }

    auto ws = wedge_formula(targets::sphere2());
    CHECK(ws.based == AbelianGroup::free(1));
    CHECK(ws.pi2_action.empty());
    auto cs = classify_free(catalog::s1_wedge_s2(), targets::sphere2());
    REQUIRE(cs.sectors.size() == 1);
    CHECK(cs.sectors[0].based_group == ws.pi2);

    auto wt = wedge_formula(targets::trivial(1, 0));
    CHECK(wt.based == AbelianGroup::free(1));
    CHECK(classify_based(catalog::s1_wedge_s2(), targets::trivial(1, 0)).sectors[0].based_group == wt.based);
}

TEST_CASE("result json") {
    auto C = classify_free(catalog::torus2(), targets::rp2());
    auto j = to_json(catalog::torus2(), C);
    REQUIRE(j["sectors"].size() == 4);
    CHECK(j["sectors"][1].dump() ==
          R"({"phi1":{"a":1,"b":0},"based_group":[2],"representatives":[[1,0,0],[1,0,1]],"free_orbits":[[0],[1]]})");
    CHECK(j["sectors"][0]["based_group"].dump() == "[0]");
    CHECK(j["sectors"][0]["free_directions"].dump() == "[[0,0,1]]");
    CHECK(j["sectors"][0]["family_lower_bounds"].dump() == "[0]");
}
