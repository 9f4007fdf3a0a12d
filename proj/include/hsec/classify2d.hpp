#pragma once

#include "hsec/complexes.hpp"
#include "hsec/finite_group.hpp"
#include "hsec/xmod.hpp"
#include "hsec/zlinalg.hpp"

#include <json.hpp>

#include <map>
#include <string>
#include <vector>

namespace hsec {

// A homomorphism of crossed modules Pi_2 M -> X, given on cells.
struct XModHom {
    std::vector<IntVector> phi1;  // per generator, G coordinates
    std::vector<IntVector> phi2;  // per 2-cell, Z^r coordinates
    bool operator==(const XModHom&) const = default;
};

// Sector label: the pi_1 X label of each generator.
using Phi1Class = std::vector<IntVector>;

namespace detail {

inline void require_dim2(const CWComplex& M) {
    if (!M.three_cells.empty()) throw UnsupportedError("the 2-dimensional classifier needs a complex without 3-cells");
}

inline IntVector exponent_vector(const Word& w, std::size_t n) {
    IntVector v;
    for (long long e : w.exponent_sums()) v.emplace_back(e);
    v.resize(n);
    return v;
}

// pi_1 X label of a word under a sector
inline IntVector word_label(const Pi1X& P, const Phi1Class& sector, const Word& w) {
    IntVector out(P.coordinates());
    IntVector e = exponent_vector(w, sector.size());
    for (std::size_t a = 0; a < sector.size(); ++a)
        for (std::size_t i = 0; i < out.size(); ++i) out[i] += e[a] * sector[a][i];
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = floor_mod(out[i], P.orders()[i]);
    return out;
}

}  // namespace detail

inline bool commutes(const CWComplex& M, const ModuleXMod& X, const XModHom& h) {
    const std::size_t n = M.alphabet->size(), k = X.k();
    if (h.phi1.size() != n || h.phi2.size() != M.two_cells.size()) return false;
    IntMatrix T = X.relations();
    for (std::size_t t = 0; t < M.two_cells.size(); ++t) {
        IntVector lhs = X.boundary * h.phi2[t];
        IntVector e = detail::exponent_vector(M.two_cells[t].attach, n);
        for (std::size_t a = 0; a < n; ++a)
            for (std::size_t i = 0; i < k; ++i) lhs[i] -= e[a] * h.phi1[a][i];
        if (!solve(T, lhs)) return false;
    }
    return true;
}

// All assignments of pi_1 X labels to generators killing every relator; first generator fastest.
inline std::vector<Phi1Class> pi1_sectors(const CWComplex& M, const ModuleXMod& X) {
    detail::require_dim2(M);
    Pi1X P(X);
    const std::size_t n = M.alphabet->size();
    std::vector<IntVector> elems = P.elements();
    std::vector<Phi1Class> out;
    std::vector<std::size_t> idx(n, 0);
    IntVector zero(P.coordinates());
    for (;;) {
        Phi1Class s;
        for (std::size_t a = 0; a < n; ++a) s.push_back(elems[idx[a]]);
        bool ok = true;
        for (const auto& c : M.two_cells) ok = ok && detail::word_label(P, s, c.attach) == zero;
        if (ok) out.push_back(s);
        std::size_t a = 0;
        while (a < n && ++idx[a] == elems.size()) idx[a++] = 0;
        if (a == n) break;
    }
    return out;
}

// Ambient layout of homomorphism coordinates: phi1(a) blocks, then phi2(t) blocks.
struct HomLayout {
    std::size_t n = 0, m = 0, k = 0, r = 0;
    std::size_t phi1(std::size_t a, std::size_t i) const { return a * k + i; }
    std::size_t phi2(std::size_t t, std::size_t j) const { return n * k + t * r + j; }
    std::size_t size() const { return n * k + m * r; }

    IntVector pack(const XModHom& h) const {
        IntVector x(size());
        for (std::size_t a = 0; a < n; ++a)
            for (std::size_t i = 0; i < k; ++i) x[phi1(a, i)] = h.phi1.at(a).at(i);
        for (std::size_t t = 0; t < m; ++t)
            for (std::size_t j = 0; j < r; ++j) x[phi2(t, j)] = h.phi2.at(t).at(j);
        return x;
    }

    XModHom unpack(const IntVector& x) const {
        XModHom h;
        for (std::size_t a = 0; a < n; ++a) h.phi1.emplace_back(x.begin() + phi1(a, 0), x.begin() + phi1(a, 0) + k);
        for (std::size_t t = 0; t < m; ++t) h.phi2.emplace_back(x.begin() + phi2(t, 0), x.begin() + phi2(t, 0) + r);
        return h;
    }
};

inline HomLayout hom_layout(const CWComplex& M, const ModuleXMod& X) {
    return {M.alphabet->size(), M.two_cells.size(), X.k(), X.rank};
}

// Homomorphisms lying over a sector, as an affine lattice in the HomLayout coordinates.
//
// Unknowns: phi1, phi2, then slack u_a, v_a with phi1(a) - lift = T u_a + d v_a,
// and s_t with d phi2(t) - sum_a e(t,a) phi1(a) = T s_t. The slack is projected away.
inline AffineLattice hom_lattice(const CWComplex& M, const ModuleXMod& X, const Phi1Class& sector) {
    detail::require_dim2(M);
    Pi1X P(X);
    HomLayout L = hom_layout(M, X);
    const std::size_t n = L.n, m = L.m, k = L.k, r = L.r;
    const std::size_t base = L.size(), u0 = base, v0 = u0 + n * k, s0 = v0 + n * r, cols = s0 + m * k;
    IntMatrix T = X.relations(), d = X.boundary;
    IntMatrix A(n * k + m * k, cols);
    IntVector b(n * k + m * k);
    for (std::size_t a = 0; a < n; ++a) {
        IntVector lift = P.lift(sector.at(a));
        for (std::size_t i = 0; i < k; ++i) {
            std::size_t row = a * k + i;
            A(row, L.phi1(a, i)) = 1;
            for (std::size_t c = 0; c < k; ++c) A(row, u0 + a * k + c) = -T(i, c);
            for (std::size_t j = 0; j < r; ++j) A(row, v0 + a * r + j) = -d(i, j);
            b[row] = lift[i];
        }
    }
    for (std::size_t t = 0; t < m; ++t) {
        IntVector e = detail::exponent_vector(M.two_cells[t].attach, n);
        for (std::size_t i = 0; i < k; ++i) {
            std::size_t row = n * k + t * k + i;
            for (std::size_t j = 0; j < r; ++j) A(row, L.phi2(t, j)) = d(i, j);
            for (std::size_t a = 0; a < n; ++a) A(row, L.phi1(a, i)) = -e[a];
            for (std::size_t c = 0; c < k; ++c) A(row, s0 + t * k + c) = -T(i, c);
        }
    }
    auto sol = solve(A, b);
    AffineLattice out;
    out.point.assign(base, Integer(0));
    if (!sol) {
        out.basis = IntMatrix(base, 0);
        return out;
    }
    for (std::size_t i = 0; i < base; ++i) out.point[i] = sol->particular[i];
    IntMatrix dirs(base, sol->kernel_basis.size());
    for (std::size_t j = 0; j < sol->kernel_basis.size(); ++j)
        for (std::size_t i = 0; i < base; ++i) dirs(i, j) = sol->kernel_basis[j][i];
    out.basis = column_span_basis(dirs);
    return out;
}

// Directions of based homotopies: theta(a) = v for one generator and one basis vector,
// extended as a derivation, plus the torsion relations of G on each phi1 block.
inline IntMatrix homotopy_sublattice(const CWComplex& M, const ModuleXMod& X, const Phi1Class& sector) {
    detail::require_dim2(M);
    Pi1X P(X);
    HomLayout L = hom_layout(M, X);
    const std::size_t n = L.n, k = L.k, r = L.r;
    IntMatrix T = X.relations(), d = X.boundary;
    std::map<IntVector, IntMatrix> rho;
    auto rho_of = [&](const Word& w) -> const IntMatrix& {
        IntVector lab = detail::word_label(P, sector, w);
        auto it = rho.find(lab);
        if (it == rho.end()) it = rho.emplace(lab, X.act(P.lift(lab))).first;
        return it->second;
    };
    std::vector<IntVector> cols;
    for (std::size_t a = 0; a < n; ++a) {
        // Fox coefficient matrices sum_g c_g rho(g), one per 2-cell
        std::vector<IntMatrix> fox;
        for (const auto& c : M.two_cells) {
            IntMatrix F(r, r);
            GroupRingElement D = fox_derivative(c.attach, a);
            for (const auto& [g, coeff] : D.terms()) F = F + rho_of(g).scaled(coeff);
            fox.push_back(F);
        }
        for (std::size_t j = 0; j < r; ++j) {
            IntVector col(L.size());
            for (std::size_t i = 0; i < k; ++i) col[L.phi1(a, i)] = d(i, j);
            for (std::size_t t = 0; t < L.m; ++t)
                for (std::size_t i = 0; i < r; ++i) col[L.phi2(t, i)] = fox[t](i, j);
            cols.push_back(col);
        }
        for (std::size_t c = 0; c < k; ++c) {
            if (T(c, c) == 0) continue;
            IntVector col(L.size());
            col[L.phi1(a, c)] = T(c, c);
            cols.push_back(col);
        }
    }
    return IntMatrix::from_columns(cols, L.size());
}

struct SectorResult {
    Phi1Class phi1;
    AbelianGroup based_group;
    LatticeQuotient quotient;
    // free classes; filled by classify_free
    OrbitSummary free;

    const std::vector<IntVector>& representatives() const { return quotient.representatives(); }
    bool homotopic(const IntVector& x, const IntVector& y) const { return quotient.same_class(x, y); }
};

struct SectorClassification {
    HomLayout layout;
    std::vector<SectorResult> sectors;
    bool free_computed = false;
};

inline SectorClassification classify_based(const CWComplex& M, const ModuleXMod& X) {
    detail::require_dim2(M);
    if (auto v = validate(X); !v.empty()) throw ValidationError("invalid target: " + v.front());
    SectorClassification out;
    out.layout = hom_layout(M, X);
    for (const Phi1Class& s : pi1_sectors(M, X)) {
        LatticeQuotient Q = quotient_with_representatives(hom_lattice(M, X, s), homotopy_sublattice(M, X, s));
        AbelianGroup g = Q.group();
        out.sectors.push_back(SectorResult{s, g, std::move(Q), {}});
    }
    return out;
}

// The action of gamma in pi_1 X on homomorphisms: phi1 fixed (G is abelian), phi2 -> rho(gamma) phi2.
inline AffineMap free_action(const HomLayout& L, const IntMatrix& rho) {
    AffineMap f;
    f.linear = IntMatrix::identity(L.size());
    f.shift.assign(L.size(), Integer(0));
    for (std::size_t t = 0; t < L.m; ++t)
        for (std::size_t i = 0; i < L.r; ++i)
            for (std::size_t j = 0; j < L.r; ++j) f.linear(L.phi2(t, i), L.phi2(t, j)) = rho(i, j);
    return f;
}

inline SectorClassification classify_free(const CWComplex& M, const ModuleXMod& X) {
    SectorClassification out = classify_based(M, X);
    Pi1X P(X);
    std::vector<AffineMap> maps;
    for (std::size_t a = 0; a < P.coordinates(); ++a) {
        IntVector e(P.coordinates());
        e[a] = 1;
        maps.push_back(free_action(out.layout, X.act(P.lift(e))));
    }
    for (auto& s : out.sectors) s.free = orbits(s.quotient, maps);
    out.free_computed = true;
    return out;
}

// Dimension one: based classes are tuples of group elements, free classes their simultaneous conjugacy orbits.
struct Dim1Classification {
    std::vector<std::vector<std::size_t>> based;
    std::vector<std::vector<std::size_t>> free;  // orbits as indices into based
};

inline Dim1Classification classify_dim1(std::size_t n, const FiniteGroup& G, std::size_t limit = 1000000) {
    std::size_t total = 1;
    for (std::size_t i = 0; i < n; ++i) {
        total *= G.order();
        if (total > limit) throw UnsupportedError("too many based classes to enumerate");
    }
    Dim1Classification out;
    std::map<std::vector<std::size_t>, std::size_t> index;
    std::vector<std::size_t> t(n, 0);
    for (std::size_t c = 0; c < total; ++c) {
        index.emplace(t, out.based.size());
        out.based.push_back(t);
        std::size_t a = 0;
        while (a < n && ++t[a] == G.order()) t[a++] = 0;
    }
    std::vector<bool> seen(total, false);
    for (std::size_t i = 0; i < total; ++i) {
        if (seen[i]) continue;
        std::vector<std::size_t> orbit;
        for (std::size_t g = 0; g < G.order(); ++g) {
            std::vector<std::size_t> c = out.based[i];
            for (auto& x : c) x = G.conj(g, x);
            std::size_t j = index.at(c);
            if (!seen[j]) {
                seen[j] = true;
                orbit.push_back(j);
            }
        }
        std::sort(orbit.begin(), orbit.end());
        out.free.push_back(orbit);
    }
    return out;
}

// Closed form for S^1 v S^2: based classes pi_2 X x pi_1 X, free classes their pi_1 X orbits.
struct WedgeFormula {
    AbelianGroup pi2, pi1, based;
    // action of each pi_1 X generator on pi_2 X in the pi2_basis coordinates
    std::vector<IntMatrix> pi2_action;
};

inline WedgeFormula wedge_formula(const ModuleXMod& X) {
    if (auto v = validate(X); !v.empty()) throw ValidationError("invalid target: " + v.front());
    WedgeFormula w;
    w.pi2 = X.pi2();
    w.pi1 = X.pi1();
    w.based = w.pi2 * w.pi1;
    Pi1X P(X);
    IntMatrix B = X.pi2_basis();
    for (std::size_t a = 0; a < P.coordinates(); ++a) {
        IntVector e(P.coordinates());
        e[a] = 1;
        IntMatrix img = X.act(P.lift(e)) * B;
        IntMatrix A(B.cols(), B.cols());
        for (std::size_t j = 0; j < B.cols(); ++j) {
            auto s = solve(B, img.column(j));
            if (!s) throw ValidationError("action does not preserve pi_2");
            for (std::size_t i = 0; i < B.cols(); ++i) A(i, j) = s->particular[i];
        }
        w.pi2_action.push_back(A);
    }
    return w;
}

namespace detail {

inline nlohmann::ordered_json ints_json(const IntVector& v) {
    nlohmann::ordered_json a = nlohmann::ordered_json::array();
    for (const auto& x : v) a.push_back(to_ll(x));
    return a;
}

}  // namespace detail

inline nlohmann::ordered_json to_json(const CWComplex& M, const SectorClassification& C) {
    using oj = nlohmann::ordered_json;
    oj sectors = oj::array();
    for (const auto& s : C.sectors) {
        oj phi1 = oj::object();
        for (std::size_t a = 0; a < s.phi1.size(); ++a) {
            const IntVector& l = s.phi1[a];
            if (l.size() == 1)
                phi1[M.alphabet->names()[a]] = to_ll(l[0]);
            else if (l.empty())
                phi1[M.alphabet->names()[a]] = 0;
            else
                phi1[M.alphabet->names()[a]] = detail::ints_json(l);
        }
        oj based = oj::array();
        for (std::size_t i = 0; i < s.based_group.free_rank(); ++i) based.push_back(0);
        for (const auto& t : s.based_group.torsion()) based.push_back(to_ll(t));
        oj reps = oj::array();
        for (const auto& r : s.representatives()) reps.push_back(detail::ints_json(s.quotient.display(r)));
        oj o = oj::object();
        o["phi1"] = phi1;
        o["based_group"] = based;
        o["representatives"] = reps;
        if (!s.quotient.free_directions().empty()) {
            oj dirs = oj::array();
            for (const auto& d : s.quotient.free_directions()) dirs.push_back(detail::ints_json(s.quotient.display(d)));
            o["free_directions"] = dirs;
        }
        if (C.free_computed) {
            oj orbs = oj::array();
            if (!s.free.families.empty()) {
                for (const auto& f : s.free.families) orbs.push_back(f.members);
                oj doms = oj::array();
                for (const auto& f : s.free.families)
                    doms.push_back(f.reflection ? oj(to_ll(ceil_div(*f.reflection, 2))) : oj(nullptr));
                o["free_orbits"] = orbs;
                o["family_lower_bounds"] = doms;
            } else {
                for (const auto& orb : s.free.orbits) orbs.push_back(orb);
                o["free_orbits"] = orbs;
            }
            if (!s.free.resolved) o["note"] = s.free.note;
        }
        sectors.push_back(o);
    }
    return oj{{"sectors", sectors}};
}

}  // namespace hsec
