#pragma once

#include "hsec/classify2d.hpp"
#include "hsec/complexes.hpp"
#include "hsec/xmod.hpp"
#include "hsec/zlinalg.hpp"

#include <map>
#include <string>
#include <vector>

namespace hsec {

// Z^r as a module over a finite abelian group Z_{o_1} x ... x Z_{o_s}, one matrix per cyclic factor.
struct CoefficientModule {
    std::size_t rank = 0;
    IntVector orders;
    std::vector<IntMatrix> action;

    // rho of a label in the cyclic factors
    IntMatrix act(const IntVector& label) const {
        IntMatrix out = IntMatrix::identity(rank);
        for (std::size_t i = 0; i < orders.size(); ++i) {
            Integer e = floor_mod(label.at(i), orders[i]);
            for (Integer c = 0; c < e; ++c) out = out * action[i];
        }
        return out;
    }

    static CoefficientModule trivial(std::size_t rank, IntVector orders = {}) {
        CoefficientModule c;
        c.rank = rank;
        c.orders = std::move(orders);
        c.action.assign(c.orders.size(), IntMatrix::identity(rank));
        return c;
    }
};

inline std::vector<std::string> validate(const CoefficientModule& c) {
    std::vector<std::string> v;
    if (c.action.size() != c.orders.size()) return {"expected one action matrix per cyclic factor"};
    IntMatrix I = IntMatrix::identity(c.rank);
    for (std::size_t i = 0; i < c.orders.size(); ++i) {
        if (c.orders[i] < 1) v.push_back("factor " + std::to_string(i) + " has order < 1");
        if (c.action[i].rows() != c.rank || c.action[i].cols() != c.rank) {
            v.push_back("action matrix " + std::to_string(i) + " has the wrong shape");
            continue;
        }
        IntMatrix p = I;
        for (Integer k = 0; k < c.orders[i]; ++k) p = p * c.action[i];
        if (p != I) v.push_back("action matrix " + std::to_string(i) + " does not have the order of its factor");
        for (std::size_t j = 0; j < i; ++j)
            if (c.action[j].rows() == c.rank && c.action[i] * c.action[j] != c.action[j] * c.action[i])
                v.push_back("action matrices " + std::to_string(j) + " and " + std::to_string(i) + " do not commute");
    }
    return v;
}

// pi_2 X = Z^r cap ker d as a module over pi_1 X, in the coordinates of pi2_basis.
inline CoefficientModule pi2_coefficients(const ModuleXMod& X) {
    Pi1X P(X);
    WedgeFormula w = wedge_formula(X);
    CoefficientModule c;
    c.rank = X.pi2_basis().cols();
    c.orders = P.orders();
    c.action = w.pi2_action;
    return c;
}

struct CochainComplex {
    std::vector<IntMatrix> d;  // d[k]: C^k -> C^{k+1}
    std::vector<std::size_t> dims;

    std::size_t degree() const { return dims.size() - 1; }
};

// Sectors for an abelian pi_1 target: labels of generators killing every relator.
inline std::vector<Phi1Class> abelian_sectors(const CWComplex& M, const IntVector& orders) {
    const std::size_t n = M.alphabet->size();
    // group elements, first coordinate fastest
    std::vector<IntVector> elems;
    IntVector g(orders.size());
    for (;;) {
        elems.push_back(g);
        std::size_t i = 0;
        while (i < g.size() && (g[i] += 1) == orders[i]) g[i++] = 0;
        if (i == g.size()) break;
    }
    auto label = [&](const Phi1Class& s, const Word& w) {
        IntVector out(orders.size());
        auto e = w.exponent_sums();
        for (std::size_t a = 0; a < n; ++a)
            for (std::size_t i = 0; i < orders.size(); ++i) out[i] += e[a] * s[a][i];
        for (std::size_t i = 0; i < orders.size(); ++i) out[i] = floor_mod(out[i], orders[i]);
        return out;
    };
    std::vector<Phi1Class> out;
    std::vector<std::size_t> idx(n, 0);
    IntVector zero(orders.size());
    for (;;) {
        Phi1Class s;
        for (std::size_t a = 0; a < n; ++a) s.push_back(elems[idx[a]]);
        bool ok = true;
        for (const auto& c : M.two_cells) ok = ok && label(s, c.attach) == zero;
        if (ok) out.push_back(s);
        std::size_t a = 0;
        while (a < n && ++idx[a] == elems.size()) idx[a++] = 0;
        if (a == n) break;
    }
    return out;
}

// Cellular cochains of the universal cover twisted by rho o phi_1.
inline CochainComplex build_complex(const CWComplex& M, const CoefficientModule& coeffs, const Phi1Class& sector,
                                    const Pi1Labeling& labeling = {}) {
    if (auto v = validate(coeffs); !v.empty()) throw ValidationError("coefficients: " + v.front());
    const std::size_t n = M.alphabet->size(), m = M.two_cells.size(), x3 = M.three_cells.size(), r = coeffs.rank;
    if (sector.size() != n) throw ValidationError("sector has the wrong number of generators");
    auto rho = [&](const Word& w) {
        IntVector lab(coeffs.orders.size());
        auto e = w.exponent_sums();
        for (std::size_t a = 0; a < n; ++a)
            for (std::size_t i = 0; i < lab.size(); ++i) lab[i] += e[a] * sector[a].at(i);
        return coeffs.act(lab);
    };
    auto apply = [&](const GroupRingElement& x) {
        IntMatrix out(r, r);
        for (const auto& [w, c] : x.terms()) out = out + rho(w).scaled(c);
        return out;
    };

    CochainComplex C;
    C.dims = {r, n * r, m * r};
    IntMatrix d0(n * r, r);
    for (std::size_t a = 0; a < n; ++a) d0.set_block(a * r, 0, rho(Word::generator(M.alphabet, a)) - IntMatrix::identity(r));
    IntMatrix d1(m * r, n * r);
    for (std::size_t t = 0; t < m; ++t)
        for (std::size_t a = 0; a < n; ++a) {
            GroupRingElement D = fox_derivative(M.two_cells[t].attach, a);
            d1.set_block(t * r, a * r, apply(D));
        }
    C.d = {d0, d1};
    if (x3) {
        Pi1Labeling proj = labeling ? labeling : abelian_labeling(M);
        IntMatrix d2(x3 * r, m * r);
        for (std::size_t x = 0; x < x3; ++x) {
            CellVector img = derivation_image(M, M.three_cells[x].attach, proj);
            for (std::size_t t = 0; t < m; ++t) d2.set_block(x * r, t * r, apply(img[t]));
        }
        C.d.push_back(d2);
        C.dims.push_back(x3 * r);
    }
    return C;
}

// H^k = ker d^k / im d^{k-1}
inline AbelianGroup cohomology(const CochainComplex& C, std::size_t k) {
    if (k > C.degree()) return AbelianGroup::free(0);
    const std::size_t N = C.dims[k];
    IntMatrix Z = k < C.d.size() ? IntMatrix::from_columns(kernel_basis(C.d[k]), N) : IntMatrix::identity(N);
    if (Z.cols() == 0) return AbelianGroup::free(0);
    IntMatrix B = k > 0 ? C.d[k - 1] : IntMatrix(N, 0);
    IntMatrix coords(Z.cols(), B.cols());
    for (std::size_t j = 0; j < B.cols(); ++j) {
        auto s = solve(Z, B.column(j));
        if (!s) throw ValidationError("coboundary outside the cocycles; d o d is not zero");
        for (std::size_t i = 0; i < Z.cols(); ++i) coords(i, j) = s->particular[i];
    }
    return quotient(Z.cols(), coords);
}

inline AbelianGroup twisted_second_cohomology(const CWComplex& M, const Phi1Class& sector,
                                              const CoefficientModule& coeffs) {
    if (!M.three_cells.empty()) throw UnsupportedError("second cohomology is taken in the top dimension only");
    return cohomology(build_complex(M, coeffs, sector), 2);
}

inline AbelianGroup twisted_third_cohomology(const CWComplex& M, const Phi1Class& sector,
                                             const CoefficientModule& coeffs, const Pi1Labeling& labeling = {}) {
    if (M.three_cells.empty()) throw UnsupportedError("third cohomology needs 3-cells");
    return cohomology(build_complex(M, coeffs, sector, labeling), 3);
}

// Target with pi_2 = 0 described by pi_1 (finite abelian) and pi_3 with its pi_1 action.
struct SpecialTarget {
    std::string name;
    CoefficientModule pi3;
};

namespace special_targets {

inline SpecialTarget lens(long long p, long long q) {
    if (p < 1 || q < 1 || std::gcd(p, q) != 1) throw ValidationError("lens space needs coprime p, q >= 1");
    SpecialTarget t;
    t.name = "lens:" + std::to_string(p) + "," + std::to_string(q);
    t.pi3 = CoefficientModule::trivial(1, p > 1 ? int_vector({p}) : IntVector{});
    return t;
}

inline SpecialTarget so3() {
    SpecialTarget t = lens(2, 1);
    t.name = "so3";
    return t;
}

inline SpecialTarget s3() {
    SpecialTarget t;
    t.name = "s3";
    t.pi3 = CoefficientModule::trivial(1);
    return t;
}

inline SpecialTarget get(std::string_view spec) {
    if (spec == "so3") return so3();
    if (spec == "s3") return s3();
    if (spec.substr(0, 5) == "lens:") {
        std::string rest(spec.substr(5));
        auto comma = rest.find(',');
        if (comma == std::string::npos) throw ValidationError("lens needs two parameters");
        try {
            std::size_t u1 = 0, u2 = 0;
            long long p = std::stoll(rest.substr(0, comma), &u1), q = std::stoll(rest.substr(comma + 1), &u2);
            if (u1 != comma || u2 != rest.size() - comma - 1) throw std::invalid_argument(rest);
            return lens(p, q);
        } catch (const std::logic_error&) {
            throw ValidationError("invalid lens parameters '" + rest + "'");
        }
    }
    throw ValidationError("unknown target '" + std::string(spec) + "'");
}

}  // namespace special_targets

struct SpecialSector {
    Phi1Class phi1;
    AbelianGroup group;
    LatticeQuotient quotient;
    OrbitSummary free;
};

// [M, X]_0 as a union of H^3 over sectors, free classes from the pi_1 X action on the coefficients.
inline std::vector<SpecialSector> special_case_classify(const CWComplex& M, const SpecialTarget& X,
                                                        const Pi1Labeling& labeling = {}) {
    if (M.three_cells.empty()) throw UnsupportedError("the special case needs a complex with 3-cells");
    const CoefficientModule& c = X.pi3;
    std::vector<SpecialSector> out;
    for (const Phi1Class& s : abelian_sectors(M, c.orders)) {
        CochainComplex C = build_complex(M, c, s, labeling);
        const IntMatrix& d2 = C.d[2];
        AffineLattice top{IntVector(C.dims[3]), IntMatrix::identity(C.dims[3])};
        LatticeQuotient Q(top, d2);
        std::vector<AffineMap> maps;
        for (std::size_t i = 0; i < c.orders.size(); ++i) {
            AffineMap f;
            f.linear = IntMatrix(C.dims[3], C.dims[3]);
            for (std::size_t x = 0; x < M.three_cells.size(); ++x) f.linear.set_block(x * c.rank, x * c.rank, c.action[i]);
            f.shift.assign(C.dims[3], Integer(0));
            maps.push_back(f);
        }
        OrbitSummary free = orbits(Q, maps);
        AbelianGroup g = Q.group();
        out.push_back(SpecialSector{s, g, std::move(Q), std::move(free)});
    }
    return out;
}

}  // namespace hsec
