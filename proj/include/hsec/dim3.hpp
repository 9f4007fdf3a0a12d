#pragma once

#include "hsec/complexes.hpp"
#include "hsec/zlinalg.hpp"

#include <json.hpp>

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

namespace hsec {

// The fundamental crossed square of S^2: L = K = H = G = Z, kappa = eta = 0, nu = mu = Id.
struct S2CrossedSquareTarget {
    AbelianGroup L = AbelianGroup::free(1), K = AbelianGroup::free(1), H = AbelianGroup::free(1),
                 G = AbelianGroup::free(1);
    IntMatrix kappa = IntMatrix{{0}}, eta = IntMatrix{{0}}, nu = IntMatrix{{1}}, mu = IntMatrix{{1}};

    AbelianGroup pi2() const { return AbelianGroup::free(1); }
    AbelianGroup pi3() const { return AbelianGroup::free(1); }
};

struct XSqHom {
    IntVector phi2;  // per 2-cell
    IntVector phi3;  // per 3-cell
    bool operator==(const XSqHom&) const = default;
};

namespace detail {

// Phi_2 of an H word into Z with trivial action: signed sum of the cell values.
inline IntVector hword_counts(const HWord& w, std::size_t cells) {
    IntVector v(cells);
    for (const HLetter& l : w) v.at(l.cell) += l.sign;
    return v;
}

inline IntVector triad_counts(const TriadWord& w, std::size_t cells) {
    IntVector v(cells);
    for (const TriadLetter& l : w) v.at(l.cell) += l.sign;
    return v;
}

}  // namespace detail

// Homomorphisms into the S^2 crossed square: phi2 with every sigma_3 summing to zero, phi3 free.
// Coordinates: phi2 per 2-cell, then phi3 per 3-cell.
inline AffineLattice xsq_hom_lattice(const CWComplex& M) {
    const std::size_t m = M.two_cells.size(), x3 = M.three_cells.size();
    IntMatrix A(x3, m + x3);
    for (std::size_t x = 0; x < x3; ++x) {
        IntVector c = detail::triad_counts(M.three_cells[x].attach, m);
        for (std::size_t t = 0; t < m; ++t) A(x, t) = c[t];
    }
    auto s = solve(A, IntVector(x3));
    return affine_lattice(*s);
}

inline bool is_xsq_hom(const CWComplex& M, const XSqHom& h) {
    if (h.phi2.size() != M.two_cells.size() || h.phi3.size() != M.three_cells.size()) return false;
    for (const auto& c : M.three_cells) {
        IntVector n = detail::triad_counts(c.attach, M.two_cells.size());
        Integer s = 0;
        for (std::size_t t = 0; t < n.size(); ++t) s += n[t] * h.phi2[t];
        if (s != 0) return false;
    }
    return true;
}

// Letters of the coproduct (H (x) H-bar) o C, kept symbolic.
struct TensorLetter {
    HWord h, k;
    int sign = 1;
};

struct CLetter {
    Word f;
    HWord h;
    std::size_t cell = 0;  // 3-cell
    int sign = 1;
};

using LLetter = std::variant<TensorLetter, CLetter>;
using FormalLWord = std::vector<LLetter>;

inline FormalLWord formal_inverse(const FormalLWord& w) {
    FormalLWord out;
    for (auto it = w.rbegin(); it != w.rend(); ++it) {
        LLetter l = *it;
        std::visit([](auto& x) { x.sign = -x.sign; }, l);
        out.push_back(l);
    }
    return out;
}

inline std::string to_string(const CWComplex& M, const HWord& w) {
    std::string s;
    for (const HLetter& l : w) {
        if (!s.empty()) s += " ";
        if (!l.f.empty()) s += "^{" + l.f.to_string() + "}";
        s += M.two_cells.at(l.cell).name;
        if (l.sign < 0) s += "^-1";
    }
    return s.empty() ? "1" : s;
}

inline std::string to_string(const CWComplex& M, const FormalLWord& w) {
    std::string s;
    for (const LLetter& l : w) {
        if (!s.empty()) s += " ";
        if (const auto* t = std::get_if<TensorLetter>(&l)) {
            s += "(" + to_string(M, t->h) + " (x) " + to_string(M, t->k) + ")";
            if (t->sign < 0) s += "^-1";
        } else {
            const auto& c = std::get<CLetter>(l);
            std::string conj = c.f.empty() ? "" : c.f.to_string();
            if (!c.h.empty()) conj += (conj.empty() ? "" : ", ") + to_string(M, c.h);
            if (!conj.empty()) s += "^{" + conj + "}";
            s += M.three_cells.at(c.cell).name;
            if (c.sign < 0) s += "^-1";
        }
    }
    return s.empty() ? "1" : s;
}

// Image of a formal L word in pi_3 S^2 = Z. Tensor letters give s Phi(h) Phi(k); C letters give
// the signed value of their 3-cell. Conjugators act trivially on the target.
inline Integer evaluate_L(const CWComplex& M, const FormalLWord& w, const std::map<std::string, Integer>& values) {
    auto value = [&](const std::string& name) {
        auto it = values.find(name);
        if (it == values.end()) throw ValidationError("no value assigned to cell '" + name + "'");
        return it->second;
    };
    auto phi = [&](const HWord& h) {
        Integer s = 0;
        for (const HLetter& l : h) s += l.sign * value(M.two_cells.at(l.cell).name);
        return s;
    };
    Integer total = 0;
    for (const LLetter& l : w) {
        if (const auto* t = std::get_if<TensorLetter>(&l))
            total += t->sign * phi(t->h) * phi(t->k);
        else {
            const auto& c = std::get<CLetter>(l);
            total += c.sign * value(M.three_cells.at(c.cell).name);
        }
    }
    return total;
}

// The cylinder I_0 M up to dimension 3 with the boundary of each 4-cell x_I.
struct CylinderPreset {
    std::string space;
    CWComplex source;
    CWComplex cylinder;
    std::vector<std::string> i_two_cells, i_three_cells;
    std::vector<FormalLWord> d4;  // one per 3-cell of the source

    std::string end_name(const std::string& cell, int end) const { return cell + std::to_string(end); }
};

namespace detail {

inline Word rename(const Word& w, const AlphabetPtr& to, const std::vector<std::size_t>& gen_map) {
    std::vector<Letter> raw;
    for (const Letter& l : w.letters()) raw.push_back({gen_map.at(l.gen), l.exp});
    return Word::reduce(to, raw);
}

// Cylinder skeleton: both ends, a_I with boundary a_1 a_0^-1, and the given I 3-cells.
inline CWComplex cylinder_skeleton(const CWComplex& M,
                                   const std::vector<std::pair<std::string, std::vector<std::tuple<std::string, std::string, int>>>>& i3) {
    const auto& g = M.alphabet->names();
    std::vector<std::string> gens;
    for (int e = 0; e < 2; ++e)
        for (const auto& a : g) gens.push_back(a + std::to_string(e));
    CWComplex C;
    C.name = "I0(" + M.name + ")";
    C.alphabet = make_alphabet(gens);
    const std::size_t n = g.size();
    std::vector<std::vector<std::size_t>> gmap(2, std::vector<std::size_t>(n));
    for (int e = 0; e < 2; ++e)
        for (std::size_t a = 0; a < n; ++a) gmap[e][a] = e * n + a;
    const std::size_t m = M.two_cells.size();
    for (int e = 0; e < 2; ++e)
        for (const auto& t : M.two_cells) C.two_cells.push_back({t.name + std::to_string(e), rename(t.attach, C.alphabet, gmap[e])});
    for (std::size_t a = 0; a < n; ++a)
        C.two_cells.push_back({g[a] + "I", C.word(g[a] + "1 " + g[a] + "0^-1")});
    for (int e = 0; e < 2; ++e)
        for (const auto& x : M.three_cells) {
            TriadWord w;
            for (const TriadLetter& l : x.attach) {
                TriadLetter r;
                r.f = rename(l.f, C.alphabet, gmap[e]);
                for (const HLetter& h : l.h) r.h.push_back({rename(h.f, C.alphabet, gmap[e]), e * m + h.cell, h.sign});
                r.cell = e * m + l.cell;
                r.sign = l.sign;
                w.push_back(r);
            }
            C.three_cells.push_back({x.name + std::to_string(e), w});
        }
    for (const auto& [name, letters] : i3) {
        TriadWord w;
        for (const auto& [f, cell, sign] : letters) w.push_back(triad_letter(C, f, cell, sign));
        C.three_cells.push_back({name, w});
    }
    return C;
}

inline HWord hw(const CWComplex& C, std::initializer_list<std::tuple<const char*, const char*, int>> letters) {
    HWord w;
    for (const auto& [f, cell, sign] : letters) w.push_back({C.word(f), C.two_cell(cell), sign});
    return w;
}

inline std::size_t three_cell(const CWComplex& C, const std::string& name) {
    auto i = C.find_three_cell(name);
    if (!i) throw ValidationError("unknown 3-cell '" + name + "'");
    return *i;
}

}  // namespace detail

namespace presets {

inline CylinderPreset s1_x_s2() {
    CylinderPreset P;
    P.space = "s1_x_s2";
    P.source = catalog::s1_x_s2();
    P.cylinder = detail::cylinder_skeleton(P.source, {{"tI", {{"", "t1", 1}, {"", "t0", -1}}}});
    P.i_two_cells = {"aI"};
    P.i_three_cells = {"tI"};
    const CWComplex& C = P.cylinder;
    using detail::hw;
    HWord t0inv = hw(C, {{"", "t0", -1}});
    HWord conj_a = t0inv;
    conj_a.push_back({C.identity(), C.two_cell("aI"), 1});
    // (aI^-1 (x) t0)^-1 (^{a1} t0^-1 (x) aI)^-1 o ^{t0^-1}(tI x1 tI^-1 ^{aI} x0^-1)
    P.d4 = {{TensorLetter{hw(C, {{"", "aI", -1}}), hw(C, {{"", "t0", 1}}), -1},
             TensorLetter{hw(C, {{"a1", "t0", -1}}), hw(C, {{"", "aI", 1}}), -1},
             CLetter{C.identity(), t0inv, detail::three_cell(C, "tI"), 1},
             CLetter{C.identity(), t0inv, detail::three_cell(C, "x1"), 1},
             CLetter{C.identity(), t0inv, detail::three_cell(C, "tI"), -1},
             CLetter{C.identity(), conj_a, detail::three_cell(C, "x0"), -1}}};
    return P;
}

inline CylinderPreset torus3() {
    CylinderPreset P;
    P.space = "torus3";
    P.source = catalog::torus3();
    P.cylinder = detail::cylinder_skeleton(
        P.source, {{"tI", {{"", "t1", 1}, {"c1", "bI", 1}, {"", "cI", 1}, {"", "t0", -1}, {"", "bI", -1}, {"b1", "cI", -1}}},
                   {"uI", {{"", "u1", 1}, {"a1", "cI", 1}, {"", "aI", 1}, {"", "u0", -1}, {"", "cI", -1}, {"c1", "aI", -1}}},
                   {"vI", {{"", "v1", 1}, {"b1", "aI", 1}, {"", "bI", 1}, {"", "v0", -1}, {"", "aI", -1}, {"a1", "bI", -1}}}});
    P.i_two_cells = {"aI", "bI", "cI"};
    P.i_three_cells = {"tI", "uI", "vI"};
    const CWComplex& C = P.cylinder;
    using detail::hw;
    auto c3 = [&](const char* f, const char* cell, int sign) {
        return CLetter{C.word(f), {}, detail::three_cell(C, cell), sign};
    };
    FormalLWord w;
    // one pair of tensor letters per face and its transverse I-cell
    for (auto [I, face, gen] : std::vector<std::tuple<const char*, const char*, const char*>>{
             {"aI", "t0", "a1"}, {"bI", "u0", "b1"}, {"cI", "v0", "c1"}}) {
        w.push_back(TensorLetter{hw(C, {{"", I, -1}}), hw(C, {{"", face, 1}}), 1});
        w.push_back(TensorLetter{hw(C, {{gen, face, -1}}), hw(C, {{"", I, 1}}), 1});
    }
    for (const CLetter& l : {c3("", "x1", 1), c3("", "tI", -1), c3("c1", "vI", 1), c3("", "uI", -1), c3("", "x0", -1),
                             c3("a1", "tI", 1), c3("", "vI", -1), c3("b1", "uI", 1)})
        w.push_back(l);
    P.d4 = {w};
    return P;
}

inline std::vector<std::string> names() { return {"s1_x_s2", "torus3"}; }

inline std::optional<CylinderPreset> find(const CWComplex& M) {
    for (auto P : {s1_x_s2(), torus3()})
        if (P.source == M) return P;
    return std::nullopt;
}

}  // namespace presets

// Homotopy relation in a sector: psi2 = phi2 and the d4 equations admit integer I-cell values.
// Each d4 equation reads delta_x + sum_j C(x, j) I_j = 0 with delta = psi3 - phi3.
struct S2HomotopySystem {
    IntVector phi2;
    std::vector<std::string> unknowns;
    IntMatrix coefficients;  // rows: 3-cells of the source, columns: unknowns
};

inline S2HomotopySystem s2_homotopy_system(const CylinderPreset& P, const IntVector& phi2) {
    const CWComplex& M = P.source;
    if (phi2.size() != M.two_cells.size()) throw ValidationError("expected one value per 2-cell");
    if (!is_xsq_hom(M, {phi2, IntVector(M.three_cells.size())})) throw ValidationError("phi2 is not part of a homomorphism");
    S2HomotopySystem S;
    S.phi2 = phi2;
    S.unknowns = P.i_two_cells;
    S.unknowns.insert(S.unknowns.end(), P.i_three_cells.begin(), P.i_three_cells.end());
    std::map<std::string, Integer> base;
    for (std::size_t t = 0; t < M.two_cells.size(); ++t)
        for (int e = 0; e < 2; ++e) base[P.end_name(M.two_cells[t].name, e)] = phi2[t];
    for (const auto& x : M.three_cells)
        for (int e = 0; e < 2; ++e) base[P.end_name(x.name, e)] = 0;
    for (const auto& u : S.unknowns) base[u] = 0;

    const std::size_t x3 = M.three_cells.size(), J = S.unknowns.size();
    S.coefficients = IntMatrix(x3, J);
    for (std::size_t x = 0; x < x3; ++x) {
        const FormalLWord& w = P.d4.at(x);
        auto eval = [&](const std::map<std::string, Integer>& v) { return evaluate_L(P.cylinder, w, v); };
        Integer c0 = eval(base);
        if (c0 != 0) throw ValidationError("d4 word does not vanish on the constant homotopy");
        // psi3 - phi3 must enter with coefficient one
        for (std::size_t y = 0; y < x3; ++y) {
            auto v = base;
            v[P.end_name(M.three_cells[y].name, 1)] = 1;
            v[P.end_name(M.three_cells[y].name, 0)] = 1;
            if (eval(v) != 0) throw ValidationError("d4 word is not translation invariant");
            v[P.end_name(M.three_cells[y].name, 0)] = 0;
            if (eval(v) != (x == y ? 1 : 0)) throw ValidationError("d4 word has the wrong end coefficients");
        }
        std::vector<Integer> lin(J);
        for (std::size_t j = 0; j < J; ++j) {
            auto v = base;
            v[S.unknowns[j]] = 1;
            lin[j] = eval(v);
            S.coefficients(x, j) = lin[j];
        }
        for (std::size_t j = 0; j < J; ++j)
            for (std::size_t k = j; k < J; ++k) {
                auto v = base;
                v[S.unknowns[j]] += 1;
                v[S.unknowns[k]] += 1;
                if (eval(v) != lin[j] + lin[k]) throw ValidationError("d4 word is not linear in the I-cells");
            }
    }
    return S;
}

inline bool s2_homotopic(const CylinderPreset& P, const IntVector& phi2, const IntVector& phi3, const IntVector& psi3) {
    S2HomotopySystem S = s2_homotopy_system(P, phi2);
    IntVector rhs(phi3.size());
    for (std::size_t i = 0; i < rhs.size(); ++i) rhs[i] = phi3[i] - psi3[i];
    return solve(S.coefficients, rhs).has_value();
}

struct S2Sector {
    IntVector phi2;
    AbelianGroup group;
    std::vector<IntVector> representatives;  // phi3 values, listed when the group is finite and small
};

inline S2Sector classify_s2_sector(const CylinderPreset& P, const IntVector& phi2, std::size_t list_limit = 64) {
    S2HomotopySystem S = s2_homotopy_system(P, phi2);
    S2Sector out;
    out.phi2 = phi2;
    LatticeQuotient Q(AffineLattice{IntVector(S.coefficients.rows()), IntMatrix::identity(S.coefficients.rows())},
                      S.coefficients);
    out.group = Q.group();
    if (out.group.free_rank() == 0 && out.group.order() <= list_limit)
        for (const auto& r : Q.representatives()) out.representatives.push_back(r);
    return out;
}

// All sectors with |phi2| <= bound on every 2-cell.
inline std::vector<S2Sector> classify_s2(const CWComplex& M, long long bound) {
    auto P = presets::find(M);
    if (!P) throw UnsupportedError("no cylinder data for this complex; supported: s1_x_s2, torus3");
    const std::size_t m = M.two_cells.size();
    std::vector<S2Sector> out;
    IntVector q(m, Integer(-bound));
    for (;;) {
        if (is_xsq_hom(M, {q, IntVector(M.three_cells.size())})) out.push_back(classify_s2_sector(*P, q));
        std::size_t i = 0;
        while (i < m && (q[i] += 1) > bound) q[i++] = -bound;
        if (i == m) break;
    }
    return out;
}

// Cohomology data for the cup product count of maps into S^2.
struct CupData {
    std::size_t h1_rank = 0;
    IntVector h2, h3;                    // orders of cyclic factors; 0 for Z
    std::vector<IntMatrix> cup;          // cup[i](k, j): coefficient of the k-th H^3 generator in e1_i cup e2_j
};

inline std::vector<std::string> validate(const CupData& D) {
    std::vector<std::string> v;
    if (D.cup.size() != D.h1_rank) v.push_back("expected one cup matrix per H^1 generator");
    IntMatrix rel = IntMatrix::diagonal(D.h3);
    for (std::size_t i = 0; i < D.cup.size(); ++i) {
        const IntMatrix& c = D.cup[i];
        if (c.rows() != D.h3.size() || c.cols() != D.h2.size()) {
            v.push_back("cup matrix " + std::to_string(i) + " must be " + std::to_string(D.h3.size()) + " x " +
                        std::to_string(D.h2.size()));
            continue;
        }
        // a torsion class of H^2 must cup into the relations of H^3
        for (std::size_t j = 0; j < D.h2.size(); ++j) {
            if (D.h2[j] == 0) continue;
            IntVector col = c.column(j);
            for (auto& x : col) x *= D.h2[j];
            if (!solve(rel, col)) v.push_back("cup with H^2 generator " + std::to_string(j) + " ignores its order");
        }
    }
    return v;
}

// H^3 / (2 alpha cup H^1)
inline AbelianGroup pontrjagin_classify(const CupData& D, const IntVector& alpha) {
    if (auto v = validate(D); !v.empty()) throw ValidationError("cup table: " + v.front());
    if (alpha.size() != D.h2.size()) throw ValidationError("alpha has the wrong number of coordinates");
    IntMatrix gens = IntMatrix::diagonal(D.h3);
    std::vector<IntVector> cols = gens.columns();
    for (std::size_t i = 0; i < D.h1_rank; ++i) {
        IntVector c = D.cup[i] * alpha;
        for (auto& x : c) x *= 2;
        cols.push_back(c);
    }
    return quotient(D.h3.size(), IntMatrix::from_columns(cols, D.h3.size()));
}

namespace presets {

inline CupData cup_torus3() {
    CupData D;
    D.h1_rank = 3;
    D.h2 = int_vector({0, 0, 0});
    D.h3 = int_vector({0});
    for (std::size_t i = 0; i < 3; ++i) {
        IntMatrix c(1, 3);
        c(0, i) = 1;
        D.cup.push_back(c);
    }
    return D;
}

inline CupData cup_s1_x_s2() {
    CupData D;
    D.h1_rank = 1;
    D.h2 = int_vector({0});
    D.h3 = int_vector({0});
    D.cup = {IntMatrix{{1}}};
    return D;
}

inline std::optional<CupData> find_cup(const CWComplex& M) {
    if (M == catalog::torus3()) return cup_torus3();
    if (M == catalog::s1_x_s2()) return cup_s1_x_s2();
    return std::nullopt;
}

}  // namespace presets

inline nlohmann::ordered_json to_json(const CupData& D) {
    using oj = nlohmann::ordered_json;
    auto ints = [](const IntVector& v) {
        oj a = oj::array();
        for (const auto& x : v) a.push_back(to_ll(x));
        return a;
    };
    oj cup = oj::array();
    for (const auto& c : D.cup) {
        oj rows = oj::array();
        for (std::size_t k = 0; k < c.rows(); ++k) {
            IntVector r;
            for (std::size_t j = 0; j < c.cols(); ++j) r.push_back(c(k, j));
            rows.push_back(ints(r));
        }
        cup.push_back(rows);
    }
    return oj{{"h1_rank", D.h1_rank}, {"h2", ints(D.h2)}, {"h3", ints(D.h3)}, {"cup", cup}};
}

inline CupData load_cup_text(std::string_view text) {
    using detail::json;
    json j = detail::parse_json(text);
    detail::only_keys(j, {"h1_rank", "h2", "h3", "cup"}, "cup table");
    auto ints = [](const json& a, const std::string& where) {
        if (!a.is_array()) throw ParseError(where + ": expected an array");
        IntVector v;
        for (const auto& x : a) {
            if (!x.is_number_integer()) throw ParseError(where + ": expected integers");
            v.emplace_back(x.get<long long>());
        }
        return v;
    };
    CupData D;
    const json& r = detail::need(j, "h1_rank", "cup table");
    if (!r.is_number_unsigned()) throw ParseError("h1_rank: expected a nonnegative integer");
    D.h1_rank = r.get<std::size_t>();
    D.h2 = ints(detail::need(j, "h2", "cup table"), "h2");
    D.h3 = ints(detail::need(j, "h3", "cup table"), "h3");
    for (const auto& x : D.h2)
        if (x < 0) throw ValidationError("h2: orders must be nonnegative");
    for (const auto& x : D.h3)
        if (x < 0) throw ValidationError("h3: orders must be nonnegative");
    const json& cup = detail::need(j, "cup", "cup table");
    if (!cup.is_array()) throw ParseError("cup: expected an array");
    for (std::size_t i = 0; i < cup.size(); ++i) {
        std::string w = "cup[" + std::to_string(i) + "]";
        if (!cup[i].is_array()) throw ParseError(w + ": expected an array of rows");
        IntMatrix c(cup[i].size(), D.h2.size());
        for (std::size_t k = 0; k < cup[i].size(); ++k) {
            IntVector row = ints(cup[i][k], w);
            if (row.size() != D.h2.size()) throw ValidationError(w + ": rows must have one entry per H^2 generator");
            for (std::size_t jj = 0; jj < row.size(); ++jj) c(k, jj) = row[jj];
        }
        D.cup.push_back(c);
    }
    if (auto v = validate(D); !v.empty()) throw ValidationError("cup table: " + v.front());
    return D;
}

inline CupData load_cup_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return load_cup_text(ss.str());
}

// Structural description of the free crossed square of a complex.
inline nlohmann::ordered_json crossed_square_report(const CWComplex& M) {
    using oj = nlohmann::ordered_json;
    for (const auto& x : M.three_cells) {
        TriadCheck c = validate_triad(M, x.attach);
        if (!c.ok) throw ValidationError("3-cell " + x.name + ": " + c.message);
    }
    oj out = oj::object();
    out["cells"] = oj::array({M.alphabet->size(), M.two_cells.size(), M.three_cells.size()});
    out["F"] = "free group on {" + [&] {
        std::string s;
        for (const auto& n : M.alphabet->names()) s += (s.empty() ? "" : ", ") + n;
        return s;
    }() + "}";

    oj pre = oj::array();
    for (const auto& t : M.two_cells) pre.push_back(oj{{"cell", t.name}, {"boundary", t.attach.empty() ? "1" : t.attach.to_string()}});
    out["H"] = oj{{"description", "free pre-crossed module on F x Sigma_2, (f, t) -> f sigma_2(t) f^-1"}, {"generators", pre}};
    out["G"] = M.alphabet->size() ? "F semidirect H, with H-bar embedded by h -> (d h, h^-1)"
                                   : "H, since F is trivial; H-bar = H";

    bool trivial_boundary = std::all_of(M.two_cells.begin(), M.two_cells.end(), [](const TwoCell& t) { return t.attach.empty(); });
    out["H_bar_equals_H"] = trivial_boundary;

    oj three = oj::array();
    for (const auto& x : M.three_cells) {
        std::string word;
        for (const auto& l : x.attach) {
            if (!word.empty()) word += " ";
            std::string conj = l.f.empty() ? "" : l.f.to_string();
            if (!l.h.empty()) conj += (conj.empty() ? "" : ", ") + to_string(M, l.h);
            if (!conj.empty()) word += "^{" + conj + "}";
            word += M.two_cells.at(l.cell).name;
            if (l.sign < 0) word += "^-1";
        }
        TriadCheck c = validate_triad(M, x.attach);
        three.push_back(oj{{"cell", x.name},
                           {"sigma_3", word},
                           {"in_H", "every letter is a conjugate of a generator of H"},
                           {"in_H_bar", c.ok},
                           {"boundary_in_F", c.f_component.empty() ? "1" : c.f_component.to_string()}});
    }
    out["three_cells"] = three;

    oj L = oj::object();
    L["description"] = "(H (x) H-bar) o C, C free on the 3-cells";
    L["generators"] = oj::array({"h (x) k-bar for h, k in H", "^{(f, h)} x for x in Sigma_3"});
    L["relations"] = oj::array({"i(d c (x) h-bar) = j(c) j(^{h-bar} c^-1)", "i(h (x) d c) = j(^h c) j(c^-1)"});
    L["maps"] = oj::array({"eta(h (x) h-bar) = h ^{h-bar}h^-1", "kappa(h (x) h-bar) = ^{h}h-bar h-bar^-1",
                           "eta = kappa = d on C", "[h, h-bar] = i(h (x) h-bar)"});
    out["L"] = L;

    std::string pres = "<";
    for (std::size_t a = 0; a < M.alphabet->size(); ++a) pres += (a ? ", " : "") + M.alphabet->names()[a];
    pres += " |";
    for (std::size_t t = 0; t < M.two_cells.size(); ++t)
        pres += (t ? ", " : " ") + (M.two_cells[t].attach.empty() ? std::string("1") : M.two_cells[t].attach.to_string());
    pres += ">";
    IntMatrix rel(M.alphabet->size(), M.two_cells.size());
    for (std::size_t t = 0; t < M.two_cells.size(); ++t) {
        auto e = M.two_cells[t].attach.exponent_sums();
        for (std::size_t a = 0; a < M.alphabet->size(); ++a) rel(a, t) = e[a];
    }
    out["pi1"] = oj{{"presentation", pres}, {"abelianization", quotient(M.alphabet->size(), rel).to_string()}};
    return out;
}

}  // namespace hsec
