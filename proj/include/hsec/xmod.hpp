#pragma once

#include "hsec/complexes.hpp"
#include "hsec/finite_group.hpp"
#include "hsec/zlinalg.hpp"

#include <json.hpp>

#include <array>
#include <fstream>
#include <functional>
#include <map>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace hsec {

// Crossed module d: Z^r -> G with G = Z^free x (torsion cyclics) and G acting by integer matrices.
struct ModuleXMod {
    std::string name;
    std::size_t free_rank = 0;
    IntVector torsion;
    std::size_t rank = 0;
    std::vector<IntMatrix> action;  // one r x r matrix per generator of G
    IntMatrix boundary;             // k x r, column j = d(e_j)

    std::size_t k() const { return free_rank + torsion.size(); }

    // diagonal relation matrix of G in its chosen generators
    IntMatrix relations() const {
        IntMatrix T(k(), k());
        for (std::size_t i = 0; i < torsion.size(); ++i) T(free_rank + i, free_rank + i) = torsion[i];
        return T;
    }

    AbelianGroup G() const {
        IntVector o(free_rank, 0);
        o.insert(o.end(), torsion.begin(), torsion.end());
        return AbelianGroup::from_orders(o);
    }

    AbelianGroup pi1() const { return quotient(k(), IntMatrix::hconcat(relations(), boundary)); }

    // basis (columns) of ker d inside Z^r
    IntMatrix pi2_basis() const {
        IntMatrix M = IntMatrix::hconcat(boundary, relations());
        std::vector<IntVector> ker = kernel_basis(M);
        IntMatrix P(rank, ker.size());
        for (std::size_t j = 0; j < ker.size(); ++j)
            for (std::size_t i = 0; i < rank; ++i) P(i, j) = ker[j][i];
        return column_span_basis(P);
    }

    AbelianGroup pi2() const { return AbelianGroup::free(pi2_basis().cols()); }

    IntMatrix inverse_action(std::size_t i) const {
        SmithDecomposition s = smith_normal_form(action.at(i));
        if (s.rank != rank) throw ValidationError("action matrix is singular");
        for (std::size_t j = 0; j < rank; ++j)
            if (s.S(j, j) != 1) throw ValidationError("action matrix is not invertible over Z");
        return s.V_inv * s.U_inv;
    }

    // rho(g) for g in G coordinates
    IntMatrix act(const IntVector& g) const {
        IntMatrix out = IntMatrix::identity(rank);
        for (std::size_t i = 0; i < k(); ++i) {
            Integer e = g.at(i);
            if (i >= free_rank) e = floor_mod(e, torsion[i - free_rank]);
            if (e == 0) continue;
            IntMatrix base = e < 0 ? inverse_action(i) : action[i];
            for (Integer c = 0; c < abs(e); ++c) out = out * base;
        }
        return out;
    }

    // reduce G coordinates (torsion coordinates mod their orders)
    IntVector normalize(IntVector g) const {
        for (std::size_t i = 0; i < torsion.size(); ++i) g[free_rank + i] = floor_mod(g[free_rank + i], torsion[i]);
        return g;
    }
};

inline std::vector<std::string> validate(const ModuleXMod& X) {
    std::vector<std::string> v;
    const std::size_t k = X.k(), r = X.rank;
    for (const Integer& t : X.torsion)
        if (t < 2) v.push_back("torsion order " + t.str() + " is below 2");
    if (X.action.size() != k) v.push_back("expected " + std::to_string(k) + " action matrices");
    if (X.boundary.rows() != k || X.boundary.cols() != r) v.push_back("boundary must be " + std::to_string(k) + " x " + std::to_string(r));
    for (const auto& m : X.action)
        if (m.rows() != r || m.cols() != r) v.push_back("action matrices must be " + std::to_string(r) + " x " + std::to_string(r));
    if (!v.empty()) return v;

    bool invertible = true;
    for (std::size_t i = 0; i < k; ++i)
        if (abs(determinant(X.action[i])) != 1) {
            v.push_back("action of generator " + std::to_string(i) + " is not invertible over Z");
            invertible = false;
        }
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = i + 1; j < k; ++j)
            if (X.action[i] * X.action[j] != X.action[j] * X.action[i])
                v.push_back("actions of generators " + std::to_string(i) + " and " + std::to_string(j) + " do not commute");
    for (std::size_t i = 0; i < X.torsion.size(); ++i) {
        IntMatrix p = IntMatrix::identity(r);
        for (Integer c = 0; c < X.torsion[i]; ++c) p = p * X.action[X.free_rank + i];
        if (p != IntMatrix::identity(r))
            v.push_back("action of torsion generator " + std::to_string(X.free_rank + i) + " does not respect its order");
    }
    // condition 1: d(g h) = d(h)
    for (std::size_t i = 0; i < k; ++i) {
        IntMatrix diff = X.boundary * X.action[i] - X.boundary;
        bool ok = true;
        for (std::size_t a = 0; a < k && ok; ++a)
            for (std::size_t b = 0; b < r && ok; ++b) {
                Integer x = diff(a, b);
                if (a >= X.free_rank) x = floor_mod(x, X.torsion[a - X.free_rank]);
                ok = x == 0;
            }
        if (!ok) v.push_back("condition 1 fails: d o rho(g" + std::to_string(i) + ") != d");
    }
    // condition 2: rho(d h) acts trivially
    if (invertible)
        for (std::size_t j = 0; j < r; ++j)
            if (X.act(X.boundary.column(j)) != IntMatrix::identity(r))
                v.push_back("condition 2 fails: rho(d e" + std::to_string(j) + ") is not the identity");
    return v;
}

namespace targets {

inline ModuleXMod rp2() {
    ModuleXMod X;
    X.name = "rp2";
    X.free_rank = 1;
    X.rank = 2;
    X.action = {IntMatrix{{0, 1}, {1, 0}}};
    X.boundary = IntMatrix{{2, 2}};
    return X;
}

inline ModuleXMod sphere2() {
    ModuleXMod X;
    X.name = "sphere2";
    X.rank = 1;
    X.boundary = IntMatrix(0, 1);
    return X;
}

inline ModuleXMod trivial(std::size_t r, std::size_t k) {
    ModuleXMod X;
    X.name = "trivial:" + std::to_string(r) + "," + std::to_string(k);
    X.free_rank = k;
    X.rank = r;
    X.action.assign(k, IntMatrix::identity(r));
    X.boundary = IntMatrix(k, r);
    return X;
}

inline ModuleXMod get(std::string_view spec) {
    if (spec == "rp2") return rp2();
    if (spec == "sphere2") return sphere2();
    if (spec.substr(0, 8) == "trivial:") {
        std::string rest(spec.substr(8));
        auto comma = rest.find(',');
        try {
            if (comma == std::string::npos) return trivial(std::stoul(rest), 0);
            return trivial(std::stoul(rest.substr(0, comma)), std::stoul(rest.substr(comma + 1)));
        } catch (const std::exception&) {
            throw ValidationError("invalid parameters in '" + std::string(spec) + "'");
        }
    }
    throw ValidationError("unknown target '" + std::string(spec) + "'");
}

}  // namespace targets

inline nlohmann::ordered_json to_json(const ModuleXMod& X) {
    using oj = nlohmann::ordered_json;
    auto ints = [](const IntVector& v) {
        oj a = oj::array();
        for (const auto& x : v) a.push_back(to_ll(x));
        return a;
    };
    oj out = oj::object();
    out["G"] = oj{{"free_rank", X.free_rank}, {"torsion", ints(X.torsion)}};
    out["rank"] = X.rank;
    oj act = oj::array();
    for (const auto& m : X.action) {
        oj rows = oj::array();
        for (std::size_t i = 0; i < m.rows(); ++i) rows.push_back(ints(m.row(i)));
        act.push_back(rows);
    }
    out["action"] = act;
    oj bd = oj::array();
    for (std::size_t j = 0; j < X.rank; ++j) bd.push_back(ints(X.boundary.column(j)));
    out["boundary"] = bd;
    return out;
}

inline ModuleXMod load_xmod_text(std::string_view text, std::string name = "file") {
    using detail::json;
    json j = detail::parse_json(text);
    detail::only_keys(j, {"G", "rank", "action", "boundary"}, "target");
    const json& G = detail::need(j, "G", "target");
    detail::only_keys(G, {"free_rank", "torsion"}, "G");
    auto nat = [](const json& x, const std::string& where) -> long long {
        if (!x.is_number_integer() || x.get<long long>() < 0) throw ParseError(where + ": expected a nonnegative integer");
        return x.get<long long>();
    };
    auto integer = [](const json& x, const std::string& where) -> Integer {
        if (!x.is_number_integer()) throw ParseError(where + ": expected an integer");
        return Integer(x.get<long long>());
    };
    ModuleXMod X;
    X.name = std::move(name);
    X.free_rank = G.contains("free_rank") ? nat(G.at("free_rank"), "G.free_rank") : 0;
    if (G.contains("torsion")) {
        if (!G.at("torsion").is_array()) throw ParseError("G.torsion: expected an array");
        for (const auto& t : G.at("torsion")) X.torsion.push_back(integer(t, "G.torsion"));
    }
    X.rank = nat(detail::need(j, "rank", "target"), "rank");
    const std::size_t k = X.k(), r = X.rank;
    const json& act = detail::need(j, "action", "target");
    if (!act.is_array() || act.size() != k)
        throw ParseError("action: expected " + std::to_string(k) + " matrices");
    for (std::size_t g = 0; g < k; ++g) {
        std::string w = "action[" + std::to_string(g) + "]";
        if (!act[g].is_array() || act[g].size() != r) throw ParseError(w + ": expected " + std::to_string(r) + " rows");
        IntMatrix m(r, r);
        for (std::size_t a = 0; a < r; ++a) {
            if (!act[g][a].is_array() || act[g][a].size() != r) throw ParseError(w + ": rows must have length " + std::to_string(r));
            for (std::size_t b = 0; b < r; ++b) m(a, b) = integer(act[g][a][b], w);
        }
        X.action.push_back(m);
    }
    const json& bd = detail::need(j, "boundary", "target");
    if (!bd.is_array() || bd.size() != r) throw ParseError("boundary: expected " + std::to_string(r) + " columns");
    X.boundary = IntMatrix(k, r);
    for (std::size_t c = 0; c < r; ++c) {
        if (!bd[c].is_array() || bd[c].size() != k) throw ParseError("boundary: columns must have length " + std::to_string(k));
        for (std::size_t a = 0; a < k; ++a) X.boundary(a, c) = integer(bd[c][a], "boundary");
    }
    return X;
}

inline ModuleXMod load_xmod_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return load_xmod_text(ss.str(), path);
}

// The finite group pi_1 X = coker(T | d) with explicit coordinates.
class Pi1X {
public:
    explicit Pi1X(const ModuleXMod& X) : k_(X.k()) {
        snf_ = smith_normal_form(IntMatrix::hconcat(X.relations(), X.boundary));
        for (std::size_t i = 0; i < k_; ++i) {
            Integer s = i < snf_.rank ? snf_.S(i, i) : Integer(0);
            if (s == 0) throw UnsupportedError("target has infinite fundamental group");
            if (s != 1) {
                axes_.push_back(i);
                orders_.push_back(s);
            }
        }
    }

    const IntVector& orders() const { return orders_; }
    std::size_t coordinates() const { return axes_.size(); }

    std::size_t size() const {
        std::size_t n = 1;
        for (const auto& o : orders_) n *= static_cast<std::size_t>(o);
        return n;
    }

    IntVector label(const IntVector& g) const {
        IntVector full = snf_.U_inv * g, out;
        for (std::size_t a = 0; a < axes_.size(); ++a) out.push_back(floor_mod(full[axes_[a]], orders_[a]));
        return out;
    }

    IntVector lift(const IntVector& label) const {
        IntVector q(k_);
        for (std::size_t a = 0; a < axes_.size(); ++a) q[axes_[a]] = label[a];
        return snf_.U * q;
    }

    // all labels, first coordinate varying fastest
    std::vector<IntVector> elements() const {
        std::vector<IntVector> out;
        IntVector x(axes_.size());
        for (;;) {
            out.push_back(x);
            std::size_t a = 0;
            while (a < x.size() && (x[a] += 1) == orders_[a]) x[a++] = 0;
            if (a == x.size()) break;
        }
        return out;
    }

    std::size_t index(const IntVector& label) const {
        std::size_t idx = 0, mult = 1;
        for (std::size_t a = 0; a < axes_.size(); ++a) {
            idx += static_cast<std::size_t>(label[a]) * mult;
            mult *= static_cast<std::size_t>(orders_[a]);
        }
        return idx;
    }

    IntVector add(const IntVector& x, const IntVector& y) const {
        IntVector z(x.size());
        for (std::size_t a = 0; a < z.size(); ++a) z[a] = floor_mod(x[a] + y[a], orders_[a]);
        return z;
    }

private:
    std::size_t k_;
    SmithDecomposition snf_;
    std::vector<std::size_t> axes_;
    IntVector orders_;
};

// Abelianized image in Z[pi_1 M]^{Sigma_2}; one group ring element per 2-cell.
using CellVector = std::vector<GroupRingElement>;
using Pi1Labeling = std::function<Word(const Word&)>;

inline CellVector derivation_image(const CWComplex& M, const HWord& w, const Pi1Labeling& proj) {
    CellVector out(M.two_cells.size(), GroupRingElement(M.alphabet));
    for (const HLetter& l : w) out.at(l.cell).add(proj(l.f), l.sign);
    return out;
}

inline CellVector derivation_image(const CWComplex& M, const TriadWord& w, const Pi1Labeling& proj) {
    CellVector out(M.two_cells.size(), GroupRingElement(M.alphabet));
    for (const TriadLetter& l : w) out.at(l.cell).add(proj(free_pre_crossed_boundary(M, l.h) * l.f), l.sign);
    return out;
}

inline Pi1Labeling abelian_labeling(const CWComplex& M) {
    auto lab = std::make_shared<AbelianLabeling>(M);
    return [lab](const Word& w) { return lab->canonical(w); };
}

// ---------------------------------------------------------------------------
// finite crossed modules

struct FiniteCrossedModule {
    std::string name;
    FiniteGroup H, G;
    std::vector<std::size_t> boundary;             // H -> G
    std::vector<std::vector<std::size_t>> action;  // action[g][h] = g acting on h

    std::size_t act(std::size_t g, std::size_t h) const { return action[g][h]; }
    bool operator==(const FiniteCrossedModule& o) const {
        return H == o.H && G == o.G && boundary == o.boundary && action == o.action;
    }
};

inline std::vector<std::string> validate(const FiniteCrossedModule& X) {
    std::vector<std::string> v;
    const FiniteGroup &H = X.H, &G = X.G;
    if (X.boundary.size() != H.order() || X.action.size() != G.order()) return {"table sizes do not match the groups"};
    for (const auto& row : X.action)
        if (row.size() != H.order()) return {"action table has wrong width"};
    for (std::size_t h : X.boundary)
        if (h >= G.order()) return {"boundary value out of range"};
    if (!is_homomorphism(H, G, X.boundary)) v.push_back("boundary is not a homomorphism");
    for (std::size_t g = 0; g < G.order(); ++g) {
        std::vector<bool> hit(H.order(), false);
        bool bij = true;
        for (std::size_t x : X.action[g]) {
            if (x >= H.order() || hit[x]) bij = false;
            else hit[x] = true;
        }
        if (!bij || !is_homomorphism(H, H, X.action[g])) {
            v.push_back("element " + std::to_string(g) + " does not act by an automorphism");
            return v;
        }
    }
    for (std::size_t g = 0; g < G.order(); ++g)
        for (std::size_t g2 = 0; g2 < G.order(); ++g2)
            for (std::size_t h = 0; h < H.order(); ++h)
                if (X.act(G.mul(g, g2), h) != X.act(g, X.act(g2, h))) {
                    v.push_back("action is not a homomorphism G -> Aut(H)");
                    goto axioms;
                }
axioms:
    for (std::size_t g = 0; g < G.order(); ++g)
        for (std::size_t h = 0; h < H.order(); ++h)
            if (X.boundary[X.act(g, h)] != G.conj(g, X.boundary[h])) {
                v.push_back("condition 1 fails at g=" + std::to_string(g) + ", h=" + std::to_string(h));
                goto second;
            }
second:
    for (std::size_t h = 0; h < H.order(); ++h)
        for (std::size_t h2 = 0; h2 < H.order(); ++h2)
            if (X.act(X.boundary[h], h2) != H.conj(h, h2)) {
                v.push_back("condition 2 fails at h=" + std::to_string(h) + ", h'=" + std::to_string(h2));
                return v;
            }
    return v;
}

namespace finite_xmods {

inline std::vector<std::vector<std::size_t>> conjugation_action(const FiniteGroup& G, const FiniteGroup& H,
                                                                const std::vector<std::size_t>& inclusion) {
    // G acts on a normal subgroup H by conjugation, located through the inclusion map
    std::map<std::size_t, std::size_t> back;
    for (std::size_t h = 0; h < H.order(); ++h) back[inclusion[h]] = h;
    std::vector<std::vector<std::size_t>> act(G.order(), std::vector<std::size_t>(H.order()));
    for (std::size_t g = 0; g < G.order(); ++g)
        for (std::size_t h = 0; h < H.order(); ++h) {
            auto it = back.find(G.conj(g, inclusion[h]));
            if (it == back.end()) throw ValidationError("subgroup is not normal");
            act[g][h] = it->second;
        }
    return act;
}

inline FiniteCrossedModule identity(const FiniteGroup& G) {
    std::vector<std::size_t> id(G.order());
    std::iota(id.begin(), id.end(), 0);
    return {"id:" + G.name(), G, G, id, conjugation_action(G, G, id)};
}

// boundary trivial, trivial action (a crossed module only for abelian H)
inline FiniteCrossedModule trivial(const FiniteGroup& H, const FiniteGroup& G) {
    std::vector<std::size_t> id(H.order());
    std::iota(id.begin(), id.end(), 0);
    return {"zero:" + H.name() + "->" + G.name(), H, G, std::vector<std::size_t>(H.order(), 0),
            std::vector<std::vector<std::size_t>>(G.order(), id)};
}

// Z_n -> Z_m reduction mod m, trivial action
inline FiniteCrossedModule reduction(std::size_t n, std::size_t m) {
    if (m == 0 || n % m) throw ValidationError("reduction needs m | n");
    FiniteGroup H = FiniteGroup::cyclic(n), G = FiniteGroup::cyclic(m);
    std::vector<std::size_t> d(n), id(n);
    for (std::size_t x = 0; x < n; ++x) d[x] = x % m;
    std::iota(id.begin(), id.end(), 0);
    return {"mod:" + std::to_string(n) + "->" + std::to_string(m), H, G, d,
            std::vector<std::vector<std::size_t>>(m, id)};
}

// H -> Aut(H) by inner automorphisms
inline FiniteCrossedModule automorphism(const FiniteGroup& H) {
    std::vector<Perm> elems;
    FiniteGroup A = FiniteGroup::from_permutations("Aut(" + H.name() + ")", automorphisms(H), &elems);
    std::map<Perm, std::size_t> index;
    for (std::size_t i = 0; i < elems.size(); ++i) index[elems[i]] = i;
    std::vector<std::size_t> d(H.order());
    for (std::size_t h = 0; h < H.order(); ++h) {
        Perm p(H.order());
        for (std::size_t x = 0; x < H.order(); ++x) p[x] = H.conj(h, x);
        d[h] = index.at(p);
    }
    return {"aut:" + H.name(), H, A, d, elems};
}

}  // namespace finite_xmods

// Every crossed module structure on groups H and G.
inline std::vector<FiniteCrossedModule> enumerate_crossed_modules(const FiniteGroup& H, const FiniteGroup& G) {
    std::vector<Perm> auts;
    FiniteGroup A = FiniteGroup::from_permutations("Aut", automorphisms(H), &auts);
    std::vector<std::vector<std::vector<std::size_t>>> actions;
    for (const auto& f : homomorphisms(G, A)) {
        std::vector<std::vector<std::size_t>> act(G.order());
        for (std::size_t g = 0; g < G.order(); ++g) act[g] = auts[f[g]];
        actions.push_back(std::move(act));
    }
    // conjugation in H, needed by condition 2
    std::vector<std::vector<std::size_t>> inner(H.order(), std::vector<std::size_t>(H.order()));
    for (std::size_t h = 0; h < H.order(); ++h)
        for (std::size_t x = 0; x < H.order(); ++x) inner[h][x] = H.conj(h, x);

    std::vector<FiniteCrossedModule> out;
    for (const auto& d : homomorphisms(H, G)) {
        for (const auto& act : actions) {
            bool ok = true;
            for (std::size_t h = 0; h < H.order() && ok; ++h) ok = act[d[h]] == inner[h];
            for (std::size_t g = 0; g < G.order() && ok; ++g)
                for (std::size_t h = 0; h < H.order() && ok; ++h) ok = d[act[g][h]] == G.conj(g, d[h]);
            if (ok) out.push_back({H.name() + "->" + G.name() + "#" + std::to_string(out.size()), H, G, d, act});
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Hoang data

struct HoangData {
    FiniteGroup pi1;
    std::vector<std::size_t> lift;          // pi1 element -> chosen G element
    std::vector<std::size_t> coset;         // G element -> pi1 element
    std::vector<std::size_t> pi2_elements;  // elements of ker d, as H elements
    AbelianGroup pi2;
    std::vector<std::vector<std::size_t>> alpha;  // alpha[a][i]: index of the action of a on pi2 element i
    std::vector<std::size_t> beta;                // flat table of pi2 indices, (a n + b) n + c
    std::vector<std::size_t> pi2_mul_table;       // flat table of pi2 products

    std::size_t n() const { return pi1.order(); }
    std::size_t beta_at(std::size_t a, std::size_t b, std::size_t c) const { return beta[(a * n() + b) * n() + c]; }
    std::size_t pmul(std::size_t x, std::size_t y) const { return pi2_mul_table[x * pi2_elements.size() + y]; }
    std::size_t pinv(std::size_t x) const {
        for (std::size_t y = 0; y < pi2_elements.size(); ++y)
            if (pmul(x, y) == 0) return y;
        return 0;
    }
};

// invariant factors of a finite abelian group from counts of elements of p-power order
inline AbelianGroup abelian_structure(const std::vector<std::size_t>& elems,
                                      const std::function<std::size_t(std::size_t)>& order_of) {
    const std::size_t N = elems.size();
    IntVector orders;
    std::size_t m = N;
    for (std::size_t p = 2; p <= m; ++p) {
        if (m % p) continue;
        std::size_t total = 0;
        while (m % p == 0) {
            m /= p;
            ++total;
        }
        // c[k] = log_p #{x : x^(p^k) = 1}; c[k] - c[k-1] factors have exponent >= k
        std::vector<std::size_t> c{0};
        for (std::size_t pk = p; c.back() < total; pk *= p) {
            std::size_t count = 0;
            for (std::size_t x : elems)
                if (pk % order_of(x) == 0) ++count;
            std::size_t lg = 0;
            while (count % p == 0 && count > 1) {
                count /= p;
                ++lg;
            }
            c.push_back(lg);
        }
        c.push_back(c.back());
        Integer pe = 1;
        for (std::size_t e = 1; e + 1 < c.size(); ++e) {
            pe *= p;
            std::size_t here = c[e] - c[e - 1], next = c[e + 1] - c[e];
            for (std::size_t i = next; i < here; ++i) orders.push_back(pe);
        }
    }
    return AbelianGroup::from_orders(orders);
}

inline HoangData hoang_data(const FiniteCrossedModule& X) {
    const FiniteGroup &H = X.H, &G = X.G;
    HoangData D;
    // cosets of the normal subgroup d(H), labelled in order of first appearance
    std::vector<bool> in_image(G.order(), false);
    for (std::size_t h = 0; h < H.order(); ++h) in_image[X.boundary[h]] = true;
    const std::size_t none = G.order();
    D.coset.assign(G.order(), none);
    for (std::size_t g = 0; g < G.order(); ++g) {
        if (D.coset[g] != none) continue;
        std::size_t id = D.lift.size();
        D.lift.push_back(g);
        for (std::size_t n = 0; n < G.order(); ++n)
            if (in_image[n]) D.coset[G.mul(g, n)] = id;
    }
    const std::size_t n = D.lift.size();
    std::vector<std::vector<std::size_t>> t(n, std::vector<std::size_t>(n));
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b) t[a][b] = D.coset[G.mul(D.lift[a], D.lift[b])];
    D.pi1 = FiniteGroup("pi1", t);

    for (std::size_t h = 0; h < H.order(); ++h)
        if (X.boundary[h] == 0) D.pi2_elements.push_back(h);
    const std::size_t m = D.pi2_elements.size();
    std::map<std::size_t, std::size_t> pidx;
    for (std::size_t i = 0; i < m; ++i) pidx[D.pi2_elements[i]] = i;
    D.pi2_mul_table.resize(m * m);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j) D.pi2_mul_table[i * m + j] = pidx.at(H.mul(D.pi2_elements[i], D.pi2_elements[j]));
    D.pi2 = abelian_structure(D.pi2_elements, [&](std::size_t h) { return H.element_order(h); });

    D.alpha.assign(n, std::vector<std::size_t>(m));
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t i = 0; i < m; ++i) D.alpha[a][i] = pidx.at(X.act(D.lift[a], D.pi2_elements[i]));

    // minimal preimage under d of each element of the image
    std::vector<std::size_t> pre(G.order(), H.order());
    for (std::size_t h = H.order(); h-- > 0;) pre[X.boundary[h]] = h;
    std::vector<std::size_t> wt(n * n);
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b) {
            std::size_t ab = t[a][b];
            std::size_t omega = G.mul(G.mul(D.lift[a], D.lift[b]), G.inv(D.lift[ab]));
            wt[a * n + b] = pre.at(omega);
        }
    D.beta.resize(n * n * n);
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b)
            for (std::size_t c = 0; c < n; ++c) {
                std::size_t ab = t[a][b], bc = t[b][c];
                std::size_t x = X.act(D.lift[a], wt[b * n + c]);
                x = H.mul(x, wt[a * n + bc]);
                x = H.mul(x, H.inv(wt[ab * n + c]));
                x = H.mul(x, H.inv(wt[a * n + b]));
                auto it = pidx.find(x);
                if (it == pidx.end()) throw Error("extension cocycle left ker d");
                D.beta[(a * n + b) * n + c] = it->second;
            }
    return D;
}

// coboundary of a 2-cochain gamma (flat n x n table of pi2 indices)
inline std::size_t coboundary_at(const HoangData& D, const std::vector<std::size_t>& gamma, std::size_t a,
                                 std::size_t b, std::size_t c) {
    const std::size_t n = D.n();
    const FiniteGroup& P = D.pi1;
    std::size_t x = D.alpha[a][gamma[b * n + c]];
    x = D.pmul(x, D.pinv(gamma[P.mul(a, b) * n + c]));
    x = D.pmul(x, gamma[a * n + P.mul(b, c)]);
    x = D.pmul(x, D.pinv(gamma[a * n + b]));
    return x;
}

// Number of quadruples where the twisted 3-cocycle condition fails.
inline std::size_t cocycle_defects(const HoangData& D) {
    const std::size_t n = D.n();
    const FiniteGroup& P = D.pi1;
    std::size_t bad = 0;
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b)
            for (std::size_t c = 0; c < n; ++c)
                for (std::size_t d = 0; d < n; ++d) {
                    std::size_t x = D.alpha[a][D.beta_at(b, c, d)];
                    x = D.pmul(x, D.pinv(D.beta_at(P.mul(a, b), c, d)));
                    x = D.pmul(x, D.beta_at(a, P.mul(b, c), d));
                    x = D.pmul(x, D.pinv(D.beta_at(a, b, P.mul(c, d))));
                    x = D.pmul(x, D.beta_at(a, b, c));
                    if (x != 0) ++bad;
                }
    return bad;
}

// A homomorphic section of G -> pi1, if one exists.
inline std::optional<std::vector<std::size_t>> homomorphic_section(const FiniteCrossedModule& X, const HoangData& D) {
    const FiniteGroup& P = D.pi1;
    std::vector<std::size_t> gens = P.generators();
    std::vector<std::size_t> images(gens.size());
    std::optional<std::vector<std::size_t>> found;
    std::function<void(std::size_t)> rec = [&](std::size_t k) {
        if (found) return;
        if (k == gens.size()) {
            auto f = extend_homomorphism(P, X.G, gens, images);
            if (!f) return;
            for (std::size_t a = 0; a < P.order(); ++a)
                if (D.coset[(*f)[a]] != a) return;
            found = f;
            return;
        }
        for (std::size_t g = 0; g < X.G.order(); ++g)
            if (D.coset[g] == gens[k]) {
                images[k] = g;
                rec(k + 1);
            }
    };
    rec(0);
    return found;
}

// Search for a normalized 2-cochain gamma with d gamma = beta.
// Returns nullopt if none exists or the node budget runs out (budget_hit set).
inline std::optional<std::vector<std::size_t>> coboundary_witness(const HoangData& D, std::size_t budget = 50'000'000,
                                                                  bool* budget_hit = nullptr) {
    const std::size_t n = D.n(), m = D.pi2_elements.size();
    const FiniteGroup& P = D.pi1;
    std::vector<std::size_t> gamma(n * n, 0);
    // variables: (a, b) with a, b != 1, in lexicographic order
    std::vector<std::size_t> vars;
    for (std::size_t a = 1; a < n; ++a)
        for (std::size_t b = 1; b < n; ++b) vars.push_back(a * n + b);
    std::vector<std::size_t> position(n * n, 0);
    for (std::size_t i = 0; i < vars.size(); ++i) position[vars[i]] = i + 1;
    // each equation is checked once its last variable is assigned
    std::vector<std::vector<std::array<std::size_t, 3>>> checks(vars.size() + 1);
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b)
            for (std::size_t c = 0; c < n; ++c) {
                std::size_t last = std::max({position[b * n + c], position[P.mul(a, b) * n + c],
                                             position[a * n + P.mul(b, c)], position[a * n + b]});
                checks[last].push_back({a, b, c});
            }
    for (const auto& e : checks[0])
        if (coboundary_at(D, gamma, e[0], e[1], e[2]) != D.beta_at(e[0], e[1], e[2])) return std::nullopt;
    std::size_t nodes = 0;
    bool exhausted = false;
    std::function<bool(std::size_t)> rec = [&](std::size_t i) -> bool {
        if (i == vars.size()) return true;
        for (std::size_t v = 0; v < m; ++v) {
            if (++nodes > budget) {
                exhausted = true;
                return false;
            }
            gamma[vars[i]] = v;
            bool ok = true;
            for (const auto& e : checks[i + 1])
                if (coboundary_at(D, gamma, e[0], e[1], e[2]) != D.beta_at(e[0], e[1], e[2])) {
                    ok = false;
                    break;
                }
            if (ok && rec(i + 1)) return true;
            if (exhausted) return false;
        }
        gamma[vars[i]] = 0;
        return false;
    };
    bool ok = rec(0);
    if (budget_hit) *budget_hit = exhausted;
    if (!ok) return std::nullopt;
    return gamma;
}

// ---------------------------------------------------------------------------
// strict 2-groups

struct Strict2Group {
    FiniteGroup G1;  // morphisms
    FiniteGroup G2;  // 2-morphisms, element (h, g) stored at h * |G1| + g
    std::vector<std::size_t> source, target, identity;
};

inline Strict2Group to_strict_2group(const FiniteCrossedModule& X) {
    const FiniteGroup &H = X.H, &G = X.G;
    const std::size_t nh = H.order(), ng = G.order();
    auto code = [&](std::size_t h, std::size_t g) { return h * ng + g; };
    std::vector<std::vector<std::size_t>> t(nh * ng, std::vector<std::size_t>(nh * ng));
    // (h, g)(h', g') = (g'^-1 acting on h times h', g g')
    for (std::size_t h = 0; h < nh; ++h)
        for (std::size_t g = 0; g < ng; ++g)
            for (std::size_t h2 = 0; h2 < nh; ++h2)
                for (std::size_t g2 = 0; g2 < ng; ++g2)
                    t[code(h, g)][code(h2, g2)] = code(H.mul(X.act(G.inv(g2), h), h2), G.mul(g, g2));
    Strict2Group S{G, FiniteGroup(H.name() + "x|" + G.name(), t), {}, {}, {}};
    for (std::size_t h = 0; h < nh; ++h)
        for (std::size_t g = 0; g < ng; ++g) {
            S.source.push_back(g);
            S.target.push_back(G.mul(g, X.boundary[h]));
        }
    for (std::size_t g = 0; g < ng; ++g) S.identity.push_back(code(0, g));
    return S;
}

// ker s with t restricted and conjugation by identity 2-morphisms.
inline FiniteCrossedModule from_strict_2group(const Strict2Group& S, const std::string& name = "round-trip") {
    const FiniteGroup &G = S.G1, &G2 = S.G2;
    std::vector<std::size_t> ker;
    for (std::size_t x = 0; x < G2.order(); ++x)
        if (S.source[x] == 0) ker.push_back(x);
    std::map<std::size_t, std::size_t> kidx;
    for (std::size_t i = 0; i < ker.size(); ++i) kidx[ker[i]] = i;
    std::vector<std::vector<std::size_t>> t(ker.size(), std::vector<std::size_t>(ker.size()));
    for (std::size_t i = 0; i < ker.size(); ++i)
        for (std::size_t j = 0; j < ker.size(); ++j) t[i][j] = kidx.at(G2.mul(ker[i], ker[j]));
    FiniteCrossedModule X{name, FiniteGroup("ker s", t), G, {}, {}};
    for (std::size_t x : ker) X.boundary.push_back(S.target[x]);
    X.action.assign(G.order(), std::vector<std::size_t>(ker.size()));
    for (std::size_t g = 0; g < G.order(); ++g)
        for (std::size_t i = 0; i < ker.size(); ++i) X.action[g][i] = kidx.at(G2.conj(S.identity[g], ker[i]));
    return X;
}

}  // namespace hsec
