#pragma once

#include "hsec/base.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

namespace hsec {

using Perm = std::vector<std::size_t>;

// Finite group given by its multiplication table; element 0 is the identity.
class FiniteGroup {
public:
    FiniteGroup() : FiniteGroup("C1", {{0}}) {}

    FiniteGroup(std::string name, std::vector<std::vector<std::size_t>> table)
        : name_(std::move(name)), table_(std::move(table)) {
        const std::size_t n = table_.size();
        if (n == 0) throw ValidationError("group table is empty");
        for (const auto& row : table_) {
            if (row.size() != n) throw ValidationError("group table is not square");
            for (std::size_t x : row)
                if (x >= n) throw ValidationError("group table entry out of range");
        }
        for (std::size_t x = 0; x < n; ++x)
            if (table_[0][x] != x || table_[x][0] != x) throw ValidationError("element 0 is not the identity");
        inverse_.assign(n, n);
        for (std::size_t x = 0; x < n; ++x)
            for (std::size_t y = 0; y < n; ++y)
                if (table_[x][y] == 0) inverse_[x] = y;
        for (std::size_t x = 0; x < n; ++x)
            if (inverse_[x] == n || table_[inverse_[x]][x] != 0) throw ValidationError("element without inverse");
        for (std::size_t x = 0; x < n; ++x)
            for (std::size_t y = 0; y < n; ++y)
                for (std::size_t z = 0; z < n; ++z)
                    if (table_[table_[x][y]][z] != table_[x][table_[y][z]]) throw ValidationError("table is not associative");
    }

    const std::string& name() const { return name_; }
    std::size_t order() const { return table_.size(); }
    std::size_t mul(std::size_t a, std::size_t b) const { return table_[a][b]; }
    std::size_t inv(std::size_t a) const { return inverse_[a]; }
    std::size_t conj(std::size_t g, std::size_t x) const { return mul(mul(g, x), inv(g)); }
    const std::vector<std::vector<std::size_t>>& table() const { return table_; }

    std::size_t element_order(std::size_t a) const {
        std::size_t k = 1, x = a;
        while (x != 0) {
            x = mul(x, a);
            ++k;
        }
        return k;
    }

    std::size_t power(std::size_t a, long long k) const {
        std::size_t base = k < 0 ? inv(a) : a, x = 0;
        for (long long i = 0; i < (k < 0 ? -k : k); ++i) x = mul(x, base);
        return x;
    }

    bool is_abelian() const {
        for (std::size_t a = 0; a < order(); ++a)
            for (std::size_t b = 0; b < order(); ++b)
                if (mul(a, b) != mul(b, a)) return false;
        return true;
    }

    // Greedy generating set: repeatedly add the first element outside the span.
    std::vector<std::size_t> generators() const {
        std::vector<std::size_t> gens;
        std::vector<bool> in = closure(gens);
        for (std::size_t x = 1; x < order(); ++x)
            if (!in[x]) {
                gens.push_back(x);
                in = closure(gens);
            }
        return gens;
    }

    std::vector<bool> closure(const std::vector<std::size_t>& gens) const {
        std::vector<bool> in(order(), false);
        in[0] = true;
        std::deque<std::size_t> queue{0};
        while (!queue.empty()) {
            std::size_t x = queue.front();
            queue.pop_front();
            for (std::size_t g : gens) {
                std::size_t y = mul(x, g);
                if (!in[y]) {
                    in[y] = true;
                    queue.push_back(y);
                }
            }
        }
        return in;
    }

    bool operator==(const FiniteGroup& o) const { return table_ == o.table_; }

    static FiniteGroup cyclic(std::size_t n) {
        std::vector<std::vector<std::size_t>> t(n, std::vector<std::size_t>(n));
        for (std::size_t a = 0; a < n; ++a)
            for (std::size_t b = 0; b < n; ++b) t[a][b] = (a + b) % n;
        return FiniteGroup("C" + std::to_string(n), t);
    }

    // Permutation group generated by gens, elements in breadth-first order.
    // Product convention: (p q)(x) = p(q(x)).
    static FiniteGroup from_permutations(const std::string& name, const std::vector<Perm>& gens,
                                         std::vector<Perm>* elements_out = nullptr) {
        if (gens.empty()) return FiniteGroup(name, {{0}});
        const std::size_t deg = gens.front().size();
        Perm id(deg);
        std::iota(id.begin(), id.end(), 0);
        std::vector<Perm> elems{id};
        std::map<Perm, std::size_t> index{{id, 0}};
        for (std::size_t i = 0; i < elems.size(); ++i)
            for (const Perm& g : gens) {
                Perm p = compose(elems[i], g);
                if (index.emplace(p, elems.size()).second) elems.push_back(p);
            }
        const std::size_t n = elems.size();
        std::vector<std::vector<std::size_t>> t(n, std::vector<std::size_t>(n));
        for (std::size_t a = 0; a < n; ++a)
            for (std::size_t b = 0; b < n; ++b) t[a][b] = index.at(compose(elems[a], elems[b]));
        if (elements_out) *elements_out = elems;
        return FiniteGroup(name, t);
    }

    static Perm compose(const Perm& p, const Perm& q) {
        Perm r(q.size());
        for (std::size_t x = 0; x < q.size(); ++x) r[x] = p[q[x]];
        return r;
    }

    static FiniteGroup dihedral(std::size_t n) {
        Perm rot(n), ref(n);
        for (std::size_t i = 0; i < n; ++i) {
            rot[i] = (i + 1) % n;
            ref[i] = (n - i) % n;
        }
        return from_permutations("D" + std::to_string(n), {rot, ref});
    }

    static FiniteGroup symmetric3() { return from_permutations("S3", {{1, 0, 2}, {1, 2, 0}}); }

    static FiniteGroup quaternion() {
        // elements 1, -1, i, -i, j, -j, k, -k as (unit, sign)
        auto code = [](int unit, int sign) -> std::size_t { return 2 * unit + (sign < 0 ? 1 : 0); };
        // unit products: table[u][v] = (w, sign)
        const int w[4][4] = {{0, 1, 2, 3}, {1, 0, 3, 2}, {2, 3, 0, 1}, {3, 2, 1, 0}};
        const int s[4][4] = {{1, 1, 1, 1}, {1, -1, 1, -1}, {1, -1, -1, 1}, {1, 1, -1, -1}};
        std::vector<std::vector<std::size_t>> t(8, std::vector<std::size_t>(8));
        for (std::size_t a = 0; a < 8; ++a)
            for (std::size_t b = 0; b < 8; ++b) {
                int ua = static_cast<int>(a / 2), ub = static_cast<int>(b / 2);
                int sign = (a % 2 ? -1 : 1) * (b % 2 ? -1 : 1) * s[ua][ub];
                t[a][b] = code(w[ua][ub], sign);
            }
        return FiniteGroup("Q8", t);
    }

    static FiniteGroup direct_product(const FiniteGroup& a, const FiniteGroup& b, std::string name = {}) {
        const std::size_t na = a.order(), nb = b.order();
        std::vector<std::vector<std::size_t>> t(na * nb, std::vector<std::size_t>(na * nb));
        for (std::size_t x = 0; x < na * nb; ++x)
            for (std::size_t y = 0; y < na * nb; ++y)
                t[x][y] = a.mul(x / nb, y / nb) * nb + b.mul(x % nb, y % nb);
        return FiniteGroup(name.empty() ? a.name() + "x" + b.name() : name, t);
    }

private:
    std::string name_;
    std::vector<std::vector<std::size_t>> table_;
    std::vector<std::size_t> inverse_;
};

// All groups of order at most 8 up to isomorphism (14 of them for the full range).
inline std::vector<FiniteGroup> small_groups(std::size_t max_order = 8) {
    std::vector<FiniteGroup> out;
    auto C = FiniteGroup::cyclic;
    for (std::size_t n = 1; n <= max_order; ++n) {
        out.push_back(C(n));
        if (n == 4) out.push_back(FiniteGroup::direct_product(C(2), C(2), "C2xC2"));
        if (n == 6) out.push_back(FiniteGroup::symmetric3());
        if (n == 8) {
            out.push_back(FiniteGroup::direct_product(C(4), C(2), "C4xC2"));
            out.push_back(FiniteGroup::direct_product(FiniteGroup::direct_product(C(2), C(2)), C(2), "C2xC2xC2"));
            out.push_back(FiniteGroup::dihedral(4));
            out.push_back(FiniteGroup::quaternion());
        }
    }
    return out;
}

inline std::optional<FiniteGroup> group_by_name(const std::string& name) {
    for (auto& g : small_groups(8))
        if (g.name() == name) return g;
    return std::nullopt;
}

inline bool is_homomorphism(const FiniteGroup& A, const FiniteGroup& B, const std::vector<std::size_t>& f) {
    if (f.size() != A.order()) return false;
    for (std::size_t x = 0; x < A.order(); ++x)
        for (std::size_t y = 0; y < A.order(); ++y)
            if (f[A.mul(x, y)] != B.mul(f[x], f[y])) return false;
    return true;
}

// Extends generator images to a homomorphism if one exists.
inline std::optional<std::vector<std::size_t>> extend_homomorphism(const FiniteGroup& A, const FiniteGroup& B,
                                                                   const std::vector<std::size_t>& gens,
                                                                   const std::vector<std::size_t>& images) {
    const std::size_t none = B.order();
    std::vector<std::size_t> f(A.order(), none);
    f[0] = 0;
    std::deque<std::size_t> queue{0};
    while (!queue.empty()) {
        std::size_t x = queue.front();
        queue.pop_front();
        for (std::size_t k = 0; k < gens.size(); ++k) {
            std::size_t y = A.mul(x, gens[k]);
            std::size_t fy = B.mul(f[x], images[k]);
            if (f[y] == none) {
                f[y] = fy;
                queue.push_back(y);
            } else if (f[y] != fy) {
                return std::nullopt;
            }
        }
    }
    if (!is_homomorphism(A, B, f)) return std::nullopt;
    return f;
}

inline std::vector<std::vector<std::size_t>> homomorphisms(const FiniteGroup& A, const FiniteGroup& B) {
    std::vector<std::size_t> gens = A.generators();
    std::vector<std::vector<std::size_t>> candidates;
    for (std::size_t g : gens) {
        std::vector<std::size_t> c;
        std::size_t og = A.element_order(g);
        for (std::size_t y = 0; y < B.order(); ++y)
            if (og % B.element_order(y) == 0) c.push_back(y);
        candidates.push_back(c);
    }
    std::vector<std::vector<std::size_t>> out;
    std::vector<std::size_t> images(gens.size());
    std::function<void(std::size_t)> rec = [&](std::size_t k) {
        if (k == gens.size()) {
            if (auto f = extend_homomorphism(A, B, gens, images)) out.push_back(*f);
            return;
        }
        for (std::size_t y : candidates[k]) {
            images[k] = y;
            rec(k + 1);
        }
    };
    rec(0);
    return out;
}

inline std::vector<Perm> automorphisms(const FiniteGroup& H) {
    std::vector<Perm> out;
    for (auto& f : homomorphisms(H, H)) {
        std::vector<bool> hit(H.order(), false);
        bool bij = true;
        for (std::size_t x : f) {
            if (hit[x]) bij = false;
            hit[x] = true;
        }
        if (bij) out.push_back(f);
    }
    return out;
}

}  // namespace hsec
