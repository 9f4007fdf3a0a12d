#pragma once

#include "hsec/base.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace hsec {

class IntMatrix {
public:
    IntMatrix() = default;
    IntMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

    IntMatrix(std::initializer_list<std::initializer_list<long long>> init) {
        rows_ = init.size();
        cols_ = rows_ ? init.begin()->size() : 0;
        for (const auto& row : init) {
            if (row.size() != cols_) throw Error("ragged matrix literal");
            for (long long x : row) data_.emplace_back(x);
        }
    }

    static IntMatrix identity(std::size_t n) {
        IntMatrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
        return m;
    }

    static IntMatrix from_rows(const std::vector<IntVector>& rows, std::size_t cols) {
        IntMatrix m(rows.size(), cols);
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (rows[i].size() != cols) throw Error("row length mismatch");
            for (std::size_t j = 0; j < cols; ++j) m(i, j) = rows[i][j];
        }
        return m;
    }

    static IntMatrix from_columns(const std::vector<IntVector>& cols, std::size_t rows) {
        IntMatrix m(rows, cols.size());
        for (std::size_t j = 0; j < cols.size(); ++j) {
            if (cols[j].size() != rows) throw Error("column length mismatch");
            for (std::size_t i = 0; i < rows; ++i) m(i, j) = cols[j][i];
        }
        return m;
    }

    static IntMatrix diagonal(const IntVector& d) {
        IntMatrix m(d.size(), d.size());
        for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    Integer& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const Integer& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    IntVector row(std::size_t i) const { return IntVector(data_.begin() + i * cols_, data_.begin() + (i + 1) * cols_); }

    IntVector column(std::size_t j) const {
        IntVector v(rows_);
        for (std::size_t i = 0; i < rows_; ++i) v[i] = (*this)(i, j);
        return v;
    }

    std::vector<IntVector> columns() const {
        std::vector<IntVector> out;
        for (std::size_t j = 0; j < cols_; ++j) out.push_back(column(j));
        return out;
    }

    IntMatrix transpose() const {
        IntMatrix t(cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
        return t;
    }

    IntMatrix operator*(const IntMatrix& o) const {
        if (cols_ != o.rows_) throw Error("matrix dimension mismatch in product");
        IntMatrix p(rows_, o.cols_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t k = 0; k < cols_; ++k) {
                const Integer& a = (*this)(i, k);
                if (a == 0) continue;
                for (std::size_t j = 0; j < o.cols_; ++j) p(i, j) += a * o(k, j);
            }
        return p;
    }

    IntVector operator*(const IntVector& v) const {
        if (cols_ != v.size()) throw Error("matrix/vector dimension mismatch");
        IntVector out(rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) out[i] += (*this)(i, j) * v[j];
        return out;
    }

    IntMatrix operator+(const IntMatrix& o) const {
        if (rows_ != o.rows_ || cols_ != o.cols_) throw Error("matrix dimension mismatch in sum");
        IntMatrix s = *this;
        for (std::size_t k = 0; k < data_.size(); ++k) s.data_[k] += o.data_[k];
        return s;
    }

    IntMatrix operator-(const IntMatrix& o) const {
        if (rows_ != o.rows_ || cols_ != o.cols_) throw Error("matrix dimension mismatch in difference");
        IntMatrix s = *this;
        for (std::size_t k = 0; k < data_.size(); ++k) s.data_[k] -= o.data_[k];
        return s;
    }

    IntMatrix scaled(const Integer& c) const {
        IntMatrix s = *this;
        for (auto& x : s.data_) x *= c;
        return s;
    }

    bool is_zero() const {
        return std::all_of(data_.begin(), data_.end(), [](const Integer& x) { return x == 0; });
    }

    bool operator==(const IntMatrix& o) const = default;

    // block placement helpers
    void set_block(std::size_t r0, std::size_t c0, const IntMatrix& b) {
        for (std::size_t i = 0; i < b.rows_; ++i)
            for (std::size_t j = 0; j < b.cols_; ++j) (*this)(r0 + i, c0 + j) = b(i, j);
    }

    IntMatrix block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const {
        IntMatrix b(nr, nc);
        for (std::size_t i = 0; i < nr; ++i)
            for (std::size_t j = 0; j < nc; ++j) b(i, j) = (*this)(r0 + i, c0 + j);
        return b;
    }

    static IntMatrix hconcat(const IntMatrix& a, const IntMatrix& b) {
        if (a.rows_ != b.rows_) throw Error("row count mismatch in hconcat");
        IntMatrix m(a.rows_, a.cols_ + b.cols_);
        m.set_block(0, 0, a);
        m.set_block(0, a.cols_, b);
        return m;
    }

    static IntMatrix vconcat(const IntMatrix& a, const IntMatrix& b) {
        if (a.cols_ != b.cols_) throw Error("column count mismatch in vconcat");
        IntMatrix m(a.rows_ + b.rows_, a.cols_);
        m.set_block(0, 0, a);
        m.set_block(a.rows_, 0, b);
        return m;
    }

    std::string to_string() const {
        std::string s = "[";
        for (std::size_t i = 0; i < rows_; ++i) {
            if (i) s += ",";
            s += hsec::to_string(row(i));
        }
        return s + "]";
    }

    // row and column operations used by the reductions
    void swap_rows(std::size_t a, std::size_t b) {
        if (a == b) return;
        for (std::size_t j = 0; j < cols_; ++j) std::swap((*this)(a, j), (*this)(b, j));
    }
    void swap_cols(std::size_t a, std::size_t b) {
        if (a == b) return;
        for (std::size_t i = 0; i < rows_; ++i) std::swap((*this)(i, a), (*this)(i, b));
    }
    void add_row(std::size_t dst, std::size_t src, const Integer& c) {
        if (c == 0) return;
        for (std::size_t j = 0; j < cols_; ++j) (*this)(dst, j) += c * (*this)(src, j);
    }
    void add_col(std::size_t dst, std::size_t src, const Integer& c) {
        if (c == 0) return;
        for (std::size_t i = 0; i < rows_; ++i) (*this)(i, dst) += c * (*this)(i, src);
    }
    void negate_row(std::size_t i) {
        for (std::size_t j = 0; j < cols_; ++j) (*this)(i, j) = -(*this)(i, j);
    }

private:
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<Integer> data_;
};

// Fraction-free Gaussian elimination.
inline Integer determinant(IntMatrix a) {
    if (a.rows() != a.cols()) throw Error("determinant of a non-square matrix");
    std::size_t n = a.rows();
    if (n == 0) return 1;
    Integer sign = 1, prev = 1;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (a(k, k) == 0) {
            std::size_t p = k + 1;
            while (p < n && a(p, k) == 0) ++p;
            if (p == n) return 0;
            a.swap_rows(k, p);
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < n; ++i)
            for (std::size_t j = k + 1; j < n; ++j) a(i, j) = (a(i, j) * a(k, k) - a(i, k) * a(k, j)) / prev;
        prev = a(k, k);
    }
    return sign * a(n - 1, n - 1);
}

struct SmithDecomposition {
    // A = U * S * V
    IntMatrix U, S, V;
    IntMatrix U_inv, V_inv;
    std::size_t rank = 0;

    IntVector diagonal() const {
        IntVector d;
        for (std::size_t i = 0; i < std::min(S.rows(), S.cols()); ++i) d.push_back(S(i, i));
        return d;
    }
};

inline SmithDecomposition smith_normal_form(const IntMatrix& A) {
    const std::size_t m = A.rows(), n = A.cols();
    IntMatrix W = A;
    // W = P A Q throughout; Pi = P^-1, Qi = Q^-1
    IntMatrix P = IntMatrix::identity(m), Pi = IntMatrix::identity(m);
    IntMatrix Q = IntMatrix::identity(n), Qi = IntMatrix::identity(n);

    auto row_add = [&](std::size_t dst, std::size_t src, const Integer& c) {
        W.add_row(dst, src, c);
        P.add_row(dst, src, c);
        Pi.add_col(src, dst, -c);
    };
    auto col_add = [&](std::size_t dst, std::size_t src, const Integer& c) {
        W.add_col(dst, src, c);
        Q.add_col(dst, src, c);
        Qi.add_row(src, dst, -c);
    };
    auto row_swap = [&](std::size_t a, std::size_t b) {
        W.swap_rows(a, b);
        P.swap_rows(a, b);
        Pi.swap_cols(a, b);
    };
    auto col_swap = [&](std::size_t a, std::size_t b) {
        W.swap_cols(a, b);
        Q.swap_cols(a, b);
        Qi.swap_rows(a, b);
    };

    std::size_t t = 0;
    for (; t < std::min(m, n); ++t) {
        std::optional<std::pair<std::size_t, std::size_t>> best;
        for (std::size_t i = t; i < m; ++i)
            for (std::size_t j = t; j < n; ++j)
                if (W(i, j) != 0 && (!best || abs(W(i, j)) < abs(W(best->first, best->second)))) best = {{i, j}};
        if (!best) break;
        row_swap(t, best->first);
        col_swap(t, best->second);

        for (;;) {
            for (std::size_t i = t + 1; i < m; ++i)
                if (W(i, t) != 0) row_add(i, t, -(W(i, t) / W(t, t)));
            for (std::size_t j = t + 1; j < n; ++j)
                if (W(t, j) != 0) col_add(j, t, -(W(t, j) / W(t, t)));

            // a nonzero remainder is strictly smaller than the pivot: move it in
            std::optional<std::size_t> ri, cj;
            for (std::size_t i = t + 1; i < m; ++i)
                if (W(i, t) != 0 && (!ri || abs(W(i, t)) < abs(W(*ri, t)))) ri = i;
            for (std::size_t j = t + 1; j < n; ++j)
                if (W(t, j) != 0 && (!cj || abs(W(t, j)) < abs(W(t, *cj)))) cj = j;
            if (ri || cj) {
                if (ri && (!cj || abs(W(*ri, t)) <= abs(W(t, *cj))))
                    row_swap(t, *ri);
                else
                    col_swap(t, *cj);
                continue;
            }

            std::optional<std::size_t> bad;
            for (std::size_t i = t + 1; i < m && !bad; ++i)
                for (std::size_t j = t + 1; j < n; ++j)
                    if (W(i, j) % W(t, t) != 0) {
                        bad = i;
                        break;
                    }
            if (!bad) break;
            row_add(t, *bad, 1);
        }
        if (W(t, t) < 0) {
            W.negate_row(t);
            P.negate_row(t);
            for (std::size_t i = 0; i < m; ++i) Pi(i, t) = -Pi(i, t);
        }
    }

    SmithDecomposition d;
    d.rank = t;
    d.S = std::move(W);
    d.U = std::move(Pi);
    d.U_inv = std::move(P);
    d.V = std::move(Qi);
    d.V_inv = std::move(Q);
    return d;
}

struct SolveResult {
    IntVector particular;
    std::vector<IntVector> kernel_basis;
};

// Integer solutions of A x = b.
inline std::optional<SolveResult> solve(const IntMatrix& A, const IntVector& b) {
    if (b.size() != A.rows()) throw Error("solve: right-hand side has wrong length");
    const std::size_t n = A.cols();
    SmithDecomposition snf = smith_normal_form(A);
    IntVector c = snf.U_inv * b;
    IntVector y(n);
    for (std::size_t i = 0; i < c.size(); ++i) {
        if (i < snf.rank) {
            const Integer& s = snf.S(i, i);
            if (c[i] % s != 0) return std::nullopt;
            y[i] = c[i] / s;
        } else if (c[i] != 0) {
            return std::nullopt;
        }
    }
    SolveResult r;
    r.particular = snf.V_inv * y;
    for (std::size_t i = snf.rank; i < n; ++i) r.kernel_basis.push_back(snf.V_inv.column(i));
    return r;
}

inline std::vector<IntVector> kernel_basis(const IntMatrix& A) {
    return solve(A, IntVector(A.rows()))->kernel_basis;
}

class AbelianGroup {
public:
    AbelianGroup() = default;

    // Accepts any list of cyclic orders (0 = infinite, 1 dropped) and normalizes.
    static AbelianGroup from_orders(const IntVector& orders) {
        IntVector d;
        for (const Integer& o : orders)
            if (o < 0) throw Error("negative cyclic order");
        SmithDecomposition s = smith_normal_form(IntMatrix::diagonal(orders));
        AbelianGroup g;
        for (std::size_t i = 0; i < orders.size(); ++i)
            if (s.S(i, i) != 1) g.factors_.push_back(s.S(i, i));
        g.normalize();
        return g;
    }

    static AbelianGroup free(std::size_t rank) { return from_orders(IntVector(rank, 0)); }

    const IntVector& invariant_factors() const { return factors_; }

    std::size_t free_rank() const {
        return std::count_if(factors_.begin(), factors_.end(), [](const Integer& x) { return x == 0; });
    }

    IntVector torsion() const {
        IntVector t;
        for (const Integer& x : factors_)
            if (x != 0) t.push_back(x);
        return t;
    }

    bool is_trivial() const { return factors_.empty(); }
    bool is_finite() const { return free_rank() == 0; }

    Integer order() const {
        if (!is_finite()) throw Error("order of an infinite group");
        Integer o = 1;
        for (const Integer& x : factors_) o *= x;
        return o;
    }

    AbelianGroup operator*(const AbelianGroup& o) const {
        IntVector all = factors_;
        all.insert(all.end(), o.factors_.begin(), o.factors_.end());
        return from_orders(all);
    }

    bool operator==(const AbelianGroup& o) const { return factors_ == o.factors_; }

    std::string to_string() const {
        if (factors_.empty()) return "0";
        std::string s;
        for (const Integer& x : factors_) {
            if (!s.empty()) s += " x ";
            s += x == 0 ? "Z" : "Z_" + x.str();
        }
        return s;
    }

private:
    void normalize() {
        std::stable_sort(factors_.begin(), factors_.end(), [](const Integer& a, const Integer& b) {
            if ((a == 0) != (b == 0)) return b == 0;
            return a < b;
        });
    }

    IntVector factors_;
};

// Z^n modulo the span of the columns of gens.
inline AbelianGroup quotient(std::size_t n, const IntMatrix& gens) {
    if (gens.cols() > 0 && gens.rows() != n) throw Error("quotient: generator length mismatch");
    IntMatrix g = gens.cols() == 0 ? IntMatrix(n, 0) : gens;
    SmithDecomposition s = smith_normal_form(g);
    IntVector orders;
    for (std::size_t i = 0; i < n; ++i) orders.push_back(i < s.rank ? s.S(i, i) : Integer(0));
    return AbelianGroup::from_orders(orders);
}

// Basis of the lattice spanned by the columns of gens.
inline IntMatrix column_span_basis(const IntMatrix& gens) {
    SmithDecomposition s = smith_normal_form(gens);
    IntMatrix B(gens.rows(), s.rank);
    for (std::size_t j = 0; j < s.rank; ++j)
        for (std::size_t i = 0; i < gens.rows(); ++i) B(i, j) = s.U(i, j) * s.S(j, j);
    return B;
}

inline std::size_t rank_of(const IntMatrix& A) { return smith_normal_form(A).rank; }

// Row echelon basis of a set of vectors, with pivots chosen among `pivot_cols` only.
// Rows are whole vectors; the reduction order is the order of pivot_cols.
struct EchelonBasis {
    std::vector<IntVector> rows;
    std::vector<std::size_t> pivots;  // pivot coordinate per row; pivot entry > 0

    // Reduce v so each pivot coordinate lies in [0, pivot).
    IntVector reduce(IntVector v) const {
        for (std::size_t r = 0; r < rows.size(); ++r) {
            const Integer& h = rows[r][pivots[r]];
            Integer q = floor_div(v[pivots[r]], h);
            if (q != 0)
                for (std::size_t k = 0; k < v.size(); ++k) v[k] -= q * rows[r][k];
        }
        return v;
    }
};

inline EchelonBasis echelon(std::vector<IntVector> vecs, const std::vector<std::size_t>& pivot_cols) {
    EchelonBasis e;
    std::size_t top = 0;
    for (std::size_t c : pivot_cols) {
        for (;;) {
            std::optional<std::size_t> best;
            for (std::size_t i = top; i < vecs.size(); ++i)
                if (vecs[i][c] != 0 && (!best || abs(vecs[i][c]) < abs(vecs[*best][c]))) best = i;
            if (!best) break;
            std::swap(vecs[top], vecs[*best]);
            bool clean = true;
            for (std::size_t i = top + 1; i < vecs.size(); ++i) {
                if (vecs[i][c] == 0) continue;
                Integer q = vecs[i][c] / vecs[top][c];
                for (std::size_t k = 0; k < vecs[i].size(); ++k) vecs[i][k] -= q * vecs[top][k];
                if (vecs[i][c] != 0) clean = false;
            }
            if (clean) {
                if (vecs[top][c] < 0)
                    for (auto& x : vecs[top]) x = -x;
                e.rows.push_back(vecs[top]);
                e.pivots.push_back(c);
                ++top;
                break;
            }
        }
        if (top == vecs.size()) break;
    }
    return e;
}

struct AffineLattice {
    IntVector point;   // particular element
    IntMatrix basis;   // columns: a basis of the direction lattice
    std::size_t ambient() const { return point.size(); }
    std::size_t dimension() const { return basis.cols(); }
};

// Lattice from solve(): particular solution plus a basis of the kernel.
inline AffineLattice affine_lattice(const SolveResult& r) {
    AffineLattice L;
    L.point = r.particular;
    L.basis = column_span_basis(IntMatrix::from_columns(r.kernel_basis, r.particular.size()));
    return L;
}

struct AffineMap {
    IntMatrix linear;
    IntVector shift;
    IntVector operator()(const IntVector& x) const {
        IntVector y = linear * x;
        for (std::size_t i = 0; i < y.size(); ++i) y[i] += shift[i];
        return y;
    }
};

// Cosets of a sublattice S in an affine lattice p + D, with canonical representatives.
//
// Canonical form: points are compared in a set of display coordinates on which
// D projects injectively; within a coset the representative has each echelon
// pivot coordinate of S reduced into [0, pivot), which is the lexicographically
// smallest nonnegative choice in those coordinates.
class LatticeQuotient {
public:
    LatticeQuotient(AffineLattice lattice, const IntMatrix& sublattice) : lattice_(std::move(lattice)) {
        const std::size_t N = lattice_.ambient(), d = lattice_.dimension();
        if (sublattice.cols() > 0 && sublattice.rows() != N) throw LatticeError("sublattice has wrong ambient dimension");

        // display coordinates: greedy, keep those that raise the rank of D's projection
        std::size_t r = 0;
        for (std::size_t i = 0; i < N && r < d; ++i) {
            std::vector<std::size_t> trial = display_;
            trial.push_back(i);
            IntMatrix proj(trial.size(), d);
            for (std::size_t a = 0; a < trial.size(); ++a)
                for (std::size_t j = 0; j < d; ++j) proj(a, j) = lattice_.basis(trial[a], j);
            std::size_t rr = rank_of(proj);
            if (rr > r) {
                display_ = trial;
                r = rr;
            }
        }

        // sublattice in D-coordinates
        std::vector<IntVector> sub_cols = sublattice.cols() ? sublattice.columns() : std::vector<IntVector>{};
        IntMatrix C(d, sub_cols.size());
        for (std::size_t j = 0; j < sub_cols.size(); ++j) {
            auto s = solve(lattice_.basis, sub_cols[j]);
            if (!s) throw LatticeError("sublattice generator " + hsec::to_string(sub_cols[j]) + " is not a direction of the lattice");
            for (std::size_t i = 0; i < d; ++i) C(i, j) = s->particular[i];
        }
        snf_ = smith_normal_form(C);
        IntVector orders;
        for (std::size_t i = 0; i < d; ++i) {
            sigma_.push_back(i < snf_.rank ? snf_.S(i, i) : Integer(0));
            orders.push_back(sigma_.back());
        }
        group_ = AbelianGroup::from_orders(orders);

        std::vector<IntVector> nonzero;
        for (const auto& v : sub_cols)
            if (std::any_of(v.begin(), v.end(), [](const Integer& x) { return x != 0; })) nonzero.push_back(v);
        reducer_ = echelon(nonzero, display_);

        // torsion representatives: enumerate the finite part of Q = Z^d / im C
        std::vector<std::size_t> tors;
        for (std::size_t i = 0; i < d; ++i)
            if (sigma_[i] > 1) tors.push_back(i);
        for (std::size_t i = 0; i < d; ++i)
            if (sigma_[i] == 0) free_axes_.push_back(i);
        IntVector q(d);
        for (;;) {
            IntVector pt = point_from_q(q);
            reps_.push_back(canonical(pt));
            std::size_t k = 0;
            while (k < tors.size()) {
                q[tors[k]] += 1;
                if (q[tors[k]] < sigma_[tors[k]]) break;
                q[tors[k]] = 0;
                ++k;
            }
            if (k == tors.size()) break;
        }
        for (std::size_t axis : free_axes_) {
            IntVector e(d);
            e[axis] = 1;
            IntVector dir = reduce_direction(lattice_.basis * (snf_.U * e));
            IntVector disp = display(dir);
            auto first = std::find_if(disp.begin(), disp.end(), [](const Integer& x) { return x != 0; });
            if (first != disp.end() && *first < 0) {
                for (auto& x : dir) x = -x;
                dir = reduce_direction(dir);
            }
            free_dirs_.push_back(dir);
            free_signs_.push_back(q_direction(dir)[axis]);
        }

        // family origins: smallest nonnegative display coordinates modulo S and the free directions
        if (!free_dirs_.empty()) {
            std::vector<IntVector> ext = nonzero;
            ext.insert(ext.end(), free_dirs_.begin(), free_dirs_.end());
            EchelonBasis wide = echelon(ext, display_);
            for (auto& rep : reps_) rep = canonical(wide.reduce(rep));
        }
        std::sort(reps_.begin(), reps_.end(), [&](const IntVector& a, const IntVector& b) {
            return display(a) < display(b);
        });
        for (std::size_t i = 0; i < reps_.size(); ++i) {
            IntVector q = q_coordinates(reps_[i]);
            rep_index_.emplace(torsion_key(q), i);
            offsets_.push_back(raw_params(q));
        }
    }

    const AbelianGroup& group() const { return group_; }
    const AffineLattice& lattice() const { return lattice_; }
    const std::vector<std::size_t>& display_coordinates() const { return display_; }

    // one canonical ambient point per torsion class (free coordinates zero)
    const std::vector<IntVector>& representatives() const { return reps_; }
    const std::vector<IntVector>& free_directions() const { return free_dirs_; }

    IntVector display(const IntVector& x) const {
        IntVector v;
        for (std::size_t i : display_) v.push_back(x[i]);
        return v;
    }

    bool contains(const IntVector& x) const { return d_coordinates(x).has_value(); }

    IntVector canonical(const IntVector& x) const {
        if (!contains(x)) throw LatticeError("point is not on the lattice");
        return reducer_.reduce(x);
    }

    bool same_class(const IntVector& x, const IntVector& y) const { return canonical(x) == canonical(y); }

    // coordinates in Q = (+) Z/sigma_i; torsion parts reduced, free parts exact
    IntVector q_coordinates(const IntVector& x) const {
        auto c = d_coordinates(x);
        if (!c) throw LatticeError("point is not on the lattice");
        IntVector q = snf_.U_inv * *c;
        for (std::size_t i = 0; i < q.size(); ++i) {
            if (sigma_[i] == 1)
                q[i] = 0;
            else if (sigma_[i] > 1)
                q[i] = floor_mod(q[i], sigma_[i]);
        }
        return q;
    }

    // which torsion representative x's class lies over, plus its free parameters
    std::pair<std::size_t, IntVector> locate(const IntVector& x) const {
        IntVector q = q_coordinates(x);
        std::size_t tau = rep_index_.at(torsion_key(q));
        IntVector params = raw_params(q);
        for (std::size_t k = 0; k < params.size(); ++k) params[k] -= offsets_[tau][k];
        return {tau, params};
    }

    // canonical point of the class rep_tau + sum n_k g_k
    IntVector family_point(std::size_t tau, const IntVector& params) const {
        IntVector x = reps_.at(tau);
        for (std::size_t k = 0; k < params.size(); ++k)
            for (std::size_t i = 0; i < x.size(); ++i) x[i] += params[k] * free_dirs_[k][i];
        return canonical(x);
    }

private:
    std::optional<IntVector> d_coordinates(const IntVector& x) const {
        if (x.size() != lattice_.ambient()) return std::nullopt;
        IntVector diff(x.size());
        for (std::size_t i = 0; i < x.size(); ++i) diff[i] = x[i] - lattice_.point[i];
        auto s = solve(lattice_.basis, diff);
        if (!s) return std::nullopt;
        return s->particular;
    }

    IntVector q_direction(const IntVector& dir) const {
        IntVector c = solve(lattice_.basis, dir)->particular;
        return snf_.U_inv * c;
    }

    IntVector point_from_q(const IntVector& q) const {
        IntVector c = snf_.U * q;
        IntVector x = lattice_.basis * c;
        for (std::size_t i = 0; i < x.size(); ++i) x[i] += lattice_.point[i];
        return x;
    }

    IntVector reduce_direction(const IntVector& dir) const { return reducer_.reduce(dir); }

    IntVector raw_params(const IntVector& q) const {
        IntVector params;
        for (std::size_t k = 0; k < free_axes_.size(); ++k) params.push_back(q[free_axes_[k]] * free_signs_[k]);
        return params;
    }

    IntVector torsion_key(const IntVector& q) const {
        IntVector key;
        for (std::size_t i = 0; i < q.size(); ++i)
            if (sigma_[i] > 1) key.push_back(q[i]);
        return key;
    }

    AffineLattice lattice_;
    std::vector<std::size_t> display_;
    SmithDecomposition snf_;
    IntVector sigma_;
    AbelianGroup group_;
    EchelonBasis reducer_;
    std::vector<IntVector> reps_;
    std::map<IntVector, std::size_t> rep_index_;
    std::vector<std::size_t> free_axes_;
    std::vector<IntVector> free_dirs_;
    IntVector free_signs_;
    std::vector<IntVector> offsets_;
};

inline LatticeQuotient quotient_with_representatives(const AffineLattice& lattice, const IntMatrix& sublattice) {
    return LatticeQuotient(lattice, sublattice);
}

// Orbits of a finite group of affine symmetries acting on the classes of a quotient.
struct FamilyOrbit {
    std::vector<std::size_t> members;   // torsion representative indices
    std::size_t representative = 0;    // smallest member
    std::optional<Integer> reflection;  // n ~ c - n on the representative's family
};

struct OrbitSummary {
    bool resolved = true;
    std::string note;
    // finite quotient: orbits of representative indices
    std::vector<std::vector<std::size_t>> orbits;
    // free rank one: orbits of families
    std::vector<FamilyOrbit> families;
};

inline OrbitSummary orbits(const LatticeQuotient& Q, const std::vector<AffineMap>& maps) {
    OrbitSummary out;
    const std::size_t n = Q.representatives().size();
    std::vector<std::size_t> parent(n);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](std::size_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    auto unite = [&](std::size_t a, std::size_t b) {
        a = find(a);
        b = find(b);
        if (a != b) parent[std::max(a, b)] = std::min(a, b);
    };
    auto collect = [&]() {
        std::map<std::size_t, std::vector<std::size_t>> groups;
        for (std::size_t i = 0; i < n; ++i) groups[find(i)].push_back(i);
        std::vector<std::vector<std::size_t>> res;
        for (auto& [k, v] : groups) res.push_back(v);
        return res;
    };

    const std::size_t f = Q.group().free_rank();
    if (f == 0) {
        for (const AffineMap& g : maps)
            for (std::size_t i = 0; i < n; ++i) unite(i, Q.locate(g(Q.representatives()[i])).first);
        out.orbits = collect();
        return out;
    }
    if (f > 1) {
        out.resolved = false;
        out.note = "orbit structure on a free part of rank > 1 is not resolved";
        for (std::size_t i = 0; i < n; ++i) out.orbits.push_back({i});
        return out;
    }

    // each map sends family tau to tau' with n -> eps n + c
    struct Move {
        std::size_t from, to;
        Integer eps, c;
    };
    std::vector<Move> moves;
    for (const AffineMap& g : maps)
        for (std::size_t tau = 0; tau < n; ++tau) {
            auto [t0, p0] = Q.locate(g(Q.family_point(tau, {Integer(0)})));
            auto [t1, p1] = Q.locate(g(Q.family_point(tau, {Integer(1)})));
            Integer eps = p1[0] - p0[0];
            if (t0 != t1 || (eps != 1 && eps != -1)) {
                out.resolved = false;
                out.note = "symmetry does not act affinely on families";
                continue;
            }
            moves.push_back({tau, t0, eps, p0[0]});
            unite(tau, t0);
        }
    for (auto& members : collect()) {
        FamilyOrbit fo;
        fo.members = members;
        fo.representative = members.front();
        for (const Move& m : moves) {
            if (m.from != fo.representative || m.to != fo.representative) continue;
            if (m.eps == -1) {
                if (fo.reflection && *fo.reflection != m.c) {
                    out.resolved = false;
                    out.note = "two distinct reflections on one family";
                }
                fo.reflection = m.c;
            } else if (m.c != 0) {
                out.resolved = false;
                out.note = "a translation acts on a family";
            }
        }
        out.families.push_back(fo);
    }
    return out;
}

}  // namespace hsec
