#pragma once

// Dense matrices over an exact field, with deterministic reduced row echelon
// form, canonical kernel bases, and canonical linear solves. The F_p path uses
// delayed-reduction elimination: a target row is expanded into 64-bit
// accumulators, all pivot rows are folded in with fused multiply-adds, and the
// modulus is applied once at the end (or every `delay_budget` steps for large p).

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "field.hpp"

namespace koszul {

class MatrixError : public std::runtime_error {
public:
    explicit MatrixError(const std::string& what) : std::runtime_error(what) {}
};

template <class F>
class Matrix {
public:
    using Elem = typename F::Elem;

    Matrix() : fld_(), rows_(0), cols_(0) {}
    Matrix(F f, int rows, int cols)
        : fld_(std::move(f)), rows_(rows), cols_(cols),
          a_(static_cast<std::size_t>(rows) * cols, fld_.zero()) {
        if (rows < 0 || cols < 0) throw MatrixError("negative matrix dimension");
    }

    static Matrix identity(F f, int n) {
        Matrix m(f, n, n);
        for (int i = 0; i < n; ++i) m.at(i, i) = m.fld_.one();
        return m;
    }

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    const F& field() const { return fld_; }

    Elem& at(int r, int c) { return a_[static_cast<std::size_t>(r) * cols_ + c]; }
    const Elem& at(int r, int c) const { return a_[static_cast<std::size_t>(r) * cols_ + c]; }
    Elem* row_ptr(int r) { return a_.data() + static_cast<std::size_t>(r) * cols_; }
    const Elem* row_ptr(int r) const { return a_.data() + static_cast<std::size_t>(r) * cols_; }

    bool operator==(const Matrix& o) const {
        return rows_ == o.rows_ && cols_ == o.cols_ && a_ == o.a_;
    }
    bool operator!=(const Matrix& o) const { return !(*this == o); }

    bool is_zero() const {
        for (const auto& x : a_)
            if (!fld_.is_zero(x)) return false;
        return true;
    }

    Matrix transpose() const {
        Matrix t(fld_, cols_, rows_);
        for (int r = 0; r < rows_; ++r)
            for (int c = 0; c < cols_; ++c) t.at(c, r) = at(r, c);
        return t;
    }

    // this * rhs
    Matrix mul(const Matrix& rhs) const {
        if (cols_ != rhs.rows_)
            throw MatrixError("matrix product shape mismatch: " + shape() + " * " + rhs.shape());
        Matrix out(fld_, rows_, rhs.cols_);
        if constexpr (F::is_prime_field) {
            if (rhs.cols_ == 0 || rows_ == 0) return out;
            std::vector<std::uint64_t> acc(rhs.cols_);
            const std::uint64_t budget = fld_.delay_budget();
            for (int r = 0; r < rows_; ++r) {
                std::fill(acc.begin(), acc.end(), 0);
                std::uint64_t used = 0;
                for (int k = 0; k < cols_; ++k) {
                    const std::uint64_t c = at(r, k);
                    if (!c) continue;
                    const Elem* src = rhs.row_ptr(k);
                    for (int j = 0; j < rhs.cols_; ++j) acc[j] += c * src[j];
                    if (++used >= budget) {
                        for (auto& x : acc) x = fld_.reduce(x);
                        used = 0;
                    }
                }
                Elem* dst = out.row_ptr(r);
                for (int j = 0; j < rhs.cols_; ++j) dst[j] = fld_.reduce(acc[j]);
            }
        } else {
            for (int r = 0; r < rows_; ++r)
                for (int k = 0; k < cols_; ++k) {
                    const Elem& c = at(r, k);
                    if (fld_.is_zero(c)) continue;
                    for (int j = 0; j < rhs.cols_; ++j)
                        out.at(r, j) = fld_.add(out.at(r, j), fld_.mul(c, rhs.at(k, j)));
                }
        }
        return out;
    }

    Matrix scaled(const Elem& c) const {
        Matrix out(fld_, rows_, cols_);
        for (std::size_t i = 0; i < a_.size(); ++i) out.a_[i] = fld_.mul(a_[i], c);
        return out;
    }

    Matrix add(const Matrix& o) const {
        if (rows_ != o.rows_ || cols_ != o.cols_)
            throw MatrixError("matrix sum shape mismatch: " + shape() + " + " + o.shape());
        Matrix out(fld_, rows_, cols_);
        for (std::size_t i = 0; i < a_.size(); ++i) out.a_[i] = fld_.add(a_[i], o.a_[i]);
        return out;
    }

    Matrix sub(const Matrix& o) const {
        if (rows_ != o.rows_ || cols_ != o.cols_)
            throw MatrixError("matrix difference shape mismatch: " + shape() + " - " + o.shape());
        Matrix out(fld_, rows_, cols_);
        for (std::size_t i = 0; i < a_.size(); ++i) out.a_[i] = fld_.sub(a_[i], o.a_[i]);
        return out;
    }

    // columns [c0, c1) as a new matrix
    Matrix col_slice(int c0, int c1) const {
        Matrix out(fld_, rows_, c1 - c0);
        for (int r = 0; r < rows_; ++r)
            for (int c = c0; c < c1; ++c) out.at(r, c - c0) = at(r, c);
        return out;
    }

    Matrix col_select(const std::vector<int>& idx) const {
        Matrix out(fld_, rows_, static_cast<int>(idx.size()));
        for (int r = 0; r < rows_; ++r)
            for (int c = 0; c < static_cast<int>(idx.size()); ++c) out.at(r, c) = at(r, idx[c]);
        return out;
    }

    Matrix row_select(const std::vector<int>& idx) const {
        Matrix out(fld_, static_cast<int>(idx.size()), cols_);
        for (int r = 0; r < static_cast<int>(idx.size()); ++r)
            for (int c = 0; c < cols_; ++c) out.at(r, c) = at(idx[r], c);
        return out;
    }

    static Matrix hcat(const Matrix& a, const Matrix& b) {
        if (a.rows_ != b.rows_)
            throw MatrixError("hcat row mismatch: " + a.shape() + " | " + b.shape());
        Matrix out(a.fld_, a.rows_, a.cols_ + b.cols_);
        for (int r = 0; r < a.rows_; ++r) {
            for (int c = 0; c < a.cols_; ++c) out.at(r, c) = a.at(r, c);
            for (int c = 0; c < b.cols_; ++c) out.at(r, a.cols_ + c) = b.at(r, c);
        }
        return out;
    }

    std::string shape() const {
        return std::to_string(rows_) + "x" + std::to_string(cols_);
    }

private:
    F fld_;
    int rows_, cols_;
    std::vector<Elem> a_;
};

template <class F>
struct RrefResult {
    Matrix<F> reduced;
    std::vector<int> pivot_columns;  // strictly increasing
    int rank = 0;
};

namespace detail {

// F_p forward elimination, left-looking: each input row is reduced against the
// echelon rows found so far (pivot order = increasing pivot column; echelon
// rows are zero left of their pivot, so coefficients read off in that order are
// final). Entries accumulate unreduced in u64 until `budget` multiply-adds.
inline void fp_renorm(std::vector<std::uint64_t>& acc, const PrimeField& f) {
    for (auto& x : acc) x = f.reduce(x);
}

template <class F>
RrefResult<F> rref_fp(const Matrix<F>& input) {
    const F f = input.field();
    const int rows = input.rows(), cols = input.cols();
    const std::uint64_t budget = f.delay_budget();

    Matrix<F> ech(f, rows, cols);             // echelon rows, in discovery order
    std::vector<int> pivcol_of;               // pivot column of each echelon row
    std::vector<int> order;                   // echelon row indices sorted by pivot column
    std::vector<std::uint64_t> acc(cols);

    for (int r = 0; r < rows; ++r) {
        const auto* src = input.row_ptr(r);
        for (int c = 0; c < cols; ++c) acc[c] = src[c];
        std::uint64_t used = 0;
        for (int oi : order) {
            const int pc = pivcol_of[oi];
            const std::uint32_t v = f.reduce(acc[pc]);
            if (!v) { acc[pc] = 0; continue; }
            const std::uint64_t c2 = f.characteristic() - v;
            const auto* prow = ech.row_ptr(oi);
            for (int c = pc; c < cols; ++c) acc[c] += c2 * prow[c];
            acc[pc] = 0;  // exact multiple of p by construction
            if (++used >= budget) { fp_renorm(acc, f); used = 0; }
        }
        int lead = -1;
        for (int c = 0; c < cols; ++c) {
            acc[c] = f.reduce(acc[c]);
            if (lead < 0 && acc[c]) lead = c;
        }
        if (lead < 0) continue;
        const std::uint32_t iv = f.inv(static_cast<std::uint32_t>(acc[lead]));
        const int er = static_cast<int>(pivcol_of.size());
        auto* dst = ech.row_ptr(er);
        for (int c = lead; c < cols; ++c)
            dst[c] = f.mul(static_cast<std::uint32_t>(acc[c]), iv);
        pivcol_of.push_back(lead);
        auto it = order.begin();
        while (it != order.end() && pivcol_of[*it] < lead) ++it;
        order.insert(it, er);
    }

    // back substitution in decreasing pivot-column order
    const int rank = static_cast<int>(order.size());
    for (int k = rank - 2; k >= 0; --k) {
        const int ri = order[k];
        const int pc = pivcol_of[ri];
        auto* trow = ech.row_ptr(ri);
        for (int c = pc; c < cols; ++c) acc[c] = trow[c];
        std::uint64_t used = 0;
        for (int m = k + 1; m < rank; ++m) {
            const int rj = order[m];
            const int pj = pivcol_of[rj];
            const std::uint32_t v = f.reduce(acc[pj]);
            if (!v) { acc[pj] = 0; continue; }
            const std::uint64_t c2 = f.characteristic() - v;
            const auto* prow = ech.row_ptr(rj);
            for (int c = pj; c < cols; ++c) acc[c] += c2 * prow[c];
            acc[pj] = 0;
            if (++used >= budget) {
                for (int c = pc; c < cols; ++c) acc[c] = f.reduce(acc[c]);
                used = 0;
            }
        }
        for (int c = pc; c < cols; ++c) trow[c] = f.reduce(acc[c]);
    }

    RrefResult<F> out{Matrix<F>(f, rows, cols), {}, rank};
    for (int k = 0; k < rank; ++k) {
        const int ri = order[k];
        auto* dst = out.reduced.row_ptr(k);
        const auto* srow = ech.row_ptr(ri);
        for (int c = pivcol_of[ri]; c < cols; ++c) dst[c] = srow[c];
        out.pivot_columns.push_back(pivcol_of[ri]);
    }
    return out;
}

// rank via forward elimination only: no back substitution, no output assembly.
// Used where only the rank matters (exactness checks on large differentials).
template <class F>
int rank_fp(const Matrix<F>& input) {
    const F f = input.field();
    const int rows = input.rows(), cols = input.cols();
    const std::uint64_t budget = f.delay_budget();

    Matrix<F> ech(f, rows, cols);
    std::vector<int> pivcol_of;
    std::vector<int> order;
    std::vector<std::uint64_t> acc(cols);

    for (int r = 0; r < rows; ++r) {
        const auto* src = input.row_ptr(r);
        for (int c = 0; c < cols; ++c) acc[c] = src[c];
        std::uint64_t used = 0;
        for (int oi : order) {
            const int pc = pivcol_of[oi];
            const std::uint32_t v = f.reduce(acc[pc]);
            if (!v) { acc[pc] = 0; continue; }
            const std::uint64_t c2 = f.characteristic() - v;
            const auto* prow = ech.row_ptr(oi);
            for (int c = pc; c < cols; ++c) acc[c] += c2 * prow[c];
            acc[pc] = 0;
            if (++used >= budget) { fp_renorm(acc, f); used = 0; }
        }
        int lead = -1;
        for (int c = 0; c < cols; ++c) {
            acc[c] = f.reduce(acc[c]);
            if (lead < 0 && acc[c]) lead = c;
        }
        if (lead < 0) continue;
        const std::uint32_t iv = f.inv(static_cast<std::uint32_t>(acc[lead]));
        const int er = static_cast<int>(pivcol_of.size());
        auto* dst = ech.row_ptr(er);
        for (int c = lead; c < cols; ++c)
            dst[c] = f.mul(static_cast<std::uint32_t>(acc[c]), iv);
        pivcol_of.push_back(lead);
        auto it = order.begin();
        while (it != order.end() && pivcol_of[*it] < lead) ++it;
        order.insert(it, er);
    }
    return static_cast<int>(order.size());
}

template <class F>
RrefResult<F> rref_generic(const Matrix<F>& input) {
    const F f = input.field();
    Matrix<F> m = input;
    const int rows = m.rows(), cols = m.cols();
    std::vector<int> pivots;
    int r = 0;
    for (int c = 0; c < cols && r < rows; ++c) {
        int sel = -1;
        for (int i = r; i < rows; ++i)
            if (!f.is_zero(m.at(i, c))) { sel = i; break; }
        if (sel < 0) continue;
        if (sel != r)
            for (int j = 0; j < cols; ++j) std::swap(m.at(sel, j), m.at(r, j));
        const auto iv = f.inv(m.at(r, c));
        for (int j = c; j < cols; ++j) m.at(r, j) = f.mul(m.at(r, j), iv);
        for (int i = 0; i < rows; ++i) {
            if (i == r || f.is_zero(m.at(i, c))) continue;
            const auto coef = m.at(i, c);
            for (int j = c; j < cols; ++j)
                m.at(i, j) = f.sub(m.at(i, j), f.mul(coef, m.at(r, j)));
        }
        pivots.push_back(c);
        ++r;
    }
    return RrefResult<F>{std::move(m), std::move(pivots), r};
}

}  // namespace detail

template <class F>
RrefResult<F> rref(const Matrix<F>& m) {
    if constexpr (F::is_prime_field)
        return detail::rref_fp(m);
    else
        return detail::rref_generic(m);
}

template <class F>
int rank(const Matrix<F>& m) {
    if constexpr (F::is_prime_field)
        return detail::rank_fp(m);
    else
        return rref(m).rank;
}

// Canonical basis of {x : m x = 0}, one column per free variable, free
// variables in increasing column order; the submatrix at the free rows is the
// identity.
template <class F>
Matrix<F> kernel_basis(const Matrix<F>& m) {
    const F f = m.field();
    auto rr = rref(m);
    std::vector<char> is_piv(m.cols(), 0);
    for (int c : rr.pivot_columns) is_piv[c] = 1;
    std::vector<int> free_cols;
    for (int c = 0; c < m.cols(); ++c)
        if (!is_piv[c]) free_cols.push_back(c);
    Matrix<F> k(f, m.cols(), static_cast<int>(free_cols.size()));
    for (int j = 0; j < static_cast<int>(free_cols.size()); ++j) {
        const int fc = free_cols[j];
        k.at(fc, j) = f.one();
        for (int i = 0; i < rr.rank; ++i)
            k.at(rr.pivot_columns[i], j) = f.neg(rr.reduced.at(i, fc));
    }
    return k;
}

// Canonical solution of a x = b (matrix right-hand side): free variables are
// zero. Returns nullopt when the system is inconsistent; shape mismatches are
// errors, not "no solution".
template <class F>
std::optional<Matrix<F>> solve(const Matrix<F>& a, const Matrix<F>& b) {
    if (a.rows() != b.rows())
        throw MatrixError("solve: lhs has " + std::to_string(a.rows()) + " rows, rhs has " +
                          std::to_string(b.rows()));
    const F f = a.field();
    auto rr = rref(Matrix<F>::hcat(a, b));
    for (int c : rr.pivot_columns)
        if (c >= a.cols()) return std::nullopt;
    Matrix<F> x(f, a.cols(), b.cols());
    for (int i = 0; i < rr.rank; ++i)
        for (int j = 0; j < b.cols(); ++j)
            x.at(rr.pivot_columns[i], j) = rr.reduced.at(i, a.cols() + j);
    return x;
}

}  // namespace koszul
