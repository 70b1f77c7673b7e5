#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <stdexcept>
#include <utility>
#include <vector>

namespace clgeo {

using Rational = mpq_class;
using BigInt = mpz_class;

/// Dense matrix over Q. All arithmetic in this module is exact; there is
/// no floating point anywhere on the rank/kernel/row-space paths.
/// Entries assigned from outside must be in canonical form (mpq_class
/// built from two integers needs canonicalize(); everything produced by
/// gmpxx arithmetic already is).
class RationalMatrix {
public:
    RationalMatrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), entries_(rows * cols) {}

    static RationalMatrix identity(std::size_t n) {
        RationalMatrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m.at(i, i) = 1;
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    Rational& at(std::size_t r, std::size_t c) { return entries_[r * cols_ + c]; }
    const Rational& at(std::size_t r, std::size_t c) const { return entries_[r * cols_ + c]; }

    RationalMatrix transposed() const {
        RationalMatrix t(cols_, rows_);
        for (std::size_t r = 0; r < rows_; ++r)
            for (std::size_t c = 0; c < cols_; ++c) t.at(c, r) = at(r, c);
        return t;
    }

    RationalMatrix with_appended_row(const std::vector<Rational>& v) const {
        if (v.size() != cols_) throw std::invalid_argument("appended row has wrong length");
        RationalMatrix m(rows_ + 1, cols_);
        m.entries_ = entries_;
        m.entries_.insert(m.entries_.end(), v.begin(), v.end());
        m.rows_ = rows_ + 1;
        return m;
    }

private:
    std::size_t rows_, cols_;
    std::vector<Rational> entries_;
};

struct RrefResult {
    RationalMatrix matrix;
    std::vector<std::size_t> pivot_cols;
};

/// Reduced row echelon form via exact Gauss-Jordan elimination. Pivot
/// choice is positional (first nonzero entry), so results are
/// deterministic.
inline RrefResult rref(RationalMatrix m) {
    std::vector<std::size_t> pivots;
    std::size_t pivot_row = 0;
    for (std::size_t col = 0; col < m.cols() && pivot_row < m.rows(); ++col) {
        std::size_t sel = pivot_row;
        while (sel < m.rows() && m.at(sel, col) == 0) ++sel;
        if (sel == m.rows()) continue;
        if (sel != pivot_row)
            for (std::size_t c = col; c < m.cols(); ++c) std::swap(m.at(sel, c), m.at(pivot_row, c));
        Rational inv_pivot = 1 / m.at(pivot_row, col);
        for (std::size_t c = col; c < m.cols(); ++c) m.at(pivot_row, c) *= inv_pivot;
        for (std::size_t r = 0; r < m.rows(); ++r) {
            if (r == pivot_row || m.at(r, col) == 0) continue;
            Rational factor = m.at(r, col);
            for (std::size_t c = col; c < m.cols(); ++c) m.at(r, c) -= factor * m.at(pivot_row, c);
        }
        pivots.push_back(col);
        ++pivot_row;
    }
    return {std::move(m), std::move(pivots)};
}

inline std::size_t rank(const RationalMatrix& m) { return rref(m).pivot_cols.size(); }

/// Basis of the right null space {v : Mv = 0}, one vector per free
/// column, ordered by increasing free column index.
inline std::vector<std::vector<Rational>> kernel_basis(const RationalMatrix& m) {
    RrefResult r = rref(m);
    std::vector<bool> is_pivot(m.cols(), false);
    for (std::size_t c : r.pivot_cols) is_pivot[c] = true;
    std::vector<std::vector<Rational>> basis;
    for (std::size_t f = 0; f < m.cols(); ++f) {
        if (is_pivot[f]) continue;
        std::vector<Rational> v(m.cols());
        v[f] = 1;
        for (std::size_t i = 0; i < r.pivot_cols.size(); ++i) v[r.pivot_cols[i]] = -r.matrix.at(i, f);
        basis.push_back(std::move(v));
    }
    return basis;
}

inline Rational dot(const std::vector<Rational>& a, const std::vector<Rational>& b) {
    if (a.size() != b.size()) throw std::invalid_argument("dot product dimension mismatch");
    Rational acc = 0;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (a[i] != 0 && b[i] != 0) acc += a[i] * b[i];
    return acc;
}

/// True iff v lies in the span of the rows of M, decided by comparing
/// rank(M) with the rank of M extended by v.
inline bool row_space_contains(const RationalMatrix& m, const std::vector<Rational>& v) {
    if (v.size() != m.cols()) throw std::invalid_argument("vector length does not match column count");
    return rank(m.with_appended_row(v)) == rank(m);
}

/// Kernel basis rescaled to primitive integer vectors (each kernel vector
/// times the lcm of its denominators, divided by the gcd of the results).
inline std::vector<std::vector<BigInt>> kernel_basis_integral(const RationalMatrix& m) {
    std::vector<std::vector<BigInt>> out;
    for (const auto& v : kernel_basis(m)) {
        BigInt lcm = 1;
        for (const auto& x : v) mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), x.get_den().get_mpz_t());
        std::vector<BigInt> w(v.size());
        BigInt gcd = 0;
        for (std::size_t i = 0; i < v.size(); ++i) {
            w[i] = v[i].get_num() * (lcm / v[i].get_den());
            mpz_gcd(gcd.get_mpz_t(), gcd.get_mpz_t(), w[i].get_mpz_t());
        }
        if (gcd > 1)
            for (auto& x : w) x /= gcd;
        out.push_back(std::move(w));
    }
    return out;
}

}  // namespace clgeo
