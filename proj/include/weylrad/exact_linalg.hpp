#pragma once

#include <algorithm>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "integer.hpp"

namespace weylrad {

/// Dense row-major matrix of arbitrary-precision integers.
class IntMatrix {
public:
    IntMatrix() = default;
    IntMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}
    IntMatrix(std::initializer_list<std::initializer_list<long long>> init)
    {
        rows_ = init.size();
        cols_ = rows_ ? init.begin()->size() : 0;
        data_.reserve(rows_ * cols_);
        for (const auto& r : init) {
            if (r.size() != cols_)
                throw InvalidArgument("ragged matrix literal");
            for (long long x : r)
                data_.emplace_back(x);
        }
    }

    static IntMatrix identity(std::size_t n)
    {
        IntMatrix m(n, n);
        for (std::size_t i = 0; i < n; ++i)
            m(i, i) = 1;
        return m;
    }

    static IntMatrix from_rows(const std::vector<std::vector<Integer>>& rows, std::size_t cols)
    {
        IntMatrix m(rows.size(), cols);
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (rows[i].size() != cols)
                throw InvalidArgument("row length mismatch");
            for (std::size_t j = 0; j < cols; ++j)
                m(i, j) = rows[i][j];
        }
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    Integer& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    const Integer& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    std::span<Integer> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
    std::span<const Integer> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }
    std::vector<Integer> row_vector(std::size_t r) const { return {row(r).begin(), row(r).end()}; }

    const std::vector<Integer>& entries() const { return data_; }

    IntMatrix transpose() const
    {
        IntMatrix t(cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j)
                t(j, i) = (*this)(i, j);
        return t;
    }

    bool is_zero() const
    {
        return std::all_of(data_.begin(), data_.end(), [](const Integer& x) { return x == 0; });
    }

    bool is_square() const { return rows_ == cols_; }

    bool is_symmetric() const
    {
        if (!is_square())
            return false;
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = i + 1; j < cols_; ++j)
                if ((*this)(i, j) != (*this)(j, i))
                    return false;
        return true;
    }

    void swap_rows(std::size_t a, std::size_t b)
    {
        if (a == b)
            return;
        for (std::size_t j = 0; j < cols_; ++j)
            std::swap((*this)(a, j), (*this)(b, j));
    }

    void swap_cols(std::size_t a, std::size_t b)
    {
        if (a == b)
            return;
        for (std::size_t i = 0; i < rows_; ++i)
            std::swap((*this)(i, a), (*this)(i, b));
    }

    /// row[dst] += factor * row[src]
    void add_row_multiple(std::size_t dst, std::size_t src, const Integer& factor)
    {
        if (factor == 0)
            return;
        for (std::size_t j = 0; j < cols_; ++j)
            if ((*this)(src, j) != 0)
                (*this)(dst, j) += factor * (*this)(src, j);
    }

    void add_col_multiple(std::size_t dst, std::size_t src, const Integer& factor)
    {
        if (factor == 0)
            return;
        for (std::size_t i = 0; i < rows_; ++i)
            if ((*this)(i, src) != 0)
                (*this)(i, dst) += factor * (*this)(i, src);
    }

    void negate_row(std::size_t r)
    {
        for (auto& x : row(r))
            x = -x;
    }

    friend IntMatrix operator*(const IntMatrix& a, const IntMatrix& b)
    {
        if (a.cols_ != b.rows_)
            throw InvalidArgument("matrix product dimension mismatch");
        IntMatrix c(a.rows_, b.cols_);
        for (std::size_t i = 0; i < a.rows_; ++i)
            for (std::size_t k = 0; k < a.cols_; ++k) {
                const Integer& x = a(i, k);
                if (x == 0)
                    continue;
                for (std::size_t j = 0; j < b.cols_; ++j)
                    if (b(k, j) != 0)
                        c(i, j) += x * b(k, j);
            }
        return c;
    }

    friend IntMatrix operator+(IntMatrix a, const IntMatrix& b)
    {
        if (a.rows_ != b.rows_ || a.cols_ != b.cols_)
            throw InvalidArgument("matrix sum dimension mismatch");
        for (std::size_t i = 0; i < a.data_.size(); ++i)
            a.data_[i] += b.data_[i];
        return a;
    }

    friend IntMatrix operator-(IntMatrix a, const IntMatrix& b)
    {
        if (a.rows_ != b.rows_ || a.cols_ != b.cols_)
            throw InvalidArgument("matrix difference dimension mismatch");
        for (std::size_t i = 0; i < a.data_.size(); ++i)
            a.data_[i] -= b.data_[i];
        return a;
    }

    std::vector<Integer> apply(const std::vector<Integer>& v) const
    {
        if (v.size() != cols_)
            throw InvalidArgument("matrix-vector dimension mismatch");
        std::vector<Integer> out(rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j)
                if ((*this)(i, j) != 0 && v[j] != 0)
                    out[i] += (*this)(i, j) * v[j];
        return out;
    }

    friend bool operator==(const IntMatrix&, const IntMatrix&) = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<Integer> data_;
};

using ModVector = std::vector<std::int64_t>;

/// Matrix over the prime field F_p with entries in [0, p).
class ModMatrix {
public:
    ModMatrix(std::int64_t p, std::size_t rows, std::size_t cols) : p_(p), rows_(rows), cols_(cols), data_(rows * cols, 0)
    {
        require_prime(p);
    }

    ModMatrix(const IntMatrix& m, std::int64_t p) : ModMatrix(p, m.rows(), m.cols())
    {
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j)
                (*this)(i, j) = mod_reduce(m(i, j), p);
    }

    static ModMatrix identity(std::int64_t p, std::size_t n)
    {
        ModMatrix m(p, n, n);
        for (std::size_t i = 0; i < n; ++i)
            m(i, i) = 1 % p;
        return m;
    }

    std::int64_t prime() const { return p_; }
    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    std::int64_t& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    std::int64_t operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    std::vector<ModVector> row_vectors() const
    {
        std::vector<ModVector> out(rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            out[i].assign(data_.begin() + i * cols_, data_.begin() + (i + 1) * cols_);
        return out;
    }

    ModMatrix transpose() const
    {
        ModMatrix t(p_, cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j)
                t(j, i) = (*this)(i, j);
        return t;
    }

    friend ModMatrix operator*(const ModMatrix& a, const ModMatrix& b)
    {
        if (a.cols_ != b.rows_ || a.p_ != b.p_)
            throw InvalidArgument("modular matrix product mismatch");
        ModMatrix c(a.p_, a.rows_, b.cols_);
        for (std::size_t i = 0; i < a.rows_; ++i)
            for (std::size_t k = 0; k < a.cols_; ++k) {
                std::int64_t x = a(i, k);
                if (x == 0)
                    continue;
                for (std::size_t j = 0; j < b.cols_; ++j)
                    c(i, j) = (c(i, j) + x * b(k, j)) % a.p_;
            }
        return c;
    }

    ModVector apply(const ModVector& v) const
    {
        ModVector out(rows_, 0);
        for (std::size_t i = 0; i < rows_; ++i) {
            std::int64_t s = 0;
            for (std::size_t j = 0; j < cols_; ++j)
                s = (s + (*this)(i, j) * v[j]) % p_;
            out[i] = s;
        }
        return out;
    }

    friend bool operator==(const ModMatrix&, const ModMatrix&) = default;

private:
    std::int64_t p_;
    std::size_t rows_;
    std::size_t cols_;
    std::vector<std::int64_t> data_;
};

// ---------------------------------------------------------------------------
// Prime-field row reduction

/// Reduced row echelon form of a list of row vectors over F_p.
struct EchelonForm {
    std::vector<ModVector> rows;     // nonzero rows, leading entry 1
    std::vector<std::size_t> pivots; // pivot column of each row
    std::size_t dim = 0;             // ambient dimension

    std::size_t rank() const { return rows.size(); }
};

inline EchelonForm rref_mod_p(std::vector<ModVector> rows, std::size_t dim, std::int64_t p)
{
    for (auto& r : rows) {
        if (r.size() != dim)
            throw InvalidArgument("vector length mismatch in row reduction");
        for (auto& x : r) {
            x %= p;
            if (x < 0)
                x += p;
        }
    }
    EchelonForm ef;
    ef.dim = dim;
    std::size_t r = 0;
    for (std::size_t c = 0; c < dim && r < rows.size(); ++c) {
        std::size_t piv = r;
        while (piv < rows.size() && rows[piv][c] == 0)
            ++piv;
        if (piv == rows.size())
            continue;
        std::swap(rows[r], rows[piv]);
        std::int64_t inv = mod_inverse(rows[r][c], p);
        for (auto& x : rows[r])
            x = x * inv % p;
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (i == r || rows[i][c] == 0)
                continue;
            std::int64_t f = rows[i][c];
            for (std::size_t j = c; j < dim; ++j)
                rows[i][j] = ((rows[i][j] - f * rows[r][j]) % p + p) % p;
        }
        ef.pivots.push_back(c);
        ++r;
    }
    rows.resize(r);
    ef.rows = std::move(rows);
    return ef;
}

/// Reduce v against an echelon form; returns the residue (zero iff v lies in the span).
inline ModVector reduce_mod_p(const EchelonForm& ef, ModVector v, std::int64_t p)
{
    for (auto& x : v) {
        x %= p;
        if (x < 0)
            x += p;
    }
    for (std::size_t i = 0; i < ef.rows.size(); ++i) {
        std::int64_t f = v[ef.pivots[i]];
        if (f == 0)
            continue;
        for (std::size_t j = 0; j < v.size(); ++j)
            v[j] = ((v[j] - f * ef.rows[i][j]) % p + p) % p;
    }
    return v;
}

inline bool is_zero(const ModVector& v)
{
    return std::all_of(v.begin(), v.end(), [](std::int64_t x) { return x == 0; });
}

inline bool in_span_mod_p(const EchelonForm& ef, const ModVector& v, std::int64_t p)
{
    return is_zero(reduce_mod_p(ef, v, p));
}

/// Null space {v : M v = 0} of the matrix whose rows are given.
inline std::vector<ModVector> kernel_of_rows(const std::vector<ModVector>& rows, std::size_t cols, std::int64_t p)
{
    EchelonForm ef = rref_mod_p(rows, cols, p);
    std::vector<bool> is_pivot(cols, false);
    for (auto c : ef.pivots)
        is_pivot[c] = true;
    std::vector<ModVector> basis;
    for (std::size_t f = 0; f < cols; ++f) {
        if (is_pivot[f])
            continue;
        ModVector v(cols, 0);
        v[f] = 1;
        for (std::size_t i = 0; i < ef.rows.size(); ++i)
            v[ef.pivots[i]] = (p - ef.rows[i][f]) % p;
        basis.push_back(std::move(v));
    }
    return basis;
}

inline std::size_t rank_mod_p(const IntMatrix& m, std::int64_t p)
{
    require_prime(p);
    return rref_mod_p(ModMatrix(m, p).row_vectors(), m.cols(), p).rank();
}

inline std::vector<ModVector> kernel_mod_p(const IntMatrix& m, std::int64_t p)
{
    require_prime(p);
    return kernel_of_rows(ModMatrix(m, p).row_vectors(), m.cols(), p);
}

/// Intersection of subspaces of F_p^dim, each given by a spanning set.
/// Stacks the annihilator of every subspace and takes the common null space.
inline std::vector<ModVector> intersect_mod_p(const std::vector<std::vector<ModVector>>& spans, std::size_t dim,
                                              std::int64_t p)
{
    require_prime(p);
    std::vector<ModVector> constraints;
    for (const auto& span : spans) {
        for (const auto& v : span)
            if (v.size() != dim)
                throw InvalidArgument("subspace of dimension " + std::to_string(v.size()) +
                                      " in ambient of dimension " + std::to_string(dim));
        auto ann = kernel_of_rows(span, dim, p);
        constraints.insert(constraints.end(), ann.begin(), ann.end());
    }
    auto meet = kernel_of_rows(constraints, dim, p);
    return rref_mod_p(meet, dim, p).rows;
}

inline bool same_subspace_mod_p(const std::vector<ModVector>& a, const std::vector<ModVector>& b, std::size_t dim,
                                std::int64_t p)
{
    auto ea = rref_mod_p(a, dim, p);
    auto eb = rref_mod_p(b, dim, p);
    return ea.rows == eb.rows;
}

// ---------------------------------------------------------------------------
// Integer normal forms

namespace detail {

inline Integer floor_div(const Integer& a, const Integer& b)
{
    Integer q = a / b;
    if (a % b != 0 && ((a < 0) != (b < 0)))
        q -= 1;
    return q;
}

} // namespace detail

struct HermiteResult {
    IntMatrix h; ///< row-style Hermite normal form (zero rows last)
    IntMatrix u; ///< unimodular, u * m == h
    std::vector<std::size_t> pivots;
};

inline HermiteResult hermite_normal_form(const IntMatrix& m)
{
    IntMatrix h = m;
    IntMatrix u = IntMatrix::identity(m.rows());
    std::vector<std::size_t> pivots;
    std::size_t r = 0;
    for (std::size_t c = 0; c < h.cols() && r < h.rows(); ++c) {
        for (;;) {
            std::optional<std::size_t> best;
            for (std::size_t i = r; i < h.rows(); ++i)
                if (h(i, c) != 0 && (!best || abs(h(i, c)) < abs(h(*best, c))))
                    best = i;
            if (!best)
                break;
            h.swap_rows(r, *best);
            u.swap_rows(r, *best);
            bool clean = true;
            for (std::size_t i = r + 1; i < h.rows(); ++i) {
                if (h(i, c) == 0)
                    continue;
                Integer q = h(i, c) / h(r, c);
                h.add_row_multiple(i, r, -q);
                u.add_row_multiple(i, r, -q);
                if (h(i, c) != 0)
                    clean = false;
            }
            if (clean)
                break;
        }
        if (h(r, c) == 0)
            continue;
        if (h(r, c) < 0) {
            h.negate_row(r);
            u.negate_row(r);
        }
        for (std::size_t i = 0; i < r; ++i) {
            Integer q = detail::floor_div(h(i, c), h(r, c));
            h.add_row_multiple(i, r, -q);
            u.add_row_multiple(i, r, -q);
        }
        pivots.push_back(c);
        ++r;
    }
    return {std::move(h), std::move(u), std::move(pivots)};
}

/// Nonzero invariant factors d1 | d2 | ... of an integer matrix.
inline std::vector<Integer> smith_normal_form(const IntMatrix& m)
{
    IntMatrix a = m;
    std::vector<Integer> diag;
    const std::size_t n = std::min(a.rows(), a.cols());
    for (std::size_t t = 0; t < n; ++t) {
        for (;;) {
            // smallest nonzero entry of the trailing block becomes the pivot
            std::optional<std::pair<std::size_t, std::size_t>> best;
            for (std::size_t i = t; i < a.rows(); ++i)
                for (std::size_t j = t; j < a.cols(); ++j)
                    if (a(i, j) != 0 && (!best || abs(a(i, j)) < abs(a(best->first, best->second))))
                        best = {i, j};
            if (!best)
                goto done;
            a.swap_rows(t, best->first);
            a.swap_cols(t, best->second);
            bool clean = true;
            for (std::size_t i = t + 1; i < a.rows(); ++i) {
                if (a(i, t) == 0)
                    continue;
                a.add_row_multiple(i, t, -(a(i, t) / a(t, t)));
                if (a(i, t) != 0)
                    clean = false;
            }
            for (std::size_t j = t + 1; j < a.cols(); ++j) {
                if (a(t, j) == 0)
                    continue;
                a.add_col_multiple(j, t, -(a(t, j) / a(t, t)));
                if (a(t, j) != 0)
                    clean = false;
            }
            if (!clean)
                continue;
            // divisibility: fold an offending row into the pivot row and retry
            std::optional<std::size_t> offending;
            for (std::size_t i = t + 1; i < a.rows() && !offending; ++i)
                for (std::size_t j = t + 1; j < a.cols(); ++j)
                    if (a(i, j) % a(t, t) != 0) {
                        offending = i;
                        break;
                    }
            if (!offending)
                break;
            a.add_row_multiple(t, *offending, 1);
        }
        diag.push_back(abs(a(t, t)));
    }
done:
    return diag;
}

/// Determinant by fraction-free (Bareiss) elimination.
inline Integer determinant(const IntMatrix& m)
{
    if (!m.is_square())
        throw InvalidArgument("determinant of a non-square matrix");
    const std::size_t n = m.rows();
    if (n == 0)
        return 1;
    IntMatrix a = m;
    Integer sign = 1;
    Integer prev = 1;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (a(k, k) == 0) {
            std::size_t s = k + 1;
            while (s < n && a(s, k) == 0)
                ++s;
            if (s == n)
                return 0;
            a.swap_rows(k, s);
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < n; ++i)
            for (std::size_t j = k + 1; j < n; ++j)
                a(i, j) = (a(i, j) * a(k, k) - a(i, k) * a(k, j)) / prev;
        prev = a(k, k);
    }
    return sign * a(n - 1, n - 1);
}

using RationalMatrix = std::vector<std::vector<Rational>>;

/// Exact inverse over Q; nullopt when singular.
inline std::optional<RationalMatrix> rational_inverse(const IntMatrix& m)
{
    if (!m.is_square())
        throw InvalidArgument("inverse of a non-square matrix");
    const std::size_t n = m.rows();
    RationalMatrix a(n, std::vector<Rational>(2 * n));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j)
            a[i][j] = Rational(m(i, j));
        a[i][n + i] = 1;
    }
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t piv = c;
        while (piv < n && a[piv][c] == 0)
            ++piv;
        if (piv == n)
            return std::nullopt;
        std::swap(a[c], a[piv]);
        Rational inv = 1 / a[c][c];
        for (auto& x : a[c])
            x *= inv;
        for (std::size_t i = 0; i < n; ++i) {
            if (i == c || a[i][c] == 0)
                continue;
            Rational f = a[i][c];
            for (std::size_t j = 0; j < 2 * n; ++j)
                a[i][j] -= f * a[c][j];
        }
    }
    RationalMatrix inv(n, std::vector<Rational>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            inv[i][j] = a[i][n + j];
    return inv;
}

/// Rank over Q.
inline std::size_t rational_rank(const IntMatrix& m)
{
    IntMatrix h = hermite_normal_form(m).h;
    std::size_t r = 0;
    for (std::size_t i = 0; i < h.rows(); ++i) {
        auto row = h.row(i);
        if (std::any_of(row.begin(), row.end(), [](const Integer& x) { return x != 0; }))
            ++r;
    }
    return r;
}

} // namespace weylrad
