#pragma once

#include <random>
#include <stdexcept>

#include "weylrad/exact_linalg.hpp"
#include "weylrad/schur.hpp"
#include "weylrad/weyl_module.hpp"

namespace fixture {

using weylrad::Filling;
using weylrad::IntMatrix;
using weylrad::Integer;
using weylrad::WeylModule;
using weylrad::factorial;
using weylrad::YoungDiagram;

/// The contravariant form of the sl_3 adjoint module on its Chevalley basis
/// in the order X13, X12, X23, H12, H23, Y12, Y23, Y13.
inline IntMatrix sl3_adjoint_form()
{
    return {{1, 0, 0, 0, 0, 0, 0, 0},  {0, 1, 0, 0, 0, 0, 0, 0}, {0, 0, 1, 0, 0, 0, 0, 0},
            {0, 0, 0, 2, -1, 0, 0, 0}, {0, 0, 0, -1, 2, 0, 0, 0}, {0, 0, 0, 0, 0, 1, 0, 0},
            {0, 0, 0, 0, 0, 0, 1, 0},  {0, 0, 0, 0, 0, 0, 0, 1}};
}

inline IntMatrix random_matrix(std::mt19937& rng, std::size_t r, std::size_t c, int lo, int hi)
{
    std::uniform_int_distribution<int> d(lo, hi);
    IntMatrix m(r, c);
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < c; ++j)
            m(i, j) = d(rng);
    return m;
}

/// A product of elementary matrices: determinant +-1 by construction.
inline IntMatrix random_unimodular(std::mt19937& rng, std::size_t n, int steps = 12)
{
    IntMatrix u = IntMatrix::identity(n);
    if (n < 2)
        return u;
    std::uniform_int_distribution<std::size_t> pick(0, n - 1);
    std::uniform_int_distribution<int> mult(-2, 2);
    for (int s = 0; s < steps; ++s) {
        std::size_t a = pick(rng), b = pick(rng);
        if (a == b)
            continue;
        IntMatrix e = IntMatrix::identity(n);
        e(a, b) = mult(rng);
        u = e * u;
    }
    return u;
}

// Build a filling from its column word (columns left to right, each read bottom to top).
inline Filling from_word(const YoungDiagram& shape, const std::vector<int>& word)
{
    Filling f;
    std::size_t at = 0;
    for (int len : shape.columns()) {
        std::vector<int> col(word.begin() + at, word.begin() + at + len);
        std::reverse(col.begin(), col.end());
        f.columns.push_back(col);
        at += len;
    }
    return f;
}

// Every filling of the shape with entries in [1, m].
inline std::vector<Filling> all_fillings(const YoungDiagram& shape, int m)
{
    std::vector<Filling> out;
    std::vector<int> word(shape.boxes(), 1);
    for (;;) {
        out.push_back(from_word(shape, word));
        std::size_t i = 0;
        while (i < word.size() && word[i] == m)
            word[i++] = 1;
        if (i == word.size())
            break;
        ++word[i];
    }
    return out;
}

// Row partitions of d with at most max_rows rows.
inline void partitions(int d, int max_part, int max_rows, std::vector<int>& cur, std::vector<std::vector<int>>& out)
{
    if (d == 0) {
        out.push_back(cur);
        return;
    }
    if (static_cast<int>(cur.size()) == max_rows)
        return;
    for (int p = std::min(d, max_part); p >= 1; --p) {
        cur.push_back(p);
        partitions(d - p, p, max_rows, cur, out);
        cur.pop_back();
    }
}

inline IntMatrix bracket(const IntMatrix& a, const IntMatrix& b) { return a * b - b * a; }

// Coordinates of a traceless 3x3 matrix in (X13, X12, X23, H12, H23, Y12, Y23, Y13).
inline std::vector<Integer> sl3_coordinates(const IntMatrix& m)
{
    return {m(0, 2), m(0, 1), m(1, 2), m(0, 0), -m(2, 2), m(1, 0), m(2, 1), m(2, 0)};
}

// Replays every generator of the lattice inside the adjoint representation of sl_3, v+ = X13.
// Column s of the result is basis vector s in the Chevalley basis X13, ..., Y13.
inline IntMatrix adjoint_change_of_basis(const WeylModule& M)
{
    const auto& cb = M.chevalley();
    const auto& L = M.lattice();
    std::vector<IntMatrix> images;
    for (const auto& g : L.generators()) {
        if (g.parent < 0) {
            IntMatrix top(3, 3);
            top(0, 2) = 1;
            images.push_back(top);
            continue;
        }
        IntMatrix v = images.at(g.parent);
        for (unsigned s = 0; s < g.a; ++s)
            v = bracket(cb.Y(g.root), v);
        Integer fa = factorial(g.a);
        for (std::size_t i = 0; i < 3; ++i)
            for (std::size_t j = 0; j < 3; ++j) {
                if (v(i, j) % fa != 0)
                    throw std::logic_error("divided power left the adjoint lattice");
                v(i, j) /= fa;
            }
        images.push_back(v);
    }
    IntMatrix C(8, L.rank());
    for (std::size_t s = 0; s < L.rank(); ++s) {
        IntMatrix acc(3, 3);
        for (const auto& [g, c] : L.provenance(s))
            for (std::size_t i = 0; i < 3; ++i)
                for (std::size_t j = 0; j < 3; ++j)
                    acc(i, j) += c * images[g](i, j);
        auto coords = sl3_coordinates(acc);
        for (std::size_t r = 0; r < 8; ++r)
            C(r, s) = coords[r];
    }
    return C;
}

} // namespace fixture
