#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "integer.hpp"

namespace weylrad {

/// Sparse integer vector keyed by coordinate index; zero coefficients are never stored.
using SparseVector = std::map<std::size_t, Integer>;

inline void add_scaled(SparseVector& acc, const SparseVector& v, const Integer& factor)
{
    if (factor == 0)
        return;
    for (const auto& [i, c] : v) {
        auto& slot = acc[i];
        slot += factor * c;
        if (slot == 0)
            acc.erase(i);
    }
}

inline void add_term(SparseVector& acc, std::size_t i, const Integer& c)
{
    if (c == 0)
        return;
    auto& slot = acc[i];
    slot += c;
    if (slot == 0)
        acc.erase(i);
}

inline SparseVector scaled(SparseVector v, const Integer& factor)
{
    if (factor == 0)
        return {};
    for (auto& [i, c] : v)
        c *= factor;
    return v;
}

/// Exact division of every coefficient; throws VerificationFailure if some entry is not divisible.
inline SparseVector divided_exactly(SparseVector v, const Integer& d, const char* what)
{
    for (auto& [i, c] : v) {
        if (c % d != 0)
            throw VerificationFailure(std::string("non-integral ") + what + ": coefficient " + c.str() +
                                      " not divisible by " + d.str());
        c /= d;
    }
    return v;
}

inline std::vector<Integer> to_dense(const SparseVector& v, std::size_t dim)
{
    std::vector<Integer> out(dim);
    for (const auto& [i, c] : v)
        out.at(i) = c;
    return out;
}

inline SparseVector to_sparse(const std::vector<Integer>& v)
{
    SparseVector out;
    for (std::size_t i = 0; i < v.size(); ++i)
        if (v[i] != 0)
            out[i] = v[i];
    return out;
}

} // namespace weylrad
