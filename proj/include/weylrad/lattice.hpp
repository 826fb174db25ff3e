#pragma once

#include <algorithm>
#include <concepts>
#include <deque>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "exact_linalg.hpp"
#include "parallel.hpp"
#include "root_data.hpp"
#include "sparse.hpp"

namespace weylrad {

/// What lattice generation needs from a module: weight-graded coordinates and divided powers
/// of the root operators. Y is `lower`, X is `raise`.
template <class A>
concept LatticeAction = requires(const A& a, std::size_t i, unsigned n, const SparseVector& v) {
    { a.weight(i) } -> std::convertible_to<Weight>;
    { a.num_roots() } -> std::convertible_to<std::size_t>;
    { a.root_height(i) } -> std::convertible_to<int>;
    { a.lower(i, n, v) } -> std::same_as<SparseVector>;
    { a.raise(i, n, v) } -> std::same_as<SparseVector>;
};

/// A vector produced during generation: parent with Y_root^(a) applied, or v+ itself.
struct Generator {
    SparseVector vec;
    long parent = -1;
    std::size_t root = 0;
    unsigned a = 0;
    std::size_t block = 0;
};

struct WeightBlock {
    Weight weight;
    int depth = 0;                    ///< height of lambda - mu
    std::vector<std::size_t> columns; ///< ambient coordinates touched by the block
    std::vector<std::size_t> gens;    ///< generator indices living in this block
    IntMatrix hnf;                    ///< nonzero HNF rows over `columns`
    std::vector<std::size_t> pivots;  ///< pivot column (local) per HNF row
    IntMatrix transform;              ///< hnf = transform * (generator rows)
    std::vector<std::size_t> basis;   ///< global basis index of each HNF row
};

class LatticeModule;

template <LatticeAction A>
LatticeModule generate_lattice(const A& action, const SparseVector& vplus, std::size_t max_lattice = 1024);

/// Free Z-module U_Z v+ with weights and, for every basis vector, a witness as a combination of generators.
class LatticeModule {
public:
    std::size_t rank() const { return basis_.size(); }
    const std::vector<SparseVector>& basis() const { return basis_; }
    const SparseVector& basis_vector(std::size_t i) const { return basis_[i]; }
    const Weight& weight(std::size_t i) const { return blocks_[block_of_[i]].weight; }
    int depth(std::size_t i) const { return blocks_[block_of_[i]].depth; }
    const std::vector<Generator>& generators() const { return gens_; }
    const std::vector<WeightBlock>& blocks() const { return blocks_; }
    std::size_t block_of(std::size_t basis_index) const { return block_of_[basis_index]; }
    const Weight& highest_weight() const { return blocks_.front().weight; }

    /// Witness: basis_i = sum of coefficient * generator.
    std::vector<std::pair<std::size_t, Integer>> provenance(std::size_t i) const
    {
        const auto& b = blocks_[block_of_[i]];
        std::size_t row = std::find(b.basis.begin(), b.basis.end(), i) - b.basis.begin();
        std::vector<std::pair<std::size_t, Integer>> out;
        for (std::size_t j = 0; j < b.gens.size(); ++j)
            if (b.transform(row, j) != 0)
                out.emplace_back(b.gens[j], b.transform(row, j));
        return out;
    }

    /// Lattice coordinates of an ambient vector, or nullopt if it is not in the lattice.
    std::optional<std::vector<Integer>> try_coordinates(const SparseVector& v) const
    {
        std::vector<Integer> out(rank());
        std::map<std::size_t, SparseVector> parts;
        for (const auto& [i, c] : v) {
            auto it = column_block_.find(i);
            if (it == column_block_.end())
                return std::nullopt;
            parts[it->second][i] = c;
        }
        for (auto& [bi, part] : parts) {
            const auto& b = blocks_[bi];
            std::vector<Integer> local(b.columns.size());
            for (const auto& [i, c] : part)
                local[local_column(b, i)] = c;
            for (std::size_t r = 0; r < b.hnf.rows(); ++r) {
                const Integer& lead = b.hnf(r, b.pivots[r]);
                const Integer& x = local[b.pivots[r]];
                if (x == 0)
                    continue;
                if (x % lead != 0)
                    return std::nullopt;
                Integer q = x / lead;
                for (std::size_t c = 0; c < local.size(); ++c)
                    if (b.hnf(r, c) != 0)
                        local[c] -= q * b.hnf(r, c);
                out[b.basis[r]] = q;
            }
            if (std::any_of(local.begin(), local.end(), [](const Integer& x) { return x != 0; }))
                return std::nullopt;
        }
        return out;
    }

    std::vector<Integer> coordinates(const SparseVector& v) const
    {
        auto c = try_coordinates(v);
        if (!c)
            throw VerificationFailure("vector is not in the lattice");
        return *c;
    }

    bool contains(const SparseVector& v) const { return try_coordinates(v).has_value(); }

    SparseVector from_coordinates(const std::vector<Integer>& c) const
    {
        SparseVector out;
        for (std::size_t i = 0; i < c.size(); ++i)
            add_scaled(out, basis_[i], c[i]);
        return out;
    }

    /// Matrix with the basis vectors as rows in ambient coordinates.
    IntMatrix basis_matrix(std::size_t ambient_dim) const
    {
        IntMatrix m(rank(), ambient_dim);
        for (std::size_t i = 0; i < rank(); ++i)
            for (const auto& [j, c] : basis_[i])
                m(i, j) = c;
        return m;
    }

private:
    template <LatticeAction A>
    friend LatticeModule generate_lattice(const A&, const SparseVector&, std::size_t);

    static std::size_t local_column(const WeightBlock& b, std::size_t ambient)
    {
        return std::lower_bound(b.columns.begin(), b.columns.end(), ambient) - b.columns.begin();
    }

    /// Rebuild the HNF of a block from its generators.
    void rehnf(WeightBlock& b)
    {
        std::vector<std::size_t> cols;
        for (auto g : b.gens)
            for (const auto& [i, c] : gens_[g].vec)
                cols.push_back(i);
        std::sort(cols.begin(), cols.end());
        cols.erase(std::unique(cols.begin(), cols.end()), cols.end());
        b.columns = cols;
        IntMatrix m(b.gens.size(), cols.size());
        for (std::size_t r = 0; r < b.gens.size(); ++r)
            for (const auto& [i, c] : gens_[b.gens[r]].vec)
                m(r, local_column(b, i)) = c;
        auto h = hermite_normal_form(m);
        std::size_t rk = h.pivots.size();
        b.hnf = IntMatrix(rk, cols.size());
        b.transform = IntMatrix(rk, b.gens.size());
        for (std::size_t r = 0; r < rk; ++r) {
            for (std::size_t c = 0; c < cols.size(); ++c)
                b.hnf(r, c) = h.h(r, c);
            for (std::size_t c = 0; c < b.gens.size(); ++c)
                b.transform(r, c) = h.u(r, c);
        }
        b.pivots = h.pivots;
    }

    bool block_contains(const WeightBlock& b, const SparseVector& v) const
    {
        std::vector<Integer> local(b.columns.size());
        for (const auto& [i, c] : v) {
            if (!std::binary_search(b.columns.begin(), b.columns.end(), i))
                return false;
            local[local_column(b, i)] = c;
        }
        for (std::size_t r = 0; r < b.hnf.rows(); ++r) {
            const Integer& x = local[b.pivots[r]];
            if (x == 0)
                continue;
            const Integer& lead = b.hnf(r, b.pivots[r]);
            if (x % lead != 0)
                return false;
            Integer q = x / lead;
            for (std::size_t c = 0; c < local.size(); ++c)
                if (b.hnf(r, c) != 0)
                    local[c] -= q * b.hnf(r, c);
        }
        return std::all_of(local.begin(), local.end(), [](const Integer& x) { return x == 0; });
    }

    std::vector<Generator> gens_;
    std::vector<WeightBlock> blocks_;
    std::vector<SparseVector> basis_;
    std::vector<std::size_t> block_of_;
    std::map<std::size_t, std::size_t> column_block_;
};

/// Closure of v+ under every Y_alpha^(a); HNF per weight block keeps a Z-basis with provenance.
template <LatticeAction A>
LatticeModule generate_lattice(const A& action, const SparseVector& vplus, std::size_t max_lattice)
{
    if (vplus.empty())
        throw InvalidArgument("highest-weight vector is zero");
    LatticeModule L;
    std::map<Weight, std::size_t> block_index;
    auto weight_of = [&](const SparseVector& v) {
        Weight w = action.weight(v.begin()->first);
        for (const auto& [i, c] : v)
            if (action.weight(i) != w)
                throw VerificationFailure("generator is not a weight vector");
        return w;
    };
    for (std::size_t r = 0; r < action.num_roots(); ++r)
        for (unsigned a = 1; a <= 2; ++a)
            if (!action.raise(r, a, vplus).empty())
                throw InvalidArgument("vector is not annihilated by the raising operators");

    std::size_t total_rank = 0;
    auto add = [&](SparseVector v, long parent, std::size_t root, unsigned a, int depth) {
        Weight w = weight_of(v);
        auto [it, fresh] = block_index.try_emplace(w, L.blocks_.size());
        if (fresh) {
            L.blocks_.push_back({});
            L.blocks_.back().weight = w;
            L.blocks_.back().depth = depth;
        }
        WeightBlock& b = L.blocks_[it->second];
        if (!fresh && L.block_contains(b, v))
            return false;
        std::size_t before = b.hnf.rows();
        L.gens_.push_back({std::move(v), parent, root, a, it->second});
        b.gens.push_back(L.gens_.size() - 1);
        L.rehnf(b);
        total_rank += b.hnf.rows() - before;
        if (total_rank > max_lattice)
            throw CapExceeded("lattice rank exceeds cap " + std::to_string(max_lattice));
        return true;
    };

    add(vplus, -1, 0, 0, 0);
    std::deque<std::size_t> queue{0};
    while (!queue.empty()) {
        std::size_t g = queue.front();
        queue.pop_front();
        int depth = L.blocks_[L.gens_[g].block].depth;
        for (std::size_t r = 0; r < action.num_roots(); ++r) {
            for (unsigned a = 1;; ++a) {
                SparseVector img = action.lower(r, a, L.gens_[g].vec);
                if (img.empty())
                    break;
                if (add(std::move(img), static_cast<long>(g), r, a, depth + static_cast<int>(a) * action.root_height(r)))
                    queue.push_back(L.gens_.size() - 1);
            }
        }
    }

    // Order: depth ascending, then weight descending. v+ gets index 0.
    std::vector<std::size_t> order(L.blocks_.size());
    for (std::size_t i = 0; i < order.size(); ++i)
        order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
        const auto& bx = L.blocks_[x];
        const auto& by = L.blocks_[y];
        if (bx.depth != by.depth)
            return bx.depth < by.depth;
        return bx.weight > by.weight;
    });
    std::vector<std::size_t> remap(order.size());
    std::vector<WeightBlock> sorted;
    for (std::size_t i = 0; i < order.size(); ++i) {
        remap[order[i]] = i;
        sorted.push_back(std::move(L.blocks_[order[i]]));
    }
    L.blocks_ = std::move(sorted);
    for (auto& g : L.gens_)
        g.block = remap[g.block];
    for (std::size_t bi = 0; bi < L.blocks_.size(); ++bi) {
        auto& b = L.blocks_[bi];
        b.basis.clear();
        for (std::size_t r = 0; r < b.hnf.rows(); ++r) {
            SparseVector v;
            for (std::size_t c = 0; c < b.columns.size(); ++c)
                if (b.hnf(r, c) != 0)
                    v[b.columns[c]] = b.hnf(r, c);
            b.basis.push_back(L.basis_.size());
            L.basis_.push_back(std::move(v));
            L.block_of_.push_back(bi);
        }
        for (auto c : b.columns)
            L.column_block_[c] = bi;
    }
    if (L.blocks_.front().basis.size() != 1)
        throw VerificationFailure("highest weight space of the lattice is not one-dimensional");
    return L;
}

/// Matrix of X_root^(a) (or Y when lowering) in lattice coordinates: column j is the image of basis j.
template <LatticeAction A>
IntMatrix operator_matrix(const A& action, const LatticeModule& L, std::size_t root, unsigned a, bool lowering)
{
    IntMatrix m(L.rank(), L.rank());
    for (std::size_t j = 0; j < L.rank(); ++j) {
        SparseVector img = lowering ? action.lower(root, a, L.basis_vector(j)) : action.raise(root, a, L.basis_vector(j));
        auto c = L.try_coordinates(img);
        if (!c)
            throw VerificationFailure("lattice is not closed under a divided power");
        for (std::size_t i = 0; i < L.rank(); ++i)
            m(i, j) = (*c)[i];
    }
    return m;
}

/// beta(generator, w) by walking the generator's ancestry: beta(Y^(a) u, w) = beta(u, X^(a) w).
template <LatticeAction A>
Integer pair_with_generator(const A& action, const LatticeModule& L, std::size_t g, SparseVector w)
{
    const auto& gens = L.generators();
    long cur = static_cast<long>(g);
    while (cur > 0) {
        if (w.empty())
            return 0;
        const auto& gen = gens[cur];
        w = action.raise(gen.root, gen.a, w);
        cur = gen.parent;
    }
    if (w.empty())
        return 0;
    // w now has weight lambda; compare it with v+
    const auto& vplus = gens[0].vec;
    const auto& [i0, c0] = *vplus.begin();
    auto it = w.find(i0);
    Integer coeff = it == w.end() ? Integer(0) : it->second;
    if (coeff % c0 != 0)
        throw VerificationFailure("top-weight component is not a multiple of v+");
    coeff /= c0;
    SparseVector check = scaled(vplus, coeff);
    if (check != w)
        throw VerificationFailure("contravariance recursion left the highest-weight line");
    return coeff;
}

/// Gram matrix of the contravariant form on the lattice basis, computed block by block.
template <LatticeAction A>
IntMatrix contravariant_gram(const A& action, const LatticeModule& L)
{
    IntMatrix G(L.rank(), L.rank());
    const auto& blocks = L.blocks();
    // one task per basis vector t: its pairings against every generator of its block
    std::vector<std::vector<Integer>> pairing(L.rank());
    parallel_for(L.rank(), [&](std::size_t t) {
        const auto& b = blocks[L.block_of(t)];
        pairing[t].resize(b.gens.size());
        for (std::size_t j = 0; j < b.gens.size(); ++j)
            pairing[t][j] = pair_with_generator(action, L, b.gens[j], L.basis_vector(t));
    });
    for (const auto& b : blocks)
        for (std::size_t rs = 0; rs < b.basis.size(); ++rs)
            for (std::size_t rt = 0; rt < b.basis.size(); ++rt) {
                Integer v = 0;
                for (std::size_t j = 0; j < b.gens.size(); ++j)
                    if (b.transform(rs, j) != 0)
                        v += b.transform(rs, j) * pairing[b.basis[rt]][j];
                G(b.basis[rs], b.basis[rt]) = v;
            }
    if (!G.is_symmetric())
        throw VerificationFailure("contravariant Gram matrix is not symmetric");
    if (G(0, 0) != 1)
        throw VerificationFailure("beta(v+, v+) != 1");
    return G;
}

} // namespace weylrad
