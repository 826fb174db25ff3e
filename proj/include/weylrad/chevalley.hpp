#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "exact_linalg.hpp"
#include "root_data.hpp"
#include "sparse.hpp"

namespace weylrad {

/// The natural module V of a classical type with its basis A and bilinear form.
/// Type A carries the orthonormal form; B/C/D carry the matrix zeta.
struct NaturalModule {
    DiagramType type;
    int rank;
    std::size_t dim;
    IntMatrix form;
    std::vector<std::string> labels;
    std::vector<Weight> weights; // filled once the Cartan subalgebra is known

    /// Position of a_i (1 <= i <= n, or n+1 for type A) in the basis order.
    std::size_t pos(int i) const { return type == DiagramType::B ? i : i - 1; }
    /// Position of a_{n+i} for the polar types.
    std::size_t neg(int i) const { return pos(i) + rank; }
};

inline NaturalModule natural_module(DiagramType type, int rank)
{
    RootSystem rs(type, rank); // validates the pair
    NaturalModule nat{type, rank, 0, {}, {}, {}};
    const int n = rank;
    switch (type) {
    case DiagramType::A:
        nat.dim = n + 1;
        nat.form = IntMatrix::identity(nat.dim);
        for (int i = 1; i <= n + 1; ++i)
            nat.labels.push_back("a" + std::to_string(i));
        break;
    case DiagramType::B:
        nat.dim = 2 * n + 1;
        nat.form = IntMatrix(nat.dim, nat.dim);
        nat.form(0, 0) = 2;
        for (int i = 1; i <= n; ++i) {
            nat.form(i, n + i) = 1;
            nat.form(n + i, i) = 1;
        }
        for (int i = 0; i <= 2 * n; ++i)
            nat.labels.push_back("a" + std::to_string(i));
        break;
    case DiagramType::C:
    case DiagramType::D:
        nat.dim = 2 * n;
        nat.form = IntMatrix(nat.dim, nat.dim);
        for (int i = 0; i < n; ++i) {
            nat.form(i, n + i) = 1;
            nat.form(n + i, i) = type == DiagramType::C ? -1 : 1;
        }
        for (int i = 1; i <= 2 * n; ++i)
            nat.labels.push_back("a" + std::to_string(i));
        break;
    case DiagramType::E:
        throw InvalidArgument("no natural module is modelled for type E");
    }
    return nat;
}

/// Sparse view of a natural-module operator: column c maps e_c to sum of value * e_row.
struct NaturalOp {
    std::vector<std::vector<std::pair<std::size_t, Integer>>> columns;

    static NaturalOp from_matrix(const IntMatrix& m)
    {
        NaturalOp op;
        op.columns.resize(m.cols());
        for (std::size_t c = 0; c < m.cols(); ++c)
            for (std::size_t r = 0; r < m.rows(); ++r)
                if (m(r, c) != 0)
                    op.columns[c].emplace_back(r, m(r, c));
        return op;
    }
};

struct ChevalleyOperator {
    enum class Kind { X, Y, H };
    Kind kind;
    std::size_t index; // positive-root index for X/Y, 0-based node for H
    IntMatrix matrix;
    std::string label;
};

/// Index of a positive root together with a sign; negative means the Y side.
struct SignedRoot {
    std::size_t root;
    bool negative = false;
};

/// Chevalley basis of a classical Lie algebra realised on its natural module.
class ChevalleyBasis {
public:
    ChevalleyBasis(DiagramType type, int rank) : rs_(type, rank), nat_(natural_module(type, rank))
    {
        build();
    }

    const RootSystem& root_system() const { return rs_; }
    const NaturalModule& natural() const { return nat_; }
    std::size_t num_positive_roots() const { return X_.size(); }

    const IntMatrix& X(std::size_t root) const { return X_.at(root); }
    const IntMatrix& Y(std::size_t root) const { return Y_.at(root); }
    const IntMatrix& H(int node0) const { return H_.at(node0); }
    const IntMatrix& matrix(SignedRoot r) const { return r.negative ? Y(r.root) : X(r.root); }
    const NaturalOp& op(SignedRoot r) const { return r.negative ? Yop_.at(r.root) : Xop_.at(r.root); }

    std::vector<ChevalleyOperator> generators() const
    {
        std::vector<ChevalleyOperator> out;
        for (std::size_t a = 0; a < X_.size(); ++a) {
            out.push_back({ChevalleyOperator::Kind::X, a, X_[a], "X" + std::to_string(a + 1)});
            out.push_back({ChevalleyOperator::Kind::Y, a, Y_[a], "Y" + std::to_string(a + 1)});
        }
        for (int i = 0; i < rs_.rank(); ++i)
            out.push_back({ChevalleyOperator::Kind::H, static_cast<std::size_t>(i), H_[i], "H" + std::to_string(i + 1)});
        return out;
    }

    /// The anti-automorphism tau on natural-module matrices: transpose, twisted by h = diag(2,1,...,1) for B.
    IntMatrix tau(const IntMatrix& g) const
    {
        IntMatrix t = g.transpose();
        if (nat_.type != DiagramType::B)
            return t;
        for (std::size_t r = 0; r < t.rows(); ++r)
            for (std::size_t c = 0; c < t.cols(); ++c) {
                Integer v = t(r, c) * (c == 0 ? 2 : 1);
                if (r == 0) {
                    if (v % 2 != 0)
                        throw VerificationFailure("tau twist is not integral on this matrix");
                    v /= 2;
                }
                t(r, c) = v;
            }
        return t;
    }

    ChevalleyOperator tau(const ChevalleyOperator& op) const
    {
        using K = ChevalleyOperator::Kind;
        K kind = op.kind == K::X ? K::Y : op.kind == K::Y ? K::X : K::H;
        std::string label = op.label;
        if (kind != K::H)
            label[0] = kind == K::X ? 'X' : 'Y';
        return {kind, op.index, tau(op.matrix), label};
    }

    /// x_alpha(t) on the natural module modulo p: sum over a of t^a X^a / a!.
    ModMatrix group_element(SignedRoot r, std::int64_t t, std::int64_t p) const
    {
        const IntMatrix& m = matrix(r);
        IntMatrix power = IntMatrix::identity(nat_.dim);
        ModMatrix out = ModMatrix::identity(p, nat_.dim);
        for (unsigned a = 1;; ++a) {
            power = power * m;
            if (power.is_zero())
                break;
            Integer fa = factorial(a);
            std::int64_t ta = mod_pow(t, a, p);
            for (std::size_t i = 0; i < nat_.dim; ++i)
                for (std::size_t j = 0; j < nat_.dim; ++j) {
                    if (power(i, j) == 0)
                        continue;
                    if (power(i, j) % fa != 0)
                        throw VerificationFailure("divided power of a natural generator is not integral");
                    out(i, j) = (out(i, j) + ta * mod_reduce(power(i, j) / fa, p)) % p;
                }
        }
        return out;
    }

private:
    // eps-coordinate bookkeeping: natural basis weights and root vectors in the eps basis
    std::vector<int> eps_weight(std::size_t b) const
    {
        const int n = rs_.rank();
        if (nat_.type == DiagramType::A) {
            std::vector<int> w(n + 1, 0);
            w[b] = 1;
            return w;
        }
        std::vector<int> w(n, 0);
        if (nat_.type == DiagramType::B && b == 0)
            return w;
        for (int i = 1; i <= n; ++i) {
            if (b == nat_.pos(i))
                w[i - 1] = 1;
            if (b == nat_.neg(i))
                w[i - 1] = -1;
        }
        return w;
    }

    std::vector<int> eps_of_simple(int i) const // 1-based node
    {
        const int n = rs_.rank();
        std::vector<int> e(nat_.type == DiagramType::A ? n + 1 : n, 0);
        bool last = i == n;
        if (!last || nat_.type == DiagramType::A) {
            e[i - 1] = 1;
            e[i] = -1;
            return e;
        }
        switch (nat_.type) {
        case DiagramType::B: e[n - 1] = 1; break;
        case DiagramType::C: e[n - 1] = 2; break;
        case DiagramType::D: e[n - 2] = 1; e[n - 1] = 1; break;
        default: break;
        }
        return e;
    }

    void build()
    {
        const int n = rs_.rank();
        const std::size_t N = nat_.dim;
        auto E = [N](std::size_t r, std::size_t c, int v) {
            IntMatrix m(N, N);
            m(r, c) = v;
            return m;
        };
        std::vector<IntMatrix> raising;
        if (nat_.type == DiagramType::A) {
            for (std::size_t i = 0; i < N; ++i)
                for (std::size_t j = i + 1; j < N; ++j)
                    raising.push_back(E(i, j, 1));
        } else {
            const bool sym = nat_.type == DiagramType::C;
            for (int i = 1; i <= n; ++i)
                for (int j = i + 1; j <= n; ++j) {
                    raising.push_back(E(nat_.pos(i), nat_.pos(j), 1) - E(nat_.neg(j), nat_.neg(i), 1));
                    raising.push_back(E(nat_.pos(i), nat_.neg(j), 1) + E(nat_.pos(j), nat_.neg(i), sym ? 1 : -1));
                }
            for (int i = 1; i <= n; ++i) {
                if (nat_.type == DiagramType::C)
                    raising.push_back(E(nat_.pos(i), nat_.neg(i), 1));
                if (nat_.type == DiagramType::B)
                    raising.push_back(E(nat_.pos(i), 0, 2) - E(0, nat_.neg(i), 1));
            }
        }

        // Weight of a raising matrix in eps coordinates, read off any nonzero entry.
        auto eps_of = [&](const IntMatrix& m) {
            for (std::size_t r = 0; r < N; ++r)
                for (std::size_t c = 0; c < N; ++c)
                    if (m(r, c) != 0) {
                        auto wr = eps_weight(r), wc = eps_weight(c);
                        for (std::size_t k = 0; k < wr.size(); ++k)
                            wr[k] -= wc[k];
                        return wr;
                    }
            throw VerificationFailure("zero raising operator");
        };

        const auto& pos = rs_.positive_roots();
        X_.resize(pos.size());
        std::vector<bool> filled(pos.size(), false);
        for (const auto& m : raising) {
            auto e = eps_of(m);
            std::optional<std::size_t> slot;
            for (std::size_t a = 0; a < pos.size(); ++a) {
                std::vector<int> ea(e.size(), 0);
                for (int i = 0; i < n; ++i) {
                    auto s = eps_of_simple(i + 1);
                    for (std::size_t k = 0; k < e.size(); ++k)
                        ea[k] += pos[a][i] * s[k];
                }
                if (ea == e)
                    slot = a;
            }
            if (!slot || filled[*slot])
                throw VerificationFailure("raising operator does not match a unique positive root");
            X_[*slot] = m;
            filled[*slot] = true;
        }
        if (!std::all_of(filled.begin(), filled.end(), [](bool b) { return b; }))
            throw VerificationFailure("missing root vectors in the natural realisation");

        for (const auto& x : X_)
            Y_.push_back(tau(x));
        for (int i = 0; i < n; ++i)
            H_.push_back(X_[i] * Y_[i] - Y_[i] * X_[i]);

        nat_.weights.assign(N, rs_.zero_weight());
        for (int i = 0; i < n; ++i)
            for (std::size_t b = 0; b < N; ++b) {
                for (std::size_t c = 0; c < N; ++c)
                    if (c != b && H_[i](b, c) != 0)
                        throw VerificationFailure("Cartan element is not diagonal on the natural basis");
                nat_.weights[b][i] = H_[i](b, b).convert_to<int>();
            }
        for (const auto& x : X_)
            Xop_.push_back(NaturalOp::from_matrix(x));
        for (const auto& y : Y_)
            Yop_.push_back(NaturalOp::from_matrix(y));
    }

    RootSystem rs_;
    NaturalModule nat_;
    std::vector<IntMatrix> X_, Y_, H_;
    std::vector<NaturalOp> Xop_, Yop_;
};

inline std::vector<ChevalleyOperator> chevalley_generators(const ChevalleyBasis& cb) { return cb.generators(); }

// ---------------------------------------------------------------------------
// Ambient module: tensor product over groups (k, l) of the l-th divided power of the k-th exterior power.

/// One tensor factor: l copies of the k-th exterior power, symmetrised.
struct AmbientGroup {
    int k;
    int l;
};

/// Groups for lambda = sum c_k lambda_k; every nonzero coefficient gives one group.
/// The zero weight gets no groups: the ambient is then the trivial module on the empty key.
inline std::vector<AmbientGroup> groups_for_weight(const Weight& lambda)
{
    std::vector<AmbientGroup> g;
    for (std::size_t i = 0; i < lambda.size(); ++i) {
        if (lambda[i] < 0)
            throw InvalidArgument("weight " + to_string(lambda) + " is not dominant");
        if (lambda[i] > 0)
            g.push_back({static_cast<int>(i) + 1, lambda[i]});
    }
    return g;
}

class AmbientModule {
public:
    /// Each key lists the subsets (as bitmasks over the natural basis) group by group, sorted inside a group.
    using Key = std::vector<std::uint32_t>;

    AmbientModule(const ChevalleyBasis& cb, std::vector<AmbientGroup> groups, std::size_t max_ambient = 4096)
        : cb_(&cb), groups_(std::move(groups))
    {
        const std::size_t N = cb.natural().dim;
        if (N > 31)
            throw InvalidArgument("natural module too large for the ambient encoding");
        Integer predicted = 1;
        for (const auto& g : groups_) {
            if (g.k < 1 || g.k > static_cast<int>(N) || g.l < 1)
                throw InvalidArgument("exterior degree " + std::to_string(g.k) + " out of range");
            Integer wedge = binomial(N, g.k);
            predicted *= binomial(static_cast<long long>(wedge) + g.l - 1, g.l);
        }
        if (predicted > max_ambient)
            throw CapExceeded("ambient dimension " + predicted.str() + " exceeds cap " + std::to_string(max_ambient));
        enumerate();
    }

    const ChevalleyBasis& basis() const { return *cb_; }
    const std::vector<AmbientGroup>& groups() const { return groups_; }
    std::size_t dim() const { return keys_.size(); }
    const Key& key(std::size_t i) const { return keys_[i]; }
    const Weight& weight(std::size_t i) const { return weights_[i]; }

    std::size_t index(const Key& k) const
    {
        auto it = index_.find(k);
        if (it == index_.end())
            throw VerificationFailure("ambient key not found");
        return it->second;
    }

    /// Tensor of a_1 ^ ... ^ a_k over every factor.
    SparseVector highest_weight_vector() const
    {
        Key k;
        for (const auto& g : groups_) {
            std::uint32_t mask = 0;
            for (int i = 1; i <= g.k; ++i)
                mask |= 1u << cb_->natural().pos(i);
            for (int c = 0; c < g.l; ++c)
                k.push_back(mask);
        }
        return {{index(k), Integer(1)}};
    }

    /// Lie algebra action of a natural-module operator (derivation rule on every factor).
    SparseVector apply(const NaturalOp& op, const SparseVector& v) const
    {
        SparseVector out;
        for (const auto& [i, c] : v)
            for (const auto& [j, d] : apply_basis(op, i))
                add_term(out, j, c * d);
        return out;
    }

    /// X^a / a! applied to v, asserting integrality.
    SparseVector apply_divided(const NaturalOp& op, unsigned a, SparseVector v) const
    {
        for (unsigned s = 0; s < a && !v.empty(); ++s)
            v = apply(op, v);
        return a < 2 ? v : divided_exactly(std::move(v), factorial(a), "divided power");
    }

    SparseVector apply_divided(SignedRoot r, unsigned a, const SparseVector& v) const
    {
        return apply_divided(cb_->op(r), a, v);
    }

    /// x_alpha(t) v modulo p. Input coefficients are taken mod p; output is reduced to [0, p).
    SparseVector group_element_apply(SignedRoot r, std::int64_t t, const SparseVector& v, std::int64_t p) const
    {
        require_prime(p);
        SparseVector out;
        for (unsigned a = 0;; ++a) {
            SparseVector da = a == 0 ? v : apply_divided(cb_->op(r), a, v);
            if (da.empty())
                break;
            add_scaled(out, da, mod_pow(t, a, p));
        }
        for (auto it = out.begin(); it != out.end();) {
            it->second = mod_reduce(it->second, p);
            it = it->second == 0 ? out.erase(it) : std::next(it);
        }
        return out;
    }

    /// Diagonal of the tensor form induced by the orthonormal form on each factor (type A only).
    Integer tensor_form_diagonal(std::size_t i) const
    {
        if (cb_->natural().type != DiagramType::A)
            throw InvalidArgument("the orthonormal ambient form exists only in type A");
        Integer r = 1;
        std::size_t off = 0;
        for (const auto& g : groups_) {
            r *= factorial(g.l);
            std::size_t s = off;
            while (s < off + g.l) {
                std::size_t e = s;
                while (e < off + g.l && keys_[i][e] == keys_[i][s])
                    ++e;
                r /= factorial(static_cast<unsigned>(e - s));
                s = e;
            }
            off += g.l;
        }
        return r;
    }

    /// The form zeta^ on a single exterior power: det zeta[J][J'].
    Integer wedge_form(std::size_t i, std::size_t j) const
    {
        if (groups_.size() != 1 || groups_[0].l != 1)
            throw InvalidArgument("wedge form needs a single exterior power");
        auto J = subset_indices(keys_[i][0]);
        auto Jp = subset_indices(keys_[j][0]);
        IntMatrix m(J.size(), J.size());
        for (std::size_t r = 0; r < J.size(); ++r)
            for (std::size_t c = 0; c < J.size(); ++c)
                m(r, c) = cb_->natural().form(J[r], Jp[c]);
        return determinant(m);
    }

    std::string label(std::size_t i) const
    {
        const auto& lab = cb_->natural().labels;
        std::string s;
        std::size_t off = 0;
        for (std::size_t g = 0; g < groups_.size(); ++g) {
            for (int c = 0; c < groups_[g].l; ++c) {
                if (!s.empty())
                    s += (c == 0 ? " (x) " : " . ");
                std::string w;
                for (auto b : subset_indices(keys_[i][off + c]))
                    w += (w.empty() ? "" : "^") + lab[b];
                s += w;
            }
            off += groups_[g].l;
        }
        return s;
    }

    static std::vector<std::size_t> subset_indices(std::uint32_t mask)
    {
        std::vector<std::size_t> out;
        for (std::size_t b = 0; mask; ++b, mask >>= 1)
            if (mask & 1u)
                out.push_back(b);
        return out;
    }

private:
    void enumerate()
    {
        const std::size_t N = cb_->natural().dim;
        std::vector<std::vector<std::uint32_t>> subsets(groups_.size());
        for (std::size_t g = 0; g < groups_.size(); ++g)
            for (std::uint32_t m = 0; m < (1u << N); ++m)
                if (std::popcount(m) == groups_[g].k)
                    subsets[g].push_back(m);

        // multisets of size l over each subset list, then the product over groups
        std::vector<std::vector<Key>> per_group(groups_.size());
        for (std::size_t g = 0; g < groups_.size(); ++g) {
            Key cur;
            auto rec = [&](auto&& self, std::size_t start) -> void {
                if (static_cast<int>(cur.size()) == groups_[g].l) {
                    per_group[g].push_back(cur);
                    return;
                }
                for (std::size_t s = start; s < subsets[g].size(); ++s) {
                    cur.push_back(subsets[g][s]);
                    self(self, s);
                    cur.pop_back();
                }
            };
            rec(rec, 0);
        }
        Key cur;
        auto prod = [&](auto&& self, std::size_t g) -> void {
            if (g == groups_.size()) {
                index_.emplace(cur, keys_.size());
                keys_.push_back(cur);
                return;
            }
            for (const auto& part : per_group[g]) {
                cur.insert(cur.end(), part.begin(), part.end());
                self(self, g + 1);
                cur.resize(cur.size() - part.size());
            }
        };
        prod(prod, 0);

        const auto& nw = cb_->natural().weights;
        for (const auto& k : keys_) {
            Weight w = cb_->root_system().zero_weight();
            for (auto mask : k)
                for (auto b : subset_indices(mask))
                    for (std::size_t i = 0; i < w.size(); ++i)
                        w[i] += nw[b][i];
            weights_.push_back(w);
        }
    }

    /// Action on one exterior factor: replace one index, restore the sorted order, and track the sign.
    static std::vector<std::pair<std::uint32_t, Integer>> wedge_action(const NaturalOp& op, std::uint32_t mask)
    {
        std::vector<std::pair<std::uint32_t, Integer>> out;
        for (auto c : subset_indices(mask)) {
            for (const auto& [r, val] : op.columns[c]) {
                std::uint32_t rest = mask & ~(1u << c);
                if (rest & (1u << r))
                    continue;
                std::uint32_t lo = std::min(r, c), hi = std::max(r, c);
                std::uint32_t between = rest & ((1u << hi) - 1) & ~((1u << (lo + 1)) - 1);
                int sign = (std::popcount(between) % 2) ? -1 : 1;
                out.emplace_back(rest | (1u << r), sign * val);
            }
        }
        return out;
    }

    SparseVector apply_basis(const NaturalOp& op, std::size_t i) const
    {
        SparseVector out;
        const Key& k = keys_[i];
        std::size_t off = 0;
        for (const auto& g : groups_) {
            std::size_t end = off + g.l;
            for (std::size_t s = off; s < end; ++s) {
                if (s > off && k[s] == k[s - 1])
                    continue; // each distinct factor once: divided-power derivation
                for (const auto& [mask, coef] : wedge_action(op, k[s])) {
                    Key nk = k;
                    nk[s] = mask;
                    std::sort(nk.begin() + off, nk.begin() + end);
                    auto mult = std::count(nk.begin() + off, nk.begin() + end, mask);
                    add_term(out, index(nk), coef * static_cast<long long>(mult));
                }
            }
            off = end;
        }
        return out;
    }

    const ChevalleyBasis* cb_;
    std::vector<AmbientGroup> groups_;
    std::vector<Key> keys_;
    std::map<Key, std::size_t> index_;
    std::vector<Weight> weights_;
};

} // namespace weylrad
