#pragma once

#include <algorithm>
#include <compare>
#include <deque>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "integer.hpp"

namespace weylrad {

enum class DiagramType { A, B, C, D, E };

inline char letter(DiagramType t) { return "ABCDE"[static_cast<int>(t)]; }

inline DiagramType parse_diagram_type(std::string_view s)
{
    if (s.size() == 1) {
        switch (s[0]) {
        case 'A': case 'a': return DiagramType::A;
        case 'B': case 'b': return DiagramType::B;
        case 'C': case 'c': return DiagramType::C;
        case 'D': case 'd': return DiagramType::D;
        case 'E': case 'e': return DiagramType::E;
        default: break;
        }
    }
    throw InvalidArgument("unknown diagram type '" + std::string(s) + "'");
}

/// Node labels follow Bourbaki and are 1-based wherever a set of nodes is passed around.
using NodeSet = std::vector<int>;

/// A weight in the fundamental-weight basis: coeffs[i] is the coefficient of lambda_{i+1}.
struct Weight {
    std::vector<int> coeffs;

    bool dominant() const
    {
        return std::all_of(coeffs.begin(), coeffs.end(), [](int c) { return c >= 0; });
    }

    std::size_t size() const { return coeffs.size(); }
    int operator[](std::size_t i) const { return coeffs[i]; }
    int& operator[](std::size_t i) { return coeffs[i]; }

    friend auto operator<=>(const Weight&, const Weight&) = default;
    friend bool operator==(const Weight&, const Weight&) = default;
};

inline std::string to_string(const Weight& w)
{
    std::string s = "(";
    for (std::size_t i = 0; i < w.coeffs.size(); ++i) {
        if (i)
            s += ",";
        s += std::to_string(w.coeffs[i]);
    }
    return s + ")";
}

using Root = std::vector<int>; // coordinates in the simple-root basis

/// Element of the Weyl group stored as a word w = s_{word[0]} s_{word[1]} ... (1-based nodes).
struct WeylElement {
    std::vector<int> word;

    std::size_t length() const { return word.size(); }
};

class RootSystem {
public:
    RootSystem(DiagramType type, int rank) : type_(type), rank_(rank)
    {
        build_cartan();
        build_roots();
    }

    DiagramType type() const { return type_; }
    int rank() const { return rank_; }
    std::string name() const { return std::string(1, letter(type_)) + std::to_string(rank_); }

    /// cartan()[i][j] = alpha_j(H_i), 0-based.
    const std::vector<std::vector<int>>& cartan() const { return cartan_; }
    int cartan(int i, int j) const { return cartan_[i][j]; }

    /// Squared root length of alpha_i up to a common factor (2 for long, 1 for short in B/C).
    int symmetrizer(int i) const { return d_[i]; }

    const std::vector<Root>& positive_roots() const { return positive_; }
    std::vector<Root> simple_roots() const { return {positive_.begin(), positive_.begin() + rank_}; }

    std::optional<std::size_t> positive_root_index(const Root& r) const
    {
        auto it = std::find(positive_.begin(), positive_.end(), r);
        if (it == positive_.end())
            return std::nullopt;
        return static_cast<std::size_t>(it - positive_.begin());
    }

    static int height(const Root& r)
    {
        int h = 0;
        for (int c : r)
            h += c;
        return h;
    }

    /// beta(H_i) for a root in simple coordinates (0-based i).
    int root_pairing(const Root& beta, int i) const
    {
        int s = 0;
        for (int k = 0; k < rank_; ++k)
            s += cartan_[i][k] * beta[k];
        return s;
    }

    /// The weight of a root expressed in the fundamental-weight basis.
    Weight root_weight(const Root& beta) const
    {
        Weight w{std::vector<int>(rank_)};
        for (int i = 0; i < rank_; ++i)
            w[i] = root_pairing(beta, i);
        return w;
    }

    Root reflect_root(int i, Root beta) const
    {
        beta[i] -= root_pairing(beta, i);
        return beta;
    }

    /// s_i(mu) = mu - mu(H_i) alpha_i, in fundamental-weight coordinates (0-based i).
    Weight reflect_weight(int i, Weight mu) const
    {
        int c = mu[i];
        for (int j = 0; j < rank_; ++j)
            mu[j] -= c * cartan_[j][i];
        return mu;
    }

    Weight apply(const WeylElement& w, Weight mu) const
    {
        for (auto it = w.word.rbegin(); it != w.word.rend(); ++it)
            mu = reflect_weight(*it - 1, std::move(mu));
        return mu;
    }

    Root apply(const WeylElement& w, Root beta) const
    {
        for (auto it = w.word.rbegin(); it != w.word.rend(); ++it)
            beta = reflect_root(*it - 1, std::move(beta));
        return beta;
    }

    Weight zero_weight() const { return Weight{std::vector<int>(rank_, 0)}; }

    /// lambda_K = sum of fundamental weights over K (1-based nodes).
    Weight lambda(const NodeSet& K) const
    {
        Weight w = zero_weight();
        for (int k : K) {
            check_node(k);
            w[k - 1] += 1;
        }
        return w;
    }

    void check_node(int k) const
    {
        if (k < 1 || k > rank_)
            throw InvalidArgument("node " + std::to_string(k) + " out of range for " + name());
    }

    NodeSet all_nodes() const
    {
        NodeSet n(rank_);
        for (int i = 0; i < rank_; ++i)
            n[i] = i + 1;
        return n;
    }

private:
    void build_cartan()
    {
        const int n = rank_;
        auto bad = [&] {
            throw InvalidArgument("unsupported diagram " + std::string(1, letter(type_)) + std::to_string(n));
        };
        switch (type_) {
        case DiagramType::A: if (n < 1) bad(); break;
        case DiagramType::B:
        case DiagramType::C: if (n < 2) bad(); break;
        case DiagramType::D: if (n < 3) bad(); break;
        case DiagramType::E: if (n != 6 && n != 7) bad(); break;
        }
        cartan_.assign(n, std::vector<int>(n, 0));
        d_.assign(n, 1);
        for (int i = 0; i < n; ++i)
            cartan_[i][i] = 2;
        auto link = [&](int a, int b) { // 1-based, simply laced edge
            cartan_[a - 1][b - 1] = -1;
            cartan_[b - 1][a - 1] = -1;
        };
        switch (type_) {
        case DiagramType::A:
            for (int i = 1; i < n; ++i)
                link(i, i + 1);
            break;
        case DiagramType::B:
            for (int i = 1; i < n; ++i)
                link(i, i + 1);
            cartan_[n - 1][n - 2] = -2; // alpha_n short
            for (int i = 0; i + 1 < n; ++i)
                d_[i] = 2;
            break;
        case DiagramType::C:
            for (int i = 1; i < n; ++i)
                link(i, i + 1);
            cartan_[n - 2][n - 1] = -2; // alpha_n long
            d_[n - 1] = 2;
            break;
        case DiagramType::D:
            for (int i = 1; i + 1 < n; ++i)
                link(i, i + 1);
            link(n - 2, n);
            break;
        case DiagramType::E:
            link(1, 3);
            link(3, 4);
            link(4, 5);
            link(5, 6);
            link(2, 4);
            if (n == 7)
                link(6, 7);
            break;
        }
    }

    void build_roots()
    {
        std::set<Root> seen;
        std::deque<Root> queue;
        for (int i = 0; i < rank_; ++i) {
            Root r(rank_, 0);
            r[i] = 1;
            seen.insert(r);
            queue.push_back(r);
        }
        while (!queue.empty()) {
            Root r = queue.front();
            queue.pop_front();
            for (int i = 0; i < rank_; ++i) {
                Root s = reflect_root(i, r);
                if (seen.insert(s).second)
                    queue.push_back(s);
            }
        }
        for (const auto& r : seen)
            if (std::all_of(r.begin(), r.end(), [](int c) { return c >= 0; }))
                positive_.push_back(r);
        std::sort(positive_.begin(), positive_.end(), [](const Root& a, const Root& b) {
            int ha = height(a), hb = height(b);
            if (ha != hb)
                return ha < hb;
            return a > b;
        });
    }

    DiagramType type_;
    int rank_;
    std::vector<std::vector<int>> cartan_;
    std::vector<int> d_;
    std::vector<Root> positive_;
};

inline RootSystem build_root_system(DiagramType type, int rank) { return RootSystem(type, rank); }

namespace detail {

inline void check_node_set(const RootSystem& rs, const NodeSet& J)
{
    if (J.empty())
        throw InvalidArgument("empty node set");
    for (int j : J)
        rs.check_node(j);
}

} // namespace detail

/// Longest element of the parabolic subgroup W_J.
/// Drives rho_J to its antidominant image one positive coordinate at a time.
inline WeylElement longest_element(const RootSystem& rs, const NodeSet& J)
{
    detail::check_node_set(rs, J);
    std::vector<int> nodes(J);
    std::sort(nodes.begin(), nodes.end());
    nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());
    Weight mu = rs.lambda(nodes);
    std::vector<int> applied;
    for (;;) {
        auto it = std::find_if(nodes.begin(), nodes.end(), [&](int j) { return mu[j - 1] > 0; });
        if (it == nodes.end())
            break;
        mu = rs.reflect_weight(*it - 1, mu);
        applied.push_back(*it);
    }
    // applied sequence s_{a1}, then s_{a2}, ... composes to s_{aL} ... s_{a1}
    return WeylElement{{applied.rbegin(), applied.rend()}};
}

/// The involution j -> opp(j) on J defined by w_J(alpha_j) = -alpha_{opp(j)}.
inline std::map<int, int> opposition_map(const RootSystem& rs, const NodeSet& J)
{
    WeylElement w = longest_element(rs, J);
    std::map<int, int> opp;
    for (int j : J) {
        Root a(rs.rank(), 0);
        a[j - 1] = 1;
        Root img = rs.apply(w, a);
        for (int& c : img)
            c = -c;
        int target = -1;
        for (int i = 0; i < rs.rank(); ++i)
            if (img[i] == 1 && RootSystem::height(img) == 1)
                target = i + 1;
        if (target < 0)
            throw VerificationFailure("w_J does not send alpha_" + std::to_string(j) + " to a negative simple root");
        opp[j] = target;
    }
    return opp;
}

/// Image of a node set under the full opposition involution.
inline NodeSet opposite_type(const RootSystem& rs, const NodeSet& K)
{
    auto opp = opposition_map(rs, rs.all_nodes());
    NodeSet out;
    for (int k : K)
        out.push_back(opp.at(k));
    std::sort(out.begin(), out.end());
    return out;
}

inline std::set<Weight> weyl_orbit(const RootSystem& rs, const Weight& lambda)
{
    if (static_cast<int>(lambda.size()) != rs.rank())
        throw InvalidArgument("weight length does not match rank");
    std::set<Weight> orbit{lambda};
    std::deque<Weight> queue{lambda};
    while (!queue.empty()) {
        Weight mu = queue.front();
        queue.pop_front();
        for (int i = 0; i < rs.rank(); ++i) {
            if (mu[i] == 0)
                continue;
            Weight nu = rs.reflect_weight(i, mu);
            if (orbit.insert(nu).second)
                queue.push_back(std::move(nu));
        }
    }
    return orbit;
}

/// Weyl dimension formula, prod over positive roots of (lambda+rho, alpha)/(rho, alpha).
inline Integer weyl_dim_formula(const RootSystem& rs, const Weight& lambda)
{
    if (static_cast<int>(lambda.size()) != rs.rank())
        throw InvalidArgument("weight length does not match rank");
    if (!lambda.dominant())
        throw InvalidArgument("weight " + to_string(lambda) + " is not dominant");
    Rational dim = 1;
    for (const Root& a : rs.positive_roots()) {
        long long num = 0, den = 0;
        for (int j = 0; j < rs.rank(); ++j) {
            num += static_cast<long long>(lambda[j] + 1) * a[j] * rs.symmetrizer(j);
            den += static_cast<long long>(a[j]) * rs.symmetrizer(j);
        }
        dim *= Rational(num, den);
    }
    if (denominator(dim) != 1)
        throw VerificationFailure("non-integral Weyl dimension " + to_string(dim));
    return numerator(dim);
}

inline bool is_minuscule(const RootSystem& rs, int k)
{
    rs.check_node(k);
    Weight lk = rs.lambda({k});
    return Integer(weyl_orbit(rs, lk).size()) == weyl_dim_formula(rs, lk);
}

} // namespace weylrad
