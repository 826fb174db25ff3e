#pragma once

#include <algorithm>
#include <cstdint>
#include <deque>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "chevalley.hpp"
#include "exact_linalg.hpp"
#include "parallel.hpp"
#include "root_data.hpp"
#include "weyl_module.hpp"

namespace weylrad {

// ---------------------------------------------------------------------------
// Subspaces of F_p^N in reduced row echelon form (hence canonical)

struct Subspace {
    std::vector<ModVector> rows;

    std::size_t dim() const { return rows.size(); }
    friend auto operator<=>(const Subspace&, const Subspace&) = default;
    friend bool operator==(const Subspace&, const Subspace&) = default;
};

inline Subspace span_mod_p(std::vector<ModVector> vectors, std::size_t N, std::int64_t p)
{
    return {rref_mod_p(std::move(vectors), N, p).rows};
}

inline EchelonForm echelon(const Subspace& s, std::size_t N)
{
    EchelonForm ef;
    ef.dim = N;
    ef.rows = s.rows;
    for (const auto& r : s.rows)
        ef.pivots.push_back(std::find_if(r.begin(), r.end(), [](std::int64_t x) { return x != 0; }) - r.begin());
    return ef;
}

inline bool subspace_contains(const Subspace& big, const Subspace& small, std::size_t N, std::int64_t p)
{
    if (small.dim() > big.dim())
        return false;
    EchelonForm ef = echelon(big, N);
    return std::all_of(small.rows.begin(), small.rows.end(),
                       [&](const ModVector& v) { return in_span_mod_p(ef, v, p); });
}

inline std::size_t sum_dim(const Subspace& a, const Subspace& b, std::size_t N, std::int64_t p)
{
    std::vector<ModVector> all = a.rows;
    all.insert(all.end(), b.rows.begin(), b.rows.end());
    return rref_mod_p(std::move(all), N, p).rank();
}

inline std::size_t meet_dim(const Subspace& a, const Subspace& b, std::size_t N, std::int64_t p)
{
    return a.dim() + b.dim() - sum_dim(a, b, N, p);
}

/// Every k-dimensional subspace of F_p^N, enumerated through pivot patterns.
inline std::vector<Subspace> all_subspaces(std::size_t N, std::size_t k, std::int64_t p)
{
    std::vector<Subspace> out;
    if (k > N)
        return out;
    if (k == 0) {
        out.push_back({});
        return out;
    }
    std::vector<std::size_t> piv(k);
    auto fill = [&](const std::vector<std::size_t>& pivots) {
        std::vector<bool> is_pivot(N, false);
        for (auto c : pivots)
            is_pivot[c] = true;
        std::vector<std::pair<std::size_t, std::size_t>> free;
        for (std::size_t r = 0; r < k; ++r)
            for (std::size_t c = pivots[r] + 1; c < N; ++c)
                if (!is_pivot[c])
                    free.emplace_back(r, c);
        std::vector<std::int64_t> digits(free.size(), 0);
        for (;;) {
            Subspace s;
            s.rows.assign(k, ModVector(N, 0));
            for (std::size_t r = 0; r < k; ++r)
                s.rows[r][pivots[r]] = 1;
            for (std::size_t f = 0; f < free.size(); ++f)
                s.rows[free[f].first][free[f].second] = digits[f];
            out.push_back(std::move(s));
            std::size_t i = 0;
            while (i < digits.size() && ++digits[i] == p)
                digits[i++] = 0;
            if (i == digits.size())
                break;
        }
    };
    auto rec = [&](auto&& self, std::size_t r, std::size_t start) -> void {
        if (r == k) {
            fill(piv);
            return;
        }
        for (std::size_t c = start; c + (k - r) <= N; ++c) {
            piv[r] = c;
            self(self, r + 1, c + 1);
        }
    };
    rec(rec, 0, 0);
    std::sort(out.begin(), out.end());
    return out;
}

/// All vectors of a subspace (p^dim of them), including zero.
inline std::vector<ModVector> subspace_vectors(const Subspace& s, std::size_t N, std::int64_t p)
{
    std::vector<ModVector> out;
    std::vector<std::int64_t> coef(s.dim(), 0);
    for (;;) {
        ModVector v(N, 0);
        for (std::size_t i = 0; i < s.dim(); ++i)
            for (std::size_t j = 0; j < N; ++j)
                v[j] = (v[j] + coef[i] * s.rows[i][j]) % p;
        out.push_back(std::move(v));
        std::size_t i = 0;
        while (i < coef.size() && ++coef[i] == p)
            coef[i++] = 0;
        if (i == coef.size())
            break;
    }
    return out;
}

/// Scale so that the first nonzero coordinate is 1.
inline ModVector projective_normal(ModVector v, std::int64_t p)
{
    auto it = std::find_if(v.begin(), v.end(), [](std::int64_t x) { return x != 0; });
    if (it == v.end())
        return v;
    std::int64_t inv = mod_inverse(*it, p);
    for (auto& x : v)
        x = x * inv % p;
    return v;
}

inline bool proportional(const ModVector& a, const ModVector& b, std::int64_t p)
{
    return !is_zero(a) && projective_normal(a, p) == projective_normal(b, p);
}

// ---------------------------------------------------------------------------
// Shadow spaces

/// One subspace per type in K (ascending), nested.
struct FlagPoint {
    std::vector<Subspace> parts;

    friend auto operator<=>(const FlagPoint&, const FlagPoint&) = default;
    friend bool operator==(const FlagPoint&, const FlagPoint&) = default;
};

struct Line {
    int type;
    std::vector<std::size_t> points;
};

struct ShadowLimits {
    std::size_t max_points = 20000;
};

class ShadowSpace {
public:
    ShadowSpace(DiagramType type, int rank, NodeSet K, std::int64_t p, const ShadowLimits& lim = {})
        : rs_(type, rank), nat_(natural_module(type, rank)), K_(std::move(K)), p_(p), lim_(lim)
    {
        validate();
        N_ = nat_.dim;
        form_ = ModMatrix(nat_.form, p_);
        dual_K_ = opposite_type(rs_, K_);
        build_points();
        build_lines();
        if (type == DiagramType::A)
            dual_points_ = enumerate_type_a_flags(dual_K_, {}, {});
        else
            dual_points_ = points_;
    }

    DiagramType type() const { return rs_.type(); }
    int rank() const { return rs_.rank(); }
    const RootSystem& root_system() const { return rs_; }
    const NaturalModule& natural() const { return nat_; }
    const NodeSet& K() const { return K_; }
    const NodeSet& dual_K() const { return dual_K_; }
    std::int64_t prime() const { return p_; }
    std::size_t natural_dim() const { return N_; }
    const std::vector<FlagPoint>& points() const { return points_; }
    const std::vector<Line>& lines() const { return lines_; }
    const std::vector<FlagPoint>& dual_points() const { return dual_points_; }
    /// Indices of the lines through a point.
    const std::vector<std::size_t>& lines_through(std::size_t point) const { return point_lines_[point]; }

    std::string descriptor() const
    {
        std::string s = rs_.name() + " K={";
        for (std::size_t i = 0; i < K_.size(); ++i)
            s += (i ? "," : "") + std::to_string(K_[i]);
        return s + "} p=" + std::to_string(p_);
    }

    std::optional<std::size_t> index_of(const FlagPoint& x) const
    {
        auto it = index_.find(x);
        if (it == index_.end())
            return std::nullopt;
        return it->second;
    }

    /// The flag (<a_1..a_k>)_{k in K}.
    FlagPoint standard_point() const
    {
        FlagPoint x;
        for (int k : K_) {
            std::vector<ModVector> rows;
            for (int i = 1; i <= k; ++i) {
                ModVector v(N_, 0);
                v[nat_.pos(i)] = 1;
                rows.push_back(v);
            }
            x.parts.push_back(span_mod_p(rows, N_, p_));
        }
        return x;
    }

    /// f(u, v) = u^T zeta v mod p.
    std::int64_t bilinear(const ModVector& u, const ModVector& v) const
    {
        std::int64_t s = 0;
        for (std::size_t i = 0; i < N_; ++i) {
            if (u[i] == 0)
                continue;
            for (std::size_t j = 0; j < N_; ++j)
                s = (s + u[i] * form_(i, j) % p_ * v[j]) % p_;
        }
        return s;
    }

    /// Quadratic form for B/D; zero for C (alternating).
    std::int64_t quadratic(const ModVector& v) const
    {
        const int n = rs_.rank();
        std::int64_t s = 0;
        if (rs_.type() == DiagramType::B)
            s = v[0] * v[0] % p_;
        if (rs_.type() == DiagramType::B || rs_.type() == DiagramType::D)
            for (int i = 1; i <= n; ++i)
                s = (s + v[nat_.pos(i)] * v[nat_.neg(i)]) % p_;
        return s;
    }

    bool totally_singular(const Subspace& s) const
    {
        for (std::size_t i = 0; i < s.dim(); ++i) {
            if (quadratic(s.rows[i]) != 0)
                return false;
            for (std::size_t j = i; j < s.dim(); ++j)
                if (bilinear(s.rows[i], s.rows[j]) != 0)
                    return false;
        }
        return true;
    }

    Subspace perp(const Subspace& s) const
    {
        std::vector<ModVector> constraints;
        for (const auto& r : s.rows) {
            ModVector c(N_, 0);
            for (std::size_t i = 0; i < N_; ++i)
                for (std::size_t j = 0; j < N_; ++j)
                    c[i] = (c[i] + form_(i, j) * r[j]) % p_;
            constraints.push_back(c);
        }
        return span_mod_p(kernel_of_rows(constraints, N_, p_), N_, p_);
    }

    /// x (type K) against y (type opp K). Type A compares x_k with y_{n+1-k}; polar types test x meets y-perp trivially.
    bool is_opposite(const FlagPoint& x, const FlagPoint& y) const { return opposition_test(y)(x); }

    /// H(y): the points not opposite y.
    std::vector<bool> singular_hyperplane(const FlagPoint& y) const
    {
        auto opp = opposition_test(y);
        std::vector<bool> H(points_.size());
        for (std::size_t i = 0; i < points_.size(); ++i)
            H[i] = !opp(points_[i]);
        return H;
    }

    /// Apply a natural-module group element to every part of a flag.
    FlagPoint transform(const ModMatrix& g, const FlagPoint& x) const
    {
        FlagPoint y;
        for (const auto& part : x.parts) {
            std::vector<ModVector> rows;
            for (const auto& r : part.rows)
                rows.push_back(g.apply(r));
            y.parts.push_back(span_mod_p(rows, N_, p_));
        }
        return y;
    }

    /// Subspaces of a given dimension, cached lazily. Dimension 0 and N are the trivial ones.
    const std::vector<Subspace>& subspaces(std::size_t k) const
    {
        auto it = subs_.find(k);
        if (it != subs_.end())
            return it->second;
        return subs_.emplace(k, all_subspaces(N_, k, p_)).first->second;
    }

    Subspace whole() const
    {
        std::vector<ModVector> rows;
        for (std::size_t i = 0; i < N_; ++i) {
            ModVector v(N_, 0);
            v[i] = 1;
            rows.push_back(v);
        }
        return {rows};
    }

    /// Flags of the given ascending types with every part inside `upper` (if given) and containing `lower` parts.
    /// `fixed` maps a type to a subspace the flag must contain (type larger) or lie in (type smaller).
    std::vector<FlagPoint> enumerate_type_a_flags(const NodeSet& types, const std::optional<Subspace>& anchor,
                                                  std::optional<int> anchor_type) const
    {
        std::vector<FlagPoint> out;
        FlagPoint cur;
        auto rec = [&](auto&& self, std::size_t t) -> void {
            if (t == types.size()) {
                out.push_back(cur);
                if (out.size() > lim_.max_points)
                    throw CapExceeded("flag enumeration exceeds " + std::to_string(lim_.max_points) + " points");
                return;
            }
            for (const auto& s : subspaces(types[t])) {
                if (t > 0 && !subspace_contains(s, cur.parts.back(), N_, p_))
                    continue;
                if (anchor) {
                    if (types[t] < *anchor_type && !subspace_contains(*anchor, s, N_, p_))
                        continue;
                    if (types[t] > *anchor_type && !subspace_contains(s, *anchor, N_, p_))
                        continue;
                    if (types[t] == *anchor_type && s != *anchor)
                        continue;
                }
                cur.parts.push_back(s);
                self(self, t + 1);
                cur.parts.pop_back();
            }
        };
        rec(rec, 0);
        return out;
    }

    /// Point indices with parts related to F = (W of type j) by incidence.
    std::vector<std::size_t> incident_points(int j, const Subspace& W) const
    {
        std::vector<std::size_t> out;
        for (std::size_t i = 0; i < points_.size(); ++i) {
            bool ok = true;
            for (std::size_t t = 0; t < K_.size() && ok; ++t) {
                const Subspace& x = points_[i].parts[t];
                if (K_[t] < j)
                    ok = subspace_contains(W, x, N_, p_);
                else if (K_[t] > j)
                    ok = subspace_contains(x, W, N_, p_);
                else
                    ok = x == W;
            }
            if (ok)
                out.push_back(i);
        }
        return out;
    }

    /// Collinearity adjacency lists.
    std::vector<std::vector<std::size_t>> collinearity() const
    {
        std::vector<std::set<std::size_t>> adj(points_.size());
        for (const auto& l : lines_)
            for (auto a : l.points)
                for (auto b : l.points)
                    if (a != b)
                        adj[a].insert(b);
        std::vector<std::vector<std::size_t>> out;
        for (const auto& s : adj)
            out.emplace_back(s.begin(), s.end());
        return out;
    }

    std::string to_dot() const
    {
        std::ostringstream os;
        os << "graph shadow {\n";
        auto adj = collinearity();
        for (std::size_t a = 0; a < adj.size(); ++a) {
            os << "  " << a << ";\n";
            for (auto b : adj[a])
                if (a < b)
                    os << "  " << a << " -- " << b << ";\n";
        }
        os << "}\n";
        return os.str();
    }

private:
    /// Predicate "x is opposite y" with the data depending on y prepared once.
    std::function<bool(const FlagPoint&)> opposition_test(const FlagPoint& y) const
    {
        if (y.parts.size() != dual_K_.size())
            throw InvalidArgument("flag types do not match the dual shadow space");
        if (rs_.type() == DiagramType::A) {
            std::vector<std::size_t> slot;
            for (int k : K_) {
                int kk = rs_.rank() + 1 - k;
                auto it = std::find(dual_K_.begin(), dual_K_.end(), kk);
                if (y.parts[it - dual_K_.begin()].dim() != static_cast<std::size_t>(kk))
                    throw InvalidArgument("dual flag has the wrong type");
                slot.push_back(it - dual_K_.begin());
            }
            return [this, y, slot](const FlagPoint& x) {
                for (std::size_t t = 0; t < slot.size(); ++t)
                    if (meet_dim(x.parts[t], y.parts[slot[t]], N_, p_) != 0)
                        return false;
                return true;
            };
        }
        // x meets y-perp trivially iff the pairing matrix f(x_i, y_j) is invertible
        std::vector<ModVector> zy;
        for (const auto& r : y.parts[0].rows)
            zy.push_back(form_.apply(r));
        return [this, zy](const FlagPoint& x) {
            const auto& xs = x.parts[0].rows;
            if (xs.size() != zy.size())
                throw InvalidArgument("flag types do not match the shadow space");
            std::vector<ModVector> pairing(xs.size(), ModVector(zy.size(), 0));
            for (std::size_t i = 0; i < xs.size(); ++i)
                for (std::size_t j = 0; j < zy.size(); ++j) {
                    std::int64_t s = 0;
                    for (std::size_t t = 0; t < N_; ++t)
                        s += xs[i][t] * zy[j][t];
                    pairing[i][j] = s % p_;
                }
            return rref_mod_p(std::move(pairing), zy.size(), p_).rank() == xs.size();
        };
    }

    void validate() const
    {
        if (p_ != 2 && p_ != 3)
            throw InvalidArgument("shadow spaces are built over F_2 or F_3 only, not F_" + std::to_string(p_));
        if (K_.empty())
            throw InvalidArgument("empty node set");
        for (int k : K_)
            rs_.check_node(k);
        if (!std::is_sorted(K_.begin(), K_.end()) || std::adjacent_find(K_.begin(), K_.end()) != K_.end())
            throw InvalidArgument("node set must be strictly increasing");
        const int n = rs_.rank();
        switch (rs_.type()) {
        case DiagramType::A:
            if (n > 3)
                throw InvalidArgument("type A shadow spaces are limited to rank 3");
            return;
        case DiagramType::E:
            throw InvalidArgument("no shadow space model for type E");
        default:
            break;
        }
        if (n < 2 || n > 3)
            throw InvalidArgument("polar shadow spaces are limited to rank 2 and 3");
        if (K_.size() != 1)
            throw InvalidArgument("polar shadow spaces take a single node");
        int k = K_[0];
        bool ok = (rs_.type() == DiagramType::B && k < n) || rs_.type() == DiagramType::C ||
                  (rs_.type() == DiagramType::D && k <= n - 2);
        if (!ok)
            throw InvalidArgument("node " + std::to_string(k) + " is outside the modelled range for " + rs_.name());
    }

    void add_point(FlagPoint x)
    {
        if (index_.emplace(x, points_.size()).second)
            points_.push_back(std::move(x));
        if (points_.size() > lim_.max_points)
            throw CapExceeded("point count exceeds " + std::to_string(lim_.max_points));
    }

    void build_points()
    {
        if (rs_.type() == DiagramType::A) {
            for (auto& x : enumerate_type_a_flags(K_, std::nullopt, std::nullopt))
                add_point(std::move(x));
            return;
        }
        for (const auto& s : subspaces(K_[0]))
            if (totally_singular(s))
                add_point(FlagPoint{{s}});
    }

    std::size_t require_index(const FlagPoint& x) const
    {
        auto i = index_of(x);
        if (!i)
            throw VerificationFailure("line contains a flag that is not a point of the space");
        return *i;
    }

    /// Points W with lo < W < hi of dimension dim(lo)+1, optionally filtered by singularity.
    std::vector<Subspace> between(const Subspace& lo, const Subspace& hi, bool singular) const
    {
        std::set<Subspace> out;
        for (const auto& v : subspace_vectors(hi, N_, p_)) {
            std::vector<ModVector> rows = lo.rows;
            rows.push_back(v);
            Subspace w = span_mod_p(rows, N_, p_);
            if (w.dim() == lo.dim() + 1 && (!singular || totally_singular(w)))
                out.insert(w);
        }
        return {out.begin(), out.end()};
    }

    void build_lines()
    {
        std::map<std::pair<int, std::vector<Subspace>>, std::set<std::size_t>> found;
        const bool polar = rs_.type() != DiagramType::A;
        const int n = rs_.rank();
        for (std::size_t pi = 0; pi < points_.size(); ++pi) {
            const FlagPoint& x = points_[pi];
            for (std::size_t t = 0; t < K_.size(); ++t) {
                const int l = K_[t];
                const Subspace& xl = x.parts[t];
                Subspace lo_bound = t > 0 ? x.parts[t - 1] : Subspace{};
                Subspace hi_bound = t + 1 < K_.size() ? x.parts[t + 1] : whole();
                std::vector<Subspace> lows;
                for (const auto& u : subspaces(l - 1))
                    if (subspace_contains(xl, u, N_, p_) && subspace_contains(u, lo_bound, N_, p_))
                        lows.push_back(u);
                const bool top_symplectic = polar && rs_.type() == DiagramType::C && l == n;
                std::vector<Subspace> highs;
                if (!top_symplectic) {
                    for (const auto& w : between(xl, hi_bound, polar))
                        highs.push_back(w);
                }
                for (const auto& u : lows) {
                    if (top_symplectic) {
                        auto key = std::make_pair(l, std::vector<Subspace>{u});
                        if (found.count(key))
                            continue;
                        auto& pts = found[key];
                        for (const auto& w : between(u, perp(u), true))
                            if (w.dim() == static_cast<std::size_t>(l))
                                pts.insert(require_index(FlagPoint{{w}}));
                        continue;
                    }
                    for (const auto& h : highs) {
                        std::vector<Subspace> key_parts = x.parts;
                        key_parts[t] = u;
                        key_parts.push_back(h);
                        auto key = std::make_pair(l, key_parts);
                        if (found.count(key))
                            continue;
                        auto& pts = found[key];
                        for (const auto& w : between(u, h, false)) {
                            FlagPoint y = x;
                            y.parts[t] = w;
                            pts.insert(require_index(y));
                        }
                    }
                }
            }
        }
        for (auto& [key, pts] : found)
            lines_.push_back({key.first, {pts.begin(), pts.end()}});
        point_lines_.assign(points_.size(), {});
        for (std::size_t l = 0; l < lines_.size(); ++l)
            for (auto q : lines_[l].points)
                point_lines_[q].push_back(l);
    }

    RootSystem rs_;
    NaturalModule nat_;
    NodeSet K_;
    NodeSet dual_K_;
    std::int64_t p_;
    ShadowLimits lim_;
    std::size_t N_ = 0;
    ModMatrix form_{2, 0, 0};
    std::vector<FlagPoint> points_;
    std::map<FlagPoint, std::size_t> index_;
    std::vector<Line> lines_;
    std::vector<std::vector<std::size_t>> point_lines_;
    std::vector<FlagPoint> dual_points_;
    mutable std::map<std::size_t, std::vector<Subspace>> subs_;
};

inline ShadowSpace build_shadow_space(DiagramType type, int rank, const NodeSet& K, std::int64_t p,
                                      const ShadowLimits& lim = {})
{
    return ShadowSpace(type, rank, K, p, lim);
}

/// Connectivity of the collinearity graph on the points outside H.
inline bool complement_connected(const ShadowSpace& sp, const std::vector<bool>& H)
{
    auto adj = sp.collinearity();
    std::optional<std::size_t> start;
    std::size_t outside = 0;
    for (std::size_t i = 0; i < H.size(); ++i)
        if (!H[i]) {
            ++outside;
            if (!start)
                start = i;
        }
    if (!start)
        return true;
    std::vector<bool> seen(H.size(), false);
    std::deque<std::size_t> q{*start};
    seen[*start] = true;
    std::size_t reached = 1;
    while (!q.empty()) {
        auto a = q.front();
        q.pop_front();
        for (auto b : adj[a])
            if (!H[b] && !seen[b]) {
                seen[b] = true;
                ++reached;
                q.push_back(b);
            }
    }
    return reached == outside;
}

// ---------------------------------------------------------------------------
// Embeddings

/// Point index to a nonzero vector of F_p^dim, defined up to scalars.
struct GeometricEmbedding {
    std::size_t dim = 0;
    std::int64_t p = 2;
    std::vector<ModVector> images;
};

/// The Weyl embedding: walk the orbit of the standard flag under x_{+-alpha_i}(1), carrying v+ along in the lattice mod p.
inline GeometricEmbedding weyl_embedding(const ShadowSpace& sp, const WeylModule& M)
{
    const std::int64_t p = sp.prime();
    const auto& cb = M.chevalley();
    if (cb.root_system().type() != sp.type() || cb.root_system().rank() != sp.rank() ||
        M.lambda() != cb.root_system().lambda(sp.K()))
        throw InvalidArgument("module does not match the shadow space");
    struct Gen {
        ModMatrix nat;
        ModMatrix lat;
    };
    std::vector<Gen> gens;
    for (int i = 0; i < sp.rank(); ++i)
        for (bool neg : {false, true}) {
            SignedRoot r{static_cast<std::size_t>(i), neg};
            gens.push_back({cb.group_element(r, 1, p), M.group_element(r, 1, p)});
        }
    GeometricEmbedding emb;
    emb.dim = M.rank();
    emb.p = p;
    emb.images.assign(sp.points().size(), {});
    auto start = sp.index_of(sp.standard_point());
    if (!start)
        throw VerificationFailure("standard flag is not a point");
    ModVector e0(M.rank(), 0);
    e0[0] = 1;
    emb.images[*start] = e0;
    std::vector<bool> seen(sp.points().size(), false);
    seen[*start] = true;
    std::deque<std::size_t> q{*start};
    std::size_t reached = 1;
    while (!q.empty()) {
        auto a = q.front();
        q.pop_front();
        for (const auto& g : gens) {
            FlagPoint y = sp.transform(g.nat, sp.points()[a]);
            auto b = sp.index_of(y);
            if (!b)
                throw VerificationFailure("group element maps a point outside the space");
            ModVector img = projective_normal(g.lat.apply(emb.images[a]), p);
            if (is_zero(img))
                throw VerificationFailure("embedding image vanishes mod p");
            if (seen[*b]) {
                if (!proportional(img, emb.images[*b], p))
                    throw VerificationFailure("embedding is not well defined: two paths give different images");
                continue;
            }
            seen[*b] = true;
            ++reached;
            emb.images[*b] = img;
            q.push_back(*b);
        }
    }
    if (reached != sp.points().size())
        throw VerificationFailure("group orbit of the standard flag misses points");
    return emb;
}

/// Image of one point under a built embedding.
inline const ModVector& weyl_embedding_image(const ShadowSpace& sp, const GeometricEmbedding& e, const FlagPoint& x)
{
    auto i = sp.index_of(x);
    if (!i)
        throw InvalidArgument("flag is not a point of " + sp.descriptor());
    return e.images.at(*i);
}

/// Determinant mod p of the columns `cols` of the row basis.
inline std::int64_t minor_mod_p(const std::vector<ModVector>& rows, const std::vector<std::size_t>& cols, std::int64_t p)
{
    const std::size_t k = rows.size();
    std::vector<ModVector> m(k, ModVector(k));
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j)
            m[i][j] = rows[i][cols[j]];
    std::int64_t det = 1;
    for (std::size_t c = 0; c < k; ++c) {
        std::size_t r = c;
        while (r < k && m[r][c] == 0)
            ++r;
        if (r == k)
            return 0;
        if (r != c) {
            std::swap(m[r], m[c]);
            det = (p - det) % p;
        }
        det = det * m[c][c] % p;
        std::int64_t inv = mod_inverse(m[c][c], p);
        for (std::size_t i = c + 1; i < k; ++i) {
            std::int64_t f = m[i][c] * inv % p;
            for (std::size_t j = c; j < k; ++j)
                m[i][j] = ((m[i][j] - f * m[c][j]) % p + p) % p;
        }
    }
    return det;
}

/// Coordinates c with sum c_i rows_i = w mod p, provided the rows stay independent mod p.
inline std::optional<ModVector> solve_in_rows(const std::vector<ModVector>& rows, const ModVector& w, std::size_t dim,
                                              std::int64_t p)
{
    const std::size_t r = rows.size();
    std::vector<ModVector> aug;
    for (std::size_t i = 0; i < r; ++i) {
        ModVector v = rows[i];
        v.resize(dim + r, 0);
        v[dim + i] = 1;
        aug.push_back(std::move(v));
    }
    auto ef = rref_mod_p(aug, dim + r, p);
    for (auto c : ef.pivots)
        if (c >= dim)
            return std::nullopt;
    ModVector t = w;
    t.resize(dim + r, 0);
    t = reduce_mod_p(ef, t, p);
    for (std::size_t j = 0; j < dim; ++j)
        if (t[j] != 0)
            return std::nullopt;
    ModVector c(r);
    for (std::size_t i = 0; i < r; ++i)
        c[i] = (p - t[dim + i]) % p;
    return c;
}

/// Grassmann image of a flag: the tensor of the wedges of its parts, rewritten in lattice coordinates mod p.
/// Empty when the lattice basis degenerates mod p inside the ambient module.
inline std::optional<ModVector> grassmann_image(const ShadowSpace& sp, const WeylModule& M, const FlagPoint& x)
{
    const std::int64_t p = sp.prime();
    const auto& amb = M.ambient();
    if (amb.groups().size() != x.parts.size())
        throw InvalidArgument("flag does not match the ambient tensor factors");
    ModVector w(amb.dim(), 0);
    for (std::size_t i = 0; i < amb.dim(); ++i) {
        std::int64_t c = 1;
        for (std::size_t g = 0; g < x.parts.size() && c != 0; ++g)
            c = c * minor_mod_p(x.parts[g].rows, AmbientModule::subset_indices(amb.key(i)[g]), p) % p;
        w[i] = c;
    }
    std::vector<ModVector> basis;
    for (std::size_t b = 0; b < M.rank(); ++b) {
        ModVector v(amb.dim(), 0);
        for (const auto& [i, c] : M.lattice().basis_vector(b))
            v[i] = mod_reduce(c, p);
        basis.push_back(std::move(v));
    }
    return solve_in_rows(basis, w, amb.dim(), p);
}

inline std::vector<ModVector> images_of(const GeometricEmbedding& e, const std::vector<std::size_t>& pts)
{
    std::vector<ModVector> out;
    for (auto i : pts)
        out.push_back(e.images[i]);
    return out;
}

/// Span of the images of a hyperplane, recorded through its annihilator.
struct HyperplaneSpan {
    std::size_t rank = 0;
    std::vector<ModVector> annihilator;
    std::string failure;
};

/// Grows the span from points of H until it reaches `target`, then classifies every point with the annihilator.
/// Falls back to a full reduction when H turns out to span more.
inline HyperplaneSpan analyse_hyperplane(const GeometricEmbedding& e, const std::vector<std::size_t>& pts,
                                         const std::vector<bool>& H, std::size_t target)
{
    const std::int64_t p = e.p;
    std::vector<ModVector> chosen;
    EchelonForm S = rref_mod_p({}, e.dim, p);
    for (std::size_t i = 0; i < pts.size() && S.rank() < target; ++i)
        if (H[i] && !in_span_mod_p(S, e.images[pts[i]], p)) {
            chosen.push_back(e.images[pts[i]]);
            S = rref_mod_p(chosen, e.dim, p);
        }
    HyperplaneSpan out;
    auto vanishes = [&](const ModVector& v) {
        for (const auto& f : out.annihilator) {
            std::int64_t s = 0;
            for (std::size_t t = 0; t < e.dim; ++t)
                s += f[t] * v[t];
            if (s % p != 0)
                return false;
        }
        return true;
    };
    out.rank = S.rank();
    out.annihilator = kernel_of_rows(S.rows, e.dim, p);
    for (std::size_t i = 0; i < pts.size(); ++i) {
        if (!H[i] || vanishes(e.images[pts[i]]))
            continue;
        std::vector<ModVector> in;
        for (std::size_t j = 0; j < pts.size(); ++j)
            if (H[j])
                in.push_back(e.images[pts[j]]);
        S = rref_mod_p(std::move(in), e.dim, p);
        out.rank = S.rank();
        out.annihilator = kernel_of_rows(S.rows, e.dim, p);
        break;
    }
    if (out.rank != target) {
        out.failure = "hyperplane spans dimension " + std::to_string(out.rank) + " where " + std::to_string(target) +
                      " is required";
        return out;
    }
    for (std::size_t i = 0; i < pts.size(); ++i)
        if (!H[i] && vanishes(e.images[pts[i]])) {
            out.failure = "hyperplane span captures outside point " + std::to_string(pts[i]);
            break;
        }
    return out;
}

inline std::vector<HyperplaneSpan> analyse_hyperplanes(const GeometricEmbedding& e, const std::vector<std::size_t>& pts,
                                                       const std::vector<std::vector<bool>>& hyperplanes)
{
    std::size_t r0 = rref_mod_p(images_of(e, pts), e.dim, e.p).rank();
    std::vector<HyperplaneSpan> out(hyperplanes.size());
    parallel_for(hyperplanes.size(), [&](std::size_t h) {
        out[h] = analyse_hyperplane(e, pts, hyperplanes[h], r0 == 0 ? 0 : r0 - 1);
    });
    return out;
}

struct PolarizationReport {
    bool polarized = true;
    std::size_t span_dim = 0;
    std::size_t hyperplanes_checked = 0;
    std::string failure;
};

/// Every hyperplane (a set of point indices) must span a codimension-one subspace of the span of all images
/// and meet the image set in exactly its own points.
inline PolarizationReport check_polarized(const GeometricEmbedding& e, const std::vector<std::size_t>& pts,
                                          const std::vector<HyperplaneSpan>& spans)
{
    PolarizationReport rep;
    rep.span_dim = rref_mod_p(images_of(e, pts), e.dim, e.p).rank();
    rep.hyperplanes_checked = spans.size();
    for (std::size_t h = 0; h < spans.size(); ++h)
        if (!spans[h].failure.empty()) {
            rep.polarized = false;
            rep.failure = "hyperplane " + std::to_string(h) + ": " + spans[h].failure;
            break;
        }
    return rep;
}

inline PolarizationReport check_polarized(const GeometricEmbedding& e, const std::vector<std::size_t>& pts,
                                          const std::vector<std::vector<bool>>& hyperplanes)
{
    return check_polarized(e, pts, analyse_hyperplanes(e, pts, hyperplanes));
}

inline std::vector<std::size_t> all_indices(std::size_t n)
{
    std::vector<std::size_t> v(n);
    for (std::size_t i = 0; i < n; ++i)
        v[i] = i;
    return v;
}

inline std::vector<std::vector<bool>> singular_hyperplanes(const ShadowSpace& sp)
{
    std::vector<std::vector<bool>> hs(sp.dual_points().size());
    parallel_for(hs.size(), [&](std::size_t i) { hs[i] = sp.singular_hyperplane(sp.dual_points()[i]); });
    return hs;
}

/// Intersection of the spans of all hyperplanes: the common zeros of their annihilators.
inline std::vector<ModVector> polar_radical(const GeometricEmbedding& e, const std::vector<std::size_t>& pts,
                                            const std::vector<HyperplaneSpan>& spans)
{
    if (spans.empty())
        return rref_mod_p(images_of(e, pts), e.dim, e.p).rows;
    std::vector<ModVector> constraints;
    for (const auto& s : spans)
        constraints.insert(constraints.end(), s.annihilator.begin(), s.annihilator.end());
    return rref_mod_p(kernel_of_rows(constraints, e.dim, e.p), e.dim, e.p).rows;
}

inline std::vector<ModVector> polar_radical(const GeometricEmbedding& e, const std::vector<std::size_t>& pts,
                                            const std::vector<std::vector<bool>>& hyperplanes)
{
    return polar_radical(e, pts, analyse_hyperplanes(e, pts, hyperplanes));
}

inline std::vector<ModVector> polar_radical_geometric(const ShadowSpace& sp, const GeometricEmbedding& e)
{
    return polar_radical(e, all_indices(sp.points().size()), singular_hyperplanes(sp));
}

/// Radical of the form restricted to the span of the given vectors.
inline std::vector<ModVector> restricted_radical(const IntMatrix& gram, const std::vector<ModVector>& span_rows,
                                                 std::int64_t p)
{
    auto V0 = rref_mod_p(span_rows, gram.rows(), p).rows;
    ModMatrix G(gram, p);
    std::vector<ModVector> constraints;
    for (const auto& w : V0)
        constraints.push_back(G.apply(w));
    // coefficients c with (sum c_i v_i) orthogonal to V0
    std::vector<ModVector> gram_rows(V0.size(), ModVector(V0.size(), 0));
    for (std::size_t i = 0; i < V0.size(); ++i)
        for (std::size_t j = 0; j < V0.size(); ++j) {
            std::int64_t s = 0;
            for (std::size_t t = 0; t < gram.rows(); ++t)
                s = (s + V0[i][t] * constraints[j][t]) % p;
            gram_rows[j][i] = s;
        }
    std::vector<ModVector> out;
    for (const auto& c : kernel_of_rows(gram_rows, V0.size(), p)) {
        ModVector v(gram.rows(), 0);
        for (std::size_t i = 0; i < V0.size(); ++i)
            for (std::size_t t = 0; t < gram.rows(); ++t)
                v[t] = (v[t] + c[i] * V0[i][t]) % p;
        out.push_back(v);
    }
    return rref_mod_p(out, gram.rows(), p).rows;
}

/// e/R: images reduced modulo R with the pivot coordinates of R dropped. Fails on QE1 or QE2 violations.
struct QuotientResult {
    std::optional<GeometricEmbedding> embedding;
    std::string failure;
};

inline QuotientResult quotient_embedding(const GeometricEmbedding& e, const std::vector<ModVector>& R)
{
    auto ef = rref_mod_p(R, e.dim, e.p);
    std::vector<bool> drop(e.dim, false);
    for (auto c : ef.pivots)
        drop[c] = true;
    GeometricEmbedding q;
    q.dim = e.dim - ef.rank();
    q.p = e.p;
    std::map<ModVector, std::size_t> seen;
    for (std::size_t i = 0; i < e.images.size(); ++i) {
        ModVector r = reduce_mod_p(ef, e.images[i], e.p);
        ModVector v;
        for (std::size_t c = 0; c < e.dim; ++c)
            if (!drop[c])
                v.push_back(r[c]);
        if (is_zero(v))
            return {std::nullopt, "QE1 fails: point " + std::to_string(i) + " lies in R"};
        v = projective_normal(v, e.p);
        auto [it, fresh] = seen.emplace(v, i);
        if (!fresh)
            return {std::nullopt, "QE2 fails: points " + std::to_string(it->second) + " and " + std::to_string(i) +
                                      " collide modulo R"};
        q.images.push_back(std::move(v));
    }
    return {std::move(q), {}};
}

/// Lines map onto projective lines: the images of every line span a plane.
inline bool lines_are_projective(const ShadowSpace& sp, const GeometricEmbedding& e)
{
    for (const auto& l : sp.lines())
        if (rref_mod_p(images_of(e, l.points), e.dim, e.p).rank() != 2)
            return false;
    return true;
}

// ---------------------------------------------------------------------------
// Residues

/// Residue of a single-type flag W of type j: its points, its lines and its singular hyperplanes.
struct Residue {
    int type;
    Subspace flag;
    std::vector<std::size_t> points;
    std::vector<std::vector<std::size_t>> lines;      ///< positions into `points`
    std::vector<std::vector<bool>> hyperplanes;       ///< over `points`
};

inline Residue make_residue(const ShadowSpace& sp, int j, const Subspace& W)
{
    const std::size_t N = sp.natural_dim();
    const std::int64_t p = sp.prime();
    Residue R{j, W, sp.incident_points(j, W), {}, {}};
    std::map<std::size_t, std::size_t> pos;
    for (std::size_t i = 0; i < R.points.size(); ++i)
        pos[R.points[i]] = i;
    std::set<std::size_t> candidates;
    for (auto q : R.points)
        candidates.insert(sp.lines_through(q).begin(), sp.lines_through(q).end());
    for (auto li : candidates) {
        const Line& l = sp.lines()[li];
        std::vector<std::size_t> local;
        for (auto q : l.points) {
            auto it = pos.find(q);
            if (it == pos.end())
                break;
            local.push_back(it->second);
        }
        if (local.size() == l.points.size())
            R.lines.push_back(local);
    }

    const NodeSet& K = sp.K();
    if (sp.type() == DiagramType::A) {
        // interval (a, b) around each free type; opposite type a+b-k; opposition means minimal meet a
        const int top = static_cast<int>(N);
        NodeSet dual_types;
        std::vector<int> lower(K.size()), partner(K.size(), 0);
        for (std::size_t t = 0; t < K.size(); ++t) {
            int k = K[t];
            if (k == j)
                continue;
            int a = k < j ? 0 : j, b = k < j ? j : top;
            lower[t] = a;
            partner[t] = a + b - k;
            dual_types.push_back(partner[t]);
        }
        std::sort(dual_types.begin(), dual_types.end());
        auto duals = sp.enumerate_type_a_flags(dual_types, W, j);
        for (const auto& y : duals) {
            std::vector<bool> H(R.points.size());
            for (std::size_t i = 0; i < R.points.size(); ++i) {
                const FlagPoint& x = sp.points()[R.points[i]];
                bool opp = true;
                for (std::size_t t = 0; t < K.size() && opp; ++t) {
                    if (K[t] == j)
                        continue;
                    auto it = std::find(dual_types.begin(), dual_types.end(), partner[t]);
                    const Subspace& yk = y.parts[it - dual_types.begin()];
                    opp = meet_dim(x.parts[t], yk, N, p) == static_cast<std::size_t>(lower[t]);
                }
                H[i] = !opp;
            }
            R.hyperplanes.push_back(std::move(H));
        }
        return R;
    }

    // polar: above W the residue is a polar space, below W a projective space
    const int k = K[0];
    std::vector<Subspace> duals;
    if (j < k) {
        // opposite type inside the polar residue is k again, so the duals are the residue points
        for (auto q : R.points)
            duals.push_back(sp.points()[q].parts[0]);
    } else {
        // subspaces of W, through coordinates in its basis
        for (const auto& c : all_subspaces(W.dim(), j - k, p)) {
            std::vector<ModVector> rows;
            for (const auto& r : c.rows) {
                ModVector v(N, 0);
                for (std::size_t i = 0; i < r.size(); ++i)
                    for (std::size_t t = 0; t < N; ++t)
                        v[t] = (v[t] + r[i] * W.rows[i][t]) % p;
                rows.push_back(v);
            }
            duals.push_back(span_mod_p(rows, N, p));
        }
    }
    for (const auto& y : duals) {
        std::vector<bool> H(R.points.size());
        Subspace yperp = j < k ? sp.perp(y) : Subspace{};
        for (std::size_t i = 0; i < R.points.size(); ++i) {
            const Subspace& x = sp.points()[R.points[i]].parts[0];
            bool opp = j < k ? meet_dim(x, yperp, N, p) == static_cast<std::size_t>(j) : meet_dim(x, y, N, p) == 0;
            H[i] = !opp;
        }
        R.hyperplanes.push_back(std::move(H));
    }
    return R;
}

/// Residues of all flags of a single type j outside K (for type A every j is allowed; see make_residue).
inline std::vector<Residue> point_residues(const ShadowSpace& sp)
{
    std::vector<Residue> out;
    const int n = sp.rank();
    for (int j = 1; j <= n; ++j) {
        if (std::find(sp.K().begin(), sp.K().end(), j) != sp.K().end())
            continue;
        if (sp.type() == DiagramType::D && j > n - 2)
            continue;
        for (const auto& W : sp.subspaces(j)) {
            if (sp.type() != DiagramType::A && !sp.totally_singular(W))
                continue;
            out.push_back(make_residue(sp, j, W));
        }
    }
    return out;
}

struct ResidueReport {
    std::size_t residues_checked = 0;
    bool all_polarized = true;
    bool minimal_quotient_trivial_radical = true;
    std::string failure;
};

/// Every residue restriction of e must be polarized; in e modulo its polar radical each residue has trivial radical.
inline ResidueReport residue_check(const GeometricEmbedding& e, const std::vector<ModVector>& radical,
                                   const std::vector<Residue>& residues)
{
    ResidueReport rep;
    auto q = quotient_embedding(e, radical);
    if (!q.embedding) {
        rep.all_polarized = false;
        rep.failure = "minimal quotient undefined: " + q.failure;
        return rep;
    }
    for (const auto& res : residues) {
        ++rep.residues_checked;
        auto pol = check_polarized(e, res.points, res.hyperplanes);
        if (!pol.polarized && rep.all_polarized) {
            rep.all_polarized = false;
            rep.failure = "residue of type " + std::to_string(res.type) + ": " + pol.failure;
        }
        if (!polar_radical(*q.embedding, res.points, res.hyperplanes).empty() && rep.minimal_quotient_trivial_radical) {
            rep.minimal_quotient_trivial_radical = false;
            if (rep.failure.empty())
                rep.failure = "residue of type " + std::to_string(res.type) + " keeps a radical in the minimal quotient";
        }
    }
    return rep;
}

// ---------------------------------------------------------------------------
// Full pipeline

struct GeometryReport {
    std::string descriptor;
    std::size_t n_points = 0;
    std::size_t n_lines = 0;
    std::size_t embedding_dim = 0;
    std::size_t radical_dim = 0;
    bool polarized = false;
    std::size_t residues_checked = 0;
    bool residues_polarized = true;
    std::string theoremB;
    std::size_t minimal_quotient_dim = 0;
    std::vector<std::string> notes;
    std::string failure;
};

inline GeometryReport geometry_check(DiagramType type, int rank, const NodeSet& K, std::int64_t p, const Caps& caps = {},
                                     const ShadowLimits& lim = {})
{
    ShadowSpace sp(type, rank, K, p, lim);
    WeylModule M(type, rank, K, caps);
    GeometryReport rep;
    rep.descriptor = sp.descriptor();
    rep.n_points = sp.points().size();
    rep.n_lines = sp.lines().size();
    auto e = weyl_embedding(sp, M);
    auto pts = all_indices(rep.n_points);
    auto spans = analyse_hyperplanes(e, pts, singular_hyperplanes(sp));
    auto pol = check_polarized(e, pts, spans);
    rep.embedding_dim = pol.span_dim;
    rep.polarized = pol.polarized;
    if (!pol.polarized)
        rep.failure = pol.failure;
    auto Rgeo = polar_radical(e, pts, spans);
    rep.radical_dim = Rgeo.size();
    auto Ralg = restricted_radical(M.gram(), images_of(e, pts), p);
    rep.theoremB = same_subspace_mod_p(Rgeo, Ralg, M.rank(), p) ? "match" : "mismatch";
    if (M.degenerate_natural_form(p))
        rep.notes.push_back("char-2 B_n: form degenerate");
    auto q = quotient_embedding(e, Rgeo);
    if (q.embedding)
        rep.minimal_quotient_dim = rref_mod_p(q.embedding->images, q.embedding->dim, p).rank();
    else if (rep.failure.empty())
        rep.failure = q.failure;
    auto res = residue_check(e, Rgeo, point_residues(sp));
    rep.residues_checked = res.residues_checked;
    rep.residues_polarized = res.all_polarized && res.minimal_quotient_trivial_radical;
    if (!rep.residues_polarized && rep.failure.empty())
        rep.failure = res.failure;
    return rep;
}

} // namespace weylrad
