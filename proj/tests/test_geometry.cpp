#include <gtest/gtest.h>

#include <set>

#include "weylrad/geometry.hpp"

using namespace weylrad;

namespace {

// Subspaces of F_2^N as sets of bitmask vectors: an oracle for flags that shares nothing with echelon forms.
using F2Space = std::set<unsigned>;

F2Space f2_span(const std::vector<unsigned>& gens)
{
    F2Space s{0};
    for (unsigned g : gens) {
        F2Space next = s;
        for (unsigned v : s)
            next.insert(v ^ g);
        s = std::move(next);
    }
    return s;
}

F2Space f2_of(const Subspace& s)
{
    std::vector<unsigned> gens;
    for (const auto& r : s.rows) {
        unsigned m = 0;
        for (std::size_t i = 0; i < r.size(); ++i)
            if (r[i])
                m |= 1u << i;
        gens.push_back(m);
    }
    return f2_span(gens);
}

int f2_dim(const F2Space& s) { return std::countr_zero(static_cast<unsigned>(s.size())); }

int f2_meet(const F2Space& a, const F2Space& b)
{
    std::size_t n = 0;
    for (unsigned v : a)
        n += b.count(v);
    return std::countr_zero(static_cast<unsigned>(n));
}

std::vector<F2Space> f2_subspaces(int N, int k)
{
    std::set<F2Space> out;
    std::vector<unsigned> cur;
    auto rec = [&](auto&& self) -> void {
        if (static_cast<int>(cur.size()) == k) {
            auto s = f2_span(cur);
            if (f2_dim(s) == k)
                out.insert(s);
            return;
        }
        for (unsigned v = 1; v < (1u << N); ++v) {
            cur.push_back(v);
            self(self);
            cur.pop_back();
        }
    };
    rec(rec);
    return {out.begin(), out.end()};
}

bool contains(const F2Space& big, const F2Space& small)
{
    return std::all_of(small.begin(), small.end(), [&](unsigned v) { return big.count(v) > 0; });
}

// Full flags of F_2^N.
std::vector<std::vector<F2Space>> f2_chambers(int N)
{
    std::vector<std::vector<F2Space>> levels;
    for (int k = 1; k < N; ++k)
        levels.push_back(f2_subspaces(N, k));
    std::vector<std::vector<F2Space>> out;
    std::vector<F2Space> cur;
    auto rec = [&](auto&& self, int k) -> void {
        if (k == N - 1) {
            out.push_back(cur);
            return;
        }
        for (const auto& s : levels[k])
            if (cur.empty() || contains(s, cur.back())) {
                cur.push_back(s);
                self(self, k + 1);
                cur.pop_back();
            }
    };
    rec(rec, 0);
    return out;
}

// Chambers at Weyl distance w0: dim(c_i meet d_j) = max(0, i + j - N) for all i, j.
bool chambers_opposite(const std::vector<F2Space>& c, const std::vector<F2Space>& d, int N)
{
    for (int i = 1; i < N; ++i)
        for (int j = 1; j < N; ++j)
            if (f2_meet(c[i - 1], d[j - 1]) != std::max(0, i + j - N))
                return false;
    return true;
}

bool chamber_contains(const std::vector<F2Space>& c, const NodeSet& types, const std::vector<F2Space>& parts)
{
    for (std::size_t t = 0; t < types.size(); ++t)
        if (c[types[t] - 1] != parts[t])
            return false;
    return true;
}

std::vector<F2Space> f2_parts(const FlagPoint& x)
{
    std::vector<F2Space> out;
    for (const auto& s : x.parts)
        out.push_back(f2_of(s));
    return out;
}

Subspace span_of(std::initializer_list<ModVector> rows, std::size_t N, std::int64_t p)
{
    return span_mod_p(std::vector<ModVector>(rows), N, p);
}

ModVector unit(std::size_t N, std::size_t i)
{
    ModVector v(N, 0);
    v[i] = 1;
    return v;
}

std::vector<std::size_t> members(const std::vector<bool>& H)
{
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < H.size(); ++i)
        if (H[i])
            out.push_back(i);
    return out;
}

struct GeomCase {
    DiagramType type;
    int rank;
    NodeSet K;
    std::int64_t p;
};

const std::vector<GeomCase> kQuick{{DiagramType::A, 2, {1}, 2},    {DiagramType::A, 2, {1}, 3},
                                   {DiagramType::A, 2, {1, 2}, 2}, {DiagramType::A, 2, {1, 2}, 3},
                                   {DiagramType::A, 3, {2}, 2},    {DiagramType::A, 3, {1, 3}, 2},
                                   {DiagramType::C, 2, {1}, 2},    {DiagramType::C, 2, {2}, 2},
                                   {DiagramType::C, 2, {2}, 3},    {DiagramType::B, 2, {1}, 2},
                                   {DiagramType::B, 2, {1}, 3},    {DiagramType::D, 3, {1}, 2},
                                   {DiagramType::D, 3, {1}, 3}};

std::string label(const GeomCase& c)
{
    std::string s = std::string(1, letter(c.type)) + std::to_string(c.rank) + " K={";
    for (int k : c.K)
        s += std::to_string(k);
    return s + "} p=" + std::to_string(c.p);
}

} // namespace

TEST(Shadow, Counts)
{
    ShadowSpace fano(DiagramType::A, 2, {1}, 2);
    EXPECT_EQ(fano.points().size(), 7u);
    EXPECT_EQ(fano.lines().size(), 7u);
    ShadowSpace flags(DiagramType::A, 2, {1, 2}, 2);
    EXPECT_EQ(flags.points().size(), 21u);
    EXPECT_EQ(flags.lines().size(), 14u);
    for (const auto& l : flags.lines())
        EXPECT_EQ(l.points.size(), 3u);
    ShadowSpace gq(DiagramType::C, 2, {1}, 2);
    EXPECT_EQ(gq.points().size(), 15u);
    EXPECT_EQ(gq.lines().size(), 15u);
    EXPECT_EQ(ShadowSpace(DiagramType::A, 2, {1}, 3).points().size(), 13u);
    EXPECT_EQ(ShadowSpace(DiagramType::A, 3, {2}, 2).points().size(), 35u);
}

TEST(Shadow, CountsMatchBruteForceSubspaces)
{
    ShadowSpace sp(DiagramType::A, 3, {2}, 2);
    EXPECT_EQ(sp.points().size(), f2_subspaces(4, 2).size());
    // points and lines of the symplectic quadrangle: all 1-spaces, isotropic 2-spaces
    ShadowSpace gq(DiagramType::C, 2, {1}, 2);
    std::size_t iso = 0;
    for (const auto& s : f2_subspaces(4, 2)) {
        std::vector<unsigned> vs(s.begin(), s.end());
        bool ok = true;
        for (unsigned u : vs)
            for (unsigned v : vs) {
                // <u, v> = u1 v3 + u2 v4 - u3 v1 - u4 v2 over F_2
                int f = ((u >> 0 & 1) & (v >> 2 & 1)) ^ ((u >> 1 & 1) & (v >> 3 & 1)) ^ ((u >> 2 & 1) & (v >> 0 & 1)) ^
                        ((u >> 3 & 1) & (v >> 1 & 1));
                ok = ok && f == 0;
            }
        iso += ok;
    }
    EXPECT_EQ(gq.lines().size(), iso);
}

TEST(Shadow, PointsAreNestedAndSingular)
{
    for (const auto& c : kQuick) {
        ShadowSpace sp(c.type, c.rank, c.K, c.p);
        for (const auto& x : sp.points()) {
            for (std::size_t t = 0; t < x.parts.size(); ++t) {
                EXPECT_EQ(x.parts[t].dim(), static_cast<std::size_t>(c.K[t]));
                if (t > 0) {
                    EXPECT_TRUE(subspace_contains(x.parts[t], x.parts[t - 1], sp.natural_dim(), c.p));
                }
            }
            if (c.type != DiagramType::A) {
                EXPECT_TRUE(sp.totally_singular(x.parts[0])) << label(c);
            }
        }
    }
}

TEST(Shadow, PartialLinearSpace)
{
    for (const auto& c : kQuick) {
        ShadowSpace sp(c.type, c.rank, c.K, c.p);
        std::set<std::pair<std::size_t, std::size_t>> pairs;
        for (const auto& l : sp.lines()) {
            EXPECT_GE(l.points.size(), 2u);
            for (auto a : l.points)
                for (auto b : l.points)
                    if (a < b) {
                        EXPECT_TRUE(pairs.insert({a, b}).second) << label(c);
                    }
        }
    }
}

TEST(Shadow, Validation)
{
    EXPECT_THROW(ShadowSpace(DiagramType::A, 2, {1}, 5), InvalidArgument);
    EXPECT_THROW(ShadowSpace(DiagramType::A, 2, {3}, 2), InvalidArgument);
    EXPECT_THROW(ShadowSpace(DiagramType::A, 2, {2, 1}, 2), InvalidArgument);
    EXPECT_THROW(ShadowSpace(DiagramType::E, 6, {1}, 2), InvalidArgument);
    EXPECT_THROW(ShadowSpace(DiagramType::C, 2, {1, 2}, 2), InvalidArgument);
    EXPECT_THROW(ShadowSpace(DiagramType::B, 2, {2}, 2), InvalidArgument);
    ShadowLimits tiny;
    tiny.max_points = 10;
    EXPECT_THROW(ShadowSpace(DiagramType::A, 2, {1, 2}, 2, tiny), CapExceeded);
    EXPECT_EQ(ShadowSpace(DiagramType::A, 2, {1, 2}, 3).descriptor(), "A2 K={1,2} p=3");
}

TEST(Opposition, FlagsOfThePlane)
{
    ShadowSpace sp(DiagramType::A, 2, {1, 2}, 2);
    const std::size_t N = 3;
    auto a = [&](std::size_t i) { return unit(N, i - 1); };
    FlagPoint x{{span_of({a(1)}, N, 2), span_of({a(1), a(2)}, N, 2)}};
    FlagPoint y{{span_of({a(3)}, N, 2), span_of({a(2), a(3)}, N, 2)}};
    EXPECT_TRUE(sp.is_opposite(x, y));
    FlagPoint z{{span_of({a(2)}, N, 2), span_of({a(2), a(3)}, N, 2)}}; // a2 lies on x's line
    EXPECT_FALSE(sp.is_opposite(x, z));
}

TEST(Opposition, ComplementaryPlanesAndSelfOpposition)
{
    ShadowSpace sp(DiagramType::A, 3, {2}, 2);
    FlagPoint x{{span_of({unit(4, 0), unit(4, 1)}, 4, 2)}};
    FlagPoint y{{span_of({unit(4, 2), unit(4, 3)}, 4, 2)}};
    EXPECT_TRUE(sp.is_opposite(x, y));
    EXPECT_FALSE(sp.is_opposite(x, x));
    ShadowSpace gq(DiagramType::C, 2, {1}, 3);
    for (const auto& q : gq.points())
        EXPECT_FALSE(gq.is_opposite(q, q));
}

TEST(Opposition, Symmetric)
{
    for (const auto& c : kQuick) {
        ShadowSpace sp(c.type, c.rank, c.K, c.p);
        if (sp.dual_K() != sp.K())
            continue;
        const auto& P = sp.points();
        for (std::size_t i = 0; i < P.size(); i += 2)
            for (std::size_t j = 0; j < P.size(); j += 3)
                EXPECT_EQ(sp.is_opposite(P[i], P[j]), sp.is_opposite(P[j], P[i])) << label(c);
    }
}

TEST(Opposition, AgreesWithChamberDistance)
{
    struct Case {
        int rank;
        NodeSet K;
    };
    for (const auto& c : {Case{2, {1}}, Case{2, {1, 2}}, Case{3, {2}}, Case{3, {1, 3}}, Case{3, {1}}}) {
        ShadowSpace sp(DiagramType::A, c.rank, c.K, 2);
        const int N = c.rank + 1;
        auto chambers = f2_chambers(N);
        auto containing = [&](const NodeSet& types, const FlagPoint& f) {
            auto parts = f2_parts(f);
            std::vector<std::size_t> out;
            for (std::size_t i = 0; i < chambers.size(); ++i)
                if (chamber_contains(chambers[i], types, parts))
                    out.push_back(i);
            return out;
        };
        std::vector<std::vector<std::size_t>> over_x, over_y;
        for (const auto& x : sp.points())
            over_x.push_back(containing(sp.K(), x));
        for (const auto& y : sp.dual_points())
            over_y.push_back(containing(sp.dual_K(), y));
        for (std::size_t i = 0; i < sp.points().size(); ++i)
            for (std::size_t j = 0; j < sp.dual_points().size(); ++j) {
                bool want = false;
                for (auto a : over_x[i])
                    for (auto b : over_y[j])
                        want = want || chambers_opposite(chambers[a], chambers[b], N);
                ASSERT_EQ(sp.is_opposite(sp.points()[i], sp.dual_points()[j]), want)
                    << "A" << c.rank << " point " << i << " dual " << j;
            }
    }
}

TEST(Hyperplanes, Sizes)
{
    ShadowSpace fano(DiagramType::A, 2, {1}, 2);
    for (const auto& H : singular_hyperplanes(fano))
        EXPECT_EQ(members(H).size(), 3u);
    ShadowSpace gq(DiagramType::C, 2, {1}, 2);
    for (const auto& q : gq.points()) {
        auto H = gq.singular_hyperplane(q);
        EXPECT_EQ(members(H).size(), 7u);
        Subspace qp = gq.perp(q.parts[0]);
        for (std::size_t i = 0; i < H.size(); ++i)
            EXPECT_EQ(H[i], subspace_contains(qp, gq.points()[i].parts[0], 4, 2));
    }
    ShadowSpace flags(DiagramType::A, 2, {1, 2}, 2);
    auto hs = singular_hyperplanes(flags);
    EXPECT_EQ(hs.size(), 21u);
    for (const auto& H : hs)
        EXPECT_EQ(members(H).size(), members(hs[0]).size());
}

TEST(Hyperplanes, MeetEveryLineInOneOrAllPoints)
{
    for (const auto& c : kQuick) {
        ShadowSpace sp(c.type, c.rank, c.K, c.p);
        for (const auto& H : singular_hyperplanes(sp))
            for (const auto& l : sp.lines()) {
                std::size_t in = std::count_if(l.points.begin(), l.points.end(), [&](std::size_t q) { return H[q]; });
                EXPECT_TRUE(in == 1 || in == l.points.size()) << label(c);
            }
    }
}

TEST(Hyperplanes, ComplementsAreConnected)
{
    ShadowSpace fano(DiagramType::A, 2, {1}, 2);
    auto hs = singular_hyperplanes(fano);
    EXPECT_TRUE(complement_connected(fano, hs[0]));
    for (const auto& c : kQuick) {
        ShadowSpace sp(c.type, c.rank, c.K, c.p);
        for (const auto& H : singular_hyperplanes(sp))
            EXPECT_TRUE(complement_connected(sp, H)) << label(c);
    }
    // removing a single point from the Fano plane cannot disconnect it either
    std::vector<bool> one(7, false);
    one[0] = true;
    EXPECT_TRUE(complement_connected(fano, one));
}

TEST(Embedding, StandardFlagGoesToTheHighestWeightVector)
{
    for (const auto& c : kQuick) {
        ShadowSpace sp(c.type, c.rank, c.K, c.p);
        WeylModule M(c.type, c.rank, c.K);
        auto e = weyl_embedding(sp, M);
        ModVector e0(M.rank(), 0);
        e0[0] = 1;
        EXPECT_EQ(weyl_embedding_image(sp, e, sp.standard_point()), e0) << label(c);
        EXPECT_TRUE(lines_are_projective(sp, e)) << label(c);
        std::set<ModVector> distinct(e.images.begin(), e.images.end());
        EXPECT_EQ(distinct.size(), e.images.size()) << label(c);
    }
}

TEST(Embedding, FanoPointLandsOnTheMatchingVector)
{
    ShadowSpace sp(DiagramType::A, 2, {1}, 2);
    WeylModule M(DiagramType::A, 2, NodeSet{1});
    auto e = weyl_embedding(sp, M);
    FlagPoint x{{span_of({{1, 1, 0}}, 3, 2)}};
    const ModVector& img = weyl_embedding_image(sp, e, x);
    ModVector ambient(M.ambient().dim(), 0);
    for (std::size_t s = 0; s < M.rank(); ++s)
        for (const auto& [i, c] : M.lattice().basis_vector(s))
            ambient[i] = (ambient[i] + img[s] * mod_reduce(c, 2)) % 2;
    ModVector want(M.ambient().dim(), 0);
    want[M.ambient().index({1u})] = 1;
    want[M.ambient().index({2u})] = 1;
    EXPECT_EQ(ambient, want);
}

TEST(Embedding, SymplecticPlaneIsAWedge)
{
    ShadowSpace sp(DiagramType::C, 2, {2}, 3);
    WeylModule M(DiagramType::C, 2, NodeSet{2});
    FlagPoint x{{span_of({unit(4, 0), unit(4, 1)}, 4, 3)}};
    auto g = grassmann_image(sp, M, x);
    ASSERT_TRUE(g.has_value());
    ModVector e0(M.rank(), 0);
    e0[0] = 1;
    EXPECT_TRUE(proportional(*g, e0, 3));
}

TEST(Embedding, GroupCovariance)
{
    for (const auto& c : kQuick) {
        ShadowSpace sp(c.type, c.rank, c.K, c.p);
        WeylModule M(c.type, c.rank, c.K);
        auto e = weyl_embedding(sp, M);
        const auto& cb = M.chevalley();
        for (std::size_t r = 0; r < cb.num_positive_roots(); ++r)
            for (bool neg : {false, true})
                for (std::int64_t t = 1; t < c.p; ++t) {
                    ModMatrix gn = cb.group_element({r, neg}, t, c.p);
                    ModMatrix gl = M.group_element({r, neg}, t, c.p);
                    for (std::size_t i = 0; i < sp.points().size(); ++i) {
                        FlagPoint y = sp.transform(gn, sp.points()[i]);
                        auto j = sp.index_of(y);
                        ASSERT_TRUE(j.has_value());
                        EXPECT_TRUE(proportional(gl.apply(e.images[i]), e.images[*j], c.p)) << label(c);
                    }
                }
    }
}

TEST(Embedding, AgreesWithGrassmannCoordinates)
{
    for (const auto& c : kQuick) {
        ShadowSpace sp(c.type, c.rank, c.K, c.p);
        WeylModule M(c.type, c.rank, c.K);
        auto e = weyl_embedding(sp, M);
        for (std::size_t i = 0; i < sp.points().size(); ++i) {
            auto g = grassmann_image(sp, M, sp.points()[i]);
            ASSERT_TRUE(g.has_value()) << label(c);
            EXPECT_TRUE(proportional(*g, e.images[i], c.p)) << label(c) << " point " << i;
        }
    }
}

TEST(Embedding, ModuleMustMatch)
{
    ShadowSpace sp(DiagramType::A, 2, {1}, 2);
    WeylModule M(DiagramType::A, 2, NodeSet{2});
    EXPECT_THROW(weyl_embedding(sp, M), InvalidArgument);
}

TEST(Polarization, InducedHyperplanes)
{
    for (const auto& c : kQuick) {
        ShadowSpace sp(c.type, c.rank, c.K, c.p);
        WeylModule M(c.type, c.rank, c.K);
        auto e = weyl_embedding(sp, M);
        auto rep = check_polarized(e, all_indices(sp.points().size()), singular_hyperplanes(sp));
        EXPECT_TRUE(rep.polarized) << label(c) << ": " << rep.failure;
        EXPECT_EQ(rep.span_dim, M.rank()) << label(c);
        EXPECT_EQ(rep.hyperplanes_checked, sp.dual_points().size());
    }
}

TEST(PolarRadical, EqualsTheFormRadical)
{
    for (const auto& c : kQuick) {
        ShadowSpace sp(c.type, c.rank, c.K, c.p);
        WeylModule M(c.type, c.rank, c.K);
        auto e = weyl_embedding(sp, M);
        auto geo = polar_radical_geometric(sp, e);
        EXPECT_TRUE(same_subspace_mod_p(geo, M.radical(c.p), M.rank(), c.p)) << label(c);
        auto alg = restricted_radical(M.gram(), e.images, c.p);
        EXPECT_TRUE(same_subspace_mod_p(geo, alg, M.rank(), c.p)) << label(c);
    }
}

TEST(PolarRadical, AdjointValues)
{
    auto r3 = geometry_check(DiagramType::A, 2, {1, 2}, 3);
    EXPECT_EQ(r3.radical_dim, 1u);
    EXPECT_EQ(r3.minimal_quotient_dim, 7u);
    EXPECT_EQ(r3.theoremB, "match");
    auto r2 = geometry_check(DiagramType::A, 2, {1, 2}, 2);
    EXPECT_EQ(r2.radical_dim, 0u);
    EXPECT_EQ(r2.minimal_quotient_dim, 8u);
    for (auto K : {NodeSet{1}, NodeSet{2}})
        EXPECT_EQ(geometry_check(DiagramType::A, 3, K, 2).radical_dim, 0u);
    EXPECT_EQ(geometry_check(DiagramType::A, 3, {2}, 3).radical_dim, 0u);
    EXPECT_EQ(geometry_check(DiagramType::C, 2, {1}, 3).radical_dim, 0u);
}

TEST(Quotient, TrivialSubspaceLeavesTheEmbedding)
{
    ShadowSpace sp(DiagramType::A, 2, {1, 2}, 3);
    WeylModule M(DiagramType::A, 2, NodeSet{1, 2});
    auto e = weyl_embedding(sp, M);
    auto q = quotient_embedding(e, {});
    ASSERT_TRUE(q.embedding.has_value());
    EXPECT_EQ(q.embedding->dim, e.dim);
    EXPECT_EQ(q.embedding->images, e.images);
}

TEST(Quotient, ByThePolarRadical)
{
    ShadowSpace sp(DiagramType::A, 2, {1, 2}, 3);
    WeylModule M(DiagramType::A, 2, NodeSet{1, 2});
    auto e = weyl_embedding(sp, M);
    auto R = polar_radical_geometric(sp, e);
    auto q = quotient_embedding(e, R);
    ASSERT_TRUE(q.embedding.has_value()) << q.failure;
    EXPECT_EQ(q.embedding->dim, 7u);
    auto pts = all_indices(sp.points().size());
    auto hs = singular_hyperplanes(sp);
    EXPECT_TRUE(check_polarized(*q.embedding, pts, hs).polarized);
    EXPECT_TRUE(polar_radical(*q.embedding, pts, hs).empty());
    EXPECT_TRUE(lines_are_projective(sp, *q.embedding));
}

TEST(Quotient, NonRadicalLinesBreakThePicture)
{
    // over F_2 the adjoint embedding has no radical, so every 1-space is outside it
    ShadowSpace sp(DiagramType::A, 2, {1, 2}, 2);
    WeylModule M(DiagramType::A, 2, NodeSet{1, 2});
    auto e = weyl_embedding(sp, M);
    auto pts = all_indices(sp.points().size());
    auto hs = singular_hyperplanes(sp);
    std::size_t witnessed = 0;
    for (unsigned bits = 1; bits < 256; ++bits) {
        ModVector v(8);
        for (int i = 0; i < 8; ++i)
            v[i] = bits >> i & 1;
        auto q = quotient_embedding(e, {v});
        if (!q.embedding) {
            EXPECT_FALSE(q.failure.empty());
            continue;
        }
        auto rep = check_polarized(*q.embedding, pts, hs);
        EXPECT_FALSE(rep.polarized) << "R = <" << bits << ">";
        witnessed += !rep.polarized;
    }
    EXPECT_GT(witnessed, 0u);
    // a point image itself violates QE1
    auto q = quotient_embedding(e, {e.images[3]});
    EXPECT_FALSE(q.embedding.has_value());
    EXPECT_NE(q.failure.find("QE1"), std::string::npos);
}

TEST(Residues, PointResidueOfTheLineGrassmannian)
{
    ShadowSpace sp(DiagramType::A, 3, {2}, 2);
    WeylModule M(DiagramType::A, 3, NodeSet{2});
    auto e = weyl_embedding(sp, M);
    auto res = make_residue(sp, 1, span_of({unit(4, 0)}, 4, 2));
    EXPECT_EQ(res.points.size(), 7u);
    EXPECT_EQ(res.lines.size(), 7u);
    for (const auto& H : res.hyperplanes)
        EXPECT_EQ(members(H).size(), 3u);
    EXPECT_TRUE(check_polarized(e, res.points, res.hyperplanes).polarized);
}

TEST(Residues, AllPolarizedWithTrivialQuotientRadical)
{
    for (const auto& c : kQuick) {
        ShadowSpace sp(c.type, c.rank, c.K, c.p);
        WeylModule M(c.type, c.rank, c.K);
        auto e = weyl_embedding(sp, M);
        auto R = polar_radical_geometric(sp, e);
        auto rep = residue_check(e, R, point_residues(sp));
        EXPECT_TRUE(rep.all_polarized) << label(c) << ": " << rep.failure;
        EXPECT_TRUE(rep.minimal_quotient_trivial_radical) << label(c) << ": " << rep.failure;
    }
}

TEST(Residues, ScopeExcludesTypesInK)
{
    ShadowSpace sp(DiagramType::A, 2, {1, 2}, 2);
    EXPECT_TRUE(point_residues(sp).empty());
    ShadowSpace fano(DiagramType::A, 2, {1}, 2);
    auto res = point_residues(fano);
    EXPECT_EQ(res.size(), 7u); // one per line
    for (const auto& r : res)
        EXPECT_EQ(r.points.size(), 3u);
}

TEST(Report, DotOutput)
{
    ShadowSpace fano(DiagramType::A, 2, {1}, 2);
    std::string dot = fano.to_dot();
    EXPECT_EQ(dot.rfind("graph shadow {", 0), 0u);
    EXPECT_EQ(std::count(dot.begin(), dot.end(), '-') / 2, 21); // complete graph on 7 vertices
}
