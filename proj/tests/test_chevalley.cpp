#include <gtest/gtest.h>

#include "weylrad/chevalley.hpp"

using namespace weylrad;

namespace {

struct Classical {
    DiagramType type;
    int rank;
};

const std::vector<Classical> kClassical{{DiagramType::A, 1}, {DiagramType::A, 2}, {DiagramType::A, 3},
                                        {DiagramType::B, 2}, {DiagramType::B, 3}, {DiagramType::C, 2},
                                        {DiagramType::C, 3}, {DiagramType::D, 3}, {DiagramType::D, 4}};

std::string label(const Classical& c) { return std::string(1, letter(c.type)) + std::to_string(c.rank); }

IntMatrix bracket(const IntMatrix& a, const IntMatrix& b) { return a * b - b * a; }

IntMatrix scaled(IntMatrix m, long long s)
{
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j)
            m(i, j) *= s;
    return m;
}

// Contravariant form on V: identity, except zeta(a0, a0) = 2 doubles the zero-weight vector in type B.
IntMatrix contravariant_natural_form(const ChevalleyBasis& cb)
{
    IntMatrix h = IntMatrix::identity(cb.natural().dim);
    if (cb.natural().type == DiagramType::B)
        h(0, 0) = 2;
    return h;
}

bool is_root(const RootSystem& rs, Root r)
{
    if (rs.positive_root_index(r))
        return true;
    for (int& c : r)
        c = -c;
    return rs.positive_root_index(r).has_value();
}

Root add(Root a, const Root& b, int s = 1)
{
    for (std::size_t i = 0; i < a.size(); ++i)
        a[i] += s * b[i];
    return a;
}

} // namespace

TEST(NaturalForm, SymplecticRankTwo)
{
    IntMatrix want{{0, 0, 1, 0}, {0, 0, 0, 1}, {-1, 0, 0, 0}, {0, -1, 0, 0}};
    EXPECT_EQ(natural_module(DiagramType::C, 2).form, want);
}

TEST(NaturalForm, OddOrthogonalHasTwoOnTheZeroWeightVector)
{
    auto nat = natural_module(DiagramType::B, 2);
    EXPECT_EQ(nat.dim, 5u);
    EXPECT_EQ(nat.form(0, 0), 2);
    EXPECT_TRUE(nat.form.is_symmetric());
    EXPECT_TRUE(natural_module(DiagramType::D, 3).form.is_symmetric());
    EXPECT_THROW(natural_module(DiagramType::E, 6), InvalidArgument);
}

TEST(Generators, CountAndKinds)
{
    for (const auto& c : kClassical) {
        ChevalleyBasis cb(c.type, c.rank);
        auto gens = chevalley_generators(cb);
        EXPECT_EQ(gens.size(), 2 * cb.num_positive_roots() + c.rank) << label(c);
    }
}

TEST(Generators, SimpleCommutatorIsCoroot)
{
    for (const auto& c : kClassical) {
        ChevalleyBasis cb(c.type, c.rank);
        for (int i = 0; i < c.rank; ++i)
            EXPECT_EQ(bracket(cb.X(i), cb.Y(i)), cb.H(i)) << label(c);
    }
}

TEST(Generators, CartanActsByRootPairing)
{
    for (const auto& c : kClassical) {
        ChevalleyBasis cb(c.type, c.rank);
        const auto& rs = cb.root_system();
        for (int i = 0; i < c.rank; ++i)
            for (std::size_t a = 0; a < cb.num_positive_roots(); ++a) {
                int pairing = 0;
                for (int j = 0; j < c.rank; ++j)
                    pairing += rs.positive_roots()[a][j] * rs.cartan(i, j);
                EXPECT_EQ(bracket(cb.H(i), cb.X(a)), scaled(cb.X(a), pairing)) << label(c);
                EXPECT_EQ(bracket(cb.H(i), cb.Y(a)), scaled(cb.Y(a), -pairing)) << label(c);
            }
    }
}

TEST(Generators, StructureConstantsAreChevalley)
{
    // [X_a, X_b] = +-(r+1) X_{a+b} where b - r a is the bottom of the a-string through b
    for (const auto& c : kClassical) {
        ChevalleyBasis cb(c.type, c.rank);
        const auto& rs = cb.root_system();
        const auto& pos = rs.positive_roots();
        for (std::size_t a = 0; a < pos.size(); ++a)
            for (std::size_t b = 0; b < pos.size(); ++b) {
                IntMatrix br = bracket(cb.X(a), cb.X(b));
                auto sum = rs.positive_root_index(add(pos[a], pos[b]));
                if (!sum) {
                    EXPECT_TRUE(br.is_zero()) << label(c);
                    continue;
                }
                int r = 0;
                while (is_root(rs, add(pos[b], pos[a], -(r + 1))))
                    ++r;
                bool plus = br == scaled(cb.X(*sum), r + 1);
                bool minus = br == scaled(cb.X(*sum), -(r + 1));
                EXPECT_TRUE(plus || minus) << label(c) << " a=" << a << " b=" << b;
            }
    }
}

TEST(Generators, SlThreeExample)
{
    ChevalleyBasis cb(DiagramType::A, 2);
    // root order: alpha1, alpha2, alpha1 + alpha2
    EXPECT_EQ(bracket(cb.X(0), cb.X(1)), cb.X(2));
}

TEST(Generators, PreserveTheNaturalForm)
{
    for (const auto& c : kClassical) {
        if (c.type == DiagramType::A)
            continue;
        ChevalleyBasis cb(c.type, c.rank);
        const IntMatrix& z = cb.natural().form;
        for (const auto& g : chevalley_generators(cb))
            EXPECT_TRUE((g.matrix.transpose() * z + z * g.matrix).is_zero()) << label(c) << " " << g.label;
    }
}

TEST(Tau, SwapsRaisingAndLowering)
{
    for (const auto& c : kClassical) {
        ChevalleyBasis cb(c.type, c.rank);
        for (std::size_t a = 0; a < cb.num_positive_roots(); ++a) {
            EXPECT_EQ(cb.tau(cb.X(a)), cb.Y(a));
            EXPECT_EQ(cb.tau(cb.Y(a)), cb.X(a));
        }
        for (int i = 0; i < c.rank; ++i)
            EXPECT_EQ(cb.tau(cb.H(i)), cb.H(i));
        for (const auto& g : chevalley_generators(cb)) {
            auto t = cb.tau(g);
            EXPECT_EQ(cb.tau(t).matrix, g.matrix);
            EXPECT_EQ(cb.tau(t).label, g.label);
        }
    }
}

TEST(Tau, IsAnAntiHomomorphism)
{
    for (const auto& c : kClassical) {
        ChevalleyBasis cb(c.type, c.rank);
        for (std::size_t a = 0; a < cb.num_positive_roots(); ++a)
            for (std::size_t b = 0; b < cb.num_positive_roots(); ++b)
                EXPECT_EQ(cb.tau(cb.X(a) * cb.Y(b)), cb.tau(cb.Y(b)) * cb.tau(cb.X(a))) << label(c);
    }
}

TEST(Tau, AdjointForTheContravariantForm)
{
    for (const auto& c : kClassical) {
        ChevalleyBasis cb(c.type, c.rank);
        IntMatrix h = contravariant_natural_form(cb);
        for (const auto& g : chevalley_generators(cb))
            EXPECT_EQ(g.matrix.transpose() * h, h * cb.tau(g.matrix)) << label(c) << " " << g.label;
    }
}

TEST(GroupElements, InverseAndAdditive)
{
    for (const auto& c : kClassical) {
        ChevalleyBasis cb(c.type, c.rank);
        for (std::int64_t p : {2, 3}) {
            ModMatrix id = ModMatrix::identity(p, cb.natural().dim);
            for (std::size_t a = 0; a < cb.num_positive_roots(); ++a)
                for (bool neg : {false, true}) {
                    SignedRoot r{a, neg};
                    ASSERT_NO_THROW(cb.group_element(r, 1, p));
                    EXPECT_TRUE(cb.group_element(r, 1, p) * cb.group_element(r, p - 1, p) == id) << label(c);
                    EXPECT_TRUE(cb.group_element(r, 1, p) * cb.group_element(r, 1, p) == cb.group_element(r, 2, p));
                }
        }
    }
}

TEST(GroupElements, PreserveTheNaturalFormModP)
{
    for (const auto& c : kClassical) {
        if (c.type == DiagramType::A)
            continue;
        ChevalleyBasis cb(c.type, c.rank);
        for (std::int64_t p : {2, 3, 5}) {
            ModMatrix z(cb.natural().form, p);
            for (std::size_t a = 0; a < cb.num_positive_roots(); ++a) {
                ModMatrix g = cb.group_element({a, true}, 1, p);
                EXPECT_TRUE(g.transpose() * z * g == z) << label(c) << " p=" << p;
            }
        }
    }
}

TEST(Ambient, DimensionsAndHighestWeight)
{
    ChevalleyBasis cb(DiagramType::A, 2);
    AmbientModule adj(cb, groups_for_weight(Weight{{1, 1}}));
    EXPECT_EQ(adj.dim(), 9u);
    AmbientModule sym(cb, groups_for_weight(Weight{{2, 0}}));
    EXPECT_EQ(sym.dim(), 6u);
    auto v = adj.highest_weight_vector();
    EXPECT_EQ(adj.weight(v.begin()->first), (Weight{{1, 1}}));
    for (std::size_t a = 0; a < cb.num_positive_roots(); ++a)
        EXPECT_TRUE(adj.apply(cb.op({a, false}), v).empty());
}

TEST(Ambient, CapAndBadWeights)
{
    ChevalleyBasis cb(DiagramType::A, 3);
    EXPECT_THROW(AmbientModule(cb, groups_for_weight(Weight{{3, 3, 3}}), 100), CapExceeded);
    EXPECT_TRUE(groups_for_weight(Weight{{0, 0, 0}}).empty());
    EXPECT_THROW(groups_for_weight(Weight{{1, -1, 0}}), InvalidArgument);
}

TEST(Ambient, ZeroWeightIsTheTrivialModule)
{
    ChevalleyBasis cb(DiagramType::A, 2);
    AmbientModule triv(cb, groups_for_weight(Weight{{0, 0}}));
    ASSERT_EQ(triv.dim(), 1u);
    auto v = triv.highest_weight_vector();
    for (std::size_t a = 0; a < cb.num_positive_roots(); ++a) {
        EXPECT_TRUE(triv.apply(cb.op({a, false}), v).empty());
        EXPECT_TRUE(triv.apply(cb.op({a, true}), v).empty());
    }
}

TEST(Ambient, ActionIsARepresentation)
{
    for (const auto& c : kClassical) {
        if (c.rank > 3)
            continue;
        ChevalleyBasis cb(c.type, c.rank);
        Weight lam = cb.root_system().zero_weight();
        lam[0] = 1;
        lam[c.rank - 1] += 1;
        AmbientModule m(cb, groups_for_weight(lam));
        const std::size_t R = cb.num_positive_roots();
        for (std::size_t a = 0; a < R; ++a)
            for (std::size_t b = 0; b < R; ++b) {
                IntMatrix comm = bracket(cb.X(a), cb.Y(b));
                NaturalOp cop = NaturalOp::from_matrix(comm);
                for (std::size_t i = 0; i < m.dim(); i += 3) {
                    SparseVector e{{i, Integer(1)}};
                    SparseVector lhs = m.apply(cb.op({a, false}), m.apply(cb.op({b, true}), e));
                    add_scaled(lhs, m.apply(cb.op({b, true}), m.apply(cb.op({a, false}), e)), -1);
                    EXPECT_EQ(lhs, m.apply(cop, e)) << label(c);
                }
            }
    }
}

TEST(Ambient, DividedPowersAreIntegral)
{
    for (const auto& c : kClassical) {
        if (c.rank > 3)
            continue;
        ChevalleyBasis cb(c.type, c.rank);
        Weight lam = cb.root_system().zero_weight();
        lam[0] = 2;
        AmbientModule m(cb, groups_for_weight(lam));
        SparseVector v = m.highest_weight_vector();
        for (std::size_t a = 0; a < cb.num_positive_roots(); ++a)
            for (unsigned k = 0; k <= 4; ++k)
                EXPECT_NO_THROW(m.apply_divided(SignedRoot{a, true}, k, v)) << label(c);
    }
}

TEST(Ambient, LoweringOrbitOfTheHighestVector)
{
    // In Gamma^m of the natural sl2 module, y(t) v+ = sum_i t^i Y^(i) v+ with Y^(i) v+ a basis vector.
    const int m = 4;
    ChevalleyBasis cb(DiagramType::A, 1);
    AmbientModule amb(cb, groups_for_weight(Weight{{m}}));
    SparseVector v = amb.highest_weight_vector();
    for (std::int64_t p : {2, 3, 5}) {
        for (std::int64_t t = 1; t < p; ++t) {
            SparseVector got = amb.group_element_apply({0, true}, t, v, p);
            SparseVector want;
            for (int i = 0; i <= m; ++i) {
                SparseVector yi = amb.apply_divided(SignedRoot{0, true}, i, v);
                ASSERT_EQ(yi.size(), 1u);
                ASSERT_EQ(yi.begin()->second, 1);
                add_term(want, yi.begin()->first, mod_pow(t, i, p));
            }
            for (auto it = want.begin(); it != want.end();) {
                it->second = mod_reduce(it->second, p);
                it = it->second == 0 ? want.erase(it) : std::next(it);
            }
            EXPECT_EQ(got, want) << "p=" << p << " t=" << t;
        }
    }
}
