#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "chevalley.hpp"
#include "exact_linalg.hpp"
#include "lattice.hpp"
#include "root_data.hpp"

namespace weylrad {

struct Caps {
    std::size_t max_ambient = 4096;
    std::size_t max_lattice = 1024;
    std::size_t max_boxes = 8;
};

/// Root operators of a Chevalley basis acting on an ambient module, in the shape lattice generation expects.
class WeylAction {
public:
    explicit WeylAction(const AmbientModule& amb) : amb_(&amb) {}

    const Weight& weight(std::size_t i) const { return amb_->weight(i); }
    std::size_t num_roots() const { return amb_->basis().num_positive_roots(); }
    int root_height(std::size_t r) const
    {
        return RootSystem::height(amb_->basis().root_system().positive_roots()[r]);
    }
    SparseVector lower(std::size_t r, unsigned a, const SparseVector& v) const
    {
        return amb_->apply_divided(SignedRoot{r, true}, a, v);
    }
    SparseVector raise(std::size_t r, unsigned a, const SparseVector& v) const
    {
        return amb_->apply_divided(SignedRoot{r, false}, a, v);
    }

private:
    const AmbientModule* amb_;
};

/// Reject weights that have no construction here: B/C/D need a single fundamental weight in range.
inline void check_supported_weight(const RootSystem& rs, const Weight& lambda)
{
    if (static_cast<int>(lambda.size()) != rs.rank())
        throw InvalidArgument("weight " + to_string(lambda) + " has the wrong length for " + rs.name());
    if (!lambda.dominant())
        throw InvalidArgument("weight " + to_string(lambda) + " is not dominant");
    if (rs.type() == DiagramType::A)
        return;
    if (rs.type() == DiagramType::E)
        throw InvalidArgument("module construction is not available for type E");
    int k = 0, total = 0;
    for (int i = 0; i < rs.rank(); ++i) {
        total += lambda[i];
        if (lambda[i])
            k = i + 1;
    }
    if (total != 1)
        throw InvalidArgument(rs.name() + " supports only fundamental weights lambda_k");
    const int n = rs.rank();
    bool ok = (rs.type() == DiagramType::B && k < n) || (rs.type() == DiagramType::C && k <= n) ||
              (rs.type() == DiagramType::D && k <= n - 2);
    if (!ok)
        throw InvalidArgument("node " + std::to_string(k) + " is outside the modelled range for " + rs.name());
}

inline std::size_t modular_dim(const IntMatrix& gram, std::int64_t p) { return rank_mod_p(gram, p); }

/// Radical of the Gram matrix mod p, in lattice coordinates.
inline std::vector<ModVector> radical_mod_p(const IntMatrix& gram, std::int64_t p)
{
    return rref_mod_p(kernel_mod_p(gram, p), gram.cols(), p).rows;
}

/// A_min = U_Z v+ inside the ambient tensor product, with its contravariant Gram matrix.
class WeylModule {
public:
    WeylModule(DiagramType type, int rank, const Weight& lambda, const Caps& caps = {})
        : cb_(std::make_unique<ChevalleyBasis>(type, rank)), lambda_(lambda)
    {
        check_supported_weight(cb_->root_system(), lambda);
        ambient_ = std::make_unique<AmbientModule>(*cb_, groups_for_weight(lambda), caps.max_ambient);
        action_ = std::make_unique<WeylAction>(*ambient_);
        lattice_ = generate_lattice(*action_, ambient_->highest_weight_vector(), caps.max_lattice);
        gram_ = contravariant_gram(*action_, lattice_);
        smith_ = smith_normal_form(gram_);
    }

    WeylModule(DiagramType type, int rank, const NodeSet& K, const Caps& caps = {})
        : WeylModule(type, rank, RootSystem(type, rank).lambda(K), caps)
    {
    }

    WeylModule(const WeylModule&) = delete;
    WeylModule& operator=(const WeylModule&) = delete;

    const RootSystem& root_system() const { return cb_->root_system(); }
    const ChevalleyBasis& chevalley() const { return *cb_; }
    const AmbientModule& ambient() const { return *ambient_; }
    const WeylAction& action() const { return *action_; }
    const LatticeModule& lattice() const { return lattice_; }
    const Weight& lambda() const { return lambda_; }
    std::size_t rank() const { return lattice_.rank(); }
    const IntMatrix& gram() const { return gram_; }
    const std::vector<Integer>& smith() const { return smith_; }

    SparseVector highest_weight_vector() const { return ambient_->highest_weight_vector(); }

    std::size_t modular_dim(std::int64_t p) const { return weylrad::modular_dim(gram_, p); }
    std::vector<ModVector> radical(std::int64_t p) const { return radical_mod_p(gram_, p); }

    /// X^(a) (or Y^(a) when lowering) in lattice coordinates.
    IntMatrix operator_matrix(SignedRoot r, unsigned a) const
    {
        return weylrad::operator_matrix(*action_, lattice_, r.root, a, r.negative);
    }

    /// x_alpha(t) on the lattice modulo p.
    ModMatrix group_element(SignedRoot r, std::int64_t t, std::int64_t p) const
    {
        require_prime(p);
        ModMatrix out = ModMatrix::identity(p, rank());
        for (unsigned a = 1;; ++a) {
            IntMatrix m = operator_matrix(r, a);
            if (m.is_zero())
                break;
            std::int64_t ta = mod_pow(t, a, p);
            for (std::size_t i = 0; i < rank(); ++i)
                for (std::size_t j = 0; j < rank(); ++j)
                    if (m(i, j) != 0)
                        out(i, j) = (out(i, j) + ta * mod_reduce(m(i, j), p)) % p;
        }
        return out;
    }

    /// Gram matrix of the ambient orthonormal tensor form on the lattice basis (type A oracle).
    IntMatrix ambient_gram() const
    {
        IntMatrix G(rank(), rank());
        for (std::size_t s = 0; s < rank(); ++s)
            for (std::size_t t = 0; t < rank(); ++t) {
                Integer v = 0;
                for (const auto& [i, c] : lattice_.basis_vector(s)) {
                    auto it = lattice_.basis_vector(t).find(i);
                    if (it != lattice_.basis_vector(t).end())
                        v += c * it->second * ambient_->tensor_form_diagonal(i);
                }
                G(s, t) = v;
            }
        return G;
    }

    /// zeta^ restricted to the lattice basis (polar types, single exterior power).
    IntMatrix wedge_gram() const
    {
        IntMatrix G(rank(), rank());
        for (std::size_t s = 0; s < rank(); ++s)
            for (std::size_t t = 0; t < rank(); ++t) {
                Integer v = 0;
                for (const auto& [i, c] : lattice_.basis_vector(s))
                    for (const auto& [j, d] : lattice_.basis_vector(t))
                        v += c * d * ambient_->wedge_form(i, j);
                G(s, t) = v;
            }
        return G;
    }

    /// True when the polar-type form is degenerate on the natural module mod p.
    bool degenerate_natural_form(std::int64_t p) const
    {
        return cb_->natural().type == DiagramType::B && p == 2;
    }

private:
    std::unique_ptr<ChevalleyBasis> cb_;
    Weight lambda_;
    std::unique_ptr<AmbientModule> ambient_;
    std::unique_ptr<WeylAction> action_;
    LatticeModule lattice_;
    IntMatrix gram_;
    std::vector<Integer> smith_;
};

/// Rows f_i = sum_k (G^-1)_{ik} b_k of the dual lattice A_max, in ambient rational coordinates.
inline RationalMatrix dual_lattice(const LatticeModule& L, const IntMatrix& gram, std::size_t ambient_dim)
{
    auto inv = rational_inverse(gram);
    if (!inv)
        throw InvalidArgument("Gram matrix is singular; the dual lattice is undefined");
    RationalMatrix out(L.rank(), std::vector<Rational>(ambient_dim));
    for (std::size_t i = 0; i < L.rank(); ++i)
        for (std::size_t k = 0; k < L.rank(); ++k) {
            if ((*inv)[i][k] == 0)
                continue;
            for (const auto& [j, c] : L.basis_vector(k))
                out[i][j] += (*inv)[i][k] * Rational(c);
        }
    return out;
}

/// Index [A_max : A_min] = |det G|.
inline Integer dual_index(const IntMatrix& gram) { return abs(determinant(gram)); }

struct PrimeReport {
    std::int64_t p;
    std::size_t dimL;
    std::size_t radical_dim;
};

struct WeylModuleReport {
    std::string type;
    int rank = 0;
    NodeSet K;
    Weight lambda;
    std::size_t dim = 0;
    std::vector<Integer> smith;
    std::vector<PrimeReport> primes;
    bool minuscule = false;
    std::vector<std::string> notes;
};

inline WeylModuleReport weyl_module_report(const WeylModule& M, const std::vector<std::int64_t>& primes)
{
    const RootSystem& rs = M.root_system();
    WeylModuleReport r;
    r.type = std::string(1, letter(rs.type()));
    r.rank = rs.rank();
    r.lambda = M.lambda();
    for (int i = 0; i < rs.rank(); ++i)
        if (M.lambda()[i] > 0)
            r.K.push_back(i + 1);
    r.dim = M.rank();
    r.smith = M.smith();
    for (auto p : primes) {
        std::size_t d = M.modular_dim(p);
        r.primes.push_back({p, d, M.rank() - d});
        if (M.degenerate_natural_form(p))
            r.notes.push_back("char-2 B_n: form degenerate");
    }
    int total = 0;
    for (int i = 0; i < rs.rank(); ++i)
        total += M.lambda()[i];
    r.minuscule = total == 1 && r.K.size() == 1 && is_minuscule(rs, r.K[0]);
    return r;
}

} // namespace weylrad
