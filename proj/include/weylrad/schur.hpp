#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "chevalley.hpp"
#include "exact_linalg.hpp"
#include "lattice.hpp"
#include "root_data.hpp"
#include "sparse.hpp"
#include "weyl_module.hpp"

namespace weylrad {

/// Young diagram given by its column lengths, longest column first.
class YoungDiagram {
public:
    YoungDiagram() = default;
    explicit YoungDiagram(std::vector<int> columns) : cols_(std::move(columns))
    {
        for (std::size_t c = 0; c < cols_.size(); ++c) {
            if (cols_[c] < 1)
                throw InvalidArgument("column lengths must be positive");
            if (c > 0 && cols_[c] > cols_[c - 1])
                throw InvalidArgument("column lengths must be non-increasing");
        }
        offsets_.resize(cols_.size());
        std::size_t off = 0;
        for (std::size_t c = 0; c < cols_.size(); ++c) {
            offsets_[c] = off;
            off += cols_[c];
        }
        boxes_ = off;
    }

    /// Diagram from its row partition, e.g. (2,1).
    static YoungDiagram from_rows(const std::vector<int>& rows)
    {
        std::vector<int> cols;
        if (!rows.empty())
            for (int c = 0; c < rows.front(); ++c) {
                int len = 0;
                for (int r : rows)
                    if (r > c)
                        ++len;
                cols.push_back(len);
            }
        for (std::size_t i = 1; i < rows.size(); ++i)
            if (rows[i] > rows[i - 1])
                throw InvalidArgument("row lengths must be non-increasing");
        return YoungDiagram(cols);
    }

    const std::vector<int>& columns() const { return cols_; }
    std::size_t num_columns() const { return cols_.size(); }
    int column_length(std::size_t c) const { return cols_[c]; }
    std::size_t boxes() const { return boxes_; }
    int longest_column() const { return cols_.empty() ? 0 : cols_.front(); }

    std::vector<int> rows() const
    {
        std::vector<int> r(longest_column(), 0);
        for (int len : cols_)
            for (int i = 0; i < len; ++i)
                ++r[i];
        return r;
    }

    /// Position of box (column c, row r from the top) in the column word (columns left to right, bottom to top).
    std::size_t word_position(std::size_t c, int r) const { return offsets_[c] + (cols_[c] - 1 - r); }

    friend bool operator==(const YoungDiagram&, const YoungDiagram&) = default;

private:
    std::vector<int> cols_;
    std::vector<std::size_t> offsets_;
    std::size_t boxes_ = 0;
};

/// lambda = sum l_k lambda_k becomes l_k columns of length k.
inline YoungDiagram diagram_from_weight(const Weight& lambda)
{
    if (!lambda.dominant())
        throw InvalidArgument("weight " + to_string(lambda) + " is not dominant");
    std::vector<int> cols;
    for (int k = static_cast<int>(lambda.size()); k >= 1; --k)
        for (int c = 0; c < lambda[k - 1]; ++c)
            cols.push_back(k);
    return YoungDiagram(cols);
}

/// Entries of a filling stored column by column, each column from top to bottom.
struct Filling {
    std::vector<std::vector<int>> columns;

    friend auto operator<=>(const Filling&, const Filling&) = default;
    friend bool operator==(const Filling&, const Filling&) = default;

    /// Column word: columns left to right, each read bottom to top.
    std::vector<int> word() const
    {
        std::vector<int> w;
        for (const auto& col : columns)
            w.insert(w.end(), col.rbegin(), col.rend());
        return w;
    }

    bool is_tableau() const
    {
        for (std::size_t c = 0; c < columns.size(); ++c) {
            for (std::size_t r = 1; r < columns[c].size(); ++r)
                if (columns[c][r - 1] >= columns[c][r])
                    return false;
            if (c + 1 < columns.size())
                for (std::size_t r = 0; r < columns[c + 1].size(); ++r)
                    if (columns[c][r] > columns[c + 1][r])
                        return false;
        }
        return true;
    }
};

/// Row-wise text, e.g. "1 1 / 2".
inline std::string to_string(const Filling& f)
{
    std::size_t rows = f.columns.empty() ? 0 : f.columns.front().size();
    std::string s;
    for (std::size_t r = 0; r < rows; ++r) {
        if (r)
            s += " / ";
        bool first = true;
        for (const auto& col : f.columns)
            if (r < col.size()) {
                s += (first ? "" : " ") + std::to_string(col[r]);
                first = false;
            }
    }
    return s;
}

using SchurVector = std::map<Filling, Integer>;

inline std::string to_string(const SchurVector& v)
{
    if (v.empty())
        return "0";
    std::string s;
    for (const auto& [f, c] : v) {
        std::string w;
        for (int x : f.word())
            w += std::to_string(x);
        std::string coef = abs(c) == 1 ? "" : Integer(abs(c)).str() + "*";
        if (s.empty())
            s = (c < 0 ? "-" : "") + coef + "a" + w;
        else
            s += (c < 0 ? " - " : " + ") + coef + "a" + w;
    }
    return s;
}

namespace detail {

inline void add_filling(SchurVector& acc, const Filling& f, const Integer& c)
{
    if (c == 0)
        return;
    auto& slot = acc[f];
    slot += c;
    if (slot == 0)
        acc.erase(f);
}

} // namespace detail

/// Sort every column increasingly, tracking the sign. Returns nullopt when a column repeats an entry.
inline std::optional<std::pair<Filling, int>> normalize_columns(Filling f)
{
    int sign = 1;
    for (auto& col : f.columns) {
        for (std::size_t i = 1; i < col.size(); ++i)
            for (std::size_t j = i; j > 0 && col[j - 1] >= col[j]; --j) {
                if (col[j - 1] == col[j])
                    return std::nullopt;
                std::swap(col[j - 1], col[j]);
                sign = -sign;
            }
    }
    return std::make_pair(std::move(f), sign);
}

/// All fillings obtained by exchanging the given boxes of column `right` with every same-size set of boxes of column `left`.
inline std::vector<Filling> exchanges(const Filling& f, std::size_t left, std::size_t right, const std::vector<int>& right_rows)
{
    std::vector<Filling> out;
    const int L = static_cast<int>(f.columns[left].size());
    const int s = static_cast<int>(right_rows.size());
    std::vector<int> pick(s);
    auto rec = [&](auto&& self, int start, int depth) -> void {
        if (depth == s) {
            Filling y = f;
            for (int t = 0; t < s; ++t)
                std::swap(y.columns[left][pick[t]], y.columns[right][right_rows[t]]);
            out.push_back(std::move(y));
            return;
        }
        for (int r = start; r < L; ++r) {
            pick[depth] = r;
            self(self, r + 1, depth + 1);
        }
    };
    rec(rec, 0, 0);
    return out;
}

/// Rewrites fillings into the Young tableau basis with the exchange and alternation rules.
class Straightener {
public:
    /// Straighten a single filling (any column order).
    SchurVector straighten(const Filling& f) const
    {
        auto n = normalize_columns(f);
        if (!n)
            return {};
        SchurVector out;
        for (const auto& [t, c] : straighten_sorted(n->first, 0))
            detail::add_filling(out, t, c * n->second);
        return out;
    }

    SchurVector straighten(const SchurVector& v) const
    {
        SchurVector out;
        for (const auto& [f, c] : v)
            for (const auto& [t, d] : straighten(f))
                detail::add_filling(out, t, c * d);
        return out;
    }

    std::size_t cache_size() const
    {
        std::lock_guard lock(mutex_);
        return memo_.size();
    }

private:
    static constexpr int max_depth = 10000;

    SchurVector straighten_sorted(const Filling& f, int depth) const
    {
        if (f.is_tableau())
            return {{f, Integer(1)}};
        {
            std::lock_guard lock(mutex_);
            auto it = memo_.find(f);
            if (it != memo_.end())
                return it->second;
        }
        if (depth > max_depth)
            throw VerificationFailure("straightening does not terminate on " + to_string(f));
        // leftmost adjacent column pair with a row violation; exchange the top r+1 boxes of the right column
        std::size_t c = 0;
        int row = -1;
        for (; c + 1 < f.columns.size(); ++c) {
            for (std::size_t r = 0; r < f.columns[c + 1].size(); ++r)
                if (f.columns[c][r] > f.columns[c + 1][r]) {
                    row = static_cast<int>(r);
                    break;
                }
            if (row >= 0)
                break;
        }
        std::vector<int> right_rows(row + 1);
        std::iota(right_rows.begin(), right_rows.end(), 0);
        SchurVector out;
        for (const auto& y : exchanges(f, c, c + 1, right_rows)) {
            auto n = normalize_columns(y);
            if (!n)
                continue;
            for (const auto& [t, d] : straighten_sorted(n->first, depth + 1))
                detail::add_filling(out, t, d * n->second);
        }
        std::lock_guard lock(mutex_);
        memo_.emplace(f, out);
        return out;
    }

    mutable std::map<Filling, SchurVector> memo_;
    mutable std::mutex mutex_;
};

/// Young tableaux of the given shape with entries in [1, m], in lexicographic column order.
inline std::vector<Filling> tableau_basis(const YoungDiagram& shape, int m)
{
    std::vector<Filling> out;
    if (m < shape.longest_column())
        return out;
    Filling cur;
    cur.columns.resize(shape.num_columns());
    auto fill_column = [&](auto&& self, std::size_t c) -> void {
        if (c == shape.num_columns()) {
            out.push_back(cur);
            return;
        }
        const int len = shape.column_length(c);
        std::vector<int>& col = cur.columns[c];
        col.assign(len, 0);
        auto rec = [&](auto&& inner, int r, int lo) -> void {
            if (r == len) {
                self(self, c + 1);
                return;
            }
            for (int v = lo; v <= m - (len - 1 - r); ++v) {
                if (c > 0 && cur.columns[c - 1][r] > v)
                    continue;
                col[r] = v;
                inner(inner, r + 1, v + 1);
            }
        };
        rec(rec, 0, 1);
    };
    fill_column(fill_column, 0);
    return out;
}

// ---------------------------------------------------------------------------
// Group-ring arithmetic in Z[S_d]

/// A permutation of {0..d-1}; composition (g h)(i) = g(h(i)).
using Perm = std::vector<std::uint8_t>;
using GroupRingElement = std::map<Perm, Integer>;

inline Perm compose(const Perm& g, const Perm& h)
{
    Perm r(g.size());
    for (std::size_t i = 0; i < g.size(); ++i)
        r[i] = g[h[i]];
    return r;
}

inline int perm_sign(const Perm& p)
{
    int s = 1;
    std::vector<bool> seen(p.size(), false);
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (seen[i])
            continue;
        std::size_t len = 0;
        for (std::size_t j = i; !seen[j]; j = p[j]) {
            seen[j] = true;
            ++len;
        }
        if (len % 2 == 0)
            s = -s;
    }
    return s;
}

inline GroupRingElement multiply(const GroupRingElement& a, const GroupRingElement& b, std::size_t max_terms)
{
    if (a.size() * b.size() > max_terms)
        throw CapExceeded("group ring product needs " + std::to_string(a.size() * b.size()) + " terms");
    GroupRingElement r;
    for (const auto& [g, x] : a)
        for (const auto& [h, y] : b) {
            auto& slot = r[compose(g, h)];
            slot += x * y;
        }
    for (auto it = r.begin(); it != r.end();)
        it = it->second == 0 ? r.erase(it) : std::next(it);
    return r;
}

/// Row and column symmetrisers of the numbering U whose column word is 1..d.
class YoungSymmetrizer {
public:
    explicit YoungSymmetrizer(const YoungDiagram& shape, std::size_t max_boxes = 8) : shape_(shape)
    {
        d_ = shape.boxes();
        if (d_ > max_boxes)
            throw CapExceeded("diagram has " + std::to_string(d_) + " boxes; cap is " + std::to_string(max_boxes));
        std::vector<std::vector<std::size_t>> cols, rows(shape.longest_column());
        for (std::size_t c = 0; c < shape.num_columns(); ++c) {
            cols.emplace_back();
            for (int r = 0; r < shape.column_length(c); ++r) {
                cols.back().push_back(shape.word_position(c, r));
                rows[r].push_back(shape.word_position(c, r));
            }
        }
        gamma_ = subgroup_sum(cols, true);
        rho_ = subgroup_sum(rows, false);
    }

    std::size_t boxes() const { return d_; }
    const GroupRingElement& gamma() const { return gamma_; }
    const GroupRingElement& rho() const { return rho_; }

    GroupRingElement sigma() const { return multiply(gamma_, rho_, term_cap); }

    /// k with sigma^2 = k sigma: the identity coefficient of sigma^2.
    Integer k_lambda() const
    {
        auto s = sigma();
        Integer k = 0;
        for (const auto& [g, x] : s) {
            Perm inv(g.size());
            for (std::size_t i = 0; i < g.size(); ++i)
                inv[g[i]] = static_cast<std::uint8_t>(i);
            auto it = s.find(inv);
            if (it != s.end())
                k += x * it->second;
        }
        return k;
    }

    /// gamma rho gamma, the kernel of the triple-sum form.
    GroupRingElement triple() const { return multiply(sigma(), gamma_, term_cap); }

private:
    static constexpr std::size_t term_cap = 50'000'000;

    GroupRingElement subgroup_sum(const std::vector<std::vector<std::size_t>>& blocks, bool signed_sum) const
    {
        GroupRingElement acc;
        Perm id(d_);
        std::iota(id.begin(), id.end(), 0);
        acc[id] = 1;
        for (const auto& blk : blocks) {
            if (blk.size() < 2)
                continue;
            GroupRingElement part;
            std::vector<std::size_t> img = blk;
            std::sort(img.begin(), img.end());
            do {
                Perm p = id;
                std::vector<std::size_t> src = blk;
                std::sort(src.begin(), src.end());
                for (std::size_t i = 0; i < src.size(); ++i)
                    p[src[i]] = static_cast<std::uint8_t>(img[i]);
                part[p] += signed_sum ? perm_sign(p) : 1;
            } while (std::next_permutation(img.begin(), img.end()));
            acc = multiply(acc, part, term_cap);
        }
        return acc;
    }

    YoungDiagram shape_;
    std::size_t d_;
    GroupRingElement gamma_, rho_;
};

inline Integer k_lambda(const YoungDiagram& shape, std::size_t max_boxes = 8)
{
    return YoungSymmetrizer(shape, max_boxes).k_lambda();
}

/// zeta^lambda(a_S, a_T) with the orthonormal form on the natural basis.
class SchurForm {
public:
    explicit SchurForm(const YoungDiagram& shape, std::size_t max_boxes = 8)
        : sym_(shape, max_boxes), triple_(sym_.triple()), k_(sym_.k_lambda())
    {
    }

    const Integer& k() const { return k_; }

    Integer operator()(const Filling& S, const Filling& T) const
    {
        auto s = S.word();
        auto t = T.word();
        Integer v = 0;
        for (const auto& [pi, c] : triple_) {
            bool match = true;
            for (std::size_t i = 0; i < t.size() && match; ++i)
                match = s[pi[i]] == t[i];
            if (match)
                v += c;
        }
        return v;
    }

private:
    YoungSymmetrizer sym_;
    GroupRingElement triple_;
    Integer k_;
};

inline Integer schur_form(const Filling& S, const Filling& T, const YoungDiagram& shape, std::size_t max_boxes = 8)
{
    return SchurForm(shape, max_boxes)(S, T);
}

/// sl_{m} acting on V^lambda in the tableau basis: box-wise derivation followed by straightening.
class SchurAction {
public:
    SchurAction(const YoungDiagram& shape, int rank, std::size_t max_boxes = 8)
        : shape_(shape), m_(rank + 1), cb_(std::make_unique<ChevalleyBasis>(DiagramType::A, rank))
    {
        if (shape.boxes() > max_boxes)
            throw CapExceeded("diagram has " + std::to_string(shape.boxes()) + " boxes; cap is " +
                              std::to_string(max_boxes));
        if (shape.longest_column() > m_)
            throw InvalidArgument("diagram has more rows than the natural module dimension");
        tableaux_ = tableau_basis(shape, m_);
        for (std::size_t i = 0; i < tableaux_.size(); ++i) {
            index_.emplace(tableaux_[i], i);
            Weight w = cb_->root_system().zero_weight();
            std::vector<int> count(m_ + 1, 0);
            for (const auto& col : tableaux_[i].columns)
                for (int x : col)
                    ++count[x];
            for (int j = 0; j < rank; ++j)
                w[j] = count[j + 1] - count[j + 2];
            weights_.push_back(w);
        }
    }

    const YoungDiagram& shape() const { return shape_; }
    const std::vector<Filling>& tableaux() const { return tableaux_; }
    const Straightener& straightener() const { return straightener_; }
    const ChevalleyBasis& chevalley() const { return *cb_; }
    std::size_t dim() const { return tableaux_.size(); }

    std::size_t index(const Filling& t) const
    {
        auto it = index_.find(t);
        if (it == index_.end())
            throw VerificationFailure("straightened filling is not a basis tableau: " + to_string(t));
        return it->second;
    }

    /// Highest tableau: row i filled with i.
    Filling highest_tableau() const
    {
        Filling f;
        for (int len : shape_.columns()) {
            f.columns.emplace_back(len);
            std::iota(f.columns.back().begin(), f.columns.back().end(), 1);
        }
        return f;
    }

    SparseVector highest_weight_vector() const { return {{index(highest_tableau()), Integer(1)}}; }

    /// Unstraightened action of a natural operator on one filling.
    SchurVector act_raw(const NaturalOp& op, const Filling& f) const
    {
        SchurVector out;
        for (std::size_t c = 0; c < f.columns.size(); ++c)
            for (std::size_t r = 0; r < f.columns[c].size(); ++r)
                for (const auto& [row, val] : op.columns[f.columns[c][r] - 1]) {
                    Filling g = f;
                    g.columns[c][r] = static_cast<int>(row) + 1;
                    auto n = normalize_columns(g);
                    if (n)
                        detail::add_filling(out, n->first, val * n->second);
                }
        return out;
    }

    SparseVector apply(const NaturalOp& op, const SparseVector& v) const
    {
        SparseVector out;
        for (const auto& [i, c] : v)
            for (const auto& [t, d] : straightener_.straighten(act_raw(op, tableaux_[i])))
                add_term(out, index(t), c * d);
        return out;
    }

    SparseVector apply_divided(const NaturalOp& op, unsigned a, SparseVector v) const
    {
        for (unsigned s = 0; s < a && !v.empty(); ++s)
            v = apply(op, v);
        return a < 2 ? v : divided_exactly(std::move(v), factorial(a), "Schur divided power");
    }

    // LatticeAction interface
    const Weight& weight(std::size_t i) const { return weights_[i]; }
    std::size_t num_roots() const { return cb_->num_positive_roots(); }
    int root_height(std::size_t r) const { return RootSystem::height(cb_->root_system().positive_roots()[r]); }
    SparseVector lower(std::size_t r, unsigned a, const SparseVector& v) const
    {
        return apply_divided(cb_->op(SignedRoot{r, true}), a, v);
    }
    SparseVector raise(std::size_t r, unsigned a, const SparseVector& v) const
    {
        return apply_divided(cb_->op(SignedRoot{r, false}), a, v);
    }

private:
    YoungDiagram shape_;
    int m_;
    std::unique_ptr<ChevalleyBasis> cb_;
    std::vector<Filling> tableaux_;
    std::map<Filling, std::size_t> index_;
    std::vector<Weight> weights_;
    Straightener straightener_;
};

/// zeta^lambda on the tableau basis (not normalised).
inline IntMatrix tableau_form_matrix(const SchurAction& act, const SchurForm& form)
{
    const auto& T = act.tableaux();
    IntMatrix Z(T.size(), T.size());
    parallel_for(T.size(), [&](std::size_t i) {
        for (std::size_t j = 0; j < T.size(); ++j)
            Z(i, j) = form(T[i], T[j]);
    });
    return Z;
}

struct SchurWeylReport {
    std::size_t rank_schur = 0;
    std::size_t rank_weyl = 0;
    Integer k_lambda;
    std::vector<Integer> smith_schur;
    std::vector<Integer> smith_weyl;
    bool match = false;
    std::string first_difference;
    bool gram_integral = false;          ///< (1/k) zeta^lambda is integral on U_Z a_T
    bool recursion_agrees = false;       ///< equals the contravariance recursion on the same lattice
    bool tableau_lattice_is_dual = false; ///< the tableau lattice is A_max of U_Z a_T
    std::vector<PrimeReport> primes_schur;
    std::vector<PrimeReport> primes_weyl;
};

/// Builds U_Z a_T inside V^lambda, takes (1/k) zeta^lambda on it, and compares Smith invariants with the Weyl side.
inline SchurWeylReport schur_vs_weyl_check(int rank, const Weight& lambda, const std::vector<std::int64_t>& primes,
                                           const Caps& caps = {})
{
    YoungDiagram shape = diagram_from_weight(lambda);
    SchurAction act(shape, rank, caps.max_boxes);
    SchurForm form(shape, caps.max_boxes);
    SchurWeylReport rep;
    rep.k_lambda = form.k();

    LatticeModule L = generate_lattice(act, act.highest_weight_vector(), caps.max_lattice);
    IntMatrix Z = tableau_form_matrix(act, form);
    IntMatrix B = L.basis_matrix(act.dim());
    IntMatrix raw = B * Z * B.transpose();
    IntMatrix G(raw.rows(), raw.cols());
    rep.gram_integral = true;
    for (std::size_t i = 0; i < raw.rows(); ++i)
        for (std::size_t j = 0; j < raw.cols(); ++j) {
            if (raw(i, j) % form.k() != 0)
                rep.gram_integral = false;
            G(i, j) = raw(i, j) / form.k();
        }
    rep.recursion_agrees = rep.gram_integral && G == contravariant_gram(act, L);
    rep.rank_schur = L.rank();
    rep.smith_schur = smith_normal_form(G);

    // the tableau lattice pairs integrally with U_Z a_T and has index |det G| over it exactly when it is the dual
    Integer detG = abs(determinant(G));
    IntMatrix ZB = Z * B.transpose();
    bool pairs_integrally = std::all_of(ZB.entries().begin(), ZB.entries().end(),
                                        [&](const Integer& x) { return x % form.k() == 0; });
    rep.tableau_lattice_is_dual = pairs_integrally && L.rank() == act.dim() && abs(determinant(B)) == detG;

    Weight w = lambda;
    w.coeffs.resize(rank, 0);
    WeylModule M(DiagramType::A, rank, w, caps);
    rep.rank_weyl = M.rank();
    rep.smith_weyl = M.smith();
    rep.match = rep.gram_integral && rep.rank_schur == rep.rank_weyl && rep.smith_schur == rep.smith_weyl;
    if (!rep.match) {
        if (rep.rank_schur != rep.rank_weyl)
            rep.first_difference = "rank " + std::to_string(rep.rank_schur) + " vs " + std::to_string(rep.rank_weyl);
        else
            for (std::size_t i = 0; i < std::min(rep.smith_schur.size(), rep.smith_weyl.size()); ++i)
                if (rep.smith_schur[i] != rep.smith_weyl[i]) {
                    rep.first_difference = "invariant " + std::to_string(i + 1) + ": " + rep.smith_schur[i].str() +
                                           " vs " + rep.smith_weyl[i].str();
                    break;
                }
    }
    for (auto p : primes) {
        std::size_t ds = rank_mod_p(G, p), dw = M.modular_dim(p);
        rep.primes_schur.push_back({p, ds, L.rank() - ds});
        rep.primes_weyl.push_back({p, dw, M.rank() - dw});
    }
    return rep;
}

} // namespace weylrad
