#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "exact_linalg.hpp"
#include "geometry.hpp"
#include "root_data.hpp"
#include "schur.hpp"
#include "weyl_module.hpp"

namespace weylrad {

using Json = nlohmann::ordered_json;

/// Integers travel as decimal strings so no width is ever lost.
inline Json to_json(const IntMatrix& m)
{
    Json entries = Json::array();
    for (const auto& x : m.entries())
        entries.push_back(x.str());
    return Json{{"rows", m.rows()}, {"cols", m.cols()}, {"entries", entries}};
}

inline Json integers_to_json(const std::vector<Integer>& v)
{
    Json out = Json::array();
    for (const auto& x : v)
        out.push_back(x.str());
    return out;
}

/// Run-length form of an invariant list: 1,1,1,3 becomes "1^3,3".
inline std::string compress_invariants(const std::vector<Integer>& v)
{
    std::string s;
    for (std::size_t i = 0; i < v.size();) {
        std::size_t j = i;
        while (j < v.size() && v[j] == v[i])
            ++j;
        if (!s.empty())
            s += ",";
        s += v[i].str();
        if (j - i > 1)
            s += "^" + std::to_string(j - i);
        i = j;
    }
    return s;
}

inline std::string opposition_text(const std::map<int, int>& opp)
{
    std::string s;
    std::set<int> done;
    for (const auto& [a, b] : opp) {
        if (done.count(a))
            continue;
        done.insert(a);
        done.insert(b);
        if (!s.empty())
            s += ", ";
        s += std::to_string(a) + "↔" + std::to_string(b);
    }
    return s;
}

inline Json root_system_json(const RootSystem& rs)
{
    Json roots = Json::array();
    for (const auto& r : rs.positive_roots())
        roots.push_back(r);
    WeylElement w0 = longest_element(rs, rs.all_nodes());
    auto opp = opposition_map(rs, rs.all_nodes());
    Json opp_json = Json::object();
    for (const auto& [a, b] : opp)
        opp_json[std::to_string(a)] = b;
    return Json{{"type", std::string(1, letter(rs.type()))},
                {"rank", rs.rank()},
                {"cartan", rs.cartan()},
                {"positive_roots", roots},
                {"n_positive_roots", rs.positive_roots().size()},
                {"w0_word", w0.word},
                {"w0_length", w0.length()},
                {"opposition_map", opp_json},
                {"opposition", opposition_text(opp)}};
}

inline Json to_json(const WeylModuleReport& r)
{
    Json primes = Json::object();
    for (const auto& p : r.primes)
        primes[std::to_string(p.p)] = Json{{"dimL", p.dimL}, {"radical_dim", p.radical_dim}};
    return Json{{"type", r.type},   {"rank", r.rank},
                {"K", r.K},         {"lambda", r.lambda.coeffs},
                {"dim", r.dim},     {"smith", integers_to_json(r.smith)},
                {"snf", compress_invariants(r.smith)},
                {"primes", primes}, {"minuscule", r.minuscule},
                {"notes", r.notes}};
}

inline Json to_json(const SchurWeylReport& r)
{
    Json primes = Json::object();
    for (std::size_t i = 0; i < r.primes_schur.size(); ++i)
        primes[std::to_string(r.primes_schur[i].p)] =
            Json{{"dimL_schur", r.primes_schur[i].dimL}, {"dimL_weyl", r.primes_weyl[i].dimL}};
    return Json{{"dim", r.rank_schur},
                {"dim_weyl", r.rank_weyl},
                {"k_lambda", r.k_lambda.str()},
                {"snf", compress_invariants(r.smith_schur)},
                {"snf_weyl", compress_invariants(r.smith_weyl)},
                {"match", r.match},
                {"first_difference", r.first_difference},
                {"gram_integral", r.gram_integral},
                {"recursion_agrees", r.recursion_agrees},
                {"tableau_lattice_is_dual", r.tableau_lattice_is_dual},
                {"primes", primes}};
}

inline Json to_json(const GeometryReport& r)
{
    Json j{{"descriptor", r.descriptor},
           {"n_points", r.n_points},
           {"n_lines", r.n_lines},
           {"embedding_dim", r.embedding_dim},
           {"radical_dim", r.radical_dim},
           {"polarized", r.polarized},
           {"residues_checked", r.residues_checked},
           {"residues_polarized", r.residues_polarized},
           {"theoremB", r.theoremB},
           {"minimal_quotient_dim", r.minimal_quotient_dim},
           {"notes", r.notes}};
    if (!r.failure.empty())
        j["failure"] = r.failure;
    return j;
}

} // namespace weylrad
