#pragma once

// Command-line front end. Kept in a header so the tests can drive it without spawning processes.

#include <fstream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "weylrad/report.hpp"

namespace weylrad::cli {

enum ExitCode : int { ok = 0, usage = 2, cap = 3, verification = 4 };

struct Options {
    std::string format = "json";
    std::size_t max_ambient = 4096;
    std::size_t max_lattice = 1024;
    std::size_t max_boxes = 8;

    Caps caps() const { return {max_ambient, max_lattice, max_boxes}; }
};

/// A failed internal check: the report is still printed, the exit code says 4.
struct ReportedFailure {
    Json report;
    std::string reason;
};

inline void print_csv(std::ostream& out, const Json& j)
{
    out << "key,value\n";
    for (const auto& [k, v] : j.items()) {
        std::string s = v.is_string() ? v.get<std::string>() : v.dump();
        bool quote = s.find_first_of(",\"\n") != std::string::npos;
        if (quote) {
            std::string q;
            for (char c : s)
                q += c == '"' ? std::string("\"\"") : std::string(1, c);
            s = "\"" + q + "\"";
        }
        out << k << "," << s << "\n";
    }
}

inline void print_text(std::ostream& out, const Json& j)
{
    std::size_t width = 0;
    for (const auto& [k, v] : j.items())
        width = std::max(width, k.size());
    for (const auto& [k, v] : j.items())
        out << k << std::string(width - k.size() + 2, ' ') << (v.is_string() ? v.get<std::string>() : v.dump())
            << "\n";
}

inline void emit(std::ostream& out, const Options& opt, const Json& j)
{
    if (opt.format == "csv")
        print_csv(out, j);
    else if (opt.format == "text")
        print_text(out, j);
    else
        out << j.dump(2) << "\n";
}

inline Json cmd_rootsys(const std::string& type, int rank)
{
    return root_system_json(RootSystem(parse_diagram_type(type), rank));
}

inline Weight weight_from_options(const RootSystem& rs, const std::vector<int>& K, const std::vector<int>& lambda)
{
    if (!K.empty() && !lambda.empty())
        throw InvalidArgument("give either --k or --lambda, not both");
    if (!lambda.empty()) {
        if (static_cast<int>(lambda.size()) != rs.rank())
            throw InvalidArgument("--lambda needs " + std::to_string(rs.rank()) + " coefficients");
        return Weight{lambda};
    }
    if (K.empty())
        throw InvalidArgument("a node set --k or a weight --lambda is required");
    for (int k : K)
        rs.check_node(k);
    return rs.lambda(K);
}

inline Json cmd_weyl(const std::string& type, int rank, const std::vector<int>& K, const std::vector<int>& lambda,
                     const std::vector<std::int64_t>& primes, const Caps& caps)
{
    for (auto p : primes)
        require_prime(p);
    RootSystem rs(parse_diagram_type(type), rank);
    WeylModule M(rs.type(), rank, weight_from_options(rs, K, lambda), caps);
    return to_json(weyl_module_report(M, primes));
}

inline Json cmd_schur(const std::vector<int>& shape_rows, int m, const std::vector<std::int64_t>& primes, const Caps& caps)
{
    for (auto p : primes)
        require_prime(p);
    if (shape_rows.empty())
        throw InvalidArgument("--shape needs at least one row");
    if (!std::is_sorted(shape_rows.rbegin(), shape_rows.rend()) || shape_rows.back() <= 0)
        throw InvalidArgument("--shape must list positive, weakly decreasing row lengths");
    if (m < 2 || static_cast<int>(shape_rows.size()) >= m)
        throw InvalidArgument("--m must exceed the number of rows");
    Weight w{std::vector<int>(m - 1, 0)};
    for (std::size_t i = 0; i < shape_rows.size(); ++i)
        w[i] = shape_rows[i] - (i + 1 < shape_rows.size() ? shape_rows[i + 1] : 0);
    auto rep = schur_vs_weyl_check(m - 1, w, primes, caps);
    Json j = to_json(rep);
    if (!rep.match)
        throw ReportedFailure{j, "Schur and Weyl invariants differ: " + rep.first_difference};
    return j;
}

inline Json cmd_geom(const std::string& type, int rank, const std::vector<int>& K, std::int64_t p, const Caps& caps,
                     const std::string& dot_path)
{
    require_prime(p);
    NodeSet nodes(K.begin(), K.end());
    std::sort(nodes.begin(), nodes.end());
    auto rep = geometry_check(parse_diagram_type(type), rank, nodes, p, caps);
    if (!dot_path.empty()) {
        std::ofstream f(dot_path);
        if (!f)
            throw InvalidArgument("cannot write " + dot_path);
        f << ShadowSpace(parse_diagram_type(type), rank, nodes, p).to_dot();
    }
    Json j = to_json(rep);
    if (!rep.polarized || rep.theoremB != "match" || !rep.residues_polarized || !rep.failure.empty())
        throw ReportedFailure{j, rep.failure.empty() ? "geometric and algebraic radicals differ" : rep.failure};
    return j;
}

/// Parses argv, runs one subcommand and returns the process exit code.
inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Weyl modules, contravariant forms and polarized embeddings", "weylrad"};
    app.require_subcommand(1);
    app.fallthrough(); // global options may follow the subcommand
    Options opt;
    app.add_option("--format", opt.format, "Output format")->check(CLI::IsMember({"json", "csv", "text"}));
    app.add_option("--max-ambient", opt.max_ambient, "Cap on the ambient tensor dimension");
    app.add_option("--max-lattice", opt.max_lattice, "Cap on the lattice rank");
    app.add_option("--max-boxes", opt.max_boxes, "Cap on Young diagram size for group-ring work");

    std::string type, dot;
    int rank = 0, m = 0;
    std::vector<int> K, lambda, shape;
    std::vector<std::int64_t> primes{2, 3, 5, 7};
    std::int64_t p = 2;

    auto* rootsys = app.add_subcommand("rootsys", "Roots, longest element and opposition involution");
    rootsys->add_option("type", type, "Diagram type (A-E)")->required();
    rootsys->add_option("rank", rank, "Rank")->required();

    auto* weyl = app.add_subcommand("weyl", "Lattice, Gram matrix and modular dimensions of a Weyl module");
    weyl->add_option("type", type, "Diagram type")->required();
    weyl->add_option("rank", rank, "Rank")->required();
    weyl->add_option("--k", K, "Node set K (lambda = sum of lambda_k)")->delimiter(',');
    weyl->add_option("--lambda", lambda, "Weight coefficients")->delimiter(',');
    weyl->add_option("--primes", primes, "Primes to reduce at")->delimiter(',');

    auto* schur = app.add_subcommand("schur", "Schur module form against the Weyl module form");
    schur->add_option("--shape", shape, "Row lengths")->delimiter(',')->required();
    schur->add_option("--m", m, "Dimension of the natural module")->required();
    schur->add_option("--primes", primes, "Primes to reduce at")->delimiter(',');

    auto* geom = app.add_subcommand("geom", "Shadow space, Weyl embedding and polar radical");
    geom->add_option("type", type, "Diagram type")->required();
    geom->add_option("rank", rank, "Rank")->required();
    geom->add_option("--k", K, "Node set K")->delimiter(',')->required();
    geom->add_option("--p", p, "Prime (2 or 3)");
    geom->add_option("--dot", dot, "Write the collinearity graph in DOT format");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return ok;
    } catch (const CLI::ParseError& e) {
        err << e.what() << "\n" << app.help();
        return usage;
    }

    try {
        Json j;
        if (*rootsys)
            j = cmd_rootsys(type, rank);
        else if (*weyl)
            j = cmd_weyl(type, rank, K, lambda, primes, opt.caps());
        else if (*schur)
            j = cmd_schur(shape, m, primes, opt.caps());
        else
            j = cmd_geom(type, rank, K, p, opt.caps(), dot);
        emit(out, opt, j);
        return ok;
    } catch (const ReportedFailure& f) {
        emit(out, opt, f.report);
        err << "verification failed: " << f.reason << "\n";
        return verification;
    } catch (const InvalidArgument& e) {
        err << "error: " << e.what() << "\n" << app.help();
        return usage;
    } catch (const CapExceeded& e) {
        err << "cap exceeded: " << e.what() << "\n";
        return cap;
    } catch (const VerificationFailure& e) {
        err << "verification failed: " << e.what() << "\n";
        return verification;
    }
}

} // namespace weylrad::cli
