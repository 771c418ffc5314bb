#include "cli.hpp"

#include "rpfree/borel_ss.hpp"
#include "rpfree/checker.hpp"
#include "rpfree/homalg.hpp"
#include "rpfree/intcoh.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

namespace rpfree::cli {

using nlohmann::json;

namespace {

struct Malformed : std::runtime_error {
    using std::runtime_error::runtime_error;
};

ActionDescriptor read_descriptor(const std::string& path, std::istream& in)
{
    std::string text;
    if (path == "-") {
        std::ostringstream buf;
        buf << in.rdbuf();
        text = buf.str();
    } else {
        std::ifstream f(path);
        if (!f)
            throw Malformed("cannot open '" + path + "'");
        std::ostringstream buf;
        buf << f.rdbuf();
        text = buf.str();
    }
    return parse_descriptor(text);
}

int status_code(Status s)
{
    return s == Status::pass ? kPass : kFail;
}

void print_json(std::ostream& out, const json& j)
{
    out << j.dump(2) << "\n";
}

int cmd_verify(const std::string& path, bool trace, bool as_json, std::istream& in, std::ostream& out)
{
    const auto desc = read_descriptor(path, in);
    const auto v = verify(desc);
    if (as_json) {
        json j = v.to_json();
        if (!trace)
            j.erase("trace");
        print_json(out, j);
    } else {
        out << render_text(v, trace);
    }
    return status_code(v.status);
}

int cmd_bound(const std::vector<int>& dims, bool as_json, std::ostream& out)
{
    for (int n : dims)
        if (n < 0)
            throw Malformed("--dims: dimensions must be non-negative");
    const int b = bound(dims);
    if (as_json) {
        std::vector<int> mus;
        for (int n : dims)
            mus.push_back(mu(n));
        print_json(out, {{"dims", dims}, {"mu", mus}, {"bound", b}});
    } else {
        out << b << "\n";
    }
    return kPass;
}

int cmd_sspage(const std::string& path, std::optional<int> window, int page_no, bool as_json, std::istream& in,
               std::ostream& out)
{
    if (page_no != 2 && page_no != 3)
        throw Malformed("--page: must be 2 or 3");
    const auto desc = read_descriptor(path, in);
    if (window && (*window < 2 || *window > 250))
        throw Malformed("--window: must lie in 2..250");
    BigradedPage page = build_e2(desc, window);
    if (page_no == 3)
        page = d3_on_squares(turn_page(page));
    const auto rep = page_report(page);

    if (as_json) {
        json slots = json::array();
        for (const auto& s : rep.slots) {
            json js = {{"p", s.p}, {"q", s.q}, {"valid", s.valid}};
            js["dim"] = s.valid ? json(s.dim) : json(nullptr);
            if (page_no == 3)
                js["d3"] = to_string(s.d3);
            slots.push_back(js);
        }
        print_json(out, {{"page", rep.page}, {"window", rep.window}, {"slots", slots},
                         {"total_valid_dim", rep.total_valid_dim}});
        return kPass;
    }

    const int d = page.window();
    const int top = std::min(page.top_q(), d);
    out << "E" << page_no << " page, window p+q <= " << d << " ('?' = not determined inside the window)\n";
    out << std::setw(5) << "q\\p";
    for (int p = 0; p <= d; ++p)
        out << std::setw(4) << p;
    out << "\n";
    for (int q = top; q >= 0; --q) {
        out << std::setw(5) << q;
        for (int p = 0; p + q <= d; ++p) {
            const auto& s = page.slot(p, q);
            if (!s.valid)
                out << std::setw(4) << "?";
            else
                out << std::setw(4) << s.dim();
        }
        out << "\n";
    }
    out << "total over valid slots: " << rep.total_valid_dim << "\n";
    if (page_no == 3) {
        std::vector<std::string> unknown;
        for (const auto& s : rep.slots)
            if (s.d3 == D3Status::unknown)
                unknown.push_back("(" + std::to_string(s.p) + "," + std::to_string(s.q) + ")");
        out << "d3 unknown at: ";
        if (unknown.empty())
            out << "none";
        for (std::size_t i = 0; i < unknown.size(); ++i)
            out << (i ? " " : "") << unknown[i];
        out << "\n";
    }
    return kPass;
}

int cmd_cohomology(const std::vector<int>& dims, const std::string& coeff, std::optional<int> max_degree,
                   bool as_json, std::ostream& out)
{
    if (dims.empty())
        throw Malformed("--dims: at least one dimension is required");
    int total = 0;
    for (int n : dims) {
        if (n < 0 || n > 64)
            throw Malformed("--dims: dimensions must lie in 0..64");
        total += n;
    }
    if (total > 64)
        throw Malformed("--dims: total dimension above 64");
    const Coefficients c = coeff == "z" ? Coefficients::integers() : Coefficients::mod(2);
    const int top = max_degree.value_or(total);
    if (top < 0 || top > 128)
        throw Malformed("--max-degree: must lie in 0..128");
    const auto complex = rp_product_complex(dims);
    json rows = json::array();
    for (int n = 0; n <= top; ++n) {
        const auto g = cohomology(complex, n, c);
        if (as_json)
            rows.push_back({{"degree", n}, {"free_rank", g.free_rank}, {"torsion", g.torsion}, {"group", g.to_string()}});
        else
            out << "H^" << n << " = " << g.to_string() << "\n";
    }
    if (as_json)
        print_json(out, {{"dims", dims}, {"coefficients", coeff}, {"groups", rows}});
    return kPass;
}

int cmd_examples_list(bool as_json, std::ostream& out)
{
    const auto entries = catalog_entries();
    if (as_json) {
        json j = json::array();
        for (const auto& e : entries)
            j.push_back({{"name", e.name}, {"signature", e.signature}, {"description", e.description}});
        print_json(out, j);
        return kPass;
    }
    for (const auto& e : entries)
        out << std::left << std::setw(22) << e.signature << e.description << "\n";
    return kPass;
}

int cmd_examples_emit(const std::vector<std::string>& words, std::ostream& out)
{
    if (words.empty())
        throw Malformed("examples emit: a catalog name is required");
    ActionDescriptor d;
    if (words[0].find('(') != std::string::npos) {
        if (words.size() != 1)
            throw Malformed("examples emit: an expression takes no further parameters");
        d = catalog_expression(words[0]);
    } else {
        std::vector<int> params;
        for (std::size_t i = 1; i < words.size(); ++i) {
            const auto& w = words[i];
            if (w.empty() || w.size() > 6 || !std::all_of(w.begin(), w.end(), ::isdigit))
                throw Malformed("examples emit: parameter '" + w + "' is not a non-negative integer");
            params.push_back(std::stoi(w));
        }
        d = catalog(words[0], params);
    }
    print_json(out, to_json(d));
    return kPass;
}

int selftest_lemma33(bool as_json, std::ostream& out)
{
    struct Case {
        CellularPair pair;
        std::int64_t m;
    };
    const std::vector<Case> cases{{disk_pair(2), 4}, {rp_pair(2), 2}, {moore_cone_pair(4), 4}};
    bool all = true;
    json rows = json::array();
    for (const auto& c : cases) {
        const auto d = pair_coefficient_diagram(c.pair, c.m);
        bool holds = true;
        std::int64_t best = 1;
        bool sign_seen = false;
        for (int n = d.grid[0][0].complex.lo(); n <= d.grid[0][0].complex.hi() + 1; ++n) {
            const auto res = nine_check(d, n);
            holds = holds && res.holds;
            best = std::max(best, res.max_order());
            for (const auto& w : res.witnesses)
                sign_seen = sign_seen || (w.anticommutes && !w.commutes);
        }
        all = all && holds;
        if (as_json)
            rows.push_back({{"pair", c.pair.name}, {"modulus", c.m}, {"holds", holds},
                            {"max_composite_order", best}, {"sign_distinguished", sign_seen}});
        else
            out << (holds ? "PASS " : "FAIL ") << c.pair.name << " with x" << c.m << " column: max composite order "
                << best << (sign_seen ? ", anticommutes and does not commute" : ", sign not distinguished") << "\n";
    }
    if (as_json)
        print_json(out, {{"selftest", "lemma33"}, {"pass", all}, {"cases", rows}});
    return all ? kPass : kFail;
}

int selftest_propD(std::uint64_t samples, std::uint64_t seed, bool as_json, std::ostream& out)
{
    const std::vector<std::pair<int, int>> cases{{3, 1}, {4, 1}, {5, 2}};
    bool all = true;
    json rows = json::array();
    for (const auto& [s, c] : cases) {
        const auto rep = propD_smalltest(s, c, samples, seed);
        all = all && rep.counterexamples == 0;
        if (as_json) {
            json first = json::array();
            for (const auto& f : rep.first_counterexample)
                first.push_back(f.to_string());
            rows.push_back({{"s", s}, {"c", c}, {"exhaustive", rep.exhaustive}, {"tested", rep.tested},
                            {"counterexamples", rep.counterexamples}, {"first_counterexample", first}});
        } else {
            out << (rep.counterexamples == 0 ? "PASS " : "FAIL ") << "s=" << s << " c=" << c << " "
                << (rep.exhaustive ? "exhaustive" : "sampled") << ", " << rep.tested << " tuples, "
                << rep.counterexamples << " without a common nonzero zero\n";
        }
    }
    if (as_json)
        print_json(out, {{"selftest", "propD"}, {"pass", all}, {"seed", seed}, {"cases", rows}});
    return all ? kPass : kFail;
}

int selftest_bc(bool as_json, std::ostream& out)
{
    int pass = 0;
    int total = 0;
    int one_failures = 0;
    json bad = json::array();
    for (IndexSet i = 1; i < 8; ++i)
        for (IndexSet j = 1; j < 8; ++j) {
            ++total;
            if (verify_bc_relation(i, j, 3))
                ++pass;
            else
                bad.push_back({index_set_to_string(i), index_set_to_string(j)});
            if (!verify_bc_relation(i, j, 3, EmptyIndex::one))
                ++one_failures;
        }
    const bool ok = pass == total && one_failures > 0;
    if (as_json) {
        print_json(out, {{"selftest", "bc-relations"}, {"pass", ok}, {"pairs", total}, {"holding", pass},
                         {"failing_pairs", bad}, {"u_empty_one_failures", one_failures}});
    } else {
        out << (pass == total ? "PASS " : "FAIL ") << pass << "/" << total
            << " pairs of nonempty I, J in {1,2,3} satisfy the product formula (u_empty = 0)\n";
        out << (one_failures > 0 ? "PASS " : "FAIL ") << "reading u_empty = 1 breaks " << one_failures
            << " pairs\n";
    }
    return ok ? kPass : kFail;
}

int selftest_presentation(bool as_json, std::ostream& out)
{
    const std::vector<std::vector<int>> cases{{3}, {2, 3}, {3, 5}};
    bool all = true;
    json rows = json::array();
    for (const auto& dims : cases) {
        const auto rep = x_verify_dims(dims, 8);
        all = all && rep.pass;
        if (as_json) {
            json degs = json::array();
            for (const auto& r : rep.rows)
                degs.push_back({{"degree", r.degree}, {"f2_dim", r.f2_dim}, {"free", r.presentation.free_rank},
                                {"torsion", r.presentation.torsion_f2_dim}, {"oracle_free", r.oracle_free},
                                {"oracle_torsion", r.oracle_torsion}, {"ok", r.ok}});
            rows.push_back({{"dims", dims}, {"pass", rep.pass}, {"detail", rep.detail}, {"degrees", degs}});
        } else {
            out << (rep.pass ? "PASS " : "FAIL ") << "dims " << dims_to_string(dims) << " through degree 8";
            if (!rep.pass)
                out << ": " << rep.detail;
            out << "\n";
        }
    }
    if (as_json)
        print_json(out, {{"selftest", "presentation"}, {"pass", all}, {"cases", rows}});
    return all ? kPass : kFail;
}

}  // namespace

int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Admissibility checks for free (Z/2)^r actions on products of real projective spaces", "rpfree"};
    app.require_subcommand(1);
    app.fallthrough();
    bool as_json = false;
    app.add_flag("--json", as_json, "machine-readable output");

    std::string verify_path;
    bool verify_trace = false;
    auto* verify_cmd = app.add_subcommand("verify", "check a descriptor file ('-' reads stdin)");
    verify_cmd->add_option("file", verify_path, "descriptor JSON")->required();
    verify_cmd->add_flag("--trace", verify_trace, "show the rank-bound certificate");

    std::vector<int> bound_dims;
    auto* bound_cmd = app.add_subcommand("bound", "sum of mu(n_i)");
    bound_cmd->add_option("--dims", bound_dims, "comma-separated dimensions")->delimiter(',')->required();

    std::string ss_path;
    std::optional<int> ss_window;
    int ss_page = 2;
    auto* ss_cmd = app.add_subcommand("sspage", "E2 or E3 page of the Borel spectral sequence");
    ss_cmd->add_option("--action", ss_path, "descriptor JSON ('-' reads stdin)")->required();
    ss_cmd->add_option("--window", ss_window, "total degree window D (default sum n_i + 6)");
    ss_cmd->add_option("--page", ss_page, "2 or 3");

    std::vector<int> co_dims;
    std::string co_coeff = "z";
    std::optional<int> co_max;
    auto* co_cmd = app.add_subcommand("cohomology", "cellular cohomology tables");
    auto* rp_cmd = co_cmd->add_subcommand("rp-product", "H^*(RP^{n_1} x ... x RP^{n_k})");
    co_cmd->require_subcommand(1);
    rp_cmd->add_option("--dims", co_dims, "comma-separated dimensions")->delimiter(',')->required();
    rp_cmd->add_option("--coeff", co_coeff, "z or f2")->check(CLI::IsMember({"z", "f2"}));
    rp_cmd->add_option("--max-degree", co_max, "highest degree (default total dimension)");

    std::vector<std::string> emit_words;
    auto* ex_cmd = app.add_subcommand("examples", "catalog of known actions");
    ex_cmd->require_subcommand(1);
    auto* list_cmd = ex_cmd->add_subcommand("list", "list catalog entries");
    auto* emit_cmd = ex_cmd->add_subcommand("emit", "print a catalog descriptor as JSON");
    emit_cmd->add_option("words", emit_words, "name and parameters, or an expression")->required();

    std::string st_name;
    std::uint64_t st_samples = 100000;
    std::uint64_t st_seed = kPropDSeed;
    auto* st_cmd = app.add_subcommand("selftest", "built-in computational checks");
    st_cmd->add_option("name", st_name, "lemma33, propD, bc-relations or presentation")
        ->required()
        ->check(CLI::IsMember({"lemma33", "propD", "bc-relations", "presentation"}));
    st_cmd->add_option("--samples", st_samples, "random samples for sampled propD cases");
    st_cmd->add_option("--seed", st_seed, "seed for sampled propD cases");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kPass : kMalformed;
    }

    try {
        if (*verify_cmd)
            return cmd_verify(verify_path, verify_trace, as_json, in, out);
        if (*bound_cmd)
            return cmd_bound(bound_dims, as_json, out);
        if (*ss_cmd)
            return cmd_sspage(ss_path, ss_window, ss_page, as_json, in, out);
        if (*co_cmd)
            return cmd_cohomology(co_dims, co_coeff, co_max, as_json, out);
        if (*list_cmd)
            return cmd_examples_list(as_json, out);
        if (*emit_cmd)
            return cmd_examples_emit(emit_words, out);
        if (*st_cmd) {
            if (st_name == "lemma33")
                return selftest_lemma33(as_json, out);
            if (st_name == "propD")
                return selftest_propD(st_samples, st_seed, as_json, out);
            if (st_name == "bc-relations")
                return selftest_bc(as_json, out);
            return selftest_presentation(as_json, out);
        }
    } catch (const DescriptorError& e) {
        err << "malformed descriptor: field '" << e.field() << "': " << e.what() << "\n";
        return kMalformed;
    } catch (const Malformed& e) {
        err << "error: " << e.what() << "\n";
        return kMalformed;
    } catch (const std::invalid_argument& e) {
        // ParseError and bad catalog parameters land here
        err << "error: " << e.what() << "\n";
        return kMalformed;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << "\n";
        return kInternal;
    }
    return kMalformed;
}

}  // namespace rpfree::cli
