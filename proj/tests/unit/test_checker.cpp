#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "rpfree/checker.hpp"
#include "support.hpp"

#include <map>
#include <random>
#include <set>

using namespace rpfree;
using rpfree::test::px;
using rpfree::test::qf;

namespace {

ActionDescriptor make(int r, std::vector<int> dims, std::vector<const char*> forms, bool it = false)
{
    ActionDescriptor d;
    d.r = r;
    d.dims = std::move(dims);
    for (const char* f : forms)
        d.k_invariants.push_back(qf(f, r));
    d.integral_trivial = it;
    return d;
}

bool has_failure(const Verdict& v, const std::string& id)
{
    for (const auto& c : v.failures)
        if (c.id == id)
            return true;
    return false;
}

// Direct evaluation from the coefficient bits, independent of the library's scans.
bool eval_form(const QuadraticForm& f, std::uint32_t pt)
{
    int acc = 0;
    for (int j = 0; j < f.r(); ++j) {
        const int xj = (pt >> j) & 1;
        acc ^= f.diag(j) & xj;
        for (int k = j + 1; k < f.r(); ++k)
            acc ^= f.cross(j, k) & xj & static_cast<int>((pt >> k) & 1U);
    }
    return acc != 0;
}

bool oracle_common_zero(const std::vector<QuadraticForm>& forms, int r)
{
    for (std::uint32_t pt = 1; pt < (std::uint32_t{1} << r); ++pt) {
        bool all = true;
        for (const auto& f : forms)
            all = all && !eval_form(f, pt);
        if (all)
            return true;
    }
    return false;
}

// Cubic membership in (g_i) by Gaussian elimination over monomial sets of x_j * g_i.
bool oracle_cubic_member(const PolyF2& target, const std::vector<PolyF2>& gens, int r)
{
    using Vec = std::set<std::vector<int>>;
    auto key = [&](const PolyF2& p) {
        Vec v;
        for (const auto& m : p.terms()) {
            std::vector<int> e(m.exp.begin(), m.exp.begin() + r);
            v.insert(e);
        }
        return v;
    };
    auto add = [](Vec a, const Vec& b) {
        for (const auto& m : b)
            if (!a.erase(m))
                a.insert(m);
        return a;
    };
    std::vector<Vec> rows;
    const auto ring = RingDescriptor::free_x(r);
    for (const auto& g : gens)
        for (int j = 0; j < r; ++j) {
            const PolyF2 prod = PolyF2::var(ring, j) * g;
            rows.push_back(key(prod));
        }
    std::map<std::vector<int>, Vec> pivots;  // pivot = largest monomial
    auto reduce = [&](Vec v) {
        while (!v.empty()) {
            auto it = pivots.find(*v.rbegin());
            if (it == pivots.end())
                return v;
            v = add(v, it->second);
        }
        return v;
    };
    for (auto& row : rows) {
        Vec red = reduce(row);
        if (!red.empty())
            pivots[*red.rbegin()] = red;
    }
    return reduce(key(target)).empty();
}

std::vector<ActionDescriptor> catalog_samples()
{
    std::vector<ActionDescriptor> out;
    for (int m = 0; m <= 3; ++m) {
        out.push_back(catalog("q8_join", {m}));
        out.push_back(catalog("z4", {m}));
        out.push_back(catalog("d8", {m}));
    }
    for (int m = 1; m <= 2; ++m)
        for (int l = 0; l <= 3; ++l)
            out.push_back(catalog("jo_product", {m, l}));
    return out;
}

}  // namespace

TEST_CASE("mu and bound")
{
    CHECK(mu(0) == 0);
    CHECK(mu(4) == 0);
    CHECK(mu(5) == 1);
    CHECK(mu(7) == 2);
    CHECK(mu(1) == 1);
    CHECK(mu(3) == 2);
    CHECK_THROWS_AS(mu(-1), std::invalid_argument);
    CHECK(bound({3}) == 2);
    CHECK(bound({5, 3}) == 3);
    CHECK(bound({2, 4, 6}) == 0);
    CHECK(bound({}) == 0);
    CHECK_THROWS_AS(bound({3, -2}), std::invalid_argument);
}

TEST_CASE("strip_dim_one")
{
    auto s = strip_dim_one({1, 1, 3});
    CHECK(s.dims == std::vector<int>{3});
    CHECK(s.l == 2);
    CHECK(s.ones == std::vector<int>{0, 1});
    CHECK(s.kept == std::vector<int>{2});
    s = strip_dim_one({5, 3});
    CHECK(s.dims == std::vector<int>{5, 3});
    CHECK(s.l == 0);
    s = strip_dim_one({1});
    CHECK(s.dims.empty());
    CHECK(s.l == 1);
    s = strip_dim_one({0, 3, 1, 0});
    CHECK(s.zeros == std::vector<int>{0, 3});
    CHECK(s.dims == std::vector<int>{3});

    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 300; ++trial) {
        std::vector<int> dims;
        const int k = static_cast<int>(rng() % 6);
        for (int i = 0; i < k; ++i)
            dims.push_back(static_cast<int>(rng() % 12));
        const auto st = strip_dim_one(dims);
        CHECK(bound(dims) == st.l + bound(st.dims));
    }
}

TEST_CASE("necessary conditions on the worked examples")
{
    for (int m = 1; m <= 2; ++m)
        for (int l = 1; l <= 2; ++l) {
            auto d = make(2, {4 * m + 1, 2 * l + 1}, {"x1*x2", "(x1 + x2)^2"});
            CHECK(necessary_conditions(d).status == Status::pass);
            d.integral_trivial = true;
            const auto v = necessary_conditions(d);
            CHECK(v.status == Status::fail);
            REQUIRE(v.failures.size() == 1);
            CHECK(v.failures[0].id == "C2'");
            CHECK(v.failures[0].factor == 0);
        }

    auto v = necessary_conditions(make(3, {3}, {"x1^2 + x1*x2 + x2^2"}));
    CHECK(v.status == Status::fail);
    REQUIRE(v.failures.size() == 1);
    CHECK(v.failures[0].id == "C4");
    CHECK(v.failures[0].witness["point"] == "(0,0,1)");

    v = necessary_conditions(make(3, {5}, {"x1^2"}, true));
    CHECK(v.status == Status::fail);
    REQUIRE(v.failures.size() == 1);
    CHECK(v.failures[0].id == "C4");
    CHECK(v.failures[0].witness["point"] == "(0,1,0)");
    CHECK(verify(make(3, {5}, {"x1^2"}, true)).trace == std::nullopt);

    // every failing condition is reported, in order
    v = necessary_conditions(make(3, {2, 5}, {"x3^2", "x1^2 + x1*x2 + x2^2"}, true));
    REQUIRE(v.failures.size() == 4);
    CHECK(v.failures[0].id == "C1");
    CHECK(v.failures[1].id == "C2");
    CHECK(v.failures[2].id == "C2'");
    CHECK(v.failures[3].id == "C3");
    for (const auto& f : v.failures)
        CHECK(!f.witness.is_null());

    // RP^1 factors are exempt from the factorization conditions
    v = necessary_conditions(make(2, {1, 1}, {"x1^2 + x1*x2 + x2^2", "x1^2 + x1*x2 + x2^2"}, true));
    CHECK(!has_failure(v, "C2"));
    CHECK(!has_failure(v, "C2'"));

    v = necessary_conditions(make(1, {0, 3}, {"x1^2", "x1^2"}));
    CHECK(v.status == Status::pass);
    CHECK(v.strip.zeros == std::vector<int>{0});
}

TEST_CASE("conditions agree with brute-force oracles")
{
    std::mt19937_64 rng(11);
    const int dim_choices[] = {1, 2, 3, 5, 7, 9};
    for (int trial = 0; trial < 400; ++trial) {
        const int r = 1 + static_cast<int>(rng() % 3);
        const int k = 1 + static_cast<int>(rng() % 3);
        ActionDescriptor d;
        d.r = r;
        d.integral_trivial = rng() % 2 == 0;
        for (int i = 0; i < k; ++i) {
            d.dims.push_back(dim_choices[rng() % 6]);
            d.k_invariants.push_back(QuadraticForm::from_code(r, rng() % QuadraticForm::code_count(r)));
        }
        const auto v = necessary_conditions(d);
        CHECK(has_failure(v, "C4") == oracle_common_zero(d.k_invariants, r));

        std::vector<PolyF2> gens;
        for (const auto& f : d.k_invariants)
            gens.push_back(f.to_poly());
        bool c3_ok = true;
        bool c2_ok = true;
        for (int i = 0; i < k; ++i) {
            const auto& a = d.k_invariants[static_cast<std::size_t>(i)];
            const int n = d.dims[static_cast<std::size_t>(i)];
            if (n % 4 == 1)
                c3_ok = c3_ok && oracle_cubic_member(sq1(a.to_poly()), gens, r);
            if (n >= 5 && n % 4 == 1 && !a.is_zero()) {
                bool found = false;
                for (std::uint32_t u = 1; u < (1U << r); ++u)
                    for (std::uint32_t w = u; w < (1U << r); ++w)
                        found = found || QuadraticForm::product(LinearForm(r, u), LinearForm(r, w)) == a;
                c2_ok = c2_ok && found;
            }
        }
        CHECK(has_failure(v, "C3") == !c3_ok);
        CHECK(has_failure(v, "C2") == !c2_ok);
        CHECK((v.status == Status::pass) == v.failures.empty());
    }
}

TEST_CASE("C2 witnesses reconstruct the form and imply C3")
{
    for (std::uint64_t code = 0; code < QuadraticForm::code_count(3); ++code) {
        const auto a = QuadraticForm::from_code(3, code);
        ActionDescriptor d;
        d.r = 3;
        d.dims = {5};
        d.k_invariants = {a};
        const auto v = necessary_conditions(d);
        for (const auto& c : v.checks) {
            if (c.id != "C2" || !c.ok)
                continue;
            const auto l = qf(("(" + c.witness["l"].get<std::string>() + ")*(" + c.witness["m"].get<std::string>() + ")").c_str(), 3);
            CHECK(l == a);
            bool c3 = false;
            for (const auto& e : v.checks)
                if (e.id == "C3")
                    c3 = e.ok;
            CHECK(c3);
        }
    }
}

TEST_CASE("rank bound trace on the worked examples")
{
    auto d = catalog("jo_product", {1, 1});
    auto fv = verify(d);
    REQUIRE(fv.trace);
    CHECK(fv.status == Status::pass);
    auto cert = *fv.trace->certificate;
    CHECK(cert.b == 1);
    CHECK(cert.c == 1);
    CHECK(cert.bound == 3);
    CHECK(cert.s == 1);
    CHECK(cert.choices.size() == 1);
    CHECK(cert.choices[0].cut->to_string() == "x1");
    CHECK(!cert.c_common_zero);
    CHECK(cert.combinations == 2);
    CHECK(cert.passing == 2);

    d = catalog("jo_product", {1, 2});  // dims [5,5]: two linear cuts, H = 0
    fv = verify(d);
    REQUIRE(fv.trace);
    CHECK(fv.status == Status::pass);
    cert = *fv.trace->certificate;
    CHECK(cert.b == 2);
    CHECK(cert.c == 0);
    CHECK(cert.s == 0);
    CHECK(cert.bound == 2);
    CHECK(cert.choices[1].cut->to_string() == "x1 + x2");

    fv = verify(catalog("q8_join", {0}));
    REQUIRE(fv.trace);
    CHECK(fv.status == Status::pass);
    cert = *fv.trace->certificate;
    CHECK(cert.a == 0);
    CHECK(cert.b == 0);
    CHECK(cert.c == 1);
    CHECK(cert.s == 2);
    CHECK(cert.h.dim() == 2);
    CHECK(cert.bound == 2);

    CHECK_THROWS_AS(rank_bound_trace(make(3, {3}, {"x1^2 + x1*x2 + x2^2"}),
                                     necessary_conditions(make(3, {3}, {"x1^2 + x1*x2 + x2^2"}))),
                    std::logic_error);
}

TEST_CASE("trace with dimension-one factors and inconclusive cases")
{
    // RP^1 x RP^1 with x1^2, x2^2: two cuts give H = 0
    auto fv = verify(make(2, {1, 1}, {"x1^2", "x2^2"}));
    CHECK(fv.status == Status::pass);
    CHECK(fv.trace->certificate->l == 2);

    // an RP^1 factor with an irreducible form: only the reduction applies
    fv = verify(make(2, {1, 3}, {"x1^2 + x1*x2 + x2^2", "x1*x2"}));
    CHECK(fv.necessary.status == Status::pass);
    CHECK(fv.status == Status::inconclusive);
    CHECK(!fv.trace->certificate);

    // RP^3 x RP^5 with (x1^2 + x1x2 + x2^2) and x1^2: the cut x1 leaves x2^2 on H, fine
    fv = verify(make(2, {3, 5}, {"x1^2 + x1*x2 + x2^2", "x1^2"}));
    CHECK(fv.status == Status::pass);

    // the c-form x1*x2 is 1 at (1,1), the only nonzero point of ker(x1 + x2)
    fv = verify(make(2, {3, 5}, {"x1*x2", "(x1 + x2)^2"}));
    CHECK(fv.status == Status::pass);
    CHECK(!fv.trace->certificate->c_common_zero);
}

TEST_CASE("catalog entries")
{
    auto d = catalog("q8_join", {0});
    CHECK(d.r == 2);
    CHECK(d.dims == std::vector<int>{3});
    CHECK(d.k_invariants[0] == qf("x1^2 + x1*x2 + x2^2", 2));
    CHECK(d.integral_trivial);

    d = product(catalog("z4", {1}), catalog("z4", {2}));
    CHECK(d.r == 2);
    CHECK(d.dims == std::vector<int>{3, 5});
    CHECK(d.k_invariants[0] == qf("x1^2", 2));
    CHECK(d.k_invariants[1] == qf("x2^2", 2));
    CHECK(d.integral_trivial);

    d = catalog("jo_product", {1, 1});
    CHECK(d.dims == std::vector<int>{5, 3});
    CHECK(d.k_invariants[0] == qf("x1*x2", 2));
    CHECK(d.k_invariants[1] == qf("x1^2 + x2^2", 2));
    CHECK(!d.integral_trivial);

    CHECK(catalog("d8", {1}).integral_trivial);
    CHECK(!catalog("d8", {2}).integral_trivial);
    CHECK_THROWS_AS(catalog("nope", {1}), std::invalid_argument);
    CHECK_THROWS_AS(catalog("z4", {}), std::invalid_argument);
    CHECK_THROWS_AS(catalog("jo_product", {0, 1}), std::invalid_argument);

    d = inflate(catalog("z4", {1}), {{1, 1}});
    CHECK(d.r == 2);
    CHECK(d.k_invariants[0] == qf("(x1 + x2)^2", 2));
    CHECK_THROWS_AS(inflate(catalog("q8_join", {0}), {{1, 1}, {1, 1}}), std::invalid_argument);

    CHECK(catalog_expression("product(z4(1), q8_join(0))") == product(catalog("z4", {1}), catalog("q8_join", {0})));
    CHECK(catalog_expression("inflate(z4(1),[[1,1]])") == inflate(catalog("z4", {1}), {{1, 1}}));
    CHECK_THROWS_AS(catalog_expression("z4(1"), ParseError);
    CHECK_THROWS_AS(catalog_expression("z4(1) x"), ParseError);
    CHECK(catalog_entries().size() == 6);
}

TEST_CASE("catalog verdicts")
{
    for (const auto& d : catalog_samples()) {
        INFO(d.name);
        const auto fv = verify(d);
        if (d.name.rfind("d8", 0) == 0) {
            // x1*x2 vanishes at (1,0): no free action has this k-invariant
            CHECK(fv.status == Status::fail);
            CHECK(has_failure(fv.necessary, "C4"));
            continue;
        }
        CHECK(fv.status == Status::pass);
        REQUIRE(fv.trace->certificate);
        const int b = bound(d.dims);
        CHECK(d.r <= b);
        if (d.name.rfind("q8_join", 0) == 0)
            CHECK(d.r == b);
        if (d.name.rfind("jo_product", 0) == 0) {
            const int l = d.dims[1] / 2;
            CHECK((d.r == b) == (l % 2 == 0));
        }
    }
}

TEST_CASE("products are monotone")
{
    std::vector<ActionDescriptor> pass;
    for (const auto& d : catalog_samples())
        if (verify(d).status == Status::pass && d.r <= 2)
            pass.push_back(d);
    for (std::size_t i = 0; i < pass.size(); i += 2)
        for (std::size_t j = 1; j < pass.size(); j += 3) {
            const auto p = product(pass[i], pass[j]);
            CHECK(bound(p.dims) == bound(pass[i].dims) + bound(pass[j].dims));
            CHECK(verify(p).status == Status::pass);
        }
}

TEST_CASE("verdicts are deterministic")
{
    for (const auto& d : catalog_samples()) {
        const auto a = verify(d).to_json().dump();
        const auto b = verify(parse_descriptor(to_json(d).dump())).to_json().dump();
        CHECK(a == b);
        CHECK(render_text(verify(d), true) == render_text(verify(d), true));
    }
}

TEST_CASE("small cases of the common-zero inequality")
{
    auto rep = propD_smalltest(3, 1, 0);
    CHECK(rep.exhaustive);
    CHECK(rep.tested == 64);
    CHECK(rep.counterexamples == 0);
    rep = propD_smalltest(4, 1, 0);
    CHECK(rep.exhaustive);
    CHECK(rep.tested == 1024);
    CHECK(rep.counterexamples == 0);
    rep = propD_smalltest(5, 2, 100000);
    CHECK(!rep.exhaustive);
    CHECK(rep.tested == 100000);
    CHECK(rep.counterexamples == 0);
    CHECK(rep.seed == kPropDSeed);
    CHECK_THROWS_AS(propD_smalltest(2, 1, 10), std::invalid_argument);
    CHECK_THROWS_AS(propD_smalltest(4, 2, 10), std::invalid_argument);
    CHECK_THROWS_AS(propD_smalltest(3, 0, 10), std::invalid_argument);

    // at s = 2c the inequality is sharp: x1^2 + x1x2 + x2^2 has no zero on F2^2
    CHECK(!common_zero(std::vector<QuadraticForm>{qf("x1^2 + x1*x2 + x2^2", 2)}, 2));
}

TEST_CASE("descriptor JSON")
{
    for (const auto& d : catalog_samples()) {
        const auto back = parse_descriptor(to_json(d).dump());
        CHECK(back == d);
    }
    auto d = parse_descriptor(R"({"r":2,"dims":[5,3],"k_invariants":["x1*x2",{"diag":[1,2]}],"integral_trivial":false})");
    CHECK(d.k_invariants[1] == qf("x1^2 + x2^2", 2));

    auto field_of = [](const std::string& text) {
        try {
            parse_descriptor(text);
        } catch (const DescriptorError& e) {
            return e.field();
        }
        return std::string("<none>");
    };
    CHECK(field_of(R"({"r":2,"dims":[5,-3],"k_invariants":["x1*x2","x1^2"],"integral_trivial":false})") == "dims[1]");
    CHECK(field_of(R"({"r":2,"dims":[5],"k_invariants":["x1*x3"],"integral_trivial":false})") == "k_invariants[0]");
    CHECK(field_of(R"({"r":2,"dims":[5],"k_invariants":["x1*x2"]})") == "integral_trivial");
    CHECK(field_of(R"({"r":2,"dims":[5],"k_invariants":["x1*x2"],"integral_trivial":false,"extra":1})") == "extra");
    CHECK(field_of("{not json") == "$");
    CHECK(field_of(R"({"r":17,"dims":[],"k_invariants":[],"integral_trivial":false})") == "r");
    CHECK(field_of(R"({"r":2,"dims":[5,3],"k_invariants":["x1*x2"],"integral_trivial":false})") == "k_invariants");
    CHECK(field_of(R"({"r":2,"dims":[5],"k_invariants":["x1"],"integral_trivial":false})") == "k_invariants[0]");
}
