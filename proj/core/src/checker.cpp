#include "rpfree/checker.hpp"

#include <algorithm>
#include <cctype>
#include <random>
#include <sstream>
#include <stdexcept>

namespace rpfree {

using nlohmann::json;

int mu(int n)
{
    if (n < 0)
        throw std::invalid_argument("mu is defined for n >= 0");
    if (n % 2 == 0)
        return 0;
    return n % 4 == 1 ? 1 : 2;
}

int bound(const std::vector<int>& dims)
{
    int total = 0;
    for (int n : dims)
        total += mu(n);
    return total;
}

StripResult strip_dim_one(const std::vector<int>& dims)
{
    StripResult out;
    for (std::size_t i = 0; i < dims.size(); ++i) {
        const int n = dims[i];
        if (n < 0)
            throw std::invalid_argument("dimensions must be non-negative");
        const int pos = static_cast<int>(i);
        if (n == 0) {
            out.zeros.push_back(pos);
        } else if (n == 1) {
            ++out.l;
            out.ones.push_back(pos);
        } else {
            out.dims.push_back(n);
            out.kept.push_back(pos);
        }
    }
    return out;
}

std::string to_string(Status s)
{
    switch (s) {
    case Status::pass: return "pass";
    case Status::fail: return "fail";
    case Status::inconclusive: return "inconclusive";
    }
    return "?";
}

namespace {

const char* kPassLabel = "consistent with a free action (necessary conditions only)";

json check_json(const ConditionCheck& c)
{
    json j = {{"condition", c.id}, {"ok", c.ok}, {"detail", c.detail}};
    j["factor"] = c.factor ? json(*c.factor + 1) : json(nullptr);
    if (!c.witness.is_null())
        j["witness"] = c.witness;
    return j;
}

std::string factor_name(int i, int n)
{
    return "factor " + std::to_string(i + 1) + " (RP^" + std::to_string(n) + ")";
}

bool is_b_dim(int n) { return n >= 2 && n % 4 == 1; }

}  // namespace

json Verdict::to_json() const
{
    json checks_j = json::array();
    for (const auto& c : checks)
        checks_j.push_back(check_json(c));
    json fails = json::array();
    for (const auto& c : failures)
        fails.push_back(check_json(c));
    return {{"status", rpfree::to_string(status)},
            {"label", label},
            {"checks", checks_j},
            {"failures", fails},
            {"strip", {{"dims", strip.dims}, {"l", strip.l}, {"zeros", strip.zeros}}}};
}

Verdict necessary_conditions(const ActionDescriptor& desc)
{
    desc.validate();
    Verdict v;
    const StripResult st = strip_dim_one(desc.dims);
    v.strip = {st.dims, st.l, st.zeros};
    const int r = desc.r;
    const auto ring = RingDescriptor::free_x(r);

    // every factor of positive dimension contributes to the ideal and the zero scan
    std::vector<PolyF2> gens;
    std::vector<QuadraticForm> live;
    for (int i = 0; i < desc.k(); ++i)
        if (desc.dims[static_cast<std::size_t>(i)] > 0) {
            gens.push_back(desc.k_invariants[static_cast<std::size_t>(i)].to_poly());
            live.push_back(desc.k_invariants[static_cast<std::size_t>(i)]);
        }

    std::vector<ConditionCheck> c1, c2, c2p, c3;
    for (int i = 0; i < desc.k(); ++i) {
        const int n = desc.dims[static_cast<std::size_t>(i)];
        const QuadraticForm& alpha = desc.k_invariants[static_cast<std::size_t>(i)];
        if (n > 0 && n % 2 == 0) {
            ConditionCheck c{"C1", i, alpha.is_zero(), "", {}};
            c.detail = factor_name(i, n) + (c.ok ? ": alpha = 0" : ": even dimension needs alpha = 0, got " + alpha.to_string());
            if (!c.ok)
                c.witness = {{"alpha", alpha.to_string()}};
            c1.push_back(c);
        }
        if (is_b_dim(n)) {
            const auto pairs = alpha.is_zero() ? std::vector<FactorPair>{} : factor_product(alpha);
            ConditionCheck c{"C2", i, alpha.is_zero() || !pairs.empty(), "", {}};
            if (alpha.is_zero()) {
                c.detail = factor_name(i, n) + ": alpha = 0 = 0 * (0 + l')";
                c.witness = {{"l", "0"}, {"m", "0"}};
            } else if (c.ok) {
                const auto& f = pairs.front();
                c.detail = factor_name(i, n) + ": " + alpha.to_string() + " = (" + f.first.to_string() + ")*(" +
                           f.second.to_string() + ")";
                c.witness = {{"l", f.first.to_string()}, {"m", f.second.to_string()},
                             {"l_prime", (f.first + f.second).to_string()}};
            } else {
                c.detail = factor_name(i, n) + ": " + alpha.to_string() + " is not a product of linear forms";
                c.witness = {{"alpha", alpha.to_string()}, {"factorizations", 0}};
            }
            c2.push_back(c);
            if (desc.integral_trivial) {
                const auto root = is_square(alpha);
                ConditionCheck s{"C2'", i, root.has_value(), "", {}};
                if (root) {
                    s.detail = factor_name(i, n) + ": " + alpha.to_string() + " = (" + root->to_string() + ")^2";
                    s.witness = {{"l", root->to_string()}};
                } else {
                    s.detail = factor_name(i, n) + ": trivial action on integral cohomology needs a square, " +
                               alpha.to_string() + " has cross terms";
                    s.witness = {{"alpha", alpha.to_string()}};
                }
                c2p.push_back(s);
            }
        }
        if (n > 0 && n % 4 == 1) {
            const PolyF2 target = sq1(alpha.to_poly());
            const auto mem = ideal_membership_window(target, gens, 3);
            ConditionCheck c{"C3", i, mem.member, "", {}};
            if (mem.member) {
                json coeffs = json::array();
                for (const auto& w : mem.witness)
                    coeffs.push_back(to_string(w));
                c.detail = factor_name(i, n) + ": Sq^1(alpha) = " + to_string(target) + " lies in the ideal";
                c.witness = {{"sq1", to_string(target)}, {"coefficients", coeffs}};
            } else {
                c.detail = factor_name(i, n) + ": Sq^1(alpha) = " + to_string(target) +
                           " is not in the ideal of the k-invariants";
                c.witness = {{"sq1", to_string(target)}};
            }
            c3.push_back(c);
        }
    }

    const auto zero = common_zero(live, r);
    ConditionCheck c4{"C4", std::nullopt, !zero.has_value(), "", {}};
    if (zero) {
        c4.detail = "every k-invariant vanishes at " + vector_to_string(*zero, r);
        c4.witness = {{"point", vector_to_string(*zero, r)}};
    } else {
        c4.detail = r == 0 ? "no nonzero points (r = 0)" : "the k-invariants have no common nonzero zero";
    }

    for (auto* group : {&c1, &c2, &c2p, &c3})
        for (auto& c : *group)
            v.checks.push_back(c);
    v.checks.push_back(c4);
    for (const auto& c : v.checks)
        if (!c.ok)
            v.failures.push_back(c);
    v.status = v.failures.empty() ? Status::pass : Status::fail;
    v.label = v.failures.empty() ? kPassLabel : "violates condition " + v.failures.front().id;
    return v;
}

json TraceResult::to_json() const
{
    json j = {{"status", rpfree::to_string(status)}, {"detail", detail}};
    if (!certificate) {
        j["certificate"] = nullptr;
        return j;
    }
    const auto& c = *certificate;
    json choices = json::array();
    for (const auto& ch : c.choices)
        choices.push_back({{"factor", ch.factor + 1},
                           {"block", ch.block},
                           {"cut", ch.cut ? json(ch.cut->to_string()) : json(nullptr)}});
    json hb = json::array();
    for (auto v : c.h.basis())
        hb.push_back(vector_to_string(v, c.r));
    json rc = json::array();
    for (const auto& f : c.restricted_c)
        rc.push_back(f.to_string());
    j["certificate"] = {{"r", c.r},
                        {"blocks", {{"a", c.a}, {"b", c.b}, {"c", c.c}, {"l", c.l}}},
                        {"bound", c.bound},
                        {"choices", choices},
                        {"H_basis", hb},
                        {"s", c.s},
                        {"restricted_c_forms", rc},
                        {"c_common_zero", c.c_common_zero ? json(vector_to_string(*c.c_common_zero, c.r)) : json(nullptr)},
                        {"combinations", c.combinations},
                        {"passing", c.passing},
                        {"chain", c.chain}};
    return j;
}

TraceResult rank_bound_trace(const ActionDescriptor& desc, const Verdict& necessary)
{
    if (necessary.status != Status::pass)
        throw std::logic_error("rank_bound_trace needs passing necessary conditions");
    desc.validate();
    const int r = desc.r;

    TraceCertificate base;
    base.r = r;
    base.bound = bound(desc.dims);
    std::vector<int> cut_factors;  // b-block and dimension-one positions, in order
    std::vector<QuadraticForm> c_forms;
    for (int i = 0; i < desc.k(); ++i) {
        const int n = desc.dims[static_cast<std::size_t>(i)];
        if (n == 0)
            continue;
        if (n == 1) {
            ++base.l;
            cut_factors.push_back(i);
        } else if (n % 2 == 0) {
            ++base.a;
        } else if (n % 4 == 1) {
            ++base.b;
            cut_factors.push_back(i);
        } else {
            ++base.c;
            c_forms.push_back(desc.k_invariants[static_cast<std::size_t>(i)]);
        }
    }

    // candidate cuts per factor: both linear factors of every factorization
    std::vector<std::vector<std::optional<LinearForm>>> options;
    for (int i : cut_factors) {
        const QuadraticForm& alpha = desc.k_invariants[static_cast<std::size_t>(i)];
        std::vector<std::optional<LinearForm>> opts;
        if (alpha.is_zero()) {
            opts.push_back(std::nullopt);
        } else {
            for (const auto& f : factor_product(alpha))
                for (const auto& l : {f.first, f.second})
                    if (std::find(opts.begin(), opts.end(), std::optional<LinearForm>(l)) == opts.end())
                        opts.push_back(l);
        }
        if (opts.empty()) {
            TraceResult res;
            res.status = Status::inconclusive;
            res.detail = factor_name(i, desc.dims[static_cast<std::size_t>(i)]) +
                         " has a k-invariant that is not a product of linear forms; only the reduction to "
                         "dimensions >= 2 applies and it has no computational certificate";
            return res;
        }
        options.push_back(std::move(opts));
    }

    std::uint64_t total = 1;
    for (const auto& o : options) {
        total *= o.size();
        if (total > (std::uint64_t{1} << 22))
            throw std::invalid_argument("too many factorization combinations to enumerate");
    }

    std::optional<TraceCertificate> best;
    std::uint64_t passing = 0;
    std::vector<std::size_t> idx(options.size(), 0);
    for (std::uint64_t comb = 0; comb < total; ++comb) {
        std::vector<Subspace> kernels{Subspace::full(r)};
        TraceCertificate cert = base;
        for (std::size_t j = 0; j < options.size(); ++j) {
            const auto& choice = options[j][idx[j]];
            const int f = cut_factors[j];
            cert.choices.push_back({f, desc.dims[static_cast<std::size_t>(f)] == 1 ? "l" : "b", choice});
            if (choice)
                kernels.push_back(kernel(*choice));
        }
        cert.h = intersect(kernels);
        cert.s = cert.h.dim();
        bool vanish = true;
        for (int i = 0; i < desc.k(); ++i) {
            const int n = desc.dims[static_cast<std::size_t>(i)];
            if (n == 0 || (n % 2 == 1 && n % 4 == 3))
                continue;
            vanish = vanish && restrict_form(desc.k_invariants[static_cast<std::size_t>(i)], cert.h).is_zero();
        }
        if (!vanish)
            throw std::logic_error("a chosen linear cut does not kill its k-invariant");
        for (const auto& f : c_forms)
            cert.restricted_c.push_back(restrict_form(f, cert.h));
        cert.c_common_zero = common_zero(c_forms, cert.h);
        if (!cert.c_common_zero) {
            ++passing;
            if (!best || cert.s > best->s)
                best = std::move(cert);
        }
        for (std::size_t j = 0; j < idx.size(); ++j) {
            if (++idx[j] < options[j].size())
                break;
            idx[j] = 0;
        }
    }

    TraceResult res;
    if (!best) {
        res.status = Status::inconclusive;
        res.detail = "every choice of cuts leaves a common zero of the c-block on H; the data are inconsistent "
                     "with a free action, since the restricted action would violate the no-common-zero condition";
        return res;
    }
    best->combinations = total;
    best->passing = passing;
    const int cuts = r - best->s;
    std::ostringstream chain;
    chain << "r = " << r << " <= (r - s) + s = " << cuts << " + " << best->s << " <= b + l + 2c = " << best->b
          << " + " << best->l << " + " << 2 * best->c << " = " << best->b + best->l + 2 * best->c;
    best->chain = chain.str();
    const bool cut_ok = cuts <= best->b + best->l;
    const bool h_ok = best->s <= 2 * best->c;
    if (!cut_ok)
        throw std::logic_error("more codimension than linear cuts");
    if (!h_ok) {
        res.status = Status::fail;
        res.detail = "H has dimension " + std::to_string(best->s) + " > 2c = " + std::to_string(2 * best->c) +
                     " although the c-block has no common zero on H";
    } else if (r > best->bound) {
        res.status = Status::fail;
        res.detail = "r = " + std::to_string(r) + " exceeds the bound " + std::to_string(best->bound);
    } else {
        res.status = Status::pass;
        res.detail = best->chain;
    }
    res.certificate = std::move(best);
    return res;
}

json FullVerdict::to_json() const
{
    json j = {{"status", rpfree::to_string(status)}, {"label", label}, {"necessary", necessary.to_json()}};
    j["trace"] = trace ? trace->to_json() : json(nullptr);
    return j;
}

FullVerdict verify(const ActionDescriptor& desc)
{
    FullVerdict v;
    v.necessary = necessary_conditions(desc);
    if (v.necessary.status != Status::pass) {
        v.status = Status::fail;
        v.label = v.necessary.label;
        return v;
    }
    v.trace = rank_bound_trace(desc, v.necessary);
    v.status = v.trace->status;
    if (v.status == Status::pass)
        v.label = kPassLabel;
    else if (v.status == Status::fail)
        v.label = "rank bound violated";
    else
        v.label = "inconclusive";
    return v;
}

std::string render_text(const FullVerdict& v, bool with_trace)
{
    std::ostringstream out;
    out << "verdict: " << to_string(v.status) << " - " << v.label << "\n";
    for (const auto& c : v.necessary.checks) {
        out << "  " << (c.ok ? "ok  " : "FAIL") << " " << c.id << " " << c.detail << "\n";
    }
    if (!v.necessary.strip.zeros.empty() || v.necessary.strip.l > 0)
        out << "  stripped: dims " << dims_to_string(v.necessary.strip.dims) << ", l = " << v.necessary.strip.l
            << ", points removed: " << v.necessary.strip.zeros.size() << "\n";
    if (with_trace && v.trace) {
        out << "trace: " << to_string(v.trace->status) << " - " << v.trace->detail << "\n";
        if (v.trace->certificate) {
            const auto& c = *v.trace->certificate;
            out << "  blocks a=" << c.a << " b=" << c.b << " c=" << c.c << " l=" << c.l << ", bound " << c.bound
                << "\n";
            for (const auto& ch : c.choices)
                out << "  cut for factor " << ch.factor + 1 << " (" << ch.block
                    << "): " << (ch.cut ? ch.cut->to_string() : std::string("none, alpha = 0")) << "\n";
            out << "  H = span{";
            for (std::size_t i = 0; i < c.h.basis().size(); ++i)
                out << (i ? ", " : "") << vector_to_string(c.h.basis()[i], c.r);
            out << "}, s = " << c.s << "\n";
            out << "  c-block on H: ";
            if (c.restricted_c.empty())
                out << "empty";
            for (std::size_t i = 0; i < c.restricted_c.size(); ++i)
                out << (i ? ", " : "") << c.restricted_c[i].to_string();
            out << "; common zero: " << (c.c_common_zero ? vector_to_string(*c.c_common_zero, c.r) : "none") << "\n";
            out << "  combinations tried " << c.combinations << ", passing " << c.passing << "\n";
        }
    }
    return out.str();
}

PropDReport propD_smalltest(int s, int c, std::uint64_t samples, std::uint64_t seed)
{
    if (c < 1)
        throw std::invalid_argument("propD_smalltest needs c >= 1");
    if (s <= 2 * c)
        throw std::invalid_argument("propD_smalltest needs s > 2c");
    if (s > 10)
        throw std::invalid_argument("propD_smalltest supports s <= 10");
    PropDReport rep;
    rep.s = s;
    rep.c = c;
    rep.seed = seed;
    const std::uint64_t per = QuadraticForm::code_count(s);
    const int bits = s * (s + 1) / 2;
    rep.exhaustive = static_cast<long long>(bits) * c <= 24;

    std::vector<QuadraticForm> forms(static_cast<std::size_t>(c), QuadraticForm(s));
    auto test = [&] {
        ++rep.tested;
        if (!common_zero(forms, s)) {
            if (rep.counterexamples++ == 0)
                rep.first_counterexample = forms;
        }
    };
    if (rep.exhaustive) {
        std::uint64_t total = 1;
        for (int i = 0; i < c; ++i)
            total *= per;
        for (std::uint64_t code = 0; code < total; ++code) {
            std::uint64_t rest = code;
            for (int i = 0; i < c; ++i) {
                forms[static_cast<std::size_t>(i)] = QuadraticForm::from_code(s, rest % per);
                rest /= per;
            }
            test();
        }
    } else {
        std::mt19937_64 rng(seed);
        std::uniform_int_distribution<std::uint64_t> dist(0, per - 1);
        for (std::uint64_t n = 0; n < samples; ++n) {
            for (int i = 0; i < c; ++i)
                forms[static_cast<std::size_t>(i)] = QuadraticForm::from_code(s, dist(rng));
            test();
        }
    }
    return rep;
}

namespace {

QuadraticForm form_of(const char* text, int r)
{
    return QuadraticForm::from_poly(parse_poly(text, RingDescriptor::free_x(r)));
}

void need(bool ok, const std::string& what)
{
    if (!ok)
        throw std::invalid_argument(what);
}

std::string call_name(const std::string& name, const std::vector<int>& params)
{
    std::string s = name + "(";
    for (std::size_t i = 0; i < params.size(); ++i)
        s += (i ? "," : "") + std::to_string(params[i]);
    return s + ")";
}

}  // namespace

ActionDescriptor catalog(const std::string& name, const std::vector<int>& params)
{
    ActionDescriptor d;
    d.name = call_name(name, params);
    if (name == "q8_join") {
        need(params.size() == 1 && params[0] >= 0, "q8_join takes one parameter m >= 0");
        need(params[0] <= 63, "q8_join: m too large");
        d.r = 2;
        d.dims = {4 * params[0] + 3};
        d.k_invariants = {form_of("x1^2 + x1*x2 + x2^2", 2)};
        d.integral_trivial = true;
    } else if (name == "z4") {
        need(params.size() == 1 && params[0] >= 0, "z4 takes one parameter m >= 0");
        need(params[0] <= 127, "z4: m too large");
        d.r = 1;
        d.dims = {2 * params[0] + 1};
        d.k_invariants = {form_of("x1^2", 1)};
        d.integral_trivial = true;
    } else if (name == "d8") {
        need(params.size() == 1 && params[0] >= 0, "d8 takes one parameter m >= 0");
        need(params[0] <= 127, "d8: m too large");
        d.r = 2;
        d.dims = {2 * params[0] + 1};
        d.k_invariants = {form_of("x1*x2", 2)};
        // the generators act on H^{2m+1}(X; Z) by the determinant (-1)^{m+1}
        d.integral_trivial = params[0] % 2 == 1;
    } else if (name == "jo_product") {
        need(params.size() == 2 && params[0] >= 1 && params[1] >= 0, "jo_product takes m >= 1 and l >= 0");
        need(params[0] <= 63 && params[1] <= 127, "jo_product: parameters too large");
        d.r = 2;
        d.dims = {4 * params[0] + 1, 2 * params[1] + 1};
        d.k_invariants = {form_of("x1*x2", 2), form_of("(x1 + x2)^2", 2)};
        d.integral_trivial = false;
    } else {
        throw std::invalid_argument("unknown catalog entry '" + name + "'");
    }
    return d;
}

ActionDescriptor product(const ActionDescriptor& a, const ActionDescriptor& b)
{
    a.validate();
    b.validate();
    need(a.r + b.r <= kMaxFamilySize, "product: rank exceeds 16");
    need(a.k() + b.k() <= kMaxFamilySize, "product: more than 16 factors");
    ActionDescriptor d;
    d.r = a.r + b.r;
    d.dims = a.dims;
    d.dims.insert(d.dims.end(), b.dims.begin(), b.dims.end());
    std::vector<LinearForm> left, right;
    for (int j = 0; j < a.r; ++j)
        left.push_back(LinearForm::var(d.r, j));
    for (int j = 0; j < b.r; ++j)
        right.push_back(LinearForm::var(d.r, a.r + j));
    auto embed = [&](const QuadraticForm& f, const std::vector<LinearForm>& images) {
        if (images.empty())
            return QuadraticForm(d.r);
        return QuadraticForm::from_poly(substitute(f.to_poly(), images));
    };
    for (const auto& f : a.k_invariants)
        d.k_invariants.push_back(embed(f, left));
    for (const auto& f : b.k_invariants)
        d.k_invariants.push_back(embed(f, right));
    d.integral_trivial = a.integral_trivial && b.integral_trivial;
    d.name = "product(" + (a.name.empty() ? "?" : a.name) + "," + (b.name.empty() ? "?" : b.name) + ")";
    return d;
}

ActionDescriptor inflate(const ActionDescriptor& d, const std::vector<std::vector<int>>& matrix)
{
    d.validate();
    need(static_cast<int>(matrix.size()) == d.r, "inflate: the matrix needs one row per generator");
    const int rp = matrix.empty() ? 0 : static_cast<int>(matrix[0].size());
    need(rp >= d.r && rp <= kMaxFamilySize, "inflate: target rank must lie in r..16");
    std::vector<LinearForm> images;
    std::vector<std::uint32_t> rows;
    for (const auto& row : matrix) {
        need(static_cast<int>(row.size()) == rp, "inflate: ragged matrix");
        std::uint32_t bits = 0;
        for (int i = 0; i < rp; ++i) {
            need(row[static_cast<std::size_t>(i)] == 0 || row[static_cast<std::size_t>(i)] == 1,
                 "inflate: entries must be 0 or 1");
            if (row[static_cast<std::size_t>(i)])
                bits |= std::uint32_t{1} << i;
        }
        images.emplace_back(rp, bits);
        rows.push_back(bits);
    }
    need(Subspace::span(rp, rows).dim() == d.r, "inflate: the matrix must define a surjection (rank r)");
    ActionDescriptor out;
    out.r = rp;
    out.dims = d.dims;
    out.integral_trivial = d.integral_trivial;
    for (const auto& f : d.k_invariants)
        out.k_invariants.push_back(images.empty() ? QuadraticForm(rp)
                                                  : QuadraticForm::from_poly(substitute(f.to_poly(), images)));
    std::string m = "[";
    for (std::size_t j = 0; j < matrix.size(); ++j) {
        m += j ? ",[" : "[";
        for (std::size_t i = 0; i < matrix[j].size(); ++i)
            m += (i ? "," : "") + std::to_string(matrix[j][i]);
        m += "]";
    }
    m += "]";
    out.name = "inflate(" + (d.name.empty() ? "?" : d.name) + "," + m + ")";
    return out;
}

namespace {

class ExprParser {
public:
    explicit ExprParser(const std::string& s) : s_(s) {}

    ActionDescriptor parse()
    {
        auto d = expr();
        skip();
        if (pos_ != s_.size())
            fail("trailing characters");
        return d;
    }

private:
    [[noreturn]] void fail(const std::string& why)
    {
        throw ParseError("catalog expression, offset " + std::to_string(pos_) + ": " + why);
    }
    void skip()
    {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_])))
            ++pos_;
    }
    bool eat(char c)
    {
        skip();
        if (pos_ < s_.size() && s_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }
    void expect(char c)
    {
        if (!eat(c))
            fail(std::string("expected '") + c + "'");
    }
    int integer()
    {
        skip();
        const std::size_t start = pos_;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_])))
            ++pos_;
        if (start == pos_)
            fail("expected an integer");
        if (pos_ - start > 6)
            fail("integer too large");
        return std::stoi(s_.substr(start, pos_ - start));
    }
    std::string ident()
    {
        skip();
        const std::size_t start = pos_;
        while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_'))
            ++pos_;
        if (start == pos_)
            fail("expected a name");
        return s_.substr(start, pos_ - start);
    }
    ActionDescriptor expr()
    {
        const std::string name = ident();
        expect('(');
        if (name == "product") {
            auto a = expr();
            expect(',');
            auto b = expr();
            expect(')');
            return product(a, b);
        }
        if (name == "inflate") {
            auto a = expr();
            expect(',');
            std::vector<std::vector<int>> m;
            expect('[');
            do {
                expect('[');
                std::vector<int> row;
                do
                    row.push_back(integer());
                while (eat(','));
                expect(']');
                m.push_back(row);
            } while (eat(','));
            expect(']');
            expect(')');
            return inflate(a, m);
        }
        std::vector<int> params;
        if (!eat(')')) {
            do
                params.push_back(integer());
            while (eat(','));
            expect(')');
        }
        return catalog(name, params);
    }

    const std::string& s_;
    std::size_t pos_ = 0;
};

}  // namespace

ActionDescriptor catalog_expression(const std::string& text)
{
    return ExprParser(text).parse();
}

std::vector<CatalogEntry> catalog_entries()
{
    return {
        {"q8_join", "q8_join(m)", "(Z/2)^2 on RP^{4m+3} from unit quaternions; alpha = x1^2 + x1*x2 + x2^2, integrally trivial"},
        {"z4", "z4(m)", "Z/2 on RP^{2m+1} from rotation by pi/2; alpha = x1^2, integrally trivial"},
        {"d8", "d8(m)", "(Z/2)^2 on RP^{2m+1} from the square's symmetries; alpha = x1*x2, not free; integrally trivial iff m odd"},
        {"jo_product", "jo_product(m,l)", "(Z/2)^2 on RP^{4m+1} x RP^{2l+1}; alpha = x1*x2, (x1+x2)^2, integrally nontrivial"},
        {"product", "product(A,B)", "block sum of two descriptors in disjoint variables"},
        {"inflate", "inflate(A,[[..],..])", "pull back along a surjection given by an r x r' 0/1 matrix"},
    };
}

}  // namespace rpfree
