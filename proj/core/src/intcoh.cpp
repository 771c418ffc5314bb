#include "rpfree/intcoh.hpp"

#include "rpfree/f2linalg.hpp"
#include "rpfree/homalg.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

namespace rpfree {

namespace {

int max_index(IndexSet s)
{
    return s == 0 ? 0 : 32 - std::countl_zero(s);
}

void check_set(IndexSet s, int n, const char* what)
{
    if (s == 0)
        throw std::invalid_argument(std::string(what) + ": index set must be nonempty");
    if (max_index(s) > n)
        throw std::invalid_argument(std::string(what) + ": index out of range");
}

// (prod_{i in I} g_i)(sum_{i in I} g_i) with g_i = variable `offset + i - 1`
PolyF2 beta_of_product(IndexSet s, const RingDescriptor& ring, int offset)
{
    std::vector<Monomial> terms;
    Monomial prod;
    for (int i = 0; i < 32; ++i)
        if ((s >> i) & 1U)
            prod.exp[static_cast<std::size_t>(offset + i)] = 1;
    for (int i = 0; i < 32; ++i)
        if ((s >> i) & 1U) {
            Monomial m = prod;
            m.exp[static_cast<std::size_t>(offset + i)] += 1;
            terms.push_back(m);
        }
    return PolyF2(ring, std::move(terms));
}

// coordinate vectors of polynomials over a shared monomial index
class MonomialIndex {
public:
    std::size_t id(const Monomial& m)
    {
        auto [it, inserted] = ids_.try_emplace(m, ids_.size());
        return it->second;
    }
    std::vector<std::size_t> ids(const PolyF2& p)
    {
        std::vector<std::size_t> out;
        for (const auto& m : p.terms())
            out.push_back(id(m));
        return out;
    }
    std::size_t size() const { return ids_.size(); }

private:
    std::unordered_map<Monomial, std::size_t, MonomialHash> ids_;
};

std::size_t poly_rank(const std::vector<PolyF2>& polys)
{
    MonomialIndex index;
    std::vector<std::vector<std::size_t>> supports;
    for (const auto& p : polys)
        supports.push_back(index.ids(p));
    EchelonBasis basis(index.size());
    for (const auto& s : supports) {
        BitVector v(index.size());
        for (auto i : s)
            v.set(i);
        basis.insert(v);
    }
    return basis.rank();
}

std::vector<int> half_dims(const std::vector<int>& dims)
{
    std::vector<int> m;
    for (int n : dims)
        m.push_back(n / 2);
    return m;
}

void check_dims(const std::vector<int>& dims)
{
    if (dims.size() > static_cast<std::size_t>(kMaxFamilySize))
        throw std::invalid_argument("at most 16 projective factors are supported");
    for (int n : dims)
        if (n < 2)
            throw std::invalid_argument("the presentation needs every n_i >= 2");
}

std::string join_indices(IndexSet s)
{
    bool small = max_index(s) <= 9;
    std::string out;
    for (int i = 0; i < 32; ++i)
        if ((s >> i) & 1U) {
            if (!small && !out.empty())
                out += ",";
            out += std::to_string(i + 1);
        }
    return out;
}

}  // namespace

std::string index_set_to_string(IndexSet s)
{
    return "{" + join_indices(s) + "}";
}

PolyF2 u_gen(IndexSet i, int r)
{
    check_set(i, r, "u_gen");
    return beta_of_product(i, RingDescriptor::free_x(r), 0);
}

BcSides bc_relation_sides(IndexSet i, IndexSet j, int r, EmptyIndex convention)
{
    check_set(i, r, "bc_relation");
    check_set(j, r, "bc_relation");
    const auto ring = RingDescriptor::free_x(r);
    auto u = [&](IndexSet s) {
        if (s == 0)
            return convention == EmptyIndex::zero ? PolyF2::zero(ring) : PolyF2::one(ring);
        return u_gen(s, r);
    };
    const IndexSet cap = i & j;
    const IndexSet delta = i ^ j;
    PolyF2 prefix = PolyF2::one(ring);
    for (int b = 0; b < r; ++b)
        if ((cap >> b) & 1U)
            prefix *= u(IndexSet{1} << b);
    PolyF2 sum = PolyF2::zero(ring);
    for (int b = 0; b < r; ++b) {
        const IndexSet e = IndexSet{1} << b;
        if (cap & e)
            sum += u(delta | e);
        if ((j & ~i) & e)
            sum += u(e) * u(delta & ~e);
    }
    return {u(i) * u(j), prefix * sum};
}

bool verify_bc_relation(IndexSet i, IndexSet j, int r, EmptyIndex convention)
{
    const auto sides = bc_relation_sides(i, j, r, convention);
    return sides.lhs == sides.rhs;
}

std::vector<PolyF2> ker_sq1_basis(int n, const RingDescriptor& ring)
{
    if (n < 1)
        throw std::invalid_argument("ker_sq1_basis: degree must be positive");
    const auto src = monomials_of_degree(ring, n);
    const auto dst = monomials_of_degree(ring, n + 1);
    std::unordered_map<Monomial, std::size_t, MonomialHash> row;
    for (std::size_t i = 0; i < dst.size(); ++i)
        row.emplace(dst[i], i);
    F2Matrix m(dst.size(), src.size());
    for (std::size_t c = 0; c < src.size(); ++c) {
        const PolyF2 image = sq1(PolyF2::monomial(ring, src[c]));
        for (const auto& t : image.terms())
            m.set(row.at(t), c);
    }
    // reduce the kernel basis with pivots at the smallest monomial
    std::vector<BitVector> ker = m.nullspace();
    std::size_t rank = 0;
    for (std::size_t col = 0; col < src.size() && rank < ker.size(); ++col) {
        std::size_t p = rank;
        while (p < ker.size() && !ker[p].get(col))
            ++p;
        if (p == ker.size())
            continue;
        std::swap(ker[rank], ker[p]);
        for (std::size_t q = 0; q < ker.size(); ++q)
            if (q != rank && ker[q].get(col))
                ker[q] ^= ker[rank];
        ++rank;
    }
    std::vector<PolyF2> out;
    for (const auto& v : ker) {
        std::vector<Monomial> terms;
        for (std::size_t c = 0; c < src.size(); ++c)
            if (v.get(c))
                terms.push_back(src[c]);
        out.emplace_back(ring, std::move(terms));
    }
    return out;
}

// ---------------------------------------------------------------------------
// classes of X

std::string XIntClass::to_string() const
{
    std::string out;
    for (const auto& [mask, c] : free) {
        std::string mono;
        for (int i = 0; i < 32; ++i)
            if ((mask >> i) & 1U)
                mono += (mono.empty() ? "v" : "*v") + std::to_string(i + 1);
        std::string term;
        const std::int64_t a = c < 0 ? -c : c;
        if (mono.empty())
            term = std::to_string(a);
        else if (a == 1)
            term = mono;
        else
            term = std::to_string(a) + "*" + mono;
        if (out.empty())
            out = (c < 0 ? "-" : "") + term;
        else
            out += (c < 0 ? " - " : " + ") + term;
    }
    if (!torsion.is_zero()) {
        if (!out.empty())
            out += " + ";
        out += "m2[" + rpfree::to_string(torsion) + "]";
    }
    return out.empty() ? "0" : out;
}

namespace {

XIntClass zero_class(const std::vector<int>& dims)
{
    return XIntClass{dims, {}, PolyF2::zero(RingDescriptor::truncated_t(dims))};
}

PolyF2 s_image(IndexSet s, const RingDescriptor& ring)
{
    return beta_of_product(s, ring, 0);
}

}  // namespace

XWord parse_xword(const std::string& text)
{
    XWord word;
    std::size_t pos = 0;
    auto fail = [&](const std::string& why) {
        throw ParseError("word parse error at offset " + std::to_string(pos) + ": " + why);
    };
    auto skip = [&] {
        while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos])))
            ++pos;
    };
    auto number = [&] {
        if (pos >= text.size() || !std::isdigit(static_cast<unsigned char>(text[pos])))
            fail("expected a number");
        int v = 0;
        while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
            v = v * 10 + (text[pos] - '0');
            if (v > 1000)
                fail("number too large");
            ++pos;
        }
        return v;
    };
    auto digit_set = [&] {
        IndexSet s = 0;
        if (pos >= text.size() || !std::isdigit(static_cast<unsigned char>(text[pos])))
            fail("expected index digits");
        while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
            const int d = text[pos] - '0';
            if (d == 0)
                fail("indices start at 1");
            s |= IndexSet{1} << (d - 1);
            ++pos;
        }
        return s;
    };
    skip();
    if (pos == text.size() || text.substr(pos) == "1")
        return word;
    while (true) {
        skip();
        if (pos >= text.size())
            fail("expected a generator");
        XGen g;
        if (text[pos] == 'v') {
            ++pos;
            g = XGen::v(number());
        } else if (text[pos] == 's') {
            ++pos;
            IndexSet s = 0;
            if (pos < text.size() && text[pos] == '_')
                ++pos;
            if (pos < text.size() && text[pos] == '{') {
                ++pos;
                const std::size_t close = text.find('}', pos);
                if (close == std::string::npos)
                    fail("missing '}'");
                const std::string body = text.substr(pos, close - pos);
                if (body.find(',') != std::string::npos) {
                    std::stringstream ss(body);
                    std::string item;
                    while (std::getline(ss, item, ',')) {
                        const int v = std::stoi(item);
                        if (v < 1 || v > 32)
                            fail("index out of range");
                        s |= IndexSet{1} << (v - 1);
                    }
                } else {
                    s = digit_set();
                }
                pos = close + 1;
            } else {
                s = digit_set();
            }
            g = XGen::s(s);
        } else {
            fail("expected 's' or 'v'");
        }
        int power = 1;
        skip();
        if (pos < text.size() && text[pos] == '^') {
            ++pos;
            power = number();
        }
        for (int e = 0; e < power; ++e)
            word.push_back(g);
        skip();
        if (pos >= text.size())
            break;
        if (text[pos] != '*')
            fail("expected '*'");
        ++pos;
    }
    return word;
}

std::string xword_to_string(const XWord& w)
{
    if (w.empty())
        return "1";
    std::string out;
    for (std::size_t i = 0; i < w.size();) {
        std::size_t j = i;
        auto same = [&](const XGen& a, const XGen& b) {
            return a.kind == b.kind && a.set == b.set && a.index == b.index;
        };
        while (j < w.size() && same(w[j], w[i]))
            ++j;
        std::string g;
        if (w[i].kind == XGen::Kind::v)
            g = "v" + std::to_string(w[i].index);
        else if (std::popcount(w[i].set) == 1)
            g = "s" + join_indices(w[i].set);
        else
            g = "s_{" + join_indices(w[i].set) + "}";
        if (j - i > 1)
            g += "^" + std::to_string(j - i);
        out += (out.empty() ? "" : "*") + g;
        i = j;
    }
    return out;
}

XIntClass x_normal_form(const XWord& word, const std::vector<int>& dims)
{
    check_dims(dims);
    const int k = static_cast<int>(dims.size());
    const auto m = half_dims(dims);
    std::vector<int> vs;
    std::vector<IndexSet> ss;
    for (const auto& g : word) {
        if (g.kind == XGen::Kind::v) {
            if (g.index < 1 || g.index > k)
                throw std::invalid_argument("x_normal_form: v index out of range");
            vs.push_back(g.index);
        } else {
            check_set(g.set, k, "x_normal_form");
            ss.push_back(g.set);
        }
    }
    XIntClass out = zero_class(dims);
    for (int i : vs)
        if (dims[static_cast<std::size_t>(i - 1)] % 2 == 0)
            return out;  // relation (3)

    if (ss.empty()) {
        // exterior algebra on the v_i: sort with sign, squares vanish
        int inversions = 0;
        for (std::size_t a = 0; a < vs.size(); ++a)
            for (std::size_t b = a + 1; b < vs.size(); ++b) {
                if (vs[a] == vs[b])
                    return out;
                if (vs[a] > vs[b])
                    ++inversions;
            }
        IndexSet mask = 0;
        for (int i : vs)
            mask |= IndexSet{1} << (i - 1);
        out.free[mask] = inversions % 2 ? -1 : 1;
        return out;
    }

    // relation (4) against the first s-factor
    for (int i : vs) {
        const IndexSet bit = IndexSet{1} << (i - 1);
        if (ss[0] & bit)
            return out;
        ss[0] |= bit;
        for (int e = 0; e < m[static_cast<std::size_t>(i - 1)]; ++e)
            ss.push_back(bit);
    }
    const auto ring = RingDescriptor::truncated_t(dims);
    PolyF2 img = PolyF2::one(ring);
    for (IndexSet s : ss) {
        img *= s_image(s, ring);
        if (img.is_zero())
            break;
    }
    out.torsion = std::move(img);
    return out;
}

XIntClass x_normalize(const XIntClass& c)
{
    check_dims(c.dims);
    XIntClass out = zero_class(c.dims);
    for (const auto& [mask, coeff] : c.free) {
        if (coeff == 0)
            continue;
        bool ok = max_index(mask) <= static_cast<int>(c.dims.size());
        for (int i = 0; ok && i < static_cast<int>(c.dims.size()); ++i)
            if (((mask >> i) & 1U) && c.dims[static_cast<std::size_t>(i)] % 2 == 0)
                ok = false;
        if (ok)
            out.free[mask] = coeff;
    }
    if (!(c.torsion.ring() == out.torsion.ring()))
        throw RingMismatch();
    out.torsion = c.torsion;
    return out;
}

XIntClass x_add(const XIntClass& a, const XIntClass& b)
{
    if (a.dims != b.dims)
        throw RingMismatch();
    XIntClass out = a;
    for (const auto& [mask, coeff] : b.free)
        out.free[mask] = checked_add(out.free[mask], coeff);
    out.torsion = a.torsion + b.torsion;
    return x_normalize(out);
}

// ---------------------------------------------------------------------------
// normal-form monomials

int PresMonomial::degree() const
{
    int d = std::popcount(set) + 1;
    for (int e : a)
        d += 2 * e;
    return d;
}

XWord PresMonomial::word() const
{
    XWord w;
    for (std::size_t j = 0; j < a.size(); ++j)
        for (int e = 0; e < a[j]; ++e)
            w.push_back(XGen::s(IndexSet{1} << j));
    w.push_back(XGen::s(set));
    return w;
}

std::string PresMonomial::to_string() const
{
    return xword_to_string(word());
}

std::vector<PresMonomial> pres_monomials(int degree, int k)
{
    std::vector<PresMonomial> out;
    if (k < 1 || k > kMaxFamilySize)
        throw std::invalid_argument("pres_monomials: k out of range");
    for (IndexSet s = 1; s < (IndexSet{1} << k); ++s) {
        const int rem = degree - std::popcount(s) - 1;
        if (rem < 0 || rem % 2 != 0)
            continue;
        const int total = rem / 2;
        const int top = max_index(s);
        // compositions of `total` into a_1..a_top, lexicographic
        std::vector<int> a(static_cast<std::size_t>(k), 0);
        auto rec = [&](auto&& self, int j, int left) -> void {
            if (j == top - 1) {
                a[static_cast<std::size_t>(j)] = left;
                out.push_back(PresMonomial{a, s});
                a[static_cast<std::size_t>(j)] = 0;
                return;
            }
            for (int e = left; e >= 0; --e) {
                a[static_cast<std::size_t>(j)] = e;
                self(self, j + 1, left - e);
            }
            a[static_cast<std::size_t>(j)] = 0;
        };
        rec(rec, 0, total);
    }
    return out;
}

namespace {

PolyF2 pres_image(const PresMonomial& m, const RingDescriptor& ring)
{
    Monomial base;
    for (std::size_t j = 0; j < m.a.size(); ++j)
        base.exp[j] = static_cast<std::uint8_t>(2 * m.a[j]);
    return PolyF2::monomial(ring, base) * s_image(m.set, ring);
}

}  // namespace

PolyF2 pres_image_free(const PresMonomial& m, int k)
{
    return pres_image(m, RingDescriptor::free_t(k));
}

bool pres_vanishes_by_ideal(const PresMonomial& m, const std::vector<int>& dims)
{
    check_dims(dims);
    return pres_image(m, RingDescriptor::truncated_t(dims)).is_zero();
}

bool pres_vanishes_by_relations(const PresMonomial& m, const std::vector<int>& dims)
{
    check_dims(dims);
    const auto half = half_dims(dims);
    const int k = static_cast<int>(dims.size());
    const bool single = std::popcount(m.set) == 1;
    for (int j = 0; j < k; ++j) {
        const auto uj = static_cast<std::size_t>(j);
        const bool in = (m.set >> j) & 1U;
        // relation (5) with I = {j}: s_j^{m_j + 1} = 0
        if (m.a[uj] + (single && in ? 1 : 0) >= half[uj] + 1)
            return true;
        // relations (3) and (4): v_j = 0 forces s_j^{m_j} s_J = 0 for j in J, |J| >= 2
        if (in && !single && dims[uj] % 2 == 0 && m.a[uj] >= half[uj])
            return true;
    }
    // relation (5) with I = set
    bool all = true;
    for (int j = 0; j < k; ++j)
        if (((m.set >> j) & 1U) && m.a[static_cast<std::size_t>(j)] < half[static_cast<std::size_t>(j)])
            all = false;
    return all;
}

bool pres_vanishes_by_two_cases(const PresMonomial& m, const std::vector<int>& dims)
{
    check_dims(dims);
    const auto half = half_dims(dims);
    const int k = static_cast<int>(dims.size());
    bool all = true;
    for (int j = 0; j < k; ++j) {
        const auto uj = static_cast<std::size_t>(j);
        const bool in = (m.set >> j) & 1U;
        if (!in && m.a[uj] >= half[uj] + 1)
            return true;
        if (in && m.a[uj] < half[uj])
            all = false;
    }
    return all;
}

std::optional<std::vector<PresMonomial>> torsion_coordinates(const PolyF2& image, const std::vector<int>& dims)
{
    check_dims(dims);
    const auto ring = RingDescriptor::truncated_t(dims);
    if (!(image.ring() == ring))
        throw RingMismatch();
    std::vector<PresMonomial> out;
    // homogeneous pieces are handled independently
    std::map<int, std::vector<Monomial>> by_degree;
    for (const auto& t : image.terms())
        by_degree[t.degree()].push_back(t);
    for (const auto& [deg, terms] : by_degree) {
        const auto basis = monomials_of_degree(ring, deg);
        std::unordered_map<Monomial, std::size_t, MonomialHash> row;
        for (std::size_t i = 0; i < basis.size(); ++i)
            row.emplace(basis[i], i);
        const auto cands = pres_monomials(deg, static_cast<int>(dims.size()));
        F2Matrix a(basis.size(), cands.size());
        for (std::size_t c = 0; c < cands.size(); ++c) {
            const PolyF2 img = pres_image(cands[c], ring);
            for (const auto& t : img.terms())
                a.set(row.at(t), c);
        }
        BitVector b(basis.size());
        for (const auto& t : terms)
            b.set(row.at(t));
        const auto x = a.solve(b);
        if (!x)
            return std::nullopt;
        for (std::size_t c = 0; c < cands.size(); ++c)
            if (x->get(c))
                out.push_back(cands[c]);
    }
    return out;
}

DimensionCount x_dimension_count(int n, const std::vector<int>& dims)
{
    check_dims(dims);
    DimensionCount out;
    const int k = static_cast<int>(dims.size());
    for (IndexSet s = 0; s < (IndexSet{1} << k); ++s) {
        int deg = 0;
        bool ok = true;
        for (int i = 0; i < k; ++i)
            if ((s >> i) & 1U) {
                ok = ok && dims[static_cast<std::size_t>(i)] % 2 == 1;
                deg += dims[static_cast<std::size_t>(i)];
            }
        if (ok && deg == n)
            ++out.free_rank;
    }
    if (n >= 1) {
        const auto ring = RingDescriptor::truncated_t(dims);
        std::vector<PolyF2> imgs;
        for (const auto& m : pres_monomials(n, k))
            imgs.push_back(pres_image(m, ring));
        out.torsion_f2_dim = static_cast<std::int64_t>(poly_rank(imgs));
    }
    return out;
}

DimensionReport x_verify_dims(const std::vector<int>& dims, int max_degree)
{
    check_dims(dims);
    DimensionReport rep;
    const auto ring = RingDescriptor::truncated_t(dims);
    const CochainComplexZ oracle = rp_product_complex(dims);
    for (int n = 0; n <= max_degree; ++n) {
        DimensionRow row;
        row.degree = n;
        row.f2_dim = static_cast<std::int64_t>(monomials_of_degree(ring, n).size());
        row.presentation = x_dimension_count(n, dims);
        row.torsion_next = x_dimension_count(n + 1, dims).torsion_f2_dim;
        const auto h = cohomology(oracle, n);
        row.oracle_free = h.free_rank;
        row.oracle_torsion = static_cast<std::int64_t>(h.torsion.size());
        const bool exponent_two = h.two_torsion_rank() == row.oracle_torsion;
        const bool ses = row.f2_dim == row.presentation.free_rank + row.presentation.torsion_f2_dim + row.torsion_next;
        const bool agree = row.presentation.free_rank == row.oracle_free &&
                           row.presentation.torsion_f2_dim == row.oracle_torsion;
        row.ok = exponent_two && ses && agree;
        if (!row.ok && rep.pass) {
            rep.pass = false;
            rep.first_failure = n;
            std::ostringstream os;
            os << "degree " << n << ": ";
            if (!exponent_two)
                os << "oracle torsion is not of exponent 2";
            else if (!ses)
                os << "dim H^n(X;F2) = " << row.f2_dim << " but free + T_n + T_{n+1} = "
                   << row.presentation.free_rank + row.presentation.torsion_f2_dim + row.torsion_next;
            else
                os << "presentation (" << row.presentation.free_rank << ", " << row.presentation.torsion_f2_dim
                   << ") vs oracle (" << row.oracle_free << ", " << row.oracle_torsion << ")";
            rep.detail = os.str();
        }
        rep.rows.push_back(row);
    }
    return rep;
}

std::vector<FaithfulnessRow> m2_faithfulness(int k, int max_degree)
{
    std::vector<FaithfulnessRow> rows;
    const auto ring = RingDescriptor::free_t(k);
    for (int d = 1; d <= max_degree; ++d) {
        FaithfulnessRow row;
        row.degree = d;
        std::vector<PolyF2> imgs;
        for (const auto& m : pres_monomials(d, k))
            imgs.push_back(pres_image(m, ring));
        row.monomials = imgs.size();
        row.rank = poly_rank(imgs);
        row.ker_sq1_dim = ker_sq1_basis(d, ring).size();
        rows.push_back(row);
    }
    return rows;
}

}  // namespace rpfree
