#include "rpfree/f2algebra.hpp"

#include "rpfree/f2linalg.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <limits>
#include <sstream>
#include <unordered_map>

namespace rpfree {

RingDescriptor::RingDescriptor(int r, int k, std::vector<int> caps)
    : x_count_(r), t_count_(k), caps_(std::move(caps))
{
    if (r < 0 || k < 0 || r > kMaxFamilySize || k > kMaxFamilySize)
        throw std::invalid_argument("generator counts must lie in 0..16");
    if (!caps_.empty() && static_cast<int>(caps_.size()) != k)
        throw std::invalid_argument("one exponent cap per t-generator required");
    for (int c : caps_)
        if (c < 1)
            throw std::invalid_argument("exponent caps must be >= 1");
}

RingDescriptor RingDescriptor::truncated_t(std::vector<int> caps)
{
    const int k = static_cast<int>(caps.size());
    return RingDescriptor(0, k, std::move(caps));
}

RingDescriptor RingDescriptor::bigraded(int r, std::vector<int> caps)
{
    const int k = static_cast<int>(caps.size());
    return RingDescriptor(r, k, std::move(caps));
}

std::optional<int> RingDescriptor::cap(int v) const
{
    if (v < x_count_ || caps_.empty())
        return std::nullopt;
    return caps_[static_cast<std::size_t>(v - x_count_)];
}

std::string RingDescriptor::var_name(int v) const
{
    if (v < x_count_)
        return "x" + std::to_string(v + 1);
    return "t" + std::to_string(v - x_count_ + 1);
}

Monomial Monomial::var(int v, int power)
{
    if (v < 0 || v >= kMaxVars || power < 0 || power > std::numeric_limits<std::uint8_t>::max())
        throw std::out_of_range("Monomial::var");
    Monomial m;
    m.exp[static_cast<std::size_t>(v)] = static_cast<std::uint8_t>(power);
    return m;
}

int Monomial::degree() const
{
    int d = 0;
    for (auto e : exp)
        d += e;
    return d;
}

Monomial Monomial::operator*(const Monomial& other) const
{
    Monomial out;
    for (std::size_t i = 0; i < exp.size(); ++i) {
        const int e = exp[i] + other.exp[i];
        if (e > std::numeric_limits<std::uint8_t>::max())
            throw std::overflow_error("monomial exponent overflow");
        out.exp[i] = static_cast<std::uint8_t>(e);
    }
    return out;
}

bool Monomial::divides(const Monomial& other) const
{
    for (std::size_t i = 0; i < exp.size(); ++i)
        if (exp[i] > other.exp[i])
            return false;
    return true;
}

bool Monomial::respects(const RingDescriptor& ring) const
{
    for (int v = ring.nvars(); v < kMaxVars; ++v)
        if (exp[static_cast<std::size_t>(v)] != 0)
            return false;
    if (!ring.has_caps())
        return true;
    for (int v = ring.x_count(); v < ring.nvars(); ++v)
        if (exp[static_cast<std::size_t>(v)] > *ring.cap(v))
            return false;
    return true;
}

bool monomial_less(const Monomial& a, const Monomial& b)
{
    const int da = a.degree(), db = b.degree();
    if (da != db)
        return da < db;
    for (int i = kMaxVars - 1; i >= 0; --i) {
        const auto ea = a.exp[static_cast<std::size_t>(i)];
        const auto eb = b.exp[static_cast<std::size_t>(i)];
        if (ea != eb)
            return ea < eb;
    }
    return false;
}

std::size_t MonomialHash::operator()(const Monomial& m) const
{
    // FNV-1a over the exponent bytes.
    std::size_t h = 1469598103934665603ULL;
    for (auto e : m.exp) {
        h ^= e;
        h *= 1099511628211ULL;
    }
    return h;
}

namespace {

void enumerate(const RingDescriptor& ring, int v, int remaining, Monomial& cur,
               std::vector<Monomial>& out)
{
    if (v == ring.nvars() - 1) {
        const auto cap = ring.cap(v);
        if (cap && remaining > *cap)
            return;
        cur.exp[static_cast<std::size_t>(v)] = static_cast<std::uint8_t>(remaining);
        out.push_back(cur);
        cur.exp[static_cast<std::size_t>(v)] = 0;
        return;
    }
    const auto cap = ring.cap(v);
    const int top = cap ? std::min(*cap, remaining) : remaining;
    for (int e = 0; e <= top; ++e) {
        cur.exp[static_cast<std::size_t>(v)] = static_cast<std::uint8_t>(e);
        enumerate(ring, v + 1, remaining - e, cur, out);
    }
    cur.exp[static_cast<std::size_t>(v)] = 0;
}

}  // namespace

std::vector<Monomial> monomials_of_degree(const RingDescriptor& ring, int degree)
{
    std::vector<Monomial> out;
    if (degree < 0)
        return out;
    if (ring.nvars() == 0) {
        if (degree == 0)
            out.push_back(Monomial::one());
        return out;
    }
    if (degree > std::numeric_limits<std::uint8_t>::max())
        throw std::overflow_error("monomial degree exceeds exponent storage");
    Monomial cur;
    enumerate(ring, 0, degree, cur, out);
    std::sort(out.begin(), out.end(), MonomialLess{});
    return out;
}

PolyF2::PolyF2(RingDescriptor ring, std::vector<Monomial> terms) : ring_(std::move(ring))
{
    std::sort(terms.begin(), terms.end(), MonomialLess{});
    terms_.reserve(terms.size());
    for (std::size_t i = 0; i < terms.size();) {
        std::size_t j = i;
        while (j < terms.size() && terms[j] == terms[i])
            ++j;
        if (((j - i) & 1U) && terms[i].respects(ring_))
            terms_.push_back(terms[i]);
        i = j;
    }
}

PolyF2 PolyF2::one(const RingDescriptor& ring)
{
    return PolyF2(ring, {Monomial::one()});
}

PolyF2 PolyF2::var(const RingDescriptor& ring, int v)
{
    if (v < 0 || v >= ring.nvars())
        throw std::out_of_range("PolyF2::var: no such generator");
    return PolyF2(ring, {Monomial::var(v)});
}

PolyF2 PolyF2::monomial(const RingDescriptor& ring, const Monomial& m)
{
    return PolyF2(ring, {m});
}

bool PolyF2::contains(const Monomial& m) const
{
    return std::binary_search(terms_.begin(), terms_.end(), m, MonomialLess{});
}

int PolyF2::degree() const
{
    return terms_.empty() ? -1 : terms_.back().degree();
}

bool PolyF2::is_homogeneous() const
{
    return terms_.empty() || terms_.front().degree() == terms_.back().degree();
}

PolyF2 operator+(const PolyF2& a, const PolyF2& b)
{
    if (!(a.ring_ == b.ring_))
        throw RingMismatch();
    PolyF2 out(a.ring_);
    out.terms_.reserve(a.terms_.size() + b.terms_.size());
    auto i = a.terms_.begin(), j = b.terms_.begin();
    while (i != a.terms_.end() && j != b.terms_.end()) {
        if (*i == *j) {
            ++i;
            ++j;
        } else if (monomial_less(*i, *j)) {
            out.terms_.push_back(*i++);
        } else {
            out.terms_.push_back(*j++);
        }
    }
    out.terms_.insert(out.terms_.end(), i, a.terms_.end());
    out.terms_.insert(out.terms_.end(), j, b.terms_.end());
    return out;
}

PolyF2 operator*(const PolyF2& a, const PolyF2& b)
{
    if (!(a.ring_ == b.ring_))
        throw RingMismatch();
    std::vector<Monomial> prod;
    prod.reserve(a.terms_.size() * b.terms_.size());
    for (const auto& s : a.terms_)
        for (const auto& t : b.terms_) {
            Monomial m = s * t;
            if (m.respects(a.ring_))
                prod.push_back(m);
        }
    return PolyF2(a.ring_, std::move(prod));
}

PolyF2 PolyF2::pow(int e) const
{
    if (e < 0)
        throw std::invalid_argument("PolyF2::pow: negative exponent");
    PolyF2 result = one(ring_);
    PolyF2 base = *this;
    while (e) {
        if (e & 1)
            result *= base;
        e >>= 1;
        if (e)
            base *= base;
    }
    return result;
}

PolyF2 poly_add(const PolyF2& a, const PolyF2& b) { return a + b; }
PolyF2 poly_mul(const PolyF2& a, const PolyF2& b) { return a * b; }

PolyF2 sq1(const PolyF2& p)
{
    std::vector<Monomial> out;
    const int n = p.ring().nvars();
    for (const auto& m : p.terms()) {
        for (int v = 0; v < n; ++v) {
            const auto e = m.exp[static_cast<std::size_t>(v)];
            if (e & 1U) {
                Monomial t = m;
                if (e == std::numeric_limits<std::uint8_t>::max())
                    throw std::overflow_error("monomial exponent overflow");
                t.exp[static_cast<std::size_t>(v)] = static_cast<std::uint8_t>(e + 1);
                out.push_back(t);
            }
        }
    }
    return PolyF2(p.ring(), std::move(out));
}

bool evaluate_bits(const PolyF2& p, std::uint64_t point)
{
    bool acc = false;
    for (const auto& m : p.terms()) {
        bool val = true;
        for (int v = 0; v < p.ring().nvars() && val; ++v)
            if (m.exp[static_cast<std::size_t>(v)] && !((point >> v) & 1U))
                val = false;
        acc ^= val;
    }
    return acc;
}

bool evaluate(const PolyF2& p, std::span<const std::uint8_t> point)
{
    if (static_cast<int>(point.size()) != p.ring().nvars())
        throw std::invalid_argument("evaluate: point length differs from generator count");
    std::uint64_t bits = 0;
    for (std::size_t i = 0; i < point.size(); ++i) {
        if (point[i] > 1)
            throw std::invalid_argument("evaluate: coordinates must be 0 or 1");
        if (point[i])
            bits |= std::uint64_t{1} << i;
    }
    return evaluate_bits(p, bits);
}

LinearForm::LinearForm(int r, std::uint32_t coeffs) : r_(r), coeffs_(coeffs)
{
    if (r < 0 || r > kMaxFamilySize)
        throw std::invalid_argument("LinearForm: rank must lie in 0..16");
    if (r < 32 && (coeffs >> r) != 0)
        throw std::invalid_argument("LinearForm: coefficient outside rank");
}

std::optional<LinearForm> LinearForm::from_poly(const PolyF2& p)
{
    const auto& ring = p.ring();
    if (ring.t_count() != 0)
        return std::nullopt;
    std::uint32_t c = 0;
    for (const auto& m : p.terms()) {
        if (m.degree() != 1)
            return std::nullopt;
        for (int v = 0; v < ring.x_count(); ++v)
            if (m.exp[static_cast<std::size_t>(v)])
                c |= std::uint32_t{1} << v;
    }
    return LinearForm(ring.x_count(), c);
}

bool LinearForm::evaluate(std::uint32_t point) const
{
    return std::popcount(coeffs_ & point) & 1;
}

PolyF2 LinearForm::to_poly() const
{
    const auto ring = RingDescriptor::free_x(r_);
    std::vector<Monomial> terms;
    for (int j = 0; j < r_; ++j)
        if (coeff(j))
            terms.push_back(Monomial::var(j));
    return PolyF2(ring, std::move(terms));
}

std::string LinearForm::to_string() const
{
    return rpfree::to_string(to_poly());
}

LinearForm LinearForm::operator+(const LinearForm& o) const
{
    if (o.r_ != r_)
        throw RingMismatch();
    return LinearForm(r_, coeffs_ ^ o.coeffs_);
}

PolyF2 substitute(const PolyF2& p, std::span<const PolyF2> images, const RingDescriptor& target)
{
    if (static_cast<int>(images.size()) != p.ring().nvars())
        throw std::invalid_argument("substitute: one image per generator required");
    for (const auto& img : images)
        if (!(img.ring() == target))
            throw RingMismatch();
    // Cache powers per variable.
    std::vector<std::vector<PolyF2>> powers(images.size());
    auto power = [&](std::size_t v, int e) -> const PolyF2& {
        auto& cache = powers[v];
        if (cache.empty())
            cache.push_back(PolyF2::one(target));
        while (static_cast<int>(cache.size()) <= e)
            cache.push_back(cache.back() * images[v]);
        return cache[static_cast<std::size_t>(e)];
    };
    PolyF2 out(target);
    for (const auto& m : p.terms()) {
        PolyF2 term = PolyF2::one(target);
        for (std::size_t v = 0; v < images.size() && !term.is_zero(); ++v)
            if (m.exp[v])
                term *= power(v, m.exp[v]);
        out += term;
    }
    return out;
}

PolyF2 substitute(const PolyF2& p, std::span<const LinearForm> images)
{
    if (p.ring().t_count() != 0)
        throw std::invalid_argument("substitute: linear forms replace x-generators only");
    if (static_cast<int>(images.size()) != p.ring().x_count())
        throw std::invalid_argument("substitute: one image per generator required");
    const int m = images.empty() ? 0 : images.front().r();
    const auto target = RingDescriptor::free_x(m);
    std::vector<PolyF2> polys;
    polys.reserve(images.size());
    for (const auto& l : images) {
        if (l.r() != m)
            throw RingMismatch();
        polys.push_back(l.to_poly());
    }
    return substitute(p, polys, target);
}

IdealMembership ideal_membership_window(const PolyF2& p, std::span<const PolyF2> gens,
                                        int max_degree)
{
    const auto& ring = p.ring();
    for (const auto& g : gens)
        if (!(g.ring() == ring))
            throw RingMismatch();

    IdealMembership result;
    result.witness.assign(gens.size(), PolyF2::zero(ring));
    if (p.is_zero()) {
        result.member = true;
        return result;
    }
    if (p.degree() > max_degree)
        return result;

    // Ambient basis: all monomials of degree <= max_degree.
    std::vector<Monomial> basis;
    for (int d = 0; d <= max_degree; ++d) {
        auto ms = monomials_of_degree(ring, d);
        basis.insert(basis.end(), ms.begin(), ms.end());
    }
    std::unordered_map<Monomial, std::size_t, MonomialHash> index;
    for (std::size_t i = 0; i < basis.size(); ++i)
        index.emplace(basis[i], i);
    auto to_vector = [&](const PolyF2& q) {
        BitVector v(basis.size());
        for (const auto& m : q.terms())
            v.set(index.at(m));
        return v;
    };

    struct Column {
        std::size_t gen;
        Monomial mult;
    };
    std::vector<Column> cols;
    std::vector<BitVector> images;
    for (std::size_t i = 0; i < gens.size(); ++i) {
        if (gens[i].is_zero())
            continue;
        const int budget = max_degree - gens[i].degree();
        for (int d = 0; d <= budget; ++d)
            for (const auto& m : monomials_of_degree(ring, d)) {
                PolyF2 prod = PolyF2::monomial(ring, m) * gens[i];
                cols.push_back({i, m});
                images.push_back(to_vector(prod));
            }
    }
    if (cols.empty())
        return result;
    const auto mat = F2Matrix::from_columns(basis.size(), images);
    const auto sol = mat.solve(to_vector(p));
    if (!sol)
        return result;
    result.member = true;
    std::vector<std::vector<Monomial>> coeffs(gens.size());
    for (std::size_t c = 0; c < cols.size(); ++c)
        if (sol->get(c))
            coeffs[cols[c].gen].push_back(cols[c].mult);
    for (std::size_t i = 0; i < gens.size(); ++i)
        result.witness[i] = PolyF2(ring, std::move(coeffs[i]));
    return result;
}

std::string to_string(const Monomial& m, const RingDescriptor& ring)
{
    std::string out;
    for (int v = 0; v < ring.nvars(); ++v) {
        const int e = m.exp[static_cast<std::size_t>(v)];
        if (!e)
            continue;
        if (!out.empty())
            out += '*';
        out += ring.var_name(v);
        if (e > 1)
            out += '^' + std::to_string(e);
    }
    return out.empty() ? "1" : out;
}

std::string to_string(const PolyF2& p)
{
    if (p.is_zero())
        return "0";
    std::string out;
    for (const auto& m : p.terms()) {
        if (!out.empty())
            out += " + ";
        out += to_string(m, p.ring());
    }
    return out;
}

namespace {

class PolyParser {
public:
    PolyParser(std::string_view text, const RingDescriptor& ring) : text_(text), ring_(ring) {}

    PolyF2 parse()
    {
        PolyF2 p = expr();
        skip_ws();
        if (pos_ != text_.size())
            fail("unexpected character");
        return p;
    }

private:
    [[noreturn]] void fail(const std::string& what) const
    {
        std::ostringstream os;
        os << "polynomial parse error at offset " << pos_ << ": " << what << " in \"" << text_
           << "\"";
        throw ParseError(os.str());
    }

    void skip_ws()
    {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_])))
            ++pos_;
    }

    bool accept(char c)
    {
        skip_ws();
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    long number()
    {
        skip_ws();
        const std::size_t start = pos_;
        long value = 0;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
            value = value * 10 + (text_[pos_] - '0');
            if (value > 1000000)
                fail("number too large");
            ++pos_;
        }
        if (pos_ == start)
            fail("expected a number");
        return value;
    }

    PolyF2 expr()
    {
        PolyF2 acc = term();
        while (accept('+'))
            acc += term();
        return acc;
    }

    PolyF2 term()
    {
        PolyF2 acc = factor();
        while (accept('*'))
            acc *= factor();
        return acc;
    }

    PolyF2 factor()
    {
        PolyF2 base = primary();
        if (accept('^')) {
            const long e = number();
            if (e > 255)
                fail("exponent too large");
            return base.pow(static_cast<int>(e));
        }
        return base;
    }

    PolyF2 primary()
    {
        skip_ws();
        if (pos_ >= text_.size())
            fail("unexpected end of input");
        const char c = text_[pos_];
        if (c == '(') {
            ++pos_;
            PolyF2 inner = expr();
            if (!accept(')'))
                fail("expected ')'");
            return inner;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            const long n = number();
            return (n & 1) ? PolyF2::one(ring_) : PolyF2::zero(ring_);
        }
        if (c == 'x' || c == 't') {
            ++pos_;
            const std::size_t start = pos_;
            const long idx = number();
            if (idx < 1)
                fail("generator indices start at 1");
            const int family_size = c == 'x' ? ring_.x_count() : ring_.t_count();
            if (idx > family_size) {
                pos_ = start;
                fail(std::string("generator ") + c + std::to_string(idx) + " not in ring");
            }
            const int v = (c == 'x' ? 0 : ring_.x_count()) + static_cast<int>(idx) - 1;
            return PolyF2::var(ring_, v);
        }
        fail(std::string("unexpected '") + c + "'");
    }

    std::string_view text_;
    const RingDescriptor& ring_;
    std::size_t pos_ = 0;
};

}  // namespace

PolyF2 parse_poly(std::string_view text, const RingDescriptor& ring)
{
    return PolyParser(text, ring).parse();
}

}  // namespace rpfree
