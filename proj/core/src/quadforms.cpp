#include "rpfree/quadforms.hpp"

#include <algorithm>
#include <bit>
#include <stdexcept>

namespace rpfree {

namespace {

bool parity(std::uint32_t v) { return std::popcount(v) & 1; }

std::uint32_t low_mask(int r) { return r >= 32 ? ~std::uint32_t{0} : (std::uint32_t{1} << r) - 1; }

}  // namespace

QuadraticForm::QuadraticForm(int r) : r_(r)
{
    if (r < 0 || r > kMaxFamilySize)
        throw std::invalid_argument("QuadraticForm: rank must lie in 0..16");
}

bool QuadraticForm::cross(int j, int k) const
{
    if (j > k)
        std::swap(j, k);
    return (upper_[static_cast<std::size_t>(j)] >> k) & 1U;
}

void QuadraticForm::set_diag(int j, bool v)
{
    if (j < 0 || j >= r_)
        throw std::out_of_range("QuadraticForm::set_diag");
    const std::uint32_t bit = std::uint32_t{1} << j;
    diag_ = v ? (diag_ | bit) : (diag_ & ~bit);
}

void QuadraticForm::set_cross(int j, int k, bool v)
{
    if (j > k)
        std::swap(j, k);
    if (j < 0 || k >= r_ || j == k)
        throw std::out_of_range("QuadraticForm::set_cross");
    auto& row = upper_[static_cast<std::size_t>(j)];
    const std::uint32_t bit = std::uint32_t{1} << k;
    row = v ? (row | bit) : (row & ~bit);
}

bool QuadraticForm::has_cross_terms() const
{
    return std::any_of(upper_.begin(), upper_.end(), [](std::uint32_t w) { return w != 0; });
}

bool QuadraticForm::evaluate(std::uint32_t point) const
{
    bool acc = parity(diag_ & point);
    for (int j = 0; j < r_; ++j)
        if ((point >> j) & 1U)
            acc ^= parity(upper_[static_cast<std::size_t>(j)] & point);
    return acc;
}

QuadraticForm QuadraticForm::from_poly(const PolyF2& p)
{
    const auto& ring = p.ring();
    if (ring.t_count() != 0)
        throw std::invalid_argument("quadratic forms live in F2[x_1..x_r]");
    QuadraticForm q(ring.x_count());
    for (const auto& m : p.terms()) {
        if (m.degree() != 2)
            throw std::invalid_argument("not a homogeneous quadratic: " + rpfree::to_string(p));
        std::vector<int> vars;
        for (int v = 0; v < ring.x_count(); ++v)
            for (int e = 0; e < m.exp[static_cast<std::size_t>(v)]; ++e)
                vars.push_back(v);
        if (vars[0] == vars[1])
            q.set_diag(vars[0]);
        else
            q.set_cross(vars[0], vars[1]);
    }
    return q;
}

QuadraticForm QuadraticForm::product(const LinearForm& a, const LinearForm& b)
{
    if (a.r() != b.r())
        throw RingMismatch();
    QuadraticForm q(a.r());
    q.diag_ = a.coeffs() & b.coeffs();
    for (int j = 0; j < q.r_; ++j) {
        // coefficient of x_j x_k (k > j) is a_j b_k + a_k b_j
        std::uint32_t row = 0;
        if (a.coeff(j))
            row ^= b.coeffs();
        if (b.coeff(j))
            row ^= a.coeffs();
        q.upper_[static_cast<std::size_t>(j)] = row & ~low_mask(j + 1);
    }
    return q;
}

std::uint64_t QuadraticForm::code_count(int r)
{
    if (r < 0 || r > 10)
        throw std::invalid_argument("QuadraticForm codes are defined for r <= 10");
    return std::uint64_t{1} << (r * (r + 1) / 2);
}

QuadraticForm QuadraticForm::from_code(int r, std::uint64_t code)
{
    if (code >= code_count(r))
        throw std::out_of_range("QuadraticForm::from_code");
    QuadraticForm q(r);
    int bit = 0;
    for (int j = 0; j < r; ++j, ++bit)
        if ((code >> bit) & 1U)
            q.set_diag(j);
    for (int j = 0; j < r; ++j)
        for (int k = j + 1; k < r; ++k, ++bit)
            if ((code >> bit) & 1U)
                q.set_cross(j, k);
    return q;
}

std::uint64_t QuadraticForm::code() const
{
    code_count(r_);
    std::uint64_t c = 0;
    int bit = 0;
    for (int j = 0; j < r_; ++j, ++bit)
        if (diag(j))
            c |= std::uint64_t{1} << bit;
    for (int j = 0; j < r_; ++j)
        for (int k = j + 1; k < r_; ++k, ++bit)
            if (cross(j, k))
                c |= std::uint64_t{1} << bit;
    return c;
}

PolyF2 QuadraticForm::to_poly() const
{
    const auto ring = RingDescriptor::free_x(r_);
    std::vector<Monomial> terms;
    for (int j = 0; j < r_; ++j) {
        if (diag(j))
            terms.push_back(Monomial::var(j, 2));
        for (int k = j + 1; k < r_; ++k)
            if (cross(j, k))
                terms.push_back(Monomial::var(j) * Monomial::var(k));
    }
    return PolyF2(ring, std::move(terms));
}

QuadraticForm QuadraticForm::operator+(const QuadraticForm& other) const
{
    if (other.r_ != r_)
        throw RingMismatch();
    QuadraticForm q(r_);
    q.diag_ = diag_ ^ other.diag_;
    for (std::size_t j = 0; j < upper_.size(); ++j)
        q.upper_[j] = upper_[j] ^ other.upper_[j];
    return q;
}

Subspace Subspace::span(int ambient, std::span<const std::uint32_t> vectors)
{
    if (ambient < 0 || ambient > kMaxFamilySize)
        throw std::invalid_argument("Subspace: ambient dimension must lie in 0..16");
    Subspace s;
    s.ambient_ = ambient;
    for (std::uint32_t v : vectors) {
        if (v & ~low_mask(ambient))
            throw std::invalid_argument("Subspace: vector outside ambient space");
        for (std::uint32_t row : s.basis_)
            if (v & (row & -row))
                v ^= row;
        if (!v)
            continue;
        const std::uint32_t pivot = v & -v;
        for (auto& row : s.basis_)
            if (row & pivot)
                row ^= v;
        s.basis_.push_back(v);
    }
    std::sort(s.basis_.begin(), s.basis_.end(), [](std::uint32_t a, std::uint32_t b) {
        return std::countr_zero(a) < std::countr_zero(b);
    });
    return s;
}

Subspace Subspace::full(int ambient)
{
    std::vector<std::uint32_t> e;
    for (int j = 0; j < ambient; ++j)
        e.push_back(std::uint32_t{1} << j);
    return span(ambient, e);
}

bool Subspace::contains(std::uint32_t v) const
{
    for (std::uint32_t row : basis_)
        if (v & (row & -row))
            v ^= row;
    return v == 0;
}

std::uint32_t Subspace::point(std::uint32_t coords) const
{
    std::uint32_t v = 0;
    for (std::size_t j = 0; j < basis_.size(); ++j)
        if ((coords >> j) & 1U)
            v ^= basis_[j];
    return v;
}

Subspace Subspace::annihilator() const
{
    std::uint32_t pivots = 0;
    for (std::uint32_t row : basis_)
        pivots |= row & -row;
    std::vector<std::uint32_t> out;
    for (int f = 0; f < ambient_; ++f) {
        const std::uint32_t fbit = std::uint32_t{1} << f;
        if (pivots & fbit)
            continue;
        std::uint32_t w = fbit;
        for (std::uint32_t row : basis_)
            if (row & fbit)
                w |= row & -row;
        out.push_back(w);
    }
    return span(ambient_, out);
}

std::string vector_to_string(std::uint32_t v, int dim)
{
    std::string s = "(";
    for (int j = 0; j < dim; ++j) {
        if (j)
            s += ',';
        s += ((v >> j) & 1U) ? '1' : '0';
    }
    return s + ")";
}

std::optional<LinearForm> is_square(const QuadraticForm& alpha)
{
    if (alpha.has_cross_terms())
        return std::nullopt;
    return LinearForm(alpha.r(), alpha.diag_mask());
}

std::vector<FactorPair> factor_product(const QuadraticForm& alpha)
{
    const int r = alpha.r();
    const std::uint32_t n = std::uint32_t{1} << r;
    std::vector<FactorPair> out;
    if (alpha.is_zero())
        for (std::uint32_t m = 0; m < n; ++m)
            out.push_back({LinearForm(r, 0), LinearForm(r, m)});
    // For l != 0 with lowest support index p, l*m = alpha pins down m:
    // m_p = a_p and m_k = a_pk + l_k m_p.
    for (std::uint32_t l = 1; l < n; ++l) {
        const int p = std::countr_zero(l);
        const bool mp = alpha.diag(p);
        std::uint32_t m = mp ? (std::uint32_t{1} << p) : 0;
        for (int k = 0; k < r; ++k) {
            if (k == p)
                continue;
            const bool lk = (l >> k) & 1U;
            if (alpha.cross(p, k) ^ (lk && mp))
                m |= std::uint32_t{1} << k;
        }
        if (m < l)
            continue;
        if (QuadraticForm::product(LinearForm(r, l), LinearForm(r, m)) == alpha)
            out.push_back({LinearForm(r, l), LinearForm(r, m)});
    }
    return out;
}

std::optional<std::uint32_t> common_zero(std::span<const QuadraticForm> forms,
                                         const Subspace& domain)
{
    for (const auto& f : forms)
        if (f.r() != domain.ambient())
            throw std::invalid_argument("common_zero: form rank differs from domain");
    const std::uint32_t n = std::uint32_t{1} << domain.dim();
    for (std::uint32_t c = 1; c < n; ++c) {
        const std::uint32_t pt = domain.point(c);
        if (std::none_of(forms.begin(), forms.end(),
                         [pt](const QuadraticForm& f) { return f.evaluate(pt); }))
            return pt;
    }
    return std::nullopt;
}

std::optional<std::uint32_t> common_zero(std::span<const QuadraticForm> forms, int r)
{
    return common_zero(forms, Subspace::full(r));
}

std::vector<LinearForm> solve_bockstein_factor(const QuadraticForm& alpha)
{
    const int r = alpha.r();
    const PolyF2 a = alpha.to_poly();
    const PolyF2 target = sq1(a);
    std::vector<LinearForm> out;
    for (std::uint32_t g = 0; g < (std::uint32_t{1} << r); ++g) {
        const LinearForm gamma(r, g);
        if (gamma.to_poly() * a == target)
            out.push_back(gamma);
    }
    return out;
}

std::optional<LinearForm> eta_factor(const QuadraticForm& alpha, const LinearForm& gamma)
{
    const int r = alpha.r();
    if (gamma.r() != r)
        throw RingMismatch();
    for (std::uint32_t e = 0; e < (std::uint32_t{1} << r); ++e) {
        const LinearForm eta(r, e);
        if (QuadraticForm::product(eta, eta + gamma) == alpha)
            return eta;
    }
    return std::nullopt;
}

Subspace kernel(const LinearForm& l)
{
    const std::uint32_t v = l.coeffs();
    return Subspace::span(l.r(), std::span<const std::uint32_t>(&v, 1)).annihilator();
}

Subspace intersect(std::span<const Subspace> subspaces)
{
    if (subspaces.empty())
        throw std::invalid_argument("intersect: empty list");
    const int r = subspaces.front().ambient();
    std::vector<std::uint32_t> equations;
    for (const auto& s : subspaces) {
        if (s.ambient() != r)
            throw std::invalid_argument("intersect: ambient dimension mismatch");
        const auto ann = s.annihilator();
        equations.insert(equations.end(), ann.basis().begin(), ann.basis().end());
    }
    return Subspace::span(r, equations).annihilator();
}

QuadraticForm restrict_form(const QuadraticForm& alpha, const Subspace& h)
{
    if (alpha.r() != h.ambient())
        throw std::invalid_argument("restrict_form: form rank differs from ambient dimension");
    const auto& b = h.basis();
    QuadraticForm q(h.dim());
    // q(e_j) = alpha(b_j); the cross coefficient is the polar form alpha(b_j + b_k) +
    // alpha(b_j) + alpha(b_k).
    for (int j = 0; j < h.dim(); ++j) {
        const bool qj = alpha.evaluate(b[static_cast<std::size_t>(j)]);
        q.set_diag(j, qj);
        for (int k = j + 1; k < h.dim(); ++k) {
            const auto bj = b[static_cast<std::size_t>(j)], bk = b[static_cast<std::size_t>(k)];
            const bool polar = alpha.evaluate(bj ^ bk) ^ qj ^ alpha.evaluate(bk);
            q.set_cross(j, k, polar);
        }
    }
    return q;
}

}  // namespace rpfree
