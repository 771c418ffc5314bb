#include "rpfree/homalg.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <sstream>

namespace rpfree {

std::int64_t checked_add(std::int64_t a, std::int64_t b)
{
    std::int64_t r;
    if (__builtin_add_overflow(a, b, &r))
        throw std::overflow_error("int64 overflow in addition");
    return r;
}

std::int64_t checked_mul(std::int64_t a, std::int64_t b)
{
    std::int64_t r;
    if (__builtin_mul_overflow(a, b, &r))
        throw std::overflow_error("int64 overflow in multiplication");
    return r;
}

std::int64_t reduce_mod(std::int64_t a, std::int64_t m)
{
    if (m == 0)
        return a;
    std::int64_t r = a % m;
    return r < 0 ? r + m : r;
}

namespace {

std::int64_t checked_abs(std::int64_t a)
{
    if (a == std::numeric_limits<std::int64_t>::min())
        throw std::overflow_error("int64 overflow in abs");
    return a < 0 ? -a : a;
}

// floor division that keeps remainders in [0, |b|)
std::int64_t floor_div(std::int64_t a, std::int64_t b)
{
    std::int64_t q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0)))
        --q;
    return q;
}

}  // namespace

// ---------------------------------------------------------------------------
// IntMatrix

IntMatrix::IntMatrix(std::size_t rows, std::size_t cols, std::vector<std::int64_t> data)
    : rows_(rows), cols_(cols), data_(std::move(data))
{
    if (data_.size() != rows * cols)
        throw std::invalid_argument("IntMatrix: data size does not match shape");
}

IntMatrix IntMatrix::identity(std::size_t n)
{
    return scalar(n, 1);
}

IntMatrix IntMatrix::scalar(std::size_t n, std::int64_t s)
{
    IntMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i)
        m(i, i) = s;
    return m;
}

IntMatrix IntMatrix::operator*(const IntMatrix& rhs) const
{
    if (cols_ != rhs.rows_)
        throw std::invalid_argument("IntMatrix: shape mismatch in product");
    IntMatrix out(rows_, rhs.cols_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t k = 0; k < cols_; ++k) {
            const std::int64_t a = (*this)(i, k);
            if (a == 0)
                continue;
            for (std::size_t j = 0; j < rhs.cols_; ++j)
                if (rhs(k, j) != 0)
                    out(i, j) = checked_add(out(i, j), checked_mul(a, rhs(k, j)));
        }
    return out;
}

std::vector<std::int64_t> IntMatrix::apply(const std::vector<std::int64_t>& v) const
{
    if (v.size() != cols_)
        throw std::invalid_argument("IntMatrix: vector length mismatch");
    std::vector<std::int64_t> out(rows_, 0);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t k = 0; k < cols_; ++k)
            if ((*this)(i, k) != 0 && v[k] != 0)
                out[i] = checked_add(out[i], checked_mul((*this)(i, k), v[k]));
    return out;
}

IntMatrix IntMatrix::transpose() const
{
    IntMatrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j)
            t(j, i) = (*this)(i, j);
    return t;
}

IntMatrix IntMatrix::hcat(const IntMatrix& rhs) const
{
    if (rows_ != rhs.rows_)
        throw std::invalid_argument("IntMatrix: row mismatch in hcat");
    IntMatrix out(rows_, cols_ + rhs.cols_);
    for (std::size_t i = 0; i < rows_; ++i) {
        for (std::size_t j = 0; j < cols_; ++j)
            out(i, j) = (*this)(i, j);
        for (std::size_t j = 0; j < rhs.cols_; ++j)
            out(i, cols_ + j) = rhs(i, j);
    }
    return out;
}

bool IntMatrix::is_zero() const
{
    return std::all_of(data_.begin(), data_.end(), [](std::int64_t a) { return a == 0; });
}

bool IntMatrix::is_zero_mod(std::int64_t m) const
{
    return std::all_of(data_.begin(), data_.end(),
                       [m](std::int64_t a) { return reduce_mod(a, m) == 0; });
}

// ---------------------------------------------------------------------------
// Smith normal form

namespace {

struct SnfWork {
    IntMatrix a, u, v, ui, vi;

    // row_i += q * row_j
    void add_row(std::size_t i, std::size_t j, std::int64_t q)
    {
        if (q == 0)
            return;
        for (std::size_t c = 0; c < a.cols(); ++c)
            a(i, c) = checked_add(a(i, c), checked_mul(q, a(j, c)));
        for (std::size_t c = 0; c < u.cols(); ++c)
            u(i, c) = checked_add(u(i, c), checked_mul(q, u(j, c)));
        // inverse: col_j -= q * col_i
        for (std::size_t r = 0; r < ui.rows(); ++r)
            ui(r, j) = checked_add(ui(r, j), -checked_mul(q, ui(r, i)));
    }
    // col_i += q * col_j
    void add_col(std::size_t i, std::size_t j, std::int64_t q)
    {
        if (q == 0)
            return;
        for (std::size_t r = 0; r < a.rows(); ++r)
            a(r, i) = checked_add(a(r, i), checked_mul(q, a(r, j)));
        for (std::size_t r = 0; r < v.rows(); ++r)
            v(r, i) = checked_add(v(r, i), checked_mul(q, v(r, j)));
        // inverse: row_j -= q * row_i
        for (std::size_t c = 0; c < vi.cols(); ++c)
            vi(j, c) = checked_add(vi(j, c), -checked_mul(q, vi(i, c)));
    }
    void swap_rows(std::size_t i, std::size_t j)
    {
        if (i == j)
            return;
        for (std::size_t c = 0; c < a.cols(); ++c)
            std::swap(a(i, c), a(j, c));
        for (std::size_t c = 0; c < u.cols(); ++c)
            std::swap(u(i, c), u(j, c));
        for (std::size_t r = 0; r < ui.rows(); ++r)
            std::swap(ui(r, i), ui(r, j));
    }
    void swap_cols(std::size_t i, std::size_t j)
    {
        if (i == j)
            return;
        for (std::size_t r = 0; r < a.rows(); ++r)
            std::swap(a(r, i), a(r, j));
        for (std::size_t r = 0; r < v.rows(); ++r)
            std::swap(v(r, i), v(r, j));
        for (std::size_t c = 0; c < vi.cols(); ++c)
            std::swap(vi(i, c), vi(j, c));
    }
    void negate_row(std::size_t i)
    {
        for (std::size_t c = 0; c < a.cols(); ++c)
            a(i, c) = -a(i, c);
        for (std::size_t c = 0; c < u.cols(); ++c)
            u(i, c) = -u(i, c);
        for (std::size_t r = 0; r < ui.rows(); ++r)
            ui(r, i) = -ui(r, i);
    }
};

}  // namespace

std::vector<std::int64_t> SmithForm::diagonal() const
{
    std::vector<std::int64_t> d;
    for (std::size_t i = 0; i < std::min(s.rows(), s.cols()); ++i)
        d.push_back(s(i, i));
    return d;
}

SmithForm snf(const IntMatrix& m)
{
    const std::size_t rows = m.rows();
    const std::size_t cols = m.cols();
    SnfWork w{m, IntMatrix::identity(rows), IntMatrix::identity(cols), IntMatrix::identity(rows),
              IntMatrix::identity(cols)};
    std::size_t t = 0;
    for (; t < std::min(rows, cols); ++t) {
        // pivot of minimal absolute value in the trailing block
        bool restart = true;
        while (restart) {
            restart = false;
            std::size_t pr = rows, pc = cols;
            std::int64_t best = 0;
            for (std::size_t i = t; i < rows; ++i)
                for (std::size_t j = t; j < cols; ++j)
                    if (w.a(i, j) != 0) {
                        const std::int64_t av = checked_abs(w.a(i, j));
                        if (best == 0 || av < best) {
                            best = av;
                            pr = i;
                            pc = j;
                        }
                    }
            if (best == 0)
                goto done;
            w.swap_rows(t, pr);
            w.swap_cols(t, pc);
            const std::int64_t p = w.a(t, t);
            bool dirty = false;
            for (std::size_t i = t + 1; i < rows; ++i)
                if (w.a(i, t) != 0) {
                    w.add_row(i, t, -floor_div(w.a(i, t), p));
                    dirty = dirty || w.a(i, t) != 0;
                }
            for (std::size_t j = t + 1; j < cols; ++j)
                if (w.a(t, j) != 0) {
                    w.add_col(j, t, -floor_div(w.a(t, j), p));
                    dirty = dirty || w.a(t, j) != 0;
                }
            if (dirty) {
                restart = true;
                continue;
            }
            // divisibility of the remaining block
            for (std::size_t i = t + 1; i < rows && !restart; ++i)
                for (std::size_t j = t + 1; j < cols; ++j)
                    if (w.a(i, j) % p != 0) {
                        w.add_row(t, i, 1);
                        restart = true;
                        break;
                    }
        }
        if (w.a(t, t) < 0)
            w.negate_row(t);
    }
done:
    SmithForm out;
    out.rank = t;
    out.s = std::move(w.a);
    out.u = std::move(w.u);
    out.v = std::move(w.v);
    out.u_inv = std::move(w.ui);
    out.v_inv = std::move(w.vi);
    return out;
}

std::int64_t determinant(const IntMatrix& m)
{
    if (m.rows() != m.cols())
        throw std::invalid_argument("determinant of a non-square matrix");
    const std::size_t n = m.rows();
    if (n == 0)
        return 1;
    IntMatrix a = m;
    std::int64_t sign = 1;
    std::int64_t prev = 1;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (a(k, k) == 0) {
            std::size_t r = k + 1;
            while (r < n && a(r, k) == 0)
                ++r;
            if (r == n)
                return 0;
            for (std::size_t c = 0; c < n; ++c)
                std::swap(a(k, c), a(r, c));
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < n; ++i)
            for (std::size_t j = k + 1; j < n; ++j) {
                const std::int64_t num =
                    checked_add(checked_mul(a(i, j), a(k, k)), -checked_mul(a(i, k), a(k, j)));
                a(i, j) = num / prev;
            }
        prev = a(k, k);
    }
    return sign * a(n - 1, n - 1);
}

std::optional<std::vector<std::int64_t>> solve_integer(const IntMatrix& m,
                                                       const std::vector<std::int64_t>& b)
{
    if (b.size() != m.rows())
        throw std::invalid_argument("solve_integer: right-hand side length mismatch");
    const SmithForm f = snf(m);
    const std::vector<std::int64_t> ub = f.u.apply(b);
    std::vector<std::int64_t> y(m.cols(), 0);
    for (std::size_t i = 0; i < ub.size(); ++i) {
        if (i < f.rank) {
            const std::int64_t s = f.s(i, i);
            if (ub[i] % s != 0)
                return std::nullopt;
            y[i] = ub[i] / s;
        } else if (ub[i] != 0) {
            return std::nullopt;
        }
    }
    return f.v.apply(y);
}

std::optional<std::vector<std::int64_t>> solve_mod(const IntMatrix& m,
                                                   const std::vector<std::int64_t>& b,
                                                   std::int64_t modulus)
{
    if (modulus == 0)
        return solve_integer(m, b);
    auto sol = solve_integer(m.hcat(IntMatrix::scalar(m.rows(), modulus)), b);
    if (!sol)
        return std::nullopt;
    std::vector<std::int64_t> x(sol->begin(), sol->begin() + static_cast<std::ptrdiff_t>(m.cols()));
    for (auto& e : x)
        e = reduce_mod(e, modulus);
    return x;
}

IntMatrix integer_kernel(const IntMatrix& m)
{
    const SmithForm f = snf(m);
    const std::size_t k = m.cols() - f.rank;
    IntMatrix out(m.cols(), k);
    for (std::size_t j = 0; j < k; ++j)
        for (std::size_t i = 0; i < m.cols(); ++i)
            out(i, j) = f.v(i, f.rank + j);
    return out;
}

// ---------------------------------------------------------------------------
// groups and complexes

std::int64_t FGAbelianGroup::two_torsion_rank() const
{
    std::int64_t n = 0;
    for (auto t : torsion)
        if (t == 2)
            ++n;
    return n;
}

std::string FGAbelianGroup::to_string() const
{
    if (is_zero())
        return "0";
    std::vector<std::string> parts;
    if (free_rank == 1)
        parts.emplace_back("Z");
    else if (free_rank > 1)
        parts.push_back("Z^" + std::to_string(free_rank));
    // group equal torsion coefficients
    for (std::size_t i = 0; i < torsion.size();) {
        std::size_t j = i;
        while (j < torsion.size() && torsion[j] == torsion[i])
            ++j;
        std::string s = "Z/" + std::to_string(torsion[i]);
        if (j - i > 1)
            s = "(" + s + ")^" + std::to_string(j - i);
        parts.push_back(s);
        i = j;
    }
    std::string out;
    for (std::size_t i = 0; i < parts.size(); ++i)
        out += (i ? " + " : "") + parts[i];
    return out;
}

Coefficients Coefficients::mod(std::int64_t m)
{
    if (m < 2)
        throw std::invalid_argument("coefficient modulus must be at least 2");
    return {m};
}

CochainComplexZ::CochainComplexZ(int lo, std::vector<std::size_t> ranks,
                                 std::vector<IntMatrix> differentials)
    : lo_(lo), ranks_(std::move(ranks)), d_(std::move(differentials))
{
    if (ranks_.empty())
        throw std::invalid_argument("cochain complex needs at least one degree");
    if (d_.size() + 1 != ranks_.size())
        throw std::invalid_argument("cochain complex needs one differential between adjacent degrees");
    for (std::size_t i = 0; i < d_.size(); ++i)
        if (d_[i].rows() != ranks_[i + 1] || d_[i].cols() != ranks_[i])
            throw std::invalid_argument("differential d^" + std::to_string(lo_ + static_cast<int>(i)) +
                                        " has the wrong shape");
}

std::size_t CochainComplexZ::rank(int n) const
{
    return in_range(n) ? ranks_[static_cast<std::size_t>(n - lo_)] : 0;
}

IntMatrix CochainComplexZ::d(int n) const
{
    if (n >= lo_ && n < hi())
        return d_[static_cast<std::size_t>(n - lo_)];
    return IntMatrix(rank(n + 1), rank(n));
}

bool CochainComplexZ::is_complex(std::int64_t modulus) const
{
    for (int n = lo_; n + 1 < hi(); ++n)
        if (!(d(n + 1) * d(n)).is_zero_mod(modulus))
            return false;
    return true;
}

// ---------------------------------------------------------------------------
// cohomology

CohomologyGroup::CohomologyGroup(const CochainComplexZ& c, int n, Coefficients coeff)
    : d_(c.d(n)), modulus_(coeff.modulus)
{
    if (modulus_ < 0 || modulus_ == 1)
        throw std::invalid_argument("coefficient modulus must be 0 or at least 2");
    const std::size_t cn = c.rank(n);
    const std::size_t cn1 = c.rank(n + 1);
    const IntMatrix prev = c.d(n - 1);  // C^{n-1} -> C^n

    if (modulus_ == 0) {
        basis_ = integer_kernel(d_);
    } else {
        const IntMatrix k = integer_kernel(d_.hcat(IntMatrix::scalar(cn1, modulus_)));
        basis_ = IntMatrix(cn, k.cols());
        for (std::size_t i = 0; i < cn; ++i)
            for (std::size_t j = 0; j < k.cols(); ++j)
                basis_(i, j) = k(i, j);
        // the kernel of [d | mI] projects onto a generating set; trim to a basis
        const SmithForm f = snf(basis_);
        IntMatrix trimmed(cn, f.rank);
        const IntMatrix bv = basis_ * f.v;
        for (std::size_t i = 0; i < cn; ++i)
            for (std::size_t j = 0; j < f.rank; ++j)
                trimmed(i, j) = bv(i, j);
        basis_ = std::move(trimmed);
    }
    const std::size_t t = basis_.cols();

    // relation generators in cochain coordinates: coboundaries (and m * e_i)
    IntMatrix gens = modulus_ == 0 ? prev : prev.hcat(IntMatrix::scalar(cn, modulus_));
    IntMatrix rel(t, gens.cols());
    for (std::size_t j = 0; j < gens.cols(); ++j) {
        std::vector<std::int64_t> col(cn);
        for (std::size_t i = 0; i < cn; ++i)
            col[i] = gens(i, j);
        const auto y = solve_integer(basis_, col);
        if (!y)
            throw std::logic_error("coboundary outside the cocycle lattice");
        for (std::size_t i = 0; i < t; ++i)
            rel(i, j) = (*y)[i];
    }
    relations_ = snf(rel);

    std::vector<std::int64_t> tors;
    std::int64_t free_rank = 0;
    for (std::size_t i = 0; i < t; ++i) {
        const std::int64_t s = i < relations_.rank ? relations_.s(i, i) : 0;
        if (s == 1)
            continue;
        kept_.push_back(i);
        orders_.push_back(s);
        if (s == 0)
            ++free_rank;
        else
            tors.push_back(s);
    }
    gen_count_ = kept_.size();
    group_.free_rank = free_rank;
    group_.torsion = std::move(tors);
}

bool CohomologyGroup::is_cocycle(const std::vector<std::int64_t>& x) const
{
    if (x.size() != d_.cols())
        return false;
    const auto dx = d_.apply(x);
    return std::all_of(dx.begin(), dx.end(),
                       [this](std::int64_t v) { return reduce_mod(v, modulus_) == 0; });
}

std::vector<std::int64_t> CohomologyGroup::coordinates(const std::vector<std::int64_t>& cocycle) const
{
    if (!is_cocycle(cocycle))
        throw std::invalid_argument("coordinates: not a cocycle");
    const auto y = solve_integer(basis_, cocycle);
    if (!y)
        throw std::logic_error("cocycle outside the cocycle lattice");
    const auto w = relations_.u.apply(*y);
    std::vector<std::int64_t> coords;
    coords.reserve(kept_.size());
    for (std::size_t k = 0; k < kept_.size(); ++k)
        coords.push_back(reduce_mod(w[kept_[k]], orders_[k]));
    return coords;
}

std::vector<std::int64_t> CohomologyGroup::generator(std::size_t j) const
{
    const std::size_t t = basis_.cols();
    std::vector<std::int64_t> e(t, 0);
    for (std::size_t i = 0; i < t; ++i)
        e[i] = relations_.u_inv(i, kept_.at(j));
    auto x = basis_.apply(e);
    if (modulus_ != 0)
        for (auto& v : x)
            v = reduce_mod(v, modulus_);
    return x;
}

std::int64_t CohomologyGroup::order(const std::vector<std::int64_t>& coords) const
{
    if (coords.size() != kept_.size())
        throw std::invalid_argument("order: coordinate length mismatch");
    std::int64_t ord = 1;
    for (std::size_t k = 0; k < coords.size(); ++k) {
        if (orders_[k] == 0) {
            if (coords[k] != 0)
                return 0;
            continue;
        }
        const std::int64_t c = reduce_mod(coords[k], orders_[k]);
        const std::int64_t o = orders_[k] / std::gcd(c, orders_[k]);
        ord = std::lcm(ord, o);
    }
    return ord;
}

bool CohomologyGroup::is_zero(const std::vector<std::int64_t>& coords) const
{
    return order(coords) == 1;
}

FGAbelianGroup cohomology(const CochainComplexZ& c, int n, Coefficients coeff)
{
    return CohomologyGroup(c, n, coeff).group();
}

CochainComplexZ point_complex()
{
    return CochainComplexZ(0, {1}, {});
}

CochainComplexZ rp_complex(int n)
{
    if (n < 0)
        throw std::invalid_argument("rp_complex: negative dimension");
    std::vector<std::size_t> ranks(static_cast<std::size_t>(n) + 1, 1);
    std::vector<IntMatrix> d;
    for (int i = 0; i < n; ++i)
        d.emplace_back(1, 1, std::vector<std::int64_t>{i % 2 == 1 ? 2 : 0});
    return CochainComplexZ(0, std::move(ranks), std::move(d));
}

CochainComplexZ tensor(const CochainComplexZ& a, const CochainComplexZ& b)
{
    const int lo = a.lo() + b.lo();
    const int hi = a.hi() + b.hi();
    // offsets[n][p - a.lo()] = index of the first (p, n - p) basis element in degree n
    auto block_offset = [&](int n, int p) {
        std::size_t off = 0;
        for (int q = a.lo(); q < p; ++q)
            off += a.rank(q) * b.rank(n - q);
        return off;
    };
    std::vector<std::size_t> ranks;
    for (int n = lo; n <= hi; ++n)
        ranks.push_back(block_offset(n, a.hi() + 1));
    std::vector<IntMatrix> ds;
    for (int n = lo; n < hi; ++n) {
        IntMatrix d(ranks[static_cast<std::size_t>(n + 1 - lo)], ranks[static_cast<std::size_t>(n - lo)]);
        for (int p = a.lo(); p <= a.hi(); ++p) {
            const int q = n - p;
            if (!b.in_range(q))
                continue;
            const std::size_t src = block_offset(n, p);
            const std::size_t ra = a.rank(p), rb = b.rank(q);
            const std::int64_t sign = (p % 2 == 0) ? 1 : -1;
            // d(a x b) = da x b + (-1)^p a x db
            if (a.rank(p + 1) > 0) {
                const IntMatrix da = a.d(p);
                const std::size_t dst = block_offset(n + 1, p + 1);
                for (std::size_t i = 0; i < ra; ++i)
                    for (std::size_t j = 0; j < rb; ++j)
                        for (std::size_t i2 = 0; i2 < a.rank(p + 1); ++i2)
                            if (da(i2, i) != 0)
                                d(dst + i2 * rb + j, src + i * rb + j) += da(i2, i);
            }
            if (b.rank(q + 1) > 0) {
                const IntMatrix db = b.d(q);
                const std::size_t dst = block_offset(n + 1, p);
                const std::size_t rb1 = b.rank(q + 1);
                for (std::size_t i = 0; i < ra; ++i)
                    for (std::size_t j = 0; j < rb; ++j)
                        for (std::size_t j2 = 0; j2 < rb1; ++j2)
                            if (db(j2, j) != 0)
                                d(dst + i * rb1 + j2, src + i * rb + j) += sign * db(j2, j);
            }
        }
        ds.push_back(std::move(d));
    }
    return CochainComplexZ(lo, std::move(ranks), std::move(ds));
}

CochainComplexZ rp_product_complex(const std::vector<int>& dims)
{
    CochainComplexZ c = point_complex();
    for (int n : dims)
        c = tensor(c, rp_complex(n));
    return c;
}

GroupElement bockstein0(const CochainComplexZ& c, const std::vector<std::uint8_t>& x, int n)
{
    if (x.size() != c.rank(n))
        throw std::invalid_argument("bockstein0: cochain length mismatch");
    std::vector<std::int64_t> lift(x.begin(), x.end());
    for (auto v : lift)
        if (v != 0 && v != 1)
            throw std::invalid_argument("bockstein0: entries must be 0 or 1");
    std::vector<std::int64_t> dx = c.d(n).apply(lift);
    for (auto& v : dx) {
        if (v % 2 != 0)
            throw std::invalid_argument("bockstein0: not a mod-2 cocycle");
        v /= 2;
    }
    CohomologyGroup h(c, n + 1);
    GroupElement out;
    out.group = h.group();
    out.coords = h.coordinates(dx);
    out.order = h.order(out.coords);
    return out;
}

// ---------------------------------------------------------------------------
// 3x3 diagrams

namespace {

std::vector<std::int64_t> reduced(std::vector<std::int64_t> v, std::int64_t m)
{
    for (auto& e : v)
        e = reduce_mod(e, m);
    return v;
}

std::string grid_name(int row, int col)
{
    return "C[" + std::to_string(row) + "][" + std::to_string(col) + "]";
}

// f : (Z/ms)^c -> (Z/mt)^c' is well defined and commutes with d
void check_chain_map(const CoefComplex& s, const CoefComplex& t, const ChainMap& f,
                     const std::string& name)
{
    for (int n = s.complex.lo(); n <= s.complex.hi(); ++n) {
        const IntMatrix& m = f.at(n);
        if (m.rows() != t.complex.rank(n) || m.cols() != s.complex.rank(n))
            throw InvalidDiagram(name + ": wrong shape in degree " + std::to_string(n));
        if (s.modulus != 0 && !IntMatrix(m * IntMatrix::scalar(m.cols(), s.modulus)).is_zero_mod(t.modulus))
            throw InvalidDiagram(name + ": not well defined on coefficients in degree " + std::to_string(n));
        if (n < s.complex.hi()) {
            const IntMatrix lhs = f.at(n + 1) * s.complex.d(n);
            const IntMatrix rhs = t.complex.d(n) * m;
            IntMatrix diff(lhs.rows(), lhs.cols());
            for (std::size_t i = 0; i < lhs.rows(); ++i)
                for (std::size_t j = 0; j < lhs.cols(); ++j)
                    diff(i, j) = lhs(i, j) - rhs(i, j);
            if (!diff.is_zero_mod(t.modulus))
                throw InvalidDiagram(name + ": does not commute with d in degree " + std::to_string(n));
        }
    }
}

// 0 -> a -(i)-> b -(p)-> c -> 0 exact in degree n
void check_short_exact(const CoefComplex& a, const CoefComplex& b, const CoefComplex& c,
                       const ChainMap& i, const ChainMap& p, const std::string& name)
{
    for (int n = b.complex.lo(); n <= b.complex.hi(); ++n) {
        const IntMatrix& im = i.at(n);
        const IntMatrix& pm = p.at(n);
        const std::string where = name + " in degree " + std::to_string(n);
        // injective: {x : i x = 0 mod m_b} is contained in m_a Z^c
        if (im.cols() > 0) {
            const IntMatrix k = b.modulus == 0 ? integer_kernel(im)
                                               : integer_kernel(im.hcat(IntMatrix::scalar(im.rows(), b.modulus)));
            for (std::size_t j = 0; j < k.cols(); ++j)
                for (std::size_t r = 0; r < im.cols(); ++r)
                    if (reduce_mod(k(r, j), a.modulus) != 0)
                        throw InvalidDiagram(where + ": first map is not injective");
        }
        // surjective: every unit vector has a preimage
        for (std::size_t r = 0; r < pm.rows(); ++r) {
            std::vector<std::int64_t> e(pm.rows(), 0);
            e[r] = 1;
            if (!solve_mod(pm, e, c.modulus))
                throw InvalidDiagram(where + ": second map is not surjective");
        }
        // p i = 0 and ker p in im i
        if (!(pm * im).is_zero_mod(c.modulus))
            throw InvalidDiagram(where + ": composite is nonzero");
        if (pm.cols() > 0) {
            const IntMatrix k = c.modulus == 0 ? integer_kernel(pm)
                                               : integer_kernel(pm.hcat(IntMatrix::scalar(pm.rows(), c.modulus)));
            for (std::size_t j = 0; j < k.cols(); ++j) {
                std::vector<std::int64_t> v(pm.cols());
                for (std::size_t r = 0; r < pm.cols(); ++r)
                    v[r] = k(r, j);
                if (!solve_mod(im, v, b.modulus))
                    throw InvalidDiagram(where + ": not exact in the middle");
            }
        }
    }
}

IntMatrix sub(const IntMatrix& a, const IntMatrix& b)
{
    IntMatrix out(a.rows(), a.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j)
            out(i, j) = checked_add(a(i, j), -b(i, j));
    return out;
}

}  // namespace

void validate(const NineDiagram& d)
{
    const int lo = d.grid[0][0].complex.lo();
    const int hi = d.grid[0][0].complex.hi();
    for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c) {
            const auto& g = d.grid[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)];
            if (g.complex.lo() != lo || g.complex.hi() != hi)
                throw InvalidDiagram(grid_name(r, c) + ": degree range differs from C[0][0]");
            if (!g.complex.is_complex(g.modulus))
                throw InvalidDiagram(grid_name(r, c) + ": d o d is nonzero");
        }
    for (int r = 0; r < 3; ++r)
        for (int k = 0; k < 2; ++k) {
            const auto ur = static_cast<std::size_t>(r);
            const auto uk = static_cast<std::size_t>(k);
            check_chain_map(d.grid[ur][uk], d.grid[ur][uk + 1], d.horizontal[ur][uk],
                            "row " + std::to_string(r) + " map " + std::to_string(k));
        }
    for (int c = 0; c < 3; ++c)
        for (int k = 0; k < 2; ++k) {
            const auto uc = static_cast<std::size_t>(c);
            const auto uk = static_cast<std::size_t>(k);
            check_chain_map(d.grid[uk][uc], d.grid[uk + 1][uc], d.vertical[uc][uk],
                            "column " + std::to_string(c) + " map " + std::to_string(k));
        }
    for (int r = 0; r < 2; ++r)
        for (int c = 0; c < 2; ++c) {
            const auto ur = static_cast<std::size_t>(r);
            const auto uc = static_cast<std::size_t>(c);
            const auto tm = d.grid[ur + 1][uc + 1].modulus;
            for (int n = lo; n <= hi; ++n) {
                const IntMatrix right_down = d.vertical[uc + 1][ur].at(n) * d.horizontal[ur][uc].at(n);
                const IntMatrix down_right = d.horizontal[ur + 1][uc].at(n) * d.vertical[uc][ur].at(n);
                if (!sub(right_down, down_right).is_zero_mod(tm))
                    throw InvalidDiagram("square (" + std::to_string(r) + "," + std::to_string(c) +
                                         ") does not commute in degree " + std::to_string(n));
            }
        }
    for (std::size_t r = 0; r < 3; ++r)
        check_short_exact(d.grid[r][0], d.grid[r][1], d.grid[r][2], d.horizontal[r][0],
                          d.horizontal[r][1], "row " + std::to_string(r));
    for (std::size_t c = 0; c < 3; ++c)
        check_short_exact(d.grid[0][c], d.grid[1][c], d.grid[2][c], d.vertical[c][0],
                          d.vertical[c][1], "column " + std::to_string(c));
}

std::vector<std::int64_t> connecting_cochain(const CoefComplex& a, const CoefComplex& b,
                                             const CoefComplex& c, const ChainMap& inc,
                                             const ChainMap& proj, int k,
                                             const std::vector<std::int64_t>& x)
{
    const auto lift = solve_mod(proj.at(k), x, c.modulus);
    if (!lift)
        throw std::invalid_argument("connecting homomorphism: cochain has no lift");
    const auto db = reduced(b.complex.d(k).apply(*lift), b.modulus);
    if (db.empty())
        return std::vector<std::int64_t>(a.complex.rank(k + 1), 0);
    const auto pre = solve_mod(inc.at(k + 1), db, b.modulus);
    if (!pre)
        throw std::invalid_argument("connecting homomorphism: coboundary of the lift leaves the image");
    return reduced(*pre, a.modulus);
}

std::int64_t NineCheckResult::max_order() const
{
    std::int64_t m = 1;
    for (const auto& w : witnesses) {
        if (w.order == 0)
            return 0;
        m = std::max(m, w.order);
    }
    return m;
}

NineCheckResult nine_check(const NineDiagram& d, int n)
{
    validate(d);
    const auto& g = d.grid;
    // bottom-right C'' = grid[2][2]; target A = grid[0][0]
    const CohomologyGroup src(g[2][2].complex, n - 1, Coefficients{g[2][2].modulus});
    const CohomologyGroup dst(g[0][0].complex, n + 1, Coefficients{g[0][0].modulus});
    NineCheckResult out;
    out.degree = n;
    out.source_group = src.group();
    out.target_group = dst.group();
    out.holds = true;
    for (std::size_t j = 0; j < src.generator_count(); ++j) {
        const auto x = src.generator(j);
        // horizontal connecting on row 2, then vertical on column 0
        const auto h3 = connecting_cochain(g[2][0], g[2][1], g[2][2], d.horizontal[2][0],
                                           d.horizontal[2][1], n - 1, x);
        const auto first = connecting_cochain(g[0][0], g[1][0], g[2][0], d.vertical[0][0],
                                              d.vertical[0][1], n, h3);
        // vertical connecting on column 2, then horizontal on row 0
        const auto v3 = connecting_cochain(g[0][2], g[1][2], g[2][2], d.vertical[2][0],
                                           d.vertical[2][1], n - 1, x);
        const auto second = connecting_cochain(g[0][0], g[0][1], g[0][2], d.horizontal[0][0],
                                               d.horizontal[0][1], n, v3);
        CompositeWitness w;
        w.source = x;
        w.via_h3_v1 = dst.coordinates(first);
        w.via_v3_h1 = dst.coordinates(second);
        w.order = dst.order(w.via_h3_v1);
        std::vector<std::int64_t> sum(first.size()), diff(first.size());
        for (std::size_t i = 0; i < first.size(); ++i) {
            sum[i] = checked_add(first[i], second[i]);
            diff[i] = checked_add(first[i], -second[i]);
        }
        w.anticommutes = dst.is_zero(dst.coordinates(sum));
        w.commutes = dst.is_zero(dst.coordinates(diff));
        out.holds = out.holds && w.anticommutes;
        out.witnesses.push_back(std::move(w));
    }
    return out;
}

// ---------------------------------------------------------------------------
// cellular pairs

namespace {

// chain boundaries given as d_cells[k] = matrix C_{k+1} -> C_k; cochain d^k is its transpose
CochainComplexZ from_boundaries(std::vector<std::size_t> cells, const std::vector<IntMatrix>& boundary)
{
    std::vector<IntMatrix> d;
    for (const auto& b : boundary)
        d.push_back(b.transpose());
    return CochainComplexZ(0, std::move(cells), std::move(d));
}

}  // namespace

CellularPair disk_pair(int k)
{
    if (k < 1)
        throw std::invalid_argument("disk_pair: k must be at least 1");
    CellularPair p;
    p.name = "(D^" + std::to_string(k) + ",S^" + std::to_string(k - 1) + ")";
    if (k == 1) {
        // two points a, b and one 1-cell with boundary b - a
        p.space = from_boundaries({2, 1}, {IntMatrix(2, 1, {-1, 1})});
        p.in_subcomplex = {{true, true}, {false}};
        return p;
    }
    std::vector<std::size_t> cells(static_cast<std::size_t>(k) + 1, 0);
    cells[0] = 1;
    cells[static_cast<std::size_t>(k - 1)] += 1;
    cells[static_cast<std::size_t>(k)] = 1;
    std::vector<IntMatrix> boundary;
    for (int i = 0; i + 1 <= k; ++i) {
        IntMatrix b(cells[static_cast<std::size_t>(i)], cells[static_cast<std::size_t>(i + 1)]);
        if (i + 1 == k)
            b(b.rows() - 1, 0) = 1;  // the top cell attaches by a degree-one map
        boundary.push_back(b);
    }
    p.space = from_boundaries(cells, boundary);
    p.in_subcomplex.resize(cells.size());
    for (std::size_t i = 0; i < cells.size(); ++i)
        p.in_subcomplex[i].assign(cells[i], i + 1 < cells.size());
    return p;
}

CellularPair rp_pair(int n)
{
    if (n < 1)
        throw std::invalid_argument("rp_pair: n must be at least 1");
    CellularPair p;
    p.name = "(RP^" + std::to_string(n) + ",RP^" + std::to_string(n - 1) + ")";
    p.space = rp_complex(n);
    for (int i = 0; i <= n; ++i)
        p.in_subcomplex.push_back({i < n});
    return p;
}

CellularPair moore_cone_pair(std::int64_t m)
{
    if (m < 2)
        throw std::invalid_argument("moore_cone_pair: m must be at least 2");
    // cells by degree: {c0, e0} {e1, ce0} {e2, ce1} {ce2}; M = {e0, e1, e2}
    CellularPair p;
    p.name = "(CM(Z/" + std::to_string(m) + ",1),M(Z/" + std::to_string(m) + ",1))";
    const std::vector<std::size_t> cells{2, 2, 2, 1};
    IntMatrix b1(2, 2, {0, -1,   // d e1 = 0, d ce0 = e0 - c0
                        0, 1});
    IntMatrix b2(2, 2, {m, 1,    // d e2 = m e1, d ce1 = e1
                        0, 0});
    IntMatrix b3(2, 1, {1, -m});  // d ce2 = e2 - m ce1
    p.space = from_boundaries(cells, {b1, b2, b3});
    p.in_subcomplex = {{false, true}, {true, false}, {true, false}, {false}};
    return p;
}

namespace {

// restriction of the cochains of E to the rows/cols selected by `keep`
std::vector<std::vector<std::size_t>> select(const CellularPair& pair, bool in_sub)
{
    std::vector<std::vector<std::size_t>> idx;
    for (const auto& deg : pair.in_subcomplex) {
        idx.emplace_back();
        for (std::size_t i = 0; i < deg.size(); ++i)
            if (deg[i] == in_sub)
                idx.back().push_back(i);
    }
    return idx;
}

CochainComplexZ restricted(const CochainComplexZ& e, const std::vector<std::vector<std::size_t>>& idx)
{
    std::vector<std::size_t> ranks;
    for (const auto& v : idx)
        ranks.push_back(v.size());
    std::vector<IntMatrix> ds;
    for (int n = e.lo(); n < e.hi(); ++n) {
        const IntMatrix full = e.d(n);
        const auto& src = idx[static_cast<std::size_t>(n - e.lo())];
        const auto& dst = idx[static_cast<std::size_t>(n + 1 - e.lo())];
        IntMatrix m(dst.size(), src.size());
        for (std::size_t i = 0; i < dst.size(); ++i)
            for (std::size_t j = 0; j < src.size(); ++j)
                m(i, j) = full(dst[i], src[j]);
        ds.push_back(m);
    }
    return CochainComplexZ(e.lo(), std::move(ranks), std::move(ds));
}

// inclusion of relative cochains (cells off F) into C*(E), and restriction C*(E) -> C*(F)
ChainMap coordinate_inclusion(const CochainComplexZ& e, const std::vector<std::vector<std::size_t>>& idx,
                              std::int64_t scale)
{
    ChainMap f;
    f.lo = e.lo();
    for (int n = e.lo(); n <= e.hi(); ++n) {
        const auto& sel = idx[static_cast<std::size_t>(n - e.lo())];
        IntMatrix m(e.rank(n), sel.size());
        for (std::size_t j = 0; j < sel.size(); ++j)
            m(sel[j], j) = scale;
        f.maps.push_back(m);
    }
    return f;
}

ChainMap coordinate_projection(const CochainComplexZ& e, const std::vector<std::vector<std::size_t>>& idx,
                               std::int64_t scale)
{
    ChainMap f = coordinate_inclusion(e, idx, scale);
    for (auto& m : f.maps)
        m = m.transpose();
    return f;
}

ChainMap scalar_map(const CochainComplexZ& c, std::int64_t s)
{
    ChainMap f;
    f.lo = c.lo();
    for (int n = c.lo(); n <= c.hi(); ++n)
        f.maps.push_back(IntMatrix::scalar(c.rank(n), s));
    return f;
}

}  // namespace

NineDiagram pair_coefficient_diagram(const CellularPair& pair, std::int64_t m)
{
    if (m < 2)
        throw std::invalid_argument("pair_coefficient_diagram: m must be at least 2");
    const CochainComplexZ& e = pair.space;
    const auto rel_idx = select(pair, false);
    const auto sub_idx = select(pair, true);
    const CochainComplexZ rel = restricted(e, rel_idx);
    const CochainComplexZ sub_c = restricted(e, sub_idx);
    const std::array<const CochainComplexZ*, 3> cols{&rel, &e, &sub_c};
    const std::array<std::int64_t, 3> mods{0, 0, m};

    NineDiagram d;
    d.label = pair.name + " with Z -> Z -> Z/" + std::to_string(m);
    for (std::size_t r = 0; r < 3; ++r)
        for (std::size_t c = 0; c < 3; ++c)
            d.grid[r][c] = CoefComplex{*cols[c], mods[r]};
    for (std::size_t r = 0; r < 3; ++r) {
        d.horizontal[r][0] = coordinate_inclusion(e, rel_idx, 1);
        d.horizontal[r][1] = coordinate_projection(e, sub_idx, 1);
    }
    for (std::size_t c = 0; c < 3; ++c) {
        d.vertical[c][0] = scalar_map(*cols[c], m);
        d.vertical[c][1] = scalar_map(*cols[c], 1);
    }
    return d;
}

}  // namespace rpfree
