#include "rpfree/borel_ss.hpp"

#include <algorithm>
#include <stdexcept>

namespace rpfree {

std::string to_string(D3Status s)
{
    switch (s) {
    case D3Status::not_computed: return "not computed";
    case D3Status::known: return "known";
    case D3Status::unknown: return "unknown";
    case D3Status::out_of_window: return "out of window";
    }
    return "?";
}

namespace {

Monomial x_part(const Monomial& m, int r)
{
    Monomial out;
    for (int i = 0; i < r; ++i)
        out.exp[static_cast<std::size_t>(i)] = m.exp[static_cast<std::size_t>(i)];
    return out;
}

// t-part shifted down to indices 0..k-1
Monomial t_part(const Monomial& m, int r, int k)
{
    Monomial out;
    for (int i = 0; i < k; ++i)
        out.exp[static_cast<std::size_t>(i)] = m.exp[static_cast<std::size_t>(r + i)];
    return out;
}

bool basis_less(const Monomial& a, const Monomial& b, int r, int k)
{
    const Monomial ax = x_part(a, r), bx = x_part(b, r);
    if (ax != bx)
        return monomial_less(ax, bx);
    return monomial_less(t_part(a, r, k), t_part(b, r, k));
}

BitVector unit(std::size_t n, std::size_t i)
{
    BitVector v(n);
    v.set(i);
    return v;
}

// Coordinates modulo the boundaries of a page-3 slot, over its representatives.
class SlotCoordinates {
public:
    explicit SlotCoordinates(const PageSlot& s) : basis_(s.basis.size()), nb_(s.boundaries.size()), dim_(s.dim())
    {
        for (const auto& b : s.boundaries)
            if (!basis_.insert(b))
                throw std::logic_error("boundary basis is dependent");
        for (const auto& v : s.reps)
            if (!basis_.insert(v))
                throw std::logic_error("representatives are dependent modulo boundaries");
    }

    BitVector coords(const BitVector& v) const
    {
        BitVector combo(basis_.dim());
        if (!basis_.reduce(v, &combo).is_zero())
            throw std::invalid_argument("vector is not a cycle of this slot");
        BitVector out(dim_);
        for (std::size_t i = 0; i < dim_; ++i)
            if (combo.get(nb_ + i))
                out.set(i);
        return out;
    }

private:
    EchelonBasis basis_;
    std::size_t nb_;
    std::size_t dim_;
};

}  // namespace

BigradedPage BigradedPage::e2(const ActionDescriptor& desc, int window)
{
    desc.validate();
    if (window < 2)
        throw std::invalid_argument("spectral sequence window must be at least 2");
    if (window > 250)
        throw std::invalid_argument("spectral sequence window must be at most 250");

    BigradedPage page;
    page.window_ = window;
    page.r_ = desc.r;
    std::vector<const QuadraticForm*> kept;
    for (std::size_t i = 0; i < desc.dims.size(); ++i)
        if (desc.dims[i] > 0) {
            page.dims_.push_back(desc.dims[i]);
            kept.push_back(&desc.k_invariants[i]);
        }
    const int r = page.r_;
    const int k = static_cast<int>(page.dims_.size());
    page.ring_ = RingDescriptor::bigraded(r, page.dims_);
    for (const auto* f : kept)
        page.alphas_.emplace_back(page.ring_, f->to_poly().terms());
    for (int n : page.dims_)
        page.top_q_ += n;

    const auto xring = RingDescriptor::free_x(r);
    const auto tring = RingDescriptor::truncated_t(page.dims_);
    std::vector<std::vector<Monomial>> xs(static_cast<std::size_t>(window + 1));
    for (int p = 0; p <= window; ++p)
        xs[static_cast<std::size_t>(p)] = monomials_of_degree(xring, p);

    page.rows_.resize(static_cast<std::size_t>(window + 1));
    for (int q = 0; q <= window; ++q) {
        const auto ts = monomials_of_degree(tring, q);
        auto& row = page.rows_[static_cast<std::size_t>(q)];
        for (int p = 0; p + q <= window; ++p) {
            PageSlot s;
            s.p = p;
            s.q = q;
            for (const auto& x : xs[static_cast<std::size_t>(p)])
                for (const auto& t : ts) {
                    Monomial m = x;
                    for (int i = 0; i < k; ++i)
                        m.exp[static_cast<std::size_t>(r + i)] = t.exp[static_cast<std::size_t>(i)];
                    s.basis.push_back(m);
                }
            for (std::size_t i = 0; i < s.basis.size(); ++i)
                s.reps.push_back(unit(s.basis.size(), i));
            s.square_supported = true;
            row.push_back(std::move(s));
        }
    }

    for (int q = 1; q <= window; ++q)
        for (int p = 0; p + q <= window; ++p) {
            if (!page.in_window(p + 2, q - 1))
                continue;
            const auto& src = page.slot(p, q);
            const auto& dst = page.slot(p + 2, q - 1);
            F2Matrix d(dst.basis.size(), src.basis.size());
            for (std::size_t c = 0; c < src.basis.size(); ++c) {
                const PolyF2 img = d2_apply(page, PolyF2::monomial(page.ring_, src.basis[c]));
                for (const auto& t : img.terms())
                    d.set(*page.index_of(p + 2, q - 1, t), c);
            }
            page.slot(p, q).d_out = std::move(d);
        }
    return page;
}

const PageSlot& BigradedPage::slot(int p, int q) const
{
    if (!in_window(p, q))
        throw std::out_of_range("slot (" + std::to_string(p) + "," + std::to_string(q) + ") is outside the window");
    return rows_[static_cast<std::size_t>(q)][static_cast<std::size_t>(p)];
}

PageSlot& BigradedPage::slot(int p, int q)
{
    return const_cast<PageSlot&>(std::as_const(*this).slot(p, q));
}

std::vector<const PageSlot*> BigradedPage::slots() const
{
    std::vector<const PageSlot*> out;
    for (const auto& row : rows_)
        for (const auto& s : row)
            out.push_back(&s);
    return out;
}

std::optional<std::size_t> BigradedPage::index_of(int p, int q, const Monomial& m) const
{
    if (!in_window(p, q))
        return std::nullopt;
    const auto& b = slot(p, q).basis;
    const int r = r_;
    const int k = static_cast<int>(dims_.size());
    auto it = std::lower_bound(b.begin(), b.end(), m,
                               [&](const Monomial& a, const Monomial& v) { return basis_less(a, v, r, k); });
    if (it == b.end() || *it != m)
        return std::nullopt;
    return static_cast<std::size_t>(it - b.begin());
}

BitVector BigradedPage::coordinates(int p, int q, const PolyF2& f) const
{
    BitVector v(slot(p, q).basis.size());
    for (const auto& t : f.terms()) {
        const auto i = index_of(p, q, t);
        if (!i)
            throw std::invalid_argument("term " + to_string(t, ring_) + " is not in slot (" + std::to_string(p) +
                                        "," + std::to_string(q) + ")");
        v.set(*i);
    }
    return v;
}

PolyF2 BigradedPage::from_coordinates(int p, int q, const BitVector& v) const
{
    const auto& b = slot(p, q).basis;
    std::vector<Monomial> terms;
    for (std::size_t i = 0; i < b.size(); ++i)
        if (v.get(i))
            terms.push_back(b[i]);
    return PolyF2(ring_, std::move(terms));
}

std::pair<int, int> BigradedPage::bidegree(const Monomial& m) const
{
    int p = 0, q = 0;
    for (int i = 0; i < r_; ++i)
        p += m.exp[static_cast<std::size_t>(i)];
    for (std::size_t i = 0; i < dims_.size(); ++i)
        q += m.exp[static_cast<std::size_t>(r_) + i];
    return {p, q};
}

BigradedPage build_e2(const ActionDescriptor& desc, std::optional<int> window)
{
    return BigradedPage::e2(desc, window.value_or(default_window(desc)));
}

PolyF2 d2_apply(const BigradedPage& page, const PolyF2& f)
{
    if (f.ring() != page.ring())
        throw RingMismatch();
    const int r = page.r();
    std::vector<Monomial> terms;
    for (const auto& m : f.terms())
        for (std::size_t i = 0; i < page.alphas().size(); ++i) {
            const std::size_t v = static_cast<std::size_t>(r) + i;
            if ((m.exp[v] & 1U) == 0)
                continue;
            Monomial rest = m;
            rest.exp[v] -= 1;
            for (const auto& a : page.alphas()[i].terms())
                terms.push_back(rest * a);
        }
    return PolyF2(page.ring(), std::move(terms));
}

bool in_square_subalgebra(const BigradedPage& page, const Monomial& m)
{
    for (std::size_t i = 0; i < page.alphas().size(); ++i)
        if ((m.exp[static_cast<std::size_t>(page.r()) + i] & 1U) && !page.alphas()[i].is_zero())
            return false;
    return true;
}

PolyF2 d3_formula(const BigradedPage& page, const Monomial& m)
{
    if (!in_square_subalgebra(page, m))
        throw std::invalid_argument("d3 is only specified on the square subalgebra");
    std::vector<Monomial> terms;
    for (std::size_t i = 0; i < page.alphas().size(); ++i) {
        const std::size_t v = static_cast<std::size_t>(page.r()) + i;
        // [t_i^2]^c contributes c [t_i^2]^{c-1} d3[t_i^2]
        if (m.exp[v] % 4 != 2)
            continue;
        Monomial rest = m;
        rest.exp[v] -= 2;
        const PolyF2 s = sq1(page.alphas()[i]);
        for (const auto& a : s.terms())
            terms.push_back(rest * a);
    }
    return PolyF2(page.ring(), std::move(terms));
}

BigradedPage turn_page(const BigradedPage& page)
{
    if (page.page() != 2)
        throw std::invalid_argument("turn_page computes E3 from E2 only");
    BigradedPage out = page;
    out.page_ = 3;
    for (int q = 0; q <= page.window_; ++q)
        for (int p = 0; p + q <= page.window_; ++p) {
            const PageSlot& src = page.slot(p, q);
            PageSlot& s = out.slot(p, q);
            const std::size_t n = src.basis.size();
            s.reps.clear();
            s.boundaries.clear();
            s.d_out.reset();
            s.square_supported = true;
            s.valid = n == 0 || q == 0 || page.in_window(p + 2, q - 1) || page.r() == 0;
            if (!s.valid || n == 0)
                continue;

            EchelonBasis span(n);
            if (p >= 2) {
                const auto& in = page.slot(p - 2, q + 1);
                if (in.d_out)
                    for (std::size_t c = 0; c < in.d_out->cols(); ++c) {
                        BitVector b = in.d_out->column(c);
                        if (span.insert(b))
                            s.boundaries.push_back(std::move(b));
                    }
            }
            for (std::size_t i = 0; i < n; ++i)
                if (in_square_subalgebra(page, src.basis[i])) {
                    BitVector e = unit(n, i);
                    if (span.insert(e))
                        s.reps.push_back(std::move(e));
                }
            std::vector<BitVector> cycles;
            if (src.d_out)
                cycles = src.d_out->nullspace();
            else
                for (std::size_t i = 0; i < n; ++i)
                    cycles.push_back(unit(n, i));
            for (auto& z : cycles)
                if (span.insert(z)) {
                    s.reps.push_back(std::move(z));
                    s.square_supported = false;
                }
        }
    return out;
}

BitVector e3_coordinates(const BigradedPage& page3, int p, int q, const PolyF2& f)
{
    if (page3.page() != 3)
        throw std::invalid_argument("e3_coordinates needs page 3");
    const auto& s = page3.slot(p, q);
    if (!s.valid)
        throw std::invalid_argument("slot (" + std::to_string(p) + "," + std::to_string(q) + ") is not determined by the window");
    if (!d2_apply(page3, f).is_zero())
        throw std::invalid_argument("polynomial is not a d2-cycle");
    return SlotCoordinates(s).coords(page3.coordinates(p, q, f));
}

bool e3_class_is_zero(const BigradedPage& page3, int p, int q, const PolyF2& f)
{
    return e3_coordinates(page3, p, q, f).is_zero();
}

BigradedPage d3_on_squares(const BigradedPage& page)
{
    if (page.page() != 3)
        throw std::invalid_argument("d3_on_squares needs page 3");
    BigradedPage out = page;
    for (int q = 0; q <= page.window_; ++q)
        for (int p = 0; p + q <= page.window_; ++p) {
            PageSlot& s = out.slot(p, q);
            s.d_out.reset();
            if (!s.valid) {
                s.d3 = D3Status::out_of_window;
                continue;
            }
            if (q < 2 || s.dim() == 0) {
                s.d3 = D3Status::known;
                continue;
            }
            if (!page.in_window(p + 3, q - 2) || !page.slot(p + 3, q - 2).valid) {
                s.d3 = D3Status::out_of_window;
                continue;
            }
            if (!s.square_supported) {
                s.d3 = D3Status::unknown;
                continue;
            }
            const PageSlot& dst = page.slot(p + 3, q - 2);
            const SlotCoordinates src_coords(s);
            const SlotCoordinates dst_coords(dst);
            auto image = [&](const Monomial& m) {
                return dst_coords.coords(page.coordinates(p + 3, q - 2, d3_formula(page, m)));
            };
            F2Matrix d(dst.dim(), s.dim());
            for (std::size_t c = 0; c < s.dim(); ++c) {
                const BitVector img = image(s.basis[s.reps[c].first_set()]);
                for (std::size_t i = 0; i < dst.dim(); ++i)
                    if (img.get(i))
                        d.set(i, c);
            }
            // the rule must not depend on which monomial represents a class
            for (std::size_t i = 0; i < s.basis.size(); ++i) {
                if (!in_square_subalgebra(page, s.basis[i]))
                    continue;
                if (d.apply(src_coords.coords(unit(s.basis.size(), i))) != image(s.basis[i]))
                    throw std::logic_error("d3 rule is inconsistent on slot (" + std::to_string(p) + "," +
                                           std::to_string(q) + ")");
            }
            s.d_out = std::move(d);
            s.d3 = D3Status::known;
        }
    return out;
}

F2Matrix induced_map(const BigradedPage& src, const BigradedPage& dst, std::span<const LinearForm> images,
                     int p, int q)
{
    if (src.page() != 2 || dst.page() != 2)
        throw std::invalid_argument("induced_map works on E2 pages");
    if (src.dims() != dst.dims())
        throw std::invalid_argument("induced_map needs the same fibre");
    if (images.size() != static_cast<std::size_t>(src.r()))
        throw std::invalid_argument("induced_map needs one image per x-generator");
    for (const auto& l : images)
        if (l.r() != dst.r())
            throw std::invalid_argument("image forms must live over the target's x-generators");
    const auto& from = src.slot(p, q);
    const auto& to = dst.slot(p, q);
    const int sr = src.r(), tr = dst.r();
    const int k = static_cast<int>(src.dims().size());
    const auto sx = RingDescriptor::free_x(sr);
    F2Matrix m(to.basis.size(), from.basis.size());
    for (std::size_t c = 0; c < from.basis.size(); ++c) {
        const Monomial& b = from.basis[c];
        const PolyF2 x = sr == 0 ? PolyF2::one(RingDescriptor::free_x(tr))
                                 : substitute(PolyF2::monomial(sx, x_part(b, sr)), images);
        std::vector<Monomial> terms;
        for (const auto& t : x.terms()) {
            Monomial z = t;
            for (int i = 0; i < k; ++i)
                z.exp[static_cast<std::size_t>(tr + i)] = b.exp[static_cast<std::size_t>(sr + i)];
            terms.push_back(z);
        }
        const BitVector v = dst.coordinates(p, q, PolyF2(dst.ring(), std::move(terms)));
        for (std::size_t i = 0; i < v.size(); ++i)
            if (v.get(i))
                m.set(i, c);
    }
    return m;
}

std::vector<CyclicPoint> cyclic_scan(const ActionDescriptor& desc)
{
    desc.validate();
    std::vector<CyclicPoint> out;
    const std::uint32_t end = desc.r == 0 ? 1U : (std::uint32_t{1} << desc.r);
    for (std::uint32_t lambda = 1; lambda < end; ++lambda) {
        CyclicPoint pt;
        pt.lambda = lambda;
        pt.collapses = true;
        for (std::size_t i = 0; i < desc.k_invariants.size(); ++i) {
            // a point factor carries no k-invariant
            const bool v = desc.dims[i] > 0 && desc.k_invariants[i].evaluate(lambda);
            pt.restricted.push_back(v);
            if (v)
                pt.collapses = false;
        }
        out.push_back(std::move(pt));
    }
    return out;
}

std::optional<std::uint32_t> first_collapse(const ActionDescriptor& desc)
{
    for (const auto& pt : cyclic_scan(desc))
        if (pt.collapses)
            return pt.lambda;
    return std::nullopt;
}

ActionDescriptor restrict_to_cyclic(const ActionDescriptor& desc, std::uint32_t lambda)
{
    desc.validate();
    if (lambda == 0 || (desc.r < 32 && (lambda >> desc.r) != 0))
        throw std::invalid_argument("lambda must be a nonzero point of F2^r");
    ActionDescriptor out;
    out.r = 1;
    out.dims = desc.dims;
    out.integral_trivial = desc.integral_trivial;
    for (const auto& f : desc.k_invariants) {
        QuadraticForm g(1);
        g.set_diag(0, f.evaluate(lambda));
        out.k_invariants.push_back(g);
    }
    return out;
}

PageReport page_report(const BigradedPage& page)
{
    PageReport rep;
    rep.page = page.page();
    rep.window = page.window();
    for (const auto* s : page.slots()) {
        SlotReport sr{s->p, s->q, s->valid ? s->dim() : 0, s->valid, s->d3};
        if (s->valid)
            rep.total_valid_dim += s->dim();
        rep.slots.push_back(sr);
    }
    return rep;
}

FinitenessReport finiteness_probe(const ActionDescriptor& desc, std::optional<int> window)
{
    FinitenessReport rep;
    rep.window = window.value_or(default_window(desc));
    rep.collapse_point = first_collapse(desc);
    rep.infinite_growth = rep.collapse_point.has_value();
    const BigradedPage e3 = d3_on_squares(turn_page(build_e2(desc, rep.window)));
    for (int q = 0; q <= 1; ++q)
        for (int p = 0; p + q <= rep.window; ++p) {
            ProbeRow row{p, q, std::nullopt, std::nullopt};
            const auto& s = e3.slot(p, q);
            if (s.valid) {
                row.e3 = s.dim();
                if (p < 3) {
                    row.e4 = s.dim();
                } else {
                    const auto& in = e3.slot(p - 3, q + 2);
                    if (in.valid && in.dim() == 0)
                        row.e4 = s.dim();
                    else if (in.d3 == D3Status::known && in.d_out)
                        row.e4 = s.dim() - in.d_out->rank();
                }
            }
            rep.rows.push_back(row);
        }
    if (rep.infinite_growth)
        rep.note = "infinite growth: every k-invariant restricts to zero on the cyclic subgroup generated by " +
                   vector_to_string(*rep.collapse_point, desc.r) + ", so that restricted page collapses at E2";
    else
        rep.note = "no cyclic collapse; higher differentials leave the window, so finiteness is not claimed";
    return rep;
}

}  // namespace rpfree
