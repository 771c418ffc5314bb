#pragma once

// Windowed mod-2 Serre spectral sequence of X -> X_G -> BG for X a product of real
// projective spaces: E2 with d2 from the k-invariants, E3 by kernel/image, d3 on the
// subalgebra generated by the [t_i^2], restriction to cyclic subgroups.

#include "rpfree/action.hpp"
#include "rpfree/f2algebra.hpp"
#include "rpfree/f2linalg.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace rpfree {

enum class D3Status {
    not_computed,
    known,          // matrix available (or the target row is negative)
    unknown,        // the slot has classes outside the square subalgebra
    out_of_window,  // the target slot is missing or not determined by the window
};

std::string to_string(D3Status s);

struct PageSlot {
    int p = 0;
    int q = 0;
    /// E2 basis: x-monomial of degree p times t-monomial of degree q, ordered by the
    /// x-part first and the t-part second (both ascending in monomial order).
    std::vector<Monomial> basis;
    bool valid = true;
    /// Class representatives of this page, as vectors over `basis`. On page 2 these are
    /// the unit vectors.
    std::vector<BitVector> reps;
    /// Basis of the incoming boundaries (page 3 onwards), over `basis`.
    std::vector<BitVector> boundaries;
    /// Page 3: every class is represented by a monomial of the square subalgebra.
    bool square_supported = false;

    /// Outgoing differential of this page (d2 on page 2, d3 on page 3), column c = image
    /// of reps[c] in the target's representative coordinates. Empty when not stored.
    std::optional<F2Matrix> d_out;
    /// Page 3 only.
    D3Status d3 = D3Status::not_computed;

    std::size_t dim() const { return reps.size(); }
};

class BigradedPage {
public:
    /// Page 2 over the descriptor with dimension-0 factors removed. Throws
    /// DescriptorError for an invalid descriptor and std::invalid_argument for D < 2.
    static BigradedPage e2(const ActionDescriptor& desc, int window);

    int page() const { return page_; }
    int window() const { return window_; }
    int r() const { return r_; }
    /// Dimensions after removing n_i = 0.
    const std::vector<int>& dims() const { return dims_; }
    const RingDescriptor& ring() const { return ring_; }
    /// k-invariants embedded in the bigraded ring.
    const std::vector<PolyF2>& alphas() const { return alphas_; }
    /// Highest nonempty fibre degree, sum of dims.
    int top_q() const { return top_q_; }

    bool in_window(int p, int q) const { return p >= 0 && q >= 0 && p + q <= window_; }
    /// Slot at (p,q); throws std::out_of_range outside the window.
    const PageSlot& slot(int p, int q) const;
    PageSlot& slot(int p, int q);
    /// Every slot, sorted by q then p.
    std::vector<const PageSlot*> slots() const;

    /// Index of a monomial in the slot basis, or nullopt.
    std::optional<std::size_t> index_of(int p, int q, const Monomial& m) const;
    /// Coordinates of a homogeneous bidegree-(p,q) polynomial over the E2 basis.
    BitVector coordinates(int p, int q, const PolyF2& f) const;
    PolyF2 from_coordinates(int p, int q, const BitVector& v) const;

    /// Bidegree (p,q) of a monomial of the page ring.
    std::pair<int, int> bidegree(const Monomial& m) const;

    friend BigradedPage turn_page(const BigradedPage& page);
    friend BigradedPage d3_on_squares(const BigradedPage& page);

private:
    int page_ = 2;
    int window_ = 0;
    int r_ = 0;
    int top_q_ = 0;
    std::vector<int> dims_;
    RingDescriptor ring_;
    std::vector<PolyF2> alphas_;
    std::vector<std::vector<PageSlot>> rows_;  // rows_[q][p]
};

inline int default_window(const ActionDescriptor& desc)
{
    int s = 0;
    for (int n : desc.dims)
        s += n;
    return s + 6;
}

/// build_e2 with the default window sum(n_i) + 6 when none is given.
BigradedPage build_e2(const ActionDescriptor& desc, std::optional<int> window = std::nullopt);

/// d2 on any polynomial of the page ring: d2(x^A t^B) = sum_{B_i odd} x^A alpha_i t^{B - e_i}.
PolyF2 d2_apply(const BigradedPage& page, const PolyF2& f);

/// E3 from E2: kernel modulo image in every slot, with representatives chosen greedily
/// from square-subalgebra monomials first. A slot is valid when its outgoing target is
/// inside the window (or provably zero). Throws std::invalid_argument unless page 2.
BigradedPage turn_page(const BigradedPage& page);

/// Whether a page-ring monomial lies in the subalgebra generated by the [t_i^2], the x_j
/// and the t_j with alpha_j = 0.
bool in_square_subalgebra(const BigradedPage& page, const Monomial& m);
/// d3 on a square-subalgebra monomial: sum over B_i = 2 mod 4 of x^A Sq^1(alpha_i) t^{B - 2e_i}.
PolyF2 d3_formula(const BigradedPage& page, const Monomial& m);

/// Fills d3 matrices on page 3 where the rule applies; other slots are flagged unknown.
BigradedPage d3_on_squares(const BigradedPage& page);

/// Coordinates over the page-3 representatives of the class of a cycle in slot (p,q).
/// Throws std::invalid_argument when f is not a d2-cycle or the slot is invalid.
BitVector e3_coordinates(const BigradedPage& page3, int p, int q, const PolyF2& f);
bool e3_class_is_zero(const BigradedPage& page3, int p, int q, const PolyF2& f);

/// Map of E2 slots induced by x_j -> images[j] (linear forms over the target's x's), t_i -> t_i.
F2Matrix induced_map(const BigradedPage& src, const BigradedPage& dst,
                     std::span<const LinearForm> images, int p, int q);

struct CyclicPoint {
    std::uint32_t lambda = 0;
    /// alpha_i(lambda); the restriction of alpha_i to <lambda> is this value times x^2.
    std::vector<bool> restricted;
    bool collapses = false;
};

/// One entry per nonzero lambda in F2^r, in counter order.
std::vector<CyclicPoint> cyclic_scan(const ActionDescriptor& desc);
std::optional<std::uint32_t> first_collapse(const ActionDescriptor& desc);

/// Descriptor of the restriction to the cyclic subgroup generated by lambda (r = 1).
ActionDescriptor restrict_to_cyclic(const ActionDescriptor& desc, std::uint32_t lambda);

struct SlotReport {
    int p = 0;
    int q = 0;
    std::size_t dim = 0;
    bool valid = true;
    D3Status d3 = D3Status::not_computed;
};

struct PageReport {
    int page = 2;
    int window = 0;
    std::vector<SlotReport> slots;
    std::size_t total_valid_dim = 0;
};

PageReport page_report(const BigradedPage& page);

struct ProbeRow {
    int p = 0;
    int q = 0;
    std::optional<std::size_t> e3;  // nullopt when the slot is invalid
    std::optional<std::size_t> e4;  // after d3 from row q+2, when determined
};

struct FinitenessReport {
    int window = 0;
    std::vector<ProbeRow> rows;  // q in {0,1}, p = 0..window-q
    bool infinite_growth = false;
    std::optional<std::uint32_t> collapse_point;
    std::string note;
};

/// Diagnostic only: rows q = 0, 1 of E3 and of the partial E4. Flags infinite growth
/// when some cyclic subgroup sees every k-invariant vanish.
FinitenessReport finiteness_probe(const ActionDescriptor& desc, std::optional<int> window = std::nullopt);

}  // namespace rpfree
