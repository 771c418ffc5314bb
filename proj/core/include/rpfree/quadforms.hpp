#pragma once

// Quadratic forms over F2 in r <= 16 variables: square detection, factorization into
// linear forms, F2-point zero search, and subspace machinery for restrictions.

#include "rpfree/f2algebra.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace rpfree {

/// sum_j a_j x_j^2 + sum_{j<k} a_jk x_j x_k, stored as bit masks.
class QuadraticForm {
public:
    QuadraticForm() = default;
    explicit QuadraticForm(int r);

    /// Throws std::invalid_argument unless p is a homogeneous quadratic in F2[x_1..x_r].
    static QuadraticForm from_poly(const PolyF2& p);
    static QuadraticForm product(const LinearForm& a, const LinearForm& b);
    static QuadraticForm square(const LinearForm& l) { return product(l, l); }

    /// Dense enumeration code: diagonal bits first, then cross terms (j,k) in
    /// lexicographic order. Available for r <= 10.
    static QuadraticForm from_code(int r, std::uint64_t code);
    std::uint64_t code() const;
    static std::uint64_t code_count(int r);

    int r() const { return r_; }
    bool diag(int j) const { return (diag_ >> j) & 1U; }
    bool cross(int j, int k) const;
    void set_diag(int j, bool v = true);
    void set_cross(int j, int k, bool v = true);
    std::uint32_t diag_mask() const { return diag_; }
    bool has_cross_terms() const;
    bool is_zero() const { return diag_ == 0 && !has_cross_terms(); }

    bool evaluate(std::uint32_t point) const;

    PolyF2 to_poly() const;
    std::string to_string() const { return rpfree::to_string(to_poly()); }

    QuadraticForm operator+(const QuadraticForm& other) const;
    friend bool operator==(const QuadraticForm&, const QuadraticForm&) = default;

private:
    int r_ = 0;
    std::uint32_t diag_ = 0;
    std::array<std::uint32_t, kMaxFamilySize> upper_{};  // upper_[j] bit k for j < k
};

/// Subspace of F2^r kept in reduced echelon form: pivots at the lowest set coordinate,
/// rows sorted by pivot, pivot columns cleared elsewhere.
class Subspace {
public:
    Subspace() = default;
    static Subspace span(int ambient, std::span<const std::uint32_t> vectors);
    static Subspace full(int ambient);
    static Subspace zero(int ambient) { return span(ambient, {}); }

    int ambient() const { return ambient_; }
    int dim() const { return static_cast<int>(basis_.size()); }
    const std::vector<std::uint32_t>& basis() const { return basis_; }
    bool contains(std::uint32_t v) const;
    /// sum_j coords_j * basis_j, coords packed into bits.
    std::uint32_t point(std::uint32_t coords) const;
    /// {w : <w, v> = 0 for all v in the subspace}.
    Subspace annihilator() const;

    friend bool operator==(const Subspace&, const Subspace&) = default;

private:
    int ambient_ = 0;
    std::vector<std::uint32_t> basis_;
};

std::string vector_to_string(std::uint32_t v, int dim);

struct FactorPair {
    LinearForm first;
    LinearForm second;
    friend bool operator==(const FactorPair&, const FactorPair&) = default;
};

/// l with l^2 = alpha, present iff alpha has no cross terms.
std::optional<LinearForm> is_square(const QuadraticForm& alpha);

/// All unordered pairs (l, m) with l*m = alpha, first <= second in scan order.
std::vector<FactorPair> factor_product(const QuadraticForm& alpha);

/// First nonzero point of the domain (scan over coordinate counters 1, 2, ...) at which
/// every form vanishes.
std::optional<std::uint32_t> common_zero(std::span<const QuadraticForm> forms,
                                         const Subspace& domain);
std::optional<std::uint32_t> common_zero(std::span<const QuadraticForm> forms, int r);

/// All gamma with Sq^1(alpha) = gamma * alpha.
std::vector<LinearForm> solve_bockstein_factor(const QuadraticForm& alpha);

/// Smallest eta with eta * (eta + gamma) = alpha.
std::optional<LinearForm> eta_factor(const QuadraticForm& alpha, const LinearForm& gamma);

Subspace kernel(const LinearForm& l);
/// Throws std::invalid_argument on ambient dimension mismatch or an empty list.
Subspace intersect(std::span<const Subspace> subspaces);

/// alpha pulled back along the echelon basis of H, in dim(H) fresh variables.
QuadraticForm restrict_form(const QuadraticForm& alpha, const Subspace& h);

}  // namespace rpfree
