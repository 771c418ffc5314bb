#pragma once

// Graded polynomial algebra over F2: free polynomial rings in x- and t-generators,
// truncations by (t_i^{n_i+1}), the Sq^1 derivation, evaluation and substitution.

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace rpfree {

inline constexpr int kMaxFamilySize = 16;
inline constexpr int kMaxVars = 2 * kMaxFamilySize;

class ParseError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class RingMismatch : public std::invalid_argument {
public:
    RingMismatch() : std::invalid_argument("polynomials live in different rings") {}
};

/// F2[x_1..x_r, t_1..t_k] / (t_i^{cap_i + 1}) with optional caps on the t-generators.
///
/// Variables are indexed 0..r-1 for x_1..x_r followed by r..r+k-1 for t_1..t_k.
class RingDescriptor {
public:
    RingDescriptor() = default;

    static RingDescriptor free_x(int r) { return RingDescriptor(r, 0, {}); }
    static RingDescriptor free_t(int k) { return RingDescriptor(0, k, {}); }
    /// F2[t_1..t_k]/(t_i^{n_i+1}).
    static RingDescriptor truncated_t(std::vector<int> caps);
    /// F2[x_1..x_r] tensor F2[t_1..t_k]/(t_i^{n_i+1}).
    static RingDescriptor bigraded(int r, std::vector<int> caps);

    int x_count() const { return x_count_; }
    int t_count() const { return t_count_; }
    int nvars() const { return x_count_ + t_count_; }
    bool has_caps() const { return !caps_.empty(); }
    /// Exponent cap of variable v, or nullopt when uncapped.
    std::optional<int> cap(int v) const;
    const std::vector<int>& t_caps() const { return caps_; }

    std::string var_name(int v) const;

    friend bool operator==(const RingDescriptor&, const RingDescriptor&) = default;

private:
    RingDescriptor(int r, int k, std::vector<int> caps);

    int x_count_ = 0;
    int t_count_ = 0;
    std::vector<int> caps_;  // one per t-generator when present
};

struct Monomial {
    std::array<std::uint8_t, kMaxVars> exp{};

    static Monomial one() { return {}; }
    static Monomial var(int v, int power = 1);

    int degree() const;
    bool is_one() const { return degree() == 0; }
    /// Product of monomials; throws std::overflow_error on exponent overflow.
    Monomial operator*(const Monomial& other) const;
    bool divides(const Monomial& other) const;
    bool respects(const RingDescriptor& ring) const;

    friend bool operator==(const Monomial&, const Monomial&) = default;
};

/// Graded order: degree first, then the exponent of the highest-indexed variable
/// decides (so x1 < x2 < ... < xr < t1 < ... < tk).
bool monomial_less(const Monomial& a, const Monomial& b);

struct MonomialLess {
    bool operator()(const Monomial& a, const Monomial& b) const { return monomial_less(a, b); }
};

struct MonomialHash {
    std::size_t operator()(const Monomial& m) const;
};

/// Monomials of the given degree in the ring, in ascending monomial order.
std::vector<Monomial> monomials_of_degree(const RingDescriptor& ring, int degree);

/// Element of an F2 polynomial ring. Terms are kept duplicate-free and sorted.
class PolyF2 {
public:
    PolyF2() = default;
    explicit PolyF2(RingDescriptor ring) : ring_(std::move(ring)) {}
    /// Builds a canonical polynomial from arbitrary terms: duplicates cancel in pairs,
    /// terms violating the ring's caps are dropped.
    PolyF2(RingDescriptor ring, std::vector<Monomial> terms);

    static PolyF2 zero(const RingDescriptor& ring) { return PolyF2(ring); }
    static PolyF2 one(const RingDescriptor& ring);
    static PolyF2 var(const RingDescriptor& ring, int v);
    static PolyF2 monomial(const RingDescriptor& ring, const Monomial& m);

    const RingDescriptor& ring() const { return ring_; }
    const std::vector<Monomial>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    bool contains(const Monomial& m) const;
    /// Largest term degree; -1 for the zero polynomial.
    int degree() const;
    bool is_homogeneous() const;

    friend PolyF2 operator+(const PolyF2& a, const PolyF2& b);
    friend PolyF2 operator*(const PolyF2& a, const PolyF2& b);
    PolyF2& operator+=(const PolyF2& b) { return *this = *this + b; }
    PolyF2& operator*=(const PolyF2& b) { return *this = *this * b; }
    PolyF2 pow(int e) const;

    friend bool operator==(const PolyF2&, const PolyF2&) = default;

private:
    RingDescriptor ring_;
    std::vector<Monomial> terms_;
};

PolyF2 poly_add(const PolyF2& a, const PolyF2& b);
PolyF2 poly_mul(const PolyF2& a, const PolyF2& b);

/// Sq^1 as the derivation with Sq^1(g) = g^2 on degree-one generators. In a truncated
/// ring the free-ring rule is applied and capped terms are dropped.
PolyF2 sq1(const PolyF2& p);

/// Value at a point of F2^{nvars}.
bool evaluate(const PolyF2& p, std::span<const std::uint8_t> point);
/// Same, with the point packed into bits (bit v = coordinate of variable v).
bool evaluate_bits(const PolyF2& p, std::uint64_t point);

/// Element of H^1 of (Z/2)^r: coefficient vector of length r, bit j for x_{j+1}.
class LinearForm {
public:
    LinearForm() = default;
    LinearForm(int r, std::uint32_t coeffs);

    static LinearForm var(int r, int j) { return LinearForm(r, std::uint32_t{1} << j); }
    static std::optional<LinearForm> from_poly(const PolyF2& p);

    int r() const { return r_; }
    std::uint32_t coeffs() const { return coeffs_; }
    bool coeff(int j) const { return (coeffs_ >> j) & 1U; }
    bool is_zero() const { return coeffs_ == 0; }
    bool evaluate(std::uint32_t point) const;

    PolyF2 to_poly() const;
    std::string to_string() const;

    LinearForm operator+(const LinearForm& o) const;
    friend bool operator==(const LinearForm&, const LinearForm&) = default;

private:
    int r_ = 0;
    std::uint32_t coeffs_ = 0;
};

/// Ring homomorphism sending variable v to images[v]; images live in `target`.
PolyF2 substitute(const PolyF2& p, std::span<const PolyF2> images, const RingDescriptor& target);
/// Substitution of x-variables by linear forms over F2[y_1..y_m].
PolyF2 substitute(const PolyF2& p, std::span<const LinearForm> images);

struct IdealMembership {
    bool member = false;
    /// Coefficients c_i with p = sum c_i g_i when member is true.
    std::vector<PolyF2> witness;
};

/// Decides p in (g_1..g_k) among combinations with deg(c_i) <= max_degree - deg(g_i),
/// by linear algebra over the monomials of degree <= max_degree.
IdealMembership ideal_membership_window(const PolyF2& p, std::span<const PolyF2> gens,
                                        int max_degree);

/// Renders as "x1^2*x2 + x1*x2^2"; zero renders as "0".
std::string to_string(const PolyF2& p);
std::string to_string(const Monomial& m, const RingDescriptor& ring);

/// Parses sums of products of generators with caret exponents and parentheses,
/// e.g. "x1^2*x2 + (x1+x2)^2". Generators must exist in the ring.
PolyF2 parse_poly(std::string_view text, const RingDescriptor& ring);

}  // namespace rpfree
