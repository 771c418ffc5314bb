#pragma once

// Integral cohomology of (Z/2)^r and of products of real projective spaces, carried by
// mod-2 images: the u_I generators and their product relation, the s_I / v_i presentation
// of H*(RP^{n_1} x ... x RP^{n_k}; Z), normal forms and dimension bookkeeping.

#include "rpfree/f2algebra.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace rpfree {

/// Index sets are bit masks: bit i-1 stands for index i.
using IndexSet = std::uint32_t;

std::string index_set_to_string(IndexSet s);

/// m2(u_I) = (prod_{i in I} x_i)(sum_{i in I} x_i) in F2[x_1..x_r].
PolyF2 u_gen(IndexSet i, int r);

/// How the symbol u_{empty} in the product formula is read.
enum class EmptyIndex { zero, one };

struct BcSides {
    PolyF2 lhs;
    PolyF2 rhs;
};

/// m2-images of u_I u_J and of the right-hand side of the product formula.
BcSides bc_relation_sides(IndexSet i, IndexSet j, int r, EmptyIndex convention = EmptyIndex::zero);
bool verify_bc_relation(IndexSet i, IndexSet j, int r, EmptyIndex convention = EmptyIndex::zero);

/// F2-basis (reduced echelon in monomial order) of {p in degree n : Sq^1 p = 0}.
std::vector<PolyF2> ker_sq1_basis(int n, const RingDescriptor& ring);

/// H*(X; Z) element: exterior free part on the v_i (keys are sets of indices, values the
/// integer coefficient) plus a 2-torsion part stored as its mod-2 image in
/// F2[t_1..t_k]/(t_i^{n_i+1}).
struct XIntClass {
    std::vector<int> dims;
    std::map<IndexSet, std::int64_t> free;
    PolyF2 torsion;

    bool is_zero() const { return free.empty() && torsion.is_zero(); }
    std::string to_string() const;
    friend bool operator==(const XIntClass&, const XIntClass&) = default;
};

/// A formal generator: s_I or v_i.
struct XGen {
    enum class Kind { s, v } kind = Kind::s;
    IndexSet set = 0;  // for s_I
    int index = 0;     // for v_i, 1-based

    static XGen s(IndexSet i) { return {Kind::s, i, 0}; }
    static XGen v(int i) { return {Kind::v, 0, i}; }
};

using XWord = std::vector<XGen>;

/// Parses "v1*s_{12}*s2^3" style words; s_I indices are digits (or comma lists in braces).
XWord parse_xword(const std::string& text);
std::string xword_to_string(const XWord& w);

/// Rewrites a word with relations (3) and (4); torsion words are evaluated through m2.
/// Throws std::invalid_argument for dims below 2, empty I or indices out of range.
XIntClass x_normal_form(const XWord& word, const std::vector<int>& dims);
/// Re-canonicalizes a class (drops zero coefficients, v_i with n_i even, capped terms).
XIntClass x_normalize(const XIntClass& c);
XIntClass x_add(const XIntClass& a, const XIntClass& b);

/// (s_{j_1}^{a_1} ... s_{j_p}^{a_p}) s_I with max{j : a_j > 0} <= max I.
struct PresMonomial {
    std::vector<int> a;  // exponent per index 1..k
    IndexSet set = 0;

    int degree() const;
    XWord word() const;
    std::string to_string() const;
    friend bool operator==(const PresMonomial&, const PresMonomial&) = default;
};

/// Every normal-form monomial of the given degree over k indices.
std::vector<PresMonomial> pres_monomials(int degree, int k);
/// m2-image in the free ring F2[t_1..t_k] (ring = free_t(k)).
PolyF2 pres_image_free(const PresMonomial& m, int k);

/// Whether the monomial dies in H*(X; Z), decided three ways: m2-image in the ideal
/// (t_i^{n_i+1}); divisibility by a consequence of relations (3)-(5); only the two cases a
/// reader of the vanishing argument would list (j outside I, and the full relation (5)).
bool pres_vanishes_by_ideal(const PresMonomial& m, const std::vector<int>& dims);
bool pres_vanishes_by_relations(const PresMonomial& m, const std::vector<int>& dims);
bool pres_vanishes_by_two_cases(const PresMonomial& m, const std::vector<int>& dims);

/// Expresses a torsion image as a sum of m2-images of normal-form monomials, if possible.
std::optional<std::vector<PresMonomial>> torsion_coordinates(const PolyF2& image, const std::vector<int>& dims);

struct DimensionCount {
    std::int64_t free_rank = 0;
    std::int64_t torsion_f2_dim = 0;
};

DimensionCount x_dimension_count(int n, const std::vector<int>& dims);

struct DimensionRow {
    int degree = 0;
    std::int64_t f2_dim = 0;         // dim H^n(X; F2) from the truncated ring
    DimensionCount presentation;     // from free monomials and normal-form torsion
    std::int64_t torsion_next = 0;   // presentation torsion in degree n+1
    std::int64_t oracle_free = 0;    // Smith normal form on the cellular tensor complex
    std::int64_t oracle_torsion = 0;
    bool ok = false;
};

struct DimensionReport {
    bool pass = true;
    std::optional<int> first_failure;
    std::string detail;
    std::vector<DimensionRow> rows;
};

/// Checks the short exact sequence count and the presentation against the SNF oracle.
DimensionReport x_verify_dims(const std::vector<int>& dims, int max_degree);

/// Rank of the m2-images of all normal-form monomials of the given degree in F2[t_1..t_k],
/// and their number; equal numbers mean the images are independent.
struct FaithfulnessRow {
    int degree = 0;
    std::size_t monomials = 0;
    std::size_t rank = 0;
    std::size_t ker_sq1_dim = 0;
};
std::vector<FaithfulnessRow> m2_faithfulness(int k, int max_degree);

}  // namespace rpfree
