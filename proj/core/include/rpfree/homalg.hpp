#pragma once

// Exact integer homological algebra: Smith normal form, cohomology of bounded cochain
// complexes with Z or Z/m coefficients, cellular complexes of RP^n and tensor products,
// connecting homomorphisms and the 3x3 anticommutation check.

#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace rpfree {

/// Dense integer matrix; arithmetic throws std::overflow_error instead of wrapping.
class IntMatrix {
public:
    IntMatrix() = default;
    IntMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, 0) {}
    IntMatrix(std::size_t rows, std::size_t cols, std::vector<std::int64_t> data);

    static IntMatrix identity(std::size_t n);
    static IntMatrix scalar(std::size_t n, std::int64_t s);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    std::int64_t& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    std::int64_t operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    IntMatrix operator*(const IntMatrix& rhs) const;
    std::vector<std::int64_t> apply(const std::vector<std::int64_t>& v) const;
    IntMatrix transpose() const;
    /// [this | rhs]
    IntMatrix hcat(const IntMatrix& rhs) const;
    bool is_zero() const;
    /// Every entry divisible by m (m = 0: every entry zero).
    bool is_zero_mod(std::int64_t m) const;

    friend bool operator==(const IntMatrix&, const IntMatrix&) = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<std::int64_t> data_;
};

std::int64_t checked_add(std::int64_t a, std::int64_t b);
std::int64_t checked_mul(std::int64_t a, std::int64_t b);
/// Representative in [0, m) for m > 0; identity for m = 0.
std::int64_t reduce_mod(std::int64_t a, std::int64_t m);

/// U * M * V = S with S diagonal, nonnegative, in divisibility order; U and V unimodular.
struct SmithForm {
    IntMatrix s, u, v;
    IntMatrix u_inv, v_inv;
    std::size_t rank = 0;
    std::vector<std::int64_t> diagonal() const;
};

SmithForm snf(const IntMatrix& m);

/// Determinant by fraction-free elimination (Bareiss).
std::int64_t determinant(const IntMatrix& m);

/// Some integer x with M x = b exactly.
std::optional<std::vector<std::int64_t>> solve_integer(const IntMatrix& m,
                                                       const std::vector<std::int64_t>& b);
/// Some integer x with M x = b modulo `modulus` (exact when modulus = 0).
std::optional<std::vector<std::int64_t>> solve_mod(const IntMatrix& m,
                                                   const std::vector<std::int64_t>& b,
                                                   std::int64_t modulus);
/// Z-basis of {x : M x = 0}, as columns.
IntMatrix integer_kernel(const IntMatrix& m);

/// Z^free_rank + Z/t_1 + ... with t_1 | t_2 | ... and every t_i >= 2.
struct FGAbelianGroup {
    std::int64_t free_rank = 0;
    std::vector<std::int64_t> torsion;

    bool is_zero() const { return free_rank == 0 && torsion.empty(); }
    /// Number of Z/2-summands when every torsion coefficient is 2.
    std::int64_t two_torsion_rank() const;
    std::string to_string() const;
    friend bool operator==(const FGAbelianGroup&, const FGAbelianGroup&) = default;
};

/// Z (modulus 0) or Z/m.
struct Coefficients {
    std::int64_t modulus = 0;
    static Coefficients integers() { return {0}; }
    static Coefficients mod(std::int64_t m);
};

/// Free cochain complex C^lo -> ... -> C^hi with integer coboundaries d^n : C^n -> C^{n+1}.
class CochainComplexZ {
public:
    CochainComplexZ() = default;
    /// `differentials[i]` maps degree lo+i to lo+i+1; size must be ranks.size() - 1.
    CochainComplexZ(int lo, std::vector<std::size_t> ranks, std::vector<IntMatrix> differentials);

    int lo() const { return lo_; }
    int hi() const { return lo_ + static_cast<int>(ranks_.size()) - 1; }
    bool in_range(int n) const { return n >= lo_ && n <= hi(); }
    std::size_t rank(int n) const;
    /// d^n, a zero matrix of the right shape outside the stored range.
    IntMatrix d(int n) const;

    /// d^{n+1} d^n = 0 modulo `modulus` for every n.
    bool is_complex(std::int64_t modulus = 0) const;

private:
    int lo_ = 0;
    std::vector<std::size_t> ranks_;
    std::vector<IntMatrix> d_;
};

/// H^n(C; coefficients) with coordinates for individual classes.
///
/// Cocycles are the lattice {x : d x = 0 mod m} with basis B; the group is the cokernel
/// of the coboundaries (plus m Z^c) written in B-coordinates and diagonalized.
class CohomologyGroup {
public:
    CohomologyGroup(const CochainComplexZ& c, int n, Coefficients coeff = {});

    const FGAbelianGroup& group() const { return group_; }
    bool is_cocycle(const std::vector<std::int64_t>& x) const;
    /// Coordinates of [x]: torsion summands first (reduced), then free summands.
    std::vector<std::int64_t> coordinates(const std::vector<std::int64_t>& cocycle) const;
    /// Cocycle representing the j-th summand generator.
    std::vector<std::int64_t> generator(std::size_t j) const;
    std::size_t generator_count() const { return gen_count_; }
    /// Order of the class with the given coordinates; 0 means infinite order.
    std::int64_t order(const std::vector<std::int64_t>& coords) const;
    bool is_zero(const std::vector<std::int64_t>& coords) const;

private:
    IntMatrix d_;           // d^n
    std::int64_t modulus_;  // 0 for Z
    IntMatrix basis_;       // c x t, columns span the cocycle lattice
    SmithForm relations_;   // of the t x g relation matrix
    std::vector<std::size_t> kept_;  // summand indices with invariant factor != 1
    std::vector<std::int64_t> orders_;
    std::size_t gen_count_ = 0;
    FGAbelianGroup group_;
};

FGAbelianGroup cohomology(const CochainComplexZ& c, int n, Coefficients coeff = {});

CochainComplexZ point_complex();
/// Cellular cochains of RP^n: Z in degrees 0..n, d^i = 0 for i even, 2 for i odd.
CochainComplexZ rp_complex(int n);
/// Signed tensor product; the basis of (A (x) B)^n runs over p ascending, then a, then b.
CochainComplexZ tensor(const CochainComplexZ& a, const CochainComplexZ& b);
/// Tensor product of rp_complex(n_i).
CochainComplexZ rp_product_complex(const std::vector<int>& dims);

struct GroupElement {
    FGAbelianGroup group;
    std::vector<std::int64_t> coords;
    std::int64_t order = 1;
    bool is_zero() const { return order == 1; }
};

/// Integral Bockstein of a mod-2 cocycle in degree n: lift, apply d, halve, take the class
/// in H^{n+1}(C; Z). Throws std::invalid_argument when x is not a mod-2 cocycle.
GroupElement bockstein0(const CochainComplexZ& c, const std::vector<std::uint8_t>& x, int n);

// ---------------------------------------------------------------------------
// 3x3 diagrams of short exact sequences

struct CoefComplex {
    CochainComplexZ complex;
    std::int64_t modulus = 0;
};

/// One integer matrix per degree lo..hi of the source complex.
struct ChainMap {
    int lo = 0;
    std::vector<IntMatrix> maps;
    const IntMatrix& at(int n) const { return maps.at(static_cast<std::size_t>(n - lo)); }
};

class InvalidDiagram : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// grid[row][col]; horizontal[row] = {col0 -> col1, col1 -> col2};
/// vertical[col] = {row0 -> row1, row1 -> row2}. All complexes share one degree range.
struct NineDiagram {
    std::array<std::array<CoefComplex, 3>, 3> grid;
    std::array<std::array<ChainMap, 2>, 3> horizontal;
    std::array<std::array<ChainMap, 2>, 3> vertical;
    std::string label;
};

/// Throws InvalidDiagram naming the first failing complex, map, square, row or column.
void validate(const NineDiagram& d);

/// Connecting homomorphism of 0 -> a -> b -> c -> 0 at cochain level: returns a cocycle of
/// `a` in degree k+1 for a cocycle x of `c` in degree k.
std::vector<std::int64_t> connecting_cochain(const CoefComplex& a, const CoefComplex& b,
                                             const CoefComplex& c, const ChainMap& inc,
                                             const ChainMap& proj, int k,
                                             const std::vector<std::int64_t>& x);

struct CompositeWitness {
    std::vector<std::int64_t> source;        // generator cocycle in C''^{n-1}
    std::vector<std::int64_t> via_h3_v1;     // class of delta_v1 delta_h3 [x] in H^{n+1}(A)
    std::vector<std::int64_t> via_v3_h1;     // class of delta_h1 delta_v3 [x]
    std::int64_t order = 1;                  // order of the composite class (0 = infinite)
    bool anticommutes = false;               // first == -second
    bool commutes = false;                   // first == +second
};

struct NineCheckResult {
    bool holds = false;
    int degree = 0;
    FGAbelianGroup source_group;
    FGAbelianGroup target_group;
    std::vector<CompositeWitness> witnesses;
    std::int64_t max_order() const;
};

/// Compares delta_v1 o delta_h3 with -(delta_h1 o delta_v3) on every generator of H^{n-1}
/// of the bottom-right corner. Validates the diagram first.
NineCheckResult nine_check(const NineDiagram& d, int n);

/// A finite cell complex given by its cochain complex, with a subcomplex marked per cell.
struct CellularPair {
    std::string name;
    CochainComplexZ space;
    std::vector<std::vector<bool>> in_subcomplex;  // [degree - lo][cell]
};

/// (D^k, S^{k-1}) with S^{k-1} = e^0 u e^{k-1} (two points when k = 1).
CellularPair disk_pair(int k);
/// (RP^n, RP^{n-1}).
CellularPair rp_pair(int n);
/// (C M, M) for the Moore space M = S^1 u_m e^2; H^3(CM, M; Z) = Z/m.
CellularPair moore_cone_pair(std::int64_t m);

/// Rows 0 -> C*(E,F; A) -> C*(E; A) -> C*(F; A) -> 0 for the coefficient column
/// 0 -> Z --(x m)--> Z -> Z/m -> 0.
NineDiagram pair_coefficient_diagram(const CellularPair& pair, std::int64_t m);

}  // namespace rpfree
