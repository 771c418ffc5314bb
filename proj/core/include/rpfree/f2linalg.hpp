#pragma once

// Dense bit-packed linear algebra over F2.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

namespace rpfree {

/// Fixed-length vector over F2, packed into 64-bit words.
class BitVector {
public:
    BitVector() = default;
    explicit BitVector(std::size_t size) : size_(size), words_((size + 63) / 64, 0) {}

    std::size_t size() const { return size_; }

    bool get(std::size_t i) const { return (words_[i >> 6] >> (i & 63)) & 1U; }
    void set(std::size_t i, bool v = true)
    {
        const std::uint64_t bit = std::uint64_t{1} << (i & 63);
        if (v)
            words_[i >> 6] |= bit;
        else
            words_[i >> 6] &= ~bit;
    }
    void flip(std::size_t i) { words_[i >> 6] ^= std::uint64_t{1} << (i & 63); }

    BitVector& operator^=(const BitVector& other);
    friend BitVector operator^(BitVector a, const BitVector& b) { return a ^= b; }
    friend bool operator==(const BitVector&, const BitVector&) = default;

    bool is_zero() const;
    std::size_t popcount() const;
    /// Dot product mod 2.
    bool dot(const BitVector& other) const;
    /// Index of the lowest set bit, or size() if zero.
    std::size_t first_set() const;

    const std::vector<std::uint64_t>& words() const { return words_; }

private:
    std::size_t size_ = 0;
    std::vector<std::uint64_t> words_;
};

/// Row-major dense matrix over F2.
class F2Matrix {
public:
    F2Matrix() = default;
    F2Matrix(std::size_t rows, std::size_t cols) : cols_(cols), rows_(rows, BitVector(cols)) {}

    static F2Matrix identity(std::size_t n);
    static F2Matrix from_rows(std::size_t cols, std::vector<BitVector> rows);
    /// Matrix whose j-th column is columns[j]; all columns must have the same length.
    static F2Matrix from_columns(std::size_t rows, const std::vector<BitVector>& columns);

    std::size_t rows() const { return rows_.size(); }
    std::size_t cols() const { return cols_; }

    bool get(std::size_t r, std::size_t c) const { return rows_[r].get(c); }
    void set(std::size_t r, std::size_t c, bool v = true) { rows_[r].set(c, v); }
    void flip(std::size_t r, std::size_t c) { rows_[r].flip(c); }

    const BitVector& row(std::size_t r) const { return rows_[r]; }
    BitVector column(std::size_t c) const;

    F2Matrix transpose() const;
    BitVector apply(const BitVector& v) const;
    F2Matrix operator*(const F2Matrix& rhs) const;
    friend bool operator==(const F2Matrix&, const F2Matrix&) = default;

    bool is_zero() const;
    std::size_t rank() const;

    /// Basis of {v : M v = 0}, one vector per free column of the reduced echelon form.
    std::vector<BitVector> nullspace() const;
    /// Some v with M v = b, if one exists.
    std::optional<BitVector> solve(const BitVector& b) const;

private:
    std::size_t cols_ = 0;
    std::vector<BitVector> rows_;
};

/// Row space maintained in reduced echelon form; supports membership and coordinates.
///
/// Vectors are added one at a time. Each accepted vector becomes a generator; `reduce`
/// expresses any vector modulo the span and records which generators were used.
class EchelonBasis {
public:
    explicit EchelonBasis(std::size_t dim) : dim_(dim) {}

    std::size_t dim() const { return dim_; }
    std::size_t rank() const { return pivots_.size(); }

    /// Inserts v; returns false (and changes nothing) if v is already in the span.
    bool insert(const BitVector& v);
    bool contains(const BitVector& v) const;

    /// Reduces v against the span. `combination` (optional) receives the set of
    /// generator indices (in insertion order) whose sum equals v minus the remainder.
    BitVector reduce(BitVector v, BitVector* combination = nullptr) const;

private:
    std::size_t dim_;
    struct Row {
        BitVector vec;
        BitVector combo;  // generators summing to vec
    };
    std::vector<Row> rows_;
    std::vector<std::size_t> pivots_;
};

}  // namespace rpfree
