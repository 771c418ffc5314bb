#include "rpfree/f2linalg.hpp"

#include <bit>
#include <stdexcept>

namespace rpfree {

BitVector& BitVector::operator^=(const BitVector& other)
{
    if (other.size_ != size_)
        throw std::invalid_argument("BitVector: size mismatch");
    for (std::size_t i = 0; i < words_.size(); ++i)
        words_[i] ^= other.words_[i];
    return *this;
}

bool BitVector::is_zero() const
{
    for (auto w : words_)
        if (w)
            return false;
    return true;
}

std::size_t BitVector::popcount() const
{
    std::size_t n = 0;
    for (auto w : words_)
        n += static_cast<std::size_t>(std::popcount(w));
    return n;
}

bool BitVector::dot(const BitVector& other) const
{
    if (other.size_ != size_)
        throw std::invalid_argument("BitVector: size mismatch");
    std::uint64_t acc = 0;
    for (std::size_t i = 0; i < words_.size(); ++i)
        acc ^= words_[i] & other.words_[i];
    return std::popcount(acc) & 1;
}

std::size_t BitVector::first_set() const
{
    for (std::size_t i = 0; i < words_.size(); ++i)
        if (words_[i])
            return i * 64 + static_cast<std::size_t>(std::countr_zero(words_[i]));
    return size_;
}

F2Matrix F2Matrix::identity(std::size_t n)
{
    F2Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i)
        m.set(i, i);
    return m;
}

F2Matrix F2Matrix::from_rows(std::size_t cols, std::vector<BitVector> rows)
{
    F2Matrix m;
    m.cols_ = cols;
    for (const auto& r : rows)
        if (r.size() != cols)
            throw std::invalid_argument("F2Matrix::from_rows: row length mismatch");
    m.rows_ = std::move(rows);
    return m;
}

F2Matrix F2Matrix::from_columns(std::size_t rows, const std::vector<BitVector>& columns)
{
    F2Matrix m(rows, columns.size());
    for (std::size_t c = 0; c < columns.size(); ++c) {
        if (columns[c].size() != rows)
            throw std::invalid_argument("F2Matrix::from_columns: column length mismatch");
        for (std::size_t r = columns[c].first_set(); r < rows; ++r)
            if (columns[c].get(r))
                m.set(r, c);
    }
    return m;
}

BitVector F2Matrix::column(std::size_t c) const
{
    BitVector v(rows());
    for (std::size_t r = 0; r < rows(); ++r)
        if (get(r, c))
            v.set(r);
    return v;
}

F2Matrix F2Matrix::transpose() const
{
    F2Matrix t(cols_, rows());
    for (std::size_t r = 0; r < rows(); ++r)
        for (std::size_t c = rows_[r].first_set(); c < cols_; ++c)
            if (get(r, c))
                t.set(c, r);
    return t;
}

BitVector F2Matrix::apply(const BitVector& v) const
{
    if (v.size() != cols_)
        throw std::invalid_argument("F2Matrix::apply: dimension mismatch");
    BitVector out(rows());
    for (std::size_t r = 0; r < rows(); ++r)
        if (rows_[r].dot(v))
            out.set(r);
    return out;
}

F2Matrix F2Matrix::operator*(const F2Matrix& rhs) const
{
    if (cols_ != rhs.rows())
        throw std::invalid_argument("F2Matrix::operator*: dimension mismatch");
    F2Matrix out(rows(), rhs.cols());
    for (std::size_t r = 0; r < rows(); ++r) {
        BitVector acc(rhs.cols());
        const auto& row = rows_[r];
        for (std::size_t k = row.first_set(); k < cols_; ++k)
            if (row.get(k))
                acc ^= rhs.rows_[k];
        out.rows_[r] = std::move(acc);
    }
    return out;
}

bool F2Matrix::is_zero() const
{
    for (const auto& r : rows_)
        if (!r.is_zero())
            return false;
    return true;
}

namespace {

/// In-place reduced row echelon form; returns pivot columns in order.
std::vector<std::size_t> rref(std::vector<BitVector>& rows, std::size_t cols)
{
    std::vector<std::size_t> pivots;
    std::size_t next = 0;
    for (std::size_t c = 0; c < cols && next < rows.size(); ++c) {
        std::size_t sel = next;
        while (sel < rows.size() && !rows[sel].get(c))
            ++sel;
        if (sel == rows.size())
            continue;
        std::swap(rows[sel], rows[next]);
        for (std::size_t r = 0; r < rows.size(); ++r)
            if (r != next && rows[r].get(c))
                rows[r] ^= rows[next];
        pivots.push_back(c);
        ++next;
    }
    return pivots;
}

}  // namespace

std::size_t F2Matrix::rank() const
{
    auto copy = rows_;
    return rref(copy, cols_).size();
}

std::vector<BitVector> F2Matrix::nullspace() const
{
    auto copy = rows_;
    const auto pivots = rref(copy, cols_);
    std::vector<bool> is_pivot(cols_, false);
    for (auto p : pivots)
        is_pivot[p] = true;
    std::vector<BitVector> basis;
    for (std::size_t f = 0; f < cols_; ++f) {
        if (is_pivot[f])
            continue;
        BitVector v(cols_);
        v.set(f);
        for (std::size_t i = 0; i < pivots.size(); ++i)
            if (copy[i].get(f))
                v.set(pivots[i]);
        basis.push_back(std::move(v));
    }
    return basis;
}

std::optional<BitVector> F2Matrix::solve(const BitVector& b) const
{
    if (b.size() != rows())
        throw std::invalid_argument("F2Matrix::solve: dimension mismatch");
    // Augment with b as an extra column.
    std::vector<BitVector> aug;
    aug.reserve(rows());
    for (std::size_t r = 0; r < rows(); ++r) {
        BitVector row(cols_ + 1);
        for (std::size_t c = rows_[r].first_set(); c < cols_; ++c)
            if (rows_[r].get(c))
                row.set(c);
        if (b.get(r))
            row.set(cols_);
        aug.push_back(std::move(row));
    }
    const auto pivots = rref(aug, cols_ + 1);
    if (!pivots.empty() && pivots.back() == cols_)
        return std::nullopt;
    BitVector x(cols_);
    for (std::size_t i = 0; i < pivots.size(); ++i)
        if (aug[i].get(cols_))
            x.set(pivots[i]);
    return x;
}

bool EchelonBasis::insert(const BitVector& v)
{
    BitVector combo(dim_);
    BitVector rem = reduce(v, &combo);
    if (rem.is_zero())
        return false;
    const std::size_t gen = pivots_.size();
    // combo now records generators summing to v - rem; rem = v + combo-sum.
    combo.flip(gen);
    rows_.push_back({std::move(rem), std::move(combo)});
    pivots_.push_back(rows_.back().vec.first_set());
    return true;
}

bool EchelonBasis::contains(const BitVector& v) const
{
    return reduce(v).is_zero();
}

BitVector EchelonBasis::reduce(BitVector v, BitVector* combination) const
{
    if (v.size() != dim_)
        throw std::invalid_argument("EchelonBasis: dimension mismatch");
    if (combination && combination->size() != dim_)
        *combination = BitVector(dim_);
    for (std::size_t i = 0; i < rows_.size(); ++i) {
        if (v.get(pivots_[i])) {
            v ^= rows_[i].vec;
            if (combination)
                *combination ^= rows_[i].combo;
        }
    }
    return v;
}

}  // namespace rpfree
