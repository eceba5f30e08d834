#include "opers/linalg.hpp"

#include <stdexcept>

namespace opers {

QMatrix QMatrix::identity(int n) {
    QMatrix m(n, n);
    for (int k = 0; k < n; ++k) m(k, k) = 1;
    return m;
}

QMatrix QMatrix::from_columns(const std::vector<std::vector<Rational>>& cols, int rows) {
    QMatrix m(rows, static_cast<int>(cols.size()));
    for (int c = 0; c < m.cols_; ++c)
        for (int r = 0; r < rows; ++r) m(r, c) = cols[c][r];
    return m;
}

std::vector<Rational> QMatrix::column(int c) const {
    std::vector<Rational> v(rows_);
    for (int r = 0; r < rows_; ++r) v[r] = (*this)(r, c);
    return v;
}

std::vector<Rational> QMatrix::apply(const std::vector<Rational>& v) const {
    if (static_cast<int>(v.size()) != cols_) throw std::invalid_argument("dimension mismatch");
    std::vector<Rational> out(rows_);
    for (int r = 0; r < rows_; ++r)
        for (int c = 0; c < cols_; ++c)
            if (sgn((*this)(r, c)) != 0 && sgn(v[c]) != 0) out[r] += (*this)(r, c) * v[c];
    return out;
}

QMatrix QMatrix::operator*(const QMatrix& o) const {
    if (cols_ != o.rows_) throw std::invalid_argument("dimension mismatch");
    QMatrix m(rows_, o.cols_);
    for (int r = 0; r < rows_; ++r)
        for (int k = 0; k < cols_; ++k) {
            const Rational& x = (*this)(r, k);
            if (sgn(x) == 0) continue;
            for (int c = 0; c < o.cols_; ++c)
                if (sgn(o(k, c)) != 0) m(r, c) += x * o(k, c);
        }
    return m;
}

QMatrix QMatrix::transpose() const {
    QMatrix m(cols_, rows_);
    for (int r = 0; r < rows_; ++r)
        for (int c = 0; c < cols_; ++c) m(c, r) = (*this)(r, c);
    return m;
}

QMatrix QMatrix::rows_subset(const std::vector<int>& rows) const {
    QMatrix m(static_cast<int>(rows.size()), cols_);
    for (int r = 0; r < m.rows_; ++r)
        for (int c = 0; c < cols_; ++c) m(r, c) = (*this)(rows[r], c);
    return m;
}

QMatrix QMatrix::cols_range(int first, int count) const {
    QMatrix m(rows_, count);
    for (int r = 0; r < rows_; ++r)
        for (int c = 0; c < count; ++c) m(r, c) = (*this)(r, first + c);
    return m;
}

QMatrix QMatrix::rows_range(int first, int count) const {
    QMatrix m(count, cols_);
    for (int r = 0; r < count; ++r)
        for (int c = 0; c < cols_; ++c) m(r, c) = (*this)(first + r, c);
    return m;
}

bool QMatrix::is_zero() const {
    for (const auto& x : a_)
        if (sgn(x) != 0) return false;
    return true;
}

std::vector<int> QMatrix::rref_in_place() {
    std::vector<int> pivots;
    int row = 0;
    for (int c = 0; c < cols_ && row < rows_; ++c) {
        int p = -1;
        for (int r = row; r < rows_; ++r)
            if (sgn((*this)(r, c)) != 0) {
                p = r;
                break;
            }
        if (p < 0) continue;
        if (p != row)
            for (int k = 0; k < cols_; ++k) std::swap((*this)(p, k), (*this)(row, k));
        Rational inv = 1 / (*this)(row, c);
        for (int k = 0; k < cols_; ++k) (*this)(row, k) *= inv;
        for (int r = 0; r < rows_; ++r) {
            if (r == row || sgn((*this)(r, c)) == 0) continue;
            Rational f = (*this)(r, c);
            for (int k = 0; k < cols_; ++k) (*this)(r, k) -= f * (*this)(row, k);
        }
        pivots.push_back(c);
        ++row;
    }
    return pivots;
}

int QMatrix::rank() const {
    QMatrix m = *this;
    return static_cast<int>(m.rref_in_place().size());
}

std::vector<std::vector<Rational>> QMatrix::nullspace() const {
    QMatrix m = *this;
    std::vector<int> pivots = m.rref_in_place();
    std::vector<bool> is_pivot(cols_, false);
    for (int p : pivots) is_pivot[p] = true;
    std::vector<std::vector<Rational>> basis;
    for (int f = 0; f < cols_; ++f) {
        if (is_pivot[f]) continue;
        std::vector<Rational> v(cols_);
        v[f] = 1;
        for (std::size_t r = 0; r < pivots.size(); ++r) v[pivots[r]] = -m(static_cast<int>(r), f);
        basis.push_back(std::move(v));
    }
    return basis;
}

std::vector<std::vector<Rational>> QMatrix::column_space() const {
    QMatrix m = *this;
    std::vector<std::vector<Rational>> basis;
    for (int p : m.rref_in_place()) basis.push_back(column(p));
    return basis;
}

QMatrix QMatrix::inverse() const {
    if (rows_ != cols_) throw std::domain_error("inverse of non-square matrix");
    int n = rows_;
    if (n == 0) return QMatrix();
    QMatrix aug(n, 2 * n);
    for (int r = 0; r < n; ++r) {
        for (int c = 0; c < n; ++c) aug(r, c) = (*this)(r, c);
        aug(r, n + r) = 1;
    }
    std::vector<int> pivots = aug.rref_in_place();
    if (static_cast<int>(pivots.size()) < n || pivots[n - 1] != n - 1)
        throw std::domain_error("singular matrix");
    return aug.cols_range(n, n);
}

}  // namespace opers
