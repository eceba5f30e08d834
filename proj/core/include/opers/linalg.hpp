#pragma once

#include "opers/scalar.hpp"

#include <vector>

namespace opers {

// Dense exact matrix over the rationals, row-major.
class QMatrix {
public:
    QMatrix() = default;
    QMatrix(int rows, int cols) : rows_(rows), cols_(cols), a_(static_cast<std::size_t>(rows) * cols) {}
    static QMatrix identity(int n);
    static QMatrix from_columns(const std::vector<std::vector<Rational>>& cols, int rows);

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    Rational& operator()(int r, int c) { return a_[static_cast<std::size_t>(r) * cols_ + c]; }
    const Rational& operator()(int r, int c) const { return a_[static_cast<std::size_t>(r) * cols_ + c]; }

    std::vector<Rational> column(int c) const;
    std::vector<Rational> apply(const std::vector<Rational>& v) const;
    QMatrix operator*(const QMatrix& o) const;
    QMatrix transpose() const;
    QMatrix rows_subset(const std::vector<int>& rows) const;
    QMatrix cols_range(int first, int count) const;
    QMatrix rows_range(int first, int count) const;
    bool is_zero() const;
    friend bool operator==(const QMatrix& a, const QMatrix& b) {
        return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.a_ == b.a_;
    }

    int rank() const;
    // Basis of the null space; each vector has a 1 in one free column.
    std::vector<std::vector<Rational>> nullspace() const;
    // Basis of the column space (pivot columns of this matrix).
    std::vector<std::vector<Rational>> column_space() const;
    // Throws std::domain_error when singular.
    QMatrix inverse() const;

private:
    // Reduced row echelon form in place; returns pivot columns.
    std::vector<int> rref_in_place();

    int rows_ = 0, cols_ = 0;
    std::vector<Rational> a_;
};

}  // namespace opers
