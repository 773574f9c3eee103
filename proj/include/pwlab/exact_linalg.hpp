#pragma once

#include "pwlab/rational.hpp"

#include <cstddef>
#include <vector>

namespace pwlab {

/// Dense row-major matrix of exact rationals.
class RationalMatrix {
public:
    RationalMatrix() = default;
    RationalMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

    static RationalMatrix identity(std::size_t n);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    Rational& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const Rational& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    RationalMatrix operator*(const RationalMatrix& rhs) const;
    RationalMatrix transposed() const;
    bool operator==(const RationalMatrix& rhs) const = default;

    void swap_rows(std::size_t a, std::size_t b);

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<Rational> data_;
};

/// Outcome of reducing a matrix to reduced row-echelon form in place.
struct EchelonForm {
    /// Pivot column of each nonzero row, in row order (strictly increasing).
    std::vector<std::size_t> pivot_columns;
    std::size_t rank() const { return pivot_columns.size(); }
};

/// Reduced row-echelon form with leftmost-column pivoting. Columns at index
/// >= `pivot_limit` are carried along but never chosen as pivots (used for
/// augmented right-hand sides).
EchelonForm reduce_row_echelon(RationalMatrix& m, std::size_t pivot_limit);

inline EchelonForm reduce_row_echelon(RationalMatrix& m) { return reduce_row_echelon(m, m.cols()); }

std::size_t rank(RationalMatrix m);

/// Exact semidefiniteness test by symmetric elimination; also yields the rank.
struct SemidefiniteResult {
    bool positive_semidefinite = false;
    std::size_t rank = 0;
};

SemidefiniteResult check_positive_semidefinite(RationalMatrix m);

/// Characteristic polynomial det(xI - m) as coefficients c[0] + c[1] x + ... + x^n.
std::vector<Rational> characteristic_polynomial(const RationalMatrix& m);

Rational evaluate_polynomial(const std::vector<Rational>& coeffs, const Rational& x);

/// Basis of the right null space of m.
std::vector<std::vector<Rational>> null_space(RationalMatrix m);

}  // namespace pwlab
