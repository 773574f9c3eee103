#include "pwlab/exact_linalg.hpp"

#include <stdexcept>
#include <utility>

namespace pwlab {

RationalMatrix RationalMatrix::identity(std::size_t n)
{
    RationalMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i)
        m(i, i) = 1;
    return m;
}

RationalMatrix RationalMatrix::operator*(const RationalMatrix& rhs) const
{
    if (cols_ != rhs.rows_)
        throw std::invalid_argument("matrix dimension mismatch");
    RationalMatrix out(rows_, rhs.cols_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t k = 0; k < cols_; ++k) {
            const Rational& a = (*this)(i, k);
            if (sgn(a) == 0)
                continue;
            for (std::size_t j = 0; j < rhs.cols_; ++j)
                out(i, j) += a * rhs(k, j);
        }
    return out;
}

RationalMatrix RationalMatrix::transposed() const
{
    RationalMatrix out(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j)
            out(j, i) = (*this)(i, j);
    return out;
}

void RationalMatrix::swap_rows(std::size_t a, std::size_t b)
{
    if (a == b)
        return;
    for (std::size_t j = 0; j < cols_; ++j)
        std::swap((*this)(a, j), (*this)(b, j));
}

EchelonForm reduce_row_echelon(RationalMatrix& m, std::size_t pivot_limit)
{
    EchelonForm form;
    std::size_t row = 0;
    for (std::size_t col = 0; col < pivot_limit && row < m.rows(); ++col) {
        std::size_t pivot = row;
        while (pivot < m.rows() && sgn(m(pivot, col)) == 0)
            ++pivot;
        if (pivot == m.rows())
            continue;
        m.swap_rows(row, pivot);
        Rational inv = 1 / m(row, col);
        for (std::size_t j = col; j < m.cols(); ++j)
            m(row, j) *= inv;
        for (std::size_t i = 0; i < m.rows(); ++i) {
            if (i == row || sgn(m(i, col)) == 0)
                continue;
            Rational factor = m(i, col);
            for (std::size_t j = col; j < m.cols(); ++j)
                if (sgn(m(row, j)) != 0)
                    m(i, j) -= factor * m(row, j);
        }
        form.pivot_columns.push_back(col);
        ++row;
    }
    return form;
}

std::size_t rank(RationalMatrix m)
{
    return reduce_row_echelon(m).rank();
}

SemidefiniteResult check_positive_semidefinite(RationalMatrix m)
{
    if (m.rows() != m.cols())
        throw std::invalid_argument("semidefiniteness needs a square matrix");
    const std::size_t n = m.rows();
    std::vector<bool> eliminated(n, false);
    SemidefiniteResult result{true, 0};
    // Eliminate on positive diagonal pivots; a zero diagonal forces a zero
    // row, a negative one refutes semidefiniteness.
    for (;;) {
        std::size_t pivot = n;
        for (std::size_t i = 0; i < n; ++i) {
            if (eliminated[i])
                continue;
            int s = sgn(m(i, i));
            if (s < 0) {
                result.positive_semidefinite = false;
                return result;
            }
            if (s > 0) {
                pivot = i;
                break;
            }
        }
        if (pivot == n)
            break;
        eliminated[pivot] = true;
        ++result.rank;
        Rational inv = 1 / m(pivot, pivot);
        for (std::size_t i = 0; i < n; ++i) {
            if (eliminated[i] || sgn(m(i, pivot)) == 0)
                continue;
            Rational factor = m(i, pivot) * inv;
            for (std::size_t j = 0; j < n; ++j)
                if (!eliminated[j] && sgn(m(pivot, j)) != 0)
                    m(i, j) -= factor * m(pivot, j);
            m(i, pivot) = 0;
        }
        for (std::size_t j = 0; j < n; ++j)
            if (!eliminated[j])
                m(pivot, j) = 0;
    }
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (!eliminated[i] && !eliminated[j] && sgn(m(i, j)) != 0) {
                result.positive_semidefinite = false;
                return result;
            }
    return result;
}

std::vector<Rational> characteristic_polynomial(const RationalMatrix& m)
{
    // Faddeev-LeVerrier: M_k = A M_{k-1} + c_{n-k+1} I, c_{n-k} = -tr(A M_k)/k.
    const std::size_t n = m.rows();
    if (n != m.cols())
        throw std::invalid_argument("characteristic polynomial needs a square matrix");
    std::vector<Rational> coeffs(n + 1);
    coeffs[n] = 1;
    RationalMatrix acc(n, n);
    for (std::size_t k = 1; k <= n; ++k) {
        RationalMatrix next = m * acc;
        for (std::size_t i = 0; i < n; ++i)
            next(i, i) += coeffs[n - k + 1];
        acc = std::move(next);
        RationalMatrix prod = m * acc;
        Rational trace = 0;
        for (std::size_t i = 0; i < n; ++i)
            trace += prod(i, i);
        coeffs[n - k] = -trace / static_cast<long>(k);
    }
    return coeffs;
}

Rational evaluate_polynomial(const std::vector<Rational>& coeffs, const Rational& x)
{
    Rational value = 0;
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it)
        value = value * x + *it;
    return value;
}

std::vector<std::vector<Rational>> null_space(RationalMatrix m)
{
    const std::size_t cols = m.cols();
    EchelonForm form = reduce_row_echelon(m);
    std::vector<bool> is_pivot(cols, false);
    for (auto c : form.pivot_columns)
        is_pivot[c] = true;
    std::vector<std::vector<Rational>> basis;
    for (std::size_t free = 0; free < cols; ++free) {
        if (is_pivot[free])
            continue;
        std::vector<Rational> v(cols);
        v[free] = 1;
        for (std::size_t row = 0; row < form.rank(); ++row)
            v[form.pivot_columns[row]] = -m(row, free);
        basis.push_back(std::move(v));
    }
    return basis;
}

}  // namespace pwlab
