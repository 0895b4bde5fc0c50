#ifndef POLYMOM_DENSE_HPP
#define POLYMOM_DENSE_HPP

#include <cmath>
#include <cstddef>
#include <utility>
#include <vector>

#include <polymom/error.hpp>
#include <polymom/scalar.hpp>

namespace polymom
{

/// Small row-major dense matrix (geometry-sized systems, exact or float).
template <scalar_type T>
class matrix
{
public:
    matrix() = default;
    matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, T(0)) {}

    /// Matrix whose rows are the given vectors.
    static matrix from_rows(const std::vector<std::vector<T>>& rows)
    {
        const std::size_t c = rows.empty() ? 0 : rows.front().size();
        matrix m(rows.size(), c);
        for (std::size_t i = 0; i < rows.size(); ++i)
        {
            if (rows[i].size() != c)
            {
                throw invalid_argument("ragged matrix rows");
            }
            for (std::size_t j = 0; j < c; ++j)
            {
                m(i, j) = rows[i][j];
            }
        }
        return m;
    }

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }

    T& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const T& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    void swap_rows(std::size_t a, std::size_t b)
    {
        for (std::size_t j = 0; j < cols_; ++j)
        {
            std::swap((*this)(a, j), (*this)(b, j));
        }
    }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<T> data_;
};

namespace detail
{

/// Pivot row for column `col` at or below `from`: first nonzero in exact
/// mode, largest magnitude in float mode. Returns rows() if none.
template <scalar_type T>
std::size_t choose_pivot(const matrix<T>& a, std::size_t from, std::size_t col)
{
    std::size_t best = a.rows();
    if constexpr (scalar_traits<T>::is_exact)
    {
        for (std::size_t r = from; r < a.rows(); ++r)
        {
            if (!scalar_traits<T>::is_zero(a(r, col)))
            {
                return r;
            }
        }
    }
    else
    {
        double mag = 0.0;
        for (std::size_t r = from; r < a.rows(); ++r)
        {
            if (std::fabs(a(r, col)) > mag)
            {
                mag  = std::fabs(a(r, col));
                best = r;
            }
        }
    }
    return best;
}

} // namespace detail

template <scalar_type T>
T determinant(matrix<T> a)
{
    if (a.rows() != a.cols())
    {
        throw invalid_argument("determinant of a non-square matrix");
    }
    const std::size_t n = a.rows();
    T det               = 1;
    for (std::size_t k = 0; k < n; ++k)
    {
        const std::size_t p = detail::choose_pivot(a, k, k);
        if (p == n || scalar_traits<T>::is_zero(a(p, k)))
        {
            return T(0);
        }
        if (p != k)
        {
            a.swap_rows(p, k);
            det = -det;
        }
        det *= a(k, k);
        for (std::size_t i = k + 1; i < n; ++i)
        {
            if (scalar_traits<T>::is_zero(a(i, k)))
            {
                continue;
            }
            const T f = a(i, k) / a(k, k);
            for (std::size_t j = k; j < n; ++j)
            {
                a(i, j) -= f * a(k, j);
            }
        }
    }
    return det;
}

/// Solve A x = b for square nonsingular A.
template <scalar_type T>
std::vector<T> solve(matrix<T> a, std::vector<T> b)
{
    const std::size_t n = a.rows();
    if (a.cols() != n || b.size() != n)
    {
        throw invalid_argument("solve: dimension mismatch");
    }
    for (std::size_t k = 0; k < n; ++k)
    {
        const std::size_t p = detail::choose_pivot(a, k, k);
        if (p == n || scalar_traits<T>::is_zero(a(p, k)))
        {
            throw singular_matrix("singular linear system");
        }
        if (p != k)
        {
            a.swap_rows(p, k);
            std::swap(b[p], b[k]);
        }
        for (std::size_t i = k + 1; i < n; ++i)
        {
            if (scalar_traits<T>::is_zero(a(i, k)))
            {
                continue;
            }
            const T f = a(i, k) / a(k, k);
            for (std::size_t j = k; j < n; ++j)
            {
                a(i, j) -= f * a(k, j);
            }
            b[i] -= f * b[k];
        }
    }
    std::vector<T> x(n, T(0));
    for (std::size_t k = n; k-- > 0;)
    {
        T s = b[k];
        for (std::size_t j = k + 1; j < n; ++j)
        {
            s -= a(k, j) * x[j];
        }
        x[k] = s / a(k, k);
    }
    return x;
}

} // namespace polymom

#endif // POLYMOM_DENSE_HPP
