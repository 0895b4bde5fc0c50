#ifndef POLYMOM_HANKEL_HPP
#define POLYMOM_HANKEL_HPP

#include <algorithm>
#include <cstddef>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include <polymom/dense.hpp>
#include <polymom/error.hpp>
#include <polymom/forward.hpp>
#include <polymom/polynomial.hpp>
#include <polymom/scalar.hpp>

namespace polymom
{

template <scalar_type T>
struct hankel_system
{
    std::size_t m = 0;
    matrix<T> h;
    std::optional<std::size_t> rank;
    /// Kernel basis, one vector per free column (exact) or per trailing
    /// singular vector (float).
    std::vector<std::vector<T>> kernel;
    /// Singular values in decreasing order (float mode only).
    std::vector<double> singular_values;
};

/// H[i][j] = c_{i+j+1} from the 1-based entries c_1..c_{2m-1}.
template <scalar_type T>
hankel_system<T> build_hankel(const std::vector<T>& c, std::size_t m)
{
    if (m == 0)
    {
        throw invalid_argument("Hankel size must be positive");
    }
    if (c.size() < 2 * m - 1)
    {
        throw insufficient_moments(2 * m - 1, c.size());
    }
    hankel_system<T> hs;
    hs.m = m;
    hs.h = matrix<T>(m, m);
    for (std::size_t i = 0; i < m; ++i)
    {
        for (std::size_t j = 0; j < m; ++j)
        {
            hs.h(i, j) = c[i + j];
        }
    }
    return hs;
}

template <scalar_type T>
hankel_system<T> build_hankel(const scaled_vector<T>& c, std::size_t m)
{
    return build_hankel(c.c, m);
}

namespace detail
{

/// Row-echelon data from fraction-free elimination: the echelon rows (as
/// rationals) and the pivot column of each.
struct echelon_form
{
    std::vector<std::vector<rational>> rows;
    std::vector<std::size_t> pivots;
};

///
/// Bareiss elimination on the integer matrix obtained by clearing each
/// row's denominators. Pivot: first nonzero entry by row order.
///
inline echelon_form bareiss_echelon(const matrix<rational>& a)
{
    const std::size_t n = a.rows();
    const std::size_t m = a.cols();
    std::vector<std::vector<integer>> w(n, std::vector<integer>(m));
    for (std::size_t i = 0; i < n; ++i)
    {
        integer l = 1;
        for (std::size_t j = 0; j < m; ++j)
        {
            mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), a(i, j).get_den_mpz_t());
        }
        for (std::size_t j = 0; j < m; ++j)
        {
            w[i][j] = a(i, j).get_num() * (l / a(i, j).get_den());
        }
    }
    echelon_form out;
    integer prev = 1;
    std::size_t k = 0;
    for (std::size_t col = 0; col < m && k < n; ++col)
    {
        std::size_t p = k;
        while (p < n && sgn(w[p][col]) == 0)
        {
            ++p;
        }
        if (p == n)
        {
            continue;
        }
        std::swap(w[p], w[k]);
        for (std::size_t i = k + 1; i < n; ++i)
        {
            for (std::size_t j = col + 1; j < m; ++j)
            {
                integer t = w[k][col] * w[i][j] - w[i][col] * w[k][j];
                mpz_divexact(w[i][j].get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
            }
            w[i][col] = 0;
        }
        prev = w[k][col];
        out.pivots.push_back(col);
        ++k;
    }
    for (std::size_t i = 0; i < k; ++i)
    {
        std::vector<rational> row(m);
        for (std::size_t j = 0; j < m; ++j)
        {
            row[j] = rational(w[i][j]);
        }
        out.rows.push_back(std::move(row));
    }
    return out;
}

/// Kernel vector with x_free = 1 and the other free columns zero.
inline std::vector<rational> kernel_vector(const echelon_form& e, std::size_t cols,
                                           std::size_t free_col)
{
    std::vector<rational> x(cols, rational(0));
    x[free_col] = 1;
    for (std::size_t r = e.rows.size(); r-- > 0;)
    {
        const std::size_t pc = e.pivots[r];
        if (pc > free_col)
        {
            continue;
        }
        rational s = 0;
        for (std::size_t j = pc + 1; j < cols; ++j)
        {
            if (sgn(x[j]) != 0)
            {
                s += e.rows[r][j] * x[j];
            }
        }
        x[pc] = -s / e.rows[r][pc];
    }
    return x;
}

inline Eigen::MatrixXd to_eigen(const matrix<double>& a)
{
    Eigen::MatrixXd m(a.rows(), a.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
    {
        for (std::size_t j = 0; j < a.cols(); ++j)
        {
            m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = a(i, j);
        }
    }
    return m;
}

} // namespace detail

///
/// Rank and kernel basis. Exact mode: fraction-free elimination, basis
/// vectors indexed by free column. Float mode: rank = #{sigma_i > tau *
/// sigma_max}, kernel = trailing right singular vectors.
///
template <scalar_type T>
void rank_and_kernel(hankel_system<T>& hs, double tau = 1e-8)
{
    const std::size_t m = hs.m;
    hs.kernel.clear();
    if constexpr (scalar_traits<T>::is_exact)
    {
        const auto e = detail::bareiss_echelon(hs.h);
        hs.rank      = e.pivots.size();
        std::vector<bool> is_pivot(m, false);
        for (auto pc : e.pivots)
        {
            is_pivot[pc] = true;
        }
        for (std::size_t f = 0; f < m; ++f)
        {
            if (!is_pivot[f])
            {
                hs.kernel.push_back(detail::kernel_vector(e, m, f));
            }
        }
    }
    else
    {
        if (!(tau > 0))
        {
            throw invalid_argument("rank threshold must be positive");
        }
        Eigen::JacobiSVD<Eigen::MatrixXd> svd(detail::to_eigen(hs.h), Eigen::ComputeFullV);
        const auto& s = svd.singularValues();
        hs.singular_values.assign(s.data(), s.data() + s.size());
        std::size_t r = 0;
        if (s.size() > 0 && s(0) > 0)
        {
            for (Eigen::Index i = 0; i < s.size(); ++i)
            {
                if (s(i) > tau * s(0))
                {
                    ++r;
                }
            }
        }
        hs.rank       = r;
        const auto& v = svd.matrixV();
        for (std::size_t c = r; c < m; ++c)
        {
            std::vector<double> col(m);
            for (std::size_t i = 0; i < m; ++i)
            {
                col[i] = v(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(c));
            }
            hs.kernel.push_back(std::move(col));
        }
    }
}

template <scalar_type T>
std::size_t hankel_rank(hankel_system<T>& hs, double tau = 1e-8)
{
    if (!hs.rank)
    {
        rank_and_kernel(hs, tau);
    }
    return *hs.rank;
}

///
/// Monic polynomial t^M + a_{M-1} t^{M-1} + ... + a_0 from the kernel vector
/// (a_0, ..., a_{M-1}, 1, 0, ..., 0) with the fewest nonzero trailing
/// entries. M must equal the rank.
///
template <scalar_type T>
polynomial<T> minimal_kernel_vector(hankel_system<T>& hs, double tau = 1e-8)
{
    const std::size_t r = hankel_rank(hs, tau);
    const std::size_t m = hs.m;
    if (r == m)
    {
        throw full_rank("Hankel matrix of size " + std::to_string(m) +
                        " has full rank: more moments are needed");
    }
    std::vector<T> a;
    if constexpr (scalar_traits<T>::is_exact)
    {
        // The first kernel vector belongs to the first free column M.
        const auto& x     = hs.kernel.front();
        std::size_t first = m;
        for (std::size_t i = 0; i < m; ++i)
        {
            if (sgn(x[i]) != 0)
            {
                first = i;
            }
        }
        // `first` is the index of the last nonzero entry, i.e. M.
        if (first != r)
        {
            throw rank_unstable("minimal kernel vector has degree " + std::to_string(first) +
                                " but the rank is " + std::to_string(r));
        }
        a.assign(x.begin(), x.begin() + static_cast<std::ptrdiff_t>(r) + 1);
        const T lead = a.back();
        for (auto& ai : a)
        {
            ai /= lead;
        }
    }
    else
    {
        const std::size_t k = hs.kernel.size();
        Eigen::MatrixXd sub(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k));
        for (std::size_t i = 0; i < k; ++i)
        {
            for (std::size_t j = 0; j < k; ++j)
            {
                sub(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                    hs.kernel[j][r + i];
            }
        }
        Eigen::VectorXd e0 = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(k));
        e0(0)              = 1.0;
        Eigen::FullPivLU<Eigen::MatrixXd> lu(sub);
        if (!lu.isInvertible())
        {
            throw rank_unstable("kernel has no vector of the Vandermonde shape");
        }
        const Eigen::VectorXd y = lu.solve(e0);
        a.assign(r + 1, 0.0);
        for (std::size_t i = 0; i < r; ++i)
        {
            double s = 0;
            for (std::size_t j = 0; j < k; ++j)
            {
                s += hs.kernel[j][i] * y(static_cast<Eigen::Index>(j));
            }
            a[i] = s;
        }
        a[r] = 1.0;
    }
    return polynomial<T>(std::move(a));
}

} // namespace polymom

#endif // POLYMOM_HANKEL_HPP
