#ifndef POLYMOM_POLYNOMIAL_HPP
#define POLYMOM_POLYNOMIAL_HPP

#include <algorithm>
#include <cstddef>
#include <utility>
#include <vector>

#include <polymom/error.hpp>
#include <polymom/scalar.hpp>

namespace polymom
{

///
/// Dense univariate polynomial, coefficients stored lowest degree first.
/// The zero polynomial has an empty coefficient vector.
///
template <scalar_type T>
class polynomial
{
public:
    polynomial() = default;

    explicit polynomial(std::vector<T> coefficients) : coef_(std::move(coefficients))
    {
        trim();
    }

    static polynomial from_roots(const std::vector<T>& roots)
    {
        polynomial p(std::vector<T>{T(1)});
        for (const auto& r : roots)
        {
            p = p * polynomial(std::vector<T>{T(-r), T(1)});
        }
        return p;
    }

    bool is_zero() const noexcept { return coef_.empty(); }

    /// Degree; -1 for the zero polynomial.
    long degree() const noexcept { return static_cast<long>(coef_.size()) - 1; }

    const std::vector<T>& coefficients() const noexcept { return coef_; }

    T coefficient(std::size_t i) const { return i < coef_.size() ? coef_[i] : T(0); }

    T leading() const { return coef_.empty() ? T(0) : coef_.back(); }

    T operator()(const T& x) const
    {
        T acc = 0;
        for (std::size_t i = coef_.size(); i-- > 0;)
        {
            acc = acc * x + coef_[i];
        }
        return acc;
    }

    polynomial derivative() const
    {
        if (coef_.size() <= 1)
        {
            return {};
        }
        std::vector<T> d(coef_.size() - 1);
        for (std::size_t i = 1; i < coef_.size(); ++i)
        {
            d[i - 1] = coef_[i] * T(static_cast<long>(i));
        }
        return polynomial(std::move(d));
    }

    polynomial monic() const
    {
        if (coef_.empty())
        {
            return {};
        }
        const T lead = coef_.back();
        std::vector<T> c(coef_);
        for (auto& x : c)
        {
            x /= lead;
        }
        return polynomial(std::move(c));
    }

    friend polynomial operator+(const polynomial& a, const polynomial& b)
    {
        std::vector<T> c(std::max(a.coef_.size(), b.coef_.size()), T(0));
        for (std::size_t i = 0; i < a.coef_.size(); ++i)
        {
            c[i] += a.coef_[i];
        }
        for (std::size_t i = 0; i < b.coef_.size(); ++i)
        {
            c[i] += b.coef_[i];
        }
        return polynomial(std::move(c));
    }

    friend polynomial operator-(const polynomial& a, const polynomial& b)
    {
        std::vector<T> c(std::max(a.coef_.size(), b.coef_.size()), T(0));
        for (std::size_t i = 0; i < a.coef_.size(); ++i)
        {
            c[i] += a.coef_[i];
        }
        for (std::size_t i = 0; i < b.coef_.size(); ++i)
        {
            c[i] -= b.coef_[i];
        }
        return polynomial(std::move(c));
    }

    friend polynomial operator*(const polynomial& a, const polynomial& b)
    {
        if (a.is_zero() || b.is_zero())
        {
            return {};
        }
        std::vector<T> c(a.coef_.size() + b.coef_.size() - 1, T(0));
        for (std::size_t i = 0; i < a.coef_.size(); ++i)
        {
            for (std::size_t j = 0; j < b.coef_.size(); ++j)
            {
                c[i + j] += a.coef_[i] * b.coef_[j];
            }
        }
        return polynomial(std::move(c));
    }

    friend polynomial operator*(const T& s, const polynomial& a)
    {
        std::vector<T> c(a.coef_);
        for (auto& x : c)
        {
            x *= s;
        }
        return polynomial(std::move(c));
    }

    friend bool operator==(const polynomial& a, const polynomial& b)
    {
        return a.coef_ == b.coef_;
    }

    /// Euclidean division a = q*b + r with deg r < deg b.
    friend std::pair<polynomial, polynomial> divmod(const polynomial& a,
                                                    const polynomial& b)
    {
        if (b.is_zero())
        {
            throw invalid_argument("polynomial division by zero");
        }
        if (a.degree() < b.degree())
        {
            return {polynomial{}, a};
        }
        std::vector<T> r(a.coef_);
        std::vector<T> q(static_cast<std::size_t>(a.degree() - b.degree() + 1), T(0));
        const std::size_t nb = b.coef_.size();
        for (std::size_t k = q.size(); k-- > 0;)
        {
            const T f = r[k + nb - 1] / b.coef_.back();
            q[k]      = f;
            for (std::size_t j = 0; j < nb; ++j)
            {
                r[k + j] -= f * b.coef_[j];
            }
            r[k + nb - 1] = 0;
        }
        r.resize(nb - 1);
        return {polynomial(std::move(q)), polynomial(std::move(r))};
    }

private:
    void trim()
    {
        while (!coef_.empty() && scalar_traits<T>::is_zero(coef_.back()))
        {
            coef_.pop_back();
        }
    }

    std::vector<T> coef_;
};

/// Monic gcd over Q (exact mode only).
inline polynomial<rational> gcd(polynomial<rational> a, polynomial<rational> b)
{
    while (!b.is_zero())
    {
        auto r = divmod(a, b).second;
        a      = std::move(b);
        b      = std::move(r);
    }
    return a.monic();
}

///
/// Square-free decomposition p = lc * prod_i f_i^i (Yun). Returns the pairs
/// (f_i, i) for non-constant f_i, each f_i monic and square-free.
///
inline std::vector<std::pair<polynomial<rational>, unsigned>>
squarefree_decomposition(const polynomial<rational>& p)
{
    std::vector<std::pair<polynomial<rational>, unsigned>> out;
    if (p.degree() < 1)
    {
        return out;
    }
    const auto f  = p.monic();
    const auto df = f.derivative();
    auto a        = gcd(f, df);
    auto b        = divmod(f, a).first;
    auto c        = divmod(df, a).first;
    auto d        = c - b.derivative();
    unsigned i    = 1;
    while (b.degree() >= 1)
    {
        auto g = gcd(b, d);
        if (g.degree() >= 1)
        {
            out.emplace_back(g, i);
        }
        b = divmod(b, g).first;
        c = divmod(d, g).first;
        d = c - b.derivative();
        ++i;
    }
    return out;
}

/// Product of the distinct monic irreducible factors (the radical).
inline polynomial<rational> squarefree_part(const polynomial<rational>& p)
{
    if (p.degree() < 1)
    {
        return polynomial<rational>(std::vector<rational>{rational(1)});
    }
    const auto f = p.monic();
    return divmod(f, gcd(f, f.derivative())).first.monic();
}

///
/// Newton interpolation through (nodes[i], values[i]); returns the unique
/// polynomial of degree < nodes.size().
///
template <scalar_type T>
polynomial<T> interpolate(const std::vector<T>& nodes, const std::vector<T>& values)
{
    if (nodes.size() != values.size() || nodes.empty())
    {
        throw invalid_argument("interpolation needs matching non-empty nodes/values");
    }
    const std::size_t n = nodes.size();
    std::vector<T> dd(values);
    for (std::size_t k = 1; k < n; ++k)
    {
        for (std::size_t i = n - 1; i >= k; --i)
        {
            const T den = nodes[i] - nodes[i - k];
            if (scalar_traits<T>::is_zero(den))
            {
                throw invalid_argument("repeated interpolation node");
            }
            dd[i] = (dd[i] - dd[i - 1]) / den;
            if (i == k)
            {
                break;
            }
        }
    }
    polynomial<T> p(std::vector<T>{dd[n - 1]});
    for (std::size_t k = n - 1; k-- > 0;)
    {
        p = p * polynomial<T>(std::vector<T>{T(-nodes[k]), T(1)}) +
            polynomial<T>(std::vector<T>{dd[k]});
    }
    return p;
}

} // namespace polymom

#endif // POLYMOM_POLYNOMIAL_HPP
