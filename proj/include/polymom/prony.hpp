#ifndef POLYMOM_PRONY_HPP
#define POLYMOM_PRONY_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include <polymom/error.hpp>
#include <polymom/forward.hpp>
#include <polymom/hankel.hpp>
#include <polymom/polynomial.hpp>
#include <polymom/roots.hpp>
#include <polymom/scalar.hpp>

namespace polymom
{

struct prony_options
{
    double rank_tol    = 1e-8;
    double real_tol    = 1e-7;
    double cluster_tol = 1e-6;
    /// Compare the rank of the leading (m-1)x(m-1) block with the rank at m.
    bool check_stability = true;
};

/// Monic minimal-kernel polynomial with its expected root multiplicity.
template <scalar_type T>
struct prony_polynomial
{
    polynomial<T> p;
    unsigned multiplicity = 1;

    std::size_t degree() const { return static_cast<std::size_t>(std::max(0L, p.degree())); }
};

/// Recovered projections <v, z> along one direction.
template <scalar_type T>
struct projection_set
{
    point<T> direction;
    std::vector<T> values;
    std::size_t rank = 0;
    std::size_t m    = 0;
    prony_polynomial<T> prony;
    double residual_max = 0;
    /// Projection displacement per unit relative perturbation of c (float
    /// mode; 0 in exact mode).
    double sensitivity = 0;
    std::vector<std::string> warnings;

    std::size_t size() const noexcept { return values.size(); }
};

/// Hankel size m = (d°+1) N + 1 for a bound N on the vertex count.
inline std::size_t hankel_size(std::size_t n, unsigned density_degree)
{
    return (density_degree + 1) * n + 1;
}

/// Moments mu_0.. needed to fill c_1..c_{2m-1}.
inline std::size_t moments_for_hankel(std::size_t m, std::size_t dim, unsigned density_degree)
{
    return moments_for_scaled_length(2 * m - 1, dim, density_degree);
}

/// Roots of the Prony polynomial, each checked to have the multiplicity
/// `expected`; returns the distinct roots ascending.
template <scalar_type T>
std::vector<T> prony_roots(const prony_polynomial<T>& pp, const prony_options& opt,
                           double* residual, std::vector<std::string>* warnings)
{
    std::vector<T> values;
    auto check = [&](unsigned mult, const std::string& at) {
        if (mult != pp.multiplicity)
        {
            throw multiplicity_mismatch("root " + at + " has multiplicity " +
                                        std::to_string(mult) + ", expected " +
                                        std::to_string(pp.multiplicity));
        }
    };
    std::size_t total = 0;
    if constexpr (scalar_traits<T>::is_exact)
    {
        for (const auto& r : roots_exact(pp.p))
        {
            check(r.multiplicity, format_rational(r.value));
            values.push_back(r.value);
            total += r.multiplicity;
        }
        if (residual)
        {
            *residual = 0;
        }
    }
    else
    {
        const auto res = roots_float(pp.p, opt.real_tol, opt.cluster_tol);
        for (const auto& r : res.roots)
        {
            check(r.multiplicity, scalar_traits<double>::to_text(r.value));
            values.push_back(r.value);
            total += r.multiplicity;
        }
        if (residual)
        {
            *residual = res.residual_max;
        }
        if (warnings)
        {
            warnings->insert(warnings->end(), res.warnings.begin(), res.warnings.end());
        }
    }
    if (total != pp.degree())
    {
        throw multiplicity_mismatch("only " + std::to_string(total) + " of " +
                                    std::to_string(pp.degree()) + " roots are real");
    }
    return values;
}

///
/// Steps 1-2 for one direction from c_1..c_{2m-1}: Hankel rank (with the
/// stability check) and the minimal kernel polynomial. Sets `rank`.
///
template <scalar_type T>
prony_polynomial<T> prony_polynomial_from_scaled(const scaled_vector<T>& c, std::size_t m,
                                                 const prony_options& opt, std::size_t* rank)
{
    const unsigned mult = c.density_degree + 1;
    auto hs             = build_hankel(c, m);
    const std::size_t r = hankel_rank(hs, opt.rank_tol);
    if (rank)
    {
        *rank = r;
    }
    if (r == m)
    {
        throw full_rank("Hankel matrix of size " + std::to_string(m) +
                        " has full rank: the vertex bound is too small");
    }
    if (opt.check_stability && m >= 2)
    {
        auto smaller         = build_hankel(c, m - 1);
        const std::size_t r2 = hankel_rank(smaller, opt.rank_tol);
        if (r2 != r)
        {
            throw rank_unstable("Hankel rank " + std::to_string(r2) + " at size " +
                                std::to_string(m - 1) + " but " + std::to_string(r) +
                                " at size " + std::to_string(m));
        }
    }
    if (r % mult != 0)
    {
        throw rank_not_divisible("Hankel rank " + std::to_string(r) +
                                 " is not a multiple of " + std::to_string(mult));
    }
    prony_polynomial<T> pp;
    pp.p            = minimal_kernel_vector(hs, opt.rank_tol);
    pp.multiplicity = mult;
    return pp;
}

///
/// Float mode: largest node displacement per unit relative perturbation
/// when c is perturbed by eps (1 + u), u uniform in [-1, 1], eps =
/// rank_tol / 10, over a few deterministic draws. Infinite when a perturbed
/// solve fails or changes the node count.
///
inline double projection_sensitivity(const scaled_vector<double>& c, const std::vector<double>& x,
                                     const prony_options& opt, std::size_t m)
{
    const double eps = opt.rank_tol / 10;
    std::mt19937_64 rng(0x51ab1e);
    double worst = 0;
    for (int trial = 0; trial < 4; ++trial)
    {
        scaled_vector<double> p = c;
        for (auto& v : p.c)
        {
            v *= 1.0 + eps * (2.0 * uniform_unit(rng) - 1.0);
        }
        try
        {
            std::size_t rank = 0;
            auto pp          = prony_polynomial_from_scaled(p, m, opt, &rank);
            const auto y     = prony_roots(pp, opt, nullptr, nullptr);
            if (y.size() != x.size())
            {
                return std::numeric_limits<double>::infinity();
            }
            for (std::size_t i = 0; i < x.size(); ++i)
            {
                worst = std::max(worst, std::fabs(y[i] - x[i]) / eps);
            }
        }
        catch (const error&)
        {
            return std::numeric_limits<double>::infinity();
        }
    }
    return worst;
}

/// Steps 1-3: additionally the roots, each of multiplicity d°+1.
template <scalar_type T>
projection_set<T> projections_from_scaled(const scaled_vector<T>& c, std::size_t m,
                                          const prony_options& opt = {})
{
    projection_set<T> out;
    out.m      = m;
    out.prony  = prony_polynomial_from_scaled(c, m, opt, &out.rank);
    out.values = prony_roots(out.prony, opt, &out.residual_max, &out.warnings);
    if (out.values.size() * out.prony.multiplicity != out.rank)
    {
        throw multiplicity_mismatch("root count does not match the rank");
    }
    if constexpr (!scalar_traits<T>::is_exact)
    {
        out.sensitivity = projection_sensitivity(c, out.values, opt, m);
    }
    return out;
}

/// Prony polynomial for a moment sequence with Hankel size m.
template <scalar_type T>
prony_polynomial<T> prony_polynomial_from_moments(const moment_sequence<T>& ms, std::size_t m,
                                                  const prony_options& opt = {},
                                                  std::size_t* rank = nullptr)
{
    const std::size_t need = moments_for_hankel(m, ms.dim, ms.density_degree);
    if (ms.moments.size() < need)
    {
        throw insufficient_moments(need, ms.moments.size());
    }
    return prony_polynomial_from_scaled(scaled_moment_vector(ms, 2 * m - 2), m, opt, rank);
}

///
/// Projections {<v,z>} from a moment sequence, with Hankel size
/// m = (d°+1) nmax + 1.
///
template <scalar_type T>
projection_set<T> projections_from_moments(const moment_sequence<T>& ms, std::size_t nmax,
                                           const prony_options& opt = {})
{
    if (nmax == 0)
    {
        throw invalid_argument("vertex bound must be positive");
    }
    const std::size_t m    = hankel_size(nmax, ms.density_degree);
    const std::size_t need = moments_for_hankel(m, ms.dim, ms.density_degree);
    if (ms.moments.size() < need)
    {
        throw insufficient_moments(need, ms.moments.size());
    }
    auto out      = projections_from_scaled(scaled_moment_vector(ms, 2 * m - 2), m, opt);
    out.direction = ms.direction;
    return out;
}

} // namespace polymom

#endif // POLYMOM_PRONY_HPP
