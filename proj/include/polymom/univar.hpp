#ifndef POLYMOM_UNIVAR_HPP
#define POLYMOM_UNIVAR_HPP

#include <algorithm>
#include <cstddef>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <polymom/error.hpp>
#include <polymom/oracle.hpp>
#include <polymom/polynomial.hpp>
#include <polymom/prony.hpp>
#include <polymom/reconstruct.hpp>
#include <polymom/scalar.hpp>

namespace polymom
{

///
/// Samples of f_ab(s, t) = p_{a+sb}(t) at nodes s_0 = 0, s_1, ..., s_N and,
/// for each power t^i (i < N), the interpolating polynomial in s of its
/// coefficient. The t^N coefficient is identically 1.
///
template <scalar_type T>
struct bivariate_samples
{
    point<T> a;
    point<T> b;
    std::size_t n = 0;
    std::vector<T> nodes;
    std::vector<polynomial<T>> samples;
    std::vector<polynomial<T>> coefficient_in_s;
};

/// p_a, its derivative, and g_{a,b_j} for each basis vector b_j.
template <scalar_type T>
struct univar_rep
{
    point<T> a;
    polynomial<T> pa;
    polynomial<T> dpa;
    std::vector<polynomial<T>> g;
};

template <scalar_type T>
struct univar_options
{
    std::size_t nmax = 0;
    std::optional<unsigned> density_degree;
    unsigned long denominator = default_direction_denominator();
    std::uint64_t seed        = 1;
    prony_options prony;
    std::size_t direction_retries = 8;
    /// Fallback nodes tried per failing sample before giving up.
    std::size_t node_retries = 0;
};

template <scalar_type T>
struct univar_result
{
    std::vector<point<T>> vertices;
    univar_rep<T> rep;
    std::size_t moment_count    = 0;
    std::size_t direction_count = 0;
    std::size_t retries         = 0;
    std::vector<std::string> retry_log;
    /// moment_count / (d N^2).
    double budget_constant = 0;
};

namespace detail
{

///
/// Monic Prony polynomial along z reduced to its square-free part, checked
/// to have degree n without finding roots. For d° > 0 the polynomial must be
/// that square-free part raised to d°+1.
///
template <scalar_type T>
polynomial<T> generic_prony(moment_oracle<T>& oracle, const point<T>& z, std::size_t n,
                            unsigned dd, const prony_options& opt)
{
    const std::size_t m     = hankel_size(n, dd);
    const std::size_t count = moments_for_hankel(m, oracle.dim(), dd);
    moment_sequence<T> ms;
    ms.dim            = oracle.dim();
    ms.direction      = z;
    ms.density_degree = dd;
    ms.moments        = oracle.moments(std::span<const T>(z), count);
    std::size_t rank  = 0;
    const auto pp     = prony_polynomial_from_moments(ms, m, opt, &rank);
    if (pp.degree() != (dd + 1) * n)
    {
        throw nongeneric_direction("Prony polynomial has degree " + std::to_string(pp.degree()) +
                                   ", expected " + std::to_string((dd + 1) * n));
    }
    if constexpr (scalar_traits<T>::is_exact)
    {
        const auto q = squarefree_part(pp.p);
        if (q.degree() != static_cast<long>(n))
        {
            throw nongeneric_direction("Prony polynomial has repeated projections");
        }
        if (dd > 0)
        {
            polynomial<T> pw(std::vector<T>{T(1)});
            for (unsigned k = 0; k <= dd; ++k)
            {
                pw = pw * q;
            }
            if (!(pw == pp.p))
            {
                throw multiplicity_mismatch("Prony roots do not all have multiplicity d°+1");
            }
        }
        return q;
    }
    else
    {
        if (dd > 0)
        {
            throw invalid_argument("float-mode univariate route supports uniform density only");
        }
        return pp.p;
    }
}

template <scalar_type T>
std::vector<T> fallback_nodes(std::size_t s, std::size_t count)
{
    std::vector<T> out;
    for (std::size_t k = 2; out.size() < count; ++k)
    {
        if constexpr (scalar_traits<T>::is_exact)
        {
            out.push_back(rational(static_cast<long>(s)) + rational(1, static_cast<unsigned long>(k)));
        }
        else
        {
            out.push_back(static_cast<double>(s) + 1.0 / static_cast<double>(k));
        }
    }
    return out;
}

} // namespace detail

///
/// Interpolate the t-coefficients of f_ab(s, t) = p_{a+sb}(t) in s from the
/// nodes s = 0, 1, ..., N. A non-generic node s >= 1 is replaced by
/// s + 1/2, s + 1/3, ...; s = 0 must be generic. The monic p_a is passed
/// in as the s = 0 sample.
///
template <scalar_type T>
bivariate_samples<T> interpolate_fab(moment_oracle<T>& oracle, const point<T>& a,
                                     const polynomial<T>& pa, const point<T>& b, std::size_t n,
                                     unsigned dd, const prony_options& opt,
                                     std::size_t node_retries = 0,
                                     std::vector<std::string>* log = nullptr)
{
    bivariate_samples<T> out;
    out.a = a;
    out.b = b;
    out.n = n;
    out.nodes.push_back(T(0));
    out.samples.push_back(pa);
    const std::size_t retries = node_retries ? node_retries : n + 1;
    for (std::size_t s = 1; s <= n; ++s)
    {
        std::vector<T> candidates{T(static_cast<long>(s))};
        const auto extra = detail::fallback_nodes<T>(s, retries);
        candidates.insert(candidates.end(), extra.begin(), extra.end());
        bool ok = false;
        for (const auto& node : candidates)
        {
            if (std::find(out.nodes.begin(), out.nodes.end(), node) != out.nodes.end())
            {
                continue;
            }
            point<T> z(a.size());
            for (std::size_t k = 0; k < z.size(); ++k)
            {
                z[k] = a[k] + node * b[k];
            }
            try
            {
                out.samples.push_back(detail::generic_prony(oracle, z, n, dd, opt));
                out.nodes.push_back(node);
                ok = true;
                break;
            }
            catch (const nongeneric_direction& e)
            {
                if (log)
                {
                    log->push_back("node s=" + scalar_traits<T>::to_text(node) + ": " + e.what());
                }
            }
            catch (const full_rank& e)
            {
                if (log)
                {
                    log->push_back("node s=" + scalar_traits<T>::to_text(node) + ": " + e.what());
                }
            }
        }
        if (!ok)
        {
            throw retries_exhausted("no generic interpolation node near s=" + std::to_string(s));
        }
    }
    for (std::size_t i = 0; i < n; ++i)
    {
        std::vector<T> vals;
        for (const auto& smp : out.samples)
        {
            vals.push_back(smp.coefficient(i));
        }
        out.coefficient_in_s.push_back(interpolate(out.nodes, vals));
    }
    return out;
}

/// g_ab(t) = d/ds f_ab(s, t) at s = 0.
template <scalar_type T>
polynomial<T> g_from_f(const bivariate_samples<T>& f)
{
    std::vector<T> g;
    for (const auto& c : f.coefficient_in_s)
    {
        g.push_back(c.coefficient(1));
    }
    return polynomial<T>(std::move(g));
}

/// <w, b> = -g_ab(theta) / p_a'(theta) at theta = <w, a>.
template <scalar_type T>
T univar_coordinate(const polynomial<T>& g, const polynomial<T>& dpa, const T& theta)
{
    const T den = dpa(theta);
    if (scalar_traits<T>::is_zero(den))
    {
        throw nongeneric_direction("p_a has a repeated root");
    }
    return -g(theta) / den;
}

///
/// Vertices from the univariate representation: one vertex per root theta
/// of p_a, with coordinate j equal to -g_{a,e_j}(theta) / p_a'(theta).
///
template <scalar_type T>
univar_result<T> vertices_univar(moment_oracle<T>& oracle, const univar_options<T>& opt)
{
    if (opt.nmax == 0)
    {
        throw invalid_argument("nmax must be at least 1");
    }
    const std::size_t d = oracle.dim();
    const unsigned dd   = opt.density_degree.value_or(oracle.density_degree());
    counting_oracle<T> counter(oracle);
    std::mt19937_64 rng(opt.seed);
    univar_result<T> out;
    auto log = [&](const std::string& msg) {
        ++out.retries;
        out.retry_log.push_back(msg);
    };
    for (std::size_t attempt = 0; attempt < opt.direction_retries; ++attempt)
    {
        const auto a = detail::sample_direction<T>(d, opt.denominator, rng);
        projection_set<T> pa_set;
        try
        {
            pa_set = solve_direction(counter, a, opt.nmax, dd, opt.prony);
        }
        catch (const nongeneric_direction& e)
        {
            log(std::string("base direction: ") + e.what());
            continue;
        }
        catch (const irrational_root& e)
        {
            log(std::string("base direction: ") + e.what());
            continue;
        }
        const std::size_t n = pa_set.size();
        if (n == 0)
        {
            throw invalid_argument("all moments vanish: nothing to reconstruct");
        }
        // Square-free p_a with the discovered roots.
        const polynomial<T> pa = polynomial<T>::from_roots(pa_set.values);
        univar_rep<T> rep;
        rep.a   = a;
        rep.pa  = pa;
        rep.dpa = pa.derivative();
        bool ok = true;
        for (std::size_t j = 0; j < d && ok; ++j)
        {
            point<T> b(d, T(0));
            b[j] = 1;
            std::vector<std::string> lg;
            try
            {
                const auto f = interpolate_fab(counter, a, pa, b, n, dd, opt.prony,
                                               opt.node_retries, &lg);
                rep.g.push_back(g_from_f(f));
            }
            catch (const error& e)
            {
                lg.push_back(e.what());
                ok = false;
            }
            out.retries += lg.size();
            out.retry_log.insert(out.retry_log.end(), lg.begin(), lg.end());
        }
        if (!ok)
        {
            continue;
        }
        for (const auto& theta : pa_set.values)
        {
            point<T> v(d);
            for (std::size_t j = 0; j < d; ++j)
            {
                v[j] = univar_coordinate(rep.g[j], rep.dpa, theta);
            }
            out.vertices.push_back(std::move(v));
        }
        sort_vertices(out.vertices);
        out.rep             = std::move(rep);
        out.moment_count    = counter.moment_count();
        out.direction_count = counter.direction_count();
        out.budget_constant = static_cast<double>(out.moment_count) /
                              (static_cast<double>(d) * static_cast<double>(n * n));
        return out;
    }
    throw rank_unstable("univariate route: no generic base direction after " +
                        std::to_string(opt.direction_retries) + " attempts");
}

} // namespace polymom

#endif // POLYMOM_UNIVAR_HPP
