#ifndef POLYMOM_ORACLE_HPP
#define POLYMOM_ORACLE_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <map>
#include <mutex>
#include <random>
#include <span>
#include <vector>

#include <polymom/error.hpp>
#include <polymom/forward.hpp>
#include <polymom/geometry.hpp>
#include <polymom/multipoly.hpp>
#include <polymom/polynomial.hpp>
#include <polymom/scalar.hpp>

namespace polymom
{

/// Source of axial moments mu_0..mu_{count-1} along a requested direction.
template <scalar_type T>
class moment_oracle
{
public:
    virtual ~moment_oracle() = default;
    virtual std::size_t dim() const = 0;
    virtual unsigned density_degree() const = 0;
    virtual std::vector<T> moments(std::span<const T> z, std::size_t count) = 0;

    moment_sequence<T> sequence(std::span<const T> z, std::size_t count)
    {
        moment_sequence<T> ms;
        ms.dim            = dim();
        ms.direction      = point<T>(z.begin(), z.end());
        ms.density_degree = density_degree();
        ms.moments        = moments(z, count);
        return ms;
    }
};

///
/// Wraps an oracle and records, per distinct direction, the largest number
/// of moments requested; the budget is the sum over directions.
///
template <scalar_type T>
class counting_oracle : public moment_oracle<T>
{
public:
    explicit counting_oracle(moment_oracle<T>& inner) : inner_(inner) {}

    std::size_t dim() const override { return inner_.dim(); }
    unsigned density_degree() const override { return inner_.density_degree(); }

    std::vector<T> moments(std::span<const T> z, std::size_t count) override
    {
        auto mu = inner_.moments(z, count);
        std::lock_guard<std::mutex> lock(mutex_);
        auto& slot = used_[point<T>(z.begin(), z.end())];
        slot       = std::max(slot, count);
        return mu;
    }

    std::size_t moment_count() const
    {
        std::lock_guard<std::mutex> lock(mutex_);
        std::size_t total = 0;
        for (const auto& [z, n] : used_)
        {
            total += n;
        }
        return total;
    }

    std::size_t direction_count() const
    {
        std::lock_guard<std::mutex> lock(mutex_);
        return used_.size();
    }

private:
    moment_oracle<T>& inner_;
    mutable std::mutex mutex_;
    std::map<point<T>, std::size_t> used_;
};

enum class forward_route
{
    brion,
    direct
};

///
/// mu_0..mu_{count-1} along any z, including directions where a cone
/// denominator vanishes: there mu_j(z + t u) is interpolated in t (it is a
/// polynomial of degree j) from nonzero t avoiding the poles.
///
inline std::vector<rational> exact_moments_any_direction(const polytope<rational>& p,
                                                         std::span<const rational> z,
                                                         std::size_t count,
                                                         const multipoly<rational>& rho,
                                                         forward_route route = forward_route::brion)
{
    auto compute = [&](std::span<const rational> dir) {
        return route == forward_route::brion ? brion_moments(p, dir, count, rho)
                                             : direct_moments(p, dir, count, rho);
    };
    try
    {
        return compute(z);
    }
    catch (const denominator_vanishes&)
    {
    }
    std::mt19937_64 rng(0x9e3779b97f4a7c15ull);
    const auto u = sample_generic_direction(p.dim, default_direction_denominator(), rng).z;
    std::vector<rational> nodes;
    std::vector<std::vector<rational>> samples;
    for (long t = 1; nodes.size() < std::max<std::size_t>(count, 1); ++t)
    {
        if (t > static_cast<long>(64 + 8 * count))
        {
            throw retries_exhausted("no pole-free line through the direction");
        }
        point<rational> zt(z.begin(), z.end());
        for (std::size_t i = 0; i < zt.size(); ++i)
        {
            zt[i] += rational(t) * u[i];
        }
        try
        {
            samples.push_back(compute(std::span<const rational>(zt)));
            nodes.emplace_back(t);
        }
        catch (const denominator_vanishes&)
        {
        }
    }
    std::vector<rational> out(count);
    for (std::size_t j = 0; j < count; ++j)
    {
        std::vector<rational> vals(j + 1);
        std::vector<rational> xs(nodes.begin(), nodes.begin() + static_cast<std::ptrdiff_t>(j + 1));
        for (std::size_t k = 0; k <= j; ++k)
        {
            vals[k] = samples[k][j];
        }
        out[j] = interpolate(xs, vals)(rational(0));
    }
    return out;
}

///
/// Moments of a known polytope (testing and roundtrips). Exact mode
/// returns exact values; float mode evaluates exactly at the binary value
/// of z, rounds, and applies relative noise mu (1 + delta) with delta
/// uniform in [-noise, noise], drawn once per (direction, index).
///
template <scalar_type T>
class polytope_oracle : public moment_oracle<T>
{
public:
    polytope_oracle(polytope<rational> p, multipoly<rational> rho, double noise = 0.0,
                    std::uint64_t seed = 1, forward_route route = forward_route::brion)
        : p_(std::move(p)), rho_(std::move(rho)), noise_(noise), rng_(seed), route_(route)
    {
        if (rho_.dim() != p_.dim)
        {
            throw invalid_argument("density dimension does not match the polytope");
        }
        if (noise_ < 0 || (scalar_traits<T>::is_exact && noise_ != 0))
        {
            throw invalid_argument("noise is only available in float mode");
        }
    }

    polytope_oracle(polytope<rational> p, double noise = 0.0, std::uint64_t seed = 1)
        : polytope_oracle(p, unit_density<rational>(p.dim), noise, seed)
    {
    }

    std::size_t dim() const override { return p_.dim; }
    unsigned density_degree() const override { return rho_.degree(); }
    const polytope<rational>& body() const noexcept { return p_; }

    std::vector<T> moments(std::span<const T> z, std::size_t count) override
    {
        if (z.size() != p_.dim)
        {
            throw invalid_argument("direction dimension does not match the oracle");
        }
        std::lock_guard<std::mutex> lock(mutex_);
        auto& cached = cache_[point<T>(z.begin(), z.end())];
        if (cached.size() < count)
        {
            point<rational> zq;
            for (const auto& x : z)
            {
                if constexpr (scalar_traits<T>::is_exact)
                {
                    zq.push_back(x);
                }
                else
                {
                    zq.push_back(rational_from_binary(x));
                }
            }
            const auto exact = exact_moments_any_direction(p_, std::span<const rational>(zq),
                                                           count, rho_, route_);
            for (std::size_t j = cached.size(); j < count; ++j)
            {
                if constexpr (scalar_traits<T>::is_exact)
                {
                    cached.push_back(exact[j]);
                }
                else
                {
                    double mu = exact[j].get_d();
                    if (noise_ > 0)
                    {
                        mu *= 1.0 + noise_ * (2.0 * uniform_unit(rng_) - 1.0);
                    }
                    cached.push_back(mu);
                }
            }
        }
        return std::vector<T>(cached.begin(), cached.begin() + static_cast<std::ptrdiff_t>(count));
    }

private:
    polytope<rational> p_;
    multipoly<rational> rho_;
    double noise_;
    std::mt19937_64 rng_;
    forward_route route_;
    std::mutex mutex_;
    std::map<point<T>, std::vector<T>> cache_;
};

/// Pre-computed moment sequences looked up by exact direction.
template <scalar_type T>
class sequence_oracle : public moment_oracle<T>
{
public:
    sequence_oracle(std::size_t dim, unsigned density_degree,
                    std::vector<moment_sequence<T>> sequences)
        : dim_(dim), density_degree_(density_degree), sequences_(std::move(sequences))
    {
        for (const auto& s : sequences_)
        {
            if (s.dim != dim_ || s.direction.size() != dim_)
            {
                throw invalid_argument("moment sequence dimension mismatch");
            }
            if (s.density_degree != density_degree_)
            {
                throw invalid_argument("moment sequences disagree on the density degree");
            }
        }
    }

    std::size_t dim() const override { return dim_; }
    unsigned density_degree() const override { return density_degree_; }
    const std::vector<moment_sequence<T>>& sequences() const noexcept { return sequences_; }

    std::vector<T> moments(std::span<const T> z, std::size_t count) override
    {
        for (const auto& s : sequences_)
        {
            if (same_direction(s.direction, z))
            {
                if (s.moments.size() < count)
                {
                    throw insufficient_moments(count, s.moments.size());
                }
                return std::vector<T>(s.moments.begin(),
                                      s.moments.begin() + static_cast<std::ptrdiff_t>(count));
            }
        }
        throw invalid_argument("no moment data for the requested direction");
    }

private:
    /// Exact equality; float directions match to 1e-12 relative.
    static bool same_direction(const point<T>& a, std::span<const T> b)
    {
        if (a.size() != b.size())
        {
            return false;
        }
        if constexpr (scalar_traits<T>::is_exact)
        {
            return std::equal(a.begin(), a.end(), b.begin());
        }
        else
        {
            double scale = 0;
            double diff  = 0;
            for (std::size_t i = 0; i < a.size(); ++i)
            {
                scale = std::max({scale, std::fabs(a[i]), std::fabs(b[i])});
                diff  = std::max(diff, std::fabs(a[i] - b[i]));
            }
            return diff <= 1e-12 * (1.0 + scale);
        }
    }

    std::size_t dim_;
    unsigned density_degree_;
    std::vector<moment_sequence<T>> sequences_;
};

} // namespace polymom

#endif // POLYMOM_ORACLE_HPP
