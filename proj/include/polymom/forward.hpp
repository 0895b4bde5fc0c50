#ifndef POLYMOM_FORWARD_HPP
#define POLYMOM_FORWARD_HPP

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include <polymom/error.hpp>
#include <polymom/geometry.hpp>
#include <polymom/jet.hpp>
#include <polymom/multipoly.hpp>
#include <polymom/scalar.hpp>

namespace polymom
{

/// Axial moments mu_0..mu_K of a body along one direction.
template <scalar_type T>
struct moment_sequence
{
    std::size_t dim = 0;
    point<T> direction;
    unsigned density_degree = 0;
    std::vector<T> moments;

    static constexpr scalar_mode mode = scalar_traits<T>::mode;
};

/// The scaled vector c_1..c_{k+1}; the first d+d° entries are zero.
template <scalar_type T>
struct scaled_vector
{
    std::size_t dim         = 0;
    unsigned density_degree = 0;
    std::vector<T> c;

    std::size_t size() const noexcept { return c.size(); }
    /// 1-based access c_i.
    const T& operator()(std::size_t i) const { return c.at(i - 1); }
};

template <scalar_type T>
multipoly<T> unit_density(std::size_t dim)
{
    return multipoly<T>::constant(dim, T(1));
}

///
/// Cone terms entering the vertex sums: the stored tangent cones for simple
/// polytopes, otherwise one cone per (simplex, vertex) pair of the
/// triangulation, so that summing by vertex yields D~_v. A d=2 input with
/// neither is fan triangulated.
///
template <scalar_type T>
std::vector<tangent_cone<T>> cone_terms(const polytope<T>& p)
{
    if (p.cones)
    {
        return *p.cones;
    }
    triangulation tri;
    if (p.simplices)
    {
        tri = *p.simplices;
    }
    else if (p.dim == 2)
    {
        tri = fan_triangulate_2d(p);
    }
    else
    {
        throw invalid_argument("polytope needs tangent cones or a triangulation for d >= 3");
    }
    std::vector<tangent_cone<T>> out;
    for (const auto& s : tri)
    {
        auto local = simplex_cones(simplex_points(p, s));
        for (auto& c : local)
        {
            c.vertex = s.at(c.vertex);
            out.push_back(std::move(c));
        }
    }
    return out;
}

/// D_v(z) = |det K_v| / prod_k <w_k, z> for one cone.
template <scalar_type T>
T cone_value(const tangent_cone<T>& c, std::span<const T> z)
{
    T den = 1;
    for (std::size_t k = 0; k < c.edges.size(); ++k)
    {
        const T w = dot<T>(std::span<const T>(c.edges[k]), z);
        if (scalar_traits<T>::is_zero(w))
        {
            throw denominator_vanishes(c.vertex, k);
        }
        den *= w;
    }
    return c.det / den;
}

/// D~_v(z) for every vertex (sum of its cone terms).
template <scalar_type T>
std::vector<T> vertex_cone_values(const polytope<T>& p, std::span<const T> z)
{
    std::vector<T> out(p.vertices.size(), T(0));
    for (const auto& c : cone_terms(p))
    {
        out.at(c.vertex) += cone_value(c, z);
    }
    return out;
}

namespace detail
{

template <scalar_type T>
void check_direction(const polytope<T>& p, std::span<const T> z)
{
    if (z.size() != p.dim)
    {
        throw invalid_argument("direction dimension does not match the polytope");
    }
}

template <scalar_type T>
T rational_factor(const integer& num, const integer& den)
{
    rational q(num, den);
    q.canonicalize();
    return scalar_traits<T>::from_rational(q);
}

///
/// Jets S_n = sum_v <v, z+e>^n D~_v(z+e) for n = 0..n_max, truncated at
/// `order`.
///
template <scalar_type T>
std::vector<jet<T>> vertex_power_sums(const polytope<T>& p, std::span<const T> z,
                                      unsigned order, std::size_t n_max)
{
    auto layout = jet_layout::get(p.dim, order);
    std::vector<jet<T>> dtilde(p.vertices.size(), jet<T>(layout));
    for (const auto& c : cone_terms(p))
    {
        jet<T> den = jet<T>::constant(layout, T(1));
        for (std::size_t k = 0; k < c.edges.size(); ++k)
        {
            const jet<T> w = linear_jet<T>(layout, std::span<const T>(c.edges[k]), z);
            if (scalar_traits<T>::is_zero(w.value()))
            {
                throw denominator_vanishes(c.vertex, k);
            }
            den *= w;
        }
        dtilde.at(c.vertex) += den.reciprocal() * c.det;
    }
    std::vector<jet<T>> sums(n_max + 1, jet<T>(layout));
    for (std::size_t v = 0; v < p.vertices.size(); ++v)
    {
        const jet<T> x = linear_jet<T>(layout, std::span<const T>(p.vertices[v]), z);
        jet<T> term    = dtilde[v];
        for (std::size_t n = 0; n <= n_max; ++n)
        {
            sums[n] += term;
            if (n < n_max)
            {
                term = term * x;
            }
        }
    }
    return sums;
}

} // namespace detail

///
/// mu_j(z) for j = 0..count-1 from the vertex-cone formula
///   mu_j = sum_s j! (-1)^d / (j+d+s)! rho_s(d/dz) sum_v <v,z>^{j+d+s} D~_v(z),
/// where rho_s is the degree-s part of rho.
///
template <scalar_type T>
std::vector<T> brion_moments(const polytope<T>& p, std::span<const T> z, std::size_t count,
                             const multipoly<T>& rho)
{
    detail::check_direction(p, z);
    if (rho.dim() != p.dim)
    {
        throw invalid_argument("density dimension does not match the polytope");
    }
    std::vector<T> mu(count, T(0));
    if (count == 0 || rho.is_zero())
    {
        return mu;
    }
    const std::size_t d  = p.dim;
    const unsigned order = rho.degree();
    const T sign         = d % 2 == 0 ? T(1) : T(-1);

    if (order == 0)
    {
        const T rho0 = rho.coefficient(exponent(d, 0));
        const auto D = vertex_cone_values(p, z);
        std::vector<T> xp(p.vertices.size());
        for (std::size_t v = 0; v < xp.size(); ++v)
        {
            const T x = dot<T>(std::span<const T>(p.vertices[v]), z);
            T pw      = 1;
            for (std::size_t k = 0; k < d; ++k)
            {
                pw *= x;
            }
            xp[v] = pw * D[v];
        }
        for (std::size_t j = 0; j < count; ++j)
        {
            T s = 0;
            for (std::size_t v = 0; v < xp.size(); ++v)
            {
                s += xp[v];
                xp[v] *= dot<T>(std::span<const T>(p.vertices[v]), z);
            }
            mu[j] = sign * rho0 * s / detail::rational_factor<T>(falling_ratio(j + d, j), 1);
        }
        return mu;
    }

    const auto sums = detail::vertex_power_sums(p, z, order, count - 1 + d + order);
    std::vector<multipoly<T>> pieces;
    for (unsigned s = 0; s <= order; ++s)
    {
        pieces.push_back(rho.homogeneous_part(s));
    }
    for (std::size_t j = 0; j < count; ++j)
    {
        T total = 0;
        for (unsigned s = 0; s <= order; ++s)
        {
            if (pieces[s].is_zero())
            {
                continue;
            }
            const T op = apply_to_jet(pieces[s], sums[j + d + s]);
            total += op / detail::rational_factor<T>(falling_ratio(j + d + s, j), 1);
        }
        mu[j] = sign * total;
    }
    return mu;
}

template <scalar_type T>
std::vector<T> brion_moments(const polytope<T>& p, std::span<const T> z, std::size_t count)
{
    return brion_moments(p, z, count, unit_density<T>(p.dim));
}

/// Uniform-density mu_j(z) by the vertex-cone formula.
template <scalar_type T>
T axial_moment_brion(const polytope<T>& p, std::span<const T> z, std::size_t j)
{
    return brion_moments(p, z, j + 1).back();
}

template <scalar_type T>
T axial_moment_brion_density(const polytope<T>& p, std::span<const T> z, std::size_t j,
                             const multipoly<T>& rho)
{
    return brion_moments(p, z, j + 1, rho).back();
}

///
/// Low-order companion sums, zero for 0 <= j <= d+d°-1:
///   sum_s j!/(j-d°+s)! rho_s(d/dz) sum_v <v,z>^{j-d°+s} D~_v(z)
/// (terms with negative power omitted). For homogeneous rho this is
/// rho(d/dz) sum_v <v,z>^j D~_v(z).
///
template <scalar_type T>
T companion_identity_residual(const polytope<T>& p, std::span<const T> z, std::size_t j,
                              const multipoly<T>& rho)
{
    detail::check_direction(p, z);
    const unsigned order = rho.degree();
    const auto sums      = detail::vertex_power_sums(p, z, order, j + order);
    T total              = 0;
    for (unsigned s = 0; s <= order; ++s)
    {
        const auto piece = rho.homogeneous_part(s);
        if (piece.is_zero() || j + s < order)
        {
            continue;
        }
        const std::size_t n = j + s - order;
        total += apply_to_jet(piece, sums[n]) *
                 scalar_traits<T>::from_rational(rational(falling_ratio(j, n)));
    }
    return total;
}

template <scalar_type T>
T companion_identity_residual(const polytope<T>& p, std::span<const T> z, std::size_t j)
{
    return companion_identity_residual(p, z, j, unit_density<T>(p.dim));
}

///
/// c_1..c_{k+1}: zero for the first d+d° entries, then
/// c_{j+d+d°+1} = (-1)^d (j+d+d°)!/j! mu_j.
///
template <scalar_type T>
scaled_vector<T> scaled_moment_vector(const moment_sequence<T>& ms, std::size_t k)
{
    const std::size_t shift = ms.dim + ms.density_degree;
    const std::size_t need  = k + 1 > shift ? k + 1 - shift : 0;
    if (ms.moments.size() < need)
    {
        throw insufficient_moments(need, ms.moments.size());
    }
    scaled_vector<T> out;
    out.dim            = ms.dim;
    out.density_degree = ms.density_degree;
    out.c.assign(k + 1, T(0));
    const T sign = ms.dim % 2 == 0 ? T(1) : T(-1);
    for (std::size_t j = 0; j < need; ++j)
    {
        out.c[j + shift] =
            sign * detail::rational_factor<T>(falling_ratio(j + shift, j), 1) * ms.moments[j];
    }
    return out;
}

/// Number of moments needed for c_1..c_{k+1}.
inline std::size_t moments_for_scaled_length(std::size_t k_plus_1, std::size_t dim,
                                             unsigned density_degree)
{
    const std::size_t shift = dim + density_degree;
    return k_plus_1 > shift ? k_plus_1 - shift : 0;
}

///
/// Independent route: integrate <x,z>^j rho(x) over every simplex of the
/// triangulation in barycentric coordinates, using
///   int_S lambda^a = d! vol(S) prod a_i! / (d + |a|)!.
///
template <scalar_type T>
T axial_moment_direct(const std::vector<point<T>>& vertices, const triangulation& simplices,
                      std::span<const T> z, std::size_t j, const multipoly<T>& rho)
{
    if (vertices.empty())
    {
        throw invalid_argument("no vertices");
    }
    const std::size_t d = vertices.front().size();
    if (z.size() != d || rho.dim() != d)
    {
        throw invalid_argument("dimension mismatch in direct integration");
    }
    T total = 0;
    for (const auto& s : simplices)
    {
        if (s.size() != d + 1)
        {
            throw invalid_argument("simplex needs d+1 vertices");
        }
        std::vector<point<T>> pts;
        for (auto i : s)
        {
            pts.push_back(vertices.at(i));
        }
        const T dfvol = simplex_parallelotope_volume(pts);
        if (scalar_traits<T>::is_zero(dfvol))
        {
            throw invalid_argument("degenerate simplex");
        }
        // Linear forms in the barycentric variables lambda_0..lambda_d.
        auto linear = [&](auto coeff) {
            multipoly<T> f(d + 1);
            exponent e(d + 1, 0);
            for (std::size_t i = 0; i <= d; ++i)
            {
                e[i] = 1;
                f.add_term(e, coeff(i));
                e[i] = 0;
            }
            return f;
        };
        const auto proj = linear([&](std::size_t i) { return dot<T>(pts[i], point<T>(z.begin(), z.end())); });
        std::vector<multipoly<T>> coord;
        for (std::size_t k = 0; k < d; ++k)
        {
            coord.push_back(linear([&](std::size_t i) { return pts[i][k]; }));
        }
        const auto one = multipoly<T>::constant(d + 1, T(1));
        auto power     = [&](const multipoly<T>& f, unsigned n) {
            multipoly<T> r = one;
            for (unsigned i = 0; i < n; ++i)
            {
                r = r * f;
            }
            return r;
        };
        multipoly<T> rho_l(d + 1);
        for (const auto& [m, c] : rho.terms())
        {
            multipoly<T> t = multipoly<T>::constant(d + 1, c);
            for (std::size_t k = 0; k < d; ++k)
            {
                if (m[k] > 0)
                {
                    t = t * power(coord[k], m[k]);
                }
            }
            rho_l = rho_l + t;
        }
        const auto integrand = power(proj, static_cast<unsigned>(j)) * rho_l;
        for (const auto& [a, c] : integrand.terms())
        {
            const unsigned deg = total_degree(a);
            integer num        = exponent_factorial(a);
            integer den        = factorial(d + deg);
            total += c * dfvol * detail::rational_factor<T>(num, den);
        }
    }
    return total;
}

template <scalar_type T>
T axial_moment_direct(const polytope<T>& p, std::span<const T> z, std::size_t j,
                      const multipoly<T>& rho)
{
    triangulation tri;
    if (p.simplices)
    {
        tri = *p.simplices;
    }
    else if (p.dim == 2)
    {
        tri = fan_triangulate_2d(p);
    }
    else
    {
        throw invalid_argument("direct integration needs a triangulation for d >= 3");
    }
    return axial_moment_direct(p.vertices, tri, z, j, rho);
}

template <scalar_type T>
std::vector<T> direct_moments(const polytope<T>& p, std::span<const T> z, std::size_t count,
                              const multipoly<T>& rho)
{
    std::vector<T> out;
    for (std::size_t j = 0; j < count; ++j)
    {
        out.push_back(axial_moment_direct(p, z, j, rho));
    }
    return out;
}

///
/// int_P x^m rho(x) dx through the derivative relation
///   |m|! int_P x^m rho = d^m/dz^m mu_{|m|}(z),
/// evaluated with jets on the vertex-cone expression at an internal
/// direction; the result does not depend on that direction.
///
template <scalar_type T>
T monomial_moment(const polytope<T>& p, const exponent& m, const multipoly<T>& rho,
                  std::uint64_t seed = 0x5eedu)
{
    const std::size_t d = p.dim;
    if (m.size() != d || rho.dim() != d)
    {
        throw invalid_argument("exponent dimension mismatch");
    }
    const unsigned n     = total_degree(m);
    const unsigned order = n + rho.degree();
    const auto xm        = multipoly<T>::monomial(m, T(1));
    std::mt19937_64 rng(seed);
    const unsigned long r = default_direction_denominator();
    const T sign          = d % 2 == 0 ? T(1) : T(-1);
    for (int attempt = 0; attempt < 64; ++attempt)
    {
        const auto dir = sample_generic_direction(d, r, rng);
        const auto z   = convert_point<T>(dir.z);
        try
        {
            const auto sums = detail::vertex_power_sums(p, std::span<const T>(z), order,
                                                        n + d + rho.degree());
            T total         = 0;
            for (unsigned s = 0; s <= rho.degree(); ++s)
            {
                const auto piece = rho.homogeneous_part(s);
                if (piece.is_zero())
                {
                    continue;
                }
                total += apply_to_jet(xm * piece, sums[n + d + s]) /
                         detail::rational_factor<T>(factorial(n + d + s), 1);
            }
            return sign * total;
        }
        catch (const denominator_vanishes&)
        {
        }
    }
    throw retries_exhausted("monomial_moment: no direction avoided the cone denominators");
}

/// Uniform real in [0, 1) from 53 random bits.
template <typename Rng>
double uniform_unit(Rng& rng)
{
    return static_cast<double>(static_cast<std::uint64_t>(rng()) >> 11) * 0x1.0p-53;
}

/// Multiply each moment by (1 + delta_j), delta_j uniform in [-eps, eps].
template <typename Rng>
moment_sequence<double> add_noise(moment_sequence<double> ms, double eps_rel, Rng& rng)
{
    if (eps_rel < 0)
    {
        throw invalid_argument("noise level must be non-negative");
    }
    if (eps_rel == 0)
    {
        return ms;
    }
    for (auto& mu : ms.moments)
    {
        const double delta = eps_rel * (2.0 * uniform_unit(rng) - 1.0);
        mu *= 1.0 + delta;
    }
    return ms;
}

} // namespace polymom

#endif // POLYMOM_FORWARD_HPP
