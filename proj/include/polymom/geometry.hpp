#ifndef POLYMOM_GEOMETRY_HPP
#define POLYMOM_GEOMETRY_HPP

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include <polymom/dense.hpp>
#include <polymom/error.hpp>
#include <polymom/scalar.hpp>

namespace polymom
{

/// Edge data of a simple tangent cone: the cone at `vertex` is generated by
/// `edges`, and `det` is |det(edges)|.
template <scalar_type T>
struct tangent_cone
{
    std::size_t vertex = 0;
    std::vector<point<T>> edges;
    T det = 0;
};

/// Vertex indices of a d-simplex (d+1 entries).
using simplex = std::vector<std::size_t>;
using triangulation = std::vector<simplex>;

template <scalar_type T>
struct polytope
{
    std::size_t dim = 0;
    std::vector<point<T>> vertices;
    std::optional<std::vector<tangent_cone<T>>> cones;
    std::optional<triangulation> simplices;

    std::size_t size() const noexcept { return vertices.size(); }
};

template <scalar_type T>
matrix<T> columns_matrix(const std::vector<point<T>>& cols)
{
    const std::size_t d = cols.size();
    matrix<T> m(d, d);
    for (std::size_t j = 0; j < d; ++j)
    {
        for (std::size_t i = 0; i < d; ++i)
        {
            m(i, j) = cols[j].at(i);
        }
    }
    return m;
}

/// Cone at `vertex` with |det| computed from the edges.
template <scalar_type T>
tangent_cone<T> make_cone(std::size_t vertex, std::vector<point<T>> edges)
{
    tangent_cone<T> c;
    c.vertex = vertex;
    c.det    = scalar_traits<T>::abs(determinant(columns_matrix(edges)));
    c.edges  = std::move(edges);
    return c;
}

template <scalar_type T>
std::vector<point<T>> simplex_points(const polytope<T>& p, const simplex& s)
{
    std::vector<point<T>> pts;
    pts.reserve(s.size());
    for (auto i : s)
    {
        pts.push_back(p.vertices.at(i));
    }
    return pts;
}

/// d! * vol(simplex) = |det(v_1 - v_0, ..., v_d - v_0)|.
template <scalar_type T>
T simplex_parallelotope_volume(const std::vector<point<T>>& pts)
{
    const std::size_t d = pts.size() - 1;
    std::vector<point<T>> edges;
    for (std::size_t k = 1; k <= d; ++k)
    {
        point<T> e(d);
        for (std::size_t i = 0; i < d; ++i)
        {
            e[i] = pts[k][i] - pts[0][i];
        }
        edges.push_back(std::move(e));
    }
    return scalar_traits<T>::abs(determinant(columns_matrix(edges)));
}

template <scalar_type T>
T simplex_volume(const std::vector<point<T>>& pts)
{
    const std::size_t d = pts.size() - 1;
    return simplex_parallelotope_volume(pts) /
           scalar_traits<T>::from_rational(rational(factorial(d)));
}

///
/// Tangent cones of a simplex: at each vertex v the edges are u - v for the
/// other d vertices; det is the same for every vertex.
///
template <scalar_type T>
std::vector<tangent_cone<T>> simplex_cones(const std::vector<point<T>>& pts)
{
    const std::size_t d = pts.empty() ? 0 : pts.front().size();
    if (pts.size() != d + 1)
    {
        throw invalid_argument("a d-simplex needs d+1 points");
    }
    std::vector<tangent_cone<T>> cones;
    for (std::size_t v = 0; v <= d; ++v)
    {
        std::vector<point<T>> edges;
        for (std::size_t u = 0; u <= d; ++u)
        {
            if (u == v)
            {
                continue;
            }
            point<T> e(d);
            for (std::size_t i = 0; i < d; ++i)
            {
                e[i] = pts[u][i] - pts[v][i];
            }
            edges.push_back(std::move(e));
        }
        cones.push_back(make_cone(v, std::move(edges)));
        if (scalar_traits<T>::is_zero(cones.back().det))
        {
            throw invalid_argument("degenerate simplex");
        }
    }
    return cones;
}

enum class finding_kind
{
    dimension_mismatch,
    too_few_vertices,
    duplicate_vertex,
    missing_cone,
    wrong_edge_count,
    degenerate_cone,
    det_mismatch,
    invalid_simplex,
    degenerate_simplex
};

inline const char* to_string(finding_kind k)
{
    switch (k)
    {
    case finding_kind::dimension_mismatch: return "dimension mismatch";
    case finding_kind::too_few_vertices: return "too few vertices";
    case finding_kind::duplicate_vertex: return "duplicate vertex";
    case finding_kind::missing_cone: return "missing cone";
    case finding_kind::wrong_edge_count: return "wrong edge count";
    case finding_kind::degenerate_cone: return "degenerate cone";
    case finding_kind::det_mismatch: return "det mismatch";
    case finding_kind::invalid_simplex: return "invalid simplex";
    case finding_kind::degenerate_simplex: return "degenerate simplex";
    }
    return "unknown";
}

struct finding
{
    finding_kind kind;
    std::string message;
};

/// All invariant violations of `p`; empty iff valid.
template <scalar_type T>
std::vector<finding> validate_polytope(const polytope<T>& p)
{
    std::vector<finding> out;
    auto report = [&](finding_kind k, std::string msg) {
        out.push_back({k, std::string(to_string(k)) + ": " + std::move(msg)});
    };
    const std::size_t d = p.dim;
    if (d == 0)
    {
        report(finding_kind::dimension_mismatch, "dimension must be positive");
        return out;
    }
    bool dims_ok = true;
    for (std::size_t i = 0; i < p.vertices.size(); ++i)
    {
        if (p.vertices[i].size() != d)
        {
            report(finding_kind::dimension_mismatch, "vertex " + std::to_string(i));
            dims_ok = false;
        }
    }
    if (!dims_ok)
    {
        return out;
    }
    if (p.vertices.size() < d + 1)
    {
        report(finding_kind::too_few_vertices,
               std::to_string(p.vertices.size()) + " < " + std::to_string(d + 1));
    }
    for (std::size_t i = 0; i < p.vertices.size(); ++i)
    {
        for (std::size_t j = i + 1; j < p.vertices.size(); ++j)
        {
            if (p.vertices[i] == p.vertices[j])
            {
                report(finding_kind::duplicate_vertex,
                       "vertices " + std::to_string(i) + " and " + std::to_string(j));
            }
        }
    }
    if (p.cones)
    {
        std::vector<int> seen(p.vertices.size(), 0);
        for (const auto& c : *p.cones)
        {
            const std::string where = "cone at vertex " + std::to_string(c.vertex);
            if (c.vertex >= p.vertices.size())
            {
                report(finding_kind::missing_cone, where + " refers to no vertex");
                continue;
            }
            ++seen[c.vertex];
            if (c.edges.size() != d)
            {
                report(finding_kind::wrong_edge_count, where);
                continue;
            }
            bool edge_dims = std::all_of(c.edges.begin(), c.edges.end(),
                                         [d](const point<T>& e) { return e.size() == d; });
            if (!edge_dims)
            {
                report(finding_kind::dimension_mismatch, where);
                continue;
            }
            const T det = scalar_traits<T>::abs(determinant(columns_matrix(c.edges)));
            if (scalar_traits<T>::is_zero(det))
            {
                report(finding_kind::degenerate_cone, where + " has dependent edges");
            }
            else if (!(det == c.det))
            {
                report(finding_kind::det_mismatch, where);
            }
        }
        for (std::size_t i = 0; i < seen.size(); ++i)
        {
            if (seen[i] != 1)
            {
                report(finding_kind::missing_cone,
                       "vertex " + std::to_string(i) + " has " + std::to_string(seen[i]) +
                           " cones");
            }
        }
    }
    if (p.simplices)
    {
        for (std::size_t k = 0; k < p.simplices->size(); ++k)
        {
            const auto& s           = (*p.simplices)[k];
            const std::string where = "simplex " + std::to_string(k);
            std::set<std::size_t> distinct(s.begin(), s.end());
            const bool indices_ok =
                s.size() == d + 1 && distinct.size() == s.size() &&
                std::all_of(s.begin(), s.end(),
                            [&](std::size_t i) { return i < p.vertices.size(); });
            if (!indices_ok)
            {
                report(finding_kind::invalid_simplex, where);
                continue;
            }
            if (scalar_traits<T>::is_zero(simplex_parallelotope_volume(simplex_points(p, s))))
            {
                report(finding_kind::degenerate_simplex, where);
            }
        }
    }
    return out;
}

namespace detail
{

template <scalar_type T>
T cross2(const point<T>& o, const point<T>& a, const point<T>& b)
{
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
}

} // namespace detail

///
/// Fan triangulation of a convex polygon: vertices are sorted by angle
/// around the centroid (counter-clockwise, starting at vertex 0), convexity
/// is verified with orientation tests, and triangles share vertex 0.
///
template <scalar_type T>
triangulation fan_triangulate_2d(const polytope<T>& p)
{
    if (p.dim != 2)
    {
        throw invalid_argument("fan triangulation requires d = 2");
    }
    const std::size_t n = p.vertices.size();
    if (n < 3)
    {
        throw invalid_argument("a polygon needs at least 3 vertices");
    }
    point<T> c{T(0), T(0)};
    for (const auto& v : p.vertices)
    {
        c[0] += v[0];
        c[1] += v[1];
    }
    c[0] /= T(static_cast<long>(n));
    c[1] /= T(static_cast<long>(n));

    // Angle measured from the ray centroid->vertex0, counter-clockwise, in
    // [0, 2pi): compare by half-plane, then by orientation.
    const point<T> ref{p.vertices[0][0] - c[0], p.vertices[0][1] - c[1]};
    auto rel = [&](std::size_t i) {
        return point<T>{p.vertices[i][0] - c[0], p.vertices[i][1] - c[1]};
    };
    auto cr = [](const point<T>& a, const point<T>& b) -> T { return a[0] * b[1] - a[1] * b[0]; };
    auto dt = [](const point<T>& a, const point<T>& b) -> T { return a[0] * b[0] + a[1] * b[1]; };
    auto half = [&](const point<T>& v) {
        const T s = cr(ref, v);
        if (s > 0 || (scalar_traits<T>::is_zero(s) && dt(ref, v) > 0))
        {
            return 0;
        }
        return 1;
    };
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i)
    {
        order[i] = i;
        const auto r = rel(i);
        if (scalar_traits<T>::is_zero(r[0]) && scalar_traits<T>::is_zero(r[1]))
        {
            throw invalid_argument("vertex coincides with the centroid: not a convex polygon");
        }
    }
    std::sort(order.begin() + 1, order.end(), [&](std::size_t a, std::size_t b) {
        const auto ra = rel(a);
        const auto rb = rel(b);
        const int ha  = half(ra);
        const int hb  = half(rb);
        if (ha != hb)
        {
            return ha < hb;
        }
        return cr(ra, rb) > 0;
    });
    for (std::size_t i = 0; i < n; ++i)
    {
        const T o = detail::cross2(p.vertices[order[i]], p.vertices[order[(i + 1) % n]],
                                   p.vertices[order[(i + 2) % n]]);
        if (scalar_traits<T>::is_zero(o))
        {
            throw invalid_argument("collinear vertex triple: zero-area triangle");
        }
        if (o < 0)
        {
            throw invalid_argument("polygon is not convex");
        }
    }
    triangulation tri;
    for (std::size_t i = 1; i + 1 < n; ++i)
    {
        tri.push_back({order[0], order[i], order[i + 1]});
    }
    return tri;
}

///
/// A direction z with coordinates k_i / r in [0, 1). In exact mode every
/// nonzero coordinate has denominator exactly r (r prime).
///
template <scalar_type T>
struct direction
{
    point<T> z;
    unsigned long denominator = 1;
};

/// Default denominator: the smallest prime >= 10^6.
inline unsigned long default_direction_denominator()
{
    return 1000003ul;
}

/// Uniform integer in [0, n) by rejection on the raw 64-bit stream, so that
/// sequences do not depend on the standard library's distributions.
template <typename Rng>
std::uint64_t uniform_below(Rng& rng, std::uint64_t n)
{
    if (n == 0)
    {
        throw invalid_argument("uniform_below(0)");
    }
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t x;
    do
    {
        x = static_cast<std::uint64_t>(rng());
    } while (x >= limit);
    return x % n;
}

template <typename Rng>
direction<rational> sample_generic_direction(std::size_t d, unsigned long r, Rng& rng)
{
    if (r < 2 || !is_prime(r))
    {
        throw invalid_argument("direction denominator must be a prime >= 2");
    }
    direction<rational> dir;
    dir.denominator = r;
    dir.z.reserve(d);
    for (std::size_t i = 0; i < d; ++i)
    {
        rational x(static_cast<unsigned long>(uniform_below(rng, r)), r);
        x.canonicalize();
        dir.z.push_back(x);
    }
    return dir;
}

/// True iff all projections <v, z> are pairwise distinct.
template <scalar_type T>
bool check_distinct_projections(const polytope<T>& p, std::span<const T> z)
{
    std::vector<T> proj;
    for (const auto& v : p.vertices)
    {
        proj.push_back(dot<T>(std::span<const T>(v), z));
    }
    std::sort(proj.begin(), proj.end());
    return std::adjacent_find(proj.begin(), proj.end()) == proj.end();
}

template <scalar_type T>
polytope<T> convert_polytope(const polytope<rational>& p)
{
    polytope<T> out;
    out.dim = p.dim;
    for (const auto& v : p.vertices)
    {
        out.vertices.push_back(convert_point<T>(v));
    }
    if (p.cones)
    {
        out.cones.emplace();
        for (const auto& c : *p.cones)
        {
            tangent_cone<T> t;
            t.vertex = c.vertex;
            t.det    = scalar_traits<T>::from_rational(c.det);
            for (const auto& e : c.edges)
            {
                t.edges.push_back(convert_point<T>(e));
            }
            out.cones->push_back(std::move(t));
        }
    }
    out.simplices = p.simplices;
    return out;
}

} // namespace polymom

#endif // POLYMOM_GEOMETRY_HPP
