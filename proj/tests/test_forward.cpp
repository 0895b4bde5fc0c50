#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include <polymom/polymom.hpp>

#include "support/corpus.hpp"
#include "support/oracles.hpp"

using namespace polymom;
using corpus::pt;
using corpus::q;

namespace
{

std::span<const rational> sp(const point<rational>& z) { return std::span<const rational>(z); }

const point<rational> z12{1, 2};
const point<rational> z10{1, 0};

} // namespace

TEST(Direct, UnitTriangleAlongFirstAxis)
{
    const auto t   = corpus::unit_triangle();
    const auto one = unit_density<rational>(2);
    EXPECT_EQ(axial_moment_direct(t, sp(z10), 0, one), q(1, 2));
    EXPECT_EQ(axial_moment_direct(t, sp(z10), 2, one), q(1, 12));
}

TEST(Direct, UnitSquareWithLinearDensity)
{
    EXPECT_EQ(axial_moment_direct(corpus::unit_square(), sp(z10), 1, parse_density("x1", 2)),
              q(1, 3));
}

TEST(Brion, UnitTriangleConeValuesAndMoments)
{
    const auto t = corpus::unit_triangle();
    EXPECT_EQ(vertex_cone_values(t, sp(z12)), (std::vector<rational>{q(1, 2), -1, q(1, 2)}));
    EXPECT_EQ(axial_moment_brion(t, sp(z12), 0), q(1, 2));
    EXPECT_EQ(axial_moment_brion(t, sp(z12), 1), q(1, 2));
    EXPECT_EQ(brion_moments(t, sp(z12), 7),
              (std::vector<rational>{q(1, 2), q(1, 2), q(7, 12), q(3, 4), q(31, 30), q(3, 2),
                                     q(127, 56)}));
}

TEST(Brion, UnitSquareConeValuesAndArea)
{
    const auto s = corpus::unit_square();
    // Vertices (0,0), (1,0), (1,1), (0,1) project to 0, 1, 3, 2.
    EXPECT_EQ(vertex_cone_values(s, sp(z12)),
              (std::vector<rational>{q(1, 2), q(-1, 2), q(1, 2), q(-1, 2)}));
    EXPECT_EQ(axial_moment_brion(s, sp(z12), 0), 1);
}

TEST(Brion, VanishingDenominatorIsReported)
{
    EXPECT_THROW(axial_moment_brion(corpus::unit_square(), sp(z10), 0), denominator_vanishes);
}

TEST(BrionDensity, Examples)
{
    const auto t = corpus::unit_triangle();
    EXPECT_EQ(axial_moment_brion_density(t, sp(z12), 1, unit_density<rational>(2)), q(1, 2));
    EXPECT_EQ(axial_moment_brion_density(t, sp(z12), 0, parse_density("x1 + x2", 2)), q(1, 3));
    // z = (1,0) is orthogonal to square edges: the any-direction route interpolates.
    const auto mu =
        exact_moments_any_direction(corpus::unit_square(), sp(z10), 3, parse_density("x1", 2));
    EXPECT_EQ(mu[0], q(1, 2));
    EXPECT_EQ(mu[1], q(1, 3));
    EXPECT_EQ(mu[2], q(1, 4));
}

TEST(Companion, ResidualsVanish)
{
    const auto s = corpus::unit_square();
    EXPECT_EQ(companion_identity_residual(s, sp(z12), 0), 0);
    EXPECT_EQ(companion_identity_residual(s, sp(z12), 1), 0);
    const auto t = corpus::unit_triangle();
    EXPECT_EQ(companion_identity_residual(t, sp(z12), 0), 0);
    EXPECT_EQ(companion_identity_residual(t, sp(z12), 1), 0);
    // The first non-vanishing sum: sum_v <v,z>^2 D_v = 1 on the triangle.
    EXPECT_EQ(companion_identity_residual(t, sp(z12), 2), 1);
    const auto rho = parse_density("x1^2 + 3 x2 + 1", 2);
    for (std::size_t j = 0; j < 4; ++j)
    {
        EXPECT_EQ(companion_identity_residual(t, sp(z12), j, rho), 0) << j;
    }
}

TEST(Scaled, UnitTriangleVector)
{
    const auto t = corpus::unit_triangle();
    moment_sequence<rational> ms;
    ms.dim       = 2;
    ms.direction = z12;
    ms.moments   = brion_moments(t, sp(z12), 5);
    const auto c = scaled_moment_vector(ms, 6);
    EXPECT_EQ(c.c, (std::vector<rational>{0, 0, 1, 3, 7, 15, 31}));
    EXPECT_EQ(c(3), 1);
    ms.moments.pop_back();
    EXPECT_THROW(scaled_moment_vector(ms, 6), insufficient_moments);
}

TEST(Scaled, DensityShiftAndZeroInput)
{
    moment_sequence<rational> ms;
    ms.dim            = 2;
    ms.direction      = z12;
    ms.density_degree = 1;
    ms.moments        = {1, 2, 3};
    const auto c      = scaled_moment_vector(ms, 5);
    ASSERT_EQ(c.size(), 6u);
    EXPECT_EQ(c(1), 0);
    EXPECT_EQ(c(2), 0);
    EXPECT_EQ(c(3), 0);
    EXPECT_NE(c(4), 0);
    ms.moments = {0, 0, 0};
    for (const auto& x : scaled_moment_vector(ms, 5).c)
    {
        EXPECT_EQ(x, 0);
    }
    EXPECT_EQ(moments_for_scaled_length(7, 2, 0), 5u);
    EXPECT_EQ(moments_for_scaled_length(2, 2, 1), 0u);
}

TEST(Scaled, EqualsWeightedPowerSums)
{
    // c_k = sum_v <v,z>^{k-1} D_v(z) for uniform density.
    std::mt19937_64 rng(21);
    for (const auto& e : corpus::make_corpus(12, 5))
    {
        const auto z  = corpus::generic_direction(rng, e.body);
        const auto dv = vertex_cone_values(e.body, sp(z));
        moment_sequence<rational> ms;
        ms.dim       = e.body.dim;
        ms.direction = z;
        ms.moments   = brion_moments(e.body, sp(z), 8);
        const auto c = scaled_moment_vector(ms, 8 + e.body.dim - 1);
        for (std::size_t k = 1; k <= c.size(); ++k)
        {
            rational s = 0;
            for (std::size_t v = 0; v < dv.size(); ++v)
            {
                rational x = 1;
                for (std::size_t i = 1; i < k; ++i)
                {
                    x *= dot(e.body.vertices[v], z);
                }
                s += x * dv[v];
            }
            EXPECT_EQ(c(k), s) << e.name << " k=" << k;
        }
    }
}

TEST(Oracles, PolygonMomentsMatchGreensTheorem)
{
    std::mt19937_64 rng(31);
    for (std::size_t n = 3; n <= 8; ++n)
    {
        const auto p   = corpus::random_polygon(rng, n);
        const auto z   = corpus::generic_direction(rng, p);
        const auto rho = corpus::random_density(rng, p, static_cast<unsigned>(n % 3));
        const auto mu  = brion_moments(p, sp(z), 7, rho);
        for (unsigned j = 0; j < 7; ++j)
        {
            const auto g = oracle::green_axial(p.vertices, z, j, rho);
            EXPECT_EQ(mu[j], g) << n << " " << j;
            EXPECT_EQ(axial_moment_direct(p, sp(z), j, rho), g) << n << " " << j;
        }
    }
}

TEST(Oracles, SimplexMomentsMatchSymmetricFunctionFormula)
{
    std::mt19937_64 rng(41);
    for (int i = 0; i < 20; ++i)
    {
        const std::size_t d = 2 + static_cast<std::size_t>(i % 3);
        const auto s        = corpus::random_simplex(rng, d);
        const auto z        = corpus::generic_direction(rng, s);
        const auto mu       = brion_moments(s, sp(z), 8);
        for (unsigned j = 0; j < 8; ++j)
        {
            EXPECT_EQ(mu[j], oracle::simplex_axial(s.vertices, z, j)) << i << " " << j;
        }
    }
}

TEST(Oracles, CubeMomentsMatchProductFormula)
{
    const auto c = corpus::unit_cube();
    const point<rational> z{q(1, 3), q(2, 7), q(5, 11)};
    const auto mu = brion_moments(c, sp(z), 5);
    for (unsigned j = 0; j < 5; ++j)
    {
        // Multinomial expansion of <x,z>^j over [0,1]^3.
        rational expect = 0;
        for (unsigned a = 0; a <= j; ++a)
        {
            for (unsigned b = 0; a + b <= j; ++b)
            {
                const unsigned cc = j - a - b;
                rational w = oracle::frac(factorial(j), factorial(a) * factorial(b) * factorial(cc));
                for (unsigned t = 0; t < a; ++t) w *= z[0];
                for (unsigned t = 0; t < b; ++t) w *= z[1];
                for (unsigned t = 0; t < cc; ++t) w *= z[2];
                expect += w * oracle::unit_cube_monomial({a, b, cc});
            }
        }
        EXPECT_EQ(mu[j], expect) << j;
    }
}

TEST(Oracles, NonSimplePyramidUsesTriangulationCones)
{
    const auto p = corpus::square_pyramid();
    std::mt19937_64 rng(51);
    const auto z  = corpus::generic_direction(rng, p);
    const auto mu = brion_moments(p, sp(z), 6);
    EXPECT_EQ(mu[0], q(1, 3));
    for (unsigned j = 0; j < 6; ++j)
    {
        rational expect = 0;
        for (const auto& s : *p.simplices)
        {
            expect += oracle::simplex_axial(simplex_points(p, s), z, j);
        }
        EXPECT_EQ(mu[j], expect);
    }
}

TEST(Monomial, Examples)
{
    const auto s   = corpus::unit_square();
    const auto one = unit_density<rational>(2);
    EXPECT_EQ(monomial_moment(s, {1, 0}, one), q(1, 2));
    EXPECT_EQ(monomial_moment(s, {0, 0}, one), 1);
    EXPECT_EQ(monomial_moment(corpus::unit_triangle(), {1, 1}, one), q(1, 24));
}

TEST(Monomial, AgreesWithBarycentricIntegrationIn3D)
{
    std::mt19937_64 rng(61);
    const auto c = corpus::random_polyhedron(rng, 1);
    const auto rho = corpus::random_density(rng, c, 1);
    for (const exponent& m : {exponent{0, 0, 0}, exponent{2, 1, 0}, exponent{0, 0, 3}})
    {
        EXPECT_EQ(monomial_moment(c, m, rho), oracle::barycentric_moment(c, m, rho));
    }
}

TEST(FloatMode, AgreesWithExact)
{
    std::mt19937_64 rng(71);
    for (const auto& e : corpus::make_corpus(10, 17))
    {
        const auto z  = corpus::generic_direction(rng, e.body);
        const auto ex = brion_moments(e.body, sp(z), 6);
        const auto fp = convert_polytope<double>(e.body);
        const auto zd = convert_point<double>(z);
        const auto fl = brion_moments(fp, std::span<const double>(zd), 6);
        for (std::size_t j = 0; j < 6; ++j)
        {
            const double x = ex[j].get_d();
            EXPECT_NEAR(fl[j], x, 1e-9 * (1 + std::fabs(x))) << e.name << " " << j;
        }
    }
}

TEST(Noise, ZeroIsIdentityAndBoundHolds)
{
    moment_sequence<double> ms;
    ms.dim       = 2;
    ms.direction = {1, 2};
    ms.moments   = {0.5, 0.5, 7.0 / 12};
    std::mt19937_64 rng(1);
    EXPECT_EQ(add_noise(ms, 0.0, rng).moments, ms.moments);
    const auto noisy = add_noise(ms, 1e-9, rng);
    for (std::size_t j = 0; j < ms.moments.size(); ++j)
    {
        EXPECT_LE(std::fabs(noisy.moments[j] - ms.moments[j]), 1e-9 * std::fabs(ms.moments[j]));
    }
    EXPECT_THROW(add_noise(ms, -1.0, rng), polymom::invalid_argument);
}

TEST(Noise, FixedSeedIsReproducible)
{
    moment_sequence<double> ms;
    ms.dim       = 2;
    ms.direction = {1, 2};
    ms.moments   = {0.5, 0.5, 7.0 / 12};
    std::mt19937_64 rng(42);
    const auto n = add_noise(ms, 1e-9, rng);
    EXPECT_DOUBLE_EQ(n.moments[0], 0.50000000025515556);
    EXPECT_DOUBLE_EQ(n.moments[1], 0.50000000013903134);
    EXPECT_DOUBLE_EQ(n.moments[2], 0.58333333362750273);
}
