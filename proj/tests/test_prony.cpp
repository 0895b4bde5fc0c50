#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include <polymom/polymom.hpp>

#include "support/corpus.hpp"

using namespace polymom;
using corpus::q;

namespace
{

using P = polynomial<rational>;

const std::vector<rational> triangle_c{0, 0, 1, 3, 7, 15, 31};

matrix<rational> rows(std::initializer_list<std::vector<rational>> r) { return matrix<rational>::from_rows(r); }

bool same(const matrix<rational>& a, const matrix<rational>& b)
{
    if (a.rows() != b.rows() || a.cols() != b.cols())
    {
        return false;
    }
    for (std::size_t i = 0; i < a.rows(); ++i)
    {
        for (std::size_t j = 0; j < a.cols(); ++j)
        {
            if (a(i, j) != b(i, j))
            {
                return false;
            }
        }
    }
    return true;
}

moment_sequence<rational> exact_sequence(const polytope<rational>& p, const point<rational>& z,
                                         std::size_t count,
                                         const multipoly<rational>& rho)
{
    moment_sequence<rational> ms;
    ms.dim            = p.dim;
    ms.direction      = z;
    ms.density_degree = rho.degree();
    ms.moments        = exact_moments_any_direction(p, std::span<const rational>(z), count, rho);
    return ms;
}

moment_sequence<rational> exact_sequence(const polytope<rational>& p, const point<rational>& z,
                                         std::size_t count)
{
    return exact_sequence(p, z, count, unit_density<rational>(p.dim));
}

} // namespace

TEST(BuildHankel, Definition)
{
    const auto hs = build_hankel(std::vector<rational>{2, 1, 1, 1, 1}, 3);
    EXPECT_TRUE(same(hs.h, rows({{2, 1, 1}, {1, 1, 1}, {1, 1, 1}})));
    EXPECT_EQ(hs.m, 3u);
    EXPECT_FALSE(hs.rank.has_value());
}

TEST(BuildHankel, TriangleVector)
{
    const auto hs = build_hankel(triangle_c, 4);
    EXPECT_TRUE(same(hs.h, rows({{0, 0, 1, 3}, {0, 1, 3, 7}, {1, 3, 7, 15}, {3, 7, 15, 31}})));
}

TEST(BuildHankel, ZeroVectorAndErrors)
{
    const auto hs = build_hankel(std::vector<rational>(5, rational(0)), 3);
    EXPECT_TRUE(same(hs.h, matrix<rational>(3, 3)));
    EXPECT_THROW(build_hankel(std::vector<rational>{1, 2, 3}, 3), insufficient_moments);
    EXPECT_THROW(build_hankel(std::vector<rational>{1}, 0), polymom::invalid_argument);
}

TEST(RankAndKernel, TriangleHasRankThree)
{
    auto hs = build_hankel(triangle_c, 4);
    rank_and_kernel(hs);
    EXPECT_EQ(hs.rank, 3u);
    ASSERT_EQ(hs.kernel.size(), 1u);
    EXPECT_EQ(hs.kernel[0], (std::vector<rational>{0, 2, -3, 1}));
}

TEST(RankAndKernel, SmallRankTwoExample)
{
    auto hs = build_hankel(std::vector<rational>{2, 1, 1, 1, 1}, 3);
    EXPECT_EQ(hankel_rank(hs), 2u);
    ASSERT_EQ(hs.kernel.size(), 1u);
    EXPECT_EQ(hs.kernel[0], (std::vector<rational>{0, -1, 1}));
}

TEST(RankAndKernel, ZeroMatrix)
{
    auto hs = build_hankel(std::vector<rational>(5, rational(0)), 3);
    rank_and_kernel(hs);
    EXPECT_EQ(hs.rank, 0u);
    EXPECT_EQ(hs.kernel.size(), 3u);
}

TEST(RankAndKernel, FloatRankMatchesExact)
{
    const std::vector<std::pair<polytope<rational>, point<rational>>> cases{
        {corpus::unit_triangle(), {1, 2}},
        {corpus::unit_square(), {1, 2}},
        {corpus::square_pyramid(), {q(1, 3), q(2, 3), q(1, 7)}}};
    for (const auto& [p, z] : cases)
    {
        const std::size_t n = p.size();
        for (std::size_t m : {n + 1, n + 2})
        {
            const auto ms = exact_sequence(p, z, moments_for_hankel(m, p.dim, 0));
            const auto c  = scaled_moment_vector(ms, 2 * m - 2).c;
            std::vector<double> cd;
            for (const auto& x : c)
            {
                cd.push_back(x.get_d());
            }
            auto he = build_hankel(c, m);
            auto hf = build_hankel(cd, m);
            EXPECT_EQ(hankel_rank(he), n);
            EXPECT_EQ(hankel_rank(hf), n) << p.size() << " m=" << m;
            EXPECT_EQ(hf.singular_values.size(), m);
            EXPECT_EQ(hf.kernel.size(), m - n);
        }
    }
}

TEST(MinimalKernel, SmallExample)
{
    auto hs = build_hankel(std::vector<rational>{2, 1, 1, 1, 1}, 3);
    EXPECT_EQ(minimal_kernel_vector(hs), P({0, -1, 1}));
}

TEST(MinimalKernel, TrianglePronyPolynomial)
{
    auto hs = build_hankel(triangle_c, 4);
    EXPECT_EQ(minimal_kernel_vector(hs), P({0, 2, -3, 1}));
}

TEST(MinimalKernel, RankZeroGivesConstant)
{
    auto hs = build_hankel(std::vector<rational>(5, rational(0)), 3);
    EXPECT_EQ(minimal_kernel_vector(hs), P({1}));
}

TEST(MinimalKernel, FullRankNeedsMoreMoments)
{
    auto hs = build_hankel(std::vector<rational>{1, 0, 1, 0, 2}, 3);
    EXPECT_THROW(minimal_kernel_vector(hs), full_rank);
}

TEST(RootsExact, Examples)
{
    const auto a = roots_exact(P({0, -1, 1}));
    ASSERT_EQ(a.size(), 2u);
    EXPECT_EQ(a[0].value, 0);
    EXPECT_EQ(a[1].value, 1);
    EXPECT_EQ(a[0].multiplicity, 1u);
    const auto b = roots_exact(P({0, 2, -3, 1}));
    ASSERT_EQ(b.size(), 3u);
    EXPECT_EQ(b[2].value, 2);
    const auto c = roots_exact(P({q(1, 4), -1, 1}));
    ASSERT_EQ(c.size(), 1u);
    EXPECT_EQ(c[0].value, q(1, 2));
    EXPECT_EQ(c[0].multiplicity, 2u);
}

TEST(RootsExact, LargeDenominatorsAndIrrationalRoots)
{
    const std::vector<rational> r{q(-9973, 10007), q(1, 10007), q(5001, 10007), q(3, 2)};
    const auto found = roots_exact(P::from_roots(r));
    ASSERT_EQ(found.size(), 4u);
    for (std::size_t i = 0; i < 4; ++i)
    {
        EXPECT_EQ(found[i].value, r[i]);
    }
    EXPECT_THROW(roots_exact(P({-2, 0, 1})), irrational_root);
    EXPECT_THROW(roots_exact(P({1, 0, 1})), irrational_root);
    EXPECT_EQ(simplest_between(q(1, 3), q(1, 2)), q(2, 5));
    EXPECT_EQ(simplest_between(q(-1, 2), q(3)), 0);
}

TEST(RootsFloat, Examples)
{
    const auto a = roots_float(polynomial<double>({0.0, -1.0, 1.0}));
    ASSERT_EQ(a.roots.size(), 2u);
    EXPECT_NEAR(a.roots[0].value, 0.0, 1e-14);
    EXPECT_NEAR(a.roots[1].value, 1.0, 1e-14);

    const auto b = roots_float(polynomial<double>({1e-10, 2.0 - 1e-10, -3.0 + 1e-10, 1.0}));
    ASSERT_EQ(b.roots.size(), 3u);
    for (int i = 0; i < 3; ++i)
    {
        EXPECT_NEAR(b.roots[i].value, i, 1e-8);
    }

    const auto c = roots_float(polynomial<double>({0.25, -1.0, 1.0}));
    ASSERT_EQ(c.roots.size(), 1u);
    EXPECT_NEAR(c.roots[0].value, 0.5, 1e-7);
    EXPECT_EQ(c.roots[0].multiplicity, 2u);

    EXPECT_TRUE(roots_float(polynomial<double>({1.0, 0.0, 1.0})).roots.empty());
}

TEST(Projections, UnitTriangle)
{
    const auto t  = corpus::unit_triangle();
    const auto ms = exact_sequence(t, {1, 2}, moments_for_hankel(hankel_size(4, 0), 2, 0));
    const auto ps = projections_from_moments(ms, 4);
    EXPECT_EQ(ps.values, (std::vector<rational>{0, 1, 2}));
    EXPECT_EQ(ps.rank, 3u);
    EXPECT_EQ(ps.m, 5u);
}

TEST(Projections, UnitSquare)
{
    const auto s  = corpus::unit_square();
    const auto ms = exact_sequence(s, {1, 2}, moments_for_hankel(hankel_size(4, 0), 2, 0));
    EXPECT_EQ(projections_from_moments(ms, 4).values, (std::vector<rational>{0, 1, 2, 3}));
    EXPECT_THROW(projections_from_moments(ms, 2), full_rank);
    auto short_ms = ms;
    short_ms.moments.resize(3);
    EXPECT_THROW(projections_from_moments(short_ms, 4), insufficient_moments);
}

TEST(Projections, CollidingDirectionIsDetected)
{
    // Along (1,0) the triangle vertices (0,0) and (0,1) share projection 0;
    // the Hankel data then carries a confluent node, so p_z = t^2 (t - 1).
    const auto t  = corpus::unit_triangle();
    const auto ms = exact_sequence(t, {1, 0}, moments_for_hankel(hankel_size(4, 0), 2, 0));
    const auto pp = prony_polynomial_from_moments(ms, hankel_size(4, 0));
    EXPECT_EQ(pp.p, P::from_roots({0, 0, 1}));
    EXPECT_THROW(projections_from_moments(ms, 4), multiplicity_mismatch);
}

TEST(Projections, PolynomialDensityRaisesMultiplicity)
{
    const auto t   = corpus::unit_triangle();
    const auto rho = parse_density("x1 + 2 x2 + 1", 2);
    const auto m   = hankel_size(3, 1);
    const auto ms  = exact_sequence(t, {1, 2}, moments_for_hankel(m, 2, 1), rho);
    const auto ps  = projections_from_moments(ms, 3);
    EXPECT_EQ(ps.values, (std::vector<rational>{0, 1, 2}));
    EXPECT_EQ(ps.rank, 6u);
    EXPECT_EQ(ps.prony.multiplicity, 2u);
    EXPECT_EQ(ps.prony.p, P::from_roots({0, 0, 1, 1, 2, 2}));
}

TEST(Projections, RankStability)
{
    // Rank 1 on the leading 2x2 block, 3 on the full matrix.
    EXPECT_THROW(prony_polynomial_from_scaled(scaled_vector<rational>{0, 0, {1, 0, 0, 0, 0, 0, 1}},
                                              4, prony_options{}, nullptr),
                 rank_unstable);
}

TEST(Projections, FloatModeTriangle)
{
    polytope_oracle<double> o(corpus::unit_triangle());
    const point<double> z{0.25, 0.75};
    moment_sequence<double> ms;
    ms.dim       = 2;
    ms.direction = z;
    ms.moments   = o.moments(std::span<const double>(z), moments_for_hankel(hankel_size(3, 0), 2, 0));
    const auto ps = projections_from_moments(ms, 3);
    ASSERT_EQ(ps.size(), 3u);
    EXPECT_NEAR(ps.values[0], 0.0, 1e-10);
    EXPECT_NEAR(ps.values[1], 0.25, 1e-10);
    EXPECT_NEAR(ps.values[2], 0.75, 1e-10);
    EXPECT_GT(ps.sensitivity, 0.0);
}
