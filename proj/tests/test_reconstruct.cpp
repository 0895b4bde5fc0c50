#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include <polymom/polymom.hpp>

#include "support/corpus.hpp"

using namespace polymom;
using corpus::pt;
using corpus::q;

namespace
{

matching_problem<rational> triangle_problem(long beta)
{
    matching_problem<rational> mp;
    mp.x1    = {0, 1, 2};
    mp.xi    = {0, 2, 1};
    mp.alpha = 1;
    mp.beta  = beta;
    // True vertices pair (0,0), (1,2), (2,1).
    std::vector<rational> r{0, rational(1 + 2 * beta), rational(2 + beta)};
    std::sort(r.begin(), r.end());
    mp.roots = r;
    mp.pz    = polynomial<rational>::from_roots(r);
    return mp;
}

reconstruct_options<rational> exact_opt(std::size_t nmax, std::uint64_t seed = 1)
{
    reconstruct_options<rational> o;
    o.nmax = nmax;
    o.seed = seed;
    return o;
}

double max_error(const std::vector<point<double>>& got, const std::vector<point<rational>>& truth)
{
    EXPECT_EQ(got.size(), truth.size());
    double worst = 0;
    for (const auto& t : truth)
    {
        double best = INFINITY;
        for (const auto& g : got)
        {
            double e = 0;
            for (std::size_t i = 0; i < t.size(); ++i)
            {
                e = std::max(e, std::fabs(g[i] - t[i].get_d()));
            }
            best = std::min(best, e);
        }
        worst = std::max(worst, best);
    }
    return worst;
}

} // namespace

TEST(Matching, TriangleBetaThreeIsUnique)
{
    const auto mp      = triangle_problem(3);
    EXPECT_EQ(mp.roots, (std::vector<rational>{0, 5, 7}));
    const auto pairing = match_projections(mp);
    ASSERT_EQ(pairing.size(), 3u);
    EXPECT_EQ(mp.xi[pairing[0]], 0);
    EXPECT_EQ(mp.xi[pairing[1]], 2);
    EXPECT_EQ(mp.xi[pairing[2]], 1);
}

TEST(Matching, TriangleBetaTwoIsAmbiguous)
{
    const auto mp = triangle_problem(2);
    EXPECT_EQ(mp.roots, (std::vector<rational>{0, 4, 5}));
    EXPECT_THROW(match_projections(mp), ambiguous_matching);
}

TEST(Matching, SingleVertexIsTrivial)
{
    matching_problem<rational> mp;
    mp.x1    = {q(3, 7)};
    mp.xi    = {q(-1, 2)};
    mp.beta  = 1;
    mp.roots = {rational(q(3, 7) + q(-1, 2))};
    mp.pz    = polynomial<rational>::from_roots(mp.roots);
    EXPECT_EQ(match_projections(mp), (std::vector<std::size_t>{0}));
}

TEST(Matching, FloatToleranceAcceptsNearbySums)
{
    matching_problem<double> mp;
    mp.x1    = {0.0, 1.0 + 1e-9, 2.0};
    mp.xi    = {0.0, 2.0, 1.0 - 1e-9};
    mp.beta  = 3;
    mp.roots = {0.0, 5.0, 7.0};
    mp.pz    = polynomial<double>::from_roots(mp.roots);
    const auto pairing = match_projections(mp, 1e-6);
    EXPECT_EQ(pairing, (std::vector<std::size_t>{0, 1, 2}));
    mp.x1[1] = 1.5;
    EXPECT_THROW(match_projections(mp, 1e-6), ambiguous_matching);
}

TEST(ChooseBeta, TriangleSkipsCollisionAndAmbiguity)
{
    polytope_oracle<rational> o(corpus::unit_triangle());
    const prony_options po;
    const auto p1 = solve_direction<rational>(o, {1, 2}, 3, 0, po);
    const auto p2 = solve_direction<rational>(o, {2, 1}, 3, 0, po);
    EXPECT_EQ(p2.values, (std::vector<rational>{0, 1, 2}));
    std::mt19937_64 rng(1);
    std::vector<std::string> log;
    const auto choice = choose_beta(p1, p2, o, 0, 10, exact_opt(3), rng, &log);
    EXPECT_EQ(choice.beta, 3);
    EXPECT_EQ(choice.trials, 3u);
    EXPECT_EQ(log.size(), 2u);
    EXPECT_EQ(choice.combined.values, (std::vector<rational>{0, 5, 7}));
}

TEST(ChooseBeta, SingleVertex)
{
    polytope_oracle<rational> o(corpus::unit_triangle());
    projection_set<rational> p1, p2;
    p1.direction = {1, 2};
    p1.values    = {1};
    p2.direction = {2, 1};
    p2.values    = {2};
    std::mt19937_64 rng(1);
    const auto choice = choose_beta(p1, p2, o, 0, 10, exact_opt(1), rng, nullptr);
    EXPECT_EQ(choice.beta, 1);
    EXPECT_EQ(choice.pairing, (std::vector<std::size_t>{0}));
}

TEST(ChooseBeta, UnitSquareWithinTrialBound)
{
    polytope_oracle<rational> o(corpus::unit_square());
    const prony_options po;
    const auto p1 = solve_direction<rational>(o, {1, 2}, 4, 0, po);
    const auto p2 = solve_direction<rational>(o, {2, 1}, 4, 0, po);
    std::mt19937_64 rng(1);
    const auto choice = choose_beta(p1, p2, o, 0, 65, exact_opt(4), rng, nullptr);
    EXPECT_LE(choice.beta, 65);
    EXPECT_EQ(choice.beta, 3);
}

TEST(Assemble, IdentityAndSmallSystem)
{
    const std::vector<point<rational>> id{pt({1, 0}), pt({0, 1})};
    const std::vector<std::vector<rational>> tuples{{q(1, 3), 2}, {0, -1}};
    EXPECT_EQ(assemble_vertices(id, tuples), (std::vector<point<rational>>{pt({q(1, 3), 2}), pt({0, -1})}));
    const std::vector<point<rational>> z{pt({1, 2}), pt({2, 1})};
    EXPECT_EQ(assemble_vertices(z, {{1, 2}}), (std::vector<point<rational>>{pt({1, 0})}));
    EXPECT_EQ(assemble_vertices(z, {{0, 0}}), (std::vector<point<rational>>{pt({0, 0})}));
    EXPECT_THROW(assemble_vertices(std::vector<point<rational>>{pt({1, 2}), pt({2, 4})}, {{0, 0}}),
                 singular_matrix);
}

TEST(Reconstruct, UnitTriangleExact)
{
    polytope_oracle<rational> o(corpus::unit_triangle());
    const auto vs = reconstruct(o, exact_opt(3));
    EXPECT_EQ(vs.vertices, (std::vector<point<rational>>{pt({0, 0}), pt({0, 1}), pt({1, 0})}));
    EXPECT_EQ(vs.moment_count, 15u);
    EXPECT_EQ(vs.retries, 0u);
    EXPECT_EQ(vs.self_check_passed, true);
    EXPECT_GT(vs.self_check_moments, 0u);
    EXPECT_EQ(vs.base_directions.size(), 2u);
    EXPECT_EQ(vs.betas.size(), 1u);
}

TEST(Reconstruct, UnitCubeExact)
{
    const auto cube = corpus::unit_cube();
    polytope_oracle<rational> o(cube);
    const auto vs = reconstruct(o, exact_opt(8, 4));
    EXPECT_EQ(vs.vertices, corpus::sorted(cube.vertices));
    EXPECT_EQ(vs.moment_count, 70u);
}

TEST(Reconstruct, LooseVertexBound)
{
    polytope_oracle<rational> o(corpus::unit_triangle());
    const auto vs = reconstruct(o, exact_opt(10));
    EXPECT_EQ(vs.vertices.size(), 3u);
    EXPECT_GT(vs.moment_count, 15u);
}

TEST(Reconstruct, TooSmallBoundFails)
{
    polytope_oracle<rational> o(corpus::unit_square());
    EXPECT_THROW(reconstruct(o, exact_opt(2)), polymom::error);
    EXPECT_THROW(reconstruct(o, exact_opt(0)), polymom::invalid_argument);
}

TEST(Reconstruct, PolynomialDensity)
{
    corpus::rng_type rng(5);
    const auto body = corpus::random_polyhedron(rng, 1);
    const auto rho = corpus::random_density(rng, body, 2);
    polytope_oracle<rational> o(body, rho);
    const auto vs = reconstruct(o, exact_opt(body.size()));
    EXPECT_EQ(vs.vertices, corpus::sorted(body.vertices));
    for (auto r : vs.ranks)
    {
        EXPECT_EQ(r, 3 * body.size());
    }
    EXPECT_FALSE(vs.self_check_passed.has_value());
}

TEST(Reconstruct, NonSimplePyramid)
{
    const auto p = corpus::square_pyramid();
    polytope_oracle<rational> o(p);
    EXPECT_EQ(reconstruct(o, exact_opt(5)).vertices, corpus::sorted(p.vertices));
}

TEST(Reconstruct, FixedBasesAndBetas)
{
    polytope_oracle<rational> o(corpus::unit_triangle());
    auto opt        = exact_opt(3);
    opt.fixed_bases = {pt({1, 2}), pt({2, 1})};
    opt.fixed_betas = {{}, {2, 3}};
    const auto vs   = reconstruct(o, opt);
    EXPECT_EQ(vs.vertices.size(), 3u);
    EXPECT_EQ(vs.betas, (std::vector<rational>{3}));
    EXPECT_EQ(vs.base_directions, opt.fixed_bases);
}

TEST(Reconstruct, FromPrecomputedSequences)
{
    const auto t = corpus::unit_triangle();
    std::vector<moment_sequence<rational>> seqs;
    for (const point<rational>& z : {pt({1, 2}), pt({2, 1}), pt({7, 5})})
    {
        moment_sequence<rational> ms;
        ms.dim       = 2;
        ms.direction = z;
        ms.moments   = brion_moments(t, std::span<const rational>(z), 5);
        seqs.push_back(ms);
    }
    sequence_oracle<rational> o(2, 0, seqs);
    auto opt        = exact_opt(3);
    opt.fixed_bases = {pt({1, 2}), pt({2, 1})};
    opt.fixed_betas = {{}, {3}};
    opt.self_check  = false;
    EXPECT_EQ(reconstruct(o, opt).vertices, corpus::sorted(t.vertices));
    opt.fixed_bases = {pt({1, 2}), pt({3, 1})};
    EXPECT_THROW(reconstruct(o, opt), polymom::error);
}

TEST(Reconstruct, FloatSquareWithNoise)
{
    const auto s = corpus::unit_square();
    for (std::uint64_t seed = 1; seed <= 5; ++seed)
    {
        polytope_oracle<double> o(s, 1e-9, seed);
        reconstruct_options<double> opt;
        opt.nmax = 4;
        opt.seed = seed;
        const auto vs = reconstruct(o, opt);
        EXPECT_LE(max_error(vs.vertices, s.vertices), 1e-6) << seed;
    }
}

TEST(Reconstruct, FloatTriangleWithoutNoise)
{
    const auto t = corpus::unit_triangle();
    polytope_oracle<double> o(t);
    reconstruct_options<double> opt;
    opt.nmax = 3;
    EXPECT_LE(max_error(reconstruct(o, opt).vertices, t.vertices), 1e-10);
}

TEST(Frugal, MatchesPairwise)
{
    for (const auto& body : {corpus::unit_triangle(), corpus::unit_square(), corpus::unit_cube()})
    {
        polytope_oracle<rational> o(body);
        const auto a = reconstruct(o, exact_opt(body.size(), 3));
        const auto b = match_frugal_d_plus_1(o, exact_opt(body.size(), 3));
        EXPECT_EQ(a.vertices, b.vertices);
        EXPECT_EQ(b.vertices, corpus::sorted(body.vertices));
        EXPECT_EQ(b.direction_count, body.dim + 1);
    }
}

TEST(Frugal, SimplexNeedsOnlyDPlusOneDirections)
{
    corpus::rng_type rng(12);
    const auto s = corpus::random_simplex(rng, 3);
    polytope_oracle<rational> o(s);
    const auto vs = match_frugal_d_plus_1(o, exact_opt(4));
    EXPECT_EQ(vs.vertices, corpus::sorted(s.vertices));
    EXPECT_EQ(vs.direction_count, 4u);
}

TEST(Frugal, FloatSquare)
{
    const auto s = corpus::unit_square();
    polytope_oracle<double> o(s, 1e-9, 3);
    reconstruct_options<double> opt;
    opt.nmax = 4;
    EXPECT_LE(max_error(match_frugal_d_plus_1(o, opt).vertices, s.vertices), 1e-6);
}

TEST(Oracle, CountingTracksDistinctDirections)
{
    polytope_oracle<rational> inner(corpus::unit_triangle());
    counting_oracle<rational> o(inner);
    const point<rational> a{1, 2}, b{2, 1};
    o.moments(std::span<const rational>(a), 3);
    o.moments(std::span<const rational>(a), 5);
    o.moments(std::span<const rational>(b), 2);
    EXPECT_EQ(o.moment_count(), 7u);
    EXPECT_EQ(o.direction_count(), 2u);
}

TEST(Oracle, RoutesAgreeAndNoiseNeedsFloat)
{
    const auto t = corpus::unit_triangle();
    polytope_oracle<rational> brion(t, unit_density<rational>(2), 0.0, 1, forward_route::brion);
    polytope_oracle<rational> direct(t, unit_density<rational>(2), 0.0, 1, forward_route::direct);
    const point<rational> z{3, 5};
    EXPECT_EQ(brion.moments(std::span<const rational>(z), 6),
              direct.moments(std::span<const rational>(z), 6));
    EXPECT_THROW(polytope_oracle<rational>(t, 1e-9), polymom::invalid_argument);
}
