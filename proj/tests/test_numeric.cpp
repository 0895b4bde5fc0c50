#include <random>

#include <gtest/gtest.h>

#include <polymom/polymom.hpp>

#include "support/corpus.hpp"

using namespace polymom;
using corpus::q;

TEST(Rational, ParsesFractionsIntegersAndDecimals)
{
    EXPECT_EQ(parse_rational("3/6"), q(1, 2));
    EXPECT_EQ(parse_rational("-7"), q(-7));
    EXPECT_EQ(parse_rational("+4"), q(4));
    EXPECT_EQ(parse_rational("010/012"), q(5, 6));
    EXPECT_EQ(parse_rational("0.25"), q(1, 4));
    EXPECT_EQ(parse_rational("-0.075e1"), q(-3, 4));
    EXPECT_EQ(parse_rational("-1.25"), q(-5, 4));
    EXPECT_EQ(parse_rational("3e-2"), q(3, 100));
    EXPECT_EQ(parse_rational("2.5E+1"), q(25));
}

TEST(Rational, RejectsMalformedLiterals)
{
    for (const char* bad : {"", "1/", "/2", "1/0", "abc", "1.2.3", "1e", "--1"})
    {
        EXPECT_THROW(parse_rational(bad), parse_error) << bad;
    }
}

TEST(Rational, StringFormRoundTrips)
{
    std::mt19937_64 rng(7);
    for (int i = 0; i < 200; ++i)
    {
        const rational x = q(corpus::uniform_int(rng, -1000, 1000), corpus::uniform_int(rng, 1, 997));
        EXPECT_EQ(parse_rational(format_rational(x)), x);
        EXPECT_GT(x.get_den(), 0);
    }
    EXPECT_EQ(format_rational(q(6, -4)), "-3/2");
    EXPECT_EQ(format_rational(q(8, 4)), "2");
}

TEST(Rational, FieldLawsHoldExactly)
{
    std::mt19937_64 rng(11);
    for (int i = 0; i < 300; ++i)
    {
        const rational a = corpus::small_rational(rng), b = corpus::small_rational(rng),
                       c = corpus::small_rational(rng);
        EXPECT_EQ(rational((a + b) + c), rational(a + (b + c)));
        EXPECT_EQ(rational(a * b), rational(b * a));
        EXPECT_EQ(rational(a * (b + c)), rational(a * b + a * c));
    }
}

TEST(Rational, FromDoubleUsesShortestDecimal)
{
    EXPECT_EQ(rational_from_double(0.1), q(1, 10));
    EXPECT_EQ(rational_from_double(-2.5), q(-5, 2));
    EXPECT_NE(rational_from_binary(0.1), q(1, 10));
    EXPECT_THROW(rational_from_double(std::nan("")), polymom::invalid_argument);
}

TEST(Integers, FactorialsAndPrimes)
{
    EXPECT_EQ(factorial(0), 1);
    EXPECT_EQ(factorial(10), 3628800);
    EXPECT_EQ(falling_ratio(7, 4), 210);
    EXPECT_EQ(next_prime(1000000), 1000003ul);
    EXPECT_TRUE(is_prime(10007));
    EXPECT_FALSE(is_prime(10008));
}

TEST(Density, ParsesConstant)
{
    const auto p = parse_density("1", 2);
    EXPECT_EQ(p.degree(), 0u);
    EXPECT_EQ(p.coefficient({0, 0}), 1);
    EXPECT_EQ(p.terms().size(), 1u);
}

TEST(Density, ParsesSingleMonomial)
{
    const auto p = parse_density("x1", 2);
    EXPECT_EQ(p.degree(), 1u);
    EXPECT_EQ(p.terms().size(), 1u);
    EXPECT_EQ(p.coefficient({1, 0}), 1);
}

TEST(Density, ParsesSignedSumOfTerms)
{
    const auto p = parse_density("3/2 x1^2 x2 - x2", 2);
    EXPECT_EQ(p.degree(), 3u);
    EXPECT_EQ(p.terms().size(), 2u);
    EXPECT_EQ(p.coefficient({2, 1}), q(3, 2));
    EXPECT_EQ(p.coefficient({0, 1}), -1);
    EXPECT_EQ(p.evaluate(point<rational>{1, 1}), q(1, 2));
}

TEST(Density, CombinesLikeTermsAndDropsZeros)
{
    const auto p = parse_density("x1 x2 + 2 x2 x1 - 3 x1 x2 + 5", 2);
    EXPECT_EQ(p.terms().size(), 1u);
    EXPECT_EQ(p.degree(), 0u);
}

TEST(Density, ReportsErrors)
{
    EXPECT_THROW(parse_density("x3", 2), parse_error);
    EXPECT_THROW(parse_density("x1^-2", 2), parse_error);
    EXPECT_THROW(parse_density("2 +", 2), parse_error);
    EXPECT_THROW(parse_density("y1", 2), parse_error);
    try
    {
        parse_density("x1 + x7", 2);
        FAIL();
    }
    catch (const parse_error& e)
    {
        EXPECT_GE(e.offset(), 5u);
    }
}

TEST(Multipoly, ArithmeticAgreesWithEvaluation)
{
    const auto a = parse_density("x1 - 2 x2 + 1/3", 2);
    const auto b = parse_density("x1^2 x2 + 4", 2);
    const point<rational> x{q(2, 3), q(-5, 7)};
    EXPECT_EQ((a * b).evaluate(x), rational(a.evaluate(x) * b.evaluate(x)));
    EXPECT_EQ((a + b).evaluate(x), rational(a.evaluate(x) + b.evaluate(x)));
    EXPECT_EQ((a * b).degree(), 4u);
    EXPECT_EQ((a * b).homogeneous_part(4), parse_density("x1^3 x2 - 2 x1^2 x2^2", 2));
}

namespace
{

// f(z) = <(1,2), z>^2 on jets.
jet<rational> square_form(std::span<const jet<rational>> z)
{
    const jet<rational> s = z[0] + z[1] * jet<rational>::constant(z[0].layout_ptr(), rational(2));
    return s * s;
}

} // namespace

TEST(DiffOperator, IdentityEvaluatesTheFunction)
{
    const point<rational> z{1, 1};
    EXPECT_EQ(apply_diff_operator(parse_density("1", 2), square_form, std::span<const rational>(z)), 9);
}

TEST(DiffOperator, FirstAndMixedPartials)
{
    const point<rational> z{1, 1};
    const std::span<const rational> zs(z);
    EXPECT_EQ(apply_diff_operator(parse_density("x1", 2), square_form, zs), 6);
    EXPECT_EQ(apply_diff_operator(parse_density("x1 x2", 2), square_form, zs), 4);
    EXPECT_EQ(apply_diff_operator(parse_density("x2^2", 2), square_form, zs), 8);
}

namespace
{

/// Symbolic partial derivative of a multipoly.
multipoly<rational> partial(const multipoly<rational>& f, std::size_t var)
{
    multipoly<rational> out(f.dim());
    for (const auto& [m, c] : f.terms())
    {
        if (m[var] == 0)
        {
            continue;
        }
        auto e = m;
        --e[var];
        out.add_term(e, c * rational(static_cast<long>(m[var])));
    }
    return out;
}

multipoly<rational> random_poly(std::mt19937_64& rng, std::size_t d, unsigned deg)
{
    multipoly<rational> p(d);
    for (int t = 0; t < 8; ++t)
    {
        exponent m(d, 0);
        unsigned left = static_cast<unsigned>(corpus::uniform_int(rng, 0, deg));
        for (std::size_t i = 0; i < d && left > 0; ++i)
        {
            const unsigned e = i + 1 == d ? left : static_cast<unsigned>(corpus::uniform_int(rng, 0, left));
            m[i] = e;
            left -= e;
        }
        p.add_term(m, corpus::small_rational(rng));
    }
    return p;
}

} // namespace

TEST(DiffOperator, AgreesWithSymbolicDifferentiation)
{
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 60; ++trial)
    {
        const std::size_t d = 1 + static_cast<std::size_t>(trial % 4);
        const auto f        = random_poly(rng, d, 6);
        const auto rho      = random_poly(rng, d, 3);
        const auto z        = corpus::small_point(rng, d);
        // Symbolic: sum_m rho_m d^m f, evaluated at z.
        rational expect = 0;
        for (const auto& [m, c] : rho.terms())
        {
            auto g = f;
            for (std::size_t i = 0; i < d; ++i)
            {
                for (unsigned k = 0; k < m[i]; ++k)
                {
                    g = partial(g, i);
                }
            }
            expect += c * g.evaluate(z);
        }
        auto fj = [&](std::span<const jet<rational>> x) {
            auto acc = jet<rational>::constant(x[0].layout_ptr(), rational(0));
            for (const auto& [m, c] : f.terms())
            {
                auto term = jet<rational>::constant(x[0].layout_ptr(), c);
                for (std::size_t i = 0; i < d; ++i)
                {
                    term = term * x[i].pow(m[i]);
                }
                acc = acc + term;
            }
            return acc;
        };
        EXPECT_EQ(apply_diff_operator(rho, fj, std::span<const rational>(z)), expect) << trial;
    }
}

TEST(Jet, RingLawsAndReciprocal)
{
    auto layout = jet_layout::get(2, 3);
    const auto x = jet<rational>::variable(layout, 0, q(1, 2));
    const auto y = jet<rational>::variable(layout, 1, q(-3));
    const auto c = jet<rational>::constant(layout, q(5));
    EXPECT_EQ(((x + y) * c).coefficient({1, 0}), 5);
    const auto r = (x + c).reciprocal() * (x + c);
    EXPECT_EQ(r.coefficient({0, 0}), 1);
    EXPECT_EQ(r.coefficient({1, 0}), 0);
    EXPECT_EQ(r.coefficient({2, 0}), 0);
    EXPECT_EQ(r.coefficient({3, 0}), 0);
    // (y)^3 at y = -3 + e: e^3 coefficient 1, e^2 coefficient -9.
    EXPECT_EQ(y.pow(3).coefficient({0, 3}), 1);
    EXPECT_EQ(y.pow(3).coefficient({0, 2}), -9);
    EXPECT_EQ(c.coefficient({1, 1}), 0);
    EXPECT_THROW(jet<rational>::constant(layout, q(0)).reciprocal(), singular_matrix);
}

TEST(Jet, FloatMatchesExact)
{
    std::mt19937_64 rng(9);
    auto le = jet_layout::get(3, 2);
    for (int trial = 0; trial < 50; ++trial)
    {
        const auto z = corpus::small_point(rng, 3);
        const auto a = corpus::small_point(rng, 3);
        const auto w = convert_point<double>(a);
        const auto zd = convert_point<double>(z);
        const rational base = dot(a, z);
        if (abs(base) < q(1, 1000))
        {
            continue;
        }
        const auto je = linear_jet<rational>(le, a, z).reciprocal().pow(3);
        const auto jd = linear_jet<double>(jet_layout::get(3, 2), w, zd).reciprocal().pow(3);
        for (const exponent& m : {exponent{0, 0, 0}, exponent{1, 0, 0}, exponent{0, 1, 1},
                                  exponent{0, 0, 2}})
        {
            const double ex = je.coefficient(m).get_d();
            EXPECT_NEAR(jd.coefficient(m), ex, 1e-12 * (1 + std::fabs(ex)));
        }
    }
}

TEST(Polynomial, ArithmeticRootsAndInterpolation)
{
    using P = polynomial<rational>;
    const auto p = P::from_roots({0, 1, 2});
    EXPECT_EQ(p, P({0, 2, -3, 1}));
    EXPECT_EQ(p.derivative(), P({2, -6, 3}));
    EXPECT_EQ(p(q(3)), 6);
    const auto [quo, rem] = divmod(p, P({-1, 1}));
    EXPECT_EQ(rem, P());
    EXPECT_EQ(quo, P::from_roots({0, 2}));
    EXPECT_EQ(gcd(p, P::from_roots({2, 5})), P({-2, 1}));
    const auto sq = P::from_roots({q(1, 2), q(1, 2), 3});
    EXPECT_EQ(squarefree_part(sq), P::from_roots({q(1, 2), 3}));
    const std::vector<rational> xs{0, 1, 2, 3};
    std::vector<rational> ys;
    for (const auto& x : xs)
    {
        ys.push_back(p(x));
    }
    EXPECT_EQ(interpolate(xs, ys), p);
    EXPECT_THROW(interpolate(std::vector<rational>{1, 1}, std::vector<rational>{0, 1}),
                 polymom::invalid_argument);
}

TEST(Dense, DeterminantAndSolve)
{
    const auto a = matrix<rational>::from_rows({{2, 1, 0}, {1, 3, 1}, {0, 1, 4}});
    EXPECT_EQ(determinant(a), 18);
    const auto x = solve(a, std::vector<rational>{3, 5, 5});
    EXPECT_EQ(x, (std::vector<rational>{1, 1, 1}));
    const auto s = matrix<rational>::from_rows({{1, 2}, {2, 4}});
    EXPECT_EQ(determinant(s), 0);
    EXPECT_THROW(solve(s, std::vector<rational>{1, 1}), singular_matrix);
    const auto f = matrix<double>::from_rows({{4, 1}, {2, 3}});
    EXPECT_NEAR(determinant(f), 10.0, 1e-12);
}
