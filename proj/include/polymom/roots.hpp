#ifndef POLYMOM_ROOTS_HPP
#define POLYMOM_ROOTS_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Eigenvalues>

#include <polymom/error.hpp>
#include <polymom/polynomial.hpp>
#include <polymom/scalar.hpp>

namespace polymom
{

template <scalar_type T>
struct root
{
    T value;
    unsigned multiplicity = 1;
};

/// Simplest rational (smallest denominator, then smallest magnitude)
/// strictly between a < b.
inline rational simplest_between(const rational& a, const rational& b)
{
    if (!(a < b))
    {
        throw invalid_argument("simplest_between needs a < b");
    }
    if (sgn(a) < 0 && sgn(b) > 0)
    {
        return rational(0);
    }
    if (sgn(b) <= 0)
    {
        return rational(-simplest_between(rational(-b), rational(-a)));
    }
    // 0 <= a < b. Continued-fraction descent; `hi_inf` marks b = infinity.
    std::vector<integer> terms;
    rational lo = a, hi = b;
    bool hi_inf = false;
    while (true)
    {
        integer n;
        mpz_fdiv_q(n.get_mpz_t(), lo.get_num_mpz_t(), lo.get_den_mpz_t());
        const rational n1(n + 1);
        if (hi_inf || n1 < hi)
        {
            terms.push_back(n + 1);
            break;
        }
        // lo, hi in [n, n+1]; recurse on (1/(hi-n), 1/(lo-n)).
        terms.push_back(n);
        const rational lo_f = lo - rational(n);
        const rational hi_f = hi - rational(n);
        const rational new_lo = 1 / hi_f;
        if (sgn(lo_f) == 0)
        {
            hi_inf = true;
            lo     = new_lo;
        }
        else
        {
            hi = 1 / lo_f;
            lo = new_lo;
        }
    }
    rational x(terms.back());
    for (std::size_t i = terms.size() - 1; i-- > 0;)
    {
        x = rational(terms[i]) + 1 / x;
    }
    return x;
}

namespace detail
{

inline int sign_at(const polynomial<rational>& p, const rational& x)
{
    return sgn(p(x));
}

/// Sturm chain p, p', -rem(...), each divided by |leading coefficient|.
inline std::vector<polynomial<rational>> sturm_chain(const polynomial<rational>& p)
{
    std::vector<polynomial<rational>> chain;
    auto normalize = [](const polynomial<rational>& q) {
        const rational l = abs(q.leading());
        return polynomial<rational>(rational(1) / l * q);
    };
    chain.push_back(normalize(p));
    chain.push_back(normalize(p.derivative()));
    while (chain.back().degree() > 0)
    {
        auto r = divmod(chain[chain.size() - 2], chain.back()).second;
        if (r.is_zero())
        {
            break;
        }
        chain.push_back(normalize(rational(-1) * r));
    }
    return chain;
}

inline int sign_changes(const std::vector<polynomial<rational>>& chain, const rational& x)
{
    int changes = 0;
    int last    = 0;
    for (const auto& q : chain)
    {
        const int s = sign_at(q, x);
        if (s == 0)
        {
            continue;
        }
        if (last != 0 && s != last)
        {
            ++changes;
        }
        last = s;
    }
    return changes;
}

/// Leading coefficient of the primitive integer multiple of p.
inline integer primitive_leading(const polynomial<rational>& p)
{
    integer l = 1;
    for (const auto& c : p.coefficients())
    {
        mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), c.get_den_mpz_t());
    }
    integer g = 0;
    std::vector<integer> ints;
    for (const auto& c : p.coefficients())
    {
        integer v = c.get_num() * (l / c.get_den());
        mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), v.get_mpz_t());
        ints.push_back(v);
    }
    integer lead = ints.back() / g;
    return abs(lead);
}

///
/// Real roots of a square-free p, each required rational. The roots are
/// isolated with Sturm counts, then each isolating interval is shrunk by
/// bisection while the simplest rational inside is tested exactly. A root
/// p/q satisfies q <= Q (leading coefficient of the primitive integer
/// form), so once the interval is narrower than 1/Q^2 that test is
/// decisive.
///
inline std::vector<rational> rational_roots_squarefree(const polynomial<rational>& p)
{
    std::vector<rational> out;
    if (p.degree() < 1)
    {
        return out;
    }
    if (p.degree() == 1)
    {
        out.push_back(-p.coefficient(0) / p.coefficient(1));
        return out;
    }
    const auto chain = sturm_chain(p);
    const integer Q  = primitive_leading(p);
    const rational tiny(integer(1), Q * Q);

    rational bound = 0;
    for (long i = 0; i < p.degree(); ++i)
    {
        bound = std::max(bound, rational(abs(p.coefficient(static_cast<std::size_t>(i)) / p.leading())));
    }
    bound += 1;

    auto count = [&](const rational& lo, const rational& hi) {
        return sign_changes(chain, lo) - sign_changes(chain, hi);
    };

    // Isolation on half-open intervals (lo, hi] with p(lo) != 0.
    std::vector<std::pair<rational, rational>> work{{rational(-bound), bound}};
    std::vector<std::pair<rational, rational>> isolated;
    while (!work.empty())
    {
        auto [lo, hi] = work.back();
        work.pop_back();
        const int n = count(lo, hi);
        if (n == 0)
        {
            continue;
        }
        if (n == 1)
        {
            isolated.emplace_back(lo, hi);
            continue;
        }
        rational mid = (lo + hi) / 2;
        if (sign_at(p, mid) == 0)
        {
            // Move the split off the root, keeping it inside (lo, hi).
            rational step = (hi - lo) / 8;
            rational alt  = mid + step;
            while (sign_at(p, alt) == 0 || !(alt < hi))
            {
                step /= 2;
                alt = mid + step;
            }
            mid = alt;
        }
        work.emplace_back(lo, mid);
        work.emplace_back(mid, hi);
    }

    for (auto [lo, hi] : isolated)
    {
        if (sign_at(p, hi) == 0)
        {
            out.push_back(hi);
            continue;
        }
        const int slo = sign_at(p, lo);
        bool found    = false;
        while (true)
        {
            const rational s = simplest_between(lo, hi);
            const int ss     = sign_at(p, s);
            if (ss == 0)
            {
                out.push_back(s);
                found = true;
                break;
            }
            if (hi - lo < tiny)
            {
                break;
            }
            (ss == slo ? lo : hi) = s;
            const rational mid = (lo + hi) / 2;
            const int sm       = sign_at(p, mid);
            if (sm == 0)
            {
                out.push_back(mid);
                found = true;
                break;
            }
            (sm == slo ? lo : hi) = mid;
        }
        if (!found)
        {
            throw irrational_root("polynomial has an irrational root near " +
                                  std::to_string(rational((lo + hi) / 2).get_d()));
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

} // namespace detail

///
/// All roots of p with multiplicities, ascending; every root must be
/// rational and real.
///
inline std::vector<root<rational>> roots_exact(const polynomial<rational>& p)
{
    if (p.is_zero())
    {
        throw invalid_argument("roots of the zero polynomial");
    }
    std::vector<root<rational>> out;
    unsigned total = 0;
    for (const auto& [f, mult] : squarefree_decomposition(p))
    {
        for (auto& r : detail::rational_roots_squarefree(f))
        {
            out.push_back({r, mult});
            total += mult;
        }
    }
    if (total != static_cast<unsigned>(p.degree()))
    {
        throw irrational_root("polynomial of degree " + std::to_string(p.degree()) + " has " +
                              std::to_string(total) + " real roots counted with multiplicity");
    }
    std::sort(out.begin(), out.end(),
              [](const root<rational>& a, const root<rational>& b) { return a.value < b.value; });
    return out;
}

struct float_root_result
{
    std::vector<root<double>> roots;
    double residual_max = 0;
    std::vector<std::string> warnings;
};

///
/// Real roots of a float polynomial from the companion-matrix eigenvalues.
/// Eigenvalues with |imag| > real_tol are dropped; real parts closer than
/// cluster_tol * (1 + max|root|) are merged, multiplicities summed.
///
inline float_root_result roots_float(const polynomial<double>& p, double real_tol = 1e-7,
                                     double cluster_tol = 1e-6)
{
    float_root_result res;
    if (p.is_zero())
    {
        throw invalid_argument("roots of the zero polynomial");
    }
    const long n = p.degree();
    if (n < 1)
    {
        return res;
    }
    const double lead = p.leading();
    Eigen::MatrixXd comp = Eigen::MatrixXd::Zero(n, n);
    for (long i = 1; i < n; ++i)
    {
        comp(i, i - 1) = 1.0;
    }
    for (long i = 0; i < n; ++i)
    {
        comp(i, n - 1) = -p.coefficient(static_cast<std::size_t>(i)) / lead;
    }
    Eigen::EigenSolver<Eigen::MatrixXd> es(comp, false);
    if (es.info() != Eigen::Success)
    {
        throw singular_matrix("companion eigenvalue iteration did not converge");
    }
    std::vector<double> real;
    double scale = 0;
    for (long i = 0; i < n; ++i)
    {
        const std::complex<double> ev = es.eigenvalues()(i);
        if (std::fabs(ev.imag()) <= real_tol)
        {
            real.push_back(ev.real());
        }
        scale = std::max(scale, std::abs(ev));
    }
    std::sort(real.begin(), real.end());
    const double tol = cluster_tol * (1.0 + scale);
    for (std::size_t i = 0; i < real.size();)
    {
        std::size_t j = i + 1;
        double sum    = real[i];
        while (j < real.size() && real[j] - real[j - 1] <= tol)
        {
            sum += real[j];
            ++j;
        }
        res.roots.push_back({sum / static_cast<double>(j - i), static_cast<unsigned>(j - i)});
        i = j;
    }
    for (const auto& r : res.roots)
    {
        double mag = 0;
        double pw  = 1;
        for (long i = 0; i <= n; ++i)
        {
            mag += std::fabs(p.coefficient(static_cast<std::size_t>(i))) * pw;
            pw *= std::fabs(r.value);
        }
        const double rel = mag > 0 ? std::fabs(p(r.value)) / mag : 0.0;
        res.residual_max = std::max(res.residual_max, rel);
    }
    if (res.residual_max > 1e-6)
    {
        res.warnings.push_back("root residual " + std::to_string(res.residual_max) +
                               " exceeds 1e-6");
    }
    return res;
}

} // namespace polymom

#endif // POLYMOM_ROOTS_HPP
