#ifndef POLYMOM_RECONSTRUCT_HPP
#define POLYMOM_RECONSTRUCT_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <polymom/dense.hpp>
#include <polymom/error.hpp>
#include <polymom/forward.hpp>
#include <polymom/geometry.hpp>
#include <polymom/oracle.hpp>
#include <polymom/prony.hpp>
#include <polymom/scalar.hpp>

namespace polymom
{

template <scalar_type T>
struct reconstruct_options
{
    /// Upper bound on the number of vertices; only the first direction
    /// uses it, later directions use the discovered N.
    std::size_t nmax = 0;
    /// Density degree d°; defaults to the oracle's.
    std::optional<unsigned> density_degree;
    unsigned long denominator = default_direction_denominator();
    std::uint64_t seed        = 1;
    prony_options prony;
    /// Float matching: a sum matches a root within match_tol * (1 + max|root|).
    double match_tol = 1e-5;
    /// Fresh base directions tried before giving up.
    std::size_t direction_retries = 8;
    /// Float mode: sampled candidates per base direction; the best
    /// conditioned one is kept.
    std::size_t float_candidates = 16;
    /// Beta trials per matching problem; 0 selects N^3 + 1.
    std::size_t max_beta_trials = 0;
    bool self_check             = true;
    /// Fixed base directions (e.g. from moment files); disables resampling.
    std::vector<point<T>> fixed_bases;
    /// Fixed beta candidates per base index 1..d-1; index 0 holds the
    /// candidates of the frugal variant.
    std::vector<std::vector<T>> fixed_betas;
};

/// Reconstructed vertices plus the record of how they were obtained.
template <scalar_type T>
struct vertex_set
{
    std::vector<point<T>> vertices;
    std::vector<point<T>> base_directions;
    /// Hankel rank of every successful direction solve, in order.
    std::vector<std::size_t> ranks;
    std::vector<T> betas;
    /// Distinct moments consumed by the reconstruction itself.
    std::size_t moment_count = 0;
    std::size_t direction_count = 0;
    /// Moments consumed by the held-out self-check.
    std::size_t self_check_moments = 0;
    std::size_t retries            = 0;
    std::vector<std::string> retry_log;
    double residual_max = 0;
    std::vector<std::string> warnings;
    std::optional<bool> self_check_passed;
    double self_check_error = 0;
};

/// Base projections, a combined direction alpha z_1 + beta z_i and its
/// Prony data.
template <scalar_type T>
struct matching_problem
{
    std::vector<T> x1;
    std::vector<T> xi;
    T alpha = 1;
    T beta  = 1;
    polynomial<T> pz;
    std::vector<T> roots;
};

namespace detail
{

template <scalar_type T>
point<T> sample_direction(std::size_t d, unsigned long r, std::mt19937_64& rng)
{
    return convert_point<T>(sample_generic_direction(d, r, rng).z);
}

template <scalar_type T>
double magnitude(const T& x)
{
    return std::fabs(scalar_traits<T>::to_double(x));
}

/// Index of the root nearest to x when within tol, else -1.
inline long nearest_root(const std::vector<double>& roots, double x, double tol)
{
    long best   = -1;
    double dist = tol;
    for (std::size_t i = 0; i < roots.size(); ++i)
    {
        const double e = std::fabs(roots[i] - x);
        if (e <= dist)
        {
            dist = e;
            best = static_cast<long>(i);
        }
    }
    return best;
}

template <scalar_type T>
bool is_root(const matching_problem<T>& mp, const T& x, double tol)
{
    if constexpr (scalar_traits<T>::is_exact)
    {
        (void)tol;
        return sgn(mp.pz(x)) == 0;
    }
    else
    {
        return nearest_root(mp.roots, x, tol) >= 0;
    }
}

template <scalar_type T>
double root_tolerance(const std::vector<T>& roots, double match_tol)
{
    double scale = 0;
    for (const auto& r : roots)
    {
        scale = std::max(scale, magnitude(r));
    }
    return match_tol * (1.0 + scale);
}

} // namespace detail

///
/// Pairing k = pairing[j] of X_i onto X_1: (j, k) is accepted iff
/// p_z(alpha x_j + beta x_k) = 0 (exact) or lies within the matching
/// tolerance of a root of p_z (float). Must be a bijection.
///
template <scalar_type T>
std::vector<std::size_t> match_projections(const matching_problem<T>& mp, double match_tol = 1e-5)
{
    const std::size_t n = mp.x1.size();
    if (mp.xi.size() != n)
    {
        throw ambiguous_matching("projection sets differ in size");
    }
    const double tol = detail::root_tolerance(mp.roots, match_tol);
    std::vector<std::size_t> pairing(n);
    std::vector<bool> used(n, false);
    for (std::size_t j = 0; j < n; ++j)
    {
        std::size_t hits = 0;
        for (std::size_t k = 0; k < n; ++k)
        {
            const T s = mp.alpha * mp.x1[j] + mp.beta * mp.xi[k];
            if (detail::is_root(mp, s, tol))
            {
                pairing[j] = k;
                ++hits;
            }
        }
        if (hits != 1)
        {
            throw ambiguous_matching("projection " + std::to_string(j) + " has " +
                                     std::to_string(hits) + " candidate partners");
        }
        if (used[pairing[j]])
        {
            throw ambiguous_matching("partner " + std::to_string(pairing[j]) +
                                     " matched twice");
        }
        used[pairing[j]] = true;
    }
    return pairing;
}

/// Projections along z with Hankel size (d°+1) n + 1.
template <scalar_type T>
projection_set<T> solve_direction(moment_oracle<T>& oracle, const point<T>& z, std::size_t n,
                                  unsigned density_degree, const prony_options& opt)
{
    const std::size_t m     = hankel_size(n, density_degree);
    const std::size_t count = moments_for_hankel(m, oracle.dim(), density_degree);
    moment_sequence<T> ms;
    ms.dim            = oracle.dim();
    ms.direction      = z;
    ms.density_degree = density_degree;
    ms.moments        = oracle.moments(std::span<const T>(z), count);
    auto ps           = projections_from_scaled(scaled_moment_vector(ms, 2 * m - 2), m, opt);
    ps.direction      = z;
    return ps;
}

template <scalar_type T>
struct beta_choice
{
    T beta = 1;
    std::vector<std::size_t> pairing;
    projection_set<T> combined;
    std::size_t trials = 0;
};

///
/// First beta giving an unambiguous matching between X_1 = proj(z_1) and
/// X_i = proj(z_i) via the combined direction z_1 + beta z_i. Exact mode
/// tries 1, 2, 3, ...; float mode draws beta = 1 + k/r. A combined
/// direction that is itself non-generic counts as a failed trial.
///
template <scalar_type T>
beta_choice<T> choose_beta(const projection_set<T>& p1, const projection_set<T>& pi,
                           moment_oracle<T>& oracle, unsigned density_degree,
                           std::size_t max_trials, const reconstruct_options<T>& opt,
                           std::mt19937_64& rng, std::vector<std::string>* log,
                           const std::vector<T>* candidates = nullptr)
{
    const std::size_t n = p1.size();
    beta_choice<T> out;
    if (n == 1)
    {
        out.pairing = {0};
        return out;
    }
    const std::size_t limit = candidates ? candidates->size() : max_trials;
    for (std::size_t t = 0; t < limit; ++t)
    {
        T beta;
        if (candidates)
        {
            beta = (*candidates)[t];
        }
        else if constexpr (scalar_traits<T>::is_exact)
        {
            beta = T(static_cast<long>(t + 1));
        }
        else
        {
            beta = 1.0 + static_cast<double>(uniform_below(rng, opt.denominator)) /
                             static_cast<double>(opt.denominator);
        }
        out.trials = t + 1;
        point<T> z(p1.direction.size());
        for (std::size_t k = 0; k < z.size(); ++k)
        {
            z[k] = p1.direction[k] + beta * pi.direction[k];
        }
        const std::string tag = "beta " + scalar_traits<T>::to_text(beta) + ": ";
        try
        {
            auto pc = solve_direction(oracle, z, n, density_degree, opt.prony);
            if (pc.size() != n)
            {
                throw nongeneric_direction("combined direction shows " +
                                           std::to_string(pc.size()) + " projections");
            }
            matching_problem<T> mp;
            mp.x1    = p1.values;
            mp.xi    = pi.values;
            mp.beta  = beta;
            mp.pz    = pc.prony.p;
            mp.roots = pc.values;
            out.pairing  = match_projections(mp, opt.match_tol);
            out.beta     = beta;
            out.combined = std::move(pc);
            return out;
        }
        catch (const nongeneric_direction& e)
        {
            if (log)
            {
                log->push_back(tag + e.what());
            }
        }
        catch (const full_rank& e)
        {
            if (log)
            {
                log->push_back(tag + e.what());
            }
        }
        catch (const ambiguous_matching& e)
        {
            if (log)
            {
                log->push_back(tag + e.what());
            }
        }
        catch (const irrational_root& e)
        {
            if (log)
            {
                log->push_back(tag + e.what());
            }
        }
    }
    throw ambiguous_matching("no unambiguous matching within " + std::to_string(limit) +
                             " beta trials");
}

/// Solve Z v = tuple for every tuple; rows of Z are the base directions.
template <scalar_type T>
std::vector<point<T>> assemble_vertices(const std::vector<point<T>>& Z,
                                        const std::vector<std::vector<T>>& tuples)
{
    const auto zm = matrix<T>::from_rows(Z);
    if (zm.rows() != zm.cols())
    {
        throw invalid_argument("direction matrix must be square");
    }
    if (scalar_traits<T>::is_zero(determinant(zm)))
    {
        throw singular_matrix("base directions are linearly dependent");
    }
    std::vector<point<T>> out;
    for (const auto& t : tuples)
    {
        out.push_back(solve(zm, t));
    }
    return out;
}

template <scalar_type T>
void sort_vertices(std::vector<point<T>>& v)
{
    std::sort(v.begin(), v.end());
}

namespace detail
{

template <scalar_type T>
class base_selector
{
public:
    base_selector(const reconstruct_options<T>& opt, std::size_t d) : opt_(opt), d_(d), rng_(opt.seed) {}

    std::mt19937_64& rng() { return rng_; }
    bool fixed() const { return !opt_.fixed_bases.empty(); }

    point<T> next(std::size_t index)
    {
        if (fixed())
        {
            if (index >= opt_.fixed_bases.size())
            {
                throw invalid_argument("not enough independent directions in the moment data");
            }
            return opt_.fixed_bases[index];
        }
        return sample_direction<T>(d_, opt_.denominator, rng_);
    }

private:
    const reconstruct_options<T>& opt_;
    std::size_t d_;
    std::mt19937_64 rng_;
};

/// Volume spanned by the normalized rows (1 for orthonormal rows).
template <scalar_type T>
double normalized_volume(const std::vector<point<T>>& rows)
{
    const std::size_t k = rows.size();
    matrix<double> g(k, k);
    std::vector<double> norm(k);
    for (std::size_t i = 0; i < k; ++i)
    {
        norm[i] = std::sqrt(scalar_traits<T>::to_double(dot<T>(rows[i], rows[i])));
    }
    for (std::size_t i = 0; i < k; ++i)
    {
        for (std::size_t j = 0; j < k; ++j)
        {
            g(i, j) = scalar_traits<T>::to_double(dot<T>(rows[i], rows[j])) / (norm[i] * norm[j]);
        }
    }
    return std::sqrt(std::max(0.0, determinant(g)));
}

///
/// Projections along base direction `index`. Float mode with sampled
/// directions solves `float_candidates` directions and keeps the one with
/// the largest volume spanned with the previous bases times |z| over the
/// projection sensitivity; `expected` (0: any) is the required vertex count.
///
template <scalar_type T>
projection_set<T> solve_base(moment_oracle<T>& oracle, base_selector<T>& sel, std::size_t index,
                             std::size_t n, std::size_t expected, unsigned dd,
                             const reconstruct_options<T>& opt,
                             const std::vector<projection_set<T>>& previous,
                             std::vector<std::string>& failures)
{
    const std::size_t k =
        scalar_traits<T>::is_exact || sel.fixed() ? 1 : std::max<std::size_t>(1, opt.float_candidates);
    std::optional<projection_set<T>> best;
    double best_score = -1;
    std::string last;
    for (std::size_t c = 0; c < k; ++c)
    {
        try
        {
            auto ps = solve_direction(oracle, sel.next(index), n, dd, opt.prony);
            if (expected != 0 && ps.size() != expected)
            {
                throw nongeneric_direction(std::to_string(ps.size()) + " projections instead of " +
                                           std::to_string(expected));
            }
            if (k == 1)
            {
                return ps;
            }
            std::vector<point<T>> rows;
            for (const auto& b : previous)
            {
                rows.push_back(b.direction);
            }
            rows.push_back(ps.direction);
            const double length =
                std::sqrt(scalar_traits<T>::to_double(dot<T>(ps.direction, ps.direction)));
            const double score =
                normalized_volume(rows) * length / std::max(ps.sensitivity, 1e-300);
            if (score > best_score)
            {
                best_score = score;
                best       = std::move(ps);
            }
        }
        catch (const nongeneric_direction& e)
        {
            if (k == 1)
            {
                throw;
            }
            last = e.what();
            failures.push_back(std::string("candidate: ") + e.what());
        }
    }
    if (!best)
    {
        throw nongeneric_direction(last);
    }
    return std::move(*best);
}

/// Why the last attempt failed, to choose the final exception.
enum class failure
{
    none,
    rank,
    matching
};

template <scalar_type T>
std::optional<std::vector<projection_set<T>>>
select_bases(moment_oracle<T>& oracle, unsigned dd, const reconstruct_options<T>& opt,
             base_selector<T>& sel, vertex_set<T>& out, failure& why)
{
    const std::size_t d = oracle.dim();
    auto log            = [&](const std::string& msg) {
        ++out.retries;
        out.retry_log.push_back(msg);
    };
    std::vector<projection_set<T>> bases;
    std::vector<std::string> failures;
    auto flush = [&] {
        for (const auto& f : failures)
        {
            log(f);
        }
        failures.clear();
    };
    try
    {
        bases.push_back(solve_base(oracle, sel, 0, opt.nmax, 0, dd, opt, bases, failures));
        flush();
    }
    catch (const nongeneric_direction& e)
    {
        flush();
        log(std::string("direction 1: ") + e.what());
        why = failure::rank;
        return std::nullopt;
    }
    catch (const irrational_root& e)
    {
        flush();
        log(std::string("direction 1: ") + e.what());
        why = failure::rank;
        return std::nullopt;
    }
    const std::size_t n = bases.front().size();
    if (n == 0)
    {
        throw invalid_argument("all moments vanish: nothing to reconstruct");
    }
    for (std::size_t i = 1; i < d; ++i)
    {
        const std::size_t tries = sel.fixed() ? 1 : opt.direction_retries;
        bool ok                 = false;
        for (std::size_t k = 0; k < tries && !ok; ++k)
        {
            const std::string tag = "direction " + std::to_string(i + 1) + ": ";
            try
            {
                auto pi = solve_base(oracle, sel, i, n, n, dd, opt, bases, failures);
                flush();
                bases.push_back(std::move(pi));
                ok = true;
            }
            catch (const full_rank& e)
            {
                flush();
                // More than N projections: the first direction was degenerate.
                log(tag + e.what() + "; resampling the first direction");
                why = failure::rank;
                return std::nullopt;
            }
            catch (const nongeneric_direction& e)
            {
                flush();
                log(tag + e.what());
            }
            catch (const irrational_root& e)
            {
                flush();
                log(tag + e.what());
            }
        }
        if (!ok)
        {
            why = failure::rank;
            return std::nullopt;
        }
    }
    std::vector<point<T>> Z;
    for (const auto& b : bases)
    {
        Z.push_back(b.direction);
    }
    if (scalar_traits<T>::is_zero(determinant(matrix<T>::from_rows(Z))))
    {
        log("base directions are linearly dependent");
        why = failure::rank;
        return std::nullopt;
    }
    return bases;
}

template <scalar_type T>
void record_bases(const std::vector<projection_set<T>>& bases, vertex_set<T>& out)
{
    out.base_directions.clear();
    for (const auto& b : bases)
    {
        out.base_directions.push_back(b.direction);
        out.ranks.push_back(b.rank);
        out.residual_max = std::max(out.residual_max, b.residual_max);
        out.warnings.insert(out.warnings.end(), b.warnings.begin(), b.warnings.end());
    }
}

///
/// Forward moments of the reconstructed body along a held-out direction
/// compared with the oracle's (uniform density only).
///
template <scalar_type T>
void self_check(moment_oracle<T>& oracle, const reconstruct_options<T>& opt, unsigned dd,
                std::mt19937_64& rng, vertex_set<T>& out)
{
    if (!opt.self_check)
    {
        return;
    }
    if (dd != 0)
    {
        out.warnings.push_back("self-check skipped: density is unknown");
        return;
    }
    const std::size_t d = oracle.dim();
    const std::size_t n = out.vertices.size();
    polytope<T> body;
    body.dim      = d;
    body.vertices = out.vertices;
    try
    {
        if (d == 2)
        {
            body.simplices = fan_triangulate_2d(body);
        }
        else if (n == d + 1)
        {
            simplex s(d + 1);
            for (std::size_t i = 0; i <= d; ++i)
            {
                s[i] = i;
            }
            body.simplices = triangulation{s};
        }
        else
        {
            out.warnings.push_back("self-check skipped: no triangulation of the result for d >= 3");
            return;
        }
    }
    catch (const error& e)
    {
        out.warnings.push_back(std::string("self-check skipped: ") + e.what());
        return;
    }
    counting_oracle<T> counter(oracle);
    const std::size_t count = moments_for_hankel(hankel_size(n, 0), d, 0);
    for (int attempt = 0; attempt < 8; ++attempt)
    {
        const auto z = detail::sample_direction<T>(d, opt.denominator, rng);
        std::vector<T> mine;
        try
        {
            mine = brion_moments(body, std::span<const T>(z), count);
        }
        catch (const denominator_vanishes&)
        {
            continue;
        }
        const auto theirs = counter.moments(std::span<const T>(z), count);
        double err        = 0;
        for (std::size_t j = 0; j < count; ++j)
        {
            const double a = scalar_traits<T>::to_double(mine[j]);
            const double b = scalar_traits<T>::to_double(theirs[j]);
            if constexpr (scalar_traits<T>::is_exact)
            {
                if (!(mine[j] == theirs[j]))
                {
                    err = std::max(err, std::fabs(a - b) / std::max(1.0, std::fabs(b)));
                    if (err == 0)
                    {
                        err = 1e-300;
                    }
                }
            }
            else
            {
                err = std::max(err, std::fabs(a - b) / std::max(1e-300, std::fabs(b)));
            }
        }
        out.self_check_moments = counter.moment_count();
        out.self_check_error   = err;
        const bool pass = scalar_traits<T>::is_exact ? err == 0 : err <= 1e-6;
        out.self_check_passed = pass;
        if (!pass)
        {
            out.warnings.push_back("self-check moments differ (relative error " +
                                   std::to_string(err) + ")");
        }
        return;
    }
    out.warnings.push_back("self-check skipped: no pole-free held-out direction");
}

template <scalar_type T>
[[noreturn]] void give_up(failure why, std::size_t attempts)
{
    const std::string msg = "reconstruction failed after " + std::to_string(attempts) +
                            " base-direction attempts";
    if (why == failure::matching)
    {
        throw ambiguous_matching(msg + " (matching)");
    }
    throw rank_unstable(msg + " (rank detection)");
}

} // namespace detail

///
/// Full vertex reconstruction from axial moments: projections along d base
/// directions, pairwise matching through z_1 + beta z_i, and assembly by
/// solving Z v = (x(z_1), ..., x(z_d)). Output sorted lexicographically.
///
template <scalar_type T>
vertex_set<T> reconstruct(moment_oracle<T>& oracle, const reconstruct_options<T>& opt)
{
    if (opt.nmax == 0)
    {
        throw invalid_argument("nmax must be at least 1");
    }
    const std::size_t d = oracle.dim();
    const unsigned dd   = opt.density_degree.value_or(oracle.density_degree());
    counting_oracle<T> counter(oracle);
    detail::base_selector<T> sel(opt, d);
    vertex_set<T> out;
    auto why                   = detail::failure::none;
    const std::size_t attempts = sel.fixed() ? 1 : opt.direction_retries;
    for (std::size_t attempt = 0; attempt < attempts; ++attempt)
    {
        auto bases = detail::select_bases(counter, dd, opt, sel, out, why);
        if (!bases)
        {
            continue;
        }
        const std::size_t n = bases->front().size();
        const std::size_t trials =
            opt.max_beta_trials ? opt.max_beta_trials : n * n * n + 1;
        std::vector<std::vector<std::size_t>> pairings(d);
        std::vector<T> betas;
        std::vector<std::size_t> combined_ranks;
        bool ok = true;
        for (std::size_t i = 1; i < d && ok; ++i)
        {
            const std::vector<T>* cand =
                i < opt.fixed_betas.size() && !opt.fixed_betas[i].empty() ? &opt.fixed_betas[i]
                                                                         : nullptr;
            std::vector<std::string> log;
            try
            {
                auto bc = choose_beta((*bases)[0], (*bases)[i], counter, dd, trials, opt,
                                      sel.rng(), &log, cand);
                pairings[i] = std::move(bc.pairing);
                betas.push_back(bc.beta);
                if (n > 1)
                {
                    combined_ranks.push_back(bc.combined.rank);
                    out.residual_max = std::max(out.residual_max, bc.combined.residual_max);
                }
            }
            catch (const ambiguous_matching& e)
            {
                log.push_back(e.what());
                ok  = false;
                why = detail::failure::matching;
            }
            out.retries += log.size();
            out.retry_log.insert(out.retry_log.end(), log.begin(), log.end());
        }
        if (!ok)
        {
            continue;
        }
        detail::record_bases(*bases, out);
        out.ranks.insert(out.ranks.end(), combined_ranks.begin(), combined_ranks.end());
        out.betas = betas;
        std::vector<std::vector<T>> tuples(n, std::vector<T>(d));
        for (std::size_t j = 0; j < n; ++j)
        {
            tuples[j][0] = (*bases)[0].values[j];
            for (std::size_t i = 1; i < d; ++i)
            {
                tuples[j][i] = (*bases)[i].values[pairings[i][j]];
            }
        }
        out.vertices = assemble_vertices(out.base_directions, tuples);
        sort_vertices(out.vertices);
        out.moment_count    = counter.moment_count();
        out.direction_count = counter.direction_count();
        detail::self_check(oracle, opt, dd, sel.rng(), out);
        return out;
    }
    detail::give_up<T>(why, attempts);
}

///
/// Reconstruction from d+1 directions: base directions z_1..z_d and
/// z_0 = sum_j beta^{j-1} z_j; a tuple (k_1..k_d) is a vertex iff
/// sum_j beta^{j-1} x_{k_j}(z_j) is a root of p_{z_0}. Enumerates N^d
/// tuples (guard: at most 10^6).
///
template <scalar_type T>
vertex_set<T> match_frugal_d_plus_1(moment_oracle<T>& oracle, const reconstruct_options<T>& opt)
{
    if (opt.nmax == 0)
    {
        throw invalid_argument("nmax must be at least 1");
    }
    const std::size_t d = oracle.dim();
    const unsigned dd   = opt.density_degree.value_or(oracle.density_degree());
    counting_oracle<T> counter(oracle);
    detail::base_selector<T> sel(opt, d);
    vertex_set<T> out;
    auto why                   = detail::failure::none;
    const std::size_t attempts = sel.fixed() ? 1 : opt.direction_retries;
    for (std::size_t attempt = 0; attempt < attempts; ++attempt)
    {
        auto bases = detail::select_bases(counter, dd, opt, sel, out, why);
        if (!bases)
        {
            continue;
        }
        const std::size_t n = bases->front().size();
        double tuples_total = 1;
        for (std::size_t i = 0; i < d; ++i)
        {
            tuples_total *= static_cast<double>(n);
        }
        if (tuples_total > 1e6)
        {
            throw guard_exceeded("N^d = " + std::to_string(tuples_total) +
                                 " candidate tuples exceed 10^6");
        }
        const bool fixed_beta    = !opt.fixed_betas.empty() && !opt.fixed_betas[0].empty();
        const std::size_t trials = fixed_beta             ? opt.fixed_betas[0].size()
                                   : opt.max_beta_trials ? opt.max_beta_trials
                                                          : n * n * n + 1;
        for (std::size_t t = 0; t < trials; ++t)
        {
            T beta;
            if (fixed_beta)
            {
                beta = opt.fixed_betas[0][t];
            }
            else if constexpr (scalar_traits<T>::is_exact)
            {
                beta = T(static_cast<long>(t + 1));
            }
            else
            {
                beta = 1.0 + static_cast<double>(uniform_below(sel.rng(), opt.denominator)) /
                                 static_cast<double>(opt.denominator);
            }
            std::vector<T> alpha(d);
            T a = 1;
            for (std::size_t j = 0; j < d; ++j)
            {
                alpha[j] = a;
                a *= beta;
            }
            point<T> z0(d, T(0));
            for (std::size_t j = 0; j < d; ++j)
            {
                for (std::size_t k = 0; k < d; ++k)
                {
                    z0[k] += alpha[j] * (*bases)[j].direction[k];
                }
            }
            const std::string tag = "alpha ratio " + scalar_traits<T>::to_text(beta) + ": ";
            try
            {
                auto pc = solve_direction(counter, z0, n, dd, opt.prony);
                if (pc.size() != n)
                {
                    throw nongeneric_direction("combined direction shows " +
                                               std::to_string(pc.size()) + " projections");
                }
                const double tol = detail::root_tolerance(pc.values, opt.match_tol);
                std::vector<std::vector<std::size_t>> hits;
                std::vector<std::size_t> idx(d, 0);
                while (true)
                {
                    T s = 0;
                    for (std::size_t j = 0; j < d; ++j)
                    {
                        s += alpha[j] * (*bases)[j].values[idx[j]];
                    }
                    bool hit;
                    if constexpr (scalar_traits<T>::is_exact)
                    {
                        (void)tol;
                        hit = std::binary_search(pc.values.begin(), pc.values.end(), s);
                    }
                    else
                    {
                        hit = detail::nearest_root(pc.values, s, tol) >= 0;
                    }
                    if (hit)
                    {
                        hits.push_back(idx);
                    }
                    std::size_t pos = 0;
                    while (pos < d && ++idx[pos] == n)
                    {
                        idx[pos++] = 0;
                    }
                    if (pos == d)
                    {
                        break;
                    }
                }
                if (hits.size() != n)
                {
                    throw ambiguous_matching(std::to_string(hits.size()) + " tuples hit the " +
                                             std::to_string(n) + " roots");
                }
                for (std::size_t j = 0; j < d; ++j)
                {
                    std::vector<bool> used(n, false);
                    for (const auto& h : hits)
                    {
                        if (used[h[j]])
                        {
                            throw ambiguous_matching("a projection is used by two tuples");
                        }
                        used[h[j]] = true;
                    }
                }
                detail::record_bases(*bases, out);
                out.ranks.push_back(pc.rank);
                out.residual_max = std::max(out.residual_max, pc.residual_max);
                out.betas        = {beta};
                std::vector<std::vector<T>> tuples;
                for (const auto& h : hits)
                {
                    std::vector<T> tup(d);
                    for (std::size_t j = 0; j < d; ++j)
                    {
                        tup[j] = (*bases)[j].values[h[j]];
                    }
                    tuples.push_back(std::move(tup));
                }
                out.vertices = assemble_vertices(out.base_directions, tuples);
                sort_vertices(out.vertices);
                out.moment_count    = counter.moment_count();
                out.direction_count = counter.direction_count();
                detail::self_check(oracle, opt, dd, sel.rng(), out);
                return out;
            }
            catch (const nongeneric_direction& e)
            {
                ++out.retries;
                out.retry_log.push_back(tag + e.what());
            }
            catch (const full_rank& e)
            {
                ++out.retries;
                out.retry_log.push_back(tag + e.what());
            }
            catch (const ambiguous_matching& e)
            {
                ++out.retries;
                out.retry_log.push_back(tag + e.what());
                why = detail::failure::matching;
            }
            catch (const irrational_root& e)
            {
                ++out.retries;
                out.retry_log.push_back(tag + e.what());
            }
        }
        why = detail::failure::matching;
    }
    detail::give_up<T>(why, attempts);
}

} // namespace polymom

#endif // POLYMOM_RECONSTRUCT_HPP
