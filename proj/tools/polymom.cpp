// polymom: forward moments, vertex reconstruction and roundtrips.
//
// Exit codes:
//   0  success
//   1  unexpected internal error
//   2  bad input or configuration, insufficient moments, vertex bound too small
//   3  non-generic direction for the forward formula (resample the direction)
//   4  forward routes disagree (--oracle both)
//   5  rank detection failed after all retries
//   6  projection matching failed after all retries
//   7  roundtrip mismatch (reconstructed set differs from the input)

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include <polymom/polymom.hpp>

namespace
{

using namespace polymom;

enum exit_code : int
{
    exit_ok          = 0,
    exit_internal    = 1,
    exit_bad_input   = 2,
    exit_nongeneric  = 3,
    exit_disagree    = 4,
    exit_rank        = 5,
    exit_matching    = 6,
    exit_mismatch    = 7,
};

/// Failure with a chosen exit code.
struct cli_failure
{
    int code;
    std::string message;
};

struct common_config
{
    std::string mode = "exact";
    std::size_t nmax = 0;
    std::string density;
    std::optional<unsigned> density_degree;
    std::uint64_t seed        = 1;
    double rank_tol           = 1e-8;
    double real_tol           = 1e-7;
    double cluster_tol        = 1e-6;
    double match_tol          = 1e-5;
    double noise              = 0;
    unsigned long denominator = default_direction_denominator();
    std::size_t retries       = 8;
    std::string oracle        = "brion";
    std::string out;
};

struct moments_config
{
    std::string polytope;
    std::string direction;
    std::size_t count = 0;
    std::string csv;
};

struct reconstruct_config
{
    std::vector<std::string> files;
    std::string oracle_polytope;
    std::string method = "pairwise";
    std::string diagnostics;
    bool no_self_check = false;
};

struct roundtrip_config
{
    std::string polytope;
    std::string method = "pairwise";
    double tolerance   = 1e-6;
};

void emit(const json& j, const std::string& path)
{
    const std::string text = j.dump(2) + "\n";
    if (path.empty())
    {
        std::cout << text;
    }
    else
    {
        write_text_file(path, text);
    }
}

void check_config(const common_config& c, bool needs_nmax)
{
    if (c.mode != "exact" && c.mode != "float")
    {
        throw invalid_argument("--mode must be exact or float");
    }
    if (needs_nmax && c.nmax == 0)
    {
        throw invalid_argument("--nmax must be at least 1");
    }
    for (double t : {c.rank_tol, c.real_tol, c.cluster_tol, c.match_tol})
    {
        if (!(t > 0))
        {
            throw invalid_argument("tolerances must be positive");
        }
    }
    if (c.noise < 0)
    {
        throw invalid_argument("--noise must be non-negative");
    }
    if (c.noise > 0 && c.mode == "exact")
    {
        throw invalid_argument("--noise requires --mode float");
    }
    if (!is_prime(c.denominator))
    {
        throw invalid_argument("--denominator must be prime");
    }
    if (c.oracle != "brion" && c.oracle != "direct" && c.oracle != "both")
    {
        throw invalid_argument("--oracle must be direct, brion or both");
    }
}

polytope<rational> load_polytope(const std::string& path)
{
    auto p              = polytope_from_json(parse_json_text(read_text_file(path)));
    const auto findings = validate_polytope(p);
    if (!findings.empty())
    {
        std::string msg = "invalid polytope " + path + ":";
        for (const auto& f : findings)
        {
            msg += std::string("\n  ") + to_string(f.kind) + ": " + f.message;
        }
        throw invalid_argument(msg);
    }
    return p;
}

multipoly<rational> load_density(const common_config& c, std::size_t dim)
{
    return c.density.empty() ? unit_density<rational>(dim) : parse_density(c.density, dim);
}

point<rational> parse_direction(const std::string& text, std::size_t dim)
{
    point<rational> z;
    std::size_t start = 0;
    while (start <= text.size())
    {
        const auto end = std::min(text.find(',', start), text.size());
        std::string piece = text.substr(start, end - start);
        piece.erase(0, piece.find_first_not_of(" \t"));
        piece.erase(piece.find_last_not_of(" \t") + 1);
        z.push_back(parse_rational(piece));
        start = end + 1;
    }
    if (z.size() != dim)
    {
        throw invalid_argument("--direction needs " + std::to_string(dim) + " components, got " +
                               std::to_string(z.size()));
    }
    return z;
}

prony_options prony_from(const common_config& c)
{
    prony_options o;
    o.rank_tol    = c.rank_tol;
    o.real_tol    = c.real_tol;
    o.cluster_tol = c.cluster_tol;
    return o;
}

forward_route route_from(const common_config& c)
{
    return c.oracle == "direct" ? forward_route::direct : forward_route::brion;
}

// ---------------------------------------------------------------- moments

template <scalar_type T>
int run_moments(const common_config& c, const moments_config& m)
{
    const auto p   = load_polytope(m.polytope);
    const auto rho = load_density(c, p.dim);
    const auto zq  = parse_direction(m.direction, p.dim);
    if (m.count == 0)
    {
        throw invalid_argument("--count must be at least 1");
    }
    std::vector<rational> exact;
    try
    {
        if (c.oracle == "direct")
        {
            exact = direct_moments(p, std::span<const rational>(zq), m.count, rho);
        }
        else
        {
            exact = brion_moments(p, std::span<const rational>(zq), m.count, rho);
        }
    }
    catch (const denominator_vanishes& e)
    {
        throw cli_failure{exit_nongeneric,
                          std::string(e.what()) +
                              "; the direction is orthogonal to a cone edge, choose another "
                              "direction or use --oracle direct"};
    }
    if (c.oracle == "both")
    {
        const auto other = direct_moments(p, std::span<const rational>(zq), m.count, rho);
        for (std::size_t j = 0; j < m.count; ++j)
        {
            if (!(other[j] == exact[j]))
            {
                throw cli_failure{exit_disagree, "forward routes disagree at j=" +
                                                     std::to_string(j) + ": brion " +
                                                     format_rational(exact[j]) + ", direct " +
                                                     format_rational(other[j])};
            }
        }
    }
    moment_sequence<T> ms;
    ms.dim            = p.dim;
    ms.density_degree = rho.degree();
    if constexpr (scalar_traits<T>::is_exact)
    {
        ms.direction = zq;
        ms.moments   = exact;
    }
    else
    {
        // Moments at the binary value of the emitted direction.
        ms.direction = convert_point<double>(zq);
        polytope_oracle<double> oracle(p, rho, c.noise, c.seed, route_from(c));
        ms.moments = oracle.moments(std::span<const double>(ms.direction), m.count);
    }
    emit(moments_to_json(ms), c.out);
    if (!m.csv.empty())
    {
        write_text_file(m.csv, moments_to_csv(ms));
    }
    return exit_ok;
}

// ------------------------------------------------------------ reconstruct

std::vector<json> read_moment_documents(const std::vector<std::string>& files)
{
    std::vector<json> docs;
    for (const auto& f : files)
    {
        const auto j = parse_json_text(read_text_file(f));
        if (j.is_array())
        {
            for (const auto& x : j)
            {
                docs.push_back(x);
            }
        }
        else
        {
            docs.push_back(j);
        }
    }
    if (docs.empty())
    {
        throw invalid_argument("no moment sequences given");
    }
    return docs;
}

/// Coordinates of w in the basis given by the rows of Z, solved exactly.
std::vector<rational> basis_coordinates(const std::vector<point<rational>>& Z,
                                        const point<rational>& w)
{
    const std::size_t d = Z.size();
    matrix<rational> zt(d, d);
    for (std::size_t i = 0; i < d; ++i)
    {
        for (std::size_t k = 0; k < d; ++k)
        {
            zt(k, i) = Z[i][k];
        }
    }
    return solve(zt, w);
}

template <scalar_type T>
point<rational> to_rational_point(const point<T>& p)
{
    point<rational> out;
    for (const auto& x : p)
    {
        if constexpr (scalar_traits<T>::is_exact)
        {
            out.push_back(x);
        }
        else
        {
            out.push_back(rational_from_binary(x));
        }
    }
    return out;
}

bool near(const rational& a, const rational& b, bool exact)
{
    if (exact)
    {
        return a == b;
    }
    return std::fabs(rational(a - b).get_d()) <= 1e-9 * (1.0 + std::fabs(b.get_d()));
}

///
/// Base directions and beta candidates for moment files: the first d
/// linearly independent directions in file order are the bases; a further
/// direction w = z_1 + beta z_i supplies a pairwise candidate, and
/// w = sum_j beta^{j-1} z_j a frugal one.
///
template <scalar_type T>
void plan_from_files(const std::vector<moment_sequence<T>>& seqs, std::size_t d,
                     reconstruct_options<T>& opt)
{
    std::vector<point<rational>> rows;
    std::vector<std::size_t> base_index;
    for (std::size_t s = 0; s < seqs.size() && rows.size() < d; ++s)
    {
        auto trial = rows;
        trial.push_back(to_rational_point(seqs[s].direction));
        matrix<rational> a(trial.size(), d);
        for (std::size_t i = 0; i < trial.size(); ++i)
        {
            for (std::size_t k = 0; k < d; ++k)
            {
                a(i, k) = trial[i][k];
            }
        }
        if (detail::bareiss_echelon(a).pivots.size() == trial.size())
        {
            rows = std::move(trial);
            base_index.push_back(s);
        }
    }
    if (rows.size() < d)
    {
        throw invalid_argument("moment files span only " + std::to_string(rows.size()) +
                               " of " + std::to_string(d) + " dimensions");
    }
    for (auto s : base_index)
    {
        opt.fixed_bases.push_back(seqs[s].direction);
    }
    opt.fixed_betas.assign(d, {});
    constexpr bool exact = scalar_traits<T>::is_exact;
    for (std::size_t s = 0; s < seqs.size(); ++s)
    {
        if (std::find(base_index.begin(), base_index.end(), s) != base_index.end())
        {
            continue;
        }
        const auto c = basis_coordinates(rows, to_rational_point(seqs[s].direction));
        if (!near(c[0], rational(1), exact))
        {
            continue;
        }
        std::vector<std::size_t> nonzero;
        for (std::size_t i = 1; i < d; ++i)
        {
            if (!near(c[i], rational(0), exact))
            {
                nonzero.push_back(i);
            }
        }
        if (nonzero.size() == 1)
        {
            opt.fixed_betas[nonzero[0]].push_back(scalar_traits<T>::from_rational(c[nonzero[0]]));
        }
        if (d >= 2 && !near(c[1], rational(0), exact))
        {
            bool geometric = true;
            rational pw    = c[1];
            for (std::size_t i = 2; i < d && geometric; ++i)
            {
                pw *= c[1];
                geometric = near(c[i], pw, exact);
            }
            if (geometric && (d > 2 || nonzero.size() == 1))
            {
                opt.fixed_betas[0].push_back(scalar_traits<T>::from_rational(c[1]));
            }
        }
    }
}

template <scalar_type T>
reconstruct_options<T> reconstruct_options_from(const common_config& c)
{
    reconstruct_options<T> opt;
    opt.nmax              = c.nmax;
    opt.density_degree    = c.density_degree;
    opt.denominator       = c.denominator;
    opt.seed              = c.seed;
    opt.prony             = prony_from(c);
    opt.match_tol         = c.match_tol;
    opt.direction_retries = c.retries;
    return opt;
}

template <scalar_type T>
vertex_set<T> run_method(moment_oracle<T>& oracle, const reconstruct_options<T>& opt,
                         const std::string& method)
{
    if (method == "pairwise")
    {
        return reconstruct(oracle, opt);
    }
    if (method == "frugal")
    {
        return match_frugal_d_plus_1(oracle, opt);
    }
    throw invalid_argument("--method must be pairwise or frugal");
}

template <scalar_type T>
json reconstruction_document(const vertex_set<T>& vs, std::size_t dim)
{
    auto j           = vertices_to_json(vs.vertices, dim);
    j["diagnostics"] = diagnostics_to_json(vs);
    return j;
}

template <scalar_type T>
int run_reconstruct(const common_config& c, const reconstruct_config& r)
{
    if (r.files.empty() == r.oracle_polytope.empty())
    {
        throw invalid_argument("give either moment files or --oracle-polytope");
    }
    auto opt       = reconstruct_options_from<T>(c);
    opt.self_check = !r.no_self_check;
    vertex_set<T> vs;
    std::size_t dim = 0;
    if (!r.oracle_polytope.empty())
    {
        const auto p = load_polytope(r.oracle_polytope);
        dim          = p.dim;
        polytope_oracle<T> oracle(p, load_density(c, p.dim), c.noise, c.seed, route_from(c));
        vs = run_method<T>(oracle, opt, r.method);
    }
    else
    {
        if (c.noise > 0)
        {
            throw invalid_argument("--noise applies to --oracle-polytope only");
        }
        std::vector<moment_sequence<T>> seqs;
        for (const auto& doc : read_moment_documents(r.files))
        {
            if (moment_file_mode(doc) != scalar_traits<T>::mode)
            {
                throw invalid_argument("moment file mode differs from --mode " + c.mode);
            }
            seqs.push_back(moments_from_json<T>(doc));
        }
        dim = seqs.front().dim;
        const unsigned dd = seqs.front().density_degree;
        plan_from_files(seqs, dim, opt);
        // The held-out self-check needs directions the files do not contain.
        opt.self_check = false;
        sequence_oracle<T> oracle(dim, dd, std::move(seqs));
        vs = run_method<T>(oracle, opt, r.method);
    }
    const auto doc = reconstruction_document(vs, dim);
    emit(doc, c.out);
    if (!r.diagnostics.empty())
    {
        write_text_file(r.diagnostics, doc["diagnostics"].dump(2) + "\n");
    }
    return exit_ok;
}

// -------------------------------------------------------------- roundtrip

/// Max-norm distance of the best one-to-one assignment found greedily over
/// lexicographically sorted sets; infinity when the sizes differ.
template <scalar_type T>
double set_error(const std::vector<point<rational>>& truth, const std::vector<point<T>>& got)
{
    if (truth.size() != got.size())
    {
        return std::numeric_limits<double>::infinity();
    }
    std::vector<bool> used(got.size(), false);
    double worst = 0;
    for (const auto& v : truth)
    {
        double best   = std::numeric_limits<double>::infinity();
        std::size_t k = 0;
        for (std::size_t i = 0; i < got.size(); ++i)
        {
            if (used[i])
            {
                continue;
            }
            double e = 0;
            for (std::size_t c = 0; c < v.size(); ++c)
            {
                if constexpr (scalar_traits<T>::is_exact)
                {
                    e = std::max(e, std::fabs(rational(got[i][c] - v[c]).get_d()));
                    if (e == 0 && !(got[i][c] == v[c]))
                    {
                        e = std::numeric_limits<double>::min();
                    }
                }
                else
                {
                    e = std::max(e, std::fabs(got[i][c] - v[c].get_d()));
                }
            }
            if (e < best)
            {
                best = e;
                k    = i;
            }
        }
        used[k] = true;
        worst   = std::max(worst, best);
    }
    return worst;
}

template <scalar_type T>
int run_roundtrip(const common_config& c, const roundtrip_config& r)
{
    const auto p   = load_polytope(r.polytope);
    const auto rho = load_density(c, p.dim);
    auto opt       = reconstruct_options_from<T>(c);
    if (opt.nmax == 0)
    {
        opt.nmax = p.vertices.size();
    }
    auto truth = p.vertices;
    std::sort(truth.begin(), truth.end());
    polytope_oracle<T> oracle(p, rho, c.noise, c.seed, route_from(c));
    std::vector<std::string> methods;
    if (r.method == "all")
    {
        methods = {"pairwise", "frugal", "univar"};
    }
    else
    {
        methods = {r.method};
    }
    json report;
    report["dim"]   = p.dim;
    report["mode"]  = c.mode;
    report["noise"] = c.noise;
    report["truth"] = vertices_to_json(truth, p.dim)["vertices"];
    report["runs"]  = json::array();
    bool all_match  = true;
    double worst    = 0;
    for (const auto& method : methods)
    {
        json run;
        run["method"] = method;
        std::vector<point<T>> got;
        if (method == "univar")
        {
            univar_options<T> uo;
            uo.nmax              = opt.nmax;
            uo.density_degree    = opt.density_degree;
            uo.denominator       = opt.denominator;
            uo.seed              = opt.seed;
            uo.prony             = opt.prony;
            uo.direction_retries = opt.direction_retries;
            const auto ur        = vertices_univar(oracle, uo);
            got                  = ur.vertices;
            run["diagnostics"]   = {{"moment_count", ur.moment_count},
                                    {"direction_count", ur.direction_count},
                                    {"retries", ur.retries},
                                    {"budget_constant", ur.budget_constant},
                                    {"retry_log", ur.retry_log}};
        }
        else
        {
            const auto vs      = run_method<T>(oracle, opt, method);
            got                = vs.vertices;
            run["diagnostics"] = diagnostics_to_json(vs);
        }
        const double err = set_error(truth, got);
        const bool ok    = scalar_traits<T>::is_exact ? err == 0 : err <= r.tolerance;
        run["vertices"]  = vertices_to_json(got, p.dim)["vertices"];
        run["max_error"] = std::isfinite(err) ? json(err) : json(nullptr);
        run["match"]     = ok;
        all_match        = all_match && ok;
        worst            = std::max(worst, err);
        report["runs"].push_back(run);
    }
    report["max_error"] = std::isfinite(worst) ? json(worst) : json(nullptr);
    report["match"]     = all_match;
    emit(report, c.out);
    return all_match ? exit_ok : exit_mismatch;
}

// ----------------------------------------------------------------- univar

template <scalar_type T>
int run_univar(const common_config& c, const std::string& polytope_path)
{
    const auto p = load_polytope(polytope_path);
    polytope_oracle<T> oracle(p, load_density(c, p.dim), c.noise, c.seed, route_from(c));
    univar_options<T> uo;
    uo.nmax              = c.nmax;
    uo.density_degree    = c.density_degree;
    uo.denominator       = c.denominator;
    uo.seed              = c.seed;
    uo.prony             = prony_from(c);
    uo.direction_retries = c.retries;
    const auto ur        = vertices_univar(oracle, uo);
    auto doc             = vertices_to_json(ur.vertices, p.dim);
    json g               = json::array();
    for (const auto& gj : ur.rep.g)
    {
        g.push_back(point_to_json(gj.coefficients()));
    }
    doc["diagnostics"] = {{"moment_count", ur.moment_count},
                          {"direction_count", ur.direction_count},
                          {"retries", ur.retries},
                          {"budget_constant", ur.budget_constant},
                          {"base_direction", point_to_json(ur.rep.a)},
                          {"pa", point_to_json(ur.rep.pa.coefficients())},
                          {"g", g},
                          {"retry_log", ur.retry_log}};
    emit(doc, c.out);
    return exit_ok;
}

template <typename F>
int dispatch(const common_config& c, F&& f)
{
    if (c.mode == "float")
    {
        return f(double{});
    }
    return f(rational{});
}

int report(int code, const std::string& msg)
{
    std::cerr << "polymom: " << msg << "\n";
    return code;
}

void add_common(CLI::App* app, common_config& c, bool reconstructs)
{
    app->add_option("--mode", c.mode, "Arithmetic: exact or float")
        ->check(CLI::IsMember({"exact", "float"}));
    app->add_option("--density", c.density, "Density polynomial in x1..xd, e.g. \"1+x1*x2\"");
    app->add_option("--seed", c.seed, "Seed for directions and noise");
    app->add_option("--noise", c.noise, "Relative moment noise (float mode)");
    app->add_option("--oracle", c.oracle, "Forward route: direct, brion or both");
    app->add_option("--out", c.out, "Output file (default: stdout)");
    if (reconstructs)
    {
        app->add_option("--nmax", c.nmax, "Upper bound on the number of vertices");
        app->add_option("--density-degree", c.density_degree,
                        "Density degree (default: from the moment data)");
        app->add_option("--rank-tol", c.rank_tol, "Relative singular value threshold");
        app->add_option("--real-tol", c.real_tol, "Imaginary part tolerance for real roots");
        app->add_option("--cluster-tol", c.cluster_tol, "Root clustering tolerance");
        app->add_option("--match-tol", c.match_tol, "Float matching tolerance");
        app->add_option("--denominator", c.denominator, "Prime denominator for directions");
        app->add_option("--retries", c.retries, "Base direction attempts");
    }
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Polytope vertices from axial moments"};
    app.require_subcommand(1);

    common_config mc_common;
    moments_config mc;
    auto* moments = app.add_subcommand("moments", "Axial moments of a polytope");
    add_common(moments, mc_common, false);
    moments->add_option("polytope", mc.polytope, "Polytope JSON file")->required();
    moments->add_option("--direction", mc.direction, "Direction, e.g. \"1,2\"")->required();
    moments->add_option("--count", mc.count, "Number of moments mu_0..mu_{count-1}")->required();
    moments->add_option("--csv", mc.csv, "Also write index,value CSV");

    common_config rc_common;
    reconstruct_config rc;
    auto* recon = app.add_subcommand("reconstruct", "Vertices from moments");
    add_common(recon, rc_common, true);
    recon->add_option("files", rc.files, "Moment JSON files");
    recon->add_option("--oracle-polytope", rc.oracle_polytope,
                      "Generate moments on demand from this polytope");
    recon->add_option("--method", rc.method, "pairwise or frugal")
        ->check(CLI::IsMember({"pairwise", "frugal"}));
    recon->add_option("--diagnostics", rc.diagnostics, "Write diagnostics JSON here");
    recon->add_flag("--no-self-check", rc.no_self_check, "Skip the held-out direction check");

    common_config tc_common;
    roundtrip_config tc;
    auto* round = app.add_subcommand("roundtrip", "Forward, optional noise, inverse, compare");
    add_common(round, tc_common, true);
    round->add_option("polytope", tc.polytope, "Polytope JSON file")->required();
    round->add_option("--method", tc.method, "pairwise, frugal, univar or all")
        ->check(CLI::IsMember({"pairwise", "frugal", "univar", "all"}));
    round->add_option("--tolerance", tc.tolerance, "Float-mode acceptance per coordinate");

    common_config uc_common;
    std::string uc_polytope;
    auto* univar = app.add_subcommand("univar", "Vertices via the univariate representation");
    add_common(univar, uc_common, true);
    univar->add_option("--oracle-polytope", uc_polytope, "Polytope JSON file")->required();

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError& e)
    {
        const int code = app.exit(e);
        return code == 0 ? exit_ok : exit_bad_input;
    }

    try
    {
        if (*moments)
        {
            check_config(mc_common, false);
            return dispatch(mc_common, [&](auto t) { return run_moments<decltype(t)>(mc_common, mc); });
        }
        if (*recon)
        {
            check_config(rc_common, true);
            return dispatch(rc_common,
                            [&](auto t) { return run_reconstruct<decltype(t)>(rc_common, rc); });
        }
        if (*round)
        {
            check_config(tc_common, false);
            return dispatch(tc_common,
                            [&](auto t) { return run_roundtrip<decltype(t)>(tc_common, tc); });
        }
        if (*univar)
        {
            check_config(uc_common, true);
            return dispatch(uc_common,
                            [&](auto t) { return run_univar<decltype(t)>(uc_common, uc_polytope); });
        }
    }
    catch (const cli_failure& f)
    {
        return report(f.code, f.message);
    }
    catch (const ambiguous_matching& e)
    {
        return report(exit_matching, e.what());
    }
    catch (const rank_unstable& e)
    {
        return report(exit_rank, e.what());
    }
    catch (const retries_exhausted& e)
    {
        return report(exit_rank, e.what());
    }
    catch (const irrational_root& e)
    {
        return report(exit_rank, e.what());
    }
    catch (const nongeneric_direction& e)
    {
        return report(exit_rank, e.what());
    }
    catch (const polymom::error& e)
    {
        return report(exit_bad_input, e.what());
    }
    catch (const std::exception& e)
    {
        return report(exit_internal, e.what());
    }
    return exit_internal;
}
