#ifndef POLYMOM_IO_HPP
#define POLYMOM_IO_HPP

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include <polymom/error.hpp>
#include <polymom/forward.hpp>
#include <polymom/geometry.hpp>
#include <polymom/reconstruct.hpp>
#include <polymom/scalar.hpp>

namespace polymom
{

using json = nlohmann::json;

///
/// Scalars in files: strings hold rational literals ("p/q", "p", decimals)
/// and are read exactly; JSON numbers are read as integers or through
/// their shortest decimal form.
///
template <scalar_type T>
T scalar_from_json(const json& j)
{
    rational q;
    if (j.is_string())
    {
        q = parse_rational(j.get<std::string>());
    }
    else if (j.is_number_integer())
    {
        q = rational(j.get<long>());
    }
    else if (j.is_number_unsigned())
    {
        q = rational(j.get<unsigned long>());
    }
    else if (j.is_number_float())
    {
        if constexpr (!scalar_traits<T>::is_exact)
        {
            return j.get<double>();
        }
        q = rational_from_double(j.get<double>());
    }
    else
    {
        throw invalid_argument("expected a number or rational string, got " + j.dump());
    }
    return scalar_traits<T>::from_rational(q);
}

template <scalar_type T>
json scalar_to_json(const T& x)
{
    if constexpr (scalar_traits<T>::is_exact)
    {
        return format_rational(x);
    }
    else
    {
        return x;
    }
}

template <scalar_type T>
point<T> point_from_json(const json& j, std::size_t dim)
{
    if (!j.is_array() || j.size() != dim)
    {
        throw invalid_argument("expected an array of " + std::to_string(dim) + " scalars, got " +
                               j.dump());
    }
    point<T> p;
    for (const auto& x : j)
    {
        p.push_back(scalar_from_json<T>(x));
    }
    return p;
}

template <scalar_type T>
json point_to_json(const point<T>& p)
{
    json a = json::array();
    for (const auto& x : p)
    {
        a.push_back(scalar_to_json(x));
    }
    return a;
}

inline json parse_json_text(const std::string& text)
{
    try
    {
        return json::parse(text);
    }
    catch (const json::parse_error& e)
    {
        throw parse_error(std::string("invalid JSON: ") + e.what(), e.byte);
    }
}

inline std::string read_text_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
    {
        throw invalid_argument("cannot open " + path);
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline void write_text_file(const std::string& path, const std::string& text)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
    {
        throw invalid_argument("cannot write " + path);
    }
    out << text;
}

/// Polytope from {"dim", "vertices", "cones"?, "simplices"?}; cone
/// determinants are recomputed from the edges.
inline polytope<rational> polytope_from_json(const json& j)
{
    try
    {
        polytope<rational> p;
        p.dim = j.at("dim").get<std::size_t>();
        for (const auto& v : j.at("vertices"))
        {
            p.vertices.push_back(point_from_json<rational>(v, p.dim));
        }
        if (j.contains("cones") && !j.at("cones").is_null())
        {
            p.cones.emplace();
            for (const auto& c : j.at("cones"))
            {
                std::vector<point<rational>> edges;
                for (const auto& e : c.at("edges"))
                {
                    edges.push_back(point_from_json<rational>(e, p.dim));
                }
                if (edges.size() != p.dim)
                {
                    throw invalid_argument("cone at vertex " +
                                           std::to_string(c.at("vertex").get<std::size_t>()) +
                                           " needs " + std::to_string(p.dim) + " edges");
                }
                p.cones->push_back(make_cone(c.at("vertex").get<std::size_t>(), std::move(edges)));
            }
        }
        if (j.contains("simplices") && !j.at("simplices").is_null())
        {
            p.simplices.emplace();
            for (const auto& s : j.at("simplices"))
            {
                p.simplices->push_back(s.get<simplex>());
            }
        }
        return p;
    }
    catch (const json::exception& e)
    {
        throw invalid_argument(std::string("malformed polytope JSON: ") + e.what());
    }
}

inline json polytope_to_json(const polytope<rational>& p)
{
    json j;
    j["dim"]      = p.dim;
    j["vertices"] = json::array();
    for (const auto& v : p.vertices)
    {
        j["vertices"].push_back(point_to_json(v));
    }
    if (p.cones)
    {
        j["cones"] = json::array();
        for (const auto& c : *p.cones)
        {
            json e = json::array();
            for (const auto& w : c.edges)
            {
                e.push_back(point_to_json(w));
            }
            j["cones"].push_back({{"vertex", c.vertex}, {"edges", e}});
        }
    }
    if (p.simplices)
    {
        j["simplices"] = *p.simplices;
    }
    return j;
}

template <scalar_type T>
json moments_to_json(const moment_sequence<T>& ms)
{
    json j;
    j["dim"]            = ms.dim;
    j["direction"]      = point_to_json(ms.direction);
    j["density_degree"] = ms.density_degree;
    j["mode"]           = to_string(scalar_traits<T>::mode);
    j["moments"]        = point_to_json(ms.moments);
    return j;
}

/// The "mode" field of a moment file.
inline scalar_mode moment_file_mode(const json& j)
{
    const auto m = j.value("mode", std::string("exact"));
    if (m == "exact")
    {
        return scalar_mode::exact;
    }
    if (m == "float")
    {
        return scalar_mode::floating;
    }
    throw invalid_argument("unknown moment file mode '" + m + "'");
}

template <scalar_type T>
moment_sequence<T> moments_from_json(const json& j)
{
    try
    {
        moment_sequence<T> ms;
        ms.dim            = j.at("dim").get<std::size_t>();
        ms.direction      = point_from_json<T>(j.at("direction"), ms.dim);
        ms.density_degree = j.value("density_degree", 0u);
        for (const auto& x : j.at("moments"))
        {
            ms.moments.push_back(scalar_from_json<T>(x));
        }
        return ms;
    }
    catch (const json::exception& e)
    {
        throw invalid_argument(std::string("malformed moment JSON: ") + e.what());
    }
}

template <scalar_type T>
std::string moments_to_csv(const moment_sequence<T>& ms)
{
    std::string out = "index,value\n";
    for (std::size_t j = 0; j < ms.moments.size(); ++j)
    {
        out += std::to_string(j) + "," + scalar_traits<T>::to_text(ms.moments[j]) + "\n";
    }
    return out;
}

template <scalar_type T>
json vertices_to_json(const std::vector<point<T>>& vertices, std::size_t dim)
{
    json j;
    j["dim"]      = dim;
    j["mode"]     = to_string(scalar_traits<T>::mode);
    j["vertices"] = json::array();
    for (const auto& v : vertices)
    {
        j["vertices"].push_back(point_to_json(v));
    }
    return j;
}

template <scalar_type T>
std::vector<point<T>> vertices_from_json(const json& j)
{
    const std::size_t dim = j.at("dim").get<std::size_t>();
    std::vector<point<T>> out;
    for (const auto& v : j.at("vertices"))
    {
        out.push_back(point_from_json<T>(v, dim));
    }
    return out;
}

template <scalar_type T>
json diagnostics_to_json(const vertex_set<T>& vs)
{
    json j;
    j["ranks"] = vs.ranks;
    j["betas"] = point_to_json(vs.betas);
    j["moment_count"]       = vs.moment_count;
    j["direction_count"]    = vs.direction_count;
    j["retries"]            = vs.retries;
    j["residual_max"]       = vs.residual_max;
    j["self_check_moments"] = vs.self_check_moments;
    j["self_check"]         = vs.self_check_passed ? json(*vs.self_check_passed) : json(nullptr);
    j["self_check_error"]   = vs.self_check_error;
    j["base_directions"]    = json::array();
    for (const auto& z : vs.base_directions)
    {
        j["base_directions"].push_back(point_to_json(z));
    }
    j["warnings"]  = vs.warnings;
    j["retry_log"] = vs.retry_log;
    return j;
}

} // namespace polymom

#endif // POLYMOM_IO_HPP
