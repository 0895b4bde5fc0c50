#ifndef POLYMOM_SCALAR_HPP
#define POLYMOM_SCALAR_HPP

#include <charconv>
#include <cmath>
#include <concepts>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <gmpxx.h>

#include <polymom/error.hpp>

namespace polymom
{

/// Arbitrary precision rational, always kept canonical (lowest terms,
/// positive denominator).
using rational = mpq_class;
using integer  = mpz_class;

enum class scalar_mode
{
    exact,
    floating
};

inline const char* to_string(scalar_mode m)
{
    return m == scalar_mode::exact ? "exact" : "float";
}

///
/// Parse a rational literal. Accepts `p`, `p/q`, and decimal notation
/// (`-1.25`, `3e-2`), the latter converted exactly.
///
inline rational parse_rational(std::string_view text)
{
    auto fail = [&](std::size_t at) -> rational {
        throw parse_error("invalid rational literal '" + std::string(text) + "'",
                          at);
    };
    if (text.empty())
    {
        return fail(0);
    }
    std::size_t pos = 0;
    bool negative   = false;
    if (text[pos] == '+' || text[pos] == '-')
    {
        negative = text[pos] == '-';
        ++pos;
    }
    auto digits = [&](std::size_t from) {
        std::size_t p = from;
        while (p < text.size() && text[p] >= '0' && text[p] <= '9')
        {
            ++p;
        }
        return p;
    };

    const std::size_t int_end = digits(pos);
    std::string mantissa(text.substr(pos, int_end - pos));
    std::size_t p = int_end;
    rational value;

    if (p < text.size() && text[p] == '/')
    {
        const std::size_t den_end = digits(p + 1);
        if (mantissa.empty() || den_end == p + 1 || den_end != text.size())
        {
            return fail(p);
        }
        integer den(std::string(text.substr(p + 1, den_end - p - 1)), 10);
        if (den == 0)
        {
            return fail(p + 1);
        }
        value = rational(integer(mantissa, 10), den);
        value.canonicalize();
    }
    else
    {
        long exponent = 0;
        if (p < text.size() && text[p] == '.')
        {
            const std::size_t frac_end = digits(p + 1);
            mantissa += std::string(text.substr(p + 1, frac_end - p - 1));
            exponent -= static_cast<long>(frac_end - p - 1);
            p = frac_end;
        }
        if (mantissa.empty())
        {
            return fail(pos);
        }
        if (p < text.size() && (text[p] == 'e' || text[p] == 'E'))
        {
            long e         = 0;
            const char* b  = text.data() + p + 1;
            const char* en = text.data() + text.size();
            if (b < en && *b == '+')
            {
                ++b;
            }
            auto [ptr, ec] = std::from_chars(b, en, e);
            if (ec != std::errc() || ptr != en)
            {
                return fail(p);
            }
            exponent += e;
            p = text.size();
        }
        if (p != text.size())
        {
            return fail(p);
        }
        integer num(mantissa, 10);
        integer scale;
        mpz_ui_pow_ui(scale.get_mpz_t(), 10,
                      static_cast<unsigned long>(std::labs(exponent)));
        value = exponent >= 0 ? rational(num * scale) : rational(num, scale);
        value.canonicalize();
    }
    return negative ? rational(-value) : value;
}

/// Canonical text form: "p/q", or "p" when the denominator is one.
inline std::string format_rational(const rational& x)
{
    return x.get_str();
}

/// Shortest round-trip decimal text of a double, converted exactly.
inline rational rational_from_double(double x)
{
    if (!std::isfinite(x))
    {
        throw invalid_argument("non-finite value cannot be made rational");
    }
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), x);
    return parse_rational(std::string_view(buf, static_cast<std::size_t>(ptr - buf)));
}

/// Exact binary value of a double (no decimal rounding).
inline rational rational_from_binary(double x)
{
    if (!std::isfinite(x))
    {
        throw invalid_argument("non-finite value cannot be made rational");
    }
    return rational(x);
}

template <typename T>
struct scalar_traits;

template <>
struct scalar_traits<rational>
{
    static constexpr bool is_exact   = true;
    static constexpr scalar_mode mode = scalar_mode::exact;

    static rational from_rational(const rational& x) { return x; }
    static rational from_int(long x) { return rational(x); }
    static double to_double(const rational& x) { return x.get_d(); }
    static bool is_zero(const rational& x) { return sgn(x) == 0; }
    static rational abs(const rational& x) { return ::abs(x); }
    static std::string to_text(const rational& x) { return format_rational(x); }
};

template <>
struct scalar_traits<double>
{
    static constexpr bool is_exact   = false;
    static constexpr scalar_mode mode = scalar_mode::floating;

    static double from_rational(const rational& x) { return x.get_d(); }
    static double from_int(long x) { return static_cast<double>(x); }
    static double to_double(double x) { return x; }
    static bool is_zero(double x) { return x == 0.0; }
    static double abs(double x) { return std::fabs(x); }
    static std::string to_text(double x)
    {
        char buf[64];
        auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), x);
        return std::string(buf, ptr);
    }
};

/// The two scalar types the library is instantiated with.
template <typename T>
concept scalar_type = std::same_as<T, rational> || std::same_as<T, double>;

template <scalar_type T>
using point = std::vector<T>;

template <scalar_type T>
T dot(std::span<const T> a, std::span<const T> b)
{
    T s = 0;
    for (std::size_t i = 0; i < a.size(); ++i)
    {
        s += a[i] * b[i];
    }
    return s;
}

template <scalar_type T>
T dot(const std::vector<T>& a, const std::vector<T>& b)
{
    return dot<T>(std::span<const T>(a), std::span<const T>(b));
}

template <scalar_type T>
std::vector<T> convert_point(const std::vector<rational>& p)
{
    std::vector<T> out;
    out.reserve(p.size());
    for (const auto& x : p)
    {
        out.push_back(scalar_traits<T>::from_rational(x));
    }
    return out;
}

/// n! as an exact integer.
inline integer factorial(unsigned long n)
{
    integer f;
    mpz_fac_ui(f.get_mpz_t(), n);
    return f;
}

/// n! / k! for k <= n.
inline integer falling_ratio(unsigned long n, unsigned long k)
{
    integer f = 1;
    for (unsigned long i = k + 1; i <= n; ++i)
    {
        f *= i;
    }
    return f;
}

/// Smallest prime >= n.
inline unsigned long next_prime(unsigned long n)
{
    integer z(n > 0 ? n - 1 : 0);
    integer p;
    mpz_nextprime(p.get_mpz_t(), z.get_mpz_t());
    return p.get_ui();
}

inline bool is_prime(unsigned long n)
{
    integer z(n);
    return mpz_probab_prime_p(z.get_mpz_t(), 30) > 0;
}

} // namespace polymom

#endif // POLYMOM_SCALAR_HPP
