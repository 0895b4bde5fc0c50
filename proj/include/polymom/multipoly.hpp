#ifndef POLYMOM_MULTIPOLY_HPP
#define POLYMOM_MULTIPOLY_HPP

#include <cctype>
#include <cstddef>
#include <map>
#include <numeric>
#include <string>
#include <string_view>
#include <vector>

#include <polymom/error.hpp>
#include <polymom/scalar.hpp>

namespace polymom
{

/// Exponent vector m in Z_+^d of the monomial x^m.
using exponent = std::vector<unsigned>;

inline unsigned total_degree(const exponent& m)
{
    return std::accumulate(m.begin(), m.end(), 0u);
}

/// m! = m_1! ... m_d!
inline integer exponent_factorial(const exponent& m)
{
    integer f = 1;
    for (auto mi : m)
    {
        f *= factorial(mi);
    }
    return f;
}

///
/// Sparse multivariate polynomial over `T`. Zero coefficients are never
/// stored, so the empty map is the zero polynomial (degree 0 by convention).
///
template <scalar_type T>
class multipoly
{
public:
    using term_map = std::map<exponent, T>;

    explicit multipoly(std::size_t dim = 1) : dim_(dim)
    {
        if (dim == 0)
        {
            throw invalid_argument("multipoly dimension must be positive");
        }
    }

    static multipoly constant(std::size_t dim, const T& c)
    {
        multipoly p(dim);
        p.add_term(exponent(dim, 0), c);
        return p;
    }

    static multipoly monomial(const exponent& m, const T& c = T(1))
    {
        multipoly p(m.size());
        p.add_term(m, c);
        return p;
    }

    std::size_t dim() const noexcept { return dim_; }
    const term_map& terms() const noexcept { return terms_; }
    bool is_zero() const noexcept { return terms_.empty(); }

    unsigned degree() const
    {
        unsigned deg = 0;
        for (const auto& [m, c] : terms_)
        {
            deg = std::max(deg, total_degree(m));
        }
        return deg;
    }

    /// Coefficient of x^m (zero if absent).
    T coefficient(const exponent& m) const
    {
        auto it = terms_.find(m);
        return it == terms_.end() ? T(0) : it->second;
    }

    void add_term(const exponent& m, const T& c)
    {
        if (m.size() != dim_)
        {
            throw invalid_argument("exponent dimension mismatch");
        }
        if (scalar_traits<T>::is_zero(c))
        {
            return;
        }
        auto [it, inserted] = terms_.try_emplace(m, c);
        if (!inserted)
        {
            it->second += c;
            if (scalar_traits<T>::is_zero(it->second))
            {
                terms_.erase(it);
            }
        }
    }

    /// Sum of the terms of total degree exactly `s`.
    multipoly homogeneous_part(unsigned s) const
    {
        multipoly out(dim_);
        for (const auto& [m, c] : terms_)
        {
            if (total_degree(m) == s)
            {
                out.terms_.emplace(m, c);
            }
        }
        return out;
    }

    T evaluate(std::span<const T> x) const
    {
        if (x.size() != dim_)
        {
            throw invalid_argument("evaluation point dimension mismatch");
        }
        T sum = 0;
        for (const auto& [m, c] : terms_)
        {
            T term = c;
            for (std::size_t i = 0; i < dim_; ++i)
            {
                for (unsigned e = 0; e < m[i]; ++e)
                {
                    term *= x[i];
                }
            }
            sum += term;
        }
        return sum;
    }

    T evaluate(const std::vector<T>& x) const
    {
        return evaluate(std::span<const T>(x));
    }

    template <scalar_type U>
    multipoly<U> convert() const
    {
        multipoly<U> out(dim_);
        for (const auto& [m, c] : terms_)
        {
            if constexpr (std::same_as<T, rational>)
            {
                out.add_term(m, scalar_traits<U>::from_rational(c));
            }
            else
            {
                static_assert(std::same_as<T, U>, "only rational -> U conversion");
                out.add_term(m, c);
            }
        }
        return out;
    }

    friend multipoly operator+(const multipoly& a, const multipoly& b)
    {
        check_dims(a, b);
        multipoly out = a;
        for (const auto& [m, c] : b.terms_)
        {
            out.add_term(m, c);
        }
        return out;
    }

    friend multipoly operator*(const multipoly& a, const multipoly& b)
    {
        check_dims(a, b);
        multipoly out(a.dim_);
        exponent sum(a.dim_);
        for (const auto& [ma, ca] : a.terms_)
        {
            for (const auto& [mb, cb] : b.terms_)
            {
                for (std::size_t i = 0; i < a.dim_; ++i)
                {
                    sum[i] = ma[i] + mb[i];
                }
                out.add_term(sum, T(ca * cb));
            }
        }
        return out;
    }

    friend bool operator==(const multipoly& a, const multipoly& b)
    {
        return a.dim_ == b.dim_ && a.terms_ == b.terms_;
    }

private:
    static void check_dims(const multipoly& a, const multipoly& b)
    {
        if (a.dim_ != b.dim_)
        {
            throw invalid_argument("multipoly dimension mismatch");
        }
    }

    std::size_t dim_;
    term_map terms_;
};

namespace detail
{

class density_parser
{
public:
    density_parser(std::string_view text, std::size_t dim) : text_(text), dim_(dim) {}

    multipoly<rational> parse()
    {
        multipoly<rational> out(dim_);
        skip_ws();
        bool negative = false;
        if (peek('+') || peek('-'))
        {
            negative = text_[pos_] == '-';
            ++pos_;
            skip_ws();
        }
        while (true)
        {
            parse_term(out, negative);
            skip_ws();
            if (pos_ == text_.size())
            {
                break;
            }
            if (!(peek('+') || peek('-')))
            {
                throw parse_error("expected '+' or '-'", pos_);
            }
            negative = text_[pos_] == '-';
            ++pos_;
            skip_ws();
        }
        return out;
    }

private:
    bool peek(char c) const { return pos_ < text_.size() && text_[pos_] == c; }

    bool at_digit() const
    {
        return pos_ < text_.size() &&
               std::isdigit(static_cast<unsigned char>(text_[pos_]));
    }

    void skip_ws()
    {
        while (pos_ < text_.size() &&
               std::isspace(static_cast<unsigned char>(text_[pos_])))
        {
            ++pos_;
        }
    }

    std::string_view digits()
    {
        const std::size_t start = pos_;
        while (at_digit())
        {
            ++pos_;
        }
        return text_.substr(start, pos_ - start);
    }

    void parse_term(multipoly<rational>& out, bool negative)
    {
        const std::size_t start = pos_;
        rational coef(1);
        bool any = false;
        if (at_digit())
        {
            std::string lit(digits());
            if (peek('/'))
            {
                ++pos_;
                if (!at_digit())
                {
                    throw parse_error("expected denominator", pos_);
                }
                lit += '/';
                lit += std::string(digits());
            }
            coef = parse_rational(lit);
            any  = true;
        }
        exponent m(dim_, 0);
        while (true)
        {
            skip_ws();
            if (!peek('x'))
            {
                break;
            }
            ++pos_;
            if (!at_digit())
            {
                throw parse_error("expected variable index after 'x'", pos_);
            }
            const std::size_t index_at = pos_;
            const unsigned long index  = std::stoul(std::string(digits()));
            if (index == 0 || index > dim_)
            {
                throw parse_error("variable index x" + std::to_string(index) +
                                      " outside 1.." + std::to_string(dim_),
                                  index_at);
            }
            unsigned long power = 1;
            if (peek('^'))
            {
                ++pos_;
                if (peek('-'))
                {
                    throw parse_error("negative exponent", pos_);
                }
                if (!at_digit())
                {
                    throw parse_error("expected exponent", pos_);
                }
                power = std::stoul(std::string(digits()));
            }
            m[index - 1] += static_cast<unsigned>(power);
            any = true;
        }
        if (!any)
        {
            throw parse_error("expected term", start);
        }
        out.add_term(m, negative ? rational(-coef) : coef);
    }

    std::string_view text_;
    std::size_t dim_;
    std::size_t pos_ = 0;
};

} // namespace detail

///
/// Parse a density expression such as `3/2 x1^2 x2 - x2` in `dim`
/// variables `x1..x<dim>`.
///
inline multipoly<rational> parse_density(std::string_view text, std::size_t dim)
{
    return detail::density_parser(text, dim).parse();
}

} // namespace polymom

#endif // POLYMOM_MULTIPOLY_HPP
