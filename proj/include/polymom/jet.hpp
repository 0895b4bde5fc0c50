#ifndef POLYMOM_JET_HPP
#define POLYMOM_JET_HPP

#include <cstddef>
#include <map>
#include <memory>
#include <mutex>
#include <span>
#include <utility>
#include <vector>

#include <polymom/error.hpp>
#include <polymom/multipoly.hpp>
#include <polymom/scalar.hpp>

namespace polymom
{

///
/// Index bookkeeping for truncated Taylor series in `dim` variables up to
/// total degree `order`: the monomial list (graded), reverse lookup, and the
/// table of products whose degree stays within the truncation.
///
class jet_layout
{
public:
    static constexpr unsigned max_order = 32;

    jet_layout(std::size_t dim, unsigned order) : dim_(dim), order_(order)
    {
        if (dim == 0)
        {
            throw invalid_argument("jet dimension must be positive");
        }
        if (order > max_order)
        {
            throw guard_exceeded("jet order " + std::to_string(order) +
                                 " exceeds limit " + std::to_string(max_order));
        }
        exponent m(dim, 0);
        for (unsigned deg = 0; deg <= order; ++deg)
        {
            enumerate(m, 0, deg);
        }
        for (std::size_t i = 0; i < monomials_.size(); ++i)
        {
            index_.emplace(monomials_[i], i);
        }
        products_.resize(monomials_.size());
        exponent sum(dim);
        for (std::size_t i = 0; i < monomials_.size(); ++i)
        {
            for (std::size_t j = 0; j < monomials_.size(); ++j)
            {
                if (degrees_[i] + degrees_[j] > order)
                {
                    continue;
                }
                for (std::size_t k = 0; k < dim; ++k)
                {
                    sum[k] = monomials_[i][k] + monomials_[j][k];
                }
                products_[i].emplace_back(j, index_.at(sum));
            }
        }
    }

    /// Shared layout for (dim, order); layouts are immutable once built.
    static std::shared_ptr<const jet_layout> get(std::size_t dim, unsigned order)
    {
        static std::mutex mutex;
        static std::map<std::pair<std::size_t, unsigned>,
                        std::shared_ptr<const jet_layout>>
            cache;
        std::lock_guard<std::mutex> lock(mutex);
        auto& slot = cache[{dim, order}];
        if (!slot)
        {
            slot = std::make_shared<const jet_layout>(dim, order);
        }
        return slot;
    }

    std::size_t dim() const noexcept { return dim_; }
    unsigned order() const noexcept { return order_; }
    std::size_t size() const noexcept { return monomials_.size(); }
    const exponent& monomial(std::size_t i) const { return monomials_[i]; }
    unsigned degree(std::size_t i) const { return degrees_[i]; }

    /// Index of monomial m, or size() if m exceeds the truncation order.
    std::size_t index_of(const exponent& m) const
    {
        auto it = index_.find(m);
        return it == index_.end() ? size() : it->second;
    }

    const std::vector<std::pair<std::size_t, std::size_t>>& products(std::size_t i) const
    {
        return products_[i];
    }

private:
    void enumerate(exponent& m, std::size_t var, unsigned remaining)
    {
        if (var + 1 == dim_)
        {
            m[var] = remaining;
            monomials_.push_back(m);
            degrees_.push_back(total_degree(m));
            return;
        }
        for (unsigned e = remaining + 1; e-- > 0;)
        {
            m[var] = e;
            enumerate(m, var + 1, remaining - e);
        }
        m[var] = 0;
    }

    std::size_t dim_;
    unsigned order_;
    std::vector<exponent> monomials_;
    std::vector<unsigned> degrees_;
    std::map<exponent, std::size_t> index_;
    std::vector<std::vector<std::pair<std::size_t, std::size_t>>> products_;
};

///
/// Truncated multivariate Taylor expansion f(z + e) = sum_m f_m e^m with
/// |m| <= order. Arithmetic is that of the quotient ring
/// T[e_1..e_d] / (monomials of degree > order).
///
template <scalar_type T>
class jet
{
public:
    explicit jet(std::shared_ptr<const jet_layout> layout)
        : layout_(std::move(layout)), coef_(layout_->size(), T(0))
    {
    }

    static jet constant(std::shared_ptr<const jet_layout> layout, const T& c)
    {
        jet j(std::move(layout));
        j.coef_[0] = c;
        return j;
    }

    /// The jet of z_i at z_i = value, i.e. value + e_i.
    static jet variable(std::shared_ptr<const jet_layout> layout, std::size_t i,
                        const T& value)
    {
        jet j = constant(layout, value);
        if (layout->order() > 0)
        {
            exponent m(layout->dim(), 0);
            m[i]                        = 1;
            j.coef_[layout->index_of(m)] = T(1);
        }
        return j;
    }

    const jet_layout& layout() const noexcept { return *layout_; }
    const std::shared_ptr<const jet_layout>& layout_ptr() const noexcept { return layout_; }
    const T& value() const { return coef_[0]; }
    const std::vector<T>& coefficients() const noexcept { return coef_; }
    void set_coefficient(std::size_t i, const T& c) { coef_.at(i) = c; }

    /// Taylor coefficient of e^m (zero beyond the truncation order).
    T coefficient(const exponent& m) const
    {
        const std::size_t i = layout_->index_of(m);
        return i == layout_->size() ? T(0) : coef_[i];
    }

    jet& operator+=(const jet& o)
    {
        for (std::size_t i = 0; i < coef_.size(); ++i)
        {
            coef_[i] += o.coef_[i];
        }
        return *this;
    }

    jet& operator-=(const jet& o)
    {
        for (std::size_t i = 0; i < coef_.size(); ++i)
        {
            coef_[i] -= o.coef_[i];
        }
        return *this;
    }

    jet& operator*=(const T& s)
    {
        for (auto& c : coef_)
        {
            c *= s;
        }
        return *this;
    }

    friend jet operator+(jet a, const jet& b) { return a += b; }
    friend jet operator-(jet a, const jet& b) { return a -= b; }
    friend jet operator*(jet a, const T& s) { return a *= s; }
    friend jet operator*(const T& s, jet a) { return a *= s; }

    friend jet operator*(const jet& a, const jet& b)
    {
        jet out(a.layout_);
        const auto& lay = *a.layout_;
        for (std::size_t i = 0; i < a.coef_.size(); ++i)
        {
            if (scalar_traits<T>::is_zero(a.coef_[i]))
            {
                continue;
            }
            for (const auto& [j, k] : lay.products(i))
            {
                if (!scalar_traits<T>::is_zero(b.coef_[j]))
                {
                    out.coef_[k] += a.coef_[i] * b.coef_[j];
                }
            }
        }
        return out;
    }

    jet& operator*=(const jet& o) { return *this = *this * o; }

    /// 1/f, requiring f(z) != 0.
    jet reciprocal() const
    {
        if (scalar_traits<T>::is_zero(coef_[0]))
        {
            throw singular_matrix("jet reciprocal of a vanishing value");
        }
        // 1/(c + h) = (1/c) sum_k (-h/c)^k, h nilpotent of index order+1.
        const T inv = T(1) / coef_[0];
        jet h       = *this;
        h.coef_[0]  = 0;
        h *= T(-inv);
        jet result = constant(layout_, T(1));
        jet power  = result;
        for (unsigned k = 1; k <= layout_->order(); ++k)
        {
            power = power * h;
            result += power;
        }
        result *= inv;
        return result;
    }

    jet pow(unsigned long n) const
    {
        jet result = constant(layout_, T(1));
        jet base   = *this;
        while (n > 0)
        {
            if (n & 1u)
            {
                result = result * base;
            }
            n >>= 1u;
            if (n > 0)
            {
                base = base * base;
            }
        }
        return result;
    }

private:
    std::shared_ptr<const jet_layout> layout_;
    std::vector<T> coef_;
};

/// The linear form <a, z + e> as a jet.
template <scalar_type T>
jet<T> linear_jet(std::shared_ptr<const jet_layout> layout, std::span<const T> a,
                  std::span<const T> z)
{
    jet<T> out = jet<T>::constant(layout, dot<T>(a, z));
    if (layout->order() > 0)
    {
        exponent m(layout->dim(), 0);
        for (std::size_t i = 0; i < a.size(); ++i)
        {
            m[i] = 1;
            out.set_coefficient(layout->index_of(m), a[i]);
            m[i] = 0;
        }
    }
    return out;
}

/// sum_m rho_m * m! * jet_m for an already computed jet.
template <scalar_type T>
T apply_to_jet(const multipoly<T>& rho, const jet<T>& fz)
{
    T sum = 0;
    for (const auto& [m, c] : rho.terms())
    {
        if (total_degree(m) > fz.layout().order())
        {
            throw guard_exceeded("operator degree exceeds jet order");
        }
        const T mf = scalar_traits<T>::from_rational(rational(exponent_factorial(m)));
        sum += c * mf * fz.coefficient(m);
    }
    return sum;
}

///
/// Evaluate [rho(d/dz_1, ..., d/dz_d) f](z), where `f` maps the jets of
/// the coordinate variables at z to the jet of f at z. The jet order is
/// the total degree of rho, so the result is exact in exact mode:
///   sum_m rho_m * m! * (Taylor coefficient of f at z for e^m).
///
template <scalar_type T, typename F>
T apply_diff_operator(const multipoly<T>& rho, F&& f, std::span<const T> z)
{
    if (rho.dim() != z.size())
    {
        throw invalid_argument("operator and point dimensions differ");
    }
    auto layout = jet_layout::get(z.size(), rho.degree());
    std::vector<jet<T>> vars;
    vars.reserve(z.size());
    for (std::size_t i = 0; i < z.size(); ++i)
    {
        vars.push_back(jet<T>::variable(layout, i, z[i]));
    }
    const jet<T> fz = f(std::span<const jet<T>>(vars));
    return apply_to_jet(rho, fz);
}

} // namespace polymom

#endif // POLYMOM_JET_HPP
