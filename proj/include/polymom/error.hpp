#ifndef POLYMOM_ERROR_HPP
#define POLYMOM_ERROR_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace polymom
{

/// Base class of every exception thrown by the library.
class error : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

/// Malformed textual input (density expression, rational literal, JSON).
class parse_error : public error
{
public:
    parse_error(const std::string& what, std::size_t offset)
        : error(what + " at offset " + std::to_string(offset)), offset_(offset)
    {
    }

    std::size_t offset() const noexcept { return offset_; }

private:
    std::size_t offset_;
};

/// Input violating a documented precondition.
class invalid_argument : public error
{
public:
    using error::error;
};

/// A moment source could not supply as many moments as requested.
class insufficient_moments : public error
{
public:
    insufficient_moments(std::size_t required, std::size_t available)
        : error("insufficient moments: " + std::to_string(required) +
                " required, " + std::to_string(available) + " available"),
          required_(required),
          available_(available)
    {
    }

    std::size_t required() const noexcept { return required_; }
    std::size_t available() const noexcept { return available_; }

private:
    std::size_t required_;
    std::size_t available_;
};

///
/// The chosen direction is not in general position for the (unknown)
/// polytope. Every subclass means "resample the direction and retry".
///
class nongeneric_direction : public error
{
public:
    using error::error;
};

/// Some edge denominator <w_k(v), z> vanished while evaluating a cone term.
class denominator_vanishes : public nongeneric_direction
{
public:
    denominator_vanishes(std::size_t vertex, std::size_t edge)
        : nongeneric_direction("denominator vanishes at vertex " +
                               std::to_string(vertex) + ", edge " +
                               std::to_string(edge)),
          vertex_(vertex),
          edge_(edge)
    {
    }

    std::size_t vertex() const noexcept { return vertex_; }
    std::size_t edge() const noexcept { return edge_; }

private:
    std::size_t vertex_;
    std::size_t edge_;
};

/// Hankel rank is not a multiple of (density degree + 1).
class rank_not_divisible : public nongeneric_direction
{
public:
    using nongeneric_direction::nongeneric_direction;
};

/// A Prony root does not have the expected multiplicity.
class multiplicity_mismatch : public nongeneric_direction
{
public:
    using nongeneric_direction::nongeneric_direction;
};

/// Rank changed between consecutive Hankel sizes, or the minimal kernel
/// vector does not have the Vandermonde shape.
class rank_unstable : public nongeneric_direction
{
public:
    using nongeneric_direction::nongeneric_direction;
};

/// The Hankel matrix has full rank: more moments (larger Nmax) are needed.
class full_rank : public error
{
public:
    using error::error;
};

/// An exact-mode Prony polynomial has a root that is not rational.
class irrational_root : public error
{
public:
    using error::error;
};

/// Projection matching across two directions was not a bijection.
class ambiguous_matching : public error
{
public:
    using error::error;
};

/// Every trial of a retry loop failed.
class retries_exhausted : public error
{
public:
    using error::error;
};

class singular_matrix : public error
{
public:
    using error::error;
};

/// Computational guard (enumeration size, jet order) exceeded.
class guard_exceeded : public error
{
public:
    using error::error;
};

} // namespace polymom

#endif // POLYMOM_ERROR_HPP
