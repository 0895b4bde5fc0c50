#ifndef POLYMOM_POLYMOM_HPP
#define POLYMOM_POLYMOM_HPP

#include <polymom/dense.hpp>
#include <polymom/error.hpp>
#include <polymom/forward.hpp>
#include <polymom/geometry.hpp>
#include <polymom/hankel.hpp>
#include <polymom/io.hpp>
#include <polymom/jet.hpp>
#include <polymom/multipoly.hpp>
#include <polymom/oracle.hpp>
#include <polymom/polynomial.hpp>
#include <polymom/prony.hpp>
#include <polymom/reconstruct.hpp>
#include <polymom/roots.hpp>
#include <polymom/scalar.hpp>
#include <polymom/univar.hpp>

#endif // POLYMOM_POLYMOM_HPP
