#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <boost/multiprecision/gmp.hpp>
#include <boost/multiprecision/eigen.hpp>
#include <Eigen/Core>

namespace specseq {

using Integer = boost::multiprecision::mpz_int;

template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using IntMatrix = Matrix<Integer>;
using IntVector = Vector<Integer>;
using Index = Eigen::Index;

/// Euclidean remainder in [0, |m|).
Integer mod_floor(const Integer& a, const Integer& m);
Integer gcd(const Integer& a, const Integer& b);
/// Inverse of a modulo m; requires gcd(a, m) = 1.
Integer inverse_mod(const Integer& a, const Integer& m);

bool is_prime(const Integer& n);

/// Prime factorization as (prime, exponent) pairs, primes ascending.
std::vector<std::pair<Integer, int>> factorize(Integer n);

IntMatrix int_matrix(std::initializer_list<std::initializer_list<long>> rows);
inline IntMatrix zeros(Index rows, Index cols) { return IntMatrix::Zero(rows, cols); }
inline IntMatrix identity(Index n) { return IntMatrix::Identity(n, n); }

bool is_zero(const IntMatrix& m);

std::string to_string(const IntMatrix& m);

}  // namespace specseq
