#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace weylrad {

using Integer = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

/// Thrown for malformed requests: unsupported diagram, bad node set, non-prime modulus.
class InvalidArgument : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Thrown when a configured size cap (ambient, lattice, boxes, points) would be exceeded.
class CapExceeded : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An internal consistency check failed. Indicates a bug, never bad input.
class VerificationFailure : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

inline Integer factorial(unsigned n)
{
    Integer r = 1;
    for (unsigned i = 2; i <= n; ++i)
        r *= i;
    return r;
}

inline Integer binomial(long long n, long long k)
{
    if (k < 0 || k > n)
        return 0;
    if (k > n - k)
        k = n - k;
    Integer r = 1;
    for (long long i = 1; i <= k; ++i) {
        r *= n - k + i;
        r /= i;
    }
    return r;
}

inline bool is_prime(long long p)
{
    if (p < 2)
        return false;
    for (long long d = 2; d * d <= p; ++d)
        if (p % d == 0)
            return false;
    return true;
}

inline void require_prime(long long p)
{
    if (!is_prime(p))
        throw InvalidArgument("modulus " + std::to_string(p) + " is not prime");
}

/// Least non-negative residue of an arbitrary-precision integer.
inline std::int64_t mod_reduce(const Integer& x, std::int64_t p)
{
    Integer r = x % p;
    if (r < 0)
        r += p;
    return r.convert_to<std::int64_t>();
}

inline std::int64_t mod_pow(std::int64_t b, std::int64_t e, std::int64_t p)
{
    std::int64_t r = 1 % p;
    b %= p;
    if (b < 0)
        b += p;
    while (e > 0) {
        if (e & 1)
            r = r * b % p;
        b = b * b % p;
        e >>= 1;
    }
    return r;
}

inline std::int64_t mod_inverse(std::int64_t a, std::int64_t p)
{
    a %= p;
    if (a < 0)
        a += p;
    if (a == 0)
        throw std::domain_error("inverse of zero modulo " + std::to_string(p));
    return mod_pow(a, p - 2, p);
}

inline std::string to_string(const Integer& x) { return x.str(); }

inline std::string to_string(const Rational& x)
{
    if (denominator(x) == 1)
        return numerator(x).str();
    return numerator(x).str() + "/" + denominator(x).str();
}

} // namespace weylrad
