// Common types and error classes shared by every polyflat module.

#ifndef POLYFLAT_CORE_HPP_
#define POLYFLAT_CORE_HPP_

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace polyflat {

using Int = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;
using IntVector = std::vector<Int>;

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input: wrong arity, non-unimodular matrix, bad JSON payload...
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// A computation refused to run because it would exceed a resource cap.
class ResourceRefusal : public Error {
 public:
  using Error::Error;
};

[[noreturn]] inline void fail(const std::string& msg) { throw ValidationError(msg); }

inline std::string to_string(const Int& x) { return x.str(); }

inline Int floor_div(const Int& a, const Int& b) {
  Int q = a / b;  // truncates toward zero
  if ((a % b != 0) && ((a < 0) != (b < 0)))
    --q;
  return q;
}

inline std::int64_t floor_mod(std::int64_t a, std::int64_t m) {
  std::int64_t r = a % m;
  return r < 0 ? r + m : r;
}

inline std::int64_t floor_mod128(__int128 a, std::int64_t m) {
  __int128 r = a % m;
  if (r < 0)
    r += m;
  return static_cast<std::int64_t>(r);
}

}  // namespace polyflat

#endif  // POLYFLAT_CORE_HPP_
