#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace cukit {

using Natural = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

/// Raised for malformed input, violated preconditions and shape mismatches.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An element of {0, 1, 2, ...} ∪ {∞}; the Cuntz semigroup of a single
/// matrix block. Default-constructs to zero.
class ExtNat {
 public:
  ExtNat() = default;
  ExtNat(long long v);  // NOLINT: small literals read naturally as ExtNat

  static ExtNat fin(Natural v);
  static ExtNat inf();

  bool is_inf() const { return inf_; }
  bool is_fin() const { return !inf_; }
  bool is_zero() const { return !inf_ && value_ == 0; }

  /// Throws for ∞.
  const Natural& value() const;

  friend bool operator==(const ExtNat& a, const ExtNat& b) = default;

 private:
  bool inf_ = false;
  Natural value_ = 0;
};

ExtNat operator+(const ExtNat& a, const ExtNat& b);

/// Multiplicity action with 0·∞ = 0.
ExtNat scale(const Natural& m, const ExtNat& x);

bool leq(const ExtNat& a, const ExtNat& b);
bool way_below(const ExtNat& a, const ExtNat& b);

std::string to_string(const ExtNat& x);
ExtNat parse_ext_nat(std::string_view text);

/// An element of [0, ∞] with exact rational finite part.
class ExtRational {
 public:
  ExtRational() = default;
  ExtRational(long long v);  // NOLINT

  static ExtRational fin(Rational v);
  static ExtRational inf();

  bool is_inf() const { return inf_; }
  bool is_fin() const { return !inf_; }
  bool is_zero() const { return !inf_ && value_ == 0; }
  const Rational& value() const;

  friend bool operator==(const ExtRational& a, const ExtRational& b) = default;

 private:
  bool inf_ = false;
  Rational value_ = 0;
};

ExtRational operator+(const ExtRational& a, const ExtRational& b);
bool leq(const ExtRational& a, const ExtRational& b);
/// x << y iff x = 0, or x is finite and strictly below y.
bool way_below(const ExtRational& a, const ExtRational& b);

/// "p/q", "n" or "inf".
std::string to_string(const ExtRational& x);
std::string to_string(const Rational& x);

}  // namespace cukit
