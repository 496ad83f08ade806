#include "cukit/ext_nat.hpp"

#include <cctype>

namespace cukit {

ExtNat::ExtNat(long long v) : value_(v) {
  if (v < 0) throw Error("ExtNat: negative value");
}

ExtNat ExtNat::fin(Natural v) {
  if (v < 0) throw Error("ExtNat: negative value");
  ExtNat x;
  x.value_ = std::move(v);
  return x;
}

ExtNat ExtNat::inf() {
  ExtNat x;
  x.inf_ = true;
  return x;
}

const Natural& ExtNat::value() const {
  if (inf_) throw Error("ExtNat: value of inf");
  return value_;
}

ExtNat operator+(const ExtNat& a, const ExtNat& b) {
  if (a.is_inf() || b.is_inf()) return ExtNat::inf();
  return ExtNat::fin(a.value() + b.value());
}

ExtNat scale(const Natural& m, const ExtNat& x) {
  if (m == 0) return ExtNat{};
  if (x.is_inf()) return ExtNat::inf();
  return ExtNat::fin(m * x.value());
}

bool leq(const ExtNat& a, const ExtNat& b) {
  if (b.is_inf()) return true;
  if (a.is_inf()) return false;
  return a.value() <= b.value();
}

bool way_below(const ExtNat& a, const ExtNat& b) {
  return a.is_fin() && leq(a, b);
}

std::string to_string(const ExtNat& x) {
  return x.is_inf() ? std::string("inf") : x.value().str();
}

ExtNat parse_ext_nat(std::string_view text) {
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
  if (text == "inf") return ExtNat::inf();
  if (text.empty()) throw Error("empty ExtNat literal");
  for (char c : text) {
    if (!std::isdigit(static_cast<unsigned char>(c))) {
      throw Error("bad ExtNat literal '" + std::string(text) + "'");
    }
  }
  return ExtNat::fin(Natural(std::string(text)));
}

ExtRational::ExtRational(long long v) : value_(v) {
  if (v < 0) throw Error("ExtRational: negative value");
}

ExtRational ExtRational::fin(Rational v) {
  if (v < 0) throw Error("ExtRational: negative value");
  ExtRational x;
  x.value_ = std::move(v);
  return x;
}

ExtRational ExtRational::inf() {
  ExtRational x;
  x.inf_ = true;
  return x;
}

const Rational& ExtRational::value() const {
  if (inf_) throw Error("ExtRational: value of inf");
  return value_;
}

ExtRational operator+(const ExtRational& a, const ExtRational& b) {
  if (a.is_inf() || b.is_inf()) return ExtRational::inf();
  return ExtRational::fin(a.value() + b.value());
}

bool leq(const ExtRational& a, const ExtRational& b) {
  if (b.is_inf()) return true;
  if (a.is_inf()) return false;
  return a.value() <= b.value();
}

bool way_below(const ExtRational& a, const ExtRational& b) {
  if (a.is_zero()) return true;
  if (a.is_inf()) return false;
  return b.is_inf() || a.value() < b.value();
}

std::string to_string(const Rational& x) {
  const Natural num = boost::multiprecision::numerator(x);
  const Natural den = boost::multiprecision::denominator(x);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

std::string to_string(const ExtRational& x) {
  return x.is_inf() ? std::string("inf") : to_string(x.value());
}

}  // namespace cukit
