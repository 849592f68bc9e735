#pragma once

#include <cctype>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>

#include "cyclotomic.hpp"
#include "error.hpp"
#include "numtheory.hpp"
#include "poly.hpp"
#include "tower.hpp"

namespace p3ext {

/// Recursive-descent parser for rational expressions over a ring T:
///
///   expr   := ['+'|'-'] term (('+'|'-') term)*
///   term   := factor (('*'|'/') factor | factor)*     juxtaposition multiplies
///   factor := atom ['^' ['-'] integer]
///   atom   := integer | symbol | '(' expr ')'
///
/// Ops supplies: T constant(const BigRat&); std::optional<T> symbol(std::string_view);
/// T power(const T&, long); T divide(const T&, const T&).
template <typename T, typename Ops>
class ExprParser {
 public:
  ExprParser(std::string_view text, const Ops& ops) : s_(text), ops_(ops) {}

  T parse() {
    T v = expr();
    skip_ws();
    if (pos_ != s_.size()) error("unexpected '" + std::string(1, s_[pos_]) + "'");
    return v;
  }

 private:
  [[noreturn]] void error(const std::string& what) const {
    fail(ErrorCode::ParseError, what + " at column " + std::to_string(pos_ + 1) + " in \"" + std::string(s_) + "\"");
  }

  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  bool eat(char c) {
    skip_ws();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  bool at_atom_start() {
    skip_ws();
    if (pos_ >= s_.size()) return false;
    const unsigned char c = static_cast<unsigned char>(s_[pos_]);
    return std::isdigit(c) || std::isalpha(c) || c == '_' || c == '(';
  }

  T expr() {
    bool neg = false;
    if (eat('-')) {
      neg = true;
    } else {
      eat('+');
    }
    T acc = term();
    if (neg) acc = ops_.constant(BigRat(-1)) * acc;
    for (;;) {
      if (eat('+')) {
        acc = acc + term();
      } else if (eat('-')) {
        acc = acc - term();
      } else {
        return acc;
      }
    }
  }

  T term() {
    T acc = factor();
    for (;;) {
      if (eat('*')) {
        acc = acc * factor();
      } else if (eat('/')) {
        acc = ops_.divide(acc, factor());
      } else if (at_atom_start()) {
        acc = acc * factor();
      } else {
        return acc;
      }
    }
  }

  T factor() {
    T base = atom();
    if (!eat('^')) return base;
    bool neg = eat('-');
    skip_ws();
    if (pos_ >= s_.size() || !std::isdigit(static_cast<unsigned char>(s_[pos_]))) error("expected an exponent");
    BigInt e = digits();
    if (!e.fits_slong_p() || e > 1000000) error("exponent too large");
    const long k = e.get_si();
    return ops_.power(base, neg ? -k : k);
  }

  BigInt digits() {
    const std::size_t start = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    return BigInt(std::string(s_.substr(start, pos_ - start)));
  }

  T atom() {
    skip_ws();
    if (pos_ >= s_.size()) error("unexpected end of input");
    const unsigned char c = static_cast<unsigned char>(s_[pos_]);
    if (c == '(') {
      ++pos_;
      T v = expr();
      if (!eat(')')) error("expected ')'");
      return v;
    }
    if (std::isdigit(c)) return ops_.constant(BigRat(digits()));
    if (std::isalpha(c) || c == '_') {
      const std::size_t start = pos_;
      while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
      std::string_view name = s_.substr(start, pos_ - start);
      if (auto v = ops_.symbol(name)) return *v;
      pos_ = start;
      error("unknown symbol '" + std::string(name) + "'");
    }
    error("unexpected '" + std::string(1, static_cast<char>(c)) + "'");
  }

  std::string_view s_;
  const Ops& ops_;
  std::size_t pos_ = 0;
};

namespace detail {

struct ElementOps {
  const Tower& t;
  CycNum constant(const BigRat& q) const { return t.field()->from_rat(q); }
  std::optional<CycNum> symbol(std::string_view name) const {
    if (name == "zp") return t.zp();
    if (name == "zr") return t.zr();
    if (name == "d") return t.delta();
    return std::nullopt;
  }
  CycNum power(const CycNum& a, long k) const {
    require(!(a.is_zero() && k < 0), ErrorCode::DivisionByZero, "negative power of zero");
    return a.pow(k);
  }
  CycNum divide(const CycNum& a, const CycNum& b) const {
    require(!b.is_zero(), ErrorCode::DivisionByZero, "division by zero in expression");
    return a / b;
  }
};

struct PolyOps {
  std::string var;
  RatPoly constant(const BigRat& q) const { return RatPoly::constant(q); }
  std::optional<RatPoly> symbol(std::string_view name) const {
    if (name == var) return RatPoly::x();
    return std::nullopt;
  }
  RatPoly power(const RatPoly& a, long k) const {
    require(k >= 0, ErrorCode::ParseError, "negative exponent in a polynomial");
    return a.pow(static_cast<unsigned long>(k));
  }
  RatPoly divide(const RatPoly& a, const RatPoly& b) const {
    require(b.degree() == 0, ErrorCode::ParseError, "polynomials may only be divided by nonzero constants");
    return (1 / b.coeff(0)) * a;
  }
};

}  // namespace detail

/// Element of the tower's field from text in zp, zr, d.
inline CycNum parse_element(const Tower& t, std::string_view text) {
  detail::ElementOps ops{t};
  return ExprParser<CycNum, detail::ElementOps>(text, ops).parse();
}

/// Rational polynomial in one variable, e.g. "X^3 + 81/49*X^2 - 2X - 1".
inline RatPoly parse_poly(std::string_view text, const std::string& var = "X") {
  detail::PolyOps ops{var};
  return ExprParser<RatPoly, detail::PolyOps>(text, ops).parse();
}

}  // namespace p3ext
