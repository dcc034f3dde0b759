#pragma once

#include "fibpow/bigmath.hpp"

#include <optional>
#include <string>

namespace fibpow {

// a + b*sqrt(5) with rational a, b.
struct QuadRat {
  Rational a;
  Rational b;

  QuadRat() = default;
  QuadRat(long v) : a(v), b(0) {}
  QuadRat(Rational a_, Rational b_) : a(std::move(a_)), b(std::move(b_)) {
    a.canonicalize();
    b.canonicalize();
  }

  bool is_zero() const { return a == 0 && b == 0; }
  bool is_rational() const { return b == 0; }
  bool operator==(const QuadRat& o) const { return a == o.a && b == o.b; }

  std::string to_string() const;
};

QuadRat operator+(const QuadRat& x, const QuadRat& y);
QuadRat operator-(const QuadRat& x, const QuadRat& y);
QuadRat operator-(const QuadRat& x);
QuadRat operator*(const QuadRat& x, const QuadRat& y);
QuadRat operator/(const QuadRat& x, const QuadRat& y);

QuadRat qr_alpha();
QuadRat qr_beta();
QuadRat qr_sqrt5();
QuadRat qr_two_pow(long e);

QuadRat qr_pow(const QuadRat& x, long k);
QuadRat qr_conjugate(const QuadRat& x);
Rational norm(const QuadRat& x);

RealBall embed(const QuadRat& x, mpfr_prec_t prec);
RealBall height_quadrat(const QuadRat& x, mpfr_prec_t prec);

// F_k by recurrence; indices up to 400 come from a shared table.
const Integer& fibonacci(int k);
Integer fibonacci_big(long k);
inline constexpr int kFibTableSize = 401;

// x = sign * 2^e * alpha^s.
struct Relation {
  int sign = 1;
  long e = 0;
  long s = 0;
  bool operator==(const Relation&) const = default;
};

inline constexpr long kRelationMaxTwoExp = 64;
inline constexpr long kRelationMaxAlphaExp = 400;

QuadRat relation_value(const Relation& rel);
std::optional<Relation> decompose_two_alpha(const QuadRat& x);

}  // namespace fibpow
