#pragma once

// Exact integers and rationals (GMP) plus certified real intervals (MPFR).

#include <gmpxx.h>
#include <mpfr.h>

#include <compare>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <type_traits>
#include <utility>

namespace fibpow {

using Integer = mpz_class;
using Rational = mpq_class;

inline constexpr mpfr_prec_t kDefaultPrecision = 512;
inline constexpr mpfr_prec_t kMaxPrecision = 8192;
inline constexpr mpfr_prec_t kMinPrecision = 128;

class PrecisionExhausted : public std::runtime_error {
 public:
  explicit PrecisionExhausted(const std::string& what) : std::runtime_error(what) {}
};

// Throws std::domain_error when den == 0. Result is canonical.
Rational make_rational(const Integer& num, const Integer& den);

// Exact value of a decimal literal such as "4.1e62", "-0.24" or "2.61e13".
Rational parse_decimal(std::string_view text);

std::string to_decimal(const Integer& x);

enum class Comparison { ProvenGreater, ProvenLess, Unknown };

const char* to_string(Comparison c);

// Closed interval [lo, hi] with outward rounding. Every operation returns
// an interval that contains the exact result of the operation applied to
// any points of the operands.
class RealBall {
 public:
  explicit RealBall(mpfr_prec_t prec = kDefaultPrecision);
  RealBall(long v, mpfr_prec_t prec);
  RealBall(const Integer& v, mpfr_prec_t prec);
  RealBall(const Rational& v, mpfr_prec_t prec);
  RealBall(const RealBall& other);
  RealBall(RealBall&& other) noexcept;
  RealBall& operator=(const RealBall& other);
  RealBall& operator=(RealBall&& other) noexcept;
  ~RealBall();

  // Interval from a midpoint and radius; used by tests and the
  // certify_compare examples.
  static RealBall from_mid_rad(const Rational& mid, const Rational& rad, mpfr_prec_t prec);
  // Interval with exact endpoints given as MPFR-readable strings.
  static RealBall from_endpoints(const std::string& lo, const std::string& hi, mpfr_prec_t prec);
  static RealBall hull(const RealBall& a, const RealBall& b);

  mpfr_prec_t prec() const { return mpfr_get_prec(lo_); }
  mpfr_srcptr lower() const { return lo_; }
  mpfr_srcptr upper() const { return hi_; }
  mpfr_ptr lower_mut() { return lo_; }
  mpfr_ptr upper_mut() { return hi_; }

  // Midpoint rounded to nearest and radius rounded up, as doubles or text.
  double mid() const;
  double rad() const;
  std::string mid_string(int digits = 20) const;
  std::string to_string(int digits = 20) const;
  // Exact hexadecimal endpoints; round-trips through from_endpoints.
  std::string lower_hex() const;
  std::string upper_hex() const;

  bool contains(const Rational& x) const;
  bool contains(const RealBall& inner) const;
  bool overlaps(const RealBall& other) const;
  bool is_point() const { return mpfr_equal_p(lo_, hi_) != 0; }
  bool is_finite() const { return mpfr_number_p(lo_) && mpfr_number_p(hi_); }

  // Radius compare: true when width(this) <= width(other).
  bool no_wider_than(const RealBall& other) const;

  // Same endpoints and precision.
  bool operator==(const RealBall& other) const;

  void swap(RealBall& other) noexcept;

 private:
  mpfr_t lo_;
  mpfr_t hi_;
};

// In-place forms write into out (out may alias an operand) at out's precision.
void add(RealBall& out, const RealBall& a, const RealBall& b);
void sub(RealBall& out, const RealBall& a, const RealBall& b);
void mul(RealBall& out, const RealBall& a, const RealBall& b);
void div(RealBall& out, const RealBall& a, const RealBall& b);
void mul_z(RealBall& out, const RealBall& a, const Integer& z);

RealBall operator+(const RealBall& a, const RealBall& b);
RealBall operator-(const RealBall& a, const RealBall& b);
RealBall operator*(const RealBall& a, const RealBall& b);
RealBall operator/(const RealBall& a, const RealBall& b);
RealBall operator-(const RealBall& a);
RealBall operator*(const RealBall& a, const Integer& z);

RealBall abs(const RealBall& x);
RealBall log(const RealBall& x);
RealBall exp(const RealBall& x);
RealBall sqrt(const RealBall& x);
RealBall pow_int(const RealBall& x, long n);

RealBall real_log(const Rational& x, mpfr_prec_t prec);
RealBall const_log2(mpfr_prec_t prec);
RealBall const_sqrt5(mpfr_prec_t prec);

// Fractional part, assuming the ball does not contain an integer in its
// interior; nullopt otherwise.
std::optional<RealBall> frac(const RealBall& x);

// Ball for ||x||; nullopt (Unknown) when the ball straddles a half-integer
// or is too wide to decide.
std::optional<RealBall> nearest_int_distance(const RealBall& x);

Comparison certify_compare(const RealBall& x, const Rational& y);
Comparison certify_compare(const RealBall& x, const RealBall& y);
inline bool proven_gt(const RealBall& x, const Rational& y) {
  return certify_compare(x, y) == Comparison::ProvenGreater;
}
inline bool proven_lt(const RealBall& x, const Rational& y) {
  return certify_compare(x, y) == Comparison::ProvenLess;
}
// x <= y certified (accepts touching endpoints).
bool proven_le(const RealBall& x, const Rational& y);
bool proven_le(const RealBall& x, const RealBall& y);

// floor of every point in the ball, if it is the same integer.
std::optional<Integer> certified_floor(const RealBall& x);
Integer floor_of_upper(const RealBall& x);
Integer ceil_of_lower(const RealBall& x);

// Runs attempt(p) for p = start, 2 start, ... up to kMaxPrecision until it
// returns a value; throws PrecisionExhausted otherwise.
template <class Attempt>
auto with_escalation(mpfr_prec_t start, Attempt&& attempt, const std::string& what)
    -> typename std::invoke_result_t<Attempt&, mpfr_prec_t>::value_type {
  if (start < kMinPrecision) start = kMinPrecision;
  for (mpfr_prec_t p = start; p <= kMaxPrecision; p *= 2) {
    auto r = attempt(p);
    if (r) return std::move(*r);
  }
  throw PrecisionExhausted(what + ": undecided at " + std::to_string(kMaxPrecision) + " bits");
}

}  // namespace fibpow
