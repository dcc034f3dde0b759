#include "fibpow/bigmath.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace fibpow {

namespace {

// Scratch mpfr_t with RAII cleanup.
struct Tmp {
  mpfr_t v;
  explicit Tmp(mpfr_prec_t p) { mpfr_init2(v, p); }
  ~Tmp() { mpfr_clear(v); }
  Tmp(const Tmp&) = delete;
  Tmp& operator=(const Tmp&) = delete;
};

mpfr_prec_t max_prec(const RealBall& a, const RealBall& b) { return std::max(a.prec(), b.prec()); }

std::string mpfr_hex(mpfr_srcptr x) {
  char* s = nullptr;
  mpfr_asprintf(&s, "%Ra", x);
  std::string out(s);
  mpfr_free_str(s);
  return out;
}

}  // namespace

Rational make_rational(const Integer& num, const Integer& den) {
  if (den == 0) throw std::domain_error("rational with zero denominator");
  Rational r(num, den);
  r.canonicalize();
  return r;
}

Rational parse_decimal(std::string_view text) {
  std::size_t i = 0;
  bool neg = false;
  if (i < text.size() && (text[i] == '-' || text[i] == '+')) neg = text[i++] == '-';
  std::string digits;
  long frac_digits = 0;
  bool seen_point = false;
  for (; i < text.size(); ++i) {
    char c = text[i];
    if (std::isdigit(static_cast<unsigned char>(c))) {
      digits += c;
      if (seen_point) ++frac_digits;
    } else if (c == '.' && !seen_point) {
      seen_point = true;
    } else {
      break;
    }
  }
  long exponent = 0;
  if (i < text.size() && (text[i] == 'e' || text[i] == 'E')) {
    ++i;
    std::string e(text.substr(i));
    if (e.empty()) throw std::invalid_argument("bad decimal: " + std::string(text));
    std::size_t used = 0;
    exponent = std::stol(e, &used);
    i += used;
  }
  if (digits.empty() || i != text.size()) throw std::invalid_argument("bad decimal: " + std::string(text));
  Integer mant(digits, 10);
  long shift = exponent - frac_digits;
  Integer ten_pow;
  mpz_ui_pow_ui(ten_pow.get_mpz_t(), 10, static_cast<unsigned long>(shift < 0 ? -shift : shift));
  Rational r = shift >= 0 ? Rational(mant * ten_pow) : make_rational(mant, ten_pow);
  return neg ? Rational(-r) : r;
}

std::string to_decimal(const Integer& x) { return x.get_str(10); }

const char* to_string(Comparison c) {
  switch (c) {
    case Comparison::ProvenGreater: return "ProvenGreater";
    case Comparison::ProvenLess: return "ProvenLess";
    case Comparison::Unknown: return "Unknown";
  }
  return "Unknown";
}

RealBall::RealBall(mpfr_prec_t prec) {
  mpfr_init2(lo_, prec);
  mpfr_init2(hi_, prec);
  mpfr_set_zero(lo_, 1);
  mpfr_set_zero(hi_, 1);
}

RealBall::RealBall(long v, mpfr_prec_t prec) : RealBall(prec) {
  mpfr_set_si(lo_, v, MPFR_RNDD);
  mpfr_set_si(hi_, v, MPFR_RNDU);
}

RealBall::RealBall(const Integer& v, mpfr_prec_t prec) : RealBall(prec) {
  mpfr_set_z(lo_, v.get_mpz_t(), MPFR_RNDD);
  mpfr_set_z(hi_, v.get_mpz_t(), MPFR_RNDU);
}

RealBall::RealBall(const Rational& v, mpfr_prec_t prec) : RealBall(prec) {
  mpfr_set_q(lo_, v.get_mpq_t(), MPFR_RNDD);
  mpfr_set_q(hi_, v.get_mpq_t(), MPFR_RNDU);
}

RealBall::RealBall(const RealBall& other) {
  mpfr_init2(lo_, other.prec());
  mpfr_init2(hi_, other.prec());
  mpfr_set(lo_, other.lo_, MPFR_RNDD);
  mpfr_set(hi_, other.hi_, MPFR_RNDU);
}

RealBall::RealBall(RealBall&& other) noexcept : RealBall(other.prec()) { swap(other); }

RealBall& RealBall::operator=(const RealBall& other) {
  if (this != &other) {
    mpfr_set_prec(lo_, other.prec());
    mpfr_set_prec(hi_, other.prec());
    mpfr_set(lo_, other.lo_, MPFR_RNDD);
    mpfr_set(hi_, other.hi_, MPFR_RNDU);
  }
  return *this;
}

RealBall& RealBall::operator=(RealBall&& other) noexcept {
  swap(other);
  return *this;
}

RealBall::~RealBall() {
  mpfr_clear(lo_);
  mpfr_clear(hi_);
}

void RealBall::swap(RealBall& other) noexcept {
  mpfr_swap(lo_, other.lo_);
  mpfr_swap(hi_, other.hi_);
}

RealBall RealBall::from_mid_rad(const Rational& mid, const Rational& rad, mpfr_prec_t prec) {
  if (rad < 0) throw std::domain_error("negative radius");
  RealBall b(prec);
  Rational lo = mid - rad, hi = mid + rad;
  mpfr_set_q(b.lo_, lo.get_mpq_t(), MPFR_RNDD);
  mpfr_set_q(b.hi_, hi.get_mpq_t(), MPFR_RNDU);
  return b;
}

RealBall RealBall::from_endpoints(const std::string& lo, const std::string& hi, mpfr_prec_t prec) {
  RealBall b(prec);
  if (mpfr_set_str(b.lo_, lo.c_str(), 0, MPFR_RNDD) != 0 || mpfr_set_str(b.hi_, hi.c_str(), 0, MPFR_RNDU) != 0)
    throw std::invalid_argument("bad interval endpoints: " + lo + ", " + hi);
  if (mpfr_cmp(b.lo_, b.hi_) > 0) throw std::invalid_argument("interval endpoints out of order");
  return b;
}

RealBall RealBall::hull(const RealBall& a, const RealBall& b) {
  RealBall r(max_prec(a, b));
  mpfr_min(r.lo_, a.lo_, b.lo_, MPFR_RNDD);
  mpfr_max(r.hi_, a.hi_, b.hi_, MPFR_RNDU);
  return r;
}

double RealBall::mid() const {
  Tmp t(prec() + 1);
  mpfr_add(t.v, lo_, hi_, MPFR_RNDN);
  mpfr_div_2ui(t.v, t.v, 1, MPFR_RNDN);
  return mpfr_get_d(t.v, MPFR_RNDN);
}

double RealBall::rad() const {
  Tmp t(prec());
  mpfr_sub(t.v, hi_, lo_, MPFR_RNDU);
  mpfr_div_2ui(t.v, t.v, 1, MPFR_RNDU);
  return mpfr_get_d(t.v, MPFR_RNDU);
}

std::string RealBall::mid_string(int digits) const {
  Tmp t(prec() + 1);
  mpfr_add(t.v, lo_, hi_, MPFR_RNDN);
  mpfr_div_2ui(t.v, t.v, 1, MPFR_RNDN);
  char* s = nullptr;
  mpfr_asprintf(&s, "%.*Rg", digits, t.v);
  std::string out(s);
  mpfr_free_str(s);
  return out;
}

std::string RealBall::to_string(int digits) const {
  std::ostringstream os;
  os << mid_string(digits) << " +/- " << rad();
  return os.str();
}

std::string RealBall::lower_hex() const { return mpfr_hex(lo_); }
std::string RealBall::upper_hex() const { return mpfr_hex(hi_); }

bool RealBall::contains(const Rational& x) const {
  return mpfr_cmp_q(lo_, x.get_mpq_t()) <= 0 && mpfr_cmp_q(hi_, x.get_mpq_t()) >= 0;
}

bool RealBall::contains(const RealBall& inner) const {
  return mpfr_cmp(lo_, inner.lo_) <= 0 && mpfr_cmp(hi_, inner.hi_) >= 0;
}

bool RealBall::overlaps(const RealBall& other) const {
  return mpfr_cmp(lo_, other.hi_) <= 0 && mpfr_cmp(other.lo_, hi_) <= 0;
}

bool RealBall::no_wider_than(const RealBall& other) const {
  mpfr_prec_t p = std::max(prec(), other.prec()) + 64;
  Tmp w1(p), w2(p);
  mpfr_sub(w1.v, hi_, lo_, MPFR_RNDU);
  mpfr_sub(w2.v, other.hi_, other.lo_, MPFR_RNDD);
  return mpfr_cmp(w1.v, w2.v) <= 0;
}

bool RealBall::operator==(const RealBall& other) const {
  return prec() == other.prec() && mpfr_equal_p(lo_, other.lo_) && mpfr_equal_p(hi_, other.hi_);
}

void add(RealBall& out, const RealBall& a, const RealBall& b) {
  mpfr_add(out.lower_mut(), a.lower(), b.lower(), MPFR_RNDD);
  mpfr_add(out.upper_mut(), a.upper(), b.upper(), MPFR_RNDU);
}

void sub(RealBall& out, const RealBall& a, const RealBall& b) {
  Tmp lo(out.prec());
  mpfr_sub(lo.v, a.lower(), b.upper(), MPFR_RNDD);
  mpfr_sub(out.upper_mut(), a.upper(), b.lower(), MPFR_RNDU);
  mpfr_set(out.lower_mut(), lo.v, MPFR_RNDD);
}

void mul(RealBall& out, const RealBall& a, const RealBall& b) {
  mpfr_prec_t p = out.prec();
  Tmp lo(p), hi(p), t(p);
  mpfr_srcptr ea[2] = {a.lower(), a.upper()};
  mpfr_srcptr eb[2] = {b.lower(), b.upper()};
  bool first = true;
  for (auto x : ea) {
    for (auto y : eb) {
      mpfr_mul(t.v, x, y, MPFR_RNDD);
      if (first || mpfr_cmp(t.v, lo.v) < 0) mpfr_set(lo.v, t.v, MPFR_RNDD);
      mpfr_mul(t.v, x, y, MPFR_RNDU);
      if (first || mpfr_cmp(t.v, hi.v) > 0) mpfr_set(hi.v, t.v, MPFR_RNDU);
      first = false;
    }
  }
  mpfr_set(out.lower_mut(), lo.v, MPFR_RNDD);
  mpfr_set(out.upper_mut(), hi.v, MPFR_RNDU);
}

void div(RealBall& out, const RealBall& a, const RealBall& b) {
  if (mpfr_sgn(b.lower()) <= 0 && mpfr_sgn(b.upper()) >= 0)
    throw std::domain_error("division by a ball containing zero");
  mpfr_prec_t p = out.prec();
  Tmp lo(p), hi(p), t(p);
  mpfr_srcptr ea[2] = {a.lower(), a.upper()};
  mpfr_srcptr eb[2] = {b.lower(), b.upper()};
  bool first = true;
  for (auto x : ea) {
    for (auto y : eb) {
      mpfr_div(t.v, x, y, MPFR_RNDD);
      if (first || mpfr_cmp(t.v, lo.v) < 0) mpfr_set(lo.v, t.v, MPFR_RNDD);
      mpfr_div(t.v, x, y, MPFR_RNDU);
      if (first || mpfr_cmp(t.v, hi.v) > 0) mpfr_set(hi.v, t.v, MPFR_RNDU);
      first = false;
    }
  }
  mpfr_set(out.lower_mut(), lo.v, MPFR_RNDD);
  mpfr_set(out.upper_mut(), hi.v, MPFR_RNDU);
}

void mul_z(RealBall& out, const RealBall& a, const Integer& z) {
  if (sgn(z) >= 0) {
    mpfr_mul_z(out.lower_mut(), a.lower(), z.get_mpz_t(), MPFR_RNDD);
    mpfr_mul_z(out.upper_mut(), a.upper(), z.get_mpz_t(), MPFR_RNDU);
  } else {
    Tmp lo(out.prec());
    mpfr_mul_z(lo.v, a.upper(), z.get_mpz_t(), MPFR_RNDD);
    mpfr_mul_z(out.upper_mut(), a.lower(), z.get_mpz_t(), MPFR_RNDU);
    mpfr_set(out.lower_mut(), lo.v, MPFR_RNDD);
  }
}

RealBall operator+(const RealBall& a, const RealBall& b) {
  RealBall r(max_prec(a, b));
  add(r, a, b);
  return r;
}

RealBall operator-(const RealBall& a, const RealBall& b) {
  RealBall r(max_prec(a, b));
  sub(r, a, b);
  return r;
}

RealBall operator*(const RealBall& a, const RealBall& b) {
  RealBall r(max_prec(a, b));
  mul(r, a, b);
  return r;
}

RealBall operator/(const RealBall& a, const RealBall& b) {
  RealBall r(max_prec(a, b));
  div(r, a, b);
  return r;
}

RealBall operator-(const RealBall& a) {
  RealBall r(a.prec());
  mpfr_neg(r.lower_mut(), a.upper(), MPFR_RNDD);
  mpfr_neg(r.upper_mut(), a.lower(), MPFR_RNDU);
  return r;
}

RealBall operator*(const RealBall& a, const Integer& z) {
  RealBall r(a.prec());
  mul_z(r, a, z);
  return r;
}

RealBall abs(const RealBall& x) {
  if (mpfr_sgn(x.lower()) >= 0) return x;
  if (mpfr_sgn(x.upper()) <= 0) return -x;
  RealBall r(x.prec());
  mpfr_set_zero(r.lower_mut(), 1);
  Tmp n(x.prec());
  mpfr_neg(n.v, x.lower(), MPFR_RNDU);
  mpfr_max(r.upper_mut(), n.v, x.upper(), MPFR_RNDU);
  return r;
}

RealBall log(const RealBall& x) {
  if (mpfr_sgn(x.lower()) <= 0) throw std::domain_error("log of a ball not certified positive");
  RealBall r(x.prec());
  mpfr_log(r.lower_mut(), x.lower(), MPFR_RNDD);
  mpfr_log(r.upper_mut(), x.upper(), MPFR_RNDU);
  return r;
}

RealBall exp(const RealBall& x) {
  RealBall r(x.prec());
  mpfr_exp(r.lower_mut(), x.lower(), MPFR_RNDD);
  mpfr_exp(r.upper_mut(), x.upper(), MPFR_RNDU);
  return r;
}

RealBall sqrt(const RealBall& x) {
  if (mpfr_sgn(x.lower()) < 0) throw std::domain_error("sqrt of a ball with negative points");
  RealBall r(x.prec());
  mpfr_sqrt(r.lower_mut(), x.lower(), MPFR_RNDD);
  mpfr_sqrt(r.upper_mut(), x.upper(), MPFR_RNDU);
  return r;
}

RealBall pow_int(const RealBall& x, long n) {
  RealBall result(1L, x.prec());
  RealBall base = x;
  bool invert = n < 0;
  unsigned long e = invert ? static_cast<unsigned long>(-n) : static_cast<unsigned long>(n);
  while (e) {
    if (e & 1) mul(result, result, base);
    e >>= 1;
    if (e) mul(base, base, base);
  }
  if (invert) return RealBall(1L, x.prec()) / result;
  return result;
}

RealBall real_log(const Rational& x, mpfr_prec_t prec) {
  if (x <= 0) throw std::domain_error("log of a non-positive rational");
  RealBall wide(x, prec + 16);
  RealBall l = log(wide);
  RealBall r(prec);
  mpfr_set(r.lower_mut(), l.lower(), MPFR_RNDD);
  mpfr_set(r.upper_mut(), l.upper(), MPFR_RNDU);
  return r;
}

RealBall const_log2(mpfr_prec_t prec) {
  RealBall r(prec);
  mpfr_const_log2(r.lower_mut(), MPFR_RNDD);
  mpfr_const_log2(r.upper_mut(), MPFR_RNDU);
  return r;
}

RealBall const_sqrt5(mpfr_prec_t prec) { return sqrt(RealBall(5L, prec)); }

std::optional<RealBall> frac(const RealBall& x) {
  auto n = certified_floor(x);
  if (!n) return std::nullopt;
  RealBall r(x.prec());
  mpfr_sub_z(r.lower_mut(), x.lower(), n->get_mpz_t(), MPFR_RNDD);
  mpfr_sub_z(r.upper_mut(), x.upper(), n->get_mpz_t(), MPFR_RNDU);
  if (mpfr_sgn(r.lower()) < 0) mpfr_set_zero(r.lower_mut(), 1);
  return r;
}

std::optional<RealBall> nearest_int_distance(const RealBall& x) {
  if (!x.is_finite()) return std::nullopt;
  mpfr_prec_t p = x.prec();
  Tmp mid(p + 1);
  mpfr_add(mid.v, x.lower(), x.upper(), MPFR_RNDN);
  mpfr_div_2ui(mid.v, mid.v, 1, MPFR_RNDN);
  Integer n;
  mpfr_get_z(n.get_mpz_t(), mid.v, MPFR_RNDN);
  // Need n - 1/2 <= lo and hi <= n + 1/2.
  Tmp dlo(p + 8), dhi(p + 8);
  mpfr_sub_z(dlo.v, x.lower(), n.get_mpz_t(), MPFR_RNDD);
  mpfr_sub_z(dhi.v, x.upper(), n.get_mpz_t(), MPFR_RNDU);
  if (mpfr_cmp_d(dlo.v, -0.5) < 0 || mpfr_cmp_d(dhi.v, 0.5) > 0) return std::nullopt;
  RealBall r(p);
  if (mpfr_sgn(dlo.v) >= 0) {
    mpfr_set(r.lower_mut(), dlo.v, MPFR_RNDD);
    mpfr_set(r.upper_mut(), dhi.v, MPFR_RNDU);
  } else if (mpfr_sgn(dhi.v) <= 0) {
    mpfr_neg(r.lower_mut(), dhi.v, MPFR_RNDD);
    mpfr_neg(r.upper_mut(), dlo.v, MPFR_RNDU);
  } else {
    mpfr_set_zero(r.lower_mut(), 1);
    mpfr_neg(dlo.v, dlo.v, MPFR_RNDU);
    mpfr_max(r.upper_mut(), dlo.v, dhi.v, MPFR_RNDU);
  }
  return r;
}

Comparison certify_compare(const RealBall& x, const Rational& y) {
  if (mpfr_cmp_q(x.lower(), y.get_mpq_t()) > 0) return Comparison::ProvenGreater;
  if (mpfr_cmp_q(x.upper(), y.get_mpq_t()) < 0) return Comparison::ProvenLess;
  return Comparison::Unknown;
}

Comparison certify_compare(const RealBall& x, const RealBall& y) {
  if (mpfr_cmp(x.lower(), y.upper()) > 0) return Comparison::ProvenGreater;
  if (mpfr_cmp(x.upper(), y.lower()) < 0) return Comparison::ProvenLess;
  return Comparison::Unknown;
}

bool proven_le(const RealBall& x, const Rational& y) { return mpfr_cmp_q(x.upper(), y.get_mpq_t()) <= 0; }
bool proven_le(const RealBall& x, const RealBall& y) { return mpfr_cmp(x.upper(), y.lower()) <= 0; }

std::optional<Integer> certified_floor(const RealBall& x) {
  if (!x.is_finite()) return std::nullopt;
  Integer a, b;
  mpfr_get_z(a.get_mpz_t(), x.lower(), MPFR_RNDD);
  mpfr_get_z(b.get_mpz_t(), x.upper(), MPFR_RNDD);
  if (a != b) return std::nullopt;
  return a;
}

Integer floor_of_upper(const RealBall& x) {
  Integer a;
  mpfr_get_z(a.get_mpz_t(), x.upper(), MPFR_RNDD);
  return a;
}

Integer ceil_of_lower(const RealBall& x) {
  Integer a;
  mpfr_get_z(a.get_mpz_t(), x.lower(), MPFR_RNDU);
  return a;
}

}  // namespace fibpow
