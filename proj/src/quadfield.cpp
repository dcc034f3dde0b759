#include "fibpow/quadfield.hpp"

#include <vector>

namespace fibpow {

std::string QuadRat::to_string() const {
  return "(" + a.get_str() + ") + (" + b.get_str() + ")*sqrt5";
}

QuadRat operator+(const QuadRat& x, const QuadRat& y) { return {x.a + y.a, x.b + y.b}; }
QuadRat operator-(const QuadRat& x, const QuadRat& y) { return {x.a - y.a, x.b - y.b}; }
QuadRat operator-(const QuadRat& x) { return {-x.a, -x.b}; }

QuadRat operator*(const QuadRat& x, const QuadRat& y) {
  return {x.a * y.a + 5 * x.b * y.b, x.a * y.b + x.b * y.a};
}

QuadRat operator/(const QuadRat& x, const QuadRat& y) {
  Rational n = norm(y);
  if (n == 0) throw std::domain_error("division by zero in Q(sqrt5)");
  QuadRat t = x * qr_conjugate(y);
  return {t.a / n, t.b / n};
}

QuadRat qr_alpha() { return {Rational(1, 2), Rational(1, 2)}; }
QuadRat qr_beta() { return {Rational(1, 2), Rational(-1, 2)}; }
QuadRat qr_sqrt5() { return {Rational(0), Rational(1)}; }

QuadRat qr_two_pow(long e) {
  Integer p;
  mpz_ui_pow_ui(p.get_mpz_t(), 2, static_cast<unsigned long>(e < 0 ? -e : e));
  return e >= 0 ? QuadRat(Rational(p), Rational(0)) : QuadRat(Rational(Integer(1), p), Rational(0));
}

QuadRat qr_pow(const QuadRat& x, long k) {
  if (k < 0) {
    if (x.is_zero()) throw std::domain_error("negative power of zero");
    return qr_pow(QuadRat(1) / x, -k);
  }
  QuadRat result(1), base = x;
  while (k) {
    if (k & 1) result = result * base;
    k >>= 1;
    if (k) base = base * base;
  }
  return result;
}

QuadRat qr_conjugate(const QuadRat& x) { return {x.a, -x.b}; }

Rational norm(const QuadRat& x) { return x.a * x.a - 5 * x.b * x.b; }

RealBall embed(const QuadRat& x, mpfr_prec_t prec) {
  mpfr_prec_t w = prec + 32;
  RealBall r = RealBall(x.a, w) + RealBall(x.b, w) * const_sqrt5(w);
  RealBall out(prec);
  mpfr_set(out.lower_mut(), r.lower(), MPFR_RNDD);
  mpfr_set(out.upper_mut(), r.upper(), MPFR_RNDU);
  return out;
}

namespace {

RealBall log_max_one(const RealBall& root) {
  RealBall m = abs(root);
  if (mpfr_cmp_ui(m.lower(), 1) < 0) mpfr_set_ui(m.lower_mut(), 1, MPFR_RNDD);
  if (mpfr_cmp_ui(m.upper(), 1) < 0) mpfr_set_ui(m.upper_mut(), 1, MPFR_RNDU);
  return log(m);
}

}  // namespace

RealBall height_quadrat(const QuadRat& x, mpfr_prec_t prec) {
  if (x.is_zero()) throw std::domain_error("height of zero");
  if (x.is_rational()) {
    Integer p = abs(x.a.get_num());
    const Integer& q = x.a.get_den();
    return real_log(Rational(p > q ? p : q), prec);
  }
  // Minimal polynomial X^2 - 2a X + N, scaled to a primitive integer polynomial.
  Rational c1 = -2 * x.a, c0 = norm(x);
  Integer l;
  mpz_lcm(l.get_mpz_t(), c1.get_den().get_mpz_t(), c0.get_den().get_mpz_t());
  Integer p2 = l, p1 = Integer(c1 * l), p0 = Integer(c0 * l);
  Integer g;
  mpz_gcd(g.get_mpz_t(), p2.get_mpz_t(), p1.get_mpz_t());
  mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), p0.get_mpz_t());
  p2 /= g;
  mpfr_prec_t w = prec + 32;
  RealBall h = real_log(Rational(p2), w) + log_max_one(embed(x, w)) + log_max_one(embed(qr_conjugate(x), w));
  h = h / RealBall(2L, w);
  RealBall out(prec);
  mpfr_set(out.lower_mut(), h.lower(), MPFR_RNDD);
  mpfr_set(out.upper_mut(), h.upper(), MPFR_RNDU);
  return out;
}

namespace {

const std::vector<Integer>& fib_table() {
  static const std::vector<Integer> table = [] {
    std::vector<Integer> t(kFibTableSize);
    t[0] = 0;
    t[1] = 1;
    for (int i = 2; i < kFibTableSize; ++i) t[i] = t[i - 1] + t[i - 2];
    return t;
  }();
  return table;
}

}  // namespace

const Integer& fibonacci(int k) {
  if (k < 0 || k >= kFibTableSize) throw std::out_of_range("fibonacci index outside table: " + std::to_string(k));
  return fib_table()[k];
}

Integer fibonacci_big(long k) {
  if (k < 0) throw std::out_of_range("negative fibonacci index");
  if (k < kFibTableSize) return fib_table()[k];
  Integer r;
  mpz_fib_ui(r.get_mpz_t(), static_cast<unsigned long>(k));
  return r;
}

QuadRat relation_value(const Relation& rel) {
  QuadRat v = qr_two_pow(rel.e) * qr_pow(qr_alpha(), rel.s);
  return rel.sign < 0 ? -v : v;
}

std::optional<Relation> decompose_two_alpha(const QuadRat& x) {
  if (x.is_zero()) throw std::domain_error("decompose_two_alpha of zero");
  Rational n = abs(norm(x));
  // |N(x)| = 4^e, e possibly negative.
  long e = 0;
  bool found = false;
  for (long k = -kRelationMaxTwoExp; k <= kRelationMaxTwoExp; ++k) {
    Integer p;
    mpz_ui_pow_ui(p.get_mpz_t(), 4, static_cast<unsigned long>(k < 0 ? -k : k));
    Rational target = k >= 0 ? Rational(p) : Rational(Integer(1), p);
    if (n == target) {
      e = k;
      found = true;
      break;
    }
  }
  if (!found) return std::nullopt;
  QuadRat y = x * qr_two_pow(-e);
  // y is a unit of norm +-1; strip alpha factors in both directions.
  const QuadRat alpha = qr_alpha(), alpha_inv = alpha - QuadRat(1);
  QuadRat up = y, down = y;
  for (long i = 0; i <= kRelationMaxAlphaExp; ++i) {
    // up = y * alpha^-i, down = y * alpha^i
    if (up.is_rational() && (up.a == 1 || up.a == -1)) return Relation{up.a > 0 ? 1 : -1, e, i};
    if (down.is_rational() && (down.a == 1 || down.a == -1)) return Relation{down.a > 0 ? 1 : -1, e, -i};
    up = up * alpha_inv;
    down = down * alpha;
  }
  return std::nullopt;
}

}  // namespace fibpow
