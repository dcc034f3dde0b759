#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "fibpow/bigmath.hpp"

#include <cmath>
#include <functional>
#include <optional>
#include <random>

using namespace fibpow;

namespace {

Rational pow2(int e) {
  Integer z;
  mpz_ui_pow_ui(z.get_mpz_t(), 2, e);
  return Rational(z);
}

// ln 2 = sum 1/(k 2^k); the tail after N terms is below 1/((N+1) 2^N).
std::pair<Rational, Rational> ln2_oracle(int n) {
  Rational s = 0;
  for (int k = 1; k <= n; ++k) s += Rational(1) / (Rational(k) * pow2(k));
  Rational tail = Rational(1) / (Rational(n + 1) * pow2(n));
  return {s, s + tail};
}

// ln 5 = 2 atanh(2/3) = 2 sum (2/3)^(2k+1)/(2k+1); tail below 2 (2/3)^(2N+3)/(1-4/9).
std::pair<Rational, Rational> ln5_oracle(int n) {
  Rational s = 0, x = Rational(2, 3), p = x;
  for (int k = 0; k <= n; ++k) {
    s += 2 * p / (2 * k + 1);
    p *= x * x;
  }
  Rational tail = 2 * p / (Rational(1) - x * x);
  return {s, s + tail};
}

bool inside(const RealBall& b, const std::pair<Rational, Rational>& lohi) {
  return mpfr_cmp_q(b.lower(), lohi.first.get_mpq_t()) >= 0 && mpfr_cmp_q(b.upper(), lohi.second.get_mpq_t()) <= 0;
}

struct Expr {
  std::function<RealBall(mpfr_prec_t)> eval;
  std::optional<Rational> exact;  // when the expression is purely rational
};

Rational random_rational(std::mt19937_64& rng) {
  std::uniform_int_distribution<long> num(-1000000, 1000000), den(1, 100000);
  return Rational(num(rng), den(rng));
}

Expr random_expr(std::mt19937_64& rng, int depth) {
  std::uniform_int_distribution<int> pick(0, depth == 0 ? 0 : 7);
  const int op = pick(rng);
  if (op == 0) {
    Rational q = random_rational(rng);
    q.canonicalize();
    return {[q](mpfr_prec_t p) { return RealBall(q, p); }, q};
  }
  Expr a = random_expr(rng, depth - 1);
  Expr b = random_expr(rng, depth - 1);
  auto both = [&](auto f, std::optional<Rational> ex) {
    return Expr{[ea = a.eval, eb = b.eval, f](mpfr_prec_t p) { return f(ea(p), eb(p)); }, ex};
  };
  auto ex2 = [&](auto f) -> std::optional<Rational> {
    if (a.exact && b.exact) return f(*a.exact, *b.exact);
    return std::nullopt;
  };
  switch (op) {
    case 1: return both([](auto x, auto y) { return x + y; }, ex2([](auto x, auto y) { return Rational(x + y); }));
    case 2: return both([](auto x, auto y) { return x - y; }, ex2([](auto x, auto y) { return Rational(x - y); }));
    case 3: return both([](auto x, auto y) { return x * y; }, ex2([](auto x, auto y) { return Rational(x * y); }));
    case 4: {
      // x / (1 + y^2) keeps the divisor away from zero
      std::optional<Rational> ex;
      if (a.exact && b.exact) ex = *a.exact / (1 + *b.exact * *b.exact);
      return both([](auto x, auto y) { return x / (RealBall(1L, x.prec()) + y * y); }, ex);
    }
    case 5: return Expr{[ea = a.eval](mpfr_prec_t p) { auto x = ea(p); return log(RealBall(1L, p) + x * x); }, {}};
    case 6:
      return Expr{[ea = a.eval](mpfr_prec_t p) {
                    auto x = ea(p);
                    return exp(x / (RealBall(1L, p) + abs(x)));
                  },
                  {}};
    default: return Expr{[ea = a.eval](mpfr_prec_t p) { return sqrt(abs(ea(p))); }, {}};
  }
}

}  // namespace

TEST_CASE("decimal literals are exact") {
  CHECK(parse_decimal("4.1e62") == Rational(Integer("41") * Integer("1" + std::string(61, '0'))));
  CHECK(parse_decimal("-0.24") == Rational(-6, 25));
  CHECK(parse_decimal("2.61e13") == Rational(Integer("26100000000000")));
  CHECK_THROWS(parse_decimal("1.2.3"));
  CHECK_THROWS_AS(make_rational(1, 0), std::domain_error);
  CHECK(make_rational(6, -4) == Rational(-3, 2));
}

TEST_CASE("logarithm examples against series oracles") {
  const RealBall l1 = real_log(Rational(1), 512);
  CHECK(l1.contains(Rational(0)));
  CHECK(l1.rad() <= std::ldexp(1.0, -512));

  const RealBall l2 = real_log(Rational(2), 512);
  CHECK(inside(l2, ln2_oracle(400)));
  CHECK(inside(const_log2(512), ln2_oracle(400)));

  // ln sqrt5 = ln5 / 2
  auto [lo5, hi5] = ln5_oracle(400);
  const RealBall ls5 = log(const_sqrt5(512));
  CHECK(inside(ls5, {lo5 / 2, hi5 / 2}));
  CHECK(ls5.mid() == doctest::Approx(0.804718956217050).epsilon(1e-14));
}

TEST_CASE("nearest integer distance") {
  auto d = nearest_int_distance(RealBall(Rational(1, 2), 256));
  REQUIRE(d);
  CHECK(d->contains(Rational(1, 2)));
  d = nearest_int_distance(RealBall(Rational(16, 5), 256));
  REQUIRE(d);
  CHECK(d->contains(Rational(1, 5)));
  d = nearest_int_distance(RealBall(Rational(-17, 10), 256));
  REQUIRE(d);
  CHECK(d->contains(Rational(3, 10)));

  std::mt19937_64 rng(7);
  std::uniform_int_distribution<long> shift(-1000000000L, 1000000000L);
  for (int i = 0; i < 500; ++i) {
    const Rational x = random_rational(rng);
    const long k = shift(rng);
    auto a = nearest_int_distance(RealBall(x, 256));
    auto b = nearest_int_distance(RealBall(x + k, 256));
    REQUIRE(a);
    REQUIRE(b);
    CHECK(a->overlaps(*b));
    CHECK(std::abs(a->mid() - b->mid()) < 1e-12);
  }
}

TEST_CASE("certified comparison examples") {
  CHECK(certify_compare(RealBall::from_mid_rad(1, Rational(1, 10), 128), Rational(0)) == Comparison::ProvenGreater);
  CHECK(certify_compare(RealBall::from_mid_rad(Rational(1, 20), Rational(1, 10), 128), Rational(0)) ==
        Comparison::Unknown);
  const Rational tiny = Rational(1) / Rational(Integer("1" + std::string(30, '0')));
  CHECK(certify_compare(RealBall::from_mid_rad(Rational(2401, 10000), tiny, 256), Rational(24, 100)) ==
        Comparison::ProvenGreater);
  CHECK(certify_compare(RealBall(Rational(-3), 128), Rational(0)) == Comparison::ProvenLess);
  CHECK(proven_le(RealBall(Rational(1), 128), Rational(1)));
}

TEST_CASE("floors and endpoints") {
  CHECK(certified_floor(RealBall(Rational(7, 2), 128)) == Integer(3));
  CHECK(certified_floor(RealBall(Rational(-7, 2), 128)) == Integer(-4));
  CHECK_FALSE(certified_floor(RealBall::from_mid_rad(3, Rational(1, 100), 128)).has_value());
  const RealBall b = RealBall::from_mid_rad(Rational(5, 2), Rational(1, 4), 128);
  CHECK(floor_of_upper(b) == 2);
  CHECK(ceil_of_lower(b) == 3);
  const RealBall back = RealBall::from_endpoints(b.lower_hex(), b.upper_hex(), b.prec());
  CHECK(back == b);
}

TEST_CASE("containment and monotone precision on random expressions") {
  std::mt19937_64 rng(20240601);
  int with_shadow = 0;
  for (int i = 0; i < 1000; ++i) {
    Expr e = random_expr(rng, 4);
    for (mpfr_prec_t p : {128, 256, 512}) {
      const RealBall lo = e.eval(p);
      const RealBall hi = e.eval(2 * p);
      REQUIRE(lo.is_finite());
      CHECK(lo.overlaps(hi));
      CHECK(hi.no_wider_than(lo));
      if (e.exact) {
        CHECK(lo.contains(*e.exact));
        CHECK(hi.contains(*e.exact));
      }
    }
    if (e.exact) ++with_shadow;
  }
  CHECK(with_shadow > 50);
}

TEST_CASE("precision escalation") {
  int calls = 0;
  const int v = with_escalation(
      128, [&](mpfr_prec_t p) -> std::optional<int> { ++calls; return p >= 512 ? std::optional<int>(7) : std::nullopt; },
      "test");
  CHECK(v == 7);
  CHECK(calls == 3);
  CHECK_THROWS_AS(with_escalation(128, [](mpfr_prec_t) -> std::optional<int> { return std::nullopt; }, "never"),
                  PrecisionExhausted);
}
