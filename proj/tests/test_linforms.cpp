#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "fibpow/golden.hpp"
#include "fibpow/linforms.hpp"

#include <cmath>
#include <random>

using namespace fibpow;

namespace {

RealBall ball(const char* decimal, mpfr_prec_t p = 256) { return RealBall(parse_decimal(decimal), p); }
RealBall log_alpha(mpfr_prec_t p = 256) { return log(embed(qr_alpha(), p)); }

Integer factorial(int n) {
  Integer f = 1;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

const ChainEntry* find_entry(const ChainReport& r, const std::string& step, int power) {
  for (const auto& e : r.entries)
    if (e.step == step && e.power == power) return &e;
  return nullptr;
}

}  // namespace

TEST_CASE("Baker-Wuestholz constants") {
  const RealBall c32 = bw_constant(3, 2);
  CHECK(proven_gt(c32, parse_decimal("9.33e13")));
  CHECK(proven_lt(c32, parse_decimal("9.34e13")));
  // The integral factor is 18 (k+1)! k^(k+1) (32 d)^(k+2).
  Integer sixty_four_5;
  mpz_ui_pow_ui(sixty_four_5.get_mpz_t(), 64, 5);
  const Integer integral = 18 * factorial(4) * 81 * sixty_four_5;
  CHECK((c32 / real_log(Rational(12), 512)).contains(Rational(integral)));
  const RealBall c11 = bw_constant(1, 1);
  CHECK(c11.mid() == doctest::Approx(18.0 * 2 * 32768 * std::log(2.0)).epsilon(1e-14));
  CHECK_THROWS(bw_constant(0, 1));
}

TEST_CASE("lower bound coefficients") {
  const RealBall half(Rational(1, 2), 256);
  const RealBall h = bw_lower_bound(half, const_log2(256), log(const_sqrt5(256)), 360);
  const RealBall per_log = (h - const_log2(256)) / real_log(Rational(360), 256);
  CHECK(proven_lt(per_log, parse_decimal("2.61e13")));
  const RealBall h2 = bw_lower_bound(half, const_log2(256), log(const_sqrt5(256)) * Integer(2), 360);
  CHECK((h2 - const_log2(256)).overlaps((h - const_log2(256)) * Integer(2)));
  CHECK_THROWS(bw_lower_bound(half, half, half, 2));
}

TEST_CASE("height bounds") {
  const std::map<Gap, long> none;
  const auto s5 = height_bound(HeightExpr::sqrt5(), none, {}, 256);
  CHECK(s5.degree() == 0);
  CHECK(s5.coeff[0].overlaps(log(const_sqrt5(256))));

  // sqrt5 (2^k + 1) with (a1-a2) log 2 < 2.61e13 log n1
  const std::map<Gap, PolyLog> prior{{Gap::TwoExp12, PolyLog::monomial(ball("2.61e13"), 1)}};
  const HeightExpr e = HeightExpr::product(
      {HeightExpr::sqrt5(), HeightExpr::sum({HeightExpr::power(HeightExpr::Kind::Two, Gap::TwoExp12, 1),
                                              HeightExpr::one()})});
  const auto hb = height_bound(e, none, prior, 256);
  CHECK(proven_le(hb.fold(1, real_log(Rational(360), 256)), parse_decimal("2.62e13")));

  // Exact parameters give the exact height as an upper bound.
  const std::map<Gap, long> k3{{Gap::TwoExp12, 3}};
  const QuadRat v = e.exact(k3);
  CHECK(v == QuadRat(9) * qr_sqrt5());
  const auto exact = height_bound(e, k3, {}, 256);
  CHECK(proven_le(height_quadrat(v, 256), exact.coeff[0]));
}

TEST_CASE("modified heights") {
  CHECK(modified_height(qr_alpha(), 256).contains(Rational(1, 2)));
  CHECK(modified_height(qr_sqrt5(), 256).overlaps(log(const_sqrt5(256))));
  CHECK(modified_height(QuadRat(2), 256).overlaps(const_log2(256)));
}

TEST_CASE("bound chains certify every table cell") {
  const Golden g = Golden::load();
  for (int eq : {1, 2}) {
    const ChainReport r = verify_bound_chain(eq);
    CHECK(r.passed());
    REQUIRE(r.table.size() == 9);
    for (const auto& e : r.entries) CHECK_MESSAGE(e.verdict == Verdict::Certified, e.step << " " << e.quantity);
    const auto& rows = reduce_rows(eq);
    for (int i = 0; i < 3; ++i)
      for (int c = 0; c < 3; ++c) {
        const TableCell& cell = r.table[3 * i + c];
        CHECK(cell.claimed == g.decimal("eq" + std::to_string(eq) + ".chain." + rows[i], c));
        REQUIRE(cell.entry < r.entries.size());
        CHECK(proven_le(r.entries[cell.entry].computed, cell.claimed));
      }
    CHECK(Rational(r.threshold) <= g.decimal("eq" + std::to_string(eq) + ".chain.final"));
  }
}

TEST_CASE("chain examples") {
  const ChainReport r1 = verify_bound_chain(1);
  const ChainEntry* s1 = find_entry(r1, "S1", 1);
  REQUIRE(s1);
  CHECK(proven_le(s1->computed, parse_decimal("2.61e13")));
  const ChainEntry* s7 = find_entry(r1, "S7", 4);
  REQUIRE(s7);
  CHECK(proven_le(s7->computed, parse_decimal("4.54e53")));
  CHECK(Rational(r1.threshold) <= parse_decimal("4.1e62"));

  const ChainReport r2 = verify_bound_chain(2);
  const ChainEntry* s3 = find_entry(r2, "S3", 3);
  REQUIRE(s3);
  CHECK(proven_le(s3->computed, parse_decimal("6.94e39")));
  CHECK(Rational(r2.threshold) <= parse_decimal("4.2e62"));
}

TEST_CASE("polylog threshold") {
  const RealBall la = log_alpha();
  const Integer n = solve_polylog_threshold(ball("4.54e53"), 4, la);
  CHECK(Rational(n) <= parse_decimal("4.1e62"));
  CHECK(Rational(n) >= parse_decimal("4.0e62"));
  const Integer small = solve_polylog_threshold(RealBall(1L, 256), 1, RealBall(1L, 256));
  CHECK(small <= 2);
  CHECK_THROWS(solve_polylog_threshold(RealBall(1L, 256), 0, RealBall(1L, 256)));

  // N - 1 violates n d >= c (log n)^p while N and 2N satisfy it.
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> mant(1.0, 9.9);
  std::uniform_int_distribution<int> ex(2, 40), pw(1, 4);
  for (int i = 0; i < 40; ++i) {
    const RealBall c(parse_decimal(std::to_string(mant(rng)).substr(0, 4) + "e" + std::to_string(ex(rng))), 512);
    const int p = pw(rng);
    const Integer N = solve_polylog_threshold(c, p, la);
    auto holds = [&](const Integer& m) {
      if (m < 1) return false;
      const RealBall lhs = RealBall(m, 512) * log_alpha(512);
      return proven_le(c * pow_int(log(RealBall(m, 512)), p), lhs);
    };
    CHECK(holds(N));
    CHECK(holds(2 * N));
    CHECK_FALSE(holds(N - 1));
  }
}

TEST_CASE("|x| < 2|e^x - 1| on (-1/2, 1/2)") {
  std::mt19937_64 rng(9);
  std::uniform_int_distribution<long> num(-499999, 499999);
  for (int i = 0; i < 1000; ++i) {
    long k = num(rng);
    if (k == 0) k = 1;
    const RealBall x(Rational(k, 1000000), 256);
    const RealBall rhs = abs(exp(x) - RealBall(1L, 256)) * Integer(2);
    CHECK(certify_compare(rhs, abs(x)) == Comparison::ProvenGreater);
  }
}

TEST_CASE("linear forms at solutions") {
  const auto forms = linear_forms(1);
  const LinearFormSpec& case0 = forms.front();
  REQUIRE(case0.step == "S1");
  const SolutionRecord first{1, {3, 2, 0, 0, 0}, 3};
  const RealBall lam = eval_linear_form(case0, first, 256);
  CHECK(lam.mid() == doctest::Approx(3 * std::log((1 + std::sqrt(5.0)) / 2) - 0.5 * std::log(5.0)).epsilon(1e-14));
  CHECK(lam.mid() == doctest::Approx(0.63888).epsilon(1e-4));
  const RealBall phi = abs(exp(lam) - RealBall(1L, 256));
  CHECK(proven_lt(phi - eval_rhs(case0, first, 256), Rational(0)));
  const SolutionRecord last{1, {18, 6, 11, 9, 5}, 2592};
  const long double la = std::log((1 + std::sqrt(5.0L)) / 2);
  CHECK(eval_linear_form(case0, last, 256).mid() ==
        doctest::Approx(static_cast<double>(18 * la - 11 * std::log(2.0L) - std::log(5.0L) / 2)).epsilon(1e-14));

  // Each inequality holds on every solution once all Fibonacci indices are
  // positive; with an index 0 the bound on the beta terms no longer applies.
  for (int eq : {1, 2}) {
    const SolutionSet sols = eq == 1 ? enumerate_eq1() : enumerate_eq2();
    for (const auto& f : linear_forms(eq))
      for (const auto& s : sols.solutions) {
        bool positive = true;
        for (int p : fib_positions(eq)) positive = positive && s.idx[p] > 0;
        if (!positive) continue;
        const RealBall lhs = abs(exp(eval_linear_form(f, s, 256)) - RealBall(1L, 256));
        CHECK_MESSAGE(certify_compare(eval_rhs(f, s, 256), lhs) == Comparison::ProvenGreater,
                      f.step << " " << s.to_string());
      }
  }
}
