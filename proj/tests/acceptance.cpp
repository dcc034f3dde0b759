// One line per acceptance criterion; exit status is nonzero when any fails.
#include "fibpow/commands.hpp"
#include "fibpow/linforms.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cstdint>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>

using namespace fibpow;

namespace {

// Pinned tolerances. Everything else is compared exactly.
const Rational kC32Lower = parse_decimal("9.33e13");
const Rational kC32Upper = parse_decimal("9.34e13");
const Rational kEpsLower = parse_decimal("0.24");
constexpr double kEnumerationSeconds = 60;
constexpr double kSpotCheckSeconds = 60;
constexpr int kSpotCheckSample = 10000;

struct Outcome {
  bool pass = true;
  std::ostringstream why;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      why << (why.tellp() > 0 ? "; " : "") << what;
    }
  }
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string str(const Integer& z) { return z.get_str(); }

std::string join(const std::vector<Integer>& v) {
  std::string s;
  for (const auto& x : v) s += (s.empty() ? "" : ",") + x.get_str();
  return s;
}

Outcome enumeration(const Golden& g) {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  const SolutionSet s1 = enumerate_eq1(), s2 = enumerate_eq2();
  const double t = seconds_since(t0);
  o.require(s1.count_total == 78 && s1.count_total == g.integer("eq1.count_total"),
            "eq1 count " + std::to_string(s1.count_total));
  o.require(s2.count_total == 116 && s2.count_total == g.integer("eq2.count_total"),
            "eq2 count " + std::to_string(s2.count_total));
  o.require(s1.max_leading_index() == 18, "max n1 " + std::to_string(s1.max_leading_index()));
  o.require(s2.max_leading_index() == 16, "max m1 " + std::to_string(s2.max_leading_index()));
  for (const SolutionSet* s : {&s1, &s2}) {
    std::set<SolutionRecord> canonical;
    for (const auto& r : s->solutions)
      if (r.canonical()) canonical.insert(r);
    for (const auto& r : g.solutions(s->equation))
      o.require(canonical.count(r) == 1, "missing " + r.to_string());
  }
  o.require(std::count(s1.solutions.begin(), s1.solutions.end(), SolutionRecord{1, {18, 6, 11, 9, 5}, 2592}) == 1,
            "missing 2592");
  o.require(std::count(s2.solutions.begin(), s2.solutions.end(), SolutionRecord{2, {16, 12, 8, 10, 7}, 1152}) == 1,
            "missing 1152");
  o.require(t < kEnumerationSeconds, "took " + std::to_string(t) + " s");
  if (o.pass) o.why << "78 and 116 solutions, max indices 18 and 16";
  return o;
}

Outcome constant() {
  Outcome o;
  const RealBall c = bw_constant(3, 2);
  o.require(proven_gt(c, kC32Lower) && proven_lt(c, kC32Upper), "C(3,2) not inside the interval");
  if (o.pass) o.why << "C(3,2) ~ " << c.mid();
  return o;
}

Outcome continued_fraction(const Golden& g) {
  Outcome o;
  const CFExpansion& cf = gamma_expansion(130);
  const std::vector<Integer> prefix(cf.quotients.begin(), cf.quotients.begin() + 13);
  o.require(prefix == g.integers("cf.prefix"), "prefix " + join(prefix));
  o.require(cf.q[125] == g.integer("cf.q125"), "q125 " + str(cf.q[125]));
  o.require(cf.q[128] == g.integer("cf.q128"), "q128 " + str(cf.q[128]));
  o.require(max_partial_quotient(cf, 124) == 134, "max quotient " + str(max_partial_quotient(cf, 124)));
  if (o.pass) o.why << "prefix, q125, q128 and max quotient 134 match";
  return o;
}

Outcome bound_chains(const Golden& g) {
  Outcome o;
  for (int eq : {1, 2}) {
    const ChainReport r = verify_bound_chain(eq);
    const std::string pre = "eq" + std::to_string(eq) + ".chain.";
    int certified = 0;
    const auto& rows = reduce_rows(eq);
    for (std::size_t i = 0; i < r.table.size(); ++i) {
      const TableCell& cell = r.table[i];
      const bool ok = cell.claimed == g.decimal(pre + rows[i / 3], static_cast<int>(i % 3)) &&
                      r.entries.at(cell.entry).verdict == Verdict::Certified &&
                      proven_le(r.entries.at(cell.entry).computed, cell.claimed);
      certified += ok;
      o.require(ok, "eq" + std::to_string(eq) + " " + cell.row + " " + cell.col);
    }
    o.require(r.table.size() == 9 && certified == 9, "eq" + std::to_string(eq) + " table incomplete");
    o.require(Rational(r.threshold) <= g.decimal(pre + "final") && r.final_verdict == Verdict::Certified,
              "eq" + std::to_string(eq) + " threshold " + str(r.threshold));
  }
  if (o.pass) o.why << "18 coefficients certified, thresholds within 4.1e62 and 4.2e62";
  return o;
}

Outcome first_step(const Golden& g) {
  Outcome o;
  for (int eq : {1, 2}) {
    const std::string pre = "eq" + std::to_string(eq) + ".step1.";
    const StepResult r = run_step(step_spec(eq, "S1"), SweepOptions{});
    if (!r.single) {
      o.require(false, "eq" + std::to_string(eq) + " did not reduce");
      continue;
    }
    o.require(r.single->j_used == 125, "eq" + std::to_string(eq) + " used j = " + std::to_string(r.single->j_used));
    o.require(proven_gt(r.single->epsilon, kEpsLower) && proven_gt(r.single->epsilon, g.decimal(pre + "epsilon_lower")),
              "eq" + std::to_string(eq) + " epsilon too small");
    o.require(r.single->w_bounds == g.integers(pre + "bounds"),
              "eq" + std::to_string(eq) + " bounds " + join(r.single->w_bounds));
  }
  if (o.pass) o.why << "epsilon > 0.24, bounds (218, 315) and (218, 314)";
  return o;
}

Outcome full_pipeline(const Golden& g, const std::string& cache_dir, std::array<PipelineReport, 2>& reports) {
  Outcome o;
  RunConfig config;
  config.cache_dir = cache_dir;
  for (int eq : {1, 2}) {
    reports[eq - 1] = run_pipeline(eq, pipeline_options(eq, config, g));
    for (const auto& m : pipeline_mismatches(reports[eq - 1], g)) o.require(false, "eq" + std::to_string(eq) + " " + m);
  }
  // Seeded spot check: every sampled bound at or below the table.
  config.spot_check = kSpotCheckSample;
  const auto t0 = std::chrono::steady_clock::now();
  for (int eq : {1, 2}) {
    const PipelineReport s = run_pipeline(eq, pipeline_options(eq, config, g));
    for (const auto& m : pipeline_mismatches(s, g))
      o.require(false, "sampled eq" + std::to_string(eq) + " " + m);
  }
  const double t = seconds_since(t0);
  o.require(t < kSpotCheckSeconds, "spot check took " + std::to_string(t) + " s");
  if (o.pass)
    o.why << "finals " << reports[0].final_bound << " and " << reports[1].final_bound
          << ", tables and exceptional sets match";
  return o;
}

Outcome closure(const Golden& g, const std::string& cache_dir, const std::array<PipelineReport, 2>& reports) {
  Outcome o;
  const Integer box = g.integer("box.bound");
  for (const auto& r : reports) {
    o.require(r.closed && r.final_bound < box && r.box == box,
              "eq" + std::to_string(r.equation) + " final " + str(r.final_bound) + " not below " + str(box));
    const ChainReport c = verify_bound_chain(r.equation);
    o.require(Rational(c.threshold) <= Rational(step_spec(r.equation, "S1").M), "chain threshold above M");
  }
  std::ostringstream out, log;
  RunConfig config;
  config.cache_dir = cache_dir;
  o.require(cmd_verify_all(config, out, log) == kExitOk, "verify-all failed: " + log.str());
  if (o.pass)
    o.why << reports[0].final_bound << " and " << reports[1].final_bound << " below " << box << "; verify-all exits 0";
  return o;
}

// Light versions of the property suites.
Outcome properties() {
  Outcome o;
  std::mt19937_64 rng(7);

  {  // Baker-Davenport soundness against brute force
    std::uniform_int_distribution<long> big(100000000000000L, 999999999999999L), mid(100000000L, 999999999L),
        msize(10, 10000);
    int reduced = 0, bad = 0;
    for (int i = 0; i < 200 && reduced < 100; ++i) {
      const Rational gamma = make_rational(big(rng), big(rng) + 7), mu = make_rational(mid(rng), mid(rng) + 3);
      ReductionInstance inst;
      inst.gamma = GammaSource::rational(gamma);
      inst.mu = [mu](mpfr_prec_t p) { return RealBall(mu, p); };
      inst.M = msize(rng);
      inst.A = 6;
      const auto out = bd_reduce(inst);
      const auto* r = std::get_if<Reduced>(&out);
      if (!r) continue;
      ++reduced;
      // A 2^-(w_bound+1) must not exceed the distance for any u <= M.
      Integer pw;
      mpz_ui_pow_ui(pw.get_mpz_t(), 2, r->w_bound().get_ui() + 1);
      const Rational limit = inst.A / Rational(pw);
      for (Integer u = 0; u <= inst.M; ++u) {
        Rational x = u * gamma + mu;
        Integer f;
        mpz_fdiv_q(f.get_mpz_t(), x.get_num_mpz_t(), x.get_den_mpz_t());
        Rational d = x - f;
        if (d * 2 > 1) d = 1 - d;
        if (d > 0 && d < limit) ++bad;
      }
    }
    o.require(reduced >= 100 && bad == 0, "reduction soundness");
  }

  {  // Binet, recurrence and growth sandwich
    Integer a = 0, b = 1;
    bool ok = true;
    for (int k = 0; k <= 400; ++k) {
      ok = ok && (qr_pow(qr_alpha(), k) - qr_pow(qr_beta(), k)) / qr_sqrt5() == QuadRat(Rational(a), Rational(0));
      if (k >= 1)
        ok = ok && proven_le(embed(qr_pow(qr_alpha(), k - 2), 512), Rational(a)) &&
             proven_le(RealBall(a, 512), embed(qr_pow(qr_alpha(), k - 1), 512));
      Integer c = a + b;
      a = b;
      b = c;
    }
    o.require(ok, "Binet or growth sandwich");
  }

  {  // convergent determinant and Legendre gap
    const CFExpansion& cf = gamma_expansion();
    bool ok = true;
    for (std::size_t j = 1; j < cf.size(); ++j)
      ok = ok && cf.p[j] * cf.q[j - 1] - cf.p[j - 1] * cf.q[j] == ((j % 2) ? 1 : -1);
    const RealBall g = gamma_ball(1024);
    for (int j = 0; j <= 125; ++j) ok = ok && legendre_gap(cf, j, g).verdict == Comparison::ProvenGreater;
    o.require(ok, "determinant or Legendre gap");
  }

  {  // enumeration against a naive loop on the small box
    std::vector<std::uint64_t> f{0, 1};
    while (f.size() < 60) f.push_back(f[f.size() - 1] + f[f.size() - 2]);
    std::size_t n1 = 0, n2 = 0;
    for (int a = 0; a < 60; ++a)
      for (int b = 0; b <= a; ++b)
        for (int x = 0; x <= 40; ++x)
          for (int y = 0; y <= x; ++y) {
            for (int z = 0; z <= y; ++z) n1 += f[a] + f[b] == (1ULL << x) + (1ULL << y) + (1ULL << z);
            for (int c = 0; c <= b; ++c) n2 += f[a] + f[b] + f[c] == (1ULL << x) + (1ULL << y);
          }
    o.require(enumerate_eq1(60, 40).solutions.size() == n1 && enumerate_eq2(60, 40).solutions.size() == n2,
              "small-box enumeration");
  }

  {  // containment under precision doubling
    std::uniform_int_distribution<long> num(-1000000, 1000000), den(1, 100000);
    std::uniform_int_distribution<int> op(0, 4);
    bool ok = true;
    for (int i = 0; i < 1000; ++i) {
      const Rational x = make_rational(num(rng), den(rng)), y = make_rational(num(rng), den(rng));
      const int k = op(rng);
      auto eval = [&](mpfr_prec_t p) {
        const RealBall bx(x, p), by(y, p), one(1L, p);
        switch (k) {
          case 0: return log(one + bx * bx) * by;
          case 1: return exp(bx / (one + abs(bx))) - by;
          case 2: return sqrt(abs(bx) + one) / (one + by * by);
          case 3: return (bx + by) * (bx - by);
          default: return bx / (one + by * by);
        }
      };
      for (mpfr_prec_t p : {128, 256, 512}) {
        const RealBall lo = eval(p), hi = eval(2 * p);
        ok = ok && lo.overlaps(hi) && hi.no_wider_than(lo);
      }
      if (k == 3) ok = ok && eval(256).contains(Rational((x + y) * (x - y)));
      if (k == 4) ok = ok && eval(256).contains(Rational(x / (1 + y * y)));
    }
    o.require(ok, "ball containment");
  }
  if (o.pass) o.why << "reduction soundness, Binet, sandwich, determinant, Legendre, small box, containment";
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"acceptance criteria"};
  std::string cache_dir;
  app.add_option("--cache-dir", cache_dir, "cache directory for gamma and component tables");
  CLI11_PARSE(app, argc, argv);

  const Golden g = Golden::load();
  std::array<PipelineReport, 2> reports;
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"enumeration", [&] { return enumeration(g); }},
      {"constant", [] { return constant(); }},
      {"continued fraction", [&] { return continued_fraction(g); }},
      {"bound chains", [&] { return bound_chains(g); }},
      {"first reduction step", [&] { return first_step(g); }},
      {"full pipeline", [&] { return full_pipeline(g, cache_dir, reports); }},
      {"logical closure", [&] { return closure(g, cache_dir, reports); }},
      {"property suites", [] { return properties(); }},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o.pass = false;
      o.why << "exception: " << e.what();
    }
    failed += !o.pass;
    std::cout << (o.pass ? "PASS" : "FAIL") << " " << i + 1 << " " << criteria[i].first << ": " << o.why.str()
              << std::endl;
  }
  return failed ? 1 : 0;
}
