#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "fibpow/enumeration.hpp"
#include "fibpow/golden.hpp"
#include "fibpow/quadfield.hpp"

#include <algorithm>
#include <cstdint>
#include <set>

using namespace fibpow;

namespace {

using Triple = std::array<int, 3>;

std::vector<Triple> sorted(std::vector<Triple> v) {
  std::sort(v.begin(), v.end());
  return v;
}

std::set<std::array<int, 5>> index_set(const SolutionSet& s) {
  std::set<std::array<int, 5>> out;
  for (const auto& r : s.solutions) out.insert(r.idx);
  return out;
}

std::vector<std::uint64_t> small_fibs(int n) {
  std::vector<std::uint64_t> f{0, 1};
  while (static_cast<int>(f.size()) < n) f.push_back(f[f.size() - 1] + f[f.size() - 2]);
  return f;
}

const SolutionSet& eq1() {
  static const SolutionSet s = enumerate_eq1();
  return s;
}
const SolutionSet& eq2() {
  static const SolutionSet s = enumerate_eq2();
  return s;
}

bool has(const SolutionSet& s, std::array<int, 5> idx, long value) {
  for (const auto& r : s.solutions)
    if (r.idx == idx) return r.value == value;
  return false;
}

}  // namespace

TEST_CASE("three powers of two") {
  CHECK(decompose_three_powers(3, 250) == std::vector<Triple>{{0, 0, 0}});
  CHECK(sorted(decompose_three_powers(6, 250)) == sorted({{2, 0, 0}, {1, 1, 1}}));
  CHECK(decompose_three_powers(1, 250).empty());
  CHECK(decompose_three_powers(2592, 250) == std::vector<Triple>{{11, 9, 5}});
}

TEST_CASE("three Fibonacci numbers") {
  CHECK(sorted(decompose_three_fibs(2, 360)) == sorted({{3, 0, 0}, {2, 2, 0}}));
  CHECK(decompose_three_fibs(0, 360) == std::vector<Triple>{{0, 0, 0}});
  const auto v = decompose_three_fibs(1152, 360);
  CHECK(std::find(v.begin(), v.end(), Triple{16, 12, 8}) != v.end());
  for (const auto& t : v) CHECK(fibonacci(t[0]) + fibonacci(t[1]) + fibonacci(t[2]) == 1152);
}

TEST_CASE("first equation: published counts and entries") {
  const SolutionSet& s = eq1();
  CHECK(s.count_total == 78);
  CHECK(s.count_canonical == 68);
  CHECK(s.max_leading_index() == 18);
  CHECK(has(s, {18, 6, 11, 9, 5}, 2592));
  int twins = 0;
  for (const auto& r : s.solutions)
    if (r.canonical() && r.idx[1] == 2) ++twins;
  CHECK(s.count_total - s.count_canonical == twins);
}

TEST_CASE("second equation: published counts and entries") {
  const SolutionSet& s = eq2();
  CHECK(s.count_total == 116);
  CHECK(s.max_leading_index() == 16);
  CHECK(has(s, {16, 12, 8, 10, 7}, 1152));
  CHECK(has(s, {2, 2, 0, 0, 0}, 2));
}

TEST_CASE("canonical solutions equal the published lists") {
  const Golden g = Golden::load();
  for (const SolutionSet* s : {&eq1(), &eq2()}) {
    std::vector<SolutionRecord> canonical;
    for (const auto& r : s->solutions)
      if (r.canonical()) canonical.push_back(r);
    CHECK(canonical == g.solutions(s->equation));
  }
  CHECK(g.solutions(1).size() == 68);
}

TEST_CASE("solution checks") {
  CHECK(verify_solution(SolutionRecord{1, {3, 2, 0, 0, 0}, 3}));
  CHECK_FALSE(verify_solution(SolutionRecord{1, {3, 2, 1, 0, 0}, 4}));
  CHECK(verify_solution(SolutionRecord{1, {18, 6, 11, 9, 5}, 2592}));
  for (const auto& r : eq1().solutions) CHECK(verify_solution(r));
  for (const auto& r : eq2().solutions) CHECK(verify_solution(r));
}

TEST_CASE("output is sorted lexicographically") {
  for (const SolutionSet* s : {&eq1(), &eq2()}) CHECK(std::is_sorted(s->solutions.begin(), s->solutions.end()));
}

TEST_CASE("fast enumeration equals a naive loop on the small box") {
  const int n_max = 60, a_max = 40;
  const auto f = small_fibs(n_max);
  std::set<std::array<int, 5>> naive1, naive2;
  for (int n1 = 0; n1 < n_max; ++n1)
    for (int n2 = 0; n2 <= n1; ++n2)
      for (int a1 = 0; a1 <= a_max; ++a1)
        for (int a2 = 0; a2 <= a1; ++a2)
          for (int a3 = 0; a3 <= a2; ++a3)
            if (f[n1] + f[n2] == (1ULL << a1) + (1ULL << a2) + (1ULL << a3)) naive1.insert({n1, n2, a1, a2, a3});
  for (int m1 = 0; m1 < n_max; ++m1)
    for (int m2 = 0; m2 <= m1; ++m2)
      for (int m3 = 0; m3 <= m2; ++m3)
        for (int t1 = 0; t1 <= a_max; ++t1)
          for (int t2 = 0; t2 <= t1; ++t2)
            if (f[m1] + f[m2] + f[m3] == (1ULL << t1) + (1ULL << t2)) naive2.insert({m1, m2, m3, t1, t2});
  CHECK(index_set(enumerate_eq1(n_max, a_max)) == naive1);
  CHECK(index_set(enumerate_eq2(n_max, a_max)) == naive2);
}

TEST_CASE("restricting the box restricts the solution list") {
  const SolutionSet small = enumerate_eq1(10, 5);
  std::set<std::array<int, 5>> filtered;
  for (const auto& r : eq1().solutions)
    if (r.idx[0] < 10 && r.idx[2] <= 5) filtered.insert(r.idx);
  CHECK(index_set(small) == filtered);
}

TEST_CASE("search-range relations hold on every solution") {
  const RealBall la = log(embed(qr_alpha(), 256)), l2 = const_log2(256), l3 = real_log(Rational(3), 256);
  for (const auto& r : eq1().solutions) {
    const int n1 = r.idx[0], a1 = r.idx[2];
    // n1 - 2 <= a1 log2/log(alpha) + log3/log(alpha)
    const RealBall rhs = (RealBall(static_cast<long>(a1), 256) * l2 + l3) / la;
    CHECK_MESSAGE(proven_le(RealBall(static_cast<long>(n1 - 2), 256), rhs), r.to_string());
    CHECK(n1 > a1);
  }
  // Twins such as F1+F1+F1 = 2^1+2^0 fall outside m1 > t1; their index-2 forms satisfy it.
  for (const auto& r : eq2().solutions)
    if (r.canonical()) CHECK(r.idx[0] > r.idx[3]);
}

TEST_CASE("closure under replacing index 2 by index 1") {
  for (const SolutionSet* s : {&eq1(), &eq2()}) {
    const auto all = index_set(*s);
    const auto fib = fib_positions(s->equation);
    for (const auto& idx : all)
      for (int p : fib) {
        if (idx[p] != 2) continue;
        auto twin = idx;
        twin[p] = 1;
        // Keep the Fibonacci indices non-increasing.
        std::vector<int> v;
        for (int q : fib) v.push_back(twin[q]);
        std::sort(v.rbegin(), v.rend());
        for (std::size_t i = 0; i < fib.size(); ++i) twin[fib[i]] = v[i];
        CHECK_MESSAGE(all.count(twin) == 1, "missing twin of index tuple starting " << idx[0]);
      }
  }
}
