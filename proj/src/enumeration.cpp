#include "fibpow/enumeration.hpp"

#include "fibpow/quadfield.hpp"

#include <algorithm>
#include <map>
#include <sstream>

namespace fibpow {

namespace {

Integer pow2(int e) {
  Integer r;
  mpz_setbit(r.get_mpz_t(), static_cast<mp_bitcnt_t>(e));
  return r;
}

int bit_length(const Integer& x) { return x == 0 ? 0 : static_cast<int>(mpz_sizeinbase(x.get_mpz_t(), 2)); }

// Exponent e with x = 2^e, or -1.
int power_of_two_exponent(const Integer& x) {
  if (x <= 0) return -1;
  int e = static_cast<int>(mpz_scan1(x.get_mpz_t(), 0));
  return bit_length(x) == e + 1 ? e : -1;
}

// Canonical index of a Fibonacci value: 0 -> 0, 1 -> 2, 2 -> 3, ...
const std::map<Integer, int>& fib_index() {
  static const std::map<Integer, int> table = [] {
    std::map<Integer, int> t;
    t.emplace(fibonacci(0), 0);
    for (int k = 2; k < kFibTableSize; ++k) t.emplace(fibonacci(k), k);
    return t;
  }();
  return table;
}

// Canonical indices k <= k_max with F_k <= R <= mult * F_k.
std::vector<int> fib_candidates(const Integer& R, int k_max, int mult) {
  std::vector<int> out;
  if (R == 0) {
    out.push_back(0);
    return out;
  }
  for (int k = std::min(k_max, kFibTableSize - 1); k >= 2; --k) {
    const Integer& f = fibonacci(k);
    if (f > R) continue;
    if (f * mult < R) break;
    out.push_back(k);
  }
  return out;
}

// Expands index-2 entries into index-1 twins, keeping the descending order.
void add_with_twins(std::vector<SolutionRecord>& out, const SolutionRecord& canonical) {
  out.push_back(canonical);
  std::vector<int> pos;
  for (int p : fib_positions(canonical.equation))
    if (canonical.idx[p] == 2) pos.push_back(p);
  for (std::size_t t = 1; t <= pos.size(); ++t) {
    SolutionRecord twin = canonical;
    for (std::size_t i = pos.size() - t; i < pos.size(); ++i) twin.idx[pos[i]] = 1;
    out.push_back(twin);
  }
}

SolutionSet finish(int equation, int n_max, int a_max, std::vector<SolutionRecord> sols) {
  std::sort(sols.begin(), sols.end());
  sols.erase(std::unique(sols.begin(), sols.end()), sols.end());
  SolutionSet set;
  set.equation = equation;
  set.n_max = n_max;
  set.a_max = a_max;
  set.count_total = static_cast<int>(sols.size());
  set.count_canonical = static_cast<int>(std::count_if(sols.begin(), sols.end(), [](const auto& s) { return s.canonical(); }));
  set.solutions = std::move(sols);
  return set;
}

void check_box(int n_max, int a_max) {
  if (n_max < 1 || n_max > kFibTableSize) throw std::invalid_argument("Fibonacci index bound outside 1..401");
  if (a_max < 0) throw std::invalid_argument("negative power bound");
}

}  // namespace

std::vector<int> fib_positions(int equation) {
  return equation == 1 ? std::vector<int>{0, 1} : std::vector<int>{0, 1, 2};
}

bool SolutionRecord::canonical() const {
  for (int p : fib_positions(equation))
    if (idx[p] == 1) return false;
  return true;
}

std::string SolutionRecord::to_string() const {
  std::ostringstream os;
  if (equation == 1)
    os << "F(" << idx[0] << ") + F(" << idx[1] << ") = 2^" << idx[2] << " + 2^" << idx[3] << " + 2^" << idx[4];
  else
    os << "F(" << idx[0] << ") + F(" << idx[1] << ") + F(" << idx[2] << ") = 2^" << idx[3] << " + 2^" << idx[4];
  os << " = " << value;
  return os.str();
}

int SolutionSet::max_leading_index() const {
  int m = -1;
  for (const auto& s : solutions) m = std::max(m, s.idx[0]);
  return m;
}

std::vector<std::array<int, 3>> decompose_three_powers(const Integer& S, int a_max) {
  std::vector<std::array<int, 3>> out;
  if (S < 3) return out;
  int top = bit_length(S) - 1;
  for (int a1 = top; a1 >= std::max(0, top - 1); --a1) {
    if (a1 > a_max) continue;
    Integer p1 = pow2(a1);
    if (S > 3 * p1) continue;
    Integer R = S - p1;
    if (R < 2) continue;
    int t2 = bit_length(R) - 1;
    for (int a2 = std::min(t2, a1); a2 >= std::max(0, t2 - 1); --a2) {
      Integer p2 = pow2(a2);
      if (R < p2 || R > 2 * p2) continue;
      int a3 = power_of_two_exponent(R - p2);
      if (a3 >= 0 && a3 <= a2) out.push_back({a1, a2, a3});
    }
  }
  return out;
}

std::vector<std::array<int, 3>> decompose_three_fibs(const Integer& S, int m_max) {
  std::vector<std::array<int, 3>> out;
  if (S < 0) return out;
  const auto& index = fib_index();
  for (int m1 : fib_candidates(S, m_max, 3)) {
    Integer R = S - fibonacci(m1);
    for (int m2 : fib_candidates(R, m1, 2)) {
      auto it = index.find(R - fibonacci(m2));
      if (it != index.end() && it->second <= m2) out.push_back({m1, m2, it->second});
    }
  }
  return out;
}

SolutionSet enumerate_eq1(int n_max, int a_max) {
  check_box(n_max, a_max);
  std::vector<SolutionRecord> sols;
  for (int n1 = 0; n1 < n_max; ++n1) {
    if (n1 == 1) continue;
    for (int n2 = 0; n2 <= n1; ++n2) {
      if (n2 == 1) continue;
      Integer S = fibonacci(n1) + fibonacci(n2);
      for (const auto& a : decompose_three_powers(S, a_max))
        add_with_twins(sols, SolutionRecord{1, {n1, n2, a[0], a[1], a[2]}, S});
    }
  }
  return finish(1, n_max, a_max, std::move(sols));
}

SolutionSet enumerate_eq2(int m_max, int t_max) {
  check_box(m_max, t_max);
  std::vector<SolutionRecord> sols;
  for (int t1 = 0; t1 <= t_max; ++t1) {
    for (int t2 = 0; t2 <= t1; ++t2) {
      Integer S = pow2(t1) + pow2(t2);
      for (const auto& m : decompose_three_fibs(S, m_max - 1))
        add_with_twins(sols, SolutionRecord{2, {m[0], m[1], m[2], t1, t2}, S});
    }
  }
  return finish(2, m_max, t_max, std::move(sols));
}

bool verify_solution(const SolutionRecord& s) {
  for (int v : s.idx)
    if (v < 0) return false;
  const auto& i = s.idx;
  Integer lhs, rhs;
  if (s.equation == 1) {
    if (i[0] < i[1] || i[2] < i[3] || i[3] < i[4]) return false;
    lhs = fibonacci_big(i[0]) + fibonacci_big(i[1]);
    rhs = pow2(i[2]) + pow2(i[3]) + pow2(i[4]);
  } else if (s.equation == 2) {
    if (i[0] < i[1] || i[1] < i[2] || i[3] < i[4]) return false;
    lhs = fibonacci_big(i[0]) + fibonacci_big(i[1]) + fibonacci_big(i[2]);
    rhs = pow2(i[3]) + pow2(i[4]);
  } else {
    return false;
  }
  return lhs == rhs && lhs == s.value;
}

}  // namespace fibpow
