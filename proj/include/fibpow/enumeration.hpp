#pragma once

#include "fibpow/bigmath.hpp"

#include <array>
#include <string>
#include <vector>

namespace fibpow {

// idx = (n1, n2, a1, a2, a3) for equation 1 and (m1, m2, m3, t1, t2) for
// equation 2.
struct SolutionRecord {
  int equation = 1;
  std::array<int, 5> idx{};
  Integer value;

  bool operator==(const SolutionRecord&) const = default;
  auto operator<=>(const SolutionRecord& o) const {
    if (equation != o.equation) return equation <=> o.equation;
    return idx <=> o.idx;
  }
  // True when no Fibonacci index equals 1.
  bool canonical() const;
  std::string to_string() const;
};

struct SolutionSet {
  int equation = 1;
  int n_max = 0;  // Fibonacci indices < n_max
  int a_max = 0;  // powers of two <= a_max
  std::vector<SolutionRecord> solutions;
  int count_total = 0;
  int count_canonical = 0;

  bool operator==(const SolutionSet&) const = default;
  int max_leading_index() const;
};

inline constexpr int kDefaultNMax = 360;
inline constexpr int kDefaultAMax = 250;

std::vector<std::array<int, 3>> decompose_three_powers(const Integer& S, int a_max);
// Canonical (index-1-free) triples with m1 <= m_max.
std::vector<std::array<int, 3>> decompose_three_fibs(const Integer& S, int m_max);

SolutionSet enumerate_eq1(int n_max = kDefaultNMax, int a_max = kDefaultAMax);
SolutionSet enumerate_eq2(int m_max = kDefaultNMax, int t_max = kDefaultAMax);

bool verify_solution(const SolutionRecord& s);

// Fibonacci positions of the record's index array.
std::vector<int> fib_positions(int equation);

}  // namespace fibpow
