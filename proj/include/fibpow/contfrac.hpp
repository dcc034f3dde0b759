#pragma once

#include "fibpow/bigmath.hpp"

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace fibpow {

using BallProducer = std::function<RealBall(mpfr_prec_t)>;

struct CFExpansion {
  std::vector<Integer> quotients;  // s_0, s_1, ...
  std::vector<Integer> p;          // p_j / q_j is the j-th convergent
  std::vector<Integer> q;
  mpfr_prec_t precision = 0;       // 0 for exact rational input
  bool terminated = false;         // exact rational whose expansion ended

  std::size_t size() const { return quotients.size(); }
  bool operator==(const CFExpansion&) const = default;
};

// Certified expansion of the real number produced by x.
CFExpansion cf_expand(const BallProducer& x, int n_terms, mpfr_prec_t start_prec = kDefaultPrecision);
// Exact expansion of a rational (Euclid); stops at termination or n_terms.
CFExpansion cf_expand(const Rational& x, int n_terms = 1 << 20);

// Rebuilds p, q from the quotients.
void cf_fill_convergents(CFExpansion& cf);

// Minimal j with q_j > bound; nullopt when the expansion is too short.
std::optional<std::pair<int, Integer>> first_denominator_exceeding(const CFExpansion& cf, const Integer& bound);

// max of s_{j+1} for 0 <= j <= j_max.
Integer max_partial_quotient(const CFExpansion& cf, int j_max);

struct LegendreCheck {
  RealBall gap;             // |x - p_j/q_j|
  Comparison verdict;       // gap versus 1/((s_{j+1}+2) q_j^2)
  bool skipped = false;     // terminal convergent of an exact rational
};

LegendreCheck legendre_gap(const CFExpansion& cf, int j, const RealBall& x);

// gamma = log(alpha) / log(2)
RealBall gamma_ball(mpfr_prec_t prec);

inline constexpr int kGammaCacheTerms = 140;

// Process-wide certified expansion of gamma, grown on demand.
const CFExpansion& gamma_expansion(int min_terms = kGammaCacheTerms);

// Cache file: one "j s_j p_j q_j" line per term after a precision stamp.
void save_cf_cache(const std::string& path, const CFExpansion& cf);
std::optional<CFExpansion> load_cf_cache(const std::string& path);
// Installs a cache directory used by gamma_expansion for reading and writing.
void set_cf_cache_dir(const std::string& dir);

}  // namespace fibpow
