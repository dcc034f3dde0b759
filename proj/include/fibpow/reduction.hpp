#pragma once

#include "fibpow/bigmath.hpp"
#include "fibpow/contfrac.hpp"
#include "fibpow/quadfield.hpp"

#include <array>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace fibpow {

enum class Base { Two, Alpha };
const char* base_name(Base b);
RealBall log_base(Base b, mpfr_prec_t prec);

// Factors of the inner expression whose log / log 2 is mu. Parameters are
// taken from MuSpec::params by slot (0 = k, 1 = l, 2 = r).
enum class FactorKind {
  Sqrt5,                // sqrt5
  TwoPowPlusOne,        // 2^a + 1
  AlphaPowPlusOne,      // alpha^a + 1
  OnePlusTwoNeg,        // 1 + 2^-a
  OnePlusAlphaNeg,      // 1 + alpha^-a
  OnePlusTwoNegPair,    // 1 + 2^-a + 2^-b
  OnePlusAlphaNegPair,  // 1 + alpha^-a + alpha^-b
};
inline constexpr int kFactorKinds = 7;
const char* factor_name(FactorKind k);
bool factor_is_pair(FactorKind k);

struct MuFactor {
  FactorKind kind = FactorKind::Sqrt5;
  int exponent = 1;  // +1 numerator, -1 denominator
  int slot_a = -1;
  int slot_b = -1;
  bool operator==(const MuFactor&) const = default;
};

inline constexpr int kSlotK = 0, kSlotL = 1, kSlotR = 2;

struct MuSpec {
  int equation = 1;
  std::string step;
  std::vector<MuFactor> factors;
  std::array<int, 3> params{-1, -1, -1};  // k, l, r; -1 when unused

  // prod factor^exponent, exactly.
  QuadRat inner() const;
  std::string to_string() const;
  bool operator==(const MuSpec&) const = default;
};

// log(value of one factor) / log 2.
RealBall component_value(FactorKind kind, int a, int b, mpfr_prec_t prec);

// mu = log(inner) / log 2 assembled from memoized component values.
RealBall mu_value(const MuSpec& spec, mpfr_prec_t prec);

// Component values per kind, indices 0..n (pairs: a <= b <= n), at one
// precision. Optionally persisted in a cache directory.
class ComponentLogTable {
 public:
  explicit ComponentLogTable(mpfr_prec_t prec, std::string cache_dir = {});

  mpfr_prec_t prec() const { return prec_; }
  // Extends the kind's table to cover index n.
  void ensure(FactorKind kind, int n);
  int covered(FactorKind kind) const { return covered_[static_cast<int>(kind)]; }
  const std::vector<RealBall>& values(FactorKind kind) const { return values_[static_cast<int>(kind)]; }
  static std::size_t index(FactorKind kind, int a, int b);

 private:
  mpfr_prec_t prec_;
  std::string cache_dir_;
  std::array<std::vector<RealBall>, kFactorKinds> values_;
  std::array<int, kFactorKinds> covered_;
};

// Source of gamma: its value and a certified expansion grown on demand.
struct GammaSource {
  BallProducer value;
  std::function<const CFExpansion&(int min_terms)> expansion;

  static GammaSource standard();  // log alpha / log 2
  static GammaSource rational(const Rational& g);
};

struct ReductionInstance {
  GammaSource gamma = GammaSource::standard();
  BallProducer mu;
  std::optional<MuSpec> spec;  // enables exact degeneracy detection
  Integer M;
  Rational A;
  std::vector<Base> bases{Base::Two};
};

ReductionInstance make_instance(const MuSpec& spec, const Integer& M, const Rational& A, std::vector<Base> bases);

struct Reduced {
  int j_used = 0;
  Integer q;
  RealBall epsilon;
  std::vector<Integer> w_bounds;  // one per instance base
  const Integer& w_bound() const { return w_bounds.front(); }
  bool operator==(const Reduced&) const = default;
};
struct Degenerate {
  Relation relation;
  bool operator==(const Degenerate&) const = default;
};
struct Exhausted {
  int convergents_tried = 0;
  bool operator==(const Exhausted&) const = default;
};
using ReductionOutcome = std::variant<Reduced, Degenerate, Exhausted>;

inline constexpr int kMaxConvergents = 30;

// First index j with q_j > 6M.
int first_convergent_index(const GammaSource& gamma, const Integer& M);

ReductionOutcome bd_reduce(const ReductionInstance& inst, int max_convergents = kMaxConvergents,
                           mpfr_prec_t start_prec = kDefaultPrecision);

// mu = e + s gamma exactly, read off inner = 2^e alpha^s.
std::optional<Relation> detect_degeneracy(const MuSpec& spec);

// Largest partial quotient s_{j+1} over j with q_j <= bound.
Integer max_partial_quotient_below(const CFExpansion& cf, const Integer& bound);

// Least w with B^w >= A (s_max + 2) M_adj.
Integer legendre_fallback(const Rational& A, Base base, const Integer& M_adj, const Integer& s_max);
// Same bound for every base of a degenerate instance, with
// M_adj = m_base + |s| and s_max taken from the convergents up to M_adj.
std::vector<Integer> legendre_fallback(const ReductionInstance& inst, const Relation& rel, const Integer& m_base);

}  // namespace fibpow
