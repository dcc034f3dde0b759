#pragma once

#include "fibpow/bigmath.hpp"
#include "fibpow/enumeration.hpp"
#include "fibpow/quadfield.hpp"

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace fibpow {

// Index differences appearing as exponents. Per equation:
//   eq 1: TwoExp12 = a1-a2, TwoExp13 = a1-a3, FibIdx12 = n1-n2
//   eq 2: TwoExp12 = t1-t2, FibIdx12 = m1-m2, FibIdx13 = m1-m3
enum class Gap { TwoExp12, TwoExp13, FibIdx12, FibIdx13 };

std::string gap_name(int equation, Gap g);
// Positions (i, j) in SolutionRecord::idx with gap = idx[i] - idx[j].
std::pair<int, int> gap_positions(int equation, Gap g);
bool gap_is_two(Gap g);

// Upper bound sum_i coeff[i] * L^i, L = log n1 (or log m1), all coefficients
// non-negative.
struct PolyLog {
  std::vector<RealBall> coeff;

  static PolyLog constant(const RealBall& c);
  static PolyLog monomial(const RealBall& c, int power);
  int degree() const { return static_cast<int>(coeff.size()) - 1; }
  mpfr_prec_t prec() const;
  // Single coefficient c with sum <= c L^p for every L >= l_min.
  RealBall fold(int p, const RealBall& l_min) const;
};

PolyLog operator+(const PolyLog& a, const PolyLog& b);
PolyLog operator*(const PolyLog& a, const RealBall& s);
PolyLog shift(const PolyLog& a, int by);  // multiply by L^by

// Height-bound expression tree over {alpha, beta, 2, sqrt5, 1}.
class HeightExpr {
 public:
  enum class Kind { Alpha, Beta, Two, Sqrt5, One, Power, Sum, Product };

  static HeightExpr alpha();
  static HeightExpr beta();
  static HeightExpr two();
  static HeightExpr sqrt5();
  static HeightExpr one();
  // base^(sign * gap), base is two() or alpha().
  static HeightExpr power(Kind base, Gap gap, int sign);
  static HeightExpr sum(std::vector<HeightExpr> terms);
  // prod(num) / prod(den)
  static HeightExpr product(std::vector<HeightExpr> num, std::vector<HeightExpr> den = {});

  Kind kind() const { return kind_; }
  std::string to_string(int equation) const;
  // Exact value for concrete gap values.
  QuadRat exact(const std::map<Gap, long>& gaps) const;

 private:
  Kind kind_ = Kind::One;
  Kind base_ = Kind::One;
  Gap gap_ = Gap::TwoExp12;
  int sign_ = 1;
  std::vector<HeightExpr> num_;
  std::vector<HeightExpr> den_;

  friend PolyLog height_bound(const HeightExpr&, const std::map<Gap, long>&, const std::map<Gap, PolyLog>&,
                              mpfr_prec_t);
};

class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// Upper bound for h0 of e. A gap is taken from gap_values when present,
// otherwise from prior_bounds (bounding gap * log(base of the gap)).
PolyLog height_bound(const HeightExpr& e, const std::map<Gap, long>& gap_values,
                     const std::map<Gap, PolyLog>& prior_bounds, mpfr_prec_t prec);

// h'(x) = max{h0(x), |log x| / 2, 1/2} for x in Q(sqrt5), exact input.
RealBall modified_height(const QuadRat& x, mpfr_prec_t prec);
// Same bound applied to a polylog h0 bound: |log x| <= 2 h0(x).
PolyLog modified_height(const PolyLog& h0);

RealBall bw_constant(int k, int d, mpfr_prec_t prec = kDefaultPrecision);
RealBall bw_lower_bound(const RealBall& h1, const RealBall& h2, const RealBall& h3, const Integer& b_height);

// Least N with n * divisor >= c (log n)^p for all n >= N.
Integer solve_polylog_threshold(const RealBall& c, int p, const RealBall& divisor);

// One of the three logarithms' coefficients: sign * idx[pos], pos = -1 for
// the constant 1.
struct IndexTerm {
  int sign = 1;
  int pos = -1;
};

// Exponent of one right-hand-side term: -(idx[plus] - idx[minus]) with
// minus = -1 meaning 0.
struct RhsTerm {
  bool base_two = true;
  int plus = 0;
  int minus = -1;
};

struct LinearFormSpec {
  int equation = 1;
  std::string step;  // "S1" .. "S7"
  std::string name;  // inequality label
  HeightExpr alpha3;
  IndexTerm b1;      // coefficient of log alpha
  IndexTerm b2;      // coefficient of log 2
  int b3 = 1;        // coefficient of log alpha3
  Rational K;        // |exp(Lambda) - 1| < K * max(rhs)
  std::vector<RhsTerm> rhs;
};

// All linear forms of one equation, Steps 1..7 (Step 6 shares Step 4's).
std::vector<LinearFormSpec> linear_forms(int equation);

RealBall eval_linear_form(const LinearFormSpec& spec, const SolutionRecord& sol, mpfr_prec_t prec);
// K * max(rhs) at the solution.
RealBall eval_rhs(const LinearFormSpec& spec, const SolutionRecord& sol, mpfr_prec_t prec);

enum class Verdict { Certified, Violated, Unknown };
const char* to_string(Verdict v);

struct ChainEntry {
  std::string step;      // "S1".."S7"
  std::string quantity;  // e.g. "h'(alpha3)", "min{(a1-a2)log2,(n1-n2)log(alpha)}"
  int power = 0;         // exponent of log n1
  RealBall computed;
  Rational claimed;
  Verdict verdict = Verdict::Unknown;
  bool operator==(const ChainEntry&) const = default;
};

struct TableCell {
  std::string row;   // quantity
  std::string col;   // "1A", "1B", "2"
  int power = 0;
  Rational claimed;
  std::size_t entry = 0;  // index into entries certifying it
  bool operator==(const TableCell&) const = default;
};

struct ChainReport {
  int equation = 1;
  mpfr_prec_t precision = 0;
  std::vector<ChainEntry> entries;
  std::vector<TableCell> table;
  RealBall final_coefficient;   // c in n1 log alpha < c (log n1)^4
  Integer threshold;            // least N from solve_polylog_threshold
  Rational final_claimed;       // printed bound on n1
  Verdict final_verdict = Verdict::Unknown;

  bool passed() const;
  bool operator==(const ChainReport&) const = default;
};

inline constexpr int kChainMinIndex = 360;

ChainReport verify_bound_chain(int equation, mpfr_prec_t start_prec = kDefaultPrecision);

}  // namespace fibpow
