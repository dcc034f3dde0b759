#pragma once

#include "fibpow/reduction.hpp"

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace fibpow {

struct ParamRange {
  int slot = kSlotK;
  int max = 0;  // inclusive, from 0
  bool operator==(const ParamRange&) const = default;
};

// One reduction step: 0 < |u gamma - v + mu| < A B^-w for each base B.
struct StepSpec {
  int equation = 1;
  std::string step;                     // "S1".."S7"
  MuSpec mu;                            // parameters filled per tuple
  Rational A;
  Integer M;
  Integer legendre_M;                   // base of M_adj in the fallback
  std::vector<Base> bases;
  std::vector<std::string> quantities;  // what each base bounds, e.g. "a1-a2"
  std::vector<ParamRange> ranges;
  bool ordered_kl = false;              // only tuples with k <= l
  bool operator==(const StepSpec&) const = default;

  long long tuple_count() const;
};

using Tuple = std::array<int, 3>;  // k, l, r; -1 when unused

struct ExceptionalCase {
  Tuple params{-1, -1, -1};
  Relation relation;
  std::vector<Integer> bounds;  // Legendre bound per base
  bool operator==(const ExceptionalCase&) const = default;
};

struct StepResult {
  StepSpec spec;
  std::vector<Integer> max_bound;    // per base, reduced and fallback cases
  std::vector<Integer> max_reduced;  // per base, reduced cases only
  std::vector<Tuple> argmax;         // first tuple reaching max_reduced
  std::vector<ExceptionalCase> exceptional;
  long long tuples = 0;
  long long slow_path = 0;           // tuples decided by the generic reduction
  int j_min = -1;                    // convergent range used by reduced cases
  int j_max = -1;
  Integer q_max;
  std::optional<Reduced> single;     // outcome when the step has one tuple
  bool sampled = false;
  bool operator==(const StepResult&) const = default;

  const Integer& bound(Base b) const;
};

class StepFailure : public std::runtime_error {
 public:
  StepFailure(const std::string& step, const Tuple& t, const std::string& why);
  std::string step;
  Tuple tuple;
};

struct SweepOptions {
  int workers = 1;
  mpfr_prec_t precision = kDefaultPrecision;
  std::string cache_dir;
  std::optional<int> sample;         // spot-check: tuples per step
  std::uint64_t seed = 0;
  std::vector<Tuple> forced;         // always included in a sample
  int fast_convergents = 8;          // convergents tabulated for the fast path; 0 disables it
};

StepResult run_step(const StepSpec& spec, const SweepOptions& opt, ComponentLogTable* tables = nullptr);

// Spec of one step with the given inclusive ranges (k, l, r order; unused
// entries ignored).
StepSpec step_spec(int equation, const std::string& step, const Tuple& ranges = {-1, -1, -1});

using CaseTable = std::array<std::array<Integer, 4>, 3>;  // rows x (1A, 1B, 2, overall)

struct PipelineReport {
  int equation = 1;
  mpfr_prec_t precision = kDefaultPrecision;
  bool sampled = false;
  int sample_size = 0;
  std::uint64_t seed = 0;
  std::vector<StepResult> steps;
  std::array<std::string, 3> rows;
  CaseTable table;
  Integer final_bound;
  Integer box = 360;
  bool closed = false;  // final_bound < box
  std::vector<std::string> notes;
  bool operator==(const PipelineReport&) const = default;

  const StepResult& step(const std::string& id) const;
};

struct PipelineOptions {
  SweepOptions sweep;
  // Used in sampled mode: ranges never fall below these table values.
  std::optional<CaseTable> published_table;
  std::map<std::string, std::vector<Tuple>> forced;  // per step, sampled mode
};

PipelineReport run_pipeline(int equation, const PipelineOptions& opt);

inline constexpr const char* kCaseColumns[4] = {"1A", "1B", "2", "Overall"};

}  // namespace fibpow
