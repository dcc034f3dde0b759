#pragma once

#include "fibpow/golden.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace fibpow {

inline constexpr int kExitOk = 0;
inline constexpr int kExitMismatch = 1;   // golden mismatch, failed check or I/O error
inline constexpr int kExitPrecision = 2;  // undecided after precision escalation
inline constexpr int kExitStep = 3;       // a reduction step could not be completed

struct RunConfig {
  mpfr_prec_t precision = kDefaultPrecision;
  int workers = 1;
  std::string cache_dir;   // empty: no cache
  std::string out;         // empty: stdout
  std::string format = "json";
  std::optional<int> spot_check;
  std::uint64_t seed = 0;
  std::string golden_dir = FIBPOW_GOLDEN_DIR;
};

struct ReduceArgs {
  int equation = 1;
  std::string step = "S1";
  Tuple params{-1, -1, -1};
  std::optional<std::string> M;  // decimal override
  std::optional<std::string> A;
};

// Each command writes its artifact to config.out (or out) and status lines
// to log, and returns an exit code.
int cmd_enumerate(int equation, int n_max, int a_max, const RunConfig& config, std::ostream& out, std::ostream& log);
int cmd_bounds(int equation, const RunConfig& config, std::ostream& out, std::ostream& log);
int cmd_pipeline(int equation, const RunConfig& config, std::ostream& out, std::ostream& log);
int cmd_cf(int terms, const RunConfig& config, std::ostream& out, std::ostream& log);
int cmd_reduce(const ReduceArgs& args, const RunConfig& config, std::ostream& out, std::ostream& log);
int cmd_verify_all(const RunConfig& config, std::ostream& out, std::ostream& log);

// Differences between a pipeline report and the golden data; empty when it
// matches. Sampled reports are held to the published values as upper bounds.
std::vector<std::string> pipeline_mismatches(const PipelineReport& rep, const Golden& golden);

// Pipeline options for a run: sampling, forced golden tuples, cache.
PipelineOptions pipeline_options(int equation, const RunConfig& config, const Golden& golden);

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& log);

}  // namespace fibpow
