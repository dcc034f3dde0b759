#include "fibpow/commands.hpp"

#include "fibpow/serialize.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

namespace fibpow {

namespace {

const char* leading_name(int equation) { return equation == 1 ? "n1" : "m1"; }

bool write_artifact(const RunConfig& config, std::ostream& out, std::ostream& log, const std::string& text) {
  if (config.out.empty()) {
    out << text;
    return true;
  }
  std::ofstream f(config.out, std::ios::binary);
  f << text;
  f.close();
  if (!f) {
    log << "error: cannot write " << config.out << '\n';
    return false;
  }
  return true;
}

void prepare_cache(const RunConfig& config) {
  if (config.cache_dir.empty()) return;
  std::filesystem::create_directories(config.cache_dir);
  set_cf_cache_dir(config.cache_dir);
}

// Runs body and maps the library's failure modes to exit codes.
template <class F>
int guarded(std::ostream& log, const char* what, F&& body) {
  try {
    return body();
  } catch (const PrecisionExhausted& e) {
    log << what << ": precision exhausted: " << e.what() << '\n';
    return kExitPrecision;
  } catch (const StepFailure& e) {
    log << what << ": step failure: " << e.what() << '\n';
    return kExitStep;
  } catch (const std::exception& e) {
    log << what << ": error: " << e.what() << '\n';
    return kExitMismatch;
  }
}

std::vector<std::string> enumeration_mismatches(const SolutionSet& s, const Golden& g) {
  std::vector<std::string> bad;
  const std::string eq = "eq" + std::to_string(s.equation);
  if (Integer(s.count_total) != g.integer(eq + ".count_total"))
    bad.push_back("count " + std::to_string(s.count_total) + " != " + g.text(eq + ".count_total"));
  if (Integer(s.max_leading_index()) != g.integer(eq + ".max_leading_index"))
    bad.push_back("max leading index " + std::to_string(s.max_leading_index()));
  std::vector<SolutionRecord> canonical;
  for (const auto& r : s.solutions)
    if (r.canonical()) canonical.push_back(r);
  if (canonical != g.solutions(s.equation)) bad.push_back("canonical list differs from the golden list");
  return bad;
}

std::vector<std::string> chain_mismatches(const ChainReport& r, const Golden& g) {
  std::vector<std::string> bad;
  const std::string eq = "eq" + std::to_string(r.equation);
  if (r.table.size() != 9) return {"chain table has " + std::to_string(r.table.size()) + " cells"};
  const std::vector<std::string> rows =
      r.equation == 1 ? std::vector<std::string>{"a12", "a13", "n12"} : std::vector<std::string>{"m12", "m13", "t12"};
  for (int i = 0; i < 3; ++i)
    for (int c = 0; c < 3; ++c)
      if (r.table[3 * i + c].claimed != g.decimal(eq + ".chain." + rows[i], c))
        bad.push_back("chain cell " + rows[i] + "/" + r.table[3 * i + c].col + " differs from golden");
  if (r.final_claimed != g.decimal(eq + ".chain.final")) bad.push_back("chain final claim differs from golden");
  return bad;
}

std::string pipeline_text(const PipelineReport& r) {
  std::ostringstream o;
  o << "equation " << r.equation << (r.sampled ? " (sampled, " + std::to_string(r.sample_size) + " per step)" : "")
    << "\n";
  o << "quantity";
  for (const char* c : kCaseColumns) o << '\t' << c;
  o << '\n';
  for (int i = 0; i < 3; ++i) {
    o << r.rows[i];
    for (const auto& v : r.table[i]) o << '\t' << v.get_str();
    o << '\n';
  }
  for (const auto& s : r.steps) {
    o << s.spec.step << ": tuples " << s.tuples << ", bounds";
    for (const auto& b : s.max_bound) o << ' ' << b.get_str();
    if (!s.exceptional.empty()) {
      o << ", exceptional";
      for (const auto& e : s.exceptional) o << ' ' << format_tuple(e.params);
    }
    o << '\n';
  }
  o << "final " << leading_name(r.equation) << " <= " << r.final_bound.get_str() << " (box " << r.box.get_str()
    << ")\n";
  return o.str();
}

std::string chain_text(const ChainReport& r) {
  std::ostringstream o;
  for (const auto& e : r.entries)
    o << e.step << '\t' << e.quantity << "\t(log)^" << e.power << '\t' << e.computed.to_string(6) << " <= "
      << e.claimed.get_str() << '\t' << to_string(e.verdict) << '\n';
  o << "threshold " << r.threshold.get_str() << " <= " << r.final_claimed.get_str() << '\t'
    << to_string(r.final_verdict) << '\n';
  return o.str();
}

// Exceptional tuple keys of a sweep in the slot order of the golden file.
std::set<Tuple> exceptional_set(const StepResult& s) {
  std::set<Tuple> out;
  for (const auto& e : s.exceptional) out.insert(e.params);
  return out;
}

}  // namespace

PipelineOptions pipeline_options(int equation, const RunConfig& config, const Golden& golden) {
  PipelineOptions po;
  po.sweep.workers = config.workers;
  po.sweep.precision = config.precision;
  po.sweep.cache_dir = config.cache_dir;
  po.sweep.seed = config.seed;
  if (config.spot_check) {
    po.sweep.sample = *config.spot_check;
    po.published_table = golden.reduce_table(equation);
    po.forced = golden.exceptional(equation);
  }
  return po;
}

std::vector<std::string> pipeline_mismatches(const PipelineReport& rep, const Golden& g) {
  std::vector<std::string> bad;
  const std::string eq = "eq" + std::to_string(rep.equation);
  const CaseTable table = g.reduce_table(rep.equation);
  // In a sampled run every cell is max(sample, published), so equality means
  // the sample stayed at or below the published value.
  for (int i = 0; i < 3; ++i)
    for (int c = 0; c < 4; ++c)
      if (rep.table[i][c] != table[i][c])
        bad.push_back(rep.rows[i] + "/" + kCaseColumns[c] + ": " + rep.table[i][c].get_str() +
                      " != " + table[i][c].get_str());
  const Integer final_golden = g.integer(eq + ".reduce.final");
  if (rep.sampled ? rep.final_bound > final_golden : rep.final_bound != final_golden)
    bad.push_back("final " + rep.final_bound.get_str() + " vs " + final_golden.get_str());
  if (rep.box != g.integer("box.bound")) bad.push_back("box bound differs");

  const auto golden_exc = g.exceptional(rep.equation);
  for (const auto& s : rep.steps) {
    std::set<Tuple> want;
    if (auto it = golden_exc.find(s.spec.step); it != golden_exc.end()) want.insert(it->second.begin(), it->second.end());
    if (exceptional_set(s) != want) bad.push_back(s.spec.step + ": exceptional tuples differ from golden");
  }

  const StepResult& s1 = rep.step("S1");
  if (!s1.single) {
    bad.push_back("S1: no reduction outcome");
  } else {
    if (!proven_gt(s1.single->epsilon, g.decimal(eq + ".step1.epsilon_lower")))
      bad.push_back("S1: epsilon not certified above " + g.text(eq + ".step1.epsilon_lower"));
    if (s1.single->w_bounds != g.integers(eq + ".step1.bounds")) bad.push_back("S1: bounds differ from golden");
  }
  if (!rep.closed) bad.push_back("final bound not below the box");
  return bad;
}

namespace {

int do_enumerate(int equation, int n_max, int a_max, const RunConfig& config, std::ostream& out, std::ostream& log,
                 SolutionSet* keep) {
  return guarded(log, "enumerate", [&] {
    SolutionSet s = equation == 1 ? enumerate_eq1(n_max, a_max) : enumerate_eq2(n_max, a_max);
    std::string text = config.format == "csv" ? solutions_csv(s) : config.format == "text" ? solutions_text(s) : emit(s);
    if (!write_artifact(config, out, log, text)) return kExitMismatch;
    log << "equation " << equation << ": " << s.count_total << " solutions, max " << leading_name(equation) << " = "
        << s.max_leading_index() << '\n';
    int code = kExitOk;
    if (n_max == kDefaultNMax && a_max == kDefaultAMax) {
      const auto bad = enumeration_mismatches(s, Golden::load(config.golden_dir));
      for (const auto& b : bad) log << "mismatch: " << b << '\n';
      if (!bad.empty()) code = kExitMismatch;
    }
    if (keep) *keep = std::move(s);
    return code;
  });
}

int do_bounds(int equation, const RunConfig& config, std::ostream& out, std::ostream& log, ChainReport* keep) {
  return guarded(log, "bounds", [&] {
    ChainReport r = verify_bound_chain(equation, config.precision);
    if (!write_artifact(config, out, log, config.format == "json" ? emit(r) : chain_text(r))) return kExitMismatch;
    for (const auto& e : r.entries)
      if (e.verdict == Verdict::Unknown) {
        log << "bounds: " << e.step << " " << e.quantity << " undecided\n";
        return kExitPrecision;
      }
    auto bad = chain_mismatches(r, Golden::load(config.golden_dir));
    if (!r.passed()) bad.push_back("bound chain not certified");
    for (const auto& b : bad) log << "mismatch: " << b << '\n';
    log << "equation " << equation << ": " << leading_name(equation) << " < " << r.threshold.get_str() << " ("
        << to_string(r.final_verdict) << " against " << r.final_claimed.get_str() << ")\n";
    if (keep) *keep = std::move(r);
    return bad.empty() ? kExitOk : kExitMismatch;
  });
}

int do_pipeline(int equation, const RunConfig& config, std::ostream& out, std::ostream& log, PipelineReport* keep) {
  return guarded(log, "pipeline", [&] {
    prepare_cache(config);
    const Golden g = Golden::load(config.golden_dir);
    PipelineReport r = run_pipeline(equation, pipeline_options(equation, config, g));
    if (!write_artifact(config, out, log, config.format == "json" ? emit(r) : pipeline_text(r))) return kExitMismatch;
    const auto bad = pipeline_mismatches(r, g);
    for (const auto& b : bad) log << "mismatch: " << b << '\n';
    log << "equation " << equation << ": final " << leading_name(equation) << " <= " << r.final_bound.get_str()
        << (r.sampled ? " (sampled)" : "") << '\n';
    if (keep) *keep = std::move(r);
    return bad.empty() ? kExitOk : kExitMismatch;
  });
}

}  // namespace

int cmd_enumerate(int equation, int n_max, int a_max, const RunConfig& config, std::ostream& out, std::ostream& log) {
  return do_enumerate(equation, n_max, a_max, config, out, log, nullptr);
}

int cmd_bounds(int equation, const RunConfig& config, std::ostream& out, std::ostream& log) {
  return do_bounds(equation, config, out, log, nullptr);
}

int cmd_pipeline(int equation, const RunConfig& config, std::ostream& out, std::ostream& log) {
  return do_pipeline(equation, config, out, log, nullptr);
}

int cmd_cf(int terms, const RunConfig& config, std::ostream& out, std::ostream& log) {
  return guarded(log, "cf", [&] {
    if (terms < 1) throw std::invalid_argument("--terms must be positive");
    prepare_cache(config);
    CFExpansion cf = gamma_expansion(terms);
    cf.quotients.resize(terms);
    cf.p.resize(terms);
    cf.q.resize(terms);
    std::string text;
    if (config.format == "json") {
      text = emit(cf);
    } else {
      std::ostringstream o;
      o << '[';
      for (int j = 0; j < terms; ++j) o << (j ? "," : "") << cf.quotients[j].get_str();
      o << "]\n";
      for (int j = 0; j < terms; ++j)
        o << j << ' ' << cf.quotients[j].get_str() << ' ' << cf.p[j].get_str() << ' ' << cf.q[j].get_str() << '\n';
      text = o.str();
    }
    return write_artifact(config, out, log, text) ? kExitOk : kExitMismatch;
  });
}

int cmd_reduce(const ReduceArgs& args, const RunConfig& config, std::ostream& out, std::ostream& log) {
  return guarded(log, "reduce", [&] {
    prepare_cache(config);
    const StepSpec spec = step_spec(args.equation, args.step, {0, 0, 0});
    MuSpec mu = spec.mu;
    for (const auto& r : spec.ranges) {
      if (args.params[r.slot] < 0) throw std::invalid_argument(args.step + " needs parameter slot " + std::to_string(r.slot));
      mu.params[r.slot] = args.params[r.slot];
    }
    const Integer M = args.M ? parse_decimal(*args.M).get_num() : spec.M;
    const Rational A = args.A ? parse_decimal(*args.A) : spec.A;
    const ReductionInstance inst = make_instance(mu, M, A, spec.bases);
    const ReductionOutcome outcome = bd_reduce(inst, kMaxConvergents, config.precision);
    Json j = {{"mu", mu}, {"M", M.get_str()}, {"A", A.get_str()}};
    int code = kExitOk;
    if (const auto* red = std::get_if<Reduced>(&outcome)) {
      j["outcome"] = "reduced";
      j["reduced"] = *red;
    } else if (const auto* deg = std::get_if<Degenerate>(&outcome)) {
      j["outcome"] = "degenerate";
      j["relation"] = deg->relation;
      Json fb = Json::array();
      for (const auto& w : legendre_fallback(inst, deg->relation, args.M ? M : spec.legendre_M)) fb.push_back(w.get_str());
      j["fallback_bounds"] = fb;
    } else {
      j["outcome"] = "exhausted";
      j["convergents_tried"] = std::get<Exhausted>(outcome).convergents_tried;
      code = kExitStep;
    }
    if (!write_artifact(config, out, log, j.dump(2) + "\n")) return kExitMismatch;
    return code;
  });
}

int cmd_verify_all(const RunConfig& config, std::ostream& out, std::ostream& log) {
  RunConfig quiet = config;
  quiet.out.clear();
  quiet.format = "json";
  std::ostringstream sink;
  const Golden g = Golden::load(config.golden_dir);
  Json summary = {{"sampled", config.spot_check.has_value()}};
  std::string line;
  for (int eq : {1, 2}) {
    const std::string key = "eq" + std::to_string(eq);
    SolutionSet sols;
    ChainReport chain;
    PipelineReport rep;
    if (int c = do_enumerate(eq, kDefaultNMax, kDefaultAMax, quiet, sink, log, &sols)) return c;
    if (int c = do_bounds(eq, quiet, sink, log, &chain)) return c;
    if (int c = do_pipeline(eq, quiet, sink, log, &rep)) return c;
    sink.str({});

    // The pipeline starts from M, which must cover the certified threshold,
    // and must end inside the enumerated box.
    const StepSpec s1 = step_spec(eq, "S1");
    if (chain.threshold > s1.M) {
      log << key << ": chain threshold exceeds the reduction start " << s1.M.get_str() << '\n';
      return kExitMismatch;
    }
    if (!(rep.final_bound < Integer(sols.n_max)) || Integer(sols.n_max) != g.integer("box.bound")) {
      log << key << ": reduction does not close inside the enumeration box\n";
      return kExitMismatch;
    }
    summary[key] = {{"solutions", sols.count_total},
                    {"max_leading_index", sols.max_leading_index()},
                    {"threshold", chain.threshold.get_str()},
                    {"final_bound", rep.final_bound.get_str()},
                    {"box", sols.n_max}};
    line += std::string(eq == 1 ? "" : "; ") + "equation " + std::to_string(eq) + ": " +
            std::to_string(sols.count_total) + " solutions, max " + (eq == 1 ? "n₁" : "m₁") + " = " +
            std::to_string(sols.max_leading_index());
  }
  if (config.spot_check) line += " (sampled: " + std::to_string(*config.spot_check) + " tuples per step)";
  summary["summary"] = line;
  if (!config.out.empty() && !write_artifact(config, out, log, summary.dump(2) + "\n")) return kExitMismatch;
  out << line << '\n';
  return kExitOk;
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& log) {
  CLI::App app{"Fibonacci plus powers of two: enumeration, bounds and reduction"};
  app.require_subcommand(1);
  RunConfig config;
  if (const char* env = std::getenv("FIBPOW_CACHE_DIR")) config.cache_dir = env;
  int equation = 1, n_max = kDefaultNMax, a_max = kDefaultAMax, terms = 13;
  int spot = 0;
  ReduceArgs rargs;
  std::vector<int> params;
  std::string M, A;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--precision", config.precision, "starting precision in bits")
        ->check(CLI::Range(static_cast<long>(kMinPrecision), static_cast<long>(kMaxPrecision)));
    sub->add_option("--workers", config.workers, "worker threads")->check(CLI::PositiveNumber);
    sub->add_option("--cache-dir", config.cache_dir, "cache directory (env FIBPOW_CACHE_DIR)");
    sub->add_option("--out", config.out, "output file (default stdout)");
    sub->add_option("--format", config.format, "json, csv or text")->check(CLI::IsMember({"json", "csv", "text"}));
    sub->add_option("--golden-dir", config.golden_dir, "directory with the golden data");
  };
  auto with_equation = [&](CLI::App* sub) {
    sub->add_option("--equation", equation, "1 or 2")->check(CLI::IsMember({1, 2}));
  };
  auto with_sampling = [&](CLI::App* sub) {
    sub->add_option("--spot-check", spot, "sampled tuples per step")->check(CLI::PositiveNumber);
    sub->add_option("--seed", config.seed, "sampling seed");
  };

  auto* en = app.add_subcommand("enumerate", "solutions inside the search box");
  common(en);
  with_equation(en);
  en->add_option("--n-max", n_max, "Fibonacci indices below this")->check(CLI::Range(1, 2000));
  en->add_option("--a-max", a_max, "largest power of two")->check(CLI::Range(0, 2000));

  auto* bo = app.add_subcommand("bounds", "certify the linear-form bound chain");
  common(bo);
  with_equation(bo);

  auto* pi = app.add_subcommand("pipeline", "run the reduction steps");
  common(pi);
  with_equation(pi);
  with_sampling(pi);

  auto* cf = app.add_subcommand("cf", "continued fraction of log(alpha)/log(2)");
  common(cf);
  cf->add_option("--terms", terms, "number of partial quotients")->check(CLI::Range(1, 4096));

  auto* re = app.add_subcommand("reduce", "one Baker-Davenport reduction");
  common(re);
  with_equation(re);
  re->add_option("--step", rargs.step, "S1..S5 or S7")->check(CLI::IsMember({"S1", "S2", "S3", "S4", "S5", "S7"}));
  re->add_option("--params", params, "k,l,r values for the step's slots (-1 unused)")->delimiter(',')->expected(1, 3);
  re->add_option("--M", M, "override of M");
  re->add_option("--A", A, "override of A");

  auto* va = app.add_subcommand("verify-all", "enumeration, bounds and reduction for both equations");
  common(va);
  with_sampling(va);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, log);
  }
  if (spot > 0) config.spot_check = spot;

  if (*en) return cmd_enumerate(equation, n_max, a_max, config, out, log);
  if (*bo) return cmd_bounds(equation, config, out, log);
  if (*pi) return cmd_pipeline(equation, config, out, log);
  if (*cf) return cmd_cf(terms, config, out, log);
  if (*re) {
    rargs.equation = equation;
    for (std::size_t i = 0; i < params.size(); ++i) rargs.params[i] = params[i];
    if (!M.empty()) rargs.M = M;
    if (!A.empty()) rargs.A = A;
    return cmd_reduce(rargs, config, out, log);
  }
  return cmd_verify_all(config, out, log);
}

}  // namespace fibpow
