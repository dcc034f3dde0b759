#include "fibpow/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <random>
#include <set>
#include <thread>

namespace fibpow {

long long StepSpec::tuple_count() const {
  if (ranges.empty()) return 1;
  long long n = 0;
  const int kmax = ranges[0].max;
  for (int k = 0; k <= kmax; ++k) {
    long long inner = 1;
    for (std::size_t i = 1; i < ranges.size(); ++i) {
      int lo = (ordered_kl && ranges[i].slot == kSlotL) ? k : 0;
      inner *= std::max(0, ranges[i].max - lo + 1);
    }
    n += inner;
  }
  return n;
}

const Integer& StepResult::bound(Base b) const {
  for (std::size_t i = 0; i < spec.bases.size(); ++i)
    if (spec.bases[i] == b) return max_bound.at(i);
  throw std::out_of_range("step has no bound for base " + std::string(base_name(b)));
}

namespace {

std::string tuple_text(const Tuple& t) {
  std::string s = "(";
  bool first = true;
  for (int v : t) {
    if (v < 0) continue;
    s += (first ? "" : ",") + std::to_string(v);
    first = false;
  }
  return s + ")";
}

}  // namespace

StepFailure::StepFailure(const std::string& step_id, const Tuple& t, const std::string& why)
    : std::runtime_error("step " + step_id + " failed at " + tuple_text(t) + ": " + why), step(step_id), tuple(t) {}

namespace {

constexpr double kFastMargin = 1e-12;
constexpr double kMaxFracError = 1e-15;
constexpr int kTauEntries = 160;

// Tuples of the step with the given first-range value, in lexicographic order.
template <class F>
void for_each_inner(const StepSpec& spec, int outer, F&& f) {
  Tuple t{-1, -1, -1};
  if (spec.ranges.empty()) {
    f(t);
    return;
  }
  t[spec.ranges[0].slot] = outer;
  auto rec = [&](auto&& self, std::size_t i) -> void {
    if (i == spec.ranges.size()) {
      f(t);
      return;
    }
    const auto& r = spec.ranges[i];
    int lo = (spec.ordered_kl && r.slot == kSlotL) ? t[kSlotK] : 0;
    for (int v = lo; v <= r.max; ++v) {
      t[r.slot] = v;
      self(self, i + 1);
    }
  };
  rec(rec, 1);
}

int outer_count(const StepSpec& spec) { return spec.ranges.empty() ? 1 : spec.ranges[0].max + 1; }

struct Partial {
  std::vector<long> max_bound, max_reduced;
  std::vector<Tuple> argmax;
  std::vector<ExceptionalCase> exceptional;
  long long tuples = 0, slow = 0;
  int j_min = -1, j_max = -1;
  std::optional<Reduced> single;

  explicit Partial(std::size_t nb) : max_bound(nb, -1), max_reduced(nb, -1), argmax(nb, Tuple{-1, -1, -1}) {}

  void reduced(const Tuple& t, int j, const std::vector<long>& w) {
    for (std::size_t i = 0; i < w.size(); ++i) {
      if (w[i] > max_reduced[i]) {
        max_reduced[i] = w[i];
        argmax[i] = t;
      }
      max_bound[i] = std::max(max_bound[i], w[i]);
    }
    j_min = j_min < 0 ? j : std::min(j_min, j);
    j_max = std::max(j_max, j);
  }

  void merge(const Partial& o) {
    for (std::size_t i = 0; i < max_bound.size(); ++i) {
      if (o.max_reduced[i] > max_reduced[i]) {
        max_reduced[i] = o.max_reduced[i];
        argmax[i] = o.argmax[i];
      }
      max_bound[i] = std::max(max_bound[i], o.max_bound[i]);
    }
    exceptional.insert(exceptional.end(), o.exceptional.begin(), o.exceptional.end());
    tuples += o.tuples;
    slow += o.slow;
    if (o.j_min >= 0) j_min = j_min < 0 ? o.j_min : std::min(j_min, o.j_min);
    j_max = std::max(j_max, o.j_max);
    if (o.single) single = o.single;
  }
};

MuSpec with_params(const StepSpec& spec, const Tuple& t) {
  MuSpec mu = spec.mu;
  mu.params = t;
  return mu;
}

// Generic certified reduction of one tuple.
void slow_tuple(const StepSpec& spec, const Tuple& t, mpfr_prec_t prec, Partial& out, bool keep_single) {
  ++out.slow;
  ReductionInstance inst = make_instance(with_params(spec, t), spec.M, spec.A, spec.bases);
  ReductionOutcome o = bd_reduce(inst, kMaxConvergents, prec);
  if (auto* r = std::get_if<Reduced>(&o)) {
    std::vector<long> w;
    for (const auto& x : r->w_bounds) w.push_back(x.get_si());
    out.reduced(t, r->j_used, w);
    if (keep_single) out.single = *r;
  } else if (auto* d = std::get_if<Degenerate>(&o)) {
    ExceptionalCase ec{t, d->relation, legendre_fallback(inst, d->relation, spec.legendre_M)};
    for (std::size_t i = 0; i < ec.bounds.size(); ++i) out.max_bound[i] = std::max(out.max_bound[i], ec.bounds[i].get_si());
    out.exceptional.push_back(std::move(ec));
  } else {
    throw StepFailure(spec.step, t, "no positive epsilon and no multiplicative relation");
  }
}

// Double-precision images of the per-convergent quantities, each with a
// proven error below kMaxFracError.
struct FastLevel {
  int j = 0;
  std::array<std::vector<double>, kFactorKinds> frac;
  double mg_lo = 0, mg_hi = 0;             // M ||gamma q||
  std::vector<long> w_lo;                   // per base
  std::vector<std::vector<double>> tau_lo;  // tau_W = A q B^-(W+1), W = w_lo + i
  std::vector<std::vector<double>> tau_hi;
};

struct FastTerm {
  FactorKind kind;
  int exponent, slot_a, slot_b;
};

double down(mpfr_srcptr x) { return mpfr_get_d(x, MPFR_RNDD); }
double up(mpfr_srcptr x) { return mpfr_get_d(x, MPFR_RNDU); }

std::optional<FastLevel> build_level(const StepSpec& spec, const ComponentLogTable& tables, int j, const Integer& q) {
  const mpfr_prec_t prec = tables.prec();
  FastLevel lv;
  lv.j = j;
  mpfr_t mid;
  mpfr_init2(mid, prec + 8);
  bool ok = true;
  for (const auto& f : spec.mu.factors) {
    auto& dst = lv.frac[static_cast<int>(f.kind)];
    if (!dst.empty()) continue;
    const auto& vals = tables.values(f.kind);
    dst.resize(vals.size());
    for (std::size_t i = 0; i < vals.size() && ok; ++i) {
      RealBall y = vals[i] * q;
      mpfr_add(mid, y.lower(), y.upper(), MPFR_RNDN);
      mpfr_div_2ui(mid, mid, 1, MPFR_RNDN);
      mpfr_frac(mid, mid, MPFR_RNDN);
      dst[i] = mpfr_get_d(mid, MPFR_RNDN);
      if (y.rad() > kMaxFracError / 4) ok = false;
    }
  }
  mpfr_clear(mid);
  if (!ok) return std::nullopt;

  auto dg = nearest_int_distance(gamma_ball(prec) * q);
  if (!dg) return std::nullopt;
  RealBall mg = RealBall(spec.M, prec) * *dg;
  lv.mg_lo = down(mg.lower());
  lv.mg_hi = up(mg.upper());

  const RealBall aq = RealBall(spec.A, prec) * q;
  for (Base b : spec.bases) {
    const RealBall lb = log_base(b, prec);
    // B^w0 < A q, so tau_{w0-1} > 1 exceeds every epsilon.
    long w0 = ceil_of_lower(log(aq) / lb).get_si() - 1;
    lv.w_lo.push_back(w0);
    const RealBall base = b == Base::Two ? RealBall(2L, prec) : embed(qr_alpha(), prec);
    RealBall bp = pow_int(base, w0 + 1);
    std::vector<double> lo, hi;
    for (int i = 0; i < kTauEntries; ++i) {
      RealBall tau = aq / bp;
      lo.push_back(down(tau.lower()));
      hi.push_back(up(tau.upper()));
      bp = bp * base;
    }
    lv.tau_lo.push_back(std::move(lo));
    lv.tau_hi.push_back(std::move(hi));
  }
  return lv;
}

enum class Fast { Done, Slow };

Fast fast_tuple(const std::vector<FastLevel>& levels, const std::vector<FastTerm>& terms, const Tuple& t,
                Partial& out, std::vector<long>& w) {
  for (const auto& lv : levels) {
    double s = 0;
    for (const auto& ft : terms) {
      int a = ft.slot_a < 0 ? 0 : t[ft.slot_a];
      int b = ft.slot_b < 0 ? 0 : t[ft.slot_b];
      double v = lv.frac[static_cast<int>(ft.kind)][ComponentLogTable::index(ft.kind, a, b)];
      s += ft.exponent > 0 ? v : -v;
    }
    double d = std::fabs(s - std::nearbyint(s));
    if (std::fabs(d - 0.5) < kFastMargin) return Fast::Slow;
    double eps_lo = d - kFastMargin - lv.mg_hi;
    double eps_hi = d + kFastMargin - lv.mg_lo;
    if (eps_hi < 0) continue;
    if (eps_lo <= 0) return Fast::Slow;
    for (std::size_t bi = 0; bi < lv.w_lo.size(); ++bi) {
      const auto& lo = lv.tau_lo[bi];
      const auto& hi = lv.tau_hi[bi];
      std::size_t i = 0;
      while (i < lo.size() && lo[i] >= eps_hi) ++i;
      if (i >= lo.size() || !(hi[i] < eps_lo)) return Fast::Slow;
      w[bi] = lv.w_lo[bi] + static_cast<long>(i);
    }
    out.reduced(t, lv.j, w);
    return Fast::Done;
  }
  return Fast::Slow;
}

std::vector<Tuple> draw_sample(const StepSpec& spec, const SweepOptions& opt) {
  std::set<Tuple> chosen;
  auto in_range = [&](const Tuple& t) {
    for (const auto& r : spec.ranges)
      if (t[r.slot] < 0 || t[r.slot] > r.max) return false;
    for (int s = 0; s < 3; ++s) {
      bool used = std::any_of(spec.ranges.begin(), spec.ranges.end(), [&](const auto& r) { return r.slot == s; });
      if (!used && t[s] >= 0) return false;
    }
    return !(spec.ordered_kl && t[kSlotK] > t[kSlotL]);
  };
  for (const auto& t : opt.forced)
    if (in_range(t)) chosen.insert(t);
  const long long total = spec.tuple_count();
  const long long want = std::min<long long>(total, static_cast<long long>(chosen.size()) + *opt.sample);
  if (total <= *opt.sample) {
    for (int o = 0; o < outer_count(spec); ++o) for_each_inner(spec, o, [&](const Tuple& t) { chosen.insert(t); });
  } else {
    std::uint64_t step_tag = 0;
    for (char c : spec.step) step_tag = step_tag * 131 + static_cast<unsigned char>(c);
    std::mt19937_64 rng(opt.seed * 1000003ULL + spec.equation * 7919ULL + step_tag);
    while (static_cast<long long>(chosen.size()) < want) {
      Tuple t{-1, -1, -1};
      for (const auto& r : spec.ranges) t[r.slot] = static_cast<int>(rng() % static_cast<std::uint64_t>(r.max + 1));
      if (spec.ordered_kl && t[kSlotK] > t[kSlotL]) std::swap(t[kSlotK], t[kSlotL]);
      chosen.insert(t);
    }
  }
  return {chosen.begin(), chosen.end()};
}

// Runs work(i) for i in [0, n) on the pool; the first exception in index
// order is rethrown.
template <class F>
void parallel_for(int n, int workers, F&& work) {
  std::vector<std::exception_ptr> errors(n);
  std::atomic<int> next{0};
  auto loop = [&] {
    for (int i; (i = next.fetch_add(1)) < n;) {
      try {
        work(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  workers = std::max(1, std::min(workers, n));
  std::vector<std::thread> pool;
  for (int w = 1; w < workers; ++w) pool.emplace_back(loop);
  loop();
  for (auto& th : pool) th.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace

StepResult run_step(const StepSpec& spec, const SweepOptions& opt, ComponentLogTable* tables) {
  if (opt.workers < 1) throw std::invalid_argument("workers must be at least 1");
  if (opt.precision < kMinPrecision) throw std::invalid_argument("precision below the minimum");
  const std::size_t nb = spec.bases.size();
  const bool one_tuple = spec.tuple_count() == 1;
  StepResult res;
  res.spec = spec;
  Partial total(nb);

  if (opt.sample) {
    res.sampled = true;
    const std::vector<Tuple> tuples = draw_sample(spec, opt);
    const int chunk = 64;
    const int chunks = static_cast<int>((tuples.size() + chunk - 1) / chunk);
    std::vector<Partial> parts(chunks, Partial(nb));
    parallel_for(chunks, opt.workers, [&](int c) {
      for (std::size_t i = c * chunk; i < std::min(tuples.size(), std::size_t(c + 1) * chunk); ++i) {
        ++parts[c].tuples;
        slow_tuple(spec, tuples[i], opt.precision, parts[c], one_tuple);
      }
    });
    for (const auto& p : parts) total.merge(p);
  } else {
    std::optional<ComponentLogTable> own;
    if (!tables || tables->prec() != opt.precision) tables = &own.emplace(opt.precision, opt.cache_dir);
    std::vector<FastLevel> levels;
    std::vector<FastTerm> terms;
    if (opt.fast_convergents > 0 && !one_tuple) {
      for (const auto& f : spec.mu.factors) {
        int n = 0;
        for (int s : {f.slot_a, f.slot_b})
          for (const auto& r : spec.ranges)
            if (r.slot == s) n = std::max(n, r.max);
        tables->ensure(f.kind, n);
        terms.push_back({f.kind, f.exponent, f.slot_a, f.slot_b});
      }
      const int j0 = first_convergent_index(GammaSource::standard(), spec.M);
      const CFExpansion& cf = gamma_expansion(j0 + opt.fast_convergents + 1);
      for (int j = j0; j < j0 + opt.fast_convergents; ++j) {
        auto lv = build_level(spec, *tables, j, cf.q[j]);
        if (!lv) break;
        levels.push_back(std::move(*lv));
      }
    }
    const int n = outer_count(spec);
    std::vector<Partial> parts(n, Partial(nb));
    parallel_for(n, opt.workers, [&](int o) {
      Partial& p = parts[o];
      std::vector<long> w(nb);
      for_each_inner(spec, o, [&](const Tuple& t) {
        ++p.tuples;
        if (!levels.empty() && fast_tuple(levels, terms, t, p, w) == Fast::Done) return;
        slow_tuple(spec, t, opt.precision, p, one_tuple);
      });
    });
    for (const auto& p : parts) total.merge(p);
  }

  std::sort(total.exceptional.begin(), total.exceptional.end(),
            [](const auto& a, const auto& b) { return a.params < b.params; });
  for (std::size_t i = 0; i < nb; ++i) {
    res.max_bound.emplace_back(total.max_bound[i]);
    res.max_reduced.emplace_back(total.max_reduced[i]);
  }
  res.argmax = total.argmax;
  res.exceptional = std::move(total.exceptional);
  res.tuples = total.tuples;
  res.slow_path = total.slow;
  res.j_min = total.j_min;
  res.j_max = total.j_max;
  if (res.j_max >= 0) res.q_max = gamma_expansion(res.j_max + 1).q[res.j_max];
  res.single = total.single;
  return res;
}

}  // namespace fibpow
