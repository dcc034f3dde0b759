#include "fibpow/pipeline.hpp"

#include <algorithm>

namespace fibpow {

namespace {

using FK = FactorKind;

const Integer kM1 = parse_decimal("4.1e62").get_num();
const Integer kM2 = parse_decimal("4.2e62").get_num();

MuFactor fac(FK kind, int exponent, int a = -1, int b = -1) { return MuFactor{kind, exponent, a, b}; }

struct StepTemplate {
  const char* step;
  std::vector<MuFactor> factors;
  const char* A;
  std::vector<std::pair<Base, const char*>> outputs;
  std::vector<int> slots;
  bool ordered_kl = false;
};

std::vector<StepTemplate> templates(int equation) {
  if (equation == 1)
    return {
        {"S1", {fac(FK::Sqrt5, -1)}, "66", {{Base::Two, "a1-a2"}, {Base::Alpha, "n1-n2"}}, {}},
        {"S2", {fac(FK::Sqrt5, -1), fac(FK::TwoPowPlusOne, -1, kSlotK)}, "16",
         {{Base::Two, "a1-a3"}, {Base::Alpha, "n1-n2"}}, {kSlotK}},
        {"S3", {fac(FK::Sqrt5, -1), fac(FK::OnePlusTwoNegPair, -1, kSlotK, kSlotL)}, "6", {{Base::Alpha, "n1-n2"}},
         {kSlotK, kSlotL}, true},
        {"S4", {fac(FK::AlphaPowPlusOne, 1, kSlotR), fac(FK::Sqrt5, -1), fac(FK::TwoPowPlusOne, -1, kSlotK)}, "5",
         {{Base::Two, "a1-a3"}}, {kSlotK, kSlotR}},
        {"S5", {fac(FK::AlphaPowPlusOne, 1, kSlotR), fac(FK::Sqrt5, -1)}, "8", {{Base::Two, "a1-a2"}}, {kSlotR}},
        {"S7",
         {fac(FK::OnePlusAlphaNeg, 1, kSlotR), fac(FK::Sqrt5, -1), fac(FK::OnePlusTwoNegPair, -1, kSlotK, kSlotL)},
         "3", {{Base::Alpha, "n1"}}, {kSlotK, kSlotL, kSlotR}, true},
    };
  if (equation == 2)
    return {
        {"S1", {fac(FK::Sqrt5, -1)}, "43", {{Base::Two, "t1-t2"}, {Base::Alpha, "m1-m2"}}, {}},
        {"S2", {fac(FK::AlphaPowPlusOne, 1, kSlotK), fac(FK::Sqrt5, -1)}, "36",
         {{Base::Two, "t1-t2"}, {Base::Alpha, "m1-m3"}}, {kSlotK}},
        {"S3", {fac(FK::OnePlusAlphaNegPair, 1, kSlotK, kSlotL), fac(FK::Sqrt5, -1)}, "6", {{Base::Two, "t1-t2"}},
         {kSlotK, kSlotL}, true},
        {"S4", {fac(FK::AlphaPowPlusOne, 1, kSlotK), fac(FK::Sqrt5, -1), fac(FK::TwoPowPlusOne, -1, kSlotR)}, "9",
         {{Base::Alpha, "m1-m3"}}, {kSlotK, kSlotR}},
        {"S5", {fac(FK::Sqrt5, -1), fac(FK::TwoPowPlusOne, -1, kSlotR)}, "12", {{Base::Alpha, "m1-m2"}}, {kSlotR}},
        {"S7",
         {fac(FK::OnePlusAlphaNegPair, 1, kSlotK, kSlotL), fac(FK::Sqrt5, -1), fac(FK::OnePlusTwoNeg, -1, kSlotR)},
         "6", {{Base::Alpha, "m1"}}, {kSlotK, kSlotL, kSlotR}, true},
    };
  throw std::invalid_argument("equation must be 1 or 2");
}

}  // namespace

StepSpec step_spec(int equation, const std::string& step, const Tuple& ranges) {
  for (const auto& t : templates(equation)) {
    if (step != t.step) continue;
    StepSpec s;
    s.equation = equation;
    s.step = step;
    s.mu = MuSpec{equation, step, t.factors, {-1, -1, -1}};
    s.A = parse_decimal(t.A);
    s.M = equation == 1 ? kM1 : kM2;
    // The printed fallback for this step multiplies by 4.2e62.
    s.legendre_M = (equation == 1 && step == "S4") ? kM2 : s.M;
    for (const auto& [b, q] : t.outputs) {
      s.bases.push_back(b);
      s.quantities.push_back(q);
    }
    for (int slot : t.slots) {
      if (ranges[slot] < 0) throw std::invalid_argument("missing range for step " + step);
      s.ranges.push_back({slot, ranges[slot]});
    }
    s.ordered_kl = t.ordered_kl;
    return s;
  }
  throw std::invalid_argument("unknown step " + step);
}

const StepResult& PipelineReport::step(const std::string& id) const {
  for (const auto& s : steps)
    if (s.spec.step == id) return s;
  throw std::out_of_range("no step " + id);
}

namespace {

// Table cell (row, column) fed by the bound of one step and base.
struct Route {
  const char* step;
  Base base;
  int row, col;
};

std::vector<Route> routes(int equation) {
  if (equation == 1)
    // rows a1-a2, a1-a3, n1-n2
    return {{"S1", Base::Two, 0, 0},   {"S1", Base::Two, 0, 1},   {"S5", Base::Two, 0, 2},
            {"S2", Base::Two, 1, 0},   {"S4", Base::Two, 1, 1},   {"S4", Base::Two, 1, 2},
            {"S3", Base::Alpha, 2, 0}, {"S2", Base::Alpha, 2, 1}, {"S1", Base::Alpha, 2, 2}};
  // rows m1-m2, m1-m3, t1-t2
  return {{"S1", Base::Alpha, 0, 0}, {"S1", Base::Alpha, 0, 1}, {"S5", Base::Alpha, 0, 2},
          {"S2", Base::Alpha, 1, 0}, {"S4", Base::Alpha, 1, 1}, {"S4", Base::Alpha, 1, 2},
          {"S3", Base::Two, 2, 0},   {"S2", Base::Two, 2, 1},   {"S1", Base::Two, 2, 2}};
}

}  // namespace

PipelineReport run_pipeline(int equation, const PipelineOptions& opt) {
  if (equation != 1 && equation != 2) throw std::invalid_argument("equation must be 1 or 2");
  PipelineReport rep;
  rep.equation = equation;
  rep.precision = opt.sweep.precision;
  rep.sampled = opt.sweep.sample.has_value();
  rep.sample_size = opt.sweep.sample.value_or(0);
  rep.seed = opt.sweep.seed;
  rep.rows = equation == 1 ? std::array<std::string, 3>{"a1-a2", "a1-a3", "n1-n2"}
                           : std::array<std::string, 3>{"m1-m2", "m1-m3", "t1-t2"};
  const auto rt = routes(equation);
  ComponentLogTable tables(opt.sweep.precision, opt.sweep.cache_dir);

  // Bound of (step, base) used downstream; a sample never lowers the table value.
  auto value = [&](const std::string& step, Base b) {
    Integer v = rep.step(step).bound(b);
    if (rep.sampled && opt.published_table)
      for (const auto& r : rt)
        if (step == r.step && r.base == b) v = std::max(v, (*opt.published_table)[r.row][r.col]);
    return static_cast<int>(v.get_si());
  };
  auto run = [&](const std::string& step, const Tuple& ranges) {
    SweepOptions so = opt.sweep;
    if (auto it = opt.forced.find(step); it != opt.forced.end()) so.forced = it->second;
    rep.steps.push_back(run_step(step_spec(equation, step, ranges), so, &tables));
  };

  const Base two = Base::Two, alpha = Base::Alpha;
  run("S1", {-1, -1, -1});
  if (equation == 1) {
    const int a12 = value("S1", two), n12 = value("S1", alpha);
    run("S2", {a12, -1, -1});
    run("S3", {a12, value("S2", two), -1});
    run("S5", {-1, -1, n12});
    run("S4", {std::max(a12, value("S5", two)), -1, std::max(value("S2", alpha), n12)});
  } else {
    const int t12 = value("S1", two), m12 = value("S1", alpha);
    run("S2", {m12, -1, -1});
    run("S3", {m12, value("S2", alpha), -1});
    run("S5", {-1, -1, t12});
    run("S4", {std::max(m12, value("S5", alpha)), -1, std::max(value("S2", two), t12)});
  }

  for (auto& row : rep.table) row.fill(0);
  for (const auto& r : rt) {
    rep.table[r.row][r.col] = value(r.step, r.base);
    rep.table[r.row][3] = std::max(rep.table[r.row][3], rep.table[r.row][r.col]);
  }
  auto overall = [&](int row) { return static_cast<int>(rep.table[row][3].get_si()); };
  if (equation == 1) {
    run("S7", {overall(0), overall(1), overall(2)});
  } else {
    // Ranges one above the overall column, as in the published sweep.
    run("S7", {overall(0) + 1, overall(1) + 1, overall(2) + 1});
  }
  rep.final_bound = rep.steps.back().bound(Base::Alpha);
  rep.closed = rep.final_bound < rep.box;
  rep.notes = {
      "Every sweep starts its parameters at 0, so small differences need no separate routing.",
      "Step 6 reuses the Step 4 sweep, whose ranges cover both cases.",
  };
  if (rep.sampled) rep.notes.push_back("Sampled run: bounds are maxima over the sample only.");
  return rep;
}

}  // namespace fibpow
