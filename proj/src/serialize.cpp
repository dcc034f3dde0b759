#include "fibpow/serialize.hpp"

#include <sstream>

namespace nlohmann {

template <>
struct adl_serializer<mpz_class> {
  static void to_json(json& j, const mpz_class& x) { j = x.get_str(); }
  static void from_json(const json& j, mpz_class& x) {
    if (x.set_str(j.get<std::string>(), 10) != 0) throw std::invalid_argument("bad integer in JSON");
  }
};

template <>
struct adl_serializer<mpq_class> {
  static void to_json(json& j, const mpq_class& x) { j = x.get_str(); }
  static void from_json(const json& j, mpq_class& x) {
    if (x.set_str(j.get<std::string>(), 10) != 0) throw std::invalid_argument("bad rational in JSON");
    x.canonicalize();
  }
};

}  // namespace nlohmann

namespace fibpow {

namespace {

template <class E, std::size_t N>
E enum_from(const std::string& s, const std::array<E, N>& all, const char* (*name)(E)) {
  for (E e : all)
    if (s == name(e)) return e;
  throw std::invalid_argument("unknown name in JSON: " + s);
}

const std::array<Base, 2> kBases{Base::Two, Base::Alpha};
const std::array<FactorKind, kFactorKinds> kKinds{
    FactorKind::Sqrt5,           FactorKind::TwoPowPlusOne,     FactorKind::AlphaPowPlusOne,
    FactorKind::OnePlusTwoNeg,   FactorKind::OnePlusAlphaNeg,   FactorKind::OnePlusTwoNegPair,
    FactorKind::OnePlusAlphaNegPair};
const std::array<Verdict, 3> kVerdicts{Verdict::Certified, Verdict::Violated, Verdict::Unknown};

const std::array<const char*, 5>& index_names(int equation) {
  static const std::array<const char*, 5> eq1{"n1", "n2", "a1", "a2", "a3"};
  static const std::array<const char*, 5> eq2{"m1", "m2", "m3", "t1", "t2"};
  return equation == 1 ? eq1 : eq2;
}

Json tuple_json(const Tuple& t) {
  Json j = Json::array();
  for (int v : t) j.push_back(v);
  return j;
}

Json bases_json(const std::vector<Base>& bs) {
  Json j = Json::array();
  for (Base b : bs) j.push_back(base_name(b));
  return j;
}

std::vector<Base> bases_from(const Json& j) {
  std::vector<Base> out;
  for (const auto& b : j) out.push_back(enum_from(b.get<std::string>(), kBases, base_name));
  return out;
}

Json mu_json(const MuSpec& m) {
  Json fs = Json::array();
  for (const auto& f : m.factors)
    fs.push_back({{"kind", factor_name(f.kind)}, {"exponent", f.exponent}, {"slot_a", f.slot_a}, {"slot_b", f.slot_b}});
  return {{"equation", m.equation}, {"step", m.step}, {"factors", fs}, {"params", tuple_json(m.params)},
          {"inner", m.to_string()}};
}

MuSpec mu_from(const Json& j) {
  MuSpec m;
  m.equation = j.at("equation");
  m.step = j.at("step");
  for (const auto& f : j.at("factors"))
    m.factors.push_back({enum_from(f.at("kind").get<std::string>(), kKinds, factor_name), f.at("exponent"),
                         f.at("slot_a"), f.at("slot_b")});
  m.params = j.at("params").get<Tuple>();
  return m;
}

Json relation_json(const Relation& r) { return {{"sign", r.sign}, {"e", r.e}, {"s", r.s}}; }
Relation relation_from(const Json& j) { return {j.at("sign"), j.at("e"), j.at("s")}; }

Json spec_json(const StepSpec& s) {
  Json ranges = Json::array();
  for (const auto& r : s.ranges) ranges.push_back({{"slot", r.slot}, {"max", r.max}});
  return {{"equation", s.equation}, {"step", s.step},       {"mu", mu_json(s.mu)},
          {"A", s.A},               {"M", s.M},             {"legendre_M", s.legendre_M},
          {"bases", bases_json(s.bases)}, {"quantities", s.quantities}, {"ranges", ranges},
          {"ordered_kl", s.ordered_kl}};
}

StepSpec spec_from(const Json& j) {
  StepSpec s;
  s.equation = j.at("equation");
  s.step = j.at("step");
  s.mu = mu_from(j.at("mu"));
  s.A = j.at("A").get<Rational>();
  s.M = j.at("M").get<Integer>();
  s.legendre_M = j.at("legendre_M").get<Integer>();
  s.bases = bases_from(j.at("bases"));
  s.quantities = j.at("quantities").get<std::vector<std::string>>();
  for (const auto& r : j.at("ranges")) s.ranges.push_back({r.at("slot"), r.at("max")});
  s.ordered_kl = j.at("ordered_kl");
  return s;
}

}  // namespace

void to_json(Json& j, const RealBall& x) {
  j = {{"prec", x.prec()}, {"lo", x.lower_hex()}, {"hi", x.upper_hex()}, {"approx", x.to_string(12)}};
}

void from_json(const Json& j, RealBall& x) {
  x = RealBall::from_endpoints(j.at("lo"), j.at("hi"), j.at("prec").get<mpfr_prec_t>());
}

void to_json(Json& j, const SolutionRecord& s) {
  j = Json::object();
  const auto& names = index_names(s.equation);
  for (int i = 0; i < 5; ++i) j[names[i]] = s.idx[i];
  j["value"] = s.value;
}

void from_json(const Json& j, SolutionRecord& s) {
  s.equation = j.contains("n1") ? 1 : 2;
  const auto& names = index_names(s.equation);
  for (int i = 0; i < 5; ++i) s.idx[i] = j.at(names[i]);
  s.value = j.at("value").get<Integer>();
}

void to_json(Json& j, const SolutionSet& s) {
  j = {{"equation", s.equation},       {"n_max", s.n_max},
       {"a_max", s.a_max},             {"count_total", s.count_total},
       {"count_canonical", s.count_canonical}, {"solutions", s.solutions}};
}

void from_json(const Json& j, SolutionSet& s) {
  s.equation = j.at("equation");
  s.n_max = j.at("n_max");
  s.a_max = j.at("a_max");
  s.count_total = j.at("count_total");
  s.count_canonical = j.at("count_canonical");
  s.solutions.clear();
  for (const auto& r : j.at("solutions")) {
    SolutionRecord rec = r.get<SolutionRecord>();
    rec.equation = s.equation;
    s.solutions.push_back(std::move(rec));
  }
}

void to_json(Json& j, const CFExpansion& cf) {
  j = {{"precision", cf.precision}, {"terminated", cf.terminated}, {"quotients", cf.quotients},
       {"p", cf.p},                 {"q", cf.q}};
}

void from_json(const Json& j, CFExpansion& cf) {
  cf.precision = j.at("precision");
  cf.terminated = j.at("terminated");
  cf.quotients = j.at("quotients").get<std::vector<Integer>>();
  cf.p = j.at("p").get<std::vector<Integer>>();
  cf.q = j.at("q").get<std::vector<Integer>>();
}

void to_json(Json& j, const ChainReport& r) {
  Json entries = Json::array();
  for (const auto& e : r.entries)
    entries.push_back({{"step", e.step},
                       {"quantity", e.quantity},
                       {"power", e.power},
                       {"computed", e.computed},
                       {"claimed", e.claimed},
                       {"verdict", to_string(e.verdict)}});
  Json table = Json::array();
  for (const auto& c : r.table)
    table.push_back({{"row", c.row}, {"col", c.col}, {"power", c.power}, {"claimed", c.claimed}, {"entry", c.entry}});
  j = {{"equation", r.equation},
       {"precision", r.precision},
       {"entries", entries},
       {"table", table},
       {"final_coefficient", r.final_coefficient},
       {"threshold", r.threshold},
       {"final_claimed", r.final_claimed},
       {"final_verdict", to_string(r.final_verdict)},
       {"passed", r.passed()}};
}

void from_json(const Json& j, ChainReport& r) {
  r.equation = j.at("equation");
  r.precision = j.at("precision");
  r.entries.clear();
  for (const auto& e : j.at("entries"))
    r.entries.push_back({e.at("step"), e.at("quantity"), e.at("power"), e.at("computed").get<RealBall>(),
                         e.at("claimed").get<Rational>(),
                         enum_from(e.at("verdict").get<std::string>(), kVerdicts, to_string)});
  r.table.clear();
  for (const auto& c : j.at("table"))
    r.table.push_back({c.at("row"), c.at("col"), c.at("power"), c.at("claimed").get<Rational>(), c.at("entry")});
  r.final_coefficient = j.at("final_coefficient").get<RealBall>();
  r.threshold = j.at("threshold").get<Integer>();
  r.final_claimed = j.at("final_claimed").get<Rational>();
  r.final_verdict = enum_from(j.at("final_verdict").get<std::string>(), kVerdicts, to_string);
}

void to_json(Json& j, const Relation& r) { j = relation_json(r); }
void from_json(const Json& j, Relation& r) { r = relation_from(j); }
void to_json(Json& j, const MuSpec& m) { j = mu_json(m); }
void from_json(const Json& j, MuSpec& m) { m = mu_from(j); }
void to_json(Json& j, const StepSpec& s) { j = spec_json(s); }
void from_json(const Json& j, StepSpec& s) { s = spec_from(j); }

void to_json(Json& j, const Reduced& r) {
  j = {{"j_used", r.j_used}, {"q", r.q}, {"epsilon", r.epsilon}, {"w_bounds", r.w_bounds}};
}

void from_json(const Json& j, Reduced& r) {
  r.j_used = j.at("j_used");
  r.q = j.at("q").get<Integer>();
  r.epsilon = j.at("epsilon").get<RealBall>();
  r.w_bounds = j.at("w_bounds").get<std::vector<Integer>>();
}

void to_json(Json& j, const StepResult& r) {
  Json argmax = Json::array();
  for (const auto& t : r.argmax) argmax.push_back(tuple_json(t));
  Json exc = Json::array();
  for (const auto& e : r.exceptional)
    exc.push_back({{"params", tuple_json(e.params)}, {"relation", relation_json(e.relation)}, {"bounds", e.bounds}});
  j = {{"spec", spec_json(r.spec)},
       {"max_bound", r.max_bound},
       {"max_reduced", r.max_reduced},
       {"argmax", argmax},
       {"exceptional", exc},
       {"tuples", r.tuples},
       {"slow_path", r.slow_path},
       {"j_min", r.j_min},
       {"j_max", r.j_max},
       {"q_max", r.q_max},
       {"single", r.single ? Json(*r.single) : Json(nullptr)},
       {"sampled", r.sampled}};
}

void from_json(const Json& j, StepResult& r) {
  r.spec = spec_from(j.at("spec"));
  r.max_bound = j.at("max_bound").get<std::vector<Integer>>();
  r.max_reduced = j.at("max_reduced").get<std::vector<Integer>>();
  r.argmax.clear();
  for (const auto& t : j.at("argmax")) r.argmax.push_back(t.get<Tuple>());
  r.exceptional.clear();
  for (const auto& e : j.at("exceptional"))
    r.exceptional.push_back({e.at("params").get<Tuple>(), relation_from(e.at("relation")),
                             e.at("bounds").get<std::vector<Integer>>()});
  r.tuples = j.at("tuples");
  r.slow_path = j.at("slow_path");
  r.j_min = j.at("j_min");
  r.j_max = j.at("j_max");
  r.q_max = j.at("q_max").get<Integer>();
  if (j.at("single").is_null())
    r.single.reset();
  else
    r.single = j.at("single").get<Reduced>();
  r.sampled = j.at("sampled");
}

void to_json(Json& j, const PipelineReport& r) {
  Json table = Json::array();
  for (int i = 0; i < 3; ++i) {
    Json row = {{"quantity", r.rows[i]}};
    for (int c = 0; c < 4; ++c) row[kCaseColumns[c]] = r.table[i][c];
    table.push_back(row);
  }
  j = {{"equation", r.equation}, {"precision", r.precision}, {"sampled", r.sampled},
       {"sample_size", r.sample_size}, {"seed", r.seed},     {"steps", r.steps},
       {"table", table},         {"final_bound", r.final_bound}, {"box", r.box},
       {"closed", r.closed},     {"notes", r.notes}};
}

void from_json(const Json& j, PipelineReport& r) {
  r.equation = j.at("equation");
  r.precision = j.at("precision");
  r.sampled = j.at("sampled");
  r.sample_size = j.at("sample_size");
  r.seed = j.at("seed");
  r.steps = j.at("steps").get<std::vector<StepResult>>();
  const auto& table = j.at("table");
  if (table.size() != 3) throw std::invalid_argument("pipeline table needs 3 rows");
  for (int i = 0; i < 3; ++i) {
    r.rows[i] = table[i].at("quantity");
    for (int c = 0; c < 4; ++c) r.table[i][c] = table[i].at(kCaseColumns[c]).get<Integer>();
  }
  r.final_bound = j.at("final_bound").get<Integer>();
  r.box = j.at("box").get<Integer>();
  r.closed = j.at("closed");
  r.notes = j.at("notes").get<std::vector<std::string>>();
}

std::string solutions_csv(const SolutionSet& s) {
  std::ostringstream out;
  const auto& names = index_names(s.equation);
  for (const char* n : names) out << n << ',';
  out << "value\n";
  for (const auto& r : s.solutions) {
    for (int v : r.idx) out << v << ',';
    out << r.value.get_str() << '\n';
  }
  return out.str();
}

std::string solutions_text(const SolutionSet& s) {
  std::ostringstream out;
  out << "# equation " << s.equation << ": " << s.count_total << " solutions (" << s.count_canonical
      << " without index 1), max leading index " << s.max_leading_index() << '\n';
  out << "#";
  for (const char* n : index_names(s.equation)) out << ' ' << n;
  out << " value\n";
  for (const auto& r : s.solutions) {
    for (int v : r.idx) out << v << ' ';
    out << r.value.get_str() << '\n';
  }
  return out.str();
}

}  // namespace fibpow
