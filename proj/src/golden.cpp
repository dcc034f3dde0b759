#include "fibpow/golden.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace fibpow {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  return s.substr(b, s.find_last_not_of(" \t\r") - b + 1);
}

std::vector<std::string> data_lines(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw GoldenError("cannot read " + path);
  std::vector<std::string> out;
  std::string line;
  while (std::getline(in, line)) {
    line = trim(line);
    if (!line.empty() && line[0] != '#') out.push_back(line);
  }
  return out;
}

std::vector<SolutionRecord> load_solutions(const std::string& path, int equation) {
  std::vector<SolutionRecord> out;
  for (const auto& line : data_lines(path)) {
    std::istringstream in(line);
    SolutionRecord r;
    r.equation = equation;
    std::string value;
    for (int& v : r.idx) in >> v;
    in >> value;
    if (!in || r.value.set_str(value, 10) != 0) throw GoldenError(path + ": bad line '" + line + "'");
    out.push_back(std::move(r));
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

Tuple parse_tuple(const std::string& token) {
  if (token.size() < 3 || token.front() != '(' || token.back() != ')') throw GoldenError("bad tuple " + token);
  Tuple t{-1, -1, -1};
  std::istringstream in(token.substr(1, token.size() - 2));
  std::string part;
  std::size_t i = 0;
  while (std::getline(in, part, ',')) {
    if (i >= t.size()) throw GoldenError("tuple too long " + token);
    try {
      std::size_t used = 0;
      t[i++] = std::stoi(part, &used);
      if (used != part.size()) throw GoldenError("bad tuple " + token);
    } catch (const std::logic_error&) {
      throw GoldenError("bad tuple " + token);
    }
  }
  return t;
}

std::string format_tuple(const Tuple& t) {
  std::string s = "(";
  for (int v : t) {
    if (v < 0) break;
    if (s.size() > 1) s += ",";
    s += std::to_string(v);
  }
  return s + ")";
}

const std::vector<std::string>& reduce_rows(int equation) {
  static const std::vector<std::string> eq1{"a12", "a13", "n12"};
  static const std::vector<std::string> eq2{"m12", "m13", "t12"};
  return equation == 1 ? eq1 : eq2;
}

Golden Golden::load(const std::string& dir) {
  Golden g;
  for (const auto& line : data_lines(dir + "/published.txt")) {
    const auto colon = line.find(':');
    if (colon == std::string::npos) throw GoldenError("published.txt: no key in '" + line + "'");
    std::istringstream in(line.substr(colon + 1));
    std::vector<std::string> toks;
    for (std::string t; in >> t;) toks.push_back(t);
    if (toks.empty()) throw GoldenError("published.txt: empty value for " + line.substr(0, colon));
    g.values_[trim(line.substr(0, colon))] = std::move(toks);
  }
  g.eq1_ = load_solutions(dir + "/eq1_solutions.txt", 1);
  g.eq2_ = load_solutions(dir + "/eq2_solutions.txt", 2);
  return g;
}

const std::vector<std::string>& Golden::tokens(const std::string& key) const {
  auto it = values_.find(key);
  if (it == values_.end()) throw GoldenError("golden key missing: " + key);
  return it->second;
}

std::string Golden::text(const std::string& key) const {
  std::string s;
  for (const auto& t : tokens(key)) s += (s.empty() ? "" : " ") + t;
  return s;
}

Integer Golden::integer(const std::string& key, std::size_t i) const {
  const auto& t = tokens(key);
  Integer v;
  if (i >= t.size() || v.set_str(t[i], 10) != 0) throw GoldenError("golden key " + key + ": not an integer");
  return v;
}

Rational Golden::decimal(const std::string& key, std::size_t i) const {
  const auto& t = tokens(key);
  if (i >= t.size()) throw GoldenError("golden key " + key + ": too few values");
  try {
    return parse_decimal(t[i]);
  } catch (const std::exception&) {
    throw GoldenError("golden key " + key + ": not a decimal");
  }
}

std::vector<Integer> Golden::integers(const std::string& key) const {
  std::vector<Integer> out;
  for (std::size_t i = 0; i < tokens(key).size(); ++i) out.push_back(integer(key, i));
  return out;
}

std::vector<Tuple> Golden::tuples(const std::string& key) const {
  std::vector<Tuple> out;
  for (const auto& t : tokens(key)) out.push_back(parse_tuple(t));
  return out;
}

CaseTable Golden::reduce_table(int equation) const {
  CaseTable t;
  const std::string prefix = "eq" + std::to_string(equation) + ".reduce.";
  for (int r = 0; r < 3; ++r) {
    auto row = integers(prefix + reduce_rows(equation)[r]);
    if (row.size() != 4) throw GoldenError(prefix + reduce_rows(equation)[r] + ": expected 4 values");
    for (int c = 0; c < 4; ++c) t[r][c] = row[c];
  }
  return t;
}

std::map<std::string, std::vector<Tuple>> Golden::exceptional(int equation) const {
  std::map<std::string, std::vector<Tuple>> out;
  const std::string prefix = "eq" + std::to_string(equation) + ".exceptional.";
  for (const auto& [key, toks] : values_) {
    if (key.rfind(prefix, 0) != 0) continue;
    const std::string step = key.substr(prefix.size());
    const StepSpec spec = step_spec(equation, step, {0, 0, 0});
    for (const Tuple& listed : tuples(key)) {
      Tuple full{-1, -1, -1};
      std::size_t i = 0;
      for (const auto& r : spec.ranges) {
        if (i >= listed.size() || listed[i] < 0) throw GoldenError(key + ": tuple arity");
        full[r.slot] = listed[i++];
      }
      if (i < listed.size() && listed[i] >= 0) throw GoldenError(key + ": tuple arity");
      out[step].push_back(full);
    }
    std::sort(out[step].begin(), out[step].end());
  }
  return out;
}

const std::vector<SolutionRecord>& Golden::solutions(int equation) const { return equation == 1 ? eq1_ : eq2_; }

}  // namespace fibpow
