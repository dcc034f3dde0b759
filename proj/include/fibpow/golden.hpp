#pragma once

#include "fibpow/enumeration.hpp"
#include "fibpow/pipeline.hpp"

#include <map>
#include <string>
#include <vector>

namespace fibpow {

class GoldenError : public std::runtime_error {
 public:
  explicit GoldenError(const std::string& what) : std::runtime_error(what) {}
};

// Reference values: published.txt ("key: tokens") and the two solution lists.
class Golden {
 public:
  static Golden load(const std::string& dir = FIBPOW_GOLDEN_DIR);

  const std::vector<std::string>& tokens(const std::string& key) const;
  std::string text(const std::string& key) const;  // tokens joined by one space
  Integer integer(const std::string& key, std::size_t i = 0) const;
  Rational decimal(const std::string& key, std::size_t i = 0) const;
  std::vector<Integer> integers(const std::string& key) const;
  // Tuples such as "(0,1,10)" padded with -1 to three entries.
  std::vector<Tuple> tuples(const std::string& key) const;
  bool has(const std::string& key) const { return values_.count(key) != 0; }

  // Summary table of the reduction (3 rows x 4 columns).
  CaseTable reduce_table(int equation) const;
  // Exceptional tuples keyed by step, in the (k, l, r) slot order of the sweep.
  std::map<std::string, std::vector<Tuple>> exceptional(int equation) const;

  // Canonical solutions as listed, lexicographically sorted.
  const std::vector<SolutionRecord>& solutions(int equation) const;

 private:
  std::map<std::string, std::vector<std::string>> values_;
  std::vector<SolutionRecord> eq1_, eq2_;
};

Tuple parse_tuple(const std::string& token);
std::string format_tuple(const Tuple& t);

// Rows of the reduction table per equation, in file order.
const std::vector<std::string>& reduce_rows(int equation);

}  // namespace fibpow
