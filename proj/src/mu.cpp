#include "fibpow/reduction.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <sstream>
#include <tuple>

namespace fibpow {

const char* base_name(Base b) { return b == Base::Two ? "2" : "alpha"; }

RealBall log_base(Base b, mpfr_prec_t prec) {
  return b == Base::Two ? const_log2(prec) : log(embed(qr_alpha(), prec));
}

const char* factor_name(FactorKind k) {
  switch (k) {
    case FactorKind::Sqrt5: return "sqrt5";
    case FactorKind::TwoPowPlusOne: return "two_pow_plus_one";
    case FactorKind::AlphaPowPlusOne: return "alpha_pow_plus_one";
    case FactorKind::OnePlusTwoNeg: return "one_plus_two_neg";
    case FactorKind::OnePlusAlphaNeg: return "one_plus_alpha_neg";
    case FactorKind::OnePlusTwoNegPair: return "one_plus_two_neg_pair";
    case FactorKind::OnePlusAlphaNegPair: return "one_plus_alpha_neg_pair";
  }
  return "?";
}

bool factor_is_pair(FactorKind k) {
  return k == FactorKind::OnePlusTwoNegPair || k == FactorKind::OnePlusAlphaNegPair;
}

namespace {

// alpha^-n from a shared table.
const QuadRat& alpha_inv_pow(int n) {
  static const std::vector<QuadRat> table = [] {
    std::vector<QuadRat> t;
    QuadRat inv = qr_pow(qr_alpha(), -1);
    QuadRat x(1);
    for (int i = 0; i <= 2 * kRelationMaxAlphaExp; ++i) {
      t.push_back(x);
      x = x * inv;
    }
    return t;
  }();
  if (n < 0 || n >= static_cast<int>(table.size())) throw std::out_of_range("alpha power outside the table");
  return table[n];
}

QuadRat factor_exact(FactorKind kind, int a, int b) {
  switch (kind) {
    case FactorKind::Sqrt5: return qr_sqrt5();
    case FactorKind::TwoPowPlusOne: return qr_two_pow(a) + QuadRat(1);
    case FactorKind::AlphaPowPlusOne: return qr_pow(qr_alpha(), a) + QuadRat(1);
    case FactorKind::OnePlusTwoNeg: return QuadRat(1) + qr_two_pow(-a);
    case FactorKind::OnePlusAlphaNeg: return QuadRat(1) + alpha_inv_pow(a);
    case FactorKind::OnePlusTwoNegPair: return QuadRat(1) + qr_two_pow(-a) + qr_two_pow(-b);
    case FactorKind::OnePlusAlphaNegPair: return QuadRat(1) + alpha_inv_pow(a) + alpha_inv_pow(b);
  }
  throw std::logic_error("unknown factor");
}

RealBall narrow(const RealBall& x, mpfr_prec_t prec) {
  RealBall r(prec);
  mpfr_set(r.lower_mut(), x.lower(), MPFR_RNDD);
  mpfr_set(r.upper_mut(), x.upper(), MPFR_RNDU);
  return r;
}

void check_args(FactorKind kind, int a, int b) {
  if (kind == FactorKind::Sqrt5) return;
  if (a < 0 || (factor_is_pair(kind) && b < 0)) throw std::invalid_argument("negative factor parameter");
}

}  // namespace

RealBall component_value(FactorKind kind, int a, int b, mpfr_prec_t prec) {
  check_args(kind, a, b);
  const mpfr_prec_t w = prec + 16;
  RealBall num(w);
  switch (kind) {
    case FactorKind::Sqrt5:
      num = real_log(Rational(5), w) / RealBall(2L, w);
      break;
    case FactorKind::TwoPowPlusOne:
    case FactorKind::OnePlusTwoNeg:
    case FactorKind::OnePlusTwoNegPair:
      num = real_log(factor_exact(kind, a, b).a, w);
      break;
    default:
      num = log(embed(factor_exact(kind, a, b), w));
  }
  return narrow(num / const_log2(w), prec);
}

namespace {

using MemoKey = std::tuple<int, int, int, mpfr_prec_t>;

const RealBall& memo_component(FactorKind kind, int a, int b, mpfr_prec_t prec) {
  static std::mutex m;
  static std::map<MemoKey, std::unique_ptr<RealBall>> memo;
  MemoKey key{static_cast<int>(kind), a, b, prec};
  {
    std::lock_guard lock(m);
    if (auto it = memo.find(key); it != memo.end()) return *it->second;
  }
  auto v = std::make_unique<RealBall>(component_value(kind, a, b, prec));
  std::lock_guard lock(m);
  auto [it, inserted] = memo.emplace(key, std::move(v));
  return *it->second;
}

int param(const MuSpec& s, int slot) {
  if (slot < 0) return 0;
  int v = s.params.at(slot);
  if (v < 0) throw std::invalid_argument("mu parameter not set");
  return v;
}

}  // namespace

QuadRat MuSpec::inner() const {
  QuadRat x(1);
  for (const auto& f : factors) {
    QuadRat v = factor_exact(f.kind, param(*this, f.slot_a), param(*this, f.slot_b));
    if (v.is_zero()) throw std::domain_error("zero factor in mu");
    x = f.exponent > 0 ? x * v : x / v;
  }
  return x;
}

std::string MuSpec::to_string() const {
  std::ostringstream os;
  os << "eq" << equation << ' ' << step;
  const char* names[] = {"k", "l", "r"};
  for (int i = 0; i < 3; ++i)
    if (params[i] >= 0) os << ' ' << names[i] << '=' << params[i];
  return os.str();
}

RealBall mu_value(const MuSpec& spec, mpfr_prec_t prec) {
  RealBall mu(prec);
  for (const auto& f : spec.factors) {
    const RealBall& c = memo_component(f.kind, param(spec, f.slot_a), param(spec, f.slot_b), prec);
    mu = f.exponent > 0 ? mu + c : mu - c;
  }
  return mu;
}

ComponentLogTable::ComponentLogTable(mpfr_prec_t prec, std::string cache_dir)
    : prec_(prec), cache_dir_(std::move(cache_dir)) {
  covered_.fill(-1);
}

std::size_t ComponentLogTable::index(FactorKind kind, int a, int b) {
  if (kind == FactorKind::Sqrt5) return 0;
  if (!factor_is_pair(kind)) return static_cast<std::size_t>(a);
  if (a > b) std::swap(a, b);
  return static_cast<std::size_t>(b) * (b + 1) / 2 + a;
}

namespace {

std::size_t entries_for(FactorKind kind, int n) {
  if (kind == FactorKind::Sqrt5) return 1;
  if (!factor_is_pair(kind)) return n + 1;
  return static_cast<std::size_t>(n + 1) * (n + 2) / 2;
}

// (a, b) of the i-th entry.
std::pair<int, int> entry_args(FactorKind kind, std::size_t i) {
  if (!factor_is_pair(kind)) return {static_cast<int>(i), 0};
  int b = 0;
  while (static_cast<std::size_t>(b + 1) * (b + 2) / 2 <= i) ++b;
  return {static_cast<int>(i - static_cast<std::size_t>(b) * (b + 1) / 2), b};
}

std::string cache_path(const std::string& dir, FactorKind kind, mpfr_prec_t prec) {
  return dir + "/complog_" + factor_name(kind) + "_p" + std::to_string(prec) + ".txt";
}

std::optional<std::vector<RealBall>> load_table(const std::string& path, FactorKind kind, mpfr_prec_t prec) {
  std::ifstream in(path);
  if (!in) return std::nullopt;
  std::string line;
  std::vector<RealBall> out;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream is(line);
    std::size_t i;
    std::string lo, hi;
    if (!(is >> i >> lo >> hi) || i != out.size()) return std::nullopt;
    try {
      out.push_back(RealBall::from_endpoints(lo, hi, prec));
    } catch (const std::exception&) {
      return std::nullopt;
    }
  }
  if (out.empty()) return std::nullopt;
  // Recompute a few entries; the computation is deterministic, so they must agree exactly.
  const std::size_t stride = std::max<std::size_t>(1, out.size() / 64);
  for (std::size_t i = out.size() - 1;; i -= std::min(i, stride)) {
    auto [a, b] = entry_args(kind, i);
    if (!(component_value(kind, a, b, prec) == out[i])) return std::nullopt;
    if (i == 0) break;
  }
  return out;
}

void save_table(const std::string& path, FactorKind kind, mpfr_prec_t prec, const std::vector<RealBall>& v) {
  std::filesystem::create_directories(std::filesystem::path(path).parent_path());
  std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp);
    if (!out) throw std::runtime_error("cannot write " + tmp);
    out << "# " << factor_name(kind) << " precision " << prec << " entries " << v.size() << '\n';
    for (std::size_t i = 0; i < v.size(); ++i) out << i << ' ' << v[i].lower_hex() << ' ' << v[i].upper_hex() << '\n';
    if (!out) throw std::runtime_error("write failed: " + tmp);
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace

void ComponentLogTable::ensure(FactorKind kind, int n) {
  const int ki = static_cast<int>(kind);
  if (kind == FactorKind::Sqrt5) n = 0;
  if (covered_[ki] >= n) return;
  auto& vals = values_[ki];
  const std::size_t want = entries_for(kind, n);
  bool loaded = false;
  if (!cache_dir_.empty() && vals.empty()) {
    if (auto cached = load_table(cache_path(cache_dir_, kind, prec_), kind, prec_)) {
      vals = std::move(*cached);
      loaded = vals.size() >= want;
    }
  }
  for (std::size_t i = vals.size(); i < want; ++i) {
    auto [a, b] = entry_args(kind, i);
    vals.push_back(component_value(kind, a, b, prec_));
  }
  if (!cache_dir_.empty() && !loaded) save_table(cache_path(cache_dir_, kind, prec_), kind, prec_, vals);
  // A cached table may cover more than asked for.
  int cov = n;
  while (entries_for(kind, cov + 1) <= vals.size() && kind != FactorKind::Sqrt5) ++cov;
  covered_[ki] = cov;
}

GammaSource GammaSource::standard() {
  return GammaSource{gamma_ball, [](int n) -> const CFExpansion& { return gamma_expansion(n); }};
}

GammaSource GammaSource::rational(const Rational& g) {
  auto cf = std::make_shared<CFExpansion>(cf_expand(g));
  return GammaSource{[g](mpfr_prec_t p) { return RealBall(g, p); },
                     [cf](int) -> const CFExpansion& { return *cf; }};
}

}  // namespace fibpow
