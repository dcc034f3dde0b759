#include "fibpow/contfrac.hpp"

#include "fibpow/quadfield.hpp"

#include <filesystem>
#include <fstream>
#include <memory>
#include <mutex>
#include <sstream>

namespace fibpow {

void cf_fill_convergents(CFExpansion& cf) {
  cf.p.clear();
  cf.q.clear();
  Integer p2 = 0, p1 = 1, q2 = 1, q1 = 0;
  for (const Integer& s : cf.quotients) {
    Integer pj = s * p1 + p2, qj = s * q1 + q2;
    cf.p.push_back(pj);
    cf.q.push_back(qj);
    p2 = p1;
    p1 = pj;
    q2 = q1;
    q1 = qj;
  }
}

namespace {

// Quotients of x at one precision; stops at the first undecided tail.
std::vector<Integer> expand_at(const RealBall& x, int n_terms) {
  std::vector<Integer> out;
  const mpfr_prec_t prec = x.prec();
  Integer p2 = 0, p1 = 1, q2 = 1, q1 = 0;
  for (int j = 0; j < n_terms; ++j) {
    // tail x_j = (p_{j-2} - q_{j-2} x) / (q_{j-1} x - p_{j-1})
    RealBall num = RealBall(p2, prec) - x * q2;
    RealBall den = x * q1 - RealBall(p1, prec);
    if (mpfr_sgn(den.lower()) * mpfr_sgn(den.upper()) <= 0) break;
    RealBall tail = num / den;
    auto s = certified_floor(tail);
    if (!s || mpfr_cmp_z(tail.lower(), s->get_mpz_t()) <= 0) break;
    if (j > 0 && *s < 1) break;
    out.push_back(*s);
    Integer pj = *s * p1 + p2, qj = *s * q1 + q2;
    p2 = p1;
    p1 = pj;
    q2 = q1;
    q1 = qj;
  }
  return out;
}

}  // namespace

CFExpansion cf_expand(const BallProducer& x, int n_terms, mpfr_prec_t start_prec) {
  if (n_terms < 0) throw std::invalid_argument("negative term count");
  CFExpansion cf;
  std::vector<Integer> prev;
  cf.quotients = with_escalation(
      start_prec,
      [&](mpfr_prec_t p) -> std::optional<std::vector<Integer>> {
        auto qs = expand_at(x(p), n_terms);
        // Quotients certified at a lower precision must persist.
        for (std::size_t i = 0; i < std::min(prev.size(), qs.size()); ++i)
          if (prev[i] != qs[i]) throw std::logic_error("continued fraction quotient changed under escalation");
        if (qs.size() > prev.size()) prev = qs;
        cf.precision = p;
        if (static_cast<int>(qs.size()) < n_terms) return std::nullopt;
        return qs;
      },
      "continued fraction expansion");
  cf_fill_convergents(cf);
  return cf;
}

CFExpansion cf_expand(const Rational& x, int n_terms) {
  CFExpansion cf;
  Integer num = x.get_num(), den = x.get_den();
  while (static_cast<int>(cf.quotients.size()) < n_terms) {
    Integer s;
    mpz_fdiv_q(s.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
    cf.quotients.push_back(s);
    Integer r = num - s * den;
    if (r == 0) {
      cf.terminated = true;
      break;
    }
    num = den;
    den = r;
  }
  cf_fill_convergents(cf);
  return cf;
}

std::optional<std::pair<int, Integer>> first_denominator_exceeding(const CFExpansion& cf, const Integer& bound) {
  for (std::size_t j = 0; j < cf.q.size(); ++j)
    if (cf.q[j] > bound) return std::make_pair(static_cast<int>(j), cf.q[j]);
  return std::nullopt;
}

Integer max_partial_quotient(const CFExpansion& cf, int j_max) {
  if (j_max < 0 || static_cast<std::size_t>(j_max) + 2 > cf.size())
    throw std::out_of_range("expansion too short for max_partial_quotient");
  Integer m = 0;
  for (int j = 0; j <= j_max; ++j) m = std::max(m, cf.quotients[j + 1]);
  return m;
}

LegendreCheck legendre_gap(const CFExpansion& cf, int j, const RealBall& x) {
  if (j < 0 || static_cast<std::size_t>(j) >= cf.size()) throw std::out_of_range("convergent index");
  const mpfr_prec_t prec = x.prec();
  if (cf.terminated && static_cast<std::size_t>(j) + 1 == cf.size())
    return {RealBall(prec), Comparison::Unknown, true};
  if (static_cast<std::size_t>(j) + 1 >= cf.size()) throw std::out_of_range("quotient s_{j+1} unknown");
  RealBall gap = abs(x - RealBall(make_rational(cf.p[j], cf.q[j]), prec));
  Rational lower = make_rational(1, (cf.quotients[j + 1] + 2) * cf.q[j] * cf.q[j]);
  return {gap, certify_compare(gap, lower), false};
}

RealBall gamma_ball(mpfr_prec_t prec) {
  mpfr_prec_t w = prec + 32;
  RealBall g = log(embed(qr_alpha(), w)) / const_log2(w);
  RealBall out(prec);
  mpfr_set(out.lower_mut(), g.lower(), MPFR_RNDD);
  mpfr_set(out.upper_mut(), g.upper(), MPFR_RNDU);
  return out;
}

void save_cf_cache(const std::string& path, const CFExpansion& cf) {
  std::filesystem::path fp(path);
  if (fp.has_parent_path()) std::filesystem::create_directories(fp.parent_path());
  std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp);
    if (!out) throw std::runtime_error("cannot write " + tmp);
    out << "# precision " << cf.precision << " terms " << cf.size() << "\n";
    for (std::size_t j = 0; j < cf.size(); ++j)
      out << j << ' ' << cf.quotients[j] << ' ' << cf.p[j] << ' ' << cf.q[j] << '\n';
    if (!out) throw std::runtime_error("write failed: " + tmp);
  }
  std::filesystem::rename(tmp, path);
}

std::optional<CFExpansion> load_cf_cache(const std::string& path) {
  std::ifstream in(path);
  if (!in) return std::nullopt;
  CFExpansion cf;
  std::string line;
  std::vector<Integer> ps, qs;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream is(line);
    if (line[0] == '#') {
      std::string tag;
      is >> tag >> tag >> cf.precision;
      continue;
    }
    std::size_t j;
    std::string s, p, q;
    if (!(is >> j >> s >> p >> q) || j != cf.quotients.size()) return std::nullopt;
    cf.quotients.emplace_back(s, 10);
    ps.emplace_back(p, 10);
    qs.emplace_back(q, 10);
  }
  cf_fill_convergents(cf);
  // The stored convergents must agree with the stored quotients.
  if (ps != cf.p || qs != cf.q || cf.precision <= 0) return std::nullopt;
  return cf;
}

namespace {

std::mutex& gamma_mutex() {
  static std::mutex m;
  return m;
}

std::string& cache_dir_slot() {
  static std::string dir;
  return dir;
}

std::unique_ptr<CFExpansion>& gamma_slot() {
  static std::unique_ptr<CFExpansion> slot;
  return slot;
}

}  // namespace

void set_cf_cache_dir(const std::string& dir) {
  std::lock_guard lock(gamma_mutex());
  cache_dir_slot() = dir;
}

const CFExpansion& gamma_expansion(int min_terms) {
  std::lock_guard lock(gamma_mutex());
  auto& slot = gamma_slot();
  if (slot && static_cast<int>(slot->size()) >= min_terms) return *slot;
  int want = std::max(min_terms, kGammaCacheTerms);
  const std::string& dir = cache_dir_slot();
  std::string path = dir.empty() ? std::string() : dir + "/gamma_cf.txt";
  // Earlier references stay valid: the previous object is leaked on growth.
  auto grown = std::make_unique<CFExpansion>(cf_expand(gamma_ball, want, kDefaultPrecision));
  if (!path.empty()) {
    auto cached = load_cf_cache(path);
    if (!cached || cached->size() < grown->size() || cached->quotients != grown->quotients) save_cf_cache(path, *grown);
  }
  slot.release();
  slot = std::move(grown);
  return *slot;
}

}  // namespace fibpow
