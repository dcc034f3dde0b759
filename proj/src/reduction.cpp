#include "fibpow/reduction.hpp"

namespace fibpow {

ReductionInstance make_instance(const MuSpec& spec, const Integer& M, const Rational& A, std::vector<Base> bases) {
  if (M <= 0) throw std::invalid_argument("M must be positive");
  if (A <= 0) throw std::invalid_argument("A must be positive");
  if (bases.empty()) throw std::invalid_argument("no base given");
  ReductionInstance inst;
  inst.mu = [spec](mpfr_prec_t p) { return mu_value(spec, p); };
  inst.spec = spec;
  inst.M = M;
  inst.A = A;
  inst.bases = std::move(bases);
  return inst;
}

int first_convergent_index(const GammaSource& gamma, const Integer& M) {
  const Integer bound = 6 * M;
  for (int terms = kGammaCacheTerms;; terms *= 2) {
    const CFExpansion& cf = gamma.expansion(terms);
    if (auto hit = first_denominator_exceeding(cf, bound)) return hit->first;
    if (cf.terminated || static_cast<int>(cf.size()) < terms) return -1;
  }
}

namespace {

// Reduced outcome at convergent j or nothing when every tried convergent has
// certified epsilon <= 0; nullopt asks for more precision.
std::optional<std::optional<Reduced>> attempt(const ReductionInstance& inst, const CFExpansion& cf, int j0, int j1,
                                              mpfr_prec_t prec) {
  const RealBall g = inst.gamma.value(prec);
  const RealBall mu = inst.mu(prec);
  const RealBall M(inst.M, prec);
  for (int j = j0; j < j1; ++j) {
    const Integer& q = cf.q[j];
    auto dm = nearest_int_distance(mu * q);
    auto dg = nearest_int_distance(g * q);
    if (!dm || !dg) return std::nullopt;
    RealBall eps = *dm - M * *dg;
    if (proven_le(eps, Rational(0))) continue;
    if (!proven_gt(eps, Rational(0))) return std::nullopt;
    Reduced r{j, q, eps, {}};
    RealBall aq = RealBall(inst.A, prec) * q / eps;
    for (Base b : inst.bases) {
      auto w = certified_floor(log(aq) / log_base(b, prec));
      if (!w) return std::nullopt;
      r.w_bounds.push_back(*w);
    }
    return std::optional<Reduced>(std::move(r));
  }
  return std::optional<Reduced>();
}

}  // namespace

ReductionOutcome bd_reduce(const ReductionInstance& inst, int max_convergents, mpfr_prec_t start_prec) {
  if (inst.M <= 0 || inst.A <= 0 || inst.bases.empty()) throw std::invalid_argument("malformed reduction instance");
  int tried = 0;
  const int j0 = first_convergent_index(inst.gamma, inst.M);
  if (j0 >= 0) {
    const CFExpansion& cf = inst.gamma.expansion(j0 + max_convergents + 1);
    const int j1 = std::min<int>(j0 + max_convergents, static_cast<int>(cf.size()));
    tried = j1 - j0;
    auto r = with_escalation(
        start_prec, [&](mpfr_prec_t p) { return attempt(inst, cf, j0, j1, p); }, "Baker-Davenport reduction");
    if (r) return std::move(*r);
  }
  if (inst.spec)
    if (auto rel = detect_degeneracy(*inst.spec)) return Degenerate{*rel};
  return Exhausted{tried};
}

std::optional<Relation> detect_degeneracy(const MuSpec& spec) {
  auto rel = decompose_two_alpha(spec.inner());
  if (rel && rel->sign < 0) return std::nullopt;  // log of a negative number: not a mu
  return rel;
}

Integer max_partial_quotient_below(const CFExpansion& cf, const Integer& bound) {
  Integer m = 0;
  bool past = false;
  for (std::size_t j = 0; j < cf.size(); ++j) {
    if (cf.q[j] > bound) {
      past = true;
      break;
    }
    if (j + 1 >= cf.size()) break;
    m = std::max(m, cf.quotients[j + 1]);
  }
  if (!past && !cf.terminated) throw std::out_of_range("expansion too short for the bound");
  return m;
}

Integer legendre_fallback(const Rational& A, Base base, const Integer& M_adj, const Integer& s_max) {
  if (A <= 0 || M_adj <= 0 || s_max < 0) throw std::invalid_argument("legendre_fallback arguments");
  const Rational target = A * Rational(s_max + 2) * Rational(M_adj);
  if (base == Base::Two) {
    Integer w = 0, pw = 1;
    while (Rational(pw) < target) {
      pw *= 2;
      ++w;
    }
    return w;
  }
  return with_escalation(
      kDefaultPrecision,
      [&](mpfr_prec_t p) -> std::optional<Integer> {
        const RealBall a = embed(qr_alpha(), p);
        RealBall pw(1L, p);
        for (Integer w = 0;; ++w) {
          if (w == 0 ? Rational(1) >= target : proven_le(RealBall(target, p), pw)) return w;
          if (w > 0 && !proven_lt(pw, target)) return std::nullopt;
          pw = pw * a;
        }
      },
      "Legendre fallback");
}

std::vector<Integer> legendre_fallback(const ReductionInstance& inst, const Relation& rel, const Integer& m_base) {
  const Integer m_adj = m_base + std::abs(rel.s);
  const CFExpansion& cf = inst.gamma.expansion(kGammaCacheTerms);
  const Integer s_max = max_partial_quotient_below(cf, m_adj);
  std::vector<Integer> out;
  for (Base b : inst.bases) out.push_back(legendre_fallback(inst.A, b, m_adj, s_max));
  return out;
}

}  // namespace fibpow
