#ifndef MAPGF_CLOSEDFORM_HPP
#define MAPGF_CLOSEDFORM_HPP

#include <map>
#include <stdexcept>
#include <vector>

#include "mapgf/calculus.hpp"
#include "mapgf/coords.hpp"

namespace mapgf {

// F_g = sum  coeff * eta_alpha zeta_beta (1-eta)^{-a} (1+zeta)^{-b} (1 -+ uz)^{-c}
struct FTerm {
  Partition alpha, beta;
  int a = 0, b = 0, c = 1;
  int sign = +1;  // +1 for (1-uz), -1 for (1+uz)
  Rational coeff;
  auto operator<=>(const FTerm&) const = default;
};
struct ClosedFormF {
  int g = 0;
  std::vector<FTerm> terms;  // sorted, canonical
  bool operator==(const ClosedFormF&) const = default;
};

// L_g = sum coeff * eta_alpha zeta_beta (1-eta)^{-a} (1+zeta)^{-b}
//       [+ log_eta ln(1/(1-eta)) + log_zeta ln(1/(1+zeta)) for g = 1]
struct LTerm {
  Partition alpha, beta;
  int a = 0, b = 0;
  Rational coeff;
  auto operator<=>(const LTerm&) const = default;
};
struct ClosedFormL {
  int g = 0;
  std::vector<LTerm> terms;
  Rational log_eta, log_zeta;
  bool operator==(const ClosedFormL&) const = default;
};

namespace detail_cf {

// Read off the (1-eta)/(1+zeta) denominator exponents (stored monic as
// (eta-1) and (zeta+1)); anything else is an error.
inline void den_exponents(const GreekRat& e, int& a, int& b, Rational& sign_fix) {
  const MultiPoly one = MultiPoly::constant(Rational(1));
  const MultiPoly f_eta = MultiPoly::variable(var::eta) - one;
  const MultiPoly f_zeta = MultiPoly::variable(var::zeta) + one;
  a = b = 0;
  sign_fix = Rational(1);
  for (auto& [f, ex] : e.den()) {
    if (f == f_eta) {
      a = ex;
      if (ex % 2) sign_fix = -sign_fix;
    } else if (f == f_zeta) {
      b = ex;
    } else {
      throw std::logic_error("closed form: unexpected denominator factor " + f.to_string());
    }
  }
}

// Rewrite a polynomial in eta/zeta/eta_i/zeta_i through the shifted variables:
// after this call var::eta stands for (1-eta) and var::zeta for (1+zeta).
inline MultiPoly shift_eta_zeta(const MultiPoly& p) {
  const MultiPoly one = MultiPoly::constant(Rational(1));
  MultiPoly q = p.substituted(var::eta, one - MultiPoly::variable(var::eta));
  return q.substituted(var::zeta, MultiPoly::variable(var::zeta) - one);
}

}  // namespace detail_cf

// Convert a symbolic F_g (odd Laurent in s0 over the Greek field) to the
// canonical closed form. The constant (pole-free) part must cancel, gamma
// must be absent, and every denominator exponent must come out nonnegative.
inline ClosedFormF closed_form_f(const GreekRat& fg, int g) {
  int A = 0, B = 0;
  Rational sign_fix(1);
  detail_cf::den_exponents(fg, A, B, sign_fix);

  // bucket the numerator by s0-power, then convert s0^k into (1 -+ uz)^{-c}:
  //   k > 0: s0^k = sum_{c=0}^{k}  C(k, k-c) (-1)^{k-c} 2^c (1+uz)^{-c}
  //   k < 0: s0^k = sum_{c=0}^{|k|} C(|k|,|k|-c) (-1)^{|k|-c} 2^c (1-uz)^{-c}
  std::map<std::pair<int, int>, MultiPoly> buckets;  // (sign, c) -> atom polynomial
  MultiPoly constant_bucket;
  for (auto& [k, coef] : fg.num().by_var(var::s0)) {
    const int q = std::abs(k);
    for (int c = 0; c <= q; ++c) {
      const Rational w = Rational::binomial(q, q - c) * Rational((q - c) % 2 ? -1 : 1) *
                         Rational::pow(Rational(2), c) * sign_fix;
      MultiPoly add = coef.scaled(w);
      if (c == 0)
        constant_bucket = constant_bucket + add;
      else {
        auto& slot = buckets[{k < 0 ? +1 : -1, c}];
        slot = slot + add;
      }
    }
  }
  if (!constant_bucket.is_zero())
    throw std::logic_error("closed_form_f: pole-free part did not cancel");

  ClosedFormF cf;
  cf.g = g;
  for (auto& [key, poly] : buckets) {
    if (poly.is_zero()) continue;
    const MultiPoly shifted = detail_cf::shift_eta_zeta(poly);
    for (auto& [mono, coef] : shifted.terms()) {
      FTerm t;
      t.sign = key.first;
      t.c = key.second;
      int i = 0, j = 0;
      for (auto& [vid, ex] : mono.ve) {
        if (vid == var::eta)
          i = ex;
        else if (vid == var::zeta)
          j = ex;
        else if (auto at = var::to_atom(vid)) {
          if (at->kind == GreekAtom::eta_i)
            for (int r = 0; r < ex; ++r) t.alpha = t.alpha.with_part(at->i);
          else if (at->kind == GreekAtom::zeta_i)
            for (int r = 0; r < ex; ++r) t.beta = t.beta.with_part(at->i);
          else
            throw std::logic_error("closed_form_f: gamma in numerator");
        } else {
          throw std::logic_error("closed_form_f: unexpected variable " + var::name(vid));
        }
      }
      t.a = A - i;
      t.b = B - j;
      if (t.a < 0 || t.b < 0)
        throw std::logic_error("closed_form_f: positive (1-eta)/(1+zeta) power survived");
      t.coeff = coef;
      cf.terms.push_back(t);
    }
  }
  // merge duplicates, drop zeros, sort canonically
  std::map<FTerm, Rational> merged;
  for (auto& t : cf.terms) {
    FTerm key = t;
    key.coeff = Rational(0);
    merged[key] += t.coeff;
  }
  cf.terms.clear();
  for (auto& [key, c] : merged) {
    if (c.is_zero()) continue;
    FTerm t = key;
    t.coeff = c;
    cf.terms.push_back(t);
  }
  return cf;
}

// Same conversion for the pole-free L_g numerators.
inline std::vector<LTerm> l_terms_from_rat(const GreekRat& e) {
  int A = 0, B = 0;
  Rational sign_fix(1);
  detail_cf::den_exponents(e, A, B, sign_fix);
  std::vector<LTerm> out;
  const MultiPoly shifted = detail_cf::shift_eta_zeta(e.num().scaled(sign_fix));
  std::map<LTerm, Rational> merged;
  for (auto& [mono, coef] : shifted.terms()) {
    LTerm t;
    int i = 0, j = 0;
    for (auto& [vid, ex] : mono.ve) {
      if (vid == var::eta)
        i = ex;
      else if (vid == var::zeta)
        j = ex;
      else if (auto at = var::to_atom(vid)) {
        if (at->kind == GreekAtom::eta_i)
          for (int r = 0; r < ex; ++r) t.alpha = t.alpha.with_part(at->i);
        else if (at->kind == GreekAtom::zeta_i)
          for (int r = 0; r < ex; ++r) t.beta = t.beta.with_part(at->i);
        else
          throw std::logic_error("l_terms_from_rat: gamma in numerator");
      } else {
        throw std::logic_error("l_terms_from_rat: unexpected variable " + var::name(vid));
      }
    }
    t.a = A - i;
    t.b = B - j;
    if (t.a < 0 || t.b < 0)
      throw std::logic_error("l_terms_from_rat: positive shifted power survived");
    merged[t] += coef;
  }
  for (auto& [key, c] : merged) {
    if (c.is_zero()) continue;
    LTerm t = key;
    t.coeff = c;
    out.push_back(t);
  }
  return out;
}

// ---- series expansion of closed forms --------------------------------------

class ClosedFormExpander {
 public:
  explicit ClosedFormExpander(const CoordData& cd) : cd_(cd) {}

  SeriesZUP expand(const FTerm& t) { return greek_part(t) * pole_pow(t.sign, t.c); }
  SeriesZUP expand(const LTerm& t) {
    FTerm f;
    f.alpha = t.alpha;
    f.beta = t.beta;
    f.a = t.a;
    f.b = t.b;
    f.coeff = t.coeff;
    return greek_part(f);
  }
  SeriesZUP expand(const ClosedFormF& cf) {
    SeriesZUP r = SeriesZUP::zero(cd_.trunc);
    for (auto& t : cf.terms) r = r + expand(t);
    return r;
  }
  // Rational part only; for g = 1 the logs are handled by the caller.
  SeriesZUP expand(const ClosedFormL& cf) {
    SeriesZUP r = SeriesZUP::zero(cd_.trunc);
    for (auto& t : cf.terms) r = r + expand(t);
    if (!cf.log_eta.is_zero() || !cf.log_zeta.is_zero()) {
      r = r + log_series(cd_.greek(GreekAtom::Eta()).scaled(Rational(-1))).scaled(cf.log_eta);
      r = r + log_series(cd_.greek(GreekAtom::Zeta())).scaled(cf.log_zeta);
    }
    return r;
  }

 private:
  // ln(1/(1+f)) = -ln(1+f) = sum_{j>=1} (-1)^j f^j / j for f with positive valuation
  SeriesZUP log_series(const SeriesZUP& f) {
    SeriesZUP r = SeriesZUP::zero(cd_.trunc);
    SeriesZUP p = SeriesZUP::one(cd_.trunc, false);
    for (int j = 1; j <= cd_.trunc; ++j) {
      p = p * f;
      if (p.is_zero()) break;
      r = r + p.scaled(Rational(j % 2 ? -1 : 1) / Rational(j));
    }
    return r;
  }

  SeriesZUP greek_part(const FTerm& t) {
    SeriesZUP r = SeriesZUP::one(cd_.trunc, false).scaled(t.coeff);
    for (int p : t.alpha.parts()) r = r * cd_.greek(GreekAtom::Eta(p));
    for (int p : t.beta.parts()) r = r * cd_.greek(GreekAtom::Zeta(p));
    if (t.a > 0) r = r * inv_one_m_eta().pow(t.a);
    if (t.b > 0) r = r * inv_one_p_zeta().pow(t.b);
    return r;
  }

  const SeriesZUP& inv_one_m_eta() {
    if (!inv_eta_) {
      inv_eta_ = (SeriesZUP::one(cd_.trunc, false) - cd_.greek(GreekAtom::Eta())).reciprocal();
    }
    return *inv_eta_;
  }
  const SeriesZUP& inv_one_p_zeta() {
    if (!inv_zeta_) {
      inv_zeta_ = (SeriesZUP::one(cd_.trunc, false) + cd_.greek(GreekAtom::Zeta())).reciprocal();
    }
    return *inv_zeta_;
  }
  const SeriesZUP& pole_pow(int sign, int c) {
    auto& cache = sign > 0 ? pole_plus_ : pole_minus_;
    while (static_cast<int>(cache.size()) <= c) {
      if (cache.empty()) {
        SeriesZUP uz(cd_.trunc, false);
        for (int j = 0; j <= cd_.trunc; ++j) {
          Rational w = sign > 0 ? Rational(1) : Rational(j % 2 ? -1 : 1);
          uz.set({j, j, Partition{}}, w);
        }
        cache.push_back(SeriesZUP::one(cd_.trunc, false));
        cache.push_back(uz);  // (1 -+ uz)^{-1}
      } else {
        cache.push_back(cache.back() * cache[1]);
      }
    }
    return cache[c];
  }

  const CoordData& cd_;
  std::optional<SeriesZUP> inv_eta_, inv_zeta_;
  std::vector<SeriesZUP> pole_plus_, pole_minus_;
};

}  // namespace mapgf

#endif  // MAPGF_CLOSEDFORM_HPP
