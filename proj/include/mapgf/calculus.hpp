#ifndef MAPGF_CALCULUS_HPP
#define MAPGF_CALCULUS_HPP

#include <map>
#include <set>
#include <stdexcept>
#include <vector>

#include "mapgf/greekfield.hpp"

namespace mapgf {

// ---- Gamma as a derivation on the Greek field ------------------------------
//
// Gamma G = ( (s^-1 - s)/(4(1-eta)s^2) + Theta ) D G on Greek atoms, and
// Gamma s = -(s^-1 - s)^2 / (8(1-eta)s^2). Everything else follows by the
// chain rule. The atom images are assembled from the verified Theta/D tables.

inline GreekRat gamma_image_atom(const GreekAtom& a) {
  const GreekCombo dg = d_op_atom(a);
  MultiPoly js_num;  // (s^-3 - s^-1)/4
  js_num.add_to(Mono::of(var::s, -3), Rational(1, 4));
  js_num.add_to(Mono::of(var::s, -1), Rational(-1, 4));
  const MultiPoly one = MultiPoly::constant(Rational(1));
  const MultiPoly one_m_eta = one - MultiPoly::variable(var::eta);
  GreekRat r = GreekRat(js_num * MultiPoly::of_combo(dg)).over(one_m_eta);
  return r + GreekRat(MultiPoly::of_laurent(theta_of(dg)));
}

inline GreekRat gamma_image_s() {
  // -(s^-4 - 2 s^-2 + 1)/8 / (1-eta)
  MultiPoly num;
  num.add_to(Mono::of(var::s, -4), Rational(-1, 8));
  num.add_to(Mono::of(var::s, -2), Rational(1, 4));
  num.add_to(Mono{}, Rational(-1, 8));
  const MultiPoly one = MultiPoly::constant(Rational(1));
  return GreekRat(num).over(one - MultiPoly::variable(var::eta));
}

// All variables a GreekRat actually involves.
inline std::set<int> variables_of(const GreekRat& e) {
  std::set<int> vars;
  auto scan = [&](const MultiPoly& p) {
    for (auto& [m, c] : p.terms())
      for (auto& [vid, ex] : m.ve) vars.insert(vid);
  };
  scan(e.num());
  for (auto& [f, ex] : e.den()) scan(f);
  return vars;
}

// Gamma on an element of Q(s, Greek atoms); the element must not involve s0/v.
inline GreekRat gamma_calc(const GreekRat& e) {
  GreekRat r;
  for (int vid : variables_of(e)) {
    if (vid == var::s0 || vid == var::v)
      throw std::invalid_argument("gamma_calc: input involves s0 or v");
    const GreekRat de = e.derivative(vid);
    if (de.is_zero()) continue;
    const GreekRat img = (vid == var::s) ? gamma_image_s() : gamma_image_atom(*var::to_atom(vid));
    r = r + img * de;
  }
  return r;
}

// ---- degree bookkeeping ----------------------------------------------------
//
// A G-monomial: eta_alpha zeta_beta (1-eta)^etaShift (1+zeta)^zetaShift
//               s^sExp (1+s)^onePlusSExp, with integer shifts (negative =
// denominator powers). Using s = (1-uz)/(1+uz) and 1+s = 2/(1+uz):
//   (1-uz)^{-c} = (1+s)^c / (2^c s^c),  (1+uz)^{-c} = (1+s)^c / 2^c.
struct GMono {
  Partition alpha, beta;
  int eta_shift = 0;   // exponent of (1-eta); negative for denominators
  int zeta_shift = 0;  // exponent of (1+zeta)
  int s_exp = 0;
  int one_plus_s_exp = 0;
  Rational coeff = Rational(1);
};

struct GDegrees {
  int dgamma = 0, dplus = 0, dminus = 0;
};

inline GDegrees degrees(const GMono& m) {
  GDegrees d;
  d.dgamma = m.alpha.length() + m.beta.length() + m.eta_shift + m.zeta_shift;
  const int w = 2 * (m.alpha.weight() + m.beta.weight());
  d.dplus = w - m.s_exp;
  d.dminus = w + m.s_exp + m.one_plus_s_exp;
  return d;
}

// Convenience: degrees of eta_alpha zeta_beta (1-eta)^{-a} (1+zeta)^{-b}
// (1-uz)^{-cp} (1+uz)^{-cm}.
inline GDegrees degrees(const Partition& alpha, const Partition& beta, int a, int b, int cp,
                        int cm) {
  GMono m;
  m.alpha = alpha;
  m.beta = beta;
  m.eta_shift = -a;
  m.zeta_shift = -b;
  m.s_exp = -cp;
  m.one_plus_s_exp = cp + cm;
  return degrees(m);
}

// Decompose a GreekRat (denominators only (1-eta) and (1+zeta), numerator free
// of gamma) into G-monomials, rewriting bare eta/zeta powers through the
// shifted variables 1-eta and 1+zeta.
inline std::vector<GMono> decompose_shifted(const GreekRat& e) {
  const MultiPoly one = MultiPoly::constant(Rational(1));
  const MultiPoly f_eta = MultiPoly::variable(var::eta) - one;    // monic (eta - 1)
  const MultiPoly f_zeta = MultiPoly::variable(var::zeta) + one;  // monic (zeta + 1)
  int a = 0, b = 0;
  Rational sign_fix(1);
  for (auto& [f, ex] : e.den()) {
    if (f == f_eta) {
      a = ex;
      if (ex % 2) sign_fix = -sign_fix;  // (eta-1)^a = (-1)^a (1-eta)^a
    } else if (f == f_zeta)
      b = ex;
    else
      throw std::invalid_argument("decompose_shifted: unexpected denominator " + f.to_string());
  }
  std::vector<GMono> out;
  for (auto& [mono, c0] : e.num().terms()) {
    // split the monomial
    GMono base;
    base.coeff = c0 * sign_fix;
    int eta_pow = 0, zeta_pow = 0;
    for (auto& [vid, ex] : mono.ve) {
      if (vid == var::eta)
        eta_pow = ex;
      else if (vid == var::zeta)
        zeta_pow = ex;
      else if (vid == var::s)
        base.s_exp = ex;
      else if (auto at = var::to_atom(vid)) {
        if (at->kind == GreekAtom::eta_i)
          for (int r = 0; r < ex; ++r) base.alpha = base.alpha.with_part(at->i);
        else if (at->kind == GreekAtom::zeta_i)
          for (int r = 0; r < ex; ++r) base.beta = base.beta.with_part(at->i);
        else
          throw std::invalid_argument("decompose_shifted: gamma in numerator");
      } else {
        throw std::invalid_argument("decompose_shifted: unexpected variable " + var::name(vid));
      }
    }
    // eta^p = (1 - (1-eta))^p, zeta^q = ((1+zeta) - 1)^q
    // eta^p = sum_i C(p,i)(-1)^i (1-eta)^i ; zeta^q = sum_j C(q,j)(-1)^{q-j} (1+zeta)^j
    for (int i = 0; i <= eta_pow; ++i)
      for (int j = 0; j <= zeta_pow; ++j) {
        GMono t = base;
        t.coeff = base.coeff * Rational::binomial(eta_pow, i) * Rational(i % 2 ? -1 : 1) *
                  Rational::binomial(zeta_pow, j) * Rational((zeta_pow - j) % 2 ? -1 : 1);
        t.eta_shift = i - a;
        t.zeta_shift = j - b;
        out.push_back(t);
      }
  }
  return out;
}

// ---- Laurent series in a local variable with GreekRat coefficients ---------

struct LocalSeries {
  int ord = 0;  // coefficients are valid for exponents <= ord
  std::map<int, GreekRat> c;

  int min_exp() const { return c.empty() ? ord : c.begin()->first; }
  void set(int e, GreekRat v) {
    if (e > ord) return;
    if (v.is_zero())
      c.erase(e);
    else
      c[e] = std::move(v);
  }
  GreekRat coeff(int e) const {
    if (e > ord) throw std::out_of_range("LocalSeries::coeff beyond order");
    auto it = c.find(e);
    return it == c.end() ? GreekRat() : it->second;
  }
  friend LocalSeries operator*(const LocalSeries& A, const LocalSeries& B) {
    LocalSeries r;
    r.ord = std::min(A.min_exp() + B.ord, B.min_exp() + A.ord);
    for (auto& [ea, ca] : A.c)
      for (auto& [eb, cb] : B.c) {
        const int e = ea + eb;
        if (e > r.ord) continue;
        auto it = r.c.find(e);
        if (it == r.c.end())
          r.c.emplace(e, ca * cb);
        else
          it->second = it->second + ca * cb;
      }
    for (auto it = r.c.begin(); it != r.c.end();)
      it = it->second.is_zero() ? r.c.erase(it) : std::next(it);
    return r;
  }
  friend LocalSeries operator+(const LocalSeries& A, const LocalSeries& B) {
    LocalSeries r;
    r.ord = std::min(A.ord, B.ord);
    for (auto& [e, v] : A.c)
      if (e <= r.ord) r.c[e] = v;
    for (auto& [e, v] : B.c) {
      if (e > r.ord) continue;
      auto it = r.c.find(e);
      if (it == r.c.end())
        r.c.emplace(e, v);
      else {
        it->second = it->second + v;
        if (it->second.is_zero()) r.c.erase(it);
      }
    }
    return r;
  }
  // Sum the truncated series back into a single rational expression, with the
  // local variable substituted by the given GreekRat (used for re-summation
  // checks at finite order).
  GreekRat resum(const GreekRat& local) const {
    GreekRat r;
    GreekRat p(Rational(1));
    int cur = 0;
    if (min_exp() < 0) throw std::domain_error("LocalSeries::resum: negative exponents");
    for (auto& [e, v] : c) {
      while (cur < e) {
        p = p * local;
        ++cur;
      }
      r = r + v * p;
    }
    return r;
  }
};

// ---- expansions of xt P(u)/Y(u) at the two critical points -----------------
//
// Plus pole, local variable lam = 1 - uz:
//   xtP/Y = 1/E(lam),  E_j = (1+gamma) d_{j+1} - 2 C^+_{j+1} + C^+_j,
// where (2-l)^3/(1-l) = sum d_j l^j (d = 8, -4, 2, 1, 1, ...) and C^+ are the
// Taylor combos. E_0 = 4(1-eta) and all gamma terms cancel.
// Minus pole, local variable lam~ = 1 + uz:
//   xtP/Y = (2 - lam~) / (lam~^2 Et(lam~)),  Et_j = -(1+gamma)[j>=1] - Ct_{j+1}
// with Et_0 = -2(1+zeta).

struct LocalExp {
  int sign = +1;  // +1: expansion at u = 1/z in (1-uz); -1: at u = -1/z in (1+uz)
  LocalSeries series;
};

namespace detail_xtpy {

inline MultiPoly combo_poly(int sign, int a) {
  return MultiPoly::of_combo(taylor_kernel(sign, a));
}

inline std::vector<GreekRat> invert_power_series(const std::vector<MultiPoly>& E, int ord) {
  // 1 / (E_0 + E_1 lam + ...) to lam^ord; E_0 must be c*(1-eta) or c*(1+zeta)
  std::vector<GreekRat> inv(ord + 1);
  const MultiPoly e0 = E.at(0);
  GreekRat inv0 = GreekRat(MultiPoly::constant(Rational(1))).over(e0);
  inv[0] = inv0;
  for (int m = 1; m <= ord; ++m) {
    GreekRat acc;
    for (int j = 1; j <= m && j < static_cast<int>(E.size()); ++j)
      acc = acc + GreekRat(E[j]) * inv[m - j];
    inv[m] = -(inv0 * acc);
  }
  return inv;
}

}  // namespace detail_xtpy

// Expansion in the local variable (1 -+ uz) to the given order.
inline LocalExp expand_xtpy(int sign, int order) {
  using detail_xtpy::combo_poly;
  const MultiPoly one = MultiPoly::constant(Rational(1));
  const MultiPoly gam = MultiPoly::variable(var::gamma);
  LocalExp ex;
  ex.sign = sign;
  ex.series.ord = order;
  if (sign > 0) {
    std::vector<MultiPoly> E(order + 1);
    auto dcoef = [](int j) { return j == 0 ? 8 : (j == 1 ? -4 : (j == 2 ? 2 : 1)); };
    for (int j = 0; j <= order; ++j) {
      E[j] = (one + gam).scaled(Rational(dcoef(j + 1))) - combo_poly(+1, j + 1).scaled(Rational(2)) +
             combo_poly(+1, j);
      if (E[j].involves(var::gamma))
        throw std::logic_error("expand_xtpy: gamma did not cancel at the plus pole");
    }
    auto inv = detail_xtpy::invert_power_series(E, order);
    for (int m = 0; m <= order; ++m) ex.series.set(m, inv[m]);
    return ex;
  }
  // minus pole: denominator lam^2 * Et(lam), numerator 2 - lam
  const int ord_e = order + 2;
  std::vector<MultiPoly> Et(ord_e + 1);
  for (int j = 0; j <= ord_e; ++j) {
    Et[j] = -combo_poly(-1, j + 1);
    if (j >= 1) Et[j] = Et[j] - (one + gam);
    if (Et[j].involves(var::gamma))
      throw std::logic_error("expand_xtpy: gamma did not cancel at the minus pole");
  }
  auto inv = detail_xtpy::invert_power_series(Et, ord_e);
  // (2 - lam) * lam^{-2} * inv(lam)
  for (int m = -2; m <= order; ++m) {
    GreekRat v = inv[m + 2].scaled(Rational(2));
    if (m + 1 >= 0 && m + 1 <= ord_e) v = v - inv[m + 1];
    ex.series.set(m, v);
  }
  return ex;
}

// Rewrite a local expansion in (1 -+ uz) as a series in s (plus pole) or
// w = 1/s (minus pole):  1-uz = 2s/(1+s),  1+uz = 2w/(1+w).
inline LocalSeries local_to_sw(const LocalExp& ex, int ord) {
  // powers of 2x/(1+x) = 2x * sum_j C(m+j-1, j) (-x)^j
  LocalSeries r;
  r.ord = ord;
  for (auto& [m, v] : ex.series.c) {
    if (m == 0) {
      auto it = r.c.find(0);
      if (it == r.c.end())
        r.c.emplace(0, v);
      else
        it->second = it->second + v;
    } else if (m > 0) {
      // (2x/(1+x))^m = 2^m x^m (1+x)^{-m}
      for (int j = 0; m + j <= ord; ++j) {
        Rational c = Rational::pow(Rational(2), m) * Rational::binomial(m + j - 1, j) *
                     Rational(j % 2 ? -1 : 1);
        auto it = r.c.find(m + j);
        GreekRat add = v.scaled(c);
        if (it == r.c.end())
          r.c.emplace(m + j, add);
        else
          it->second = it->second + add;
      }
    } else {
      // (2x/(1+x))^m with m < 0: ((1+x)/(2x))^{|m|} = 2^m x^m (1+x)^{|m|}
      const int q = -m;
      for (int j = 0; j <= q && m + j <= ord; ++j) {
        Rational c = Rational::pow(Rational(2), m) * Rational::binomial(q, j);
        auto it = r.c.find(m + j);
        GreekRat add = v.scaled(c);
        if (it == r.c.end())
          r.c.emplace(m + j, add);
        else
          it->second = it->second + add;
      }
    }
  }
  for (auto it = r.c.begin(); it != r.c.end();)
    it = it->second.is_zero() ? r.c.erase(it) : std::next(it);
  return r;
}

// ---- residues and the topological recursion --------------------------------

// A Laurent polynomial in s with GreekRat coefficients, as an exact LocalSeries.
inline LocalSeries laurent_of_rat(const GreekRat& e, int svar, int ord) {
  LocalSeries r;
  r.ord = ord;
  for (auto& [m, c] : e.num().by_var(svar)) {
    GreekRat coef = GreekRat(c);
    for (auto& [f, ex] : e.den()) {
      if (f.involves(svar)) throw std::domain_error("laurent_of_rat: denominator involves s");
      coef = coef.over(f, ex);
    }
    r.set(m, coef);
  }
  return r;
}

// Substitute s -> 1/w in a Laurent polynomial (exponent flip).
inline GreekRat flip_s(const GreekRat& e) {
  MultiPoly num;
  for (auto& [m, c] : e.num().terms()) {
    Mono m2 = m;
    for (auto& [vid, ex] : m2.ve)
      if (vid == var::s) ex = -ex;
    std::sort(m2.ve.begin(), m2.ve.end());
    num.add_to(m2, c);
  }
  GreekRat r(num);
  for (auto& [f, ex] : e.den()) {
    if (f.involves(var::s)) throw std::domain_error("flip_s: denominator involves s");
    r = r.over(f, ex);
  }
  return r;
}

// Res_{s=0} [ A(s) * (1+s0) / ((s0-s)(1+s)) ] for the plus pole and
// Res_{w=0} [ A(w) * (1+s0) / ((1-s0 w)(1+w)) ] for the minus pole. The
// explicit z-powers of du and 1/(u0-u) cancel in the s-coordinate; the zPow
// bookkeeping below keeps that cancellation assertable.
inline GreekRat residue_with_prefactor(const LocalSeries& A, int pole_sign) {
  // kernel factor as a power series in the local variable, coefficients in s0
  const int need = -1 - A.min_exp();  // highest kernel order that can reach s^-1
  if (need < 0) return GreekRat();
  LocalSeries K;
  K.ord = need;
  for (int m = 0; m <= need; ++m) {
    // plus: sum_{j+l=m} s0^{-j-1} (-1)^l ; minus: sum_{j+l=m} s0^{j} (-1)^l
    MultiPoly acc;
    for (int j = 0; j <= m; ++j) {
      const Rational sgn((m - j) % 2 ? -1 : 1);
      acc.add_to(Mono::of(var::s0, pole_sign > 0 ? -j - 1 : j), sgn);
    }
    MultiPoly opz0 = MultiPoly::constant(Rational(1)) + MultiPoly::variable(var::s0);
    K.set(m, GreekRat(acc * opz0));
  }
  LocalSeries prod = A * K;
  if (prod.ord < -1) throw std::logic_error("residue_with_prefactor: insufficient order");
  auto it = prod.c.find(-1);
  return it == prod.c.end() ? GreekRat() : it->second;
}

struct TopRecState {
  int gmax = 0;
  std::vector<GreekRat> F;  // F[g] for g >= 1, odd Laurent in s0 over the Greek field
};

// H_g in the s variable: Gamma F_{g-1} + sum_{g1+g2=g, g1,g2>0} F_{g1} F_{g2};
// H_1 = F_0^(2) = u^2 z^2/(1-uz)^4 = (1-s)^2 (1+s)^2 / (16 s^4).
inline GreekRat toprec_H(int g, const std::vector<GreekRat>& F_in_s) {
  if (g == 1) {
    MultiPoly num;  // (1-s)^2 (1+s)^2 / 16 = (1 - 2s^2 + s^4)/16
    num.add_to(Mono{}, Rational(1, 16));
    num.add_to(Mono::of(var::s, 2), Rational(-1, 8));
    num.add_to(Mono::of(var::s, 4), Rational(1, 16));
    return GreekRat(num) * GreekRat::variable(var::s, -4);
  }
  GreekRat h = gamma_calc(F_in_s.at(g - 1));
  for (int g1 = 1; g1 <= g - 1; ++g1) h = h + F_in_s.at(g1) * F_in_s.at(g - g1);
  return h;
}

// One step of the topological recursion: F_g(s0) from lower-genus data.
inline GreekRat toprec_step(int g, const std::vector<GreekRat>& F_in_s) {
  const GreekRat H = toprec_H(g, F_in_s);

  // plus pole: series in s
  GreekRat res_plus, res_minus;
  constexpr int kExact = 1 << 20;  // marker order for exact Laurent data
  {
    LocalSeries Hs = laurent_of_rat(H, var::s, kExact);
    const int M = -Hs.min_exp();
    LocalSeries xt = local_to_sw(expand_xtpy(+1, M + 2), M + 2);
    res_plus = residue_with_prefactor(xt * Hs, +1);
  }
  {
    LocalSeries Hs = laurent_of_rat(flip_s(H), var::s, kExact);
    const int M = -Hs.min_exp();
    LocalSeries xt = local_to_sw(expand_xtpy(-1, M + 2), M + 2);
    res_minus = residue_with_prefactor(xt * Hs, -1);
  }
  GreekRat F = (res_plus + res_minus) * GreekRat::variable(var::s0, -1);

  // structural checks: no s left, odd in s0
  if (variables_of(F).count(var::s))
    throw std::logic_error("toprec_step: residue left an s behind");
  GreekRat odd_check = F + F.negated_var(var::s0);
  if (!odd_check.is_zero()) throw std::logic_error("toprec_step: F_g is not odd in s0");
  return F;
}

// Run the recursion up to gmax. Results carry s0; substituting s0 -> s gives
// the form used inside H at the next genus.
inline TopRecState toprec_F(int gmax) {
  TopRecState st;
  st.gmax = gmax;
  st.F.resize(gmax + 1);
  std::vector<GreekRat> F_in_s(gmax + 1);
  for (int g = 1; g <= gmax; ++g) {
    st.F[g] = toprec_step(g, F_in_s);
    // s0 -> s for use in later H's
    MultiPoly num;
    for (auto& [m, c] : st.F[g].num().terms()) {
      Mono m2 = m;
      for (auto& [vid, ex] : m2.ve)
        if (vid == var::s0) vid = var::s;
      std::sort(m2.ve.begin(), m2.ve.end());
      num.add_to(m2, c);
    }
    GreekRat fs(num);
    for (auto& [f, ex] : st.F[g].den()) fs = fs.over(f, ex);
    F_in_s[g] = fs;
  }
  return st;
}

}  // namespace mapgf

#endif  // MAPGF_CALCULUS_HPP
