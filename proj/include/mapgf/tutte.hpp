#ifndef MAPGF_TUTTE_HPP
#define MAPGF_TUTTE_HPP

#include <map>
#include <optional>
#include <stdexcept>
#include <vector>

#include "mapgf/series.hpp"

namespace mapgf {

// Delta f = (f(x) - f(0))/x : drop x^0 terms, shift the rest down.
inline SeriesTXP apply_delta(const SeriesTXP& f) {
  SeriesTXP r(f.trunc(), false);
  for (auto& [key, c] : f.terms())
    if (key.k >= 1) r.set({key.n, key.k - 1, key.mu}, c);
  return r;
}

// Omega f = sum_{j>=1} p_j Delta^j f  (finite at fixed truncation).
inline SeriesTXP apply_omega(const SeriesTXP& f) {
  SeriesTXP r(f.trunc(), false);
  for (auto& [key, c] : f.terms())
    for (int j = 1; j <= key.k; ++j)
      r.add_to({key.n, key.k - j, key.mu.with_part(j)}, c);
  return r;
}

// Gamma f = sum_j j x^j df/dp_j, the new x-power merged into the existing one
// (both marked faces share the catalytic variable).
inline SeriesTXP apply_gamma_series(const SeriesTXP& f) {
  SeriesTXP r(f.trunc(), false);
  for (auto& [key, c] : f.terms()) {
    int prev = 0;
    for (int j : key.mu.parts()) {
      if (j == prev) continue;  // one contribution per distinct part
      prev = j;
      const int m = key.mu.multiplicity(j);
      r.add_to({key.n, key.k + j, key.mu.without_part(j)}, c * Rational(j) * Rational(m));
    }
  }
  return r;
}

// Xi: x^k -> p_k / k ; Pi: x^k -> p_k  (x^0 terms dropped).
inline SeriesTXP apply_xi(const SeriesTXP& f) {
  SeriesTXP r(f.trunc(), false);
  for (auto& [key, c] : f.terms())
    if (key.k >= 1) r.add_to({key.n, 0, key.mu.with_part(key.k)}, c / Rational(key.k));
  return r;
}
inline SeriesTXP apply_pi(const SeriesTXP& f) {
  SeriesTXP r(f.trunc(), false);
  for (auto& [key, c] : f.terms())
    if (key.k >= 1) r.add_to({key.n, 0, key.mu.with_part(key.k)}, c);
  return r;
}

struct GenusFamily {
  int trunc = 0;
  std::vector<SeriesTXP> F;       // F[g], map-graded
  std::vector<SeriesTXP> F2;      // F2[g] = Gamma F[g] (two root faces, merged x)
  const SeriesTXP& operator[](int g) const { return F.at(g); }
};

// Solve the Tutte equation order by order in t:
//   F_g = 1_{g=0} + x t Omega F_g + x t Gamma F_{g-1} + x t sum_{g1+g2=g} F_{g1} F_{g2}.
// The coefficient of t^n on the left depends only on orders <= n-1 on the right.
inline GenusFamily compute_F(int gmax, int trunc) {
  if (gmax < 0 || trunc < 1) throw std::invalid_argument("compute_F: bad arguments");
  using Key = SeriesKey<ChartTX>;
  // per-genus, per-order slices
  std::vector<std::vector<std::map<Key, Rational>>> slice(
      gmax + 1, std::vector<std::map<Key, Rational>>(trunc + 1));
  slice[0][0][{0, 0, Partition{}}] = Rational(1);

  auto add = [](std::map<Key, Rational>& m, const Key& k, const Rational& v) {
    if (v.is_zero()) return;
    auto it = m.find(k);
    if (it == m.end())
      m.emplace(k, v);
    else {
      it->second += v;
      if (it->second.is_zero()) m.erase(it);
    }
  };

  for (int n = 1; n <= trunc; ++n) {
    const int a = n - 1;  // source order on the right-hand side
    for (int g = 0; g <= gmax; ++g) {
      std::map<Key, Rational> rhs;
      // Omega F_g at order a
      for (auto& [key, c] : slice[g][a])
        for (int j = 1; j <= key.k; ++j) add(rhs, {a, key.k - j, key.mu.with_part(j)}, c);
      // Gamma F_{g-1} at order a
      if (g >= 1) {
        for (auto& [key, c] : slice[g - 1][a]) {
          int prev = 0;
          for (int j : key.mu.parts()) {
            if (j == prev) continue;
            prev = j;
            add(rhs, {a, key.k + j, key.mu.without_part(j)},
                c * Rational(j) * Rational(key.mu.multiplicity(j)));
          }
        }
      }
      // sum_{g1+g2=g} F_{g1} F_{g2} at order a
      for (int g1 = 0; g1 <= g; ++g1)
        for (int b = 0; b <= a; ++b)
          for (auto& [k1, c1] : slice[g1][b])
            for (auto& [k2, c2] : slice[g - g1][a - b])
              add(rhs, {a, k1.k + k2.k, k1.mu + k2.mu}, c1 * c2);
      // F_g slice at order n = x t (rhs)
      for (auto& [key, c] : rhs) slice[g][n][{n, key.k + 1, key.mu}] = c;
    }
  }

  GenusFamily fam;
  fam.trunc = trunc;
  for (int g = 0; g <= gmax; ++g) {
    SeriesTXP s(trunc, false);
    for (int n = 0; n <= trunc; ++n)
      for (auto& [key, c] : slice[g][n]) s.set(key, c);
    s.set_graded(true);  // checks n = k + |mu|
    fam.F.push_back(s);
  }
  for (int g = 0; g <= gmax; ++g) {
    SeriesTXP s2 = apply_gamma_series(fam.F[g]);
    s2.set_graded(true);
    fam.F2.push_back(s2);
  }
  return fam;
}

// Unrooting, coefficientwise: [p_nu t^n] L_g = [x^j p_{nu \ j} t^n] F_g / (j m_j(nu))
// for every part j of nu; all choices must agree. L_0 gets the constant 1.
inline SeriesTXP unroot_series(const SeriesTXP& f, int g) {
  if (!f.graded()) throw std::invalid_argument("unroot_series: input must be map-graded");
  SeriesTXP r(f.trunc(), false);
  std::map<std::pair<int, Partition>, Rational> val;
  for (auto& [key, c] : f.terms()) {
    if (key.k == 0) continue;
    const Partition nu = key.mu.with_part(key.k);
    const Rational v = c / Rational(static_cast<long>(key.k) * nu.multiplicity(key.k));
    auto it = val.find({key.n, nu});
    if (it == val.end())
      val.emplace(std::make_pair(key.n, nu), v);
    else if (it->second != v)
      throw std::logic_error("unroot_series: inconsistent part choices for " + nu.to_string());
  }
  // cross-check: every part of nu must contribute the same value
  for (auto& [nk, v] : val) {
    int prev = 0;
    for (int j : nk.second.parts()) {
      if (j == prev) continue;
      prev = j;
      const Rational c = f.coeff(nk.first, j, nk.second.without_part(j));
      if (c / Rational(static_cast<long>(j) * nk.second.multiplicity(j)) != v)
        throw std::logic_error("unroot_series: inconsistent part choices for " +
                               nk.second.to_string());
    }
    r.set({nk.first, 0, nk.second}, v);
  }
  if (g == 0) r.set({0, 0, Partition{}}, Rational(1));
  r.set_graded(true);
  return r;
}

// L^face = Xi F_g, L^edge = Pi F_g.
inline std::pair<SeriesTXP, SeriesTXP> marked_series(const SeriesTXP& f) {
  if (!f.graded()) throw std::invalid_argument("marked_series: input must be map-graded");
  auto face = apply_xi(f);
  auto edge = apply_pi(f);
  face.set_graded(true);
  edge.set_graded(true);
  return {face, edge};
}

// Bender-Canfield genus-0 closed forms, expanded in the (z,u,p) chart:
//   F_0      = (1+uz)(1 - sum_k p_k z^k sum_{l=1}^{k-1} u^l z^l C(2k-1,k+l))
//   F_0^(2)  = u^2 z^2 / (1-uz)^4
inline std::pair<SeriesZUP, SeriesZUP> closed_f0_f02(int trunc) {
  SeriesZUP inner = SeriesZUP::one(trunc);
  for (int k = 1; k <= trunc; ++k)
    for (int l = 1; l <= k - 1; ++l) {
      if (k + l > trunc) break;
      inner.add_to({k + l, l, Partition::single(k)}, -Rational::binomial(2 * k - 1, k + l));
    }
  SeriesZUP opz(trunc, false);
  opz.set({0, 0, Partition{}}, Rational(1));
  opz.set({1, 1, Partition{}}, Rational(1));
  SeriesZUP f0 = opz * inner;
  f0.set_graded(true);

  SeriesZUP f02(trunc, false);
  for (int j = 0; j + 2 <= trunc; ++j)
    f02.set({j + 2, j + 2, Partition{}}, Rational::binomial(j + 3, 3));
  f02.set_graded(true);
  return {f0, f02};
}

// ---- quadrangulation oracle (dense univariate series over Rational) ----

using USeries = std::vector<Rational>;  // coefficients by exponent

inline USeries umul(const USeries& a, const USeries& b) {
  USeries r(std::min(a.size(), b.size()), Rational(0));
  for (size_t i = 0; i < a.size(); ++i) {
    if (a[i].is_zero()) continue;
    for (size_t j = 0; i + j < r.size() && j < b.size(); ++j) r[i + j] += a[i] * b[j];
  }
  return r;
}
inline USeries uadd(const USeries& a, const USeries& b, const Rational& cb = Rational(1)) {
  USeries r(std::max(a.size(), b.size()), Rational(0));
  for (size_t i = 0; i < a.size(); ++i) r[i] = a[i];
  for (size_t i = 0; i < b.size(); ++i) r[i] += cb * b[i];
  return r;
}
inline USeries urecip(const USeries& a) {
  if (a.empty() || a[0].is_zero()) throw std::domain_error("urecip: zero constant term");
  USeries r(a.size(), Rational(0));
  r[0] = Rational(1) / a[0];
  for (size_t m = 1; m < a.size(); ++m) {
    Rational acc(0);
    for (size_t j = 1; j <= m && j < a.size(); ++j) acc += a[j] * r[m - j];
    r[m] = -acc / a[0];
  }
  return r;
}

// sigma = 1 + 3 t sigma^2, so that Q_0 = sigma(4 - sigma)/3 counts rooted planar
// maps by edges and Q_1 = (1/3) sigma(sigma-1)^2 / ((sigma+2)(sigma-2)^2) the torus.
inline USeries tutte_sigma(int order) {
  USeries s(order + 1, Rational(0));
  s[0] = Rational(1);
  for (int it = 0; it < order; ++it) {
    USeries s2 = umul(s, s);
    USeries next(order + 1, Rational(0));
    next[0] = Rational(1);
    for (int i = 0; i + 1 <= order; ++i) next[i + 1] = Rational(3) * s2[i];
    s = next;
  }
  return s;
}

inline USeries quad_oracle_genus0(int order) {
  USeries s = tutte_sigma(order);
  USeries four_minus(order + 1, Rational(0));
  four_minus[0] = Rational(4);
  four_minus = uadd(four_minus, s, Rational(-1));
  USeries q = umul(s, four_minus);
  for (auto& c : q) c = c / Rational(3);
  return q;
}

inline USeries quad_oracle_genus1(int order) {
  USeries s = tutte_sigma(order);
  USeries one(order + 1, Rational(0));
  one[0] = Rational(1);
  USeries sm1 = uadd(s, one, Rational(-1));
  USeries sp2 = uadd(s, one, Rational(2));
  USeries sm2 = uadd(s, one, Rational(-2));
  USeries num = umul(s, umul(sm1, sm1));
  USeries den = umul(sp2, umul(sm2, sm2));
  USeries q = umul(num, urecip(den));
  for (auto& c : q) c = c / Rational(3);
  return q;
}

// Engine-side quadrangulation series: coefficient of tau^m is the number of
// rooted genus-g bipartite quadrangulations with m faces (2m edges), read off
// as b_g(2, (2^{m-1})).
inline USeries quad_series_from_engine(const SeriesTXP& fg, int mmax) {
  USeries r(mmax + 1, Rational(0));
  for (int m = 1; m <= mmax; ++m) {
    if (2 * m > fg.trunc()) throw std::out_of_range("quad_series_from_engine: truncation too low");
    Partition mu;
    for (int i = 0; i < m - 1; ++i) mu = mu.with_part(2);
    r[m] = fg.coeff(2 * m, 2, mu);
  }
  return r;
}

}  // namespace mapgf

#endif  // MAPGF_TUTTE_HPP
