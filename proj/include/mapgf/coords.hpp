#ifndef MAPGF_COORDS_HPP
#define MAPGF_COORDS_HPP

#include <map>
#include <stdexcept>

#include "mapgf/greek.hpp"
#include "mapgf/series.hpp"

namespace mapgf {

// The change of variables (t,x) <-> (z,u):
//   z = t (1 + sum_k C(2k-1,k) p_k z^k) = t (1 + gamma),   u = x (1 + zu)^2.
// All series are held at a common truncation in the base exponent.
struct CoordData {
  int trunc = 0;
  int greek_ceiling = 0;           // eta_i / zeta_i cached for i <= ceiling
  SeriesTXP z_of_t;                // z as a series in (t; p)
  SeriesZUP t_of_z;                // t = z/(1+gamma), u-free
  SeriesZUP x_of_zu;               // x = u/(1+zu)^2
  SeriesZUP u_of_xz;               // u as a series in (z; x): the k-slot holds x-exponents
  SeriesTXP u_of_xt;               // u as a series in (t; x)
  std::map<GreekAtom, SeriesZUP> greeks;

  const SeriesZUP& greek(const GreekAtom& a) const {
    auto it = greeks.find(a);
    if (it == greeks.end()) throw std::out_of_range("CoordData: greek atom not cached: " + a.name());
    return it->second;
  }

  // Push a series in (t; x; p) through the change of variables.
  SeriesZUP to_zu(const SeriesTXP& f) const { return compose(f, t_of_z, x_of_zu); }
  // Pull a series in (z; u; p) back to (t; x; p).
  SeriesTXP to_tx(const SeriesZUP& f) const { return compose(f, z_of_t, u_of_xt); }
};

inline CoordData solve_coords(int trunc, int greek_ceiling = 8) {
  if (trunc < 1) throw std::invalid_argument("solve_coords: trunc must be >= 1");
  CoordData cd;
  cd.trunc = trunc;
  cd.greek_ceiling = greek_ceiling;

  // z = t(1 + sum binom p_k z^k) by fixed-point iteration; order n stabilizes
  // after n rounds.
  {
    SeriesTXP z = SeriesTXP::base_var(trunc);
    for (int it = 0; it < trunc; ++it) {
      SeriesTXP acc = SeriesTXP::one(trunc, false);
      SeriesTXP zp = SeriesTXP::one(trunc, false);
      for (int k = 1; k <= trunc; ++k) {
        zp = zp * z;
        if (zp.is_zero()) break;
        for (auto& [key, c] : zp.terms())
          acc.add_to({key.n, key.k, key.mu.with_part(k)}, c * Rational::binomial(2 * k - 1, k));
      }
      z = SeriesTXP::base_var(trunc) * acc;
    }
    cd.z_of_t = z;
  }

  // t = z / (1 + gamma)
  {
    SeriesZUP denom = SeriesZUP::one(trunc, false) + greek_series(GreekAtom::Gamma(), trunc);
    cd.t_of_z = SeriesZUP::base_var(trunc) * denom.reciprocal();
  }

  // x = u (1+zu)^{-2} = sum_j (j+1)(-1)^j u^{j+1} z^j
  {
    SeriesZUP x(trunc, false);
    for (int j = 0; j <= trunc; ++j)
      x.set({j, j + 1, Partition{}}, Rational((j % 2) ? -(j + 1) : (j + 1)));
    cd.x_of_zu = x;
  }

  // u = x (1 + zu)^2 by iteration, with the catalytic slot holding x-exponents
  {
    SeriesZUP u = SeriesZUP::cat_var(trunc);
    const SeriesZUP z = SeriesZUP::base_var(trunc);
    const SeriesZUP x = SeriesZUP::cat_var(trunc);
    for (int it = 0; it < trunc; ++it) {
      SeriesZUP zu = z * u;
      SeriesZUP sq = SeriesZUP::one(trunc, false) + zu.scaled(Rational(2)) + zu * zu;
      u = x * sq;
    }
    cd.u_of_xz = u;
  }

  cd.u_of_xt = compose(cd.u_of_xz, cd.z_of_t, SeriesTXP::cat_var(trunc));

  for (auto a : {GreekAtom::Gamma(), GreekAtom::Eta(), GreekAtom::Zeta()})
    cd.greeks.emplace(a, greek_series(a, trunc));
  for (int i = 1; i <= greek_ceiling; ++i) {
    cd.greeks.emplace(GreekAtom::Eta(i), greek_series(GreekAtom::Eta(i), trunc));
    cd.greeks.emplace(GreekAtom::Zeta(i), greek_series(GreekAtom::Zeta(i), trunc));
  }
  return cd;
}

// s = (1-uz)/(1+uz) and powers of it, as series in (z,u).
inline SeriesZUP s_series(int trunc, int e = 1) {
  SeriesZUP uz = SeriesZUP::base_var(trunc) * SeriesZUP::cat_var(trunc);
  SeriesZUP one = SeriesZUP::one(trunc, false);
  SeriesZUP s = (one - uz) * (one + uz).reciprocal();
  if (e >= 0) return s.pow(e);
  return ((one + uz) * (one - uz).reciprocal()).pow(-e);
}

inline SeriesZUP laurent_eval(const LaurentS& q, int trunc) {
  // substitute s = (1-uz)/(1+uz); cache powers
  SeriesZUP r = SeriesZUP::zero(trunc);
  std::map<int, SeriesZUP> cache;
  auto spow = [&](int e) -> const SeriesZUP& {
    auto it = cache.find(e);
    if (it == cache.end()) it = cache.emplace(e, s_series(trunc, e)).first;
    return it->second;
  };
  for (auto& [e, c] : q.terms()) r = r + spow(e).scaled(c);
  return r;
}

// Theta applied to a Greek atom, directly from the series definition:
// p_k z^k -> x^k z^k with x = x(z,u).
inline SeriesZUP theta_series(const GreekAtom& a, const CoordData& cd) {
  SeriesZUP r = SeriesZUP::zero(cd.trunc);
  SeriesZUP xpow = SeriesZUP::one(cd.trunc, false);
  for (int k = 1; k <= cd.trunc; ++k) {
    xpow = xpow * cd.x_of_zu;
    const Rational c = greek_coeff(a, k);
    if (c.is_zero()) continue;
    for (auto& [key, v] : xpow.terms())
      if (key.n + k <= cd.trunc) r.add_to({key.n + k, key.k, key.mu}, v * c);
  }
  return r;
}

// D applied to an atom, from the series definition: p_k z^k -> k p_k z^k.
inline SeriesZUP d_series(const GreekAtom& a, int trunc) {
  SeriesZUP r(trunc, false);
  for (int k = 1; k <= trunc; ++k)
    r.set({k, 0, Partition::single(k)}, Rational(k) * greek_coeff(a, k));
  return r;
}

}  // namespace mapgf

#endif  // MAPGF_COORDS_HPP
