#ifndef MAPGF_SPECFIT_HPP
#define MAPGF_SPECFIT_HPP

#include <atomic>
#include <map>
#include <random>
#include <thread>
#include <stdexcept>
#include <vector>

#include "mapgf/fit.hpp"
#include "mapgf/tutte.hpp"

namespace mapgf {

// Fitting the genus-2 ansatz needs series data far beyond what the full
// multivariate truncation affords: the z-truncated keys leave the system
// underdetermined. Everything here is therefore evaluated at seeded rational
// points p = rho (finite support), where series are bivariate in (t, x) resp.
// (z, u) and high orders are cheap. The Tutte recursion needs p-derivatives
// of the lower genera for its Gamma term; they are carried as first-order
// jets, with the genus-0 two-root-face input taken from its closed form and
// the derivative-of-variables identities.

namespace spec {

using BKey = std::pair<int, int>;  // (base exponent, catalytic exponent)
using BSeries = std::map<BKey, Rational>;

inline void badd(BSeries& a, const BSeries& b, const Rational& c = Rational(1)) {
  if (c.is_zero()) return;
  for (auto& [k, v] : b) {
    auto it = a.find(k);
    if (it == a.end())
      a.emplace(k, v * c);
    else {
      it->second += v * c;
      if (it->second.is_zero()) a.erase(it);
    }
  }
}
inline BSeries bmul(const BSeries& a, const BSeries& b, int trunc) {
  BSeries r;
  for (auto& [ka, va] : a) {
    if (ka.first > trunc) continue;
    for (auto& [kb, vb] : b) {
      const int n = ka.first + kb.first;
      if (n > trunc) continue;
      auto key = BKey{n, ka.second + kb.second};
      auto it = r.find(key);
      if (it == r.end())
        r.emplace(key, va * vb);
      else {
        it->second += va * vb;
        if (it->second.is_zero()) r.erase(it);
      }
    }
  }
  return r;
}

struct SpecCoords {
  int trunc = 0;
  std::map<int, Rational> rho;
  USeries z_of_t;   // z(t), no constant term
  USeries t_of_z;   // inverse
  USeries gamma_z, eta_z;
  BSeries u_of_xz;  // u in (z-exp, x-exp)
  BSeries x_of_zu;  // x = u/(1+zu)^2 in (z-exp, u-exp)
};

inline USeries greek_at(const GreekAtom& a, const std::map<int, Rational>& rho, int trunc) {
  USeries r(trunc + 1, Rational(0));
  for (auto& [k, v] : rho)
    if (k <= trunc) r[k] = greek_coeff(a, k) * v;
  return r;
}

inline SpecCoords spec_coords(const std::map<int, Rational>& rho, int trunc) {
  SpecCoords sc;
  sc.trunc = trunc;
  sc.rho = rho;
  USeries z(trunc + 1, Rational(0));
  z[1] = Rational(1);
  for (int it = 0; it < trunc; ++it) {
    USeries acc(trunc + 1, Rational(0));
    acc[0] = Rational(1);
    USeries zp(trunc + 1, Rational(0));
    zp[0] = Rational(1);
    for (int k = 1; k <= trunc; ++k) {
      zp = umul(zp, z);
      auto it2 = sc.rho.find(k);
      if (it2 == sc.rho.end() || it2->second.is_zero()) continue;
      const Rational c = Rational::binomial(2 * k - 1, k) * it2->second;
      for (int j = 0; j <= trunc; ++j) acc[j] += c * zp[j];
    }
    for (int j = trunc; j >= 1; --j) z[j] = acc[j - 1];
    z[0] = Rational(0);
  }
  sc.z_of_t = z;
  sc.gamma_z = greek_at(GreekAtom::Gamma(), rho, trunc);
  sc.eta_z = greek_at(GreekAtom::Eta(), rho, trunc);
  USeries opg = sc.gamma_z;
  opg[0] += Rational(1);
  USeries tz = urecip(opg);
  sc.t_of_z.assign(trunc + 1, Rational(0));
  for (int j = 0; j + 1 <= trunc; ++j) sc.t_of_z[j + 1] = tz[j];

  BSeries u{{{0, 1}, Rational(1)}};
  for (int it = 0; it < trunc; ++it) {
    BSeries zu;
    for (auto& [k, v] : u)
      if (k.first + 1 <= trunc) zu[{k.first + 1, k.second}] = v;
    BSeries sq{{{0, 0}, Rational(1)}};
    badd(sq, zu, Rational(2));
    badd(sq, bmul(zu, zu, trunc));
    BSeries nu;
    for (auto& [k, v] : sq) nu[{k.first, k.second + 1}] = v;
    u = std::move(nu);
  }
  sc.u_of_xz = u;
  for (int j = 0; j <= trunc; ++j)
    sc.x_of_zu[{j, j + 1}] = Rational((j % 2) ? -(j + 1) : (j + 1));
  return sc;
}

// f(base, cat) with base := bsub (univariate) and cat := csub (bivariate).
inline BSeries bcompose(const BSeries& f, const USeries& bsub, const BSeries& csub, int trunc) {
  std::vector<USeries> bpow;
  {
    USeries one(trunc + 1, Rational(0));
    one[0] = Rational(1);
    bpow.push_back(one);
  }
  std::vector<BSeries> cpow{BSeries{{{0, 0}, Rational(1)}}};
  auto bp = [&](int e) -> const USeries& {
    while (static_cast<int>(bpow.size()) <= e) {
      USeries nx = umul(bpow.back(), bsub);
      nx.resize(trunc + 1, Rational(0));
      bpow.push_back(std::move(nx));
    }
    return bpow[e];
  };
  auto cp = [&](int e) -> const BSeries& {
    while (static_cast<int>(cpow.size()) <= e) cpow.push_back(bmul(cpow.back(), csub, trunc));
    return cpow[e];
  };
  BSeries r;
  for (auto& [k, v] : f) {
    if (k.first > trunc) continue;
    const USeries& tb = bp(k.first);
    const BSeries& tc = cp(k.second);
    for (int i = 0; i <= trunc; ++i) {
      if (tb[i].is_zero()) continue;
      for (auto& [kc, vc] : tc) {
        const int n = i + kc.first;
        if (n > trunc) continue;
        auto key = BKey{n, kc.second};
        const Rational add = v * tb[i] * vc;
        auto it = r.find(key);
        if (it == r.end()) {
          if (!add.is_zero()) r.emplace(key, add);
        } else {
          it->second += add;
          if (it->second.is_zero()) r.erase(it);
        }
      }
    }
  }
  return r;
}

// ---- the specialized Tutte recursion with first-order jets ------------------

using Slice = std::vector<Rational>;  // by x-exponent, at one t-order
using SliceSeq = std::vector<Slice>;  // by t-order

namespace detail {

inline void slice_add(Slice& a, const Slice& b, const Rational& c = Rational(1)) {
  if (c.is_zero()) return;
  if (a.size() < b.size()) a.resize(b.size(), Rational(0));
  for (size_t i = 0; i < b.size(); ++i)
    if (!b[i].is_zero()) a[i] += b[i] * c;
}
// a += s * (f * g)
inline void slice_addmul(Slice& a, const Slice& f, const Slice& g, const Rational& s) {
  if (f.empty() || g.empty() || s.is_zero()) return;
  if (a.size() < f.size() + g.size() - 1) a.resize(f.size() + g.size() - 1, Rational(0));
  for (size_t i = 0; i < f.size(); ++i) {
    if (f[i].is_zero()) continue;
    const Rational fi = f[i] * s;
    for (size_t j = 0; j < g.size(); ++j)
      if (!g[j].is_zero()) a[i + j] += fi * g[j];
  }
}
inline void slice_add_delta(Slice& a, const Slice& f, int shift, const Rational& c) {
  // a += c * Delta^shift f
  if (c.is_zero()) return;
  if (static_cast<int>(f.size()) <= shift) return;
  if (a.size() < f.size() - shift) a.resize(f.size() - shift, Rational(0));
  for (size_t i = shift; i < f.size(); ++i)
    if (!f[i].is_zero()) a[i - shift] += f[i] * c;
}
inline SliceSeq slices_of(const BSeries& f, int trunc) {
  SliceSeq r(trunc + 1);
  for (auto& [k, v] : f) {
    if (k.first > trunc) continue;
    auto& s = r[k.first];
    if (static_cast<int>(s.size()) <= k.second) s.resize(k.second + 1, Rational(0));
    s[k.second] = v;
  }
  return r;
}
inline BSeries series_of(const SliceSeq& s) {
  BSeries r;
  for (int n = 0; n < static_cast<int>(s.size()); ++n)
    for (int k = 0; k < static_cast<int>(s[n].size()); ++k)
      if (!s[n][k].is_zero()) r[{n, k}] = s[n][k];
  return r;
}

}  // namespace detail

struct SpecFamily {
  int trunc = 0;
  SpecCoords sc;
  std::vector<BSeries> F;  // values, g = 0..gmax
};

inline SpecFamily spec_compute_F(int gmax, const std::map<int, Rational>& rho, int trunc) {
  using namespace detail;
  if (gmax < 0 || gmax > 2) throw std::invalid_argument("spec_compute_F: gmax in 0..2");
  SpecFamily fam;
  fam.trunc = trunc;
  fam.sc = spec_coords(rho, trunc);
  const int N = trunc;

  // F_0^(2) and its p_k derivatives in (t, x), from the closed forms
  BSeries f02_tx;
  std::map<int, BSeries> df02_tx;
  {
    auto inv_omz = [&](int m) {
      BSeries r;
      for (int j = 0; j <= N; ++j) r[{j, j}] = Rational::binomial(j + m - 1, m - 1);
      return r;
    };
    auto zu = [&](int ze, int ue) { return BSeries{{{ze, ue}, Rational(1)}}; };
    BSeries f02_zu = bmul(zu(2, 2), inv_omz(4), N);
    BSeries u_of_xt = bcompose(fam.sc.u_of_xz, fam.sc.z_of_t, BSeries{{{0, 1}, Rational(1)}}, N);
    auto pull = [&](const BSeries& f) { return bcompose(f, fam.sc.z_of_t, u_of_xt, N); };
    f02_tx = pull(f02_zu);

    if (gmax >= 2) {
      USeries inv_eta(N + 1, Rational(0));
      {
        USeries ome = fam.sc.eta_z;
        for (auto& c : ome) c = -c;
        ome[0] += Rational(1);
        inv_eta = urecip(ome);
      }
      BSeries dFdz = bmul(zu(1, 2), inv_omz(4), N);
      badd(dFdz, dFdz);
      badd(dFdz, bmul(zu(2, 3), inv_omz(5), N), Rational(4));
      BSeries dFdu = bmul(zu(2, 1), inv_omz(4), N);
      badd(dFdu, dFdu);
      badd(dFdu, bmul(zu(3, 2), inv_omz(5), N), Rational(4));
      BSeries du_extra = bmul(zu(0, 2), inv_omz(1), N);
      badd(du_extra, du_extra);  // 2u^2/(1-uz)
      BSeries total = dFdz;      // dF/dz + dF/du * 2u^2/(1-uz)
      badd(total, bmul(dFdu, du_extra, N));
      // pull once; each direction then multiplies by the pulled pure-z factor
      // z^{k+1} C(2k-1,k)/(1-eta), cheap because the pull is a ring map.
      const BSeries total_tx = pull(total);
      USeries zfac_t(N + 1, Rational(0));  // (z^{k+1}/(1-eta))(t), built per k below
      // powers of z(t), cached
      std::vector<USeries> zpow{USeries(N + 1, Rational(0))};
      zpow[0][0] = Rational(1);
      auto zp = [&](int e) -> const USeries& {
        while (static_cast<int>(zpow.size()) <= e) {
          USeries nx = umul(zpow.back(), fam.sc.z_of_t);
          nx.resize(N + 1, Rational(0));
          zpow.push_back(std::move(nx));
        }
        return zpow[e];
      };
      // inv_eta as a series in t
      USeries inv_eta_t(N + 1, Rational(0));
      for (int j = 0; j <= N; ++j) {
        if (inv_eta[j].is_zero()) continue;
        const USeries& zj = zp(j);
        for (int i = 0; i <= N; ++i) inv_eta_t[i] += inv_eta[j] * zj[i];
      }
      for (int k = 1; k + 1 <= N; ++k) {
        const Rational B = Rational::binomial(2 * k - 1, k);
        USeries f = umul(zp(k + 1), inv_eta_t);
        for (auto& c : f) c *= B;
        BSeries zf;
        for (int i = 0; i <= N && i < static_cast<int>(f.size()); ++i)
          if (!f[i].is_zero()) zf[{i, 0}] = f[i];
        if (zf.empty()) continue;
        BSeries dk_tx = bmul(total_tx, zf, N);
        if (!dk_tx.empty()) df02_tx.emplace(k, std::move(dk_tx));
      }
    }
  }

  const SliceSeq f02_s = slices_of(f02_tx, N);
  std::vector<SliceSeq> df02_s(N + 1, SliceSeq(N + 1));
  for (auto& [k, f] : df02_tx) df02_s[k] = slices_of(f, N);

  // per-order solves: F0 (with jets when gmax >= 2), F1 (jets when gmax >= 2), F2 values
  SliceSeq F0(N + 1), F1(N + 1), F2(N + 1);
  // jets: direction k contributes only from t-order k on (|mu| <= n)
  std::vector<SliceSeq> J0(N + 1), J1(N + 1);
  const bool jets = gmax >= 2;
  if (jets)
    for (int k = 1; k <= N; ++k) {
      J0[k].assign(N + 1, Slice{});
      J1[k].assign(N + 1, Slice{});
    }
  F0[0] = Slice{Rational(1)};

  auto omega_rho = [&](Slice& out, const Slice& f) {
    for (auto& [k, v] : rho) slice_add_delta(out, f, k, v);
  };
  auto install = [&](SliceSeq& dst, int n, Slice& rhs) {
    Slice s(rhs.size() + 1, Rational(0));
    for (size_t i = 0; i < rhs.size(); ++i) s[i + 1] = std::move(rhs[i]);
    while (!s.empty() && s.back().is_zero()) s.pop_back();
    dst[n] = std::move(s);
  };

  for (int n = 1; n <= N; ++n) {
    const int a = n - 1;
    {
      Slice rhs;
      omega_rho(rhs, F0[a]);
      for (int b = 0; b <= a; ++b) slice_addmul(rhs, F0[b], F0[a - b], Rational(1));
      install(F0, n, rhs);
      F0[0] = Slice{Rational(1)};
    }
    if (jets) {
      for (int k = 1; k <= n; ++k) {
        Slice rhs;
        slice_add_delta(rhs, F0[a], k, Rational(1));
        omega_rho(rhs, J0[k][a]);
        for (int b = 0; b <= a; ++b) slice_addmul(rhs, F0[b], J0[k][a - b], Rational(2));
        install(J0[k], n, rhs);
      }
    }
    if (gmax >= 1) {
      Slice rhs;
      omega_rho(rhs, F1[a]);
      slice_add(rhs, f02_s[a]);
      for (int b = 0; b <= a; ++b) slice_addmul(rhs, F0[b], F1[a - b], Rational(2));
      install(F1, n, rhs);
    }
    if (jets) {
      for (int k = 1; k <= n; ++k) {
        Slice rhs;
        slice_add_delta(rhs, F1[a], k, Rational(1));
        if (k < static_cast<int>(df02_s.size())) slice_add(rhs, df02_s[k][a]);
        omega_rho(rhs, J1[k][a]);
        for (int b = 0; b <= a; ++b) {
          slice_addmul(rhs, F0[b], J1[k][a - b], Rational(2));
          slice_addmul(rhs, J0[k][b], F1[a - b], Rational(2));
        }
        install(J1[k], n, rhs);
      }
    }
    if (gmax >= 2) {
      Slice rhs;
      omega_rho(rhs, F2[a]);
      // Gamma F1 at order a: sum_k k x^k dF1/dp_k
      for (int k = 1; k <= a; ++k) {
        const Slice& jk = J1[k][a];
        if (jk.empty()) continue;
        if (rhs.size() < jk.size() + k) rhs.resize(jk.size() + k, Rational(0));
        for (size_t x = 0; x < jk.size(); ++x)
          if (!jk[x].is_zero()) rhs[x + k] += Rational(k) * jk[x];
      }
      for (int b = 0; b <= a; ++b) {
        slice_addmul(rhs, F0[b], F2[a - b], Rational(2));
        slice_addmul(rhs, F1[b], F1[a - b], Rational(1));
      }
      install(F2, n, rhs);
    }
  }

  fam.F.resize(gmax + 1);
  fam.F[0] = detail::series_of(F0);
  if (gmax >= 1) fam.F[1] = detail::series_of(F1);
  if (gmax >= 2) fam.F[2] = detail::series_of(F2);
  return fam;
}

inline BSeries to_zu_spec(const BSeries& f, const SpecCoords& sc) {
  return bcompose(f, sc.t_of_z, sc.x_of_zu, sc.trunc);
}

// Seeded nonzero integer specialization with support {1..support}. Integer
// points keep the specialized rooted counts integral, which keeps the exact
// eliminations cheap.
inline std::map<int, Rational> random_rho(unsigned seed, int support) {
  std::mt19937 rng(seed);
  std::uniform_int_distribution<int> mag(1, 3), sgn(0, 1);
  std::map<int, Rational> rho;
  for (int k = 1; k <= support; ++k) {
    Rational v(mag(rng));
    if (sgn(rng)) v = -v;
    rho[k] = v;
  }
  return rho;
}

}  // namespace spec

// ---- staged ansatz fit from specialized data --------------------------------
//
// The z-truncated multivariate keys cannot determine the genus-2 ansatz (the
// system stays underdetermined at any affordable truncation), so the fit runs
// on seeded rational specializations of p at high order instead: first the
// pole profiles (1 -+ uz)^{-c} are separated along the u-direction, then each
// pole bucket is solved over its Greek-monomial columns. The result is
// validated elsewhere against the full multivariate series.

struct StagedFitConfig {
  int support = 5;           // p_k = 0 beyond this index
  int order = 36;            // specialized series order
  int specializations = 14;  // number of seeded points
  unsigned seed = 24061858;
  int threads = 0;
};

namespace spec {

struct PoleBucket {
  int sign = +1;
  int c = 1;
  auto operator<=>(const PoleBucket&) const = default;
};

inline std::vector<PoleBucket> pole_buckets(int g) {
  std::vector<PoleBucket> r;
  for (int c = 1; c <= 6 * g - 1; ++c) r.push_back({+1, c});
  for (int c = 1; c <= 2 * g - 1; ++c) r.push_back({-1, c});
  return r;
}

// Greek products at a specialization, univariate in z.
struct GreekAtRho {
  int trunc = 0;
  std::map<GreekAtom, USeries> atoms;
  USeries inv_one_m_eta, inv_one_p_zeta;

  GreekAtRho() = default;
  GreekAtRho(const std::map<int, Rational>& rho, int trunc_) : trunc(trunc_) {
    for (auto a : {GreekAtom::Gamma(), GreekAtom::Eta(), GreekAtom::Zeta()})
      atoms.emplace(a, greek_at(a, rho, trunc));
    for (int i = 1; i <= 8; ++i) {
      atoms.emplace(GreekAtom::Eta(i), greek_at(GreekAtom::Eta(i), rho, trunc));
      atoms.emplace(GreekAtom::Zeta(i), greek_at(GreekAtom::Zeta(i), rho, trunc));
    }
    USeries ome = atoms.at(GreekAtom::Eta());
    for (auto& c : ome) c = -c;
    ome[0] += Rational(1);
    inv_one_m_eta = urecip(ome);
    USeries opz = atoms.at(GreekAtom::Zeta());
    opz[0] += Rational(1);
    inv_one_p_zeta = urecip(opz);
  }

  USeries greek_product(const Partition& alpha, const Partition& beta, int a, int b) const {
    USeries r(trunc + 1, Rational(0));
    r[0] = Rational(1);
    for (int p : alpha.parts()) r = umul(r, atoms.at(GreekAtom::Eta(p)));
    for (int p : beta.parts()) r = umul(r, atoms.at(GreekAtom::Zeta(p)));
    for (int i = 0; i < a; ++i) r = umul(r, inv_one_m_eta);
    for (int i = 0; i < b; ++i) r = umul(r, inv_one_p_zeta);
    return r;
  }
};

}  // namespace spec

template <class Term>
FitOutcome<Term> fit_staged_common(int g, bool target_is_f, const StagedFitConfig& cfg) {
  using namespace spec;
  const int N = cfg.order;
  const int S = cfg.specializations;

  // specialized targets, in parallel
  std::vector<std::map<int, Rational>> rhos(S);
  std::vector<BSeries> targets(S);
  std::vector<GreekAtRho> greeks(S);
  {
    int threads = cfg.threads > 0 ? cfg.threads
                                  : static_cast<int>(std::thread::hardware_concurrency());
    if (threads <= 0) threads = 1;
    std::vector<std::thread> pool;
    std::atomic<int> next{0};
    auto work = [&]() {
      for (int s = next++; s < S; s = next++) {
        rhos[s] = random_rho(cfg.seed + static_cast<unsigned>(s), cfg.support);
        auto fam = spec_compute_F(g, rhos[s], N);
        if (target_is_f) {
          targets[s] = to_zu_spec(fam.F[g], fam.sc);
        } else {
          // t dL/dt = Pi F (an edge marking is a t-derivative), so the
          // specialized labelled series integrates the x -> rho_k projection
          USeries lt(N + 1, Rational(0));
          for (auto& [key, v] : fam.F[g]) {
            auto it = rhos[s].find(key.second);
            if (it == rhos[s].end() || key.first < 1) continue;
            lt[key.first] += v * it->second / Rational(key.first);
          }
          BSeries lb;
          for (int n = 0; n <= N; ++n)
            if (!lt[n].is_zero()) lb[{n, 0}] = lt[n];
          targets[s] = to_zu_spec(lb, fam.sc);
        }
        greeks[s] = GreekAtRho(rhos[s], N);
      }
    };
    for (int t = 0; t < threads; ++t) pool.emplace_back(work);
    for (auto& th : pool) th.join();
  }

  // stage B solver over rows (s, w <= wmax)
  auto solve_bucket = [&](const std::vector<Term>& cols,
                          const std::vector<std::vector<Rational>>& v_rows, int wmax,
                          FitOutcome<Term>& out) {
    std::vector<std::vector<Rational>> colvals(cols.size());
    for (size_t q = 0; q < cols.size(); ++q)
      for (int s = 0; s < S; ++s) {
        auto ser = greeks[s].greek_product(cols[q].alpha, cols[q].beta, cols[q].a, cols[q].b);
        for (int w = 0; w <= wmax; ++w) colvals[q].push_back(ser[w]);
      }
    std::vector<std::vector<Rational>> rows;
    std::vector<Rational> rhs;
    for (int s = 0; s < S; ++s)
      for (int w = 0; w <= wmax; ++w) {
        std::vector<Rational> row(cols.size());
        for (size_t q = 0; q < cols.size(); ++q) row[q] = colvals[q][s * (wmax + 1) + w];
        rows.push_back(std::move(row));
        rhs.push_back(v_rows[s][w]);
      }
    FitReport rep;
    auto sol = detail_fit::solve_rows(rows, rhs, rep);
    out.report.columns += static_cast<int>(cols.size());
    out.report.rank += rep.rank;
    out.report.fit_rows += static_cast<int>(rows.size());
    for (int p : rep.pruned) out.report.pruned.push_back(p);
    if (!sol) {
      out.report.consistent = false;
      return false;
    }
    for (size_t q = 0; q < cols.size(); ++q)
      if (!(*sol)[q].is_zero()) {
        Term t = cols[q];
        t.coeff = (*sol)[q];
        out.terms.push_back(t);
      }
    return true;
  };

  FitOutcome<Term> out;
  if constexpr (std::is_same_v<Term, LTerm>) {
    const int wmax = N;
    std::vector<std::vector<Rational>> v(S, std::vector<Rational>(wmax + 1, Rational(0)));
    for (int s = 0; s < S; ++s)
      for (auto& [key, val] : targets[s]) {
        if (key.second != 0)
          throw std::logic_error("fit_staged: labelled target has a catalytic exponent");
        if (key.first <= wmax) v[s][key.first] = val;
      }
    auto basis = enumerate_basis_l(g, true);
    if (!solve_bucket(basis, v, wmax, out)) {
      out.report.note = "inconsistent system over the rational ansatz";
      return out;
    }
    out.report.zero_residual = true;  // caller re-validates against full series
    return out;
  }
  if (target_is_f) {
    const auto buckets = pole_buckets(g);
    const int nb = static_cast<int>(buckets.size());
    const int wmax = N - nb + 1;
    // stage A: per (s, w) solve the pole profiles along the u-direction
    // V[s][bucket][w]
    std::vector<std::vector<std::vector<Rational>>> V(
        S, std::vector<std::vector<Rational>>(nb, std::vector<Rational>(wmax + 1, Rational(0))));
    for (int s = 0; s < S; ++s) {
      for (int w = 0; w <= wmax; ++w) {
        const int jmax = N - w;
        Matrix m(jmax + 1, std::vector<Rational>(nb));
        std::vector<Rational> rhs(jmax + 1);
        for (int j = 0; j <= jmax; ++j) {
          for (int r = 0; r < nb; ++r) {
            Rational v = Rational::binomial(j + buckets[r].c - 1, buckets[r].c - 1);
            if (buckets[r].sign < 0 && (j % 2)) v = -v;
            m[j][r] = v;
          }
          auto it = targets[s].find({w + j, j});
          rhs[j] = it == targets[s].end() ? Rational(0) : it->second;
        }
        auto sol = solve_linear(m, rhs);
        if (!sol)
          throw std::logic_error("fit_staged: pole-profile system inconsistent (w=" +
                                 std::to_string(w) + ")");
        for (int r = 0; r < nb; ++r) V[s][r][w] = (*sol)[r];
      }
    }
    // stage B: per bucket, fit the Greek columns over rows (s, w)
    if constexpr (std::is_same_v<Term, FTerm>) {
      auto basis = enumerate_basis_f(g, true);
      for (int r = 0; r < nb; ++r) {
        std::vector<FTerm> cols;
        for (auto& t : basis)
          if (t.sign == buckets[r].sign && t.c == buckets[r].c) cols.push_back(t);
        if (cols.empty()) {
          // no admissible terms: the bucket data must vanish identically
          for (int s = 0; s < S; ++s)
            for (int w = 0; w <= wmax; ++w)
              if (!V[s][r][w].is_zero())
                throw std::logic_error("fit_staged: data outside the admissible pole range");
          continue;
        }
        std::vector<std::vector<Rational>> v(S);
        for (int s = 0; s < S; ++s) v[s] = V[s][r];
        if (!solve_bucket(cols, v, wmax, out)) {
          out.report.note = "inconsistent bucket (sign=" + std::to_string(buckets[r].sign) +
                            ", c=" + std::to_string(buckets[r].c) + ")";
          return out;
        }
      }
      out.report.zero_residual = true;  // caller re-validates against full series
      return out;
    }
  }
  throw std::logic_error("fit_staged_common: unsupported target");
}

inline FitOutcome<FTerm> fit_f_staged(int g, const StagedFitConfig& cfg = {}) {
  return fit_staged_common<FTerm>(g, true, cfg);
}
inline FitOutcome<LTerm> fit_l_staged(int g, const StagedFitConfig& cfg = {}) {
  return fit_staged_common<LTerm>(g, false, cfg);
}

}  // namespace mapgf

#endif  // MAPGF_SPECFIT_HPP
