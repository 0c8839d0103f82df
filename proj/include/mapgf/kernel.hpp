#ifndef MAPGF_KERNEL_HPP
#define MAPGF_KERNEL_HPP

#include <algorithm>
#include <map>
#include <random>
#include <stdexcept>
#include <vector>

#include "mapgf/greek.hpp"
#include "mapgf/series.hpp"

namespace mapgf {

// Exact Laurent polynomials in u and z over Q[p_1..p_K]. No truncation: every
// kernel object is a finite sum once p is cut off at K.
struct PZLKey {
  int ue = 0;  // u-exponent (may be negative)
  int ze = 0;  // z-exponent (may be negative)
  Partition mu;
  auto operator<=>(const PZLKey&) const = default;
};

class PZL {
 public:
  using Map = std::map<PZLKey, Rational>;
  PZL() = default;
  static PZL constant(Rational c) { return monomial(0, 0, Partition{}, std::move(c)); }
  static PZL monomial(int ue, int ze, Partition mu, Rational c) {
    PZL r;
    r.set({ue, ze, std::move(mu)}, std::move(c));
    return r;
  }

  const Map& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  void set(PZLKey k, Rational c) {
    if (c.is_zero())
      terms_.erase(k);
    else
      terms_[std::move(k)] = std::move(c);
  }
  void add_to(const PZLKey& k, const Rational& c) {
    if (c.is_zero()) return;
    auto it = terms_.find(k);
    if (it == terms_.end())
      terms_.emplace(k, c);
    else {
      it->second += c;
      if (it->second.is_zero()) terms_.erase(it);
    }
  }
  Rational coeff(const PZLKey& k) const {
    auto it = terms_.find(k);
    return it == terms_.end() ? Rational(0) : it->second;
  }

  friend PZL operator+(const PZL& a, const PZL& b) {
    PZL r = a;
    for (auto& [k, c] : b.terms_) r.add_to(k, c);
    return r;
  }
  friend PZL operator-(const PZL& a, const PZL& b) {
    PZL r = a;
    for (auto& [k, c] : b.terms_) r.add_to(k, -c);
    return r;
  }
  friend PZL operator*(const PZL& a, const PZL& b) {
    PZL r;
    for (auto& [ka, ca] : a.terms_)
      for (auto& [kb, cb] : b.terms_)
        r.add_to({ka.ue + kb.ue, ka.ze + kb.ze, ka.mu + kb.mu}, ca * cb);
    return r;
  }
  PZL scaled(const Rational& c) const {
    PZL r;
    if (c.is_zero()) return r;
    for (auto& [k, v] : terms_) r.terms_.emplace(k, v * c);
    return r;
  }
  PZL shifted(int du, int dz) const {
    PZL r;
    for (auto& [k, v] : terms_) r.terms_.emplace(PZLKey{k.ue + du, k.ze + dz, k.mu}, v);
    return r;
  }
  PZL pow(int e) const {
    PZL r = constant(Rational(1));
    for (int i = 0; i < e; ++i) r = r * (*this);
    return r;
  }
  PZL du() const {  // d/du
    PZL r;
    for (auto& [k, v] : terms_)
      if (k.ue != 0) r.add_to({k.ue - 1, k.ze, k.mu}, Rational(k.ue) * v);
    return r;
  }
  // u -> 1/(z^2 u)
  PZL subst_uz_involution() const {
    PZL r;
    for (auto& [k, v] : terms_) r.add_to({-k.ue, k.ze - 2 * k.ue, k.mu}, v);
    return r;
  }
  // u -> sign/z
  PZL eval_at_u(int sign) const {
    PZL r;
    for (auto& [k, v] : terms_)
      r.add_to({0, k.ze - k.ue, k.mu}, ((sign < 0) && (k.ue % 2)) ? -v : v);
    return r;
  }
  int min_u() const {
    int m = 0;
    bool first = true;
    for (auto& [k, v] : terms_) {
      if (first || k.ue < m) m = k.ue;
      first = false;
    }
    return m;
  }
  int max_u() const {
    int m = 0;
    bool first = true;
    for (auto& [k, v] : terms_) {
      if (first || k.ue > m) m = k.ue;
      first = false;
    }
    return m;
  }
  bool operator==(const PZL&) const = default;

  // Exact division by (1 - sign * u z); throws if not divisible.
  PZL div_one_minus_uz(int sign) const {
    // group coefficients by u-exponent: a_i = q_i - sign * z * q_{i-1}
    std::map<int, std::map<std::pair<int, Partition>, Rational>> rows;
    for (auto& [k, v] : terms_) rows[k.ue][{k.ze, k.mu}] = v;
    if (rows.empty()) return PZL{};
    PZL q;
    std::map<std::pair<int, Partition>, Rational> carry;  // q_{i-1}
    const int lo = rows.begin()->first, hi = rows.rbegin()->first;
    for (int i = lo; i <= hi + 1; ++i) {
      std::map<std::pair<int, Partition>, Rational> qi;
      auto it = rows.find(i);
      if (it != rows.end()) qi = it->second;
      for (auto& [zm, v] : carry) {
        const Rational s = (sign > 0) ? v : -v;
        auto key = std::make_pair(zm.first + 1, zm.second);
        auto jt = qi.find(key);
        if (jt == qi.end())
          qi.emplace(key, s);
        else {
          jt->second += s;
          if (jt->second.is_zero()) qi.erase(jt);
        }
      }
      if (i == hi + 1) {
        if (!qi.empty()) throw std::logic_error("PZL: not divisible by (1 -+ uz)");
        break;
      }
      for (auto& [zm, v] : qi) q.set({i, zm.first, zm.second}, v);
      carry = std::move(qi);
    }
    return q;
  }

  SeriesZUP to_series(int trunc) const {
    SeriesZUP r(trunc, false);
    for (auto& [k, v] : terms_) {
      if (k.ze < 0) throw std::domain_error("PZL::to_series: negative z-exponent");
      if (k.ze <= trunc) r.set({k.ze, k.ue, k.mu}, v);
    }
    return r;
  }

 private:
  Map terms_;
};

// gamma with p cut off at K, as an exact polynomial.
inline PZL gamma_poly(int K) {
  PZL g;
  for (int k = 1; k <= K; ++k)
    g.set({0, k, Partition::single(k)}, Rational::binomial(2 * k - 1, k));
  return g;
}

// F0 with p cut off at K (Bender-Canfield closed form), exact.
inline PZL f0_poly(int K) {
  PZL inner = PZL::constant(Rational(1));
  for (int k = 1; k <= K; ++k)
    for (int l = 1; l <= k - 1; ++l)
      inner.add_to({l, k + l, Partition::single(k)}, -Rational::binomial(2 * k - 1, k + l));
  PZL opz = PZL::constant(Rational(1));
  opz.add_to({1, 1, Partition{}}, Rational(1));
  return opz * inner;
}

// theta = sum_{k<=K} p_k x^{-k} with x^{-1} = (1+uz)^2/u, exact Laurent.
inline PZL theta_poly(int K) {
  PZL opz = PZL::constant(Rational(1));
  opz.add_to({1, 1, Partition{}}, Rational(1));
  PZL r;
  for (int k = 1; k <= K; ++k)
    r = r + (opz.pow(2 * k) * PZL::monomial(-k, 0, Partition::single(k), Rational(1)));
  return r;
}

// Kernel data at p-cutoff K: Y = 1 - 2txF0 - tx theta as the exact fraction
// num/den, and the factor N(u) with Y = N(u)(1-uz) / (u^{K-1}(1+gamma)(1+uz)).
struct KernelData {
  int K = 0;
  PZL gamma;       // gamma restricted to p_{<=K}
  PZL two_f0_theta;
  PZL num;         // (1+uz)^2 (1+gamma) - uz (2F0+theta)
  PZL den;         // (1+uz)^2 (1+gamma)
  PZL Nu;          // degree 2(K-1) polynomial in u
};

inline KernelData kernel_build(int K) {
  if (K < 1) throw std::invalid_argument("kernel_build: K must be >= 1");
  KernelData kd;
  kd.K = K;
  kd.gamma = gamma_poly(K);
  const PZL f0 = f0_poly(K);
  const PZL th = theta_poly(K);
  kd.two_f0_theta = f0.scaled(Rational(2)) + th;

  PZL opz = PZL::constant(Rational(1));
  opz.add_to({1, 1, Partition{}}, Rational(1));
  const PZL one_p_gamma = PZL::constant(Rational(1)) + kd.gamma;
  kd.den = opz * opz * one_p_gamma;
  kd.num = kd.den - kd.two_f0_theta.shifted(1, 1);

  // u^K (2F0 + theta) = (1+uz) Q(u) with Q of degree 2K-1
  const PZL q = kd.two_f0_theta.shifted(K, 0).div_one_minus_uz(-1);
  if (q.min_u() < 0 || q.max_u() != 2 * K - 1)
    throw std::logic_error("kernel_build: Q(u) has unexpected degree");
  // (1+uz)(1+gamma) u^{K-1} - z Q(u) = N(u) (1-uz)
  const PZL w = (opz * one_p_gamma).shifted(K - 1, 0) - q.shifted(0, 1);
  kd.Nu = w.div_one_minus_uz(+1);
  if (kd.Nu.min_u() < 0 || kd.Nu.max_u() != 2 * (K - 1))
    throw std::logic_error("kernel_build: N(u) has unexpected degree");

  // exact factorization identity: num * u^{K-1} = N(u)(1-uz)(1+uz)
  PZL omz = PZL::constant(Rational(1));
  omz.add_to({1, 1, Partition{}}, Rational(-1));
  if (!(kd.num.shifted(K - 1, 0) == kd.Nu * omz * opz))
    throw std::logic_error("kernel_build: factorization identity failed");
  return kd;
}

// Y(u) + Y(1/(z^2 u)) = 0, exactly.
inline bool kernel_antisymmetric(const KernelData& kd) {
  const PZL lhs = kd.num * kd.den.subst_uz_involution() + kd.num.subst_uz_involution() * kd.den;
  return lhs.is_zero();
}

// (2F0 + theta)|_{u = 1/z} = 4 + 4 gamma, exactly.
inline bool kernel_eval_identity(const KernelData& kd) {
  const PZL lhs = kd.two_f0_theta.eval_at_u(+1);
  const PZL rhs = PZL::constant(Rational(4)) + kd.gamma.scaled(Rational(4));
  return lhs == rhs;
}

// xt P(u)/Y(u) = uz(1-uz) / ((1+uz) num) as a z-graded series whose z-order-m
// coefficients are Laurent polynomials in u.
inline SeriesZUP xtpy_series(const KernelData& kd, int trunc) {
  SeriesZUP num_s(trunc, false);
  for (auto& [k, v] : kd.num.terms())
    if (k.ze <= trunc) num_s.set({k.ze, k.ue, k.mu}, v);
  SeriesZUP opz = SeriesZUP::one(trunc, false);
  opz.add_to({1, 1, Partition{}}, Rational(1));
  SeriesZUP pre(trunc, false);
  pre.set({1, 1, Partition{}}, Rational(1));   // uz
  pre.add_to({2, 2, Partition{}}, Rational(-1));  // -u^2z^2
  return pre * (opz * num_s).reciprocal();
}

// Dual route for the Taylor data: the a-th u-derivative of the exact
// 2F0 + theta, evaluated at u = sign/z, must equal a! z^a (-sign)^a C_a with
// C_a = taylor_kernel(sign, a) cut off at K.
inline bool taylor_kernel_matches_kernel(const KernelData& kd, int sign, int a) {
  PZL d = kd.two_f0_theta;
  for (int j = 0; j < a; ++j) d = d.du();
  const PZL lhs = d.eval_at_u(sign);
  const GreekCombo c = taylor_kernel(sign, a);
  PZL rhs = PZL::constant(c.constant);
  for (int k = 1; k <= kd.K; ++k)
    rhs.add_to({0, k, Partition::single(k)}, c.series_coeff(k));
  const Rational norm = Rational::factorial(a) * ((sign > 0 && a % 2) ? Rational(-1) : Rational(1));
  return lhs == rhs.scaled(norm).shifted(0, a);
}

// Nu coefficient valuations under a seeded random nonzero rational
// specialization of p_1..p_K; returns the z-adic valuation per u-degree.
inline std::vector<int> newton_valuations(const KernelData& kd, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_int_distribution<int> num(1, 19), den(1, 7);
  std::map<int, Rational> pval;
  for (int k = 1; k <= kd.K; ++k) {
    Rational v(num(rng), den(rng));
    if (num(rng) % 2 == 0) v = -v;
    pval[k] = v;
  }
  std::map<int, std::map<int, Rational>> per_u;  // ue -> ze -> coeff
  for (auto& [k, c] : kd.Nu.terms()) {
    Rational w = c;
    for (int part : k.mu.parts()) w *= pval.at(part);
    if (w.is_zero()) continue;
    auto& row = per_u[k.ue];
    auto it = row.find(k.ze);
    if (it == row.end())
      row.emplace(k.ze, w);
    else {
      it->second += w;
      if (it->second.is_zero()) row.erase(it);
    }
  }
  std::vector<int> val(2 * (kd.K - 1) + 1, -1);  // -1 marks a zero coefficient
  for (auto& [ue, row] : per_u)
    if (!row.empty()) val[ue] = row.begin()->first;
  return val;
}

// Count roots of Nu with positive / nonpositive z-adic valuation via the lower
// Newton polygon of the points (u-degree, valuation).
inline std::pair<int, int> newton_small_large(const KernelData& kd, unsigned seed) {
  const auto val = newton_valuations(kd, seed);
  std::vector<std::pair<long, long>> pts;
  for (size_t i = 0; i < val.size(); ++i)
    if (val[i] >= 0) pts.push_back({static_cast<long>(i), val[i]});
  if (pts.size() < 2) throw std::logic_error("newton_small_large: degenerate polygon");
  // lower convex hull, left to right
  std::vector<std::pair<long, long>> hull;
  for (auto& p : pts) {
    while (hull.size() >= 2) {
      auto& a = hull[hull.size() - 2];
      auto& b = hull[hull.size() - 1];
      // keep turn right (b above or on segment a-p)
      if ((b.first - a.first) * (p.second - a.second) -
              (p.first - a.first) * (b.second - a.second) <=
          0)
        hull.pop_back();
      else
        break;
    }
    hull.push_back(p);
  }
  int small = 0, large = 0;
  for (size_t i = 1; i < hull.size(); ++i) {
    const long du_ = hull[i].first - hull[i - 1].first;
    const long dv = hull[i].second - hull[i - 1].second;
    // du_ roots of valuation -dv/du_
    if (-dv > 0)
      small += static_cast<int>(du_);
    else
      large += static_cast<int>(du_);
  }
  return {small, large};
}

}  // namespace mapgf

#endif  // MAPGF_KERNEL_HPP
