#ifndef MAPGF_UNROOT_HPP
#define MAPGF_UNROOT_HPP

#include <map>
#include <stdexcept>
#include <vector>

#include "mapgf/closedform.hpp"
#include "mapgf/linalg.hpp"

namespace mapgf {

// Xi Theta: p_k z^k -> p_k z^k / k on Greek atoms.
//   XiTheta(eta+gamma) = gamma, XiTheta(zeta-gamma) = 2 zeta - gamma,
//   XiTheta eta_i = eta_{i-1}; XiTheta zeta_i is a linear combination of
//   gamma, zeta, zeta_1..zeta_i solved exactly from the coefficient functions
//   (rational functions of k with denominator (2k-1)...(2k-2i-1)) and verified
//   on extra k values. The value printed for the base case i = 1 in the source
//   material does not satisfy the defining series; the solved one does.
inline GreekCombo xi_theta_zeta(int i) {
  std::vector<GreekAtom> basis{GreekAtom::Gamma(), GreekAtom::Zeta()};
  for (int j = 1; j <= i; ++j) basis.push_back(GreekAtom::Zeta(j));
  const int n = static_cast<int>(basis.size());
  Matrix m(n, std::vector<Rational>(n));
  std::vector<Rational> rhs(n);
  for (int row = 0; row < n; ++row) {
    const int k = row + 1;
    for (int col = 0; col < n; ++col) m[row][col] = greek_coeff(basis[col], k);
    rhs[row] = greek_coeff(GreekAtom::Zeta(i), k) / Rational(k);
  }
  auto sol = solve_linear(m, rhs);
  if (!sol) throw std::logic_error("xi_theta_zeta: no solution");
  GreekCombo combo;
  for (int col = 0; col < n; ++col) combo.add(basis[col], (*sol)[col]);
  // both sides are rational functions of k in a space of dimension n;
  // matching at n points plus these extras pins them for every k
  for (int k = n + 1; k <= 3 * i + 10; ++k)
    if (combo.series_coeff(k) != greek_coeff(GreekAtom::Zeta(i), k) / Rational(k))
      throw std::logic_error("xi_theta_zeta: verification failed at k=" + std::to_string(k));
  return combo;
}

// The Theta-basis elements used to decompose odd Laurent polynomials in s0.
enum class ThetaBasisKind { eta_plus_gamma, zeta_minus_gamma, eta_i, zeta_i };
struct ThetaBasisElem {
  ThetaBasisKind kind;
  int i = 0;
};

inline LaurentS theta_basis_laurent(const ThetaBasisElem& e) {
  switch (e.kind) {
    case ThetaBasisKind::eta_plus_gamma:
      return theta_closed(GreekAtom::Eta()) + theta_closed(GreekAtom::Gamma());
    case ThetaBasisKind::zeta_minus_gamma:
      return theta_closed(GreekAtom::Zeta()) - theta_closed(GreekAtom::Gamma());
    case ThetaBasisKind::eta_i: return theta_closed(GreekAtom::Eta(e.i));
    case ThetaBasisKind::zeta_i: return theta_closed(GreekAtom::Zeta(e.i));
  }
  throw std::logic_error("theta_basis_laurent");
}

// Box Theta images: Box x^k = (1/k - gamma/(1+gamma)) p_k, hence
// BoxTheta X = XiTheta X - gamma X / (1+gamma) on the p_k z^k level.
inline GreekRat box_theta(const ThetaBasisElem& e) {
  const MultiPoly one = MultiPoly::constant(Rational(1));
  const MultiPoly gam = MultiPoly::variable(var::gamma);
  const MultiPoly opg = one + gam;
  auto atom_poly = [](const GreekAtom& a) { return MultiPoly::variable(var::of_atom(a)); };
  MultiPoly xi, self;
  switch (e.kind) {
    case ThetaBasisKind::eta_plus_gamma:
      xi = gam;
      self = MultiPoly::variable(var::eta) + gam;
      break;
    case ThetaBasisKind::zeta_minus_gamma:
      xi = MultiPoly::variable(var::zeta).scaled(Rational(2)) - gam;
      self = MultiPoly::variable(var::zeta) - gam;
      break;
    case ThetaBasisKind::eta_i:
      xi = atom_poly(GreekAtom::Eta(e.i - 1));
      self = atom_poly(GreekAtom::Eta(e.i));
      break;
    case ThetaBasisKind::zeta_i:
      xi = MultiPoly::of_combo(xi_theta_zeta(e.i));
      self = atom_poly(GreekAtom::Zeta(e.i));
      break;
  }
  return GreekRat(xi * opg - gam * self).over(opg);
}

// Decompose an odd element of (s0^-1 - s0) F[s0^2, s0^-2] (F = Greek field)
// over the Theta basis; coefficients are field elements.
inline std::map<int, GreekRat> s0_laurent_coeffs(const GreekRat& e) {
  std::map<int, GreekRat> out;
  for (auto& [k, coef] : e.num().by_var(var::s0)) {
    GreekRat c(coef);
    for (auto& [f, ex] : e.den()) {
      if (f.involves(var::s0)) throw std::domain_error("s0_laurent_coeffs: s0 in denominator");
      c = c.over(f, ex);
    }
    out[k] = c;
  }
  return out;
}

inline std::vector<std::pair<ThetaBasisElem, GreekRat>> theta_decompose_field(
    const GreekRat& fg) {
  auto dict = s0_laurent_coeffs(fg);
  for (auto& [k, c] : dict)
    if (k % 2 == 0 && !c.is_zero())
      throw std::logic_error("theta_decompose_field: even s0-power present");
  {
    GreekRat at_one;
    for (auto& [k, c] : dict) at_one = at_one + c;
    if (!at_one.is_zero())
      throw std::logic_error("theta_decompose_field: value at s0 = 1 is nonzero");
  }
  std::vector<std::pair<ThetaBasisElem, GreekRat>> combo;
  auto subtract = [&](const ThetaBasisElem& be, const GreekRat& c) {
    combo.push_back({be, c});
    const LaurentS th = theta_basis_laurent(be);
    for (auto& [e, w] : th.terms()) {
      auto it = dict.find(e);
      GreekRat upd = (it == dict.end() ? GreekRat() : it->second) - c.scaled(w);
      if (upd.is_zero())
        dict.erase(e);
      else
        dict[e] = upd;
    }
  };
  auto top = [&]() {
    int mx = INT32_MIN;
    for (auto& [e, c] : dict)
      if (!c.is_zero()) mx = std::max(mx, e);
    return mx;
  };
  auto bot = [&]() {
    int mn = INT32_MAX;
    for (auto& [e, c] : dict)
      if (!c.is_zero()) mn = std::min(mn, e);
    return mn;
  };
  while (!dict.empty() && top() >= 3) {
    const int deg = top();
    ThetaBasisElem be{ThetaBasisKind::zeta_i, (deg - 1) / 2};
    subtract(be, dict[deg].scaled(Rational(1) / theta_basis_laurent(be).coeff(deg)));
  }
  if (dict.count(1) && !dict[1].is_zero())
    subtract({ThetaBasisKind::zeta_minus_gamma, 0}, dict[1].scaled(Rational(4)));
  while (!dict.empty() && bot() <= -5) {
    const int low = bot();
    ThetaBasisElem be{ThetaBasisKind::eta_i, (-low - 3) / 2};
    subtract(be, dict[low].scaled(Rational(1) / theta_basis_laurent(be).coeff(low)));
  }
  if (dict.count(-3) && !dict[-3].is_zero())
    subtract({ThetaBasisKind::eta_plus_gamma, 0}, dict[-3].scaled(Rational(4)));
  for (auto& [e, c] : dict)
    if (!c.is_zero()) throw std::logic_error("theta_decompose_field: nonzero residual");
  return combo;
}

// Diamond L_g = Box F_g; the (1+gamma) denominators must cancel in the sum.
inline GreekRat box_f(const GreekRat& fg) {
  GreekRat r;
  for (auto& [be, c] : theta_decompose_field(fg)) r = r + c * box_theta(be);
  r.reduce();
  return r;
}

// ---- exact integration over the scaling variable ----------------------------

namespace detail_unroot {

using VPoly = std::map<int, GreekRat>;  // polynomial in v over the Greek field

inline GreekRat grat_inv(const GreekRat& e) {
  if (e.is_zero()) throw std::domain_error("grat_inv: zero");
  return GreekRat(e.den_poly()).over(e.num());
}

inline VPoly vp_mul(const VPoly& a, const VPoly& b) {
  VPoly r;
  for (auto& [ea, ca] : a)
    for (auto& [eb, cb] : b) {
      auto it = r.find(ea + eb);
      if (it == r.end())
        r.emplace(ea + eb, ca * cb);
      else
        it->second = it->second + ca * cb;
    }
  for (auto it = r.begin(); it != r.end();)
    it = it->second.is_zero() ? r.erase(it) : std::next(it);
  return r;
}

inline int vp_deg(const VPoly& p) {
  int d = -1;
  for (auto& [e, c] : p)
    if (!c.is_zero()) d = std::max(d, e);
  return d;
}

// p -= q * c * v^e
inline void vp_submul(VPoly& p, const VPoly& q, const GreekRat& c, int e) {
  for (auto& [eq, cq] : q) {
    auto it = p.find(eq + e);
    GreekRat upd = (it == p.end() ? GreekRat() : it->second) - cq * c;
    if (upd.is_zero()) {
      if (it != p.end()) p.erase(it);
    } else {
      p[eq + e] = upd;
    }
  }
}

inline std::pair<VPoly, VPoly> vp_divmod(VPoly p, const VPoly& d) {
  const int dd = vp_deg(d);
  if (dd < 0) throw std::domain_error("vp_divmod: zero divisor");
  const GreekRat lead_inv = grat_inv(d.at(dd));
  VPoly q;
  while (vp_deg(p) >= dd) {
    const int dp = vp_deg(p);
    GreekRat c = p.at(dp) * lead_inv;
    q[dp - dd] = c;
    vp_submul(p, d, c, dp - dd);
  }
  return {q, p};
}

// Rational function of v with a single monic denominator factor to a power.
struct VRat {
  VPoly num;
  VPoly den_factor;  // (v eta - 1) or (v zeta + 1)
  int pow = 0;

  VRat ddv() const {
    // (num' (f) - pow * f' num) / f^{pow+1}
    VPoly dnum;
    for (auto& [e, c] : num)
      if (e >= 1) dnum[e - 1] = c.scaled(Rational(e));
    VPoly dfac;
    for (auto& [e, c] : den_factor)
      if (e >= 1) dfac[e - 1] = c.scaled(Rational(e));
    VRat r;
    r.den_factor = den_factor;
    r.pow = pow + 1;
    VPoly t1 = vp_mul(dnum, den_factor);
    VPoly t2 = vp_mul(dfac, num);
    for (auto& [e, c] : t2) t2[e] = c.scaled(Rational(-pow));
    r.num = t1;
    for (auto& [e, c] : t2) {
      auto it = r.num.find(e);
      if (it == r.num.end())
        r.num.emplace(e, c);
      else
        it->second = it->second + c;
    }
    return r;
  }

  // Evaluate at v = point (a field element); den_factor evaluated too.
  GreekRat eval(const GreekRat& point) const {
    auto eval_poly = [&](const VPoly& p) {
      GreekRat r;
      GreekRat vp(Rational(1));
      int cur = 0;
      for (auto& [e, c] : p) {
        while (cur < e) {
          vp = vp * point;
          ++cur;
        }
        r = r + c * vp;
      }
      return r;
    };
    GreekRat fv = eval_poly(den_factor);
    GreekRat r = eval_poly(num);
    if (pow > 0) r = r * grat_inv(fv).pow(pow);
    return r;
  }
};

}  // namespace detail_unroot

struct UnrootResult {
  ClosedFormL closed;
  GreekRat diamond;  // Box F_g, for reporting
};

// Invert Diamond: L_g = integral_0^1 R(v * atoms) dv / v with R = Box F_g.
// Logs appear only through the order-one partial fractions; for g >= 2 they
// must cancel identically, for g = 1 they are the whole story.
inline UnrootResult unroot_L(int g, const GreekRat& fg) {
  using namespace detail_unroot;
  if (g < 1) throw std::invalid_argument("unroot_L: g must be >= 1");
  GreekRat R = box_f(fg);

  // denominators must have reduced to (1-eta)^a (1+zeta)^b
  const MultiPoly one = MultiPoly::constant(Rational(1));
  const MultiPoly f_eta = MultiPoly::variable(var::eta) - one;   // monic (eta-1)
  const MultiPoly f_zeta = MultiPoly::variable(var::zeta) + one; // monic (zeta+1)
  int a = 0, b = 0;
  for (auto& [f, e] : R.den()) {
    if (f == f_eta)
      a = e;
    else if (f == f_zeta)
      b = e;
    else
      throw std::logic_error("unroot_L: (1+gamma) or other factor did not cancel: " +
                             f.to_string());
  }
  if (R.num().involves(var::gamma) || R.num().involves(var::s) || R.num().involves(var::s0))
    throw std::logic_error("unroot_L: unexpected variable in Diamond L_g");

  // scale atoms by v: R(v.) = num_v / ((v eta - 1)^a (v zeta + 1)^b), with the
  // (eta-1)^a monic convention matching (v eta - 1)^a after scaling.
  MultiPoly num_v = R.num().v_scaled();
  // integrand (1/v) R(v.) : numerator must vanish at v = 0
  if (!num_v.constant_term().is_zero())
    throw std::logic_error("unroot_L: Diamond L_g has a constant term");
  {
    auto q = MultiPoly::exact_divide(num_v, MultiPoly::variable(var::v));
    if (!q) throw std::logic_error("unroot_L: numerator not divisible by v");
    num_v = *q;
  }

  const MultiPoly veta = MultiPoly::variable(var::v) * MultiPoly::variable(var::eta) - one;
  const MultiPoly vzeta = MultiPoly::variable(var::v) * MultiPoly::variable(var::zeta) + one;

  // view as polynomials in v over the Greek field
  VPoly P;
  for (auto& [e, coef] : num_v.by_var(var::v)) P[e] = GreekRat(coef);
  VPoly D_eta, D_zeta;
  for (auto& [e, coef] : veta.pow(a).by_var(var::v)) D_eta[e] = GreekRat(coef);
  for (auto& [e, coef] : vzeta.pow(b).by_var(var::v)) D_zeta[e] = GreekRat(coef);
  const VPoly D = vp_mul(D_eta, D_zeta);

  auto [Q, rem] = vp_divmod(P, D);

  const GreekRat eta_r = GreekRat::variable(var::eta);
  const GreekRat zeta_r = GreekRat::variable(var::zeta);
  const GreekRat inv_eta = GreekRat(one).over(MultiPoly::variable(var::eta));
  const GreekRat inv_zeta = GreekRat(one).over(MultiPoly::variable(var::zeta));

  // A-side: poles of (v eta - 1)^a at v = 1/eta
  std::vector<GreekRat> A(a + 1);  // A[j] multiplies (1 - v eta)^{-j}
  if (a > 0) {
    VRat H;  // rem / (v zeta + 1)^b
    H.num = rem;
    for (auto& [e, coef] : vzeta.by_var(var::v)) H.den_factor[e] = GreekRat(coef);
    H.pow = b;
    GreekRat fact(Rational(1));
    VRat cur = H;
    for (int m = 0; m <= a - 1; ++m) {
      if (m > 0) {
        cur = cur.ddv();
        fact = fact * GreekRat(Rational(m));
      }
      // Atilde_{a-m} = H^{(m)}(1/eta) eta^{-m} / m!
      GreekRat val = cur.eval(inv_eta);
      GreekRat at = val * grat_inv(fact) *
                    GreekRat(one).over(MultiPoly::variable(var::eta), m);
      // A_j = (-1)^j Atilde_j for the monic -> (1 - v eta) rewrite
      const int j = a - m;
      A[j] = (j % 2) ? -at : at;
    }
  }
  // B-side: poles of (v zeta + 1)^b at v = -1/zeta
  std::vector<GreekRat> B(b + 1);
  if (b > 0) {
    VRat G;
    for (auto& [e, coef] : veta.by_var(var::v)) G.den_factor[e] = GreekRat(coef);
    G.num = rem;
    G.pow = a;
    GreekRat fact(Rational(1));
    VRat cur = G;
    for (int m = 0; m <= b - 1; ++m) {
      if (m > 0) {
        cur = cur.ddv();
        fact = fact * GreekRat(Rational(m));
      }
      // B_{b-m} = G^{(m)}(-1/zeta) zeta^{-m} / m! ((v zeta + 1) is already (1 + v zeta))
      GreekRat val = cur.eval(-inv_zeta);
      B[b - m] = val * grat_inv(fact) *
                 GreekRat(one).over(MultiPoly::variable(var::zeta), m);
    }
  }

  // integrate
  GreekRat L;
  for (auto& [e, c] : Q) L = L + c.scaled(Rational(1, e + 1));
  for (int j = 2; j <= a; ++j) {
    if (A[j].is_zero()) continue;
    // ((1-eta)^{1-j} - 1)/((j-1) eta), with (1-eta)^{1-j} = (-1)^{j-1}(eta-1)^{1-j}
    GreekRat pw = GreekRat(one.scaled(Rational((j - 1) % 2 ? -1 : 1))).over(f_eta, j - 1);
    L = L + A[j] * (pw - GreekRat(Rational(1))) * inv_eta.scaled(Rational(1, j - 1));
  }
  for (int j = 2; j <= b; ++j) {
    if (B[j].is_zero()) continue;
    GreekRat pw = GreekRat(one).over(f_zeta, j - 1);
    L = L + B[j] * (GreekRat(Rational(1)) - pw) * inv_zeta.scaled(Rational(1, j - 1));
  }
  // log parts
  GreekRat log_eta_coeff = (a >= 1) ? A[1] * inv_eta : GreekRat();
  GreekRat log_zeta_coeff = (b >= 1) ? -(B[1] * inv_zeta) : GreekRat();

  UnrootResult out;
  out.diamond = R;
  out.closed.g = g;
  if (g >= 2) {
    if (!log_eta_coeff.is_zero() || !log_zeta_coeff.is_zero())
      throw std::logic_error("unroot_L: logarithms did not cancel for g >= 2");
  } else {
    // the coefficients must be plain rationals
    auto constant_of = [](const GreekRat& e) {
      if (!e.den().empty() ||
          !(e.num() - MultiPoly::constant(e.num().constant_term())).is_zero())
        throw std::logic_error("unroot_L: non-constant log coefficient at g = 1");
      return e.num().constant_term();
    };
    out.closed.log_eta = constant_of(log_eta_coeff);
    out.closed.log_zeta = constant_of(log_zeta_coeff);
  }

  L.reduce();
  // initial condition: no maps with zero edges for g >= 1
  {
    Rational origin = L.num().constant_term();
    for (auto& [f, e] : L.den())
      origin = origin / Rational::pow(f.constant_term(), e);
    if (!origin.is_zero()) throw std::logic_error("unroot_L: nonzero value at the Greek origin");
  }
  out.closed.terms = l_terms_from_rat(L);
  return out;
}

}  // namespace mapgf

#endif  // MAPGF_UNROOT_HPP
