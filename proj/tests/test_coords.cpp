#include <catch2/catch_amalgamated.hpp>

#include "mapgf/coords.hpp"

using namespace mapgf;

namespace {
const Partition none{};
Partition P(std::initializer_list<int> parts) { return Partition(std::vector<int>(parts)); }

SeriesTXP d_dt(const SeriesTXP& f) {
  SeriesTXP r(f.trunc() - 1, false);
  for (auto& [key, c] : f.terms())
    if (key.n >= 1) r.set({key.n - 1, key.k, key.mu}, Rational(key.n) * c);
  return r;
}
SeriesTXP d_dp(const SeriesTXP& f, int k) {
  SeriesTXP r(f.trunc(), false);
  for (auto& [key, c] : f.terms()) {
    const int m = key.mu.multiplicity(k);
    if (m > 0) r.set({key.n, key.k, key.mu.without_part(k)}, Rational(m) * c);
  }
  return r;
}
SeriesZUP d_dcat(const SeriesZUP& f) {  // d/dx in the (z; x) representation
  SeriesZUP r(f.trunc(), false);
  for (auto& [key, c] : f.terms())
    if (key.k >= 1) r.set({key.n, key.k - 1, key.mu}, Rational(key.k) * c);
  return r;
}
}  // namespace

TEST_CASE("greek series defining coefficients") {
  CHECK(greek_coeff(GreekAtom::Eta(), 2) == Rational(3));
  CHECK(greek_coeff(GreekAtom::Zeta(), 2) == Rational(1));
  CHECK(greek_coeff(GreekAtom::Zeta(1), 2) == Rational(8));
  CHECK(greek_coeff(GreekAtom::Gamma(), 1) == Rational(1));
  for (auto a : {GreekAtom::Eta(), GreekAtom::Zeta(), GreekAtom::Eta(1), GreekAtom::Eta(3),
                 GreekAtom::Zeta(1), GreekAtom::Zeta(2)})
    CHECK(greek_coeff(a, 1) == Rational(0));
  CHECK(greek_series(GreekAtom::Eta(), 6).coeff(2, 0, P({2})) == Rational(3));
}

TEST_CASE("solve_coords: defining equations and round trips") {
  const int N = 8;
  auto cd = solve_coords(N, 4);

  // p1-only: z = t + p1 t^2 + p1^2 t^3 + ...
  CHECK(cd.z_of_t.coeff(2, 0, P({1})) == Rational(1));
  CHECK(cd.z_of_t.coeff(3, 0, P({1, 1})) == Rational(1));
  // all p = 0: z = t exactly
  auto zp0 = specialize_p(cd.z_of_t, {});
  CHECK(zp0.size() == 1);
  CHECK(zp0.coeff(1, 0, none) == Rational(1));

  // u = x + 2x^2 z + 5x^3 z^2 + ...
  CHECK(cd.u_of_xz.coeff(0, 1, none) == Rational(1));
  CHECK(cd.u_of_xz.coeff(1, 2, none) == Rational(2));
  CHECK(cd.u_of_xz.coeff(2, 3, none) == Rational(5));

  // z = t(1 + gamma) as a series identity
  auto rhs = cd.z_of_t;  // plug z into gamma
  {
    SeriesTXP acc = SeriesTXP::one(N, false);
    SeriesTXP zp = SeriesTXP::one(N, false);
    for (int k = 1; k <= N; ++k) {
      zp = zp * cd.z_of_t;
      for (auto& [key, c] : zp.terms())
        acc.add_to({key.n, key.k, key.mu.with_part(k)}, c * Rational::binomial(2 * k - 1, k));
    }
    CHECK(cd.z_of_t == SeriesTXP::base_var(N) * acc);
  }

  // round trips: t(z(t)) = t and z(t(z)) = z
  CHECK(compose(cd.t_of_z, cd.z_of_t) == SeriesTXP::base_var(N));
  CHECK(compose(cd.z_of_t, cd.t_of_z) == SeriesZUP::base_var(N));
  // x(z, u(x,z)) = x
  CHECK(compose(cd.x_of_zu, SeriesZUP::base_var(N), cd.u_of_xz) == SeriesZUP::cat_var(N));
}

TEST_CASE("partial derivatives of the variable sets") {
  const int N = 7;
  auto cd = solve_coords(N, 4);
  const auto one = SeriesZUP::one(N, false);
  const auto z = SeriesZUP::base_var(N);
  const auto u = cd.u_of_xz;  // (z; x) representation
  const auto uz = z * u;
  const auto gam = cd.greek(GreekAtom::Gamma());
  const auto eta = cd.greek(GreekAtom::Eta());
  const auto inv_one_m_eta = (one - eta).reciprocal();

  // du/dx = (1+uz)^3/(1-uz)
  CHECK(d_dcat(u) == (one + uz).pow(3) * (one - uz).reciprocal());

  // dz/dx = 0 (z does not involve the catalytic variable)
  for (auto& [key, c] : cd.z_of_t.terms()) CHECK(key.k == 0);

  // dz/dt = (1+gamma)^2/(1-eta)
  {
    auto lhs = compose(d_dt(cd.z_of_t), cd.t_of_z.truncated(N - 1));
    auto rhs = ((one + gam).pow(2) * inv_one_m_eta).truncated(N - 1);
    CHECK(lhs == rhs);
  }

  // dz/dp_k = C(2k-1,k) z^{k+1}/(1-eta)
  for (int k = 1; k <= 3; ++k) {
    auto lhs = compose(d_dp(cd.z_of_t, k), cd.t_of_z);
    auto rhs = z.pow(k + 1).scaled(Rational::binomial(2 * k - 1, k)) * inv_one_m_eta;
    CHECK(lhs == rhs);
  }

  // du/dt = 2(1+gamma)^2 u^2 / ((1-eta)(1-uz))
  {
    auto lhs = compose(d_dt(cd.u_of_xt), cd.t_of_z.truncated(N - 1), SeriesZUP::cat_var(N - 1));
    auto rhs = ((one + gam).pow(2) * u * u * inv_one_m_eta * (one - uz).reciprocal())
                   .scaled(Rational(2))
                   .truncated(N - 1);
    CHECK(lhs == rhs);
  }

  // du/dp_k = 2 u^2 C(2k-1,k) z^{k+1} / ((1-uz)(1-eta))
  for (int k = 1; k <= 2; ++k) {
    auto lhs = compose(d_dp(cd.u_of_xt, k), cd.t_of_z, SeriesZUP::cat_var(N));
    auto rhs = (u * u * z.pow(k + 1) * inv_one_m_eta * (one - uz).reciprocal())
                   .scaled(Rational(2) * Rational::binomial(2 * k - 1, k));
    CHECK(lhs == rhs);
  }
}

TEST_CASE("theta closed images match the series definition") {
  const int N = 8;
  auto cd = solve_coords(N, 4);
  std::vector<GreekAtom> atoms = {GreekAtom::Gamma(), GreekAtom::Eta(), GreekAtom::Zeta()};
  for (int i = 1; i <= 4; ++i) {
    atoms.push_back(GreekAtom::Eta(i));
    atoms.push_back(GreekAtom::Zeta(i));
  }
  for (auto& a : atoms) CHECK(theta_series(a, cd) == laurent_eval(theta_closed(a), N));
  // Theta(zeta - gamma) = (s - s^-1)/4 and Theta(eta + gamma) = (s^-1 - s) s^-2 / 4
  LaurentS zg = theta_closed(GreekAtom::Zeta()) - theta_closed(GreekAtom::Gamma());
  CHECK(zg == LaurentS(std::map<int, Rational>{{1, Rational(1, 4)}, {-1, Rational(-1, 4)}}));
  LaurentS eg = theta_closed(GreekAtom::Eta()) + theta_closed(GreekAtom::Gamma());
  CHECK(eg == LaurentS(std::map<int, Rational>{{-3, Rational(1, 4)}, {-1, Rational(-1, 4)}}));
  // Theta gamma at s = 1 (z = 0) vanishes
  CHECK(theta_closed(GreekAtom::Gamma()).eval_one() == Rational(0));
}

TEST_CASE("D operator table matches the series definition") {
  const int N = 9;
  std::vector<GreekAtom> atoms = {GreekAtom::Gamma(), GreekAtom::Eta(), GreekAtom::Zeta()};
  for (int i = 1; i <= 4; ++i) {
    atoms.push_back(GreekAtom::Eta(i));
    atoms.push_back(GreekAtom::Zeta(i));
  }
  for (auto& a : atoms) {
    GreekCombo img;
    img.add(a, Rational(1));
    CHECK(d_op(img).series(N) == d_series(a, N));
  }
  // D gamma = eta + gamma ; D eta_2 = eta_3
  auto dg = d_op_atom(GreekAtom::Gamma());
  CHECK(dg.coeff_of(GreekAtom::Eta()) == Rational(1));
  CHECK(dg.coeff_of(GreekAtom::Gamma()) == Rational(1));
  CHECK(d_op_atom(GreekAtom::Eta(2)).coeff_of(GreekAtom::Eta(3)) == Rational(1));
  // D zeta_1 = (3/2) zeta_1 + (eta + zeta): the series-verified value; the
  // printed -4(zeta+eta)/2 belongs to the rescaled zeta normalization.
  auto dz1 = d_op_atom(GreekAtom::Zeta(1));
  CHECK(dz1.coeff_of(GreekAtom::Zeta(1)) == Rational(3, 2));
  CHECK(dz1.coeff_of(GreekAtom::Eta()) == Rational(1));
  CHECK(dz1.coeff_of(GreekAtom::Zeta()) == Rational(1));
}

TEST_CASE("theta_inverse") {
  // q = (s - s^-1)/4 -> zeta - gamma
  LaurentS q(std::map<int, Rational>{{1, Rational(1, 4)}, {-1, Rational(-1, 4)}});
  auto c = theta_inverse(q);
  CHECK(c.coeff_of(GreekAtom::Zeta()) == Rational(1));
  CHECK(c.coeff_of(GreekAtom::Gamma()) == Rational(-1));
  CHECK(c.coeffs.size() == 2);

  // q = (s^-1 - s)(s^2 - 1) -> -2 zeta_1 under the series normalization of zeta_1
  LaurentS f(std::map<int, Rational>{{-1, Rational(1)}, {1, Rational(-1)}});
  LaurentS g(std::map<int, Rational>{{2, Rational(1)}, {0, Rational(-1)}});
  auto c2 = theta_inverse(f * g);
  CHECK(c2.coeffs.size() == 1);
  CHECK(c2.coeff_of(GreekAtom::Zeta(1)) == Rational(-2));

  CHECK(theta_inverse(LaurentS{}).coeffs.empty());
  CHECK_THROWS_AS(theta_inverse(LaurentS::monomial(2, Rational(1))), std::invalid_argument);
  // odd but not vanishing at s=1
  CHECK_THROWS_AS(theta_inverse(LaurentS::monomial(1, Rational(1))), std::invalid_argument);

  // round trip on a generic odd element
  LaurentS big;
  big.set(5, Rational(3));
  big.set(1, Rational(-2, 7));
  big.set(-3, Rational(5, 2));
  big.set(-7, Rational(-1));
  big.add_to(-1, -big.eval_one());  // force q(1) = 0
  CHECK(theta_of(theta_inverse(big)) == big);
}

TEST_CASE("lattice oracles: closed forms vs direct sums") {
  for (int a = 2; a <= 6; ++a) lattice::verify(a, 8);
  // D_a(0) = 0
  for (int a = 2; a <= 5; ++a)
    CHECK(lattice::expand_y(lattice::closed_form('D', a), 3)[0] == Rational(0));
}

TEST_CASE("taylor data of 2F0 + theta") {
  // a = 0, 1 closed values
  auto c0 = taylor_kernel(+1, 0);
  CHECK(c0.constant == Rational(4));
  CHECK(c0.coeff_of(GreekAtom::Gamma()) == Rational(4));
  auto c1 = taylor_kernel(+1, 1);
  CHECK(c1.constant == Rational(-2));
  CHECK(c1.coeff_of(GreekAtom::Eta()) == Rational(2));
  CHECK(taylor_kernel(-1, 0) == GreekCombo{});
  auto d1 = taylor_kernel(-1, 1);
  CHECK(d1.constant == Rational(2));
  CHECK(d1.coeff_of(GreekAtom::Zeta()) == Rational(2));

  // a >= 2: leading structure (eta+gamma) resp. (zeta-gamma) with coefficient 1
  for (int a = 2; a <= 7; ++a) {
    auto cp = taylor_kernel(+1, a);
    CHECK(cp.constant == Rational(0));
    CHECK(cp.coeff_of(GreekAtom::Eta()) == Rational(1));
    CHECK(cp.coeff_of(GreekAtom::Gamma()) == Rational(1));
    auto cm = taylor_kernel(-1, a);
    CHECK(cm.coeff_of(GreekAtom::Zeta()) == Rational(1));
    CHECK(cm.coeff_of(GreekAtom::Gamma()) == Rational(-1));
  }
  // frozen small combos
  CHECK(taylor_kernel(+1, 3).coeff_of(GreekAtom::Eta(1)) == Rational(1, 3));
  CHECK(taylor_kernel(+1, 4).coeff_of(GreekAtom::Eta(1)) == Rational(1, 2));
  CHECK(taylor_kernel(-1, 3).coeff_of(GreekAtom::Zeta(1)) == Rational(1, 4));
  CHECK(taylor_kernel(-1, 4).coeff_of(GreekAtom::Zeta(1)) == Rational(3, 8));
}
