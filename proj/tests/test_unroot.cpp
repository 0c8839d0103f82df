#include <catch2/catch_amalgamated.hpp>

#include "mapgf/tutte.hpp"
#include "mapgf/unroot.hpp"

using namespace mapgf;

namespace {
MultiPoly mp_one() { return MultiPoly::constant(Rational(1)); }
MultiPoly mv(int id) { return MultiPoly::variable(id); }
Partition P(std::initializer_list<int> parts) { return Partition(std::vector<int>(parts)); }

// Box Theta as a series operator: p_k z^k -> (1/k - gamma/(1+gamma)) p_k z^k.
SeriesZUP box_theta_series(const GreekCombo& x, const CoordData& cd) {
  const int N = cd.trunc;
  SeriesZUP s1(N, false), s2(N, false);
  for (int k = 1; k <= N; ++k) {
    const Rational c = x.series_coeff(k);
    s1.add_to({k, 0, Partition::single(k)}, c / Rational(k));
    s2.add_to({k, 0, Partition::single(k)}, c);
  }
  auto gam = cd.greek(GreekAtom::Gamma());
  auto frac = gam * (SeriesZUP::one(N, false) + gam).reciprocal();
  return s1 - frac * s2;
}

GreekCombo combo_of(const ThetaBasisElem& e) {
  GreekCombo c;
  switch (e.kind) {
    case ThetaBasisKind::eta_plus_gamma:
      c.add(GreekAtom::Eta(), Rational(1));
      c.add(GreekAtom::Gamma(), Rational(1));
      break;
    case ThetaBasisKind::zeta_minus_gamma:
      c.add(GreekAtom::Zeta(), Rational(1));
      c.add(GreekAtom::Gamma(), Rational(-1));
      break;
    case ThetaBasisKind::eta_i: c.add(GreekAtom::Eta(e.i), Rational(1)); break;
    case ThetaBasisKind::zeta_i: c.add(GreekAtom::Zeta(e.i), Rational(1)); break;
  }
  return c;
}
}  // namespace

TEST_CASE("XiTheta on zeta_i, solved and verified") {
  auto x1 = xi_theta_zeta(1);
  CHECK(x1.coeff_of(GreekAtom::Zeta(1)) == Rational(2, 3));
  CHECK(x1.coeff_of(GreekAtom::Zeta()) == Rational(-4, 3));
  CHECK(x1.coeff_of(GreekAtom::Gamma()) == Rational(0));
  auto x2 = xi_theta_zeta(2);
  CHECK(x2.coeff_of(GreekAtom::Zeta(2)) == Rational(2, 5));
  CHECK(x2.coeff_of(GreekAtom::Zeta(1)) == Rational(-2, 15));
  CHECK(x2.coeff_of(GreekAtom::Zeta()) == Rational(16, 15));
}

TEST_CASE("Box Theta table") {
  // BoxTheta(eta+gamma) = gamma(1-eta)/(1+gamma)
  auto bt = box_theta({ThetaBasisKind::eta_plus_gamma, 0});
  auto expect = GreekRat(mv(var::gamma) * (mp_one() - mv(var::eta))).over(mp_one() + mv(var::gamma));
  CHECK(bt.equals(expect));
  // BoxTheta(zeta-gamma) = zeta + (zeta-gamma)/(1+gamma)
  auto bt2 = box_theta({ThetaBasisKind::zeta_minus_gamma, 0});
  auto expect2 = GreekRat(mv(var::zeta)) +
                 GreekRat(mv(var::zeta) - mv(var::gamma)).over(mp_one() + mv(var::gamma));
  CHECK(bt2.equals(expect2));
  // XiTheta eta_2 = eta_1: recover from BoxTheta eta_2 + gamma eta_2/(1+gamma)
  auto bt3 = box_theta({ThetaBasisKind::eta_i, 2});
  auto xi3 = bt3 + GreekRat(mv(var::gamma) * mv(var::eta_i(2))).over(mp_one() + mv(var::gamma));
  CHECK(xi3.equals(GreekRat(mv(var::eta_i(1)))));

  // series identity for all four kinds
  const int N = 9;
  auto cd = solve_coords(N, 4);
  for (auto be : std::vector<ThetaBasisElem>{{ThetaBasisKind::eta_plus_gamma, 0},
                                             {ThetaBasisKind::zeta_minus_gamma, 0},
                                             {ThetaBasisKind::eta_i, 1},
                                             {ThetaBasisKind::eta_i, 3},
                                             {ThetaBasisKind::zeta_i, 1},
                                             {ThetaBasisKind::zeta_i, 3}})
    CHECK(box_theta(be).eval(cd) == box_theta_series(combo_of(be), cd));
}

TEST_CASE("theta decomposition over the field round-trips") {
  auto st = toprec_F(1);
  auto combo = theta_decompose_field(st.F[1]);
  GreekRat back;
  for (auto& [be, c] : combo)
    back = back + c * GreekRat(MultiPoly::of_laurent(theta_basis_laurent(be), var::s0));
  CHECK(back.equals(st.F[1]));
}

TEST_CASE("unroot genus 1: the torus logs") {
  auto st = toprec_F(1);
  auto u1 = unroot_L(1, st.F[1]);
  CHECK(u1.closed.log_eta == Rational(1, 24));
  CHECK(u1.closed.log_zeta == Rational(1, 8));
  CHECK(u1.closed.terms.empty());
  // Diamond L1 = (eta/24)/(1-eta) - (zeta/8)/(1+zeta)
  auto expect = GreekRat(mv(var::eta)).scaled(Rational(1, 24)).over(mp_one() - mv(var::eta)) -
                GreekRat(mv(var::zeta)).scaled(Rational(1, 8)).over(mp_one() + mv(var::zeta));
  CHECK(u1.diamond.equals(expect));
  // series equality against the engine
  const int N = 9;
  auto cd = solve_coords(N, 4);
  auto fam = compute_F(1, N);
  ClosedFormExpander ex(cd);
  CHECK(ex.expand(u1.closed) == cd.to_zu(unroot_series(fam[1], 1)));
}

TEST_CASE("unroot genus 2: log-free closed form, census-pinned") {
  auto st = toprec_F(2);
  auto u2 = unroot_L(2, st.F[2]);  // throws if logs survive or origin is nonzero
  CHECK(u2.closed.log_eta == Rational(0));
  CHECK(u2.closed.log_zeta == Rational(0));

  const std::vector<LTerm> expect = {
      {P({}), P({}), 0, 0, Rational(1, 120)},    {P({}), P({}), 0, 2, Rational(-3, 1024)},
      {P({}), P({}), 1, 1, Rational(-1, 512)},   {P({}), P({}), 2, 0, Rational(-53, 15360)},
      {P({}), P({1}), 0, 3, Rational(-3, 4096)}, {P({1}), P({}), 2, 1, Rational(1, 1536)},
      {P({1}), P({}), 3, 0, Rational(83, 9216)}, {P({1, 1}), P({}), 4, 0, Rational(-37, 4608)},
      {P({1, 1, 1}), P({}), 5, 0, Rational(7, 2880)}, {P({2}), P({}), 3, 0, Rational(-7, 1920)},
      {P({2, 1}), P({}), 4, 0, Rational(29, 11520)},  {P({3}), P({}), 3, 0, Rational(1, 2304)},
  };
  CHECK(u2.closed.terms == expect);

  // constraints of the unrooted structure theorem (relaxed to inequalities)
  for (auto& t : u2.closed.terms) {
    CHECK(t.alpha.weight() + t.beta.weight() <= 3 * (2 - 1));
    CHECK(t.a + t.b <= t.alpha.length() + t.beta.length() + 2 * 2 - 2);
  }

  const int N = 10;
  auto cd = solve_coords(N, 8);
  auto fam = compute_F(2, N);
  ClosedFormExpander ex(cd);
  auto series = ex.expand(u2.closed);
  CHECK(series == cd.to_zu(unroot_series(fam[2], 2)));
  CHECK(series.coeff(5, 0, P({5})) == Rational(8, 5));  // l_2((5))/5! = 192/120
}

TEST_CASE("unroot rejects the wrong genus") {
  CHECK_THROWS_AS(unroot_L(0, GreekRat()), std::invalid_argument);
}
