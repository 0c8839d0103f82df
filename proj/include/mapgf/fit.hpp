#ifndef MAPGF_FIT_HPP
#define MAPGF_FIT_HPP

#include <algorithm>
#include <set>
#include <string>
#include <vector>

#include "mapgf/closedform.hpp"
#include "mapgf/linalg.hpp"

namespace mapgf {

// Ansatz terms for F_g at genus g, under the structure-theorem constraints:
//   sign in {+,-}, 1 <= c <= 6g-1, (2 +- 1) g >= ceil((1+c)/2) + |alpha|+|beta|,
//   a + b = l(alpha) + l(beta) + 2g - 1,
// where the denominator-degree equality is relaxed to <= for the
// constant-numerator terms always (alpha = beta = empty), and for every term
// when strict_ab is false. The solved forms satisfy the equality version;
// the relaxation accommodates constant terms of the published examples.
// Deterministic order: (|alpha|+|beta|, c, a, sign, alpha, beta, b).
inline std::vector<FTerm> enumerate_basis_f(int g, bool strict_ab = true) {
  if (g < 1) throw std::invalid_argument("enumerate_basis_f: g must be >= 1");
  std::vector<FTerm> out;
  for (int sign : {+1, -1}) {
    const int weight_cap_base = (2 + sign) * g;
    for (int c = 1; c <= 6 * g - 1; ++c) {
      const int capw = weight_cap_base - (1 + c + 1) / 2;
      if (capw < 0) continue;
      for (auto& alpha : partitions_up_to(capw))
        for (auto& beta : partitions_up_to(capw - alpha.weight())) {
          const int l = alpha.length() + beta.length();
          const int lcap = l + 2 * g - 1;
          for (int a = 0; a <= lcap; ++a)
            for (int b = 0; a + b <= lcap; ++b) {
              if (strict_ab && l > 0 && a + b != lcap) continue;
              FTerm t;
              t.alpha = alpha;
              t.beta = beta;
              t.a = a;
              t.b = b;
              t.c = c;
              t.sign = sign;
              out.push_back(t);
            }
        }
    }
  }
  std::sort(out.begin(), out.end(), [](const FTerm& x, const FTerm& y) {
    const auto key = [](const FTerm& t) {
      return std::tuple(t.alpha.weight() + t.beta.weight(), t.c, t.a, -t.sign, t.alpha, t.beta,
                        t.b);
    };
    return key(x) < key(y);
  });
  return out;
}

// Ansatz terms for L_g, g >= 2:
//   |alpha|+|beta| <= 3(g-1), a+b = l(alpha)+l(beta)+2g-2 (relaxed to <= for
//   constant-numerator terms, resp. for all terms when strict_ab is false).
// g = 1 is rejected: the torus generating function needs logarithms.
inline std::vector<LTerm> enumerate_basis_l(int g, bool strict_ab = true) {
  if (g == 1)
    throw std::invalid_argument(
        "enumerate_basis_l: g = 1 is not rational (logarithmic terms obstruct the ansatz)");
  if (g < 1) throw std::invalid_argument("enumerate_basis_l: g must be >= 1");
  std::vector<LTerm> out;
  const int capw = 3 * (g - 1);
  for (auto& alpha : partitions_up_to(capw))
    for (auto& beta : partitions_up_to(capw - alpha.weight())) {
      const int l = alpha.length() + beta.length();
      const int lcap = l + 2 * g - 2;
      for (int a = 0; a <= lcap; ++a)
        for (int b = 0; a + b <= lcap; ++b) {
          if (strict_ab && l > 0 && a + b != lcap) continue;
          LTerm t;
          t.alpha = alpha;
          t.beta = beta;
          t.a = a;
          t.b = b;
          out.push_back(t);
        }
    }
  std::sort(out.begin(), out.end(), [](const LTerm& x, const LTerm& y) {
    const auto key = [](const LTerm& t) {
      return std::tuple(t.alpha.weight() + t.beta.weight(), t.a, t.alpha, t.beta, t.b);
    };
    return key(x) < key(y);
  });
  return out;
}

struct FitReport {
  int columns = 0;
  int rank = 0;
  int fit_rows = 0;
  int validate_keys = 0;
  bool consistent = true;
  bool zero_residual = false;
  std::vector<int> pruned;  // basis indices that the elimination left free
  std::string note;
};

namespace detail_fit {

// Exact least-structure solve: process rows in deterministic key order,
// maintaining a reduced system; returns the solution on pivot columns with
// free columns pruned to zero.
inline std::optional<std::vector<Rational>> solve_rows(
    const std::vector<std::vector<Rational>>& cols_by_row, const std::vector<Rational>& rhs,
    FitReport& rep) {
  const int ncols = cols_by_row.empty() ? 0 : static_cast<int>(cols_by_row[0].size());
  std::vector<std::vector<Rational>> reduced;  // rows in echelon form, augmented
  std::vector<int> pivot_of_row;
  for (size_t r = 0; r < cols_by_row.size(); ++r) {
    std::vector<Rational> row = cols_by_row[r];
    row.push_back(rhs[r]);
    for (size_t i = 0; i < reduced.size(); ++i) {
      const int pc = pivot_of_row[i];
      if (row[pc].is_zero()) continue;
      const Rational f = row[pc];
      for (int j = pc; j <= ncols; ++j) row[j] -= f * reduced[i][j];
    }
    int pc = -1;
    for (int j = 0; j < ncols; ++j)
      if (!row[j].is_zero()) {
        pc = j;
        break;
      }
    if (pc < 0) {
      if (!row[ncols].is_zero()) {
        rep.consistent = false;
        return std::nullopt;
      }
      continue;
    }
    const Rational pv = row[pc];
    for (int j = pc; j <= ncols; ++j) row[j] /= pv;
    // back-substitute into existing rows
    for (size_t i = 0; i < reduced.size(); ++i) {
      if (reduced[i][pc].is_zero()) continue;
      const Rational f = reduced[i][pc];
      for (int j = pc; j <= ncols; ++j) reduced[i][j] -= f * row[j];
    }
    reduced.push_back(std::move(row));
    pivot_of_row.push_back(pc);
  }
  rep.rank = static_cast<int>(reduced.size());
  std::vector<Rational> sol(ncols, Rational(0));
  std::vector<bool> is_pivot(ncols, false);
  for (size_t i = 0; i < reduced.size(); ++i) {
    sol[pivot_of_row[i]] = reduced[i][ncols];
    is_pivot[pivot_of_row[i]] = true;
  }
  for (int j = 0; j < ncols; ++j)
    if (!is_pivot[j]) rep.pruned.push_back(j);
  return sol;
}

}  // namespace detail_fit

template <class Term>
struct FitOutcome {
  std::vector<Term> terms;  // with solved nonzero coefficients
  FitReport report;
};

// Fit the target series over the given basis. Fit keys are every key of
// z-order <= trunc - validate_margin appearing in the basis or the target;
// the remaining orders are out-of-sample validation. The residual is then
// checked on every key up to truncation.
template <class Term>
FitOutcome<Term> fit_series(const SeriesZUP& target, const std::vector<Term>& basis,
                            const CoordData& cd, int validate_margin = 3) {
  ClosedFormExpander ex(cd);
  std::vector<SeriesZUP> cols;
  cols.reserve(basis.size());
  for (auto& t0 : basis) {
    Term t = t0;
    t.coeff = Rational(1);
    cols.push_back(ex.expand(t));
  }
  std::set<SeriesKey<ChartZU>> keys;
  for (auto& c : cols)
    for (auto& [k, v] : c.terms()) keys.insert(k);
  for (auto& [k, v] : target.terms()) keys.insert(k);

  const int fit_cut = cd.trunc - validate_margin;
  FitOutcome<Term> out;
  std::vector<std::vector<Rational>> rows;
  std::vector<Rational> rhs;
  for (auto& k : keys) {
    if (k.n > fit_cut) continue;
    std::vector<Rational> row(cols.size());
    for (size_t j = 0; j < cols.size(); ++j) row[j] = cols[j].coeff(k);
    rows.push_back(std::move(row));
    rhs.push_back(target.coeff(k));
  }
  out.report.columns = static_cast<int>(cols.size());
  out.report.fit_rows = static_cast<int>(rows.size());
  out.report.validate_keys = static_cast<int>(keys.size()) - out.report.fit_rows;

  auto sol = detail_fit::solve_rows(rows, rhs, out.report);
  if (!sol) {
    out.report.note = "inconsistent system: no combination over the rational basis matches";
    return out;
  }
  // exact residual on every key up to truncation (fit and validation alike)
  SeriesZUP fitted = SeriesZUP::zero(cd.trunc);
  for (size_t j = 0; j < cols.size(); ++j)
    if (!(*sol)[j].is_zero()) fitted = fitted + cols[j].scaled((*sol)[j]);
  out.report.zero_residual = fitted == target;
  if (!out.report.zero_residual) out.report.note = "nonzero residual on validation keys";
  for (size_t j = 0; j < basis.size(); ++j) {
    if ((*sol)[j].is_zero()) continue;
    Term t = basis[j];
    t.coeff = (*sol)[j];
    out.terms.push_back(t);
  }
  return out;
}

inline FitOutcome<FTerm> fit_f(const SeriesZUP& target, int g, const CoordData& cd) {
  return fit_series(target, enumerate_basis_f(g), cd);
}
inline FitOutcome<LTerm> fit_l(const SeriesZUP& target, int g, const CoordData& cd) {
  return fit_series(target, enumerate_basis_l(g), cd);
}

// The g = 1 rejection probe: attempt a rational fit of the torus series over
// the genus-2-sized rational ansatz; the system must come out inconsistent
// (the logarithms are not in the span).
inline FitOutcome<LTerm> fit_l1_rejection(const SeriesZUP& target, const CoordData& cd) {
  return fit_series(target, enumerate_basis_l(2), cd);
}

// Closed form back to the symbolic field, for normal-form comparisons.
inline GreekRat closed_form_to_rat(const ClosedFormF& cf) {
  const MultiPoly one = MultiPoly::constant(Rational(1));
  GreekRat r;
  for (auto& t : cf.terms) {
    MultiPoly num = MultiPoly::constant(t.coeff);
    for (int p : t.alpha.parts()) num = num * MultiPoly::variable(var::eta_i(p));
    for (int p : t.beta.parts()) num = num * MultiPoly::variable(var::zeta_i(p));
    // (1-uz)^{-c} = (1+s0)^c/(2^c s0^c); (1+uz)^{-c} = (1+s0)^c/2^c
    num = num * (one + MultiPoly::variable(var::s0)).pow(t.c);
    GreekRat term = GreekRat(num).scaled(Rational(1) / Rational::pow(Rational(2), t.c));
    if (t.sign > 0) term = term * GreekRat::variable(var::s0, -t.c);
    term = term.over(MultiPoly::variable(var::eta) - one, t.a)
               .scaled(Rational(t.a % 2 ? -1 : 1));
    term = term.over(MultiPoly::variable(var::zeta) + one, t.b);
    r = r + term;
  }
  return r;
}

}  // namespace mapgf

#endif  // MAPGF_FIT_HPP
