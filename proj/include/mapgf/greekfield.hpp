#ifndef MAPGF_GREEKFIELD_HPP
#define MAPGF_GREEKFIELD_HPP

#include <algorithm>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "mapgf/coords.hpp"
#include "mapgf/greek.hpp"

namespace mapgf {

// Variable ids for the symbolic layer. s and s0 are Laurent (integer
// exponents); the Greek atoms and v have nonnegative exponents.
namespace var {
constexpr int gamma = 0, eta = 1, zeta = 2;
constexpr int s = 100, s0 = 101, v = 102;
inline int eta_i(int i) { return 10 + i; }   // i >= 1
inline int zeta_i(int i) { return 40 + i; }  // i >= 1
inline bool is_laurent(int id) { return id == s || id == s0; }
inline int of_atom(const GreekAtom& a) {
  switch (a.kind) {
    case GreekAtom::gamma: return gamma;
    case GreekAtom::eta: return eta;
    case GreekAtom::zeta: return zeta;
    case GreekAtom::eta_i: return eta_i(a.i);
    case GreekAtom::zeta_i: return zeta_i(a.i);
  }
  throw std::logic_error("var::of_atom");
}
inline std::optional<GreekAtom> to_atom(int id) {
  if (id == gamma) return GreekAtom::Gamma();
  if (id == eta) return GreekAtom::Eta();
  if (id == zeta) return GreekAtom::Zeta();
  if (id > 10 && id < 40) return GreekAtom::Eta(id - 10);
  if (id > 40 && id < 100) return GreekAtom::Zeta(id - 40);
  return std::nullopt;
}
inline std::string name(int id) {
  if (id == s) return "s";
  if (id == s0) return "s0";
  if (id == v) return "v";
  if (auto a = to_atom(id)) return a->name();
  return "x" + std::to_string(id);
}
}  // namespace var

// Sparse monomial: sorted (variable, exponent) pairs, exponents nonzero.
struct Mono {
  std::vector<std::pair<int, int>> ve;

  int exp(int id) const {
    for (auto& [vid, e] : ve)
      if (vid == id) return e;
    return 0;
  }
  bool is_one() const { return ve.empty(); }
  int total_atom_degree() const {
    int d = 0;
    for (auto& [vid, e] : ve)
      if (var::to_atom(vid)) d += e;
    return d;
  }

  friend Mono operator*(const Mono& a, const Mono& b) {
    Mono r;
    r.ve.reserve(a.ve.size() + b.ve.size());
    size_t i = 0, j = 0;
    while (i < a.ve.size() || j < b.ve.size()) {
      if (j == b.ve.size() || (i < a.ve.size() && a.ve[i].first < b.ve[j].first))
        r.ve.push_back(a.ve[i++]);
      else if (i == a.ve.size() || b.ve[j].first < a.ve[i].first)
        r.ve.push_back(b.ve[j++]);
      else {
        const int e = a.ve[i].second + b.ve[j].second;
        if (e != 0) r.ve.push_back({a.ve[i].first, e});
        ++i, ++j;
      }
    }
    return r;
  }

  // a / b, when exponentwise legal (Laurent vars always legal).
  static std::optional<Mono> divide(const Mono& a, const Mono& b) {
    Mono r;
    size_t i = 0, j = 0;
    while (i < a.ve.size() || j < b.ve.size()) {
      if (j == b.ve.size() || (i < a.ve.size() && a.ve[i].first < b.ve[j].first))
        r.ve.push_back(a.ve[i++]);
      else if (i == a.ve.size() || b.ve[j].first < a.ve[i].first) {
        const auto [vid, e] = b.ve[j++];
        if (!var::is_laurent(vid)) return std::nullopt;
        r.ve.push_back({vid, -e});
      } else {
        const int e = a.ve[i].second - b.ve[j].second;
        if (e != 0) {
          if (e < 0 && !var::is_laurent(a.ve[i].first)) return std::nullopt;
          r.ve.push_back({a.ve[i].first, e});
        }
        ++i, ++j;
      }
    }
    return r;
  }

  // Lexicographic by variable id, then exponent; a group order (compatible
  // with multiplication), which exact division relies on.
  auto operator<=>(const Mono& o) const {
    size_t i = 0, j = 0;
    while (i < ve.size() || j < o.ve.size()) {
      int vid_a = i < ve.size() ? ve[i].first : INT32_MAX;
      int vid_b = j < o.ve.size() ? o.ve[j].first : INT32_MAX;
      const int vid = std::min(vid_a, vid_b);
      const int ea = vid_a == vid ? ve[i].second : 0;
      const int eb = vid_b == vid ? o.ve[j].second : 0;
      if (ea != eb) return ea <=> eb;
      if (vid_a == vid) ++i;
      if (vid_b == vid) ++j;
    }
    return std::strong_ordering::equal;
  }
  bool operator==(const Mono& o) const { return ve == o.ve; }

  static Mono of(int id, int e = 1) {
    Mono m;
    if (e != 0) m.ve.push_back({id, e});
    return m;
  }
};

// Sparse multivariate (Laurent in s, s0) polynomial over Rational.
class MultiPoly {
 public:
  using Map = std::map<Mono, Rational>;
  MultiPoly() = default;
  static MultiPoly constant(Rational c) {
    MultiPoly p;
    if (!c.is_zero()) p.terms_[Mono{}] = std::move(c);
    return p;
  }
  static MultiPoly variable(int id, int e = 1) {
    MultiPoly p;
    p.terms_[Mono::of(id, e)] = Rational(1);
    return p;
  }
  static MultiPoly of_combo(const GreekCombo& c) {
    MultiPoly p = constant(c.constant);
    for (auto& [a, w] : c.coeffs) p.add_to(Mono::of(var::of_atom(a)), w);
    return p;
  }
  static MultiPoly of_laurent(const LaurentS& q, int sid = var::s) {
    MultiPoly p;
    for (auto& [e, c] : q.terms()) p.add_to(Mono::of(sid, e), c);
    return p;
  }

  const Map& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  size_t size() const { return terms_.size(); }
  void add_to(const Mono& m, const Rational& c) {
    if (c.is_zero()) return;
    auto it = terms_.find(m);
    if (it == terms_.end())
      terms_.emplace(m, c);
    else {
      it->second += c;
      if (it->second.is_zero()) terms_.erase(it);
    }
  }
  Rational coeff(const Mono& m) const {
    auto it = terms_.find(m);
    return it == terms_.end() ? Rational(0) : it->second;
  }
  Rational constant_term() const { return coeff(Mono{}); }

  friend MultiPoly operator+(const MultiPoly& a, const MultiPoly& b) {
    MultiPoly r = a;
    for (auto& [m, c] : b.terms_) r.add_to(m, c);
    return r;
  }
  friend MultiPoly operator-(const MultiPoly& a, const MultiPoly& b) {
    MultiPoly r = a;
    for (auto& [m, c] : b.terms_) r.add_to(m, -c);
    return r;
  }
  friend MultiPoly operator*(const MultiPoly& a, const MultiPoly& b) {
    MultiPoly r;
    for (auto& [ma, ca] : a.terms_)
      for (auto& [mb, cb] : b.terms_) r.add_to(ma * mb, ca * cb);
    return r;
  }
  MultiPoly scaled(const Rational& c) const {
    MultiPoly r;
    if (c.is_zero()) return r;
    for (auto& [m, v] : terms_) r.terms_.emplace(m, v * c);
    return r;
  }
  MultiPoly operator-() const { return scaled(Rational(-1)); }
  MultiPoly pow(int e) const {
    MultiPoly r = constant(Rational(1));
    for (int i = 0; i < e; ++i) r = r * (*this);
    return r;
  }

  MultiPoly derivative(int id) const {
    MultiPoly r;
    for (auto& [m, c] : terms_) {
      const int e = m.exp(id);
      if (e == 0) continue;
      Mono m2 = *Mono::divide(m, Mono::of(id, 1));
      r.add_to(m2, Rational(e) * c);
    }
    return r;
  }

  int degree(int id) const {
    int d = 0;
    for (auto& [m, c] : terms_) d = std::max(d, m.exp(id));
    return d;
  }
  int min_exp(int id) const {
    bool first = true;
    int d = 0;
    for (auto& [m, c] : terms_) {
      const int e = m.exp(id);
      if (first || e < d) d = e;
      first = false;
    }
    return d;
  }
  bool involves(int id) const {
    for (auto& [m, c] : terms_)
      if (m.exp(id) != 0) return true;
    return false;
  }

  // View as a polynomial in one variable: exponent -> coefficient poly.
  std::map<int, MultiPoly> by_var(int id) const {
    std::map<int, MultiPoly> r;
    for (auto& [m, c] : terms_) {
      const int e = m.exp(id);
      r[e].add_to(*Mono::divide(m, Mono::of(id, e)), c);
    }
    return r;
  }

  // Substitute a polynomial for one variable (nonnegative exponents only).
  MultiPoly substituted(int id, const MultiPoly& val) const {
    auto rows = by_var(id);
    MultiPoly r;
    MultiPoly p = constant(Rational(1));
    int cur = 0;
    for (auto& [e, coef] : rows) {
      if (e < 0) throw std::domain_error("MultiPoly::substituted: negative exponent");
      while (cur < e) {
        p = p * val;
        ++cur;
      }
      r = r + coef * p;
    }
    return r;
  }

  // Scale every Greek atom by the variable v (used by the unrooting integral).
  MultiPoly v_scaled() const {
    MultiPoly r;
    for (auto& [m, c] : terms_) {
      const int d = m.total_atom_degree();
      r.add_to(m * Mono::of(var::v, d), c);
    }
    return r;
  }

  // s0 -> -s0 (or s -> -s).
  MultiPoly negated_var(int id) const {
    MultiPoly r;
    for (auto& [m, c] : terms_) r.add_to(m, (m.exp(id) % 2) ? -c : c);
    return r;
  }

  // Exact division; nullopt if not divisible. Leading-term loop over the
  // global monomial order (valid because the order is a group order).
  static std::optional<MultiPoly> exact_divide(const MultiPoly& a, const MultiPoly& d) {
    if (d.is_zero()) throw std::domain_error("MultiPoly: division by zero");
    MultiPoly r = a, q;
    const auto& dl = *d.terms_.rbegin();
    while (!r.is_zero()) {
      const auto& rl = *r.terms_.rbegin();
      auto m = Mono::divide(rl.first, dl.first);
      if (!m) return std::nullopt;
      const Rational c = rl.second / dl.second;
      q.add_to(*m, c);
      for (auto& [dm, dc] : d.terms_) r.add_to(*m * dm, -(c * dc));
    }
    return q;
  }

  const std::pair<const Mono, Rational>& leading() const {
    if (terms_.empty()) throw std::logic_error("MultiPoly::leading: zero polynomial");
    return *terms_.rbegin();
  }

  bool operator==(const MultiPoly& o) const { return terms_ == o.terms_; }
  friend bool operator<(const MultiPoly& a, const MultiPoly& b) { return a.terms_ < b.terms_; }

  std::string to_string() const {
    if (terms_.empty()) return "0";
    std::string out;
    for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
      if (!out.empty()) out += " + ";
      out += it->second.to_string();
      for (auto& [vid, e] : it->first.ve)
        out += "*" + var::name(vid) + (e == 1 ? "" : "^" + std::to_string(e));
    }
    return out;
  }

 private:
  Map terms_;
};

// Element of the Greek rational field: numerator polynomial over a factored
// denominator. Factors are kept monic in the global monomial order; reduction
// cancels factors that divide the numerator exactly.
class GreekRat {
 public:
  GreekRat() : num_(MultiPoly::constant(Rational(0))) {}
  explicit GreekRat(MultiPoly num) : num_(std::move(num)) {}
  explicit GreekRat(Rational c) : num_(MultiPoly::constant(std::move(c))) {}
  static GreekRat variable(int id, int e = 1) { return GreekRat(MultiPoly::variable(id, e)); }

  static GreekRat fraction(MultiPoly num, const std::vector<std::pair<MultiPoly, int>>& den) {
    GreekRat r(std::move(num));
    for (auto& [f, e] : den) r.mul_den(f, e);
    r.reduce();
    return r;
  }

  const MultiPoly& num() const { return num_; }
  const std::map<MultiPoly, int>& den() const { return den_; }
  bool is_zero() const { return num_.is_zero(); }

  MultiPoly den_poly() const {
    MultiPoly d = MultiPoly::constant(Rational(1));
    for (auto& [f, e] : den_) d = d * f.pow(e);
    return d;
  }

  friend GreekRat operator+(const GreekRat& a, const GreekRat& b) {
    GreekRat r;
    // union of denominators
    r.den_ = a.den_;
    for (auto& [f, e] : b.den_) {
      auto it = r.den_.find(f);
      if (it == r.den_.end())
        r.den_.emplace(f, e);
      else
        it->second = std::max(it->second, e);
    }
    MultiPoly na = a.num_, nb = b.num_;
    for (auto& [f, e] : r.den_) {
      const int ea = e - a.den_exp(f), eb = e - b.den_exp(f);
      if (ea > 0) na = na * f.pow(ea);
      if (eb > 0) nb = nb * f.pow(eb);
    }
    r.num_ = na + nb;
    r.reduce();
    return r;
  }
  friend GreekRat operator-(const GreekRat& a, const GreekRat& b) {
    return a + b.scaled(Rational(-1));
  }
  friend GreekRat operator*(const GreekRat& a, const GreekRat& b) {
    GreekRat r;
    r.num_ = a.num_ * b.num_;
    r.den_ = a.den_;
    for (auto& [f, e] : b.den_) r.den_[f] += e;
    r.reduce();
    return r;
  }
  GreekRat scaled(const Rational& c) const {
    GreekRat r = *this;
    r.num_ = r.num_.scaled(c);
    if (c.is_zero()) r.den_.clear();
    return r;
  }
  GreekRat operator-() const { return scaled(Rational(-1)); }

  GreekRat pow(int e) const {
    if (e < 0) throw std::invalid_argument("GreekRat::pow: negative exponent");
    GreekRat r(Rational(1));
    for (int i = 0; i < e; ++i) r = r * (*this);
    return r;
  }

  // Divide by a polynomial (kept as a denominator factor).
  GreekRat over(const MultiPoly& f, int e = 1) const {
    GreekRat r = *this;
    r.mul_den(f, e);
    r.reduce();
    return r;
  }

  GreekRat derivative(int id) const {
    // d(num)/den - num * sum_f e_f f' / (f den)
    GreekRat r(num_.derivative(id));
    for (auto& [f, e] : den_) r.den_[f] += e;
    r.reduce();
    for (auto& [f, e] : den_) {
      const MultiPoly df = f.derivative(id);
      if (df.is_zero()) continue;
      GreekRat t(num_ * df);
      t.den_ = den_;
      t.den_[f] += 1;
      t.num_ = t.num_.scaled(Rational(-e));
      t.reduce();
      r = r + t;
    }
    return r;
  }

  GreekRat negated_var(int id) const {
    GreekRat r;
    r.num_ = num_.negated_var(id);
    for (auto& [f, e] : den_) r.den_.emplace(f.negated_var(id), e);
    return r.normalized_factors();
  }

  bool equals(const GreekRat& o) const { return (*this - o).is_zero(); }

  // Substitute series for every variable; denominators must evaluate to
  // invertible series. s/s0 evaluate to (1-uz)/(1+uz); v must be absent.
  SeriesZUP eval(const CoordData& cd) const {
    const int N = cd.trunc;
    auto eval_poly = [&](const MultiPoly& p) {
      SeriesZUP r = SeriesZUP::zero(N);
      std::map<int, SeriesZUP> spow;  // cached powers of s
      for (auto& [m, c] : p.terms()) {
        SeriesZUP term = SeriesZUP::one(N, false).scaled(c);
        for (auto& [vid, e] : m.ve) {
          if (vid == var::v) throw std::domain_error("GreekRat::eval: v present");
          if (var::is_laurent(vid)) {
            auto it = spow.find(e);
            if (it == spow.end()) it = spow.emplace(e, s_series(N, e)).first;
            term = term * it->second;
          } else {
            auto a = var::to_atom(vid);
            term = term * cd.greek(*a).pow(e);
          }
        }
        r = r + term;
      }
      return r;
    };
    SeriesZUP r = eval_poly(num_);
    for (auto& [f, e] : den_) {
      SeriesZUP fs = eval_poly(f);
      if (fs.constant_term().is_zero())
        throw std::domain_error("GreekRat::eval: denominator is a non-unit series");
      r = r * fs.reciprocal().pow(e);
    }
    return r;
  }

  std::string to_string() const {
    std::string out = "(" + num_.to_string() + ")";
    for (auto& [f, e] : den_)
      out += " / (" + f.to_string() + ")^" + std::to_string(e);
    return out;
  }

  void reduce() {
    if (num_.is_zero()) {
      den_.clear();
      return;
    }
    for (auto it = den_.begin(); it != den_.end();) {
      while (it->second > 0) {
        auto q = MultiPoly::exact_divide(num_, it->first);
        if (!q) break;
        num_ = std::move(*q);
        --it->second;
      }
      it = (it->second == 0) ? den_.erase(it) : std::next(it);
    }
  }

 private:
  int den_exp(const MultiPoly& f) const {
    auto it = den_.find(f);
    return it == den_.end() ? 0 : it->second;
  }
  void mul_den(const MultiPoly& f, int e) {
    if (e == 0) return;
    if (f.is_zero()) throw std::domain_error("GreekRat: zero denominator factor");
    MultiPoly g = f;
    const Rational lead = g.leading().second;
    if (lead != Rational(1)) {
      g = g.scaled(Rational(1) / lead);
      num_ = num_.scaled(Rational(1) / Rational::pow(lead, e));
    }
    if (g.size() == 1 && g.leading().first.is_one()) return;  // constant factor folded
    den_[g] += e;
  }
  GreekRat normalized_factors() const {
    GreekRat r;
    r.num_ = num_;
    for (auto& [f, e] : den_) {
      GreekRat t;
      t.num_ = r.num_;
      t.den_ = r.den_;
      t.mul_den(f, e);
      r = t;
    }
    r.reduce();
    return r;
  }
  MultiPoly num_;
  std::map<MultiPoly, int> den_;
};

}  // namespace mapgf

#endif  // MAPGF_GREEKFIELD_HPP
