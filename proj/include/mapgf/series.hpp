#ifndef MAPGF_SERIES_HPP
#define MAPGF_SERIES_HPP

#include <algorithm>
#include <compare>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "mapgf/partition.hpp"
#include "mapgf/rational.hpp"

namespace mapgf {

// Coordinate charts. TX: (t; x; p1,p2,...). ZU: (z; u; p1,p2,...).
// Mixing charts is a compile-time error; the chart tag is part of the type.
struct ChartTX {
  static constexpr const char* base = "t";
  static constexpr const char* cat = "x";
};
struct ChartZU {
  static constexpr const char* base = "z";
  static constexpr const char* cat = "u";
};

template <class Chart>
struct SeriesKey {
  int n = 0;  // t- resp. z-exponent
  int k = 0;  // x- resp. u-exponent
  Partition mu;
  auto operator<=>(const SeriesKey&) const = default;
};

// Sparse truncated formal power series over Rational. Truncation is by the
// base-variable exponent n; keys with n > trunc are silently inexistent and
// asking for them is an error (the information was discarded, it is not zero).
// The map-graded flag asserts n == k + |mu| on every key.
template <class Chart>
class Series {
 public:
  using Key = SeriesKey<Chart>;
  using Map = std::map<Key, Rational>;

  explicit Series(int trunc = 0, bool graded = false) : trunc_(trunc), graded_(graded) {}

  static Series zero(int trunc, bool graded = false) { return Series(trunc, graded); }
  static Series one(int trunc, bool graded = true) {
    Series s(trunc, graded);
    s.set({0, 0, Partition{}}, Rational(1));
    return s;
  }
  static Series monomial(int trunc, int n, int k, Partition mu, Rational c, bool graded = false) {
    Series s(trunc, graded);
    s.set({n, k, std::move(mu)}, std::move(c));
    return s;
  }
  // The bare base variable (t resp. z).
  static Series base_var(int trunc) {
    return monomial(trunc, 1, 0, Partition{}, Rational(1), false);
  }
  // The bare catalytic variable (x resp. u).
  static Series cat_var(int trunc) {
    return monomial(trunc, 0, 1, Partition{}, Rational(1), false);
  }
  static Series p_var(int trunc, int k) {
    return monomial(trunc, 0, 0, Partition::single(k), Rational(1), false);
  }

  int trunc() const { return trunc_; }
  bool graded() const { return graded_; }
  void set_graded(bool g) {
    if (g) assert_graded();
    graded_ = g;
  }
  const Map& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  size_t size() const { return terms_.size(); }

  void set(Key key, Rational c) {
    if (key.n > trunc_) return;
    if (c.is_zero())
      terms_.erase(key);
    else
      terms_[std::move(key)] = std::move(c);
  }
  void add_to(const Key& key, const Rational& c) {
    if (key.n > trunc_ || c.is_zero()) return;
    auto it = terms_.find(key);
    if (it == terms_.end()) {
      terms_.emplace(key, c);
    } else {
      it->second += c;
      if (it->second.is_zero()) terms_.erase(it);
    }
  }

  // Stored coefficient or exact zero; beyond truncation the value is unknown.
  Rational coeff(const Key& key) const {
    if (key.n > trunc_)
      throw std::out_of_range("Series::coeff: key beyond truncation (lost, not zero)");
    auto it = terms_.find(key);
    return it == terms_.end() ? Rational(0) : it->second;
  }
  Rational coeff(int n, int k, const Partition& mu) const { return coeff(Key{n, k, mu}); }

  void assert_graded() const {
    for (auto& [key, c] : terms_)
      if (key.n != key.k + key.mu.weight())
        throw std::logic_error("Series: grading n = k + |mu| violated at n=" +
                               std::to_string(key.n) + " k=" + std::to_string(key.k) + " mu=" +
                               key.mu.to_string());
  }

  friend Series operator+(const Series& a, const Series& b) {
    Series r(std::min(a.trunc_, b.trunc_), a.graded_ && b.graded_);
    for (auto& [k, v] : a.terms_)
      if (k.n <= r.trunc_) r.terms_[k] = v;
    for (auto& [k, v] : b.terms_) {
      if (k.n > r.trunc_) continue;
      auto it = r.terms_.find(k);
      if (it == r.terms_.end())
        r.terms_.emplace(k, v);
      else {
        it->second += v;
        if (it->second.is_zero()) r.terms_.erase(it);
      }
    }
    return r;
  }
  friend Series operator-(const Series& a, const Series& b) { return a + b.scaled(Rational(-1)); }

  friend Series operator*(const Series& a, const Series& b) {
    Series r(std::min(a.trunc_, b.trunc_), a.graded_ && b.graded_);
    for (auto& [ka, va] : a.terms_) {
      if (ka.n > r.trunc_) continue;
      for (auto& [kb, vb] : b.terms_) {
        const int n = ka.n + kb.n;
        if (n > r.trunc_) continue;
        r.add_to(Key{n, ka.k + kb.k, ka.mu + kb.mu}, va * vb);
      }
    }
    return r;
  }

  Series scaled(const Rational& c) const {
    Series r(trunc_, graded_);
    if (c.is_zero()) return r;
    for (auto& [k, v] : terms_) r.terms_[k] = v * c;
    return r;
  }

  Series truncated(int new_trunc) const {
    Series r(std::min(trunc_, new_trunc), graded_);
    for (auto& [k, v] : terms_)
      if (k.n <= r.trunc_) r.terms_[k] = v;
    return r;
  }

  // p_i := 0 for i > cap.
  Series restricted_parts(int cap) const {
    Series r(trunc_, graded_);
    for (auto& [k, v] : terms_)
      if (k.mu.max_part() <= cap) r.terms_[k] = v;
    return r;
  }

  Series pow(int e) const {
    if (e < 0) throw std::invalid_argument("Series::pow: negative exponent");
    Series r = one(trunc_, graded_);
    Series b = *this;
    while (e > 0) {
      if (e & 1) r = r * b;
      b = (e >>= 1) ? b * b : b;
    }
    return r;
  }

  // 1/f for f with invertible (nonzero) constant term.
  Series reciprocal() const {
    const Rational c0 = constant_term();
    if (c0.is_zero())
      throw std::domain_error("Series::reciprocal: constant term is zero");
    // f = c0 (1 + g), 1/f = (1/c0) sum (-g)^j ; g has positive base valuation
    Series g = *this;
    g.terms_.erase(Key{0, 0, Partition{}});
    bool catal = false;
    for (auto& [k, v] : g.terms_)
      if (k.n == 0) catal = true;
    if (catal)
      throw std::domain_error("Series::reciprocal: non-constant terms at base order 0");
    g = g.scaled(Rational(-1) / c0);
    Series r = one(trunc_, false);
    Series term = one(trunc_, false);
    for (int j = 0; j < trunc_; ++j) {
      term = term * g;
      if (term.is_zero()) break;
      r = r + term;
    }
    return r.scaled(Rational(1) / c0);
  }

  Rational constant_term() const {
    auto it = terms_.find(Key{0, 0, Partition{}});
    return it == terms_.end() ? Rational(0) : it->second;
  }

  bool operator==(const Series& o) const { return terms_ == o.terms_; }

 private:
  int trunc_;
  bool graded_;
  Map terms_;
};

using SeriesTXP = Series<ChartTX>;
using SeriesZUP = Series<ChartZU>;

// f(base, cat, p) with base := base_sub and cat := cat_sub, both series in the
// target chart. Requires base_sub to have positive base valuation and cat_sub to
// vanish at the origin, so that truncated composition is well defined.
template <class C1, class C2>
Series<C2> compose(const Series<C1>& f, const Series<C2>& base_sub, const Series<C2>& cat_sub) {
  for (auto& s : {&base_sub, &cat_sub})
    if (!s->constant_term().is_zero())
      throw std::domain_error("compose: substitution has nonzero constant term");
  const int trunc = std::min(base_sub.trunc(), cat_sub.trunc());
  Series<C2> r(trunc, false);
  std::vector<Series<C2>> bpow{Series<C2>::one(trunc, false)};
  std::vector<Series<C2>> cpow{Series<C2>::one(trunc, false)};
  auto power = [&](std::vector<Series<C2>>& cache, const Series<C2>& base, int e) -> const Series<C2>& {
    while (static_cast<int>(cache.size()) <= e) cache.push_back(cache.back() * base);
    return cache[e];
  };
  for (auto& [key, c] : f.terms()) {
    Series<C2> term = power(bpow, base_sub, key.n) * power(cpow, cat_sub, key.k);
    for (auto& [tk, tv] : term.terms())
      r.add_to({tk.n, tk.k, tk.mu + key.mu}, tv * c);
  }
  return r;
}

// Composition for series without catalytic variable (k = 0 everywhere).
template <class C1, class C2>
Series<C2> compose(const Series<C1>& f, const Series<C2>& base_sub) {
  for (auto& [key, c] : f.terms())
    if (key.k != 0)
      throw std::domain_error("compose: series has catalytic variable, substitution missing");
  return compose(f, base_sub, Series<C2>::zero(base_sub.trunc()));
}

// Substitute numeric values for every p_i (absent indices default to 0).
template <class C>
Series<C> specialize_p(const Series<C>& f, const std::map<int, Rational>& vals) {
  Series<C> r(f.trunc(), false);
  for (auto& [key, c] : f.terms()) {
    Rational w = c;
    for (int part : key.mu.parts()) {
      auto it = vals.find(part);
      if (it == vals.end()) {
        w = Rational(0);
        break;
      }
      w *= it->second;
    }
    if (!w.is_zero()) r.add_to({key.n, key.k, Partition{}}, w);
  }
  return r;
}

}  // namespace mapgf

#endif  // MAPGF_SERIES_HPP
