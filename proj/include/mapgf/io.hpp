#ifndef MAPGF_IO_HPP
#define MAPGF_IO_HPP

#include <json.hpp>
#include <string>

#include "mapgf/census.hpp"
#include "mapgf/closedform.hpp"
#include "mapgf/greek.hpp"
#include "mapgf/series.hpp"

namespace mapgf {

using nlohmann::json;

// Rationals travel as decimal strings to keep exactness.
inline json to_json(const Rational& r) { return r.to_string(); }
inline Rational rational_from_json(const json& j) { return Rational::from_string(j.get<std::string>()); }

inline json to_json(const Partition& p) { return json(p.parts()); }
inline Partition partition_from_json(const json& j) {
  return Partition(j.get<std::vector<int>>());
}

inline json to_json(const CensusResult& c) {
  json labelled = json::array(), rooted = json::array(), marked = json::array();
  for (auto& [key, v] : c.labelled)
    labelled.push_back({{"g", key.g}, {"mu", to_json(key.mu)}, {"count", v}});
  for (auto& [key, v] : c.rooted)
    rooted.push_back({{"g", key.g}, {"k", key.k}, {"mu", to_json(key.mu)}, {"count", v}});
  for (auto& [key, m] : c.marked)
    marked.push_back({{"g", key.g},
                      {"mu", to_json(key.mu)},
                      {"vertex", m.vertex},
                      {"face", m.face},
                      {"edge", m.edge}});
  return json{{"n", c.n},
              {"transitive_pairs", c.transitive_pairs},
              {"labelled", labelled},
              {"rooted", rooted},
              {"marked", marked}};
}

inline CensusResult census_from_json(const json& j) {
  CensusResult c;
  c.n = j.at("n").get<int>();
  c.transitive_pairs = j.at("transitive_pairs").get<std::int64_t>();
  for (auto& e : j.at("labelled"))
    c.labelled[{e.at("g").get<int>(), partition_from_json(e.at("mu"))}] =
        e.at("count").get<std::int64_t>();
  for (auto& e : j.at("rooted"))
    c.rooted[{e.at("g").get<int>(), e.at("k").get<int>(), partition_from_json(e.at("mu"))}] =
        e.at("count").get<std::int64_t>();
  for (auto& e : j.at("marked")) {
    MarkedCounts m{e.at("vertex").get<std::int64_t>(), e.at("face").get<std::int64_t>(),
                   e.at("edge").get<std::int64_t>()};
    c.marked[{e.at("g").get<int>(), partition_from_json(e.at("mu"))}] = m;
  }
  return c;
}

template <class Chart>
json to_json(const Series<Chart>& s) {
  json terms = json::array();
  for (auto& [key, v] : s.terms())
    terms.push_back(
        {{"n", key.n}, {"k", key.k}, {"mu", to_json(key.mu)}, {"coeff", to_json(v)}});
  return json{{"chart", Chart::base}, {"trunc", s.trunc()}, {"graded", s.graded()},
              {"terms", terms}};
}

template <class Chart>
Series<Chart> series_from_json(const json& j) {
  Series<Chart> s(j.at("trunc").get<int>(), false);
  for (auto& e : j.at("terms"))
    s.set({e.at("n").get<int>(), e.at("k").get<int>(), partition_from_json(e.at("mu"))},
          rational_from_json(e.at("coeff")));
  if (j.value("graded", false)) s.set_graded(true);
  return s;
}

inline json to_json(const ClosedFormF& cf) {
  json terms = json::array();
  for (auto& t : cf.terms)
    terms.push_back({{"alpha", to_json(t.alpha)},
                     {"beta", to_json(t.beta)},
                     {"a", t.a},
                     {"b", t.b},
                     {"c", t.c},
                     {"sign", t.sign > 0 ? "+" : "-"},
                     {"coeff_num", t.coeff.num().get_str()},
                     {"coeff_den", t.coeff.den().get_str()}});
  return json{{"genus", cf.g}, {"target", "F"}, {"terms", terms}};
}

inline ClosedFormF closed_form_f_from_json(const json& j) {
  ClosedFormF cf;
  cf.g = j.at("genus").get<int>();
  for (auto& e : j.at("terms")) {
    FTerm t;
    t.alpha = partition_from_json(e.at("alpha"));
    t.beta = partition_from_json(e.at("beta"));
    t.a = e.at("a").get<int>();
    t.b = e.at("b").get<int>();
    t.c = e.at("c").get<int>();
    t.sign = e.at("sign").get<std::string>() == "+" ? +1 : -1;
    t.coeff = Rational(mpz_class(e.at("coeff_num").get<std::string>()),
                       mpz_class(e.at("coeff_den").get<std::string>()));
    cf.terms.push_back(t);
  }
  return cf;
}

inline json to_json(const ClosedFormL& cf) {
  json terms = json::array();
  for (auto& t : cf.terms)
    terms.push_back({{"alpha", to_json(t.alpha)},
                     {"beta", to_json(t.beta)},
                     {"a", t.a},
                     {"b", t.b},
                     {"coeff_num", t.coeff.num().get_str()},
                     {"coeff_den", t.coeff.den().get_str()}});
  return json{{"genus", cf.g},
              {"target", "L"},
              {"terms", terms},
              {"log_eta", to_json(cf.log_eta)},
              {"log_zeta", to_json(cf.log_zeta)}};
}

inline ClosedFormL closed_form_l_from_json(const json& j) {
  ClosedFormL cf;
  cf.g = j.at("genus").get<int>();
  for (auto& e : j.at("terms")) {
    LTerm t;
    t.alpha = partition_from_json(e.at("alpha"));
    t.beta = partition_from_json(e.at("beta"));
    t.a = e.at("a").get<int>();
    t.b = e.at("b").get<int>();
    t.coeff = Rational(mpz_class(e.at("coeff_num").get<std::string>()),
                       mpz_class(e.at("coeff_den").get<std::string>()));
    cf.terms.push_back(t);
  }
  cf.log_eta = rational_from_json(j.at("log_eta"));
  cf.log_zeta = rational_from_json(j.at("log_zeta"));
  return cf;
}

// Human-readable forms.
inline std::string latex(const ClosedFormF& cf) {
  std::string out;
  for (auto& t : cf.terms) {
    if (!out.empty()) out += " + ";
    out += "\\frac{" + t.coeff.to_string() + (t.alpha.empty() && t.beta.empty() ? "" : " ");
    for (int p : t.alpha.parts()) out += "\\eta_{" + std::to_string(p) + "}";
    for (int p : t.beta.parts()) out += "\\zeta_{" + std::to_string(p) + "}";
    out += "}{";
    if (t.a) out += "(1-\\eta)^{" + std::to_string(t.a) + "}";
    if (t.b) out += "(1+\\zeta)^{" + std::to_string(t.b) + "}";
    out += std::string("(1") + (t.sign > 0 ? "-" : "+") + "uz)^{" + std::to_string(t.c) + "}}";
  }
  return out.empty() ? "0" : out;
}

inline std::string latex(const ClosedFormL& cf) {
  std::string out;
  if (!cf.log_eta.is_zero())
    out += cf.log_eta.to_string() + " \\ln\\frac{1}{1-\\eta}";
  if (!cf.log_zeta.is_zero())
    out += (out.empty() ? "" : " + ") + cf.log_zeta.to_string() + " \\ln\\frac{1}{1+\\zeta}";
  for (auto& t : cf.terms) {
    if (!out.empty()) out += " + ";
    if (t.a == 0 && t.b == 0 && t.alpha.empty() && t.beta.empty()) {
      out += t.coeff.to_string();
      continue;
    }
    out += "\\frac{" + t.coeff.to_string();
    for (int p : t.alpha.parts()) out += "\\eta_{" + std::to_string(p) + "}";
    for (int p : t.beta.parts()) out += "\\zeta_{" + std::to_string(p) + "}";
    out += "}{";
    if (t.a) out += "(1-\\eta)^{" + std::to_string(t.a) + "}";
    if (t.b) out += "(1+\\zeta)^{" + std::to_string(t.b) + "}";
    out += "}";
  }
  return out.empty() ? "0" : out;
}

}  // namespace mapgf

#endif  // MAPGF_IO_HPP
