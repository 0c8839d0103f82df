#ifndef MAPGF_CENSUS_HPP
#define MAPGF_CENSUS_HPP

#include <algorithm>
#include <array>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <thread>
#include <vector>

#include "mapgf/partition.hpp"
#include "mapgf/rational.hpp"

namespace mapgf {

using Perm = std::vector<int>;  // 0-based images

inline int cycle_count(const Perm& p) {
  const int n = static_cast<int>(p.size());
  std::array<bool, 16> seen{};
  int c = 0;
  for (int i = 0; i < n; ++i) {
    if (seen[i]) continue;
    ++c;
    for (int j = i; !seen[j]; j = p[j]) seen[j] = true;
  }
  return c;
}

// Euler's formula: l(sw) + l(sb) + l(sw sb) = n + 2 - 2g.
inline int genus_of(const Perm& sigma_w, const Perm& sigma_b) {
  if (sigma_w.size() != sigma_b.size())
    throw std::invalid_argument("genus_of: ground sets differ");
  const int n = static_cast<int>(sigma_w.size());
  Perm prod(n);
  for (int i = 0; i < n; ++i) prod[i] = sigma_w[sigma_b[i]];
  const int total = cycle_count(sigma_w) + cycle_count(sigma_b) + cycle_count(prod);
  const int twice_g = n + 2 - total;
  if (twice_g < 0 || twice_g % 2 != 0)
    throw std::logic_error("genus_of: Euler parity violated");  // impossible for permutations
  return twice_g / 2;
}

struct CensusKey {
  int g = 0;
  Partition mu;
  auto operator<=>(const CensusKey&) const = default;
};
struct RootedKey {
  int g = 0;
  int k = 0;  // root face half-degree
  Partition mu;
  auto operator<=>(const RootedKey&) const = default;
};
struct MarkedCounts {
  std::int64_t vertex = 0;
  std::int64_t face = 0;
  std::int64_t edge = 0;
  bool operator==(const MarkedCounts&) const = default;
};

struct CensusResult {
  int n = 0;
  std::map<CensusKey, std::int64_t> labelled;       // l_g(mu)
  std::map<RootedKey, std::int64_t> rooted;         // b_g(k, mu)
  std::map<CensusKey, MarkedCounts> marked;         // totals over labelled maps
  std::int64_t transitive_pairs = 0;
};

namespace detail {

// Nibble-packed descending cycle type, n <= 8 parts of size <= 8.
inline std::uint64_t pack_type(const int* lens, int cnt) {
  std::array<int, 8> a{};
  for (int i = 0; i < cnt; ++i) a[i] = lens[i];
  std::sort(a.begin(), a.begin() + cnt, std::greater<int>());
  std::uint64_t code = 0;
  for (int i = 0; i < cnt; ++i) code = (code << 4) | static_cast<std::uint64_t>(a[i]);
  return code;
}

inline Partition unpack_type(std::uint64_t code) {
  std::vector<int> parts;
  while (code) {
    parts.push_back(static_cast<int>(code & 0xF));
    code >>= 4;
  }
  return Partition(parts);
}

struct Accum {
  // key: (g << 40) | (k << 36) | type  with k = 0 for unrooted tallies
  std::map<std::uint64_t, std::int64_t> labelled, rooted;
  std::map<std::uint64_t, std::array<std::int64_t, 3>> marked;
  std::int64_t pairs = 0;
};

inline void census_range(int n, const std::vector<Perm>& outer, size_t lo, size_t hi, Accum& acc) {
  std::vector<int> sb(n), prod(n), cyc_len(n), par(n);
  for (size_t oi = lo; oi < hi; ++oi) {
    const Perm& sw = outer[oi];
    const int cw = cycle_count(sw);
    for (int i = 0; i < n; ++i) sb[i] = i;
    do {
      for (int i = 0; i < n; ++i) prod[i] = sw[sb[i]];
      // transitivity: orbits of the group generated by sw, sb
      for (int i = 0; i < n; ++i) par[i] = i;
      auto find = [&](int x) {
        while (par[x] != x) x = par[x] = par[par[x]];
        return x;
      };
      for (int i = 0; i < n; ++i) {
        int a = find(i), b = find(sw[i]);
        if (a != b) par[a] = b;
        a = find(i), b = find(sb[i]);
        if (a != b) par[a] = b;
      }
      int roots = 0;
      for (int i = 0; i < n; ++i)
        if (par[i] == i) ++roots;
      if (roots != 1) continue;

      int cb = 0;
      {
        std::array<bool, 16> seen{};
        for (int i = 0; i < n; ++i) {
          if (seen[i]) continue;
          ++cb;
          for (int j = i; !seen[j]; j = sb[j]) seen[j] = true;
        }
      }
      int cp = 0, root_len = 0;
      {
        std::array<bool, 16> seen{};
        for (int i = 0; i < n; ++i) {
          if (seen[i]) continue;
          int len = 0;
          for (int j = i; !seen[j]; j = prod[j]) {
            seen[j] = true;
            ++len;
          }
          cyc_len[cp++] = len;
          if (i == 0) root_len = len;
        }
      }
      const int twice_g = n + 2 - cw - cb - cp;
      if (twice_g < 0 || twice_g % 2 != 0) throw std::logic_error("census: Euler parity violated");
      const int g = twice_g / 2;

      const std::uint64_t type = pack_type(cyc_len.data(), cp);
      const std::uint64_t gkey = (static_cast<std::uint64_t>(g) << 40) | type;
      acc.labelled[gkey] += 1;
      auto& mk = acc.marked[gkey];
      mk[0] += cw + cb;
      mk[1] += cp;
      mk[2] += n;
      acc.pairs += 1;

      // root face: cycle of the product containing label 1 (index 0)
      int rest[8];
      int rc = 0;
      bool removed = false;
      for (int i = 0; i < cp; ++i) {
        if (!removed && cyc_len[i] == root_len) {
          removed = true;
          continue;
        }
        rest[rc++] = cyc_len[i];
      }
      const std::uint64_t rkey = (static_cast<std::uint64_t>(g) << 40) |
                                 (static_cast<std::uint64_t>(root_len) << 36) |
                                 pack_type(rest, rc);
      acc.rooted[rkey] += 1;
    } while (std::next_permutation(sb.begin(), sb.end()));
  }
}

}  // namespace detail

// Exhaustive enumeration of (sigma_w, sigma_b) in S_n^2. Guarded at n <= 7;
// n = 8 (1.6e9 pairs) and beyond require override_guard.
inline CensusResult census_run(int n, bool override_guard = false, int threads = 0) {
  if (n < 1) throw std::invalid_argument("census: n must be >= 1");
  if (n > 7 && !override_guard)
    throw std::invalid_argument("census: n > 7 needs the guard override");
  if (n > 8) throw std::invalid_argument("census: n > 8 unsupported (key packing)");

  std::vector<Perm> outer;
  {
    Perm p(n);
    for (int i = 0; i < n; ++i) p[i] = i;
    do
      outer.push_back(p);
    while (std::next_permutation(p.begin(), p.end()));
  }

  if (threads <= 0) {
    unsigned hc = std::thread::hardware_concurrency();
    threads = hc ? static_cast<int>(hc) : 1;
  }
  threads = std::min<int>(threads, static_cast<int>(outer.size()));

  std::vector<detail::Accum> accs(threads);
  if (threads == 1) {
    detail::census_range(n, outer, 0, outer.size(), accs[0]);
  } else {
    std::vector<std::thread> pool;
    const size_t m = outer.size();
    for (int t = 0; t < threads; ++t) {
      const size_t lo = m * t / threads, hi = m * (t + 1) / threads;
      pool.emplace_back(detail::census_range, n, std::cref(outer), lo, hi, std::ref(accs[t]));
    }
    for (auto& th : pool) th.join();
  }

  CensusResult res;
  res.n = n;
  const auto fact = Rational::factorial(n - 1).to_integer();
  std::map<std::uint64_t, std::int64_t> rooted_raw;
  for (auto& acc : accs) {
    res.transitive_pairs += acc.pairs;
    for (auto& [key, v] : acc.labelled) {
      const int g = static_cast<int>(key >> 40);
      res.labelled[{g, detail::unpack_type(key & ((1ULL << 40) - 1))}] += v;
    }
    for (auto& [key, mk] : acc.marked) {
      const int g = static_cast<int>(key >> 40);
      auto& m = res.marked[{g, detail::unpack_type(key & ((1ULL << 40) - 1))}];
      m.vertex += mk[0];
      m.face += mk[1];
      m.edge += mk[2];
    }
    for (auto& [key, v] : acc.rooted) rooted_raw[key] += v;
  }
  for (auto& [key, v] : rooted_raw) {
    const int g = static_cast<int>(key >> 40);
    const int k = static_cast<int>((key >> 36) & 0xF);
    mpz_class q, r;
    mpz_fdiv_qr(q.get_mpz_t(), r.get_mpz_t(), mpz_class(v).get_mpz_t(), fact.get_mpz_t());
    if (r != 0)
      throw std::logic_error("census: rooted count not divisible by (n-1)!");
    res.rooted[{g, k, detail::unpack_type(key & ((1ULL << 36) - 1))}] += q.get_si();
  }
  return res;
}

}  // namespace mapgf

#endif  // MAPGF_CENSUS_HPP
