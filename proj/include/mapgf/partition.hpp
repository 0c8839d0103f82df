#ifndef MAPGF_PARTITION_HPP
#define MAPGF_PARTITION_HPP

#include <algorithm>
#include <compare>
#include <functional>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace mapgf {

// Integer partition: weakly decreasing list of positive parts.
class Partition {
 public:
  Partition() = default;
  explicit Partition(std::vector<int> parts) : parts_(std::move(parts)) {
    for (int p : parts_)
      if (p <= 0) throw std::invalid_argument("Partition: nonpositive part");
    std::sort(parts_.begin(), parts_.end(), std::greater<int>());
  }
  static Partition single(int k) { return Partition(std::vector<int>{k}); }

  const std::vector<int>& parts() const { return parts_; }
  bool empty() const { return parts_.empty(); }
  int length() const { return static_cast<int>(parts_.size()); }
  int weight() const { return std::accumulate(parts_.begin(), parts_.end(), 0); }
  int max_part() const { return parts_.empty() ? 0 : parts_.front(); }

  int multiplicity(int k) const {
    auto [lo, hi] = std::equal_range(parts_.begin(), parts_.end(), k, std::greater<int>());
    return static_cast<int>(hi - lo);
  }

  Partition with_part(int k) const {
    if (k <= 0) throw std::invalid_argument("Partition: nonpositive part");
    Partition r(*this);
    auto it = std::lower_bound(r.parts_.begin(), r.parts_.end(), k, std::greater<int>());
    r.parts_.insert(it, k);
    return r;
  }

  Partition without_part(int k) const {
    Partition r(*this);
    auto it = std::find(r.parts_.begin(), r.parts_.end(), k);
    if (it == r.parts_.end()) throw std::invalid_argument("Partition: part not present");
    r.parts_.erase(it);
    return r;
  }

  // Union of multisets of parts.
  friend Partition operator+(const Partition& a, const Partition& b) {
    std::vector<int> m;
    m.reserve(a.parts_.size() + b.parts_.size());
    std::merge(a.parts_.begin(), a.parts_.end(), b.parts_.begin(), b.parts_.end(),
               std::back_inserter(m), std::greater<int>());
    Partition r;
    r.parts_ = std::move(m);
    return r;
  }

  auto operator<=>(const Partition&) const = default;

  std::string to_string() const {
    std::string s = "[";
    for (size_t i = 0; i < parts_.size(); ++i) {
      if (i) s += ",";
      s += std::to_string(parts_[i]);
    }
    return s + "]";
  }

 private:
  std::vector<int> parts_;
};

// All partitions of n in a fixed (descending-lex) order; n = 0 gives the empty partition.
inline void for_each_partition(int n, const std::function<void(const Partition&)>& fn) {
  std::vector<int> cur;
  std::function<void(int, int)> gen = [&](int rem, int mx) {
    if (rem == 0) {
      Partition p;
      p = Partition(cur);
      fn(p);
      return;
    }
    for (int q = std::min(rem, mx); q >= 1; --q) {
      cur.push_back(q);
      gen(rem - q, q);
      cur.pop_back();
    }
  };
  gen(n, n);
}

inline std::vector<Partition> partitions_of(int n) {
  std::vector<Partition> r;
  for_each_partition(n, [&](const Partition& p) { r.push_back(p); });
  return r;
}

// All partitions of weight 0..w (empty partition first).
inline std::vector<Partition> partitions_up_to(int w) {
  std::vector<Partition> r;
  for (int n = 0; n <= w; ++n)
    for (auto& p : partitions_of(n)) r.push_back(p);
  return r;
}

}  // namespace mapgf

#endif  // MAPGF_PARTITION_HPP
