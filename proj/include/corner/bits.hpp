#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

namespace corner {

// Fixed-universe bitset used for vertex sets of faces. The universe size is
// carried so that equality and ordering never depend on trailing words.
class Bits {
 public:
  Bits() = default;
  explicit Bits(std::size_t n) : n_(n), w_((n + 63) / 64, 0) {}

  static Bits full(std::size_t n) {
    Bits b(n);
    for (std::size_t i = 0; i < n; ++i) b.set(i);
    return b;
  }

  std::size_t universe() const { return n_; }
  void set(std::size_t i) { w_[i >> 6] |= (uint64_t(1) << (i & 63)); }
  void reset(std::size_t i) { w_[i >> 6] &= ~(uint64_t(1) << (i & 63)); }
  bool test(std::size_t i) const { return (w_[i >> 6] >> (i & 63)) & 1; }

  std::size_t count() const {
    std::size_t c = 0;
    for (auto w : w_) c += std::popcount(w);
    return c;
  }
  bool empty() const {
    for (auto w : w_)
      if (w) return false;
    return true;
  }

  Bits operator&(const Bits& o) const {
    Bits r(n_);
    for (std::size_t i = 0; i < w_.size(); ++i) r.w_[i] = w_[i] & o.w_[i];
    return r;
  }
  Bits operator|(const Bits& o) const {
    Bits r(n_);
    for (std::size_t i = 0; i < w_.size(); ++i) r.w_[i] = w_[i] | o.w_[i];
    return r;
  }
  bool subset_of(const Bits& o) const {
    for (std::size_t i = 0; i < w_.size(); ++i)
      if (w_[i] & ~o.w_[i]) return false;
    return true;
  }

  std::vector<int> indices() const {
    std::vector<int> out;
    for (std::size_t i = 0; i < n_; ++i)
      if (test(i)) out.push_back(int(i));
    return out;
  }

  bool operator==(const Bits& o) const { return n_ == o.n_ && w_ == o.w_; }
  bool operator!=(const Bits& o) const { return !(*this == o); }
  // Orders by lowest differing index: the set containing it comes first.
  bool operator<(const Bits& o) const {
    for (std::size_t i = 0; i < n_; ++i) {
      bool a = test(i), b = o.test(i);
      if (a != b) return a;
    }
    return false;
  }

  std::size_t hash() const {
    std::size_t h = n_;
    for (auto w : w_) h = h * 1000003u ^ std::hash<uint64_t>{}(w);
    return h;
  }

 private:
  std::size_t n_ = 0;
  std::vector<uint64_t> w_;
};

struct BitsHash {
  std::size_t operator()(const Bits& b) const { return b.hash(); }
};

}  // namespace corner
