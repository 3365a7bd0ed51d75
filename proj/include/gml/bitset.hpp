#pragma once

#include <cstdint>
#include <vector>

namespace gml {

/// Fixed-size dynamic bitset used for world sets and successor rows.
class Bitset {
 public:
  Bitset() = default;
  explicit Bitset(int n) : n_(n), words_((n + 63) / 64, 0) {}

  static Bitset full(int n) {
    Bitset b(n);
    for (int i = 0; i < n; ++i) b.set(i);
    return b;
  }

  int size() const { return n_; }

  bool test(int i) const { return (words_[i >> 6] >> (i & 63)) & 1u; }
  void set(int i) { words_[i >> 6] |= std::uint64_t{1} << (i & 63); }
  void reset(int i) { words_[i >> 6] &= ~(std::uint64_t{1} << (i & 63)); }
  void assign(int i, bool v) { v ? set(i) : reset(i); }
  void clear() { for (auto& w : words_) w = 0; }

  int count() const {
    int c = 0;
    for (auto w : words_) c += __builtin_popcountll(w);
    return c;
  }
  bool any() const {
    for (auto w : words_)
      if (w) return true;
    return false;
  }
  bool none() const { return !any(); }

  /// Lowest set index, or -1.
  int first() const {
    for (std::size_t k = 0; k < words_.size(); ++k)
      if (words_[k]) return static_cast<int>(k * 64 + __builtin_ctzll(words_[k]));
    return -1;
  }

  /// Lowest set index > i, or -1.
  int next(int i) const {
    for (int j = i + 1; j < n_; ++j) {
      if ((j & 63) == 0) {
        while (j + 63 < n_ && words_[j >> 6] == 0) j += 64;
        if (j >= n_) break;
      }
      if (test(j)) return j;
    }
    return -1;
  }

  Bitset& operator|=(const Bitset& o) {
    for (std::size_t k = 0; k < words_.size(); ++k) words_[k] |= o.words_[k];
    return *this;
  }
  Bitset& operator&=(const Bitset& o) {
    for (std::size_t k = 0; k < words_.size(); ++k) words_[k] &= o.words_[k];
    return *this;
  }
  Bitset& subtract(const Bitset& o) {
    for (std::size_t k = 0; k < words_.size(); ++k) words_[k] &= ~o.words_[k];
    return *this;
  }

  bool intersects(const Bitset& o) const {
    for (std::size_t k = 0; k < words_.size(); ++k)
      if (words_[k] & o.words_[k]) return true;
    return false;
  }
  bool subset_of(const Bitset& o) const {
    for (std::size_t k = 0; k < words_.size(); ++k)
      if (words_[k] & ~o.words_[k]) return false;
    return true;
  }

  friend bool operator==(const Bitset& a, const Bitset& b) {
    return a.n_ == b.n_ && a.words_ == b.words_;
  }
  friend bool operator!=(const Bitset& a, const Bitset& b) { return !(a == b); }
  friend bool operator<(const Bitset& a, const Bitset& b) {
    if (a.n_ != b.n_) return a.n_ < b.n_;
    return a.words_ < b.words_;
  }

  template <typename F>
  void for_each(F f) const {
    for (int i = first(); i >= 0; i = next(i)) f(i);
  }

  std::vector<int> indices() const {
    std::vector<int> out;
    for_each([&](int i) { out.push_back(i); });
    return out;
  }

 private:
  int n_ = 0;
  std::vector<std::uint64_t> words_;
};

inline Bitset operator&(Bitset a, const Bitset& b) { a &= b; return a; }
inline Bitset operator|(Bitset a, const Bitset& b) { a |= b; return a; }

}  // namespace gml
