// Copyright 2026 The Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef NSW_ITEMSET_HPP
#define NSW_ITEMSET_HPP

#include <bit>
#include <cstdint>
#include <initializer_list>
#include <vector>

#include "nsw/common.hpp"

namespace nsw {

/// Subset of a fixed ground set of items, stored as a bitset.
class ItemSet {
 public:
  ItemSet() = default;
  explicit ItemSet(int ground)
      : ground_(ground), words_(static_cast<std::size_t>((ground + 63) / 64), 0) {}

  static ItemSet of(int ground, std::initializer_list<int> items) {
    ItemSet s(ground);
    for (int j : items) s.set(j);
    return s;
  }

  static ItemSet full(int ground) {
    ItemSet s(ground);
    for (int j = 0; j < ground; ++j) s.set(j);
    return s;
  }

  int ground() const { return ground_; }

  bool test(int j) const {
    check_index(j);
    return (words_[static_cast<std::size_t>(j) >> 6] >> (j & 63)) & 1ull;
  }

  void set(int j) {
    check_index(j);
    words_[static_cast<std::size_t>(j) >> 6] |= (1ull << (j & 63));
  }

  void reset(int j) {
    check_index(j);
    words_[static_cast<std::size_t>(j) >> 6] &= ~(1ull << (j & 63));
  }

  void clear() {
    for (auto& w : words_) w = 0;
  }

  int count() const {
    int c = 0;
    for (auto w : words_) c += std::popcount(w);
    return c;
  }

  bool empty() const {
    for (auto w : words_) {
      if (w != 0) return false;
    }
    return true;
  }

  bool intersects(const ItemSet& o) const {
    for (std::size_t i = 0; i < words_.size(); ++i) {
      if (words_[i] & o.words_[i]) return true;
    }
    return false;
  }

  bool includes(const ItemSet& o) const {
    for (std::size_t i = 0; i < words_.size(); ++i) {
      if ((o.words_[i] & ~words_[i]) != 0) return false;
    }
    return true;
  }

  ItemSet union_with(const ItemSet& o) const {
    ItemSet r = *this;
    for (std::size_t i = 0; i < words_.size(); ++i) r.words_[i] |= o.words_[i];
    return r;
  }

  ItemSet intersect_with(const ItemSet& o) const {
    ItemSet r = *this;
    for (std::size_t i = 0; i < words_.size(); ++i) r.words_[i] &= o.words_[i];
    return r;
  }

  ItemSet minus(const ItemSet& o) const {
    ItemSet r = *this;
    for (std::size_t i = 0; i < words_.size(); ++i) r.words_[i] &= ~o.words_[i];
    return r;
  }

  ItemSet complement() const {
    ItemSet r(ground_);
    for (int j = 0; j < ground_; ++j) {
      if (!test(j)) r.set(j);
    }
    return r;
  }

  /// Bitmask over the low 64 items; only valid for ground() <= 64.
  std::uint64_t low_mask() const { return words_.empty() ? 0ull : words_[0]; }

  template <class F>
  void for_each(F f) const {
    for (std::size_t w = 0; w < words_.size(); ++w) {
      std::uint64_t bits = words_[w];
      while (bits) {
        int j = static_cast<int>(w * 64) + std::countr_zero(bits);
        f(j);
        bits &= bits - 1;
      }
    }
  }

  std::vector<int> indices() const {
    std::vector<int> out;
    out.reserve(static_cast<std::size_t>(count()));
    for_each([&](int j) { out.push_back(j); });
    return out;
  }

  bool operator==(const ItemSet& o) const = default;

 private:
  void check_index(int j) const {
    if (j < 0 || j >= ground_) throw InvalidInput("item index out of range");
  }

  int ground_ = 0;
  std::vector<std::uint64_t> words_;
};

}  // namespace nsw

#endif  // NSW_ITEMSET_HPP
