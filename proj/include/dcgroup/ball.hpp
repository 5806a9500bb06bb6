#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <unordered_set>
#include <vector>

#include "dcgroup/group.hpp"
#include "dcgroup/numeric.hpp"

namespace dcg {

inline constexpr std::size_t kDefaultBallCap = 5'000'000;

/// Breadth-first enumeration of S^n, kept incrementally so a whole radius
/// range costs one search. Elements are stored once, in BFS order, so the
/// ball of radius n is a prefix of `elements()`.
class BallEnumerator {
 public:
  BallEnumerator(GenSet gens, std::size_t atom_cap = kDefaultBallCap)
      : gens_(std::move(gens)), cap_(atom_cap), index_(16, IndexHash{&elements_}, IndexEq{&elements_}) {
    gens_.require_symmetric_with_identity();
    elements_.push_back(gens_.group().identity());
    index_.insert(0);
    layer_end_.push_back(1);
  }

  const Group& group() const { return gens_.group(); }
  const GenSet& gens() const { return gens_; }
  std::size_t radius() const { return layer_end_.size() - 1; }
  /// True once a layer added nothing: the group is finite and fully enumerated.
  bool saturated() const { return saturated_; }

  /// Extends the enumeration to radius n; throws ResourceError (carrying the
  /// last completed radius) if the ball would exceed the atom cap.
  void grow_to(std::size_t n) {
    const Group& g = group();
    while (radius() < n) {
      if (saturated_) {
        layer_end_.push_back(layer_end_.back());
        continue;
      }
      std::size_t begin = radius() == 0 ? 0 : layer_end_[radius() - 1];
      std::size_t end = layer_end_.back();
      std::size_t before = elements_.size();
      for (std::size_t i = begin; i < end; ++i) {
        for (const auto& s : gens_.elements()) {
          Element y = g.multiply(elements_[i], s);
          if (index_.find(y) != index_.end()) continue;
          if (elements_.size() >= cap_) {
            elements_.resize(before);
            rebuild_index();
            throw ResourceError("ball exceeds atom cap of " + std::to_string(cap_) + " at radius " +
                                    std::to_string(radius() + 1),
                                radius());
          }
          elements_.push_back(std::move(y));
          index_.insert(static_cast<std::uint32_t>(elements_.size() - 1));
        }
      }
      if (elements_.size() == before) saturated_ = true;
      layer_end_.push_back(elements_.size());
    }
  }

  std::size_t size(std::size_t n) {
    grow_to(n);
    return layer_end_[n];
  }

  std::span<const Element> ball(std::size_t n) {
    grow_to(n);
    return {elements_.data(), layer_end_[n]};
  }

  std::span<const Element> sphere(std::size_t n) {
    grow_to(n);
    std::size_t begin = n == 0 ? 0 : layer_end_[n - 1];
    return {elements_.data() + begin, layer_end_[n] - begin};
  }

  /// Word length of x if |x| <= radius().
  std::optional<std::size_t> word_length(const Element& x) const {
    auto it = index_.find(x);
    if (it == index_.end()) return std::nullopt;
    std::size_t pos = *it;
    std::size_t r = 0;
    while (layer_end_[r] <= pos) ++r;
    return r;
  }

  bool contains(const Element& x, std::size_t n) const {
    auto len = word_length(x);
    return len && *len <= n;
  }

 private:
  // Hash set of positions in elements_, searchable by Element.
  struct IndexHash {
    using is_transparent = void;
    const std::vector<Element>* elems;
    std::size_t operator()(std::uint32_t i) const { return (*elems)[i].hash(); }
    std::size_t operator()(const Element& x) const { return x.hash(); }
  };
  struct IndexEq {
    using is_transparent = void;
    const std::vector<Element>* elems;
    bool operator()(std::uint32_t a, std::uint32_t b) const { return a == b; }
    bool operator()(const Element& x, std::uint32_t b) const { return x == (*elems)[b]; }
    bool operator()(std::uint32_t a, const Element& y) const { return (*elems)[a] == y; }
  };

  void rebuild_index() {
    index_.clear();
    for (std::size_t i = 0; i < elements_.size(); ++i) index_.insert(static_cast<std::uint32_t>(i));
  }

  GenSet gens_;
  std::size_t cap_;
  std::vector<Element> elements_;
  std::vector<std::size_t> layer_end_;
  std::unordered_set<std::uint32_t, IndexHash, IndexEq> index_;
  bool saturated_ = false;

 public:
  BallEnumerator(const BallEnumerator&) = delete;
  BallEnumerator& operator=(const BallEnumerator&) = delete;
};

/// S^n as a list in BFS order.
inline std::vector<Element> ball(const GenSet& gens, std::size_t n, std::size_t atom_cap = kDefaultBallCap) {
  BallEnumerator en(gens, atom_cap);
  auto b = en.ball(n);
  return {b.begin(), b.end()};
}

/// |S^(n+1)| / |S^n|.
inline Rational growth_ratio(const GenSet& gens, std::size_t n, std::size_t atom_cap = kDefaultBallCap) {
  BallEnumerator en(gens, atom_cap);
  return make_rational(BigInt(static_cast<unsigned long>(en.size(n + 1))),
                       BigInt(static_cast<unsigned long>(en.size(n))));
}

}  // namespace dcg
