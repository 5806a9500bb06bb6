#pragma once

#include <algorithm>
#include <compare>
#include <cstdint>
#include <functional>
#include <span>

#include <boost/container/small_vector.hpp>

namespace dcg {

/// Flat integer encoding of a canonical form. Each family documents its layout.
using Payload = boost::container::small_vector<std::int64_t, 5>;
using PayloadView = std::span<const std::int64_t>;

inline std::uint64_t mix64(std::uint64_t h) {
  h ^= h >> 33;
  h *= 0xff51afd7ed558ccdULL;
  h ^= h >> 33;
  h *= 0xc4ceb9fe1a85ec53ULL;
  h ^= h >> 33;
  return h;
}

inline std::uint64_t hash_words(std::uint64_t seed, PayloadView words) {
  std::uint64_t h = mix64(seed ^ (words.size() * 0x9e3779b97f4a7c15ULL));
  for (std::int64_t w : words) h = mix64(h ^ static_cast<std::uint64_t>(w)) + 0x9e3779b97f4a7c15ULL;
  return h;
}

/// A group element in canonical form, tagged with the signature of its group.
/// Equal elements have identical payloads, so equality and hashing are syntactic.
class Element {
 public:
  Element() = default;
  Element(std::uint64_t group_signature, Payload payload)
      : signature_(group_signature), payload_(std::move(payload)) {}

  std::uint64_t group_signature() const { return signature_; }
  PayloadView payload() const { return {payload_.data(), payload_.size()}; }
  std::int64_t operator[](std::size_t i) const { return payload_[i]; }
  std::size_t hash() const { return static_cast<std::size_t>(hash_words(signature_, payload())); }

  friend bool operator==(const Element& a, const Element& b) {
    return a.signature_ == b.signature_ &&
           std::equal(a.payload_.begin(), a.payload_.end(), b.payload_.begin(), b.payload_.end());
  }
  friend std::strong_ordering operator<=>(const Element& a, const Element& b) {
    if (auto c = a.signature_ <=> b.signature_; c != 0) return c;
    // Shorter payloads first, then lexicographic: a shortlex order for words.
    if (auto c = a.payload_.size() <=> b.payload_.size(); c != 0) return c;
    return std::lexicographical_compare_three_way(a.payload_.begin(), a.payload_.end(),
                                                  b.payload_.begin(), b.payload_.end());
  }

 private:
  std::uint64_t signature_ = 0;
  Payload payload_;
};

struct ElementHash {
  std::size_t operator()(const Element& e) const { return e.hash(); }
};

}  // namespace dcg
