#pragma once

#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "dcgroup/element.hpp"
#include "dcgroup/error.hpp"
#include "dcgroup/family.hpp"

namespace dcg {

inline std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

class GenSet;

/// Handle to an immutable group family. Cheap to copy.
class Group {
 public:
  explicit Group(std::shared_ptr<const Family> family)
      : family_(std::move(family)), signature_(fnv1a(family_->name())) {}

  const Family& family() const { return *family_; }
  FamilyKind kind() const { return family_->kind(); }
  std::string name() const { return family_->name(); }
  std::uint64_t signature() const { return signature_; }
  bool is_abelian() const { return family_->is_abelian(); }
  std::optional<std::uint64_t> order() const { return family_->order(); }

  Element identity() const {
    Payload p;
    family_->identity(p);
    return Element(signature_, std::move(p));
  }

  /// Wraps a payload, rejecting anything that is not a canonical form.
  Element make(Payload p) const {
    if (!family_->is_canonical({p.data(), p.size()})) {
      throw StructuralError("payload is not a canonical form of " + name());
    }
    return Element(signature_, std::move(p));
  }

  void check(const Element& x) const {
    if (x.group_signature() != signature_) {
      throw StructuralError("element does not belong to group " + name());
    }
  }

  Element multiply(const Element& x, const Element& y) const {
    check(x);
    check(y);
    Payload out;
    family_->multiply(x.payload(), y.payload(), out);
    return Element(signature_, std::move(out));
  }

  Element inverse(const Element& x) const {
    check(x);
    Payload out;
    family_->inverse(x.payload(), out);
    return Element(signature_, std::move(out));
  }

  bool commute(const Element& x, const Element& y) const { return multiply(x, y) == multiply(y, x); }

  /// g^-1 x g.
  Element conjugate(const Element& g, const Element& x) const {
    return multiply(inverse(g), multiply(x, g));
  }

  /// x^-1 y^-1 x y.
  Element commutator(const Element& x, const Element& y) const {
    return multiply(multiply(inverse(x), inverse(y)), multiply(x, y));
  }

  Element power(const Element& x, std::int64_t k) const {
    Element base = k < 0 ? inverse(x) : x;
    std::uint64_t e = k < 0 ? static_cast<std::uint64_t>(-(k + 1)) + 1 : static_cast<std::uint64_t>(k);
    Element acc = identity();
    while (e) {
      if (e & 1) acc = multiply(acc, base);
      e >>= 1;
      if (e) base = multiply(base, base);
    }
    return acc;
  }

  std::vector<Letter> letters() const { return family_->letters(); }

  Element letter(std::string_view name) const {
    for (auto& l : family_->letters()) {
      if (l.name == name) return Element(signature_, l.value);
    }
    throw ConfigError("group " + this->name() + " has no letter '" + std::string(name) + "'");
  }

  /// Parses a word such as "t^-1 s" or "x*y^2"; "e" (or an empty word) is the identity.
  Element parse_word(std::string_view text) const {
    std::string s(text);
    for (char& c : s) {
      if (c == '*' || c == '\t') c = ' ';
    }
    std::istringstream in(s);
    std::string tok;
    Element acc = identity();
    while (in >> tok) {
      if (tok == "e" || tok == "1") continue;
      std::int64_t exponent = 1;
      std::string name = tok;
      if (auto caret = tok.find('^'); caret != std::string::npos) {
        name = tok.substr(0, caret);
        try {
          std::size_t used = 0;
          exponent = std::stoll(tok.substr(caret + 1), &used);
          if (used != tok.size() - caret - 1) throw std::invalid_argument(tok);
        } catch (const std::exception&) {
          throw ConfigError("bad exponent in word token '" + tok + "'");
        }
      }
      acc = multiply(acc, power(letter(name), exponent));
    }
    return acc;
  }

  /// Normal-form word; parse_word(format(x)) == x.
  std::string format(const Element& x) const {
    check(x);
    auto tokens = family_->word(x.payload());
    if (tokens.empty()) return "e";
    std::string out;
    for (const auto& t : tokens) {
      if (!out.empty()) out += ' ';
      out += t.name;
      if (t.exponent != 1) out += "^" + std::to_string(t.exponent);
    }
    return out;
  }

  GenSet default_genset() const;

  friend bool operator==(const Group& a, const Group& b) { return a.signature_ == b.signature_; }

 private:
  std::shared_ptr<const Family> family_;
  std::uint64_t signature_;
};

inline void require_same_group(const Group& g, const Group& h) {
  if (!(g == h)) throw StructuralError("group mismatch: " + g.name() + " vs " + h.name());
}

/// Finite generating list S. Duplicates are removed (first occurrence kept);
/// the symmetric/identity flags are computed, not trusted.
class GenSet {
 public:
  GenSet(const Group& group, std::vector<Element> elements) : group_(group) {
    std::unordered_set<Element, ElementHash> seen;
    for (auto& x : elements) {
      group.check(x);
      if (seen.insert(x).second) elements_.push_back(std::move(x));
    }
    contains_identity_ = seen.count(group.identity()) > 0;
    symmetric_ = true;
    for (const auto& x : elements_) {
      if (!seen.count(group.inverse(x))) {
        symmetric_ = false;
        break;
      }
    }
  }

  static GenSet from_words(const Group& group, const std::vector<std::string>& words) {
    std::vector<Element> xs;
    xs.reserve(words.size());
    for (const auto& w : words) xs.push_back(group.parse_word(w));
    return GenSet(group, std::move(xs));
  }

  const Group& group() const { return group_; }
  const std::vector<Element>& elements() const { return elements_; }
  std::size_t size() const { return elements_.size(); }
  bool symmetric() const { return symmetric_; }
  bool contains_identity() const { return contains_identity_; }

  /// Ball and dc computations assume S is symmetric and contains e; anything else is rejected.
  void require_symmetric_with_identity() const {
    if (!symmetric_ || !contains_identity_) {
      throw PreconditionError("generating set must be symmetric and contain the identity");
    }
  }

  std::vector<std::string> words() const {
    std::vector<std::string> out;
    for (const auto& x : elements_) out.push_back(group_.format(x));
    return out;
  }

 private:
  Group group_;
  std::vector<Element> elements_;
  bool symmetric_ = false;
  bool contains_identity_ = false;
};

/// {e} plus every generator letter and its inverse.
inline GenSet Group::default_genset() const {
  std::vector<Element> xs{identity()};
  for (const auto& l : family_->generators()) {
    Element x(signature_, l.value);
    xs.push_back(x);
    xs.push_back(inverse(x));
  }
  return GenSet(*this, std::move(xs));
}

}  // namespace dcg
