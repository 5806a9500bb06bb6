#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "dcgroup/group.hpp"

namespace dcg {

/// G_1 x ... x G_k. Payload: for each component, its payload length followed
/// by the payload. Letters keep their component names unless two components
/// share a name, in which case every letter is qualified as "c<i>.<name>".
class DirectProductFamily final : public Family {
 public:
  explicit DirectProductFamily(std::vector<Group> components) : components_(std::move(components)) {
    if (components_.size() < 2) throw ConfigError("direct product needs at least two factors");
    std::map<std::string, int> count;
    for (const auto& g : components_)
      for (const auto& l : g.letters()) ++count[l.name];
    for (const auto& [nm, c] : count) qualify_ = qualify_ || c > 1;
  }

  FamilyKind kind() const override { return FamilyKind::direct_product; }
  std::string name() const override {
    std::string out;
    for (const auto& g : components_) {
      if (!out.empty()) out += "*";
      out += g.kind() == FamilyKind::direct_product ? "(" + g.name() + ")" : g.name();
    }
    return out;
  }

  const std::vector<Group>& components() const { return components_; }

  /// Splits a product payload into component views; empty result if malformed.
  std::vector<PayloadView> split(PayloadView x) const {
    std::vector<PayloadView> parts;
    std::size_t pos = 0;
    for (std::size_t i = 0; i < components_.size(); ++i) {
      if (pos >= x.size() || x[pos] < 0) return {};
      std::size_t len = static_cast<std::size_t>(x[pos]);
      if (pos + 1 + len > x.size()) return {};
      parts.push_back(x.subspan(pos + 1, len));
      pos += 1 + len;
    }
    if (pos != x.size()) return {};
    return parts;
  }

  static void append(Payload& out, const Payload& part) {
    out.push_back(static_cast<std::int64_t>(part.size()));
    out.insert(out.end(), part.begin(), part.end());
  }

  /// Payload of the tuple (x_1, ..., x_k).
  Payload join(const std::vector<Payload>& parts) const {
    Payload out;
    for (const auto& p : parts) append(out, p);
    return out;
  }

  void identity(Payload& out) const override {
    out.clear();
    Payload p;
    for (const auto& g : components_) {
      g.family().identity(p);
      append(out, p);
    }
  }

  void multiply(PayloadView x, PayloadView y, Payload& out) const override {
    auto xs = split(x), ys = split(y);
    out.clear();
    Payload p;
    for (std::size_t i = 0; i < components_.size(); ++i) {
      components_[i].family().multiply(xs[i], ys[i], p);
      append(out, p);
    }
  }

  void inverse(PayloadView x, Payload& out) const override {
    auto xs = split(x);
    out.clear();
    Payload p;
    for (std::size_t i = 0; i < components_.size(); ++i) {
      components_[i].family().inverse(xs[i], p);
      append(out, p);
    }
  }

  bool is_canonical(PayloadView x) const override {
    auto xs = split(x);
    if (xs.size() != components_.size()) return false;
    for (std::size_t i = 0; i < xs.size(); ++i)
      if (!components_[i].family().is_canonical(xs[i])) return false;
    return true;
  }

  bool is_abelian() const override {
    for (const auto& g : components_)
      if (!g.is_abelian()) return false;
    return true;
  }

  std::optional<std::uint64_t> order() const override {
    std::uint64_t n = 1;
    for (const auto& g : components_) {
      auto o = g.order();
      if (!o) return std::nullopt;
      n *= *o;
    }
    return n;
  }

  std::vector<Letter> letters() const override { return embed_letters(false); }
  std::vector<Letter> generators() const override { return embed_letters(true); }

  std::vector<WordToken> word(PayloadView x) const override {
    auto xs = split(x);
    std::vector<WordToken> out;
    for (std::size_t i = 0; i < components_.size(); ++i) {
      for (auto t : components_[i].family().word(xs[i])) {
        t.name = qualified(i, t.name);
        out.push_back(std::move(t));
      }
    }
    return out;
  }

  // Componentwise commuting has the key structure only when at most one
  // factor is nonabelian; that factor's key is used.
  bool has_commute_keys() const override {
    int nonabelian = 0;
    for (const auto& g : components_) {
      if (g.is_abelian()) continue;
      if (!g.family().has_commute_keys()) return false;
      ++nonabelian;
    }
    return nonabelian <= 1;
  }

  CommuteKey commute_key(PayloadView x) const override {
    auto xs = split(x);
    for (std::size_t i = 0; i < components_.size(); ++i) {
      if (!components_[i].is_abelian()) return components_[i].family().commute_key(xs[i]);
    }
    return {true, {}};
  }

  void conj_canonical(PayloadView x, Payload& out) const override {
    auto xs = split(x);
    out.clear();
    Payload p;
    for (std::size_t i = 0; i < components_.size(); ++i) {
      components_[i].family().conj_canonical(xs[i], p);
      append(out, p);
    }
  }

  std::optional<std::vector<Payload>> finite_class(PayloadView x, std::size_t cap) const override {
    auto xs = split(x);
    std::vector<Payload> acc{Payload{}};
    for (std::size_t i = 0; i < components_.size(); ++i) {
      auto cls = components_[i].family().finite_class(xs[i], cap);
      if (!cls) return std::nullopt;
      std::vector<Payload> next;
      for (const auto& prefix : acc) {
        for (const auto& member : *cls) {
          Payload p = prefix;
          append(p, member);
          next.push_back(std::move(p));
          if (next.size() > cap) return std::nullopt;
        }
      }
      acc = std::move(next);
    }
    return acc;
  }

 private:
  std::string qualified(std::size_t i, const std::string& nm) const {
    return qualify_ ? "c" + std::to_string(i + 1) + "." + nm : nm;
  }

  std::vector<Letter> embed_letters(bool generators_only) const {
    std::vector<Letter> out;
    for (std::size_t i = 0; i < components_.size(); ++i) {
      const Family& f = components_[i].family();
      for (const auto& l : generators_only ? f.generators() : f.letters()) {
        std::vector<Payload> parts;
        for (std::size_t j = 0; j < components_.size(); ++j) {
          Payload p;
          if (j == i) {
            p = l.value;
          } else {
            components_[j].family().identity(p);
          }
          parts.push_back(std::move(p));
        }
        out.push_back({qualified(i, l.name), join(parts)});
      }
    }
    return out;
  }

  std::vector<Group> components_;
  bool qualify_ = false;
};

inline Group make_direct_product(std::vector<Group> components) {
  return Group(std::make_shared<DirectProductFamily>(std::move(components)));
}

inline const DirectProductFamily& product_of(const Group& g) {
  if (g.kind() != FamilyKind::direct_product) throw PreconditionError(g.name() + " is not a direct product");
  return static_cast<const DirectProductFamily&>(g.family());
}

}  // namespace dcg
