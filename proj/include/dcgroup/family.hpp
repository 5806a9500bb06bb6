#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "dcgroup/element.hpp"

namespace dcg {

/// A named generator of a family, used for parsing and printing words.
struct Letter {
  std::string name;
  Payload value;
};

/// One factor `name^exponent` of a normal-form word.
struct WordToken {
  std::string name;
  std::int64_t exponent;
};

/// Structural commuting criterion: central elements commute with everything,
/// and two non-central elements commute iff their keys are equal.
struct CommuteKey {
  bool central = false;
  Payload key;
};

enum class FamilyKind { finite_table, zpow, heisenberg, free_group, infinite_dihedral, direct_product };

/// Arithmetic on canonical payloads for one concrete group. Implementations are
/// immutable and shared between threads.
class Family {
 public:
  virtual ~Family() = default;

  virtual FamilyKind kind() const = 0;
  /// Canonical spec string; also determines the group signature.
  virtual std::string name() const = 0;

  virtual void identity(Payload& out) const = 0;
  virtual void multiply(PayloadView x, PayloadView y, Payload& out) const = 0;
  virtual void inverse(PayloadView x, Payload& out) const = 0;
  virtual bool is_canonical(PayloadView x) const = 0;

  virtual bool is_abelian() const = 0;
  /// Group order, or nullopt when infinite.
  virtual std::optional<std::uint64_t> order() const = 0;

  virtual std::vector<Letter> letters() const = 0;
  /// Letters that make up the default generating set (defaults to all letters).
  virtual std::vector<Letter> generators() const { return letters(); }
  /// Normal-form word of x in the family's letters; empty for the identity.
  virtual std::vector<WordToken> word(PayloadView x) const = 0;

  virtual bool has_commute_keys() const { return false; }
  virtual CommuteKey commute_key(PayloadView) const { return {}; }

  /// Canonical representative of the conjugacy class of x.
  virtual void conj_canonical(PayloadView x, Payload& out) const = 0;
  /// All members of the conjugacy class of x, or nullopt when the class is
  /// infinite or larger than `cap`.
  virtual std::optional<std::vector<Payload>> finite_class(PayloadView x, std::size_t cap) const = 0;
};

}  // namespace dcg
