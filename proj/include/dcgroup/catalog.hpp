#pragma once

#include <array>
#include <string>
#include <utility>
#include <vector>

#include "dcgroup/finite_table.hpp"

namespace dcg {

namespace catalog_detail {

using Perm = std::vector<int>;

inline Perm compose(const Perm& p, const Perm& q) {  // x -> p(q(x))
  Perm r(p.size());
  for (std::size_t x = 0; x < p.size(); ++x) r[x] = p[q[x]];
  return r;
}

inline Perm identity_perm(int n) {
  Perm p(n);
  for (int i = 0; i < n; ++i) p[i] = i;
  return p;
}

inline Perm cycle(int n, std::vector<int> pts) {
  Perm p = identity_perm(n);
  for (std::size_t i = 0; i < pts.size(); ++i) p[pts[i]] = pts[(i + 1) % pts.size()];
  return p;
}

inline FiniteTable permutation_group(std::string name, int n, std::vector<std::pair<std::string, Perm>> gens) {
  return FiniteTable::from_generators(std::move(name), gens, identity_perm(n), compose);
}

inline FiniteTable direct_product(std::string name, const FiniteTable& a, const FiniteTable& b) {
  using P = std::pair<std::uint32_t, std::uint32_t>;
  std::vector<std::pair<std::string, P>> gens;
  for (const auto& [nm, idx] : a.letters()) gens.push_back({nm, {idx, b.identity()}});
  for (const auto& [nm, idx] : b.letters()) gens.push_back({nm, {a.identity(), idx}});
  auto mul = [&](const P& x, const P& y) { return P{a.mul(x.first, y.first), b.mul(x.second, y.second)}; };
  return FiniteTable::from_generators(std::move(name), gens, P{a.identity(), b.identity()}, mul);
}

}  // namespace catalog_detail

/// Z_m with generator a.
inline FiniteTable cyclic_table(int m) {
  auto mul = [m](int x, int y) { return (x + y) % m; };
  return FiniteTable::from_generators("z" + std::to_string(m), std::vector<std::pair<std::string, int>>{{"a", 1 % m}},
                                      0, mul);
}

/// Dihedral group of order 2m with rotation r and reflection s.
inline FiniteTable dihedral_table(int m) {
  using P = std::pair<int, int>;
  auto mul = [m](const P& x, const P& y) {
    int k = x.second ? x.first - y.first : x.first + y.first;
    return P{((k % m) + m) % m, x.second ^ y.second};
  };
  return FiniteTable::from_generators("d" + std::to_string(m),
                                      std::vector<std::pair<std::string, P>>{{"r", {1 % m, 0}}, {"s", {0, 1}}},
                                      P{0, 0}, mul);
}

/// Quaternion group; letters i and j.
inline FiniteTable quaternion_table() {
  // (sign, unit) with unit 0..3 = 1, i, j, k.
  using P = std::pair<int, int>;
  static constexpr int unit_sign[4][4] = {{1, 1, 1, 1}, {1, -1, 1, -1}, {1, -1, -1, 1}, {1, 1, -1, -1}};
  static constexpr int unit_prod[4][4] = {{0, 1, 2, 3}, {1, 0, 3, 2}, {2, 3, 0, 1}, {3, 2, 1, 0}};
  auto mul = [](const P& x, const P& y) {
    return P{x.first * y.first * unit_sign[x.second][y.second], unit_prod[x.second][y.second]};
  };
  return FiniteTable::from_generators("q8", std::vector<std::pair<std::string, P>>{{"i", {1, 1}}, {"j", {1, 2}}},
                                      P{1, 0}, mul);
}

/// S_n with Coxeter letters s1 = (0 1), s2 = (1 2), ...
inline FiniteTable symmetric_table(int n) {
  std::vector<std::pair<std::string, catalog_detail::Perm>> gens;
  for (int i = 0; i + 1 < n; ++i) gens.push_back({"s" + std::to_string(i + 1), catalog_detail::cycle(n, {i, i + 1})});
  return catalog_detail::permutation_group("s" + std::to_string(n), n, gens);
}

inline FiniteTable alternating4_table() {
  using catalog_detail::cycle;
  return catalog_detail::permutation_group("a4", 4, {{"a", cycle(4, {0, 1, 2})}, {"b", cycle(4, {1, 2, 3})}});
}

/// Heisenberg group mod p, same law as the integer Heisenberg group.
inline FiniteTable heisenberg_mod_table(int p) {
  using T = std::array<int, 3>;
  auto mul = [p](const T& x, const T& y) {
    return T{(x[0] + y[0]) % p, (x[1] + y[1]) % p, (x[2] + y[2] + x[0] * y[1]) % p};
  };
  return FiniteTable::from_generators("heis" + std::to_string(p),
                                      std::vector<std::pair<std::string, T>>{{"x", {1, 0, 0}}, {"y", {0, 1, 0}}},
                                      T{0, 0, 0}, mul);
}

/// (Z_2)^3 with letters a, b, c.
inline FiniteTable elementary_abelian8_table() {
  auto mul = [](int x, int y) { return x ^ y; };
  return FiniteTable::from_generators("z2^3", std::vector<std::pair<std::string, int>>{{"a", 1}, {"b", 2}, {"c", 4}},
                                      0, mul);
}

inline FiniteTable product_table(const std::string& name, const FiniteTable& a, const FiniteTable& b) {
  return catalog_detail::direct_product(name, a, b);
}

/// The fixed corpus of finite groups used to machine-check the finite theorems.
inline std::vector<std::pair<std::string, FiniteTable>> build_catalog() {
  std::vector<std::pair<std::string, FiniteTable>> out;
  auto add = [&](FiniteTable t) {
    std::string nm = t.name();
    out.emplace_back(std::move(nm), std::move(t));
  };
  for (int m = 1; m <= 24; ++m) add(cyclic_table(m));
  for (int m = 1; m <= 12; ++m) add(dihedral_table(m));
  add(quaternion_table());
  add(symmetric_table(3));
  add(symmetric_table(4));
  add(alternating4_table());
  add(heisenberg_mod_table(2));
  add(heisenberg_mod_table(3));
  add(elementary_abelian8_table());
  // Z_2 letter renamed so it does not clash with the other factor's letters.
  FiniteTable z2 = FiniteTable::from_generators("z2", std::vector<std::pair<std::string, int>>{{"c", 1}}, 0,
                                                [](int x, int y) { return x ^ y; });
  add(product_table("d4xz2", dihedral_table(4), z2));
  add(product_table("q8xz2", quaternion_table(), z2));
  return out;
}

/// Catalog entry by name; throws ConfigError if unknown.
inline FiniteTable catalog_table(const std::string& name) {
  for (auto& [nm, t] : build_catalog()) {
    if (nm == name) return t;
  }
  throw ConfigError("unknown catalog group '" + name + "'");
}

}  // namespace dcg
