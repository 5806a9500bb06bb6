#pragma once

#include <cctype>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "dcgroup/catalog.hpp"
#include "dcgroup/direct_product.hpp"
#include "dcgroup/free_group.hpp"
#include "dcgroup/heisenberg.hpp"
#include "dcgroup/infinite_dihedral.hpp"
#include "dcgroup/zpow.hpp"

namespace dcg {

namespace spec_detail {

inline std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t");
  auto e = s.find_last_not_of(" \t");
  return b == std::string::npos ? "" : s.substr(b, e - b + 1);
}

inline std::vector<std::string> split_top_level(const std::string& s, char sep) {
  std::vector<std::string> parts;
  int depth = 0;
  std::string cur;
  for (char c : s) {
    if (c == '(') ++depth;
    if (c == ')') --depth;
    if (depth < 0) throw ConfigError("unbalanced parentheses in group spec '" + s + "'");
    if (c == sep && depth == 0) {
      parts.push_back(trim(cur));
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  if (depth != 0) throw ConfigError("unbalanced parentheses in group spec '" + s + "'");
  parts.push_back(trim(cur));
  return parts;
}

inline int parse_positive(const std::string& s, const std::string& context) {
  if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos) {
    throw ConfigError("expected a positive integer in '" + context + "'");
  }
  int v = std::stoi(s);
  if (v < 1) throw ConfigError("expected a positive integer in '" + context + "'");
  return v;
}

}  // namespace spec_detail

/// Parses a group spec string:
///   Z, Z^d, zpow:d         free abelian group
///   heisenberg, heis       integer Heisenberg group
///   f<k>, free:k           free group of rank k
///   dinf                   infinite dihedral group
///   <catalog name>         e.g. q8, d4, s3, z12, heis3
///   A*B*...                direct product (parentheses group nested products)
inline Group parse_group(const std::string& text) {
  using namespace spec_detail;
  std::string s = trim(text);
  if (s.empty()) throw ConfigError("empty group spec");
  auto parts = split_top_level(s, '*');
  if (parts.size() > 1) {
    std::vector<Group> comps;
    for (const auto& p : parts) comps.push_back(parse_group(p));
    return make_direct_product(std::move(comps));
  }
  if (s.front() == '(' && s.back() == ')') return parse_group(s.substr(1, s.size() - 2));
  if (s == "Z" || s == "int") return make_zpow(1);
  if (s.rfind("Z^", 0) == 0) return make_zpow(parse_positive(s.substr(2), s));
  if (s.rfind("zpow:", 0) == 0) return make_zpow(parse_positive(s.substr(5), s));
  if (s == "heisenberg" || s == "heis") return make_heisenberg();
  if (s == "dinf" || s == "d_inf" || s == "dinfinity") return make_infinite_dihedral();
  if (s.rfind("free:", 0) == 0) return make_free_group(parse_positive(s.substr(5), s));
  if (s.size() >= 2 && s[0] == 'f' && std::isdigit(static_cast<unsigned char>(s[1]))) {
    return make_free_group(parse_positive(s.substr(1), s));
  }
  return make_finite(catalog_table(s));
}

/// Group from a JSON config document: either {"family": "<spec string>"} or
/// {"family": "zpow", "d": 2}, {"family": "free", "rank": 2},
/// {"family": "product", "factors": [...]}, or an explicit table
/// {"family": "table", "name": ..., "table": [[...]], "letters": {"a": 1}}.
inline Group parse_group_json(const nlohmann::json& doc) {
  if (doc.is_string()) return parse_group(doc.get<std::string>());
  if (!doc.is_object() || !doc.contains("family")) throw ConfigError("group config needs a 'family' field");
  std::string family = doc.at("family").get<std::string>();
  try {
    if (family == "zpow") return make_zpow(doc.value("d", 1));
    if (family == "free") return make_free_group(doc.value("rank", 2));
    if (family == "product") {
      std::vector<Group> comps;
      for (const auto& f : doc.at("factors")) comps.push_back(parse_group_json(f));
      return make_direct_product(std::move(comps));
    }
    if (family == "table") {
      const auto& rows = doc.at("table");
      std::size_t n = rows.size();
      std::vector<std::uint32_t> flat;
      for (const auto& row : rows) {
        if (row.size() != n) throw ConfigError("table must be square");
        for (const auto& v : row) flat.push_back(v.get<std::uint32_t>());
      }
      std::vector<std::pair<std::string, std::uint32_t>> letters;
      for (const auto& [nm, idx] : doc.at("letters").items()) letters.emplace_back(nm, idx.get<std::uint32_t>());
      return make_finite(FiniteTable(doc.value("name", std::string("table")), n, std::move(flat), std::move(letters)));
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("bad group config: ") + e.what());
  } catch (const StructuralError& e) {
    throw ConfigError(std::string("bad group table: ") + e.what());
  }
  return parse_group(family);
}

}  // namespace dcg
