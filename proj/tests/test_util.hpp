#pragma once

#include <map>
#include <string>

#include "sbp/cubature.hpp"
#include "sbp/operators.hpp"

namespace sbp::testing {

inline std::string golden_dir() {
  return std::string(SBP_SOURCE_DIR) + "/data/cubature";
}

/// Shared cubature rules: golden file when available, fresh solve otherwise.
inline const CubatureRule& test_cubature(int p, int d) {
  static std::map<std::pair<int, int>, CubatureRule> cache;
  const auto key = std::make_pair(p, d);
  auto it = cache.find(key);
  if (it == cache.end()) {
    CubatureRule rule;
    try {
      rule = load_cubature(golden_dir() + "/" + cubature_filename(p, d));
    } catch (const std::exception&) {
      rule = solve_cubature(p, d);
    }
    it = cache.emplace(key, std::move(rule)).first;
  }
  return it->second;
}

/// Shared reference-element operators, built once per process.
inline const ElementOperators& test_operators(int p, int d) {
  static std::map<std::pair<int, int>, ElementOperators> cache;
  const auto key = std::make_pair(p, d);
  auto it = cache.find(key);
  if (it == cache.end())
    it = cache.emplace(key, build_element_operators(test_cubature(p, d))).first;
  return it->second;
}

}  // namespace sbp::testing
