#pragma once

// Profile specification documents (JSON, schema_version 1).
//
//   {
//     "schema_version": 1,
//     "kind": "lorentzian",            // builtin name, or "table"
//     "params": {},                    // {"c": ..} const, {"p": ..} halfline_power,
//                                      // {"x": [..], "y": [..]} table
//     "p": 0,                          // growth order
//     "tail_plus": [c0, c1, ...],      // coefficients of x^p sum c_n x^-n at +inf
//     "tail_minus": [c0, c1, ...],     // same at -inf
//     "breakpoints": [..]
//   }
//
// For builtin kinds every field except "kind" is optional and defaults to the
// catalog entry; explicitly given tails override the catalog (useful for
// planting wrong coefficients). A table profile interpolates linearly between
// its nodes and equals its declared tail series outside them.

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "heatasym/initial_data.hpp"

namespace heatasym {

inline constexpr int kSchemaVersion = 1;

struct ProfileDocument {
  std::string kind;
  nlohmann::json params = nlohmann::json::object();
  int growth_order = 0;
  std::vector<double> tail_plus;
  std::vector<double> tail_minus;
  std::vector<double> breakpoints;

  bool operator==(const ProfileDocument&) const = default;
};

ProfileDocument parse_profile_document(const nlohmann::json& doc);
ProfileDocument read_profile_document(const std::filesystem::path& path);
nlohmann::json to_json(const ProfileDocument& doc);

/// Fully populated document for a catalog entry.
ProfileDocument builtin_document(const std::string& name, double param = 0.0);

/// Instantiates the profile described by `doc`. Throws ValidationError.
InitialProfile1D build_profile(const ProfileDocument& doc);

}  // namespace heatasym
