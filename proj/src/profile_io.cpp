#include "heatasym/profile_io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "heatasym/error.hpp"

namespace heatasym {

namespace {

using nlohmann::json;

std::vector<double> number_array(const json& doc, const char* key) {
  const json& v = doc.at(key);
  if (!v.is_array()) throw ParseError(std::string("profile field '") + key + "' must be an array");
  std::vector<double> out;
  for (const auto& e : v) {
    if (!e.is_number()) throw ParseError(std::string("profile field '") + key + "' must hold numbers");
    out.push_back(e.get<double>());
  }
  return out;
}

double builtin_param(const ProfileDocument& doc) {
  if (doc.kind == "const") return doc.params.value("c", 1.0);
  if (doc.kind == "halfline_power") return doc.params.value("p", 1.0);
  return 0.0;
}

InitialProfile1D build_table(const ProfileDocument& doc) {
  if (!doc.params.contains("x") || !doc.params.contains("y")) {
    throw ValidationError("table profile needs params.x and params.y");
  }
  const auto xs = number_array(doc.params, "x");
  const auto ys = number_array(doc.params, "y");
  if (xs.size() != ys.size() || xs.size() < 2) {
    throw ValidationError("table profile: x and y must have equal length >= 2");
  }
  for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
    if (!(xs[i + 1] > xs[i])) throw ValidationError("table profile: x must be strictly increasing");
  }
  if (xs.front() > -1.0 || xs.back() < 1.0) {
    throw ValidationError("table profile: nodes must cover [-1, 1]");
  }
  if (doc.tail_plus.empty() || doc.tail_minus.empty()) {
    throw ValidationError("table profile needs tail_plus and tail_minus");
  }

  InitialProfile1D p;
  p.name = "table";
  p.tail_plus = {Side::Plus, doc.growth_order, doc.tail_plus};
  p.tail_minus = {Side::Minus, doc.growth_order, doc.tail_minus};
  p.evaluate = [xs, ys, plus = p.tail_plus, minus = p.tail_minus](double x) {
    if (x > xs.back()) return plus.partial_sum(x, plus.n_max());
    if (x < xs.front()) return minus.partial_sum(x, minus.n_max());
    const auto hi = std::upper_bound(xs.begin(), xs.end(), x);
    const std::size_t j = std::min<std::size_t>(static_cast<std::size_t>(hi - xs.begin()), xs.size() - 1);
    const std::size_t i = j - 1;
    const double w = (x - xs[i]) / (xs[j] - xs[i]);
    return (1.0 - w) * ys[i] + w * ys[j];
  };
  p.breakpoints = xs;
  for (double b : doc.breakpoints) p.breakpoints.push_back(b);
  std::sort(p.breakpoints.begin(), p.breakpoints.end());
  p.breakpoints.erase(std::unique(p.breakpoints.begin(), p.breakpoints.end()), p.breakpoints.end());
  return p;
}

}  // namespace

ProfileDocument parse_profile_document(const json& doc) {
  if (!doc.is_object()) throw ParseError("profile document must be a JSON object");
  try {
    const int version = doc.value("schema_version", kSchemaVersion);
    if (version != kSchemaVersion) {
      throw ParseError("unsupported profile schema_version " + std::to_string(version));
    }
    if (!doc.contains("kind") || !doc.at("kind").is_string()) {
      throw ParseError("profile document needs a string 'kind'");
    }
    ProfileDocument out;
    out.kind = doc.at("kind").get<std::string>();
    if (doc.contains("params")) {
      if (!doc.at("params").is_object()) throw ParseError("profile 'params' must be an object");
      out.params = doc.at("params");
    }

    const bool builtin = out.kind != "table";
    ProfileDocument defaults;
    if (builtin) defaults = builtin_document(out.kind, builtin_param(out));

    if (doc.contains("p")) {
      if (!doc.at("p").is_number_integer()) throw ParseError("profile 'p' must be an integer");
      out.growth_order = doc.at("p").get<int>();
    } else {
      out.growth_order = defaults.growth_order;
    }
    out.tail_plus = doc.contains("tail_plus") ? number_array(doc, "tail_plus") : defaults.tail_plus;
    out.tail_minus = doc.contains("tail_minus") ? number_array(doc, "tail_minus") : defaults.tail_minus;
    out.breakpoints = doc.contains("breakpoints") ? number_array(doc, "breakpoints") : defaults.breakpoints;
    if (builtin && out.params.empty()) out.params = defaults.params;
    return out;
  } catch (const json::exception& e) {
    throw ParseError(std::string("profile document: ") + e.what());
  }
}

ProfileDocument read_profile_document(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open profile document " + path.string());
  json doc;
  try {
    in >> doc;
  } catch (const json::exception& e) {
    throw ParseError("profile document " + path.string() + ": " + e.what());
  }
  return parse_profile_document(doc);
}

json to_json(const ProfileDocument& doc) {
  json out;
  out["schema_version"] = kSchemaVersion;
  out["kind"] = doc.kind;
  out["params"] = doc.params;
  out["p"] = doc.growth_order;
  out["tail_plus"] = doc.tail_plus;
  out["tail_minus"] = doc.tail_minus;
  out["breakpoints"] = doc.breakpoints;
  return out;
}

ProfileDocument builtin_document(const std::string& name, double param) {
  const InitialProfile1D p = make_builtin(name, param);
  ProfileDocument doc;
  doc.kind = name;
  if (name == "const") doc.params = json{{"c", param}};
  if (name == "halfline_power") doc.params = json{{"p", static_cast<int>(param)}};
  doc.growth_order = p.growth_order();
  doc.tail_plus = p.tail_plus.coefficients;
  doc.tail_minus = p.tail_minus.coefficients;
  doc.breakpoints = p.breakpoints;
  return doc;
}

InitialProfile1D build_profile(const ProfileDocument& doc) {
  if (doc.kind == "table") {
    InitialProfile1D p = build_table(doc);
    check_profile(p);
    return p;
  }
  InitialProfile1D p = make_builtin(doc.kind, builtin_param(doc));
  if (doc.growth_order != p.growth_order()) {
    throw ValidationError("profile '" + doc.kind + "' has growth order " + std::to_string(p.growth_order()) +
                          ", document says " + std::to_string(doc.growth_order));
  }
  if (!doc.tail_plus.empty()) p.tail_plus.coefficients = doc.tail_plus;
  if (!doc.tail_minus.empty()) p.tail_minus.coefficients = doc.tail_minus;
  p.breakpoints = doc.breakpoints;
  std::sort(p.breakpoints.begin(), p.breakpoints.end());
  check_profile(p);
  return p;
}

}  // namespace heatasym
