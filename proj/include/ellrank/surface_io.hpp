#pragma once

// JSON surface spec files:
//   {"name": "E1", "base": {"kind": "p1"} | {"kind": "elliptic", "A": "-1", "B": "1"},
//    "a4": ["0","1"], "a6": ["0","0","0","-1"], "excluded_primes": [2,3]}
// Coefficient arrays hold exact integer/fraction/decimal strings, constant
// term first. Optional: "a4_y"/"a6_y" (y-coefficients on an elliptic base) and
// "sections": [{"x": [...], "y": [...], "x_y": [...], "y_y": [...]}].

#include <fstream>
#include <string>

#include "json.hpp"

#include "ellrank/surface_model.hpp"

namespace ellrank {

using json = nlohmann::json;

namespace detail {

inline Rational rational_from_json(const json& j, const std::string& where) {
  if (j.is_string()) return parse_rational(j.get<std::string>());
  if (j.is_number_integer()) return Rational(j.get<long long>());
  throw InputError(where + ": coefficients must be strings or integers");
}

inline PolyQ poly_from_json(const json& obj, const char* key) {
  if (!obj.contains(key)) return {};
  const json& arr = obj.at(key);
  if (!arr.is_array()) throw InputError(std::string("'") + key + "' must be an array of coefficients");
  std::vector<Rational> c;
  for (const auto& e : arr) c.push_back(rational_from_json(e, key));
  return PolyQ(std::move(c));
}

inline json poly_to_json(const PolyQ& p) {
  json arr = json::array();
  for (const auto& c : p.coeffs()) arr.push_back(to_string(c));
  return arr;
}

}  // namespace detail

inline SurfaceSpec surface_spec_from_json(const json& j) {
  try {
    if (!j.is_object()) throw InputError("surface spec must be a JSON object");
    SurfaceSpec spec;
    spec.name = j.value("name", std::string("unnamed"));
    if (!j.contains("base")) throw InputError("surface spec is missing 'base'");
    const json& base = j.at("base");
    const std::string kind = base.at("kind").get<std::string>();
    if (kind == "p1") {
      spec.base = BaseDescriptor::p1();
    } else if (kind == "elliptic") {
      spec.base = BaseDescriptor::elliptic(detail::rational_from_json(base.at("A"), "base.A"),
                                           detail::rational_from_json(base.at("B"), "base.B"));
    } else {
      throw InputError("unknown base kind '" + kind + "'");
    }
    spec.a4 = BaseFunction(detail::poly_from_json(j, "a4"), detail::poly_from_json(j, "a4_y"));
    spec.a6 = BaseFunction(detail::poly_from_json(j, "a6"), detail::poly_from_json(j, "a6_y"));
    if (j.contains("excluded_primes"))
      for (const auto& p : j.at("excluded_primes")) spec.excluded_primes.insert(p.get<u64>());
    if (j.contains("sections"))
      for (const auto& s : j.at("sections"))
        spec.sections.push_back({BaseFunction(detail::poly_from_json(s, "x"), detail::poly_from_json(s, "x_y")),
                                 BaseFunction(detail::poly_from_json(s, "y"), detail::poly_from_json(s, "y_y"))});
    return spec;
  } catch (const json::exception& e) {
    throw InputError(std::string("malformed surface spec: ") + e.what());
  }
}

inline json surface_spec_to_json(const SurfaceSpec& spec) {
  json j;
  j["name"] = spec.name;
  if (spec.base.kind == BaseKind::p1) {
    j["base"] = {{"kind", "p1"}};
  } else {
    j["base"] = {{"kind", "elliptic"}, {"A", to_string(spec.base.A)}, {"B", to_string(spec.base.B)}};
  }
  j["a4"] = detail::poly_to_json(spec.a4.u);
  j["a6"] = detail::poly_to_json(spec.a6.u);
  if (spec.a4.depends_on_y()) j["a4_y"] = detail::poly_to_json(spec.a4.v);
  if (spec.a6.depends_on_y()) j["a6_y"] = detail::poly_to_json(spec.a6.v);
  j["excluded_primes"] = json(std::vector<u64>(spec.excluded_primes.begin(), spec.excluded_primes.end()));
  if (!spec.sections.empty()) {
    json arr = json::array();
    for (const auto& s : spec.sections) {
      json e = {{"x", detail::poly_to_json(s.x.u)}, {"y", detail::poly_to_json(s.y.u)}};
      if (s.x.depends_on_y()) e["x_y"] = detail::poly_to_json(s.x.v);
      if (s.y.depends_on_y()) e["y_y"] = detail::poly_to_json(s.y.v);
      arr.push_back(e);
    }
    j["sections"] = arr;
  }
  return j;
}

inline SurfaceSpec load_surface_spec(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open surface spec '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw InputError("surface spec '" + path + "' is not valid JSON: " + e.what());
  }
  return surface_spec_from_json(j);
}

}  // namespace ellrank
