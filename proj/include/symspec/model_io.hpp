#pragma once

// JSON model files:
//
//   {
//     "name": "kt4",
//     "generators": ["e1","e2","e3","e4"],
//     "d": { "e4": [ ["1", ["e1","e2"]] ] },
//     "omega": [ ["1", ["e1","e4"]], ["1", ["e2","e3"]] ]
//   }
//
// A 2-form is a list of [coefficient, [gen, gen]] terms. Coefficients are
// decimal integers or "p/q" strings. Generators missing from "d" map to 0.

#include <map>
#include <set>
#include <string>
#include <string_view>

#include "json.hpp"
#include "symspec/errors.hpp"
#include "symspec/model.hpp"

namespace symspec {

namespace detail {

inline ModelError schema_error(const std::string& what) { return ModelError(ModelError::Kind::schema, what); }

inline Rational parse_coefficient(const nlohmann::json& c) {
  try {
    if (c.is_string()) return parse_rational(c.get<std::string>());
    if (c.is_number_integer()) return Rational(c.dump());
  } catch (const Error& e) {
    throw schema_error(std::string("bad coefficient: ") + e.what());
  }
  throw schema_error("coefficient must be an integer or a \"p/q\" string, got " + c.dump());
}

inline Form parse_two_form(const nlohmann::json& terms, const std::map<std::string, int>& gens, int m,
                           const std::string& where) {
  if (!terms.is_array()) throw schema_error(where + " must be a list of [coefficient, [gen, gen]] terms");
  Form out(m, 2);
  for (const auto& term : terms) {
    if (!term.is_array() || term.size() != 2 || !term[1].is_array() || term[1].size() != 2) {
      throw schema_error(where + ": malformed term " + term.dump());
    }
    Rational c = parse_coefficient(term[0]);
    int idx[2];
    for (int s = 0; s < 2; ++s) {
      const auto& g = term[1][s];
      if (!g.is_string()) throw schema_error(where + ": generator names must be strings");
      auto it = gens.find(g.get<std::string>());
      if (it == gens.end()) {
        throw ModelError(ModelError::Kind::unknown_generator,
                         where + ": unknown generator '" + g.get<std::string>() + "'");
      }
      idx[s] = it->second;
    }
    if (idx[0] == idx[1]) throw schema_error(where + ": generator pair must name two distinct generators");
    if (idx[0] > idx[1]) {
      std::swap(idx[0], idx[1]);
      c = -c;
    }
    out.add_term(MultiIndex::of({idx[0], idx[1]}), c);
  }
  return out;
}

inline nlohmann::json two_form_json(const Form& w, const std::vector<std::string>& names) {
  auto out = nlohmann::json::array();
  for (const auto& [idx, c] : w.terms()) {
    auto ij = idx.indices();
    out.push_back({c.get_str(), {names[ij[0] - 1], names[ij[1] - 1]}});
  }
  return out;
}

}  // namespace detail

/// Parses and validates a model document. Each failure mode raises a
/// ModelError with its own kind; syntax errors report the byte offset.
inline Model parse_model(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ModelError(ModelError::Kind::syntax, "JSON syntax error at byte " + std::to_string(e.byte) + ": " + e.what());
  }
  if (!doc.is_object()) throw detail::schema_error("model document must be a JSON object");
  static const std::set<std::string> allowed{"name", "generators", "d", "omega"};
  for (const auto& [key, value] : doc.items()) {
    if (!allowed.count(key)) throw detail::schema_error("unknown key '" + key + "'");
  }
  for (const char* key : {"name", "generators", "omega"}) {
    if (!doc.contains(key)) throw detail::schema_error(std::string("missing key '") + key + "'");
  }
  if (!doc["name"].is_string()) throw detail::schema_error("'name' must be a string");
  const auto& gen_list = doc["generators"];
  if (!gen_list.is_array()) throw detail::schema_error("'generators' must be a list of names");

  std::map<std::string, int> gens;
  for (const auto& g : gen_list) {
    if (!g.is_string() || g.get<std::string>().empty()) throw detail::schema_error("generator names must be non-empty strings");
    if (!gens.emplace(g.get<std::string>(), static_cast<int>(gens.size()) + 1).second) {
      throw detail::schema_error("duplicate generator '" + g.get<std::string>() + "'");
    }
  }
  const int m = static_cast<int>(gens.size());
  if (m % 2 != 0 || m < 2) {
    throw ModelError(ModelError::Kind::odd_dimension,
                     "model needs an even number (>= 2) of generators, got " + std::to_string(m));
  }
  if (m > kMaxGenerators) throw detail::schema_error("at most 16 generators are supported");

  std::vector<Form> d(m, Form(m, 2));
  if (doc.contains("d")) {
    if (!doc["d"].is_object()) throw detail::schema_error("'d' must map generator names to 2-forms");
    for (const auto& [g, terms] : doc["d"].items()) {
      auto it = gens.find(g);
      if (it == gens.end()) throw ModelError(ModelError::Kind::unknown_generator, "d: unknown generator '" + g + "'");
      d[it->second - 1] = detail::parse_two_form(terms, gens, m, "d(" + g + ")");
    }
  }
  Form omega = detail::parse_two_form(doc["omega"], gens, m, "omega");
  return validated(Model(doc["name"].get<std::string>(), m, std::move(d), std::move(omega)));
}

/// Serializes with generator names e1..em; parse_model(model_to_json(M)) == M.
inline std::string model_to_json(const Model& model) {
  std::vector<std::string> names;
  for (int i = 1; i <= model.generators(); ++i) names.push_back("e" + std::to_string(i));
  nlohmann::json doc;
  doc["name"] = model.name();
  doc["generators"] = names;
  doc["d"] = nlohmann::json::object();
  for (int i = 1; i <= model.generators(); ++i) {
    if (!model.d_generator(i).is_zero()) doc["d"][names[i - 1]] = detail::two_form_json(model.d_generator(i), names);
  }
  doc["omega"] = detail::two_form_json(model.omega(), names);
  return doc.dump(2);
}

}  // namespace symspec
