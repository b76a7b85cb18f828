#pragma once

// JSON shapes shared by the CLI and the golden-file tests. nlohmann::json
// keeps object keys sorted, so dumps are byte-stable.

#include <optional>
#include <string>

#include <json.hpp>

#include "abduct/abduction.hpp"
#include "abduct/model.hpp"

namespace abduct {

using Json = nlohmann::json;

inline Json to_json(const Assertion& as) {
  if (as.is_role) return Json::array({"rel", as.pred, as.a, as.b});
  return Json::array({"inst", as.pred, as.a});
}

inline Json to_json(const AssertionSet& set) {
  Json arr = Json::array();
  for (const Assertion& as : set) arr.push_back(to_json(as));
  return arr;
}

inline Json to_json(const AssertionSetFamily& family) {
  Json arr = Json::array();
  for (const AssertionSet& set : family) arr.push_back(to_json(set));
  return arr;
}

inline Json to_json(const std::optional<AssertionSet>& set) {
  if (!set) return nullptr;
  return to_json(*set);
}

inline Json to_json(const Verdict& v) {
  Json minimal = Json::object();
  for (const auto& [crit, flag] : v.minimal) minimal[to_string(crit)] = flag;
  return Json{{"is_hypothesis", v.is_hypothesis},
              {"minimal", minimal},
              {"conflict_confining", v.conflict_confining},
              {"counterexample", to_json(v.counterexample)}};
}

inline std::string dump_line(const Json& j) { return j.dump() + "\n"; }

}  // namespace abduct
