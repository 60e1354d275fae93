#ifndef ISD_LINKAGE_IO_HPP
#define ISD_LINKAGE_IO_HPP

#include <nlohmann/json.hpp>

#include "isd/connectivity.hpp"
#include "isd/graph_io.hpp"

namespace isd {

/// {"graph": <graph json>, "pairs": [[x,y],...]}
inline LinkageInstance linkage_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("graph") || !j.contains("pairs"))
    throw parse_error("linkage: expected object with 'graph' and 'pairs'", 0);
  LinkageInstance inst;
  inst.host = graph_from_json(j.at("graph"));
  for (const auto& p : j.at("pairs")) {
    if (!p.is_array() || p.size() != 2) throw parse_error("linkage: pair is not [x,y]", 0);
    inst.pairs.emplace_back(p[0].get<int>(), p[1].get<int>());
  }
  inst.validate();
  return inst;
}

inline nlohmann::ordered_json linkage_instance_to_json(const LinkageInstance& inst) {
  nlohmann::ordered_json j;
  j["graph"] = graph_to_json(inst.host);
  auto& pairs = j["pairs"] = nlohmann::ordered_json::array();
  for (const auto& [x, y] : inst.pairs) pairs.push_back({x, y});
  return j;
}

inline nlohmann::ordered_json linkage_result_to_json(const LinkageResult& res) {
  nlohmann::ordered_json j;
  switch (res.status) {
    case SearchStatus::found: j["status"] = "found"; break;
    case SearchStatus::none_exists: j["status"] = "infeasible"; break;
    case SearchStatus::budget_exhausted: j["status"] = "budget_exhausted"; break;
  }
  j["nodes_expanded"] = res.nodes_expanded;
  auto& paths = j["paths"] = nlohmann::ordered_json::array();
  for (const auto& p : res.paths) paths.push_back(p);
  return j;
}

}  // namespace isd

#endif  // ISD_LINKAGE_IO_HPP
