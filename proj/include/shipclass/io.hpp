// io.hpp -- JSON (de)serialization for networks.
//
// Schema:
//   {
//     "variables": [{"name": "...", "states": ["...", ...]}, ...],
//     "edges":     [["parent", "child"], ...],
//     "tables":    [{"child": "...", "parents": ["...", ...], "rows": [[...], ...]}, ...]
//   }
// Loading re-validates through build_network; load(save(net)) is value-identical.
#pragma once

#include <json.hpp>
#include <string>

#include "shipclass/network.hpp"

namespace bbn {

nlohmann::ordered_json network_to_json(const Network& net);
Network network_from_json(const nlohmann::json& j);

void save_network(const Network& net, const std::string& path);
Network load_network(const std::string& path);

}  // namespace bbn
