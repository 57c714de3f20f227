//
// Copyright 2026 The OTAFL Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

// Fleet file format: a JSON array of {"id", "gain", "phase", "power"}.

#ifndef OTAFL_FLEET_IO_HPP_
#define OTAFL_FLEET_IO_HPP_

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "otafl/fleet.hpp"

namespace otafl {

inline Fleet FleetFromJson(const nlohmann::json& doc) {
  internal::Require(doc.is_array(), "fleet file must be a JSON array");
  std::vector<DeviceProfile> devices;
  for (const nlohmann::json& item : doc) {
    internal::Require(item.is_object(), "fleet entries must be objects");
    for (const auto& [key, value] : item.items()) {
      internal::Require(key == "id" || key == "gain" || key == "phase" ||
                            key == "power",
                        "unknown fleet entry key '" + key + "'");
    }
    for (const char* key : {"id", "gain", "phase", "power"}) {
      internal::Require(item.contains(key),
                        std::string("fleet entry missing '") + key + "'");
    }
    internal::Require(item["id"].is_number_integer(), "'id' must be an integer");
    for (const char* key : {"gain", "phase", "power"}) {
      internal::Require(item[key].is_number(),
                        std::string("'") + key + "' must be a number");
    }
    DeviceProfile d;
    d.id = item["id"].get<int>();
    d.channel_gain = item["gain"].get<double>();
    d.phase = item["phase"].get<double>();
    d.max_power = item["power"].get<double>();
    devices.push_back(d);
  }
  return Fleet(std::move(devices));
}

inline nlohmann::json FleetToJson(const Fleet& fleet) {
  nlohmann::json doc = nlohmann::json::array();
  for (const DeviceProfile& d : fleet.devices()) {
    doc.push_back({{"id", d.id},
                   {"gain", d.channel_gain},
                   {"phase", d.phase},
                   {"power", d.max_power}});
  }
  return doc;
}

inline Fleet ReadFleetFile(const std::string& path) {
  std::ifstream in(path);
  internal::Require(in.good(), "cannot open fleet file " + path);
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::parse_error& e) {
    throw InvalidArgument("fleet file " + path + ": " + e.what());
  }
  return FleetFromJson(doc);
}

}  // namespace otafl

#endif  // OTAFL_FLEET_IO_HPP_
