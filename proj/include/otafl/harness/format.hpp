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

#ifndef OTAFL_HARNESS_FORMAT_HPP_
#define OTAFL_HARNESS_FORMAT_HPP_

#include <charconv>
#include <cmath>
#include <string>
#include <string_view>
#include <system_error>

#include "otafl/common.hpp"

namespace otafl::harness {

// Shortest decimal string that parses back to the same double.
inline std::string FormatDouble(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[64];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  if (ec != std::errc()) throw std::runtime_error("double formatting failed");
  return std::string(buf, end);
}

inline double ParseDouble(std::string_view text) {
  if (text == "nan") return std::nan("");
  if (text == "inf") return INFINITY;
  if (text == "-inf") return -INFINITY;
  double value = 0.0;
  const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  otafl::internal::Require(ec == std::errc() && end == text.data() + text.size(),
                    "not a number: '" + std::string(text) + "'");
  return value;
}

}  // namespace otafl::harness

#endif  // OTAFL_HARNESS_FORMAT_HPP_
