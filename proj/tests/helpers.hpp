// Copyright 2026 The PBN Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <functional>
#include <optional>
#include <string>

#include "pbn/device_id.hpp"
#include "pbn/error.hpp"

namespace testutil {

inline pbn::DeviceId id(const std::string& name,
                        const std::string& sim = "0000000000") {
  return pbn::make_device_id(name, sim);
}

// Runs f and reports the ErrorCode it threw, if any.
inline std::optional<pbn::ErrorCode> thrown_code(
    const std::function<void()>& f) {
  try {
    f();
  } catch (const pbn::Error& e) {
    return e.code();
  }
  return std::nullopt;
}

}  // namespace testutil
