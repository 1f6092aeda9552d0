/* Copyright 2026 The Tofusim Authors. All Rights Reserved.
Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at
    http://www.apache.org/licenses/LICENSE-2.0
Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/
#include "tofu/constants.hpp"

namespace tofu::constants {

std::optional<double> gamma_of_nucleus(std::string_view name) {
  if (name == "1H" || name == "H") return gamma_1h;
  if (name == "13C" || name == "C") return gamma_13c;
  if (name == "15N" || name == "N") return gamma_15n;
  if (name == "31P" || name == "P") return gamma_31p;
  if (name == "19F" || name == "F") return gamma_19f;
  return std::nullopt;
}

}  // namespace tofu::constants
