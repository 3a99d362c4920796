// Copyright 2026 The gradsim Authors
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

#ifndef GRADSIM_CONFIG_HPP_
#define GRADSIM_CONFIG_HPP_

#include <filesystem>
#include <string>
#include <string_view>

#include "gradsim/protocol.hpp"
#include "gradsim/simulation.hpp"

namespace gradsim {

// Config files are flat `key = value` lines; `#` starts a comment. Keys
// match field names (rho_instruct, kappa_test, n_rounds, noise_sigma, ...)
// and values are parsed as the field's type. Missing keys keep their
// defaults, so an empty file yields the stock parameters. Unknown keys,
// repeated keys and malformed values throw ProtocolError naming the key.

ProtocolParams ParseProtocolParams(std::string_view text);
SimConfig ParseSimConfig(std::string_view text);

// Reads and parses a config file. Throws ProtocolError if it cannot be read.
SimConfig LoadSimConfig(const std::filesystem::path& path);

// Every key with its current value; ParseSimConfig(FormatSimConfig(c))
// reproduces c.
std::string FormatSimConfig(const SimConfig& config);

}  // namespace gradsim

#endif  // GRADSIM_CONFIG_HPP_
