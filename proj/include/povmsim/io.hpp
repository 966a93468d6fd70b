// Copyright 2026 The povmsim Authors
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

#include <string>
#include <string_view>

#include "povmsim/premeasurement.hpp"
#include "povmsim/stern_gerlach.hpp"

namespace povmsim {

/// Model document: dims, interaction (hamiltonian + time, or unitary),
/// ancilla_init and pointer {labels, effects}. Complex entries are [re, im]
/// pairs; doubles are written in shortest round-trip form, so
/// model_from_json(model_to_json(m)) reproduces every matrix bit for bit.
std::string model_to_json(const MeasurementModel &model);
MeasurementModel model_from_json(std::string_view text);

/// Normalizes a config file to a JSON object. Accepts JSON, or flat
/// `key = value` lines ('#' starts a comment; values are JSON literals or
/// bare strings). Throws ValidationError on malformed input.
std::string config_to_json(std::string_view text);

/// Stern-Gerlach parameters from a config file (JSON or flat-key). Missing
/// fields take the defaults of the configured variant; unknown keys are
/// rejected.
sg::Params sg_params_from_text(std::string_view text);
std::string sg_params_to_json(const sg::Params &params);

/// Lowercase hex SHA-256.
std::string sha256_hex(std::string_view data);

} // namespace povmsim
