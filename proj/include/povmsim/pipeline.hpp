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
#include <vector>

namespace povmsim {

struct Artifact {
    std::string name;    // file name, e.g. "sg_run.json"
    std::string content;
};

/// Commands: "sg run", "sg calibrate", "tomography", "inequalities",
/// "sample", "convergence".
std::vector<std::string> command_names();

/// Runs a command on a resolved JSON config object. Every JSON report embeds
/// the resolved config and a SHA-256 digest of its payload; no timestamps, so
/// identical inputs give byte-identical artifacts. Throws ValidationError,
/// NumericalError or Error(Io).
std::vector<Artifact> run_command(std::string_view command,
                                  std::string_view config_json);

} // namespace povmsim
