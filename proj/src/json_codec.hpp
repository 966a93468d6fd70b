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

// JSON conversions shared by io.cpp and pipeline.cpp.

#pragma once

#include <set>
#include <string>

#include <json.hpp>

#include "povmsim/error.hpp"
#include "povmsim/nonideality.hpp"
#include "povmsim/premeasurement.hpp"
#include "povmsim/stern_gerlach.hpp"

namespace povmsim::detail {

using json = nlohmann::ordered_json;

json to_json(const CMatrix &m);
json to_json(const RMatrix &m);
json to_json(const CVector &v);
json to_json(const ProbabilityRecord &p);
json to_json(const EffectSet &e);

CMatrix cmatrix_from_json(const json &j, const char *what);
RMatrix rmatrix_from_json(const json &j, const char *what);
CVector cvector_from_json(const json &j, const char *what);

json model_to_json(const MeasurementModel &model);
MeasurementModel model_from_json(const json &j);

json params_to_json(const sg::Params &p);

json parse_config(std::string_view text);

/// Keyed view over a config object that records which keys were read, so
/// leftovers can be rejected as unknown.
class ConfigReader {
  public:
    explicit ConfigReader(json obj);

    [[nodiscard]] bool has(const std::string &key) const;
    const json &raw(const std::string &key);
    double number(const std::string &key, double fallback);
    std::int64_t integer(const std::string &key, std::int64_t fallback);
    std::uint64_t unsigned_integer(const std::string &key,
                                   std::uint64_t fallback);
    bool boolean(const std::string &key, bool fallback);
    std::string string(const std::string &key, const std::string &fallback);
    /// Throws ValidationError naming the first key never read.
    void reject_unknown() const;
    /// Effective value of every key read so far, defaults included.
    [[nodiscard]] const json &resolved() const noexcept { return resolved_; }
    /// Records a derived value in the resolved view.
    void note(const std::string &key, json value) {
        resolved_[key] = std::move(value);
    }

  private:
    json obj_;
    json resolved_ = json::object();
    std::set<std::string> used_;
};

/// Consumes the SgParams keys (variant, a, b, mu, m, tau, grid_n, extent,
/// packet_width, steps) and validates the result.
sg::Params params_from_config(ConfigReader &cfg,
                              const std::string &default_variant = "ideal");

} // namespace povmsim::detail
