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

#include <cstdint>
#include <string>
#include <vector>

#include "povmsim/premeasurement.hpp"
#include "povmsim/rng.hpp"

namespace povmsim {

struct SampleCounts {
    std::vector<std::string> labels;
    std::vector<std::uint64_t> counts;
    std::uint64_t total = 0;

    [[nodiscard]] std::vector<double> frequencies() const;
};

/// Cumulative distribution used for inverse-CDF draws.
class OutcomeSampler {
  public:
    explicit OutcomeSampler(const ProbabilityRecord &probs);
    std::size_t draw(Xoshiro256 &rng) const noexcept;
    [[nodiscard]] std::size_t size() const noexcept { return cdf_.size(); }

  private:
    std::vector<double> cdf_;
};

/// n sequential single-event draws from stream (seed, stream). Any prefix of
/// a longer run reproduces the shorter run.
SampleCounts sample_outcomes(const ProbabilityRecord &probs, std::uint64_t n,
                             std::uint64_t seed, std::uint64_t stream = 0);

struct ConvergenceRow {
    std::uint64_t n = 0;
    double error = 0.0;     // max_k |freq - p|, averaged over replicates
    SampleCounts counts;    // replicate 0 at this prefix
};

struct ConvergenceReport {
    std::vector<ConvergenceRow> rows;
    double slope = 0.0;     // log-log fit of error against n
    bool slope_defined = false;
    int replicates = 0;
};

/// Error table over an increasing schedule. Each replicate is one sequential
/// stream (substream r of `seed`) read at every schedule point.
ConvergenceReport convergence_report(const ProbabilityRecord &probs,
                                     std::vector<std::uint64_t> schedule,
                                     std::uint64_t seed, int replicates = 16);

/// Least-squares slope of log(y) against log(x); points with y <= 0 skipped.
/// Returns false when fewer than two usable points remain.
bool loglog_slope(const std::vector<double> &x, const std::vector<double> &y,
                  double &slope);

/// Rows: n, outcome-label, count, frequency, |freq - p|.
std::string convergence_csv(const ConvergenceReport &report,
                            const ProbabilityRecord &probs,
                            bool gnuplot_ready = false);

} // namespace povmsim
