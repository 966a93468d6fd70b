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

#include "povmsim/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "povmsim/error.hpp"
#include "povmsim/format.hpp"

namespace povmsim {

std::vector<double> SampleCounts::frequencies() const {
    std::vector<double> f(counts.size(), 0.0);
    if (total == 0)
        return f;
    for (std::size_t k = 0; k < counts.size(); ++k)
        f[k] = static_cast<double>(counts[k]) / static_cast<double>(total);
    return f;
}

OutcomeSampler::OutcomeSampler(const ProbabilityRecord &probs) {
    probs.validate();
    double acc = 0.0;
    cdf_.reserve(probs.size());
    for (std::size_t k = 0; k < probs.size(); ++k) {
        acc += std::max(0.0, probs[k]);
        cdf_.push_back(acc);
    }
    // Rescale so the last entry is exactly one.
    for (auto &c : cdf_)
        c /= acc;
    cdf_.back() = 1.0;
}

std::size_t OutcomeSampler::draw(Xoshiro256 &rng) const noexcept {
    const double u = rng.uniform();
    for (std::size_t k = 0; k + 1 < cdf_.size(); ++k)
        if (u < cdf_[k])
            return k;
    return cdf_.size() - 1;
}

SampleCounts sample_outcomes(const ProbabilityRecord &probs, std::uint64_t n,
                             std::uint64_t seed, std::uint64_t stream) {
    if (n == 0)
        throw ValidationError("sample size must be at least 1");
    const OutcomeSampler sampler(probs);
    Xoshiro256 rng(seed, stream);
    SampleCounts out{probs.labels, std::vector<std::uint64_t>(probs.size(), 0), n};
    for (std::uint64_t i = 0; i < n; ++i)
        ++out.counts[sampler.draw(rng)];
    return out;
}

bool loglog_slope(const std::vector<double> &x, const std::vector<double> &y,
                  double &slope) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int m = 0;
    for (std::size_t i = 0; i < x.size() && i < y.size(); ++i) {
        if (!(x[i] > 0.0) || !(y[i] > 0.0))
            continue;
        const double lx = std::log(x[i]);
        const double ly = std::log(y[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
        ++m;
    }
    if (m < 2)
        return false;
    const double den = m * sxx - sx * sx;
    if (den == 0.0)
        return false;
    slope = (m * sxy - sx * sy) / den;
    return true;
}

ConvergenceReport convergence_report(const ProbabilityRecord &probs,
                                     std::vector<std::uint64_t> schedule,
                                     std::uint64_t seed, int replicates) {
    if (schedule.empty())
        throw ValidationError("convergence schedule is empty");
    if (replicates < 1)
        throw ValidationError("replicate count must be at least 1");
    std::sort(schedule.begin(), schedule.end());
    schedule.erase(std::unique(schedule.begin(), schedule.end()),
                   schedule.end());
    if (schedule.front() == 0)
        throw ValidationError("schedule entries must be at least 1");

    const OutcomeSampler sampler(probs);
    ConvergenceReport rep;
    rep.replicates = replicates;
    rep.rows.resize(schedule.size());
    for (std::size_t i = 0; i < schedule.size(); ++i)
        rep.rows[i].n = schedule[i];

    for (int r = 0; r < replicates; ++r) {
        Xoshiro256 rng(seed, static_cast<std::uint64_t>(r));
        std::vector<std::uint64_t> counts(probs.size(), 0);
        std::uint64_t drawn = 0;
        for (auto &row : rep.rows) {
            for (; drawn < row.n; ++drawn)
                ++counts[sampler.draw(rng)];
            double err = 0.0;
            for (std::size_t k = 0; k < counts.size(); ++k)
                err = std::max(err, std::abs(static_cast<double>(counts[k]) /
                                                 static_cast<double>(row.n) -
                                             probs[k]));
            row.error += err / replicates;
            if (r == 0)
                row.counts = SampleCounts{probs.labels, counts, row.n};
        }
    }
    std::vector<double> xs, ys;
    for (const auto &row : rep.rows) {
        xs.push_back(static_cast<double>(row.n));
        ys.push_back(row.error);
    }
    rep.slope_defined = loglog_slope(xs, ys, rep.slope);
    return rep;
}

std::string convergence_csv(const ConvergenceReport &report,
                            const ProbabilityRecord &probs,
                            bool gnuplot_ready) {
    std::ostringstream os;
    os << (gnuplot_ready ? "# n label count frequency abs_error\n"
                         : "n,label,count,frequency,abs_error\n");
    const char sep = gnuplot_ready ? ' ' : ',';
    for (const auto &row : report.rows) {
        const auto f = row.counts.frequencies();
        for (std::size_t k = 0; k < f.size(); ++k)
            os << row.n << sep
               << (k < probs.labels.size() ? probs.labels[k] : std::to_string(k))
               << sep << row.counts.counts[k]
               << sep << fmt_double(f[k]) << sep
               << fmt_double(std::abs(f[k] - probs[k])) << '\n';
    }
    return os.str();
}

} // namespace povmsim
