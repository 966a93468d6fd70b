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

#include "povmsim/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <future>
#include <sstream>

#include "json_codec.hpp"
#include "povmsim/format.hpp"
#include "povmsim/io.hpp"
#include "povmsim/sampling.hpp"
#include "povmsim/wigner.hpp"

namespace povmsim {

using detail::ConfigReader;
using detail::json;
using detail::to_json;

namespace {

constexpr std::uint64_t kDefaultSeed = 1;

class Csv {
  public:
    explicit Csv(bool gnuplot) : gnuplot_(gnuplot) {}
    Csv &header(const std::vector<std::string> &cols) {
        if (gnuplot_)
            os_ << "# ";
        line(cols);
        return *this;
    }
    Csv &row(const std::vector<std::string> &cells) {
        line(cells);
        return *this;
    }
    [[nodiscard]] std::string str() const { return os_.str(); }

  private:
    void line(const std::vector<std::string> &cells) {
        for (std::size_t i = 0; i < cells.size(); ++i)
            os_ << (i ? (gnuplot_ ? " " : ",") : "") << cells[i];
        os_ << '\n';
    }
    bool gnuplot_;
    std::ostringstream os_;
};

std::string num(double v) { return fmt_double(v); }

Artifact report(const std::string &name, const std::string &command,
                const ConfigReader &cfg, json results) {
    json body = json::object();
    body["command"] = command;
    body["config"] = cfg.resolved();
    body["results"] = std::move(results);
    body["digest"] = sha256_hex(body.dump());
    return {name, body.dump(2) + "\n"};
}

CVector parse_spin(const std::string &s) {
    if (s == "reference")
        return sg::reference_spin();
    if (s.size() == 2 && (s[1] == '+' || s[1] == '-')) {
        const bool pos = s[1] == '+';
        switch (s[0]) {
        case 'x':
            return spin_state(Axis::X, pos);
        case 'y':
            return spin_state(Axis::Y, pos);
        case 'z':
            return spin_state(Axis::Z, pos);
        default:
            break;
        }
    }
    throw ValidationError("spin must be one of x+, x-, y+, y-, z+, z-, "
                          "reference (got '" + s + "')");
}

json sample_json(const sg::Sample &s) {
    json j = json::object();
    j["t"] = s.t;
    j["p_y"] = s.p_y;
    j["p_z"] = s.p_z;
    j["sigma_x"] = s.sigma_x;
    j["sigma_y"] = s.sigma_y;
    j["sigma_z"] = s.sigma_z;
    j["norm"] = s.norm;
    return j;
}

json lambda_json(const StochasticMatrix &m) {
    json j = json::object();
    j["matrix"] = to_json(m.matrix());
    j["row_entropy"] = row_entropy(m);
    return j;
}

std::string matrix_csv(const RMatrix &m, const std::vector<std::string> &rows,
                       const std::vector<std::string> &cols, bool gnuplot) {
    Csv csv(gnuplot);
    std::vector<std::string> head{"outcome"};
    head.insert(head.end(), cols.begin(), cols.end());
    csv.header(head);
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        std::vector<std::string> cells{rows[static_cast<std::size_t>(i)]};
        for (Eigen::Index k = 0; k < m.cols(); ++k)
            cells.push_back(num(m(i, k)));
        csv.row(cells);
    }
    return csv.str();
}

bool univariate(sg::Variant v) { return v != sg::Variant::Quadrupole; }

struct Calibration {
    json results;
    std::vector<Artifact> tables;
};

/// Quadrupole marginal distributions: {P(y+), P(y-)} and {P(z+), P(z-)}.
std::pair<std::array<double, 2>, std::array<double, 2>>
quadrupole_marginals(const ProbabilityRecord &bins) {
    return {{bins[0] + bins[1], bins[2] + bins[3]},
            {bins[0] + bins[2], bins[1] + bins[3]}};
}

Calibration calibration_block(const sg::Params &p, bool gnuplot) {
    Calibration out;
    json &r = out.results;
    r = json::object();
    if (univariate(p.variant)) {
        const StochasticMatrix cal = sg::calibrate(p);
        const TomographyResult tomo = sg::extract_effects(p);
        const NonidealityFit fit =
            nonideality_matrix(tomo.effects, spin_pvm(Axis::Z));
        r["lambda_calibration"] = lambda_json(cal);
        r["lambda_tomography"] = lambda_json(fit.lambda);
        r["path_difference"] =
            (cal.matrix() - fit.lambda.matrix()).cwiseAbs().maxCoeff();
        r["diagonality_residual"] = fit.residual;
        r["tomography_condition_number"] = tomo.condition_number;
        r["effects"] = to_json(tomo.effects);
        out.tables.push_back({"sg_lambda.csv",
                              matrix_csv(cal.matrix(), {"up", "down"},
                                         {"z+", "z-"}, gnuplot)});
        return out;
    }
    // Quadrupole: eigenstates of sigma_y calibrate lambda, of sigma_z mu.
    const std::array<const char *, 4> inputs{"y+", "y-", "z+", "z-"};
    std::vector<std::future<ProbabilityRecord>> runs;
    for (const char *in : inputs)
        runs.push_back(std::async(std::launch::async, [&p, in] {
            return sg::run(p, parse_spin(in));
        }));
    std::vector<ProbabilityRecord> bins;
    for (auto &f : runs)
        bins.push_back(f.get());
    RMatrix lam(2, 2), mu(2, 2);
    for (int c = 0; c < 2; ++c) {
        const auto ym = quadrupole_marginals(bins[static_cast<std::size_t>(c)]);
        const auto zm =
            quadrupole_marginals(bins[static_cast<std::size_t>(2 + c)]);
        lam(0, c) = ym.first[0];
        lam(1, c) = ym.first[1];
        mu(0, c) = zm.second[0];
        mu(1, c) = zm.second[1];
    }
    const StochasticMatrix lam_cal(lam), mu_cal(mu);
    const sg::BivariateExtraction ex = sg::extract_bivariate_effects(p);
    const NonidealityFit lf =
        nonideality_matrix(ex.effects.row_marginal(), spin_pvm(Axis::Y));
    const NonidealityFit mf =
        nonideality_matrix(ex.effects.col_marginal(), spin_pvm(Axis::Z));
    r["lambda_calibration"] = lambda_json(lam_cal);
    r["mu_calibration"] = lambda_json(mu_cal);
    r["lambda_tomography"] = lambda_json(lf.lambda);
    r["mu_tomography"] = lambda_json(mf.lambda);
    r["path_difference"] =
        std::max((lam - lf.lambda.matrix()).cwiseAbs().maxCoeff(),
                 (mu - mf.lambda.matrix()).cwiseAbs().maxCoeff());
    r["diagonality_residual"] = std::max(lf.residual, mf.residual);
    r["tomography_condition_number"] = ex.condition_number;
    out.tables.push_back(
        {"sg_lambda.csv",
         matrix_csv(lam, {"y+", "y-"}, {"y+", "y-"}, gnuplot)});
    out.tables.push_back(
        {"sg_mu.csv", matrix_csv(mu, {"z+", "z-"}, {"z+", "z-"}, gnuplot)});
    return out;
}

// --- sg run / sg calibrate -------------------------------------------------------

std::vector<Artifact> cmd_sg_run(ConfigReader &cfg) {
    const sg::Params p = detail::params_from_config(cfg);
    const std::string spin_name = cfg.string("spin", "z+");
    const CVector spin = parse_spin(spin_name);
    const bool calibrate = cfg.boolean("calibrate", false);
    const auto every = cfg.integer("record_every", 1);
    const bool gnuplot = cfg.boolean("gnuplot_ready", false);
    cfg.reject_unknown();
    if (every < 1)
        throw ValidationError("record_every must be >= 1");

    const sg::Evolution ev = sg::evolve(sg::build_initial_state(p, spin), p,
                                        static_cast<int>(every));
    const ProbabilityRecord bins = sg::readout_momentum_bins(ev.state, p.variant);

    json r = json::object();
    r["probabilities"] = to_json(bins);
    if (univariate(p.variant))
        r["p_upper"] = bins[0];
    r["steps"] = ev.steps;
    r["max_phase_per_step"] = ev.max_phase_per_step;
    r["norm_drift"] = ev.norm_drift;
    r["ehrenfest_deviation"] = ev.ehrenfest_deviation;
    r["field_divergence"] = sg::field_divergence(p.variant, p);
    r["initial"] = sample_json(ev.series.front());
    r["final"] = sample_json(ev.series.back());
    if (p.variant == sg::Variant::Ideal) {
        r["continuum_correct_bin_probability"] =
            sg::ideal_correct_bin_probability(p);
        const double predicted =
            0.5 * p.mu * p.b * p.tau * ev.series.front().sigma_z;
        const double observed = ev.series.back().p_z;
        json h = json::object();
        h["observed"] = observed;
        h["predicted"] = predicted;
        h["relative_error"] = predicted != 0.0
                                  ? std::abs(observed - predicted) /
                                        std::abs(predicted)
                                  : std::abs(observed);
        r["momentum_drift"] = std::move(h);
    }

    std::vector<Artifact> out;
    Csv bins_csv(gnuplot);
    bins_csv.header({"label", "probability"});
    for (std::size_t k = 0; k < bins.size(); ++k)
        bins_csv.row({bins.labels[k], num(bins[k])});
    Csv series(gnuplot);
    series.header({"t", "p_y", "p_z", "sigma_x", "sigma_y", "sigma_z", "norm"});
    for (const auto &s : ev.series)
        series.row({num(s.t), num(s.p_y), num(s.p_z), num(s.sigma_x),
                    num(s.sigma_y), num(s.sigma_z), num(s.norm)});

    if (calibrate) {
        Calibration c = calibration_block(p, gnuplot);
        r["calibration"] = std::move(c.results);
        for (auto &t : c.tables)
            out.push_back(std::move(t));
    }
    out.insert(out.begin(), {{"sg_bins.csv", bins_csv.str()},
                             {"sg_series.csv", series.str()}});
    out.insert(out.begin(), report("sg_run.json", "sg run", cfg, std::move(r)));
    return out;
}

std::vector<Artifact> cmd_sg_calibrate(ConfigReader &cfg) {
    const sg::Params p = detail::params_from_config(cfg);
    const bool gnuplot = cfg.boolean("gnuplot_ready", false);
    cfg.reject_unknown();
    Calibration c = calibration_block(p, gnuplot);
    std::vector<Artifact> out;
    out.push_back(report("sg_calibration.json", "sg calibrate", cfg,
                         std::move(c.results)));
    for (auto &t : c.tables)
        out.push_back(std::move(t));
    return out;
}

// --- tomography -------------------------------------------------------------------

ProjectiveMeasure computational_pvm(int d) {
    std::vector<std::string> labels;
    for (int i = 0; i < d; ++i)
        labels.push_back(std::to_string(i));
    return ProjectiveMeasure::from_basis(CMatrix::Identity(d, d), labels);
}

/// Multinomial estimate of a distribution; n == 0 returns it unchanged.
ProbabilityRecord estimate(const ProbabilityRecord &p, std::uint64_t n,
                           std::uint64_t seed, std::uint64_t stream) {
    if (n == 0)
        return p;
    const SampleCounts c = sample_outcomes(p, n, seed, stream);
    return {p.labels, c.frequencies()};
}

json quorum_block(std::uint64_t seed, std::uint64_t samples) {
    Xoshiro256 rng(seed, 1000);
    const DensityOperator rho = random_density(rng, 2);
    std::vector<std::pair<ProjectiveMeasure, ProbabilityRecord>> data;
    std::uint64_t stream = 1001;
    for (Axis ax : {Axis::X, Axis::Y, Axis::Z}) {
        ProjectiveMeasure pvm = spin_pvm(ax);
        ProbabilityRecord exact{pvm.labels(),
                                EffectSet::from_pvm(pvm).probabilities(rho)};
        data.emplace_back(std::move(pvm), estimate(exact, samples, seed, stream++));
    }
    const QuorumResult q = quorum_reconstruct(data);
    json j = json::object();
    j["samples"] = samples;
    j["true_rho"] = to_json(rho.matrix());
    j["reconstructed_rho"] = to_json(q.rho.matrix());
    j["raw_solution"] = to_json(q.raw);
    j["max_error"] = max_abs_diff(q.rho.matrix(), rho.matrix());
    j["residual"] = q.residual;
    j["projection_distance"] = q.projection_distance;
    j["rank"] = q.rank;
    return j;
}

MeasurementModel load_model(const std::string &name, const std::string &file,
                            std::uint64_t seed) {
    if (!file.empty()) {
        std::ifstream in(file, std::ios::binary);
        if (!in)
            throw Error(ErrorKind::Io, "cannot read model file '" + file + "'");
        std::ostringstream ss;
        ss << in.rdbuf();
        return model_from_json(ss.str());
    }
    if (name == "controlled_flip")
        return controlled_flip_model();
    if (name == "identity")
        return identity_model();
    if (name == "random") {
        Xoshiro256 rng(seed, 2000);
        return random_model(rng, 2, 3, 3, true);
    }
    throw ValidationError("unknown model '" + name +
                          "' (controlled_flip, identity, random, ideal, "
                          "corrected, quadrupole)");
}

json univariate_wigner(const EffectSet &effects, const ProjectiveMeasure &pvm) {
    json j = json::object();
    const NonidealityFit fit = nonideality_matrix(effects, pvm);
    j["lambda"] = lambda_json(fit.lambda);
    j["diagonality_residual"] = fit.residual;
    const auto w = wigner_measure(effects, fit.lambda);
    json ops = json::array();
    double dev = 0.0;
    for (std::size_t k = 0; k < w.size(); ++k) {
        ops.push_back(to_json(w[k].matrix()));
        dev = std::max(dev, max_abs_diff(w[k].matrix(), pvm[k].matrix()));
    }
    j["elements"] = std::move(ops);
    j["pvm_recovery_residual"] = dev;
    return j;
}

std::vector<Artifact> cmd_tomography(ConfigReader &cfg) {
    const std::string name = cfg.string("model", "controlled_flip");
    const bool sg_model =
        name == "ideal" || name == "corrected" || name == "quadrupole";
    const std::string file = sg_model ? "" : cfg.string("model_file", "");
    const bool wigner = cfg.boolean("wigner", false);
    const bool quorum = cfg.boolean("quorum", false);
    const std::uint64_t seed = cfg.unsigned_integer("seed", kDefaultSeed);
    const std::uint64_t samples = cfg.unsigned_integer("samples", 0);
    const std::string spin_name =
        sg_model ? cfg.string("spin", "reference") : std::string();
    std::optional<sg::Params> params;
    if (sg_model) {
        if (cfg.has("variant") && cfg.string("variant", name) != name)
            throw ValidationError("variant conflicts with model '" + name + "'");
        params = detail::params_from_config(cfg, name);
    }
    cfg.reject_unknown();

    json r = json::object();
    std::vector<Artifact> extra;
    if (!sg_model) {
        const MeasurementModel model = load_model(name, file, seed);
        const TomographyResult tomo = extract_effective_povm(model);
        r["model"] = file.empty() ? name : "file";
        r["effects"] = to_json(tomo.effects);
        r["condition_number"] = tomo.condition_number;
        r["min_eigenvalue"] = tomo.min_eigenvalue;
        r["slight_negativity"] = tomo.slight_negativity;
        const bool info_free = is_information_free(tomo.effects);
        r["information_transfer"] = !info_free;
        if (info_free)
            r["note"] = "no information transfer";
        // Probability identity over the probes and seeded random states.
        Xoshiro256 rng(seed, 3000);
        std::vector<DensityOperator> states =
            standard_probe_states(model.object_dim());
        for (int i = 0; i < 16; ++i)
            states.push_back(random_density(rng, model.object_dim()));
        double dev = 0.0;
        for (const auto &rho : states)
            dev = std::max(dev, check_probability_identity(model, tomo.effects,
                                                           rho)
                                    .max_deviation);
        r["probability_identity_deviation"] = dev;
        r["identity_states_checked"] = states.size();
        if (model.hamiltonian())
            r["stationarity_drift"] = stationarity_drift(
                model, DensityOperator::maximally_mixed(model.object_dim()));
        if (wigner) {
            if (tomo.effects.size() !=
                static_cast<std::size_t>(model.object_dim()))
                throw ValidationError("univariate Wigner inversion needs as "
                                      "many outcomes as the object dimension");
            r["wigner"] = univariate_wigner(
                tomo.effects, computational_pvm(model.object_dim()));
        }
        if (file.empty())
            extra.push_back({"model.json", model_to_json(model) + "\n"});
    } else if (univariate(params->variant)) {
        const TomographyResult tomo = sg::extract_effects(*params);
        r["model"] = name;
        r["effects"] = to_json(tomo.effects);
        r["condition_number"] = tomo.condition_number;
        r["min_eigenvalue"] = tomo.min_eigenvalue;
        r["slight_negativity"] = tomo.slight_negativity;
        const CVector spin = parse_spin(spin_name);
        const ProbabilityRecord direct = sg::run(*params, spin);
        const auto via =
            tomo.effects.probabilities(DensityOperator::pure(spin));
        double dev = 0.0;
        for (std::size_t k = 0; k < via.size(); ++k)
            dev = std::max(dev, std::abs(via[k] - direct[k]));
        r["probability_identity_deviation"] = dev;
        if (wigner)
            r["wigner"] = univariate_wigner(tomo.effects, spin_pvm(Axis::Z));
    } else {
        const sg::BivariateExtraction ex = sg::extract_bivariate_effects(*params);
        r["model"] = name;
        json eff = json::object();
        eff["row_labels"] = ex.effects.row_labels();
        eff["col_labels"] = ex.effects.col_labels();
        json grid = json::array();
        for (std::size_t k = 0; k < ex.effects.rows(); ++k) {
            json row = json::array();
            for (std::size_t l = 0; l < ex.effects.cols(); ++l)
                row.push_back(to_json(ex.effects(k, l).matrix()));
            grid.push_back(std::move(row));
        }
        eff["grid"] = std::move(grid);
        r["effects"] = std::move(eff);
        r["condition_number"] = ex.condition_number;
        r["min_eigenvalue"] = ex.effects.min_eigenvalue();

        const CVector spin = parse_spin(spin_name);
        const DensityOperator rho = DensityOperator::pure(spin);
        const ProbabilityRecord direct = sg::run(*params, spin);
        double dev = 0.0;
        RMatrix joint(2, 2);
        for (std::size_t k = 0; k < 2; ++k)
            for (std::size_t l = 0; l < 2; ++l) {
                const double via =
                    (rho.matrix() * ex.effects(k, l).matrix()).trace().real();
                dev = std::max(dev, std::abs(via - direct[2 * k + l]));
                joint(static_cast<Eigen::Index>(k),
                      static_cast<Eigen::Index>(l)) = direct[2 * k + l];
            }
        r["probability_identity_deviation"] = dev;
        if (wigner) {
            const ProjectiveMeasure ey = spin_pvm(Axis::Y);
            const ProjectiveMeasure fz = spin_pvm(Axis::Z);
            const NonidealityFit lf =
                nonideality_matrix(ex.effects.row_marginal(), ey);
            const NonidealityFit mf =
                nonideality_matrix(ex.effects.col_marginal(), fz);
            const WignerMeasure w = wigner_measure(ex.effects, lf.lambda, mf.lambda);
            const MarginalResiduals mr = wigner_marginal_residuals(w, ey, fz);
            json wj = json::object();
            wj["lambda"] = lambda_json(lf.lambda);
            wj["mu"] = lambda_json(mf.lambda);
            json grid2 = json::array();
            for (std::size_t k = 0; k < w.rows(); ++k) {
                json row = json::array();
                for (std::size_t l = 0; l < w.cols(); ++l)
                    row.push_back(to_json(w(k, l).matrix()));
                grid2.push_back(std::move(row));
            }
            wj["elements"] = std::move(grid2);
            wj["marginal_residual_e"] = mr.e;
            wj["marginal_residual_f"] = mr.f;
            wj["min_eigenvalue"] = w.min_eigenvalue();
            wj["negative"] = w.min_eigenvalue() < 0.0;
            wj["lambda_condition"] =
                invert_stochastic(lf.lambda).norm() * lf.lambda.matrix().norm();

            // Ideal sigma_y / sigma_z statistics recovered from the joint
            // readout, exactly and (optionally) from sampled counts.
            RMatrix sampled = joint;
            if (samples > 0) {
                const ProbabilityRecord est =
                    estimate(direct, samples, seed, 4000);
                for (int k = 0; k < 2; ++k)
                    for (int l = 0; l < 2; ++l)
                        sampled(k, l) = est[static_cast<std::size_t>(2 * k + l)];
            }
            const IdealProbabilities ip = reconstruct_ideal_probs(
                sampled, lf.lambda, mf.lambda, ey.labels(), fz.labels());
            const auto pe = EffectSet::from_pvm(ey).probabilities(rho);
            const auto pf = EffectSet::from_pvm(fz).probabilities(rho);
            double err = 0.0;
            for (std::size_t k = 0; k < 2; ++k)
                err = std::max({err, std::abs(ip.e[k] - pe[k]),
                                std::abs(ip.f[k] - pf[k])});
            json ideal = json::object();
            ideal["samples"] = samples;
            ideal["e"] = to_json(ip.e);
            ideal["f"] = to_json(ip.f);
            ideal["negative"] = ip.negative;
            ideal["max_error"] = err;
            wj["ideal_probabilities"] = std::move(ideal);
            r["wigner"] = std::move(wj);
        }
    }
    if (quorum)
        r["quorum"] = quorum_block(seed, samples);

    std::vector<Artifact> out;
    out.push_back(report("tomography.json", "tomography", cfg, std::move(r)));
    for (auto &a : extra)
        out.push_back(std::move(a));
    return out;
}

// --- inequalities -------------------------------------------------------------

ProjectiveMeasure pvm_from_json(const json &j, const char *what) {
    if (!j.is_array() || j.empty())
        throw ValidationError(std::string(what) +
                              ": expected an array of projector matrices");
    std::vector<Operator> ops;
    std::vector<std::string> labels;
    for (std::size_t i = 0; i < j.size(); ++i) {
        ops.emplace_back(detail::cmatrix_from_json(j[i], what));
        labels.push_back(std::to_string(i));
    }
    return ProjectiveMeasure(std::move(ops), std::move(labels));
}

json inequality_json(const InequalityReport &rep, const json &inputs) {
    json j = json::object();
    j["lhs"] = rep.lhs;
    j["rhs"] = rep.rhs;
    j["satisfied"] = rep.satisfied;
    j["slack"] = rep.slack;
    j["inputs_digest"] = sha256_hex(inputs.dump());
    return j;
}

std::vector<Artifact> cmd_inequalities(ConfigReader &cfg) {
    const bool explicit_input = cfg.has("lambda");
    json r = json::object();
    std::optional<StochasticMatrix> lambda, mu;
    std::optional<ProjectiveMeasure> e, f;
    std::optional<DensityOperator> rho;

    if (explicit_input) {
        lambda.emplace(detail::rmatrix_from_json(cfg.raw("lambda"), "lambda"));
        if (cfg.has("mu"))
            mu.emplace(detail::rmatrix_from_json(cfg.raw("mu"), "mu"));
        if (cfg.has("pvm_e"))
            e.emplace(pvm_from_json(cfg.raw("pvm_e"), "pvm_e"));
        if (cfg.has("pvm_f"))
            f.emplace(pvm_from_json(cfg.raw("pvm_f"), "pvm_f"));
        if (cfg.has("rho"))
            rho.emplace(detail::cmatrix_from_json(cfg.raw("rho"), "rho"));
        r["source"] = "explicit";
    } else {
        cfg.note("source", "quadrupole");
        if (cfg.has("source") && cfg.string("source", "quadrupole") != "quadrupole")
            throw ValidationError("source must be 'quadrupole' unless lambda "
                                  "is given");
        sg::Params p = detail::params_from_config(cfg, "quadrupole");
        if (p.variant != sg::Variant::Quadrupole)
            throw ValidationError("inequalities from a simulation need the "
                                  "quadrupole variant");
        const std::string spin_name = cfg.string("spin", "reference");
        const sg::BivariateExtraction ex = sg::extract_bivariate_effects(p);
        e.emplace(spin_pvm(Axis::Y));
        f.emplace(spin_pvm(Axis::Z));
        lambda.emplace(nonideality_matrix(ex.effects.row_marginal(), *e).lambda);
        mu.emplace(nonideality_matrix(ex.effects.col_marginal(), *f).lambda);
        rho.emplace(DensityOperator::pure(parse_spin(spin_name)));
        r["source"] = "quadrupole";
    }
    const bool rob = cfg.has("robertson_a") || cfg.has("robertson_b") ||
                     cfg.has("robertson_psi");
    Operator ra = pauli::y(), rb = pauli::z();
    CVector rpsi = spin_state(Axis::X, true);
    if (rob) {
        ra = Operator(detail::cmatrix_from_json(cfg.raw("robertson_a"),
                                                "robertson_a"));
        rb = Operator(detail::cmatrix_from_json(cfg.raw("robertson_b"),
                                                "robertson_b"));
        rpsi = detail::cvector_from_json(cfg.raw("robertson_psi"),
                                         "robertson_psi");
    }
    cfg.reject_unknown();

    r["lambda"] = lambda_json(*lambda);
    if (mu)
        r["mu"] = lambda_json(*mu);
    if (mu && e && f) {
        json inputs = json::object();
        inputs["lambda"] = to_json(lambda->matrix());
        inputs["mu"] = to_json(mu->matrix());
        json pe = json::array(), pf = json::array();
        for (const auto &op : e->projectors())
            pe.push_back(to_json(op.matrix()));
        for (const auto &op : f->projectors())
            pf.push_back(to_json(op.matrix()));
        inputs["pvm_e"] = std::move(pe);
        inputs["pvm_f"] = std::move(pf);
        r["martens"] = inequality_json(check_martens(*lambda, *mu, *e, *f), inputs);
    } else if (mu || e || f) {
        throw ValidationError("the Martens check needs lambda, mu, pvm_e and "
                              "pvm_f together");
    }
    if (!rho)
        rho.emplace(DensityOperator::maximally_mixed(
            e ? e->dim() : static_cast<int>(lambda->cols())));
    const UncertaintyReport u = mu ? total_uncertainty(*rho, *lambda, *mu)
                                   : total_uncertainty(*rho, *lambda);
    json uj = json::object();
    uj["h_vn"] = u.h_vn;
    uj["j_lambda"] = u.j_lambda;
    if (u.j_mu)
        uj["j_mu"] = *u.j_mu;
    uj["delta"] = u.delta;
    uj["lhs"] = u.delta;
    uj["rhs"] = u.bound;
    uj["satisfied"] = u.satisfied;
    uj["slack"] = u.slack;
    json uin = json::object();
    uin["rho"] = to_json(rho->matrix());
    uin["lambda"] = to_json(lambda->matrix());
    if (mu)
        uin["mu"] = to_json(mu->matrix());
    uj["inputs_digest"] = sha256_hex(uin.dump());
    r["uncertainty"] = std::move(uj);

    json rin = json::object();
    rin["a"] = to_json(ra.matrix());
    rin["b"] = to_json(rb.matrix());
    rin["psi"] = to_json(rpsi);
    r["robertson"] = inequality_json(robertson_bound(ra, rb, rpsi), rin);

    return {report("inequalities.json", "inequalities", cfg, std::move(r))};
}

// --- sample / convergence --------------------------------------------------------

ProbabilityRecord probs_from_config(ConfigReader &cfg) {
    const json &pj = cfg.raw("probs");
    if (!pj.is_array() || pj.empty())
        throw ValidationError("probs must be a non-empty array of numbers");
    ProbabilityRecord rec;
    for (const auto &v : pj) {
        if (!v.is_number())
            throw ValidationError("probs must be a non-empty array of numbers");
        rec.values.push_back(v.get<double>());
    }
    if (cfg.has("labels")) {
        const json &lj = cfg.raw("labels");
        if (!lj.is_array() || lj.size() != rec.values.size())
            throw ValidationError("labels must match probs in length");
        for (const auto &l : lj) {
            if (!l.is_string())
                throw ValidationError("labels must be strings");
            rec.labels.push_back(l.get<std::string>());
        }
    } else {
        for (std::size_t i = 0; i < rec.values.size(); ++i)
            rec.labels.push_back(std::to_string(i));
    }
    rec.validate();
    return rec;
}

std::vector<Artifact> cmd_sample(ConfigReader &cfg) {
    const ProbabilityRecord probs = probs_from_config(cfg);
    const std::uint64_t n = cfg.unsigned_integer("n", 100000);
    const std::uint64_t seed = cfg.unsigned_integer("seed", kDefaultSeed);
    const bool gnuplot = cfg.boolean("gnuplot_ready", false);
    cfg.reject_unknown();
    const SampleCounts c = sample_outcomes(probs, n, seed);
    const auto freq = c.frequencies();
    json r = json::object();
    r["labels"] = c.labels;
    r["counts"] = c.counts;
    r["total"] = c.total;
    r["frequencies"] = freq;
    double err = 0.0;
    Csv csv(gnuplot);
    csv.header({"n", "label", "count", "frequency", "abs_error"});
    for (std::size_t k = 0; k < freq.size(); ++k) {
        err = std::max(err, std::abs(freq[k] - probs[k]));
        csv.row({std::to_string(n), c.labels[k], std::to_string(c.counts[k]),
                 num(freq[k]), num(std::abs(freq[k] - probs[k]))});
    }
    r["max_abs_error"] = err;
    return {report("sample.json", "sample", cfg, std::move(r)),
            {"sample.csv", csv.str()}};
}

std::vector<Artifact> cmd_convergence(ConfigReader &cfg) {
    const std::string source = cfg.string("source", "probs");
    ProbabilityRecord probs;
    std::optional<sg::Params> params;
    std::string spin_name;
    if (source == "quadrupole") {
        sg::Params p = detail::params_from_config(cfg, "quadrupole");
        if (p.variant != sg::Variant::Quadrupole)
            throw ValidationError("source 'quadrupole' needs variant quadrupole");
        params = p;
        spin_name = cfg.string("spin", "reference");
    } else if (source == "probs") {
        probs = probs_from_config(cfg);
    } else {
        throw ValidationError("source must be 'probs' or 'quadrupole'");
    }
    std::vector<std::uint64_t> schedule{100, 1000, 10000, 100000, 1000000};
    if (cfg.has("schedule")) {
        const json &sj = cfg.raw("schedule");
        if (!sj.is_array() || sj.empty())
            throw ValidationError("schedule must be a non-empty array");
        schedule.clear();
        for (const auto &v : sj) {
            if (!v.is_number_unsigned() || v.get<std::uint64_t>() == 0)
                throw ValidationError("schedule entries must be positive "
                                      "integers");
            schedule.push_back(v.get<std::uint64_t>());
        }
    } else {
        cfg.note("schedule", schedule);
    }
    const std::uint64_t seed = cfg.unsigned_integer("seed", kDefaultSeed);
    const auto replicates = cfg.integer("replicates", 16);
    const bool gnuplot = cfg.boolean("gnuplot_ready", false);
    cfg.reject_unknown();
    if (replicates < 1 || replicates > 4096)
        throw ValidationError("replicates must be in [1, 4096]");

    json r = json::object();
    std::optional<sg::BivariateExtraction> ex;
    std::optional<StochasticMatrix> lam, mu;
    std::vector<double> pe, pf;
    if (params) {
        const CVector spin = parse_spin(spin_name);
        probs = sg::run(*params, spin);
        ex.emplace(sg::extract_bivariate_effects(*params));
        lam.emplace(nonideality_matrix(ex->effects.row_marginal(),
                                       spin_pvm(Axis::Y)).lambda);
        mu.emplace(nonideality_matrix(ex->effects.col_marginal(),
                                      spin_pvm(Axis::Z)).lambda);
        const DensityOperator rho = DensityOperator::pure(spin);
        pe = EffectSet::from_pvm(spin_pvm(Axis::Y)).probabilities(rho);
        pf = EffectSet::from_pvm(spin_pvm(Axis::Z)).probabilities(rho);
        r["joint_probabilities"] = to_json(probs);
    }
    const ConvergenceReport rep = convergence_report(
        probs, schedule, seed, static_cast<int>(replicates));
    json rows = json::array();
    for (const auto &row : rep.rows) {
        json j = json::object();
        j["n"] = row.n;
        j["mean_max_abs_error"] = row.error;
        j["counts"] = row.counts.counts;
        if (params) {
            const auto f = row.counts.frequencies();
            RMatrix joint(2, 2);
            joint << f[0], f[1], f[2], f[3];
            const IdealProbabilities ip =
                reconstruct_ideal_probs(joint, *lam, *mu);
            double err = 0.0;
            for (std::size_t k = 0; k < 2; ++k)
                err = std::max({err, std::abs(ip.e[k] - pe[k]),
                                std::abs(ip.f[k] - pf[k])});
            j["ideal_e"] = ip.e.values;
            j["ideal_f"] = ip.f.values;
            j["ideal_negative"] = ip.negative;
            j["ideal_max_error"] = err;
        }
        rows.push_back(std::move(j));
    }
    r["rows"] = std::move(rows);
    r["replicates"] = rep.replicates;
    if (rep.slope_defined)
        r["slope"] = rep.slope;
    else
        r["slope"] = nullptr;
    if (params) {
        r["ideal_e_exact"] = pe;
        r["ideal_f_exact"] = pf;
    }
    return {report("convergence.json", "convergence", cfg, std::move(r)),
            {"convergence.csv", convergence_csv(rep, probs, gnuplot)}};
}

std::string normalize(std::string_view command) {
    std::string s(command);
    std::replace(s.begin(), s.end(), '-', ' ');
    std::replace(s.begin(), s.end(), '_', ' ');
    return s;
}

} // namespace

std::vector<std::string> command_names() {
    return {"sg run",       "sg calibrate", "tomography",
            "inequalities", "sample",       "convergence"};
}

std::vector<Artifact> run_command(std::string_view command,
                                  std::string_view config_json) {
    json parsed = json::object();
    if (!config_json.empty()) {
        parsed = json::parse(config_json.begin(), config_json.end(), nullptr,
                             false);
        if (parsed.is_discarded() || !parsed.is_object())
            throw ValidationError("config must be a JSON object");
    }
    ConfigReader cfg(std::move(parsed));
    const std::string cmd = normalize(command);
    if (cmd == "sg run")
        return cmd_sg_run(cfg);
    if (cmd == "sg calibrate")
        return cmd_sg_calibrate(cfg);
    if (cmd == "tomography")
        return cmd_tomography(cfg);
    if (cmd == "inequalities")
        return cmd_inequalities(cfg);
    if (cmd == "sample")
        return cmd_sample(cfg);
    if (cmd == "convergence")
        return cmd_convergence(cfg);
    throw Error(ErrorKind::InvalidArgument,
                "unknown command '" + std::string(command) + "'");
}

} // namespace povmsim
