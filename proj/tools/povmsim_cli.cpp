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

// povmsim command-line front end. Talks to the library only through the C API.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "povmsim/c_api.h"

namespace {

using json = nlohmann::ordered_json;

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;
constexpr int kExitInternal = 1;

struct Options {
    std::string config;
    std::optional<std::uint64_t> seed;
    std::string out = ".";
    bool json_only = false;
    bool csv_only = false;
    bool gnuplot = false;
    bool calibrate = false;
    bool wigner = false;
    bool quorum = false;
    std::string variant;
    std::string spin;
    std::string model;
    std::string model_file;
    std::optional<std::uint64_t> samples;
    std::optional<std::uint64_t> n;
    std::vector<double> probs;
    std::vector<std::string> sets;
};

int exit_for(povm_status s) {
    switch (s) {
    case POVM_OK:
        return kExitOk;
    case POVM_ERR_INVALID_ARGUMENT:
    case POVM_ERR_VALIDATION:
    case POVM_ERR_IO:
        return kExitConfig;
    case POVM_ERR_NUMERICAL:
        return kExitNumerical;
    default:
        return kExitInternal;
    }
}

struct ConfigFailure {
    std::string message;
};

json load_config(const std::string &path) {
    if (path.empty())
        return json::object();
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw ConfigFailure{"cannot read config file '" + path + "'"};
    std::ostringstream ss;
    ss << in.rdbuf();
    char *text = nullptr;
    if (povm_config_parse(ss.str().c_str(), &text) != POVM_OK)
        throw ConfigFailure{path + ": " + povm_last_error()};
    json j = json::parse(text);
    povm_string_free(text);
    return j;
}

/// key=value overrides; the value is a JSON literal or a bare string.
void apply_sets(json &cfg, const std::vector<std::string> &sets) {
    for (const auto &s : sets) {
        const auto eq = s.find('=');
        if (eq == std::string::npos || eq == 0)
            throw ConfigFailure{"--set expects key=value, got '" + s + "'"};
        const std::string key = s.substr(0, eq);
        const std::string val = s.substr(eq + 1);
        json v = json::parse(val, nullptr, false);
        cfg[key] = v.is_discarded() ? json(val) : v;
    }
}

json resolve(const Options &o) {
    json cfg = load_config(o.config);
    apply_sets(cfg, o.sets);
    if (o.seed)
        cfg["seed"] = *o.seed;
    if (!o.variant.empty())
        cfg["variant"] = o.variant;
    if (!o.spin.empty())
        cfg["spin"] = o.spin;
    if (o.gnuplot)
        cfg["gnuplot_ready"] = true;
    if (o.calibrate)
        cfg["calibrate"] = true;
    if (o.wigner)
        cfg["wigner"] = true;
    if (o.quorum)
        cfg["quorum"] = true;
    if (!o.model.empty())
        cfg["model"] = o.model;
    if (!o.model_file.empty())
        cfg["model_file"] = o.model_file;
    if (o.samples)
        cfg["samples"] = *o.samples;
    if (o.n)
        cfg["n"] = *o.n;
    if (!o.probs.empty())
        cfg["probs"] = o.probs;
    return cfg;
}

bool wanted(const Options &o, const std::string &name) {
    const bool is_json = name.size() > 5 && name.ends_with(".json");
    const bool is_csv = name.size() > 4 && name.ends_with(".csv");
    if (o.json_only && !o.csv_only)
        return is_json;
    if (o.csv_only && !o.json_only)
        return is_csv;
    return true;
}

int execute(const Options &o, const std::string &command) {
    json cfg;
    try {
        cfg = resolve(o);
    } catch (const ConfigFailure &f) {
        std::cerr << "povmsim: " << f.message << '\n';
        return kExitConfig;
    }
    std::error_code ec;
    std::filesystem::create_directories(o.out, ec);
    if (ec || !std::filesystem::is_directory(o.out)) {
        std::cerr << "povmsim: output directory '" << o.out
                  << "' is not writable\n";
        return kExitConfig;
    }

    povm_artifacts *arts = nullptr;
    const povm_status st =
        povm_run_command(command.c_str(), cfg.dump().c_str(), &arts);
    if (st != POVM_OK) {
        std::cerr << "povmsim " << command << ": " << povm_last_error() << '\n';
        return exit_for(st);
    }
    int rc = kExitOk;
    for (size_t i = 0; i < povm_artifacts_count(arts); ++i) {
        const std::string name = povm_artifacts_name(arts, i);
        if (!wanted(o, name))
            continue;
        size_t len = 0;
        const char *data = povm_artifacts_content(arts, i, &len);
        const auto path = std::filesystem::path(o.out) / name;
        std::ofstream f(path, std::ios::binary | std::ios::trunc);
        if (!f.write(data, static_cast<std::streamsize>(len))) {
            std::cerr << "povmsim: cannot write " << path.string() << '\n';
            rc = kExitConfig;
            break;
        }
        std::cout << path.string() << '\n';
    }
    povm_artifacts_free(arts);
    return rc;
}

void common_flags(CLI::App *app, Options &o) {
    app->add_option("--config", o.config, "config file (JSON or key = value)");
    app->add_option("--seed", o.seed, "RNG seed (u64)");
    app->add_option("--out", o.out, "output directory")->capture_default_str();
    app->add_flag("--json", o.json_only, "write only JSON reports");
    app->add_flag("--csv", o.csv_only, "write only CSV tables");
    app->add_flag("--gnuplot-ready", o.gnuplot,
                  "space-separated CSV with '#' header");
    app->add_option("--set", o.sets, "override a config key (key=value)");
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"povmsim: premeasurement, Stern-Gerlach and nonideal "
                 "measurement toolkit"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(povm_version()));
    Options o;

    CLI::App *sg = app.add_subcommand("sg", "Stern-Gerlach simulation");
    sg->require_subcommand(1);
    CLI::App *sg_run = sg->add_subcommand("run", "propagate one spin input");
    common_flags(sg_run, o);
    sg_run->add_option("--variant", o.variant, "ideal | corrected | quadrupole");
    sg_run->add_option("--spin", o.spin, "x+ x- y+ y- z+ z- reference");
    sg_run->add_flag("--calibrate", o.calibrate, "also calibrate lambda");
    CLI::App *sg_cal = sg->add_subcommand("calibrate", "nonideality calibration");
    common_flags(sg_cal, o);
    sg_cal->add_option("--variant", o.variant, "ideal | corrected | quadrupole");

    CLI::App *tomo = app.add_subcommand("tomography", "detector tomography");
    common_flags(tomo, o);
    tomo->add_option("--model", o.model,
                     "controlled_flip | identity | random | ideal | corrected "
                     "| quadrupole");
    tomo->add_option("--model-file", o.model_file, "model JSON document");
    tomo->add_option("--variant", o.variant, "Stern-Gerlach variant");
    tomo->add_option("--spin", o.spin, "input spin for identity checks");
    tomo->add_flag("--wigner", o.wigner, "invert nonideality (Wigner measure)");
    tomo->add_flag("--quorum", o.quorum, "quorum state reconstruction");
    tomo->add_option("--samples", o.samples, "finite-sample statistics (0: exact)");

    CLI::App *ineq = app.add_subcommand("inequalities",
                                        "Martens, uncertainty, Robertson");
    common_flags(ineq, o);
    ineq->add_option("--variant", o.variant, "Stern-Gerlach variant");
    ineq->add_option("--spin", o.spin, "preparation spin");

    CLI::App *sample = app.add_subcommand("sample", "draw outcomes");
    common_flags(sample, o);
    sample->add_option("--probs", o.probs, "outcome probabilities");
    sample->add_option("--n", o.n, "number of draws");

    CLI::App *conv = app.add_subcommand("convergence", "frequency convergence");
    common_flags(conv, o);
    conv->add_option("--probs", o.probs, "outcome probabilities");
    conv->add_option("--variant", o.variant, "variant for source=quadrupole");
    conv->add_option("--spin", o.spin, "spin for source=quadrupole");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : kExitConfig;
    }

    if (sg_run->parsed())
        return execute(o, "sg run");
    if (sg_cal->parsed())
        return execute(o, "sg calibrate");
    if (tomo->parsed())
        return execute(o, "tomography");
    if (ineq->parsed())
        return execute(o, "inequalities");
    if (sample->parsed())
        return execute(o, "sample");
    return execute(o, "convergence");
}
