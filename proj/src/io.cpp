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

#include "povmsim/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <sstream>

#include <openssl/evp.h>

#include "json_codec.hpp"

namespace povmsim {
namespace detail {

namespace {

double as_double(const json &v, const char *what) {
    if (!v.is_number())
        throw ValidationError(std::string(what) + ": expected a number");
    return v.get<double>();
}

cplx as_complex(const json &v, const char *what) {
    if (v.is_number())
        return {v.get<double>(), 0.0};
    if (!v.is_array() || v.size() != 2)
        throw ValidationError(std::string(what) +
                              ": complex entries must be [re, im] pairs");
    return {as_double(v[0], what), as_double(v[1], what)};
}

json complex_json(cplx z) { return json::array({z.real(), z.imag()}); }

EffectSet effects_from_json(const json &j, const char *what) {
    if (!j.is_object() || !j.contains("effects") || !j["effects"].is_array())
        throw ValidationError(std::string(what) + ": missing effects array");
    std::vector<Operator> ops;
    for (const auto &e : j["effects"])
        ops.emplace_back(cmatrix_from_json(e, what));
    std::vector<std::string> labels;
    if (j.contains("labels")) {
        if (!j["labels"].is_array())
            throw ValidationError(std::string(what) + ": labels must be an array");
        for (const auto &l : j["labels"]) {
            if (!l.is_string())
                throw ValidationError(std::string(what) +
                                      ": labels must be strings");
            labels.push_back(l.get<std::string>());
        }
    }
    return EffectSet(std::move(ops), std::move(labels));
}

int as_dim(const json &j, const char *key) {
    if (!j.contains(key) || !j[key].is_number_integer())
        throw ValidationError(std::string("model: ") + key +
                              " must be an integer");
    return j[key].get<int>();
}

} // namespace

json to_json(const CMatrix &m) {
    json rows = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (Eigen::Index k = 0; k < m.cols(); ++k)
            row.push_back(complex_json(m(i, k)));
        rows.push_back(std::move(row));
    }
    return rows;
}

json to_json(const RMatrix &m) {
    json rows = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (Eigen::Index k = 0; k < m.cols(); ++k)
            row.push_back(m(i, k));
        rows.push_back(std::move(row));
    }
    return rows;
}

json to_json(const CVector &v) {
    json out = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i)
        out.push_back(complex_json(v(i)));
    return out;
}

json to_json(const ProbabilityRecord &p) {
    json out = json::object();
    out["labels"] = p.labels;
    out["values"] = p.values;
    return out;
}

json to_json(const EffectSet &e) {
    json out = json::object();
    out["labels"] = e.labels();
    json ops = json::array();
    for (const auto &op : e.effects())
        ops.push_back(to_json(op.matrix()));
    out["effects"] = std::move(ops);
    return out;
}

CMatrix cmatrix_from_json(const json &j, const char *what) {
    if (!j.is_array() || j.empty() || !j[0].is_array())
        throw ValidationError(std::string(what) +
                              ": expected a matrix (array of rows)");
    const auto rows = static_cast<Eigen::Index>(j.size());
    const auto cols = static_cast<Eigen::Index>(j[0].size());
    CMatrix m(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i) {
        const auto &row = j[static_cast<std::size_t>(i)];
        if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols)
            throw ValidationError(std::string(what) + ": ragged matrix rows");
        for (Eigen::Index k = 0; k < cols; ++k)
            m(i, k) = as_complex(row[static_cast<std::size_t>(k)], what);
    }
    return m;
}

RMatrix rmatrix_from_json(const json &j, const char *what) {
    if (!j.is_array() || j.empty() || !j[0].is_array())
        throw ValidationError(std::string(what) +
                              ": expected a matrix (array of rows)");
    const auto rows = static_cast<Eigen::Index>(j.size());
    const auto cols = static_cast<Eigen::Index>(j[0].size());
    RMatrix m(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i) {
        const auto &row = j[static_cast<std::size_t>(i)];
        if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols)
            throw ValidationError(std::string(what) + ": ragged matrix rows");
        for (Eigen::Index k = 0; k < cols; ++k)
            m(i, k) = as_double(row[static_cast<std::size_t>(k)], what);
    }
    return m;
}

CVector cvector_from_json(const json &j, const char *what) {
    if (!j.is_array() || j.empty())
        throw ValidationError(std::string(what) + ": expected a vector");
    CVector v(static_cast<Eigen::Index>(j.size()));
    for (std::size_t i = 0; i < j.size(); ++i)
        v(static_cast<Eigen::Index>(i)) = as_complex(j[i], what);
    return v;
}

json model_to_json(const MeasurementModel &model) {
    json out = json::object();
    out["format"] = "povmsim-model";
    out["version"] = 1;
    out["object_dim"] = model.object_dim();
    out["ancilla_dim"] = model.ancilla_dim();
    json inter = json::object();
    if (const auto &h = model.hamiltonian()) {
        inter["kind"] = "hamiltonian";
        inter["hamiltonian"] = to_json(h->h.matrix());
        inter["time"] = h->time;
    } else {
        inter["kind"] = "unitary";
        inter["unitary"] = to_json(model.unitary().matrix());
    }
    out["interaction"] = std::move(inter);
    out["ancilla_init"] = to_json(model.ancilla_init().matrix());
    out["pointer"] = to_json(model.pointer());
    return out;
}

MeasurementModel model_from_json(const json &j) {
    if (!j.is_object())
        throw ValidationError("model: expected a JSON object");
    if (j.contains("format") && j["format"] != "povmsim-model")
        throw ValidationError("model: unrecognized format tag");
    const int d_o = as_dim(j, "object_dim");
    const int d_a = as_dim(j, "ancilla_dim");
    if (!j.contains("interaction") || !j["interaction"].is_object())
        throw ValidationError("model: missing interaction");
    if (!j.contains("ancilla_init") || !j.contains("pointer"))
        throw ValidationError("model: missing ancilla_init or pointer");
    const json &inter = j["interaction"];
    DensityOperator rho_a(cmatrix_from_json(j["ancilla_init"], "ancilla_init"));
    EffectSet pointer = effects_from_json(j["pointer"], "pointer");
    const std::string kind =
        inter.contains("kind") && inter["kind"].is_string()
            ? inter["kind"].get<std::string>()
            : (inter.contains("unitary") ? "unitary" : "hamiltonian");
    if (kind == "hamiltonian") {
        if (!inter.contains("hamiltonian") || !inter.contains("time"))
            throw ValidationError("model: hamiltonian interaction needs "
                                  "hamiltonian and time");
        return MeasurementModel::from_hamiltonian(
            d_o, d_a, Operator(cmatrix_from_json(inter["hamiltonian"],
                                                 "hamiltonian")),
            as_double(inter["time"], "time"), std::move(rho_a),
            std::move(pointer));
    }
    if (kind == "unitary") {
        if (!inter.contains("unitary"))
            throw ValidationError("model: unitary interaction needs unitary");
        return MeasurementModel::from_unitary(
            d_o, d_a, Operator(cmatrix_from_json(inter["unitary"], "unitary")),
            std::move(rho_a), std::move(pointer));
    }
    throw ValidationError("model: interaction kind must be hamiltonian or "
                          "unitary");
}

json params_to_json(const sg::Params &p) {
    json out = json::object();
    out["variant"] = sg::to_string(p.variant);
    out["a"] = p.a;
    out["b"] = p.b;
    out["mu"] = p.mu;
    out["m"] = p.m;
    out["tau"] = p.tau;
    out["grid_n"] = p.grid_n;
    out["extent"] = p.extent;
    out["packet_width"] = p.packet_width;
    out["steps"] = p.steps;
    out["resolved_steps"] = p.resolved_steps();
    return out;
}

json parse_config(std::string_view text) {
    std::size_t first = text.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos)
        return json::object();
    if (text[first] == '{') {
        json j = json::parse(text.begin(), text.end(), nullptr, false);
        if (j.is_discarded() || !j.is_object())
            throw ValidationError("config: malformed JSON");
        return j;
    }
    json out = json::object();
    std::istringstream in{std::string(text)};
    std::string line;
    int lineno = 0;
    auto trim = [](std::string s) {
        const auto b = s.find_first_not_of(" \t\r");
        if (b == std::string::npos)
            return std::string();
        const auto e = s.find_last_not_of(" \t\r");
        return s.substr(b, e - b + 1);
    };
    while (std::getline(in, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos)
            line.erase(hash);
        line = trim(line);
        if (line.empty())
            continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ValidationError("config line " + std::to_string(lineno) +
                                  ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string val = trim(line.substr(eq + 1));
        if (key.empty())
            throw ValidationError("config line " + std::to_string(lineno) +
                                  ": empty key");
        json v = json::parse(val, nullptr, false);
        out[key] = v.is_discarded() ? json(val) : std::move(v);
    }
    return out;
}

// --- ConfigReader ----------------------------------------------------------------

ConfigReader::ConfigReader(json obj) : obj_(std::move(obj)) {
    if (!obj_.is_object())
        throw ValidationError("config must be a JSON object");
}

bool ConfigReader::has(const std::string &key) const {
    return obj_.contains(key) && !obj_[key].is_null();
}

const json &ConfigReader::raw(const std::string &key) {
    used_.insert(key);
    if (!obj_.contains(key))
        throw ValidationError("config: missing key '" + key + "'");
    resolved_[key] = obj_[key];
    return obj_[key];
}

double ConfigReader::number(const std::string &key, double fallback) {
    used_.insert(key);
    double out = fallback;
    if (has(key)) {
        const json &v = obj_[key];
        if (!v.is_number())
            throw ValidationError("config: '" + key + "' must be a number");
        out = v.get<double>();
    }
    resolved_[key] = out;
    return out;
}

std::int64_t ConfigReader::integer(const std::string &key,
                                   std::int64_t fallback) {
    used_.insert(key);
    std::int64_t out = fallback;
    if (has(key)) {
        const json &v = obj_[key];
        if (v.is_number_integer()) {
            out = v.get<std::int64_t>();
        } else if (v.is_number_float() && std::floor(v.get<double>()) ==
                                              v.get<double>() &&
                   std::abs(v.get<double>()) < 9.0e15) {
            out = static_cast<std::int64_t>(v.get<double>());
        } else {
            throw ValidationError("config: '" + key + "' must be an integer");
        }
    }
    resolved_[key] = out;
    return out;
}

std::uint64_t ConfigReader::unsigned_integer(const std::string &key,
                                             std::uint64_t fallback) {
    used_.insert(key);
    std::uint64_t out = fallback;
    if (has(key)) {
        const json &v = obj_[key];
        bool ok = false;
        if (v.is_number_unsigned()) {
            out = v.get<std::uint64_t>();
            ok = true;
        } else if (v.is_string()) {
            const std::string s = v.get<std::string>();
            const auto res = std::from_chars(s.data(), s.data() + s.size(), out);
            ok = res.ec == std::errc() && res.ptr == s.data() + s.size() &&
                 !s.empty();
        } else if (v.is_number_float() && v.get<double>() >= 0.0 &&
                   std::floor(v.get<double>()) == v.get<double>() &&
                   v.get<double>() < 9.0e15) {
            out = static_cast<std::uint64_t>(v.get<double>());
            ok = true;
        }
        if (!ok)
            throw ValidationError("config: '" + key +
                                  "' must be a non-negative integer");
    }
    resolved_[key] = out;
    return out;
}

bool ConfigReader::boolean(const std::string &key, bool fallback) {
    used_.insert(key);
    bool out = fallback;
    if (has(key)) {
        const json &v = obj_[key];
        if (!v.is_boolean())
            throw ValidationError("config: '" + key + "' must be true or false");
        out = v.get<bool>();
    }
    resolved_[key] = out;
    return out;
}

std::string ConfigReader::string(const std::string &key,
                                 const std::string &fallback) {
    used_.insert(key);
    std::string out = fallback;
    if (has(key)) {
        const json &v = obj_[key];
        if (!v.is_string())
            throw ValidationError("config: '" + key + "' must be a string");
        out = v.get<std::string>();
    }
    resolved_[key] = out;
    return out;
}

void ConfigReader::reject_unknown() const {
    for (const auto &[key, value] : obj_.items())
        if (!used_.count(key))
            throw ValidationError("config: unknown key '" + key + "'");
}

sg::Params params_from_config(ConfigReader &cfg,
                              const std::string &default_variant) {
    sg::Params p = sg::Params::defaults(
        sg::variant_from_string(cfg.string("variant", default_variant)));
    p.a = cfg.number("a", p.a);
    p.b = cfg.number("b", p.b);
    p.mu = cfg.number("mu", p.mu);
    p.m = cfg.number("m", p.m);
    p.tau = cfg.number("tau", p.tau);
    p.grid_n = static_cast<int>(cfg.integer("grid_n", p.grid_n));
    p.extent = cfg.number("extent", p.extent);
    p.packet_width = cfg.number("packet_width", p.packet_width);
    p.steps = static_cast<int>(cfg.integer("steps", p.steps));
    if (cfg.has("resolved_steps"))
        cfg.raw("resolved_steps"); // echoed by reports; ignored on input
    p.validate();
    cfg.note("resolved_steps", p.resolved_steps());
    return p;
}

} // namespace detail

std::string model_to_json(const MeasurementModel &model) {
    return detail::model_to_json(model).dump(2);
}

MeasurementModel model_from_json(std::string_view text) {
    auto j = detail::json::parse(text.begin(), text.end(), nullptr, false);
    if (j.is_discarded())
        throw ValidationError("model: malformed JSON");
    return detail::model_from_json(j);
}

std::string config_to_json(std::string_view text) {
    return detail::parse_config(text).dump();
}

sg::Params sg_params_from_text(std::string_view text) {
    detail::ConfigReader cfg(detail::parse_config(text));
    sg::Params p = detail::params_from_config(cfg);
    cfg.reject_unknown();
    return p;
}

std::string sg_params_to_json(const sg::Params &params) {
    return detail::params_to_json(params).dump(2);
}

std::string sha256_hex(std::string_view data) {
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr) != 1)
        throw Error(ErrorKind::Io, "SHA-256 digest failed");
    static constexpr char hex[] = "0123456789abcdef";
    std::string out;
    out.reserve(2 * len);
    for (unsigned i = 0; i < len; ++i) {
        out.push_back(hex[md[i] >> 4]);
        out.push_back(hex[md[i] & 15]);
    }
    return out;
}

} // namespace povmsim
