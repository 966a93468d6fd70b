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

#include "povmsim/c_api.h"

#include <cstring>
#include <new>
#include <string>

#include "povmsim/error.hpp"
#include "povmsim/io.hpp"
#include "povmsim/nonideality.hpp"
#include "povmsim/pipeline.hpp"
#include "povmsim/sampling.hpp"

using namespace povmsim;

struct povm_artifacts {
    std::vector<Artifact> items;
};
struct povm_model {
    MeasurementModel model;
};
struct povm_sg_params {
    sg::Params params;
};

namespace {

thread_local std::string g_last_error;

povm_status fail(povm_status s, const char *msg) {
    g_last_error = msg;
    return s;
}

template <class F> povm_status guarded(F &&f) {
    try {
        g_last_error.clear();
        f();
        return POVM_OK;
    } catch (const Error &e) {
        switch (e.kind()) {
        case ErrorKind::InvalidArgument:
            return fail(POVM_ERR_INVALID_ARGUMENT, e.what());
        case ErrorKind::Validation:
            return fail(POVM_ERR_VALIDATION, e.what());
        case ErrorKind::Numerical:
            return fail(POVM_ERR_NUMERICAL, e.what());
        case ErrorKind::Io:
            return fail(POVM_ERR_IO, e.what());
        }
        return fail(POVM_ERR_INTERNAL, e.what());
    } catch (const std::bad_alloc &) {
        return fail(POVM_ERR_INTERNAL, "out of memory");
    } catch (const std::exception &e) {
        return fail(POVM_ERR_INTERNAL, e.what());
    } catch (...) {
        return fail(POVM_ERR_INTERNAL, "unknown error");
    }
}

void require(bool ok, const char *what) {
    if (!ok)
        throw Error(ErrorKind::InvalidArgument, what);
}

char *dup_string(const std::string &s) {
    char *out = new char[s.size() + 1];
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

CMatrix read_cmatrix(const double *data, int dim) {
    CMatrix m(dim, dim);
    for (int i = 0; i < dim; ++i)
        for (int k = 0; k < dim; ++k) {
            const double *p = data + 2 * (i * dim + k);
            m(i, k) = cplx(p[0], p[1]);
        }
    return m;
}

double &param_ref(sg::Params &p, const std::string &key) {
    if (key == "a")
        return p.a;
    if (key == "b")
        return p.b;
    if (key == "mu")
        return p.mu;
    if (key == "m")
        return p.m;
    if (key == "tau")
        return p.tau;
    if (key == "extent")
        return p.extent;
    if (key == "packet_width")
        return p.packet_width;
    throw ValidationError("unknown Stern-Gerlach parameter '" + key + "'");
}

} // namespace

extern "C" {

const char *povm_version(void) { return POVMSIM_VERSION_STRING; }

const char *povm_last_error(void) { return g_last_error.c_str(); }

void povm_string_free(char *s) { delete[] s; }

povm_status povm_config_parse(const char *text, char **json_out) {
    return guarded([&] {
        require(text && json_out, "null argument");
        *json_out = dup_string(config_to_json(text));
    });
}

povm_status povm_run_command(const char *command, const char *config_json,
                             povm_artifacts **out) {
    return guarded([&] {
        require(command && out, "null argument");
        *out = nullptr;
        auto items = run_command(command, config_json ? config_json : "");
        *out = new povm_artifacts{std::move(items)};
    });
}

size_t povm_artifacts_count(const povm_artifacts *a) {
    return a ? a->items.size() : 0;
}

const char *povm_artifacts_name(const povm_artifacts *a, size_t i) {
    if (!a || i >= a->items.size())
        return nullptr;
    return a->items[i].name.c_str();
}

const char *povm_artifacts_content(const povm_artifacts *a, size_t i,
                                   size_t *length) {
    if (!a || i >= a->items.size())
        return nullptr;
    if (length)
        *length = a->items[i].content.size();
    return a->items[i].content.c_str();
}

void povm_artifacts_free(povm_artifacts *a) { delete a; }

povm_status povm_model_builtin(const char *name, povm_model **out) {
    return guarded([&] {
        require(name && out, "null argument");
        const std::string n(name);
        if (n == "controlled_flip")
            *out = new povm_model{controlled_flip_model()};
        else if (n == "identity")
            *out = new povm_model{identity_model()};
        else
            throw ValidationError("unknown built-in model '" + n + "'");
    });
}

povm_status povm_model_from_json(const char *json, povm_model **out) {
    return guarded([&] {
        require(json && out, "null argument");
        *out = new povm_model{model_from_json(json)};
    });
}

povm_status povm_model_to_json(const povm_model *m, char **json_out) {
    return guarded([&] {
        require(m && json_out, "null argument");
        *json_out = dup_string(model_to_json(m->model));
    });
}

povm_status povm_model_dims(const povm_model *m, int *object_dim,
                            int *ancilla_dim, int *outcomes) {
    return guarded([&] {
        require(m, "null model");
        if (object_dim)
            *object_dim = m->model.object_dim();
        if (ancilla_dim)
            *ancilla_dim = m->model.ancilla_dim();
        if (outcomes)
            *outcomes = static_cast<int>(m->model.pointer().size());
    });
}

povm_status povm_model_pointer_probabilities(const povm_model *m,
                                             const double *rho, double *probs) {
    return guarded([&] {
        require(m && rho && probs, "null argument");
        const DensityOperator r(read_cmatrix(rho, m->model.object_dim()));
        const ProbabilityRecord p = pointer_probabilities(m->model, r);
        for (std::size_t k = 0; k < p.size(); ++k)
            probs[k] = p[k];
    });
}

povm_status povm_model_effective_povm(const povm_model *m, double *effects) {
    return guarded([&] {
        require(m && effects, "null argument");
        const TomographyResult t = extract_effective_povm(m->model);
        const int d = m->model.object_dim();
        double *dst = effects;
        for (const auto &e : t.effects.effects())
            for (int i = 0; i < d; ++i)
                for (int k = 0; k < d; ++k) {
                    *dst++ = e.matrix()(i, k).real();
                    *dst++ = e.matrix()(i, k).imag();
                }
    });
}

void povm_model_free(povm_model *m) { delete m; }

povm_status povm_sg_params_create(const char *variant, povm_sg_params **out) {
    return guarded([&] {
        require(variant && out, "null argument");
        *out = new povm_sg_params{
            sg::Params::defaults(sg::variant_from_string(variant))};
    });
}

povm_status povm_sg_params_set(povm_sg_params *p, const char *key,
                               double value) {
    return guarded([&] {
        require(p && key, "null argument");
        const std::string k(key);
        if (k == "grid_n" || k == "steps") {
            if (value != static_cast<double>(static_cast<int>(value)))
                throw ValidationError(k + " must be an integer");
            (k == "grid_n" ? p->params.grid_n : p->params.steps) =
                static_cast<int>(value);
            return;
        }
        param_ref(p->params, k) = value;
    });
}

povm_status povm_sg_params_get(const povm_sg_params *p, const char *key,
                               double *value) {
    return guarded([&] {
        require(p && key && value, "null argument");
        const std::string k(key);
        if (k == "grid_n") {
            *value = p->params.grid_n;
            return;
        }
        if (k == "steps") {
            *value = p->params.steps;
            return;
        }
        sg::Params copy = p->params;
        *value = param_ref(copy, k);
    });
}

povm_status povm_sg_params_to_json(const povm_sg_params *p, char **json_out) {
    return guarded([&] {
        require(p && json_out, "null argument");
        p->params.validate();
        *json_out = dup_string(sg_params_to_json(p->params));
    });
}

povm_status povm_sg_run(const povm_sg_params *p, const double *spin,
                        double *probs, size_t capacity, size_t *count) {
    return guarded([&] {
        require(p && spin && probs && count, "null argument");
        CVector s(2);
        s << cplx(spin[0], spin[1]), cplx(spin[2], spin[3]);
        const ProbabilityRecord r = sg::run(p->params, s);
        *count = r.size();
        require(capacity >= r.size(), "probability buffer too small");
        for (std::size_t k = 0; k < r.size(); ++k)
            probs[k] = r[k];
    });
}

void povm_sg_params_free(povm_sg_params *p) { delete p; }

povm_status povm_row_entropy(const double *lambda, int rows, int cols,
                             double *out) {
    return guarded([&] {
        require(lambda && out && rows > 0 && cols > 0, "invalid argument");
        RMatrix m(rows, cols);
        for (int i = 0; i < rows; ++i)
            for (int k = 0; k < cols; ++k)
                m(i, k) = lambda[i * cols + k];
        *out = row_entropy(StochasticMatrix(std::move(m)));
    });
}

povm_status povm_von_neumann_entropy(const double *rho, int dim, double *out) {
    return guarded([&] {
        require(rho && out && dim > 0, "invalid argument");
        *out = von_neumann_entropy(DensityOperator(read_cmatrix(rho, dim)));
    });
}

povm_status povm_robertson(const double *a, const double *b, const double *psi,
                           int dim, double *lhs, double *rhs) {
    return guarded([&] {
        require(a && b && psi && lhs && rhs && dim > 0, "invalid argument");
        CVector v(dim);
        for (int i = 0; i < dim; ++i)
            v(i) = cplx(psi[2 * i], psi[2 * i + 1]);
        const InequalityReport r = robertson_bound(
            Operator(read_cmatrix(a, dim)), Operator(read_cmatrix(b, dim)), v);
        *lhs = r.lhs;
        *rhs = r.rhs;
    });
}

povm_status povm_sample(const double *probs, size_t outcomes, uint64_t n,
                        uint64_t seed, uint64_t *counts) {
    return guarded([&] {
        require(probs && counts && outcomes > 0, "invalid argument");
        ProbabilityRecord rec;
        rec.values.assign(probs, probs + outcomes);
        for (size_t k = 0; k < outcomes; ++k)
            rec.labels.push_back(std::to_string(k));
        const SampleCounts c = sample_outcomes(rec, n, seed);
        for (size_t k = 0; k < outcomes; ++k)
            counts[k] = c.counts[k];
    });
}

} // extern "C"
