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

#include "povmsim/premeasurement.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "povmsim/error.hpp"

namespace povmsim {

double ProbabilityRecord::sum() const {
    double s = 0.0;
    for (double v : values)
        s += v;
    return s;
}

void ProbabilityRecord::validate(const Tolerances &tol) const {
    if (labels.size() != values.size())
        throw ValidationError("probability record: label count mismatch");
    for (double v : values) {
        if (!std::isfinite(v) || v < -tol.probability_negative)
            throw ValidationError("probability record has a negative entry");
    }
    if (std::abs(sum() - 1.0) > tol.probability_sum)
        throw ValidationError("probabilities do not sum to one");
}

// --- MeasurementModel --------------------------------------------------------

MeasurementModel::MeasurementModel(int d_o, int d_a, Operator u,
                                   std::optional<Hamiltonian> h,
                                   DensityOperator ancilla_init,
                                   EffectSet pointer)
    : d_o_(d_o), d_a_(d_a), u_(std::move(u)), hamiltonian_(std::move(h)),
      ancilla_init_(std::move(ancilla_init)), pointer_(std::move(pointer)) {
    if (d_o_ < 1 || d_a_ < 1)
        throw ValidationError("model dimensions must be positive");
    if (u_.dim() != d_o_ * d_a_)
        throw ValidationError("interaction dimension is not d_o * d_a");
    if (!is_unitary(u_.matrix(), kDefaultTolerances.hermitian))
        throw ValidationError("interaction is not unitary");
    if (ancilla_init_.dim() != d_a_)
        throw ValidationError("ancilla state dimension mismatch");
    if (pointer_.dim() != d_a_)
        throw ValidationError("pointer effects do not act on the ancilla");
}

MeasurementModel MeasurementModel::from_hamiltonian(
    int object_dim, int ancilla_dim, Operator h, double time,
    DensityOperator ancilla_init, EffectSet pointer) {
    if (!std::isfinite(time))
        throw ValidationError("interaction time must be finite");
    if (h.dim() != object_dim * ancilla_dim)
        throw ValidationError("Hamiltonian dimension is not d_o * d_a");
    Operator u = unitary_from_hamiltonian(h, time);
    return MeasurementModel(object_dim, ancilla_dim, std::move(u),
                            Hamiltonian{std::move(h), time},
                            std::move(ancilla_init), std::move(pointer));
}

MeasurementModel MeasurementModel::from_unitary(int object_dim, int ancilla_dim,
                                                Operator u,
                                                DensityOperator ancilla_init,
                                                EffectSet pointer) {
    return MeasurementModel(object_dim, ancilla_dim, std::move(u), std::nullopt,
                            std::move(ancilla_init), std::move(pointer));
}

MeasurementModel MeasurementModel::with_time(double time) const {
    if (!hamiltonian_)
        throw ValidationError("interaction time is fixed for unitary models");
    return from_hamiltonian(d_o_, d_a_, hamiltonian_->h, time, ancilla_init_,
                            pointer_);
}

// --- premeasurement ----------------------------------------------------------

DensityOperator apply_premeasurement(const MeasurementModel &model,
                                     const DensityOperator &rho_o) {
    if (rho_o.dim() != model.object_dim())
        throw ValidationError("object state dimension mismatch");
    const DensityOperator joint(tensor(rho_o.op(), model.ancilla_init().op()));
    return conjugate(joint, model.unitary());
}

ProbabilityRecord pointer_probabilities(const MeasurementModel &model,
                                        const DensityOperator &rho_o) {
    const DensityOperator joint = apply_premeasurement(model, rho_o);
    const CMatrix rho_a = partial_trace(joint.matrix(), model.object_dim(),
                                        model.ancilla_dim(), Subsystem::Ancilla);
    ProbabilityRecord rec;
    rec.labels = model.pointer().labels();
    for (const auto &m : model.pointer().effects())
        rec.values.push_back((rho_a * m.matrix()).trace().real());
    return rec;
}

CVector joint_pure_state(const MeasurementModel &model, const CVector &psi_o) {
    if (psi_o.size() != model.object_dim())
        throw ValidationError("object state dimension mismatch");
    if (std::abs(psi_o.norm() - 1.0) > kDefaultTolerances.normalization)
        throw ValidationError("object state is not normalized");
    const DensityOperator &rho_a = model.ancilla_init();
    if (std::abs(rho_a.purity() - 1.0) > 1e-10)
        throw ValidationError("ancilla initial state is not pure");
    Eigen::SelfAdjointEigenSolver<CMatrix> es(rho_a.matrix());
    const CVector psi_a = es.eigenvectors().col(rho_a.dim() - 1);
    return model.unitary().matrix() * tensor(psi_o, psi_a);
}

// --- detector tomography -----------------------------------------------------

std::vector<DensityOperator> standard_probe_states(int dim) {
    if (dim < 1)
        throw ValidationError("probe dimension must be positive");
    std::vector<DensityOperator> probes;
    probes.reserve(static_cast<std::size_t>(dim) * dim);
    for (int j = 0; j < dim; ++j)
        probes.push_back(DensityOperator::pure(CVector::Unit(dim, j)));
    const double r = 1.0 / std::numbers::sqrt2;
    for (int j = 0; j < dim; ++j)
        for (int k = j + 1; k < dim; ++k) {
            CVector plus = CVector::Zero(dim);
            plus(j) = r;
            plus(k) = r;
            probes.push_back(DensityOperator::pure(plus));
            CVector iplus = CVector::Zero(dim);
            iplus(j) = r;
            iplus(k) = cplx(0.0, r);
            probes.push_back(DensityOperator::pure(iplus));
        }
    return probes;
}

namespace {

/// Hermitian basis: E_jj, E_jk + E_kj, i(E_jk - E_kj) for j < k.
std::vector<CMatrix> hermitian_basis(int d) {
    std::vector<CMatrix> basis;
    for (int j = 0; j < d; ++j) {
        CMatrix g = CMatrix::Zero(d, d);
        g(j, j) = 1.0;
        basis.push_back(std::move(g));
    }
    for (int j = 0; j < d; ++j)
        for (int k = j + 1; k < d; ++k) {
            CMatrix g = CMatrix::Zero(d, d);
            g(j, k) = 1.0;
            g(k, j) = 1.0;
            basis.push_back(g);
            g.setZero();
            g(j, k) = cplx(0.0, 1.0);
            g(k, j) = cplx(0.0, -1.0);
            basis.push_back(std::move(g));
        }
    return basis;
}

} // namespace

TomographyResult reconstruct_effects(std::span<const DensityOperator> probes,
                                     const std::vector<std::vector<double>> &probs,
                                     std::vector<std::string> labels,
                                     const Tolerances &tol) {
    if (probes.empty() || probes.size() != probs.size())
        throw ValidationError("tomography: one probability row per probe");
    const int d = probes.front().dim();
    const std::size_t outcomes = probs.front().size();
    for (const auto &row : probs)
        if (row.size() != outcomes)
            throw ValidationError("tomography: ragged probability table");
    const auto basis = hermitian_basis(d);
    const auto nb = static_cast<Eigen::Index>(basis.size());
    const auto np = static_cast<Eigen::Index>(probes.size());
    if (np < nb)
        throw NumericalError("tomography: fewer probes than d^2 unknowns");

    // A(p, b) = Tr(rho_p G_b), real because both factors are Hermitian.
    RMatrix a(np, nb);
    for (Eigen::Index p = 0; p < np; ++p) {
        if (probes[static_cast<std::size_t>(p)].dim() != d)
            throw ValidationError("tomography: probes differ in dimension");
        const CMatrix &rho = probes[static_cast<std::size_t>(p)].matrix();
        for (Eigen::Index b = 0; b < nb; ++b)
            a(p, b) = (rho * basis[static_cast<std::size_t>(b)]).trace().real();
    }
    Eigen::JacobiSVD<RMatrix> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const RVector &sv = svd.singularValues();
    const double cond = sv(sv.size() - 1) > 0.0
                            ? sv(0) / sv(sv.size() - 1)
                            : std::numeric_limits<double>::infinity();
    if (!(cond <= tol.tomography_condition))
        throw NumericalError("tomography: probe basis is ill-conditioned");

    std::vector<Operator> effects;
    effects.reserve(outcomes);
    RVector rhs(np);
    for (std::size_t k = 0; k < outcomes; ++k) {
        for (Eigen::Index p = 0; p < np; ++p)
            rhs(p) = probs[static_cast<std::size_t>(p)][k];
        const RVector x = svd.solve(rhs);
        CMatrix m = CMatrix::Zero(d, d);
        for (Eigen::Index b = 0; b < nb; ++b)
            m += x(b) * basis[static_cast<std::size_t>(b)];
        effects.emplace_back(std::move(m));
    }

    Tolerances relaxed = tol;
    relaxed.positivity = std::max(tol.positivity, tol.extracted_effect_negativity);
    TomographyResult out{EffectSet(std::move(effects), std::move(labels), relaxed),
                         cond, 0.0, false};
    out.min_eigenvalue = out.effects.min_eigenvalue();
    out.slight_negativity = out.min_eigenvalue < -tol.probability_negative;
    return out;
}

TomographyResult extract_effective_povm(const MeasurementModel &model,
                                        std::span<const DensityOperator> probes) {
    std::vector<std::vector<double>> table;
    table.reserve(probes.size());
    for (const auto &rho : probes)
        table.push_back(pointer_probabilities(model, rho).values);
    return reconstruct_effects(probes, table, model.pointer().labels());
}

TomographyResult extract_effective_povm(const MeasurementModel &model) {
    const auto probes = standard_probe_states(model.object_dim());
    return extract_effective_povm(model, probes);
}

IdentityReport check_probability_identity(const MeasurementModel &model,
                                          const EffectSet &effective,
                                          const DensityOperator &rho_o) {
    IdentityReport rep;
    rep.pointer = pointer_probabilities(model, rho_o);
    rep.object = effective.probabilities(rho_o);
    if (rep.object.size() != rep.pointer.size())
        throw ValidationError("effective POVM outcome count mismatch");
    for (std::size_t k = 0; k < rep.object.size(); ++k)
        rep.max_deviation = std::max(
            rep.max_deviation, std::abs(rep.pointer.values[k] - rep.object[k]));
    return rep;
}

IdentityReport check_probability_identity(const MeasurementModel &model,
                                          const DensityOperator &rho_o) {
    const auto povm = extract_effective_povm(model);
    return check_probability_identity(model, povm.effects, rho_o);
}

double stationarity_drift(const MeasurementModel &model,
                          const DensityOperator &rho_o) {
    if (!model.hamiltonian())
        throw ValidationError("stationarity needs a Hamiltonian model");
    const auto p1 = pointer_probabilities(model, rho_o);
    const auto p2 = pointer_probabilities(
        model.with_time(2.0 * model.hamiltonian()->time), rho_o);
    double drift = 0.0;
    for (std::size_t k = 0; k < p1.size(); ++k)
        drift = std::max(drift, std::abs(p1[k] - p2[k]));
    return drift;
}

bool is_information_free(const EffectSet &effects, double tol) {
    const int d = effects.dim();
    for (const auto &m : effects.effects()) {
        const cplx mean = m.trace() / static_cast<double>(d);
        if (max_abs_diff(m.matrix(), mean * CMatrix::Identity(d, d)) > tol)
            return false;
    }
    return true;
}

// --- stock models ------------------------------------------------------------

namespace {
EffectSet computational_pointer(int d) {
    std::vector<Operator> e;
    std::vector<std::string> labels;
    for (int k = 0; k < d; ++k) {
        e.push_back(Operator::projector(CVector::Unit(d, k)));
        labels.push_back(std::to_string(k));
    }
    return EffectSet(std::move(e), std::move(labels));
}
} // namespace

MeasurementModel controlled_flip_model() {
    CMatrix u = CMatrix::Zero(4, 4);
    u(0, 0) = 1.0;
    u(1, 1) = 1.0;
    u(2, 3) = 1.0;
    u(3, 2) = 1.0;
    return MeasurementModel::from_unitary(
        2, 2, Operator(u), DensityOperator::pure(CVector::Unit(2, 0)),
        computational_pointer(2));
}

MeasurementModel identity_model(int object_dim, int ancilla_dim) {
    const int d = object_dim * ancilla_dim;
    return MeasurementModel::from_unitary(
        object_dim, ancilla_dim, Operator::identity(d),
        DensityOperator::pure(CVector::Unit(ancilla_dim, 0)),
        computational_pointer(ancilla_dim));
}

MeasurementModel random_model(Xoshiro256 &rng, int object_dim, int ancilla_dim,
                              int outcomes, bool hamiltonian) {
    const int d = object_dim * ancilla_dim;
    if (hamiltonian) {
        Operator h = random_hermitian(rng, d);
        const double t = 0.5 + 2.0 * rng.uniform();
        DensityOperator rho_a = random_density(rng, ancilla_dim);
        EffectSet pointer = random_effect_set(rng, ancilla_dim, outcomes);
        return MeasurementModel::from_hamiltonian(object_dim, ancilla_dim,
                                                  std::move(h), t,
                                                  std::move(rho_a),
                                                  std::move(pointer));
    }
    Operator u = random_unitary(rng, d);
    DensityOperator rho_a = random_density(rng, ancilla_dim);
    EffectSet pointer = random_effect_set(rng, ancilla_dim, outcomes);
    return MeasurementModel::from_unitary(object_dim, ancilla_dim, std::move(u),
                                          std::move(rho_a), std::move(pointer));
}

} // namespace povmsim
