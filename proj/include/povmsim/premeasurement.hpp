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

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "povmsim/operator_core.hpp"

namespace povmsim {

/// Labelled outcome probabilities. Producers validate; the Wigner recovery
/// path may hand out slightly negative entries on purpose.
struct ProbabilityRecord {
    std::vector<std::string> labels;
    std::vector<double> values;

    [[nodiscard]] std::size_t size() const noexcept { return values.size(); }
    [[nodiscard]] double operator[](std::size_t i) const { return values[i]; }
    [[nodiscard]] double sum() const;
    /// Throws ValidationError on negative entries or a sum away from one.
    void validate(const Tolerances &tol = kDefaultTolerances) const;
};

/// Object (x) ancilla premeasurement: interaction, initial ancilla state and
/// pointer effects on the ancilla space.
class MeasurementModel {
  public:
    struct Hamiltonian {
        Operator h;
        double time;
    };

    static MeasurementModel from_hamiltonian(int object_dim, int ancilla_dim,
                                             Operator h, double time,
                                             DensityOperator ancilla_init,
                                             EffectSet pointer);
    static MeasurementModel from_unitary(int object_dim, int ancilla_dim,
                                         Operator u,
                                         DensityOperator ancilla_init,
                                         EffectSet pointer);

    [[nodiscard]] int object_dim() const noexcept { return d_o_; }
    [[nodiscard]] int ancilla_dim() const noexcept { return d_a_; }
    [[nodiscard]] const Operator &unitary() const noexcept { return u_; }
    [[nodiscard]] const std::optional<Hamiltonian> &hamiltonian() const noexcept {
        return hamiltonian_;
    }
    [[nodiscard]] const DensityOperator &ancilla_init() const noexcept {
        return ancilla_init_;
    }
    [[nodiscard]] const EffectSet &pointer() const noexcept { return pointer_; }

    /// Same Hamiltonian model with a different interaction time.
    [[nodiscard]] MeasurementModel with_time(double time) const;

  private:
    MeasurementModel(int d_o, int d_a, Operator u,
                     std::optional<Hamiltonian> h, DensityOperator ancilla_init,
                     EffectSet pointer);

    int d_o_;
    int d_a_;
    Operator u_;
    std::optional<Hamiltonian> hamiltonian_;
    DensityOperator ancilla_init_;
    EffectSet pointer_;
};

/// rho_oa(T) = U (rho_o (x) rho_a(0)) U^dagger
DensityOperator apply_premeasurement(const MeasurementModel &model,
                                     const DensityOperator &rho_o);

/// p_k = Tr_a(rho_a(T) M_{a,k}), rho_a(T) = Tr_o rho_oa(T)
ProbabilityRecord pointer_probabilities(const MeasurementModel &model,
                                        const DensityOperator &rho_o);

/// U (psi_o (x) psi_a) for a pure initial ancilla state.
CVector joint_pure_state(const MeasurementModel &model, const CVector &psi_o);

// --- detector tomography -------------------------------------------------------

/// d^2 probes: |j><j|, then for j < k the states (|j>+|k>)/sqrt2 and
/// (|j>+i|k>)/sqrt2. For d = 2 this is {z+, z-, x+, y+}.
std::vector<DensityOperator> standard_probe_states(int dim);

struct TomographyResult {
    EffectSet effects;
    double condition_number = 0.0;
    double min_eigenvalue = 0.0;
    /// Smallest eigenvalue fell in [-extracted_effect_negativity,
    /// -probability_negative): negative beyond roundoff, within the gate.
    bool slight_negativity = false;
};

/// Solve Tr(rho_p M_k) = probs[p][k] for every effect M_k by linear inversion
/// over the Hermitian operator basis. Throws NumericalError when the probe
/// system is rank deficient or its condition number exceeds
/// `tol.tomography_condition`.
TomographyResult reconstruct_effects(std::span<const DensityOperator> probes,
                                     const std::vector<std::vector<double>> &probs,
                                     std::vector<std::string> labels,
                                     const Tolerances &tol = kDefaultTolerances);

/// Effective object-side POVM M_{o,k}(T) of a model, by detector tomography.
TomographyResult extract_effective_povm(const MeasurementModel &model);
TomographyResult extract_effective_povm(const MeasurementModel &model,
                                        std::span<const DensityOperator> probes);

struct IdentityReport {
    ProbabilityRecord pointer;  // p_(a)k(T)
    std::vector<double> object; // Tr(rho_o M_(o)k(T))
    double max_deviation = 0.0;
};

IdentityReport check_probability_identity(const MeasurementModel &model,
                                          const EffectSet &effective,
                                          const DensityOperator &rho_o);
IdentityReport check_probability_identity(const MeasurementModel &model,
                                          const DensityOperator &rho_o);

/// max_k |p_k(2T) - p_k(T)| for a Hamiltonian model; pointer statistics are
/// treated as stationary when this drops below 1e-6.
double stationarity_drift(const MeasurementModel &model,
                          const DensityOperator &rho_o);

/// True when every effect is (numerically) a multiple of the identity: the
/// pointer carries no information about the object.
bool is_information_free(const EffectSet &effects, double tol = 1e-9);

// --- stock models ----------------------------------------------------------

/// Qubit object controls a NOT on a qubit ancilla prepared in |0>;
/// computational pointer.
MeasurementModel controlled_flip_model();
/// U = I on C^{d_o} (x) C^{d_a}, ancilla |0><0|, computational pointer.
MeasurementModel identity_model(int object_dim = 2, int ancilla_dim = 2);
/// Haar unitary (or random Hamiltonian with time), random mixed ancilla,
/// random pointer effects.
MeasurementModel random_model(Xoshiro256 &rng, int object_dim, int ancilla_dim,
                              int outcomes, bool hamiltonian = false);

} // namespace povmsim
