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
#include <utility>
#include <vector>

#include "povmsim/nonideality.hpp"
#include "povmsim/premeasurement.hpp"

namespace povmsim {

/// Inverse of a square nonideality matrix. Throws ValidationError for a
/// non-square matrix and NumericalError when the 2-norm condition number
/// exceeds `tol.inversion_condition` (the inverse need not exist).
RMatrix invert_stochastic(const StochasticMatrix &lambda,
                          const Tolerances &tol = kDefaultTolerances);

/// Bivariate operator-valued measure W_{k'l'}: Hermitian elements summing to
/// the identity. Elements may have negative eigenvalues.
class WignerMeasure {
  public:
    explicit WignerMeasure(std::vector<std::vector<Operator>> grid);

    [[nodiscard]] std::size_t rows() const noexcept { return grid_.size(); }
    [[nodiscard]] std::size_t cols() const noexcept {
        return grid_.front().size();
    }
    [[nodiscard]] const Operator &operator()(std::size_t k,
                                             std::size_t l) const {
        return grid_[k][l];
    }
    /// sum_{l'} W_{k'l'} for every k'
    [[nodiscard]] std::vector<Operator> row_sums() const;
    /// sum_{k'} W_{k'l'} for every l'
    [[nodiscard]] std::vector<Operator> col_sums() const;
    [[nodiscard]] double min_eigenvalue() const;
    /// Tr(rho W_{k'l'}) as a rows x cols table.
    [[nodiscard]] RMatrix expectations(const DensityOperator &rho) const;

  private:
    std::vector<std::vector<Operator>> grid_;
};

/// W_{k'l'} = sum_{kl} inv(lambda)_{k'k} inv(mu)_{l'l} M_{kl}
WignerMeasure wigner_measure(const BivariateEffectSet &joint,
                             const StochasticMatrix &lambda,
                             const StochasticMatrix &mu);

/// Univariate form W_{k'} = sum_k inv(lambda)_{k'k} M_k.
std::vector<Operator> wigner_measure(const EffectSet &effects,
                                     const StochasticMatrix &lambda);

struct MarginalResiduals {
    double e = 0.0; // max_k' |sum_l' W_k'l' - E_k'|
    double f = 0.0; // max_l' |sum_k' W_k'l' - F_l'|
};

MarginalResiduals wigner_marginal_residuals(const WignerMeasure &w,
                                            const ProjectiveMeasure &e,
                                            const ProjectiveMeasure &f);

struct IdealProbabilities {
    ProbabilityRecord e; // Tr(rho E_k')
    ProbabilityRecord f; // Tr(rho F_l')
    /// Some entry came out negative (sampling noise); values are not clipped.
    bool negative = false;
};

/// p_E(k') = sum_k inv(lambda)_{k'k} sum_l p_kl, likewise for F.
IdealProbabilities reconstruct_ideal_probs(const RMatrix &joint,
                                           const StochasticMatrix &lambda,
                                           const StochasticMatrix &mu,
                                           std::vector<std::string> e_labels = {},
                                           std::vector<std::string> f_labels = {});

struct QuorumResult {
    DensityOperator rho;      // nearest valid density operator
    CMatrix raw;              // least-squares solution (Hermitian, trace 1)
    double residual = 0.0;    // max_i |Tr(raw E_i) - p_i|
    double projection_distance = 0.0; // ||rho - raw||_F
    int rank = 0;
};

/// Linear least-squares state reconstruction from PVM statistics. Throws
/// NumericalError when the projectors do not span the traceless Hermitian
/// operators.
QuorumResult quorum_reconstruct(
    const std::vector<std::pair<ProjectiveMeasure, ProbabilityRecord>> &data);

/// Qubit joint nonideal measurement
///   M_kl = p_k q_l (I + g1 s_k n_E.sigma + g2 t_l n_F.sigma),
/// with sum_k p_k s_k = sum_l q_l t_l = 0 and g1 + g2 <= 1, so every M_kl is
/// positive and the marginals are lambda/mu mixtures of the eigenprojectors
/// of n_E.sigma and n_F.sigma.
struct JointQubitModel {
    BivariateEffectSet effects;
    ProjectiveMeasure e;
    ProjectiveMeasure f;
    StochasticMatrix lambda;
    StochasticMatrix mu;
};

JointQubitModel random_joint_qubit_model(Xoshiro256 &rng, int rows = 2,
                                         int cols = 2);

struct NegativityWitness {
    JointQubitModel model;
    double min_eigenvalue = 0.0;
    std::size_t row = 0;
    std::size_t col = 0;
    int attempts = 0;
};

/// Randomized search over square joint qubit models for a Wigner element
/// with an eigenvalue below -threshold.
std::optional<NegativityWitness>
find_negativity_witness(Xoshiro256 &rng, int max_attempts = 1000,
                        double threshold = 1e-9);

} // namespace povmsim
