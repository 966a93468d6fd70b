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

#include "povmsim/operator_core.hpp"

namespace povmsim {

/// Left-stochastic matrix: entries >= 0, every column sums to one. Rows need
/// not sum to one and the matrix need not be square.
class StochasticMatrix {
  public:
    explicit StochasticMatrix(RMatrix m,
                              const Tolerances &tol = kDefaultTolerances);

    static StochasticMatrix identity(int n);
    /// Every entry 1/rows.
    static StochasticMatrix uniform(int rows, int cols);
    /// Random column-stochastic matrix (columns drawn from a flat Dirichlet).
    static StochasticMatrix random(Xoshiro256 &rng, int rows, int cols);

    [[nodiscard]] int rows() const noexcept { return static_cast<int>(m_.rows()); }
    [[nodiscard]] int cols() const noexcept { return static_cast<int>(m_.cols()); }
    [[nodiscard]] double operator()(int k, int kp) const { return m_(k, kp); }
    [[nodiscard]] const RMatrix &matrix() const noexcept { return m_; }

    /// Rows reordered so that the largest entry of column j lands in row j
    /// where possible. Reporting only; J is invariant under row permutation.
    [[nodiscard]] StochasticMatrix canonicalized() const;

  private:
    RMatrix m_;
};

struct NonidealityFit {
    StochasticMatrix lambda;
    /// max_k || M_k - sum_k' lambda_kk' E_k' ||_2; zero iff every effect is
    /// diagonal in the PVM eigenbasis.
    double residual;
};

/// lambda_kk' = Tr(M_k E_k') / Tr(E_k') (the trace of a rank-one E_k' is 1).
NonidealityFit nonideality_matrix(const EffectSet &effects,
                                  const ProjectiveMeasure &pvm);

/// Average row entropy
///   J = -(1/N) sum_k sum_k' lambda_kk' ln(lambda_kk' / sum_k'' lambda_kk''),
/// with 0 ln 0 = 0 and roundoff-negative entries clipped to zero.
double row_entropy(const StochasticMatrix &lambda);

/// -sum_k r_k ln r_k over the eigenvalues of rho (natural log).
double von_neumann_entropy(const DensityOperator &rho);

struct UncertaintyReport {
    double j_lambda = 0.0;
    std::optional<double> j_mu;
    double h_vn = 0.0;
    double delta = 0.0; // h_vn + j_lambda (+ j_mu)
    double bound = 0.0; // j_lambda (+ j_mu)
    bool satisfied = false;
    double slack = 0.0; // delta - bound
};

/// Total uncertainty Delta = H_vN(rho) + J(lambda), checked against J(lambda).
UncertaintyReport total_uncertainty(const DensityOperator &rho,
                                    const StochasticMatrix &lambda);
/// Joint form: Delta = H_vN(rho) + J(lambda) + J(mu) >= J(lambda) + J(mu).
UncertaintyReport total_uncertainty(const DensityOperator &rho,
                                    const StochasticMatrix &lambda,
                                    const StochasticMatrix &mu);

/// -ln(max_ij Tr E_i F_j)
double martens_bound(const ProjectiveMeasure &e, const ProjectiveMeasure &f);

struct InequalityReport {
    double lhs = 0.0;
    double rhs = 0.0;
    bool satisfied = false;
    double slack = 0.0; // lhs - rhs
};

/// J(lambda) + J(mu) >= -ln(max_ij Tr E_i F_j)
InequalityReport check_martens(const StochasticMatrix &lambda,
                               const StochasticMatrix &mu,
                               const ProjectiveMeasure &e,
                               const ProjectiveMeasure &f);

/// lhs = dA dB, rhs = |<psi|[A,B]|psi>| / 2. Throws ValidationError for
/// non-Hermitian A or B or an unnormalized psi.
InequalityReport robertson_bound(const Operator &a, const Operator &b,
                                 const CVector &psi);

} // namespace povmsim
