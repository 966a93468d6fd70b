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

#include <complex>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "povmsim/rng.hpp"
#include "povmsim/tolerances.hpp"

namespace povmsim {

using cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RMatrix = Eigen::MatrixXd;
using RVector = Eigen::VectorXd;

/// Square complex matrix with finite entries.
class Operator {
  public:
    Operator() = default;
    explicit Operator(CMatrix m);

    static Operator identity(int dim);
    static Operator zero(int dim);
    static Operator projector(const CVector &psi);

    [[nodiscard]] int dim() const noexcept {
        return static_cast<int>(m_.rows());
    }
    [[nodiscard]] const CMatrix &matrix() const noexcept { return m_; }
    [[nodiscard]] cplx operator()(int i, int j) const { return m_(i, j); }

    [[nodiscard]] Operator adjoint() const;
    [[nodiscard]] cplx trace() const { return m_.trace(); }
    [[nodiscard]] bool is_hermitian(double tol) const;
    /// Eigenvalues of the Hermitian part, ascending.
    [[nodiscard]] RVector hermitian_eigenvalues() const;

    friend Operator operator+(const Operator &a, const Operator &b);
    friend Operator operator-(const Operator &a, const Operator &b);
    friend Operator operator*(const Operator &a, const Operator &b);
    friend Operator operator*(cplx s, const Operator &a);

  private:
    CMatrix m_;
};

/// max_ij |a_ij - b_ij|
double max_abs_diff(const CMatrix &a, const CMatrix &b);

/// Trace-one, Hermitian, positive semidefinite operator.
class DensityOperator {
  public:
    explicit DensityOperator(Operator op,
                             const Tolerances &tol = kDefaultTolerances);
    explicit DensityOperator(const CMatrix &m,
                             const Tolerances &tol = kDefaultTolerances)
        : DensityOperator(Operator(m), tol) {}

    static DensityOperator pure(const CVector &psi,
                                const Tolerances &tol = kDefaultTolerances);
    static DensityOperator maximally_mixed(int dim);

    [[nodiscard]] int dim() const noexcept { return op_.dim(); }
    [[nodiscard]] const Operator &op() const noexcept { return op_; }
    [[nodiscard]] const CMatrix &matrix() const noexcept {
        return op_.matrix();
    }
    [[nodiscard]] RVector eigenvalues() const {
        return op_.hermitian_eigenvalues();
    }
    [[nodiscard]] double purity() const;

  private:
    Operator op_;
};

/// Throws ValidationError unless `m` is a valid density matrix.
void validate_density(const CMatrix &m,
                      const Tolerances &tol = kDefaultTolerances);

class ProjectiveMeasure {
  public:
    ProjectiveMeasure(std::vector<Operator> projectors,
                      std::vector<std::string> labels,
                      const Tolerances &tol = kDefaultTolerances);

    /// Rank-one projectors onto the columns of an orthonormal basis.
    static ProjectiveMeasure from_basis(const CMatrix &basis,
                                        std::vector<std::string> labels);

    [[nodiscard]] std::size_t size() const noexcept {
        return projectors_.size();
    }
    [[nodiscard]] int dim() const { return projectors_.front().dim(); }
    [[nodiscard]] const Operator &operator[](std::size_t i) const {
        return projectors_[i];
    }
    [[nodiscard]] const std::vector<Operator> &projectors() const noexcept {
        return projectors_;
    }
    [[nodiscard]] const std::vector<std::string> &labels() const noexcept {
        return labels_;
    }

  private:
    std::vector<Operator> projectors_;
    std::vector<std::string> labels_;
};

/// Generating set {M_k} of a POVM: positive effects summing to the identity.
class EffectSet {
  public:
    EffectSet(std::vector<Operator> effects, std::vector<std::string> labels,
              const Tolerances &tol = kDefaultTolerances);

    static EffectSet from_pvm(const ProjectiveMeasure &pvm);

    [[nodiscard]] std::size_t size() const noexcept { return effects_.size(); }
    [[nodiscard]] int dim() const { return effects_.front().dim(); }
    [[nodiscard]] const Operator &operator[](std::size_t i) const {
        return effects_[i];
    }
    [[nodiscard]] const std::vector<Operator> &effects() const noexcept {
        return effects_;
    }
    [[nodiscard]] const std::vector<std::string> &labels() const noexcept {
        return labels_;
    }
    /// Smallest eigenvalue over all effects.
    [[nodiscard]] double min_eigenvalue() const;
    /// Tr(rho M_k) for every k.
    [[nodiscard]] std::vector<double>
    probabilities(const DensityOperator &rho) const;

  private:
    std::vector<Operator> effects_;
    std::vector<std::string> labels_;
};

/// Bivariate effect grid M_{kl}, rows k and columns l.
class BivariateEffectSet {
  public:
    BivariateEffectSet(std::vector<std::vector<Operator>> grid,
                       std::vector<std::string> row_labels,
                       std::vector<std::string> col_labels,
                       const Tolerances &tol = kDefaultTolerances);

    [[nodiscard]] std::size_t rows() const noexcept { return grid_.size(); }
    [[nodiscard]] std::size_t cols() const noexcept {
        return grid_.front().size();
    }
    [[nodiscard]] int dim() const { return grid_.front().front().dim(); }
    [[nodiscard]] const Operator &operator()(std::size_t k,
                                             std::size_t l) const {
        return grid_[k][l];
    }
    [[nodiscard]] const std::vector<std::string> &row_labels() const noexcept {
        return row_labels_;
    }
    [[nodiscard]] const std::vector<std::string> &col_labels() const noexcept {
        return col_labels_;
    }
    /// {sum_l M_kl}_k
    [[nodiscard]] EffectSet row_marginal() const;
    /// {sum_k M_kl}_l
    [[nodiscard]] EffectSet col_marginal() const;
    [[nodiscard]] double min_eigenvalue() const;

  private:
    std::vector<std::vector<Operator>> grid_;
    std::vector<std::string> row_labels_;
    std::vector<std::string> col_labels_;
    Tolerances tol_;
};

struct SchmidtDecomposition {
    std::vector<double> coefficients; // descending
    std::vector<CVector> left;        // subsystem 1
    std::vector<CVector> right;       // subsystem 2

    /// sum_i c_i |left_i> (x) |right_i>
    [[nodiscard]] CVector reconstruct() const;
};

enum class Subsystem { Object, Ancilla };

// --- algebra ---------------------------------------------------------------

/// Kronecker product, `a` is the first (object) factor.
Operator tensor(const Operator &a, const Operator &b);
CVector tensor(const CVector &a, const CVector &b);

/// Partial trace of a joint operator on C^{d_o} (x) C^{d_a}.
CMatrix partial_trace(const CMatrix &joint, int d_o, int d_a, Subsystem keep);
DensityOperator partial_trace(const DensityOperator &rho, int d_o, int d_a,
                              Subsystem keep);

/// exp(-i H t) for Hermitian H (hbar = 1).
Operator unitary_from_hamiltonian(const Operator &h, double t);
DensityOperator evolve(const DensityOperator &rho, const Operator &h,
                       double t);
/// U rho U^dagger for an already-built unitary.
DensityOperator conjugate(const DensityOperator &rho, const Operator &u);

Operator commutator(const Operator &a, const Operator &b);

/// Schmidt form of a normalized vector on C^{d1} (x) C^{d2}.
SchmidtDecomposition schmidt_decompose(const CVector &psi, int d1, int d2);

bool is_unitary(const CMatrix &u, double tol);

// --- qubit helpers ---------------------------------------------------------

enum class Axis { X, Y, Z };

namespace pauli {
Operator x();
Operator y();
Operator z();
Operator along(Axis axis);
} // namespace pauli

/// Eigenvector of sigma_axis with eigenvalue +1 (`positive`) or -1.
CVector spin_state(Axis axis, bool positive);
/// {E_+, E_-} for sigma_axis, labels "+" and "-".
ProjectiveMeasure spin_pvm(Axis axis);

// --- random generation (test fixtures, randomized searches) ---------------

CVector random_pure_state(Xoshiro256 &rng, int dim);
/// Ginibre-induced mixed state of full rank.
DensityOperator random_density(Xoshiro256 &rng, int dim);
Operator random_hermitian(Xoshiro256 &rng, int dim);
/// Haar-distributed unitary (QR of a Ginibre matrix with phase fix).
Operator random_unitary(Xoshiro256 &rng, int dim);
/// Random effect set with `outcomes` elements: M_k = S^{-1/2} A_k S^{-1/2}.
EffectSet random_effect_set(Xoshiro256 &rng, int dim, int outcomes);

} // namespace povmsim
