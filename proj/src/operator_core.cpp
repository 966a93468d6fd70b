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

#include "povmsim/operator_core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "povmsim/error.hpp"

namespace povmsim {

double Xoshiro256::normal() noexcept {
    // 1 - u keeps the argument of log away from zero.
    const double u1 = 1.0 - uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * std::numbers::pi * u2);
}

namespace {

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(3);
    os << std::scientific << v;
    return os.str();
}

void require_square_finite(const CMatrix &m) {
    if (m.rows() == 0 || m.rows() != m.cols())
        throw ValidationError("operator must be a non-empty square matrix");
    if (!m.allFinite())
        throw ValidationError("operator has non-finite entries");
}

void require_labels(std::size_t count, std::vector<std::string> &labels) {
    if (labels.empty()) {
        labels.reserve(count);
        for (std::size_t i = 0; i < count; ++i)
            labels.push_back(std::to_string(i));
    }
    if (labels.size() != count)
        throw ValidationError("label count does not match outcome count");
}

} // namespace

// --- Operator ----------------------------------------------------------------

Operator::Operator(CMatrix m) : m_(std::move(m)) { require_square_finite(m_); }

Operator Operator::identity(int dim) {
    return Operator(CMatrix::Identity(dim, dim));
}

Operator Operator::zero(int dim) { return Operator(CMatrix::Zero(dim, dim)); }

Operator Operator::projector(const CVector &psi) {
    return Operator(psi * psi.adjoint());
}

Operator Operator::adjoint() const { return Operator(m_.adjoint()); }

bool Operator::is_hermitian(double tol) const {
    return max_abs_diff(m_, m_.adjoint()) <= tol;
}

RVector Operator::hermitian_eigenvalues() const {
    const CMatrix herm = 0.5 * (m_ + m_.adjoint());
    Eigen::SelfAdjointEigenSolver<CMatrix> es(herm, Eigen::EigenvaluesOnly);
    return es.eigenvalues();
}

Operator operator+(const Operator &a, const Operator &b) {
    return Operator(a.m_ + b.m_);
}
Operator operator-(const Operator &a, const Operator &b) {
    return Operator(a.m_ - b.m_);
}
Operator operator*(const Operator &a, const Operator &b) {
    return Operator(a.m_ * b.m_);
}
Operator operator*(cplx s, const Operator &a) { return Operator(s * a.m_); }

double max_abs_diff(const CMatrix &a, const CMatrix &b) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw ValidationError("shape mismatch");
    if (a.size() == 0)
        return 0.0;
    return (a - b).cwiseAbs().maxCoeff();
}

// --- DensityOperator --------------------------------------------------------

void validate_density(const CMatrix &m, const Tolerances &tol) {
    require_square_finite(m);
    const double herm = max_abs_diff(m, m.adjoint());
    if (herm > tol.hermitian)
        throw ValidationError("density operator not Hermitian (deviation " +
                              fmt(herm) + ")");
    const double tr_err = std::abs(m.trace() - cplx(1.0, 0.0));
    if (tr_err > tol.trace)
        throw ValidationError("density operator trace differs from 1 by " +
                              fmt(tr_err));
    Eigen::SelfAdjointEigenSolver<CMatrix> es(0.5 * (m + m.adjoint()),
                                              Eigen::EigenvaluesOnly);
    const double min_ev = es.eigenvalues().minCoeff();
    if (min_ev < -tol.positivity)
        throw ValidationError("density operator not positive (min eigenvalue " +
                              fmt(min_ev) + ")");
}

DensityOperator::DensityOperator(Operator op, const Tolerances &tol)
    : op_(std::move(op)) {
    validate_density(op_.matrix(), tol);
}

DensityOperator DensityOperator::pure(const CVector &psi,
                                      const Tolerances &tol) {
    if (std::abs(psi.norm() - 1.0) > tol.normalization)
        throw ValidationError("state vector is not normalized");
    return DensityOperator(Operator::projector(psi), tol);
}

DensityOperator DensityOperator::maximally_mixed(int dim) {
    return DensityOperator(
        Operator(CMatrix::Identity(dim, dim) / static_cast<double>(dim)));
}

double DensityOperator::purity() const {
    return (matrix() * matrix()).trace().real();
}

// --- ProjectiveMeasure -------------------------------------------------------

ProjectiveMeasure::ProjectiveMeasure(std::vector<Operator> projectors,
                                     std::vector<std::string> labels,
                                     const Tolerances &tol)
    : projectors_(std::move(projectors)), labels_(std::move(labels)) {
    if (projectors_.empty())
        throw ValidationError("projective measure needs at least one element");
    require_labels(projectors_.size(), labels_);
    const int d = projectors_.front().dim();
    CMatrix sum = CMatrix::Zero(d, d);
    for (std::size_t i = 0; i < projectors_.size(); ++i) {
        const CMatrix &p = projectors_[i].matrix();
        if (p.rows() != d)
            throw ValidationError("projectors have different dimensions");
        if (max_abs_diff(p, p.adjoint()) > tol.hermitian)
            throw ValidationError("projector " + labels_[i] +
                                  " is not Hermitian");
        if (max_abs_diff(p * p, p) > tol.idempotence)
            throw ValidationError("projector " + labels_[i] +
                                  " is not idempotent");
        for (std::size_t j = 0; j < i; ++j) {
            const CMatrix prod = p * projectors_[j].matrix();
            if (prod.cwiseAbs().maxCoeff() > tol.idempotence)
                throw ValidationError("projectors " + labels_[j] + " and " +
                                      labels_[i] + " are not orthogonal");
        }
        sum += p;
    }
    if (max_abs_diff(sum, CMatrix::Identity(d, d)) > tol.completeness)
        throw ValidationError("projectors do not sum to the identity");
}

ProjectiveMeasure ProjectiveMeasure::from_basis(const CMatrix &basis,
                                                std::vector<std::string> labels) {
    std::vector<Operator> ps;
    ps.reserve(static_cast<std::size_t>(basis.cols()));
    for (Eigen::Index c = 0; c < basis.cols(); ++c)
        ps.push_back(Operator::projector(basis.col(c)));
    return ProjectiveMeasure(std::move(ps), std::move(labels));
}

// --- EffectSet ---------------------------------------------------------------

EffectSet::EffectSet(std::vector<Operator> effects,
                     std::vector<std::string> labels, const Tolerances &tol)
    : effects_(std::move(effects)), labels_(std::move(labels)) {
    if (effects_.empty())
        throw ValidationError("effect set needs at least one element");
    require_labels(effects_.size(), labels_);
    const int d = effects_.front().dim();
    CMatrix sum = CMatrix::Zero(d, d);
    for (std::size_t i = 0; i < effects_.size(); ++i) {
        const Operator &m = effects_[i];
        if (m.dim() != d)
            throw ValidationError("effects have different dimensions");
        if (!m.is_hermitian(tol.hermitian))
            throw ValidationError("effect " + labels_[i] + " is not Hermitian");
        const double min_ev = m.hermitian_eigenvalues().minCoeff();
        if (min_ev < -tol.positivity)
            throw ValidationError("effect " + labels_[i] +
                                  " is not positive (min eigenvalue " +
                                  fmt(min_ev) + ")");
        sum += m.matrix();
    }
    const double dev = max_abs_diff(sum, CMatrix::Identity(d, d));
    if (dev > tol.completeness)
        throw ValidationError("effects do not sum to the identity (deviation " +
                              fmt(dev) + ")");
}

EffectSet EffectSet::from_pvm(const ProjectiveMeasure &pvm) {
    return EffectSet(pvm.projectors(), pvm.labels());
}

double EffectSet::min_eigenvalue() const {
    double m = std::numeric_limits<double>::infinity();
    for (const auto &e : effects_)
        m = std::min(m, e.hermitian_eigenvalues().minCoeff());
    return m;
}

std::vector<double> EffectSet::probabilities(const DensityOperator &rho) const {
    if (rho.dim() != dim())
        throw ValidationError("state and effect dimensions differ");
    std::vector<double> p;
    p.reserve(effects_.size());
    for (const auto &e : effects_)
        p.push_back((rho.matrix() * e.matrix()).trace().real());
    return p;
}

// --- BivariateEffectSet ------------------------------------------------------

BivariateEffectSet::BivariateEffectSet(std::vector<std::vector<Operator>> grid,
                                       std::vector<std::string> row_labels,
                                       std::vector<std::string> col_labels,
                                       const Tolerances &tol)
    : grid_(std::move(grid)), row_labels_(std::move(row_labels)),
      col_labels_(std::move(col_labels)), tol_(tol) {
    if (grid_.empty() || grid_.front().empty())
        throw ValidationError("bivariate effect set must be non-empty");
    const std::size_t ncols = grid_.front().size();
    for (const auto &row : grid_)
        if (row.size() != ncols)
            throw ValidationError("bivariate effect grid is ragged");
    require_labels(grid_.size(), row_labels_);
    require_labels(ncols, col_labels_);
    const int d = grid_.front().front().dim();
    CMatrix sum = CMatrix::Zero(d, d);
    for (const auto &row : grid_)
        for (const auto &m : row) {
            if (m.dim() != d)
                throw ValidationError("effects have different dimensions");
            if (!m.is_hermitian(tol.hermitian))
                throw ValidationError("bivariate effect is not Hermitian");
            const double min_ev = m.hermitian_eigenvalues().minCoeff();
            if (min_ev < -tol.positivity)
                throw ValidationError(
                    "bivariate effect is not positive (min eigenvalue " +
                    fmt(min_ev) + ")");
            sum += m.matrix();
        }
    if (max_abs_diff(sum, CMatrix::Identity(d, d)) > tol.completeness)
        throw ValidationError("bivariate effects do not sum to the identity");
}

EffectSet BivariateEffectSet::row_marginal() const {
    std::vector<Operator> out;
    for (const auto &row : grid_) {
        CMatrix s = CMatrix::Zero(dim(), dim());
        for (const auto &m : row)
            s += m.matrix();
        out.emplace_back(std::move(s));
    }
    return EffectSet(std::move(out), row_labels_, tol_);
}

EffectSet BivariateEffectSet::col_marginal() const {
    std::vector<Operator> out;
    for (std::size_t l = 0; l < cols(); ++l) {
        CMatrix s = CMatrix::Zero(dim(), dim());
        for (const auto &row : grid_)
            s += row[l].matrix();
        out.emplace_back(std::move(s));
    }
    return EffectSet(std::move(out), col_labels_, tol_);
}

double BivariateEffectSet::min_eigenvalue() const {
    double m = std::numeric_limits<double>::infinity();
    for (const auto &row : grid_)
        for (const auto &e : row)
            m = std::min(m, e.hermitian_eigenvalues().minCoeff());
    return m;
}

// --- algebra -----------------------------------------------------------------

Operator tensor(const Operator &a, const Operator &b) {
    const int da = a.dim();
    const int db = b.dim();
    CMatrix out(da * db, da * db);
    for (int i = 0; i < da; ++i)
        for (int j = 0; j < da; ++j)
            out.block(i * db, j * db, db, db) = a(i, j) * b.matrix();
    return Operator(std::move(out));
}

CVector tensor(const CVector &a, const CVector &b) {
    CVector out(a.size() * b.size());
    for (Eigen::Index i = 0; i < a.size(); ++i)
        out.segment(i * b.size(), b.size()) = a(i) * b;
    return out;
}

CMatrix partial_trace(const CMatrix &joint, int d_o, int d_a, Subsystem keep) {
    if (d_o < 1 || d_a < 1 || joint.rows() != d_o * d_a ||
        joint.cols() != d_o * d_a)
        throw ValidationError("partial trace: dimension mismatch");
    if (keep == Subsystem::Ancilla) {
        CMatrix out = CMatrix::Zero(d_a, d_a);
        for (int i = 0; i < d_o; ++i)
            out += joint.block(i * d_a, i * d_a, d_a, d_a);
        return out;
    }
    CMatrix out(d_o, d_o);
    for (int i = 0; i < d_o; ++i)
        for (int j = 0; j < d_o; ++j)
            out(i, j) = joint.block(i * d_a, j * d_a, d_a, d_a).trace();
    return out;
}

DensityOperator partial_trace(const DensityOperator &rho, int d_o, int d_a,
                              Subsystem keep) {
    return DensityOperator(partial_trace(rho.matrix(), d_o, d_a, keep));
}

Operator unitary_from_hamiltonian(const Operator &h, double t) {
    if (!h.is_hermitian(kDefaultTolerances.hermitian))
        throw ValidationError("Hamiltonian is not Hermitian");
    Eigen::SelfAdjointEigenSolver<CMatrix> es(
        0.5 * (h.matrix() + h.matrix().adjoint()));
    const RVector &w = es.eigenvalues();
    CVector phases(w.size());
    for (Eigen::Index i = 0; i < w.size(); ++i)
        phases(i) = std::exp(cplx(0.0, -w(i) * t));
    const CMatrix &v = es.eigenvectors();
    return Operator(v * phases.asDiagonal() * v.adjoint());
}

DensityOperator conjugate(const DensityOperator &rho, const Operator &u) {
    if (u.dim() != rho.dim())
        throw ValidationError("unitary and state dimensions differ");
    CMatrix out = u.matrix() * rho.matrix() * u.matrix().adjoint();
    // Re-symmetrize; U rho U^dagger is Hermitian up to roundoff.
    out = 0.5 * (out + out.adjoint()).eval();
    return DensityOperator(Operator(std::move(out)));
}

DensityOperator evolve(const DensityOperator &rho, const Operator &h,
                       double t) {
    return conjugate(rho, unitary_from_hamiltonian(h, t));
}

Operator commutator(const Operator &a, const Operator &b) {
    if (a.dim() != b.dim())
        throw ValidationError("commutator: dimension mismatch");
    return Operator(a.matrix() * b.matrix() - b.matrix() * a.matrix());
}

bool is_unitary(const CMatrix &u, double tol) {
    if (u.rows() != u.cols())
        return false;
    return max_abs_diff(u.adjoint() * u, CMatrix::Identity(u.rows(), u.cols())) <=
           tol;
}

CVector SchmidtDecomposition::reconstruct() const {
    if (coefficients.empty())
        return {};
    CVector psi = CVector::Zero(left.front().size() * right.front().size());
    for (std::size_t i = 0; i < coefficients.size(); ++i)
        psi += coefficients[i] * tensor(left[i], right[i]);
    return psi;
}

SchmidtDecomposition schmidt_decompose(const CVector &psi, int d1, int d2) {
    if (d1 < 1 || d2 < 1 || psi.size() != static_cast<Eigen::Index>(d1) * d2)
        throw ValidationError("Schmidt decomposition: dimension mismatch");
    if (std::abs(psi.norm() - 1.0) > kDefaultTolerances.normalization)
        throw ValidationError("Schmidt decomposition: state not normalized");

    CMatrix c(d1, d2);
    for (int i = 0; i < d1; ++i)
        for (int j = 0; j < d2; ++j)
            c(i, j) = psi(i * d2 + j);
    Eigen::JacobiSVD<CMatrix> svd(c, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const RVector &s = svd.singularValues();

    struct Term {
        double c;
        CVector l, r;
    };
    std::vector<Term> terms;
    for (Eigen::Index k = 0; k < s.size(); ++k) {
        if (s(k) < 1e-13)
            continue;
        CVector l = svd.matrixU().col(k);
        CVector r = svd.matrixV().col(k).conjugate();
        // Fix the phase: first significant entry of the left vector real > 0.
        for (Eigen::Index i = 0; i < l.size(); ++i) {
            if (std::abs(l(i)) > 1e-10) {
                const cplx ph = l(i) / std::abs(l(i));
                l /= ph;
                r *= ph;
                break;
            }
        }
        terms.push_back({s(k), std::move(l), std::move(r)});
    }
    auto lex_greater = [](const CVector &a, const CVector &b) {
        for (Eigen::Index i = 0; i < a.size(); ++i) {
            if (std::abs(a(i).real() - b(i).real()) > 1e-12)
                return a(i).real() > b(i).real();
            if (std::abs(a(i).imag() - b(i).imag()) > 1e-12)
                return a(i).imag() > b(i).imag();
        }
        return false;
    };
    std::stable_sort(terms.begin(), terms.end(),
                     [&](const Term &a, const Term &b) {
                         if (std::abs(a.c - b.c) > 1e-12)
                             return a.c > b.c;
                         return lex_greater(a.l, b.l);
                     });
    SchmidtDecomposition out;
    for (auto &t : terms) {
        out.coefficients.push_back(t.c);
        out.left.push_back(std::move(t.l));
        out.right.push_back(std::move(t.r));
    }
    return out;
}

// --- qubit helpers -----------------------------------------------------------

namespace pauli {
Operator x() {
    CMatrix m(2, 2);
    m << 0, 1, 1, 0;
    return Operator(m);
}
Operator y() {
    CMatrix m(2, 2);
    m << 0, cplx(0, -1), cplx(0, 1), 0;
    return Operator(m);
}
Operator z() {
    CMatrix m(2, 2);
    m << 1, 0, 0, -1;
    return Operator(m);
}
Operator along(Axis axis) {
    switch (axis) {
    case Axis::X:
        return x();
    case Axis::Y:
        return y();
    case Axis::Z:
        return z();
    }
    return z();
}
} // namespace pauli

CVector spin_state(Axis axis, bool positive) {
    const double r = 1.0 / std::numbers::sqrt2;
    CVector v(2);
    switch (axis) {
    case Axis::Z:
        v = positive ? CVector::Unit(2, 0) : CVector::Unit(2, 1);
        break;
    case Axis::X:
        v << r, (positive ? r : -r);
        break;
    case Axis::Y:
        v << r, (positive ? cplx(0, r) : cplx(0, -r));
        break;
    }
    return v;
}

ProjectiveMeasure spin_pvm(Axis axis) {
    CMatrix basis(2, 2);
    basis.col(0) = spin_state(axis, true);
    basis.col(1) = spin_state(axis, false);
    return ProjectiveMeasure::from_basis(basis, {"+", "-"});
}

// --- random generation -------------------------------------------------------

namespace {
CMatrix ginibre(Xoshiro256 &rng, int rows, int cols) {
    CMatrix g(rows, cols);
    for (int j = 0; j < cols; ++j)
        for (int i = 0; i < rows; ++i) {
            const double re = rng.normal();
            const double im = rng.normal();
            g(i, j) = cplx(re, im) / std::numbers::sqrt2;
        }
    return g;
}
} // namespace

CVector random_pure_state(Xoshiro256 &rng, int dim) {
    CVector v = ginibre(rng, dim, 1).col(0);
    return v / v.norm();
}

DensityOperator random_density(Xoshiro256 &rng, int dim) {
    const CMatrix g = ginibre(rng, dim, dim);
    CMatrix rho = g * g.adjoint();
    rho /= rho.trace().real();
    rho = 0.5 * (rho + rho.adjoint()).eval();
    return DensityOperator(Operator(std::move(rho)));
}

Operator random_hermitian(Xoshiro256 &rng, int dim) {
    const CMatrix g = ginibre(rng, dim, dim);
    return Operator(0.5 * (g + g.adjoint()));
}

Operator random_unitary(Xoshiro256 &rng, int dim) {
    const CMatrix g = ginibre(rng, dim, dim);
    Eigen::HouseholderQR<CMatrix> qr(g);
    CMatrix q = qr.householderQ();
    const CMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int i = 0; i < dim; ++i) {
        const cplx d = r(i, i);
        q.col(i) *= (std::abs(d) > 0 ? d / std::abs(d) : cplx(1.0, 0.0));
    }
    return Operator(std::move(q));
}

EffectSet random_effect_set(Xoshiro256 &rng, int dim, int outcomes) {
    std::vector<CMatrix> a;
    CMatrix s = CMatrix::Zero(dim, dim);
    for (int k = 0; k < outcomes; ++k) {
        const CMatrix g = ginibre(rng, dim, dim);
        a.push_back(g * g.adjoint());
        s += a.back();
    }
    Eigen::SelfAdjointEigenSolver<CMatrix> es(0.5 * (s + s.adjoint()));
    const CMatrix s_inv_half = es.operatorInverseSqrt();
    std::vector<Operator> effects;
    for (auto &m : a) {
        CMatrix e = s_inv_half * m * s_inv_half;
        e = 0.5 * (e + e.adjoint()).eval();
        effects.emplace_back(std::move(e));
    }
    return EffectSet(std::move(effects), {});
}

} // namespace povmsim
