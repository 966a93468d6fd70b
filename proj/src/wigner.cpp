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

#include "povmsim/wigner.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "povmsim/error.hpp"

namespace povmsim {

RMatrix invert_stochastic(const StochasticMatrix &lambda, const Tolerances &tol) {
    if (lambda.rows() != lambda.cols())
        throw ValidationError("inverse of a non-square nonideality matrix is "
                              "not supported");
    const RMatrix &m = lambda.matrix();
    Eigen::JacobiSVD<RMatrix> svd(m);
    const RVector &sv = svd.singularValues();
    const double smin = sv(sv.size() - 1);
    const double cond = smin > 0.0 ? sv(0) / smin
                                   : std::numeric_limits<double>::infinity();
    if (!(cond <= tol.inversion_condition))
        throw NumericalError("nonideality matrix is singular (condition number "
                             "above the inversion gate)");
    return Eigen::FullPivLU<RMatrix>(m).inverse();
}

// --- WignerMeasure -----------------------------------------------------------

WignerMeasure::WignerMeasure(std::vector<std::vector<Operator>> grid)
    : grid_(std::move(grid)) {
    if (grid_.empty() || grid_.front().empty())
        throw ValidationError("Wigner measure must be non-empty");
    const int d = grid_.front().front().dim();
    CMatrix sum = CMatrix::Zero(d, d);
    for (const auto &row : grid_) {
        if (row.size() != grid_.front().size())
            throw ValidationError("Wigner measure grid is ragged");
        for (const auto &w : row) {
            if (!w.is_hermitian(kDefaultTolerances.hermitian))
                throw ValidationError("Wigner element is not Hermitian");
            sum += w.matrix();
        }
    }
    if (max_abs_diff(sum, CMatrix::Identity(d, d)) > 1e-9)
        throw ValidationError("Wigner elements do not sum to the identity");
}

std::vector<Operator> WignerMeasure::row_sums() const {
    std::vector<Operator> out;
    for (const auto &row : grid_) {
        CMatrix s = CMatrix::Zero(row.front().dim(), row.front().dim());
        for (const auto &w : row)
            s += w.matrix();
        out.emplace_back(std::move(s));
    }
    return out;
}

std::vector<Operator> WignerMeasure::col_sums() const {
    std::vector<Operator> out;
    const int d = grid_.front().front().dim();
    for (std::size_t l = 0; l < cols(); ++l) {
        CMatrix s = CMatrix::Zero(d, d);
        for (const auto &row : grid_)
            s += row[l].matrix();
        out.emplace_back(std::move(s));
    }
    return out;
}

double WignerMeasure::min_eigenvalue() const {
    double m = std::numeric_limits<double>::infinity();
    for (const auto &row : grid_)
        for (const auto &w : row)
            m = std::min(m, w.hermitian_eigenvalues().minCoeff());
    return m;
}

RMatrix WignerMeasure::expectations(const DensityOperator &rho) const {
    RMatrix out(static_cast<Eigen::Index>(rows()),
                static_cast<Eigen::Index>(cols()));
    for (std::size_t k = 0; k < rows(); ++k)
        for (std::size_t l = 0; l < cols(); ++l)
            out(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(l)) =
                (rho.matrix() * grid_[k][l].matrix()).trace().real();
    return out;
}

WignerMeasure wigner_measure(const BivariateEffectSet &joint,
                             const StochasticMatrix &lambda,
                             const StochasticMatrix &mu) {
    if (static_cast<std::size_t>(lambda.rows()) != joint.rows() ||
        static_cast<std::size_t>(mu.rows()) != joint.cols())
        throw ValidationError("nonideality matrices do not match the joint "
                              "outcome grid");
    const RMatrix li = invert_stochastic(lambda);
    const RMatrix mi = invert_stochastic(mu);
    const int d = joint.dim();
    std::vector<std::vector<Operator>> grid(static_cast<std::size_t>(li.rows()));
    for (Eigen::Index kp = 0; kp < li.rows(); ++kp)
        for (Eigen::Index lp = 0; lp < mi.rows(); ++lp) {
            CMatrix w = CMatrix::Zero(d, d);
            for (std::size_t k = 0; k < joint.rows(); ++k)
                for (std::size_t l = 0; l < joint.cols(); ++l)
                    w += li(kp, static_cast<Eigen::Index>(k)) *
                         mi(lp, static_cast<Eigen::Index>(l)) *
                         joint(k, l).matrix();
            grid[static_cast<std::size_t>(kp)].emplace_back(std::move(w));
        }
    return WignerMeasure(std::move(grid));
}

std::vector<Operator> wigner_measure(const EffectSet &effects,
                                     const StochasticMatrix &lambda) {
    if (static_cast<std::size_t>(lambda.rows()) != effects.size())
        throw ValidationError("nonideality matrix does not match the effects");
    const RMatrix li = invert_stochastic(lambda);
    std::vector<Operator> out;
    for (Eigen::Index kp = 0; kp < li.rows(); ++kp) {
        CMatrix w = CMatrix::Zero(effects.dim(), effects.dim());
        for (std::size_t k = 0; k < effects.size(); ++k)
            w += li(kp, static_cast<Eigen::Index>(k)) * effects[k].matrix();
        out.emplace_back(std::move(w));
    }
    return out;
}

MarginalResiduals wigner_marginal_residuals(const WignerMeasure &w,
                                            const ProjectiveMeasure &e,
                                            const ProjectiveMeasure &f) {
    if (w.rows() != e.size() || w.cols() != f.size())
        throw ValidationError("PVM sizes do not match the Wigner grid");
    MarginalResiduals r;
    const auto rs = w.row_sums();
    const auto cs = w.col_sums();
    for (std::size_t k = 0; k < rs.size(); ++k)
        r.e = std::max(r.e, max_abs_diff(rs[k].matrix(), e[k].matrix()));
    for (std::size_t l = 0; l < cs.size(); ++l)
        r.f = std::max(r.f, max_abs_diff(cs[l].matrix(), f[l].matrix()));
    return r;
}

IdealProbabilities reconstruct_ideal_probs(const RMatrix &joint,
                                           const StochasticMatrix &lambda,
                                           const StochasticMatrix &mu,
                                           std::vector<std::string> e_labels,
                                           std::vector<std::string> f_labels) {
    if (joint.rows() != lambda.rows() || joint.cols() != mu.rows())
        throw ValidationError("joint table does not match the nonideality "
                              "matrices");
    if (std::abs(joint.sum() - 1.0) > 1e-9)
        throw ValidationError("joint probabilities do not sum to one");
    const RMatrix li = invert_stochastic(lambda);
    const RMatrix mi = invert_stochastic(mu);
    const RVector pe = li * joint.rowwise().sum();
    const RVector pf = mi * joint.colwise().sum().transpose();
    auto record = [](const RVector &v, std::vector<std::string> labels) {
        ProbabilityRecord rec;
        rec.values.assign(v.data(), v.data() + v.size());
        if (labels.empty())
            for (Eigen::Index i = 0; i < v.size(); ++i)
                labels.push_back(std::to_string(i));
        rec.labels = std::move(labels);
        return rec;
    };
    IdealProbabilities out{record(pe, std::move(e_labels)),
                           record(pf, std::move(f_labels)), false};
    out.negative = pe.minCoeff() < 0.0 || pf.minCoeff() < 0.0;
    return out;
}

// --- quorum reconstruction -------------------------------------------------------

namespace {

/// Generalized Gell-Mann matrices: d^2 - 1 traceless Hermitian generators.
std::vector<CMatrix> gell_mann(int d) {
    std::vector<CMatrix> g;
    for (int j = 0; j < d; ++j)
        for (int k = j + 1; k < d; ++k) {
            CMatrix s = CMatrix::Zero(d, d);
            s(j, k) = 1.0;
            s(k, j) = 1.0;
            g.push_back(s);
            CMatrix a = CMatrix::Zero(d, d);
            a(j, k) = cplx(0.0, -1.0);
            a(k, j) = cplx(0.0, 1.0);
            g.push_back(std::move(a));
        }
    for (int l = 1; l < d; ++l) {
        CMatrix h = CMatrix::Zero(d, d);
        const double c = std::sqrt(2.0 / (l * (l + 1.0)));
        for (int j = 0; j < l; ++j)
            h(j, j) = c;
        h(l, l) = -c * l;
        g.push_back(std::move(h));
    }
    return g;
}

} // namespace

QuorumResult quorum_reconstruct(
    const std::vector<std::pair<ProjectiveMeasure, ProbabilityRecord>> &data) {
    if (data.empty())
        throw ValidationError("quorum needs at least one measurement");
    const int d = data.front().first.dim();
    std::vector<const Operator *> ops;
    std::vector<double> probs;
    for (const auto &[pvm, rec] : data) {
        if (pvm.dim() != d)
            throw ValidationError("quorum PVMs act on different spaces");
        if (rec.size() != pvm.size())
            throw ValidationError("probability record does not match its PVM");
        for (std::size_t i = 0; i < pvm.size(); ++i) {
            ops.push_back(&pvm[i]);
            probs.push_back(rec[i]);
        }
    }
    const auto basis = gell_mann(d);
    const auto nb = static_cast<Eigen::Index>(basis.size());
    const auto ne = static_cast<Eigen::Index>(ops.size());
    RMatrix a(ne, std::max<Eigen::Index>(nb, 1));
    RVector rhs(ne);
    a.setZero();
    for (Eigen::Index i = 0; i < ne; ++i) {
        const CMatrix &e = ops[static_cast<std::size_t>(i)]->matrix();
        for (Eigen::Index b = 0; b < nb; ++b)
            a(i, b) = (e * basis[static_cast<std::size_t>(b)]).trace().real();
        rhs(i) = probs[static_cast<std::size_t>(i)] - e.trace().real() / d;
    }
    QuorumResult out{DensityOperator::maximally_mixed(d), CMatrix(), 0.0, 0.0, 0};
    Eigen::JacobiSVD<RMatrix> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const RVector &sv = svd.singularValues();
    const double cutoff = 1e-10 * std::max(1.0, sv.size() ? sv(0) : 0.0);
    for (Eigen::Index i = 0; i < sv.size(); ++i)
        if (sv(i) > cutoff)
            ++out.rank;
    if (out.rank < nb)
        throw NumericalError("rank-deficient quorum: the PVMs do not determine "
                             "the density operator");
    const RVector x = svd.solve(rhs);
    CMatrix raw = CMatrix::Identity(d, d) / static_cast<double>(d);
    for (Eigen::Index b = 0; b < nb; ++b)
        raw += x(b) * basis[static_cast<std::size_t>(b)];
    out.residual = (a * x - rhs).cwiseAbs().maxCoeff();

    Eigen::SelfAdjointEigenSolver<CMatrix> es(raw);
    RVector ev = es.eigenvalues().cwiseMax(0.0);
    ev /= ev.sum();
    CMatrix proj = es.eigenvectors() * ev.cast<cplx>().asDiagonal() *
                   es.eigenvectors().adjoint();
    proj = 0.5 * (proj + proj.adjoint()).eval();
    out.projection_distance = (proj - raw).norm();
    out.raw = std::move(raw);
    out.rho = DensityOperator(Operator(std::move(proj)));
    return out;
}

// --- generated joint models ----------------------------------------------------------

namespace {

CMatrix bloch_operator(const Eigen::Vector3d &n) {
    return n(0) * pauli::x().matrix() + n(1) * pauli::y().matrix() +
           n(2) * pauli::z().matrix();
}

Eigen::Vector3d random_direction(Xoshiro256 &rng) {
    Eigen::Vector3d v(rng.normal(), rng.normal(), rng.normal());
    return v / v.norm();
}

/// Eigenprojectors of n.sigma, eigenvalue +1 first.
ProjectiveMeasure bloch_pvm(const Eigen::Vector3d &n) {
    const CMatrix a = bloch_operator(n);
    Eigen::SelfAdjointEigenSolver<CMatrix> es(a);
    CMatrix basis(2, 2);
    basis.col(0) = es.eigenvectors().col(1);
    basis.col(1) = es.eigenvectors().col(0);
    return ProjectiveMeasure::from_basis(basis, {"+", "-"});
}

/// Weights p (flat Dirichlet) and signs s in [-1, 1] with sum p s = 0.
void centred_weights(Xoshiro256 &rng, int n, RVector &p, RVector &s) {
    p.resize(n);
    s.resize(n);
    for (int i = 0; i < n; ++i) {
        p(i) = -std::log(1.0 - rng.uniform());
        s(i) = 2.0 * rng.uniform() - 1.0;
    }
    p /= p.sum();
    s.array() -= p.dot(s);
    const double m = s.cwiseAbs().maxCoeff();
    if (m > 1.0)
        s /= m;
}

} // namespace

JointQubitModel random_joint_qubit_model(Xoshiro256 &rng, int rows, int cols) {
    if (rows < 2 || cols < 2)
        throw ValidationError("joint model needs at least two outcomes per "
                              "marginal");
    const Eigen::Vector3d ne = random_direction(rng);
    const Eigen::Vector3d nf = random_direction(rng);
    RVector p, s, q, t;
    centred_weights(rng, rows, p, s);
    centred_weights(rng, cols, q, t);
    const double g1 = 0.1 + 0.8 * rng.uniform();
    const double g2 = (1.0 - g1) * (0.2 + 0.8 * rng.uniform());
    const CMatrix a = bloch_operator(ne);
    const CMatrix b = bloch_operator(nf);
    const CMatrix id = CMatrix::Identity(2, 2);

    std::vector<std::vector<Operator>> grid(static_cast<std::size_t>(rows));
    std::vector<std::string> rl, cl;
    for (int k = 0; k < rows; ++k) {
        rl.push_back("k" + std::to_string(k));
        for (int l = 0; l < cols; ++l)
            grid[static_cast<std::size_t>(k)].emplace_back(
                p(k) * q(l) * (id + g1 * s(k) * a + g2 * t(l) * b));
    }
    for (int l = 0; l < cols; ++l)
        cl.push_back("l" + std::to_string(l));

    RMatrix lam(rows, 2), mu(cols, 2);
    for (int k = 0; k < rows; ++k) {
        lam(k, 0) = p(k) * (1.0 + g1 * s(k));
        lam(k, 1) = p(k) * (1.0 - g1 * s(k));
    }
    for (int l = 0; l < cols; ++l) {
        mu(l, 0) = q(l) * (1.0 + g2 * t(l));
        mu(l, 1) = q(l) * (1.0 - g2 * t(l));
    }
    return {BivariateEffectSet(std::move(grid), std::move(rl), std::move(cl)),
            bloch_pvm(ne), bloch_pvm(nf), StochasticMatrix(std::move(lam)),
            StochasticMatrix(std::move(mu))};
}

std::optional<NegativityWitness>
find_negativity_witness(Xoshiro256 &rng, int max_attempts, double threshold) {
    for (int attempt = 1; attempt <= max_attempts; ++attempt) {
        JointQubitModel model = random_joint_qubit_model(rng, 2, 2);
        WignerMeasure w = [&]() -> WignerMeasure {
            return wigner_measure(model.effects, model.lambda, model.mu);
        }();
        for (std::size_t k = 0; k < w.rows(); ++k)
            for (std::size_t l = 0; l < w.cols(); ++l) {
                const double ev = w(k, l).hermitian_eigenvalues().minCoeff();
                if (ev < -threshold)
                    return NegativityWitness{std::move(model), ev, k, l,
                                             attempt};
            }
    }
    return std::nullopt;
}

} // namespace povmsim
