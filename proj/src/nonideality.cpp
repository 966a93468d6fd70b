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

#include "povmsim/nonideality.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "povmsim/error.hpp"

namespace povmsim {

StochasticMatrix::StochasticMatrix(RMatrix m, const Tolerances &tol)
    : m_(std::move(m)) {
    if (m_.rows() == 0 || m_.cols() == 0)
        throw ValidationError("stochastic matrix must be non-empty");
    if (!m_.allFinite())
        throw ValidationError("stochastic matrix has non-finite entries");
    if (m_.minCoeff() < -tol.stochastic_column)
        throw ValidationError("stochastic matrix has a negative entry");
    for (Eigen::Index c = 0; c < m_.cols(); ++c)
        if (std::abs(m_.col(c).sum() - 1.0) > tol.stochastic_column)
            throw ValidationError("stochastic matrix column " +
                                  std::to_string(c) + " does not sum to one");
}

StochasticMatrix StochasticMatrix::identity(int n) {
    return StochasticMatrix(RMatrix::Identity(n, n));
}

StochasticMatrix StochasticMatrix::uniform(int rows, int cols) {
    return StochasticMatrix(RMatrix::Constant(rows, cols, 1.0 / rows));
}

StochasticMatrix StochasticMatrix::random(Xoshiro256 &rng, int rows, int cols) {
    RMatrix m(rows, cols);
    for (int c = 0; c < cols; ++c) {
        double s = 0.0;
        for (int r = 0; r < rows; ++r) {
            m(r, c) = -std::log(1.0 - rng.uniform());
            s += m(r, c);
        }
        m.col(c) /= s;
    }
    return StochasticMatrix(std::move(m));
}

StochasticMatrix StochasticMatrix::canonicalized() const {
    const auto nr = m_.rows();
    std::vector<Eigen::Index> order;
    std::vector<bool> used(static_cast<std::size_t>(nr), false);
    for (Eigen::Index c = 0; c < std::min(m_.cols(), nr); ++c) {
        Eigen::Index best = -1;
        for (Eigen::Index r = 0; r < nr; ++r)
            if (!used[static_cast<std::size_t>(r)] &&
                (best < 0 || m_(r, c) > m_(best, c)))
                best = r;
        used[static_cast<std::size_t>(best)] = true;
        order.push_back(best);
    }
    for (Eigen::Index r = 0; r < nr; ++r)
        if (!used[static_cast<std::size_t>(r)])
            order.push_back(r);
    RMatrix out(nr, m_.cols());
    for (Eigen::Index r = 0; r < nr; ++r)
        out.row(r) = m_.row(order[static_cast<std::size_t>(r)]);
    return StochasticMatrix(std::move(out));
}

NonidealityFit nonideality_matrix(const EffectSet &effects,
                                  const ProjectiveMeasure &pvm) {
    if (effects.dim() != pvm.dim())
        throw ValidationError("effects and PVM act on different spaces");
    const auto n = static_cast<Eigen::Index>(effects.size());
    const auto nh = static_cast<Eigen::Index>(pvm.size());
    RMatrix lam(n, nh);
    for (Eigen::Index k = 0; k < n; ++k)
        for (Eigen::Index kp = 0; kp < nh; ++kp) {
            const Operator &e = pvm[static_cast<std::size_t>(kp)];
            lam(k, kp) = (effects[static_cast<std::size_t>(k)].matrix() *
                          e.matrix())
                             .trace()
                             .real() /
                         e.trace().real();
        }
    double residual = 0.0;
    for (Eigen::Index k = 0; k < n; ++k) {
        CMatrix fit = effects[static_cast<std::size_t>(k)].matrix();
        for (Eigen::Index kp = 0; kp < nh; ++kp)
            fit -= lam(k, kp) * pvm[static_cast<std::size_t>(kp)].matrix();
        // Hermitian difference: spectral norm = largest |eigenvalue|.
        Eigen::SelfAdjointEigenSolver<CMatrix> es(0.5 * (fit + fit.adjoint()),
                                                  Eigen::EigenvaluesOnly);
        residual = std::max(residual, es.eigenvalues().cwiseAbs().maxCoeff());
    }
    return {StochasticMatrix(std::move(lam)), residual};
}

double row_entropy(const StochasticMatrix &lambda) {
    const RMatrix m = lambda.matrix().cwiseMax(0.0);
    double total = 0.0;
    for (Eigen::Index k = 0; k < m.rows(); ++k) {
        const double row_sum = m.row(k).sum();
        if (row_sum <= 0.0)
            continue;
        for (Eigen::Index kp = 0; kp < m.cols(); ++kp) {
            const double v = m(k, kp);
            if (v > 0.0)
                total -= v * std::log(v / row_sum);
        }
    }
    return total / static_cast<double>(m.rows());
}

double von_neumann_entropy(const DensityOperator &rho) {
    const RVector r = rho.eigenvalues();
    double h = 0.0;
    for (Eigen::Index i = 0; i < r.size(); ++i)
        if (r(i) > 0.0)
            h -= r(i) * std::log(r(i));
    return h;
}

namespace {
UncertaintyReport finish(UncertaintyReport rep) {
    rep.delta = rep.h_vn + rep.bound;
    rep.slack = rep.delta - rep.bound;
    rep.satisfied = rep.slack >= -1e-12;
    return rep;
}
} // namespace

UncertaintyReport total_uncertainty(const DensityOperator &rho,
                                    const StochasticMatrix &lambda) {
    UncertaintyReport rep;
    rep.h_vn = von_neumann_entropy(rho);
    rep.j_lambda = row_entropy(lambda);
    rep.bound = rep.j_lambda;
    return finish(rep);
}

UncertaintyReport total_uncertainty(const DensityOperator &rho,
                                    const StochasticMatrix &lambda,
                                    const StochasticMatrix &mu) {
    UncertaintyReport rep;
    rep.h_vn = von_neumann_entropy(rho);
    rep.j_lambda = row_entropy(lambda);
    rep.j_mu = row_entropy(mu);
    rep.bound = rep.j_lambda + *rep.j_mu;
    return finish(rep);
}

double martens_bound(const ProjectiveMeasure &e, const ProjectiveMeasure &f) {
    if (e.dim() != f.dim())
        throw ValidationError("PVMs act on different spaces");
    double best = 0.0;
    for (const auto &ei : e.projectors())
        for (const auto &fj : f.projectors())
            best = std::max(best, (ei.matrix() * fj.matrix()).trace().real());
    return -std::log(best);
}

InequalityReport check_martens(const StochasticMatrix &lambda,
                               const StochasticMatrix &mu,
                               const ProjectiveMeasure &e,
                               const ProjectiveMeasure &f) {
    if (lambda.cols() != static_cast<int>(e.size()) ||
        mu.cols() != static_cast<int>(f.size()))
        throw ValidationError("nonideality matrix columns must match PVM size");
    InequalityReport rep;
    rep.lhs = row_entropy(lambda) + row_entropy(mu);
    rep.rhs = martens_bound(e, f);
    rep.slack = rep.lhs - rep.rhs;
    rep.satisfied = rep.slack >= -1e-12;
    return rep;
}

InequalityReport robertson_bound(const Operator &a, const Operator &b,
                                 const CVector &psi) {
    if (a.dim() != b.dim() || psi.size() != a.dim())
        throw ValidationError("Robertson bound: dimension mismatch");
    if (!a.is_hermitian(kDefaultTolerances.hermitian) ||
        !b.is_hermitian(kDefaultTolerances.hermitian))
        throw ValidationError("Robertson bound needs Hermitian observables");
    if (std::abs(psi.norm() - 1.0) > kDefaultTolerances.normalization)
        throw ValidationError("Robertson bound: state not normalized");
    auto stddev = [&](const CMatrix &m) {
        const double mean = psi.dot(m * psi).real();
        const double second = (m * psi).squaredNorm();
        return std::sqrt(std::max(0.0, second - mean * mean));
    };
    InequalityReport rep;
    rep.lhs = stddev(a.matrix()) * stddev(b.matrix());
    const CMatrix comm = commutator(a, b).matrix();
    rep.rhs = 0.5 * std::abs(psi.dot(comm * psi));
    rep.slack = rep.lhs - rep.rhs;
    rep.satisfied = rep.slack >= -1e-12;
    return rep;
}

} // namespace povmsim
