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

#include <doctest.h>

#include "oracles.hpp"
#include "povmsim/error.hpp"
#include "povmsim/wigner.hpp"

using namespace povmsim;

TEST_CASE("inverse of a stochastic matrix") {
    RMatrix m(2, 2);
    m << 0.7, 0.2, 0.3, 0.8;
    const RMatrix inv = invert_stochastic(StochasticMatrix(m));
    CHECK((inv * m - RMatrix::Identity(2, 2)).cwiseAbs().maxCoeff() < 1e-14);
    // Columns of the inverse also sum to one.
    CHECK(std::abs(inv.col(0).sum() - 1.0) < 1e-14);
    CHECK_THROWS_AS(invert_stochastic(StochasticMatrix::uniform(2, 2)), NumericalError);
    CHECK_THROWS_AS(invert_stochastic(StochasticMatrix::uniform(3, 2)), ValidationError);
}

TEST_CASE("generated joint models have the advertised marginals") {
    Xoshiro256 rng(31);
    for (int i = 0; i < 20; ++i) {
        const auto m = random_joint_qubit_model(rng, 2 + i % 2, 2 + i % 3);
        CHECK(m.effects.min_eigenvalue() >= -1e-12);
        const auto lf = nonideality_matrix(m.effects.row_marginal(), m.e);
        const auto mf = nonideality_matrix(m.effects.col_marginal(), m.f);
        CHECK((lf.lambda.matrix() - m.lambda.matrix()).cwiseAbs().maxCoeff() < 1e-12);
        CHECK((mf.lambda.matrix() - m.mu.matrix()).cwiseAbs().maxCoeff() < 1e-12);
        CHECK(lf.residual < 1e-12);
        CHECK(mf.residual < 1e-12);
    }
}

TEST_CASE("Wigner marginal identities and expectation consistency") {
    Xoshiro256 rng(37);
    for (int i = 0; i < 50; ++i) {
        const auto m = random_joint_qubit_model(rng, 2, 2);
        const WignerMeasure w = wigner_measure(m.effects, m.lambda, m.mu);
        const auto r = wigner_marginal_residuals(w, m.e, m.f);
        CHECK(r.e <= 1e-8);
        CHECK(r.f <= 1e-8);

        const auto rho = random_density(rng, 2);
        RMatrix joint(2, 2);
        for (std::size_t k = 0; k < 2; ++k)
            for (std::size_t l = 0; l < 2; ++l)
                joint(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(l)) =
                    (rho.matrix() * m.effects(k, l).matrix()).trace().real();
        const RMatrix li = invert_stochastic(m.lambda);
        const RMatrix mi = invert_stochastic(m.mu);
        const RMatrix expected = li * joint * mi.transpose();
        CHECK((w.expectations(rho) - expected).cwiseAbs().maxCoeff() < 1e-12);

        // Ideal marginal probabilities from the joint statistics.
        const auto ip = reconstruct_ideal_probs(joint, m.lambda, m.mu);
        for (std::size_t k = 0; k < 2; ++k) {
            CHECK(std::abs(ip.e[k] - (rho.matrix() * m.e[k].matrix()).trace().real()) <
                  1e-12);
            CHECK(std::abs(ip.f[k] - (rho.matrix() * m.f[k].matrix()).trace().real()) <
                  1e-12);
        }
        CHECK(std::abs(ip.e.sum() - 1.0) < 1e-9);
    }
}

TEST_CASE("univariate inversion recovers the PVM exactly") {
    Xoshiro256 rng(41);
    for (int i = 0; i < 20; ++i) {
        const int d = 2 + i % 3;
        const ProjectiveMeasure pvm =
            ProjectiveMeasure::from_basis(random_unitary(rng, d).matrix(),
                                          std::vector<std::string>(
                                              static_cast<std::size_t>(d), "e"));
        StochasticMatrix lam = StochasticMatrix::random(rng, d, d);
        std::vector<Operator> ops;
        for (int k = 0; k < d; ++k) {
            CMatrix m = CMatrix::Zero(d, d);
            for (int kp = 0; kp < d; ++kp)
                m += lam(k, kp) * pvm[static_cast<std::size_t>(kp)].matrix();
            ops.emplace_back(m);
        }
        const EffectSet eff(std::move(ops),
                            std::vector<std::string>(static_cast<std::size_t>(d), "m"));
        const auto w = wigner_measure(eff, lam);
        for (int k = 0; k < d; ++k)
            CHECK(oracle::max_diff(w[static_cast<std::size_t>(k)].matrix(),
                                   pvm[static_cast<std::size_t>(k)].matrix()) < 1e-10);
    }
}

TEST_CASE("negativity witness") {
    Xoshiro256 rng(43);
    const auto w = find_negativity_witness(rng, 200);
    REQUIRE(w.has_value());
    CHECK(w->min_eigenvalue < -1e-9);
    const WignerMeasure wm = wigner_measure(w->model.effects, w->model.lambda, w->model.mu);
    CHECK(wm(w->row, w->col).hermitian_eigenvalues().minCoeff() ==
          doctest::Approx(w->min_eigenvalue).epsilon(1e-12));
    // The joint effects themselves are positive.
    CHECK(w->model.effects.min_eigenvalue() >= -1e-12);
}

TEST_CASE("sampling noise produces raw negative ideal probabilities") {
    // lambda close to uniform amplifies noise; a joint table off the model's
    // range yields a negative entry that must be reported, not clipped.
    RMatrix lam(2, 2);
    lam << 0.55, 0.45, 0.45, 0.55;
    RMatrix joint(2, 2);
    joint << 0.30, 0.30, 0.20, 0.20;
    const auto ip = reconstruct_ideal_probs(joint, StochasticMatrix(lam),
                                            StochasticMatrix::identity(2));
    CHECK(ip.negative);
    CHECK(ip.e[1] < 0.0);
    CHECK(std::abs(ip.e.sum() - 1.0) < 1e-12);
}

TEST_CASE("Wigner measure validation") {
    std::vector<std::vector<Operator>> grid{{Operator::identity(2), Operator::identity(2)}};
    CHECK_THROWS_AS(WignerMeasure{grid}, ValidationError);
}

TEST_CASE("quorum reconstruction from exact Pauli statistics") {
    Xoshiro256 rng(47);
    for (int i = 0; i < 20; ++i) {
        const auto rho = random_density(rng, 2);
        std::vector<std::pair<ProjectiveMeasure, ProbabilityRecord>> data;
        for (Axis ax : {Axis::X, Axis::Y, Axis::Z}) {
            const auto pvm = spin_pvm(ax);
            ProbabilityRecord p{pvm.labels(), EffectSet::from_pvm(pvm).probabilities(rho)};
            data.emplace_back(pvm, p);
        }
        const auto q = quorum_reconstruct(data);
        CHECK(oracle::max_diff(q.rho.matrix(), rho.matrix()) <= 1e-10);
        CHECK(q.rank == 3);
        CHECK(q.residual < 1e-12);
    }
}

TEST_CASE("quorum for a qutrit from several bases") {
    Xoshiro256 rng(53);
    const auto rho = random_density(rng, 3);
    std::vector<std::pair<ProjectiveMeasure, ProbabilityRecord>> data;
    for (int b = 0; b < 5; ++b) {
        const auto pvm = ProjectiveMeasure::from_basis(random_unitary(rng, 3).matrix(),
                                                       {"0", "1", "2"});
        data.emplace_back(pvm, ProbabilityRecord{
                                   pvm.labels(), EffectSet::from_pvm(pvm).probabilities(rho)});
    }
    const auto q = quorum_reconstruct(data);
    CHECK(oracle::max_diff(q.rho.matrix(), rho.matrix()) <= 1e-10);
}

TEST_CASE("rank-deficient quorum is rejected") {
    const auto pvm = spin_pvm(Axis::Z);
    std::vector<std::pair<ProjectiveMeasure, ProbabilityRecord>> data{
        {pvm, ProbabilityRecord{pvm.labels(), {0.5, 0.5}}},
        {spin_pvm(Axis::X), ProbabilityRecord{pvm.labels(), {0.5, 0.5}}}};
    CHECK_THROWS_AS(quorum_reconstruct(data), NumericalError);
}

TEST_CASE("quorum projects an unphysical estimate onto density operators") {
    // Frequencies outside the Bloch ball: <sigma> = (1, 1, 0).
    std::vector<std::pair<ProjectiveMeasure, ProbabilityRecord>> data;
    data.emplace_back(spin_pvm(Axis::X), ProbabilityRecord{{"+", "-"}, {1.0, 0.0}});
    data.emplace_back(spin_pvm(Axis::Y), ProbabilityRecord{{"+", "-"}, {1.0, 0.0}});
    data.emplace_back(spin_pvm(Axis::Z), ProbabilityRecord{{"+", "-"}, {0.5, 0.5}});
    const auto q = quorum_reconstruct(data);
    CHECK(q.projection_distance > 0.1);
    CHECK(q.rho.eigenvalues().minCoeff() >= -1e-12);
    CHECK(std::abs(q.rho.matrix().trace().real() - 1.0) < 1e-12);
}
