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
#include "povmsim/nonideality.hpp"

using namespace povmsim;

namespace {

RMatrix mat2(double a, double b, double c, double d) {
    RMatrix m(2, 2);
    m << a, b, c, d;
    return m;
}

/// Effects M_k = sum_k' lambda_kk' E_k' for the sigma_axis PVM.
EffectSet smear(const RMatrix &lam, Axis axis) {
    const auto pvm = spin_pvm(axis);
    std::vector<Operator> ops;
    std::vector<std::string> labels;
    for (Eigen::Index k = 0; k < lam.rows(); ++k) {
        CMatrix m = CMatrix::Zero(2, 2);
        for (Eigen::Index kp = 0; kp < lam.cols(); ++kp)
            m += lam(k, kp) * pvm[static_cast<std::size_t>(kp)].matrix();
        ops.emplace_back(m);
        labels.push_back(std::to_string(k));
    }
    return EffectSet(std::move(ops), std::move(labels));
}

} // namespace

TEST_CASE("stochastic matrix validation") {
    CHECK_THROWS_AS(StochasticMatrix(mat2(0.5, 0.5, 0.6, 0.5)), ValidationError);
    CHECK_THROWS_AS(StochasticMatrix(mat2(1.1, 0.0, -0.1, 1.0)), ValidationError);
    CHECK_NOTHROW(StochasticMatrix(mat2(0.3, 1.0, 0.7, 0.0)));
}

TEST_CASE("row entropy, hand-evaluated cases") {
    CHECK(row_entropy(StochasticMatrix::identity(3)) == 0.0);
    CHECK(row_entropy(StochasticMatrix::uniform(2, 2)) ==
          doctest::Approx(std::log(2.0)).epsilon(1e-15));
    // -(0.8 ln 0.8 + 0.2 ln 0.2)
    CHECK(row_entropy(StochasticMatrix(mat2(0.8, 0.2, 0.2, 0.8))) ==
          doctest::Approx(0.5004024235381879).epsilon(1e-14));
    // Row 1 = (0.5, 0), row 2 = (0.5, 1): J = (0 + [-(0.5 ln(1/3) + ln(2/3))]) / 2
    const double row2 = -(0.5 * std::log(0.5 / 1.5) + 1.0 * std::log(1.0 / 1.5));
    CHECK(row_entropy(StochasticMatrix(mat2(0.5, 0.0, 0.5, 1.0))) ==
          doctest::Approx(row2 / 2.0).epsilon(1e-14));
}

TEST_CASE("row entropy is invariant under row permutation") {
    Xoshiro256 rng(7);
    const StochasticMatrix m = StochasticMatrix::random(rng, 3, 3);
    RMatrix p = m.matrix();
    p.row(0).swap(p.row(2));
    CHECK(row_entropy(StochasticMatrix(p)) ==
          doctest::Approx(row_entropy(m)).epsilon(1e-14));
    CHECK(row_entropy(m.canonicalized()) ==
          doctest::Approx(row_entropy(m)).epsilon(1e-14));
}

TEST_CASE("row entropy is non-negative on random matrices") {
    Xoshiro256 rng(8);
    for (int i = 0; i < 200; ++i)
        CHECK(row_entropy(StochasticMatrix::random(rng, 2 + i % 3, 2 + i % 4)) >=
              0.0);
}

TEST_CASE("nonideality matrix recovers a known smearing") {
    const RMatrix lam = mat2(0.9, 0.3, 0.1, 0.7);
    const NonidealityFit fit = nonideality_matrix(smear(lam, Axis::Z), spin_pvm(Axis::Z));
    CHECK((fit.lambda.matrix() - lam).cwiseAbs().maxCoeff() < 1e-15);
    CHECK(fit.residual < 1e-15);
    // Against a non-commuting PVM the effects are not diagonal.
    const NonidealityFit off = nonideality_matrix(smear(lam, Axis::Z), spin_pvm(Axis::X));
    CHECK(off.residual > 0.1);
}

TEST_CASE("von Neumann entropy") {
    CHECK(von_neumann_entropy(DensityOperator::pure(spin_state(Axis::X, true))) ==
          doctest::Approx(0.0).epsilon(1e-15));
    CHECK(von_neumann_entropy(DensityOperator::maximally_mixed(4)) ==
          doctest::Approx(std::log(4.0)).epsilon(1e-14));
}

TEST_CASE("total uncertainty: pure state with ideal lambda gives zero") {
    const auto u = total_uncertainty(DensityOperator::pure(spin_state(Axis::Z, true)),
                                     StochasticMatrix::identity(2));
    CHECK(u.delta == doctest::Approx(0.0));
    CHECK(u.satisfied);
}

TEST_CASE("generalized Martens slack is the von Neumann entropy") {
    Xoshiro256 rng(9);
    for (int i = 0; i < 50; ++i) {
        const auto rho = random_density(rng, 2);
        const auto lam = StochasticMatrix::random(rng, 2, 2);
        const auto mu = StochasticMatrix::random(rng, 3, 2);
        const auto u = total_uncertainty(rho, lam, mu);
        CHECK(std::abs(u.slack - von_neumann_entropy(rho)) <= 1e-12);
        CHECK(u.satisfied);
    }
}

TEST_CASE("Martens bound of mutually unbiased qubit bases is ln 2") {
    CHECK(martens_bound(spin_pvm(Axis::Y), spin_pvm(Axis::Z)) ==
          doctest::Approx(std::log(2.0)).epsilon(1e-14));
    CHECK(martens_bound(spin_pvm(Axis::Z), spin_pvm(Axis::Z)) ==
          doctest::Approx(0.0));
    const auto r = check_martens(StochasticMatrix::uniform(2, 2),
                                 StochasticMatrix::uniform(2, 2),
                                 spin_pvm(Axis::X), spin_pvm(Axis::Z));
    CHECK(r.lhs == doctest::Approx(2.0 * std::log(2.0)));
    CHECK(r.satisfied);
}

TEST_CASE("Robertson inequality") {
    const auto r = robertson_bound(pauli::y(), pauli::z(), spin_state(Axis::X, true));
    CHECK(std::abs(r.lhs - 1.0) <= 1e-12);
    CHECK(std::abs(r.rhs - 1.0) <= 1e-12);
    Xoshiro256 rng(10);
    for (int i = 0; i < 200; ++i) {
        const int d = 2 + i % 3;
        const auto a = random_hermitian(rng, d);
        const auto b = random_hermitian(rng, d);
        const auto rep = robertson_bound(a, b, random_pure_state(rng, d));
        CHECK(rep.lhs - rep.rhs >= -1e-10);
    }
    CMatrix nh(2, 2);
    nh << 0.0, 1.0, 0.0, 0.0;
    CHECK_THROWS_AS(robertson_bound(Operator(nh), pauli::z(), spin_state(Axis::Z, true)),
                    ValidationError);
}
