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
#include "povmsim/operator_core.hpp"

using namespace povmsim;

TEST_CASE("operator rejects non-square and non-finite input") {
    CHECK_THROWS_AS(Operator(CMatrix::Zero(2, 3)), ValidationError);
    CMatrix m = CMatrix::Identity(2, 2);
    m(0, 1) = cplx(std::nan(""), 0.0);
    CHECK_THROWS_AS(Operator{m}, ValidationError);
}

TEST_CASE("density operator invariants") {
    CHECK_THROWS_AS(DensityOperator(CMatrix::Identity(2, 2)), ValidationError);
    CMatrix neg(2, 2);
    neg << 1.2, 0.0, 0.0, -0.2;
    CHECK_THROWS_AS(DensityOperator{neg}, ValidationError);
    CMatrix nonherm(2, 2);
    nonherm << 0.5, 0.1, 0.0, 0.5;
    CHECK_THROWS_AS(DensityOperator{nonherm}, ValidationError);

    const auto mixed = DensityOperator::maximally_mixed(3);
    CHECK(mixed.purity() == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
    const auto pure = DensityOperator::pure(spin_state(Axis::Y, false));
    CHECK(pure.purity() == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("projective measure validation") {
    CHECK_NOTHROW(spin_pvm(Axis::X));
    std::vector<Operator> incomplete{Operator::projector(spin_state(Axis::Z, true))};
    CHECK_THROWS_AS(ProjectiveMeasure(incomplete, {"+"}), ValidationError);
    std::vector<Operator> nonorth{Operator::projector(spin_state(Axis::Z, true)),
                                  Operator::projector(spin_state(Axis::X, true))};
    CHECK_THROWS_AS(ProjectiveMeasure(nonorth, {"a", "b"}), ValidationError);
    CMatrix half = 0.5 * CMatrix::Identity(2, 2);
    CHECK_THROWS_AS(ProjectiveMeasure({Operator(half), Operator(half)}, {"a", "b"}),
                    ValidationError);
}

TEST_CASE("effect set positivity and completeness") {
    Xoshiro256 rng(11);
    const EffectSet e = random_effect_set(rng, 3, 4);
    CMatrix sum = CMatrix::Zero(3, 3);
    for (const auto &m : e.effects())
        sum += m.matrix();
    CHECK(oracle::max_diff(sum, CMatrix::Identity(3, 3)) < 1e-12);
    CHECK(e.min_eigenvalue() >= -1e-12);

    CMatrix bad(2, 2);
    bad << 1.1, 0.0, 0.0, 1.0;
    CMatrix rest(2, 2);
    rest << -0.1, 0.0, 0.0, 0.0;
    CHECK_THROWS_AS(EffectSet({Operator(bad), Operator(rest)}, {"a", "b"}),
                    ValidationError);
}

TEST_CASE("tensor product matches an explicit Kronecker loop") {
    Xoshiro256 rng(3);
    const Operator a = random_hermitian(rng, 2);
    const Operator b = random_hermitian(rng, 3);
    CHECK(oracle::max_diff(tensor(a, b).matrix(),
                           oracle::kron(a.matrix(), b.matrix())) == 0.0);
}

TEST_CASE("partial trace matches explicit index sums") {
    Xoshiro256 rng(5);
    for (int trial = 0; trial < 10; ++trial) {
        const int d1 = 2 + trial % 2, d2 = 2 + trial % 3;
        const DensityOperator rho = random_density(rng, d1 * d2);
        CHECK(oracle::max_diff(
                  partial_trace(rho.matrix(), d1, d2, Subsystem::Object),
                  oracle::trace_second(rho.matrix(), d1, d2)) < 1e-14);
        CHECK(oracle::max_diff(
                  partial_trace(rho.matrix(), d1, d2, Subsystem::Ancilla),
                  oracle::trace_first(rho.matrix(), d1, d2)) < 1e-14);
    }
}

TEST_CASE("product state partial trace returns the factors") {
    const auto a = DensityOperator::pure(spin_state(Axis::X, true));
    const auto b = DensityOperator::maximally_mixed(2);
    const DensityOperator ab(tensor(a.op(), b.op()));
    CHECK(oracle::max_diff(partial_trace(ab, 2, 2, Subsystem::Object).matrix(),
                           a.matrix()) < 1e-15);
    CHECK(oracle::max_diff(partial_trace(ab, 2, 2, Subsystem::Ancilla).matrix(),
                           b.matrix()) < 1e-15);
}

TEST_CASE("unitary from Hamiltonian agrees with the matrix exponential") {
    Xoshiro256 rng(17);
    for (int d : {2, 3, 4, 6}) {
        const Operator h = random_hermitian(rng, d);
        const double t = 0.3 + rng.uniform() * 2.0;
        const Operator u = unitary_from_hamiltonian(h, t);
        CHECK(oracle::max_diff(u.matrix(), oracle::expm_unitary(h.matrix(), t)) <
              1e-12);
        CHECK(is_unitary(u.matrix(), 1e-12));
    }
    CMatrix nh(2, 2);
    nh << 0.0, 1.0, 0.0, 0.0;
    CHECK_THROWS_AS(unitary_from_hamiltonian(Operator(nh), 1.0), ValidationError);
}

TEST_CASE("evolution preserves trace and spectrum") {
    Xoshiro256 rng(19);
    const DensityOperator rho = random_density(rng, 4);
    const Operator h = random_hermitian(rng, 4);
    const DensityOperator out = evolve(rho, h, 1.7);
    CHECK(std::abs(out.matrix().trace().real() - 1.0) < 1e-13);
    CHECK((out.eigenvalues() - rho.eigenvalues()).cwiseAbs().maxCoeff() < 1e-13);
}

TEST_CASE("commutator of Pauli matrices") {
    const CMatrix c = commutator(pauli::x(), pauli::y()).matrix();
    CHECK(oracle::max_diff(c, cplx(0.0, 2.0) * pauli::z().matrix()) < 1e-15);
}

TEST_CASE("Schmidt decomposition") {
    Xoshiro256 rng(23);
    for (int trial = 0; trial < 10; ++trial) {
        const int d1 = 2 + trial % 2, d2 = 3;
        const CVector psi = random_pure_state(rng, d1 * d2);
        const SchmidtDecomposition s = schmidt_decompose(psi, d1, d2);
        CHECK((s.reconstruct() - psi).cwiseAbs().maxCoeff() < 1e-13);
        // Squared coefficients are the reduced-state spectrum.
        const CMatrix red = oracle::trace_second(psi * psi.adjoint(), d1, d2);
        Eigen::SelfAdjointEigenSolver<CMatrix> es(red);
        RVector ev = es.eigenvalues().reverse();
        for (std::size_t i = 0; i < s.coefficients.size(); ++i)
            CHECK(std::abs(s.coefficients[i] * s.coefficients[i] -
                           ev(static_cast<Eigen::Index>(i))) < 1e-12);
        for (std::size_t i = 1; i < s.coefficients.size(); ++i)
            CHECK(s.coefficients[i - 1] >= s.coefficients[i]);
    }
    // Product state: one term.
    const CVector prod = tensor(spin_state(Axis::X, true), spin_state(Axis::Z, false));
    CHECK(schmidt_decompose(prod, 2, 2).coefficients.size() == 1);
    // Bell state: two equal terms.
    CVector bell = CVector::Zero(4);
    bell(0) = bell(3) = 1.0 / std::sqrt(2.0);
    const auto sb = schmidt_decompose(bell, 2, 2);
    REQUIRE(sb.coefficients.size() == 2);
    CHECK(std::abs(sb.coefficients[0] - sb.coefficients[1]) < 1e-14);
    CHECK((sb.reconstruct() - bell).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("spin eigenstates") {
    for (Axis ax : {Axis::X, Axis::Y, Axis::Z})
        for (bool pos : {true, false}) {
            const CVector v = spin_state(ax, pos);
            const CVector w = pauli::along(ax).matrix() * v;
            CHECK((w - (pos ? 1.0 : -1.0) * v).cwiseAbs().maxCoeff() < 1e-15);
        }
}

TEST_CASE("random unitaries are unitary") {
    Xoshiro256 rng(29);
    for (int d : {2, 4, 5})
        CHECK(is_unitary(random_unitary(rng, d).matrix(), 1e-12));
}

TEST_CASE("rng streams are reproducible and distinct") {
    Xoshiro256 a(42, 0), b(42, 0), c(42, 1);
    bool differs = false;
    for (int i = 0; i < 100; ++i) {
        const auto x = a(), y = b(), z = c();
        CHECK(x == y);
        differs = differs || x != z;
    }
    CHECK(differs);
    // splitmix64 reference output for state 0.
    std::uint64_t s = 0;
    CHECK(splitmix64(s) == 0xE220A8397B1DCDAFULL);
}
