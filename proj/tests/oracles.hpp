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

// Reference computations written independently of the library code paths.

#pragma once

#include <cmath>

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include "povmsim/premeasurement.hpp"

namespace oracle {

using povmsim::CMatrix;
using povmsim::cplx;

inline CMatrix kron(const CMatrix &a, const CMatrix &b) {
    CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            for (Eigen::Index k = 0; k < b.rows(); ++k)
                for (Eigen::Index l = 0; l < b.cols(); ++l)
                    out(i * b.rows() + k, j * b.cols() + l) = a(i, j) * b(k, l);
    return out;
}

/// Tr over the second factor of C^{d1} (x) C^{d2}.
inline CMatrix trace_second(const CMatrix &m, int d1, int d2) {
    CMatrix out = CMatrix::Zero(d1, d1);
    for (int i = 0; i < d1; ++i)
        for (int j = 0; j < d1; ++j)
            for (int k = 0; k < d2; ++k)
                out(i, j) += m(i * d2 + k, j * d2 + k);
    return out;
}

/// Tr over the first factor.
inline CMatrix trace_first(const CMatrix &m, int d1, int d2) {
    CMatrix out = CMatrix::Zero(d2, d2);
    for (int k = 0; k < d2; ++k)
        for (int l = 0; l < d2; ++l)
            for (int i = 0; i < d1; ++i)
                out(k, l) += m(i * d2 + k, i * d2 + l);
    return out;
}

/// exp(-i H t) by scaling and squaring (Eigen MatrixFunctions).
inline CMatrix expm_unitary(const CMatrix &h, double t) {
    const CMatrix a = cplx(0.0, -t) * h;
    return a.exp();
}

/// M_(o)k = Tr_a[(I (x) rho_a) U^dagger (I (x) M_(a)k) U]
inline std::vector<CMatrix> effective_povm(const povmsim::MeasurementModel &m) {
    const int d_o = m.object_dim();
    const int d_a = m.ancilla_dim();
    const CMatrix &u = m.unitary().matrix();
    const CMatrix io = CMatrix::Identity(d_o, d_o);
    const CMatrix rho_a = kron(io, m.ancilla_init().matrix());
    std::vector<CMatrix> out;
    for (const auto &eff : m.pointer().effects()) {
        const CMatrix heis = u.adjoint() * kron(io, eff.matrix()) * u;
        out.push_back(trace_second(rho_a * heis, d_o, d_a));
    }
    return out;
}

inline double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

inline double max_diff(const CMatrix &a, const CMatrix &b) {
    return (a - b).cwiseAbs().maxCoeff();
}

} // namespace oracle
