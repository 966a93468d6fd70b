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

namespace povmsim {

/// Every absolute tolerance used by validators and numerical guards.
struct Tolerances {
    double hermitian = 1e-10;     // max |A - A^dagger| entry
    double trace = 1e-10;         // |Tr rho - 1|
    double positivity = 1e-10;    // min eigenvalue >= -positivity
    double completeness = 1e-10;  // max |sum_k M_k - I| entry
    double idempotence = 1e-10;   // projector checks
    double probability_negative = 1e-12;
    double probability_sum = 1e-10;
    double stochastic_column = 1e-10;
    double normalization = 1e-10; // state vectors
    double grid_norm = 1e-8;      // discrete norm of grid wavefunctions
    double tomography_condition = 1e8;
    double inversion_condition = 1e10;
    double extracted_effect_negativity = 1e-8;
};

inline constexpr Tolerances kDefaultTolerances{};

} // namespace povmsim
