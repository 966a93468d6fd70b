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

#include <string>
#include <vector>

#include "povmsim/nonideality.hpp"
#include "povmsim/operator_core.hpp"
#include "povmsim/premeasurement.hpp"

namespace povmsim::sg {

/// Field model of the magnet. With H_int = (mu/2) B(y,z).sigma:
///   Ideal:      B = (0, 0, a - bZ)      (single-component field)
///   Corrected:  B = (0, bY, a - bZ)     (divergence-free)
///   Quadrupole: B = (0, bY, -bZ)        (corrected with a = 0)
enum class Variant { Ideal, Corrected, Quadrupole };

std::string to_string(Variant v);
Variant variant_from_string(const std::string &s);

/// Natural units, hbar = 1. Spatial domain is the (y, z) plane; the
/// x-motion only carries the atom to the screen and is replaced by momentum
/// binning at t = tau.
struct Params {
    Variant variant = Variant::Ideal;
    double a = 0.0;  // homogeneous field offset
    double b = 6.0;  // field gradient
    double mu = 1.0; // magnetic-moment coefficient
    double m = 1.0;  // mass
    double tau = 1.0;
    int grid_n = 128;
    double extent = 20.0;      // half-width of the box per axis
    double packet_width = 1.0; // position standard deviation of |psi|^2
    int steps = 0;             // 0: sized so the potential phase/step <= pi/8

    static Params defaults(Variant v);
    /// Throws ValidationError on a broken invariant.
    void validate() const;
    /// Largest (mu/2)|B| on the grid.
    [[nodiscard]] double max_field_energy() const;
    [[nodiscard]] int resolved_steps() const;
    [[nodiscard]] double dx() const { return 2.0 * extent / grid_n; }
};

/// Spinor wavefunction psi_s(y, z), s in {+, -} (sigma_z basis), sampled on
/// grid_n x grid_n points y_i = -extent + i dx (row-major, y outer). Discrete
/// norm sum |psi|^2 dx^2.
class GridState {
  public:
    GridState(int grid_n, double extent);

    [[nodiscard]] int grid_n() const noexcept { return n_; }
    [[nodiscard]] double extent() const noexcept { return extent_; }
    [[nodiscard]] double dx() const noexcept { return 2.0 * extent_ / n_; }
    [[nodiscard]] double coordinate(int i) const { return -extent_ + i * dx(); }
    /// Angular wavenumber of FFT bin i (standard FFT ordering).
    [[nodiscard]] double wavenumber(int i) const;

    [[nodiscard]] std::vector<cplx> &component(int s) { return psi_[s]; }
    [[nodiscard]] const std::vector<cplx> &component(int s) const {
        return psi_[s];
    }

    [[nodiscard]] double norm() const;
    /// (<sigma_x>, <sigma_y>, <sigma_z>)
    [[nodiscard]] std::array<double, 3> spin_expectation() const;
    /// (<P_y>, <P_z>)
    [[nodiscard]] std::array<double, 2> momentum_expectation() const;
    /// <Y P_z - Z P_y> with spectral derivatives.
    [[nodiscard]] double angular_momentum_x() const;
    /// Momentum-space amplitudes of one spin component, normalized so that
    /// sum_s sum_k |phi_s(k)|^2 equals the discrete norm.
    [[nodiscard]] std::vector<cplx> momentum_amplitudes(int s) const;

  private:
    int n_;
    double extent_;
    std::array<std::vector<cplx>, 2> psi_;
};

/// psi_s(y,z) = spin_s G(y) G(z), G a zero-mean Gaussian with standard
/// deviation `packet_width` of |G|^2; renormalized on the grid.
GridState build_initial_state(const Params &params, const CVector &spin);

struct Sample {
    double t;
    double p_y, p_z;
    double sigma_x, sigma_y, sigma_z;
    double norm;
};

struct Evolution {
    GridState state;
    std::vector<Sample> series;
    int steps = 0;
    double max_phase_per_step = 0.0;
    double norm_drift = 0.0;
    /// max over steps of |d<P>/dt - <F>| / max|<F>| (F = -grad V).
    double ehrenfest_deviation = 0.0;
};

/// Strang split-operator propagation over [0, tau]: half kinetic step in
/// momentum space, full potential step (2x2 spin exponential per grid point),
/// half kinetic step. Throws NumericalError when the potential phase per
/// step exceeds pi/4.
Evolution evolve(const GridState &initial, const Params &params,
                 int record_every = 1);

/// Sign-of-momentum readout. Univariate variants: {up (p_z > 0), down}.
/// Quadrupole: {y+z+, y+z-, y-z+, y-z-} ordered by (sign p_y, sign p_z).
/// Mass on a zero-momentum grid line is split equally between neighbours.
ProbabilityRecord readout_momentum_bins(const GridState &state,
                                        Variant variant);

/// build_initial_state -> evolve -> readout.
ProbabilityRecord run(const Params &params, const CVector &spin);

/// Columns of lambda are the readout distributions for |z+> and |z->.
/// Univariate variants only.
StochasticMatrix calibrate(const Params &params);

/// Object-side effects by detector tomography over {z+, z-, x+, y+}.
/// Univariate variants only.
TomographyResult extract_effects(const Params &params);

struct BivariateExtraction {
    BivariateEffectSet effects;
    double condition_number = 0.0;
};

/// Bivariate effects M_kl (k: sign p_y, l: sign p_z) of the quadrupole
/// variant by detector tomography.
BivariateExtraction extract_bivariate_effects(const Params &params);

enum class Observable { SigmaZ, LxMinusHalfSigmaX };

/// Generic reference spin (cos 0.55, e^{0.4 i} sin 0.55).
CVector reference_spin();

/// |<O>(tau) - <O>(0)| for build_initial_state(params, spin).
double conserved_quantity_residual(const Params &params, Observable obs,
                                   const CVector &spin = reference_spin());

/// Analytic div B of the modeled field: -b for Ideal, 0 otherwise.
double field_divergence(Variant variant, const Params &params);

/// Correct-bin probability of the ideal variant in the continuum:
/// Phi(dp / sigma_p), dp = (mu/2) b tau, sigma_p = 1 / (2 w).
double ideal_correct_bin_probability(const Params &params);

} // namespace povmsim::sg
