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

#include "povmsim/stern_gerlach.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <mutex>
#include <numbers>

#include <fftw3.h>

#include "povmsim/error.hpp"

namespace povmsim::sg {

namespace {

// FFTW's planner is not thread-safe; execution is.
std::mutex &planner_mutex() {
    static std::mutex m;
    return m;
}

/// In-place, unnormalized 2D transforms of an n x n row-major array.
class Fft2d {
  public:
    explicit Fft2d(int n) : n_(n) {
        std::vector<cplx> scratch(static_cast<std::size_t>(n) * n);
        auto *buf = reinterpret_cast<fftw_complex *>(scratch.data());
        std::lock_guard lock(planner_mutex());
        fwd_ = fftw_plan_dft_2d(n, n, buf, buf, FFTW_FORWARD,
                                FFTW_ESTIMATE | FFTW_UNALIGNED);
        bwd_ = fftw_plan_dft_2d(n, n, buf, buf, FFTW_BACKWARD,
                                FFTW_ESTIMATE | FFTW_UNALIGNED);
        if (fwd_ == nullptr || bwd_ == nullptr)
            throw NumericalError("FFTW plan creation failed");
    }
    ~Fft2d() {
        std::lock_guard lock(planner_mutex());
        fftw_destroy_plan(fwd_);
        fftw_destroy_plan(bwd_);
    }
    Fft2d(const Fft2d &) = delete;
    Fft2d &operator=(const Fft2d &) = delete;

    void forward(std::vector<cplx> &data) const {
        auto *p = reinterpret_cast<fftw_complex *>(data.data());
        fftw_execute_dft(fwd_, p, p);
    }
    /// Inverse transform including the 1/n^2 factor.
    void backward(std::vector<cplx> &data) const {
        auto *p = reinterpret_cast<fftw_complex *>(data.data());
        fftw_execute_dft(bwd_, p, p);
        const double scale = 1.0 / (static_cast<double>(n_) * n_);
        for (auto &v : data)
            v *= scale;
    }

  private:
    int n_;
    fftw_plan fwd_ = nullptr;
    fftw_plan bwd_ = nullptr;
};

bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

/// (B_y, B_z) at (y, z).
std::array<double, 2> field(const Params &p, double y, double z) {
    switch (p.variant) {
    case Variant::Ideal:
        return {0.0, p.a - p.b * z};
    case Variant::Corrected:
        return {p.b * y, p.a - p.b * z};
    case Variant::Quadrupole:
        return {p.b * y, -p.b * z};
    }
    return {0.0, 0.0};
}

/// exp(-i theta n.sigma) with n in the (y, z) plane, stored row-major.
struct SpinPropagator {
    cplx u00, u01, u10, u11;
};

SpinPropagator spin_propagator(double by, double bz, double scale) {
    const double mag = std::hypot(by, bz);
    const double theta = scale * mag;
    if (mag == 0.0)
        return {1.0, 0.0, 0.0, 1.0};
    const double ny = by / mag;
    const double nz = bz / mag;
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    // cos(theta) I - i sin(theta) (ny sigma_y + nz sigma_z)
    return {cplx(c, -s * nz), cplx(-s * ny, 0.0), cplx(s * ny, 0.0),
            cplx(c, s * nz)};
}

void require_unit_spin(const CVector &spin) {
    if (spin.size() != 2)
        throw ValidationError("spin state must have two components");
    if (std::abs(spin.norm() - 1.0) > kDefaultTolerances.normalization)
        throw ValidationError("spin state is not normalized");
}

} // namespace

std::string to_string(Variant v) {
    switch (v) {
    case Variant::Ideal:
        return "ideal";
    case Variant::Corrected:
        return "corrected";
    case Variant::Quadrupole:
        return "quadrupole";
    }
    return "ideal";
}

Variant variant_from_string(const std::string &s) {
    if (s == "ideal")
        return Variant::Ideal;
    if (s == "corrected")
        return Variant::Corrected;
    if (s == "quadrupole")
        return Variant::Quadrupole;
    throw ValidationError("unknown Stern-Gerlach variant '" + s + "'");
}

// --- Params --------------------------------------------------------------------

Params Params::defaults(Variant v) {
    Params p;
    p.variant = v;
    return p;
}

void Params::validate() const {
    auto finite = [](double v) { return std::isfinite(v); };
    if (!finite(a) || !finite(b) || !finite(mu) || !finite(m) || !finite(tau) ||
        !finite(extent) || !finite(packet_width))
        throw ValidationError("Stern-Gerlach parameters must be finite");
    if (grid_n < 16 || !is_power_of_two(grid_n))
        throw ValidationError("grid_n must be a power of two >= 16");
    if (extent <= 0.0)
        throw ValidationError("extent must be positive");
    if (tau <= 0.0)
        throw ValidationError("tau must be positive");
    if (m <= 0.0)
        throw ValidationError("mass must be positive");
    if (steps < 0)
        throw ValidationError("steps must be >= 1 (or 0 for automatic)");
    if (packet_width <= 0.0 || packet_width > extent / 8.0)
        throw ValidationError("packet_width must lie in (0, extent/8]");
    if (variant == Variant::Quadrupole && a != 0.0)
        throw ValidationError("the quadrupole variant requires a = 0");
}

double Params::max_field_energy() const {
    const double h = dx();
    double best = 0.0;
    for (int i = 0; i < grid_n; ++i)
        for (int j = 0; j < grid_n; ++j) {
            const auto bf = field(*this, -extent + i * h, -extent + j * h);
            best = std::max(best, std::hypot(bf[0], bf[1]));
        }
    return 0.5 * std::abs(mu) * best;
}

int Params::resolved_steps() const {
    if (steps > 0)
        return steps;
    const double target = std::numbers::pi / 8.0;
    return std::max(1, static_cast<int>(std::ceil(tau * max_field_energy() /
                                                  target)));
}

// --- GridState -----------------------------------------------------------------

GridState::GridState(int grid_n, double extent) : n_(grid_n), extent_(extent) {
    const auto size = static_cast<std::size_t>(grid_n) * grid_n;
    psi_[0].assign(size, cplx(0.0, 0.0));
    psi_[1].assign(size, cplx(0.0, 0.0));
}

double GridState::wavenumber(int i) const {
    const int idx = i < n_ / 2 ? i : i - n_;
    return 2.0 * std::numbers::pi * idx / (n_ * dx());
}

double GridState::norm() const {
    double s = 0.0;
    for (const auto &comp : psi_)
        for (const auto &v : comp)
            s += std::norm(v);
    return s * dx() * dx();
}

std::array<double, 3> GridState::spin_expectation() const {
    cplx off = 0.0;
    double zz = 0.0;
    double total = 0.0;
    for (std::size_t i = 0; i < psi_[0].size(); ++i) {
        const cplx up = psi_[0][i];
        const cplx dn = psi_[1][i];
        off += std::conj(up) * dn;
        zz += std::norm(up) - std::norm(dn);
        total += std::norm(up) + std::norm(dn);
    }
    return {2.0 * off.real() / total, 2.0 * off.imag() / total, zz / total};
}

std::vector<cplx> GridState::momentum_amplitudes(int s) const {
    Fft2d fft(n_);
    std::vector<cplx> phi = psi_[s];
    fft.forward(phi);
    const double scale = dx() / n_;
    for (auto &v : phi)
        v *= scale;
    return phi;
}

std::array<double, 2> GridState::momentum_expectation() const {
    double py = 0.0;
    double pz = 0.0;
    double total = 0.0;
    for (int s = 0; s < 2; ++s) {
        const auto phi = momentum_amplitudes(s);
        for (int i = 0; i < n_; ++i)
            for (int j = 0; j < n_; ++j) {
                const double w = std::norm(phi[static_cast<std::size_t>(i) * n_ + j]);
                py += wavenumber(i) * w;
                pz += wavenumber(j) * w;
                total += w;
            }
    }
    return {py / total, pz / total};
}

double GridState::angular_momentum_x() const {
    Fft2d fft(n_);
    const auto size = psi_[0].size();
    cplx acc = 0.0;
    for (int s = 0; s < 2; ++s) {
        std::vector<cplx> phi = psi_[s];
        fft.forward(phi);
        std::vector<cplx> dz(size);
        std::vector<cplx> dy(size);
        for (int i = 0; i < n_; ++i)
            for (int j = 0; j < n_; ++j) {
                const auto idx = static_cast<std::size_t>(i) * n_ + j;
                dz[idx] = wavenumber(j) * phi[idx];
                dy[idx] = wavenumber(i) * phi[idx];
            }
        fft.backward(dz); // P_z psi
        fft.backward(dy); // P_y psi
        for (int i = 0; i < n_; ++i)
            for (int j = 0; j < n_; ++j) {
                const auto idx = static_cast<std::size_t>(i) * n_ + j;
                acc += std::conj(psi_[s][idx]) *
                       (coordinate(i) * dz[idx] - coordinate(j) * dy[idx]);
            }
    }
    return acc.real() * dx() * dx() / norm();
}

// --- simulation ------------------------------------------------------------------

GridState build_initial_state(const Params &params, const CVector &spin) {
    params.validate();
    require_unit_spin(spin);
    GridState st(params.grid_n, params.extent);
    const int n = params.grid_n;
    const double w = params.packet_width;
    std::vector<double> g(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        const double x = st.coordinate(i);
        g[static_cast<std::size_t>(i)] = std::exp(-x * x / (4.0 * w * w));
    }
    for (int s = 0; s < 2; ++s) {
        auto &comp = st.component(s);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                comp[static_cast<std::size_t>(i) * n + j] =
                    spin(s) * g[static_cast<std::size_t>(i)] *
                    g[static_cast<std::size_t>(j)];
    }
    const double scale = 1.0 / std::sqrt(st.norm());
    for (int s = 0; s < 2; ++s)
        for (auto &v : st.component(s))
            v *= scale;
    return st;
}

Evolution evolve(const GridState &initial, const Params &params,
                 int record_every) {
    params.validate();
    if (initial.grid_n() != params.grid_n || initial.extent() != params.extent)
        throw ValidationError("grid state does not match the parameters");
    const int n = params.grid_n;
    const auto size = static_cast<std::size_t>(n) * n;
    const int steps = params.resolved_steps();
    const double dt = params.tau / steps;
    const double half_mu = 0.5 * params.mu;

    Evolution ev{initial, {}, steps, 0.0, 0.0, 0.0};
    ev.max_phase_per_step = dt * params.max_field_energy();
    if (ev.max_phase_per_step > std::numbers::pi / 4.0)
        throw NumericalError("potential phase per step exceeds pi/4; "
                             "increase steps");

    GridState &st = ev.state;
    std::vector<cplx> kinetic(size);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const double ky = st.wavenumber(i);
            const double kz = st.wavenumber(j);
            const double e = (ky * ky + kz * kz) / (2.0 * params.m);
            kinetic[static_cast<std::size_t>(i) * n + j] =
                std::exp(cplx(0.0, -e * 0.5 * dt));
        }
    std::vector<SpinPropagator> potential(size);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const auto bf = field(params, st.coordinate(i), st.coordinate(j));
            potential[static_cast<std::size_t>(i) * n + j] =
                spin_propagator(bf[0], bf[1], dt * half_mu);
        }

    // d<F>: F_y = -(mu/2) dB_y/dy sigma_y, F_z = -(mu/2) dB_z/dz sigma_z.
    const double dby = params.variant == Variant::Ideal ? 0.0 : params.b;
    const double dbz = -params.b;
    auto force = [&](const std::array<double, 3> &s) {
        return std::array<double, 2>{-half_mu * dby * s[1],
                                     -half_mu * dbz * s[2]};
    };

    Fft2d fft(n);
    const double mscale = st.dx() / n;
    auto momentum_from_k = [&](const std::array<std::vector<cplx>, 2> &phi) {
        double py = 0.0, pz = 0.0, total = 0.0;
        for (int s = 0; s < 2; ++s)
            for (int i = 0; i < n; ++i) {
                const double ky = st.wavenumber(i);
                for (int j = 0; j < n; ++j) {
                    const double w =
                        std::norm(phi[s][static_cast<std::size_t>(i) * n + j]) *
                        mscale * mscale;
                    py += ky * w;
                    pz += st.wavenumber(j) * w;
                    total += w;
                }
            }
        return std::array<double, 2>{py / total, pz / total};
    };

    const double norm0 = st.norm();
    auto p_prev = st.momentum_expectation();
    auto s_prev = st.spin_expectation();
    ev.series.push_back({0.0, p_prev[0], p_prev[1], s_prev[0], s_prev[1],
                         s_prev[2], norm0});
    auto f_prev = force(s_prev);
    double max_force = std::max(std::abs(f_prev[0]), std::abs(f_prev[1]));
    double max_dev = 0.0;

    // Adjacent half kinetic steps are merged: between steps the stored state
    // is K_half psi_j. P, sigma and the norm commute with the kinetic phase,
    // so the recorded series is that of the Strang iterates psi_j.
    std::vector<cplx> kinetic_full(size);
    for (std::size_t k = 0; k < size; ++k)
        kinetic_full[k] = kinetic[k] * kinetic[k];
    std::array<std::vector<cplx>, 2> work;
    for (int s = 0; s < 2; ++s) {
        work[s] = std::move(st.component(s));
        fft.forward(work[s]);
        for (std::size_t k = 0; k < size; ++k)
            work[s][k] *= kinetic[k];
        fft.backward(work[s]);
    }
    for (int step = 1; step <= steps; ++step) {
        for (std::size_t k = 0; k < size; ++k) {
            const SpinPropagator &u = potential[k];
            const cplx up = work[0][k];
            const cplx dn = work[1][k];
            work[0][k] = u.u00 * up + u.u01 * dn;
            work[1][k] = u.u10 * up + u.u11 * dn;
        }
        const auto &kin = step == steps ? kinetic : kinetic_full;
        for (int s = 0; s < 2; ++s) {
            fft.forward(work[s]);
            for (std::size_t k = 0; k < size; ++k)
                work[s][k] *= kin[k];
        }
        const auto p_now = momentum_from_k(work);
        for (int s = 0; s < 2; ++s)
            fft.backward(work[s]);
        for (int s = 0; s < 2; ++s)
            st.component(s) = work[s];
        const auto s_now = st.spin_expectation();
        const auto f_now = force(s_now);
        for (int c = 0; c < 2; ++c) {
            const double rate = (p_now[c] - p_prev[c]) / dt;
            const double mean_force = 0.5 * (f_now[c] + f_prev[c]);
            max_dev = std::max(max_dev, std::abs(rate - mean_force));
            max_force = std::max(max_force, std::abs(f_now[c]));
        }
        if (step % record_every == 0 || step == steps)
            ev.series.push_back({step * dt, p_now[0], p_now[1], s_now[0],
                                 s_now[1], s_now[2], st.norm()});
        p_prev = p_now;
        f_prev = f_now;
    }
    ev.norm_drift = std::abs(st.norm() - norm0);
    ev.ehrenfest_deviation = max_force > 0.0 ? max_dev / max_force : max_dev;
    return ev;
}

ProbabilityRecord readout_momentum_bins(const GridState &state,
                                        Variant variant) {
    const int n = state.grid_n();
    const auto phi_up = state.momentum_amplitudes(0);
    const auto phi_dn = state.momentum_amplitudes(1);
    // Weight of bin "positive" for a wavenumber: 1, 0, or 1/2 on the zero line.
    auto positive_weight = [](double k) {
        return k > 0.0 ? 1.0 : (k < 0.0 ? 0.0 : 0.5);
    };
    double pp = 0.0, pm = 0.0, mp = 0.0, mm = 0.0; // (sign p_y, sign p_z)
    for (int i = 0; i < n; ++i) {
        const double wy = positive_weight(state.wavenumber(i));
        for (int j = 0; j < n; ++j) {
            const double wz = positive_weight(state.wavenumber(j));
            const auto idx = static_cast<std::size_t>(i) * n + j;
            const double rho = std::norm(phi_up[idx]) + std::norm(phi_dn[idx]);
            pp += rho * wy * wz;
            pm += rho * wy * (1.0 - wz);
            mp += rho * (1.0 - wy) * wz;
            mm += rho * (1.0 - wy) * (1.0 - wz);
        }
    }
    const double total = pp + pm + mp + mm;
    ProbabilityRecord rec;
    if (variant == Variant::Quadrupole) {
        rec.labels = {"y+z+", "y+z-", "y-z+", "y-z-"};
        rec.values = {pp / total, pm / total, mp / total, mm / total};
    } else {
        rec.labels = {"up", "down"};
        rec.values = {(pp + mp) / total, (pm + mm) / total};
    }
    return rec;
}

ProbabilityRecord run(const Params &params, const CVector &spin) {
    const GridState init = build_initial_state(params, spin);
    const Evolution ev = evolve(init, params, params.resolved_steps());
    return readout_momentum_bins(ev.state, params.variant);
}

namespace {

std::vector<CVector> probe_spins() {
    std::vector<CVector> spins;
    spins.push_back(spin_state(Axis::Z, true));
    spins.push_back(spin_state(Axis::Z, false));
    spins.push_back(spin_state(Axis::X, true));
    spins.push_back(spin_state(Axis::Y, true));
    return spins;
}

/// Independent runs, one per spin input, evaluated concurrently.
std::vector<ProbabilityRecord> run_batch(const Params &params,
                                         const std::vector<CVector> &spins) {
    std::vector<std::future<ProbabilityRecord>> jobs;
    jobs.reserve(spins.size());
    for (const auto &s : spins)
        jobs.push_back(std::async(std::launch::async,
                                  [&params, s] { return run(params, s); }));
    std::vector<ProbabilityRecord> out;
    out.reserve(spins.size());
    for (auto &j : jobs)
        out.push_back(j.get());
    return out;
}

struct ProbeTable {
    std::vector<DensityOperator> probes;
    std::vector<std::vector<double>> probs;
    std::vector<std::string> labels;
};

ProbeTable run_probes(const Params &params) {
    const auto spins = probe_spins();
    const auto recs = run_batch(params, spins);
    ProbeTable t;
    for (std::size_t i = 0; i < spins.size(); ++i) {
        t.probes.push_back(DensityOperator::pure(spins[i]));
        t.probs.push_back(recs[i].values);
    }
    t.labels = recs.front().labels;
    return t;
}

} // namespace

StochasticMatrix calibrate(const Params &params) {
    if (params.variant == Variant::Quadrupole)
        throw ValidationError("calibration needs a univariate variant");
    const auto recs = run_batch(
        params, {spin_state(Axis::Z, true), spin_state(Axis::Z, false)});
    RMatrix lam(2, 2);
    for (int col = 0; col < 2; ++col)
        for (int k = 0; k < 2; ++k)
            lam(k, col) = recs[static_cast<std::size_t>(col)].values[static_cast<std::size_t>(k)];
    return StochasticMatrix(std::move(lam));
}

TomographyResult extract_effects(const Params &params) {
    if (params.variant == Variant::Quadrupole)
        throw ValidationError("univariate extraction needs a univariate variant");
    const ProbeTable t = run_probes(params);
    return reconstruct_effects(t.probes, t.probs, t.labels);
}

BivariateExtraction extract_bivariate_effects(const Params &params) {
    if (params.variant != Variant::Quadrupole)
        throw ValidationError("bivariate extraction needs the quadrupole variant");
    const ProbeTable t = run_probes(params);
    const TomographyResult flat = reconstruct_effects(t.probes, t.probs, t.labels);
    std::vector<std::vector<Operator>> grid(2);
    for (std::size_t k = 0; k < 2; ++k)
        for (std::size_t l = 0; l < 2; ++l)
            grid[k].push_back(flat.effects[2 * k + l]);
    Tolerances relaxed;
    relaxed.positivity = relaxed.extracted_effect_negativity;
    return {BivariateEffectSet(std::move(grid), {"y+", "y-"}, {"z+", "z-"},
                               relaxed),
            flat.condition_number};
}

CVector reference_spin() {
    CVector s(2);
    s << std::cos(0.55), std::exp(cplx(0.0, 0.4)) * std::sin(0.55);
    return s;
}

double conserved_quantity_residual(const Params &params, Observable obs,
                                   const CVector &spin) {
    const GridState init = build_initial_state(params, spin);
    const Evolution ev = evolve(init, params, params.resolved_steps());
    if (obs == Observable::SigmaZ)
        return std::abs(ev.series.back().sigma_z - ev.series.front().sigma_z);
    auto value = [](const GridState &st) {
        return st.angular_momentum_x() - 0.5 * st.spin_expectation()[0];
    };
    return std::abs(value(ev.state) - value(init));
}

double field_divergence(Variant variant, const Params &params) {
    // d(B_y)/dy + d(B_z)/dz
    switch (variant) {
    case Variant::Ideal:
        return -params.b;
    case Variant::Corrected:
    case Variant::Quadrupole:
        return params.b - params.b;
    }
    return 0.0;
}

double ideal_correct_bin_probability(const Params &params) {
    const double dp = 0.5 * params.mu * params.b * params.tau;
    const double sigma_p = 1.0 / (2.0 * params.packet_width);
    return 0.5 * std::erfc(-dp / (sigma_p * std::numbers::sqrt2));
}

} // namespace povmsim::sg
