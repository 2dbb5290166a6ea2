// Copyright 2026 The weakprobe Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

/*
 *  Entropy change of the probe under a weak measurement.
 *
 *  With sigma the probe's reduced state and
 *      omega = sigma ln sigma / Tr(sigma ln sigma),
 *  the first-order entropy ratio is
 *
 *      S_f / S_i = (1 + 2 phi Im(O_W) Tr(K omega))
 *                / (1 + 2 phi Im(O_W) Tr(K sigma)),
 *
 *  so entanglement grows iff Im(O_W) * Tr(K (omega - sigma)) > 0. The
 *  second factor is the witness gap; it vanishes for maximally entangled
 *  probes and whenever K is proportional to the identity.
 */

#include <cmath>
#include <complex>
#include <span>
#include <string>
#include <vector>

#include "weakprobe/quantum_core.hpp"
#include "weakprobe/weak_measurement.hpp"

namespace weakprobe {

/// Probes with entropy below this are treated as separable.
inline constexpr double eps_entropy = 1e-9;
/// |first-order gain| at or below this yields an "unchanged" verdict.
inline constexpr double eps_gain = 1e-12;

/// sigma ln sigma / Tr(sigma ln sigma). Throws DegenerateProbe for (near-)pure sigma.
inline DensityMatrix omega_state(const DensityMatrix &sigma) {
    const double S = von_neumann_entropy(sigma);
    if(S < eps_entropy) throw DegenerateProbe("reduced probe state is pure (entropy " + std::to_string(S) + "); omega is undefined");
    Matrix w = hermitian_log_weighted(sigma);
    w /= w.trace();
    w = 0.5 * (w + w.adjoint()).eval();
    return DensityMatrix(std::move(w));
}

/// Tr(K (omega - sigma)) from Schmidt-basis diagonals; `sigma` must be
/// expressed in the Schmidt basis in which K = diag(kappa_spectrum).
inline double witness_gap(std::span<const double> kappa_spectrum, const DensityMatrix &sigma) {
    if(Index(kappa_spectrum.size()) != sigma.dim()) throw DimensionMismatch("witness gap: kappa spectrum and sigma dimensions differ");
    const DensityMatrix omega = omega_state(sigma);
    double              gap   = 0.0;
    for(std::size_t k = 0; k < kappa_spectrum.size(); ++k) {
        const auto kk = Index(k);
        gap += kappa_spectrum[k] * (omega.matrix()(kk, kk).real() - sigma.matrix()(kk, kk).real());
    }
    return gap;
}

namespace detail {
inline double kappa_trace(std::span<const double> kappa, const DensityMatrix &rho) {
    double t = 0.0;
    for(std::size_t k = 0; k < kappa.size(); ++k) t += kappa[k] * rho.matrix()(Index(k), Index(k)).real();
    return t;
}
} // namespace detail

/// First-order entropy ratio S_f / S_i, evaluated as the closed-form quotient.
inline double entropy_ratio_first_order(const WeakMeasurementSetup &setup) {
    const cplx          ow    = weak_value(setup.ancilla());
    const DensityMatrix sigma = setup.sigma();
    const DensityMatrix omega = omega_state(sigma);
    const double        x     = 2.0 * setup.phi() * ow.imag();
    const auto         &kappa = setup.kappa_spectrum();
    return (1.0 + x * detail::kappa_trace(kappa, omega)) / (1.0 + x * detail::kappa_trace(kappa, sigma));
}

/// S(reduced exact final state) / S(sigma_i).
inline double entropy_ratio_exact(const WeakMeasurementSetup &setup) {
    const double S_i = entropy_from_spectrum(setup.probe().populations());
    if(S_i < eps_entropy) throw DegenerateProbe("probe is separable (entropy " + std::to_string(S_i) + "); entropy ratio is undefined");
    const auto exact = exact_evolve_postselect(setup);
    return entropy_from_spectrum(exact.final_probe.populations()) / S_i;
}

/// Procrustean output coefficients t_k in the input Schmidt order:
/// t_k proportional to s_k |1 - i phi O_W lambda_k|.
inline std::vector<double> procrustean_coefficients(const WeakMeasurementSetup &setup) {
    const cplx          ow = weak_value(setup.ancilla());
    const auto         &s  = setup.probe().coefficients();
    std::vector<double> t(s.size());
    double              norm2 = 0.0;
    for(std::size_t k = 0; k < s.size(); ++k) {
        t[k] = s[k] * std::abs(1.0 - cplx(0.0, 1.0) * setup.phi() * ow * setup.kappa_spectrum()[k]);
        norm2 += t[k] * t[k];
    }
    const double norm = std::sqrt(norm2);
    for(auto &x : t) x /= norm;
    return t;
}

/// First-order reduced probe populations in the Schmidt basis:
/// (sigma + 2 phi Im(O_W) K sigma) / (1 + 2 phi Im(O_W) Tr(K sigma)).
inline std::vector<double> reduced_populations_first_order(const WeakMeasurementSetup &setup) {
    const cplx          ow = weak_value(setup.ancilla());
    const double        x  = 2.0 * setup.phi() * ow.imag();
    const auto          p  = setup.probe().populations();
    const double        den = 1.0 + x * setup.kappa_expectation();
    std::vector<double> out(p.size());
    for(std::size_t k = 0; k < p.size(); ++k) out[k] = (p[k] + x * setup.kappa_spectrum()[k] * p[k]) / den;
    return out;
}

enum class Verdict { concentrated, diluted, unchanged };

inline const char *to_string(Verdict v) {
    switch(v) {
        case Verdict::concentrated: return "concentrated";
        case Verdict::diluted: return "diluted";
        case Verdict::unchanged: return "unchanged";
    }
    return "unknown";
}

inline Verdict verdict_for_gain(double gain) {
    if(gain > eps_gain) return Verdict::concentrated;
    if(gain < -eps_gain) return Verdict::diluted;
    return Verdict::unchanged;
}

struct ConcentrationReport {
    cplx    weak_value;
    double  witness_gap               = 0.0; ///< Tr(K (omega - sigma_i))
    double  first_order_gain          = 0.0; ///< Im(O_W) * witness_gap
    double  ratio_first_order         = 1.0;
    double  ratio_exact               = 1.0;
    double  success_probability_exact = 0.0;
    Verdict verdict                   = Verdict::unchanged;
};

inline ConcentrationReport concentration_report(const WeakMeasurementSetup &setup) {
    ConcentrationReport r;
    r.weak_value       = weak_value(setup.ancilla());
    r.witness_gap      = witness_gap(setup.kappa_spectrum(), setup.sigma());
    r.first_order_gain = r.weak_value.imag() * r.witness_gap;
    r.ratio_first_order = entropy_ratio_first_order(setup);

    const double S_i   = entropy_from_spectrum(setup.probe().populations());
    const auto   exact = exact_evolve_postselect(setup);
    r.ratio_exact               = entropy_from_spectrum(exact.final_probe.populations()) / S_i;
    r.success_probability_exact = exact.success_probability;
    r.verdict                   = verdict_for_gain(r.first_order_gain);
    return r;
}

} // namespace weakprobe
