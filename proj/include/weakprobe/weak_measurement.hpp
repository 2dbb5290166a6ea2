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
 *  Weak values of a pre/post-selected ancilla, and the state of an
 *  entangled probe after one of its halves couples to that ancilla through
 *  exp(-i phi K (x) O) and the ancilla is post-selected.
 *
 *  Two evolutions are provided:
 *    exact_evolve_postselect  -- no approximation; each Schmidt branch k
 *                                evolves the ancilla by exp(-i phi lambda_k O)
 *    weak_limit_state         -- the linear-in-phi state
 *                                (I - i phi O_W (I (x) K)) |psi>, normalized
 *
 *  K is carried by its spectrum lambda_k in the probe's Schmidt basis.
 */

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "weakprobe/quantum_core.hpp"

namespace weakprobe {

/// Post-selection overlaps |<f|i>| below this make the weak value undefined.
inline constexpr double default_eps_overlap = 1e-10;

/// Exact post-selection probabilities below this are treated as zero.
inline constexpr double min_success_probability = 1e-20;

/// Pre-selection |i>, post-selection |f> and observable O on the ancilla.
class AncillaSelection {
  public:
    AncillaSelection(StateVector pre, StateVector post, HermitianObservable observable, double eps_overlap = default_eps_overlap)
        : pre_(std::move(pre)), post_(std::move(post)), obs_(std::move(observable)) {
        if(pre_.dim() != post_.dim() || pre_.dim() != obs_.dim())
            throw DimensionMismatch("ancilla pre-selection, post-selection and observable must share one dimension");
        overlap_    = inner(post_, pre_);
        orthogonal_ = !(std::abs(overlap_) > eps_overlap);
    }

    [[nodiscard]] const StateVector         &pre() const { return pre_; }
    [[nodiscard]] const StateVector         &post() const { return post_; }
    [[nodiscard]] const HermitianObservable &observable() const { return obs_; }
    [[nodiscard]] Index                      dim() const { return pre_.dim(); }
    /// <f|i>
    [[nodiscard]] cplx   overlap() const { return overlap_; }
    [[nodiscard]] double overlap_abs() const { return std::abs(overlap_); }
    [[nodiscard]] bool   orthogonal() const { return orthogonal_; }

  private:
    StateVector         pre_;
    StateVector         post_;
    HermitianObservable obs_;
    cplx                overlap_{};
    bool                orthogonal_ = false;
};

/// <f|O|i> / <f|i>
inline cplx weak_value(const AncillaSelection &sel) {
    if(sel.orthogonal())
        throw PostSelectionOrthogonal("post-selection is orthogonal to pre-selection (|<f|i>| = " + std::to_string(sel.overlap_abs()) +
                                      "); the weak value is undefined");
    const Vector o_i = sel.observable().matrix() * sel.pre().amplitudes();
    return sel.post().amplitudes().dot(o_i) / sel.overlap();
}

/// One complete experiment: probe |psi_i>, spectrum of K in the probe's
/// Schmidt basis (acting on subsystem B), ancilla selection and phi = kappa T.
class WeakMeasurementSetup {
  public:
    WeakMeasurementSetup(SchmidtForm probe, std::vector<double> kappa_spectrum, AncillaSelection ancilla, double phi)
        : probe_(std::move(probe)), kappa_(std::move(kappa_spectrum)), ancilla_(std::move(ancilla)), phi_(phi) {
        if(Index(kappa_.size()) != probe_.rank())
            throw DimensionMismatch("kappa spectrum has " + std::to_string(kappa_.size()) + " entries but the probe has Schmidt rank " +
                                    std::to_string(probe_.rank()));
        if(!(phi_ >= 0.0) || !std::isfinite(phi_)) throw InvariantViolation("coupling phi must be finite and nonnegative");
    }

    /// Builds a setup from the full matrix of K on subsystem B. K must have
    /// the Schmidt basis as an eigenbasis: [K, |b_k><b_k|] = 0 for all k.
    static WeakMeasurementSetup with_probe_observable(SchmidtForm probe, const HermitianObservable &K, AncillaSelection ancilla, double phi) {
        if(K.dim() != probe.dim_b()) throw DimensionMismatch("probe observable dimension differs from subsystem B");
        std::vector<double> lambda(static_cast<std::size_t>(probe.rank()));
        for(Index k = 0; k < probe.rank(); ++k) {
            const Vector b  = probe.basis_b().col(k);
            const Matrix P  = b * b.adjoint();
            const double cm = max_abs(K.matrix() * P - P * K.matrix());
            if(cm > 1e-10)
                throw ObservableNotSchmidtDiagonal("probe observable does not commute with Schmidt projector " + std::to_string(k) +
                                                   " (max |[K,P]| = " + std::to_string(cm) + ")");
            lambda[std::size_t(k)] = b.dot(K.matrix() * b).real();
        }
        return WeakMeasurementSetup(std::move(probe), std::move(lambda), std::move(ancilla), phi);
    }

    [[nodiscard]] const SchmidtForm         &probe() const { return probe_; }
    [[nodiscard]] const std::vector<double> &kappa_spectrum() const { return kappa_; }
    [[nodiscard]] const AncillaSelection    &ancilla() const { return ancilla_; }
    [[nodiscard]] double                     phi() const { return phi_; }

    [[nodiscard]] WeakMeasurementSetup with_phi(double phi) const { return {probe_, kappa_, ancilla_, phi}; }

    /// sigma_i in the Schmidt basis: diag(s_k^2).
    [[nodiscard]] DensityMatrix sigma() const {
        const auto p = probe_.populations();
        return DensityMatrix::diagonal(p);
    }

    /// Tr(K sigma_i) = <psi_i|(I (x) K)|psi_i> = sum_k lambda_k s_k^2
    [[nodiscard]] double kappa_expectation() const {
        double t = 0.0;
        for(std::size_t k = 0; k < kappa_.size(); ++k) t += kappa_[k] * probe_.coefficients()[k] * probe_.coefficients()[k];
        return t;
    }

  private:
    SchmidtForm         probe_;
    std::vector<double> kappa_;
    AncillaSelection    ancilla_;
    double              phi_;
};

enum class EvolutionMode { exact, weak_limit };

struct EvolutionResult {
    SchmidtForm   final_probe;
    double        success_probability = 0.0;
    EvolutionMode mode                = EvolutionMode::exact;
    /// final_probe branch j is the input probe's branch branch_order[j]
    std::vector<Index> branch_order;
    /// set when the first-order success probability left [0,1] and was clamped
    bool probability_clamped = false;
};

namespace detail {

/// Normalizes unnormalized branch amplitudes c_k attached to the probe's
/// Schmidt pairs. Phases of c_k move into |b_k>; branches are re-sorted by
/// descending magnitude (stable, so equal magnitudes keep input order).
inline std::pair<SchmidtForm, std::vector<Index>> rebuild_schmidt_form(const SchmidtForm &probe, const std::vector<cplx> &c) {
    const Index K     = probe.rank();
    double      norm2 = 0.0;
    for(const auto &x : c) norm2 += std::norm(x);
    const double norm = std::sqrt(norm2);

    std::vector<Index> order(static_cast<std::size_t>(K));
    std::iota(order.begin(), order.end(), Index{0});
    std::stable_sort(order.begin(), order.end(), [&](Index l, Index r) { return std::abs(c[std::size_t(l)]) > std::abs(c[std::size_t(r)]); });

    std::vector<double> s(static_cast<std::size_t>(K));
    Matrix              a(probe.dim_a(), K);
    Matrix              b(probe.dim_b(), K);
    for(Index j = 0; j < K; ++j) {
        const Index  k   = order[std::size_t(j)];
        const cplx   ck  = c[std::size_t(k)];
        const double mag = std::abs(ck);
        s[std::size_t(j)] = mag / norm;
        a.col(j)          = probe.basis_a().col(k);
        b.col(j)          = mag > 0.0 ? Vector(probe.basis_b().col(k) * (ck / mag)) : Vector(probe.basis_b().col(k));
    }
    return {SchmidtForm(std::move(s), std::move(a), std::move(b)), std::move(order)};
}

} // namespace detail

/// Exact post-selected probe state. Unnormalized branch amplitudes are
/// c_k = s_k <f| exp(-i phi lambda_k O) |i>, and the success probability is
/// sum_k |c_k|^2.
inline EvolutionResult exact_evolve_postselect(const WeakMeasurementSetup &setup) {
    const auto &sel = setup.ancilla();
    // O = V diag(o) V^dag, so <f|exp(-i t O)|i> = sum_m conj(f~_m) i~_m exp(-i t o_m)
    Eigen::SelfAdjointEigenSolver<Matrix> es(sel.observable().matrix());
    const Vector f_rot = es.eigenvectors().adjoint() * sel.post().amplitudes();
    const Vector i_rot = es.eigenvectors().adjoint() * sel.pre().amplitudes();
    const auto  &o     = es.eigenvalues();

    const auto       &s = setup.probe().coefficients();
    std::vector<cplx> c(s.size());
    double            total = 0.0;
    for(std::size_t k = 0; k < s.size(); ++k) {
        const double t   = setup.phi() * setup.kappa_spectrum()[k];
        cplx         amp = 0.0;
        for(Index m = 0; m < o.size(); ++m) amp += std::conj(f_rot(m)) * i_rot(m) * std::polar(1.0, -t * o(m));
        c[k] = s[k] * amp;
        total += std::norm(c[k]);
    }
    if(total < min_success_probability)
        throw PostSelectionImpossible("exact post-selection probability " + std::to_string(total) + " is zero");

    auto [form, order] = detail::rebuild_schmidt_form(setup.probe(), c);
    return EvolutionResult{std::move(form), std::min(total, 1.0), EvolutionMode::exact, std::move(order), false};
}

/// Linear-in-phi probe state (I - i phi O_W (I (x) K)) |psi_i>, normalized by
/// its true norm. The success probability is the first-order expression
/// |<f|i>|^2 (1 + 2 phi Im(O_W) Tr(K sigma_i)), clamped to [0,1].
inline EvolutionResult weak_limit_state(const WeakMeasurementSetup &setup) {
    const cplx  ow = weak_value(setup.ancilla());
    const auto &s  = setup.probe().coefficients();

    std::vector<cplx> w(s.size());
    double            total = 0.0;
    for(std::size_t k = 0; k < s.size(); ++k) {
        w[k] = s[k] * (1.0 - cplx(0.0, 1.0) * setup.phi() * ow * setup.kappa_spectrum()[k]);
        total += std::norm(w[k]);
    }
    if(!(total > 0.0)) throw PostSelectionImpossible("first-order probe state vanishes");

    const double p_raw   = std::norm(setup.ancilla().overlap()) * (1.0 + 2.0 * setup.phi() * ow.imag() * setup.kappa_expectation());
    const double p       = std::clamp(p_raw, 0.0, 1.0);
    auto [form, order]   = detail::rebuild_schmidt_form(setup.probe(), w);
    return EvolutionResult{std::move(form), p, EvolutionMode::weak_limit, std::move(order), p != p_raw};
}

/// Trace distance 0.5 * sum |eig(rho - sigma)|.
inline double trace_distance(const DensityMatrix &rho, const DensityMatrix &sigma) {
    if(rho.dim() != sigma.dim()) throw DimensionMismatch("trace distance of density matrices with different dimensions");
    Eigen::SelfAdjointEigenSolver<Matrix> es(rho.matrix() - sigma.matrix(), Eigen::EigenvaluesOnly);
    return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

struct ApproximationError {
    double state_distance = 0.0; ///< trace distance of the reduced states
    double prob_gap       = 0.0; ///< |p_exact - p_weak|
};

/// How far the weak-limit state and probability are from the exact ones.
inline ApproximationError approximation_error(const WeakMeasurementSetup &setup) {
    const auto exact = exact_evolve_postselect(setup);
    const auto weak  = weak_limit_state(setup);
    return {trace_distance(partial_trace(exact.final_probe, Subsystem::B), partial_trace(weak.final_probe, Subsystem::B)),
            std::abs(exact.success_probability - weak.success_probability)};
}

} // namespace weakprobe
