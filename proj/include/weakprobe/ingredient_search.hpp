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
 *  Search over ancilla ingredients (|i>, |f>, O) for a fixed probe, K
 *  spectrum and coupling phi. Every candidate is scored by its first-order
 *  concentration gain Im(O_W) * Tr(K (omega - sigma)) and by its exact
 *  post-selection probability; pareto_filter keeps the trade-off front.
 *
 *  Candidate n of a random search draws from its own generator seeded with
 *  (seed ^ n), so results do not depend on evaluation order.
 */

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "weakprobe/concentration.hpp"
#include "weakprobe/quantum_core.hpp"
#include "weakprobe/weak_measurement.hpp"

namespace weakprobe {

/// Qubit state (cos(theta/2), e^{i chi} sin(theta/2)).
inline StateVector qubit_state(double theta, double chi) {
    Vector v(2);
    v(0) = std::cos(0.5 * theta);
    v(1) = std::polar(std::sin(0.5 * theta), chi);
    return StateVector(std::move(v));
}

/// Fixed probe, K spectrum and phi; ancilla ingredients drawn from the
/// observable pool and from pure states of the pool's dimension.
class CandidateSpace {
  public:
    CandidateSpace(SchmidtForm probe, std::vector<double> kappa_spectrum, std::vector<HermitianObservable> observable_pool, double phi)
        : probe_(std::move(probe)), kappa_(std::move(kappa_spectrum)), pool_(std::move(observable_pool)), phi_(phi) {
        if(pool_.empty()) throw InvariantViolation("candidate space needs at least one ancilla observable");
        for(const auto &o : pool_)
            if(o.dim() != pool_.front().dim()) throw DimensionMismatch("all pool observables must act on the same ancilla dimension");
        if(probe_.rank() < 2) throw DegenerateProbe("candidate space needs an entangled probe (Schmidt rank >= 2)");
        if(entropy_from_spectrum(probe_.populations()) < eps_entropy) throw DegenerateProbe("candidate space probe is separable");
        if(Index(kappa_.size()) != probe_.rank()) throw DimensionMismatch("kappa spectrum length differs from probe Schmidt rank");
        if(!(phi_ >= 0.0) || !std::isfinite(phi_)) throw InvariantViolation("coupling phi must be finite and nonnegative");
    }

    [[nodiscard]] const SchmidtForm                      &probe() const { return probe_; }
    [[nodiscard]] const std::vector<double>              &kappa_spectrum() const { return kappa_; }
    [[nodiscard]] const std::vector<HermitianObservable> &observable_pool() const { return pool_; }
    [[nodiscard]] double                                  phi() const { return phi_; }
    [[nodiscard]] Index                                   ancilla_dim() const { return pool_.front().dim(); }
    [[nodiscard]] bool                                    qubit_ancilla() const { return ancilla_dim() == 2; }

  private:
    SchmidtForm                      probe_;
    std::vector<double>              kappa_;
    std::vector<HermitianObservable> pool_;
    double                           phi_;
};

struct Ingredients {
    StateVector pre;
    StateVector post;
    std::size_t observable_index = 0;
};

namespace detail {
inline int compare_amplitudes(const Vector &l, const Vector &r) {
    for(Index k = 0; k < std::min(l.size(), r.size()); ++k) {
        if(l(k).real() != r(k).real()) return l(k).real() < r(k).real() ? -1 : 1;
        if(l(k).imag() != r(k).imag()) return l(k).imag() < r(k).imag() ? -1 : 1;
    }
    return l.size() == r.size() ? 0 : (l.size() < r.size() ? -1 : 1);
}
} // namespace detail

/// Lexicographic: observable index, then pre amplitudes, then post amplitudes
/// (each amplitude compared by real part, then imaginary part).
inline bool ingredient_less(const Ingredients &l, const Ingredients &r) {
    if(l.observable_index != r.observable_index) return l.observable_index < r.observable_index;
    if(int c = detail::compare_amplitudes(l.pre.amplitudes(), r.pre.amplitudes()); c != 0) return c < 0;
    return detail::compare_amplitudes(l.post.amplitudes(), r.post.amplitudes()) < 0;
}

struct CandidateResult {
    Ingredients ingredients;
    cplx        weak_value{};
    double      first_order_gain          = 0.0;
    double      success_probability_exact = 0.0;
    bool        feasible                  = true;
};

struct RandomStrategy {};
struct GridStrategy {
    int theta_points = 9; ///< lattice over [0, pi], endpoints included
    int chi_points   = 8; ///< lattice over [0, 2 pi), 2 pi excluded
};

struct SearchConfig {
    std::uint64_t                              seed        = 0;
    std::size_t                                samples     = 1;
    double                                     min_success = 0.01;
    std::variant<RandomStrategy, GridStrategy> strategy    = RandomStrategy{};

    void validate() const {
        if(samples < 1) throw InvariantViolation("search samples must be >= 1");
        if(!(min_success >= 0.0 && min_success <= 1.0)) throw InvariantViolation("min_success must lie in [0, 1]");
        if(const auto *g = std::get_if<GridStrategy>(&strategy)) {
            if(g->theta_points < 2) throw InvariantViolation("grid needs at least 2 theta points");
            if(g->chi_points < 1) throw InvariantViolation("grid needs at least 1 chi point");
        }
    }
};

inline WeakMeasurementSetup make_setup(const CandidateSpace &space, const Ingredients &ing, double eps_overlap = default_eps_overlap) {
    if(ing.observable_index >= space.observable_pool().size()) throw DimensionMismatch("observable index outside the pool");
    return {space.probe(), space.kappa_spectrum(), AncillaSelection(ing.pre, ing.post, space.observable_pool()[ing.observable_index], eps_overlap),
            space.phi()};
}

/// Scores one ingredient choice. Orthogonal or impossible post-selections
/// come back with feasible = false instead of throwing.
inline CandidateResult evaluate_candidate(const CandidateSpace &space, const Ingredients &ing) {
    CandidateResult res{ing};
    const auto      setup = make_setup(space, ing);
    if(setup.ancilla().orthogonal()) {
        res.feasible = false;
        return res;
    }
    try {
        const auto rep                = concentration_report(setup);
        res.weak_value                = rep.weak_value;
        res.first_order_gain          = rep.first_order_gain;
        res.success_probability_exact = rep.success_probability_exact;
    } catch(const PostSelectionImpossible &) {
        res.weak_value = weak_value(setup.ancilla());
        res.feasible   = false;
    }
    return res;
}

namespace detail {

// Portable uniform double in [0, 1) from the top 53 bits.
inline double uniform01(std::mt19937_64 &rng) { return double(rng() >> 11) * 0x1.0p-53; }

inline double standard_normal(std::mt19937_64 &rng) {
    const double u1 = 1.0 - uniform01(rng); // (0, 1]
    const double u2 = uniform01(rng);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

/// Uniform on the Bloch sphere: cos(theta) uniform in [-1, 1].
inline StateVector random_qubit(std::mt19937_64 &rng) {
    const double theta = std::acos(1.0 - 2.0 * uniform01(rng));
    const double chi   = 2.0 * std::numbers::pi * uniform01(rng);
    return qubit_state(theta, chi);
}

/// Haar-random pure state from independent complex Gaussians.
inline StateVector random_haar_state(Index dim, std::mt19937_64 &rng) {
    Vector v(dim);
    for(Index k = 0; k < dim; ++k) {
        const double re = standard_normal(rng);
        const double im = standard_normal(rng);
        v(k)            = cplx(re, im);
    }
    return StateVector::normalized(v);
}

inline bool keep(const CandidateResult &r, double min_success) { return r.feasible && r.success_probability_exact >= min_success; }

} // namespace detail

/// Draws the ingredients of random-search candidate `index`.
inline Ingredients random_ingredients(const CandidateSpace &space, std::uint64_t seed, std::uint64_t index) {
    std::mt19937_64 rng(seed ^ index);
    auto draw = [&]() { return space.qubit_ancilla() ? detail::random_qubit(rng) : detail::random_haar_state(space.ancilla_dim(), rng); };
    StateVector pre  = draw();
    StateVector post = draw();
    const auto  n    = space.observable_pool().size();
    const auto  obs  = std::min(n - 1, std::size_t(detail::uniform01(rng) * double(n)));
    return {std::move(pre), std::move(post), obs};
}

/// Exactly config.samples candidates; returns the feasible ones with
/// success >= config.min_success in candidate-index order.
inline std::vector<CandidateResult> random_search(const CandidateSpace &space, const SearchConfig &config) {
    config.validate();
    std::vector<CandidateResult> out;
    for(std::uint64_t n = 0; n < config.samples; ++n) {
        auto r = evaluate_candidate(space, random_ingredients(space, config.seed, n));
        if(detail::keep(r, config.min_success)) out.push_back(std::move(r));
    }
    return out;
}

/// Exhaustive sweep of the qubit Bloch-angle lattice times the observable
/// pool, ordered lexicographically by (theta_pre, chi_pre, theta_post,
/// chi_post, observable).
inline std::vector<CandidateResult> grid_search(const CandidateSpace &space, const SearchConfig &config) {
    config.validate();
    const auto *grid = std::get_if<GridStrategy>(&config.strategy);
    if(grid == nullptr) throw InvariantViolation("grid_search requires a grid strategy");
    if(!space.qubit_ancilla()) throw InvariantViolation("grid search is defined for qubit ancillas only");

    std::vector<StateVector> lattice;
    for(int a = 0; a < grid->theta_points; ++a) {
        const double theta = std::numbers::pi * double(a) / double(grid->theta_points - 1);
        for(int b = 0; b < grid->chi_points; ++b) lattice.push_back(qubit_state(theta, 2.0 * std::numbers::pi * double(b) / double(grid->chi_points)));
    }
    std::vector<CandidateResult> out;
    for(const auto &pre : lattice)
        for(const auto &post : lattice)
            for(std::size_t o = 0; o < space.observable_pool().size(); ++o) {
                auto r = evaluate_candidate(space, Ingredients{pre, post, o});
                if(detail::keep(r, config.min_success)) out.push_back(std::move(r));
            }
    return out;
}

inline std::vector<CandidateResult> run_search(const CandidateSpace &space, const SearchConfig &config) {
    return std::holds_alternative<GridStrategy>(config.strategy) ? grid_search(space, config) : random_search(space, config);
}

/// Non-dominated set maximizing (first_order_gain, success_probability_exact),
/// sorted by descending gain. Of several results with identical scores only
/// the lexicographically smallest ingredients survive. Infeasible results
/// are ignored.
inline std::vector<CandidateResult> pareto_filter(std::vector<CandidateResult> results) {
    std::erase_if(results, [](const CandidateResult &r) { return !r.feasible; });
    std::sort(results.begin(), results.end(), [](const CandidateResult &l, const CandidateResult &r) {
        if(l.first_order_gain != r.first_order_gain) return l.first_order_gain > r.first_order_gain;
        if(l.success_probability_exact != r.success_probability_exact) return l.success_probability_exact > r.success_probability_exact;
        return ingredient_less(l.ingredients, r.ingredients);
    });
    // Every earlier element has gain >= the current one, so the current one
    // survives iff its success beats everything seen so far.
    std::vector<CandidateResult> front;
    std::optional<double>        best_success;
    for(auto &r : results) {
        if(!best_success || r.success_probability_exact > *best_success) {
            best_success = r.success_probability_exact;
            front.push_back(std::move(r));
        }
    }
    return front;
}

} // namespace weakprobe
