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

// Acceptance gate. Prints one PASS/FAIL line per criterion and exits
// nonzero if any criterion fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <sstream>

#include "weakprobe/commands.hpp"

#include "test_support.hpp"

using namespace weakprobe;
using namespace weakprobe::testing;

namespace {

const std::filesystem::path configs_dir = WEAKPROBE_CONFIGS_DIR;

using clock_type = std::chrono::steady_clock;

double seconds_since(clock_type::time_point t0) { return std::chrono::duration<double>(clock_type::now() - t0).count(); }

struct Outcome {
    bool        pass;
    std::string detail;
};

std::string fmt(const char *f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

Outcome ac1() {
    const auto   setup = r1_setup();
    const auto   t0    = clock_type::now();
    const cplx   ow    = weak_value(setup.ancilla());
    const double dt    = seconds_since(t0);
    const bool   ok    = std::abs(ow.real()) <= 1e-12 && std::abs(ow.imag() - 1.0) <= 1e-12 && dt < 1e-3;
    return {ok, fmt("O_W = %.3g%+.15gi, %.3g ms", ow.real(), ow.imag(), dt * 1e3)};
}

Outcome ac2() {
    const auto   setup = r1_setup();
    const auto   t0    = clock_type::now();
    const double first = entropy_ratio_first_order(setup);
    const double exact = entropy_ratio_exact(setup);
    const double dt    = seconds_since(t0);
    const bool   ok = std::abs(first - 1.119276) <= 1e-6 && std::abs(exact - 1.113503) <= 1e-4 && first != exact && dt < 1e-2;
    return {ok, fmt("first-order %.9f, exact %.9f, %.3g ms", first, exact, dt * 1e3)};
}

Outcome ac3() {
    const auto t0  = clock_type::now();
    auto       gap = [](double phi) {
        const auto s = r1_setup(phi);
        return std::abs(entropy_ratio_exact(s) - entropy_ratio_first_order(s));
    };
    const double g1 = gap(0.1), g2 = gap(0.05), g3 = gap(0.025);
    const double f1 = g1 / g2, f2 = g2 / g3;
    const auto   phis = log_grid(1e-4, 1e-1, 20);
    std::vector<double> gaps;
    for(double phi : phis) gaps.push_back(gap(phi));
    const double slope = loglog_slope(phis, gaps);
    const double dt    = seconds_since(t0);
    const bool   ok    = f1 >= 3.5 && f1 <= 4.5 && f2 >= 3.5 && f2 <= 4.5 && slope >= 1.8 && dt < 1.0;
    return {ok, fmt("halving factors %.4f, %.4f; fitted order %.4f; %.3g ms", f1, f2, slope, dt * 1e3)};
}

Outcome ac4() {
    const auto      t0 = clock_type::now();
    std::mt19937_64 rng(20260);
    int             tested = 0, agree = 0;
    for(int trial = 0; trial < 1000; ++trial) {
        const auto   setup = random_setup(2, 2, 1e-3, rng);
        const auto   rep   = concentration_report(setup);
        if(std::abs(rep.first_order_gain) <= 1e-3) continue;
        ++tested;
        if((rep.ratio_exact - 1.0 > 0.0) == (rep.first_order_gain > 0.0) && rep.ratio_exact != 1.0) ++agree;
    }
    const double dt = seconds_since(t0);
    const bool   ok = tested > 0 && agree == tested && dt < 10.0;
    return {ok, fmt("%d/%d signs agree (seed 20260), %.3g s", agree, tested, dt)};
}

Outcome ac5() {
    // real weak value: post-selection equal to pre-selection
    std::mt19937_64 rng(55);
    double          worst_real = 0.0;
    for(int trial = 0; trial < 100; ++trial) {
        const auto i     = random_state(2 + trial % 4, rng);
        const auto setup = WeakMeasurementSetup(random_probe(2 + trial % 5, rng), random_spectrum(2 + trial % 5, rng),
                                                AncillaSelection(i, i, random_hermitian(i.dim(), rng)), 0.1);
        worst_real       = std::max(worst_real, std::abs(entropy_ratio_first_order(setup) - 1.0));
    }
    double worst_gap = 0.0, worst_ratio = 0.0;
    for(int K = 2; K <= 8; ++K) {
        std::vector<double> s(static_cast<std::size_t>(K), 1.0 / std::sqrt(double(K)));
        const auto          probe = SchmidtForm::computational(s);
        for(double phi : {0.1, 0.05, 0.01, 1e-3}) {
            const auto setup = WeakMeasurementSetup(probe, random_spectrum(K, rng),
                                                    AncillaSelection(random_state(2, rng), random_state(2, rng), random_hermitian(2, rng)), phi);
            worst_gap        = std::max(worst_gap, std::abs(witness_gap(setup.kappa_spectrum(), setup.sigma())));
            worst_ratio      = std::max(worst_ratio, std::abs(entropy_ratio_exact(setup) - 1.0) / (10.0 * phi * phi));
        }
    }
    const bool ok = worst_real <= 1e-15 && worst_gap <= 1e-12 && worst_ratio <= 1.0;
    return {ok, fmt("max |ratio-1| for real O_W %.3g; max |gap| maximally entangled %.3g; max |ratio_exact-1|/(10 phi^2) %.3g", worst_real,
                    worst_gap, worst_ratio)};
}

Outcome ac6() {
    std::mt19937_64                    rng(66);
    std::uniform_int_distribution<int> dim(2, 8);
    double                             worst = 0.0;
    for(int trial = 0; trial < 100; ++trial) {
        const auto setup = random_setup(dim(rng), dim(rng), 0.05, rng);
        const auto proc  = procrustean_coefficients(setup);
        const auto weak  = weak_limit_state(setup);
        for(std::size_t j = 0; j < weak.branch_order.size(); ++j)
            worst = std::max(worst, std::abs(weak.final_probe.coefficients()[j] - proc[std::size_t(weak.branch_order[j])]));
    }
    return {worst <= 1e-12, fmt("max coefficient difference %.3g over 100 setups", worst)};
}

Outcome ac7() {
    const auto                         t0 = clock_type::now();
    std::mt19937_64                    rng(77);
    std::uniform_int_distribution<int> dim(2, 8);
    double                             worst = 0.0;
    for(int trial = 0; trial < 100; ++trial) {
        const Index  da = dim(rng), db = dim(rng);
        const Matrix M  = random_normalized_coefficients(da, db, rng);
        const auto   f  = schmidt_decompose(M);
        worst           = std::max(worst, max_abs(f.coefficient_matrix() - M));
        worst = std::max(worst, max_abs(f.basis_a().adjoint() * f.basis_a() - Matrix::Identity(f.rank(), f.rank())));
        worst = std::max(worst, max_abs(f.basis_b().adjoint() * f.basis_b() - Matrix::Identity(f.rank(), f.rank())));
        const DensityMatrix ra = partial_trace(M, Subsystem::B);
        const DensityMatrix rb = partial_trace(M, Subsystem::A);
        const double        Sa = von_neumann_entropy(ra), Sb = von_neumann_entropy(rb);
        worst                  = std::max(worst, std::abs(Sa - Sb));
        worst                  = std::max(worst, std::abs(Sa - entropy_from_spectrum(f.populations())));
        worst                  = std::max(worst, std::abs(hermitian_log_weighted(ra).trace().real() + Sa));
        if(Sa < -1e-10 || Sa > std::log(double(std::min(da, db))) + 1e-10) worst = std::max(worst, 1.0);
    }
    const double dt = seconds_since(t0);
    return {worst <= 1e-10 && dt < 1.0, fmt("max invariant violation %.3g, %.3g ms", worst, dt * 1e3)};
}

Outcome ac8() {
    const cli::SearchOptions so{.seed = 42, .samples = 10000, .min_success = 0.01};
    const auto               config = configs_dir / "r1_space.json";
    auto run = [&](double &dt) {
        std::ostringstream out, err;
        const auto         t0 = clock_type::now();
        if(cli::cmd_search({config, std::nullopt}, so, out, err) != 0) throw std::runtime_error(err.str());
        dt = seconds_since(t0);
        return out.str();
    };
    double     dt1 = 0, dt2 = 0;
    const auto a = run(dt1);
    const auto b = run(dt2);
    bool       found  = false;
    const auto parsed = json::parse(a);
    for(const auto &entry : parsed["front"])
        found = found || (entry["first_order_gain"].get<double>() >= 0.5 && entry["success_probability_exact"].get<double>() >= 0.05);
    const bool ok = a == b && found && dt1 < 30.0 && dt2 < 30.0;
    return {ok, fmt("identical=%s, strong candidate=%s, %.3g s / %.3g s", a == b ? "yes" : "no", found ? "yes" : "no", dt1, dt2)};
}

} // namespace

int main() {
    const std::vector<std::pair<const char *, std::function<Outcome()>>> criteria = {
        {"AC1 weak value of the reference setup", ac1},
        {"AC2 entropy ratios of the reference setup", ac2},
        {"AC3 second-order convergence of the ratio gap", ac3},
        {"AC4 sign law on random qubit setups", ac4},
        {"AC5 null cases", ac5},
        {"AC6 filtering coefficients vs weak-limit state", ac6},
        {"AC7 Schmidt and entropy invariants", ac7},
        {"AC8 search determinism and efficacy", ac8},
    };
    int failed = 0;
    for(const auto &[name, check] : criteria) {
        Outcome o;
        try {
            o = check();
        } catch(const std::exception &e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        std::printf("[%s] %s: %s\n", o.pass ? "PASS" : "FAIL", name, o.detail.c_str());
        failed += o.pass ? 0 : 1;
    }
    std::printf("%d/%zu criteria passed\n", int(criteria.size()) - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
