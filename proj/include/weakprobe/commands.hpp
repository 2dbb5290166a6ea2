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

// Subcommands of the weakprobe tool. Each returns the process exit code:
//   0 success, 1 input error, 2 orthogonal/impossible post-selection,
//   3 separable probe.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "weakprobe/concentration.hpp"
#include "weakprobe/config.hpp"
#include "weakprobe/ingredient_search.hpp"
#include "weakprobe/weak_measurement.hpp"

namespace weakprobe::cli {

namespace exit_code {
inline constexpr int ok         = 0;
inline constexpr int input      = 1;
inline constexpr int orthogonal = 2;
inline constexpr int degenerate = 3;
} // namespace exit_code

enum class OutputFormat { csv, json };

struct CommonOptions {
    std::filesystem::path                config;
    std::optional<std::filesystem::path> output;
    double                               eps_overlap = default_eps_overlap;
};

struct SweepOptions {
    double       phi_min = 0.0;
    double       phi_max = 0.0;
    int          points  = 2;
    OutputFormat format  = OutputFormat::csv;
};

struct SearchOptions {
    std::uint64_t seed         = 42;
    std::size_t   samples      = 10000;
    double        min_success  = 0.01;
    bool          grid         = false;
    int           theta_points = 9;
    int           chi_points   = 8;
};

/// WEAKPROBE_EPS_OVERLAP, if set, replaces the post-selection overlap threshold.
inline double eps_overlap_from_env() {
    const char *raw = std::getenv("WEAKPROBE_EPS_OVERLAP");
    if(raw == nullptr || *raw == '\0') return default_eps_overlap;
    char        *end = nullptr;
    const double v   = std::strtod(raw, &end);
    if(end == raw || *end != '\0' || !(v >= 0.0) || !std::isfinite(v))
        throw ConfigError(std::string("WEAKPROBE_EPS_OVERLAP must be a nonnegative number, got '") + raw + "'");
    return v;
}

/// x rounded to 9 significant digits.
inline double round_sig(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.9g", x);
    return std::strtod(buf, nullptr);
}

inline std::string format_sig(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.9g", x);
    return buf;
}

inline json complex_json(cplx z) { return json{{"re", round_sig(z.real())}, {"im", round_sig(z.imag())}}; }

inline json report_json(const ConcentrationReport &r) {
    json j;
    j["weak_value"]                = complex_json(r.weak_value);
    j["witness_gap"]               = round_sig(r.witness_gap);
    j["first_order_gain"]          = round_sig(r.first_order_gain);
    j["ratio_first_order"]         = round_sig(r.ratio_first_order);
    j["ratio_exact"]               = round_sig(r.ratio_exact);
    j["success_probability_exact"] = round_sig(r.success_probability_exact);
    j["verdict"]                   = to_string(r.verdict);
    return j;
}

namespace detail {

// Writes `text` to the --output file, or to `out` when none was given.
inline void emit(const CommonOptions &opt, std::ostream &out, const std::string &text) {
    if(!opt.output) {
        out << text;
        return;
    }
    std::ofstream f(*opt.output, std::ios::binary | std::ios::trunc);
    if(!f) throw ConfigError("cannot open output file '" + opt.output->string() + "'");
    f << text;
}

template<typename F>
int guarded(std::ostream &err, F &&body) {
    try {
        body();
        return exit_code::ok;
    } catch(const PostSelectionOrthogonal &e) {
        err << "error: " << e.what() << '\n';
        return exit_code::orthogonal;
    } catch(const PostSelectionImpossible &e) {
        err << "error: " << e.what() << '\n';
        return exit_code::orthogonal;
    } catch(const DegenerateProbe &e) {
        err << "error: " << e.what() << '\n';
        return exit_code::degenerate;
    } catch(const Error &e) {
        err << "error: " << e.what() << '\n';
        return exit_code::input;
    } catch(const std::exception &e) {
        err << "error: " << e.what() << '\n';
        return exit_code::input;
    }
}

} // namespace detail

inline int cmd_weak_value(const CommonOptions &opt, std::ostream &out, std::ostream &err) {
    return detail::guarded(err, [&] {
        const auto setup = SetupConfig::from_file(opt.config).to_setup(opt.eps_overlap);
        const cplx ow    = weak_value(setup.ancilla());
        json       j;
        j["re"]          = round_sig(ow.real());
        j["im"]          = round_sig(ow.imag());
        j["overlap_abs"] = round_sig(setup.ancilla().overlap_abs());
        detail::emit(opt, out, j.dump(2) + "\n");
    });
}

inline int cmd_concentrate(const CommonOptions &opt, std::ostream &out, std::ostream &err) {
    return detail::guarded(err, [&] {
        const auto setup = SetupConfig::from_file(opt.config).to_setup(opt.eps_overlap);
        detail::emit(opt, out, report_json(concentration_report(setup)).dump(2) + "\n");
    });
}

/// Log-spaced phi grid with exact endpoints.
inline std::vector<double> log_spaced(double lo, double hi, int points) {
    std::vector<double> phis(static_cast<std::size_t>(points));
    const double        a = std::log(lo), b = std::log(hi);
    for(int j = 0; j < points; ++j) phis[std::size_t(j)] = std::exp(a + (b - a) * double(j) / double(points - 1));
    phis.front() = lo;
    phis.back()  = hi;
    return phis;
}

struct SweepRow {
    double phi, ratio_first_order, ratio_exact, abs_gap, success_exact;
};

inline std::vector<SweepRow> sweep_rows(const WeakMeasurementSetup &base, const SweepOptions &sw) {
    if(!(sw.phi_min > 0.0) || !(sw.phi_max > sw.phi_min) || !std::isfinite(sw.phi_max))
        throw ConfigError("sweep range must satisfy 0 < phi-min < phi-max");
    if(sw.points < 2) throw ConfigError("sweep needs --points >= 2");
    std::vector<SweepRow> rows;
    for(double phi : log_spaced(sw.phi_min, sw.phi_max, sw.points)) {
        const auto setup = base.with_phi(phi);
        const auto rep   = concentration_report(setup);
        rows.push_back({phi, rep.ratio_first_order, rep.ratio_exact, std::abs(rep.ratio_exact - rep.ratio_first_order), rep.success_probability_exact});
    }
    return rows;
}

inline constexpr const char *sweep_csv_header = "phi,ratio_first_order,ratio_exact,abs_gap,success_exact";

inline int cmd_sweep(const CommonOptions &opt, const SweepOptions &sw, std::ostream &out, std::ostream &err) {
    return detail::guarded(err, [&] {
        const auto base = SetupConfig::from_file(opt.config).to_setup(opt.eps_overlap);
        const auto rows = sweep_rows(base, sw);
        std::string text;
        if(sw.format == OutputFormat::csv) {
            text = std::string(sweep_csv_header) + "\n";
            for(const auto &r : rows)
                text += format_sig(r.phi) + "," + format_sig(r.ratio_first_order) + "," + format_sig(r.ratio_exact) + "," + format_sig(r.abs_gap) +
                        "," + format_sig(r.success_exact) + "\n";
        } else {
            json arr = json::array();
            for(const auto &r : rows)
                arr.push_back(json{{"phi", round_sig(r.phi)},
                                   {"ratio_first_order", round_sig(r.ratio_first_order)},
                                   {"ratio_exact", round_sig(r.ratio_exact)},
                                   {"abs_gap", round_sig(r.abs_gap)},
                                   {"success_exact", round_sig(r.success_exact)}});
            text = arr.dump(2) + "\n";
        }
        detail::emit(opt, out, text);
    });
}

/// Pareto front of a search as JSON. Each entry carries a full setup
/// (at full double precision) that `concentrate` can replay.
inline json search_json(const SpaceConfig &space_cfg, const SearchConfig &cfg, std::size_t kept, const std::vector<CandidateResult> &front) {
    json j;
    j["seed"]        = cfg.seed;
    j["samples"]     = cfg.samples;
    j["min_success"] = cfg.min_success;
    if(const auto *g = std::get_if<GridStrategy>(&cfg.strategy))
        j["strategy"] = json{{"grid", json{{"theta_points", g->theta_points}, {"chi_points", g->chi_points}}}};
    else
        j["strategy"] = "random";
    j["accepted"] = kept;
    json entries  = json::array();
    for(const auto &r : front) {
        json e;
        e["observable_index"]          = r.ingredients.observable_index;
        e["weak_value"]                = complex_json(r.weak_value);
        e["first_order_gain"]          = round_sig(r.first_order_gain);
        e["success_probability_exact"] = round_sig(r.success_probability_exact);
        e["setup"]                     = space_cfg.setup_for(r.ingredients).to_json();
        entries.push_back(std::move(e));
    }
    j["front"] = std::move(entries);
    return j;
}

inline int cmd_search(const CommonOptions &opt, const SearchOptions &so, std::ostream &out, std::ostream &err) {
    return detail::guarded(err, [&] {
        const auto space_cfg = SpaceConfig::from_file(opt.config);
        const auto space     = space_cfg.to_space();
        SearchConfig cfg;
        cfg.seed        = so.seed;
        cfg.samples     = so.samples;
        cfg.min_success = so.min_success;
        if(so.grid) cfg.strategy = GridStrategy{so.theta_points, so.chi_points};
        try {
            cfg.validate();
        } catch(const Error &e) {
            throw ConfigError(e.what());
        }
        const auto results = run_search(space, cfg);
        const auto front   = pareto_filter(results);
        detail::emit(opt, out, search_json(space_cfg, cfg, results.size(), front).dump(2) + "\n");
    });
}

} // namespace weakprobe::cli
