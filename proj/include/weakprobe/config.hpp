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
 *  JSON configuration files.
 *
 *  Setup file:
 *    {
 *      "schmidt_coefficients": [0.948683, 0.316228],       // descending, sum s^2 = 1
 *      "kappa_spectrum":       [0, 1],                      // one per coefficient
 *      "ancilla_pre":          [[0.7071, 0], [0.7071, 0]],  // [re, im] pairs
 *      "ancilla_post":         [[0.7071, 0], [0, 0.7071]],
 *      "observable":           [[[1,0],[0,0]], [[0,0],[-1,0]]],
 *      "phi":                  0.1
 *    }
 *
 *  Search-space file: same probe fields and phi, plus
 *      "observables": [ <matrix>, ... ]
 *
 *  The probe's Schmidt bases are the computational bases.
 */

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "weakprobe/ingredient_search.hpp"
#include "weakprobe/quantum_core.hpp"
#include "weakprobe/weak_measurement.hpp"

namespace weakprobe {

using json = nlohmann::ordered_json;

namespace config_detail {

[[noreturn]] inline void fail(const std::string &field, const std::string &what) { throw ConfigError("field '" + field + "': " + what); }

inline const json &require(const json &j, const std::string &field) {
    if(!j.is_object()) throw ConfigError("configuration root must be a JSON object");
    auto it = j.find(field);
    if(it == j.end()) fail(field, "missing");
    return *it;
}

inline double to_real(const json &v, const std::string &field) {
    if(!v.is_number()) fail(field, "expected a number");
    const double x = v.get<double>();
    if(!std::isfinite(x)) fail(field, "must be finite");
    return x;
}

inline std::vector<double> to_real_list(const json &v, const std::string &field) {
    if(!v.is_array() || v.empty()) fail(field, "expected a non-empty array of numbers");
    std::vector<double> out;
    for(std::size_t k = 0; k < v.size(); ++k) out.push_back(to_real(v[k], field + "[" + std::to_string(k) + "]"));
    return out;
}

inline cplx to_complex(const json &v, const std::string &field) {
    if(!v.is_array() || v.size() != 2) fail(field, "expected a [re, im] pair");
    return {to_real(v[0], field + ".re"), to_real(v[1], field + ".im")};
}

inline Vector to_complex_vector(const json &v, const std::string &field) {
    if(!v.is_array() || v.empty()) fail(field, "expected a non-empty array of [re, im] pairs");
    Vector out(Index(v.size()));
    for(std::size_t k = 0; k < v.size(); ++k) out(Index(k)) = to_complex(v[k], field + "[" + std::to_string(k) + "]");
    return out;
}

inline Matrix to_complex_matrix(const json &v, const std::string &field) {
    if(!v.is_array() || v.empty()) fail(field, "expected a non-empty square array of [re, im] pairs");
    const auto n = v.size();
    Matrix     m(static_cast<Index>(n), static_cast<Index>(n));
    for(std::size_t r = 0; r < n; ++r) {
        const std::string row = field + "[" + std::to_string(r) + "]";
        if(!v[r].is_array() || v[r].size() != n) fail(row, "expected " + std::to_string(n) + " entries (matrix must be square)");
        for(std::size_t c = 0; c < n; ++c) m(Index(r), Index(c)) = to_complex(v[r][c], row + "[" + std::to_string(c) + "]");
    }
    return m;
}

inline json from_complex(cplx z) { return json::array({z.real(), z.imag()}); }

inline json from_complex_vector(const Vector &v) {
    json out = json::array();
    for(Index k = 0; k < v.size(); ++k) out.push_back(from_complex(v(k)));
    return out;
}

inline json from_complex_matrix(const Matrix &m) {
    json out = json::array();
    for(Index r = 0; r < m.rows(); ++r) {
        json row = json::array();
        for(Index c = 0; c < m.cols(); ++c) row.push_back(from_complex(m(r, c)));
        out.push_back(std::move(row));
    }
    return out;
}

/// Runs `make`, re-labelling library validation errors with the field name.
template<typename F>
auto validated(const std::string &field, F &&make) {
    try {
        return make();
    } catch(const ConfigError &) {
        throw;
    } catch(const Error &e) {
        fail(field, e.what());
    }
}

inline SchmidtForm probe_from(const std::vector<double> &s) {
    return validated("schmidt_coefficients", [&] { return SchmidtForm::computational(s); });
}

} // namespace config_detail

inline json read_json_file(const std::filesystem::path &path) {
    std::ifstream in(path);
    if(!in) throw ConfigError("cannot open configuration file '" + path.string() + "'");
    try {
        return json::parse(in);
    } catch(const json::parse_error &e) {
        throw ConfigError("configuration file '" + path.string() + "' is not valid JSON: " + e.what());
    }
}

/// Raw setup file contents. Validation into a WeakMeasurementSetup happens in to_setup().
struct SetupConfig {
    std::vector<double> schmidt_coefficients;
    std::vector<double> kappa_spectrum;
    Vector              ancilla_pre;
    Vector              ancilla_post;
    Matrix              observable;
    double              phi = 0.0;

    static SetupConfig from_json(const json &j) {
        using namespace config_detail;
        SetupConfig c;
        c.schmidt_coefficients = to_real_list(require(j, "schmidt_coefficients"), "schmidt_coefficients");
        c.kappa_spectrum       = to_real_list(require(j, "kappa_spectrum"), "kappa_spectrum");
        c.ancilla_pre          = to_complex_vector(require(j, "ancilla_pre"), "ancilla_pre");
        c.ancilla_post         = to_complex_vector(require(j, "ancilla_post"), "ancilla_post");
        c.observable           = to_complex_matrix(require(j, "observable"), "observable");
        c.phi                  = to_real(require(j, "phi"), "phi");
        return c;
    }

    static SetupConfig from_file(const std::filesystem::path &path) { return from_json(read_json_file(path)); }

    [[nodiscard]] json to_json() const {
        using namespace config_detail;
        json j;
        j["schmidt_coefficients"] = schmidt_coefficients;
        j["kappa_spectrum"]       = kappa_spectrum;
        j["ancilla_pre"]          = from_complex_vector(ancilla_pre);
        j["ancilla_post"]         = from_complex_vector(ancilla_post);
        j["observable"]           = from_complex_matrix(observable);
        j["phi"]                  = phi;
        return j;
    }

    [[nodiscard]] WeakMeasurementSetup to_setup(double eps_overlap = default_eps_overlap) const {
        using namespace config_detail;
        auto probe = probe_from(schmidt_coefficients);
        if(kappa_spectrum.size() != schmidt_coefficients.size())
            fail("kappa_spectrum", "expected " + std::to_string(schmidt_coefficients.size()) + " entries (one per Schmidt coefficient)");
        if(phi < 0.0) fail("phi", "must be nonnegative");
        auto pre  = validated("ancilla_pre", [&] { return StateVector(ancilla_pre); });
        auto post = validated("ancilla_post", [&] { return StateVector(ancilla_post); });
        auto obs  = validated("observable", [&] { return HermitianObservable(observable); });
        if(pre.dim() != obs.dim()) fail("ancilla_pre", "dimension differs from the observable");
        if(post.dim() != obs.dim()) fail("ancilla_post", "dimension differs from the observable");
        return {std::move(probe), kappa_spectrum, AncillaSelection(std::move(pre), std::move(post), std::move(obs), eps_overlap), phi};
    }
};

/// Search-space file contents.
struct SpaceConfig {
    std::vector<double> schmidt_coefficients;
    std::vector<double> kappa_spectrum;
    std::vector<Matrix> observables;
    double              phi = 0.0;

    static SpaceConfig from_json(const json &j) {
        using namespace config_detail;
        SpaceConfig c;
        c.schmidt_coefficients = to_real_list(require(j, "schmidt_coefficients"), "schmidt_coefficients");
        c.kappa_spectrum       = to_real_list(require(j, "kappa_spectrum"), "kappa_spectrum");
        const json &obs        = require(j, "observables");
        if(!obs.is_array() || obs.empty()) fail("observables", "expected a non-empty array of matrices");
        for(std::size_t k = 0; k < obs.size(); ++k) c.observables.push_back(to_complex_matrix(obs[k], "observables[" + std::to_string(k) + "]"));
        c.phi = to_real(require(j, "phi"), "phi");
        return c;
    }

    static SpaceConfig from_file(const std::filesystem::path &path) { return from_json(read_json_file(path)); }

    [[nodiscard]] CandidateSpace to_space() const {
        using namespace config_detail;
        auto probe = probe_from(schmidt_coefficients);
        if(kappa_spectrum.size() != schmidt_coefficients.size())
            fail("kappa_spectrum", "expected " + std::to_string(schmidt_coefficients.size()) + " entries (one per Schmidt coefficient)");
        if(phi < 0.0) fail("phi", "must be nonnegative");
        std::vector<HermitianObservable> pool;
        for(std::size_t k = 0; k < observables.size(); ++k) {
            const std::string field = "observables[" + std::to_string(k) + "]";
            pool.push_back(validated(field, [&] { return HermitianObservable(observables[k]); }));
            if(pool.back().dim() != pool.front().dim()) fail(field, "dimension differs from observables[0]");
        }
        // probe degeneracy is not a config error; let DegenerateProbe through
        return CandidateSpace(std::move(probe), kappa_spectrum, std::move(pool), phi);
    }

    /// Setup file that replays one search candidate.
    [[nodiscard]] SetupConfig setup_for(const Ingredients &ing) const {
        return {schmidt_coefficients, kappa_spectrum, ing.pre.amplitudes(), ing.post.amplitudes(), observables.at(ing.observable_index), phi};
    }
};

} // namespace weakprobe
