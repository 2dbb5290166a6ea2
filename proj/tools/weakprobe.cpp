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

#include <iostream>
#include <string>

#include "CLI11.hpp"

#include "weakprobe/commands.hpp"

namespace cli = weakprobe::cli;

int main(int argc, char **argv) {
    CLI::App app{"weakprobe: weak measurements with entangled probes"};
    app.require_subcommand(1);

    cli::CommonOptions common;
    cli::SweepOptions  sweep;
    cli::SearchOptions search;
    std::string        format   = "csv";
    std::string        strategy = "random";
    std::string        output;

    auto add_common = [&](CLI::App *sub) {
        sub->add_option("--config", common.config, "JSON configuration file")->required();
        sub->add_option("--output", output, "write the result here instead of stdout");
    };

    auto *weak_value = app.add_subcommand("weak-value", "print the weak value <f|O|i>/<f|i> of a setup");
    add_common(weak_value);

    auto *concentrate = app.add_subcommand("concentrate", "full concentration report of a setup");
    add_common(concentrate);

    auto *sweep_cmd = app.add_subcommand("sweep", "first-order vs exact entropy ratio over a log-spaced phi range");
    add_common(sweep_cmd);
    sweep_cmd->add_option("--phi-min", sweep.phi_min)->required();
    sweep_cmd->add_option("--phi-max", sweep.phi_max)->required();
    sweep_cmd->add_option("--points", sweep.points)->default_val(20);
    sweep_cmd->add_option("--format", format)->check(CLI::IsMember({"csv", "json"}))->default_val("csv");

    auto *search_cmd = app.add_subcommand("search", "search ancilla ingredients and print the Pareto front");
    add_common(search_cmd);
    search_cmd->add_option("--seed", search.seed)->default_val(42);
    search_cmd->add_option("--samples", search.samples)->default_val(10000);
    search_cmd->add_option("--min-success", search.min_success)->default_val(0.01);
    search_cmd->add_option("--strategy", strategy)->check(CLI::IsMember({"random", "grid"}))->default_val("random");
    search_cmd->add_option("--theta-points", search.theta_points, "grid strategy: theta lattice size")->default_val(9);
    search_cmd->add_option("--chi-points", search.chi_points, "grid strategy: chi lattice size")->default_val(8);

    try {
        app.parse(argc, argv);
    } catch(const CLI::CallForHelp &e) {
        return app.exit(e);
    } catch(const CLI::ParseError &e) {
        app.exit(e);
        return cli::exit_code::input;
    }

    try {
        common.eps_overlap = cli::eps_overlap_from_env();
    } catch(const weakprobe::Error &e) {
        std::cerr << "error: " << e.what() << '\n';
        return cli::exit_code::input;
    }
    if(!output.empty()) common.output = output;
    sweep.format = format == "json" ? cli::OutputFormat::json : cli::OutputFormat::csv;
    search.grid  = strategy == "grid";

    if(*weak_value) return cli::cmd_weak_value(common, std::cout, std::cerr);
    if(*concentrate) return cli::cmd_concentrate(common, std::cout, std::cerr);
    if(*sweep_cmd) return cli::cmd_sweep(common, sweep, std::cout, std::cerr);
    return cli::cmd_search(common, search, std::cout, std::cerr);
}
