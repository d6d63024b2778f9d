// SPDX-License-Identifier: Apache-2.0
//
// nfcrb: near-field Cramer-Rao bounds for widely-spaced multi-subarray arrays
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
// ------------------------------------------------------------------------


// nfcrb command line: single points, sweeps, figure presets and the invariant suite.
// Exit status: 0 ok, 1 validation failure, 2 bad config, 3 a crb point that did not evaluate.

#include <nfcrb/nfcrb.hpp>

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <map>
#include <optional>

namespace
{
    constexpr int exit_validation = 1;
    constexpr int exit_config = 2;
    constexpr int exit_point = 3;

    // Scenario flags named after the config keys, applied on top of --config
    struct ScenarioFlags
    {
        std::string config_path;
        std::map<std::string, std::string> values;

        void attach(CLI::App &cmd)
        {
            cmd.add_option("--config", config_path, "key = value file, flags override it")->check(CLI::ExistingFile);
            for (const auto &key : nfcrb::setting_keys())
                cmd.add_option("--" + key, values[key], "scenario setting " + key);
        }

        nfcrb::ScenarioConfig build(const CLI::App &cmd) const
        {
            nfcrb::ScenarioConfig c;
            if (!config_path.empty())
                nfcrb::apply_config_file(c, config_path);
            for (const auto &key : nfcrb::setting_keys())
                if (cmd.count("--" + key) > 0)
                    nfcrb::apply_setting(c, key, values.at(key));
            nfcrb::validate(c);
            return c;
        }
    };

    template <typename Writer>
    void emit(const std::string &out_path, Writer &&write)
    {
        if (out_path.empty())
        {
            write(std::cout);
            return;
        }
        std::ofstream out(out_path);
        if (!out)
            throw nfcrb::Error(nfcrb::ErrorCode::precondition, "cannot write " + out_path);
        write(out);
    }
}

int main(int argc, char **argv)
{
    CLI::App app{"Near-field CRBs for widely-spaced multi-subarray arrays"};
    app.require_subcommand(1);
    app.fallthrough(); // --out may follow the subcommand
    std::string out_path;
    app.add_option("--out", out_path, "write CSV here instead of stdout");

    ScenarioFlags point_flags;
    auto *crb_cmd = app.add_subcommand("crb", "evaluate one scenario");
    point_flags.attach(*crb_cmd);

    ScenarioFlags sweep_flags;
    std::string axis = "r";
    double start = 0.0, stop = 0.0;
    int steps = 2;
    auto *sweep_cmd = app.add_subcommand("sweep", "evaluate a scenario along one axis");
    sweep_flags.attach(*sweep_cmd);
    sweep_cmd->add_option("--axis", axis, "r, theta, I or K")->check(CLI::IsMember({"r", "theta", "I", "K"}));
    sweep_cmd->add_option("--start", start)->required();
    sweep_cmd->add_option("--stop", stop)->required();
    sweep_cmd->add_option("--steps", steps)->required();

    std::string figure;
    auto *figure_cmd = app.add_subcommand("figure", "run a figure preset");
    figure_cmd->add_option("name", figure)->required()->check(CLI::IsMember(nfcrb::figure_names()));

    auto *validate_cmd = app.add_subcommand("validate", "run the invariant suite");

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError &e)
    {
        const int code = app.exit(e);
        return code == 0 ? 0 : exit_config;
    }

    try
    {
        if (*validate_cmd)
        {
            const auto reports = nfcrb::run_validation();
            emit(out_path, [&](std::ostream &os) { nfcrb::write_report(os, reports); });
            return nfcrb::all_passed(reports) ? 0 : exit_validation;
        }

        std::vector<nfcrb::Record> rows;
        if (*crb_cmd)
            rows.push_back(nfcrb::run_point(point_flags.build(*crb_cmd)));
        else if (*sweep_cmd)
        {
            nfcrb::SweepSpec spec;
            static const std::map<std::string, nfcrb::Axis> axes = {
                {"r", nfcrb::Axis::r}, {"theta", nfcrb::Axis::theta}, {"I", nfcrb::Axis::I}, {"K", nfcrb::Axis::K}};
            spec.axis = axes.at(axis);
            spec.start = start;
            spec.stop = stop;
            spec.steps = steps;
            spec.base = sweep_flags.build(*sweep_cmd);
            rows = nfcrb::run_sweep(spec);
        }
        else
            rows = nfcrb::run_figure(figure);

        emit(out_path, [&](std::ostream &os) { nfcrb::write_csv(os, rows); });
        if (*crb_cmd && rows.front().error_code != "ok")
        {
            std::cerr << "point did not evaluate: " << rows.front().error_code << "\n";
            return exit_point;
        }
        return 0;
    }
    catch (const nfcrb::Error &e)
    {
        std::cerr << e.what() << "\n";
        return exit_config;
    }
}
