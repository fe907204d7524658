// scarpst: exact-diagonalization experiments on scarred state-transfer chains.
//
// subcommands:
//   run    --config cfg.json [--seed S] [--output DIR] [--format csv|json|both]
//   check  --config cfg.json [...]      evaluate the acceptance criteria
//   schema                              print the config schema with presets
//
// exit codes: 0 ok, 2 config error, 3 check failure, 4 numerical failure

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>

#include <CLI11.hpp>

#include "scarpst/acceptance.hpp"
#include "scarpst/experiments.hpp"

namespace {

struct CommonOptions {
    std::string config_path;
    std::string experiment;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> output_dir;
    std::optional<std::string> format;
};

void add_common(CLI::App* cmd, CommonOptions& opt)
{
    cmd->add_option("--config", opt.config_path, "path to a JSON experiment config");
    cmd->add_option("--experiment", opt.experiment,
                    "run a named preset without a config file (fig2-transfer, fig2-spectral, "
                    "fig3-transfer, fig3-spectral, fig4-perturbation, classify, appendix-checks)");
    cmd->add_option("--seed", opt.seed, "override the chain and interaction seeds");
    cmd->add_option("--output", opt.output_dir, "override the output directory");
    cmd->add_option("--format", opt.format, "override the output format: csv, json or both");
}

scarpst::ExperimentConfig load_config(const CommonOptions& opt)
{
    scarpst::ExperimentConfig cfg;
    if (!opt.config_path.empty()) {
        std::ifstream in(opt.config_path);
        if (!in) throw scarpst::config_error("cannot open config file '" + opt.config_path + "'");
        scarpst::ordered_json j;
        try {
            in >> j;
        } catch (const nlohmann::json::exception& e) {
            throw scarpst::config_error(std::string("config is not valid JSON: ") + e.what());
        }
        cfg = scarpst::ExperimentConfig::from_json(j);
    } else if (!opt.experiment.empty()) {
        cfg = scarpst::ExperimentConfig::preset(opt.experiment);
    } else {
        throw scarpst::config_error("pass --config <path> or --experiment <name>");
    }
    if (opt.seed) {
        cfg.chain.seed = *opt.seed;
        cfg.interaction.seed = *opt.seed;
    }
    if (opt.output_dir) cfg.output_dir = *opt.output_dir;
    if (opt.format) cfg.format = *opt.format;
    cfg.validate();
    return cfg;
}

int run_command(const CommonOptions& opt)
{
    const auto cfg = load_config(opt);
    const scarpst::RunManifest manifest = scarpst::run_experiment(cfg);
    std::printf("experiment %s -> %s\n", cfg.experiment.c_str(), cfg.output_dir.c_str());
    for (const auto& t : manifest.timings) std::printf("  %-28s %8.2fs\n", t.stage.c_str(), t.seconds);
    for (const auto& o : manifest.outputs)
        std::printf("  wrote %s (%zu bytes)\n", o.filename.c_str(), o.bytes);
    return 0;
}

int check_command(const CommonOptions& opt)
{
    const auto cfg = load_config(opt);
    const auto results = scarpst::check_experiment(cfg);
    bool all_pass = true;
    for (const auto& r : results) {
        std::printf("[%s] criterion %d: %s — %s\n", r.pass ? "PASS" : "FAIL", r.id, r.name.c_str(),
                    r.details.c_str());
        all_pass = all_pass && r.pass;
    }
    return all_pass ? 0 : 3;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"exact diagonalization of scarred state-transfer chains"};
    app.require_subcommand(1);

    CommonOptions run_opt, check_opt;
    CLI::App* run_cmd = app.add_subcommand("run", "run an experiment pipeline");
    add_common(run_cmd, run_opt);
    CLI::App* check_cmd = app.add_subcommand("check", "evaluate the acceptance criteria");
    add_common(check_cmd, check_opt);
    CLI::App* schema_cmd = app.add_subcommand("schema", "print the config schema and presets");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (run_cmd->parsed()) return run_command(run_opt);
        if (check_cmd->parsed()) return check_command(check_opt);
        if (schema_cmd->parsed()) {
            std::cout << scarpst::config_schema().dump(2) << "\n";
            return 0;
        }
    } catch (const scarpst::config_error& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const scarpst::numerical_error& e) {
        std::fprintf(stderr, "numerical failure: %s\n", e.what());
        return 4;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 4;
    }
    return 2;
}
