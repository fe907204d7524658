#pragma once

#include <chrono>
#include <map>
#include <string>
#include <vector>

#include "chain.hpp"
#include "diagnostics.hpp"
#include "dynamics.hpp"
#include "hilbert.hpp"
#include "io.hpp"
#include "models.hpp"
#include "perturbations.hpp"
#include "scars.hpp"

namespace scarpst {

// invalid user input: maps to CLI exit code 2
struct config_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

inline const std::vector<std::string>& experiment_names()
{
    static const std::vector<std::string> names = {
        "fig2-transfer", "fig2-spectral", "fig3-transfer", "fig3-spectral",
        "fig4-perturbation", "classify", "appendix-checks"};
    return names;
}

struct ExperimentConfig {
    std::string experiment = "fig2-transfer";
    ChainConfig chain;
    RandomInteractionSpec interaction;
    std::string output_dir = "out";
    std::string format = "both";  // csv | json | both
    int time_samples = 400;
    std::vector<double> epsilons;  // fig4 scan grid

    static ExperimentConfig preset(const std::string& name);
    static ExperimentConfig from_json(const ordered_json& j);
    ordered_json to_json() const;
    void validate() const;

    bool want_csv() const { return format == "csv" || format == "both"; }
    bool want_json() const { return format == "json" || format == "both"; }
};

inline ExperimentConfig ExperimentConfig::preset(const std::string& name)
{
    ExperimentConfig cfg;
    cfg.experiment = name;
    if (name == "fig2-transfer" || name == "fig2-spectral") {
        cfg.chain = ChainConfig{12, 2, 0.0, 1.0, 1};
        cfg.interaction = RandomInteractionSpec{3, 1, true, 0.0};
    } else if (name == "fig3-transfer" || name == "fig3-spectral" || name == "fig4-perturbation") {
        cfg.chain = ChainConfig{8, 3, 0.0, 1.0, 1};
        cfg.interaction = RandomInteractionSpec{2, 1, false, 3.0};
        if (name == "fig4-perturbation") cfg.epsilons = default_epsilon_grid();
    } else if (name == "appendix-checks") {
        cfg.chain = ChainConfig{8, 2, 0.0, 1.0, 1};
        cfg.interaction = RandomInteractionSpec{3, 1, true, 0.0};
    } else if (name == "classify") {
        cfg.chain = ChainConfig{2, 3, 0.0, 1.0, 1};
        cfg.interaction = RandomInteractionSpec{2, 1, false, 0.0};
    } else {
        throw config_error("unknown experiment '" + name + "'");
    }
    return cfg;
}

inline ExperimentConfig ExperimentConfig::from_json(const ordered_json& j)
{
    if (!j.is_object()) throw config_error("config must be a JSON object");
    if (!j.contains("experiment") || !j["experiment"].is_string())
        throw config_error("config needs a string field 'experiment'");
    ExperimentConfig cfg = preset(j["experiment"].get<std::string>());
    try {
        if (j.contains("chain")) {
            const auto& c = j["chain"];
            if (c.contains("N")) cfg.chain.num_sites = c["N"].get<int>();
            if (c.contains("local_dim")) cfg.chain.local_dim = c["local_dim"].get<int>();
            if (c.contains("omega")) cfg.chain.omega = c["omega"].get<double>();
            if (c.contains("lambda")) cfg.chain.lambda = c["lambda"].get<double>();
            if (c.contains("seed")) cfg.chain.seed = c["seed"].get<std::uint64_t>();
        }
        if (j.contains("interaction")) {
            const auto& s = j["interaction"];
            if (s.contains("window_size")) cfg.interaction.window_size = s["window_size"].get<int>();
            if (s.contains("seed")) cfg.interaction.seed = s["seed"].get<std::uint64_t>();
            if (s.contains("homogeneous")) cfg.interaction.homogeneous = s["homogeneous"].get<bool>();
            if (s.contains("decay_power")) cfg.interaction.decay_power = s["decay_power"].get<double>();
        } else if (j.contains("chain") && j["chain"].contains("seed")) {
            cfg.interaction.seed = cfg.chain.seed;
        }
        if (j.contains("output_dir")) cfg.output_dir = j["output_dir"].get<std::string>();
        if (j.contains("format")) cfg.format = j["format"].get<std::string>();
        if (j.contains("time_samples")) cfg.time_samples = j["time_samples"].get<int>();
        if (j.contains("epsilons")) cfg.epsilons = j["epsilons"].get<std::vector<double>>();
    } catch (const nlohmann::json::exception& e) {
        throw config_error(std::string("malformed config: ") + e.what());
    }
    return cfg;
}

inline ordered_json ExperimentConfig::to_json() const
{
    ordered_json j;
    j["experiment"] = experiment;
    j["chain"] = {{"N", chain.num_sites},
                  {"local_dim", chain.local_dim},
                  {"omega", chain.omega},
                  {"lambda", chain.lambda},
                  {"seed", chain.seed}};
    j["interaction"] = {{"window_size", interaction.window_size},
                        {"seed", interaction.seed},
                        {"homogeneous", interaction.homogeneous},
                        {"decay_power", interaction.decay_power}};
    j["output_dir"] = output_dir;
    j["format"] = format;
    j["time_samples"] = time_samples;
    if (!epsilons.empty()) j["epsilons"] = epsilons;
    return j;
}

inline void ExperimentConfig::validate() const
{
    bool known = false;
    for (const auto& name : experiment_names()) known = known || name == experiment;
    if (!known) throw config_error("unknown experiment '" + experiment + "'");
    if (format != "csv" && format != "json" && format != "both")
        throw config_error("format must be csv, json or both, got '" + format + "'");
    if (time_samples < 2) throw config_error("time_samples must be >= 2");
    try {
        chain.validate();
        interaction.validate();
    } catch (const std::invalid_argument& e) {
        throw config_error(e.what());
    }
    const bool spin_half_experiment =
        experiment == "fig2-transfer" || experiment == "fig2-spectral" || experiment == "appendix-checks";
    const bool spin_one_experiment = experiment == "fig3-transfer" || experiment == "fig3-spectral"
                                     || experiment == "fig4-perturbation" || experiment == "classify";
    if (spin_half_experiment && chain.local_dim != 2)
        throw config_error(experiment + " needs local_dim 2");
    if (spin_one_experiment && chain.local_dim != 3)
        throw config_error(experiment + " needs local_dim 3");
    if (spin_half_experiment && experiment != "appendix-checks" && chain.num_sites < 3)
        throw config_error(experiment + " needs at least 3 sites");
    if (experiment == "fig4-perturbation") {
        if (chain.num_sites % 2 != 0)
            throw config_error("fig4-perturbation needs an even chain for the local-X kind");
        if (epsilons.empty()) throw config_error("fig4-perturbation needs a nonempty epsilon grid");
    }
}

struct StageTiming {
    std::string stage;
    double seconds = 0.0;
};

struct RunManifest {
    ordered_json config_echo;
    std::string config_sha256;
    std::vector<StageTiming> timings;
    std::vector<OutputRecord> outputs;

    ordered_json to_json() const
    {
        ordered_json j;
        j["config"] = config_echo;
        j["config_sha256"] = config_sha256;
        j["timings"] = ordered_json::array();
        for (const auto& t : timings)
            j["timings"].push_back({{"stage", t.stage}, {"seconds", t.seconds}});
        j["outputs"] = ordered_json::array();
        for (const auto& o : outputs)
            j["outputs"].push_back({{"file", o.filename}, {"sha256", o.sha256}, {"bytes", o.bytes}});
        return j;
    }
};

namespace detail {

class StageClock {
public:
    explicit StageClock(RunManifest& manifest) : manifest_(manifest) {}

    template <class F>
    auto stage(const std::string& name, F&& f)
    {
        const auto t0 = std::chrono::steady_clock::now();
        if constexpr (std::is_void_v<decltype(f())>) {
            f();
            record(name, t0);
        } else {
            auto result = f();
            record(name, t0);
            return result;
        }
    }

private:
    void record(const std::string& name, std::chrono::steady_clock::time_point t0)
    {
        const std::chrono::duration<double> dt = std::chrono::steady_clock::now() - t0;
        manifest_.timings.push_back({name, dt.count()});
    }

    RunManifest& manifest_;
};

inline ordered_json trace_to_json(const FidelityTrace& trace, const ExperimentConfig& cfg)
{
    ordered_json j;
    j["variant"] = trace.variant;
    j["background"] = trace.background;
    j["N"] = trace.num_sites;
    j["local_dim"] = trace.local_dim;
    j["omega"] = cfg.chain.omega;
    j["lambda"] = cfg.chain.lambda;
    j["seed"] = cfg.interaction.seed;
    j["t_lambda"] = ordered_json::array();
    for (double t : trace.times) j["t_lambda"].push_back(t * cfg.chain.lambda);
    j["fidelity"] = trace.fidelity;
    j["transfer_times_lambda"] = ordered_json::array();
    for (double t : trace.transfer_times) j["transfer_times_lambda"].push_back(t * cfg.chain.lambda);
    return j;
}

inline void emit_trace(RunWriter& writer, const ExperimentConfig& cfg, const FidelityTrace& trace)
{
    const std::string stem = "transfer_" + trace.variant + "_" + trace.background;
    if (cfg.want_csv()) {
        std::vector<double> t_lambda(trace.times.size());
        for (size_t i = 0; i < trace.times.size(); ++i) t_lambda[i] = trace.times[i] * cfg.chain.lambda;
        writer.write(stem + ".csv", csv_document({"t_lambda", "fidelity"}, {t_lambda, trace.fidelity}));
    }
    if (cfg.want_json()) writer.write(stem + ".json", trace_to_json(trace, cfg).dump(2) + "\n");
}

inline DenseOperator build_variant(HamiltonianVariant variant, const ChainConfig& chain,
                                   const RandomInteractionSpec& spec)
{
    if (chain.local_dim == 2) {
        switch (variant) {
        case HamiltonianVariant::pst: return build_h_pst(chain);
        case HamiltonianVariant::thermal: return build_h_thermal(chain, spec);
        case HamiltonianVariant::scar: return build_h_scar(chain, spec);
        }
    } else {
        switch (variant) {
        case HamiltonianVariant::pst: return build_h_pst_spin1(chain);
        case HamiltonianVariant::thermal: return build_h_thermal_spin1(chain, spec);
        case HamiltonianVariant::scar: return build_h_scar_spin1(chain, spec);
        }
    }
    throw std::logic_error("build_variant: unreachable");
}

inline void run_transfer_pipeline(const ExperimentConfig& cfg, RunWriter& writer, StageClock& clock)
{
    for (HamiltonianVariant variant :
         {HamiltonianVariant::pst, HamiltonianVariant::thermal, HamiltonianVariant::scar}) {
        const EigenSystem sys = clock.stage(std::string("diagonalize_") + to_string(variant), [&] {
            return diagonalize(build_variant(variant, cfg.chain, cfg.interaction));
        });
        for (Background background : {Background::zeros, Background::ones}) {
            TransferJob job;
            job.variant = variant;
            job.background = background;
            job.times = default_time_grid(cfg.chain, cfg.time_samples);
            const FidelityTrace trace =
                clock.stage(std::string("trace_") + to_string(variant) + "_" + to_string(background),
                            [&] { return transfer_fidelity(sys, job, cfg.chain); });
            emit_trace(writer, cfg, trace);
        }
    }
}

inline void run_spectral_pipeline(const ExperimentConfig& cfg, RunWriter& writer, StageClock& clock)
{
    const ScarBasis basis =
        cfg.chain.local_dim == 2 ? scar_basis(cfg.chain) : scar_basis_spin1(cfg.chain);
    const OracleEstimate gue = clock.stage("gue_oracle", [&] {
        return gue_mean_gap_ratio_oracle(512, 48, cfg.chain.seed);
    });

    ordered_json summary;
    summary["gue_oracle"] = {{"mean_r", gue.mean},
                             {"standard_error", gue.standard_error},
                             {"num_ratios", gue.num_ratios}};
    summary["poisson_reference"] = poisson_mean_gap_ratio();

    for (HamiltonianVariant variant : {HamiltonianVariant::thermal, HamiltonianVariant::scar}) {
        const std::string label = to_string(variant);
        const EigenSystem sys = clock.stage("diagonalize_" + label, [&] {
            return diagonalize(build_variant(variant, cfg.chain, cfg.interaction));
        });
        const EntropyScatter scatter =
            clock.stage("entropies_" + label, [&] { return eigenstate_entropies(sys, cfg.chain); });
        const auto bulk = middle_fraction(sys.eigenvalues);
        const SpectralStatistics ratios = gap_ratio_statistic(bulk);
        const SpectralStatistics hist = spacing_histogram(bulk, 10);
        const ScarDetection detection = detect_scars(sys, basis, scatter);

        if (cfg.want_csv()) {
            writer.write("entropy_" + label + ".csv",
                         csv_document({"energy", "entropy"},
                                      {{scatter.energies.data(), scatter.energies.data() + scatter.energies.size()},
                                       {scatter.entropies.data(), scatter.entropies.data() + scatter.entropies.size()}}));
            std::vector<double> centers(hist.histogram.density.size());
            for (size_t b = 0; b < centers.size(); ++b)
                centers[b] = 0.5 * (hist.histogram.bin_edges[b] + hist.histogram.bin_edges[b + 1]);
            writer.write("spacing_" + label + ".csv",
                         csv_document({"s", "density", "wigner_gue"},
                                      {centers, hist.histogram.density, hist.histogram.wigner_reference}));
        }
        ordered_json block;
        block["mean_r"] = ratios.mean_r;
        block["standard_error"] = ratios.standard_error;
        block["num_ratios"] = ratios.gap_ratios.size();
        block["scar_count"] = detection.count;
        block["scar_overlap_threshold"] = detection.threshold;
        block["outlier_indices"] = detection.outlier_indices;
        ordered_json energies = ordered_json::array();
        for (int idx : detection.outlier_indices) energies.push_back(sys.eigenvalues(idx));
        block["outlier_energies"] = energies;
        summary[label] = block;
    }
    if (cfg.want_json()) writer.write("spectral_summary.json", summary.dump(2) + "\n");
}

inline void run_perturbation_pipeline(const ExperimentConfig& cfg, RunWriter& writer, StageClock& clock)
{
    TransferJob job;
    job.background = Background::zeros;

    ordered_json summary;
    for (HamiltonianVariant base : {HamiltonianVariant::scar, HamiltonianVariant::pst}) {
        const std::string base_label = to_string(base);
        const DenseOperator h_base = clock.stage("build_" + base_label, [&] {
            return build_variant(base, cfg.chain, cfg.interaction);
        });
        for (PerturbationKind kind :
             {PerturbationKind::global_x, PerturbationKind::local_x, PerturbationKind::global_yy}) {
            const std::string label = std::string(to_string(kind)) + "_" + base_label;
            const ScalingFit fit = clock.stage("scan_" + label, [&] {
                return infidelity_scan(h_base, kind, cfg.epsilons, job, cfg.chain);
            });
            if (cfg.want_csv())
                writer.write("infidelity_" + label + ".csv",
                             csv_document({"epsilon", "infidelity"}, {fit.epsilons, fit.infidelities}));
            ordered_json block;
            block["slope"] = fit.slope;
            block["intercept"] = fit.intercept;
            block["r_squared"] = fit.r_squared;
            block["fit_points"] = fit.fit_indices.size();
            summary[label] = block;
        }
    }
    if (cfg.want_json()) writer.write("scaling_summary.json", summary.dump(2) + "\n");
}

inline void run_classify_pipeline(const ExperimentConfig& cfg, RunWriter& writer, StageClock& clock)
{
    const InteractionClassification result = clock.stage("classify", [&] {
        return classify_interactions(build_projector(ProjectorKind::spin_one_two_body));
    });
    ordered_json j;
    j["annihilated"] = result.annihilated;
    j["fixed"] = result.fixed;
    j["other"] = result.other;
    writer.write("classification.json", j.dump(2) + "\n");
}

inline void run_appendix_pipeline(const ExperimentConfig& cfg, RunWriter& writer, StageClock& clock)
{
    const ShiraishiMoriReport sm = clock.stage("shiraishi_mori", [&] {
        return shiraishi_mori_report(cfg.chain);
    });
    ordered_json j;
    j["shiraishi_mori"] = {{"N", cfg.chain.num_sites},
                           {"h_pst_projector_comm", sm.h_pst_projector_comm},
                           {"jx_projector_comm", sm.jx_projector_comm},
                           {"spin1_N", sm.spin1_num_sites},
                           {"spin1_trivial_comm_max", sm.spin1_trivial_comm_max}};
    j["trivial_embedding"] = ordered_json::object();
    for (int n : {3, 4}) {
        ChainConfig spin1 = cfg.chain;
        spin1.local_dim = 3;
        spin1.num_sites = n;
        const TrivialEmbeddingReport report = clock.stage("trivial_embedding_N" + std::to_string(n),
                                                          [&] { return trivial_embedding_compare(spin1); });
        j["trivial_embedding"]["N" + std::to_string(n)] = {
            {"trivial_kernel_dim", report.trivial_kernel_dim},
            {"expected_trivial_dim", report.expected_trivial_dim},
            {"minimal_kernel_dim", report.minimal_kernel_dim},
            {"transfer_subspace_dim", report.transfer_subspace_dim},
            {"family_minimal_diff", report.family_minimal_diff},
            {"family_trivial_diff", report.family_trivial_diff}};
    }
    writer.write("appendix_report.json", j.dump(2) + "\n");
}

} // namespace detail

// Execute the configured pipeline end to end, writing the result files plus
// manifest.json into the output directory.
inline RunManifest run_experiment(const ExperimentConfig& cfg)
{
    cfg.validate();
    RunManifest manifest;
    manifest.config_echo = cfg.to_json();
    manifest.config_sha256 = sha256_hex(manifest.config_echo.dump());
    detail::StageClock clock(manifest);
    RunWriter writer{std::filesystem::path(cfg.output_dir)};

    if (cfg.experiment == "fig2-transfer" || cfg.experiment == "fig3-transfer")
        detail::run_transfer_pipeline(cfg, writer, clock);
    else if (cfg.experiment == "fig2-spectral" || cfg.experiment == "fig3-spectral")
        detail::run_spectral_pipeline(cfg, writer, clock);
    else if (cfg.experiment == "fig4-perturbation")
        detail::run_perturbation_pipeline(cfg, writer, clock);
    else if (cfg.experiment == "classify")
        detail::run_classify_pipeline(cfg, writer, clock);
    else if (cfg.experiment == "appendix-checks")
        detail::run_appendix_pipeline(cfg, writer, clock);
    else
        throw config_error("unknown experiment '" + cfg.experiment + "'");

    manifest.outputs = writer.inventory();
    writer.write("manifest.json", manifest.to_json().dump(2) + "\n");
    return manifest;
}

// machine-readable description of the config document
inline ordered_json config_schema()
{
    ordered_json schema;
    schema["experiment"] = {{"type", "string"}, {"enum", experiment_names()},
                            {"doc", "which pipeline to run; selects the preset defaults below"}};
    schema["chain"] = {{"N", {{"type", "integer"}, {"doc", "chain length, >= 2"}}},
                       {"local_dim", {{"type", "integer"}, {"doc", "2 (spin-1/2) or 3 (spin-1)"}}},
                       {"omega", {{"type", "number"}, {"doc", "field strength"}}},
                       {"lambda", {{"type", "number"}, {"doc", "coupling scale, > 0"}}},
                       {"seed", {{"type", "integer"}, {"doc", "64-bit RNG seed"}}}};
    schema["interaction"] = {
        {"window_size", {{"type", "integer"}, {"doc", "3-site windows (spin-1/2) or 2-site pairs (spin-1)"}}},
        {"seed", {{"type", "integer"}, {"doc", "seed for the random interaction draws"}}},
        {"homogeneous", {{"type", "boolean"}, {"doc", "share one random draw across all terms"}}},
        {"decay_power", {{"type", "number"}, {"doc", "pair terms scale by 1/|n-n'|^p"}}}};
    schema["output_dir"] = {{"type", "string"}, {"doc", "run directory for result files"}};
    schema["format"] = {{"type", "string"}, {"enum", {"csv", "json", "both"}}};
    schema["time_samples"] = {{"type", "integer"}, {"doc", "fidelity trace samples over [0, 3 pi/lambda]"}};
    schema["epsilons"] = {{"type", "array"}, {"doc", "fig4 perturbation strengths, ascending, >= 2 decades"}};
    schema["presets"] = ordered_json::object();
    for (const auto& name : experiment_names())
        schema["presets"][name] = ExperimentConfig::preset(name).to_json();
    return schema;
}

} // namespace scarpst
