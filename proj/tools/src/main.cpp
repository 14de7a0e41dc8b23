#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "profilecast/config.hpp"
#include "profilecast/errors.hpp"
#include "profilecast/report.hpp"
#include "profilecast/synth.hpp"
#include "profilecast/version.hpp"

namespace {

void write_output(const std::string& path, const std::string& text) {
    if (path.empty()) {
        std::fwrite(text.data(), 1, text.size(), stdout);
        return;
    }
    std::FILE* f = std::fopen(path.c_str(), "wb");
    if (!f) {
        throw profilecast::Error(profilecast::ErrorKind::Io,
                                 "cannot open " + path + " for writing");
    }
    std::size_t written = std::fwrite(text.data(), 1, text.size(), f);
    int close_rc = std::fclose(f);
    if (written != text.size() || close_rc != 0) {
        throw profilecast::Error(profilecast::ErrorKind::Io, "short write to " + path);
    }
}

std::uint64_t parse_seed_env(const char* text) {
    std::string s(text);
    std::uint64_t v = 0;
    std::size_t pos = 0;
    try {
        v = std::stoull(s, &pos);
    } catch (const std::exception&) {
        pos = std::string::npos;
    }
    if (pos != s.size() || s.empty()) {
        throw profilecast::Error(profilecast::ErrorKind::Config,
                                 "PROFILECAST_SEED must be an unsigned integer, got '" +
                                     s + "'");
    }
    return v;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Wearable-activity profiling pipeline"};
    app.set_version_flag("--version", profilecast::kVersion);
    app.require_subcommand(1);

    // run
    CLI::App* run = app.add_subcommand("run", "Run the profiling pipeline on a CSV export");
    std::string input, config_path, modules_arg, format, output;
    std::string dump_features, dump_profiles;
    std::uint64_t seed = 0;
    std::size_t k = 0, pca_components = 0;
    double corr_threshold = 0.0;
    run->add_option("--input", input, "Daily-activity CSV export");
    run->add_option("--config", config_path, "Config file (.json or .toml)");
    run->add_option("--seed", seed, "Clustering seed (overrides PROFILECAST_SEED)");
    CLI::Option* k_opt = run->add_option("--k", k, "Clusters per feature module");
    CLI::Option* auto_k = run->add_flag("--auto-k", "Pick k per module from the inertia curve");
    k_opt->excludes(auto_k);
    auto_k->excludes(k_opt);
    run->add_option("--corr-threshold", corr_threshold,
                    "Absolute correlation at or above which a feature is dropped");
    run->add_option("--pca-components", pca_components, "Principal components to keep");
    run->add_flag("--no-standardize", "Cluster on unstandardized values");
    run->add_option("--modules", modules_arg,
                    "Comma-separated subset of original,pca,correlation");
    run->add_option("--format", format, "Report format: json, csv, or markdown");
    run->add_option("--output", output, "Report destination (default stdout)");
    run->add_option("--dump-features", dump_features,
                    "Directory for per-module record-level feature CSVs");
    run->add_option("--dump-profiles", dump_profiles,
                    "Directory for per-module fused profile CSVs");
    run->add_flag("--drop-bad-rows", "Drop and log malformed rows instead of failing");

    // synth
    CLI::App* synth = app.add_subcommand("synth", "Write the deterministic reference CSV");
    std::string synth_output = "daily_activity_reference.csv";
    std::uint64_t synth_seed = profilecast::synth::kReferenceSeed;
    synth->add_option("--output", synth_output, "Destination path");
    synth->add_option("--seed", synth_seed, "Generator seed");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 3;
    }

    try {
        if (run->parsed()) {
            profilecast::PipelineConfig cfg;
            if (!config_path.empty()) profilecast::apply_config_file(cfg, config_path);
            if (const char* env = std::getenv("PROFILECAST_SEED")) {
                cfg.seed = parse_seed_env(env);
            }
            if (run->count("--input")) cfg.input_path = input;
            if (run->count("--seed")) cfg.seed = seed;
            if (run->count("--k")) cfg.k = k;
            if (run->count("--auto-k")) cfg.auto_k = true;
            if (run->count("--corr-threshold")) cfg.corr_threshold = corr_threshold;
            if (run->count("--pca-components")) cfg.pca_components = pca_components;
            if (run->count("--no-standardize")) cfg.standardize = false;
            if (run->count("--modules")) cfg.modules = profilecast::parse_module_list(modules_arg);
            if (run->count("--format")) cfg.format = format;
            if (run->count("--output")) cfg.output_path = output;
            if (run->count("--dump-features")) cfg.dump_features_dir = dump_features;
            if (run->count("--dump-profiles")) cfg.dump_profiles_dir = dump_profiles;
            if (run->count("--drop-bad-rows")) cfg.drop_bad_rows = true;

            profilecast::PipelineResult result = profilecast::run_pipeline(cfg);
            if (!cfg.dump_features_dir.empty()) {
                profilecast::write_feature_dumps(result, cfg.dump_features_dir);
            }
            if (!cfg.dump_profiles_dir.empty()) {
                profilecast::write_profile_dumps(result, cfg.dump_profiles_dir);
            }
            write_output(cfg.output_path, profilecast::render_report(result.report, cfg.format));
        } else if (synth->parsed()) {
            write_output(synth_output, profilecast::synth::generate_csv(synth_seed));
        }
    } catch (const profilecast::Error& e) {
        std::cerr << "error (" << profilecast::error_kind_name(e.kind()) << "): " << e.what()
                  << "\n";
        return e.exit_code();
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
