#include "profilecast/report.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <filesystem>
#include <utility>

#include <nlohmann/json.hpp>

#include "profilecast/csv.hpp"
#include "profilecast/errors.hpp"
#include "profilecast/version.hpp"

namespace profilecast {

namespace {

using ojson = nlohmann::ordered_json;

template <typename Fn>
auto phase(const char* name, Fn&& fn) -> decltype(fn()) {
    try {
        return fn();
    } catch (const Error& e) {
        throw Error(e.kind(), std::string(name) + ": " + e.what());
    }
}

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

std::string fixed5(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.5f", v);
    return buf;
}

ojson matrix_to_json(const Matrix& m) {
    ojson data = ojson::array();
    for (std::size_t r = 0; r < m.rows; ++r) {
        ojson row = ojson::array();
        for (std::size_t c = 0; c < m.cols; ++c) row.push_back(m.at(r, c));
        data.push_back(std::move(row));
    }
    return ojson{{"rows", m.rows},
                 {"cols", m.cols},
                 {"col_names", m.col_names},
                 {"data", std::move(data)}};
}

Matrix matrix_from_json(const ojson& j) {
    Matrix m(j.at("rows").get<std::size_t>(), j.at("cols").get<std::size_t>());
    m.col_names = j.at("col_names").get<std::vector<std::string>>();
    const ojson& data = j.at("data");
    if (data.size() != m.rows) {
        throw Error(ErrorKind::Parse, "report json: matrix row count mismatch");
    }
    for (std::size_t r = 0; r < m.rows; ++r) {
        const ojson& row = data.at(r);
        if (row.size() != m.cols) {
            throw Error(ErrorKind::Parse, "report json: matrix column count mismatch");
        }
        for (std::size_t c = 0; c < m.cols; ++c) m.at(r, c) = row.at(c).get<double>();
    }
    return m;
}

ojson partition_to_json(const Partition& p) {
    std::vector<std::vector<std::int64_t>> members(static_cast<std::size_t>(p.k));
    for (std::size_t i = 0; i < p.users.size(); ++i) {
        members[static_cast<std::size_t>(p.labels[i])].push_back(p.users[i]);
    }
    ojson clusters = ojson::array();
    for (std::size_t label = 0; label < members.size(); ++label) {
        clusters.push_back(ojson{{"label", label}, {"members", members[label]}});
    }
    return ojson{{"clusters", std::move(clusters)}};
}

Partition partition_from_json(const ojson& j) {
    std::vector<std::int64_t> users;
    std::vector<int> labels;
    for (const ojson& cluster : j.at("clusters")) {
        int label = cluster.at("label").get<int>();
        for (const ojson& member : cluster.at("members")) {
            users.push_back(member.get<std::int64_t>());
            labels.push_back(label);
        }
    }
    return Partition::from_labels(std::move(users), std::move(labels));
}

ojson elbow_to_json(const ElbowResult& e) {
    return ojson{{"chosen_k", e.chosen_k}, {"ks", e.ks}, {"inertias", e.inertias}};
}

ElbowResult elbow_from_json(const ojson& j) {
    ElbowResult e;
    e.chosen_k = j.at("chosen_k").get<std::size_t>();
    e.ks = j.at("ks").get<std::vector<std::size_t>>();
    e.inertias = j.at("inertias").get<std::vector<double>>();
    return e;
}

ojson kmeans_to_json(const KMeansModel& m) {
    return ojson{{"k", m.k},
                 {"seed", m.seed},
                 {"best_restart", m.best_restart},
                 {"iterations", m.iterations},
                 {"inertia", m.inertia},
                 {"inertia_history", m.inertia_history},
                 {"repair_log", m.repair_log},
                 {"centroids", matrix_to_json(m.centroids)},
                 {"partition", partition_to_json(m.labels)}};
}

KMeansModel kmeans_from_json(const ojson& j) {
    KMeansModel m;
    m.k = j.at("k").get<std::size_t>();
    m.seed = j.at("seed").get<std::uint64_t>();
    m.best_restart = j.at("best_restart").get<std::size_t>();
    m.iterations = j.at("iterations").get<std::size_t>();
    m.inertia = j.at("inertia").get<double>();
    m.inertia_history = j.at("inertia_history").get<std::vector<double>>();
    m.repair_log = j.at("repair_log").get<std::vector<std::string>>();
    m.centroids = matrix_from_json(j.at("centroids"));
    m.labels = partition_from_json(j.at("partition"));
    return m;
}

ojson robust_to_json(const RobustPartition& rp) {
    ojson clusters = ojson::array();
    for (std::size_t i = 0; i < rp.member_lists.size(); ++i) {
        clusters.push_back(ojson{{"cluster_id", i},
                                 {"signature", rp.cell_signatures[i]},
                                 {"members", rp.member_lists[i]}});
    }
    return ojson{{"clusters", std::move(clusters)}};
}

RobustPartition robust_from_json(const ojson& j) {
    RobustPartition rp;
    std::vector<std::int64_t> users;
    std::vector<int> labels;
    for (const ojson& cluster : j.at("clusters")) {
        int id = cluster.at("cluster_id").get<int>();
        const ojson& sig = cluster.at("signature");
        rp.cell_signatures.push_back(
            {sig.at(0).get<int>(), sig.at(1).get<int>(), sig.at(2).get<int>()});
        auto members = cluster.at("members").get<std::vector<std::int64_t>>();
        for (std::int64_t u : members) {
            users.push_back(u);
            labels.push_back(id);
        }
        rp.member_lists.push_back(std::move(members));
    }
    rp.partition = Partition::from_labels(std::move(users), std::move(labels));
    return rp;
}

ojson config_to_json(const PipelineConfig& c) {
    ojson modules = ojson::array();
    for (FeatureModuleId id : c.modules) modules.push_back(lower(module_name(id)));
    return ojson{{"input", c.input_path},
                 {"seed", c.seed},
                 {"k", c.k},
                 {"auto_k", c.auto_k},
                 {"elbow_k_min", c.elbow_k_min},
                 {"elbow_k_max", c.elbow_k_max},
                 {"corr_threshold", c.corr_threshold},
                 {"pca_components", c.pca_components},
                 {"standardize", c.standardize},
                 {"modules", std::move(modules)},
                 {"format", c.format},
                 {"output", c.output_path},
                 {"dump_features", c.dump_features_dir},
                 {"dump_profiles", c.dump_profiles_dir},
                 {"drop_bad_rows", c.drop_bad_rows}};
}

PipelineConfig config_from_json(const ojson& j) {
    PipelineConfig c;
    c.input_path = j.at("input").get<std::string>();
    c.seed = j.at("seed").get<std::uint64_t>();
    c.k = j.at("k").get<std::size_t>();
    c.auto_k = j.at("auto_k").get<bool>();
    c.elbow_k_min = j.at("elbow_k_min").get<std::size_t>();
    c.elbow_k_max = j.at("elbow_k_max").get<std::size_t>();
    c.corr_threshold = j.at("corr_threshold").get<double>();
    c.pca_components = j.at("pca_components").get<std::size_t>();
    c.standardize = j.at("standardize").get<bool>();
    c.modules.clear();
    for (const ojson& name : j.at("modules")) {
        c.modules.push_back(module_from_name(name.get<std::string>()));
    }
    c.format = j.at("format").get<std::string>();
    c.output_path = j.at("output").get<std::string>();
    c.dump_features_dir = j.at("dump_features").get<std::string>();
    c.dump_profiles_dir = j.at("dump_profiles").get<std::string>();
    c.drop_bad_rows = j.at("drop_bad_rows").get<bool>();
    return c;
}

ojson dataset_to_json(const DatasetReport& d) {
    ojson features = ojson::array();
    for (const FeatureSummary& f : d.summary.features) {
        features.push_back(
            ojson{{"name", f.name}, {"min", f.min}, {"max", f.max}, {"mean", f.mean}});
    }
    return ojson{{"records", d.summary.record_count},
                 {"users", d.summary.user_count},
                 {"features", std::move(features)},
                 {"feature_names", d.feature_names},
                 {"dropped_columns", d.dropped_columns},
                 {"warnings", d.warnings}};
}

DatasetReport dataset_from_json(const ojson& j) {
    DatasetReport d;
    d.summary.record_count = j.at("records").get<std::size_t>();
    d.summary.user_count = j.at("users").get<std::size_t>();
    for (const ojson& f : j.at("features")) {
        d.summary.features.push_back({f.at("name").get<std::string>(),
                                      f.at("min").get<double>(), f.at("max").get<double>(),
                                      f.at("mean").get<double>()});
    }
    d.feature_names = j.at("feature_names").get<std::vector<std::string>>();
    d.dropped_columns = j.at("dropped_columns").get<std::vector<std::string>>();
    d.warnings = j.at("warnings").get<std::vector<std::string>>();
    return d;
}

ojson module_report_to_json(const ModuleReport& m) {
    return ojson{{"module", module_name(m.module)},
                 {"selected_features", m.selected_features},
                 {"dropped_features", m.dropped_features},
                 {"explained_variance", m.explained_variance},
                 {"explained_variance_ratio", m.explained_variance_ratio},
                 {"elbow", m.elbow ? elbow_to_json(*m.elbow) : ojson(nullptr)},
                 {"chosen_k", m.chosen_k},
                 {"kmeans", kmeans_to_json(m.kmeans)}};
}

ModuleReport module_report_from_json(const ojson& j) {
    ModuleReport m;
    m.module = module_from_name(j.at("module").get<std::string>());
    m.selected_features = j.at("selected_features").get<std::vector<std::string>>();
    m.dropped_features = j.at("dropped_features").get<std::vector<std::string>>();
    m.explained_variance = j.at("explained_variance").get<std::vector<double>>();
    m.explained_variance_ratio =
        j.at("explained_variance_ratio").get<std::vector<double>>();
    if (!j.at("elbow").is_null()) m.elbow = elbow_from_json(j.at("elbow"));
    m.chosen_k = j.at("chosen_k").get<std::size_t>();
    m.kmeans = kmeans_from_json(j.at("kmeans"));
    return m;
}

ojson validity_to_json(const ValidityReport& v) {
    ojson cells = ojson::array();
    for (std::size_t metric = 0; metric < 3; ++metric) {
        for (std::size_t alg = 0; alg < 2; ++alg) {
            for (std::size_t mod = 0; mod < 3; ++mod) {
                const MetricCell& cell = v.cells[metric][alg][mod];
                ojson out{{"metric", kMetricNames[metric]},
                          {"algorithm", kAlgorithmNames[alg]},
                          {"module", module_name(static_cast<FeatureModuleId>(mod))}};
                if (cell.ok) {
                    out["value"] = cell.value;
                } else {
                    out["error_kind"] = cell.error_kind;
                    out["error"] = cell.error;
                }
                cells.push_back(std::move(out));
            }
        }
    }
    return ojson{{"cells", std::move(cells)}};
}

ValidityReport validity_from_json(const ojson& j) {
    ValidityReport v;
    for (const ojson& cell_json : j.at("cells")) {
        std::string metric_name = cell_json.at("metric").get<std::string>();
        std::string alg_name = cell_json.at("algorithm").get<std::string>();
        std::size_t metric = 3;
        for (std::size_t i = 0; i < kMetricNames.size(); ++i) {
            if (metric_name == kMetricNames[i]) metric = i;
        }
        std::size_t alg = 2;
        for (std::size_t i = 0; i < kAlgorithmNames.size(); ++i) {
            if (alg_name == kAlgorithmNames[i]) alg = i;
        }
        if (metric == 3 || alg == 2) {
            throw Error(ErrorKind::Parse,
                        "report json: unknown grid cell " + metric_name + "/" + alg_name);
        }
        FeatureModuleId mod = module_from_name(cell_json.at("module").get<std::string>());
        MetricCell cell;
        if (cell_json.contains("value")) {
            cell.ok = true;
            cell.value = cell_json.at("value").get<double>();
        } else {
            cell.error_kind = cell_json.at("error_kind").get<std::string>();
            cell.error = cell_json.at("error").get<std::string>();
        }
        v.cell(metric, alg, mod) = std::move(cell);
    }
    return v;
}

ojson report_to_json(const RunReport& r) {
    ojson modules = ojson::array();
    for (const ModuleReport& m : r.per_module) modules.push_back(module_report_to_json(m));
    return ojson{{"version", r.version},
                 {"config", config_to_json(r.config)},
                 {"dataset", dataset_to_json(r.dataset)},
                 {"modules", std::move(modules)},
                 {"robust", r.robust ? robust_to_json(*r.robust) : ojson(nullptr)},
                 {"validity", validity_to_json(r.validity)},
                 {"notices", r.notices}};
}

std::string render_csv(const RunReport& r) {
    csv::Table table;
    table.header = {"metric", "algorithm", "module", "value", "error_kind", "error"};
    for (std::size_t metric = 0; metric < 3; ++metric) {
        for (std::size_t alg = 0; alg < 2; ++alg) {
            for (std::size_t mod = 0; mod < 3; ++mod) {
                const MetricCell& cell = r.validity.cells[metric][alg][mod];
                table.rows.push_back({kMetricNames[metric], kAlgorithmNames[alg],
                                      module_name(static_cast<FeatureModuleId>(mod)),
                                      cell.ok ? format_double(cell.value) : "",
                                      cell.ok ? "" : cell.error_kind,
                                      cell.ok ? "" : cell.error});
            }
        }
    }
    return csv::write(table);
}

std::string cell_marker(const MetricCell& cell) {
    if (cell.ok) return fixed5(cell.value);
    if (cell.error_kind == "skipped") return "skipped";
    return "error(" + cell.error_kind + ")";
}

std::string render_markdown(const RunReport& r) {
    std::string out;
    out += "# Activity profiling report\n\n";
    out += "- input: `" + r.config.input_path + "`\n";
    out += "- records: " + std::to_string(r.dataset.summary.record_count) +
           ", users: " + std::to_string(r.dataset.summary.user_count) + "\n";
    out += "- seed: " + std::to_string(r.config.seed) + "\n";
    std::string modules_line;
    for (const ModuleReport& m : r.per_module) {
        if (!modules_line.empty()) modules_line += ", ";
        modules_line += std::string(module_name(m.module)) +
                        " (k=" + std::to_string(m.chosen_k) + ")";
    }
    out += "- modules: " + modules_line + "\n";
    if (r.robust) {
        out += "- robust clusters: " + std::to_string(r.robust->member_lists.size()) + "\n";
    }
    out += "\n| Metric |";
    for (std::size_t alg = 0; alg < 2; ++alg) {
        for (std::size_t mod = 0; mod < 3; ++mod) {
            out += std::string(" ") + kAlgorithmNames[alg] + " " +
                   module_name(static_cast<FeatureModuleId>(mod)) + " |";
        }
    }
    out += "\n|---|---|---|---|---|---|---|\n";
    for (std::size_t metric = 0; metric < 3; ++metric) {
        out += std::string("| ") + kMetricNames[metric] + " |";
        for (std::size_t alg = 0; alg < 2; ++alg) {
            for (std::size_t mod = 0; mod < 3; ++mod) {
                out += " " + cell_marker(r.validity.cells[metric][alg][mod]) + " |";
            }
        }
        out += "\n";
    }
    if (!r.notices.empty()) {
        out += "\nNotices:\n";
        for (const std::string& n : r.notices) out += "- " + n + "\n";
    }
    return out;
}

} // namespace

PipelineResult run_pipeline(const PipelineConfig& cfg) {
    validate_config(cfg);

    PipelineResult result;
    RunReport& rep = result.report;
    rep.version = kVersion;
    rep.config = cfg;

    result.dataset = phase("ingest", [&] {
        ParseOptions opts;
        opts.drop_bad_rows = cfg.drop_bad_rows;
        return drop_duplicate_features(parse_csv(cfg.input_path, kFullSchema, opts));
    });
    const Dataset& ds = result.dataset;
    rep.dataset.summary = dataset_summary(ds);
    rep.dataset.feature_names = ds.feature_names;
    rep.dataset.dropped_columns = ds.dropped_columns;
    rep.dataset.warnings = ds.warnings;

    result.feature_matrices.reserve(cfg.modules.size());
    result.profile_matrices.reserve(cfg.modules.size());

    for (FeatureModuleId id : cfg.modules) {
        ModuleReport mr;
        mr.module = id;
        FeatureMatrix fm = phase(module_name(id), [&]() -> FeatureMatrix {
            switch (id) {
            case FeatureModuleId::Original:
                return select_original(ds);
            case FeatureModuleId::Pca: {
                PcaProjection proj = project_pca(ds, cfg.pca_components, cfg.standardize);
                mr.explained_variance = std::move(proj.explained_variance);
                mr.explained_variance_ratio = std::move(proj.explained_variance_ratio);
                return std::move(proj.matrix);
            }
            case FeatureModuleId::Correlation: {
                CorrelationSelection sel = select_by_correlation(ds, cfg.corr_threshold);
                mr.dropped_features = std::move(sel.dropped);
                return std::move(sel.matrix);
            }
            }
            throw Error(ErrorKind::Param, "unknown feature module");
        });
        mr.selected_features = fm.feature_names();

        ProfileMatrix pm =
            phase("fusion", [&] { return fuse_user_records(fm, cfg.standardize); });
        for (const std::string& w : pm.warnings) {
            rep.notices.push_back(std::string(module_name(id)) + ": " + w);
        }

        std::size_t k = cfg.k;
        if (cfg.auto_k) {
            ElbowResult er = phase("elbow", [&] {
                return elbow_select_k(pm, cfg.seed, cfg.elbow_k_min, cfg.elbow_k_max);
            });
            k = er.chosen_k;
            mr.elbow = std::move(er);
        }
        mr.chosen_k = k;
        mr.kmeans = phase("clustering", [&] { return kmeans_fit(pm, k, cfg.seed); });

        result.feature_matrices.push_back(std::move(fm));
        result.profile_matrices.push_back(std::move(pm));
        rep.per_module.push_back(std::move(mr));
    }

    std::array<const ProfileMatrix*, 3> profiles = {nullptr, nullptr, nullptr};
    std::array<const Partition*, 3> parts = {nullptr, nullptr, nullptr};
    for (std::size_t i = 0; i < rep.per_module.size(); ++i) {
        auto slot = static_cast<std::size_t>(rep.per_module[i].module);
        profiles[slot] = &result.profile_matrices[i];
        parts[slot] = &rep.per_module[i].kmeans.labels;
    }

    const Partition* robust_part = nullptr;
    if (cfg.runs_all_modules()) {
        rep.robust = phase("intersection", [&] {
            return intersect_partitions(*parts[0], *parts[1], *parts[2]);
        });
        robust_part = &rep.robust->partition;
    } else {
        rep.notices.push_back(
            "robust clustering skipped: intersection needs all three feature modules");
    }

    rep.validity = score_all(profiles, parts, robust_part);
    return result;
}

std::string render_report(const RunReport& r, const std::string& format) {
    if (format == "json") return report_to_json(r).dump(2) + "\n";
    if (format == "csv") return render_csv(r);
    if (format == "markdown") return render_markdown(r);
    throw Error(ErrorKind::Param, "unknown report format '" + format + "'");
}

RunReport parse_report_json(const std::string& text) {
    ojson j;
    try {
        j = ojson::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorKind::Parse, std::string("report json: ") + e.what());
    }
    try {
        RunReport r;
        r.version = j.at("version").get<std::string>();
        r.config = config_from_json(j.at("config"));
        r.dataset = dataset_from_json(j.at("dataset"));
        for (const ojson& m : j.at("modules")) {
            r.per_module.push_back(module_report_from_json(m));
        }
        if (!j.at("robust").is_null()) r.robust = robust_from_json(j.at("robust"));
        r.validity = validity_from_json(j.at("validity"));
        r.notices = j.at("notices").get<std::vector<std::string>>();
        return r;
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorKind::Parse, std::string("report json: ") + e.what());
    }
}

namespace {

void ensure_dir(const std::string& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) {
        throw Error(ErrorKind::Io, "cannot create directory " + dir + ": " + ec.message());
    }
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::FILE* f = std::fopen(path.string().c_str(), "wb");
    if (!f) {
        throw Error(ErrorKind::Io, "cannot open " + path.string() + " for writing");
    }
    std::size_t written = std::fwrite(text.data(), 1, text.size(), f);
    int close_rc = std::fclose(f);
    if (written != text.size() || close_rc != 0) {
        throw Error(ErrorKind::Io, "short write to " + path.string());
    }
}

} // namespace

void write_feature_dumps(const PipelineResult& result, const std::string& dir) {
    ensure_dir(dir);
    for (const FeatureMatrix& fm : result.feature_matrices) {
        csv::Table table;
        table.header = {"Id", "ActivityDate"};
        for (const std::string& name : fm.feature_names()) table.header.push_back(name);
        for (std::size_t i = 0; i < fm.row_keys.size(); ++i) {
            std::vector<std::string> row = {std::to_string(fm.row_keys[i].user_id),
                                            fm.row_keys[i].activity_date.to_string()};
            for (std::size_t j = 0; j < fm.values.cols; ++j) {
                row.push_back(format_double(fm.values.at(i, j)));
            }
            table.rows.push_back(std::move(row));
        }
        std::filesystem::path path =
            std::filesystem::path(dir) / ("features_" + lower(module_name(fm.module)) + ".csv");
        csv::write_file(path.string(), table);
    }
}

void write_profile_dumps(const PipelineResult& result, const std::string& dir) {
    ensure_dir(dir);
    for (const ProfileMatrix& pm : result.profile_matrices) {
        for (bool standardized : {false, true}) {
            const Matrix& values = standardized ? pm.standardized_values : pm.values;
            csv::Table table;
            table.header = {"user_id"};
            for (const std::string& name : pm.stat_names) table.header.push_back(name);
            for (std::size_t i = 0; i < pm.n_users(); ++i) {
                std::vector<std::string> row = {std::to_string(pm.user_ids[i])};
                for (std::size_t j = 0; j < values.cols; ++j) {
                    row.push_back(format_double(values.at(i, j)));
                }
                table.rows.push_back(std::move(row));
            }
            std::string name = "profiles_" + lower(module_name(pm.module)) +
                               (standardized ? "_standardized.csv" : ".csv");
            csv::write_file((std::filesystem::path(dir) / name).string(), table);
        }
    }
    if (result.report.robust) {
        write_text(std::filesystem::path(dir) / "robust_profile.json",
                   robust_to_json(*result.report.robust).dump(2) + "\n");
    }
}

} // namespace profilecast
