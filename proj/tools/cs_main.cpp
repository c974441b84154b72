// Command-line front end: synth -> ingest -> features/labels -> correlate ->
// experiments -> report, each stage resumable from the files of the previous
// one.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "commsuccess/config.hpp"
#include "commsuccess/csv.hpp"
#include "commsuccess/errors.hpp"
#include "commsuccess/ndjson.hpp"
#include "commsuccess/pipeline.hpp"
#include "commsuccess/synth.hpp"

namespace fs = std::filesystem;
using namespace commsuccess;

namespace {

fs::path require_file(const fs::path& path, const std::string& stage) {
    if (!fs::exists(path))
        throw DataError("missing " + path.string() + "; run the '" + stage + "' stage first");
    return path;
}

std::vector<Event> load_checkpoint_events(const fs::path& dir) {
    const auto path = require_file(dir / "events.ndjson", "ingest");
    std::ifstream in(path);
    std::vector<Event> events;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        events.push_back(event_from_json(nlohmann::json::parse(line)));
    }
    return events;
}

Corpus load_corpus(const fs::path& dir) { return build_corpus(load_checkpoint_events(dir)); }

std::vector<std::string> load_focal(const fs::path& dir) {
    const auto rows = read_csv(require_file(dir / "communities.csv", "ingest").string());
    std::vector<std::string> focal;
    for (std::size_t i = 1; i < rows.size(); ++i)
        if (rows[i].size() >= 2 && rows[i][1] == "1") focal.push_back(rows[i][0]);
    return focal;
}

// --- stages ----------------------------------------------------------------

void cmd_synth(const fs::path& out_dir, int n_communities, std::uint64_t seed, int jobs) {
    fs::create_directories(out_dir);
    CorpusParams cp;
    cp.n_communities = n_communities;
    cp.seed = seed;
    const auto events = generate_corpus(cp, nullptr, jobs);
    std::ofstream posts(out_dir / "posts.ndjson", std::ios::binary);
    std::ofstream comments(out_dir / "comments.ndjson", std::ios::binary);
    write_dump(posts, events, DumpKind::Posts);
    write_dump(comments, events, DumpKind::Comments);
    std::cerr << "synth: wrote " << events.size() << " events for " << n_communities
              << " communities\n";
}

void cmd_ingest(const std::string& posts_path, const std::string& comments_path, int year,
                const fs::path& out_dir) {
    fs::create_directories(out_dir);
    std::vector<Event> events;
    StreamStats stats;
    for (const auto& [path, kind] :
         {std::pair{posts_path, DumpKind::Posts}, {comments_path, DumpKind::Comments}}) {
        auto source = open_line_source(path);
        const auto s = stream_events(*source, kind, [&](Event&& e) { events.push_back(std::move(e)); });
        stats.parsed += s.parsed;
        stats.skipped += s.skipped;
    }
    if (events.empty()) std::cerr << "warning: no events parsed\n";

    auto corpus = build_corpus(std::move(events));
    const auto focal = focal_communities(corpus, year);
    std::set<std::string> focal_set(focal.begin(), focal.end());

    {
        auto out = open_output(out_dir / "events.ndjson");
        for (const auto& [_, tl] : corpus.timelines)
            for (const auto& e : tl.events) out << event_to_json(e).dump() << '\n';
    }
    {
        auto out = open_output(out_dir / "communities.csv");
        CsvWriter csv(out);
        csv.row({"community_id", "in_year", "created_at", "n_events"});
        for (const auto& [id, tl] : corpus.timelines)
            csv.row({id, focal_set.count(id) ? "1" : "0", std::to_string(tl.created_at),
                     std::to_string(tl.events.size())});
    }
    {
        nlohmann::json st = {{"parsed", stats.parsed},
                             {"skipped", stats.skipped},
                             {"duplicates", corpus.duplicates},
                             {"year_filter", year},
                             {"communities", corpus.timelines.size()},
                             {"focal_communities", focal.size()}};
        auto out = open_output(out_dir / "ingest_stats.json");
        out << st.dump(2) << '\n';
    }
    std::cerr << "ingest: " << stats.parsed << " events (" << stats.skipped << " skipped, "
              << corpus.duplicates << " duplicates), " << focal.size() << " focal communities\n";
}

CategoryLexicon load_lexicon(const std::string& path) {
    if (path.empty()) return default_lexicon();
    std::ifstream in(path);
    if (!in) {
        std::cerr << "warning: lexicon file not readable, proceeding without category features: "
                  << path << "\n";
        return CategoryLexicon{};
    }
    return CategoryLexicon::parse(in);
}

void cmd_features(const fs::path& checkpoint, const fs::path& out_dir,
                  const std::string& lexicon_path, bool dump_windows, const PipelineConfig& cfg,
                  int jobs) {
    fs::create_directories(out_dir);
    const auto corpus = load_corpus(checkpoint);
    const auto focal = load_focal(checkpoint);
    const auto lexicon = load_lexicon(lexicon_path);
    for (int k : cfg.k_values()) {
        const auto table = build_feature_table(corpus, focal, k, lexicon, jobs, cfg.qualification_days);
        const std::string suffix = "_k" + std::to_string(k);
        write_feature_csv(table, out_dir / ("features" + suffix + ".csv"));
        write_feature_flags_csv(table, out_dir / ("features" + suffix + ".flags.csv"));
        if (k == cfg.k_values().front())
            write_feature_manifest(table, out_dir / "feature_manifest.json");
        if (dump_windows) {
            auto out = open_output(out_dir / ("windows" + suffix + ".ndjson"));
            for (const auto& [_, w] : qualifying_windows(corpus, focal, k, cfg.qualification_days))
                out << early_window_to_json(w).dump() << '\n';
        }
        std::cerr << "features: k=" << k << " -> " << table.communities.size() << " communities\n";
    }
}

void cmd_labels(const fs::path& checkpoint, const fs::path& out_dir, const PipelineConfig& cfg,
                int jobs) {
    fs::create_directories(out_dir);
    const auto corpus = load_corpus(checkpoint);
    const auto focal = load_focal(checkpoint);
    for (int k : cfg.k_values()) {
        const auto table = build_success_table(corpus, focal, k, jobs, cfg.qualification_days);
        const std::string suffix = "_k" + std::to_string(k);
        write_labels_csv(table, out_dir / ("labels" + suffix + ".csv"));
        write_thresholds_json(table, out_dir / ("thresholds" + suffix + ".json"));
        std::cerr << "labels: k=" << k << " -> " << table.communities.size() << " communities\n";
    }
}

struct LabelsFile {
    std::vector<std::string> communities;
    std::map<std::string, std::vector<double>> values;
    std::map<std::string, std::vector<int>> labels;
};

LabelsFile read_labels_file(const fs::path& path) {
    const auto rows = read_csv(path.string());
    if (rows.empty()) throw DataError("empty labels file: " + path.string());
    LabelsFile out;
    const auto& header = rows.front();
    for (std::size_t i = 1; i < rows.size(); ++i) {
        out.communities.push_back(rows[i][0]);
        for (std::size_t j = 1; j < header.size(); ++j) {
            const auto& col = header[j];
            if (col.rfind("label_", 0) == 0)
                out.labels[col.substr(6)].push_back(std::stoi(rows[i][j]));
            else
                out.values[col].push_back(std::stod(rows[i][j]));
        }
    }
    return out;
}

void cmd_correlate(const fs::path& labels_dir, const fs::path& out_dir,
                   const PipelineConfig& cfg) {
    fs::create_directories(out_dir);
    std::vector<CorrelationMatrix> matrices;
    for (int k : cfg.k_values()) {
        const auto path = require_file(labels_dir / ("labels_k" + std::to_string(k) + ".csv"),
                                       "labels");
        const auto file = read_labels_file(path);
        std::vector<std::vector<double>> columns;
        for (const auto& m : success_measure_names()) columns.push_back(file.values.at(m));
        for (auto method : {CorrelationMethod::Spearman, CorrelationMethod::Kendall}) {
            auto matrix = correlation_matrix(success_measure_names(), columns, method, k);
            write_correlation_matrix_csv(
                matrix, out_dir / ("correlation_" + std::string(method_name(method)) + "_k" +
                                   std::to_string(k) + ".csv"));
            matrices.push_back(std::move(matrix));
        }
    }
    write_correlation_long_csv(matrices, out_dir / "correlations_long.csv");
    std::cerr << "correlate: " << matrices.size() << " matrices\n";
}

FeatureTable read_feature_table(const fs::path& features_path, const fs::path& flags_path,
                                const fs::path& manifest_path, int k) {
    const auto rows = read_csv(features_path.string());
    if (rows.size() < 2) throw DataError("feature file too small: " + features_path.string());
    FeatureTable table;
    table.k = k;
    const auto& header = rows.front();
    table.names.assign(header.begin() + 1, header.end());

    std::ifstream mf(manifest_path);
    if (!mf)
        throw DataError("missing " + manifest_path.string() + "; run the 'features' stage first");
    const auto manifest = nlohmann::json::parse(mf);
    std::map<std::string, FeatureFamily> family_of;
    for (const auto& f : manifest.at("features"))
        family_of[f.at("name").get<std::string>()] =
            family_from_name(f.at("family").get<std::string>());
    for (const auto& name : table.names) {
        auto it = family_of.find(name);
        if (it == family_of.end()) throw DataError("feature missing from manifest: " + name);
        table.families.push_back(it->second);
    }

    std::map<std::string, std::size_t> row_of;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        table.communities.push_back(rows[i][0]);
        row_of[rows[i][0]] = i - 1;
        std::vector<double> values;
        for (std::size_t j = 1; j < rows[i].size(); ++j) values.push_back(std::stod(rows[i][j]));
        if (values.size() != table.names.size())
            throw DataError("ragged feature row in " + features_path.string());
        table.values.push_back(std::move(values));
        table.flagged.emplace_back(table.names.size(), false);
    }

    std::map<std::string, std::size_t> col_of;
    for (std::size_t j = 0; j < table.names.size(); ++j) col_of[table.names[j]] = j;
    const auto flag_rows = read_csv(flags_path.string());
    for (std::size_t i = 1; i < flag_rows.size(); ++i) {
        const auto r = row_of.find(flag_rows[i][0]);
        const auto c = col_of.find(flag_rows[i][1]);
        if (r != row_of.end() && c != col_of.end()) table.flagged[r->second][c->second] = true;
    }
    return table;
}

void cmd_experiments(const fs::path& features_dir, const fs::path& labels_dir,
                     const fs::path& out_dir, const PipelineConfig& cfg, int jobs) {
    fs::create_directories(out_dir);
    std::vector<ExperimentResult> all_results;
    for (int k : cfg.k_values()) {
        const std::string suffix = "_k" + std::to_string(k);
        const auto features = read_feature_table(
            require_file(features_dir / ("features" + suffix + ".csv"), "features"),
            require_file(features_dir / ("features" + suffix + ".flags.csv"), "features"),
            features_dir / "feature_manifest.json", k);
        const auto labels_file =
            read_labels_file(require_file(labels_dir / ("labels" + suffix + ".csv"), "labels"));
        if (labels_file.communities != features.communities)
            throw DataError("features and labels disagree on communities at k=" +
                            std::to_string(k));

        SuccessTable success;
        success.k = k;
        success.communities = labels_file.communities;
        success.labels.k = k;
        success.labels.communities = labels_file.communities;
        success.labels.labels = labels_file.labels;

        auto results = run_experiments_for_k(features, success, cfg, jobs);
        all_results.insert(all_results.end(), results.begin(), results.end());
        std::cerr << "experiments: k=" << k << " done\n";
    }
    write_experiments_csv(all_results, out_dir / "experiments.csv");
    write_weights_json(all_results, out_dir / "weights.json");
}

void cmd_report(const fs::path& experiments_dir, const fs::path& correlations_dir,
                const fs::path& out_dir) {
    fs::create_directories(out_dir);
    const auto rows =
        read_csv(require_file(experiments_dir / "experiments.csv", "experiments").string());
    std::ifstream wf(require_file(experiments_dir / "weights.json", "experiments"));
    const auto weights = nlohmann::json::parse(wf);

    std::vector<ExperimentResult> results;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        ExperimentResult r;
        r.measure = rows[i][0];
        r.k = std::stoi(rows[i][1]);
        r.family = rows[i][2];
        r.auc = std::stod(rows[i][3]);
        r.lambda = std::stod(rows[i][4]);
        results.push_back(std::move(r));
    }
    std::size_t wi = 0;
    for (const auto& entry : weights) {
        if (wi >= results.size()) break;
        auto& r = results[wi++];
        for (const auto& [name, coef] : entry.at("weights").items()) {
            r.feature_names.push_back(name);
            r.weights.push_back(coef.get<double>());
        }
    }

    write_auc_summary_csv(results, out_dir / "report_auc_summary.csv");
    write_top_features_csv(results, out_dir / "report_top_features.csv");
    const auto corr = correlations_dir / "correlations_long.csv";
    if (fs::exists(corr))
        fs::copy_file(corr, out_dir / "report_correlations.csv",
                      fs::copy_options::overwrite_existing);
    else
        std::cerr << "warning: " << corr.string()
                  << " not found; run 'correlate' for the correlation table\n";
    std::cerr << "report: written to " << out_dir.string() << "\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Community success analytics pipeline"};
    app.require_subcommand(1);

    std::string config_path;
    std::uint64_t seed = 0;
    int jobs = 1;
    int k_min = 0, k_max = 0, k_step = 0;
    app.add_option("--config", config_path, "key = value config file");
    app.add_option("--seed", seed, "seed override (nonzero)");
    app.add_option("--jobs", jobs, "worker pool size");
    app.add_option("--k-min", k_min, "minimum k (default 10)");
    app.add_option("--k-max", k_max, "maximum k (default 100)");
    app.add_option("--k-step", k_step, "k increment (default 10)");

    auto* synth = app.add_subcommand("synth", "generate a synthetic corpus in dump format");
    std::string synth_out = "synth_out";
    int synth_n = 50;
    std::uint64_t synth_seed = 7;
    synth->add_option("--out-dir", synth_out, "output directory");
    synth->add_option("--communities", synth_n, "number of focal communities");
    synth->add_option("--corpus-seed", synth_seed, "corpus seed");

    auto* ingest = app.add_subcommand("ingest", "parse dumps into a checkpoint");
    std::string posts_path, comments_path, ingest_out = "checkpoint";
    int year = 2014;
    ingest->add_option("--posts", posts_path, "posts NDJSON (plain or .gz)")->required();
    ingest->add_option("--comments", comments_path, "comments NDJSON (plain or .gz)")->required();
    ingest->add_option("--year", year, "creation-year filter (0 disables)");
    ingest->add_option("--out-dir", ingest_out, "checkpoint directory");

    auto* features = app.add_subcommand("features", "extract per-k feature CSVs");
    std::string feat_checkpoint = "checkpoint", feat_out = "features", lexicon_path;
    bool dump_windows = false;
    features->add_option("--checkpoint", feat_checkpoint, "checkpoint directory");
    features->add_option("--out-dir", feat_out, "output directory");
    features->add_option("--lexicon", lexicon_path, "category lexicon file");
    features->add_flag("--dump-windows", dump_windows, "also write early-window JSON");

    auto* labels = app.add_subcommand("labels", "compute success measures and labels");
    std::string labels_checkpoint = "checkpoint", labels_out = "labels";
    labels->add_option("--checkpoint", labels_checkpoint, "checkpoint directory");
    labels->add_option("--out-dir", labels_out, "output directory");

    auto* correlate = app.add_subcommand("correlate", "success-measure rank correlations");
    std::string corr_labels = "labels", corr_out = "correlations";
    correlate->add_option("--labels-dir", corr_labels, "labels directory");
    correlate->add_option("--out-dir", corr_out, "output directory");

    auto* experiments = app.add_subcommand("experiments", "train and evaluate per-tuple models");
    std::string exp_features = "features", exp_labels = "labels", exp_out = "experiments";
    experiments->add_option("--features-dir", exp_features, "features directory");
    experiments->add_option("--labels-dir", exp_labels, "labels directory");
    experiments->add_option("--out-dir", exp_out, "output directory");

    auto* report = app.add_subcommand("report", "emit summary tables");
    std::string rep_experiments = "experiments", rep_correlations = "correlations",
                rep_out = "report";
    report->add_option("--experiments-dir", rep_experiments, "experiments directory");
    report->add_option("--correlations-dir", rep_correlations, "correlations directory");
    report->add_option("--out-dir", rep_out, "output directory");

    CLI11_PARSE(app, argc, argv);

    try {
        PipelineConfig cfg = config_path.empty() ? PipelineConfig{} : load_config_file(config_path);
        if (seed != 0) cfg.seed = seed;
        if (k_min > 0) cfg.k_min = k_min;
        if (k_max > 0) cfg.k_max = k_max;
        if (k_step > 0) cfg.k_step = k_step;

        if (synth->parsed())
            cmd_synth(synth_out, synth_n, synth_seed, jobs);
        else if (ingest->parsed())
            cmd_ingest(posts_path, comments_path, year, ingest_out);
        else if (features->parsed())
            cmd_features(feat_checkpoint, feat_out, lexicon_path, dump_windows, cfg, jobs);
        else if (labels->parsed())
            cmd_labels(labels_checkpoint, labels_out, cfg, jobs);
        else if (correlate->parsed())
            cmd_correlate(corr_labels, corr_out, cfg);
        else if (experiments->parsed())
            cmd_experiments(exp_features, exp_labels, exp_out, cfg, jobs);
        else if (report->parsed())
            cmd_report(rep_experiments, rep_correlations, rep_out);
    } catch (const ConfigError& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return 2;
    } catch (const DataError& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return 3;
    } catch (const DegenerateError& e) {
        std::cerr << "degenerate statistics: " << e.what() << "\n";
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
