#pragma once

#include <ctime>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "commsuccess/config.hpp"
#include "commsuccess/csv.hpp"
#include "commsuccess/errors.hpp"
#include "commsuccess/feature_vector.hpp"
#include "commsuccess/features_activity.hpp"
#include "commsuccess/features_graph.hpp"
#include "commsuccess/features_parents.hpp"
#include "commsuccess/features_text.hpp"
#include "commsuccess/features_users.hpp"
#include "commsuccess/ingest.hpp"
#include "commsuccess/model.hpp"
#include "commsuccess/ndjson.hpp"
#include "commsuccess/parallel.hpp"
#include "commsuccess/stats.hpp"
#include "commsuccess/success.hpp"

namespace commsuccess {

// ---------------------------------------------------------------------------
// Corpus: all timelines plus the shared read-only user history.
// ---------------------------------------------------------------------------

struct Corpus {
    std::map<std::string, CommunityTimeline> timelines;
    UserHistoryIndex history;
    std::size_t duplicates = 0;
    std::size_t skipped_lines = 0;
};

inline Corpus build_corpus(std::vector<Event> events) {
    Corpus corpus;
    corpus.timelines = build_timelines(std::move(events), &corpus.duplicates);
    for (const auto& [_, tl] : corpus.timelines)
        for (const auto& e : tl.events) corpus.history.add(e);
    corpus.history.finalize();
    return corpus;
}

inline int utc_year(std::int64_t timestamp) {
    const auto t = static_cast<std::time_t>(timestamp);
    std::tm tm{};
    gmtime_r(&t, &tm);
    return tm.tm_year + 1900;
}

// Communities whose first event falls in `year` (0 = no filter), sorted ids.
inline std::vector<std::string> focal_communities(const Corpus& corpus, int year) {
    std::vector<std::string> out;
    for (const auto& [id, tl] : corpus.timelines)
        if (year == 0 || utc_year(tl.created_at) == year) out.push_back(id);
    return out;
}

// Qualifying communities at k, in sorted community-id order.
inline std::vector<std::pair<std::string, EarlyWindow>> qualifying_windows(
    const Corpus& corpus, const std::vector<std::string>& focal, int k,
    double qualification_days = kQualificationDays) {
    std::vector<std::pair<std::string, EarlyWindow>> out;
    for (const auto& id : focal) {
        const auto& tl = corpus.timelines.at(id);
        if (auto w = extract_early_window(tl, k, qualification_days)) out.emplace_back(id, std::move(*w));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Feature extraction for one window, all six families.
// ---------------------------------------------------------------------------

inline std::vector<std::string> window_tokens(const EarlyWindow& w) {
    std::vector<std::string> tokens;
    for (const auto& e : w.events) {
        for (auto& t : tokenize(e.title)) tokens.push_back(std::move(t));
        for (auto& t : tokenize(e.body)) tokens.push_back(std::move(t));
    }
    return tokens;
}

// Distinct non-sentinel authors and pooled tokens of a community's events in
// [t1, t2): the parent-size and parent-text inputs.
inline std::pair<double, std::vector<std::string>> community_span_profile(
    const CommunityTimeline& tl, std::int64_t t1, std::int64_t t2) {
    std::set<std::string> authors;
    std::vector<std::string> tokens;
    for (const auto& e : tl.events) {
        if (e.created_at < t1 || e.created_at >= t2) continue;
        if (!e.author_is_sentinel()) authors.insert(e.author);
        for (auto& t : tokenize(e.title)) tokens.push_back(std::move(t));
        for (auto& t : tokenize(e.body)) tokens.push_back(std::move(t));
    }
    return {static_cast<double>(authors.size()), std::move(tokens)};
}

inline FeatureVector extract_features(const Corpus& corpus, const EarlyWindow& w,
                                      const CategoryLexicon& lexicon) {
    FeatureVector fv;
    fv.community = w.community;
    fv.k = w.k;

    const WindowView view(w);
    volume_speed_features(view, fv);
    distribution_features(view, fv);
    user_composition_features(view, corpus.history, fv);
    linguistic_features(view, lexicon, fv);
    const auto graph = build_reply_graph(view);
    graph_features(graph, view, fv);

    const auto parent_map = find_parents(w, corpus.history);
    const auto genealogy = build_genealogy(parent_map);
    std::vector<double> parent_sizes;
    std::vector<std::vector<std::string>> parent_tokens;
    const std::int64_t t1 = w.created_at - 30 * kSecondsPerDay;
    for (const auto& parent : genealogy.parents) {
        auto [size, tokens] = community_span_profile(corpus.timelines.at(parent), t1, w.created_at);
        parent_sizes.push_back(std::max(size, 1.0));
        parent_tokens.push_back(std::move(tokens));
    }
    parent_features(genealogy, window_tokens(w), parent_tokens, parent_sizes, fv);
    return fv;
}

// ---------------------------------------------------------------------------
// Per-k tables.
// ---------------------------------------------------------------------------

struct FeatureTable {
    int k = 0;
    std::vector<std::string> communities;
    std::vector<std::string> names;
    std::vector<FeatureFamily> families;
    Matrix values;                           // rows aligned with communities
    std::vector<std::vector<bool>> flagged;  // same shape
};

inline FeatureTable build_feature_table(const Corpus& corpus,
                                        const std::vector<std::string>& focal, int k,
                                        const CategoryLexicon& lexicon, int jobs = 1,
                                        double qualification_days = kQualificationDays) {
    const auto windows = qualifying_windows(corpus, focal, k, qualification_days);
    FeatureTable table;
    table.k = k;
    std::vector<FeatureVector> vectors(windows.size());
    parallel_for(windows.size(), jobs, [&](std::size_t i) {
        vectors[i] = extract_features(corpus, windows[i].second, lexicon);
    });
    for (std::size_t i = 0; i < windows.size(); ++i) {
        const auto& fv = vectors[i];
        if (i == 0) {
            table.names = fv.names;
            table.families = fv.families;
        } else if (fv.names != table.names) {
            throw DataError("feature name set differs across communities at k=" + std::to_string(k));
        }
        table.communities.push_back(windows[i].first);
        table.values.push_back(fv.values);
        std::vector<bool> flags(fv.names.size(), false);
        for (std::size_t j = 0; j < fv.names.size(); ++j)
            flags[j] = fv.flagged.count(fv.names[j]) > 0;
        table.flagged.push_back(std::move(flags));
    }
    return table;
}

struct SuccessTable {
    int k = 0;
    std::vector<std::string> communities;
    std::vector<SuccessMeasures> measures;
    LabelSet labels;
};

inline SuccessTable build_success_table(const Corpus& corpus,
                                        const std::vector<std::string>& focal, int k, int jobs = 1,
                                        double qualification_days = kQualificationDays) {
    const auto windows = qualifying_windows(corpus, focal, k, qualification_days);
    SuccessTable table;
    table.k = k;
    table.measures.resize(windows.size());
    parallel_for(windows.size(), jobs, [&](std::size_t i) {
        const auto& [id, w] = windows[i];
        const auto monthly = monthly_partition(corpus.timelines.at(id), w.t_k, kSurvivalMonths);
        table.measures[i] = compute_success(monthly);
    });
    for (const auto& [id, _] : windows) table.communities.push_back(id);
    table.labels = binarize(table.communities, table.measures, k);
    return table;
}

// ---------------------------------------------------------------------------
// Experiment sweep.
// ---------------------------------------------------------------------------

inline const std::vector<std::string>& model_families() {
    static const std::vector<std::string> families = {
        "volume_speed", "distribution", "user_composition", "linguistic", "social", "parents", "all"};
    return families;
}

inline FeatureTable restrict_family(const FeatureTable& table, const std::string& family) {
    if (family == "all") return table;
    const auto target = family_from_name(family);
    FeatureTable out;
    out.k = table.k;
    out.communities = table.communities;
    std::vector<std::size_t> cols;
    for (std::size_t j = 0; j < table.names.size(); ++j)
        if (table.families[j] == target) {
            cols.push_back(j);
            out.names.push_back(table.names[j]);
            out.families.push_back(table.families[j]);
        }
    for (std::size_t i = 0; i < table.values.size(); ++i) {
        std::vector<double> row;
        std::vector<bool> flags;
        for (auto j : cols) {
            row.push_back(table.values[i][j]);
            flags.push_back(table.flagged[i][j]);
        }
        out.values.push_back(std::move(row));
        out.flagged.push_back(std::move(flags));
    }
    return out;
}

// All (measure, family) experiments for one k. Tuples run in parallel;
// results merge in a fixed order regardless of completion order.
inline std::vector<ExperimentResult> run_experiments_for_k(const FeatureTable& features,
                                                           const SuccessTable& success,
                                                           const PipelineConfig& config,
                                                           int jobs = 1) {
    if (features.communities != success.communities)
        throw DataError("features and labels disagree on the community set at k=" +
                        std::to_string(features.k));
    ExperimentConfig ec;
    ec.split_fraction = config.split_fraction;
    ec.lambda_grid = config.lambda_grid;
    ec.folds = config.folds;

    std::vector<std::pair<std::string, std::string>> tuples;
    for (const auto& measure : success_measure_names())
        for (const auto& family : model_families()) tuples.emplace_back(measure, family);

    std::vector<ExperimentResult> results(tuples.size());
    parallel_for(tuples.size(), jobs, [&](std::size_t i) {
        const auto& [measure, family] = tuples[i];
        const auto sub = restrict_family(features, family);
        results[i] = run_experiment(sub.values, sub.flagged, success.labels.labels.at(measure),
                                    sub.names, measure, features.k, family, ec, config.seed);
    });
    return results;
}

// ---------------------------------------------------------------------------
// Table writers. All output is deterministic byte-for-byte for a fixed
// (input, config, seed).
// ---------------------------------------------------------------------------

inline std::ofstream open_output(const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write: " + path.string());
    return out;
}

inline void write_feature_csv(const FeatureTable& table, const std::filesystem::path& path) {
    auto out = open_output(path);
    CsvWriter csv(out);
    std::vector<std::string> header = {"community_id"};
    header.insert(header.end(), table.names.begin(), table.names.end());
    csv.row(header);
    for (std::size_t i = 0; i < table.communities.size(); ++i) {
        std::vector<std::string> row = {table.communities[i]};
        for (double v : table.values[i]) row.push_back(format_double(v));
        csv.row(row);
    }
}

inline void write_feature_flags_csv(const FeatureTable& table, const std::filesystem::path& path) {
    auto out = open_output(path);
    CsvWriter csv(out);
    csv.row({"community_id", "feature"});
    for (std::size_t i = 0; i < table.communities.size(); ++i)
        for (std::size_t j = 0; j < table.names.size(); ++j)
            if (table.flagged[i][j]) csv.row({table.communities[i], table.names[j]});
}

inline void write_feature_manifest(const FeatureTable& table, const std::filesystem::path& path) {
    nlohmann::json manifest;
    manifest["version"] = 1;
    nlohmann::json features = nlohmann::json::array();
    for (std::size_t j = 0; j < table.names.size(); ++j)
        features.push_back({{"name", table.names[j]}, {"family", family_name(table.families[j])}});
    manifest["features"] = std::move(features);
    manifest["reserved"] = reserved_feature_names();
    auto out = open_output(path);
    out << manifest.dump(2) << '\n';
}

inline void write_labels_csv(const SuccessTable& table, const std::filesystem::path& path) {
    auto out = open_output(path);
    CsvWriter csv(out);
    std::vector<std::string> header = {"community_id"};
    for (const auto& m : success_measure_names()) header.push_back(m);
    for (const auto& m : success_measure_names()) header.push_back("label_" + m);
    csv.row(header);
    for (std::size_t i = 0; i < table.communities.size(); ++i) {
        std::vector<std::string> row = {table.communities[i]};
        for (const auto& m : success_measure_names())
            row.push_back(format_double(measure_value(table.measures[i], m)));
        for (const auto& m : success_measure_names())
            row.push_back(std::to_string(table.labels.labels.at(m)[i]));
        csv.row(row);
    }
}

inline void write_thresholds_json(const SuccessTable& table, const std::filesystem::path& path) {
    nlohmann::json obj;
    obj["k"] = table.k;
    for (const auto& [measure, threshold] : table.labels.thresholds)
        obj["medians"][measure] = threshold;
    obj["imbalance_warnings"] = table.labels.imbalance_warnings;
    auto out = open_output(path);
    out << obj.dump(2) << '\n';
}

inline void write_correlation_long_csv(const std::vector<CorrelationMatrix>& matrices,
                                       const std::filesystem::path& path) {
    auto out = open_output(path);
    CsvWriter csv(out);
    csv.row({"k", "measure_a", "measure_b", "method", "coefficient"});
    for (const auto& m : matrices) {
        for (std::size_t i = 0; i < m.names.size(); ++i)
            for (std::size_t j = i + 1; j < m.names.size(); ++j)
                csv.row({std::to_string(m.k), m.names[i], m.names[j], method_name(m.method),
                         m.entries[i][j] ? format_double(*m.entries[i][j]) : "degenerate"});
    }
}

inline void write_correlation_matrix_csv(const CorrelationMatrix& m,
                                         const std::filesystem::path& path) {
    auto out = open_output(path);
    CsvWriter csv(out);
    std::vector<std::string> header = {"measure"};
    header.insert(header.end(), m.names.begin(), m.names.end());
    csv.row(header);
    for (std::size_t i = 0; i < m.names.size(); ++i) {
        std::vector<std::string> row = {m.names[i]};
        for (std::size_t j = 0; j < m.names.size(); ++j)
            row.push_back(m.entries[i][j] ? format_double(*m.entries[i][j]) : "degenerate");
        csv.row(row);
    }
}

inline void write_experiments_csv(const std::vector<ExperimentResult>& results,
                                  const std::filesystem::path& path) {
    auto out = open_output(path);
    CsvWriter csv(out);
    csv.row({"measure", "k", "family", "auc", "lambda", "seed", "train_size", "test_size",
             "cv_folds"});
    for (const auto& r : results)
        csv.row({r.measure, std::to_string(r.k), r.family, format_double(r.auc),
                 format_double(r.lambda), std::to_string(r.seed), std::to_string(r.train_size),
                 std::to_string(r.test_size), std::to_string(r.cv_folds_used)});
}

inline void write_weights_json(const std::vector<ExperimentResult>& results,
                               const std::filesystem::path& path) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& r : results) {
        nlohmann::json obj;
        obj["measure"] = r.measure;
        obj["k"] = r.k;
        obj["family"] = r.family;
        obj["lambda"] = r.lambda;
        obj["bias"] = r.bias;
        nlohmann::json weights;
        for (std::size_t j = 0; j < r.feature_names.size(); ++j)
            weights[r.feature_names[j]] = r.weights[j];
        obj["weights"] = std::move(weights);
        arr.push_back(std::move(obj));
    }
    auto out = open_output(path);
    out << arr.dump(2) << '\n';
}

// ---------------------------------------------------------------------------
// Report: AUC summary (median + std over k), correlation long table, top-10
// MRR features per measure with mean coefficients.
// ---------------------------------------------------------------------------

inline void write_auc_summary_csv(const std::vector<ExperimentResult>& results,
                                  const std::filesystem::path& path) {
    auto out = open_output(path);
    CsvWriter csv(out);
    csv.row({"measure", "family", "n_k", "median_auc", "std_auc"});
    for (const auto& measure : success_measure_names()) {
        for (const auto& family : model_families()) {
            std::vector<double> aucs;
            for (const auto& r : results)
                if (r.measure == measure && r.family == family) aucs.push_back(r.auc);
            if (aucs.empty()) continue;
            csv.row({measure, family, std::to_string(aucs.size()), format_double(median_of(aucs)),
                     format_double(population_std(aucs))});
        }
    }
}

inline void write_top_features_csv(const std::vector<ExperimentResult>& results,
                                   const std::filesystem::path& path, std::size_t top_n = 10) {
    auto out = open_output(path);
    CsvWriter csv(out);
    csv.row({"measure", "rank", "feature", "mrr", "mean_coefficient"});
    for (const auto& measure : success_measure_names()) {
        std::vector<std::map<std::string, double>> per_k;
        for (const auto& r : results) {
            if (r.measure != measure || r.family != "all") continue;
            std::map<std::string, double> coefs;
            for (std::size_t j = 0; j < r.feature_names.size(); ++j)
                coefs[r.feature_names[j]] = r.weights[j];
            per_k.push_back(std::move(coefs));
        }
        if (per_k.empty()) continue;
        const auto ranked = mrr_ranking(per_k);
        for (std::size_t i = 0; i < std::min(top_n, ranked.size()); ++i)
            csv.row({measure, std::to_string(i + 1), ranked[i].name, format_double(ranked[i].mrr),
                     format_double(ranked[i].mean_coefficient)});
    }
}

}  // namespace commsuccess
