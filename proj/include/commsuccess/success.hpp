#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "commsuccess/errors.hpp"
#include "commsuccess/ingest.hpp"

namespace commsuccess {

inline constexpr int kGrowthMonths = 12;
inline constexpr int kRetentionMonths = 13;  // month 13 feeds the i=12 term
inline constexpr int kSurvivalMonths = 24;

struct SuccessMeasures {
    double growth_commenters = 0;
    double growth_posters = 0;
    double retention = 0;
    double survival = 0;
    double avg_posts = 0;
    double avg_comments = 0;
    bool survival_degenerate = false;  // zero activity over the 24-month horizon
};

inline const std::vector<std::string>& success_measure_names() {
    static const std::vector<std::string> names = {"growth_commenters", "growth_posters",
                                                   "retention",         "survival",
                                                   "avg_posts",         "avg_comments"};
    return names;
}

inline double measure_value(const SuccessMeasures& m, const std::string& name) {
    if (name == "growth_commenters") return m.growth_commenters;
    if (name == "growth_posters") return m.growth_posters;
    if (name == "retention") return m.retention;
    if (name == "survival") return m.survival;
    if (name == "avg_posts") return m.avg_posts;
    if (name == "avg_comments") return m.avg_comments;
    throw ConfigError("unknown success measure: " + name);
}

enum class GrowthKind { Commenters, Posters };

// |union of monthly commenter (or poster) sets| over months 1..12.
inline std::int64_t growth(std::span<const MonthlyActivity> monthly, GrowthKind which) {
    if (monthly.size() < kGrowthMonths) throw ConfigError("growth: 12 months required");
    std::set<std::string> all;
    for (int i = 0; i < kGrowthMonths; ++i) {
        const auto& users = which == GrowthKind::Commenters ? monthly[i].commenters : monthly[i].posters;
        all.insert(users.begin(), users.end());
    }
    return static_cast<std::int64_t>(all.size());
}

// Mean over months 1..12 of |U_i ∩ U_{i+1}| / |U_i|; empty months contribute 0.
inline double retention(std::span<const MonthlyActivity> monthly) {
    if (monthly.size() < kRetentionMonths) throw ConfigError("retention: 13 months required");
    double sum = 0;
    for (int i = 0; i < kGrowthMonths; ++i) {
        const auto& cur = monthly[i].active_users;
        if (cur.empty()) continue;
        const auto& next = monthly[i + 1].active_users;
        std::size_t returning = 0;
        for (const auto& u : cur) returning += next.count(u);
        sum += static_cast<double>(returning) / static_cast<double>(cur.size());
    }
    return sum / kGrowthMonths;
}

// Fraction of 24-month activity that falls in months 22..24. Zero total
// activity is degenerate: value 0 with the flag set.
inline double survival(std::span<const MonthlyActivity> monthly, bool* degenerate = nullptr) {
    if (monthly.size() < kSurvivalMonths) throw ConfigError("survival: 24 months required");
    std::int64_t total = 0, tail = 0;
    for (int i = 0; i < kSurvivalMonths; ++i) {
        const std::int64_t n = monthly[i].posts_count + monthly[i].comments_count;
        total += n;
        if (i >= 21) tail += n;
    }
    if (degenerate) *degenerate = (total == 0);
    if (total == 0) return 0.0;
    return static_cast<double>(tail) / static_cast<double>(total);
}

enum class ActivityKind { Posts, Comments };

inline double activity_average(std::span<const MonthlyActivity> monthly, ActivityKind which) {
    if (monthly.size() < kGrowthMonths) throw ConfigError("activity_average: 12 months required");
    std::int64_t total = 0;
    for (int i = 0; i < kGrowthMonths; ++i)
        total += which == ActivityKind::Posts ? monthly[i].posts_count : monthly[i].comments_count;
    return static_cast<double>(total) / kGrowthMonths;
}

// All six measures from one >= 24-month partition.
inline SuccessMeasures compute_success(std::span<const MonthlyActivity> monthly) {
    SuccessMeasures m;
    m.growth_commenters = static_cast<double>(growth(monthly, GrowthKind::Commenters));
    m.growth_posters = static_cast<double>(growth(monthly, GrowthKind::Posters));
    m.retention = retention(monthly);
    m.survival = survival(monthly, &m.survival_degenerate);
    m.avg_posts = activity_average(monthly, ActivityKind::Posts);
    m.avg_comments = activity_average(monthly, ActivityKind::Comments);
    return m;
}

// ---------------------------------------------------------------------------
// Median binarization.
// ---------------------------------------------------------------------------

struct LabelSet {
    int k = 0;
    std::vector<std::string> communities;
    // per measure: threshold and aligned 0/1 labels
    std::map<std::string, double> thresholds;
    std::map<std::string, std::vector<int>> labels;
    std::vector<std::string> imbalance_warnings;
};

inline double sample_median(std::vector<double> values) {
    if (values.empty()) throw ConfigError("median of empty sample");
    std::sort(values.begin(), values.end());
    const std::size_t n = values.size();
    if (n % 2 == 1) return values[n / 2];
    return 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

// Label 1 iff the value strictly exceeds the per-measure median.
inline LabelSet binarize(const std::vector<std::string>& communities,
                         const std::vector<SuccessMeasures>& measures, int k) {
    if (communities.size() != measures.size()) throw ConfigError("binarize: misaligned inputs");
    if (communities.size() < 2) throw ConfigError("binarize: need >= 2 communities");
    LabelSet out;
    out.k = k;
    out.communities = communities;
    for (const auto& name : success_measure_names()) {
        std::vector<double> values;
        values.reserve(measures.size());
        for (const auto& m : measures) values.push_back(measure_value(m, name));
        const double median = sample_median(values);
        out.thresholds[name] = median;
        auto& labels = out.labels[name];
        labels.reserve(values.size());
        std::size_t positives = 0;
        for (double v : values) {
            const int label = v > median ? 1 : 0;
            positives += static_cast<std::size_t>(label);
            labels.push_back(label);
        }
        if (positives == 0 || positives == values.size())
            out.imbalance_warnings.push_back(name + ": single-class labels at k=" + std::to_string(k));
    }
    return out;
}

}  // namespace commsuccess
