#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include "commsuccess/descriptive.hpp"
#include "commsuccess/errors.hpp"
#include "commsuccess/feature_vector.hpp"
#include "commsuccess/features_graph.hpp"
#include "commsuccess/gini.hpp"
#include "commsuccess/ingest.hpp"
#include "commsuccess/window_view.hpp"

namespace commsuccess {

// parent community -> early members active there in the 30 days before the
// focal community's creation. The focal community itself is excluded.
using ParentMap = std::map<std::string, std::set<std::string>>;

inline ParentMap find_parents(const EarlyWindow& w, const UserHistoryIndex& history) {
    ParentMap parents;
    const std::int64_t t1 = w.created_at - 30 * kSecondsPerDay;
    for (const auto& member : w.members) {
        for (const auto& rec : history.query(member, t1, w.created_at)) {
            if (rec.community == w.community) continue;
            parents[rec.community].insert(member);
        }
    }
    return parents;
}

// Nodes are parents; edge iff two parents share at least two early members.
struct GenealogyGraph {
    std::vector<std::string> parents;                 // sorted, stable node order
    std::vector<std::set<std::string>> shared_members;  // aligned with parents
    ReplyGraph graph;
};

inline GenealogyGraph build_genealogy(const ParentMap& parent_map) {
    GenealogyGraph g;
    for (const auto& [parent, members] : parent_map) {
        g.parents.push_back(parent);
        g.shared_members.push_back(members);
    }
    g.graph.n = g.parents.size();
    g.graph.adjacency.resize(g.graph.n);
    for (std::size_t i = 0; i < g.parents.size(); ++i) {
        for (std::size_t j = i + 1; j < g.parents.size(); ++j) {
            std::size_t shared = 0;
            for (const auto& m : g.shared_members[i]) shared += g.shared_members[j].count(m);
            if (shared >= 2) g.graph.add_edge(i, j);
        }
    }
    return g;
}

// H(P, Q-hat) in nats: P empirical over p_tokens, Q-hat add-one-smoothed over
// the union vocabulary. Smoothing keeps the result finite even when P puts
// mass on tokens absent from q_tokens.
inline double cross_entropy(const std::vector<std::string>& p_tokens,
                            const std::vector<std::string>& q_tokens) {
    if (p_tokens.empty()) throw ConfigError("cross_entropy: empty p_tokens");
    std::unordered_map<std::string, double> p_counts, q_counts;
    for (const auto& t : p_tokens) p_counts[t] += 1.0;
    for (const auto& t : q_tokens) q_counts[t] += 1.0;
    std::set<std::string> vocab;
    for (const auto& [t, _] : p_counts) vocab.insert(t);
    for (const auto& [t, _] : q_counts) vocab.insert(t);

    const double p_total = static_cast<double>(p_tokens.size());
    const double q_denom = static_cast<double>(q_tokens.size()) + static_cast<double>(vocab.size());
    double h = 0;
    for (const auto& [token, c] : p_counts) {
        const double p = c / p_total;
        auto it = q_counts.find(token);
        const double q = ((it != q_counts.end() ? it->second : 0.0) + 1.0) / q_denom;
        h -= p * std::log(q);
    }
    return h;
}

// Genealogy structure, parent size statistics (natural log of size + 1), and
// language distances. parent_sizes and parent_tokens are keyed like the
// genealogy node order.
inline void parent_features(const GenealogyGraph& g, const std::vector<std::string>& focal_tokens,
                            const std::vector<std::vector<std::string>>& parent_tokens,
                            const std::vector<double>& parent_sizes, FeatureVector& out) {
    const auto family = FeatureFamily::Parents;
    const std::size_t n = g.parents.size();
    if (parent_tokens.size() != n || parent_sizes.size() != n)
        throw ConfigError("parent_features: misaligned parent inputs");

    out.add(family, "has_parents", n > 0 ? 1.0 : 0.0);
    out.add(family, "n_parents", static_cast<double>(n), n == 0);
    if (n == 0) {
        for (const char* name :
             {"genealogy_density", "genealogy_transitivity", "max_log_parent_size",
              "min_log_parent_size", "std_log_parent_size", "gini_parent_member_counts",
              "median_lang_distance", "max_lang_distance"})
            out.add(family, name, 0.0, /*flag=*/true);
        return;
    }

    if (n < 2) {
        out.add(family, "genealogy_density", 0.0, /*flag=*/true);
    } else {
        const double nn = static_cast<double>(n);
        out.add(family, "genealogy_density",
                2.0 * static_cast<double>(g.graph.edge_count()) / (nn * (nn - 1.0)));
    }
    bool flag = false;
    const double trans = transitivity(g.graph, &flag);
    out.add(family, "genealogy_transitivity", trans, flag);

    std::vector<double> log_sizes;
    log_sizes.reserve(n);
    for (double s : parent_sizes) {
        if (s < 1.0) throw ConfigError("parent_features: parent size must be >= 1");
        log_sizes.push_back(std::log(s + 1.0));
    }
    out.add(family, "max_log_parent_size", *std::max_element(log_sizes.begin(), log_sizes.end()));
    out.add(family, "min_log_parent_size", *std::min_element(log_sizes.begin(), log_sizes.end()));
    out.add(family, "std_log_parent_size", population_std(log_sizes));

    std::vector<double> member_counts;
    member_counts.reserve(n);
    for (const auto& members : g.shared_members)
        member_counts.push_back(static_cast<double>(members.size()));
    const double gini_counts = gini(member_counts, &flag);
    out.add(family, "gini_parent_member_counts", gini_counts, flag);

    if (focal_tokens.empty()) {
        out.add(family, "median_lang_distance", 0.0, /*flag=*/true);
        out.add(family, "max_lang_distance", 0.0, /*flag=*/true);
    } else {
        std::vector<double> distances;
        distances.reserve(n);
        for (const auto& q : parent_tokens) distances.push_back(cross_entropy(focal_tokens, q));
        out.add(family, "median_lang_distance", median_of(distances));
        out.add(family, "max_lang_distance", *std::max_element(distances.begin(), distances.end()));
    }
}

}  // namespace commsuccess
