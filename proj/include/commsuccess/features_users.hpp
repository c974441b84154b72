#pragma once

#include <string>
#include <unordered_map>
#include <vector>

#include "commsuccess/descriptive.hpp"
#include "commsuccess/feature_vector.hpp"
#include "commsuccess/ingest.hpp"
#include "commsuccess/window_view.hpp"

namespace commsuccess {

namespace detail {

// Median/std aggregate over members who have the quantity; none -> 0 + flag.
inline void add_median_std(FeatureVector& out, const std::string& stem,
                           const std::vector<double>& values) {
    const auto family = FeatureFamily::UserComposition;
    if (values.empty()) {
        out.add(family, "median_" + stem, 0.0, /*flag=*/true);
        out.add(family, "std_" + stem, 0.0, /*flag=*/true);
    } else {
        out.add(family, "median_" + stem, median_of(values));
        out.add(family, "std_" + stem, population_std(values));
    }
}

}  // namespace detail

// Features of the members' activity prior to joining. The prior-activity
// window is member-relative (30 days before that member's first event in the
// community) and excludes the focal community's own events. days_on_site is
// exempt from the 30-day window.
inline void user_composition_features(const WindowView& view, const UserHistoryIndex& history,
                                      FeatureVector& out) {
    const EarlyWindow& w = view.window;
    const auto family = FeatureFamily::UserComposition;

    // join time = member's first event in the window
    std::unordered_map<std::string, std::int64_t> join_time;
    for (const auto& e : w.events)
        if (!e.author_is_sentinel()) join_time.try_emplace(e.author, e.created_at);

    std::vector<double> post_scores, comment_scores, activity_counts, days_on_site;
    std::size_t new_users = 0;
    for (const auto& member : w.members) {
        const std::int64_t join = join_time.at(member);
        const auto prior = history.query(member, join - 30 * kSecondsPerDay, join);
        std::size_t count = 0;
        std::vector<double> member_post_scores, member_comment_scores;
        for (const auto& rec : prior) {
            if (rec.community == w.community) continue;
            ++count;
            if (rec.kind == EventKind::Post)
                member_post_scores.push_back(static_cast<double>(rec.score));
            else
                member_comment_scores.push_back(static_cast<double>(rec.score));
        }
        if (count == 0) ++new_users;
        activity_counts.push_back(static_cast<double>(count));
        post_scores.insert(post_scores.end(), member_post_scores.begin(), member_post_scores.end());
        comment_scores.insert(comment_scores.end(), member_comment_scores.begin(),
                              member_comment_scores.end());
        const auto first = history.first_seen(member).value_or(join);
        days_on_site.push_back(static_cast<double>(join - first) /
                               static_cast<double>(kSecondsPerDay));
    }

    detail::add_median_std(out, "prior_post_score", post_scores);
    detail::add_median_std(out, "prior_comment_score", comment_scores);
    detail::add_median_std(out, "prior_activity_count", activity_counts);
    out.add(family, "median_days_on_site", median_of(days_on_site));
    out.add(family, "fraction_new_users",
            static_cast<double>(new_users) / static_cast<double>(w.members.size()));
}

}  // namespace commsuccess
