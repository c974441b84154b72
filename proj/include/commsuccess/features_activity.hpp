#pragma once

#include <algorithm>
#include <vector>

#include "commsuccess/descriptive.hpp"
#include "commsuccess/event.hpp"
#include "commsuccess/feature_vector.hpp"
#include "commsuccess/gini.hpp"
#include "commsuccess/window_view.hpp"

namespace commsuccess {

namespace detail {

// Consecutive time gaps in days for events of one kind, time order.
inline std::vector<double> gaps_in_days(const WindowView& view, const std::vector<std::size_t>& idx) {
    std::vector<double> gaps;
    if (idx.size() < 2) return gaps;
    gaps.reserve(idx.size() - 1);
    for (std::size_t i = 1; i < idx.size(); ++i) {
        const auto dt = view.window.events[idx[i]].created_at - view.window.events[idx[i - 1]].created_at;
        gaps.push_back(static_cast<double>(dt) / static_cast<double>(kSecondsPerDay));
    }
    return gaps;
}

}  // namespace detail

// Volume and speed of early activity.
inline void volume_speed_features(const WindowView& view, FeatureVector& out) {
    const EarlyWindow& w = view.window;
    const auto family = FeatureFamily::VolumeSpeed;

    std::size_t n_posters = 0, n_commenters = 0;
    for (std::size_t i = 0; i < w.members.size(); ++i) {
        if (view.posts_per_member[i] > 0) ++n_posters;
        if (view.comments_per_member[i] > 0) ++n_commenters;
    }
    out.add(family, "n_posters", static_cast<double>(n_posters));
    out.add(family, "n_commenters", static_cast<double>(n_commenters));
    out.add(family, "creation_date",
            static_cast<double>(w.created_at) / static_cast<double>(kSecondsPerDay));
    out.add(family, "n_posts", static_cast<double>(view.post_indices.size()));

    if (view.post_indices.empty()) {
        out.add(family, "median_replies_per_post", 0.0, /*flag=*/true);
    } else {
        std::vector<double> replies;
        replies.reserve(view.post_indices.size());
        for (std::size_t i : view.post_indices)
            replies.push_back(static_cast<double>(view.direct_replies[i]));
        out.add(family, "median_replies_per_post", median_of(replies));
    }

    out.add(family, "median_posts_per_user", median_of(view.posts_per_member));
    out.add(family, "median_comments_per_user", median_of(view.comments_per_member));
    out.add(family, "days_to_k", w.days_to_k);

    // Fewer than 2 events of a kind: fall back to the whole-window span.
    const auto post_gaps = detail::gaps_in_days(view, view.post_indices);
    out.add(family, "mean_gap_posts_days", post_gaps.empty() ? w.days_to_k : mean(post_gaps));
    const auto comment_gaps = detail::gaps_in_days(view, view.comment_indices);
    out.add(family, "mean_gap_comments_days", comment_gaps.empty() ? w.days_to_k : mean(comment_gaps));
}

// Gini coefficients of activity per member and of inter-event gaps.
inline void distribution_features(const WindowView& view, FeatureVector& out) {
    const auto family = FeatureFamily::Distribution;

    bool flag = false;
    double g = gini(view.posts_per_member, &flag);
    out.add(family, "gini_posts_per_user", g, flag);
    g = gini(view.comments_per_member, &flag);
    out.add(family, "gini_comments_per_user", g, flag);

    const auto post_gaps = detail::gaps_in_days(view, view.post_indices);
    if (post_gaps.empty()) {
        out.add(family, "gini_post_gaps", 0.0, /*flag=*/true);
    } else {
        g = gini(post_gaps, &flag);
        out.add(family, "gini_post_gaps", g, flag);
    }
    const auto comment_gaps = detail::gaps_in_days(view, view.comment_indices);
    if (comment_gaps.empty()) {
        out.add(family, "gini_comment_gaps", 0.0, /*flag=*/true);
    } else {
        g = gini(comment_gaps, &flag);
        out.add(family, "gini_comment_gaps", g, flag);
    }
}

}  // namespace commsuccess
