#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "commsuccess/event.hpp"
#include "commsuccess/ingest.hpp"

namespace commsuccess {

// Derived lookups over one early window, shared by the feature extractors:
// member indices, event-id resolution, direct-reply counts, per-member
// activity counts.
struct WindowView {
    const EarlyWindow& window;
    std::unordered_map<std::string, std::size_t> member_index;   // author -> member slot
    std::unordered_map<std::string, std::size_t> event_by_id;    // stripped id -> event index
    std::vector<std::size_t> post_indices;
    std::vector<std::size_t> comment_indices;
    std::vector<std::int64_t> direct_replies;                    // per event, within-window
    std::vector<double> posts_per_member;                        // length k, zeros included
    std::vector<double> comments_per_member;
    std::size_t dangling_parents = 0;

    explicit WindowView(const EarlyWindow& w) : window(w) {
        for (std::size_t i = 0; i < w.members.size(); ++i) member_index.emplace(w.members[i], i);
        posts_per_member.assign(w.members.size(), 0.0);
        comments_per_member.assign(w.members.size(), 0.0);
        direct_replies.assign(w.events.size(), 0);
        for (std::size_t i = 0; i < w.events.size(); ++i) {
            const Event& e = w.events[i];
            event_by_id.emplace(std::string(strip_thing_prefix(e.id)), i);
            if (e.is_post())
                post_indices.push_back(i);
            else
                comment_indices.push_back(i);
            if (auto it = member_index.find(e.author); it != member_index.end()) {
                if (e.is_post())
                    posts_per_member[it->second] += 1.0;
                else
                    comments_per_member[it->second] += 1.0;
            }
        }
        for (std::size_t i : comment_indices) {
            if (auto parent = resolve_parent(i))
                ++direct_replies[*parent];
            else
                ++dangling_parents;
        }
    }

    // Parent event of a comment, within the window. parent_id first, link_id
    // as fallback when parent_id is missing.
    std::optional<std::size_t> resolve_parent(std::size_t comment_idx) const {
        const Event& e = window.events[comment_idx];
        const std::string& ref = !e.parent_id.empty() ? e.parent_id : e.link_id;
        if (ref.empty()) return std::nullopt;
        auto it = event_by_id.find(std::string(strip_thing_prefix(ref)));
        if (it == event_by_id.end() || it->second == comment_idx) return std::nullopt;
        return it->second;
    }
};

}  // namespace commsuccess
