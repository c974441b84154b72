#pragma once

#include <catch2/catch_amalgamated.hpp>

#include <cstdint>
#include <string>
#include <vector>

#include "commsuccess/event.hpp"
#include "commsuccess/ingest.hpp"

namespace fixtures {

using commsuccess::Event;
using commsuccess::EventKind;
using commsuccess::kSecondsPerDay;

inline Event post(std::string id, std::string author, std::string community, std::int64_t t,
                  std::string title = "title words", std::string body = "body words here",
                  long score = 1) {
    Event e;
    e.id = std::move(id);
    e.kind = EventKind::Post;
    e.author = std::move(author);
    e.community = std::move(community);
    e.created_at = t;
    e.title = std::move(title);
    e.body = std::move(body);
    e.score = score;
    return e;
}

inline Event comment(std::string id, std::string author, std::string community, std::int64_t t,
                     std::string parent_id, std::string body = "reply words", long score = 1) {
    Event e;
    e.id = std::move(id);
    e.kind = EventKind::Comment;
    e.author = std::move(author);
    e.community = std::move(community);
    e.created_at = t;
    e.parent_id = std::move(parent_id);
    e.body = std::move(body);
    e.score = score;
    return e;
}

// Early window directly from an event list; members are the distinct
// non-sentinel authors in order, k = member count.
inline commsuccess::EarlyWindow window_of(std::vector<Event> events) {
    auto timelines = commsuccess::build_timelines(std::move(events));
    REQUIRE(timelines.size() == 1);
    const auto& tl = timelines.begin()->second;
    std::vector<std::string> members;
    for (const auto& e : tl.events) {
        if (e.author_is_sentinel()) continue;
        bool seen = false;
        for (const auto& m : members) seen = seen || m == e.author;
        if (!seen) members.push_back(e.author);
    }
    auto w = commsuccess::extract_early_window(tl, static_cast<int>(members.size()), 1e9);
    REQUIRE(w.has_value());
    return *w;
}

inline std::int64_t day(double d) {
    return static_cast<std::int64_t>(d * static_cast<double>(kSecondsPerDay));
}

}  // namespace fixtures
