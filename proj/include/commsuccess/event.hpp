#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace commsuccess {

inline constexpr std::string_view kDeletedSentinel = "[deleted]";
inline constexpr std::int64_t kSecondsPerDay = 86400;
inline constexpr std::int64_t kSecondsPerMonth = 30 * kSecondsPerDay;

enum class EventKind { Post, Comment };

// One post or comment from the dump. Optional fields are empty strings.
struct Event {
    std::string id;
    EventKind kind = EventKind::Post;
    std::string author;
    std::string community;
    std::int64_t created_at = 0;   // seconds since epoch, UTC
    std::string parent_id;         // comments only; "t1_..." or "t3_..."
    std::string link_id;           // comments only; root post, "t3_..."
    std::string title;             // posts only
    std::string body;
    long score = 0;

    bool author_is_sentinel() const { return author == kDeletedSentinel; }
    bool is_post() const { return kind == EventKind::Post; }
    bool is_comment() const { return kind == EventKind::Comment; }
};

// Reddit fullnames carry a type prefix ("t1_" comment, "t3_" post) while the
// id field of the referenced thing is bare. Strip the prefix for resolution.
inline std::string_view strip_thing_prefix(std::string_view id) {
    if (id.size() > 3 && id[0] == 't' && id[2] == '_' && id[1] >= '1' && id[1] <= '6')
        return id.substr(3);
    return id;
}

// Sort key used everywhere a timeline needs a total order.
inline bool event_time_less(const Event& a, const Event& b) {
    if (a.created_at != b.created_at) return a.created_at < b.created_at;
    return a.id < b.id;
}

}  // namespace commsuccess
