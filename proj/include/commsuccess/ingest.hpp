#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include <json.hpp>

#include "commsuccess/errors.hpp"
#include "commsuccess/event.hpp"

namespace commsuccess {

inline constexpr double kQualificationDays = 90.0;

// A community's events, time-ordered (ties broken by event id). created_at is
// the timestamp of the first event, which stands in for the community's
// creation time.
struct CommunityTimeline {
    std::string community;
    std::int64_t created_at = 0;
    std::vector<Event> events;
};

// Events from creation until the k-th distinct (non-sentinel) member first
// acts, inclusive. All predictive features derive from this window.
struct EarlyWindow {
    std::string community;
    int k = 0;
    std::vector<std::string> members;  // first k distinct authors, arrival order
    std::int64_t created_at = 0;
    std::int64_t t_k = 0;
    double days_to_k = 0.0;
    std::vector<Event> events;
};

struct MonthlyActivity {
    int month_index = 0;  // 1-based
    std::int64_t posts_count = 0;
    std::int64_t comments_count = 0;
    std::set<std::string> active_users;
    std::set<std::string> posters;
    std::set<std::string> commenters;
};

struct UserActivityRecord {
    std::string community;
    EventKind kind;
    long score;
    std::int64_t created_at;
};

// Per-user first-seen time and time-ordered activity log across all
// communities. Built once, then shared read-only.
class UserHistoryIndex {
  public:
    void add(const Event& e) {
        if (e.author_is_sentinel()) return;
        auto& log = logs_[e.author];
        log.push_back({e.community, e.kind, e.score, e.created_at});
    }

    void finalize() {
        for (auto& [user, log] : logs_)
            std::stable_sort(log.begin(), log.end(),
                             [](const auto& a, const auto& b) { return a.created_at < b.created_at; });
    }

    std::optional<std::int64_t> first_seen(const std::string& user) const {
        auto it = logs_.find(user);
        if (it == logs_.end() || it->second.empty()) return std::nullopt;
        return it->second.front().created_at;
    }

    // Activities of `user` in [t1, t2).
    std::vector<UserActivityRecord> query(const std::string& user, std::int64_t t1,
                                          std::int64_t t2) const {
        std::vector<UserActivityRecord> out;
        auto it = logs_.find(user);
        if (it == logs_.end()) return out;
        const auto& log = it->second;
        auto lo = std::lower_bound(log.begin(), log.end(), t1,
                                   [](const auto& r, std::int64_t t) { return r.created_at < t; });
        for (; lo != log.end() && lo->created_at < t2; ++lo) out.push_back(*lo);
        return out;
    }

  private:
    std::unordered_map<std::string, std::vector<UserActivityRecord>> logs_;
};

inline UserHistoryIndex build_user_history(const std::vector<Event>& events) {
    UserHistoryIndex index;
    for (const auto& e : events) index.add(e);
    index.finalize();
    return index;
}

// Group events into per-community timelines. Duplicate event ids keep the
// first occurrence; the duplicate count is reported through `duplicates`.
inline std::map<std::string, CommunityTimeline> build_timelines(std::vector<Event> events,
                                                                std::size_t* duplicates = nullptr) {
    std::map<std::string, CommunityTimeline> timelines;
    std::sort(events.begin(), events.end(), event_time_less);
    std::unordered_map<std::string, std::unordered_set<std::string>> seen_ids;
    std::size_t dup_count = 0;
    for (auto& e : events) {
        if (!seen_ids[e.community].insert(e.id).second) {
            ++dup_count;
            continue;
        }
        auto& tl = timelines[e.community];
        if (tl.events.empty()) {
            tl.community = e.community;
            tl.created_at = e.created_at;
        }
        tl.events.push_back(std::move(e));
    }
    if (duplicates) *duplicates = dup_count;
    return timelines;
}

// Walk events in order collecting distinct non-sentinel authors; the window
// is the event prefix ending at the k-th distinct author's first event.
// Rejection (nullopt) when fewer than k authors act within the qualification
// period.
inline std::optional<EarlyWindow> extract_early_window(const CommunityTimeline& timeline, int k,
                                                       double qualification_days = kQualificationDays) {
    if (k < 1) throw ConfigError("extract_early_window: k must be >= 1");
    if (timeline.events.empty()) throw DataError("extract_early_window: empty timeline");

    const std::int64_t deadline =
        timeline.created_at + static_cast<std::int64_t>(qualification_days * kSecondsPerDay);

    EarlyWindow w;
    w.community = timeline.community;
    w.k = k;
    w.created_at = timeline.created_at;
    std::unordered_set<std::string> seen;
    for (std::size_t i = 0; i < timeline.events.size(); ++i) {
        const Event& e = timeline.events[i];
        if (e.created_at > deadline) break;
        if (!e.author_is_sentinel() && seen.insert(e.author).second) {
            w.members.push_back(e.author);
            if (static_cast<int>(w.members.size()) == k) {
                w.t_k = e.created_at;
                w.days_to_k =
                    static_cast<double>(w.t_k - w.created_at) / static_cast<double>(kSecondsPerDay);
                w.events.assign(timeline.events.begin(), timeline.events.begin() + i + 1);
                return w;
            }
        }
    }
    return std::nullopt;
}

// Month i covers [t_k + (i-1)*30d, t_k + i*30d). Sentinel authors are
// excluded from user sets but included in activity counts.
inline std::vector<MonthlyActivity> monthly_partition(const CommunityTimeline& timeline,
                                                      std::int64_t t_k, int months) {
    if (months < 1) throw ConfigError("monthly_partition: months must be >= 1");
    std::vector<MonthlyActivity> out(static_cast<std::size_t>(months));
    for (int i = 0; i < months; ++i) out[static_cast<std::size_t>(i)].month_index = i + 1;

    for (const auto& e : timeline.events) {
        if (e.created_at < t_k) continue;
        const std::int64_t offset = e.created_at - t_k;
        const auto month = static_cast<std::size_t>(offset / kSecondsPerMonth);
        if (month >= out.size()) continue;
        auto& m = out[month];
        if (e.is_post())
            ++m.posts_count;
        else
            ++m.comments_count;
        if (!e.author_is_sentinel()) {
            m.active_users.insert(e.author);
            if (e.is_post())
                m.posters.insert(e.author);
            else
                m.commenters.insert(e.author);
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Checkpoint JSON schemas.
// ---------------------------------------------------------------------------

inline nlohmann::json event_to_json(const Event& e) {
    return {{"id", e.id},
            {"kind", e.is_post() ? "post" : "comment"},
            {"author", e.author},
            {"community", e.community},
            {"created_at", e.created_at},
            {"parent_id", e.parent_id},
            {"link_id", e.link_id},
            {"title", e.title},
            {"body", e.body},
            {"score", e.score}};
}

inline Event event_from_json(const nlohmann::json& obj) {
    Event e;
    e.id = obj.at("id").get<std::string>();
    e.kind = obj.at("kind").get<std::string>() == "post" ? EventKind::Post : EventKind::Comment;
    e.author = obj.at("author").get<std::string>();
    e.community = obj.at("community").get<std::string>();
    e.created_at = obj.at("created_at").get<std::int64_t>();
    e.parent_id = obj.at("parent_id").get<std::string>();
    e.link_id = obj.at("link_id").get<std::string>();
    e.title = obj.at("title").get<std::string>();
    e.body = obj.at("body").get<std::string>();
    e.score = obj.at("score").get<long>();
    return e;
}

inline nlohmann::json early_window_to_json(const EarlyWindow& w) {
    nlohmann::json events = nlohmann::json::array();
    for (const auto& e : w.events) events.push_back(event_to_json(e));
    return {{"community", w.community}, {"k", w.k},
            {"members", w.members},     {"created_at", w.created_at},
            {"t_k", w.t_k},             {"days_to_k", w.days_to_k},
            {"events", std::move(events)}};
}

inline EarlyWindow early_window_from_json(const nlohmann::json& obj) {
    EarlyWindow w;
    w.community = obj.at("community").get<std::string>();
    w.k = obj.at("k").get<int>();
    w.members = obj.at("members").get<std::vector<std::string>>();
    w.created_at = obj.at("created_at").get<std::int64_t>();
    w.t_k = obj.at("t_k").get<std::int64_t>();
    w.days_to_k = obj.at("days_to_k").get<double>();
    for (const auto& e : obj.at("events")) w.events.push_back(event_from_json(e));
    return w;
}

inline nlohmann::json monthly_activity_to_json(const MonthlyActivity& m) {
    return {{"month_index", m.month_index},
            {"posts_count", m.posts_count},
            {"comments_count", m.comments_count},
            {"active_users", std::vector<std::string>(m.active_users.begin(), m.active_users.end())},
            {"posters", std::vector<std::string>(m.posters.begin(), m.posters.end())},
            {"commenters", std::vector<std::string>(m.commenters.begin(), m.commenters.end())}};
}

inline MonthlyActivity monthly_activity_from_json(const nlohmann::json& obj) {
    MonthlyActivity m;
    m.month_index = obj.at("month_index").get<int>();
    m.posts_count = obj.at("posts_count").get<std::int64_t>();
    m.comments_count = obj.at("comments_count").get<std::int64_t>();
    for (const auto& u : obj.at("active_users")) m.active_users.insert(u.get<std::string>());
    for (const auto& u : obj.at("posters")) m.posters.insert(u.get<std::string>());
    for (const auto& u : obj.at("commenters")) m.commenters.insert(u.get<std::string>());
    return m;
}

}  // namespace commsuccess
