#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <unordered_set>
#include <vector>

#include "commsuccess/errors.hpp"
#include "commsuccess/event.hpp"
#include "commsuccess/parallel.hpp"

namespace commsuccess {

inline constexpr std::int64_t kEpoch2014 = 1388534400;  // 2014-01-01 UTC

// Planted behavioral parameters for one synthetic community. All randomness
// flows from `seed`; no wall clock anywhere.
struct SynthParams {
    std::string community = "synth";
    int n_members = 20;
    double member_arrival_rate = 1.0;     // arrivals per day
    double activity_per_member = 3.0;     // extra early-window events per member
    double concentration = 1.0;           // gamma shape; smaller -> higher planted Gini
    double post_fraction = 0.4;           // P(event is a post)
    double reply_prob = 0.5;              // P(comment targets another author's event)
    double churn_prob = 0.3;              // monthly leave probability
    int lifetime_months = 24;             // no activity after this month
    double new_users_per_month = 5.0;     // growth influx after the window
    double monthly_events_per_user = 3.0;
    double we_rate = 0.05;                // weight of first-person-plural tokens
    double sentinel_prob = 0.0;           // P(an event's author is the deletion sentinel)
    std::int64_t creation_time = kEpoch2014;
    std::uint64_t seed = 1;
};

namespace detail {

inline const std::vector<std::string>& base_vocabulary() {
    static const std::vector<std::string> vocab = {
        "the",   "a",      "to",     "and",   "of",     "in",    "is",    "that",  "it",
        "for",   "on",     "with",   "this",  "post",   "thread", "game",  "new",   "time",
        "people", "think", "really", "about", "what",   "just",  "how",   "when",  "make",
        "good",  "great",  "love",   "happy", "nice",   "bad",   "hate",  "sad",   "wrong",
        "you",   "your",   "i",      "my",    "me",     "they",  "them",  "here",  "there",
        "today", "first",  "best",   "thing", "know"};
    return vocab;
}

class TokenSampler {
  public:
    TokenSampler(double we_rate, std::mt19937_64& rng) : rng_(rng) {
        const auto& vocab = base_vocabulary();
        std::vector<double> weights;
        weights.reserve(vocab.size() + 3);
        for (std::size_t i = 0; i < vocab.size(); ++i)
            weights.push_back(1.0 / static_cast<double>(i + 1));  // zipf-ish
        double total = 0;
        for (double w : weights) total += w;
        // first-person-plural mass on top of the base profile
        for (int i = 0; i < 3; ++i) weights.push_back(we_rate * total / 3.0);
        dist_ = std::discrete_distribution<std::size_t>(weights.begin(), weights.end());
    }

    std::string sample() {
        const auto i = dist_(rng_);
        const auto& vocab = base_vocabulary();
        if (i < vocab.size()) return vocab[i];
        static const char* we_tokens[] = {"we", "our", "us"};
        return we_tokens[i - vocab.size()];
    }

    std::string sentence(int n_tokens) {
        std::string s;
        for (int i = 0; i < n_tokens; ++i) {
            if (i) s.push_back(' ');
            s += sample();
        }
        return s;
    }

  private:
    std::mt19937_64& rng_;
    std::discrete_distribution<std::size_t> dist_;
};

struct PendingEvent {
    std::int64_t time;
    std::string author;
    bool is_post;
};

}  // namespace detail

// Names the generator uses for fresh members; corpus mode may override the
// member roster to reuse cross-community users.
inline std::string synth_member_name(const std::string& community, int i) {
    return "u_" + community + "_" + std::to_string(i);
}

// Deterministic event generation for one community. Emits dump-compatible
// events sorted by time, ids unique within the corpus (community-prefixed).
inline std::vector<Event> generate(const SynthParams& params,
                                   const std::vector<std::string>* member_names = nullptr) {
    if (params.n_members < 1) throw ConfigError("synth: n_members must be >= 1");
    if (params.member_arrival_rate <= 0) throw ConfigError("synth: arrival rate must be > 0");
    std::mt19937_64 rng(params.seed);
    detail::TokenSampler text(params.we_rate, rng);
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    std::vector<std::string> members;
    for (int i = 0; i < params.n_members; ++i)
        members.push_back(member_names ? (*member_names)[static_cast<std::size_t>(i)]
                                       : synth_member_name(params.community, i));

    // member arrival times: exponential gaps
    std::exponential_distribution<double> gap(params.member_arrival_rate);
    std::vector<std::int64_t> arrivals;
    double t = static_cast<double>(params.creation_time);
    for (int i = 0; i < params.n_members; ++i) {
        if (i > 0) t += gap(rng) * static_cast<double>(kSecondsPerDay);
        arrivals.push_back(static_cast<std::int64_t>(t));
    }
    const std::int64_t t_last = arrivals.back();

    // per-member activity weights control the planted inequality; lognormal
    // spread grows as concentration shrinks (gamma tails underflow at tiny
    // shape, so this keeps the skew knob effective all the way down)
    std::normal_distribution<double> weight_gauss(0.0, 1.0);
    const double spread = 1.0 / std::clamp(params.concentration, 1.0 / 30.0, 1e6);
    std::vector<double> weights;
    for (int i = 0; i < params.n_members; ++i)
        weights.push_back(std::exp(spread * weight_gauss(rng)));

    std::vector<detail::PendingEvent> pending;
    for (int i = 0; i < params.n_members; ++i) {
        const bool is_post = i == 0 || unit(rng) < params.post_fraction;
        pending.push_back({arrivals[static_cast<std::size_t>(i)], members[static_cast<std::size_t>(i)], is_post});
    }

    // extra early-window events by already-arrived members
    const auto n_extra =
        static_cast<int>(std::lround(params.activity_per_member * params.n_members));
    for (int i = 0; i < n_extra; ++i) {
        const auto time = params.creation_time +
                          static_cast<std::int64_t>(unit(rng) * static_cast<double>(t_last - params.creation_time));
        // weighted pick among members arrived by `time`
        std::size_t arrived = 0;
        while (arrived < arrivals.size() && arrivals[arrived] <= time) ++arrived;
        if (arrived == 0) continue;
        double total = 0;
        for (std::size_t m = 0; m < arrived; ++m) total += weights[m];
        double r = unit(rng) * total;
        std::size_t pick = 0;
        while (pick + 1 < arrived && (r -= weights[pick]) > 0) ++pick;
        std::string author = unit(rng) < params.sentinel_prob ? std::string(kDeletedSentinel)
                                                              : members[pick];
        pending.push_back({time, std::move(author), unit(rng) < params.post_fraction});
    }

    // post-window months, anchored at the last member's arrival
    std::vector<std::string> active(members.begin(), members.end());
    std::poisson_distribution<int> influx(std::max(params.new_users_per_month, 1e-9));
    int next_new_user = 0;
    const int months = std::min(params.lifetime_months, 24);
    for (int month = 1; month <= months; ++month) {
        const std::int64_t month_start = t_last + static_cast<std::int64_t>(month - 1) * kSecondsPerMonth;
        std::vector<std::string> joiners;
        const int n_new = influx(rng);
        for (int i = 0; i < n_new; ++i)
            joiners.push_back("g_" + params.community + "_" + std::to_string(next_new_user++));
        for (const auto& user : joiners) active.push_back(user);
        std::poisson_distribution<int> per_user(std::max(params.monthly_events_per_user, 1e-9));
        for (const auto& user : active) {
            const int n_events = per_user(rng);
            for (int i = 0; i < n_events; ++i) {
                const auto time =
                    month_start + static_cast<std::int64_t>(unit(rng) * static_cast<double>(kSecondsPerMonth));
                std::string author = unit(rng) < params.sentinel_prob
                                         ? std::string(kDeletedSentinel)
                                         : user;
                pending.push_back({time, std::move(author), unit(rng) < params.post_fraction});
            }
        }
        // monthly churn
        std::vector<std::string> survivors;
        for (const auto& user : active)
            if (unit(rng) >= params.churn_prob) survivors.push_back(user);
        active = std::move(survivors);
    }

    std::stable_sort(pending.begin(), pending.end(),
                     [](const auto& a, const auto& b) { return a.time < b.time; });

    // materialize: comments pick parents among earlier events
    std::vector<Event> events;
    events.reserve(pending.size());
    std::poisson_distribution<int> body_len(9), title_len(4);
    std::poisson_distribution<int> score_dist(3);
    std::vector<std::size_t> post_idx;
    std::vector<std::size_t> non_sentinel;
    std::unordered_map<std::string, std::vector<std::size_t>> by_author;
    int seq = 0;
    for (auto& p : pending) {
        Event e;
        e.author = p.author;
        e.community = params.community;
        e.created_at = p.time;
        e.score = score_dist(rng) - 1;
        e.body = text.sentence(body_len(rng) + 1);
        const bool force_post = events.empty();
        if (p.is_post || force_post) {
            e.kind = EventKind::Post;
            e.id = params.community + "_p" + std::to_string(seq++);
            e.title = text.sentence(title_len(rng) + 1);
            post_idx.push_back(events.size());
        } else {
            e.kind = EventKind::Comment;
            e.id = params.community + "_c" + std::to_string(seq++);
            // reply target: another author's event with prob reply_prob,
            // otherwise own content (or the first post)
            std::size_t target = 0;
            if (unit(rng) < params.reply_prob) {
                const auto it = by_author.find(e.author);
                const std::size_t own_count =
                    (it != by_author.end() && !e.author_is_sentinel()) ? it->second.size() : 0;
                if (non_sentinel.size() > own_count) {
                    // uniform over earlier non-sentinel events by other
                    // authors: rejection sample, exact merge walk past the cap
                    bool found = false;
                    for (int tries = 0; tries < 64 && !found; ++tries) {
                        const std::size_t j =
                            static_cast<std::size_t>(unit(rng) *
                                                     static_cast<double>(non_sentinel.size())) %
                            non_sentinel.size();
                        if (events[non_sentinel[j]].author != e.author) {
                            target = non_sentinel[j];
                            found = true;
                        }
                    }
                    if (!found) {
                        const std::size_t n_others = non_sentinel.size() - own_count;
                        std::size_t want = static_cast<std::size_t>(
                                               unit(rng) * static_cast<double>(n_others)) %
                                           n_others;
                        std::size_t pos = 0;
                        for (std::size_t j = 0; j < non_sentinel.size(); ++j) {
                            if (pos < own_count && it->second[pos] == non_sentinel[j]) {
                                ++pos;
                                continue;
                            }
                            if (want == 0) {
                                target = non_sentinel[j];
                                break;
                            }
                            --want;
                        }
                    }
                }
            } else {
                const auto it = by_author.find(e.author);
                if (it != by_author.end()) {
                    const auto& own = it->second;
                    target = own[static_cast<std::size_t>(unit(rng) * static_cast<double>(own.size())) %
                                 own.size()];
                }
            }
            const Event& parent = events[target];
            e.parent_id = (parent.is_post() ? "t3_" : "t1_") + parent.id;
            e.link_id = "t3_" + events[parent.is_post() ? target : post_idx.front()].id;
        }
        if (!e.author_is_sentinel()) non_sentinel.push_back(events.size());
        by_author[e.author].push_back(events.size());
        events.push_back(std::move(e));
    }
    return events;
}

// ---------------------------------------------------------------------------
// Corpus mode: a population of communities with a latent quality parameter
// driving both early-window behavior and eventual success, plus background
// communities that give members cross-community histories.
// ---------------------------------------------------------------------------

struct CorpusParams {
    int n_communities = 400;
    int n_background = 8;
    int background_users = 250;
    double experienced_fraction = 0.3;  // focal members drawn from the background pool
    double sentinel_prob = 0.01;
    std::int64_t base_time = kEpoch2014 + 90 * kSecondsPerDay;
    std::uint64_t seed = 7;
};

struct CorpusCommunity {
    SynthParams params;
    double quality = 0;  // latent driver, recorded for diagnostics
};

namespace detail {

inline std::vector<Event> generate_background(const CorpusParams& cp, std::mt19937_64& rng) {
    std::vector<Event> events;
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    TokenSampler text(0.05, rng);
    std::poisson_distribution<int> body_len(8);
    const std::int64_t start = cp.base_time - 150 * kSecondsPerDay;
    const std::int64_t end = cp.base_time + 800 * kSecondsPerDay;
    for (int b = 0; b < cp.n_background; ++b) {
        const std::string community = "bg" + std::to_string(b);
        int seq = 0;
        std::string first_post_id;
        const int n_events = 600;
        for (int i = 0; i < n_events; ++i) {
            Event e;
            const int user = static_cast<int>(unit(rng) * cp.background_users) % cp.background_users;
            e.author = "bguser" + std::to_string(user);
            e.community = community;
            e.created_at = start + static_cast<std::int64_t>(
                                       (static_cast<double>(i) + unit(rng)) / n_events *
                                       static_cast<double>(end - start));
            e.score = static_cast<long>(unit(rng) * 10);
            e.body = text.sentence(body_len(rng) + 1);
            if (i == 0 || unit(rng) < 0.5) {
                e.kind = EventKind::Post;
                e.id = community + "_p" + std::to_string(seq++);
                e.title = text.sentence(3);
                if (first_post_id.empty()) first_post_id = e.id;
            } else {
                e.kind = EventKind::Comment;
                e.id = community + "_c" + std::to_string(seq++);
                e.parent_id = "t3_" + first_post_id;
                e.link_id = "t3_" + first_post_id;
            }
            events.push_back(std::move(e));
        }
    }
    return events;
}

}  // namespace detail

inline std::vector<CorpusCommunity> draw_corpus_communities(const CorpusParams& cp) {
    std::mt19937_64 rng(cp.seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<CorpusCommunity> out;
    for (int c = 0; c < cp.n_communities; ++c) {
        const double q = unit(rng);
        CorpusCommunity cc;
        cc.quality = q;
        SynthParams& p = cc.params;
        p.community = "c" + std::to_string(c);
        p.n_members = 12 + static_cast<int>(std::floor(120.0 * q * unit(rng)));
        p.member_arrival_rate = 0.5 + 6.0 * q;
        p.activity_per_member = 2.0 + 8.0 * q;
        p.concentration = 2.5 - 2.2 * q;  // high quality -> concentrated activity
        p.post_fraction = 0.3 + 0.2 * unit(rng);
        p.reply_prob = 0.2 + 0.6 * q;
        p.churn_prob = 0.75 - 0.55 * q;
        p.lifetime_months = q < 0.15 ? 4 + static_cast<int>(unit(rng) * 6) : 24;
        p.new_users_per_month = 1.0 + 35.0 * q * q + 2.0 * unit(rng);
        p.monthly_events_per_user = 1.0 + 4.0 * q;
        p.we_rate = 0.02 + 0.12 * (1.0 - q);
        p.sentinel_prob = cp.sentinel_prob;
        p.creation_time = cp.base_time + static_cast<std::int64_t>(unit(rng) * 60.0 *
                                                                   static_cast<double>(kSecondsPerDay));
        p.seed = cp.seed * 1000003 + static_cast<std::uint64_t>(c) + 1;
        out.push_back(std::move(cc));
    }
    return out;
}

// Full corpus: background communities plus the focal population. Member
// rosters mix fresh accounts with background users so prior-history features
// are non-trivial.
inline std::vector<Event> generate_corpus(const CorpusParams& cp,
                                          std::vector<CorpusCommunity>* communities_out = nullptr,
                                          int jobs = 1) {
    std::mt19937_64 rng(cp.seed ^ 0x9e3779b97f4a7c15ull);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    auto events = detail::generate_background(cp, rng);
    auto communities = draw_corpus_communities(cp);

    // rosters drawn sequentially so output is identical for any worker count
    std::vector<std::vector<std::string>> rosters;
    rosters.reserve(communities.size());
    for (const auto& cc : communities) {
        std::vector<std::string> roster;
        std::unordered_set<std::string> used;
        for (int i = 0; i < cc.params.n_members; ++i) {
            std::string name;
            if (unit(rng) < cp.experienced_fraction) {
                const int user =
                    static_cast<int>(unit(rng) * cp.background_users) % cp.background_users;
                name = "bguser" + std::to_string(user);
                if (!used.insert(name).second) name.clear();
            }
            if (name.empty()) {
                name = synth_member_name(cc.params.community, i);
                used.insert(name);
            }
            roster.push_back(std::move(name));
        }
        rosters.push_back(std::move(roster));
    }

    std::vector<std::vector<Event>> per_community(communities.size());
    parallel_for(communities.size(), jobs, [&](std::size_t i) {
        per_community[i] = generate(communities[i].params, &rosters[i]);
    });
    for (auto& community_events : per_community)
        events.insert(events.end(), std::make_move_iterator(community_events.begin()),
                      std::make_move_iterator(community_events.end()));
    if (communities_out) *communities_out = std::move(communities);
    return events;
}

}  // namespace commsuccess
