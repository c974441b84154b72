#include <catch2/catch_amalgamated.hpp>

#include <set>
#include <sstream>

#include "commsuccess/features_activity.hpp"
#include "commsuccess/features_graph.hpp"
#include "commsuccess/ndjson.hpp"
#include "commsuccess/success.hpp"
#include "commsuccess/synth.hpp"
#include "commsuccess/window_view.hpp"

using namespace commsuccess;

namespace {

CommunityTimeline timeline_of(const std::vector<Event>& events, const std::string& community) {
    auto timelines = build_timelines(events);
    REQUIRE(timelines.count(community) == 1);
    return timelines.at(community);
}

double feature(const FeatureVector& fv, const std::string& name) {
    for (std::size_t i = 0; i < fv.names.size(); ++i)
        if (fv.names[i] == name) return fv.values[i];
    FAIL("missing feature: " + name);
    return 0;
}

}  // namespace

TEST_CASE("generation is deterministic and well formed") {
    SynthParams params;
    params.community = "t";
    params.seed = 99;
    const auto a = generate(params);
    const auto b = generate(params);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].id == b[i].id);
        CHECK(a[i].created_at == b[i].created_at);
    }

    std::set<std::string> ids;
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(ids.insert(a[i].id).second);
        if (i) CHECK(a[i].created_at >= a[i - 1].created_at);
        if (a[i].is_post()) {
            CHECK(a[i].parent_id.empty());
        } else {
            CHECK_FALSE(a[i].parent_id.empty());
        }
    }
    CHECK(a.front().is_post());
}

TEST_CASE("generated events survive the dump round trip") {
    SynthParams params;
    params.community = "t";
    params.seed = 7;
    params.lifetime_months = 2;
    const auto events = generate(params);
    std::stringstream posts, comments;
    write_dump(posts, events, DumpKind::Posts);
    write_dump(comments, events, DumpKind::Comments);

    std::vector<Event> back;
    StreamStats stats;
    for (auto* stream : {&posts, &comments}) {
        StreamLineSource source(*stream);
        const auto s = stream_events(source, stream == &posts ? DumpKind::Posts : DumpKind::Comments,
                                     [&](Event&& e) { back.push_back(std::move(e)); });
        stats.parsed += s.parsed;
        stats.skipped += s.skipped;
    }
    CHECK(back.size() == events.size());
    CHECK(stats.skipped == 0);
}

TEST_CASE("near-zero concentration plants high posting inequality") {
    SynthParams params;
    params.community = "t";
    params.n_members = 20;
    params.concentration = 1e-3;
    params.activity_per_member = 40.0;
    params.post_fraction = 0.9;
    params.lifetime_months = 1;
    params.seed = 13;
    const auto tl = timeline_of(generate(params), "t");
    const auto w = extract_early_window(tl, 20);
    REQUIRE(w.has_value());
    const WindowView view(*w);
    FeatureVector fv;
    distribution_features(view, fv);
    CHECK(feature(fv, "gini_posts_per_user") > 0.8);
}

TEST_CASE("zero churn keeps retention near one") {
    SynthParams params;
    params.community = "t";
    params.n_members = 15;
    params.churn_prob = 0.0;
    params.new_users_per_month = 0.0;
    params.monthly_events_per_user = 25.0;  // every user acts every month
    params.seed = 17;
    const auto tl = timeline_of(generate(params), "t");
    const auto w = extract_early_window(tl, 15);
    REQUIRE(w.has_value());
    const auto monthly = monthly_partition(tl, w->t_k, kSurvivalMonths);
    CHECK(retention(monthly) == Catch::Approx(1.0).margin(0.05));
}

TEST_CASE("three-month lifetime gives zero survival") {
    SynthParams params;
    params.community = "t";
    params.lifetime_months = 3;
    params.seed = 19;
    const auto tl = timeline_of(generate(params), "t");
    const auto w = extract_early_window(tl, params.n_members);
    REQUIRE(w.has_value());
    const auto monthly = monthly_partition(tl, w->t_k, kSurvivalMonths);
    CHECK(survival(monthly) == 0.0);
}

TEST_CASE("reply probability raises reply-graph density") {
    auto density_at = [](double reply_prob, std::uint64_t seed) {
        SynthParams params;
        params.community = "t";
        params.n_members = 15;
        params.post_fraction = 0.2;
        params.activity_per_member = 10.0;
        params.reply_prob = reply_prob;
        params.lifetime_months = 1;
        params.seed = seed;
        const auto tl = build_timelines(generate(params)).at("t");
        const auto w = extract_early_window(tl, 15);
        REQUIRE(w.has_value());
        const auto g = build_reply_graph(WindowView(*w));
        const double n = static_cast<double>(g.n);
        return 2.0 * static_cast<double>(g.edge_count()) / (n * (n - 1.0));
    };
    double low = 0, high = 0;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        low += density_at(0.05, seed);
        high += density_at(0.9, seed);
    }
    CHECK(high > low);
}

TEST_CASE("sentinel probability produces sentinel events") {
    SynthParams params;
    params.community = "t";
    params.sentinel_prob = 0.3;
    params.activity_per_member = 10.0;
    params.seed = 23;
    params.lifetime_months = 2;
    const auto events = generate(params);
    std::size_t sentinels = 0;
    for (const auto& e : events) sentinels += e.author_is_sentinel();
    CHECK(sentinels > 0);
}

TEST_CASE("corpus generation covers background and focal communities") {
    CorpusParams cp;
    cp.n_communities = 12;
    cp.seed = 5;
    std::vector<CorpusCommunity> communities;
    const auto events = generate_corpus(cp, &communities);
    REQUIRE(communities.size() == 12);

    std::set<std::string> names;
    for (const auto& e : events) names.insert(e.community);
    CHECK(names.count("bg0") == 1);
    CHECK(names.count("c0") == 1);
    CHECK(names.size() >= 12 + static_cast<std::size_t>(cp.n_background));

    // some focal members come from the shared background pool
    bool experienced = false;
    for (const auto& e : events)
        if (e.community.rfind("c", 0) == 0 && e.author.rfind("bguser", 0) == 0) experienced = true;
    CHECK(experienced);
}

TEST_CASE("corpus quality drives the growth outcome") {
    CorpusParams cp;
    cp.n_communities = 40;
    cp.seed = 11;
    std::vector<CorpusCommunity> communities;
    const auto events = generate_corpus(cp, &communities);
    const auto timelines = build_timelines(events);

    std::vector<double> qualities, growths;
    for (const auto& cc : communities) {
        const auto it = timelines.find(cc.params.community);
        REQUIRE(it != timelines.end());
        const auto w = extract_early_window(it->second, 10);
        if (!w) continue;
        const auto monthly = monthly_partition(it->second, w->t_k, kSurvivalMonths);
        qualities.push_back(cc.quality);
        growths.push_back(static_cast<double>(growth(monthly, GrowthKind::Commenters)));
    }
    REQUIRE(qualities.size() >= 30);
    double mean_q = 0;
    for (double q : qualities) mean_q += q;
    mean_q /= static_cast<double>(qualities.size());
    double above = 0, below = 0;
    std::size_t n_above = 0, n_below = 0;
    for (std::size_t i = 0; i < qualities.size(); ++i) {
        if (qualities[i] > mean_q) {
            above += growths[i];
            ++n_above;
        } else {
            below += growths[i];
            ++n_below;
        }
    }
    REQUIRE(n_above > 0);
    REQUIRE(n_below > 0);
    CHECK(above / static_cast<double>(n_above) > 2.0 * below / static_cast<double>(n_below));
}
