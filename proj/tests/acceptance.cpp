// Acceptance gate: one test case per criterion, each ending with a printed
// verdict line. Failures abort the case before its PASS line, so the Catch
// failure report doubles as the FAIL line.

#include <catch2/catch_amalgamated.hpp>

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include "commsuccess/features_graph.hpp"
#include "commsuccess/gini.hpp"
#include "commsuccess/model.hpp"
#include "commsuccess/pipeline.hpp"
#include "commsuccess/stats.hpp"
#include "commsuccess/success.hpp"
#include "commsuccess/synth.hpp"

using namespace commsuccess;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

void verdict(int criterion, const std::string& what) {
    std::cout << "[acceptance] criterion " << criterion << " (" << what << "): PASS\n";
}

double gini_literal(const std::vector<double>& x) {
    double num = 0, total = 0;
    for (double xi : x) {
        total += xi;
        for (double xj : x) num += std::abs(xi - xj);
    }
    if (total <= 0) return 0.0;
    return num / (2.0 * static_cast<double>(x.size()) * total);
}

std::vector<MonthlyActivity> empty_months() {
    std::vector<MonthlyActivity> out(24);
    for (int i = 0; i < 24; ++i) out[static_cast<std::size_t>(i)].month_index = i + 1;
    return out;
}

void add_user(MonthlyActivity& m, const std::string& user, bool posts, bool comments) {
    m.active_users.insert(user);
    if (posts) {
        m.posters.insert(user);
        ++m.posts_count;
    }
    if (comments) {
        m.commenters.insert(user);
        ++m.comments_count;
    }
}

SuccessMeasures measures_literal(const std::vector<MonthlyActivity>& monthly) {
    SuccessMeasures m;
    std::set<std::string> commenters, posters;
    for (int i = 0; i < 12; ++i) {
        commenters.insert(monthly[i].commenters.begin(), monthly[i].commenters.end());
        posters.insert(monthly[i].posters.begin(), monthly[i].posters.end());
    }
    m.growth_commenters = static_cast<double>(commenters.size());
    m.growth_posters = static_cast<double>(posters.size());
    double ret = 0;
    for (int i = 0; i < 12; ++i) {
        if (monthly[i].active_users.empty()) continue;
        double back = 0;
        for (const auto& u : monthly[i].active_users) back += monthly[i + 1].active_users.count(u);
        ret += back / static_cast<double>(monthly[i].active_users.size());
    }
    m.retention = ret / 12.0;
    double total = 0, tail = 0;
    for (int i = 0; i < 24; ++i) {
        const double n = static_cast<double>(monthly[i].posts_count + monthly[i].comments_count);
        total += n;
        if (i >= 21) tail += n;
    }
    m.survival_degenerate = total == 0;
    m.survival = total == 0 ? 0 : tail / total;
    double posts = 0, comments = 0;
    for (int i = 0; i < 12; ++i) {
        posts += static_cast<double>(monthly[i].posts_count);
        comments += static_cast<double>(monthly[i].comments_count);
    }
    m.avg_posts = posts / 12.0;
    m.avg_comments = comments / 12.0;
    return m;
}

}  // namespace

TEST_CASE("criterion 1: inequality coefficient against the literal double sum") {
    const auto start = Clock::now();
    REQUIRE(gini(std::vector<double>{1, 1, 1, 1}) == 0.0);
    REQUIRE(gini(std::vector<double>{4, 0, 0, 0}) == 0.75);
    REQUIRE(gini(std::vector<double>{1, 2, 3, 4}) == 0.25);

    std::mt19937_64 rng(101);
    std::uniform_real_distribution<double> value(0.0, 50.0);
    std::uniform_int_distribution<std::size_t> length(1, 200);
    for (int trial = 0; trial < 1000; ++trial) {
        std::vector<double> x(length(rng));
        for (auto& v : x) v = value(rng);
        REQUIRE(std::abs(gini(x) - gini_literal(x)) <= 1e-12);
    }
    REQUIRE(seconds_since(start) < 5.0);
    verdict(1, "gini oracle, 1000 vectors");
}

TEST_CASE("criterion 2: success measures against straight-from-formula evaluation") {
    std::vector<std::vector<MonthlyActivity>> fixtures;

    {  // retention 0.5: five stayers, five leavers each month
        auto monthly = empty_months();
        for (int i = 0; i < 13; ++i) {
            for (int u = 0; u < 5; ++u) add_user(monthly[i], "s" + std::to_string(u), true, false);
            for (int u = 0; u < 5; ++u)
                add_user(monthly[i], "m" + std::to_string(i) + "_" + std::to_string(u), true, false);
        }
        REQUIRE(retention(monthly) == 0.5);
        fixtures.push_back(std::move(monthly));
    }
    {  // survival 0.125: uniform single event per month
        auto monthly = empty_months();
        for (int i = 0; i < 24; ++i) add_user(monthly[i], "u", true, false);
        REQUIRE(survival(monthly) == 0.125);
        fixtures.push_back(std::move(monthly));
    }
    {  // survival 0: all activity in the first quarter
        auto monthly = empty_months();
        for (int i = 0; i < 3; ++i) add_user(monthly[i], "u", false, true);
        REQUIRE(survival(monthly) == 0.0);
        fixtures.push_back(std::move(monthly));
    }
    {  // survival 1: all activity in the last quarter
        auto monthly = empty_months();
        for (int i = 21; i < 24; ++i) add_user(monthly[i], "u", false, true);
        REQUIRE(survival(monthly) == 1.0);
        fixtures.push_back(std::move(monthly));
    }
    std::mt19937_64 rng(102);
    while (fixtures.size() < 20) {
        auto monthly = empty_months();
        for (auto& m : monthly) {
            const auto n = rng() % 5;
            for (std::size_t u = 0; u < n; ++u)
                add_user(m, "u" + std::to_string(rng() % 9), rng() % 2 == 0, rng() % 3 != 0);
        }
        fixtures.push_back(std::move(monthly));
    }

    for (const auto& monthly : fixtures) {
        const auto fast = compute_success(monthly);
        const auto slow = measures_literal(monthly);
        REQUIRE(fast.growth_commenters == slow.growth_commenters);
        REQUIRE(fast.growth_posters == slow.growth_posters);
        REQUIRE(fast.retention == slow.retention);
        REQUIRE(fast.survival == slow.survival);
        REQUIRE(fast.avg_posts == slow.avg_posts);
        REQUIRE(fast.avg_comments == slow.avg_comments);
    }
    verdict(2, "success measures, 20 fixtures");
}

TEST_CASE("criterion 3: graph metrics against exhaustive enumeration") {
    auto make = [](std::size_t n, std::vector<std::pair<std::size_t, std::size_t>> edges) {
        ReplyGraph g;
        g.n = n;
        g.adjacency.resize(n);
        for (const auto& [a, b] : edges) g.add_edge(a, b);
        return g;
    };
    {  // triangle
        const auto g = make(3, {{0, 1}, {1, 2}, {0, 2}});
        REQUIRE(transitivity(g) == 1.0);
        REQUIRE(average_clustering(g) == 1.0);
        REQUIRE(g.edge_count() == 3);
    }
    {  // path: one triple, no triangles
        const auto g = make(3, {{0, 1}, {1, 2}});
        REQUIRE(transitivity(g) == 0.0);
        REQUIRE(count_triangles(g).connected_triples == 1);
    }
    {  // star: C(4,2) triples at the hub
        const auto g = make(5, {{0, 1}, {0, 2}, {0, 3}, {0, 4}});
        REQUIRE(count_triangles(g).connected_triples == 6);
        REQUIRE(count_triangles(g).triangles == 0);
    }

    std::mt19937_64 rng(103);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = 1 + rng() % 12;
        ReplyGraph g;
        g.n = n;
        g.adjacency.resize(n);
        const double p = unit(rng);
        for (std::size_t a = 0; a < n; ++a)
            for (std::size_t b = a + 1; b < n; ++b)
                if (unit(rng) < p) g.add_edge(a, b);

        std::int64_t triangles = 0;
        for (std::size_t a = 0; a < n; ++a)
            for (std::size_t b = a + 1; b < n; ++b)
                for (std::size_t v = b + 1; v < n; ++v)
                    if (g.adjacency[a].count(b) && g.adjacency[a].count(v) &&
                        g.adjacency[b].count(v))
                        ++triangles;
        std::int64_t triples = 0;
        for (std::size_t v = 0; v < n; ++v) {
            const auto d = static_cast<std::int64_t>(g.degree(v));
            triples += d * (d - 1) / 2;
        }
        const auto fast = count_triangles(g);
        REQUIRE(fast.triangles == triangles);
        REQUIRE(fast.connected_triples == triples);
    }
    verdict(3, "triangle counts, 200 random graphs");
}

TEST_CASE("criterion 4: rank correlations and monotone invariance") {
    REQUIRE(*spearman(std::vector<double>{1, 2, 3}, std::vector<double>{1, 3, 2}) == 0.5);
    REQUIRE(std::abs(*kendall_tau(std::vector<double>{1, 2, 3}, std::vector<double>{1, 3, 2}) -
                     1.0 / 3.0) <= 1e-15);

    std::mt19937_64 rng(104);
    std::uniform_real_distribution<double> unit(0.0, 5.0);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t n = 4 + rng() % 50;
        std::vector<double> x(n), y(n), tx(n), ty(n);
        for (std::size_t i = 0; i < n; ++i) {
            x[i] = unit(rng);
            y[i] = unit(rng);
            tx[i] = std::exp(x[i]);
            ty[i] = std::pow(y[i], 3.0) + 1.0;
        }
        REQUIRE(std::abs(*spearman(x, y) - *spearman(tx, ty)) <= 1e-12);
        REQUIRE(std::abs(*kendall_tau(x, y) - *kendall_tau(tx, ty)) <= 1e-12);
    }
    verdict(4, "rank correlations, 100 vectors");
}

TEST_CASE("criterion 5: logistic regression gradients and limits") {
    const auto start = Clock::now();
    std::mt19937_64 rng(105);
    std::normal_distribution<double> gauss(0.0, 1.0);
    const double eps = 1e-5;
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t n = 4 + rng() % 37, d = 1 + rng() % 10;
        Matrix X(n, std::vector<double>(d));
        std::vector<double> y(n), w(d);
        for (auto& row : X)
            for (auto& v : row) v = gauss(rng);
        for (auto& v : y) v = rng() % 2 == 0 ? 1.0 : -1.0;
        for (auto& v : w) v = 0.4 * gauss(rng);
        const double b = 0.2 * gauss(rng);
        const double lambda = std::pow(10.0, static_cast<double>(static_cast<int>(rng() % 5)) - 3.0);

        std::vector<double> gw;
        double gb = 0;
        detail::logistic_gradient(X, y, w, b, lambda, gw, gb);
        for (std::size_t j = 0; j < d; ++j) {
            auto wp = w, wm = w;
            wp[j] += eps;
            wm[j] -= eps;
            const double numeric = (detail::logistic_loss(X, y, wp, b, lambda) -
                                    detail::logistic_loss(X, y, wm, b, lambda)) /
                                   (2 * eps);
            REQUIRE(std::abs(gw[j] - numeric) / std::max({1.0, std::abs(numeric)}) < 1e-6);
        }
    }

    {  // crushing regularization leaves only the base-rate bias
        Matrix X(40, std::vector<double>(3));
        std::vector<double> y;
        for (auto& row : X)
            for (auto& v : row) v = gauss(rng);
        for (int i = 0; i < 40; ++i) y.push_back(i < 30 ? 1.0 : -1.0);
        const auto model = train_logistic(X, y, 1e6);
        double norm = 0;
        for (double w : model.weights) norm += w * w;
        REQUIRE(std::sqrt(norm) < 1e-3);
        REQUIRE(std::abs(model.bias - std::log(3.0)) < 1e-3);
    }
    {  // separable fixture at tiny lambda
        Matrix X;
        std::vector<double> y;
        for (int i = 0; i < 30; ++i) {
            const double sign = i % 2 == 0 ? 1.0 : -1.0;
            X.push_back({sign * (1.0 + 0.1 * i)});
            y.push_back(sign);
        }
        const auto model = train_logistic(X, y, 1e-6);
        for (std::size_t i = 0; i < X.size(); ++i) REQUIRE((model.score(X[i]) > 0) == (y[i] > 0));
    }
    REQUIRE(seconds_since(start) < 30.0);
    verdict(5, "logistic gradients, 50 instances");
}

TEST_CASE("criterion 6: ranking quality against the pairwise oracle") {
    auto brute = [](const std::vector<double>& scores, const std::vector<int>& labels) {
        double wins = 0, pairs = 0;
        for (std::size_t i = 0; i < scores.size(); ++i) {
            if (labels[i] == 0) continue;
            for (std::size_t j = 0; j < scores.size(); ++j) {
                if (labels[j] != 0) continue;
                pairs += 1;
                wins += scores[i] > scores[j] ? 1.0 : scores[i] == scores[j] ? 0.5 : 0.0;
            }
        }
        return wins / pairs;
    };

    REQUIRE(auc(std::vector<double>{1, 1, 1}, std::vector<int>{1, 0, 1}) == 0.5);

    std::mt19937_64 rng(106);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t n = 4 + rng() % 497;
        std::vector<double> scores(n);
        std::vector<int> labels(n);
        bool both = false;
        while (!both) {
            int pos = 0;
            for (std::size_t i = 0; i < n; ++i) {
                scores[i] = std::round(unit(rng) * 16.0) / 16.0;
                labels[i] = unit(rng) < 0.5 ? 1 : 0;
                pos += labels[i];
            }
            both = pos > 0 && pos < static_cast<int>(n);
        }
        const double a = auc(scores, labels);
        REQUIRE(a == brute(scores, labels));
        std::vector<int> inverted(labels);
        for (auto& l : inverted) l = 1 - l;
        REQUIRE(std::abs(auc(scores, inverted) - (1.0 - a)) <= 1e-12);
    }
    verdict(6, "AUC oracle, 100 score sets");
}

TEST_CASE("criterion 7: planted-signal recovery on a 400-community corpus") {
    const auto start = Clock::now();
    ExperimentConfig ec;
    ec.folds = 5;
    ec.lambda_grid = {1e-3, 1e-1, 1e1};

    for (std::uint64_t seed : {3ull, 4ull, 6ull}) {
        CorpusParams cp;
        cp.n_communities = 400;
        cp.seed = seed;
        const auto corpus = build_corpus(generate_corpus(cp));
        const auto focal = focal_communities(corpus, 2014);
        REQUIRE(focal.size() == 400);

        const auto features = build_feature_table(corpus, focal, 10, default_lexicon());
        const auto success = build_success_table(corpus, focal, 10);
        REQUIRE(features.communities.size() >= 350);

        for (const auto& measure : {std::string("growth_commenters"), std::string("growth_posters")}) {
            const auto& labels = success.labels.labels.at(measure);
            const auto planted = run_experiment(features.values, features.flagged, labels,
                                                features.names, measure, 10, "all", ec, seed);
            INFO("seed " << seed << " " << measure << " planted AUC " << planted.auc);
            REQUIRE(planted.auc > 0.85);

            std::vector<int> shuffled(labels);
            std::mt19937_64 label_rng(seed * 7919 + 13);
            std::shuffle(shuffled.begin(), shuffled.end(), label_rng);
            const auto null_run = run_experiment(features.values, features.flagged, shuffled,
                                                 features.names, measure, 10, "all", ec, seed);
            INFO("seed " << seed << " " << measure << " shuffled AUC " << null_run.auc);
            REQUIRE(null_run.auc >= 0.45);
            REQUIRE(null_run.auc <= 0.55);
        }
    }
    REQUIRE(seconds_since(start) < 300.0);
    verdict(7, "planted-signal recovery, 3 seeds");
}

namespace {

int run_cli(const std::string& cli, const std::string& args) {
    const std::string cmd = cli + " " + args + " >/dev/null 2>&1";
    return std::system(cmd.c_str());
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

TEST_CASE("criterion 8: byte-identical reports across two full pipeline runs") {
    const char* cli_env = std::getenv("CS_CLI");
    REQUIRE(cli_env != nullptr);
    const std::string cli(cli_env);

    const auto base = fs::temp_directory_path() / "commsuccess_acceptance";
    fs::remove_all(base);
    fs::create_directories(base);
    const auto data = base / "data";
    REQUIRE(run_cli(cli, "synth --out-dir " + data.string() + " --communities 25 --corpus-seed 3") == 0);

    for (const std::string run : {"one", "two"}) {
        const auto dir = base / run;
        const std::string ks = " --k-min 10 --k-max 30 --k-step 10 --seed 4 ";
        REQUIRE(run_cli(cli, "ingest --posts " + (data / "posts.ndjson").string() + " --comments " +
                                 (data / "comments.ndjson").string() + " --out-dir " +
                                 (dir / "ckpt").string()) == 0);
        REQUIRE(run_cli(cli, ks + "features --checkpoint " + (dir / "ckpt").string() +
                                 " --out-dir " + (dir / "features").string()) == 0);
        REQUIRE(run_cli(cli, ks + "labels --checkpoint " + (dir / "ckpt").string() + " --out-dir " +
                                 (dir / "labels").string()) == 0);
        REQUIRE(run_cli(cli, ks + "correlate --labels-dir " + (dir / "labels").string() +
                                 " --out-dir " + (dir / "corr").string()) == 0);
        REQUIRE(run_cli(cli, ks + "experiments --features-dir " + (dir / "features").string() +
                                 " --labels-dir " + (dir / "labels").string() + " --out-dir " +
                                 (dir / "exp").string()) == 0);
        REQUIRE(run_cli(cli, "report --experiments-dir " + (dir / "exp").string() +
                                 " --correlations-dir " + (dir / "corr").string() + " --out-dir " +
                                 (dir / "report").string()) == 0);
    }

    for (const std::string name :
         {"report_auc_summary.csv", "report_top_features.csv", "report_correlations.csv"}) {
        const auto a = slurp(base / "one" / "report" / name);
        REQUIRE(a == slurp(base / "two" / "report" / name));
        REQUIRE_FALSE(a.empty());
    }
    fs::remove_all(base);
    verdict(8, "deterministic pipeline reports");
}

TEST_CASE("criterion 9: qualifying-community count is non-increasing in k") {
    CorpusParams cp;
    cp.n_communities = 120;
    cp.seed = 6;
    const auto corpus = build_corpus(generate_corpus(cp));
    const auto focal = focal_communities(corpus, 2014);
    std::size_t previous = focal.size() + 1;
    for (int k = 10; k <= 100; k += 10) {
        const std::size_t count = qualifying_windows(corpus, focal, k).size();
        REQUIRE(count <= previous);
        previous = count;
    }
    REQUIRE(previous < focal.size());  // the sweep actually thins the population
    verdict(9, "qualification monotone in k");
}

TEST_CASE("criterion 10: real-data replication (informational)") {
    const char* posts = std::getenv("CS_REAL_POSTS");
    const char* comments = std::getenv("CS_REAL_COMMENTS");
    if (!posts || !comments) {
        std::cout << "[acceptance] criterion 10 (real-data replication): SKIP "
                     "(set CS_REAL_POSTS and CS_REAL_COMMENTS to enable)\n";
        return;
    }
    // Informational track: run the pipeline via the CLI against the provided
    // dump and leave the reports for manual inspection; no gating assertions.
    const char* cli_env = std::getenv("CS_CLI");
    REQUIRE(cli_env != nullptr);
    const std::string cli(cli_env);
    const auto base = fs::temp_directory_path() / "commsuccess_realdata";
    fs::create_directories(base);
    REQUIRE(run_cli(cli, "ingest --posts " + std::string(posts) + " --comments " +
                             std::string(comments) + " --out-dir " + (base / "ckpt").string()) == 0);
    std::cout << "[acceptance] criterion 10: checkpoint written to " << base.string()
              << "; continue with the features/labels/experiments stages manually\n";
}
