#pragma once

#include <algorithm>
#include <cstdint>
#include <set>
#include <utility>
#include <vector>

#include "commsuccess/feature_vector.hpp"
#include "commsuccess/window_view.hpp"

namespace commsuccess {

// Undirected simple graph over the k early members. Isolated members are
// nodes; no self-loops, no duplicate edges.
struct ReplyGraph {
    std::size_t n = 0;
    std::vector<std::set<std::size_t>> adjacency;
    std::size_t dangling_parents = 0;

    void add_edge(std::size_t a, std::size_t b) {
        if (a == b) return;
        adjacency[a].insert(b);
        adjacency[b].insert(a);
    }

    std::size_t edge_count() const {
        std::size_t deg_sum = 0;
        for (const auto& adj : adjacency) deg_sum += adj.size();
        return deg_sum / 2;
    }

    std::size_t degree(std::size_t v) const { return adjacency[v].size(); }
};

// Edge {a, b} when a member's comment replies to another member's event in
// the window. Replies to sentinel authors or out-of-window parents contribute
// nothing.
inline ReplyGraph build_reply_graph(const WindowView& view) {
    const EarlyWindow& w = view.window;
    ReplyGraph g;
    g.n = w.members.size();
    g.adjacency.resize(g.n);
    for (std::size_t ci : view.comment_indices) {
        const Event& comment = w.events[ci];
        auto commenter = view.member_index.find(comment.author);
        auto parent = view.resolve_parent(ci);
        if (!parent) {
            ++g.dangling_parents;
            continue;
        }
        if (commenter == view.member_index.end()) continue;  // sentinel commenter
        const Event& target = w.events[*parent];
        auto target_member = view.member_index.find(target.author);
        if (target_member == view.member_index.end()) continue;
        g.add_edge(commenter->second, target_member->second);
    }
    return g;
}

struct TriangleCounts {
    std::int64_t triangles = 0;        // each triangle counted once
    std::int64_t connected_triples = 0;  // sum over v of C(deg(v), 2)
};

inline TriangleCounts count_triangles(const ReplyGraph& g) {
    TriangleCounts c;
    for (std::size_t v = 0; v < g.n; ++v) {
        const auto d = static_cast<std::int64_t>(g.degree(v));
        c.connected_triples += d * (d - 1) / 2;
        for (auto it = g.adjacency[v].begin(); it != g.adjacency[v].end(); ++it)
            for (auto jt = std::next(it); jt != g.adjacency[v].end(); ++jt)
                if (g.adjacency[*it].count(*jt)) ++c.triangles;
    }
    c.triangles /= 3;  // each triangle seen from all three corners
    return c;
}

// Global clustering: 3 * triangles / connected triples.
inline double transitivity(const ReplyGraph& g, bool* degenerate = nullptr) {
    const auto c = count_triangles(g);
    if (degenerate) *degenerate = (c.connected_triples == 0);
    if (c.connected_triples == 0) return 0.0;
    return 3.0 * static_cast<double>(c.triangles) / static_cast<double>(c.connected_triples);
}

// Mean over nodes of local clustering; degree < 2 contributes 0.
inline double average_clustering(const ReplyGraph& g) {
    if (g.n == 0) return 0.0;
    double sum = 0;
    for (std::size_t v = 0; v < g.n; ++v) {
        const auto d = static_cast<std::int64_t>(g.degree(v));
        if (d < 2) continue;
        std::int64_t links = 0;
        for (auto it = g.adjacency[v].begin(); it != g.adjacency[v].end(); ++it)
            for (auto jt = std::next(it); jt != g.adjacency[v].end(); ++jt)
                if (g.adjacency[*it].count(*jt)) ++links;
        sum += 2.0 * static_cast<double>(links) / static_cast<double>(d * (d - 1));
    }
    return sum / static_cast<double>(g.n);
}

inline std::vector<std::size_t> component_sizes(const ReplyGraph& g) {
    std::vector<std::size_t> sizes;
    std::vector<bool> visited(g.n, false);
    std::vector<std::size_t> stack;
    for (std::size_t start = 0; start < g.n; ++start) {
        if (visited[start]) continue;
        std::size_t size = 0;
        stack.push_back(start);
        visited[start] = true;
        while (!stack.empty()) {
            const auto v = stack.back();
            stack.pop_back();
            ++size;
            for (auto u : g.adjacency[v])
                if (!visited[u]) {
                    visited[u] = true;
                    stack.push_back(u);
                }
        }
        sizes.push_back(size);
    }
    return sizes;
}

inline void graph_features(const ReplyGraph& g, const WindowView& view, FeatureVector& out) {
    const auto family = FeatureFamily::Social;
    const auto n = static_cast<double>(g.n);

    bool flag = false;
    const double trans = transitivity(g, &flag);
    out.add(family, "transitivity", trans, flag);
    out.add(family, "avg_clustering", average_clustering(g));
    if (g.n < 2) {
        out.add(family, "density", 0.0, /*flag=*/true);
    } else {
        out.add(family, "density", 2.0 * static_cast<double>(g.edge_count()) / (n * (n - 1.0)));
    }

    const auto sizes = component_sizes(g);
    std::size_t largest = 0, singletons = 0;
    for (auto s : sizes) {
        largest = std::max(largest, s);
        if (s == 1) ++singletons;
    }
    out.add(family, "largest_component_fraction", g.n == 0 ? 0.0 : static_cast<double>(largest) / n);
    out.add(family, "singleton_fraction", g.n == 0 ? 0.0 : static_cast<double>(singletons) / n);

    auto replied_fraction = [&](const std::vector<std::size_t>& idx) {
        std::size_t replied = 0;
        for (std::size_t i : idx) replied += view.direct_replies[i] > 0;
        return static_cast<double>(replied) / static_cast<double>(idx.size());
    };
    if (view.post_indices.empty())
        out.add(family, "frac_posts_replied", 0.0, /*flag=*/true);
    else
        out.add(family, "frac_posts_replied", replied_fraction(view.post_indices));
    if (view.comment_indices.empty())
        out.add(family, "frac_comments_replied", 0.0, /*flag=*/true);
    else
        out.add(family, "frac_comments_replied", replied_fraction(view.comment_indices));
}

}  // namespace commsuccess
