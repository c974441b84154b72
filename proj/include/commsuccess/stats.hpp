#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "commsuccess/errors.hpp"

namespace commsuccess {

// Average (fractional) ranks, 1-based; ties get the mean rank.
inline std::vector<double> average_ranks(std::span<const double> x) {
    const std::size_t n = x.size();
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return x[a] < x[b]; });
    std::vector<double> ranks(n);
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && x[order[j + 1]] == x[order[i]]) ++j;
        const double rank = 0.5 * (static_cast<double>(i + 1) + static_cast<double>(j + 1));
        for (std::size_t t = i; t <= j; ++t) ranks[order[t]] = rank;
        i = j + 1;
    }
    return ranks;
}

inline std::optional<double> pearson(std::span<const double> x, std::span<const double> y) {
    const auto n = static_cast<double>(x.size());
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0, syy = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double dx = x[i] - mx, dy = y[i] - my;
        sxx += dx * dx;
        syy += dy * dy;
        sxy += dx * dy;
    }
    if (sxx == 0.0 || syy == 0.0) return std::nullopt;
    return sxy / std::sqrt(sxx * syy);
}

// Spearman's rho: Pearson correlation of average-ranked values. Zero rank
// variance in either vector is degenerate (nullopt).
inline std::optional<double> spearman(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.size() < 2) throw ConfigError("spearman: need |x| = |y| >= 2");
    const auto rx = average_ranks(x);
    const auto ry = average_ranks(y);
    return pearson(rx, ry);
}

// Kendall's tau-b with tie correction.
inline std::optional<double> kendall_tau(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.size() < 2) throw ConfigError("kendall_tau: need |x| = |y| >= 2");
    const std::size_t n = x.size();
    long long concordant = 0, discordant = 0, ties_x = 0, ties_y = 0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const double dx = x[i] - x[j], dy = y[i] - y[j];
            if (dx == 0 && dy == 0) continue;
            if (dx == 0) {
                ++ties_x;
            } else if (dy == 0) {
                ++ties_y;
            } else if ((dx > 0) == (dy > 0)) {
                ++concordant;
            } else {
                ++discordant;
            }
        }
    }
    const double n0 = static_cast<double>(n) * (static_cast<double>(n) - 1.0) / 2.0;
    // pairs tied in both count toward the tie terms of each variable
    long long tied_both = static_cast<long long>(n0) - concordant - discordant - ties_x - ties_y;
    const double nx = n0 - static_cast<double>(ties_x + tied_both);
    const double ny = n0 - static_cast<double>(ties_y + tied_both);
    if (nx <= 0 || ny <= 0) return std::nullopt;
    return static_cast<double>(concordant - discordant) / std::sqrt(nx * ny);
}

enum class CorrelationMethod { Spearman, Kendall };

inline const char* method_name(CorrelationMethod m) {
    return m == CorrelationMethod::Spearman ? "spearman" : "kendall";
}

struct CorrelationMatrix {
    std::vector<std::string> names;
    CorrelationMethod method = CorrelationMethod::Spearman;
    int k = 0;
    // entries[i][j]; nullopt marks degenerate (zero-variance) pairs
    std::vector<std::vector<std::optional<double>>> entries;
    std::vector<std::string> diagnostics;
};

// All pairwise correlations between the named columns (aligned value
// vectors). Degenerate pairs are excluded-with-flag, never silently zero.
inline CorrelationMatrix correlation_matrix(const std::vector<std::string>& names,
                                            const std::vector<std::vector<double>>& columns,
                                            CorrelationMethod method, int k = 0) {
    if (names.size() != columns.size()) throw ConfigError("correlation_matrix: misaligned inputs");
    if (!columns.empty() && columns.front().size() < 2)
        throw ConfigError("correlation_matrix: need >= 2 rows");
    CorrelationMatrix m;
    m.names = names;
    m.method = method;
    m.k = k;
    const std::size_t n = names.size();
    m.entries.assign(n, std::vector<std::optional<double>>(n));
    for (std::size_t i = 0; i < n; ++i) {
        m.entries[i][i] = 1.0;
        for (std::size_t j = i + 1; j < n; ++j) {
            const auto c = method == CorrelationMethod::Spearman
                               ? spearman(columns[i], columns[j])
                               : kendall_tau(columns[i], columns[j]);
            if (!c)
                m.diagnostics.push_back("degenerate correlation: " + names[i] + " vs " + names[j]);
            m.entries[i][j] = c;
            m.entries[j][i] = c;
        }
    }
    return m;
}

// ---------------------------------------------------------------------------
// Mean-reciprocal-rank feature importance across the k sweep.
// ---------------------------------------------------------------------------

struct RankedFeature {
    std::string name;
    double mrr = 0;
    double mean_coefficient = 0;
};

// Each per-k entry maps feature -> standardized coefficient. Features are
// ranked per k by descending |coefficient| (rank 1 = largest magnitude, ties
// by name for determinism); MRR is the mean of reciprocal ranks over k.
inline std::vector<RankedFeature> mrr_ranking(
    const std::vector<std::map<std::string, double>>& per_k_coefficients) {
    if (per_k_coefficients.empty()) throw ConfigError("mrr_ranking: no rankings supplied");
    const auto& reference = per_k_coefficients.front();
    std::map<std::string, double> rr_sum, coef_sum;
    for (const auto& coefs : per_k_coefficients) {
        if (coefs.size() != reference.size())
            throw ConfigError("mrr_ranking: inconsistent feature sets");
        std::vector<std::pair<std::string, double>> ordered;
        for (const auto& [name, coef] : coefs) {
            if (!reference.count(name)) throw ConfigError("mrr_ranking: inconsistent feature sets");
            ordered.emplace_back(name, coef);
        }
        std::sort(ordered.begin(), ordered.end(), [](const auto& a, const auto& b) {
            const double ma = std::abs(a.second), mb = std::abs(b.second);
            if (ma != mb) return ma > mb;
            return a.first < b.first;
        });
        for (std::size_t rank = 0; rank < ordered.size(); ++rank) {
            rr_sum[ordered[rank].first] += 1.0 / static_cast<double>(rank + 1);
            coef_sum[ordered[rank].first] += ordered[rank].second;
        }
    }
    const auto n = static_cast<double>(per_k_coefficients.size());
    std::vector<RankedFeature> out;
    for (const auto& [name, sum] : rr_sum)
        out.push_back({name, sum / n, coef_sum[name] / n});
    std::sort(out.begin(), out.end(), [](const RankedFeature& a, const RankedFeature& b) {
        if (a.mrr != b.mrr) return a.mrr > b.mrr;
        return a.name < b.name;
    });
    return out;
}

}  // namespace commsuccess
