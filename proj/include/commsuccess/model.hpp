#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numeric>
#include <random>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "commsuccess/descriptive.hpp"
#include "commsuccess/errors.hpp"
#include "commsuccess/stats.hpp"

namespace commsuccess {

using Matrix = std::vector<std::vector<double>>;  // row-major, rows = samples

// ---------------------------------------------------------------------------
// Train/test split.
// ---------------------------------------------------------------------------

struct Split {
    std::vector<std::size_t> train;
    std::vector<std::size_t> test;
};

// Deterministic shuffle under seed; train gets floor(fraction * n) rows.
inline Split split_indices(std::size_t n, double fraction, std::uint64_t seed) {
    if (n < 10) throw ConfigError("split: need at least 10 rows");
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::mt19937_64 rng(seed);
    std::shuffle(idx.begin(), idx.end(), rng);
    const auto n_train = static_cast<std::size_t>(std::floor(fraction * static_cast<double>(n)));
    Split s;
    s.train.assign(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(n_train));
    s.test.assign(idx.begin() + static_cast<std::ptrdiff_t>(n_train), idx.end());
    return s;
}

// ---------------------------------------------------------------------------
// Standardization (fit on training data only).
// ---------------------------------------------------------------------------

class Standardizer {
  public:
    void fit(const Matrix& X) {
        if (X.empty()) throw ConfigError("standardizer: empty matrix");
        const std::size_t d = X.front().size();
        means_.assign(d, 0.0);
        scales_.assign(d, 1.0);
        for (std::size_t j = 0; j < d; ++j) {
            std::vector<double> col;
            col.reserve(X.size());
            for (const auto& row : X) col.push_back(row[j]);
            means_[j] = mean(col);
            const double sd = population_std(col);
            scales_[j] = sd > 0.0 ? sd : 1.0;  // zero variance: pass-through centered
        }
    }

    Matrix apply(const Matrix& X) const {
        Matrix out = X;
        for (auto& row : out)
            for (std::size_t j = 0; j < row.size(); ++j) row[j] = (row[j] - means_[j]) / scales_[j];
        return out;
    }

    const std::vector<double>& means() const { return means_; }
    const std::vector<double>& scales() const { return scales_; }

  private:
    std::vector<double> means_, scales_;
};

// ---------------------------------------------------------------------------
// L2-regularized logistic regression.
// ---------------------------------------------------------------------------

struct LogisticModel {
    std::vector<double> weights;
    double bias = 0;
    double lambda = 0;
    int iterations = 0;
    double final_gradient_norm = 0;
    bool converged = false;

    double score(std::span<const double> x) const {
        double z = bias;
        for (std::size_t j = 0; j < weights.size(); ++j) z += weights[j] * x[j];
        return z;
    }
};

namespace detail {

// loss = (1/n) sum log(1 + exp(-y z)) + lambda ||w||^2, bias unpenalized
inline double logistic_loss(const Matrix& X, std::span<const double> y,
                            std::span<const double> w, double b, double lambda) {
    const auto n = static_cast<double>(X.size());
    double loss = 0;
    for (std::size_t i = 0; i < X.size(); ++i) {
        double z = b;
        for (std::size_t j = 0; j < w.size(); ++j) z += w[j] * X[i][j];
        const double m = -y[i] * z;
        // numerically stable log(1 + exp(m))
        loss += m > 0 ? m + std::log1p(std::exp(-m)) : std::log1p(std::exp(m));
    }
    loss /= n;
    for (double wj : w) loss += lambda * wj * wj;
    return loss;
}

inline void logistic_gradient(const Matrix& X, std::span<const double> y,
                              std::span<const double> w, double b, double lambda,
                              std::vector<double>& gw, double& gb) {
    const auto n = static_cast<double>(X.size());
    gw.assign(w.size(), 0.0);
    gb = 0;
    for (std::size_t i = 0; i < X.size(); ++i) {
        double z = b;
        for (std::size_t j = 0; j < w.size(); ++j) z += w[j] * X[i][j];
        // d/dz log(1+exp(-y z)) = -y * sigmoid(-y z)
        const double s = 1.0 / (1.0 + std::exp(y[i] * z));
        const double g = -y[i] * s;
        for (std::size_t j = 0; j < w.size(); ++j) gw[j] += g * X[i][j];
        gb += g;
    }
    for (std::size_t j = 0; j < w.size(); ++j) gw[j] = gw[j] / n + 2.0 * lambda * w[j];
    gb /= n;
}

inline double inf_norm(std::span<const double> v, double extra) {
    double m = std::abs(extra);
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

}  // namespace detail

inline constexpr double kGradientTolerance = 1e-8;
inline constexpr int kMaxIterations = 10000;

// Full-batch preconditioned gradient descent with backtracking (Armijo) line
// search. The diagonal preconditioner uses the curvature upper bound of the
// logistic loss (sigmoid' <= 1/4) plus the penalty curvature, which keeps the
// unpenalized bias moving even when lambda dwarfs the data term. The accepted
// step grows between iterations so the schedule adapts.
inline LogisticModel train_logistic(const Matrix& X, std::span<const double> y, double lambda) {
    if (X.empty() || X.size() != y.size()) throw ConfigError("train_logistic: bad inputs");
    bool has_pos = false, has_neg = false;
    for (double yi : y) {
        if (yi > 0) has_pos = true;
        if (yi < 0) has_neg = true;
    }
    if (!has_pos || !has_neg) throw DegenerateError("train_logistic: single-class labels");

    const std::size_t d = X.front().size();
    LogisticModel model;
    model.lambda = lambda;
    model.weights.assign(d, 0.0);

    const auto n = static_cast<double>(X.size());
    std::vector<double> curvature(d, 0.0);
    for (const auto& row : X)
        for (std::size_t j = 0; j < d; ++j) curvature[j] += row[j] * row[j];
    for (auto& h : curvature) h = 0.25 * h / n + 2.0 * lambda + 1e-12;
    const double curvature_b = 0.25;

    std::vector<double> gw, dir(d), trial_w(d);
    double gb = 0;
    double loss = detail::logistic_loss(X, y, model.weights, model.bias, lambda);
    double step = 1.0;
    for (int iter = 0; iter < kMaxIterations; ++iter) {
        detail::logistic_gradient(X, y, model.weights, model.bias, lambda, gw, gb);
        const double gnorm = detail::inf_norm(gw, gb);
        model.iterations = iter;
        model.final_gradient_norm = gnorm;
        if (gnorm <= kGradientTolerance) {
            model.converged = true;
            return model;
        }
        double decrease = gb * gb / curvature_b;
        for (std::size_t j = 0; j < d; ++j) {
            dir[j] = gw[j] / curvature[j];
            decrease += gw[j] * dir[j];
        }
        const double dir_b = gb / curvature_b;
        // backtracking with Armijo condition
        double trial_loss = 0, trial_b = 0;
        for (;;) {
            for (std::size_t j = 0; j < d; ++j) trial_w[j] = model.weights[j] - step * dir[j];
            trial_b = model.bias - step * dir_b;
            trial_loss = detail::logistic_loss(X, y, trial_w, trial_b, lambda);
            if (trial_loss <= loss - 1e-4 * step * decrease) break;
            step *= 0.5;
            if (step < 1e-18) {
                model.converged = false;
                return model;  // no descent possible at machine precision
            }
        }
        model.weights = trial_w;
        model.bias = trial_b;
        loss = trial_loss;
        step *= 2.0;
    }
    detail::logistic_gradient(X, y, model.weights, model.bias, lambda, gw, gb);
    model.iterations = kMaxIterations;
    model.final_gradient_norm = detail::inf_norm(gw, gb);
    model.converged = model.final_gradient_norm <= kGradientTolerance;
    return model;
}

// ---------------------------------------------------------------------------
// AUC, Mann-Whitney form: ties count 1/2.
// ---------------------------------------------------------------------------

inline double auc(std::span<const double> scores, std::span<const int> labels) {
    if (scores.size() != labels.size() || scores.empty()) throw ConfigError("auc: bad inputs");
    std::size_t n_pos = 0;
    for (int l : labels) n_pos += static_cast<std::size_t>(l != 0);
    const std::size_t n_neg = labels.size() - n_pos;
    if (n_pos == 0 || n_neg == 0) throw DegenerateError("auc: single-class labels");

    const auto ranks = average_ranks(scores);
    double rank_sum_pos = 0;
    for (std::size_t i = 0; i < labels.size(); ++i)
        if (labels[i] != 0) rank_sum_pos += ranks[i];
    const double np = static_cast<double>(n_pos), nn = static_cast<double>(n_neg);
    return (rank_sum_pos - np * (np + 1.0) / 2.0) / (np * nn);
}

// ---------------------------------------------------------------------------
// Cross-validated regularization search.
// ---------------------------------------------------------------------------

inline std::vector<double> default_lambda_grid() {
    // 9 values log-spaced 1e-4 .. 1e4
    std::vector<double> grid;
    for (int e = -4; e <= 4; ++e) grid.push_back(std::pow(10.0, e));
    return grid;
}

// Stratified fold assignment: shuffle each class separately, deal round-robin.
inline std::vector<std::size_t> stratified_folds(std::span<const int> labels, int folds,
                                                 std::uint64_t seed) {
    std::vector<std::size_t> fold_of(labels.size());
    std::mt19937_64 rng(seed);
    for (int cls : {1, 0}) {
        std::vector<std::size_t> idx;
        for (std::size_t i = 0; i < labels.size(); ++i)
            if ((labels[i] != 0) == (cls == 1)) idx.push_back(i);
        std::shuffle(idx.begin(), idx.end(), rng);
        for (std::size_t i = 0; i < idx.size(); ++i)
            fold_of[idx[i]] = i % static_cast<std::size_t>(folds);
    }
    return fold_of;
}

struct GridSearchResult {
    double best_lambda = 0;
    double best_mean_auc = 0;
    int folds_used = 0;
    std::vector<std::string> warnings;
};

// Mean validation AUC per lambda; ties go to the larger lambda. Folds are
// reduced (with a warning) when the minority class is too small to give every
// fold both classes.
inline GridSearchResult cv_grid_search(const Matrix& X, std::span<const int> labels,
                                       std::vector<double> lambdas, int folds, std::uint64_t seed) {
    if (folds < 2) throw ConfigError("cv_grid_search: folds must be >= 2");
    if (lambdas.empty()) throw ConfigError("cv_grid_search: empty lambda grid");
    std::sort(lambdas.begin(), lambdas.end());

    std::size_t n_pos = 0;
    for (int l : labels) n_pos += static_cast<std::size_t>(l != 0);
    const std::size_t minority = std::min(n_pos, labels.size() - n_pos);
    GridSearchResult result;
    if (minority < 2) throw DegenerateError("cv_grid_search: minority class too small");
    if (minority < static_cast<std::size_t>(folds)) {
        result.warnings.push_back("reducing folds from " + std::to_string(folds) + " to " +
                                  std::to_string(minority) + " (minority class size)");
        folds = static_cast<int>(minority);
    }
    result.folds_used = folds;

    const auto fold_of = stratified_folds(labels, folds, seed);
    double best = -1;
    for (double lambda : lambdas) {
        double auc_sum = 0;
        int evaluated = 0;
        for (int f = 0; f < folds; ++f) {
            Matrix train_X, val_X;
            std::vector<double> train_y;
            std::vector<int> val_labels;
            for (std::size_t i = 0; i < labels.size(); ++i) {
                if (fold_of[i] == static_cast<std::size_t>(f)) {
                    val_X.push_back(X[i]);
                    val_labels.push_back(labels[i]);
                } else {
                    train_X.push_back(X[i]);
                    train_y.push_back(labels[i] != 0 ? 1.0 : -1.0);
                }
            }
            const auto model = train_logistic(train_X, train_y, lambda);
            std::vector<double> scores;
            scores.reserve(val_X.size());
            for (const auto& row : val_X) scores.push_back(model.score(row));
            auc_sum += auc(scores, val_labels);
            ++evaluated;
        }
        const double mean_auc = auc_sum / evaluated;
        if (mean_auc >= best) {  // >= so exact ties pick the larger lambda
            best = mean_auc;
            result.best_lambda = lambda;
            result.best_mean_auc = mean_auc;
        }
    }
    return result;
}

// ---------------------------------------------------------------------------
// Experiment orchestration.
// ---------------------------------------------------------------------------

struct ExperimentConfig {
    double split_fraction = 0.8;
    std::vector<double> lambda_grid = default_lambda_grid();
    int folds = 10;
};

struct ExperimentResult {
    std::string measure;
    int k = 0;
    std::string family;  // feature family or "all"
    double auc = 0;
    double lambda = 0;
    std::uint64_t seed = 0;
    std::size_t train_size = 0;
    std::size_t test_size = 0;
    std::vector<std::string> feature_names;
    std::vector<double> weights;  // standardized-space coefficients
    double bias = 0;
    int cv_folds_used = 0;
    std::vector<std::string> warnings;
};

// Flagged (degenerate-input) cells are imputed with the training-set median
// of the unflagged values of that feature.
inline void impute_flagged(Matrix& X, const std::vector<std::vector<bool>>& flagged,
                           std::span<const std::size_t> train_rows) {
    if (X.empty()) return;
    const std::size_t d = X.front().size();
    for (std::size_t j = 0; j < d; ++j) {
        std::vector<double> clean;
        for (std::size_t i : train_rows)
            if (!flagged[i][j]) clean.push_back(X[i][j]);
        const double fill = clean.empty() ? 0.0 : median_of(clean);
        for (std::size_t i = 0; i < X.size(); ++i)
            if (flagged[i][j]) X[i][j] = fill;
    }
}

// split -> impute -> fit standardizer on train -> cv grid search -> refit ->
// test AUC.
inline ExperimentResult run_experiment(Matrix X, const std::vector<std::vector<bool>>& flagged,
                                       const std::vector<int>& labels,
                                       const std::vector<std::string>& feature_names,
                                       const std::string& measure, int k, const std::string& family,
                                       const ExperimentConfig& config, std::uint64_t seed) {
    if (X.size() != labels.size()) throw ConfigError("run_experiment: misaligned inputs");
    const auto split = split_indices(X.size(), config.split_fraction, seed);
    impute_flagged(X, flagged, split.train);

    Matrix train_X, test_X;
    std::vector<int> train_labels, test_labels;
    for (auto i : split.train) {
        train_X.push_back(X[i]);
        train_labels.push_back(labels[i]);
    }
    for (auto i : split.test) {
        test_X.push_back(X[i]);
        test_labels.push_back(labels[i]);
    }

    Standardizer standardizer;
    standardizer.fit(train_X);
    train_X = standardizer.apply(train_X);
    test_X = standardizer.apply(test_X);

    const auto grid = cv_grid_search(train_X, train_labels, config.lambda_grid, config.folds, seed);

    std::vector<double> train_y;
    train_y.reserve(train_labels.size());
    for (int l : train_labels) train_y.push_back(l != 0 ? 1.0 : -1.0);
    const auto model = train_logistic(train_X, train_y, grid.best_lambda);

    std::vector<double> scores;
    scores.reserve(test_X.size());
    for (const auto& row : test_X) scores.push_back(model.score(row));

    ExperimentResult result;
    result.measure = measure;
    result.k = k;
    result.family = family;
    result.auc = auc(scores, test_labels);
    result.lambda = grid.best_lambda;
    result.seed = seed;
    result.train_size = split.train.size();
    result.test_size = split.test.size();
    result.feature_names = feature_names;
    result.weights = model.weights;
    result.bias = model.bias;
    result.cv_folds_used = grid.folds_used;
    result.warnings = grid.warnings;
    return result;
}

}  // namespace commsuccess
