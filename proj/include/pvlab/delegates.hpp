#pragma once

#include <vector>

#include "pvlab/core.hpp"
#include "pvlab/population.hpp"

namespace pvlab {

/// One row per (attended round, alternative): feature vector and whether the
/// voter approved it. In relative-margin mode rows hold round-centered
/// features so the threshold rule is expressible by a single hyperplane.
struct TrainingSet {
    int dim = 0;
    std::vector<double> features;       // row-major, size() * dim
    std::vector<std::uint8_t> labels;

    std::size_t size() const { return labels.size(); }
    const double* row(std::size_t r) const { return features.data() + r * dim; }
};

/// Appends one attended round's alternatives to the voter's training data.
void append_round(TrainingSet& data, const Matrix& features, const ApprovalSet& approvals,
                  ThresholdMode mode);

struct LearnedPreference {
    std::vector<double> weights_hat;  // on the simplex
    double threshold_hat = 0.0;
    bool converged = false;
    double final_objective = 0.0;
};

struct LearnerConfig {
    int max_iters = 500;
    double grad_tol = 1e-6;
    bool refit_every_absence = true;
};

/// Simplex-constrained logistic log-likelihood
///   sum_r y log sigma(<x,W> - tau) + (1-y) log(1 - sigma(<x,W> - tau)),
/// log arguments clamped below at 1e-12. Returns 0 on empty data.
double log_likelihood(const std::vector<double>& weights, double threshold,
                      const TrainingSet& data);

/// Analytic gradient of log_likelihood with respect to (weights, threshold).
void log_likelihood_grad(const std::vector<double>& weights, double threshold,
                         const TrainingSet& data, std::vector<double>& grad_w,
                         double& grad_tau);

/// Euclidean projection onto {w >= 0, sum w = 1} (sort-and-threshold).
std::vector<double> simplex_project(const std::vector<double>& v);

/// Maximizes the logistic likelihood by projected gradient ascent with
/// Armijo backtracking over scaled nonnegative weights and a free intercept
/// (a learnable slope on the simplex model); the reported weights are the
/// simplex normalization and the threshold the matching rescaled intercept,
/// so the approval rule <x, W> >= tau is unchanged. Degenerate data (empty
/// or single-class) yields uniform weights with tau = -10 (approve all) or
/// +10 (approve none).
LearnedPreference fit(const TrainingSet& data, const LearnerConfig& config = {});

/// Per-iteration objective values of an otherwise identical fit; test hook
/// for the monotone line-search property.
std::vector<double> fit_objective_trace(const TrainingSet& data,
                                        const LearnerConfig& config = {});

/// Predicted approval set. Thresholds at or beyond +/-9.5 short-circuit to
/// the empty/full set (degenerate-fit sentinels). Relative-margin mode
/// centers features per round and keeps the ballot nonempty via argmax, the
/// same generative rule the population uses.
ApprovalSet predict(const LearnedPreference& pref, const Matrix& features, ThresholdMode mode);

}  // namespace pvlab
