#include "pvlab/population.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

namespace pvlab {

std::string to_string(ThresholdMode mode) {
    return mode == ThresholdMode::Absolute ? "absolute" : "relative";
}

ThresholdMode threshold_mode_from_string(const std::string& s) {
    if (s == "absolute") return ThresholdMode::Absolute;
    if (s == "relative" || s == "relative-margin") return ThresholdMode::RelativeMargin;
    throw std::invalid_argument("unknown threshold mode: " + s);
}

void PopulationConfig::validate() const {
    if (n_voters < 1) throw std::invalid_argument("n_voters must be >= 1");
    if (n_alternatives < 1) throw std::invalid_argument("n_alternatives must be >= 1");
    if (d < 1) throw std::invalid_argument("d must be >= 1");
    if (minority_fraction < 0.0 || minority_fraction > 0.5)
        throw std::invalid_argument("minority_fraction must be in [0, 0.5]");
    if (cluster_density < 0.0 || cluster_density > 1.0)
        throw std::invalid_argument("cluster_density must be in [0, 1]");
    if (absenteeism < 0.0 || absenteeism > 1.0)
        throw std::invalid_argument("absenteeism must be in [0, 1]");
    if (dirichlet_alpha <= 0.0) throw std::invalid_argument("dirichlet_alpha must be > 0");
    if (beta < 0.0) throw std::invalid_argument("beta must be >= 0");
}

std::vector<VoterModel> sample_population(const PopulationConfig& config, Rng& rng) {
    config.validate();
    const int n_minority = static_cast<int>(std::lround(config.minority_fraction * config.n_voters));
    const double p = config.cluster_density;

    const auto majority_centroid = rng.dirichlet(config.dirichlet_alpha, config.d);
    const auto minority_centroid = rng.dirichlet(config.dirichlet_alpha, config.d);

    std::vector<VoterModel> voters(config.n_voters);
    for (int n = 0; n < config.n_voters; ++n) {
        VoterModel& voter = voters[n];
        voter.group = n < config.n_voters - n_minority ? Group::Majority : Group::Minority;
        const auto& centroid =
            voter.group == Group::Majority ? majority_centroid : minority_centroid;
        const auto offset = rng.dirichlet(config.dirichlet_alpha, config.d);
        voter.weights.resize(config.d);
        for (int i = 0; i < config.d; ++i)
            voter.weights[i] = p * centroid[i] + (1.0 - p) * offset[i];
        voter.threshold = config.tau;
        voter.noise_scale = config.beta;
    }
    return voters;
}

Matrix sample_election(const PopulationConfig& config, Rng& rng) {
    Matrix features(config.n_alternatives, config.d);
    for (double& v : features.data) v = rng.uniform();
    return features;
}

ApprovalSet ballot(const VoterModel& voter, const Matrix& features, Rng& rng,
                   ThresholdMode mode) {
    if (features.cols != static_cast<int>(voter.weights.size()))
        throw std::invalid_argument("feature dimension does not match voter weights");
    const int m = features.rows;
    std::vector<double> utility(m);
    for (int j = 0; j < m; ++j) {
        double u = 0.0;
        const double* x = features.row(j);
        for (int i = 0; i < features.cols; ++i) u += x[i] * voter.weights[i];
        if (voter.noise_scale > 0.0) u += rng.normal(0.0, voter.noise_scale);
        utility[j] = u;
    }

    ApprovalSet approved;
    if (mode == ThresholdMode::Absolute) {
        for (int j = 0; j < m; ++j)
            if (utility[j] > voter.threshold) approved.push_back(j);
        return approved;
    }

    const double mean = std::accumulate(utility.begin(), utility.end(), 0.0) / m;
    for (int j = 0; j < m; ++j)
        if (utility[j] > mean + voter.threshold) approved.push_back(j);
    if (approved.empty()) {
        int best = 0;
        for (int j = 1; j < m; ++j)
            if (utility[j] > utility[best]) best = j;
        approved.push_back(best);
    }
    return approved;
}

PresenceMask sample_presence(const PopulationConfig& config, Rng& rng, int n_voters) {
    config.validate();
    PresenceMask mask;
    mask.present.resize(n_voters);
    for (int n = 0; n < n_voters; ++n)
        mask.present[n] = rng.bernoulli(1.0 - config.absenteeism) ? 1 : 0;
    return mask;
}

}  // namespace pvlab
