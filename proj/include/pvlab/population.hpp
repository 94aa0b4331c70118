#pragma once

#include <string>
#include <vector>

#include "pvlab/core.hpp"
#include "pvlab/rng.hpp"

namespace pvlab {

enum class ThresholdMode { Absolute, RelativeMargin };

std::string to_string(ThresholdMode mode);
ThresholdMode threshold_mode_from_string(const std::string& s);

enum class Group : std::uint8_t { Majority, Minority };

struct VoterModel {
    std::vector<double> weights;  // on the d-simplex
    double threshold = 0.05;
    double noise_scale = 0.01;
    Group group = Group::Majority;
};

struct PopulationConfig {
    int n_voters = 20;
    double minority_fraction = 0.3;
    double cluster_density = 0.5;
    double dirichlet_alpha = 0.2;
    int d = 5;
    double tau = 0.05;
    double beta = 0.01;
    int n_alternatives = 5;
    double absenteeism = 0.5;
    ThresholdMode threshold_mode = ThresholdMode::RelativeMargin;

    void validate() const;
};

/// Two Dirichlet centroids (majority, minority); each voter blends their
/// group centroid with an independent Dirichlet offset at the cluster
/// density p. Majority voters come first.
std::vector<VoterModel> sample_population(const PopulationConfig& config, Rng& rng);

/// m x d feature matrix, entries i.i.d. uniform on [0,1].
Matrix sample_election(const PopulationConfig& config, Rng& rng);

/// Noisy random-utility ballot. Utilities are dot(features_j, W) plus
/// independent Normal(0, beta) noise per alternative. Absolute mode approves
/// utilities strictly above tau; relative-margin mode approves utilities
/// strictly above the round mean plus tau, falling back to the argmax so the
/// ballot is never empty.
ApprovalSet ballot(const VoterModel& voter, const Matrix& features, Rng& rng,
                   ThresholdMode mode);

/// Each voter independently present with probability 1 - absenteeism.
PresenceMask sample_presence(const PopulationConfig& config, Rng& rng, int n_voters);

}  // namespace pvlab
