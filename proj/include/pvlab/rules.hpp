#pragma once

#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "pvlab/core.hpp"

namespace pvlab {

enum class RuleId { Av, Phragmen, Consensus, Quota };

enum class ParticipationMode { Full, Partial, Delegated };

std::string to_string(RuleId rule);
std::string to_string(ParticipationMode mode);
RuleId rule_from_string(const std::string& s);
ParticipationMode mode_from_string(const std::string& s);

/// Plain approval voting: argmax of approval counts, ties to lowest index.
int select_av(const VisibleProfile& profile);

struct PhragmenScore {
    double score;
    std::vector<int> minimizing_set;  // voter indices
};

/// min over nonempty subsets S of approvers of (sum of loads in S + 1)/|S|.
/// The optimum is a prefix of the approvers sorted ascending by load; the
/// brute-force subset oracle in the tests gates this.
std::optional<PhragmenScore> phragmen_score(const std::vector<double>& loads,
                                            const std::vector<int>& approvers);

class PhragmenEngine {
  public:
    explicit PhragmenEngine(int n_voters) : loads_(n_voters, 0.0) {}

    int select(const VisibleProfile& profile);

    const std::vector<double>& loads() const { return loads_; }

  private:
    std::vector<double> loads_;
};

class ConsensusEngine {
  public:
    explicit ConsensusEngine(int n_voters) : weights_(n_voters, 1.0) {}

    int select(const VisibleProfile& profile);

    const std::vector<double>& weights() const { return weights_; }

  private:
    std::vector<double> weights_;
};

class QuotaEngine {
  public:
    explicit QuotaEngine(int n_voters)
        : cumulative_quota_(n_voters, 0.0), cumulative_satisfaction_(n_voters, 0) {}

    int select(const VisibleProfile& profile, const PresenceMask& presence,
               ParticipationMode mode);

    const std::vector<double>& cumulative_quota() const { return cumulative_quota_; }
    const std::vector<int>& cumulative_satisfaction() const { return cumulative_satisfaction_; }

  private:
    std::vector<double> cumulative_quota_;
    std::vector<int> cumulative_satisfaction_;
};

}  // namespace pvlab
