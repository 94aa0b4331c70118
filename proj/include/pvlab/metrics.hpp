#pragma once

#include <vector>

#include "pvlab/core.hpp"

namespace pvlab {

struct QuotaCompliance {
    double lqc = 0.0;
    double uqc = 0.0;
    double qc = 0.0;
    double lqnc = 0.0;
    double uqnc = 0.0;
};

struct FairnessReport {
    std::vector<int> longest_dry_spell;  // per voter
    int longest_dry_spell_max = 0;
    double longest_dry_spell_mean = 0.0;
    std::vector<double> per_voter_influence;
    double mean_influence = 0.0;
    double gini_influence = 0.0;
    QuotaCompliance quota;
};

/// Eq. 1 support: (1/denominator) * max over the voter's approved
/// alternatives of the number of voters approving it; 0 on an empty set.
/// A zero denominator (degenerate round) yields 0.
double support(const std::vector<ApprovalSet>& profile, int voter, int denominator);

/// Longest stretch without an approved winner, with virtual satisfied rounds
/// at both ends: (longest run of unsatisfied rounds) + 1. Always >= 1; a
/// never-satisfied voter over T rounds scores T + 1.
int longest_dry_spell(const VotingRecord& record, int voter);

/// Per-round influence 1/|approvers of winner| summed over rounds where the
/// voter approved the winner (ground truth).
std::vector<double> influence(const VotingRecord& record);

/// Gini coefficient of a nonnegative vector; 0 when the mean is 0.
double gini(const std::vector<double>& values);

double gini_influence(const VotingRecord& record);

/// LQC/UQC/QC/LQNC/UQNC over the whole record, ground-truth approvals,
/// denominator |N|.
QuotaCompliance quota_compliance(const VotingRecord& record);

/// Fraction of rounds where the delegated winner equals the full-turnout or
/// the partial-turnout winner.
double overlap(const std::vector<int>& winners_delegate, const std::vector<int>& winners_full,
               const std::vector<int>& winners_partial);

FairnessReport evaluate_fairness(const VotingRecord& record);

}  // namespace pvlab
