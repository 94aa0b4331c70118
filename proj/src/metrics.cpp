#include "pvlab/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace pvlab {

double support(const std::vector<ApprovalSet>& profile, int voter, int denominator) {
    if (voter < 0 || voter >= static_cast<int>(profile.size()))
        throw std::out_of_range("voter index out of range");
    if (denominator <= 0) return 0.0;
    int best = 0;
    for (int j : profile[voter]) {
        int count = 0;
        for (const auto& set : profile)
            if (contains(set, j)) ++count;
        best = std::max(best, count);
    }
    return static_cast<double>(best) / denominator;
}

int longest_dry_spell(const VotingRecord& record, int voter) {
    int longest = 0;
    int run = 0;
    for (int t = 0; t < record.n_rounds(); ++t) {
        if (is_satisfied(record, voter, t)) {
            run = 0;
        } else {
            ++run;
            longest = std::max(longest, run);
        }
    }
    return longest + 1;
}

std::vector<double> influence(const VotingRecord& record) {
    std::vector<double> infl(record.n_voters(), 0.0);
    for (const Round& round : record.rounds) {
        std::vector<int> approvers;
        for (int n = 0; n < round.election.n_voters(); ++n)
            if (contains(round.election.true_approvals[n], round.winner)) approvers.push_back(n);
        if (approvers.empty()) continue;
        const double share = 1.0 / approvers.size();
        for (int n : approvers) infl[n] += share;
    }
    return infl;
}

double gini(const std::vector<double>& values) {
    const std::size_t n = values.size();
    if (n == 0) return 0.0;
    const double mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
    if (mean <= 0.0) return 0.0;
    // O(n log n) via the sorted form of the pairwise double sum
    std::vector<double> sorted = values;
    std::sort(sorted.begin(), sorted.end());
    double weighted = 0.0;
    for (std::size_t i = 0; i < n; ++i) weighted += (2.0 * (i + 1) - n - 1.0) * sorted[i];
    return weighted / (mean * n * n);
}

double gini_influence(const VotingRecord& record) { return gini(influence(record)); }

QuotaCompliance quota_compliance(const VotingRecord& record) {
    const int n_voters = record.n_voters();
    const int T = record.n_rounds();
    if (n_voters == 0 || T == 0) return {};

    std::vector<double> qu(n_voters, 0.0);
    std::vector<int> sat(n_voters, 0);
    long lower_ok = 0;
    long upper_ok = 0;
    for (int t = 0; t < T; ++t) {
        const auto& profile = record.rounds[t].election.true_approvals;
        for (int n = 0; n < n_voters; ++n) {
            qu[n] += support(profile, n, n_voters);
            if (is_satisfied(record, n, t)) ++sat[n];
            if (sat[n] >= std::floor(qu[n])) ++lower_ok;
            if (sat[n] <= std::ceil(qu[n])) ++upper_ok;
        }
    }
    const double total = static_cast<double>(n_voters) * T;
    QuotaCompliance out;
    out.lqc = lower_ok / total;
    out.uqc = upper_ok / total;
    out.lqnc = 1.0 - out.lqc;
    out.uqnc = 1.0 - out.uqc;
    out.qc = 1.0 - out.lqnc - out.uqnc;
    return out;
}

double overlap(const std::vector<int>& winners_delegate, const std::vector<int>& winners_full,
               const std::vector<int>& winners_partial) {
    const std::size_t k = winners_delegate.size();
    if (k == 0 || winners_full.size() != k || winners_partial.size() != k)
        throw std::invalid_argument("overlap requires equal nonzero-length winner sequences");
    std::size_t matches = 0;
    for (std::size_t t = 0; t < k; ++t)
        if (winners_delegate[t] == winners_full[t] || winners_delegate[t] == winners_partial[t])
            ++matches;
    return static_cast<double>(matches) / k;
}

FairnessReport evaluate_fairness(const VotingRecord& record) {
    FairnessReport report;
    const int n_voters = record.n_voters();
    report.longest_dry_spell.resize(n_voters);
    double ds_sum = 0.0;
    for (int n = 0; n < n_voters; ++n) {
        report.longest_dry_spell[n] = longest_dry_spell(record, n);
        report.longest_dry_spell_max = std::max(report.longest_dry_spell_max,
                                                report.longest_dry_spell[n]);
        ds_sum += report.longest_dry_spell[n];
    }
    report.longest_dry_spell_mean = n_voters ? ds_sum / n_voters : 0.0;
    report.per_voter_influence = influence(record);
    report.mean_influence =
        n_voters ? std::accumulate(report.per_voter_influence.begin(),
                                   report.per_voter_influence.end(), 0.0) / n_voters
                 : 0.0;
    report.gini_influence = gini(report.per_voter_influence);
    report.quota = quota_compliance(record);
    return report;
}

}  // namespace pvlab
