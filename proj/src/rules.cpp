#include "pvlab/rules.hpp"

#include <algorithm>
#include <stdexcept>

namespace pvlab {

std::string to_string(RuleId rule) {
    switch (rule) {
        case RuleId::Av: return "av";
        case RuleId::Phragmen: return "phragmen";
        case RuleId::Consensus: return "consensus";
        case RuleId::Quota: return "quota";
    }
    return "?";
}

std::string to_string(ParticipationMode mode) {
    switch (mode) {
        case ParticipationMode::Full: return "full";
        case ParticipationMode::Partial: return "partial";
        case ParticipationMode::Delegated: return "delegated";
    }
    return "?";
}

RuleId rule_from_string(const std::string& s) {
    if (s == "av") return RuleId::Av;
    if (s == "phragmen") return RuleId::Phragmen;
    if (s == "consensus") return RuleId::Consensus;
    if (s == "quota") return RuleId::Quota;
    throw std::invalid_argument("unknown rule: " + s);
}

ParticipationMode mode_from_string(const std::string& s) {
    if (s == "full") return ParticipationMode::Full;
    if (s == "partial") return ParticipationMode::Partial;
    if (s == "delegated") return ParticipationMode::Delegated;
    throw std::invalid_argument("unknown mode: " + s);
}

namespace {

std::vector<int> approval_counts(const VisibleProfile& profile) {
    std::vector<int> counts(profile.n_alternatives, 0);
    for (const auto& set : profile.approvals)
        for (int j : set) ++counts[j];
    return counts;
}

}  // namespace

int select_av(const VisibleProfile& profile) {
    if (profile.n_alternatives < 1) throw std::invalid_argument("no alternatives");
    const auto counts = approval_counts(profile);
    int best = 0;
    for (int j = 1; j < profile.n_alternatives; ++j)
        if (counts[j] > counts[best]) best = j;
    return best;
}

std::optional<PhragmenScore> phragmen_score(const std::vector<double>& loads,
                                            const std::vector<int>& approvers) {
    if (approvers.empty()) return std::nullopt;
    std::vector<int> order = approvers;
    std::sort(order.begin(), order.end(),
              [&](int a, int b) { return loads[a] < loads[b] || (loads[a] == loads[b] && a < b); });
    double prefix_sum = 0.0;
    double best = std::numeric_limits<double>::infinity();
    int best_len = 0;
    for (int k = 0; k < static_cast<int>(order.size()); ++k) {
        prefix_sum += loads[order[k]];
        double score = (prefix_sum + 1.0) / (k + 1);
        if (score < best) {
            best = score;
            best_len = k + 1;
        }
    }
    return PhragmenScore{best, std::vector<int>(order.begin(), order.begin() + best_len)};
}

int PhragmenEngine::select(const VisibleProfile& profile) {
    if (profile.n_alternatives < 1) throw std::invalid_argument("no alternatives");
    std::vector<std::vector<int>> approvers(profile.n_alternatives);
    for (int n = 0; n < profile.n_voters(); ++n)
        for (int j : profile.approvals[n]) approvers[j].push_back(n);

    int winner = 0;
    std::optional<PhragmenScore> winning;
    for (int j = 0; j < profile.n_alternatives; ++j) {
        auto s = phragmen_score(loads_, approvers[j]);
        if (!s) continue;  // unapproved alternatives rank below all approved ones
        if (!winning || s->score < winning->score) {
            winning = std::move(s);
            winner = j;
        }
    }
    if (winning)
        for (int n : winning->minimizing_set) loads_[n] = winning->score;
    return winner;
}

int ConsensusEngine::select(const VisibleProfile& profile) {
    if (profile.n_alternatives < 1) throw std::invalid_argument("no alternatives");
    const int n_voters = profile.n_voters();

    int winner = 0;
    double best_sum = 0.0;
    bool found = false;
    std::vector<int> winner_positive;
    for (int j = 0; j < profile.n_alternatives; ++j) {
        double sum = 0.0;
        std::vector<int> positive;
        for (int n = 0; n < n_voters; ++n) {
            if (weights_[n] > 0.0 && contains(profile.approvals[n], j)) {
                sum += weights_[n];
                positive.push_back(n);
            }
        }
        if (positive.empty()) continue;
        if (!found || sum > best_sum) {
            found = true;
            best_sum = sum;
            winner = j;
            winner_positive = std::move(positive);
        }
    }

    if (winner_positive.empty()) {
        // N+ empty everywhere: every weight grows by the base increment
        for (double& w : weights_) w += 1.0;
        return winner;
    }
    const double penalty = static_cast<double>(n_voters) / winner_positive.size();
    std::size_t k = 0;
    for (int n = 0; n < n_voters; ++n) {
        if (k < winner_positive.size() && winner_positive[k] == n) {
            weights_[n] += 1.0 - penalty;
            ++k;
        } else {
            weights_[n] += 1.0;
        }
    }
    return winner;
}

int QuotaEngine::select(const VisibleProfile& profile, const PresenceMask& presence,
                        ParticipationMode mode) {
    if (profile.n_alternatives < 1) throw std::invalid_argument("no alternatives");
    const int n_voters = profile.n_voters();
    const auto counts = approval_counts(profile);

    // Support denominator: voters whose ballots are visible this round.
    // Full and delegated modes see all |N| ballots; partial sees present ones.
    int denominator = n_voters;
    if (mode == ParticipationMode::Partial) denominator = presence.count_present();

    for (int n = 0; n < n_voters; ++n) {
        double support = 0.0;
        if (denominator > 0) {
            int best = 0;
            for (int j : profile.approvals[n]) best = std::max(best, counts[j]);
            support = static_cast<double>(best) / denominator;
        }
        cumulative_quota_[n] += support;
    }

    int winner = 0;
    double best_score = -1.0;
    int best_count = -1;
    for (int j = 0; j < profile.n_alternatives; ++j) {
        double score = 0.0;
        for (int n = 0; n < n_voters; ++n)
            if (contains(profile.approvals[n], j))
                score += std::max(0.0, cumulative_quota_[n] - cumulative_satisfaction_[n]);
        // fall back to approval count, then index, when deficits give no signal
        if (score > best_score || (score == best_score && counts[j] > best_count)) {
            best_score = score;
            best_count = counts[j];
            winner = j;
        }
    }

    for (int n = 0; n < n_voters; ++n)
        if (contains(profile.approvals[n], winner)) ++cumulative_satisfaction_[n];
    return winner;
}

}  // namespace pvlab
