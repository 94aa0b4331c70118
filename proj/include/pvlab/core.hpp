#pragma once

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace pvlab {

/// Approved alternative indices, 0-based internally, sorted ascending.
/// Serialized output and documentation use 1-based indices.
using ApprovalSet = std::vector<int>;

inline bool contains(const ApprovalSet& set, int j) {
    return std::binary_search(set.begin(), set.end(), j);
}

/// Row-major dense matrix; rows are alternatives, columns feature dimensions.
struct Matrix {
    int rows = 0;
    int cols = 0;
    std::vector<double> data;

    Matrix() = default;
    Matrix(int r, int c) : rows(r), cols(c), data(static_cast<std::size_t>(r) * c, 0.0) {}

    double& at(int r, int c) { return data[static_cast<std::size_t>(r) * cols + c]; }
    double at(int r, int c) const { return data[static_cast<std::size_t>(r) * cols + c]; }
    const double* row(int r) const { return data.data() + static_cast<std::size_t>(r) * cols; }
};

/// One round's alternatives (feature vectors) and the ground-truth approvals.
struct Election {
    int round_index = 1;  // 1-based, contiguous
    Matrix features;      // m x d, entries in [0,1]
    std::vector<ApprovalSet> true_approvals;  // one set per voter

    int n_alternatives() const { return features.rows; }
    int n_voters() const { return static_cast<int>(true_approvals.size()); }

    void validate() const {
        for (double v : features.data)
            if (v < 0.0 || v > 1.0) throw std::invalid_argument("feature entry outside [0,1]");
        for (const auto& set : true_approvals)
            for (int j : set)
                if (j < 0 || j >= n_alternatives())
                    throw std::invalid_argument("approved index out of range");
    }
};

struct PresenceMask {
    std::vector<std::uint8_t> present;  // one flag per voter

    int count_present() const {
        int c = 0;
        for (auto p : present) c += p ? 1 : 0;
        return c;
    }
};

enum class Provenance : std::uint8_t { Observed, EmptyAbsent, DelegatePredicted };

/// The approval profile a rule actually sees, with per-voter provenance.
struct VisibleProfile {
    int n_alternatives = 0;
    std::vector<ApprovalSet> approvals;
    std::vector<Provenance> provenance;

    int n_voters() const { return static_cast<int>(approvals.size()); }
};

struct Round {
    Election election;
    PresenceMask presence;
    VisibleProfile visible;
    int winner = 0;  // valid alternative index of this round
};

/// Append-only history of a perpetual voting run.
struct VotingRecord {
    std::vector<Round> rounds;

    int n_rounds() const { return static_cast<int>(rounds.size()); }
    int n_voters() const { return rounds.empty() ? 0 : rounds.front().election.n_voters(); }

    void append(Round round) {
        if (round.winner < 0 || round.winner >= round.election.n_alternatives())
            throw std::invalid_argument("winner out of range for its round");
        round.election.round_index = n_rounds() + 1;
        rounds.push_back(std::move(round));
    }
};

/// True iff the winner of round t (0-based) is in the voter's ground-truth
/// approval set. Fairness is always judged against true approvals.
inline bool is_satisfied(const VotingRecord& record, int voter, int t) {
    if (t < 0 || t >= record.n_rounds()) throw std::out_of_range("round index out of range");
    const Round& round = record.rounds[t];
    if (voter < 0 || voter >= round.election.n_voters())
        throw std::out_of_range("voter index out of range");
    return contains(round.election.true_approvals[voter], round.winner);
}

}  // namespace pvlab
