#include "pvlab/oracle_suite.hpp"

#include <cmath>
#include <limits>

#include "pvlab/delegates.hpp"
#include "pvlab/metrics.hpp"
#include "pvlab/rng.hpp"

namespace pvlab {

std::optional<PhragmenScore> phragmen_score_brute_force(const std::vector<double>& loads,
                                                        const std::vector<int>& approvers) {
    const int k = static_cast<int>(approvers.size());
    if (k == 0) return std::nullopt;
    double best = std::numeric_limits<double>::infinity();
    unsigned best_mask = 0;
    for (unsigned mask = 1; mask < (1u << k); ++mask) {
        double sum = 0.0;
        int size = 0;
        for (int i = 0; i < k; ++i)
            if (mask & (1u << i)) {
                sum += loads[approvers[i]];
                ++size;
            }
        const double score = (sum + 1.0) / size;
        if (score < best) {
            best = score;
            best_mask = mask;
        }
    }
    PhragmenScore result{best, {}};
    for (int i = 0; i < k; ++i)
        if (best_mask & (1u << i)) result.minimizing_set.push_back(approvers[i]);
    return result;
}

namespace {

VisibleProfile random_profile(Rng& rng, int n_voters, int m, double approve_p = 0.5) {
    VisibleProfile profile;
    profile.n_alternatives = m;
    profile.approvals.resize(n_voters);
    profile.provenance.assign(n_voters, Provenance::Observed);
    for (int n = 0; n < n_voters; ++n)
        for (int j = 0; j < m; ++j)
            if (rng.bernoulli(approve_p)) profile.approvals[n].push_back(j);
    return profile;
}

VotingRecord random_record(Rng& rng, int n_voters, int m, int rounds) {
    VotingRecord record;
    for (int t = 0; t < rounds; ++t) {
        Round round;
        round.election.features = Matrix(m, 1);
        round.election.true_approvals = random_profile(rng, n_voters, m).approvals;
        round.presence.present.assign(n_voters, 1);
        round.visible.n_alternatives = m;
        round.visible.approvals = round.election.true_approvals;
        round.visible.provenance.assign(n_voters, Provenance::Observed);
        round.winner = static_cast<int>(rng.uniform() * m);
        if (round.winner >= m) round.winner = m - 1;
        record.append(std::move(round));
    }
    return record;
}

/// Brute-force Phragmen winner with the same tie-breaking as the engine.
int phragmen_select_brute_force(std::vector<double>& loads, const VisibleProfile& profile) {
    std::vector<std::vector<int>> approvers(profile.n_alternatives);
    for (int n = 0; n < profile.n_voters(); ++n)
        for (int j : profile.approvals[n]) approvers[j].push_back(n);
    int winner = 0;
    std::optional<PhragmenScore> winning;
    for (int j = 0; j < profile.n_alternatives; ++j) {
        auto s = phragmen_score_brute_force(loads, approvers[j]);
        if (!s) continue;
        if (!winning || s->score < winning->score) {
            winning = std::move(s);
            winner = j;
        }
    }
    if (winning)
        for (int n : winning->minimizing_set) loads[n] = winning->score;
    return winner;
}

bool check(std::ostream& out, const char* name, bool ok) {
    out << (ok ? "[PASS] " : "[FAIL] ") << name << "\n";
    return ok;
}

}  // namespace

bool run_oracle_suite(std::ostream& out) {
    bool all = true;
    Rng rng(0xC0FFEE);

    {
        bool ok = true;
        for (int trial = 0; trial < 1000 && ok; ++trial) {
            const int n_voters = 2 + static_cast<int>(rng.uniform() * 5);  // <= 6
            const int m = 1 + static_cast<int>(rng.uniform() * 4);
            std::vector<double> loads(n_voters);
            for (double& l : loads) l = rng.uniform(0.0, 2.0);
            const auto profile = random_profile(rng, n_voters, m);

            std::vector<double> brute_loads = loads;
            const int brute_winner = phragmen_select_brute_force(brute_loads, profile);

            std::vector<std::vector<int>> approvers(m);
            for (int n = 0; n < n_voters; ++n)
                for (int j : profile.approvals[n]) approvers[j].push_back(n);
            int winner = 0;
            std::optional<PhragmenScore> winning;
            for (int j = 0; j < m; ++j) {
                auto fast = phragmen_score(loads, approvers[j]);
                auto brute = phragmen_score_brute_force(loads, approvers[j]);
                if (fast.has_value() != brute.has_value()) ok = false;
                if (fast && brute && std::abs(fast->score - brute->score) > 1e-12) ok = false;
                if (fast && (!winning || fast->score < winning->score)) {
                    winning = fast;
                    winner = j;
                }
            }
            if (winner != brute_winner) ok = false;
        }
        all &= check(out, "phragmen sorted-prefix score matches exhaustive subset enumeration "
                          "(1000 random instances)", ok);
    }

    {
        bool ok = true;
        for (int trial = 0; trial < 1000 && ok; ++trial) {
            const int n_voters = 2 + static_cast<int>(rng.uniform() * 7);
            const int m = 2 + static_cast<int>(rng.uniform() * 4);
            const int rounds = 1 + static_cast<int>(rng.uniform() * 12);
            const auto record = random_record(rng, n_voters, m, rounds);
            const auto qc = quota_compliance(record);
            if (std::abs(qc.qc + qc.lqnc + qc.uqnc - 1.0) > 1e-12) ok = false;
            if (std::abs(qc.lqc + qc.lqnc - 1.0) > 1e-12) ok = false;
            if (std::abs(qc.uqc + qc.uqnc - 1.0) > 1e-12) ok = false;
            const double g = gini_influence(record);
            if (g < 0.0 || g > 1.0) ok = false;
        }
        all &= check(out, "quota-compliance identities and gini range (1000 random records)", ok);
    }

    {
        bool ok = true;
        for (int trial = 0; trial < 1000 && ok; ++trial) {
            const int d = 2 + static_cast<int>(rng.uniform() * 6);
            std::vector<double> v(d);
            for (double& x : v) x = rng.uniform(-2.0, 2.0);
            const auto p = simplex_project(v);
            double sum = 0.0;
            for (double x : p) {
                if (x < -1e-12) ok = false;
                sum += x;
            }
            if (std::abs(sum - 1.0) > 1e-12) ok = false;
            const auto pp = simplex_project(p);
            for (int i = 0; i < d; ++i)
                if (std::abs(pp[i] - p[i]) > 1e-12) ok = false;
        }
        all &= check(out, "simplex projection feasibility and idempotence (1000 random inputs)",
                     ok);
    }

    {
        bool ok = true;
        for (int trial = 0; trial < 100 && ok; ++trial) {
            const int d = 5;
            TrainingSet data;
            data.dim = d;
            const int rows = 20;
            for (int r = 0; r < rows; ++r) {
                for (int i = 0; i < d; ++i) data.features.push_back(rng.uniform());
                data.labels.push_back(rng.bernoulli(0.5) ? 1 : 0);
            }
            std::vector<double> w = rng.dirichlet(1.0, d);
            const double tau = rng.uniform(-0.5, 0.5);
            std::vector<double> grad_w;
            double grad_tau = 0.0;
            log_likelihood_grad(w, tau, data, grad_w, grad_tau);
            const double h = 1e-6;
            for (int i = 0; i <= d; ++i) {
                auto wp = w;
                auto wm = w;
                double tp = tau, tm = tau;
                if (i < d) {
                    wp[i] += h;
                    wm[i] -= h;
                } else {
                    tp += h;
                    tm -= h;
                }
                const double fd =
                    (log_likelihood(wp, tp, data) - log_likelihood(wm, tm, data)) / (2 * h);
                const double an = i < d ? grad_w[i] : grad_tau;
                const double denom = std::max(1.0, std::abs(fd));
                if (std::abs(fd - an) / denom > 1e-4) ok = false;
            }
        }
        all &= check(out, "log-likelihood gradient matches central finite differences "
                          "(100 random instances)", ok);
    }

    return all;
}

}  // namespace pvlab
