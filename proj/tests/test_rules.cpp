#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "pvlab/rng.hpp"
#include "pvlab/rules.hpp"

#include <algorithm>

using namespace pvlab;

namespace {

VisibleProfile make_profile(int m, std::vector<ApprovalSet> approvals) {
    VisibleProfile p;
    p.n_alternatives = m;
    p.approvals = std::move(approvals);
    for (auto& set : p.approvals) std::sort(set.begin(), set.end());
    p.provenance.assign(p.approvals.size(), Provenance::Observed);
    return p;
}

PresenceMask all_present(int n) {
    PresenceMask mask;
    mask.present.assign(n, 1);
    return mask;
}

VisibleProfile random_profile(Rng& rng, int n, int m) {
    std::vector<ApprovalSet> approvals(n);
    for (auto& set : approvals)
        for (int j = 0; j < m; ++j)
            if (rng.bernoulli(0.4)) set.push_back(j);
    return make_profile(m, std::move(approvals));
}

}  // namespace

TEST_CASE("rule and mode round-trip through their names") {
    for (RuleId rule : {RuleId::Av, RuleId::Phragmen, RuleId::Consensus, RuleId::Quota})
        CHECK(rule_from_string(to_string(rule)) == rule);
    for (ParticipationMode mode :
         {ParticipationMode::Full, ParticipationMode::Partial, ParticipationMode::Delegated})
        CHECK(mode_from_string(to_string(mode)) == mode);
    CHECK_THROWS_AS(rule_from_string("nope"), std::invalid_argument);
}

TEST_CASE("approval voting picks the most-approved alternative, ties low") {
    CHECK(select_av(make_profile(3, {{0, 1}, {1}, {2}})) == 1);
    CHECK(select_av(make_profile(3, {{0}, {1}})) == 0);  // tie -> lowest index
    CHECK(select_av(make_profile(2, {{}, {}})) == 0);
}

TEST_CASE("phragmen score, fresh loads") {
    auto s = phragmen_score({0.0, 0.0, 0.0}, {1, 2});
    REQUIRE(s.has_value());
    CHECK(s->score == doctest::Approx(0.5).epsilon(1e-12));
    std::vector<int> set = s->minimizing_set;
    std::sort(set.begin(), set.end());
    CHECK(set == std::vector<int>{1, 2});
}

TEST_CASE("phragmen score balances against unequal loads") {
    // {1}: 1.0, {0}: 1.5, {0,1}: 0.75 -> both voters share
    auto s = phragmen_score({0.5, 0.0}, {0, 1});
    REQUIRE(s.has_value());
    CHECK(s->score == doctest::Approx(0.75).epsilon(1e-12));
    std::vector<int> set = s->minimizing_set;
    std::sort(set.begin(), set.end());
    CHECK(set == std::vector<int>{0, 1});
}

TEST_CASE("phragmen score drops a heavy voter") {
    // {1}: 1.0 beats {0,1}: (5+0+1)/2 = 3
    auto s = phragmen_score({5.0, 0.0}, {0, 1});
    REQUIRE(s.has_value());
    CHECK(s->score == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(s->minimizing_set == std::vector<int>{1});
    CHECK_FALSE(phragmen_score({1.0}, {}).has_value());
}

TEST_CASE("phragmen engine updates only the minimizing set") {
    PhragmenEngine engine(3);
    int w = engine.select(make_profile(2, {{0}, {0}, {1}}));
    CHECK(w == 0);  // score 0.5 via both approvers beats 1.0
    CHECK(engine.loads()[0] == doctest::Approx(0.5));
    CHECK(engine.loads()[1] == doctest::Approx(0.5));
    CHECK(engine.loads()[2] == doctest::Approx(0.0));
}

TEST_CASE("phragmen engine skips unapproved alternatives") {
    PhragmenEngine engine(2);
    // alternative 0 has no approvers; the approved one must win
    int w = engine.select(make_profile(2, {{1}, {1}}));
    CHECK(w == 1);
}

TEST_CASE("consensus weight update") {
    ConsensusEngine engine(3);
    int w = engine.select(make_profile(3, {{1}, {1}, {2}}));
    CHECK(w == 1);
    CHECK(engine.weights()[0] == doctest::Approx(0.5));
    CHECK(engine.weights()[1] == doctest::Approx(0.5));
    CHECK(engine.weights()[2] == doctest::Approx(2.0));
}

TEST_CASE("consensus conserves total weight across rounds") {
    Rng rng(7);
    ConsensusEngine engine(5);
    double total = 5.0;
    for (int t = 0; t < 30; ++t) {
        VisibleProfile profile = random_profile(rng, 5, 4);
        // everyone approves alternative 0, so the winner always has a
        // positively weighted approver and the update redistributes weight
        for (auto& set : profile.approvals)
            if (!contains(set, 0)) set.insert(set.begin(), 0);
        engine.select(profile);
        double sum = 0.0;
        for (double x : engine.weights()) sum += x;
        CHECK(sum == doctest::Approx(total).epsilon(1e-9));
    }
}

TEST_CASE("consensus with no positively weighted approvers anywhere") {
    ConsensusEngine engine(2);
    int w = engine.select(make_profile(3, {{}, {}}));
    CHECK(w == 0);
    CHECK(engine.weights()[0] == doctest::Approx(2.0));
    CHECK(engine.weights()[1] == doctest::Approx(2.0));
}

TEST_CASE("quota engine accrues quota and satisfaction") {
    QuotaEngine engine(3);
    int w = engine.select(make_profile(3, {{1}, {1}, {2}}), all_present(3),
                          ParticipationMode::Full);
    CHECK(w == 1);
    CHECK(engine.cumulative_quota()[0] == doctest::Approx(2.0 / 3.0));
    CHECK(engine.cumulative_quota()[1] == doctest::Approx(2.0 / 3.0));
    CHECK(engine.cumulative_quota()[2] == doctest::Approx(1.0 / 3.0));
    CHECK(engine.cumulative_satisfaction() == std::vector<int>{1, 1, 0});
}

TEST_CASE("quota partial mode divides support by the attendees") {
    QuotaEngine engine(4);
    PresenceMask mask;
    mask.present = {1, 1, 0, 0};
    engine.select(make_profile(2, {{0}, {0}, {}, {}}), mask, ParticipationMode::Partial);
    // two visible approvers over two attendees
    CHECK(engine.cumulative_quota()[0] == doctest::Approx(1.0));
    QuotaEngine full(4);
    full.select(make_profile(2, {{0}, {0}, {}, {}}), mask, ParticipationMode::Full);
    CHECK(full.cumulative_quota()[0] == doctest::Approx(0.5));
}

TEST_CASE("single-voter runs are always satisfied by every rule") {
    VisibleProfile profile = make_profile(3, {{2}});
    CHECK(select_av(profile) == 2);
    PhragmenEngine ph(1);
    CHECK(ph.select(profile) == 2);
    ConsensusEngine co(1);
    CHECK(co.select(profile) == 2);
    QuotaEngine qu(1);
    CHECK(qu.select(profile, all_present(1), ParticipationMode::Full) == 2);
}

TEST_CASE("rules are anonymous: permuting voters keeps the winner") {
    Rng rng(11);
    for (int trial = 0; trial < 50; ++trial) {
        VisibleProfile profile = random_profile(rng, 6, 4);
        VisibleProfile permuted = profile;
        std::reverse(permuted.approvals.begin(), permuted.approvals.end());
        CHECK(select_av(profile) == select_av(permuted));
        PhragmenEngine a(6), b(6);
        CHECK(a.select(profile) == b.select(permuted));
    }
}

TEST_CASE("stateful rules are deterministic replays") {
    Rng rng(23);
    std::vector<VisibleProfile> profiles;
    for (int t = 0; t < 20; ++t) profiles.push_back(random_profile(rng, 5, 4));
    PhragmenEngine pa(5), pb(5);
    ConsensusEngine ca(5), cb(5);
    QuotaEngine qa(5), qb(5);
    for (const auto& p : profiles) {
        CHECK(pa.select(p) == pb.select(p));
        CHECK(ca.select(p) == cb.select(p));
        CHECK(qa.select(p, all_present(5), ParticipationMode::Full) ==
              qb.select(p, all_present(5), ParticipationMode::Full));
    }
    CHECK(pa.loads() == pb.loads());
    CHECK(ca.weights() == cb.weights());
    CHECK(qa.cumulative_quota() == qb.cumulative_quota());
}
