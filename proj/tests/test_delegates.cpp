#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "pvlab/delegates.hpp"
#include "pvlab/rng.hpp"

#include <cmath>
#include <numeric>

using namespace pvlab;

namespace {

Matrix random_features(Rng& rng, int m, int d) {
    Matrix features(m, d);
    for (double& v : features.data) v = rng.uniform();
    return features;
}

ApprovalSet true_ballot(const std::vector<double>& w, double tau, const Matrix& features) {
    ApprovalSet approved;
    for (int j = 0; j < features.rows; ++j) {
        double u = 0.0;
        for (int i = 0; i < features.cols; ++i) u += features.at(j, i) * w[i];
        if (u > tau) approved.push_back(j);
    }
    return approved;
}

TrainingSet random_training(Rng& rng, const std::vector<double>& w, double tau, int rounds,
                            int m) {
    TrainingSet data;
    const int d = static_cast<int>(w.size());
    for (int t = 0; t < rounds; ++t) {
        Matrix features = random_features(rng, m, d);
        append_round(data, features, true_ballot(w, tau, features), ThresholdMode::Absolute);
    }
    return data;
}

}  // namespace

TEST_CASE("append_round stacks one row per alternative") {
    TrainingSet data;
    Matrix features(3, 2);
    features.at(0, 0) = 0.1;
    append_round(data, features, {0, 2}, ThresholdMode::Absolute);
    CHECK(data.size() == 3);
    CHECK(data.dim == 2);
    CHECK(data.labels == std::vector<std::uint8_t>{1, 0, 1});
    CHECK(data.row(0)[0] == doctest::Approx(0.1));
    Matrix wrong(2, 3);
    CHECK_THROWS_AS(append_round(data, wrong, {}, ThresholdMode::Absolute),
                    std::invalid_argument);
}

TEST_CASE("relative-margin rows are centered per round") {
    TrainingSet data;
    Matrix features(2, 1);
    features.at(0, 0) = 0.2;
    features.at(1, 0) = 0.8;
    append_round(data, features, {1}, ThresholdMode::RelativeMargin);
    CHECK(data.row(0)[0] == doctest::Approx(-0.3));
    CHECK(data.row(1)[0] == doctest::Approx(0.3));
}

TEST_CASE("log likelihood is log one-half per row on the decision boundary") {
    TrainingSet data;
    Matrix features(2, 2);
    features.at(0, 0) = 0.5;
    features.at(0, 1) = 0.5;
    features.at(1, 0) = 0.5;
    features.at(1, 1) = 0.5;
    append_round(data, features, {0}, ThresholdMode::Absolute);
    // <x, (0.5,0.5)> = 0.5 = tau for every row
    double ll = log_likelihood({0.5, 0.5}, 0.5, data);
    CHECK(ll == doctest::Approx(2.0 * std::log(0.5)).epsilon(1e-12));
    CHECK(log_likelihood({0.5, 0.5}, 0.5, TrainingSet{}) == doctest::Approx(0.0));
}

TEST_CASE("log likelihood is additive over rows") {
    Rng rng(3);
    std::vector<double> w = {0.3, 0.7};
    TrainingSet a = random_training(rng, w, 0.5, 2, 4);
    TrainingSet b = random_training(rng, w, 0.5, 3, 4);
    TrainingSet both = a;
    both.features.insert(both.features.end(), b.features.begin(), b.features.end());
    both.labels.insert(both.labels.end(), b.labels.begin(), b.labels.end());
    std::vector<double> probe = {0.4, 0.6};
    CHECK(log_likelihood(probe, 0.45, both) ==
          doctest::Approx(log_likelihood(probe, 0.45, a) + log_likelihood(probe, 0.45, b))
              .epsilon(1e-12));
}

TEST_CASE("analytic gradient matches central finite differences") {
    Rng rng(7);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<double> w_true = rng.dirichlet(1.0, 4);
        TrainingSet data = random_training(rng, w_true, rng.uniform(0.35, 0.65), 5, 6);
        std::vector<double> w = rng.dirichlet(1.0, 4);
        double tau = rng.uniform(0.2, 0.8);
        std::vector<double> grad_w;
        double grad_tau = 0.0;
        log_likelihood_grad(w, tau, data, grad_w, grad_tau);
        const double h = 1e-6;
        for (int i = 0; i < 4; ++i) {
            std::vector<double> hi = w, lo = w;
            hi[i] += h;
            lo[i] -= h;
            double fd = (log_likelihood(hi, tau, data) - log_likelihood(lo, tau, data)) / (2 * h);
            CHECK(grad_w[i] == doctest::Approx(fd).epsilon(1e-4));
        }
        double fd_tau =
            (log_likelihood(w, tau + h, data) - log_likelihood(w, tau - h, data)) / (2 * h);
        CHECK(grad_tau == doctest::Approx(fd_tau).epsilon(1e-4));
    }
}

TEST_CASE("simplex projection reference values and idempotence") {
    CHECK(simplex_project({2.0, 0.0, 0.0}) == std::vector<double>{1.0, 0.0, 0.0});
    auto p = simplex_project({0.6, 0.6});
    CHECK(p[0] == doctest::Approx(0.5));
    CHECK(p[1] == doctest::Approx(0.5));
    Rng rng(19);
    for (int trial = 0; trial < 1000; ++trial) {
        std::vector<double> v(5);
        for (double& x : v) x = rng.uniform(-3.0, 3.0);
        auto proj = simplex_project(v);
        double sum = 0.0;
        for (double x : proj) {
            CHECK(x >= 0.0);
            sum += x;
        }
        CHECK(sum == doctest::Approx(1.0).epsilon(1e-9));
        auto twice = simplex_project(proj);
        for (std::size_t i = 0; i < proj.size(); ++i)
            CHECK(twice[i] == doctest::Approx(proj[i]).epsilon(1e-9));
    }
}

TEST_CASE("degenerate training data falls back to sentinels") {
    Rng rng(11);
    TrainingSet empty;
    empty.dim = 3;
    LearnedPreference pref = fit(empty);
    CHECK(pref.threshold_hat == doctest::Approx(10.0));
    CHECK(predict(pref, random_features(rng, 4, 3), ThresholdMode::Absolute).empty());

    TrainingSet all_pos;
    Matrix features = random_features(rng, 4, 3);
    append_round(all_pos, features, {0, 1, 2, 3}, ThresholdMode::Absolute);
    pref = fit(all_pos);
    CHECK(pref.threshold_hat == doctest::Approx(-10.0));
    CHECK(predict(pref, features, ThresholdMode::Absolute) == ApprovalSet{0, 1, 2, 3});

    TrainingSet all_neg;
    append_round(all_neg, features, {}, ThresholdMode::Absolute);
    pref = fit(all_neg);
    CHECK(pref.threshold_hat == doctest::Approx(10.0));
    CHECK(predict(pref, features, ThresholdMode::Absolute).empty());
}

TEST_CASE("objective trace never decreases") {
    Rng rng(29);
    std::vector<double> w = rng.dirichlet(1.0, 5);
    TrainingSet data = random_training(rng, w, 0.5, 30, 8);
    LearnerConfig config;
    config.max_iters = 200;
    auto trace = fit_objective_trace(data, config);
    REQUIRE(trace.size() > 1);
    for (std::size_t i = 1; i < trace.size(); ++i)
        CHECK(trace[i] >= trace[i - 1] - 1e-9);
}

TEST_CASE("fit recovers a noiseless synthetic voter") {
    Rng rng(41);
    for (int trial = 0; trial < 5; ++trial) {
        std::vector<double> w_true = rng.dirichlet(1.0, 5);
        double tau_true = rng.uniform(0.35, 0.65);
        TrainingSet data = random_training(rng, w_true, tau_true, 100, 10);
        LearnedPreference pref = fit(data);
        double sum = std::accumulate(pref.weights_hat.begin(), pref.weights_hat.end(), 0.0);
        CHECK(sum == doctest::Approx(1.0).epsilon(1e-9));
        for (int i = 0; i < 5; ++i)
            CHECK(std::abs(pref.weights_hat[i] - w_true[i]) < 0.05);
        // held-out accuracy
        int correct = 0, total = 0;
        for (int t = 0; t < 50; ++t) {
            Matrix features = random_features(rng, 10, 5);
            ApprovalSet truth = true_ballot(w_true, tau_true, features);
            ApprovalSet guess = predict(pref, features, ThresholdMode::Absolute);
            for (int j = 0; j < 10; ++j) {
                if (contains(truth, j) == contains(guess, j)) ++correct;
                ++total;
            }
        }
        CHECK(static_cast<double>(correct) / total >= 0.95);
    }
}

TEST_CASE("relative-margin prediction keeps the ballot nonempty") {
    LearnedPreference pref;
    pref.weights_hat = {1.0};
    pref.threshold_hat = 5.0;  // unreachable margin, below the sentinel band
    Matrix features(3, 1);
    features.at(0, 0) = 0.1;
    features.at(1, 0) = 0.9;
    features.at(2, 0) = 0.4;
    CHECK(predict(pref, features, ThresholdMode::Absolute).empty());
    CHECK(predict(pref, features, ThresholdMode::RelativeMargin) == ApprovalSet{1});
}
