#include "pvlab/delegates.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace pvlab {

namespace {

constexpr double kLogClamp = 1e-12;
constexpr double kAbstainThreshold = 10.0;

double sigmoid(double z) {
    if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
    const double e = std::exp(z);
    return e / (1.0 + e);
}

double clamped_log(double x) { return std::log(std::max(x, kLogClamp)); }

/// Objective and gradient of the logistic log-likelihood at arbitrary
/// (unconstrained) weights and intercept. Shared by the spec-surface
/// log_likelihood and the scaled fit.
double objective(const TrainingSet& data, const std::vector<double>& w, double b,
                 std::vector<double>* grad_w, double* grad_b) {
    const int d = data.dim;
    if (grad_w) std::fill(grad_w->begin(), grad_w->end(), 0.0);
    if (grad_b) *grad_b = 0.0;
    double ll = 0.0;
    for (std::size_t r = 0; r < data.size(); ++r) {
        const double* x = data.row(r);
        double z = -b;
        for (int i = 0; i < d; ++i) z += x[i] * w[i];
        const double s = sigmoid(z);
        const double y = data.labels[r] ? 1.0 : 0.0;
        ll += y * clamped_log(s) + (1.0 - y) * clamped_log(1.0 - s);
        if (grad_w) {
            const double res = y - s;
            for (int i = 0; i < d; ++i) (*grad_w)[i] += res * x[i];
            *grad_b -= res;
        }
    }
    return ll;
}

struct FitResult {
    LearnedPreference pref;
    std::vector<double> trace;
};

FitResult fit_impl(const TrainingSet& data, const LearnerConfig& config, bool keep_trace) {
    FitResult out;
    LearnedPreference& pref = out.pref;
    const int d = data.dim;
    pref.weights_hat.assign(std::max(d, 1), 1.0 / std::max(d, 1));

    if (data.size() == 0) {
        pref.threshold_hat = kAbstainThreshold;
        pref.converged = true;
        return out;
    }
    const bool any_pos = std::find(data.labels.begin(), data.labels.end(), 1) != data.labels.end();
    const bool any_neg = std::find(data.labels.begin(), data.labels.end(), 0) != data.labels.end();
    if (!any_pos || !any_neg) {
        pref.threshold_hat = any_pos ? -kAbstainThreshold : kAbstainThreshold;
        pref.converged = true;
        pref.final_objective = log_likelihood(pref.weights_hat, pref.threshold_hat, data);
        return out;
    }

    std::vector<double> v(d, 1.0 / d);
    double b = 0.0;
    std::vector<double> grad_v(d);
    double grad_b = 0.0;
    double step = 1.0;
    double ll = objective(data, v, b, &grad_v, &grad_b);
    if (keep_trace) out.trace.push_back(ll);

    std::vector<double> v_next(d);
    for (int iter = 0; iter < config.max_iters; ++iter) {
        double t = step;
        double ll_next = ll;
        double b_next = b;
        for (int bt = 0; bt < 60; ++bt) {
            double directional = 0.0;
            for (int i = 0; i < d; ++i) {
                v_next[i] = std::max(v[i] + t * grad_v[i], 0.0);
                directional += grad_v[i] * (v_next[i] - v[i]);
            }
            b_next = b + t * grad_b;
            directional += grad_b * (b_next - b);
            ll_next = objective(data, v_next, b_next, nullptr, nullptr);
            if (ll_next >= ll + 1e-4 * directional) break;  // Armijo
            t *= 0.5;
        }
        double move_sq = (b_next - b) * (b_next - b);
        for (int i = 0; i < d; ++i) move_sq += (v_next[i] - v[i]) * (v_next[i] - v[i]);
        const double projected_grad_norm = std::sqrt(move_sq) / std::max(t, 1e-300);

        v.swap(v_next);
        b = b_next;
        step = std::min(t * 2.0, 1e6);
        ll = objective(data, v, b, &grad_v, &grad_b);
        if (keep_trace) out.trace.push_back(ll);
        if (projected_grad_norm < config.grad_tol) {
            pref.converged = true;
            break;
        }
    }

    const double scale = std::accumulate(v.begin(), v.end(), 0.0);
    if (scale <= 0.0) {
        pref.weights_hat.assign(d, 1.0 / d);
        pref.threshold_hat = kAbstainThreshold;
        pref.converged = true;
    } else {
        for (int i = 0; i < d; ++i) pref.weights_hat[i] = v[i] / scale;
        pref.threshold_hat = b / scale;
    }
    pref.final_objective = ll;
    return out;
}

}  // namespace

void append_round(TrainingSet& data, const Matrix& features, const ApprovalSet& approvals,
                  ThresholdMode mode) {
    if (data.dim == 0) data.dim = features.cols;
    if (data.dim != features.cols) throw std::invalid_argument("feature dimension mismatch");
    const int m = features.rows;
    std::vector<double> col_mean(features.cols, 0.0);
    if (mode == ThresholdMode::RelativeMargin && m > 0) {
        for (int j = 0; j < m; ++j)
            for (int i = 0; i < features.cols; ++i) col_mean[i] += features.at(j, i);
        for (double& c : col_mean) c /= m;
    }
    for (int j = 0; j < m; ++j) {
        for (int i = 0; i < features.cols; ++i)
            data.features.push_back(features.at(j, i) - col_mean[i]);
        data.labels.push_back(contains(approvals, j) ? 1 : 0);
    }
}

double log_likelihood(const std::vector<double>& weights, double threshold,
                      const TrainingSet& data) {
    if (data.size() == 0) return 0.0;
    if (static_cast<int>(weights.size()) != data.dim)
        throw std::invalid_argument("weight dimension mismatch");
    return objective(data, weights, threshold, nullptr, nullptr);
}

void log_likelihood_grad(const std::vector<double>& weights, double threshold,
                         const TrainingSet& data, std::vector<double>& grad_w,
                         double& grad_tau) {
    grad_w.assign(weights.size(), 0.0);
    grad_tau = 0.0;
    if (data.size() == 0) return;
    objective(data, weights, threshold, &grad_w, &grad_tau);
}

std::vector<double> simplex_project(const std::vector<double>& v) {
    const int d = static_cast<int>(v.size());
    std::vector<double> u = v;
    std::sort(u.begin(), u.end(), std::greater<double>());
    double cumulative = 0.0;
    double theta = 0.0;
    int rho = 0;
    for (int i = 0; i < d; ++i) {
        cumulative += u[i];
        const double candidate = (cumulative - 1.0) / (i + 1);
        if (u[i] - candidate > 0.0) {
            rho = i + 1;
            theta = candidate;
        }
    }
    (void)rho;
    std::vector<double> out(d);
    for (int i = 0; i < d; ++i) out[i] = std::max(v[i] - theta, 0.0);
    return out;
}

LearnedPreference fit(const TrainingSet& data, const LearnerConfig& config) {
    return fit_impl(data, config, false).pref;
}

std::vector<double> fit_objective_trace(const TrainingSet& data, const LearnerConfig& config) {
    return fit_impl(data, config, true).trace;
}

ApprovalSet predict(const LearnedPreference& pref, const Matrix& features, ThresholdMode mode) {
    if (features.cols != static_cast<int>(pref.weights_hat.size()))
        throw std::invalid_argument("feature dimension does not match learned weights");
    const int m = features.rows;
    ApprovalSet approved;
    if (pref.threshold_hat >= kAbstainThreshold - 0.5) return approved;
    if (pref.threshold_hat <= -(kAbstainThreshold - 0.5)) {
        for (int j = 0; j < m; ++j) approved.push_back(j);
        return approved;
    }

    std::vector<double> utility(m);
    for (int j = 0; j < m; ++j) {
        double u = 0.0;
        const double* x = features.row(j);
        for (int i = 0; i < features.cols; ++i) u += x[i] * pref.weights_hat[i];
        utility[j] = u;
    }
    if (mode == ThresholdMode::RelativeMargin && m > 0) {
        const double mean = std::accumulate(utility.begin(), utility.end(), 0.0) / m;
        for (double& u : utility) u -= mean;
    }
    for (int j = 0; j < m; ++j)
        if (utility[j] >= pref.threshold_hat) approved.push_back(j);
    if (mode == ThresholdMode::RelativeMargin && approved.empty() && m > 0) {
        int best = 0;
        for (int j = 1; j < m; ++j)
            if (utility[j] > utility[best]) best = j;
        approved.push_back(best);
    }
    return approved;
}

}  // namespace pvlab
